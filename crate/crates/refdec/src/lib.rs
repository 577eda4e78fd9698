//! Reference decodes through the system libjpeg, used as ground truth in
//! tests. Block smoothing and fancy upsampling are disabled.

use std::ffi::{c_char, c_int, c_uchar, c_ulong};

const MAX_COMPONENTS: usize = 10;

extern "C" {
    fn refdec_decode_pixels(
        data: *const c_uchar,
        len: c_ulong,
        want_rgb: c_int,
        float_idct: c_int,
        out: *mut *mut c_uchar,
        width: *mut c_int,
        height: *mut c_int,
        channels: *mut c_int,
        msg: *mut c_char,
        msg_len: c_int,
    ) -> c_int;

    fn refdec_decode_planes(
        data: *const c_uchar,
        len: c_ulong,
        float_idct: c_int,
        out: *mut *mut c_uchar,
        components: *mut c_int,
        plane_widths: *mut c_int,
        plane_heights: *mut c_int,
        msg: *mut c_char,
        msg_len: c_int,
    ) -> c_int;

    fn refdec_free(p: *mut c_uchar);
}

/// Inverse DCT used by the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdctMethod {
    /// Accurate fixed-point transform, the library default.
    IntegerSlow,
    /// Floating-point transform.
    Float,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pixels {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefPlane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

fn message(buf: &[c_char]) -> String {
    let bytes: Vec<u8> = buf.iter().take_while(|&&c| c != 0).map(|&c| c as u8).collect();
    String::from_utf8_lossy(&bytes).into_owned()
}

/// Full-resolution RGB (or gray) pixels with replicated chroma.
pub fn decode_pixels(file: &[u8], rgb: bool, idct: IdctMethod) -> Result<Pixels, String> {
    let mut out = std::ptr::null_mut();
    let (mut w, mut h, mut c) = (0, 0, 0);
    let mut msg = [0 as c_char; 256];
    // SAFETY: all pointers are valid for the call; the shim only reads `file`
    let rc = unsafe {
        refdec_decode_pixels(
            file.as_ptr(),
            file.len() as c_ulong,
            rgb as c_int,
            (idct == IdctMethod::Float) as c_int,
            &mut out,
            &mut w,
            &mut h,
            &mut c,
            msg.as_mut_ptr(),
            msg.len() as c_int,
        )
    };
    if rc != 0 {
        return Err(message(&msg));
    }
    let len = w as usize * h as usize * c as usize;
    // SAFETY: on success `out` holds exactly `len` bytes allocated by the shim
    let data = unsafe { std::slice::from_raw_parts(out, len).to_vec() };
    unsafe { refdec_free(out) };
    Ok(Pixels {
        width: w as usize,
        height: h as usize,
        channels: c as usize,
        data,
    })
}

/// Component planes at native resolution, cropped to the image.
pub fn decode_planes(file: &[u8], idct: IdctMethod) -> Result<Vec<RefPlane>, String> {
    let mut out = std::ptr::null_mut();
    let mut n = 0;
    let mut widths = [0 as c_int; MAX_COMPONENTS];
    let mut heights = [0 as c_int; MAX_COMPONENTS];
    let mut msg = [0 as c_char; 256];
    // SAFETY: as above; the size arrays hold the library's component maximum
    let rc = unsafe {
        refdec_decode_planes(
            file.as_ptr(),
            file.len() as c_ulong,
            (idct == IdctMethod::Float) as c_int,
            &mut out,
            &mut n,
            widths.as_mut_ptr(),
            heights.as_mut_ptr(),
            msg.as_mut_ptr(),
            msg.len() as c_int,
        )
    };
    if rc != 0 {
        return Err(message(&msg));
    }
    let mut planes = Vec::new();
    let mut offset = 0;
    for k in 0..n as usize {
        let (pw, ph) = (widths[k] as usize, heights[k] as usize);
        // SAFETY: the shim lays out the planes back to back
        let data = unsafe { std::slice::from_raw_parts(out.add(offset), pw * ph).to_vec() };
        offset += pw * ph;
        planes.push(RefPlane {
            width: pw,
            height: ph,
            data,
        });
    }
    unsafe { refdec_free(out) };
    Ok(planes)
}
