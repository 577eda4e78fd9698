//! Everything between entropy decoding and pixels: DC reconstruction,
//! de-zig-zag, dequantization, inverse DCT and plane assembly.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::parser::{ChromaSampling, FrameInfo, QuantTable};
use crate::scan::segmented_inclusive_scan;

/// Natural (row-major) index of each zig-zag position.
pub const ZIGZAG: [usize; 64] = [
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5, 12, 19, 26, 33, 40, 48, 41, 34, 27,
    20, 13, 6, 7, 14, 21, 28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51, 58,
    59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
];

/// Coefficients of all data units in coding order, 64 per unit, zig-zag
/// order within a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientBuffer {
    values: Vec<i16>,
}

impl CoefficientBuffer {
    pub fn new(values: Vec<i16>) -> Self {
        assert_eq!(values.len() % 64, 0, "partial data unit");
        CoefficientBuffer { values }
    }

    pub fn zeroed(data_units: usize) -> Self {
        CoefficientBuffer {
            values: vec![0; data_units * 64],
        }
    }

    pub fn data_units(&self) -> usize {
        self.values.len() / 64
    }

    pub fn unit(&self, i: usize) -> &[i16] {
        &self.values[i * 64..(i + 1) * 64]
    }

    pub fn values(&self) -> &[i16] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [i16] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<i16> {
        self.values
    }
}

/// Turns difference-coded DC values into absolute ones, independently for
/// each component in coding order. Arithmetic wraps at 16 bits.
pub fn dc_prefix_sum(buffer: &mut CoefficientBuffer, frame: &FrameInfo) {
    let layout = frame.unit_layout();
    let group_len = layout.len() * 64;
    let chain_of: Vec<Option<usize>> = (0..group_len)
        .map(|i| (i % 64 == 0).then_some(layout[i / 64]))
        .collect();
    segmented_inclusive_scan(
        &mut buffer.values,
        group_len,
        &chain_of,
        frame.components.len(),
    );
}

/// Reorders one zig-zag block into row-major order.
pub fn dezigzag(block: &[i16]) -> [i16; 64] {
    let mut out = [0i16; 64];
    for (k, &v) in block.iter().take(64).enumerate() {
        out[ZIGZAG[k]] = v;
    }
    out
}

/// Multiplies a row-major block by a quantization table (stored zig-zag).
pub fn dequantize(block: &[i16; 64], quant: &QuantTable) -> [i32; 64] {
    let mut out = [0i32; 64];
    for (k, &q) in quant.entries.iter().enumerate() {
        let n = ZIGZAG[k];
        out[n] = block[n] as i32 * q as i32;
    }
    out
}

fn basis() -> &'static [[f64; 8]; 8] {
    static BASIS: OnceLock<[[f64; 8]; 8]> = OnceLock::new();
    // basis[x][u] = C(u)/2 * cos((2x+1) u pi / 16)
    BASIS.get_or_init(|| {
        let mut t = [[0.0; 8]; 8];
        for (x, row) in t.iter_mut().enumerate() {
            for (u, v) in row.iter_mut().enumerate() {
                let c = if u == 0 { std::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
                *v = c / 2.0 * ((2 * x + 1) as f64 * u as f64 * PI / 16.0).cos();
            }
        }
        t
    })
}

/// Separable 8x8 inverse DCT without level shift or rounding. Input and
/// output are row-major, input indexed `[v * 8 + u]`.
pub fn idct_8x8_f64(block: &[f64; 64]) -> [f64; 64] {
    if block[1..].iter().all(|&c| c == 0.0) {
        return [block[0] / 8.0; 64];
    }
    let b = basis();
    let mut tmp = [0.0f64; 64];
    for v in 0..8 {
        let row = &block[v * 8..v * 8 + 8];
        if row.iter().all(|&c| c == 0.0) {
            continue;
        }
        for x in 0..8 {
            let mut acc = 0.0;
            for u in 0..8 {
                acc += b[x][u] * row[u];
            }
            tmp[v * 8 + x] = acc;
        }
    }
    let mut out = [0.0f64; 64];
    for y in 0..8 {
        for x in 0..8 {
            let mut acc = 0.0;
            for v in 0..8 {
                acc += b[y][v] * tmp[v * 8 + x];
            }
            out[y * 8 + x] = acc;
        }
    }
    out
}

/// Converts IDCT output to samples: round half away from zero, add 128, clamp.
#[inline]
pub fn to_sample(value: f64) -> u8 {
    (value.round() + 128.0).clamp(0.0, 255.0) as u8
}

/// An 8x8 block of reconstructed samples, row-major.
pub type SampleBlock = [u8; 64];

/// Inverse DCT of a dequantized row-major block into samples.
pub fn idct_8x8(block: &[i32; 64]) -> SampleBlock {
    let mut f = [0.0f64; 64];
    for (d, &s) in f.iter_mut().zip(block) {
        *d = s as f64;
    }
    let spatial = idct_8x8_f64(&f);
    let mut out = [0u8; 64];
    for (o, v) in out.iter_mut().zip(spatial) {
        *o = to_sample(v);
    }
    out
}

/// De-zig-zag, dequantize and inverse transform one data unit, returning
/// the spatial values before level shift and rounding.
#[inline]
pub fn reconstruct_unit_f64(coefficients: &[i16], quant: &QuantTable) -> [f64; 64] {
    let mut f = [0.0f64; 64];
    for (k, (&c, &q)) in coefficients.iter().zip(&quant.entries).enumerate() {
        if c != 0 {
            f[ZIGZAG[k]] = c as f64 * q as f64;
        }
    }
    idct_8x8_f64(&f)
}

/// [`reconstruct_unit_f64`] followed by conversion to samples.
#[inline]
pub fn reconstruct_unit(coefficients: &[i16], quant: &QuantTable, out: &mut [u8]) {
    let spatial = reconstruct_unit_f64(coefficients, quant);
    for (o, v) in out.iter_mut().zip(spatial) {
        *o = to_sample(v);
    }
}

/// Reconstructs the samples of every data unit (64 bytes each, coding order)
/// from absolute coefficients.
pub fn reconstruct_units(
    buffer: &CoefficientBuffer,
    frame: &FrameInfo,
    quant: &[QuantTable],
) -> Vec<u8> {
    let layout = frame.unit_layout();
    let per_mcu = layout.len();
    let mut samples = vec![0u8; buffer.values.len()];
    samples
        .par_chunks_mut(64 * per_mcu)
        .zip(buffer.values.par_chunks(64 * per_mcu))
        .for_each(|(dst, src)| {
            for (u, &k) in layout.iter().enumerate() {
                let r = u * 64..(u + 1) * 64;
                reconstruct_unit(&src[r.clone()], &quant[k], &mut dst[r]);
            }
        });
    samples
}

/// One image component at its own resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl Plane {
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }
}

/// Component planes cropped to the image size (chroma at its subsampled size).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImagePlanes {
    pub width: usize,
    pub height: usize,
    pub sampling: ChromaSampling,
    pub planes: Vec<Plane>,
}

/// Scatters data-unit samples into cropped component planes.
pub fn extract_planes(samples: &[u8], frame: &FrameInfo) -> ImagePlanes {
    let per_mcu = frame.data_units_per_mcu;
    let mut first_unit = 0;
    let planes = frame
        .components
        .iter()
        .enumerate()
        .map(|(k, comp)| {
            let (h, v) = (comp.h_sampling as usize, comp.v_sampling as usize);
            let (width, height) = frame.plane_size(k);
            let unit0 = first_unit;
            first_unit += h * v;
            let mut data = vec![0u8; width * height];
            data.par_chunks_mut(width * 8)
                .enumerate()
                .for_each(|(block_row, band)| {
                    let (my, vb) = (block_row / v, block_row % v);
                    let rows = band.len() / width;
                    for mx in 0..frame.mcus_x {
                        for hb in 0..h {
                            let x0 = (mx * h + hb) * 8;
                            if x0 >= width {
                                break;
                            }
                            let cols = (width - x0).min(8);
                            let unit = (my * frame.mcus_x + mx) * per_mcu + unit0 + vb * h + hb;
                            let block = &samples[unit * 64..unit * 64 + 64];
                            for y in 0..rows {
                                band[y * width + x0..y * width + x0 + cols]
                                    .copy_from_slice(&block[y * 8..y * 8 + cols]);
                            }
                        }
                    }
                });
            Plane {
                width,
                height,
                data,
            }
        })
        .collect();
    ImagePlanes {
        width: frame.width,
        height: frame.height,
        sampling: frame.sampling,
        planes,
    }
}
