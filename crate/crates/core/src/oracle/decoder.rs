//! Straightforward sequential reference decoder.
//!
//! Shares only the header parser with the production path. Bits are pulled
//! one at a time from the stuffed file bytes, codes are matched with the
//! min/max-code procedure, and the IDCT is the direct quadruple sum.

use std::f64::consts::PI;

use super::tables::zigzag_order;
use crate::error::{DecodeError, Result};
use crate::parallel::SyncState;
use crate::parser::{parse, FrameInfo, HuffmanTableSpec, ParsedJpeg};

struct StuffedBits<'a> {
    bytes: &'a [u8],
    next_byte: usize,
    current: u8,
    bits_left: u8,
    position: usize,
}

impl<'a> StuffedBits<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        StuffedBits {
            bytes,
            next_byte: 0,
            current: 0,
            bits_left: 0,
            position: 0,
        }
    }

    fn fetch(&mut self) -> Option<u8> {
        let b = *self.bytes.get(self.next_byte)?;
        if b == 0xFF {
            if self.bytes.get(self.next_byte + 1) != Some(&0x00) {
                return None;
            }
            self.next_byte += 2;
        } else {
            self.next_byte += 1;
        }
        Some(b)
    }

    fn bit(&mut self) -> Result<u32> {
        if self.bits_left == 0 {
            self.current = self.fetch().ok_or(DecodeError::OutOfBits {
                position: self.position,
            })?;
            self.bits_left = 8;
        }
        self.bits_left -= 1;
        self.position += 1;
        Ok(((self.current >> self.bits_left) & 1) as u32)
    }

    fn bits(&mut self, n: u32) -> Result<u32> {
        let mut v = 0;
        for _ in 0..n {
            v = (v << 1) | self.bit()?;
        }
        Ok(v)
    }

    /// Total number of unstuffed payload bits up to the next marker.
    fn total_bits(&self) -> usize {
        let mut probe = StuffedBits::new(self.bytes);
        let mut n = 0;
        while probe.fetch().is_some() {
            n += 8;
        }
        n
    }
}

struct CodeBook {
    max_code: [i32; 17],
    min_code: [i32; 17],
    first_index: [usize; 17],
    symbols: Vec<u8>,
}

impl CodeBook {
    fn new(spec: &HuffmanTableSpec) -> Self {
        let mut max_code = [-1i32; 17];
        let mut min_code = [0i32; 17];
        let mut first_index = [0usize; 17];
        let mut code = 0i32;
        let mut index = 0usize;
        for l in 1..=16 {
            let n = spec.counts[l - 1] as usize;
            if n > 0 {
                first_index[l] = index;
                min_code[l] = code;
                code += n as i32;
                index += n;
                max_code[l] = code - 1;
            }
            code <<= 1;
        }
        CodeBook {
            max_code,
            min_code,
            first_index,
            symbols: spec.symbols.clone(),
        }
    }

    fn decode(&self, bits: &mut StuffedBits) -> Result<u8> {
        let start = bits.position;
        let mut code = bits.bit()? as i32;
        let mut l = 1;
        while code > self.max_code[l] {
            l += 1;
            if l > 16 {
                return Err(DecodeError::InvalidCode { position: start });
            }
            code = (code << 1) | bits.bit()? as i32;
        }
        Ok(self.symbols[self.first_index[l] + (code - self.min_code[l]) as usize])
    }
}

fn extend(v: u32, n: u32) -> i16 {
    if n == 0 {
        0
    } else if v < 1 << (n - 1) {
        (v as i32 - (1 << n) + 1) as i16
    } else {
        v as i16
    }
}

/// Result of a sequential decode.
#[derive(Clone, Debug)]
pub struct OracleTrace {
    pub frame: FrameInfo,
    /// Zig-zag coefficients, DC difference-coded.
    pub coefficients: Vec<i16>,
    /// Zig-zag coefficients with absolute DC.
    pub absolute: Vec<i16>,
    /// Decoder state at the first syntax element starting at or after each
    /// requested boundary; `count` is absolute. Boundaries after the last
    /// element map to the end-of-data state.
    pub snapshots: Vec<SyncState>,
    /// Bit position of every syntax element.
    pub symbol_starts: Vec<usize>,
    /// Bit position after the last syntax element.
    pub end_of_symbols: usize,
    pub bit_length: usize,
}

/// Decodes a file sequentially, recording the decoder state at each of the
/// sorted `boundaries` (unstuffed bit positions).
pub fn oracle_decode(file: &[u8], boundaries: &[usize]) -> Result<OracleTrace> {
    let parsed = parse(file)?;
    oracle_decode_parsed(file, &parsed, boundaries)
}

pub fn oracle_decode_parsed(
    file: &[u8],
    parsed: &ParsedJpeg,
    boundaries: &[usize],
) -> Result<OracleTrace> {
    let frame = parsed.frame.clone();
    let books: Vec<(CodeBook, CodeBook)> = (0..frame.components.len())
        .map(|k| (CodeBook::new(parsed.dc_table(k)), CodeBook::new(parsed.ac_table(k))))
        .collect();
    let mut layout = Vec::new();
    for (k, c) in frame.components.iter().enumerate() {
        for _ in 0..c.h_sampling as usize * c.v_sampling as usize {
            layout.push(k);
        }
    }

    let mut bits = StuffedBits::new(&file[parsed.scan_offset..]);
    let bit_length = bits.total_bits();
    let units = frame.mcus_x * frame.mcus_y * layout.len();
    let mut coefficients = vec![0i16; units * 64];
    let mut absolute = vec![0i16; units * 64];
    let mut predictors = vec![0i16; frame.components.len()];
    let mut snapshots = Vec::with_capacity(boundaries.len());
    let mut symbol_starts = Vec::new();
    let mut next_boundary = 0;

    for du in 0..units {
        let unit = du % layout.len();
        let k = layout[unit];
        let (dc, ac) = &books[k];
        let block = &mut coefficients[du * 64..du * 64 + 64];
        let mut z = 0usize;
        while z < 64 {
            let here = bits.position;
            while next_boundary < boundaries.len() && boundaries[next_boundary] <= here {
                snapshots.push(SyncState {
                    bit_pos: here,
                    count: du * 64 + z,
                    unit: unit as u8,
                    zigzag: z as u8,
                });
                next_boundary += 1;
            }
            symbol_starts.push(here);
            if z == 0 {
                let l = dc.decode(&mut bits)? as u32;
                if l > 11 {
                    return Err(DecodeError::InvalidCode { position: here });
                }
                block[0] = extend(bits.bits(l)?, l);
                z = 1;
            } else {
                let rs = ac.decode(&mut bits)?;
                let (r, s) = ((rs >> 4) as usize, (rs & 15) as u32);
                if s == 0 {
                    if r == 15 && z + 16 <= 64 {
                        z += 16;
                    } else if r == 0 {
                        z = 64;
                    } else {
                        return Err(DecodeError::InvalidCode { position: here });
                    }
                } else {
                    z += r;
                    if z > 63 || s > 10 {
                        return Err(DecodeError::InvalidCode { position: here });
                    }
                    block[z] = extend(bits.bits(s)?, s);
                    z += 1;
                }
            }
        }
        let abs = &mut absolute[du * 64..du * 64 + 64];
        abs.copy_from_slice(block);
        predictors[k] = predictors[k].wrapping_add(block[0]);
        abs[0] = predictors[k];
    }

    let end_of_symbols = bits.position;
    for &b in &boundaries[next_boundary..] {
        let bit_pos = if b <= end_of_symbols {
            end_of_symbols
        } else {
            bit_length
        };
        snapshots.push(SyncState {
            bit_pos,
            count: units * 64,
            unit: 0,
            zigzag: 0,
        });
    }

    Ok(OracleTrace {
        frame,
        coefficients,
        absolute,
        snapshots,
        symbol_starts,
        end_of_symbols,
        bit_length,
    })
}

/// Direct evaluation of the 2-D inverse DCT, `block[v * 8 + u]`.
pub fn naive_idct(block: &[f64; 64]) -> [f64; 64] {
    let c = |k: usize| if k == 0 { 1.0 / 2f64.sqrt() } else { 1.0 };
    let mut out = [0.0; 64];
    for y in 0..8 {
        for x in 0..8 {
            let mut acc = 0.0;
            for v in 0..8 {
                for u in 0..8 {
                    acc += c(u)
                        * c(v)
                        * block[v * 8 + u]
                        * ((2 * x + 1) as f64 * u as f64 * PI / 16.0).cos()
                        * ((2 * y + 1) as f64 * v as f64 * PI / 16.0).cos();
                }
            }
            out[y * 8 + x] = acc / 4.0;
        }
    }
    out
}

/// Intermediate results of the reference reconstruction, one entry per data
/// unit in coding order.
#[derive(Clone, Debug)]
pub struct OracleStages {
    pub trace: OracleTrace,
    pub dezigzagged: Vec<[i32; 64]>,
    pub dequantized: Vec<[i32; 64]>,
    pub samples: Vec<[u8; 64]>,
    /// Cropped component planes as (width, height, samples).
    pub planes: Vec<(usize, usize, Vec<u8>)>,
}

pub fn oracle_stages(file: &[u8]) -> Result<OracleStages> {
    let parsed = parse(file)?;
    let trace = oracle_decode_parsed(file, &parsed, &[])?;
    let frame = &trace.frame;
    let zz = zigzag_order();
    let mut layout = Vec::new();
    for (k, c) in frame.components.iter().enumerate() {
        for _ in 0..c.h_sampling as usize * c.v_sampling as usize {
            layout.push(k);
        }
    }

    let units = trace.absolute.len() / 64;
    let mut dezigzagged = Vec::with_capacity(units);
    let mut dequantized = Vec::with_capacity(units);
    let mut samples = Vec::with_capacity(units);
    for du in 0..units {
        let k = layout[du % layout.len()];
        let q = &parsed.component_quant[k].entries;
        let mut natural = [0i32; 64];
        let mut deq = [0i32; 64];
        for i in 0..64 {
            natural[zz[i]] = trace.absolute[du * 64 + i] as i32;
            deq[zz[i]] = trace.absolute[du * 64 + i] as i32 * q[i] as i32;
        }
        let mut f = [0.0; 64];
        for i in 0..64 {
            f[i] = deq[i] as f64;
        }
        let spatial = naive_idct(&f);
        let mut s = [0u8; 64];
        for i in 0..64 {
            s[i] = (spatial[i].round() + 128.0).clamp(0.0, 255.0) as u8;
        }
        dezigzagged.push(natural);
        dequantized.push(deq);
        samples.push(s);
    }

    let mut planes = Vec::new();
    let mut unit_offset = 0;
    for (k, c) in frame.components.iter().enumerate() {
        let (h, v) = (c.h_sampling as usize, c.v_sampling as usize);
        let w = (frame.width * h).div_ceil(frame.h_max);
        let ht = (frame.height * v).div_ceil(frame.v_max);
        let mut data = vec![0u8; w * ht];
        for y in 0..ht {
            for x in 0..w {
                let mcu = (y / (8 * v)) * frame.mcus_x + x / (8 * h);
                let (by, bx) = ((y % (8 * v)) / 8, (x % (8 * h)) / 8);
                let du = mcu * layout.len() + unit_offset + by * h + bx;
                data[y * w + x] = samples[du][(y % 8) * 8 + x % 8];
            }
        }
        let _ = k;
        planes.push((w, ht, data));
        unit_offset += h * v;
    }

    Ok(OracleStages {
        trace,
        dezigzagged,
        dequantized,
        samples,
        planes,
    })
}

/// Nearest-neighbour chroma upsampling followed by the JFIF YCbCr to RGB
/// conversion, computed per pixel from the reference planes.
pub fn oracle_rgb(frame: &FrameInfo, planes: &[(usize, usize, Vec<u8>)]) -> Vec<u8> {
    let mut out = Vec::with_capacity(frame.width * frame.height * 3);
    for y in 0..frame.height {
        for x in 0..frame.width {
            if planes.len() == 1 {
                let g = planes[0].2[y * planes[0].0 + x];
                out.extend_from_slice(&[g, g, g]);
                continue;
            }
            let sample = |k: usize| {
                let c = &frame.components[k];
                let px = x * c.h_sampling as usize / frame.h_max;
                let py = y * c.v_sampling as usize / frame.v_max;
                planes[k].2[py * planes[k].0 + px] as f64
            };
            let (yy, cb, cr) = (sample(0), sample(1) - 128.0, sample(2) - 128.0);
            let px = |v: f64| v.round().clamp(0.0, 255.0) as u8;
            out.push(px(yy + 1.402 * cr));
            out.push(px(yy - 0.344136 * cb - 0.714136 * cr));
            out.push(px(yy + 1.772 * cb));
        }
    }
    out
}
