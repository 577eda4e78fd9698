//! Minimal baseline encoder used to manufacture test files with known
//! coefficients.

use std::f64::consts::PI;

use super::tables::{self, scaled_quant, zigzag_order};
use crate::parser::{ChromaSampling, HuffmanTableSpec};

/// Interleaved 8-bit image, one or three channels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceImage {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct EncodedImage {
    pub bytes: Vec<u8>,
    /// Quantized coefficients in coding order, zig-zag within each data unit,
    /// absolute DC.
    pub coefficients: Vec<i16>,
}

struct BitWriter {
    out: Vec<u8>,
    acc: u64,
    n: u32,
}

impl BitWriter {
    fn put(&mut self, value: u32, len: u32) {
        if len == 0 {
            return;
        }
        self.acc = (self.acc << len) | (value as u64 & ((1u64 << len) - 1));
        self.n += len;
        while self.n >= 8 {
            self.n -= 8;
            let byte = (self.acc >> self.n) as u8;
            self.out.push(byte);
            if byte == 0xFF {
                self.out.push(0x00);
            }
        }
    }

    fn finish(mut self) -> Vec<u8> {
        if self.n > 0 {
            let pad = 8 - self.n;
            self.put((1 << pad) - 1, pad);
        }
        self.out
    }
}

struct EncodeTable {
    code: [u16; 256],
    len: [u8; 256],
}

impl EncodeTable {
    fn new(spec: &HuffmanTableSpec) -> Self {
        let mut t = EncodeTable {
            code: [0; 256],
            len: [0; 256],
        };
        let mut code = 0u16;
        let mut i = 0;
        for l in 1..=16u8 {
            for _ in 0..spec.counts[l as usize - 1] {
                let s = spec.symbols[i] as usize;
                t.code[s] = code;
                t.len[s] = l;
                code += 1;
                i += 1;
            }
            code <<= 1;
        }
        t
    }

    fn emit(&self, w: &mut BitWriter, symbol: u8) {
        let len = self.len[symbol as usize];
        assert!(len > 0, "symbol {symbol:#x} has no code");
        w.put(self.code[symbol as usize] as u32, len as u32);
    }
}

fn magnitude(v: i32) -> (u32, u32) {
    let l = 32 - v.unsigned_abs().leading_zeros();
    let bits = if v < 0 { v + (1 << l) - 1 } else { v };
    (l, bits as u32)
}

fn fdct(block: &[f64; 64]) -> [f64; 64] {
    let c = |k: usize| if k == 0 { 1.0 / 2f64.sqrt() } else { 1.0 };
    let mut cos = [[0.0; 8]; 8];
    for (x, row) in cos.iter_mut().enumerate() {
        for (u, v) in row.iter_mut().enumerate() {
            *v = ((2 * x + 1) as f64 * u as f64 * PI / 16.0).cos();
        }
    }
    let mut out = [0.0; 64];
    for v in 0..8 {
        for u in 0..8 {
            let mut acc = 0.0;
            for y in 0..8 {
                for x in 0..8 {
                    acc += block[y * 8 + x] * cos[x][u] * cos[y][v];
                }
            }
            out[v * 8 + u] = acc * c(u) * c(v) / 4.0;
        }
    }
    out
}

fn push_segment(out: &mut Vec<u8>, marker: u8, body: &[u8]) {
    out.extend_from_slice(&[0xFF, marker]);
    out.extend_from_slice(&((body.len() + 2) as u16).to_be_bytes());
    out.extend_from_slice(body);
}

/// Encodes `image` as a single-scan baseline file with the standard tables
/// scaled to `quality`.
pub fn oracle_encode(image: &SourceImage, quality: u8, sampling: ChromaSampling) -> EncodedImage {
    assert!(image.channels == 1 || image.channels == 3);
    assert_eq!(image.data.len(), image.width * image.height * image.channels);
    let (w, h) = (image.width, image.height);
    let color = sampling != ChromaSampling::Grayscale;
    let (hl, vl) = sampling.luma_factors();
    let (hl, vl) = (hl as usize, vl as usize);
    let (mcu_w, mcu_h) = (8 * hl, 8 * vl);
    let (mcus_x, mcus_y) = (w.div_ceil(mcu_w), h.div_ceil(mcu_h));
    let (pw, ph) = (mcus_x * mcu_w, mcus_y * mcu_h);

    // full-resolution planes, edge-replicated to the MCU grid
    let channel_count = if color { 3 } else { 1 };
    let mut full = vec![vec![0.0f64; pw * ph]; channel_count];
    for y in 0..ph {
        for x in 0..pw {
            let (sx, sy) = (x.min(w - 1), y.min(h - 1));
            let p = &image.data[(sy * w + sx) * image.channels..][..image.channels];
            let (r, g, b) = if image.channels == 3 {
                (p[0] as f64, p[1] as f64, p[2] as f64)
            } else {
                (p[0] as f64, p[0] as f64, p[0] as f64)
            };
            let yv = 0.299 * r + 0.587 * g + 0.114 * b;
            full[0][y * pw + x] = yv;
            if color {
                if image.channels == 1 {
                    full[1][y * pw + x] = 128.0;
                    full[2][y * pw + x] = 128.0;
                } else {
                    full[1][y * pw + x] = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0;
                    full[2][y * pw + x] = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0;
                }
            }
        }
    }

    // per-component planes at their own resolution
    let mut planes: Vec<(usize, usize, Vec<f64>)> = vec![(pw, ph, full[0].clone())];
    for c in full.iter().skip(1) {
        let (cw, ch) = (pw / hl, ph / vl);
        let mut d = vec![0.0; cw * ch];
        for y in 0..ch {
            for x in 0..cw {
                let mut acc = 0.0;
                for dy in 0..vl {
                    for dx in 0..hl {
                        acc += c[(y * vl + dy) * pw + x * hl + dx];
                    }
                }
                d[y * cw + x] = acc / (hl * vl) as f64;
            }
        }
        planes.push((cw, ch, d));
    }

    let q_luma = scaled_quant(&tables::QUANT_LUMA, quality);
    let q_chroma = scaled_quant(&tables::QUANT_CHROMA, quality);
    let zz = zigzag_order();
    let factors: Vec<(usize, usize)> = (0..channel_count)
        .map(|k| if k == 0 { (hl, vl) } else { (1, 1) })
        .collect();
    let dc_tables = [EncodeTable::new(&tables::dc_luma()), EncodeTable::new(&tables::dc_chroma())];
    let ac_tables = [EncodeTable::new(&tables::ac_luma()), EncodeTable::new(&tables::ac_chroma())];

    let mut writer = BitWriter {
        out: Vec::new(),
        acc: 0,
        n: 0,
    };
    let mut coefficients = Vec::new();
    let mut predictors = vec![0i32; channel_count];
    for my in 0..mcus_y {
        for mx in 0..mcus_x {
            for (k, &(fh, fv)) in factors.iter().enumerate() {
                let (cw, _, ref data) = planes[k];
                let q = if k == 0 { &q_luma } else { &q_chroma };
                let t = k.min(1);
                for by in 0..fv {
                    for bx in 0..fh {
                        let (x0, y0) = ((mx * fh + bx) * 8, (my * fv + by) * 8);
                        let mut block = [0.0; 64];
                        for y in 0..8 {
                            for x in 0..8 {
                                block[y * 8 + x] = data[(y0 + y) * cw + x0 + x] - 128.0;
                            }
                        }
                        let f = fdct(&block);
                        let mut zblock = [0i32; 64];
                        for i in 0..64 {
                            let v = (f[zz[i]] / q[zz[i]] as f64).round() as i32;
                            zblock[i] = v.clamp(-1023, 1023);
                        }
                        coefficients.extend(zblock.iter().map(|&v| v as i16));

                        let diff = zblock[0] - predictors[k];
                        predictors[k] = zblock[0];
                        let (l, bits) = magnitude(diff);
                        dc_tables[t].emit(&mut writer, l as u8);
                        writer.put(bits, l);
                        let mut run = 0;
                        for &v in &zblock[1..] {
                            if v == 0 {
                                run += 1;
                                continue;
                            }
                            while run > 15 {
                                ac_tables[t].emit(&mut writer, 0xF0);
                                run -= 16;
                            }
                            let (l, bits) = magnitude(v);
                            ac_tables[t].emit(&mut writer, ((run << 4) | l) as u8);
                            writer.put(bits, l);
                            run = 0;
                        }
                        if run > 0 {
                            ac_tables[t].emit(&mut writer, 0x00);
                        }
                    }
                }
            }
        }
    }
    let scan = writer.finish();

    let mut out = vec![0xFF, 0xD8];
    push_segment(&mut out, 0xE0, b"JFIF\0\x01\x01\x00\x00\x01\x00\x01\x00\x00");
    let mut dqt = Vec::new();
    for (id, q) in [&q_luma, &q_chroma].iter().take(if color { 2 } else { 1 }).enumerate() {
        dqt.push(id as u8);
        dqt.extend(zz.iter().map(|&n| q[n] as u8));
    }
    push_segment(&mut out, 0xDB, &dqt);
    let mut sof = vec![8];
    sof.extend_from_slice(&(h as u16).to_be_bytes());
    sof.extend_from_slice(&(w as u16).to_be_bytes());
    sof.push(channel_count as u8);
    for (k, &(fh, fv)) in factors.iter().enumerate() {
        sof.extend_from_slice(&[k as u8 + 1, ((fh << 4) | fv) as u8, k.min(1) as u8]);
    }
    push_segment(&mut out, 0xC0, &sof);
    let mut dht = Vec::new();
    let mut specs = vec![tables::dc_luma(), tables::ac_luma()];
    if color {
        specs.push(tables::dc_chroma());
        specs.push(tables::ac_chroma());
    }
    for s in &specs {
        let class = match s.class {
            crate::parser::TableClass::Dc => 0,
            crate::parser::TableClass::Ac => 1,
        };
        dht.push((class << 4) | s.id);
        dht.extend_from_slice(&s.counts);
        dht.extend_from_slice(&s.symbols);
    }
    push_segment(&mut out, 0xC4, &dht);
    let mut sos = vec![channel_count as u8];
    for k in 0..channel_count {
        let t = k.min(1) as u8;
        sos.extend_from_slice(&[k as u8 + 1, (t << 4) | t]);
    }
    sos.extend_from_slice(&[0, 63, 0]);
    push_segment(&mut out, 0xDA, &sos);
    out.extend_from_slice(&scan);
    out.extend_from_slice(&[0xFF, 0xD9]);

    EncodedImage {
        bytes: out,
        coefficients,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn magnitude_categories() {
        assert_eq!(magnitude(0), (0, 0));
        assert_eq!(magnitude(1), (1, 1));
        assert_eq!(magnitude(-1), (1, 0));
        assert_eq!(magnitude(-3), (2, 0));
        assert_eq!(magnitude(2), (2, 2));
        assert_eq!(magnitude(-1023), (10, 0));
    }

    #[test]
    fn fdct_of_flat_block() {
        let f = fdct(&[10.0; 64]);
        assert!((f[0] - 80.0).abs() < 1e-9);
        assert!(f[1..].iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn writer_stuffs_and_pads() {
        let mut w = BitWriter {
            out: Vec::new(),
            acc: 0,
            n: 0,
        };
        w.put(0xFF, 8);
        w.put(0b0, 1);
        assert_eq!(w.finish(), vec![0xFF, 0x00, 0x7F]);
    }
}
