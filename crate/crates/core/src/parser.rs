//! JPEG container parsing: markers, frame and scan headers, quantization and
//! Huffman table segments.
//!
//! Only single-scan baseline sequential files are accepted. Everything else
//! is rejected with a typed error rather than decoded partially.

use crate::bitstream::{unstuff_until_marker, EntropySegment};
use crate::error::{DecodeError, Result};

pub const SOI: u8 = 0xD8;
pub const EOI: u8 = 0xD9;
pub const SOS: u8 = 0xDA;
pub const DQT: u8 = 0xDB;
pub const DNL: u8 = 0xDC;
pub const DRI: u8 = 0xDD;
pub const DHT: u8 = 0xC4;
pub const DAC: u8 = 0xCC;
pub const SOF0: u8 = 0xC0;
pub const COM: u8 = 0xFE;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComponentSpec {
    pub id: u8,
    pub h_sampling: u8,
    pub v_sampling: u8,
    pub quant_table_id: u8,
    pub dc_table_id: u8,
    pub ac_table_id: u8,
}

impl ComponentSpec {
    pub fn units_per_mcu(&self) -> usize {
        self.h_sampling as usize * self.v_sampling as usize
    }
}

/// Chroma layout of a frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChromaSampling {
    Grayscale,
    S444,
    S422,
    S420,
}

impl ChromaSampling {
    pub fn name(self) -> &'static str {
        match self {
            ChromaSampling::Grayscale => "grayscale",
            ChromaSampling::S444 => "4:4:4",
            ChromaSampling::S422 => "4:2:2",
            ChromaSampling::S420 => "4:2:0",
        }
    }

    /// Luma sampling factors (h, v); chroma is always 1x1.
    pub fn luma_factors(self) -> (u8, u8) {
        match self {
            ChromaSampling::Grayscale | ChromaSampling::S444 => (1, 1),
            ChromaSampling::S422 => (2, 1),
            ChromaSampling::S420 => (2, 2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameInfo {
    pub width: usize,
    pub height: usize,
    pub components: Vec<ComponentSpec>,
    pub sampling: ChromaSampling,
    pub h_max: usize,
    pub v_max: usize,
    pub mcu_width: usize,
    pub mcu_height: usize,
    pub mcus_x: usize,
    pub mcus_y: usize,
    pub data_units_per_mcu: usize,
}

impl FrameInfo {
    /// Builds frame geometry from dimensions and validated components.
    pub fn new(width: usize, height: usize, components: Vec<ComponentSpec>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(DecodeError::MalformedHeader(format!(
                "zero image dimension {width}x{height}"
            )));
        }
        let mut components = components;
        let sampling = match components.len() {
            1 => {
                // a single-component scan is non-interleaved: one block per MCU
                components[0].h_sampling = 1;
                components[0].v_sampling = 1;
                ChromaSampling::Grayscale
            }
            3 => {
                let luma = (components[0].h_sampling, components[0].v_sampling);
                let chroma_ok = components[1..]
                    .iter()
                    .all(|c| c.h_sampling == 1 && c.v_sampling == 1);
                match (luma, chroma_ok) {
                    ((1, 1), true) => ChromaSampling::S444,
                    ((2, 1), true) => ChromaSampling::S422,
                    ((2, 2), true) => ChromaSampling::S420,
                    _ => {
                        let desc: Vec<String> = components
                            .iter()
                            .map(|c| format!("{}x{}", c.h_sampling, c.v_sampling))
                            .collect();
                        return Err(DecodeError::UnsupportedFeature(format!(
                            "sampling layout {}",
                            desc.join(",")
                        )));
                    }
                }
            }
            n => {
                return Err(DecodeError::UnsupportedFeature(format!(
                    "{n}-component images"
                )))
            }
        };
        let h_max = components.iter().map(|c| c.h_sampling as usize).max().unwrap();
        let v_max = components.iter().map(|c| c.v_sampling as usize).max().unwrap();
        let mcu_width = 8 * h_max;
        let mcu_height = 8 * v_max;
        Ok(FrameInfo {
            width,
            height,
            sampling,
            h_max,
            v_max,
            mcu_width,
            mcu_height,
            mcus_x: width.div_ceil(mcu_width),
            mcus_y: height.div_ceil(mcu_height),
            data_units_per_mcu: components.iter().map(|c| c.units_per_mcu()).sum(),
            components,
        })
    }

    pub fn mcu_count(&self) -> usize {
        self.mcus_x * self.mcus_y
    }

    pub fn data_unit_count(&self) -> usize {
        self.mcu_count() * self.data_units_per_mcu
    }

    pub fn coefficient_count(&self) -> usize {
        self.data_unit_count() * 64
    }

    /// Component index of every data unit within one MCU, in coding order
    /// (e.g. `[0, 0, 0, 0, 1, 2]` for 4:2:0).
    pub fn unit_layout(&self) -> Vec<usize> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(k, c)| std::iter::repeat_n(k, c.units_per_mcu()))
            .collect()
    }

    /// Cropped plane size of component `k`.
    pub fn plane_size(&self, k: usize) -> (usize, usize) {
        let c = &self.components[k];
        (
            (self.width * c.h_sampling as usize).div_ceil(self.h_max),
            (self.height * c.v_sampling as usize).div_ceil(self.v_max),
        )
    }

    /// Plane size of component `k` including MCU padding.
    pub fn padded_plane_size(&self, k: usize) -> (usize, usize) {
        let c = &self.components[k];
        (
            self.mcus_x * c.h_sampling as usize * 8,
            self.mcus_y * c.v_sampling as usize * 8,
        )
    }
}

/// Quantization table, entries stored in zig-zag order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantTable {
    pub entries: [u16; 64],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableClass {
    Dc,
    Ac,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuffmanTableSpec {
    pub class: TableClass,
    pub id: u8,
    /// Number of codewords of each length 1..=16.
    pub counts: [u8; 16],
    pub symbols: Vec<u8>,
}

impl HuffmanTableSpec {
    /// Kraft sum scaled by 2^16; a valid prefix code needs this <= 65536.
    pub fn kraft_units(&self) -> u32 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &n)| (n as u32) << (15 - i))
            .sum()
    }
}

/// Everything needed to decode the single baseline scan of a file.
#[derive(Clone, Debug)]
pub struct ParsedJpeg {
    pub frame: FrameInfo,
    /// Quantization table of each frame component.
    pub component_quant: Vec<QuantTable>,
    /// All tables in effect when the scan started.
    pub quant_tables: [Option<QuantTable>; 4],
    pub dc_tables: [Option<HuffmanTableSpec>; 4],
    pub ac_tables: [Option<HuffmanTableSpec>; 4],
    pub segment: EntropySegment,
    /// Byte offset of the first entropy-coded byte in the file.
    pub scan_offset: usize,
}

impl ParsedJpeg {
    pub fn dc_table(&self, k: usize) -> &HuffmanTableSpec {
        self.dc_tables[self.frame.components[k].dc_table_id as usize]
            .as_ref()
            .expect("validated at SOS")
    }

    pub fn ac_table(&self, k: usize) -> &HuffmanTableSpec {
        self.ac_tables[self.frame.components[k].ac_table_id as usize]
            .as_ref()
            .expect("validated at SOS")
    }
}

pub fn sof_description(marker: u8) -> &'static str {
    match marker {
        0xC0 => "SOF0 (baseline DCT)",
        0xC1 => "SOF1 (extended sequential DCT)",
        0xC2 => "SOF2 (progressive DCT)",
        0xC3 => "SOF3 (lossless)",
        0xC5 => "SOF5 (differential sequential DCT)",
        0xC6 => "SOF6 (differential progressive DCT)",
        0xC7 => "SOF7 (differential lossless)",
        0xC9 => "SOF9 (arithmetic sequential DCT)",
        0xCA => "SOF10 (arithmetic progressive DCT)",
        0xCB => "SOF11 (arithmetic lossless)",
        0xCD => "SOF13 (arithmetic differential sequential DCT)",
        0xCE => "SOF14 (arithmetic differential progressive DCT)",
        0xCF => "SOF15 (arithmetic differential lossless)",
        _ => "unknown SOF",
    }
}

fn is_sof(marker: u8) -> bool {
    matches!(marker, 0xC0..=0xCF) && !matches!(marker, DHT | 0xC8 | DAC)
}

fn truncated(what: &str) -> DecodeError {
    DecodeError::MalformedHeader(format!("truncated {what}"))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn u8(&mut self, what: &str) -> Result<u8> {
        let b = *self.bytes.get(self.pos).ok_or_else(|| truncated(what))?;
        self.pos += 1;
        Ok(b)
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(((self.u8(what)? as u16) << 8) | self.u8(what)? as u16)
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).ok_or_else(|| truncated(what))?;
        let s = self.bytes.get(self.pos..end).ok_or_else(|| truncated(what))?;
        self.pos = end;
        Ok(s)
    }

    /// Reads the next marker code, skipping fill bytes.
    fn marker(&mut self) -> Result<Option<u8>> {
        if self.pos >= self.bytes.len() {
            return Ok(None);
        }
        let b = self.u8("marker")?;
        if b != 0xFF {
            return Err(DecodeError::MalformedHeader(format!(
                "expected marker at offset {}, found {b:#04x}",
                self.pos - 1
            )));
        }
        loop {
            let code = self.u8("marker")?;
            if code != 0xFF {
                return Ok(Some(code));
            }
        }
    }

    /// Payload of a length-prefixed segment.
    fn segment(&mut self, what: &str) -> Result<&'a [u8]> {
        let len = self.u16(what)? as usize;
        if len < 2 {
            return Err(DecodeError::MalformedHeader(format!(
                "{what} segment length {len}"
            )));
        }
        self.take(len - 2, what)
    }
}

fn parse_dqt(payload: &[u8], tables: &mut [Option<QuantTable>; 4]) -> Result<()> {
    let mut r = Reader {
        bytes: payload,
        pos: 0,
    };
    while r.pos < payload.len() {
        let pq_tq = r.u8("DQT")?;
        let (precision, id) = (pq_tq >> 4, pq_tq & 0x0F);
        if id > 3 || precision > 1 {
            return Err(DecodeError::MalformedHeader(format!(
                "DQT precision {precision} / id {id}"
            )));
        }
        let mut entries = [0u16; 64];
        for e in entries.iter_mut() {
            *e = if precision == 0 {
                r.u8("DQT")? as u16
            } else {
                r.u16("DQT")?
            };
        }
        if entries.contains(&0) {
            return Err(DecodeError::MalformedHeader(format!(
                "quantization table {id} has a zero entry"
            )));
        }
        tables[id as usize] = Some(QuantTable { entries });
    }
    Ok(())
}

fn parse_dht(
    payload: &[u8],
    dc: &mut [Option<HuffmanTableSpec>; 4],
    ac: &mut [Option<HuffmanTableSpec>; 4],
) -> Result<()> {
    let mut r = Reader {
        bytes: payload,
        pos: 0,
    };
    while r.pos < payload.len() {
        let tc_th = r.u8("DHT")?;
        let (class, id) = (tc_th >> 4, tc_th & 0x0F);
        if class > 1 || id > 3 {
            return Err(DecodeError::MalformedHeader(format!(
                "DHT class {class} / id {id}"
            )));
        }
        let mut counts = [0u8; 16];
        counts.copy_from_slice(r.take(16, "DHT")?);
        let total: usize = counts.iter().map(|&c| c as usize).sum();
        if total > 256 {
            return Err(DecodeError::MalformedHeader(format!(
                "Huffman table with {total} symbols"
            )));
        }
        let symbols = r.take(total, "DHT")?.to_vec();
        let spec = HuffmanTableSpec {
            class: if class == 0 {
                TableClass::Dc
            } else {
                TableClass::Ac
            },
            id,
            counts,
            symbols,
        };
        if spec.kraft_units() > 1 << 16 {
            return Err(DecodeError::MalformedHeader(format!(
                "Huffman table {id} oversubscribes the code space"
            )));
        }
        let slot = if class == 0 { &mut *dc } else { &mut *ac };
        slot[id as usize] = Some(spec);
    }
    Ok(())
}

fn parse_sof(payload: &[u8]) -> Result<FrameInfo> {
    let mut r = Reader {
        bytes: payload,
        pos: 0,
    };
    let precision = r.u8("SOF")?;
    if precision != 8 {
        return Err(DecodeError::UnsupportedFeature(format!(
            "{precision}-bit sample precision"
        )));
    }
    let height = r.u16("SOF")? as usize;
    let width = r.u16("SOF")? as usize;
    if height == 0 {
        return Err(DecodeError::UnsupportedFeature(
            "image height defined by DNL".into(),
        ));
    }
    let count = r.u8("SOF")? as usize;
    if count == 0 {
        return Err(DecodeError::MalformedHeader("frame without components".into()));
    }
    let mut components = Vec::with_capacity(count);
    for _ in 0..count {
        let id = r.u8("SOF")?;
        let hv = r.u8("SOF")?;
        let quant_table_id = r.u8("SOF")?;
        let (h, v) = (hv >> 4, hv & 0x0F);
        if !(1..=4).contains(&h) || !(1..=4).contains(&v) || quant_table_id > 3 {
            return Err(DecodeError::MalformedHeader(format!(
                "component {id}: sampling {h}x{v}, quant table {quant_table_id}"
            )));
        }
        if components.iter().any(|c: &ComponentSpec| c.id == id) {
            return Err(DecodeError::MalformedHeader(format!(
                "duplicate component id {id}"
            )));
        }
        components.push(ComponentSpec {
            id,
            h_sampling: h,
            v_sampling: v,
            quant_table_id,
            dc_table_id: 0,
            ac_table_id: 0,
        });
    }
    if r.pos != payload.len() {
        return Err(DecodeError::MalformedHeader("SOF length mismatch".into()));
    }
    if count != 1 && count != 3 {
        return Err(DecodeError::UnsupportedFeature(format!(
            "{count}-component images"
        )));
    }
    if components
        .iter()
        .any(|c| c.h_sampling > 2 || c.v_sampling > 2)
        && count > 1
    {
        return Err(DecodeError::UnsupportedFeature(
            "sampling factors above 2".into(),
        ));
    }
    FrameInfo::new(width, height, components)
}

fn parse_sos(payload: &[u8], frame: &mut FrameInfo) -> Result<()> {
    let mut r = Reader {
        bytes: payload,
        pos: 0,
    };
    let count = r.u8("SOS")? as usize;
    if count != frame.components.len() {
        return Err(DecodeError::UnsupportedFeature(format!(
            "scan with {count} of {} components (multi-scan image)",
            frame.components.len()
        )));
    }
    for k in 0..count {
        let selector = r.u8("SOS")?;
        let tables = r.u8("SOS")?;
        let comp = &mut frame.components[k];
        if comp.id != selector {
            return Err(DecodeError::MalformedHeader(format!(
                "scan component {selector} does not follow frame order"
            )));
        }
        comp.dc_table_id = tables >> 4;
        comp.ac_table_id = tables & 0x0F;
        if comp.dc_table_id > 3 || comp.ac_table_id > 3 {
            return Err(DecodeError::MalformedHeader(format!(
                "scan table selector {tables:#04x}"
            )));
        }
    }
    let ss = r.u8("SOS")?;
    let se = r.u8("SOS")?;
    let ahal = r.u8("SOS")?;
    if r.pos != payload.len() {
        return Err(DecodeError::MalformedHeader("SOS length mismatch".into()));
    }
    if ss != 0 || se != 63 || ahal != 0 {
        return Err(DecodeError::UnsupportedFeature(format!(
            "scan parameters Ss={ss} Se={se} Ah/Al={ahal:#04x}"
        )));
    }
    Ok(())
}

/// Parses a baseline JPEG file.
pub fn parse(file_bytes: &[u8]) -> Result<ParsedJpeg> {
    let mut r = Reader {
        bytes: file_bytes,
        pos: 0,
    };
    if r.u8("SOI")? != 0xFF || r.u8("SOI")? != SOI {
        return Err(DecodeError::MalformedHeader("missing SOI marker".into()));
    }
    let mut frame: Option<FrameInfo> = None;
    let mut quant_tables: [Option<QuantTable>; 4] = Default::default();
    let mut dc_tables: [Option<HuffmanTableSpec>; 4] = Default::default();
    let mut ac_tables: [Option<HuffmanTableSpec>; 4] = Default::default();

    loop {
        let marker = r
            .marker()?
            .ok_or_else(|| DecodeError::MalformedHeader("no scan before end of file".into()))?;
        match marker {
            SOF0 => {
                let payload = r.segment("SOF")?;
                if frame.is_some() {
                    return Err(DecodeError::MalformedHeader("multiple SOF markers".into()));
                }
                frame = Some(parse_sof(payload)?);
            }
            m if is_sof(m) => {
                return Err(DecodeError::UnsupportedFeature(sof_description(m).into()))
            }
            DHT => parse_dht(r.segment("DHT")?, &mut dc_tables, &mut ac_tables)?,
            DQT => parse_dqt(r.segment("DQT")?, &mut quant_tables)?,
            DAC => {
                return Err(DecodeError::UnsupportedFeature(
                    "arithmetic coding (DAC)".into(),
                ))
            }
            DRI => {
                let payload = r.segment("DRI")?;
                if payload.len() != 2 {
                    return Err(DecodeError::MalformedHeader("DRI length".into()));
                }
                if payload != [0, 0] {
                    return Err(DecodeError::UnsupportedFeature(
                        "restart interval (DRI)".into(),
                    ));
                }
            }
            DNL => return Err(DecodeError::UnsupportedFeature("DNL marker".into())),
            0xDE | 0xDF => {
                return Err(DecodeError::UnsupportedFeature(
                    "hierarchical mode (DHP/EXP)".into(),
                ))
            }
            0xD0..=0xD7 => {
                return Err(DecodeError::UnsupportedFeature(
                    "restart markers (RSTn)".into(),
                ))
            }
            SOI => return Err(DecodeError::MalformedHeader("nested SOI".into())),
            EOI => return Err(DecodeError::MalformedHeader("no scan before EOI".into())),
            0x01 => {}
            0xE0..=0xEF | COM | 0xF0..=0xFD => {
                r.segment("APP/COM")?;
            }
            SOS => {
                let payload = r.segment("SOS")?;
                let mut frame = frame
                    .take()
                    .ok_or_else(|| DecodeError::MalformedHeader("SOS before SOF".into()))?;
                parse_sos(payload, &mut frame)?;
                return finish_scan(file_bytes, r.pos, frame, quant_tables, dc_tables, ac_tables);
            }
            m => {
                return Err(DecodeError::MalformedHeader(format!(
                    "reserved marker {m:#04x}"
                )))
            }
        }
    }
}

fn finish_scan(
    file_bytes: &[u8],
    scan_offset: usize,
    frame: FrameInfo,
    quant_tables: [Option<QuantTable>; 4],
    dc_tables: [Option<HuffmanTableSpec>; 4],
    ac_tables: [Option<HuffmanTableSpec>; 4],
) -> Result<ParsedJpeg> {
    let mut component_quant = Vec::with_capacity(frame.components.len());
    for c in &frame.components {
        let q = quant_tables[c.quant_table_id as usize].clone().ok_or_else(|| {
            DecodeError::MissingTable(format!("quantization table {}", c.quant_table_id))
        })?;
        component_quant.push(q);
        if dc_tables[c.dc_table_id as usize].is_none() {
            return Err(DecodeError::MissingTable(format!(
                "DC Huffman table {}",
                c.dc_table_id
            )));
        }
        if ac_tables[c.ac_table_id as usize].is_none() {
            return Err(DecodeError::MissingTable(format!(
                "AC Huffman table {}",
                c.ac_table_id
            )));
        }
    }

    let (segment, used) = unstuff_until_marker(&file_bytes[scan_offset..])?;

    // inspect what follows the scan
    let mut r = Reader {
        bytes: file_bytes,
        pos: scan_offset + used,
    };
    loop {
        let marker = match r.marker() {
            Ok(Some(m)) => m,
            // tolerate a missing EOI or a truncated trailer
            Ok(None) | Err(_) => break,
        };
        match marker {
            EOI => break,
            0xD0..=0xD7 => {
                return Err(DecodeError::UnsupportedFeature(
                    "restart markers (RSTn)".into(),
                ))
            }
            SOS => {
                return Err(DecodeError::UnsupportedFeature(
                    "multiple scans".into(),
                ))
            }
            DNL => return Err(DecodeError::UnsupportedFeature("DNL marker".into())),
            _ => {
                if r.segment("trailer").is_err() {
                    break;
                }
            }
        }
    }

    Ok(ParsedJpeg {
        frame,
        component_quant,
        quant_tables,
        dc_tables,
        ac_tables,
        segment,
        scan_offset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(id: u8, h: u8, v: u8) -> ComponentSpec {
        ComponentSpec {
            id,
            h_sampling: h,
            v_sampling: v,
            quant_table_id: 0,
            dc_table_id: 0,
            ac_table_id: 0,
        }
    }

    #[test]
    fn mcu_geometry_420() {
        let f = FrameInfo::new(48, 48, vec![comp(1, 2, 2), comp(2, 1, 1), comp(3, 1, 1)]).unwrap();
        assert_eq!((f.mcus_x, f.mcus_y, f.data_units_per_mcu), (3, 3, 6));
        assert_eq!((f.mcu_width, f.mcu_height), (16, 16));
        assert_eq!(f.unit_layout(), vec![0, 0, 0, 0, 1, 2]);
        assert_eq!(f.plane_size(1), (24, 24));
    }

    #[test]
    fn mcu_geometry_422_444() {
        let f = FrameInfo::new(33, 9, vec![comp(1, 2, 1), comp(2, 1, 1), comp(3, 1, 1)]).unwrap();
        assert_eq!((f.mcu_width, f.mcu_height, f.data_units_per_mcu), (16, 8, 4));
        assert_eq!((f.mcus_x, f.mcus_y), (3, 2));
        assert_eq!(f.plane_size(1), (17, 9));
        let f = FrameInfo::new(8, 8, vec![comp(1, 1, 1), comp(2, 1, 1), comp(3, 1, 1)]).unwrap();
        assert_eq!((f.mcu_width, f.data_units_per_mcu), (8, 3));
    }

    #[test]
    fn grayscale_is_non_interleaved() {
        let f = FrameInfo::new(20, 20, vec![comp(1, 2, 2)]).unwrap();
        assert_eq!(f.sampling, ChromaSampling::Grayscale);
        assert_eq!((f.mcus_x, f.mcus_y, f.data_units_per_mcu), (3, 3, 1));
    }

    #[test]
    fn rejects_odd_layouts() {
        let err = FrameInfo::new(16, 16, vec![comp(1, 1, 2), comp(2, 1, 1), comp(3, 1, 1)]);
        assert!(matches!(err, Err(DecodeError::UnsupportedFeature(_))));
        let err = FrameInfo::new(16, 16, vec![comp(1, 2, 2), comp(2, 2, 2), comp(3, 1, 1)]);
        assert!(matches!(err, Err(DecodeError::UnsupportedFeature(_))));
    }

    #[test]
    fn rejects_progressive() {
        let bytes = [0xFF, 0xD8, 0xFF, 0xC2, 0x00, 0x0B, 8, 0, 8, 0, 8, 1, 1, 0x11, 0];
        match parse(&bytes) {
            Err(DecodeError::UnsupportedFeature(msg)) => assert!(msg.contains("SOF2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_restart_interval() {
        let bytes = [0xFF, 0xD8, 0xFF, 0xDD, 0x00, 0x04, 0x00, 0x10];
        assert!(matches!(
            parse(&bytes),
            Err(DecodeError::UnsupportedFeature(_))
        ));
    }

    #[test]
    fn truncated_segment() {
        let bytes = [0xFF, 0xD8, 0xFF, 0xDB, 0x00, 0x43, 0x00, 1, 2];
        assert!(matches!(parse(&bytes), Err(DecodeError::MalformedHeader(_))));
        assert!(matches!(parse(&[0xFF]), Err(DecodeError::MalformedHeader(_))));
        assert!(matches!(parse(&[]), Err(DecodeError::MalformedHeader(_))));
    }

    #[test]
    fn kraft_check() {
        let mut spec = HuffmanTableSpec {
            class: TableClass::Dc,
            id: 0,
            counts: [0; 16],
            symbols: vec![0, 1, 2],
        };
        spec.counts[0] = 3;
        assert!(spec.kraft_units() > 1 << 16);
        spec.counts[0] = 2;
        assert_eq!(spec.kraft_units(), 1 << 16);
    }
}
