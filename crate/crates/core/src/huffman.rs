//! Canonical Huffman tables and decoding of single JPEG syntax elements.
//!
//! A syntax element is a codeword followed by `l` magnitude bits. For DC the
//! codeword carries `l` only; for AC it carries `(r, l)` packed as `r << 4 | l`
//! where `r` is the number of zeros preceding the coefficient.

use crate::bitstream::{BitCursor, EntropySegment};
use crate::error::{DecodeError, Result};
use crate::parser::HuffmanTableSpec;

pub const MAX_CODE_LENGTH: u32 = 16;
pub const MAX_DC_MAGNITUDE_BITS: u32 = 11;
pub const MAX_AC_MAGNITUDE_BITS: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub symbol: u8,
    pub code: u16,
    pub length: u8,
}

/// Flat single-probe decoding table indexed by the next `lookup_bits` bits.
#[derive(Clone, Debug)]
pub struct HuffmanTable {
    // (code_length << 8) | symbol; zero marks a prefix that matches no code
    lookup: Vec<u16>,
    lookup_bits: u32,
    codes: Vec<Codeword>,
}

impl HuffmanTable {
    pub fn max_code_length(&self) -> u32 {
        self.lookup_bits
    }

    pub fn codes(&self) -> &[Codeword] {
        &self.codes
    }

    pub fn codeword(&self, symbol: u8) -> Option<Codeword> {
        self.codes.iter().copied().find(|c| c.symbol == symbol)
    }

    /// Matches the MSB-aligned window against the table, returning
    /// `(code_length, symbol)`.
    #[inline(always)]
    pub fn lookup(&self, window: u32) -> Option<(u32, u8)> {
        let entry = self.lookup[(window >> (32 - self.lookup_bits)) as usize];
        if entry == 0 {
            None
        } else {
            Some(((entry >> 8) as u32, entry as u8))
        }
    }
}

/// Builds the canonical code: increasing length, then symbol order within a
/// length.
pub fn build_table(spec: &HuffmanTableSpec) -> Result<HuffmanTable> {
    let total: usize = spec.counts.iter().map(|&c| c as usize).sum();
    if spec.symbols.len() < total {
        return Err(DecodeError::MalformedHeader(format!(
            "Huffman table lists {} of {total} symbols",
            spec.symbols.len()
        )));
    }
    let mut codes = Vec::with_capacity(total);
    let mut code: u32 = 0;
    let mut next_symbol = 0;
    for (i, &count) in spec.counts.iter().enumerate() {
        let length = i as u32 + 1;
        if code + count as u32 > 1 << length {
            return Err(DecodeError::OversubscribedCode);
        }
        for _ in 0..count {
            codes.push(Codeword {
                symbol: spec.symbols[next_symbol],
                code: code as u16,
                length: length as u8,
            });
            next_symbol += 1;
            code += 1;
        }
        code <<= 1;
    }

    let lookup_bits = codes.iter().map(|c| c.length as u32).max().unwrap_or(1);
    let mut lookup = vec![0u16; 1 << lookup_bits];
    for c in &codes {
        let shift = lookup_bits - c.length as u32;
        let start = (c.code as usize) << shift;
        let end = (c.code as usize + 1) << shift;
        lookup[start..end].fill(((c.length as u16) << 8) | c.symbol as u16);
    }
    Ok(HuffmanTable {
        lookup,
        lookup_bits,
        codes,
    })
}

/// Recovers a signed coefficient from its `l` magnitude bits (ones'
/// complement style: values below `2^(l-1)` are negative).
#[inline(always)]
pub fn extend(bits: u32, l: u32) -> i32 {
    if l == 0 {
        0
    } else if bits >= 1 << (l - 1) {
        bits as i32
    } else {
        bits as i32 - ((1i32 << l) - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Coefficient,
    Eob,
    Zrl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodedSymbol {
    /// Codeword length plus magnitude bits.
    pub bits_consumed: u32,
    pub coefficient: Option<i16>,
    /// Zero positions covered besides the symbol's own slot: the preceding
    /// zero run for an AC coefficient, 15 for ZRL, `63 - z` for EOB, 0 for DC.
    pub run_length: u32,
    pub kind: SymbolKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SymbolFault {
    Invalid,
    OutOfBits,
}

#[inline(always)]
fn fault_near_end(segment: &EntropySegment, position: usize, needed: u32) -> SymbolFault {
    if position + needed as usize > segment.bit_length() {
        SymbolFault::OutOfBits
    } else {
        SymbolFault::Invalid
    }
}

/// Decodes the syntax element starting at `position` for zig-zag index
/// `zigzag`. Pure function of its inputs; the hot loop of every decoder.
#[inline(always)]
pub(crate) fn decode_symbol_at(
    segment: &EntropySegment,
    position: usize,
    zigzag: u32,
    dc: &HuffmanTable,
    ac: &HuffmanTable,
) -> std::result::Result<DecodedSymbol, SymbolFault> {
    let window = segment.peek32(position);
    let table = if zigzag == 0 { dc } else { ac };
    let (code_len, symbol) = match table.lookup(window) {
        Some(hit) => hit,
        None => return Err(fault_near_end(segment, position, table.lookup_bits)),
    };

    let (magnitude_bits, run_length, kind) = if zigzag == 0 {
        let l = symbol as u32;
        if l > MAX_DC_MAGNITUDE_BITS {
            return Err(SymbolFault::Invalid);
        }
        (l, 0, SymbolKind::Coefficient)
    } else {
        let r = (symbol >> 4) as u32;
        let l = (symbol & 0x0F) as u32;
        match (r, l) {
            (0, 0) => (0, 63 - zigzag, SymbolKind::Eob),
            (15, 0) if zigzag + 16 <= 64 => (0, 15, SymbolKind::Zrl),
            (_, 0) => return Err(SymbolFault::Invalid),
            _ if l > MAX_AC_MAGNITUDE_BITS || zigzag + r > 63 => {
                return Err(SymbolFault::Invalid)
            }
            _ => (l, r, SymbolKind::Coefficient),
        }
    };

    let bits_consumed = code_len + magnitude_bits;
    if position + bits_consumed as usize > segment.bit_length() {
        return Err(SymbolFault::OutOfBits);
    }
    let coefficient = match kind {
        SymbolKind::Coefficient => {
            let raw = if magnitude_bits == 0 {
                0
            } else {
                (window << code_len) >> (32 - magnitude_bits)
            };
            Some(extend(raw, magnitude_bits) as i16)
        }
        _ => None,
    };
    Ok(DecodedSymbol {
        bits_consumed,
        coefficient,
        run_length,
        kind,
    })
}

/// Decodes one syntax element at the cursor, choosing the DC table when
/// `zigzag == 0`, and advances the cursor past it.
pub fn decode_next_symbol(
    cursor: &mut BitCursor<'_>,
    zigzag: u32,
    dc: &HuffmanTable,
    ac: &HuffmanTable,
) -> Result<DecodedSymbol> {
    let position = cursor.position();
    let segment = cursor.segment();
    if position >= segment.bit_length() {
        return Err(DecodeError::OutOfBits { position });
    }
    match decode_symbol_at(segment, position, zigzag, dc, ac) {
        Ok(sym) => {
            cursor.skip(sym.bits_consumed as usize)?;
            Ok(sym)
        }
        Err(SymbolFault::Invalid) => Err(DecodeError::InvalidCode { position }),
        Err(SymbolFault::OutOfBits) => Err(DecodeError::OutOfBits { position }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::fixtures::worked_block;
    use crate::parser::TableClass;
    use proptest::prelude::*;

    fn spec(counts: &[u8], symbols: &[u8]) -> HuffmanTableSpec {
        let mut c = [0u8; 16];
        c[..counts.len()].copy_from_slice(counts);
        HuffmanTableSpec {
            class: TableClass::Ac,
            id: 0,
            counts: c,
            symbols: symbols.to_vec(),
        }
    }

    #[test]
    fn canonical_assignment() {
        let t = build_table(&spec(&[0, 1, 1], &[0xA, 0xB])).unwrap();
        assert_eq!(
            t.codes(),
            &[
                Codeword {
                    symbol: 0xA,
                    code: 0b00,
                    length: 2
                },
                Codeword {
                    symbol: 0xB,
                    code: 0b010,
                    length: 3
                }
            ]
        );
        let t = build_table(&spec(&[1, 1], &[0xA, 0xB])).unwrap();
        assert_eq!(t.codeword(0xA).unwrap().code, 0b0);
        assert_eq!(t.codeword(0xB).unwrap().code, 0b10);
    }

    #[test]
    fn oversubscribed() {
        assert_eq!(
            build_table(&spec(&[3], &[1, 2, 3])).unwrap_err(),
            DecodeError::OversubscribedCode
        );
        assert_eq!(
            build_table(&spec(&[1, 2, 1], &[1, 2, 3, 4])).unwrap_err(),
            DecodeError::OversubscribedCode
        );
    }

    #[test]
    fn extend_values() {
        assert_eq!(extend(0b00, 2), -3);
        assert_eq!(extend(0b01, 2), -2);
        assert_eq!(extend(0b10, 2), 2);
        assert_eq!(extend(0b1, 1), 1);
        assert_eq!(extend(0b0, 1), -1);
        assert_eq!(extend(0, 0), 0);
        assert_eq!(extend(0, 11), -2047);
    }

    #[test]
    fn worked_block_implied_codes() {
        let block = worked_block();
        let dc = build_table(&block.dc).unwrap();
        let ac = build_table(&block.ac).unwrap();
        let code = |t: &HuffmanTable, s: u8| {
            let c = t.codeword(s).unwrap();
            format!("{:0width$b}", c.code, width = c.length as usize)
        };
        assert_eq!(code(&dc, 0x02), "10");
        assert_eq!(code(&ac, 0x01), "01");
        assert_eq!(code(&ac, 0x11), "1011");
        assert_eq!(code(&ac, 0x02), "100");
        assert_eq!(code(&ac, 0x00), "00");
    }

    #[test]
    fn worked_block_first_symbol_and_eob() {
        let block = worked_block();
        let dc = build_table(&block.dc).unwrap();
        let ac = build_table(&block.ac).unwrap();
        let mut cur = block.segment.cursor();
        let first = decode_next_symbol(&mut cur, 0, &dc, &ac).unwrap();
        assert_eq!(first.coefficient, Some(-2));
        assert_eq!(first.bits_consumed, 4);
        assert_eq!(first.run_length, 0);

        // the EOB codeword starts at bit 30, after the block's last
        // coefficient at zig-zag index 8
        let mut cur = block.segment.cursor_at(30);
        let eob = decode_next_symbol(&mut cur, 9, &dc, &ac).unwrap();
        assert_eq!(eob.kind, SymbolKind::Eob);
        assert_eq!(eob.run_length, 54);
        assert_eq!(eob.coefficient, None);
        assert_eq!(cur.position(), 32);
    }

    #[test]
    fn zrl_symbol() {
        // single AC code "0" for ZRL, DC unused
        let ac = build_table(&spec(&[1, 1], &[0xF0, 0x01])).unwrap();
        let dc = build_table(&spec(&[1], &[0x00])).unwrap();
        let seg = EntropySegment::from_bytes(&[0x00]);
        let mut cur = seg.cursor();
        let s = decode_next_symbol(&mut cur, 1, &dc, &ac).unwrap();
        assert_eq!(s.kind, SymbolKind::Zrl);
        assert_eq!(s.run_length, 15);
        assert_eq!(s.coefficient, None);
        assert_eq!(s.bits_consumed, 1);
        // a ZRL that would run past the block end is rejected
        let mut cur = seg.cursor();
        assert!(matches!(
            decode_next_symbol(&mut cur, 49, &dc, &ac),
            Err(DecodeError::InvalidCode { .. })
        ));
    }

    #[test]
    fn invalid_and_out_of_bits() {
        let block = worked_block();
        let ac = build_table(&block.ac).unwrap();
        let dc = build_table(&block.dc).unwrap();
        // "11" is not a prefix of any AC code
        let seg = EntropySegment::from_bytes(&[0xC0, 0x00]);
        assert!(matches!(
            decode_next_symbol(&mut seg.cursor(), 1, &dc, &ac),
            Err(DecodeError::InvalidCode { position: 0 })
        ));
        // DC code "10" needs two magnitude bits that are not there
        let seg = EntropySegment::from_bits(&[0x80], 3);
        assert!(matches!(
            decode_next_symbol(&mut seg.cursor(), 0, &dc, &ac),
            Err(DecodeError::OutOfBits { position: 0 })
        ));
    }

    /// Code lengths satisfying Kraft's inequality, as (counts, symbols).
    fn arb_spec() -> impl Strategy<Value = HuffmanTableSpec> {
        (
            proptest::collection::vec(1u32..=16, 1..60),
            Just(()),
        )
            .prop_filter_map("kraft", |(mut lengths, _)| {
                lengths.sort();
                let kraft: u64 = lengths.iter().map(|&l| 1u64 << (16 - l)).sum();
                if kraft > 1 << 16 {
                    return None;
                }
                let mut counts = [0u8; 16];
                for &l in &lengths {
                    counts[l as usize - 1] += 1;
                }
                // distinct symbols in scrambled order
                let symbols = (0..lengths.len()).map(|i| (i * 37 % 256) as u8).collect();
                Some(HuffmanTableSpec {
                    class: TableClass::Ac,
                    id: 0,
                    counts,
                    symbols,
                })
            })
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(spec in arb_spec()) {
            let table = build_table(&spec).unwrap();
            // brute-force encoder: write each codeword MSB-aligned and look it up
            for (i, cw) in table.codes().iter().enumerate() {
                prop_assert_eq!(cw.symbol, spec.symbols[i]);
                let window = (cw.code as u32) << (32 - cw.length as u32);
                prop_assert_eq!(table.lookup(window), Some((cw.length as u32, cw.symbol)));
                // any suffix after the codeword must not change the match
                let noisy = window | (0xFFFF_FFFFu32 >> cw.length as u32);
                prop_assert_eq!(table.lookup(noisy), Some((cw.length as u32, cw.symbol)));
            }
        }

        #[test]
        fn prefix_free(spec in arb_spec()) {
            let table = build_table(&spec).unwrap();
            let codes = table.codes();
            for a in codes {
                for b in codes {
                    if a == b || a.length > b.length {
                        continue;
                    }
                    let prefix = b.code >> (b.length - a.length);
                    prop_assert!(prefix != a.code, "{:?} prefixes {:?}", a, b);
                }
            }
        }

        #[test]
        fn never_consumes_more_than_27_bits(bytes in proptest::collection::vec(any::<u8>(), 8), z in 0u32..64) {
            use crate::oracle::tables;
            let dc = build_table(&tables::dc_chroma()).unwrap();
            let ac = build_table(&tables::ac_luma()).unwrap();
            let seg = EntropySegment::from_bytes(&bytes);
            if let Ok(sym) = decode_next_symbol(&mut seg.cursor(), z, &dc, &ac) {
                prop_assert!(sym.bits_consumed <= 27);
            }
        }
    }
}
