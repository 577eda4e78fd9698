//! The per-subsequence decoder shared by all phases.

use super::{ScanDecoder, ScanPartition, SyncState};
use crate::error::{DecodeError, Result};
use crate::huffman::{decode_symbol_at, SymbolFault, SymbolKind};

/// Decodes syntax elements starting from `start` until the first element
/// that begins at or after `end`, and returns the state there.
///
/// With `out == None` the decode is speculative: an invalid codeword means the
/// guessed start was wrong, and `Ok(None)` is returned. With an output slice,
/// coefficients are stored at their position relative to `start.count` and
/// invalid data is an error.
///
/// Running out of bits inside an element, or meeting an invalid code in the
/// one-bit fill of the final byte, is treated as the end of the data in both
/// modes: the returned state sits at the end of the scan and keeps its count
/// and block position. Truncated scans are caught later by the count check.
#[inline]
pub(crate) fn run(
    decoder: &ScanDecoder,
    end: usize,
    start: SyncState,
    mut out: Option<&mut [i16]>,
) -> Result<Option<SyncState>> {
    let segment = decoder.segment();
    let bit_length = segment.bit_length();
    let limit = end.min(bit_length);
    let units = decoder.units_per_mcu() as u8;
    let base = start.count;
    let mut s = start;

    while s.bit_pos < limit {
        let (dc, ac) = decoder.unit_tables(s.unit);
        let sym = match decode_symbol_at(segment, s.bit_pos, s.zigzag as u32, dc, ac) {
            Ok(sym) => sym,
            Err(SymbolFault::OutOfBits) => {
                s.bit_pos = bit_length;
                break;
            }
            Err(SymbolFault::Invalid) if segment.is_fill_from(s.bit_pos) => {
                s.bit_pos = bit_length;
                break;
            }
            Err(SymbolFault::Invalid) => {
                if out.is_some() {
                    return Err(DecodeError::InvalidCode {
                        position: s.bit_pos,
                    });
                }
                return Ok(None);
            }
        };

        if let (Some(buf), Some(value)) = (out.as_deref_mut(), sym.coefficient) {
            let index = s.count - base + sym.run_length as usize;
            match buf.get_mut(index) {
                Some(slot) => *slot = value,
                None => {
                    return Err(DecodeError::ConsistencyFailure(format!(
                        "coefficient at bit {} lands outside its output range",
                        s.bit_pos
                    )))
                }
            }
        }

        let advance = sym.run_length as usize + 1;
        s.bit_pos += sym.bits_consumed as usize;
        s.count += advance;
        let z = s.zigzag as usize + advance;
        if z >= 64 || sym.kind == SymbolKind::Eob {
            s.zigzag = 0;
            s.unit = if s.unit + 1 == units { 0 } else { s.unit + 1 };
        } else {
            s.zigzag = z as u8;
        }
    }
    Ok(Some(s))
}

/// Decodes subsequence `index` of `partition` from `start`; see [`run`] for
/// the meaning of the two modes. The returned count is relative to `start`.
pub fn decode_subsequence(
    decoder: &ScanDecoder,
    partition: &ScanPartition,
    index: usize,
    start: SyncState,
    out: Option<&mut [i16]>,
) -> Result<Option<SyncState>> {
    run(decoder, partition.end(index), start.restart(), out)
}
