//! Small hand-built scans with known decodings.

use crate::bitstream::EntropySegment;
use crate::parser::{HuffmanTableSpec, TableClass};

pub struct WorkedBlock {
    pub dc: HuffmanTableSpec,
    pub ac: HuffmanTableSpec,
    pub segment: EntropySegment,
}

fn table(class: TableClass, counts: &[u8], symbols: &[u8]) -> HuffmanTableSpec {
    let mut c = [0u8; 16];
    c[..counts.len()].copy_from_slice(counts);
    HuffmanTableSpec {
        class,
        id: 0,
        counts: c,
        symbols: symbols.to_vec(),
    }
}

/// One grayscale 8x8 block coded in 32 bits.
///
/// DC codes: `00` -> 0, `01` -> 1, `10` -> 2 magnitude bits. AC codes:
/// `00` EOB, `01` (0,1), `100` (0,2), `1010` (0,3), `1011` (1,1).
///
/// ```text
/// bits  0..4   10 01      DC  -2
///       4..9   100 00     AC  -3
///       9..14  100 10     AC   2
///      14..17  01 0       AC  -1
///      17..22  1011 0     AC  skip 1, -1
///      22..25  01 1       AC   1
///      25..30  1011 1     AC  skip 1, 1
///      30..32  00         EOB
/// ```
pub fn worked_block() -> WorkedBlock {
    WorkedBlock {
        dc: table(TableClass::Dc, &[0, 3], &[0x00, 0x01, 0x02]),
        ac: table(TableClass::Ac, &[0, 2, 1, 2], &[0x00, 0x01, 0x02, 0x03, 0x11]),
        segment: EntropySegment::from_bytes(&[0x98, 0x49, 0x59, 0xDC]),
    }
}

/// Bit positions at which each syntax element of [`worked_block`] starts.
pub const WORKED_SYMBOL_STARTS: [usize; 8] = [0, 4, 9, 14, 17, 22, 25, 30];

/// Decoded block of [`worked_block`] in zig-zag order.
pub fn worked_block_coefficients() -> [i16; 64] {
    let mut out = [0i16; 64];
    for (z, v) in [(0, -2), (1, -3), (2, 2), (3, -1), (5, -1), (6, 1), (8, 1)] {
        out[z] = v;
    }
    out
}
