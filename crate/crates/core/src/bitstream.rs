//! Bit-level access to the entropy-coded scan.
//!
//! The scan is unstuffed once into a contiguous buffer so that every bit
//! position used by the decoders (sequential and parallel) lives in the same
//! marker-free address space. Bits are read MSB-first within each byte.

use crate::error::{DecodeError, Result};

/// Zero bytes appended after the payload so that 32-bit peeks never need a
/// bounds check. They are never counted in `bit_length`.
const TAIL_PADDING: usize = 8;

/// Maximum number of bits a single `read_bits` call may return.
pub const MAX_READ_BITS: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropySegment {
    bytes: Vec<u8>,
    byte_len: usize,
    bit_length: usize,
    stuffing_map: Vec<usize>,
}

impl EntropySegment {
    /// Wraps bytes that contain no stuffing.
    pub fn from_bytes(data: &[u8]) -> Self {
        Self::from_bits(data, data.len() * 8)
    }

    /// Wraps `bit_length` bits of `data`; trailing bits of the last byte
    /// beyond `bit_length` are ignored.
    pub fn from_bits(data: &[u8], bit_length: usize) -> Self {
        assert!(bit_length <= data.len() * 8, "bit_length exceeds data");
        let mut bytes = Vec::with_capacity(data.len() + TAIL_PADDING);
        bytes.extend_from_slice(data);
        bytes.resize(data.len() + TAIL_PADDING, 0);
        EntropySegment {
            bytes,
            byte_len: data.len(),
            bit_length,
            stuffing_map: Vec::new(),
        }
    }

    /// Unstuffed scan bytes.
    pub fn data(&self) -> &[u8] {
        &self.bytes[..self.byte_len]
    }

    pub fn bit_length(&self) -> usize {
        self.bit_length
    }

    /// Offsets (into the original stuffed input) of every removed 0x00 byte.
    pub fn stuffing_map(&self) -> &[usize] {
        &self.stuffing_map
    }

    /// Re-inserts the removed stuffing bytes, reproducing the original scan.
    pub fn restuff(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.byte_len + self.stuffing_map.len());
        let mut removed = self.stuffing_map.iter().peekable();
        for &byte in self.data() {
            while removed.peek().is_some_and(|&&off| off == out.len()) {
                out.push(0x00);
                removed.next();
            }
            out.push(byte);
        }
        for _ in removed {
            out.push(0x00);
        }
        out
    }

    /// Returns the 32 bits starting at `position`, MSB-aligned. Bits past the
    /// end of the segment read as zero.
    #[inline(always)]
    pub fn peek32(&self, position: usize) -> u32 {
        let byte = position >> 3;
        let word = match self.bytes.get(byte..byte + 8) {
            Some(chunk) => u64::from_be_bytes(chunk.try_into().unwrap()),
            None => {
                let mut buf = [0u8; 8];
                if byte < self.bytes.len() {
                    let tail = &self.bytes[byte..];
                    buf[..tail.len()].copy_from_slice(tail);
                }
                u64::from_be_bytes(buf)
            }
        };
        ((word << (position & 7)) >> 32) as u32
    }

    /// True when the bits from `position` to the end are the final byte's
    /// fill: fewer than eight, all ones.
    pub fn is_fill_from(&self, position: usize) -> bool {
        let rest = self.bit_length.saturating_sub(position);
        rest < 8 && (rest == 0 || self.peek32(position) >> (32 - rest) == (1 << rest) - 1)
    }

    pub fn cursor(&self) -> BitCursor<'_> {
        BitCursor {
            segment: self,
            position: 0,
        }
    }

    pub fn cursor_at(&self, position: usize) -> BitCursor<'_> {
        assert!(position <= self.bit_length);
        BitCursor {
            segment: self,
            position,
        }
    }
}

/// A private read position inside a shared [`EntropySegment`].
#[derive(Clone, Copy, Debug)]
pub struct BitCursor<'a> {
    segment: &'a EntropySegment,
    position: usize,
}

impl<'a> BitCursor<'a> {
    pub fn position(&self) -> usize {
        self.position
    }

    pub fn segment(&self) -> &'a EntropySegment {
        self.segment
    }

    pub fn remaining(&self) -> usize {
        self.segment.bit_length - self.position
    }

    /// Reads the next `k` bits (0..=16) MSB-first and advances past them.
    pub fn read_bits(&mut self, k: u32) -> Result<u32> {
        assert!(k <= MAX_READ_BITS, "read_bits is capped at 16 bits");
        if k == 0 {
            return Ok(0);
        }
        if self.position + k as usize > self.segment.bit_length {
            return Err(DecodeError::OutOfBits {
                position: self.position,
            });
        }
        let value = self.segment.peek32(self.position) >> (32 - k);
        self.position += k as usize;
        Ok(value)
    }

    pub fn skip(&mut self, k: usize) -> Result<()> {
        if self.position + k > self.segment.bit_length {
            return Err(DecodeError::OutOfBits {
                position: self.position,
            });
        }
        self.position += k;
        Ok(())
    }
}

fn is_marker_code(byte: u8) -> bool {
    byte == 0x01 || byte >= 0xC0
}

/// Unstuffs an entropy-coded segment. Input ends at the first marker (an 0xFF
/// followed by a marker code or fill byte) or at the end of the slice.
pub fn unstuff(scan_bytes: &[u8]) -> Result<EntropySegment> {
    unstuff_until_marker(scan_bytes).map(|(segment, _)| segment)
}

/// Like [`unstuff`], also returning how many input bytes belong to the scan.
/// The byte at that offset, if any, is the 0xFF that opens the next marker.
pub fn unstuff_until_marker(scan_bytes: &[u8]) -> Result<(EntropySegment, usize)> {
    let mut data = Vec::with_capacity(scan_bytes.len() + TAIL_PADDING);
    let mut stuffing_map = Vec::new();
    let mut i = 0;
    while i < scan_bytes.len() {
        let byte = scan_bytes[i];
        if byte != 0xFF {
            data.push(byte);
            i += 1;
            continue;
        }
        match scan_bytes.get(i + 1) {
            Some(0x00) => {
                data.push(0xFF);
                stuffing_map.push(i + 1);
                i += 2;
            }
            Some(&next) if next == 0xFF || is_marker_code(next) => break,
            Some(&next) => return Err(DecodeError::MalformedStuffing { offset: i, next }),
            // dangling 0xFF: start of a truncated marker
            None => break,
        }
    }
    if data.is_empty() {
        return Err(DecodeError::EmptyScan);
    }
    let byte_len = data.len();
    data.resize(byte_len + TAIL_PADDING, 0);
    let segment = EntropySegment {
        bytes: data,
        byte_len,
        bit_length: byte_len * 8,
        stuffing_map,
    };
    Ok((segment, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn removes_single_stuffed_byte() {
        let seg = unstuff(&[0x12, 0xFF, 0x00, 0x34]).unwrap();
        assert_eq!(seg.data(), &[0x12, 0xFF, 0x34]);
        assert_eq!(seg.stuffing_map(), &[2]);
        assert_eq!(seg.bit_length(), 24);
    }

    #[test]
    fn identity_without_stuffing() {
        let seg = unstuff(&[0xAB]).unwrap();
        assert_eq!(seg.data(), &[0xAB]);
        assert!(seg.stuffing_map().is_empty());
    }

    #[test]
    fn stops_at_marker() {
        let (seg, used) = unstuff_until_marker(&[0x01, 0x02, 0xFF, 0xD9]).unwrap();
        assert_eq!(seg.data(), &[0x01, 0x02]);
        assert_eq!(used, 2);
        let (seg, used) = unstuff_until_marker(&[0x01, 0xFF, 0xFF, 0xD9]).unwrap();
        assert_eq!(seg.data(), &[0x01]);
        assert_eq!(used, 1);
    }

    #[test]
    fn rejects_bad_stuffing() {
        assert_eq!(
            unstuff(&[0x00, 0xFF, 0x12]),
            Err(DecodeError::MalformedStuffing {
                offset: 1,
                next: 0x12
            })
        );
    }

    #[test]
    fn empty_scan() {
        assert_eq!(unstuff(&[]), Err(DecodeError::EmptyScan));
        assert_eq!(unstuff(&[0xFF, 0xD9]), Err(DecodeError::EmptyScan));
    }

    #[test]
    fn read_bits_msb_first() {
        let seg = EntropySegment::from_bytes(&[0b1001_0110, 0xFF]);
        let mut cur = seg.cursor();
        assert_eq!(cur.read_bits(2).unwrap(), 2);
        assert_eq!(cur.position(), 2);
        assert_eq!(cur.read_bits(0).unwrap(), 0);
        assert_eq!(cur.position(), 2);
        assert_eq!(cur.read_bits(6).unwrap(), 0b010110);
        assert_eq!(cur.read_bits(8).unwrap(), 0xFF);
        assert!(matches!(
            cur.read_bits(1),
            Err(DecodeError::OutOfBits { position: 16 })
        ));
    }

    #[test]
    fn fill_detection() {
        let seg = EntropySegment::from_bytes(&[0x12, 0x3F]);
        assert!(seg.is_fill_from(10));
        assert!(!seg.is_fill_from(9));
        assert!(seg.is_fill_from(16));
        assert!(!seg.is_fill_from(8));
    }

    #[test]
    fn read_respects_bit_length() {
        let seg = EntropySegment::from_bits(&[0xFF], 3);
        let mut cur = seg.cursor();
        assert!(cur.read_bits(4).is_err());
        assert_eq!(cur.read_bits(3).unwrap(), 7);
    }

    proptest! {
        #[test]
        fn restuff_round_trip(raw in proptest::collection::vec(any::<u8>(), 1..200)) {
            // stuff arbitrary payload the way an encoder would
            let mut stuffed = Vec::new();
            for &b in &raw {
                stuffed.push(b);
                if b == 0xFF {
                    stuffed.push(0x00);
                }
            }
            let seg = unstuff(&stuffed).unwrap();
            prop_assert_eq!(seg.data(), &raw[..]);
            prop_assert_eq!(seg.restuff(), stuffed);
        }

        #[test]
        fn split_reads_compose(
            raw in proptest::collection::vec(any::<u8>(), 4..32),
            start in 0usize..64,
            k1 in 0u32..=16,
            k2 in 0u32..=16,
        ) {
            let seg = EntropySegment::from_bytes(&raw);
            prop_assume!(start + (k1 + k2) as usize <= seg.bit_length());
            prop_assume!(k1 + k2 <= 16);
            let whole = seg.cursor_at(start).read_bits(k1 + k2).unwrap();
            let mut cur = seg.cursor_at(start);
            let hi = cur.read_bits(k1).unwrap();
            let lo = cur.read_bits(k2).unwrap();
            prop_assert_eq!(whole, (hi << k2) | lo);
        }
    }
}
