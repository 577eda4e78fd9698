//! Parallel entropy decoding of a single baseline scan.
//!
//! The unstuffed scan is split into subsequences of a fixed number of bits,
//! grouped into sequences of `b` consecutive subsequences. Every subsequence
//! is first decoded from a blind guess (its first bit, start of a block,
//! first data unit of an MCU). The decoders then keep running into the
//! following subsequences until their state agrees with what was already
//! recorded there, at which point everything downstream is known to be
//! correct. See [`sync`] for the two synchronization phases and [`output`]
//! for the final write pass.

pub mod output;
pub mod subsequence;
pub mod sync;

pub use output::{offsets, write_output};
pub use subsequence::decode_subsequence;
pub use sync::{sync_inter_sequence, sync_intra_sequence, SyncInfo};

use std::ops::Range;

use crate::bitstream::EntropySegment;
use crate::error::{DecodeError, Result};
use crate::huffman::{build_table, HuffmanTable};
use crate::parser::{FrameInfo, HuffmanTableSpec, ParsedJpeg};

pub const DEFAULT_SUBSEQUENCE_BITS: usize = 1024;
pub const DEFAULT_SEQUENCE_LENGTH: usize = 256;

/// User-facing partition parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionConfig {
    pub subsequence_bits: usize,
    pub sequence_length: usize,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            subsequence_bits: DEFAULT_SUBSEQUENCE_BITS,
            sequence_length: DEFAULT_SEQUENCE_LENGTH,
        }
    }
}

impl PartitionConfig {
    pub fn new(subsequence_bits: usize, sequence_length: usize) -> Result<Self> {
        let config = PartitionConfig {
            subsequence_bits,
            sequence_length,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.subsequence_bits == 0 || self.subsequence_bits % 32 != 0 {
            return Err(DecodeError::UnsupportedFeature(format!(
                "subsequence size {} is not a positive multiple of 32 bits",
                self.subsequence_bits
            )));
        }
        if self.sequence_length == 0 {
            return Err(DecodeError::UnsupportedFeature(
                "sequence length must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Subsequence and sequence boundaries for one scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanPartition {
    bit_length: usize,
    subsequence_bits: usize,
    sequence_length: usize,
    subsequences: usize,
    sequences: usize,
}

impl ScanPartition {
    /// Any positive width is accepted here so hand-built scans can use odd
    /// split points; [`PartitionConfig`] enforces the production constraints.
    pub fn new(bit_length: usize, subsequence_bits: usize, sequence_length: usize) -> Self {
        assert!(subsequence_bits > 0 && sequence_length > 0);
        let subsequences = bit_length.div_ceil(subsequence_bits).max(1);
        ScanPartition {
            bit_length,
            subsequence_bits,
            sequence_length,
            subsequences,
            sequences: subsequences.div_ceil(sequence_length),
        }
    }

    pub fn from_config(bit_length: usize, config: &PartitionConfig) -> Self {
        Self::new(bit_length, config.subsequence_bits, config.sequence_length)
    }

    pub fn bit_length(&self) -> usize {
        self.bit_length
    }

    pub fn subsequence_bits(&self) -> usize {
        self.subsequence_bits
    }

    pub fn sequence_length(&self) -> usize {
        self.sequence_length
    }

    pub fn subsequence_count(&self) -> usize {
        self.subsequences
    }

    pub fn sequence_count(&self) -> usize {
        self.sequences
    }

    /// First bit of subsequence `i`.
    pub fn start(&self, i: usize) -> usize {
        (i * self.subsequence_bits).min(self.bit_length)
    }

    /// One past the last bit of subsequence `i`.
    pub fn end(&self, i: usize) -> usize {
        ((i + 1) * self.subsequence_bits).min(self.bit_length)
    }

    pub fn sequence_of(&self, i: usize) -> usize {
        i / self.sequence_length
    }

    /// Subsequence indices belonging to sequence `s`.
    pub fn sequence_range(&self, s: usize) -> Range<usize> {
        let first = s * self.sequence_length;
        first..((s + 1) * self.sequence_length).min(self.subsequences)
    }
}

/// Decoder state at a subsequence boundary.
///
/// `count` is the number of coefficient positions produced since the decoder
/// started at the beginning of the current subsequence; it is not part of the
/// agreement test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SyncState {
    pub bit_pos: usize,
    pub count: usize,
    /// Data unit index within the MCU.
    pub unit: u8,
    /// Zig-zag index of the next coefficient within the data unit.
    pub zigzag: u8,
}

impl SyncState {
    /// Blind guess used to start decoding at an arbitrary bit.
    pub fn origin(bit_pos: usize) -> Self {
        SyncState {
            bit_pos,
            count: 0,
            unit: 0,
            zigzag: 0,
        }
    }

    /// Two decoders agree when they sit at the same bit with the same
    /// position in the MCU; from there on they decode identically.
    pub fn agrees_with(&self, other: &SyncState) -> bool {
        self.bit_pos == other.bit_pos && self.unit == other.unit && self.zigzag == other.zigzag
    }

    pub(crate) fn restart(self) -> Self {
        SyncState { count: 0, ..self }
    }
}

pub(crate) fn states_agree(a: &Option<SyncState>, b: &Option<SyncState>) -> bool {
    matches!((a, b), (Some(a), Some(b)) if a.agrees_with(b))
}

/// Huffman tables and scan data needed by every subsequence decoder.
#[derive(Clone, Debug)]
pub struct ScanDecoder {
    segment: EntropySegment,
    tables: Vec<HuffmanTable>,
    // (dc, ac) table index for every data unit of an MCU
    units: Vec<(usize, usize)>,
}

impl ScanDecoder {
    /// `component_tables` holds the (DC, AC) table of every component; the
    /// MCU is laid out by `frame`.
    pub fn new(
        segment: EntropySegment,
        frame: &FrameInfo,
        component_tables: &[(&HuffmanTableSpec, &HuffmanTableSpec)],
    ) -> Result<Self> {
        let mut tables = Vec::with_capacity(component_tables.len() * 2);
        let mut per_component = Vec::with_capacity(component_tables.len());
        for (dc, ac) in component_tables {
            tables.push(build_table(dc)?);
            tables.push(build_table(ac)?);
            per_component.push((tables.len() - 2, tables.len() - 1));
        }
        let units = frame
            .unit_layout()
            .into_iter()
            .map(|k| per_component[k])
            .collect();
        Ok(ScanDecoder {
            segment,
            tables,
            units,
        })
    }

    pub fn from_parsed(parsed: &ParsedJpeg) -> Result<Self> {
        let specs: Vec<_> = (0..parsed.frame.components.len())
            .map(|k| (parsed.dc_table(k), parsed.ac_table(k)))
            .collect();
        Self::new(parsed.segment.clone(), &parsed.frame, &specs)
    }

    /// Single-component decoder over a bare bit string.
    pub fn single_component(
        segment: EntropySegment,
        dc: &HuffmanTableSpec,
        ac: &HuffmanTableSpec,
    ) -> Result<Self> {
        Ok(ScanDecoder {
            segment,
            tables: vec![build_table(dc)?, build_table(ac)?],
            units: vec![(0, 1)],
        })
    }

    pub fn segment(&self) -> &EntropySegment {
        &self.segment
    }

    pub fn units_per_mcu(&self) -> usize {
        self.units.len()
    }

    #[inline(always)]
    pub(crate) fn unit_tables(&self, unit: u8) -> (&HuffmanTable, &HuffmanTable) {
        let (dc, ac) = self.units[unit as usize];
        (&self.tables[dc], &self.tables[ac])
    }

    pub fn partition(&self, config: &PartitionConfig) -> ScanPartition {
        ScanPartition::from_config(self.segment.bit_length(), config)
    }
}

/// Runs both synchronization phases, computes output offsets and writes the
/// coefficients of `data_units` blocks (zig-zag order, DC still
/// difference-coded).
pub fn decode_scan(
    decoder: &ScanDecoder,
    partition: &ScanPartition,
    data_units: usize,
) -> Result<(Vec<i16>, SyncInfo)> {
    let mut info = sync_intra_sequence(decoder, partition);
    sync_inter_sequence(decoder, partition, &mut info);
    let offs = offsets(&info, data_units * 64)?;
    let mut out = vec![0i16; data_units * 64];
    write_output(decoder, partition, &info, &offs, &mut out)?;
    Ok((out, info))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let p = ScanPartition::new(10_000, 1024, 4);
        assert_eq!(p.subsequence_count(), 10);
        assert_eq!(p.sequence_count(), 3);
        assert_eq!(p.sequence_range(2), 8..10);
        assert_eq!(p.end(9), 10_000);
        assert_eq!(p.start(9), 9216);
        assert_eq!(p.sequence_of(7), 1);
    }

    #[test]
    fn config_validation() {
        assert!(PartitionConfig::new(1000, 4).is_err());
        assert!(PartitionConfig::new(1024, 0).is_err());
        assert!(PartitionConfig::new(32, 1).is_ok());
    }
}
