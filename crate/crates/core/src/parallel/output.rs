//! Output placement and the final coefficient write.

use rayon::prelude::*;

use super::subsequence::run;
use super::{ScanDecoder, ScanPartition, SyncInfo};
use crate::error::{DecodeError, Result};
use crate::scan::exclusive_scan;

/// Start offset of every subsequence in the coefficient buffer.
///
/// Fails if any subsequence never synchronized or if the counts do not add up
/// to `expected_total` coefficient positions.
pub fn offsets(info: &SyncInfo, expected_total: usize) -> Result<Vec<usize>> {
    let counts = info
        .exits
        .iter()
        .enumerate()
        .map(|(i, e)| {
            e.map(|s| s.count).ok_or_else(|| {
                DecodeError::ConsistencyFailure(format!(
                    "subsequence {i} has no valid decode from its true start"
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (offsets, total) = exclusive_scan(&counts);
    if total != expected_total {
        return Err(DecodeError::ConsistencyFailure(format!(
            "scan yields {total} coefficient positions, frame needs {expected_total}"
        )));
    }
    Ok(offsets)
}

/// Re-decodes every subsequence from its synchronized entry state and writes
/// its coefficients into its own disjoint slice of `out`.
pub fn write_output(
    decoder: &ScanDecoder,
    partition: &ScanPartition,
    info: &SyncInfo,
    offsets: &[usize],
    out: &mut [i16],
) -> Result<()> {
    let n = partition.subsequence_count();
    assert_eq!(offsets.len(), n);
    let mut slices = Vec::with_capacity(n);
    let mut rest = out;
    for i in 0..n {
        let len = offsets.get(i + 1).copied().unwrap_or(offsets[i] + rest.len()) - offsets[i];
        if len > rest.len() {
            return Err(DecodeError::ConsistencyFailure(format!(
                "subsequence {i} needs {len} slots, {} remain",
                rest.len()
            )));
        }
        let (head, tail) = rest.split_at_mut(len);
        slices.push(head);
        rest = tail;
    }

    slices
        .into_par_iter()
        .enumerate()
        .try_for_each(|(i, slice)| {
            let entry = info.entry(i).ok_or_else(|| {
                DecodeError::ConsistencyFailure(format!("subsequence {i} has no entry state"))
            })?;
            let expected = slice.len();
            let exit = run(decoder, partition.end(i), entry, Some(slice))?
                .expect("write mode never diverges silently");
            let recorded = info.exits[i];
            if exit.count != expected || !recorded.is_some_and(|r| r.agrees_with(&exit)) {
                return Err(DecodeError::ConsistencyFailure(format!(
                    "subsequence {i} re-decoded to a different state"
                )));
            }
            Ok(())
        })
}
