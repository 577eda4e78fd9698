//! Synchronization phases.
//!
//! `exits[i]` is the state in which the decoder of subsequence `i` left it,
//! which is also where decoding of subsequence `i + 1` starts. A subsequence
//! is synchronized once the decoder that produced its exit started from the
//! true exit of its predecessor.

use rayon::prelude::*;

use super::subsequence::run;
use super::{states_agree, ScanDecoder, ScanPartition, SyncState};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncInfo {
    /// Exit state of each subsequence; `None` marks a decode that hit an
    /// invalid codeword.
    pub exits: Vec<Option<SyncState>>,
    /// One flag per boundary between consecutive sequences, set once the
    /// sequence after it is known to be consistent with the one before.
    pub boundary_synced: Vec<bool>,
    /// Overflow rounds needed inside sequences (0 when every blind start
    /// was already correct).
    pub intra_rounds: usize,
    /// Passes over unsynchronized sequence boundaries.
    pub inter_passes: usize,
    /// Subsequence decodes performed by both phases together.
    pub decodes: usize,
}

impl SyncInfo {
    /// State in which decoding of subsequence `i` starts.
    pub fn entry(&self, i: usize) -> Option<SyncState> {
        if i == 0 {
            Some(SyncState::origin(0))
        } else {
            self.exits[i - 1].map(SyncState::restart)
        }
    }
}

struct Chain {
    next: usize,
    state: SyncState,
    stop: usize,
}

/// Decodes every subsequence from a blind start, then lets each decoder run
/// on through the rest of its own sequence until it agrees with the exit
/// already recorded for the subsequence it is in.
///
/// Rounds proceed in lockstep: in round `k` the decoder that started at
/// subsequence `w` handles subsequence `w + k`, so writes within a round never
/// collide and every comparison sees the previous round's exits.
pub fn sync_intra_sequence(decoder: &ScanDecoder, partition: &ScanPartition) -> SyncInfo {
    let n = partition.subsequence_count();
    let mut exits: Vec<Option<SyncState>> = (0..n)
        .into_par_iter()
        .map(|i| {
            run(decoder, partition.end(i), SyncState::origin(partition.start(i)), None)
                .expect("speculative decode has no hard errors")
        })
        .collect();
    let mut decodes = n;

    let mut chains: Vec<Chain> = (0..n)
        .filter_map(|i| {
            let stop = partition.sequence_range(partition.sequence_of(i)).end;
            let state = exits[i]?;
            (i + 1 < stop).then_some(Chain {
                next: i + 1,
                state,
                stop,
            })
        })
        .collect();

    let mut rounds = 0;
    while !chains.is_empty() {
        let results: Vec<Option<SyncState>> = chains
            .par_iter()
            .map(|c| {
                run(decoder, partition.end(c.next), c.state.restart(), None)
                    .expect("speculative decode has no hard errors")
            })
            .collect();
        decodes += chains.len();
        rounds += 1;

        let mut next_round = Vec::with_capacity(chains.len());
        for (chain, result) in chains.into_iter().zip(results) {
            let agreed = states_agree(&result, &exits[chain.next]);
            exits[chain.next] = result;
            if let (false, Some(state)) = (agreed, result) {
                if chain.next + 1 < chain.stop {
                    next_round.push(Chain {
                        next: chain.next + 1,
                        state,
                        stop: chain.stop,
                    });
                }
            }
        }
        chains = next_round;
    }

    SyncInfo {
        exits,
        boundary_synced: vec![false; partition.sequence_count().saturating_sub(1)],
        intra_rounds: rounds,
        inter_passes: 0,
        decodes,
    }
}

/// Propagates the true state across sequence boundaries.
///
/// Each pass starts one decoder per unsynchronized boundary `k`, from the
/// exit of the last subsequence of sequence `k`, and runs it through sequence
/// `k + 1` until it agrees with a recorded exit. All decoders of a pass read
/// the exits as they were when the pass began. When a pass changes the final
/// exit of sequence `k + 1`, boundary `k + 1` is reopened because its decoder
/// started from a stale state.
///
/// The lowest open boundary increases by at least one every pass, so at most
/// `B - 1` passes are needed. Returns the number of passes.
pub fn sync_inter_sequence(
    decoder: &ScanDecoder,
    partition: &ScanPartition,
    info: &mut SyncInfo,
) -> usize {
    let boundaries = partition.sequence_count().saturating_sub(1);
    info.boundary_synced.resize(boundaries, false);
    let mut passes = 0;

    loop {
        let open: Vec<usize> = (0..boundaries)
            .filter(|&k| !info.boundary_synced[k])
            .collect();
        if open.is_empty() {
            break;
        }

        let exits = &info.exits;
        let results: Vec<(usize, Vec<(usize, Option<SyncState>)>)> = open
            .par_iter()
            .map(|&k| {
                let mut writes = Vec::new();
                let source = exits[partition.sequence_range(k).end - 1];
                let Some(mut state) = source else {
                    return (k, writes);
                };
                for j in partition.sequence_range(k + 1) {
                    let result = run(decoder, partition.end(j), state.restart(), None)
                        .expect("speculative decode has no hard errors");
                    let agreed = states_agree(&result, &exits[j]);
                    writes.push((j, result));
                    match result {
                        Some(next) if !agreed => state = next,
                        _ => break,
                    }
                }
                (k, writes)
            })
            .collect();

        for &(k, _) in &results {
            info.boundary_synced[k] = true;
        }
        for (k, writes) in results {
            info.decodes += writes.len();
            let last = partition.sequence_range(k + 1).end - 1;
            for (j, result) in writes {
                let old = info.exits[j];
                let unchanged = states_agree(&old, &result) || (old.is_none() && result.is_none());
                if j == last && !unchanged && k + 1 < boundaries {
                    info.boundary_synced[k + 1] = false;
                }
                info.exits[j] = result;
            }
        }
        passes += 1;
        assert!(passes <= boundaries, "boundary propagation failed to settle");
    }
    info.inter_passes = passes;
    passes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::fixtures::worked_block;

    fn decoder() -> ScanDecoder {
        let t = worked_block();
        ScanDecoder::single_component(t.segment, &t.dc, &t.ac).unwrap()
    }

    fn true_end() -> SyncState {
        SyncState {
            bit_pos: 32,
            count: 0,
            unit: 0,
            zigzag: 0,
        }
    }

    #[test]
    fn split_at_14_synchronizes_immediately() {
        let d = decoder();
        let p = ScanPartition::new(32, 14, 3);
        let info = sync_intra_sequence(&d, &p);
        // the blind decode of [0, 14) is correct and the one of [14, 28)
        // starts on a true symbol boundary, so one overflow round confirms
        assert!(info.exits[0].unwrap().agrees_with(&SyncState {
            bit_pos: 14,
            count: 0,
            unit: 0,
            zigzag: 3
        }));
        assert!(info.exits[2].unwrap().agrees_with(&true_end()));
    }

    #[test]
    fn zigzag_mismatch_is_not_agreement() {
        // a blind start at 8 reaches bit 17 one coefficient short
        let d = decoder();
        let blind = run(&d, 16, SyncState::origin(8), None).unwrap().unwrap();
        let truth = run(&d, 16, SyncState::origin(0), None).unwrap().unwrap();
        assert_eq!(blind.bit_pos, truth.bit_pos);
        assert_ne!(blind.zigzag, truth.zigzag);
        assert!(!blind.agrees_with(&truth));
    }

    #[test]
    fn divergent_blind_start_is_repaired_across_sequences() {
        // split at 16 with one subsequence per sequence: the blind decode of
        // the second half hits an invalid code and must be replaced
        let d = decoder();
        let p = ScanPartition::new(32, 16, 1);
        let mut info = sync_intra_sequence(&d, &p);
        assert_eq!(info.exits[1], None);
        let passes = sync_inter_sequence(&d, &p, &mut info);
        assert_eq!(passes, 1);
        assert!(info.exits[1].unwrap().agrees_with(&true_end()));
        assert_eq!(info.exits[0].unwrap().count + info.exits[1].unwrap().count, 64);
    }

    #[test]
    fn empty_inter_phase_for_single_sequence() {
        let d = decoder();
        let p = ScanPartition::new(32, 8, 16);
        let mut info = sync_intra_sequence(&d, &p);
        assert_eq!(sync_inter_sequence(&d, &p, &mut info), 0);
        assert!(info.exits[3].unwrap().agrees_with(&true_end()));
    }
}
