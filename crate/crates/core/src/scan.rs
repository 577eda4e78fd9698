//! Parallel prefix sums.
//!
//! Both scans use the classic three-phase block decomposition: reduce each
//! block, scan the block totals, then rescan every block with its carry-in.

use rayon::prelude::*;

const MIN_BLOCK: usize = 4096;

fn block_len(len: usize) -> usize {
    let blocks = rayon::current_num_threads() * 4;
    len.div_ceil(blocks).max(MIN_BLOCK)
}

/// Exclusive prefix sum; returns the scanned values and the grand total.
pub fn exclusive_scan(values: &[usize]) -> (Vec<usize>, usize) {
    let mut out = vec![0usize; values.len()];
    if values.is_empty() {
        return (out, 0);
    }
    let block = block_len(values.len());
    let block_sums: Vec<usize> = values.par_chunks(block).map(|c| c.iter().sum()).collect();
    let mut carries = Vec::with_capacity(block_sums.len());
    let mut total = 0usize;
    for s in block_sums {
        carries.push(total);
        total += s;
    }
    out.par_chunks_mut(block)
        .zip(values.par_chunks(block))
        .zip(carries.par_iter())
        .for_each(|((dst, src), &carry)| {
            let mut acc = carry;
            for (d, &v) in dst.iter_mut().zip(src) {
                *d = acc;
                acc += v;
            }
        });
    (out, total)
}

/// In-place inclusive prefix sum over several interleaved chains.
///
/// `data` is a sequence of groups of `group_len` elements. Element `j` of each
/// group belongs to chain `chain_of[j]` (or to no chain when `None`); every
/// chain is summed independently in group order using wrapping `i16`
/// arithmetic.
pub fn segmented_inclusive_scan(
    data: &mut [i16],
    group_len: usize,
    chain_of: &[Option<usize>],
    chains: usize,
) {
    assert_eq!(chain_of.len(), group_len);
    assert_eq!(data.len() % group_len, 0);
    if data.is_empty() || chains == 0 {
        return;
    }
    let groups = data.len() / group_len;
    let groups_per_block = block_len(groups).div_ceil(8).max(1);
    let block = groups_per_block * group_len;

    let reduce = |chunk: &[i16]| {
        let mut sums = vec![0i16; chains];
        for group in chunk.chunks_exact(group_len) {
            for (v, c) in group.iter().zip(chain_of) {
                if let Some(c) = *c {
                    sums[c] = sums[c].wrapping_add(*v);
                }
            }
        }
        sums
    };
    let block_sums: Vec<Vec<i16>> = data.par_chunks(block).map(reduce).collect();

    let mut carries = Vec::with_capacity(block_sums.len());
    let mut running = vec![0i16; chains];
    for s in &block_sums {
        carries.push(running.clone());
        for (r, v) in running.iter_mut().zip(s) {
            *r = r.wrapping_add(*v);
        }
    }

    data.par_chunks_mut(block)
        .zip(carries.into_par_iter())
        .for_each(|(chunk, mut acc)| {
            for group in chunk.chunks_exact_mut(group_len) {
                for (v, c) in group.iter_mut().zip(chain_of) {
                    if let Some(c) = *c {
                        acc[c] = acc[c].wrapping_add(*v);
                        *v = acc[c];
                    }
                }
            }
        });
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exclusive_definition() {
        assert_eq!(exclusive_scan(&[3, 5, 2]), (vec![0, 3, 8], 10));
        assert_eq!(exclusive_scan(&[64]), (vec![0], 64));
        assert_eq!(exclusive_scan(&[]), (vec![], 0));
    }

    #[test]
    fn single_chain_inclusive() {
        let mut d = vec![5i16, -2, 3];
        segmented_inclusive_scan(&mut d, 1, &[Some(0)], 1);
        assert_eq!(d, vec![5, 3, 6]);
    }

    proptest! {
        #[test]
        fn exclusive_matches_sequential(values in proptest::collection::vec(0usize..1000, 0..20000)) {
            let (out, total) = exclusive_scan(&values);
            let mut acc = 0;
            for (o, v) in out.iter().zip(&values) {
                prop_assert_eq!(*o, acc);
                acc += v;
            }
            prop_assert_eq!(total, acc);
        }

        #[test]
        fn segmented_matches_sequential(
            groups in proptest::collection::vec(proptest::collection::vec(any::<i16>(), 3), 0..30000)
        ) {
            let chain_of = [Some(0), None, Some(1)];
            let mut data: Vec<i16> = groups.iter().flatten().copied().collect();
            let mut expected = data.clone();
            let mut acc = [0i16; 2];
            for g in expected.chunks_mut(3) {
                acc[0] = acc[0].wrapping_add(g[0]);
                g[0] = acc[0];
                acc[1] = acc[1].wrapping_add(g[2]);
                g[2] = acc[1];
            }
            segmented_inclusive_scan(&mut data, 3, &chain_of, 2);
            prop_assert_eq!(data, expected);
        }
    }
}
