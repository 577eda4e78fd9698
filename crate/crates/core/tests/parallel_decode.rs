mod common;

use proptest::prelude::*;
use syncjpeg::oracle::fixtures::{worked_block, worked_block_coefficients, WORKED_SYMBOL_STARTS};
use syncjpeg::oracle::{oracle_decode, oracle_encode, synthetic_image};
use syncjpeg::parallel::{
    decode_scan, decode_subsequence, offsets, sync_inter_sequence, sync_intra_sequence,
    PartitionConfig, ScanDecoder, ScanPartition, SyncState,
};
use syncjpeg::parser::{parse, ChromaSampling};
use syncjpeg::pipeline::decode_coefficients;

fn worked_block_decoder() -> ScanDecoder {
    let t = worked_block();
    ScanDecoder::single_component(t.segment, &t.dc, &t.ac).unwrap()
}

#[test]
fn worked_block_boundary_states_match_sequential_trace() {
    let d = worked_block_decoder();
    // zig-zag index at every true symbol boundary
    let zs = [0u8, 1, 2, 3, 4, 6, 7, 9];
    let z_at: Vec<(usize, u8)> = WORKED_SYMBOL_STARTS.iter().copied().zip(zs).collect();
    for width in 1..32 {
        let p = ScanPartition::new(32, width, 1);
        let mut info = sync_intra_sequence(&d, &p);
        sync_inter_sequence(&d, &p, &mut info);
        for i in 0..p.subsequence_count() - 1 {
            let b = p.end(i);
            let exit = info.exits[i].unwrap();
            let &(sp, sz) = z_at.iter().find(|(s, _)| *s >= b).unwrap_or(&(32, 0));
            assert_eq!((exit.bit_pos, exit.zigzag), (sp, sz), "width {width} boundary {b}");
        }
    }
}

#[test]
fn two_sequences_split_at_mcu_start() {
    // a 4:2:0 file split exactly where an MCU begins, one sequence per half
    let img = synthetic_image(48, 48, 3, 9);
    let enc = oracle_encode(&img, 75, ChromaSampling::S420);
    let trace = oracle_decode(&enc.bytes, &[]).unwrap();
    let parsed = parse(&enc.bytes).unwrap();
    let d = ScanDecoder::from_parsed(&parsed).unwrap();
    // bit position of the DC symbol that opens MCU 4
    let at_symbols = oracle_decode(&enc.bytes, &trace.symbol_starts).unwrap();
    let boundary = at_symbols
        .snapshots
        .iter()
        .find(|s| s.count == 4 * 6 * 64)
        .unwrap()
        .bit_pos;
    assert!(boundary > 0 && boundary < trace.bit_length);
    let p = ScanPartition::new(trace.bit_length, boundary, 1);
    let mut info = sync_intra_sequence(&d, &p);
    // the second half's blind start is correct from the first bit
    let second = decode_subsequence(&d, &p, 1, SyncState::origin(boundary), None)
        .unwrap()
        .unwrap();
    assert_eq!(info.exits[1], Some(second));
    sync_inter_sequence(&d, &p, &mut info);
    let offs = offsets(&info, parsed.frame.coefficient_count()).unwrap();
    assert_eq!(offs[1], 4 * 6 * 64);
}

#[test]
fn worked_block_sixteen_bit_split_is_repaired() {
    let d = worked_block_decoder();
    let p = ScanPartition::new(32, 16, 1);
    let (out, info) = decode_scan(&d, &p, 1).unwrap();
    assert_eq!(out[..], worked_block_coefficients()[..]);
    assert_eq!(info.inter_passes, 1);
}

#[test]
fn unsynchronizable_stream_is_reported() {
    // counts that do not add up to the frame are a consistency failure
    let d = worked_block_decoder();
    let p = ScanPartition::new(32, 32, 1);
    assert!(decode_scan(&d, &p, 2).is_err());
}

fn sampling_strategy() -> impl Strategy<Value = ChromaSampling> {
    prop_oneof![
        Just(ChromaSampling::Grayscale),
        Just(ChromaSampling::S444),
        Just(ChromaSampling::S422),
        Just(ChromaSampling::S420),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn any_partition_matches_oracle(
        w in 1usize..90,
        h in 1usize..90,
        sampling in sampling_strategy(),
        quality in 5u8..=100,
        seed in any::<u64>(),
        words in 1usize..12,
        b in 1usize..6,
    ) {
        let channels = if sampling == ChromaSampling::Grayscale { 1 } else { 3 };
        let enc = oracle_encode(&synthetic_image(w, h, channels, seed), quality, sampling);
        let config = PartitionConfig::new(words * 32, b).unwrap();
        let got = decode_coefficients(&enc.bytes, &config).unwrap();
        let boundaries: Vec<usize> =
            (1..got.partition.subsequence_count()).map(|i| got.partition.start(i)).collect();
        let trace = oracle_decode(&enc.bytes, &boundaries).unwrap();

        prop_assert_eq!(got.coefficients.values(), &trace.coefficients[..]);
        let total: usize = got.sync.exits.iter().map(|e| e.unwrap().count).sum();
        prop_assert_eq!(total, 64 * got.parsed.frame.data_unit_count());
        for (i, snap) in trace.snapshots.iter().enumerate() {
            let exit = got.sync.exits[i].unwrap();
            prop_assert!(exit.agrees_with(snap), "boundary {}: {:?} vs {:?}", i + 1, exit, snap);
            prop_assert_eq!(got.offsets[i + 1], snap.count);
        }
    }
}
