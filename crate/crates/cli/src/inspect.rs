use std::path::PathBuf;

use clap::Args;
use syncjpeg::parallel::{PartitionConfig, ScanPartition};
use syncjpeg::parse;

use crate::decode::{read, EngineArgs};
use crate::error::CliError;

#[derive(Args, Debug)]
pub struct InspectArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub engine: EngineArgs,
}

pub fn run(args: InspectArgs) -> Result<(), CliError> {
    let bytes = read(&args.input)?;
    let parsed = parse(&bytes)?;
    let f = &parsed.frame;
    let config = PartitionConfig::new(args.engine.subseq_bits, args.engine.seq_len)?;
    let part = ScanPartition::from_config(parsed.segment.bit_length(), &config);

    println!("file:              {}", args.input.display());
    println!("size:              {}x{}", f.width, f.height);
    println!("components:        {}", f.components.len());
    println!("sampling:          {}", f.sampling.name());
    for (k, c) in f.components.iter().enumerate() {
        println!(
            "  component {k}: id {} sampling {}x{} quant {} dc {} ac {}",
            c.id, c.h_sampling, c.v_sampling, c.quant_table_id, c.dc_table_id, c.ac_table_id
        );
    }
    println!("mcu:               {}x{} pixels", f.mcu_width, f.mcu_height);
    println!("mcus:              {} ({}x{})", f.mcu_count(), f.mcus_x, f.mcus_y);
    println!("data units/mcu:    {}", f.data_units_per_mcu);
    println!("data units:        {}", f.data_unit_count());
    for (i, q) in parsed.quant_tables.iter().enumerate() {
        if let Some(q) = q {
            let min = q.entries.iter().min().unwrap();
            let max = q.entries.iter().max().unwrap();
            println!("quant table {i}:     dc {} range {min}..{max}", q.entries[0]);
        }
    }
    for (class, tables) in [("dc", &parsed.dc_tables), ("ac", &parsed.ac_tables)] {
        for (i, t) in tables.iter().enumerate() {
            if let Some(t) = t {
                let longest = t.counts.iter().rposition(|&c| c > 0).map_or(0, |l| l + 1);
                println!(
                    "huffman {class} {i}:      {} codes, longest {longest} bits",
                    t.symbols.len()
                );
            }
        }
    }
    println!("scan bytes:        {}", parsed.segment.data().len());
    println!("scan bits:         {}", parsed.segment.bit_length());
    println!("stuffed bytes:     {}", parsed.segment.stuffing_map().len());
    println!(
        "partition:         {} bits x {} per sequence",
        config.subsequence_bits, config.sequence_length
    );
    println!("subsequences (N):  {}", part.subsequence_count());
    println!("sequences (B):     {}", part.sequence_count());
    Ok(())
}
