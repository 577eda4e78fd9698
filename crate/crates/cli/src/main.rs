use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod bench;
mod corpus;
mod decode;
mod error;
mod inspect;
mod netpbm;

#[derive(Parser)]
#[command(name = "syncjpeg", version, about = "Parallel baseline JPEG decoder")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode one JPEG file to PPM/PGM.
    Decode(decode::DecodeArgs),
    /// Decode a directory of JPEG files repeatedly and report throughput.
    Bench(bench::BenchArgs),
    /// Print header, table and partition information for a file.
    Inspect(inspect::InspectArgs),
    /// Write a generated test corpus.
    GenCorpus(corpus::GenCorpusArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decode(args) => decode::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Inspect(args) => inspect::run(args),
        Command::GenCorpus(args) => corpus::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
