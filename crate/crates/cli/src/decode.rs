use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use syncjpeg::pipeline::{BatchDecoder, DecodeConfig, DecodedImage, OutputColorspace};
use syncjpeg::parallel::{DEFAULT_SEQUENCE_LENGTH, DEFAULT_SUBSEQUENCE_BITS};

use crate::error::CliError;
use crate::netpbm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Colorspace {
    /// Interleaved RGB, written as PPM (grayscale sources become gray PPM).
    Rgb,
    /// Luma only, written as PGM.
    Gray,
    /// One PGM per component at native resolution.
    Planes,
}

impl From<Colorspace> for OutputColorspace {
    fn from(c: Colorspace) -> Self {
        match c {
            Colorspace::Rgb => OutputColorspace::RgbInterleaved,
            Colorspace::Gray => OutputColorspace::Grayscale,
            Colorspace::Planes => OutputColorspace::YCbCrPlanes,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    /// Bits per subsequence (multiple of 32).
    #[arg(long, default_value_t = DEFAULT_SUBSEQUENCE_BITS)]
    pub subseq_bits: usize,
    /// Subsequences per sequence.
    #[arg(long, default_value_t = DEFAULT_SEQUENCE_LENGTH)]
    pub seq_len: usize,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    pub input: PathBuf,
    /// Output file; with `--colorspace planes` one `<stem>.<plane>.pgm` per
    /// component is written next to it.
    pub output: PathBuf,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, value_enum, default_value_t = Colorspace::Rgb)]
    pub colorspace: Colorspace,
}

pub fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn plane_path(output: &Path, name: &str) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    output.with_file_name(format!("{stem}.{name}.pgm"))
}

pub fn run(args: DecodeArgs) -> Result<(), CliError> {
    let bytes = read(&args.input)?;
    let decoder = BatchDecoder::new(DecodeConfig {
        subsequence_bits: args.engine.subseq_bits,
        sequence_length_b: args.engine.seq_len,
        worker_count: args.engine.workers,
        output_colorspace: args.colorspace.into(),
    })?;
    match decoder.decode(&bytes)? {
        DecodedImage::Rgb(img) => write(&args.output, &netpbm::ppm(img.width, img.height, &img.data)),
        DecodedImage::Gray(p) => write(&args.output, &netpbm::pgm(p.width, p.height, &p.data)),
        DecodedImage::Planes(planes) => {
            let names: &[&str] = if planes.planes.len() == 1 {
                &["y"]
            } else {
                &["y", "cb", "cr"]
            };
            for (p, name) in planes.planes.iter().zip(names) {
                write(
                    &plane_path(&args.output, name),
                    &netpbm::pgm(p.width, p.height, &p.data),
                )?;
            }
            Ok(())
        }
    }
}
