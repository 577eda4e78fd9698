use std::path::PathBuf;

use clap::{Args, ValueEnum};
use syncjpeg::oracle::{standard_corpus, uniform_corpus};
use syncjpeg::ChromaSampling;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Sampling {
    Gray,
    #[value(name = "444")]
    S444,
    #[value(name = "422")]
    S422,
    #[value(name = "420")]
    S420,
}

impl From<Sampling> for ChromaSampling {
    fn from(s: Sampling) -> Self {
        match s {
            Sampling::Gray => ChromaSampling::Grayscale,
            Sampling::S444 => ChromaSampling::S444,
            Sampling::S422 => ChromaSampling::S422,
            Sampling::S420 => ChromaSampling::S420,
        }
    }
}

#[derive(Args, Debug)]
pub struct GenCorpusArgs {
    pub dir: PathBuf,
    #[arg(long, default_value_t = 56)]
    pub count: usize,
    /// Generate equally sized images (`WxH`) instead of the mixed set.
    #[arg(long)]
    pub uniform: Option<String>,
    /// Quality for `--uniform`.
    #[arg(long, default_value_t = 75)]
    pub quality: u8,
    /// Sampling for `--uniform`.
    #[arg(long, value_enum, default_value_t = Sampling::S420)]
    pub sampling: Sampling,
}

fn parse_size(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("expected WIDTHxHEIGHT, got {s:?}"));
    let (w, h) = s.split_once('x').ok_or_else(bad)?;
    let (w, h) = (w.parse().map_err(|_| bad())?, h.parse().map_err(|_| bad())?);
    if w == 0 || h == 0 || w > 65535 || h > 65535 {
        return Err(bad());
    }
    Ok((w, h))
}

pub fn run(args: GenCorpusArgs) -> Result<(), CliError> {
    let specs = match &args.uniform {
        Some(size) => {
            let (w, h) = parse_size(size)?;
            uniform_corpus(args.count, w, h, args.sampling.into(), args.quality)
        }
        None => standard_corpus(args.count),
    };
    std::fs::create_dir_all(&args.dir).map_err(|e| CliError::io(&args.dir, e))?;
    for spec in &specs {
        let path = args.dir.join(format!("{}.jpg", spec.name));
        std::fs::write(&path, spec.encode().bytes).map_err(|e| CliError::io(&path, e))?;
    }
    println!("wrote {} files to {}", specs.len(), args.dir.display());
    Ok(())
}
