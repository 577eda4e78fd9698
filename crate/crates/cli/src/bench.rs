use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use syncjpeg::pipeline::{BatchDecoder, DecodeConfig, OutputColorspace, StageTimings};
use syncjpeg::parallel::{DEFAULT_SEQUENCE_LENGTH, DEFAULT_SUBSEQUENCE_BITS};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Directory of .jpg/.jpeg files decoded as one batch.
    pub corpus: PathBuf,
    /// Comma-separated subsequence sizes in bits.
    #[arg(long, value_delimiter = ',', default_values_t = [DEFAULT_SUBSEQUENCE_BITS])]
    pub subseq_bits: Vec<usize>,
    /// Comma-separated sequence lengths.
    #[arg(long, value_delimiter = ',', default_values_t = [DEFAULT_SEQUENCE_LENGTH])]
    pub seq_len: Vec<usize>,
    /// Comma-separated worker counts (0 = one per core).
    #[arg(long, value_delimiter = ',', default_values_t = [0])]
    pub workers: Vec<usize>,
    /// Untimed runs before measuring.
    #[arg(long, default_value_t = 1)]
    pub warmup: usize,
    /// Timed runs; rows report the mean.
    #[arg(long, default_value_t = 3)]
    pub iterations: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct ConfigRow {
    subseq_bits: usize,
    b: usize,
    workers: usize,
}

#[derive(Serialize)]
struct Stages {
    parse: f64,
    sync: f64,
    write: f64,
    dc: f64,
    idct: f64,
    extract: f64,
    color: f64,
}

#[derive(Serialize)]
struct Row {
    batch: String,
    config: ConfigRow,
    files: usize,
    errors: usize,
    compressed_bytes: usize,
    iterations: usize,
    wall_ms: f64,
    stages: Stages,
    mb_per_s: f64,
    px_per_s: f64,
    checksum: String,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn load_corpus(dir: &Path) -> Result<Vec<Vec<u8>>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| e.eq_ignore_ascii_case("jpg") || e.eq_ignore_ascii_case("jpeg"))
        })
        .collect();
    paths.sort();
    let mut files = Vec::with_capacity(paths.len());
    for p in paths {
        let bytes = std::fs::read(&p).map_err(|e| CliError::io(&p, e))?;
        if syncjpeg::parse(&bytes).is_ok() {
            files.push(bytes);
        }
    }
    if files.is_empty() {
        return Err(CliError::EmptyCorpus(dir.to_path_buf()));
    }
    Ok(files)
}

fn mean(timings: &[StageTimings]) -> StageTimings {
    let n = timings.len().max(1) as u32;
    let mut sum = StageTimings::default();
    for t in timings {
        sum.parse += t.parse;
        sum.sync_intra += t.sync_intra;
        sum.sync_inter += t.sync_inter;
        sum.write += t.write;
        sum.dc += t.dc;
        sum.idct += t.idct;
        sum.extract += t.extract;
        sum.color += t.color;
        sum.total += t.total;
    }
    StageTimings {
        parse: sum.parse / n,
        sync_intra: sum.sync_intra / n,
        sync_inter: sum.sync_inter / n,
        write: sum.write / n,
        dc: sum.dc / n,
        idct: sum.idct / n,
        extract: sum.extract / n,
        color: sum.color / n,
        total: sum.total / n,
    }
}

fn measure(
    batch: &str,
    files: &[&[u8]],
    config: DecodeConfig,
    warmup: usize,
    iterations: usize,
) -> Result<Row, CliError> {
    let decoder = BatchDecoder::new(config)?;
    for _ in 0..warmup {
        decoder.decode_batch(files);
    }
    let mut timings = Vec::with_capacity(iterations);
    let mut last = None;
    for _ in 0..iterations.max(1) {
        let out = decoder.decode_batch(files);
        timings.push(out.timings);
        last = Some(out.images);
    }
    let images = last.unwrap();

    let mut hash = Sha256::new();
    let mut errors = 0;
    let mut pixels = 0usize;
    for image in &images {
        match image {
            Ok(img) => {
                pixels += img.width() * img.height();
                hash.update(img.bytes());
            }
            Err(e) => {
                errors += 1;
                hash.update(e.kind().as_bytes());
            }
        }
    }
    let t = mean(&timings);
    let compressed: usize = files.iter().map(|f| f.len()).sum();
    let secs = t.total.as_secs_f64();
    let cfg = decoder.config();
    Ok(Row {
        batch: batch.to_string(),
        config: ConfigRow {
            subseq_bits: cfg.subsequence_bits,
            b: cfg.sequence_length_b,
            workers: decoder.workers(),
        },
        files: files.len(),
        errors,
        compressed_bytes: compressed,
        iterations: timings.len(),
        wall_ms: ms(t.total),
        stages: Stages {
            parse: ms(t.parse),
            sync: ms(t.sync()),
            write: ms(t.write),
            dc: ms(t.dc),
            idct: ms(t.idct),
            extract: ms(t.extract),
            color: ms(t.color),
        },
        mb_per_s: compressed as f64 / 1e6 / secs,
        px_per_s: pixels as f64 / secs,
        checksum: format!("{:x}", hash.finalize()),
    })
}

fn csv(rows: &[Row]) -> String {
    let mut out = String::from(
        "batch,subseq_bits,b,workers,files,errors,wall_ms,parse_ms,sync_ms,write_ms,dc_ms,idct_ms,extract_ms,color_ms,mb_per_s,px_per_s,checksum\n",
    );
    for r in rows {
        let s = &r.stages;
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.0},{}\n",
            r.batch,
            r.config.subseq_bits,
            r.config.b,
            r.config.workers,
            r.files,
            r.errors,
            r.wall_ms,
            s.parse,
            s.sync,
            s.write,
            s.dc,
            s.idct,
            s.extract,
            s.color,
            r.mb_per_s,
            r.px_per_s,
            r.checksum
        ));
    }
    out
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    let files = load_corpus(&args.corpus)?;
    let refs: Vec<&[u8]> = files.iter().map(|f| f.as_slice()).collect();
    let batch = args
        .corpus
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| args.corpus.display().to_string());

    let mut rows = Vec::new();
    for &workers in &args.workers {
        for &subseq in &args.subseq_bits {
            for &b in &args.seq_len {
                let config = DecodeConfig {
                    subsequence_bits: subseq,
                    sequence_length_b: b,
                    worker_count: workers,
                    output_colorspace: OutputColorspace::RgbInterleaved,
                };
                rows.push(measure(&batch, &refs, config, args.warmup, args.iterations)?);
            }
        }
    }

    let report = match args.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv => csv(&rows),
    };
    match &args.output {
        Some(path) => std::fs::write(path, report).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}
