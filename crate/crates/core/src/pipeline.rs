//! End-to-end decoding of single files and batches.
//!
//! A batch is processed stage by stage: every file is parsed, then every
//! file is synchronized, and so on. Each stage is itself data-parallel, and
//! the files of a batch are processed concurrently within a stage. A failure
//! in one file only removes that file from the remaining stages.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{DecodeError, Result};
use crate::parallel::{
    offsets, sync_inter_sequence, sync_intra_sequence, write_output, PartitionConfig,
    ScanDecoder, ScanPartition, SyncInfo, DEFAULT_SEQUENCE_LENGTH, DEFAULT_SUBSEQUENCE_BITS,
};
use crate::parser::{parse, ChromaSampling, ParsedJpeg};
use crate::transform::{
    dc_prefix_sum, extract_planes, reconstruct_units, CoefficientBuffer, ImagePlanes, Plane,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputColorspace {
    /// Component planes at their native resolution.
    YCbCrPlanes,
    /// Interleaved 8-bit RGB at full resolution.
    RgbInterleaved,
    /// The luma plane only.
    Grayscale,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeConfig {
    pub subsequence_bits: usize,
    pub sequence_length_b: usize,
    /// Threads used by a [`BatchDecoder`]; 0 means one per available core.
    pub worker_count: usize,
    pub output_colorspace: OutputColorspace,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig {
            subsequence_bits: DEFAULT_SUBSEQUENCE_BITS,
            sequence_length_b: DEFAULT_SEQUENCE_LENGTH,
            worker_count: 0,
            output_colorspace: OutputColorspace::RgbInterleaved,
        }
    }
}

impl DecodeConfig {
    pub fn partition(&self) -> Result<PartitionConfig> {
        PartitionConfig::new(self.subsequence_bits, self.sequence_length_b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodedImage {
    Planes(ImagePlanes),
    Rgb(RgbImage),
    Gray(Plane),
}

impl DecodedImage {
    pub fn width(&self) -> usize {
        match self {
            DecodedImage::Planes(p) => p.width,
            DecodedImage::Rgb(i) => i.width,
            DecodedImage::Gray(p) => p.width,
        }
    }

    pub fn height(&self) -> usize {
        match self {
            DecodedImage::Planes(p) => p.height,
            DecodedImage::Rgb(i) => i.height,
            DecodedImage::Gray(p) => p.height,
        }
    }

    /// All output samples concatenated (plane by plane for planar output).
    pub fn bytes(&self) -> Vec<u8> {
        match self {
            DecodedImage::Planes(p) => p.planes.iter().flat_map(|p| p.data.clone()).collect(),
            DecodedImage::Rgb(i) => i.data.clone(),
            DecodedImage::Gray(p) => p.data.clone(),
        }
    }
}

/// Wall time spent in each stage of a batch.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimings {
    pub parse: Duration,
    pub sync_intra: Duration,
    pub sync_inter: Duration,
    pub write: Duration,
    pub dc: Duration,
    pub idct: Duration,
    pub extract: Duration,
    pub color: Duration,
    pub total: Duration,
}

impl StageTimings {
    pub fn sync(&self) -> Duration {
        self.sync_intra + self.sync_inter
    }

    /// Huffman decoding share: both synchronization phases plus the write.
    pub fn entropy(&self) -> Duration {
        self.sync() + self.write
    }

    pub fn stage_sum(&self) -> Duration {
        self.parse + self.entropy() + self.dc + self.idct + self.extract + self.color
    }
}

#[derive(Debug)]
pub struct BatchOutput {
    pub images: Vec<Result<DecodedImage>>,
    pub timings: StageTimings,
}

/// Coefficients of one scan together with the synchronization record.
#[derive(Clone, Debug)]
pub struct ScanDecode {
    pub parsed: ParsedJpeg,
    pub partition: ScanPartition,
    pub sync: SyncInfo,
    pub offsets: Vec<usize>,
    /// Zig-zag coefficients, DC still difference-coded.
    pub coefficients: CoefficientBuffer,
}

/// Parses a file and runs the parallel entropy stage on the current thread
/// pool.
pub fn decode_coefficients(file: &[u8], partition: &PartitionConfig) -> Result<ScanDecode> {
    partition.validate()?;
    let parsed = parse(file)?;
    let decoder = ScanDecoder::from_parsed(&parsed)?;
    let part = decoder.partition(partition);
    let mut sync = sync_intra_sequence(&decoder, &part);
    sync_inter_sequence(&decoder, &part, &mut sync);
    let units = parsed.frame.data_unit_count();
    let offs = offsets(&sync, units * 64)?;
    let mut coefficients = CoefficientBuffer::zeroed(units);
    write_output(&decoder, &part, &sync, &offs, coefficients.values_mut())?;
    Ok(ScanDecode {
        parsed,
        partition: part,
        sync,
        offsets: offs,
        coefficients,
    })
}

/// Nearest-neighbour chroma upsampling and JFIF YCbCr to RGB conversion.
pub fn upsample_and_convert(planes: &ImagePlanes) -> RgbImage {
    let (w, h) = (planes.width, planes.height);
    let mut data = vec![0u8; w * h * 3];
    if planes.planes.len() == 1 {
        let y = &planes.planes[0];
        data.par_chunks_mut(3)
            .zip(y.data.par_iter())
            .for_each(|(px, &g)| px.fill(g));
        return RgbImage {
            width: w,
            height: h,
            data,
        };
    }
    let (hl, vl) = planes.sampling.luma_factors();
    let (hl, vl) = (hl as usize, vl as usize);
    let [luma, cb, cr] = [&planes.planes[0], &planes.planes[1], &planes.planes[2]];
    data.par_chunks_mut(w * 3).enumerate().for_each(|(y, row)| {
        let crow = (y / vl) * cb.width;
        for x in 0..w {
            let yy = luma.data[y * luma.width + x] as f64;
            let b = cb.data[crow + x / hl] as f64 - 128.0;
            let r = cr.data[crow + x / hl] as f64 - 128.0;
            let px = &mut row[x * 3..x * 3 + 3];
            px[0] = (yy + 1.402 * r).round().clamp(0.0, 255.0) as u8;
            px[1] = (yy - 0.344136 * b - 0.714136 * r).round().clamp(0.0, 255.0) as u8;
            px[2] = (yy + 1.772 * b).round().clamp(0.0, 255.0) as u8;
        }
    });
    RgbImage {
        width: w,
        height: h,
        data,
    }
}

struct Work {
    parsed: ParsedJpeg,
    decoder: ScanDecoder,
    partition: ScanPartition,
    sync: Option<SyncInfo>,
    coefficients: Option<CoefficientBuffer>,
    samples: Option<Vec<u8>>,
    planes: Option<ImagePlanes>,
}

type Slot = std::result::Result<Work, DecodeError>;

fn timed<F: FnOnce()>(slot: &mut Duration, f: F) {
    let start = Instant::now();
    f();
    *slot += start.elapsed();
}

fn each<F>(slots: &mut [Slot], f: F)
where
    F: Fn(&mut Work) -> Result<()> + Sync,
{
    slots.par_iter_mut().for_each(|slot| {
        if let Ok(work) = slot {
            if let Err(e) = f(work) {
                *slot = Err(e);
            }
        }
    });
}

/// Decodes a batch stage by stage on the current thread pool.
pub fn decode_files(files: &[&[u8]], config: &DecodeConfig) -> BatchOutput {
    let mut t = StageTimings::default();
    let start = Instant::now();
    let partition = match config.partition() {
        Ok(p) => p,
        Err(e) => {
            return BatchOutput {
                images: files.iter().map(|_| Err(e.clone())).collect(),
                timings: t,
            }
        }
    };

    let mut slots: Vec<Slot> = Vec::new();
    timed(&mut t.parse, || {
        slots = files
            .par_iter()
            .map(|f| {
                let parsed = parse(f)?;
                let decoder = ScanDecoder::from_parsed(&parsed)?;
                let part = decoder.partition(&partition);
                Ok(Work {
                    parsed,
                    decoder,
                    partition: part,
                    sync: None,
                    coefficients: None,
                    samples: None,
                    planes: None,
                })
            })
            .collect();
    });

    timed(&mut t.sync_intra, || {
        each(&mut slots, |w| {
            w.sync = Some(sync_intra_sequence(&w.decoder, &w.partition));
            Ok(())
        })
    });
    timed(&mut t.sync_inter, || {
        each(&mut slots, |w| {
            let info = w.sync.as_mut().unwrap();
            sync_inter_sequence(&w.decoder, &w.partition, info);
            Ok(())
        })
    });
    timed(&mut t.write, || {
        each(&mut slots, |w| {
            let info = w.sync.as_ref().unwrap();
            let units = w.parsed.frame.data_unit_count();
            let offs = offsets(info, units * 64)?;
            let mut buf = CoefficientBuffer::zeroed(units);
            write_output(&w.decoder, &w.partition, info, &offs, buf.values_mut())?;
            w.coefficients = Some(buf);
            Ok(())
        })
    });
    timed(&mut t.dc, || {
        each(&mut slots, |w| {
            dc_prefix_sum(w.coefficients.as_mut().unwrap(), &w.parsed.frame);
            Ok(())
        })
    });
    timed(&mut t.idct, || {
        each(&mut slots, |w| {
            let coeffs = w.coefficients.take().unwrap();
            w.samples = Some(reconstruct_units(&coeffs, &w.parsed.frame, &w.parsed.component_quant));
            Ok(())
        })
    });
    timed(&mut t.extract, || {
        each(&mut slots, |w| {
            let samples = w.samples.take().unwrap();
            w.planes = Some(extract_planes(&samples, &w.parsed.frame));
            Ok(())
        })
    });

    let mut images = Vec::with_capacity(slots.len());
    timed(&mut t.color, || {
        images = slots
            .into_par_iter()
            .map(|slot| {
                let planes = slot?.planes.unwrap();
                Ok(match config.output_colorspace {
                    OutputColorspace::YCbCrPlanes => DecodedImage::Planes(planes),
                    OutputColorspace::RgbInterleaved => {
                        DecodedImage::Rgb(upsample_and_convert(&planes))
                    }
                    OutputColorspace::Grayscale => {
                        DecodedImage::Gray(planes.planes.into_iter().next().unwrap())
                    }
                })
            })
            .collect();
    });
    t.total = start.elapsed();
    BatchOutput { images, timings: t }
}

/// Decodes one file on the global thread pool.
pub fn decode_single(file: &[u8], config: &DecodeConfig) -> Result<DecodedImage> {
    decode_files(&[file], config).images.pop().unwrap()
}

/// Decoder owning a dedicated thread pool of `worker_count` threads.
pub struct BatchDecoder {
    config: DecodeConfig,
    pool: rayon::ThreadPool,
}

impl BatchDecoder {
    pub fn new(config: DecodeConfig) -> Result<Self> {
        config.partition()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.worker_count)
            .build()
            .map_err(|e| DecodeError::UnsupportedFeature(format!("thread pool: {e}")))?;
        Ok(BatchDecoder { config, pool })
    }

    pub fn config(&self) -> &DecodeConfig {
        &self.config
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn decode_batch(&self, files: &[&[u8]]) -> BatchOutput {
        self.pool.install(|| decode_files(files, &self.config))
    }

    pub fn decode(&self, file: &[u8]) -> Result<DecodedImage> {
        self.decode_batch(&[file]).images.pop().unwrap()
    }

    /// Runs `f` on this decoder's pool.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

/// Sampling layout of a file without decoding it.
pub fn probe_sampling(file: &[u8]) -> Result<ChromaSampling> {
    parse(file).map(|p| p.frame.sampling)
}
