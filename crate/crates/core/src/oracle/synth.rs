//! Seeded procedural test images.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::encoder::{oracle_encode, EncodedImage, SourceImage};
use crate::parser::ChromaSampling;

/// Gradients, a few hard-edged shapes, a periodic texture and noise. The mix
/// is drawn from `seed`, so different seeds give quite different entropy.
pub fn synthetic_image(width: usize, height: usize, channels: usize, seed: u64) -> SourceImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = rng.gen_range(0.0..40.0);
    let freq = rng.gen_range(0.01..0.6);
    let texture = rng.gen_range(0.0..60.0);
    let base: [f64; 3] = [rng.gen_range(0.0..255.0), rng.gen_range(0.0..255.0), rng.gen_range(0.0..255.0)];
    let grad: [(f64, f64); 3] = [
        (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    ];
    let shapes: Vec<(f64, f64, f64, [f64; 3], bool)> = (0..rng.gen_range(0..8))
        .map(|_| {
            (
                rng.gen_range(0.0..width as f64),
                rng.gen_range(0.0..height as f64),
                rng.gen_range(2.0..(width.max(height) as f64 / 2.0).max(3.0)),
                [rng.gen_range(0.0..255.0), rng.gen_range(0.0..255.0), rng.gen_range(0.0..255.0)],
                rng.gen_bool(0.5),
            )
        })
        .collect();

    let scale = 255.0 / (width + height) as f64;
    let mut data = Vec::with_capacity(width * height * channels);
    for y in 0..height {
        for x in 0..width {
            let (fx, fy) = (x as f64, y as f64);
            let mut px = [0.0f64; 3];
            for c in 0..3 {
                px[c] = base[c] + (grad[c].0 * fx + grad[c].1 * fy) * scale;
                px[c] += texture * ((fx * freq).sin() * (fy * freq * 0.7 + c as f64).cos());
            }
            for &(cx, cy, r, color, disc) in &shapes {
                let inside = if disc {
                    (fx - cx).powi(2) + (fy - cy).powi(2) < r * r
                } else {
                    (fx - cx).abs() < r && (fy - cy).abs() < r * 0.6
                };
                if inside {
                    px = color;
                }
            }
            for v in px.iter().take(channels) {
                let n = if noise > 0.0 { rng.gen_range(-noise..noise) } else { 0.0 };
                data.push((v + n).round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    SourceImage {
        width,
        height,
        channels,
        data,
    }
}

/// Parameters of one generated test file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub name: String,
    pub width: usize,
    pub height: usize,
    pub sampling: ChromaSampling,
    pub quality: u8,
    pub seed: u64,
}

impl CorpusSpec {
    pub fn encode(&self) -> EncodedImage {
        let channels = if self.sampling == ChromaSampling::Grayscale { 1 } else { 3 };
        let image = synthetic_image(self.width, self.height, channels, self.seed);
        oracle_encode(&image, self.quality, self.sampling)
    }
}

const SIZES: [(usize, usize); 15] = [
    (8, 8),
    (16, 16),
    (17, 9),
    (33, 47),
    (64, 64),
    (100, 75),
    (128, 128),
    (255, 129),
    (320, 240),
    (400, 300),
    (512, 384),
    (640, 480),
    (960, 540),
    (1280, 720),
    (1920, 1080),
];

const SAMPLINGS: [ChromaSampling; 4] = [
    ChromaSampling::Grayscale,
    ChromaSampling::S444,
    ChromaSampling::S422,
    ChromaSampling::S420,
];

const QUALITIES: [u8; 5] = [95, 85, 75, 50, 20];

/// `count` files cycling through sizes, samplings and qualities so that
/// every combination of neighbouring parameters appears.
pub fn standard_corpus(count: usize) -> Vec<CorpusSpec> {
    (0..count)
        .map(|i| {
            let (width, height) = SIZES[i % SIZES.len()];
            let sampling = SAMPLINGS[(i / 2 + i) % SAMPLINGS.len()];
            let quality = QUALITIES[(i / 3) % QUALITIES.len()];
            CorpusSpec {
                name: format!(
                    "synth_{i:03}_{width}x{height}_{}_q{quality}",
                    sampling.name().replace(':', "")
                ),
                width,
                height,
                sampling,
                quality,
                seed: 0x5EED_0000 + i as u64,
            }
        })
        .collect()
}

/// Uniform batch of equally sized images at one quality, for throughput runs.
pub fn uniform_corpus(
    count: usize,
    width: usize,
    height: usize,
    sampling: ChromaSampling,
    quality: u8,
) -> Vec<CorpusSpec> {
    (0..count)
        .map(|i| CorpusSpec {
            name: format!("batch_{i:03}_q{quality}"),
            width,
            height,
            sampling,
            quality,
            seed: 0xBA7C_0000 + i as u64,
        })
        .collect()
}
