//! Baseline JPEG decoding with a parallel, self-synchronizing Huffman stage.
//!
//! The entropy-coded scan is cut into fixed-width bit ranges that are decoded
//! concurrently from guessed starting points. Decoders that started at the
//! wrong bit position fall into step with the true symbol boundaries after a
//! short while, which is detected by comparing decoder states at range
//! boundaries. Everything after entropy decoding (DC reconstruction, IDCT,
//! plane extraction, colour conversion) is data-parallel.
//!
//! ```no_run
//! use syncjpeg::pipeline::{decode_single, DecodeConfig};
//!
//! let bytes = std::fs::read("photo.jpg").unwrap();
//! let image = decode_single(&bytes, &DecodeConfig::default()).unwrap();
//! println!("{}x{}", image.width(), image.height());
//! ```

pub mod bitstream;
pub mod error;
pub mod huffman;
pub mod oracle;
pub mod parallel;
pub mod parser;
pub mod pipeline;
pub mod scan;
pub mod transform;

pub use error::{DecodeError, Result};
pub use parallel::PartitionConfig;
pub use parser::{parse, ChromaSampling, FrameInfo, ParsedJpeg};
pub use pipeline::{decode_single, BatchDecoder, DecodeConfig, DecodedImage, OutputColorspace};
