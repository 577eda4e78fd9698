//! Independent reference implementations used to check the production
//! decoder: a sequential bit-serial decoder with boundary snapshots, a naive
//! IDCT, a small baseline encoder and seeded test images.

pub mod decoder;
pub mod encoder;
pub mod fixtures;
pub mod synth;
pub mod tables;

pub use decoder::{naive_idct, oracle_decode, oracle_rgb, oracle_stages, OracleStages, OracleTrace};
pub use encoder::{oracle_encode, EncodedImage, SourceImage};
pub use synth::{standard_corpus, synthetic_image, uniform_corpus, CorpusSpec};
