//! Acoustic defect-detection pipeline for laser directed energy deposition.
//!
//! The crate covers the full chain: WAV ingestion and STFT plumbing
//! ([`signal`]), the three-stage denoiser ([`denoise`]), frame-level feature
//! extraction ([`features`]) and MFCC tensors ([`mfcc`]), feature analysis
//! ([`analysis`]), classic and CNN classifiers ([`models`]), a synthetic
//! labeled-corpus generator ([`synth`]), and an in-process publish/subscribe
//! streaming pipeline ([`stream`]). The `lded` binary exposes each stage as a
//! subcommand.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod denoise;
pub mod error;
pub mod features;
pub mod mfcc;
pub mod models;
pub mod signal;
pub mod stream;
pub mod synth;

pub use error::{Error, Result};
pub use signal::{AudioClip, FramingConfig, Segment, Spectrogram};
