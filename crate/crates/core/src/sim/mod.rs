//! Seeded Monte Carlo sweep engine: ties codecs, channels, interleavers, and
//! bounds into reproducible codeword/frame error-rate curves.
//!
//! A sweep is described by a JSON [`config::SweepConfig`]; [`engine::run_sweep`]
//! simulates every grid point and emits a CSV table. Reproducibility contract:
//! results are a pure function of `(config, seed)` and independent of the
//! worker count, because every frame draws from its own counter-derived RNG
//! substream and frames are committed in fixed-size batches.

pub mod codec;
pub mod config;
pub mod engine;

pub use codec::{build_codec, Codec, DecodedBlock};
pub use config::{
    BoundsRequest, BurstConfig, ChannelTemplate, CltuConfig, InterleavingMode, JamTemplate,
    JsiMode, PlacementConfig, SchemeConfig, StopRule, SweepAxis, SweepConfig, SweepVariable,
};
pub use engine::{run_point, run_sweep, run_sweep_with, SimResult, SweepOutput};

use thiserror::Error;

/// Errors from configuration or simulation.
#[derive(Debug, Error)]
pub enum SimError {
    /// The configuration is malformed or internally inconsistent.
    #[error("config error: {0}")]
    Config(String),
    /// The simulation failed after configuration was accepted.
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
