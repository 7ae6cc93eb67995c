//! BPSK transmission over AWGN with optional jamming.
//!
//! Unit system: antipodal symbols of unit amplitude (bit 0 -> +1, bit 1 -> -1),
//! one sample per coded symbol. All signal-to-noise ratios are per *information*
//! bit, so the thermal noise variance is
//!
//! ```text
//! sigma_N^2 = 1 / (2 * R_c * Eb/N0)
//! ```
//!
//! with `R_c` the code rate. Disturbances are independent, so variances add:
//!
//! - pulsed jamming (duty cycle `rho`) puts extra variance
//!   `sigma_P^2 = 1 / (2 * R_c * (Eb/J0) * rho)` on jammed samples, where
//!   `Eb/J0` is referred to the *time-averaged* jammer power;
//! - a despread continuous-wave tone at phase offset `theta_j` adds
//!   `sigma_J^2 = cos^2(theta_j) * (J/S) / (2K)` on every sample, with `K` the
//!   spreading processing gain; noise-like (PN) jamming is the exact
//!   worst-phase special case `theta_j = 0`.

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Errors from channel configuration or use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("invalid channel parameter: {0}")]
    InvalidParameter(String),
    #[error("CW jamming with nonzero frequency offset is not supported")]
    UnsupportedFrequencyOffset,
}

/// How pulsed jamming lines up with codewords.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseAlignment {
    /// Each transmitted block is either fully inside a pulse (probability
    /// `rho`) or fully outside it.
    CodewordAligned,
    /// An ideal symbol interleaver makes every sample independently jammed
    /// with probability `rho`.
    IdealInterleaved,
}

/// Jammer model.
#[derive(Debug, Clone, PartialEq)]
pub enum JamConfig {
    /// Thermal noise only.
    None,
    /// Pulsed broadband jamming with duty cycle `rho` and time-averaged
    /// `Eb/J0` in dB.
    Pulsed {
        rho: f64,
        ebj0_db: f64,
        alignment: PulseAlignment,
    },
    /// Continuous-wave tone: signal-to-interference ratio `S/J` in dB,
    /// spreading processing gain `K`, phase offset `theta_j` in radians.
    /// Only a tone at the carrier frequency (`delta_omega = 0`) is modeled.
    Cw {
        sir_db: f64,
        processing_gain: u32,
        theta_j: f64,
        delta_omega: f64,
    },
    /// Noise-like (pseudonoise) jamming; equivalent to a worst-phase tone.
    Pn { sir_db: f64, processing_gain: u32 },
}

/// Channel operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    pub ebn0_db: f64,
    /// Code rate of the transmitted block, used to refer ratios to
    /// information bits.
    pub code_rate: f64,
    pub jam: JamConfig,
}

fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<(), ChannelError> {
        if !self.ebn0_db.is_finite() {
            return Err(ChannelError::InvalidParameter(format!(
                "ebn0_db = {}",
                self.ebn0_db
            )));
        }
        if !(self.code_rate > 0.0 && self.code_rate <= 1.0) {
            return Err(ChannelError::InvalidParameter(format!(
                "code_rate = {}",
                self.code_rate
            )));
        }
        match self.jam {
            JamConfig::None => {}
            JamConfig::Pulsed { rho, ebj0_db, .. } => {
                if !(rho > 0.0 && rho <= 1.0) {
                    return Err(ChannelError::InvalidParameter(format!("rho = {rho}")));
                }
                if ebj0_db.is_nan() {
                    return Err(ChannelError::InvalidParameter("ebj0_db is NaN".into()));
                }
            }
            JamConfig::Cw {
                sir_db,
                processing_gain,
                theta_j,
                delta_omega,
            } => {
                if delta_omega != 0.0 {
                    return Err(ChannelError::UnsupportedFrequencyOffset);
                }
                if !sir_db.is_finite() || !theta_j.is_finite() {
                    return Err(ChannelError::InvalidParameter(
                        "sir_db and theta_j must be finite".into(),
                    ));
                }
                if processing_gain == 0 {
                    return Err(ChannelError::InvalidParameter(
                        "processing_gain must be at least 1".into(),
                    ));
                }
            }
            JamConfig::Pn {
                sir_db,
                processing_gain,
            } => {
                if !sir_db.is_finite() {
                    return Err(ChannelError::InvalidParameter("sir_db must be finite".into()));
                }
                if processing_gain == 0 {
                    return Err(ChannelError::InvalidParameter(
                        "processing_gain must be at least 1".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Thermal noise variance per sample.
    pub fn sigma2_clean(&self) -> f64 {
        1.0 / (2.0 * self.code_rate * db_to_lin(self.ebn0_db))
    }

    /// Extra variance a jammed sample sees on top of thermal noise.
    pub fn sigma2_jam_extra(&self) -> f64 {
        match self.jam {
            JamConfig::None => 0.0,
            JamConfig::Pulsed { rho, ebj0_db, .. } => {
                1.0 / (2.0 * self.code_rate * db_to_lin(ebj0_db) * rho)
            }
            JamConfig::Cw {
                sir_db,
                processing_gain,
                theta_j,
                ..
            } => {
                theta_j.cos().powi(2) * db_to_lin(-sir_db) / (2.0 * processing_gain as f64)
            }
            JamConfig::Pn {
                sir_db,
                processing_gain,
            } => db_to_lin(-sir_db) / (2.0 * processing_gain as f64),
        }
    }

    /// Fraction of samples jammed in the long-run average (used by receivers
    /// without jammer state information).
    pub fn jam_fraction(&self) -> f64 {
        match self.jam {
            JamConfig::None => 0.0,
            JamConfig::Pulsed { rho, .. } => rho,
            JamConfig::Cw { .. } | JamConfig::Pn { .. } => 1.0,
        }
    }
}

/// One received block: noisy samples plus the per-sample jam indicator and the
/// two per-class variances.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedBlock {
    pub samples: Vec<f64>,
    pub jam_mask: Vec<bool>,
    /// Variance of un-jammed samples.
    pub sigma2_clean: f64,
    /// Variance of jammed samples (thermal + jamming).
    pub sigma2_jam: f64,
    /// Ensemble fraction of jammed samples (duty cycle), for receivers that
    /// cannot observe `jam_mask`.
    pub jam_fraction: f64,
}

/// Maps bits to antipodal symbols: 0 -> +1.0, 1 -> -1.0.
pub fn modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| 1.0 - 2.0 * f64::from(b)).collect()
}

/// Transmits `symbols` through the configured channel.
///
/// Draw order is fixed for reproducibility: the jam mask first (one Bernoulli
/// draw for codeword-aligned pulses, one per sample for ideal interleaving,
/// none otherwise), then one Gaussian per sample.
pub fn apply_channel(
    symbols: &[f64],
    cfg: &ChannelConfig,
    rng: &mut impl Rng,
) -> Result<ReceivedBlock, ChannelError> {
    cfg.validate()?;
    let n = symbols.len();
    let sigma2_clean = cfg.sigma2_clean();
    let sigma2_jam = sigma2_clean + cfg.sigma2_jam_extra();
    let jam_mask: Vec<bool> = match cfg.jam {
        JamConfig::None => vec![false; n],
        JamConfig::Pulsed {
            rho,
            alignment: PulseAlignment::CodewordAligned,
            ..
        } => {
            let jammed = rng.gen::<f64>() < rho;
            vec![jammed; n]
        }
        JamConfig::Pulsed {
            rho,
            alignment: PulseAlignment::IdealInterleaved,
            ..
        } => (0..n).map(|_| rng.gen::<f64>() < rho).collect(),
        JamConfig::Cw { .. } | JamConfig::Pn { .. } => vec![true; n],
    };
    let samples = symbols
        .iter()
        .zip(&jam_mask)
        .map(|(&s, &jammed)| {
            let sigma = if jammed { sigma2_jam } else { sigma2_clean }.sqrt();
            let z: f64 = rng.sample(StandardNormal);
            s + sigma * z
        })
        .collect();
    Ok(ReceivedBlock {
        samples,
        jam_mask,
        sigma2_clean,
        sigma2_jam,
        jam_fraction: cfg.jam_fraction(),
    })
}

/// Receiver knowledge of the jammer state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Jsi {
    /// The receiver knows the per-sample jam indicator and both variances.
    Perfect,
    /// The receiver only knows long-run averages.
    None,
}

/// Computes per-sample log-likelihood ratios `ln P(bit=0|y) / P(bit=1|y)`.
///
/// With perfect jammer state information each sample is scaled by its own
/// class variance, `llr = 2*y / sigma^2(class)`. Without it, a single average
/// variance `sigma_N^2 + rho * sigma_P^2` is applied to every sample. When
/// `clip` is set, samples are first limited to twice the nominal symbol
/// amplitude, i.e. to `[-2, +2]` — the usual mitigation when strong pulses
/// would otherwise dominate the metric of a receiver without JSI.
pub fn llr_frontend(block: &ReceivedBlock, jsi: Jsi, clip: bool) -> Vec<f64> {
    let average_sigma2 = block.sigma2_clean
        + block.jam_fraction * (block.sigma2_jam - block.sigma2_clean);
    block
        .samples
        .iter()
        .zip(&block.jam_mask)
        .map(|(&y, &jammed)| {
            let y = if clip { y.clamp(-2.0, 2.0) } else { y };
            let sigma2 = match jsi {
                Jsi::Perfect => {
                    if jammed {
                        block.sigma2_jam
                    } else {
                        block.sigma2_clean
                    }
                }
                Jsi::None => average_sigma2,
            };
            2.0 * y / sigma2
        })
        .collect()
}
