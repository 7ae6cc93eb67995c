//! Sweep configuration: JSON schema, parsing, and upfront validation.
//!
//! The swept variable's value is left out of the channel template (its field
//! stays `null`/absent) and filled per grid point; every other parameter must
//! be fixed in the template. Unknown keys are rejected wherever serde
//! supports it.

use super::SimError;
use crate::turbo::InterleaverDef;
use serde::{Deserialize, Serialize};

/// One full sweep description (mirrors the JSON document).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scheme: SchemeConfig,
    pub channel: ChannelTemplate,
    pub sweep: SweepAxis,
    pub jsi: JsiMode,
    /// Clip received amplitudes to twice the symbol amplitude before
    /// computing llrs (the usual mitigation when JSI is absent).
    #[serde(default)]
    pub clip: bool,
    pub interleaving: InterleavingMode,
    /// Present: messages are transfer frames of `m` bits partitioned over
    /// several codewords per the container layout.
    #[serde(default)]
    pub cltu: Option<CltuConfig>,
    /// Burst jammer overlaying the coded container (requires `cltu`).
    #[serde(default)]
    pub burst: Option<BurstConfig>,
    pub stop: StopRule,
    pub seed: u64,
    #[serde(default)]
    pub bounds: BoundsRequest,
}

/// Coding scheme selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SchemeConfig {
    /// One-bit "codewords": a plain BPSK slicer, for calibration.
    Uncoded,
    /// (63,56) single-error-correcting BCH with hard-decision decoding.
    Bch63Sec,
    /// Extended (128,64) BCH under most-reliable-basis soft decoding.
    EbchMrb {
        order: usize,
        #[serde(default)]
        pattern_budget: Option<u64>,
    },
    /// Rate-1/2 parallel turbo code, 16-state constituents.
    Turbo {
        k: usize,
        iterations: usize,
        /// Omitted: the frozen default interleaver for `k` is used.
        #[serde(default)]
        interleaver: Option<InterleaverDef>,
    },
    /// LDPC code from an alist file, sum-product decoding.
    Ldpc {
        alist: String,
        #[serde(default = "default_ldpc_iters")]
        max_iter: usize,
    },
}

fn default_ldpc_iters() -> usize {
    100
}

/// Channel template; the swept variable's field is left unset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelTemplate {
    /// Fixed Eb/N0 in dB. `+inf` (only constructible through the API — JSON
    /// has no infinity literal) short-circuits the channel entirely: exact
    /// symbols reach the decoder, the sweep grid becomes nominal labels, and
    /// jamming, bursts and bounds are all disallowed. Useful for end-to-end
    /// pipeline checks that must produce zero errors.
    #[serde(default)]
    pub ebn0_db: Option<f64>,
    #[serde(default)]
    pub jam: JamTemplate,
}

/// Jammer template (values optional where sweepable).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum JamTemplate {
    None,
    Pulsed {
        rho: f64,
        #[serde(default)]
        ebj0_db: Option<f64>,
    },
    Cw {
        #[serde(default)]
        sir_db: Option<f64>,
        processing_gain: u32,
        #[serde(default)]
        theta_j: f64,
        #[serde(default)]
        delta_omega: f64,
    },
    Pn {
        #[serde(default)]
        sir_db: Option<f64>,
        processing_gain: u32,
    },
}

impl Default for JamTemplate {
    fn default() -> Self {
        JamTemplate::None
    }
}

/// The swept variable and its grid (strictly increasing, dB).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Ebn0Db,
    Ebj0Db,
    SirDb,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::Ebn0Db => "ebn0_db",
            SweepVariable::Ebj0Db => "ebj0_db",
            SweepVariable::SirDb => "sir_db",
        }
    }
}

/// Receiver knowledge of the jammer state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JsiMode {
    Perfect,
    None,
}

/// Interleaving between encoder and channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterleavingMode {
    /// Pulses gate whole codewords.
    None,
    /// Infinite-depth model: every symbol sees an independent jam state.
    Ideal,
    /// Row/column block interleaver spanning the coded container.
    Rowcol,
}

/// Transfer-frame container parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CltuConfig {
    /// Transfer frame length in bits.
    pub m: usize,
}

/// Burst jammer parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BurstConfig {
    /// Burst length in coded symbols.
    pub length: usize,
    /// In-pulse jammer energy ratio Eb/J0P in dB.
    pub ebj0p_db: f64,
    #[serde(default)]
    pub placement: PlacementConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PlacementConfig {
    Uniform,
    Fixed { start: usize },
}

impl Default for PlacementConfig {
    fn default() -> Self {
        PlacementConfig::Uniform
    }
}

/// Stop rule: finish once enough codeword errors were seen or the frame
/// budget is spent, whichever comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopRule {
    #[serde(default = "default_min_errors")]
    pub min_codeword_errors: u64,
    pub max_frames: u64,
}

fn default_min_errors() -> u64 {
    100
}

/// Which bound columns to append to the CSV.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsRequest {
    #[serde(default)]
    pub sp59: bool,
    #[serde(default)]
    pub esplb: bool,
}

impl SweepConfig {
    /// Parses and validates a JSON sweep description.
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let cfg: SweepConfig =
            serde_json::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Structural consistency checks; everything that can be rejected before
    /// touching the filesystem or RNG is rejected here.
    pub fn validate(&self) -> Result<(), SimError> {
        let fail = |msg: String| Err(SimError::Config(msg));

        // Sweep grid.
        if self.sweep.grid.is_empty() {
            return fail("sweep grid is empty".into());
        }
        if self.sweep.grid.iter().any(|v| !v.is_finite()) {
            return fail("sweep grid holds a non-finite value".into());
        }
        if self.sweep.grid.windows(2).any(|w| w[1] <= w[0]) {
            return fail("sweep grid must be strictly increasing".into());
        }

        // Stop rule.
        if self.stop.min_codeword_errors == 0 || self.stop.max_frames == 0 {
            return fail("stop rule values must be positive".into());
        }

        // Scheme parameters.
        match &self.scheme {
            SchemeConfig::Uncoded | SchemeConfig::Bch63Sec => {}
            SchemeConfig::EbchMrb {
                order,
                pattern_budget,
            } => {
                if *order > 64 {
                    return fail(format!("reprocessing order {order} exceeds k = 64"));
                }
                if pattern_budget == &Some(0) {
                    return fail("pattern budget must be at least 1".into());
                }
            }
            SchemeConfig::Turbo { k, iterations, .. } => {
                if ![64, 128, 256].contains(k) {
                    return fail(format!(
                        "turbo frame size {k} not in the supported set {{64, 128, 256}}"
                    ));
                }
                if *iterations == 0 {
                    return fail("turbo iterations must be at least 1".into());
                }
            }
            SchemeConfig::Ldpc { max_iter, .. } => {
                if *max_iter == 0 {
                    return fail("sum-product iteration cap must be at least 1".into());
                }
            }
        }

        // Fixed Eb/N0: finite, or the +infinity noiseless sentinel (only
        // constructible through the API; JSON cannot encode it).
        let noiseless = self.channel.ebn0_db == Some(f64::INFINITY);
        if let Some(v) = self.channel.ebn0_db {
            if !v.is_finite() && !noiseless {
                return fail(format!("fixed Eb/N0 {v} is not finite"));
            }
        }

        // Swept-variable placement.
        match self.sweep.variable {
            SweepVariable::Ebn0Db => {
                // The noiseless sentinel overrides the axis (see
                // `ChannelTemplate::ebn0_db`); any finite fixed value clashes
                // with sweeping the same quantity.
                if self.channel.ebn0_db.is_some() && !noiseless {
                    return fail(
                        "ebn0_db is swept; remove the fixed value from the channel".into(),
                    );
                }
            }
            SweepVariable::Ebj0Db => {
                match &self.channel.jam {
                    JamTemplate::Pulsed { ebj0_db, .. } => {
                        if ebj0_db.is_some() {
                            return fail(
                                "ebj0_db is swept; remove the fixed value from the jammer".into(),
                            );
                        }
                    }
                    _ => return fail("sweeping ebj0_db requires a pulsed jammer".into()),
                }
                if self.channel.ebn0_db.is_none() {
                    return fail("sweeping ebj0_db requires a fixed ebn0_db".into());
                }
            }
            SweepVariable::SirDb => {
                match &self.channel.jam {
                    JamTemplate::Cw { sir_db, .. } | JamTemplate::Pn { sir_db, .. } => {
                        if sir_db.is_some() {
                            return fail(
                                "sir_db is swept; remove the fixed value from the jammer".into(),
                            );
                        }
                    }
                    _ => return fail("sweeping sir_db requires a CW or PN jammer".into()),
                }
                if self.channel.ebn0_db.is_none() {
                    return fail("sweeping sir_db requires a fixed ebn0_db".into());
                }
            }
        }

        // Non-swept jammer values must be present and sane.
        match &self.channel.jam {
            JamTemplate::None => {}
            JamTemplate::Pulsed { rho, ebj0_db } => {
                if !(*rho > 0.0 && *rho <= 1.0) {
                    return fail(format!("duty cycle {rho} outside (0, 1]"));
                }
                if ebj0_db.is_none() && self.sweep.variable != SweepVariable::Ebj0Db {
                    return fail("pulsed jammer needs ebj0_db (fixed or swept)".into());
                }
                if let Some(v) = ebj0_db {
                    if !v.is_finite() {
                        return fail(format!("fixed Eb/J0 {v} is not finite"));
                    }
                }
            }
            JamTemplate::Cw {
                sir_db,
                processing_gain,
                delta_omega,
                ..
            } => {
                if *processing_gain == 0 {
                    return fail("processing gain must be at least 1".into());
                }
                if *delta_omega != 0.0 {
                    return fail("nonzero jammer frequency offset is not supported".into());
                }
                if sir_db.is_none() && self.sweep.variable != SweepVariable::SirDb {
                    return fail("CW jammer needs sir_db (fixed or swept)".into());
                }
            }
            JamTemplate::Pn {
                sir_db,
                processing_gain,
            } => {
                if *processing_gain == 0 {
                    return fail("processing gain must be at least 1".into());
                }
                if sir_db.is_none() && self.sweep.variable != SweepVariable::SirDb {
                    return fail("PN jammer needs sir_db (fixed or swept)".into());
                }
            }
        }

        // Interleaving / container consistency.
        match self.interleaving {
            InterleavingMode::None => {}
            InterleavingMode::Ideal => {
                if self.cltu.is_some() {
                    return fail(
                        "CLTU mode cannot be paired with ideal interleaving \
                         (the container defines its own block interleaver)"
                            .into(),
                    );
                }
                if !matches!(self.channel.jam, JamTemplate::Pulsed { .. }) {
                    return fail("ideal interleaving only affects pulsed jamming".into());
                }
            }
            InterleavingMode::Rowcol => {
                if self.cltu.is_none() {
                    return fail("row/column interleaving requires CLTU mode".into());
                }
            }
        }
        if let Some(cltu) = &self.cltu {
            if cltu.m == 0 {
                return fail("transfer frame length must be positive".into());
            }
            if !matches!(self.channel.jam, JamTemplate::None) {
                return fail(
                    "CLTU mode supports thermal noise plus an optional burst; \
                     remove the continuous jammer"
                        .into(),
                );
            }
        }
        if let Some(burst) = &self.burst {
            if self.cltu.is_none() {
                return fail("a burst jammer requires CLTU mode".into());
            }
            if burst.length == 0 {
                return fail("burst length must be positive".into());
            }
            if !burst.ebj0p_db.is_finite() {
                return fail("burst Eb/J0P must be finite".into());
            }
        }
        if noiseless {
            if !matches!(self.channel.jam, JamTemplate::None) || self.burst.is_some() {
                return fail("the noiseless sentinel requires a jamming-free channel".into());
            }
            if self.bounds.sp59 || self.bounds.esplb {
                return fail("bounds are undefined for the noiseless sentinel".into());
            }
        }

        // Bound columns.
        if self.bounds.esplb && !matches!(self.channel.jam, JamTemplate::Pulsed { .. }) {
            return fail("the pulsed-jamming bound column requires a pulsed jammer".into());
        }
        if (self.bounds.sp59 || self.bounds.esplb)
            && matches!(self.scheme, SchemeConfig::Uncoded)
        {
            return fail("sphere-packing bounds need a block length of at least 2".into());
        }
        Ok(())
    }

    /// Number of codewords per simulated frame.
    pub fn blocks_per_frame(&self, codec_k: usize) -> usize {
        match &self.cltu {
            Some(c) => c.m.div_ceil(codec_k),
            None => 1,
        }
    }
}
