//! Monte-Carlo sweep engine.
//!
//! Reproducibility contract: every frame draws from its own counter-seeded
//! RNG (`seed` + a stream id derived from the point and frame indices), and
//! frames are committed in fixed batches before the stop rule is consulted.
//! Results — including the rendered CSV — are therefore byte-identical for a
//! given configuration regardless of worker count or prior runs.

use super::codec::{build_codec, Codec};
use super::config::{
    InterleavingMode, JamTemplate, JsiMode, PlacementConfig, SweepConfig,
};
use super::SimError;
use crate::bounds;
use crate::channel::{
    apply_channel, llr_frontend, modulate, ChannelConfig, JamConfig, Jsi, PulseAlignment,
};
use crate::cltu::{
    apply_burst, departition, partition_tf, rowcol_deinterleave, rowcol_interleave,
    BurstPlacement, BurstSpec, CltuLayout,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

/// Frames simulated between stop-rule checks. Fixed so that the set of
/// simulated frames — and hence every counter — is independent of timing and
/// worker count.
const BATCH: u64 = 256;

/// Magnitude of the llrs fed to decoders on the noiseless path.
const NOISELESS_LLR: f64 = 40.0;

/// Measured outcome of one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Swept-variable value in dB (a nominal label on the noiseless path).
    pub value_db: f64,
    pub frames: u64,
    pub codewords: u64,
    pub codeword_errors: u64,
    pub frame_errors: u64,
    /// Codeword error rate `codeword_errors / codewords`.
    pub cer: f64,
    /// Frame error rate `frame_errors / frames`.
    pub fer: f64,
    /// 95% normal-approximation half-width for `cer`.
    pub cer_ci95: f64,
    /// 95% normal-approximation half-width for `fer`.
    pub fer_ci95: f64,
    /// Wall-clock seconds spent on this point (not part of the CSV).
    pub wall_secs: f64,
}

/// All points of a sweep plus the rendered CSV table.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub results: Vec<SimResult>,
    pub csv: String,
}

/// Everything derived from the configuration that per-frame code needs.
/// Construction validates all of it, so the hot path can unwrap.
struct Runtime {
    codec: Box<dyn Codec>,
    layout: Option<CltuLayout>,
    /// Information bits drawn per frame (`m` with a container, `k` without).
    msg_len: usize,
    jsi: Jsi,
    clip: bool,
    rowcol: bool,
    burst: Option<BurstSpec>,
    noiseless: bool,
}

impl Runtime {
    fn build(cfg: &SweepConfig) -> Result<Self, SimError> {
        cfg.validate()?;
        let codec = build_codec(&cfg.scheme)?;
        let layout = cfg
            .cltu
            .as_ref()
            .map(|c| CltuLayout::new(c.m, codec.k(), codec.n()))
            .transpose()
            .map_err(|e| SimError::Config(e.to_string()))?;
        let msg_len = layout.as_ref().map_or(codec.k(), |l| l.m);
        let burst = cfg.burst.as_ref().map(|b| BurstSpec {
            length: b.length,
            ebj0p_db: b.ebj0p_db,
            placement: match b.placement {
                PlacementConfig::Uniform => BurstPlacement::UniformRandom,
                PlacementConfig::Fixed { start } => BurstPlacement::Fixed(start),
            },
        });
        if let (Some(b), Some(l)) = (&burst, &layout) {
            let coded = l.coded_len();
            let fits = match b.placement {
                BurstPlacement::Fixed(start) => {
                    start.checked_add(b.length).is_some_and(|end| end <= coded)
                }
                BurstPlacement::UniformRandom => b.length <= coded,
            };
            if !fits {
                return Err(SimError::Config(format!(
                    "burst of {} samples does not fit in the {coded}-symbol coded frame",
                    b.length
                )));
            }
        }
        let rt = Runtime {
            codec,
            layout,
            msg_len,
            jsi: match cfg.jsi {
                JsiMode::Perfect => Jsi::Perfect,
                JsiMode::None => Jsi::None,
            },
            clip: cfg.clip,
            rowcol: cfg.interleaving == InterleavingMode::Rowcol,
            burst,
            noiseless: cfg.channel.ebn0_db == Some(f64::INFINITY),
        };
        // Reject bad operating points now rather than mid-run.
        for &value_db in &cfg.sweep.grid {
            rt.channel_at(cfg, value_db)?;
        }
        Ok(rt)
    }

    /// Concrete channel for one grid point; `None` on the noiseless path.
    fn channel_at(
        &self,
        cfg: &SweepConfig,
        value_db: f64,
    ) -> Result<Option<ChannelConfig>, SimError> {
        if self.noiseless {
            return Ok(None);
        }
        let alignment = match cfg.interleaving {
            InterleavingMode::Ideal => PulseAlignment::IdealInterleaved,
            InterleavingMode::None | InterleavingMode::Rowcol => PulseAlignment::CodewordAligned,
        };
        // Exactly one template slot is empty (enforced by validation); it
        // receives the swept value.
        let jam = match &cfg.channel.jam {
            JamTemplate::None => JamConfig::None,
            JamTemplate::Pulsed { rho, ebj0_db } => JamConfig::Pulsed {
                rho: *rho,
                ebj0_db: ebj0_db.unwrap_or(value_db),
                alignment,
            },
            JamTemplate::Cw {
                sir_db,
                processing_gain,
                theta_j,
                delta_omega,
            } => JamConfig::Cw {
                sir_db: sir_db.unwrap_or(value_db),
                processing_gain: *processing_gain,
                theta_j: *theta_j,
                delta_omega: *delta_omega,
            },
            JamTemplate::Pn {
                sir_db,
                processing_gain,
            } => JamConfig::Pn {
                sir_db: sir_db.unwrap_or(value_db),
                processing_gain: *processing_gain,
            },
        };
        let chan = ChannelConfig {
            ebn0_db: cfg.channel.ebn0_db.unwrap_or(value_db),
            code_rate: self.codec.rate(),
            jam,
        };
        chan.validate()
            .map_err(|e| SimError::Config(e.to_string()))?;
        Ok(Some(chan))
    }
}

struct FrameOutcome {
    codewords: u64,
    codeword_errors: u64,
    frame_error: bool,
}

/// Simulates frame `frame_idx` of point `point_idx` on its private RNG.
fn run_frame(
    rt: &Runtime,
    chan: Option<&ChannelConfig>,
    seed: u64,
    point_idx: usize,
    frame_idx: u64,
) -> FrameOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point_idx as u64) << 40) | frame_idx);

    let msg: Vec<u8> = (0..rt.msg_len).map(|_| u8::from(rng.gen::<bool>())).collect();
    let blocks: Vec<Vec<u8>> = match &rt.layout {
        Some(layout) => partition_tf(&msg, layout.k).expect("layout validated"),
        None => vec![msg.clone()],
    };
    let mut tx = Vec::with_capacity(blocks.len() * rt.codec.n());
    for block in &blocks {
        tx.extend_from_slice(&rt.codec.encode(block));
    }
    if rt.rowcol {
        tx = rowcol_interleave(&tx);
    }
    let symbols = modulate(&tx);

    let mut llr: Vec<f64> = match chan {
        None => symbols.iter().map(|&s| s * NOISELESS_LLR).collect(),
        Some(chan) => {
            let mut received =
                apply_channel(&symbols, chan, &mut rng).expect("channel validated");
            if let Some(burst) = &rt.burst {
                apply_burst(&mut received, burst, chan.code_rate, &mut rng)
                    .expect("burst fit validated");
            }
            llr_frontend(&received, rt.jsi, rt.clip)
        }
    };
    if rt.rowcol {
        llr = rowcol_deinterleave(&llr);
    }

    let n = rt.codec.n();
    let mut codeword_errors = 0u64;
    let mut decoded = Vec::with_capacity(blocks.len());
    for (i, sent) in blocks.iter().enumerate() {
        let dec = rt.codec.decode(&llr[i * n..(i + 1) * n]);
        if dec.flagged || dec.msg != *sent {
            codeword_errors += 1;
        }
        decoded.push(dec.msg);
    }
    let frame_error = match &rt.layout {
        // A frame is the transfer frame: compare the reassembled information
        // bits (fill stripped) against what was sent.
        Some(layout) => departition(&decoded, layout.m).expect("layout validated") != msg,
        None => codeword_errors > 0,
    };
    FrameOutcome {
        codewords: blocks.len() as u64,
        codeword_errors,
        frame_error,
    }
}

fn simulate_point(
    rt: &Runtime,
    cfg: &SweepConfig,
    point_idx: usize,
    workers: usize,
) -> Result<SimResult, SimError> {
    let value_db = *cfg
        .sweep
        .grid
        .get(point_idx)
        .ok_or_else(|| SimError::Config(format!("no grid point {point_idx}")))?;
    let chan = rt.channel_at(cfg, value_db)?;
    let pool = if workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| SimError::Runtime(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let start = Instant::now();
    let mut frames = 0u64;
    let (mut codewords, mut codeword_errors, mut frame_errors) = (0u64, 0u64, 0u64);
    while frames < cfg.stop.max_frames && codeword_errors < cfg.stop.min_codeword_errors {
        let batch = BATCH.min(cfg.stop.max_frames - frames);
        let range = frames..frames + batch;
        let run = |frame_idx| run_frame(rt, chan.as_ref(), cfg.seed, point_idx, frame_idx);
        let outcomes: Vec<FrameOutcome> = match &pool {
            Some(pool) => pool.install(|| range.into_par_iter().map(run).collect()),
            None => range.map(run).collect(),
        };
        for o in outcomes {
            codewords += o.codewords;
            codeword_errors += o.codeword_errors;
            frame_errors += u64::from(o.frame_error);
        }
        frames += batch;
    }

    let rate = |errors: u64, trials: u64| errors as f64 / trials as f64;
    let ci95 = |p: f64, trials: u64| 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
    let cer = rate(codeword_errors, codewords);
    let fer = rate(frame_errors, frames);
    Ok(SimResult {
        value_db,
        frames,
        codewords,
        codeword_errors,
        frame_errors,
        cer,
        fer,
        cer_ci95: ci95(cer, codewords),
        fer_ci95: ci95(fer, frames),
        wall_secs: start.elapsed().as_secs_f64(),
    })
}

fn build_csv(cfg: &SweepConfig, results: &[SimResult], codec: &dyn Codec) -> Result<String, SimError> {
    let mut out = String::from(
        "sweep_var,value_db,frames,cw_errors,fr_errors,cer,fer,cer_ci95,fer_ci95,seed",
    );
    if cfg.bounds.sp59 {
        out.push_str(",sp59");
    }
    if cfg.bounds.esplb {
        out.push_str(",esplb");
    }
    out.push('\n');
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}",
            cfg.sweep.variable.as_str(),
            r.value_db,
            r.frames,
            r.codeword_errors,
            r.frame_errors,
            r.cer,
            r.fer,
            r.cer_ci95,
            r.fer_ci95,
            cfg.seed
        ));
        let ebn0_db = cfg.channel.ebn0_db.unwrap_or(r.value_db);
        if cfg.bounds.sp59 {
            let v = bounds::sp59(codec.rate(), codec.n(), ebn0_db).map_err(|e| {
                SimError::Runtime(format!("sphere-packing bound at {ebn0_db} dB: {e}"))
            })?;
            out.push_str(&format!(",{v}"));
        }
        if cfg.bounds.esplb {
            let (rho, ebj0_db) = match &cfg.channel.jam {
                JamTemplate::Pulsed { rho, ebj0_db } => (*rho, ebj0_db.unwrap_or(r.value_db)),
                _ => unreachable!("validation requires a pulsed jammer for this column"),
            };
            let v = bounds::esplb(codec.rate(), codec.n(), ebn0_db, ebj0_db, rho).map_err(
                |e| {
                    SimError::Runtime(format!(
                        "pulsed-jamming bound at {ebn0_db}/{ebj0_db} dB: {e}"
                    ))
                },
            )?;
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Simulates a single grid point.
pub fn run_point(cfg: &SweepConfig, point_idx: usize, workers: usize) -> Result<SimResult, SimError> {
    let rt = Runtime::build(cfg)?;
    simulate_point(&rt, cfg, point_idx, workers)
}

/// Runs the whole sweep, invoking `on_point` after each finished point.
pub fn run_sweep_with(
    cfg: &SweepConfig,
    workers: usize,
    mut on_point: impl FnMut(usize, &SimResult),
) -> Result<SweepOutput, SimError> {
    let rt = Runtime::build(cfg)?;
    let mut results = Vec::with_capacity(cfg.sweep.grid.len());
    for point_idx in 0..cfg.sweep.grid.len() {
        let result = simulate_point(&rt, cfg, point_idx, workers)?;
        on_point(point_idx, &result);
        results.push(result);
    }
    let csv = build_csv(cfg, &results, rt.codec.as_ref())?;
    Ok(SweepOutput { results, csv })
}

/// Runs the whole sweep.
pub fn run_sweep(cfg: &SweepConfig, workers: usize) -> Result<SweepOutput, SimError> {
    run_sweep_with(cfg, workers, |_, _| {})
}
