//! Acceptance suite: ten end-to-end checks on the shipped toolkit, one test
//! per criterion so the harness emits one pass/fail line each. Every
//! tolerance is pinned in the assertion itself; seeds are fixed so reruns
//! are bit-for-bit reproducible. Informational measurements (dB gaps, error
//! rates, wall times) are printed and visible under `--nocapture`.
//!
//! Run with:
//!   cargo test -p jamlink --test acceptance -- --nocapture --test-threads 1

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::time::Instant;

use jamlink::bch::{bch63_hard_cer_analytic, Ebch128};
use jamlink::bounds;
use jamlink::channel::{apply_channel, modulate, ChannelConfig, JamConfig, PulseAlignment};
use jamlink::cltu::CltuLayout;
use jamlink::gf2::{encode_linear, BitMatrix};
use jamlink::mrb::{mrb_decode, MrbConfig};
use jamlink::sim::{
    run_sweep, BoundsRequest, BurstConfig, ChannelTemplate, CltuConfig, InterleavingMode,
    JamTemplate, JsiMode, PlacementConfig, SchemeConfig, SimResult, StopRule, SweepAxis,
    SweepConfig, SweepVariable,
};
use jamlink::turbo::{default_interleaver, rsc_encode, Interleaver, RscSpec, TurboSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tail probability of the standard normal distribution.
fn q(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Sweep skeleton with every optional feature off; tests overwrite the
/// fields they exercise.
fn base_cfg(scheme: SchemeConfig) -> SweepConfig {
    SweepConfig {
        scheme,
        channel: ChannelTemplate {
            ebn0_db: None,
            jam: JamTemplate::None,
        },
        sweep: SweepAxis {
            variable: SweepVariable::Ebn0Db,
            grid: vec![],
        },
        jsi: JsiMode::Perfect,
        clip: false,
        interleaving: InterleavingMode::None,
        cltu: None,
        burst: None,
        stop: StopRule {
            min_codeword_errors: 100,
            max_frames: 1,
        },
        seed: 1,
        bounds: BoundsRequest::default(),
    }
}

fn cer_curve(results: &[SimResult]) -> Vec<(f64, f64)> {
    results.iter().map(|r| (r.value_db, r.cer)).collect()
}

fn repo_path(rel: &str) -> String {
    format!("{}/../../{rel}", env!("CARGO_MANIFEST_DIR"))
}

/// Simulated BCH(63,56) hard-decision codeword error rates under pulsed
/// jamming must match the closed-form two-state oracle within the
/// simulation's own 95% confidence interval at every operating point:
/// Eb/J0 = 10 dB, duty cycles {0.2, 0.5, 1.0}, Eb/N0 in {4, 6, 8, 10} dB,
/// with pulses gating whole codewords and again under ideal symbol
/// interleaving. Each curve must finish in under five minutes.
#[test]
fn criterion_01_hard_decision_cer_matches_the_analytic_oracle_under_pulsed_jamming() {
    const SEED: u64 = 4103;
    const EBJ0_DB: f64 = 10.0;
    let rate = 56.0 / 63.0;

    for rho in [0.2, 0.5, 1.0] {
        for (mode, interleaved) in [
            (InterleavingMode::None, false),
            (InterleavingMode::Ideal, true),
        ] {
            let mut cfg = base_cfg(SchemeConfig::Bch63Sec);
            cfg.channel.jam = JamTemplate::Pulsed {
                rho,
                ebj0_db: Some(EBJ0_DB),
            };
            cfg.sweep.grid = vec![4.0, 6.0, 8.0, 10.0];
            cfg.interleaving = mode;
            cfg.stop = StopRule {
                min_codeword_errors: 100,
                max_frames: 200_000,
            };
            cfg.seed = SEED;

            let t = Instant::now();
            let out = run_sweep(&cfg, 1).unwrap();
            let wall = t.elapsed().as_secs_f64();

            let mut worst = 0.0f64;
            for r in &out.results {
                let chan = ChannelConfig {
                    ebn0_db: r.value_db,
                    code_rate: rate,
                    jam: JamConfig::Pulsed {
                        rho,
                        ebj0_db: EBJ0_DB,
                        alignment: PulseAlignment::CodewordAligned,
                    },
                };
                let sigma2_clean = chan.sigma2_clean();
                let sigma2_jam = sigma2_clean + chan.sigma2_jam_extra();
                let p_clean = q(1.0 / sigma2_clean.sqrt());
                let p_jam = q(1.0 / sigma2_jam.sqrt());
                let oracle = bch63_hard_cer_analytic(p_clean, p_jam, rho, interleaved).unwrap();
                let dev = (r.cer - oracle).abs();
                assert!(
                    dev <= r.cer_ci95,
                    "rho {rho}, {mode:?}, Eb/N0 {} dB: simulated {:.4e} vs analytic {:.4e} \
                     (|diff| {dev:.2e} > ci95 {:.2e})",
                    r.value_db,
                    r.cer,
                    oracle,
                    r.cer_ci95
                );
                worst = worst.max(dev / r.cer_ci95);
            }
            assert!(wall < 300.0, "curve took {wall:.0} s (limit 300 s)");
            println!(
                "[criterion 01] rho {rho:.1}, {mode:?}: all 4 points inside ci95 \
                 (worst |dev|/ci = {worst:.2}), {wall:.1} s"
            );
        }
    }
}

/// The noise-like jammer must be the exact worst-phase special case of the
/// tone jammer: with the same seed, a tone at phase 0 and frequency offset 0
/// produces bit-identical received blocks. Across a phase grid, the
/// empirical per-sample variance must scale as cos^2(theta) (linear
/// regression R^2 > 0.999 on one million samples per phase).
#[test]
fn criterion_02_tone_and_noise_jammers_are_equivalent_and_scale_with_phase() {
    const SEED: u64 = 4202;

    // Part 1: bit-for-bit equivalence on several blocks.
    let mut sym_rng = ChaCha8Rng::seed_from_u64(SEED);
    for block in 0..4u64 {
        let symbols: Vec<f64> = (0..512)
            .map(|_| if sym_rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let pn = ChannelConfig {
            ebn0_db: 6.0,
            code_rate: 0.5,
            jam: JamConfig::Pn {
                sir_db: 3.0,
                processing_gain: 4,
            },
        };
        let cw = ChannelConfig {
            ebn0_db: 6.0,
            code_rate: 0.5,
            jam: JamConfig::Cw {
                sir_db: 3.0,
                processing_gain: 4,
                theta_j: 0.0,
                delta_omega: 0.0,
            },
        };
        let mut rng_a = ChaCha8Rng::seed_from_u64(SEED + 10 + block);
        let mut rng_b = ChaCha8Rng::seed_from_u64(SEED + 10 + block);
        let got_pn = apply_channel(&symbols, &pn, &mut rng_a).unwrap();
        let got_cw = apply_channel(&symbols, &cw, &mut rng_b).unwrap();
        assert_eq!(got_pn, got_cw, "block {block} differs between PN and CW(0, 0)");
    }
    println!("[criterion 02] PN == CW(theta 0, offset 0): 4 blocks bit-identical");

    // Part 2: variance regression against cos^2(theta).
    const SAMPLES: usize = 1_000_000;
    let thetas = [0.0, 0.4, 0.7, 1.0, 1.3, FRAC_PI_2];
    let symbols = vec![1.0; SAMPLES];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, &theta) in thetas.iter().enumerate() {
        let chan = ChannelConfig {
            ebn0_db: 6.0,
            code_rate: 0.5,
            jam: JamConfig::Cw {
                sir_db: 0.0,
                processing_gain: 1,
                theta_j: theta,
                delta_omega: 0.0,
            },
        };
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 100 + i as u64);
        let block = apply_channel(&symbols, &chan, &mut rng).unwrap();
        // The transmitted symbol is +1, so deviations have known mean zero.
        let var = block.samples.iter().map(|s| (s - 1.0).powi(2)).sum::<f64>()
            / SAMPLES as f64;
        xs.push(theta.cos().powi(2));
        ys.push(var);
    }
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - ybar).powi(2)).sum();
    let r2 = 1.0 - ss_res / ss_tot;
    assert!(r2 > 0.999, "variance vs cos^2(theta): R^2 = {r2:.6}");
    // Slope should be the jammer variance scale lin(-SIR)/(2K) = 0.5 and the
    // intercept the thermal variance 1/(2 * 0.5 * 10^0.6) ~ 0.2512.
    println!(
        "[criterion 02] variance regression: R^2 = {r2:.7}, slope {slope:.5} (expect 0.5), \
         intercept {intercept:.5} (expect 0.2512)"
    );
}

/// Basis-reprocessing soft decoding must be exact maximum likelihood when
/// run at full order: on an extended Hamming (8,4) code, ten thousand noisy
/// frames decode identically to exhaustive codebook search. On the extended
/// BCH (128,64) code, the winning correlation metric must be monotonically
/// non-decreasing in the reprocessing order on a thousand frames.
#[test]
fn criterion_03_basis_reprocessing_matches_maximum_likelihood_at_toy_scale() {
    const SEED: u64 = 4303;

    // Extended Hamming (8,4): systematic generator, minimum distance 4.
    let g = BitMatrix::from_rows(&[
        vec![1, 0, 0, 0, 1, 1, 0, 1],
        vec![0, 1, 0, 0, 1, 0, 1, 1],
        vec![0, 0, 1, 0, 0, 1, 1, 1],
        vec![0, 0, 0, 1, 1, 1, 1, 0],
    ])
    .unwrap();
    let codebook: Vec<Vec<u8>> = (0..16u8)
        .map(|m| {
            let msg: Vec<u8> = (0..4).map(|i| (m >> i) & 1).collect();
            encode_linear(&g, &msg).unwrap()
        })
        .collect();
    let dmin = codebook
        .iter()
        .map(|c| c.iter().map(|&b| u32::from(b)).sum::<u32>())
        .filter(|&w| w > 0)
        .min()
        .unwrap();
    assert_eq!(dmin, 4, "fixture is not an extended Hamming code");

    let full_order = MrbConfig {
        order: 4,
        pattern_budget: None,
    };
    let sigma2: f64 = 1.0; // Eb/N0 = 0 dB at rate 1/2.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for frame in 0..10_000 {
        let idx = rng.gen_range(0..16);
        let llr: Vec<f64> = modulate(&codebook[idx])
            .iter()
            .map(|s| {
                let y = s + sigma2.sqrt() * rng.sample::<f64, _>(rand_distr::StandardNormal);
                2.0 * y / sigma2
            })
            .collect();
        let dec = mrb_decode(&llr, &g, &full_order).unwrap();
        let ml = codebook
            .iter()
            .max_by(|a, b| {
                let metric = |c: &[u8]| -> f64 {
                    c.iter()
                        .zip(&llr)
                        .map(|(&bit, &l)| l * (1.0 - 2.0 * f64::from(bit)))
                        .sum()
                };
                metric(a).total_cmp(&metric(b))
            })
            .unwrap();
        assert_eq!(
            &dec.codeword, ml,
            "frame {frame}: full-order reprocessing disagrees with exhaustive search"
        );
    }
    println!("[criterion 03] (8,4) full-order reprocessing == exhaustive ML on 10000 frames");

    // Extended BCH (128,64): the best metric found never degrades as the
    // reprocessing order grows (each order's pattern set contains the
    // previous one).
    let ebch = Ebch128::new();
    let g128 = ebch.generator_matrix();
    let sigma2 = 1.0 / (2.0 * 0.5 * 10f64.powf(3.5 / 10.0));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for frame in 0..1_000 {
        let msg: Vec<u8> = (0..64).map(|_| u8::from(rng.gen::<bool>())).collect();
        let cw = ebch.encode(&msg).unwrap();
        let llr: Vec<f64> = modulate(&cw)
            .iter()
            .map(|s| {
                let y = s + sigma2.sqrt() * rng.sample::<f64, _>(rand_distr::StandardNormal);
                2.0 * y / sigma2
            })
            .collect();
        let mut prev = f64::NEG_INFINITY;
        for order in 0..=4 {
            let cfg = MrbConfig {
                order,
                pattern_budget: None,
            };
            let dec = mrb_decode(&llr, &g128, &cfg).unwrap();
            assert!(
                dec.metric >= prev - 1e-9,
                "frame {frame}: metric {:.6} at order {order} below {:.6} at order {}",
                dec.metric,
                prev,
                order - 1
            );
            prev = dec.metric;
        }
    }
    println!("[criterion 03] (128,64) metric monotone in reprocessing order on 1000 frames");
}

/// Under pulsed jamming with perfect jammer-state information the simulated
/// extended BCH (128,64) order-4 error rate must respect the pulsed-jamming
/// sphere-packing lower bound: at duty cycle 0.5 and Eb/N0 = 10 dB, every
/// swept Eb/J0 point satisfies cer >= bound - 3 sigma. The dB gap between
/// the simulated curve and the bound at CER 1e-3 is reported.
#[test]
fn criterion_04_soft_decoding_stays_above_the_pulsed_jamming_lower_bound() {
    const SEED: u64 = 4404;
    let mut cfg = base_cfg(SchemeConfig::EbchMrb {
        order: 4,
        pattern_budget: None,
    });
    cfg.channel.ebn0_db = Some(10.0);
    cfg.channel.jam = JamTemplate::Pulsed {
        rho: 0.5,
        ebj0_db: None,
    };
    cfg.sweep = SweepAxis {
        variable: SweepVariable::Ebj0Db,
        grid: vec![0.0, 2.0, 4.0, 5.0, 6.0, 6.5],
    };
    cfg.stop = StopRule {
        min_codeword_errors: 50,
        max_frames: 60_000,
    };
    cfg.seed = SEED;

    let t = Instant::now();
    let out = run_sweep(&cfg, 1).unwrap();
    for r in &out.results {
        let bound = bounds::esplb(0.5, 128, 10.0, r.value_db, 0.5).unwrap();
        let sigma = r.cer_ci95 / 1.96;
        assert!(
            r.cer >= bound - 3.0 * sigma,
            "Eb/J0 {} dB: simulated {:.4e} below bound {:.4e} - 3 sigma ({:.1e})",
            r.value_db,
            r.cer,
            bound,
            sigma
        );
        println!(
            "[criterion 04] Eb/J0 {:>4} dB: cer {:.4e} (ci95 {:.1e}) >= bound {:.4e} - 3 sigma",
            r.value_db, r.cer, r.cer_ci95, bound
        );
    }

    // Informational: distance to the bound at CER 1e-3.
    let bound_curve: Vec<(f64, f64)> = (0..=16)
        .map(|i| {
            let x = 0.5 * i as f64;
            (x, bounds::esplb(0.5, 128, 10.0, x, 0.5).unwrap())
        })
        .collect();
    match bounds::db_gap_at_cer(&cer_curve(&out.results), &bound_curve, 1e-3) {
        Some(gap) => println!(
            "[criterion 04] gap to the lower bound at CER 1e-3: {gap:.2} dB ({:.1} s total)",
            t.elapsed().as_secs_f64()
        ),
        None => println!(
            "[criterion 04] CER 1e-3 not bracketed by the simulated grid; deepest point {:.3e}",
            out.results.last().map(|r| r.cer).unwrap_or(f64::NAN)
        ),
    }
}

/// On jamming-free AWGN at CER 1e-4, the extended BCH (128,64) code under
/// order-4 soft decoding must require at least 4.5 dB less Eb/N0 than the
/// hard-decision BCH(63,56) single-error-correcting decoder, inside a
/// thirty-minute budget.
#[test]
fn criterion_05_soft_decoding_gains_over_the_hard_decision_code_on_awgn() {
    let t = Instant::now();

    let mut bch = base_cfg(SchemeConfig::Bch63Sec);
    bch.sweep.grid = vec![7.5, 8.0, 8.5];
    bch.stop = StopRule {
        min_codeword_errors: 100,
        max_frames: 3_000_000,
    };
    bch.seed = 4505;
    let bch_out = run_sweep(&bch, 1).unwrap();

    // The soft-decoder curve is split so the deep point gets its own frame
    // budget (decoding is fastest there, errors are rarest).
    let ebch_scheme = SchemeConfig::EbchMrb {
        order: 4,
        pattern_budget: None,
    };
    let mut shallow = base_cfg(ebch_scheme.clone());
    shallow.sweep.grid = vec![2.5, 3.0];
    shallow.stop = StopRule {
        min_codeword_errors: 40,
        max_frames: 150_000,
    };
    shallow.seed = 4506;
    let shallow_out = run_sweep(&shallow, 1).unwrap();

    let mut deep = base_cfg(ebch_scheme);
    deep.sweep.grid = vec![3.5];
    deep.stop = StopRule {
        min_codeword_errors: 40,
        max_frames: 300_000,
    };
    deep.seed = 4507;
    let deep_out = run_sweep(&deep, 1).unwrap();

    let bch_curve = cer_curve(&bch_out.results);
    let mut ebch_curve = cer_curve(&shallow_out.results);
    ebch_curve.extend(cer_curve(&deep_out.results));

    for (name, curve) in [("bch63-sec", &bch_curve), ("ebch-mrb(4)", &ebch_curve)] {
        for (x, c) in curve {
            println!("[criterion 05] {name}: Eb/N0 {x:>4} dB -> cer {c:.4e}");
        }
    }
    let db_bch = bounds::db_at_cer(&bch_curve, 1e-4)
        .expect("hard-decision curve brackets CER 1e-4");
    let db_ebch = bounds::db_at_cer(&ebch_curve, 1e-4)
        .expect("soft-decision curve brackets CER 1e-4");
    let gain = db_bch - db_ebch;
    let wall = t.elapsed().as_secs_f64();
    assert!(
        gain >= 4.5,
        "coding gain at CER 1e-4: {gain:.2} dB ({db_bch:.2} vs {db_ebch:.2})"
    );
    assert!(wall < 1800.0, "criterion took {wall:.0} s (limit 1800 s)");
    println!(
        "[criterion 05] CER 1e-4 at {db_bch:.2} dB (hard) vs {db_ebch:.2} dB (soft): \
         gain {gain:.2} dB >= 4.5 dB, {wall:.0} s"
    );
}

/// Knowing the jammer state can only help: at duty cycle 0.5 and
/// Eb/N0 = 10 dB, each soft-decision scheme's perfect-JSI error rate is at
/// or below its blind (no-JSI, clipped) error rate at every swept Eb/J0
/// point, with non-overlapping 95% intervals at one point or more.
///
/// Two receivers can only diverge where the weighting matters, which
/// restricts the setup in two documented ways. The hard-decision schemes
/// are excluded: their decoders use only the sign of each sample, so
/// jammer-state weighting cannot change any decision and the receivers
/// coincide exactly. And the pulses are spread by the ideal interleaver:
/// when they gate whole codewords the jam state is constant inside each
/// block, jammer knowledge reduces to one global llr scale per block, and a
/// scale-invariant decoder (basis reprocessing) again decides identically;
/// per-sample jam states are what make the information valuable.
#[test]
fn criterion_06_jammer_state_information_never_hurts() {
    const SEED: u64 = 4606;
    let schemes: Vec<(&str, SchemeConfig)> = vec![
        (
            "ebch-mrb(4)",
            SchemeConfig::EbchMrb {
                order: 4,
                pattern_budget: None,
            },
        ),
        (
            "turbo k=64",
            SchemeConfig::Turbo {
                k: 64,
                iterations: 10,
                interleaver: None,
            },
        ),
        (
            "ldpc (128,64)",
            SchemeConfig::Ldpc {
                alist: repo_path("data/ldpc/placeholder_qc_128_64.alist"),
                max_iter: 100,
            },
        ),
    ];

    for (name, scheme) in schemes {
        let run = |jsi: JsiMode, clip: bool| -> Vec<SimResult> {
            let mut cfg = base_cfg(scheme.clone());
            cfg.channel.ebn0_db = Some(10.0);
            cfg.channel.jam = JamTemplate::Pulsed {
                rho: 0.5,
                ebj0_db: None,
            };
            cfg.sweep = SweepAxis {
                variable: SweepVariable::Ebj0Db,
                grid: vec![0.0, 1.0, 2.0],
            };
            cfg.jsi = jsi;
            cfg.clip = clip;
            cfg.interleaving = InterleavingMode::Ideal;
            cfg.stop = StopRule {
                min_codeword_errors: 100,
                max_frames: 30_000,
            };
            cfg.seed = SEED;
            run_sweep(&cfg, 1).unwrap().results
        };
        let informed = run(JsiMode::Perfect, false);
        let blind = run(JsiMode::None, true);

        let mut separated = false;
        for (p, b) in informed.iter().zip(&blind) {
            assert!(
                p.cer <= b.cer,
                "{name} at Eb/J0 {} dB: perfect JSI {:.4e} above blind {:.4e}",
                p.value_db,
                p.cer,
                b.cer
            );
            if p.cer + p.cer_ci95 < b.cer - b.cer_ci95 {
                separated = true;
            }
            println!(
                "[criterion 06] {name} Eb/J0 {:>4} dB: informed {:.4e} <= blind {:.4e}",
                p.value_db, p.cer, b.cer
            );
        }
        assert!(
            separated,
            "{name}: no swept point separates the receivers beyond both ci95 intervals"
        );
    }
}

/// A 100-symbol burst at in-pulse Eb/J0 = 0 dB hitting a 2048-bit transfer
/// frame (32 turbo codewords, 64x64 block interleaver) must be neutralized
/// by row/column interleaving: at the Eb/N0 where the jamming-free frame
/// error rate is about 1e-3, the interleaved burst FER stays within a
/// factor of two of jamming-free, while without interleaving it is at least
/// five times worse.
#[test]
fn criterion_07_row_column_interleaving_neutralizes_a_burst() {
    let t = Instant::now();

    // Locate the jamming-free operating point on the single-codeword error
    // rate curve: a 32-codeword frame misses CER target c at
    // FER = 1 - (1 - c)^32, so FER 1e-3 corresponds to c = 3.1255e-5.
    let cw_target = 1.0 - (1.0 - 1e-3f64).powf(1.0 / 32.0);
    let turbo = SchemeConfig::Turbo {
        k: 64,
        iterations: 10,
        interleaver: None,
    };
    let mut anchor_cfg = base_cfg(turbo.clone());
    anchor_cfg.sweep.grid = vec![4.0, 4.75];
    anchor_cfg.stop = StopRule {
        min_codeword_errors: 35,
        max_frames: 600_000,
    };
    anchor_cfg.seed = 4707;
    let mut anchor_out = run_sweep(&anchor_cfg, 1).unwrap();
    let mut curve = cer_curve(&anchor_out.results);
    if bounds::db_at_cer(&curve, cw_target).is_none() {
        // Waterfall shallower than expected: extend one point deeper.
        anchor_cfg.sweep.grid = vec![5.5];
        anchor_cfg.stop.max_frames = 900_000;
        let ext = run_sweep(&anchor_cfg, 1).unwrap();
        curve.extend(cer_curve(&ext.results));
        anchor_out.results.extend(ext.results);
    }
    let anchor = bounds::db_at_cer(&curve, cw_target)
        .expect("jamming-free waterfall brackets the target error rate");
    println!(
        "[criterion 07] jamming-free FER ~ 1e-3 at Eb/N0 = {anchor:.2} dB \
         (codeword curve {curve:?})"
    );

    // Three container runs at the anchor; the shared seed pairs the thermal
    // noise across them, tightening the ratio comparisons.
    let run = |interleaving: InterleavingMode, with_burst: bool| -> SimResult {
        let mut cfg = base_cfg(turbo.clone());
        cfg.sweep.grid = vec![anchor];
        cfg.interleaving = interleaving;
        cfg.cltu = Some(CltuConfig { m: 2048 });
        cfg.burst = with_burst.then_some(BurstConfig {
            length: 100,
            ebj0p_db: 0.0,
            placement: PlacementConfig::Uniform,
        });
        cfg.stop = StopRule {
            min_codeword_errors: 30,
            max_frames: 30_000,
        };
        cfg.seed = 4708;
        run_sweep(&cfg, 1).unwrap().results.remove(0)
    };
    let free = run(InterleavingMode::Rowcol, false);
    let dispersed = run(InterleavingMode::Rowcol, true);
    let aligned = run(InterleavingMode::None, true);

    println!(
        "[criterion 07] FER jamming-free {:.3e} ({} frames), burst+rowcol {:.3e}, \
         burst aligned {:.3e}",
        free.fer, free.frames, dispersed.fer, aligned.fer
    );
    assert!(
        free.fer > 2.5e-4 && free.fer < 4e-3,
        "operating point missed: jamming-free FER {:.3e} not near 1e-3",
        free.fer
    );
    assert!(
        dispersed.fer <= 2.0 * free.fer && dispersed.fer >= 0.5 * free.fer,
        "interleaved burst FER {:.3e} not within 2x of jamming-free {:.3e}",
        dispersed.fer,
        free.fer
    );
    assert!(
        aligned.fer >= 5.0 * free.fer,
        "non-interleaved burst FER {:.3e} below 5x jamming-free {:.3e}",
        aligned.fer,
        free.fer
    );
    println!(
        "[criterion 07] ratios: dispersed/free = {:.2}, aligned/free = {:.1} ({:.0} s)",
        dispersed.fer / free.fer,
        aligned.fer / free.fer,
        t.elapsed().as_secs_f64()
    );
}

/// Structural constants must hold exactly: turbo frame lengths before and
/// after tail puncturing, trellis termination to the zero state with
/// memory-length tails, interleaver bijectivity for every frozen default,
/// and the container arithmetic for a 2048-bit frame over the k=64 code.
#[test]
fn criterion_08_structural_constants_are_exact() {
    for (k, pre, post) in [(64, 136, 128), (128, 264, 256), (256, 520, 512)] {
        let def = default_interleaver(k).unwrap();
        let spec = TurboSpec::standard(k, &def).unwrap();
        assert_eq!(spec.n_pre(), pre, "pre-puncture length at k = {k}");
        assert_eq!(spec.n_post(), post, "post-puncture length at k = {k}");

        let ilv = Interleaver::new(k, &def).unwrap();
        let mut sorted = ilv.permutation().to_vec();
        sorted.sort_unstable();
        assert!(
            sorted.into_iter().eq(0..k),
            "default interleaver at k = {k} is not a bijection"
        );
    }

    let rsc = RscSpec::ccsds();
    assert_eq!(rsc.memory(), 4);
    let mut rng = ChaCha8Rng::seed_from_u64(4808);
    for _ in 0..32 {
        let bits: Vec<u8> = (0..64).map(|_| u8::from(rng.gen::<bool>())).collect();
        let enc = rsc_encode(&rsc, &bits, true);
        assert_eq!(enc.final_state, 0, "termination must land in state 0");
        assert_eq!(enc.tail_systematic.len(), rsc.memory());
        assert_eq!(enc.tail_parity.len(), rsc.memory());
        assert_eq!(enc.systematic, bits);
    }

    let layout = CltuLayout::new(2048, 64, 128).unwrap();
    assert_eq!(layout.blocks(), 32);
    assert_eq!(layout.coded_len(), 4096);
    assert_eq!(layout.side(), 64);
    println!(
        "[criterion 08] frame lengths 136/128, 264/256, 520/512; termination to zero; \
         bijective defaults; container 2048/64 -> 32 blocks, 4096 symbols, 64x64"
    );
}

/// The two independent quadratures behind the sphere-packing bound must
/// agree to four significant digits over block lengths {63, 128, 256, 512}
/// and Eb/N0 from 0 to 10 dB (compared in the log domain, where agreement
/// of |d ln p| < 5e-5 is the same statement and deep tails stay
/// representable), and the pulsed-jamming bound must reduce exactly (1e-10
/// relative) to the plain bound at duty cycle 1 and for a vanishing jammer.
#[test]
fn criterion_09_bound_quadratures_agree_and_reduce_correctly() {
    let t = Instant::now();
    let mut worst = (0.0f64, 0usize, 0.0f64, 0.0f64);
    for n in [63usize, 128, 256, 512] {
        for db in [0.0, 2.5, 5.0, 7.5, 10.0] {
            for rate in [0.5, 56.0 / 63.0] {
                let adaptive = bounds::sp59_ln(rate, n, db).unwrap();
                let reference = bounds::sp59_reference_ln(rate, n, db).unwrap();
                let dln = (adaptive - reference).abs();
                assert!(
                    dln < 5e-5,
                    "quadratures disagree at n {n}, {db} dB, rate {rate:.3}: |d ln p| = {dln:.2e}"
                );
                if dln > worst.0 {
                    worst = (dln, n, db, rate);
                }
            }
        }
    }
    println!(
        "[criterion 09] dual quadratures: worst |d ln p| = {:.2e} at n {}, {} dB, rate {:.3} \
         ({:.1} s for 40 cells)",
        worst.0,
        worst.1,
        worst.2,
        worst.3,
        t.elapsed().as_secs_f64()
    );

    // Duty cycle 1 must collapse the mixture onto the combined-noise bound.
    for ebn0_db in [2.0, 6.0] {
        let lhs = bounds::esplb(0.5, 128, ebn0_db, 4.0, 1.0).unwrap();
        let ebn0 = 10f64.powf(ebn0_db / 10.0);
        let combined = 1.0 / (1.0 / ebn0 + 1.0 / 10f64.powf(4.0 / 10.0));
        let rhs = bounds::sp59(0.5, 128, 10.0 * combined.log10()).unwrap();
        let rel = ((lhs - rhs) / rhs).abs();
        assert!(rel <= 1e-10, "duty-cycle-1 reduction off by {rel:.2e}");
    }
    // A 400 dB jammer is no jammer.
    for (rate, n, ebn0_db, rho) in [(0.5, 128, 2.0, 0.5), (0.5, 128, 6.0, 0.3), (56.0 / 63.0, 63, 7.0, 0.5)] {
        let lhs = bounds::esplb(rate, n, ebn0_db, 400.0, rho).unwrap();
        let rhs = bounds::sp59(rate, n, ebn0_db).unwrap();
        let rel = ((lhs - rhs) / rhs).abs();
        assert!(rel <= 1e-10, "vanishing-jammer reduction off by {rel:.2e}");
    }
    println!("[criterion 09] pulsed-bound reductions exact to 1e-10");
}

/// A shipped sweep rerun with the same seed must produce byte-identical CSV
/// for any worker count.
#[test]
fn criterion_10_sweeps_are_byte_identical_across_worker_counts() {
    let text = std::fs::read_to_string(repo_path("configs/bch63_pulsed_quicklook.json")).unwrap();
    let cfg = SweepConfig::from_json(&text).unwrap();
    let single = run_sweep(&cfg, 1).unwrap().csv;
    let double = run_sweep(&cfg, 2).unwrap().csv;
    let triple = run_sweep(&cfg, 3).unwrap().csv;
    assert!(single.starts_with("sweep_var,value_db,frames"));
    assert_eq!(single, double, "1 vs 2 workers");
    assert_eq!(single, triple, "1 vs 3 workers");
    println!(
        "[criterion 10] quicklook sweep identical across 1/2/3 workers ({} CSV bytes)",
        single.len()
    );
}
