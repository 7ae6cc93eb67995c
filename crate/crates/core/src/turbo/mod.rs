//! Rate-1/2 parallel concatenated (turbo) codes with 16-state recursive
//! systematic constituents, a configurable interleaver family, tail-parity
//! puncturing to an exact rate of 1/2, iterative exact log-MAP decoding, and
//! a truncated minimum-distance estimator.
//!
//! Frame structure for info length `k` and constituent memory `m` (4 for the
//! default encoders): both branches are terminated independently, and the
//! pre-puncture frame of `n_pre = 2(k + m)` bits is
//!
//! ```text
//! s_0 q_0 s_1 q_1 ... s_{k-1} q_{k-1} tp1_0..tp1_{m-1} tp2_0..tp2_{m-1}
//! ```
//!
//! where `s_i` is the systematic bit, `q_i` alternates between branch-1
//! parity (even `i`) and branch-2 parity (odd `i`), and `tp1`/`tp2` are the
//! termination parities of the two branches. Termination inputs are fixed
//! functions of the encoder state, carry no information, and are therefore
//! not transmitted. The default puncture removes the `2m` tail parities
//! (leaving termination structurally in place but uninformative to the
//! decoder), giving `n_post = 2k` exactly.

mod bcjr;
mod distance;
mod interleave;
mod rsc;

pub use distance::{estimate_dmin, DistanceReport};
pub use interleave::{
    default_interleaver, default_spread, drp_permutation, qpp_permutation, random_permutation,
    read_permutation_file, spread_permutation, spread_statistic, write_permutation_file,
    Interleaver, InterleaverDef,
};
pub use rsc::{rsc_encode, RscEncoding, RscSpec};

use bcjr::{bcjr_extrinsic, Trellis};
use thiserror::Error;

/// Errors from turbo code construction or encoding.
#[derive(Debug, Error)]
pub enum TurboError {
    #[error("message length {got} does not match info length {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("invalid constituent encoder: {0}")]
    BadConstituent(String),
    #[error("invalid interleaver: {0}")]
    BadInterleaver(String),
    #[error("invalid puncture pattern: {0}")]
    BadPuncture(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("permutation file error: {0}")]
    Io(#[from] std::io::Error),
}

/// Which pre-puncture positions are removed from the transmitted frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PuncturePattern {
    /// Remove the `2m` termination parity bits (the frame tail).
    TailParity,
    /// Remove exactly the listed pre-puncture positions (must count `2m` so
    /// the transmitted length is `2k`).
    Explicit(Vec<usize>),
}

/// A fully specified turbo code.
#[derive(Debug, Clone)]
pub struct TurboSpec {
    k: usize,
    rsc: RscSpec,
    interleaver: Interleaver,
    /// Pre-puncture positions removed, as a mask of length `n_pre`.
    punctured: Vec<bool>,
}

impl TurboSpec {
    pub fn new(
        k: usize,
        rsc: RscSpec,
        pi: &InterleaverDef,
        puncture: &PuncturePattern,
    ) -> Result<Self, TurboError> {
        if k == 0 {
            return Err(TurboError::BadParameter("k must be positive".into()));
        }
        let interleaver = Interleaver::new(k, pi)?;
        let m = rsc.memory();
        let n_pre = 2 * (k + m);
        let removed: Vec<usize> = match puncture {
            PuncturePattern::TailParity => (2 * k..n_pre).collect(),
            PuncturePattern::Explicit(v) => v.clone(),
        };
        if removed.len() != 2 * m {
            return Err(TurboError::BadPuncture(format!(
                "pattern must remove exactly {} bits to reach rate 1/2, removes {}",
                2 * m,
                removed.len()
            )));
        }
        let mut punctured = vec![false; n_pre];
        for &pos in &removed {
            if pos >= n_pre || punctured[pos] {
                return Err(TurboError::BadPuncture(format!(
                    "position {pos} out of range or repeated"
                )));
            }
            punctured[pos] = true;
        }
        Ok(Self {
            k,
            rsc,
            interleaver,
            punctured,
        })
    }

    /// Convenience constructor with the default 16-state constituents and
    /// tail-parity puncturing.
    pub fn standard(k: usize, pi: &InterleaverDef) -> Result<Self, TurboError> {
        Self::new(k, RscSpec::ccsds(), pi, &PuncturePattern::TailParity)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rsc(&self) -> &RscSpec {
        &self.rsc
    }

    pub fn interleaver(&self) -> &Interleaver {
        &self.interleaver
    }

    /// Frame length before puncturing, `2(k + m)`.
    pub fn n_pre(&self) -> usize {
        self.punctured.len()
    }

    /// Transmitted length, exactly `2k`.
    pub fn n_post(&self) -> usize {
        2 * self.k
    }
}

/// Encodes without puncturing (frame of `n_pre` bits).
pub fn turbo_encode_prepuncture(msg: &[u8], spec: &TurboSpec) -> Result<Vec<u8>, TurboError> {
    if msg.len() != spec.k {
        return Err(TurboError::LengthMismatch {
            got: msg.len(),
            expected: spec.k,
        });
    }
    let branch1 = rsc_encode(&spec.rsc, msg, true);
    let msg2 = spec.interleaver.permute(msg);
    let branch2 = rsc_encode(&spec.rsc, &msg2, true);
    debug_assert_eq!(branch1.final_state, 0);
    debug_assert_eq!(branch2.final_state, 0);
    let mut frame = Vec::with_capacity(spec.n_pre());
    for i in 0..spec.k {
        frame.push(msg[i]);
        frame.push(if i % 2 == 0 {
            branch1.parity[i]
        } else {
            branch2.parity[i]
        });
    }
    frame.extend_from_slice(&branch1.tail_parity);
    frame.extend_from_slice(&branch2.tail_parity);
    Ok(frame)
}

/// Encodes `msg` to the transmitted `2k`-bit codeword.
pub fn turbo_encode(msg: &[u8], spec: &TurboSpec) -> Result<Vec<u8>, TurboError> {
    let frame = turbo_encode_prepuncture(msg, spec)?;
    Ok(frame
        .into_iter()
        .zip(&spec.punctured)
        .filter(|(_, &p)| !p)
        .map(|(b, _)| b)
        .collect())
}

/// Iterative turbo decoding of `2k` channel llrs (positive favors bit 0).
///
/// Punctured positions are re-inserted as erasures (llr 0). Each iteration
/// runs one exact log-MAP pass per constituent, exchanging extrinsic
/// information; decoding stops early once the two constituents' hard
/// decisions on the information bits agree, and in any case after
/// `iterations` rounds. Returns the decided message and the number of
/// iterations actually used.
pub fn turbo_decode(llr: &[f64], spec: &TurboSpec, iterations: usize) -> (Vec<u8>, usize) {
    assert_eq!(llr.len(), spec.n_post(), "llr length must equal 2k");
    assert!(iterations >= 1);
    let k = spec.k;
    let m = spec.rsc.memory();

    // Depuncture into the pre-puncture frame, erasing removed positions.
    let mut pre = vec![0.0f64; spec.n_pre()];
    let mut fed = llr.iter();
    for (slot, &gone) in pre.iter_mut().zip(&spec.punctured) {
        if !gone {
            *slot = *fed.next().expect("length checked");
        }
    }

    // Demultiplex: systematic, per-branch parity (erased at the alternation
    // holes), and termination parity.
    let sys: Vec<f64> = (0..k).map(|i| pre[2 * i]).collect();
    let par1: Vec<f64> = (0..k)
        .map(|i| if i % 2 == 0 { pre[2 * i + 1] } else { 0.0 })
        .collect();
    let par2: Vec<f64> = (0..k)
        .map(|i| if i % 2 == 1 { pre[2 * i + 1] } else { 0.0 })
        .collect();
    let tp1 = pre[2 * k..2 * k + m].to_vec();
    let tp2 = pre[2 * k + m..].to_vec();

    let trellis = Trellis::new(&spec.rsc);
    let perm = spec.interleaver.permutation();
    let sys2: Vec<f64> = perm.iter().map(|&j| sys[j]).collect();

    let mut ext1 = vec![0.0f64; k];
    let mut ext2 = vec![0.0f64; k]; // branch-2 extrinsic in original order
    let mut used = iterations;
    for it in 1..=iterations {
        let (e1, app1) = bcjr_extrinsic(&trellis, &sys, &par1, &tp1, &ext2);
        ext1 = e1;
        let prior2: Vec<f64> = perm.iter().map(|&j| ext1[j]).collect();
        let (e2, app2) = bcjr_extrinsic(&trellis, &sys2, &par2, &tp2, &prior2);
        for (i, &j) in perm.iter().enumerate() {
            ext2[j] = e2[i];
        }
        let mut agree = true;
        for (i, &j) in perm.iter().enumerate() {
            if (app1[j] < 0.0) != (app2[i] < 0.0) {
                agree = false;
                break;
            }
        }
        if agree {
            used = it;
            break;
        }
    }
    let msg: Vec<u8> = (0..k)
        .map(|j| u8::from(sys[j] + ext1[j] + ext2[j] < 0.0))
        .collect();
    (msg, used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel, llr_frontend, modulate, ChannelConfig, JamConfig, Jsi};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spec(k: usize, seed: u64) -> TurboSpec {
        TurboSpec::standard(k, &InterleaverDef::Random { seed }).unwrap()
    }

    fn random_msg(k: usize, rng: &mut impl Rng) -> Vec<u8> {
        (0..k).map(|_| rng.gen_range(0..2u8)).collect()
    }

    #[test]
    fn frame_lengths_match_the_rate_half_contract() {
        for (k, pre, post) in [(64usize, 136usize, 128usize), (128, 264, 256), (256, 520, 512)] {
            let spec = random_spec(k, 90);
            assert_eq!(spec.n_pre(), pre);
            assert_eq!(spec.n_post(), post);
            let msg = vec![1u8; k];
            assert_eq!(turbo_encode_prepuncture(&msg, &spec).unwrap().len(), pre);
            assert_eq!(turbo_encode(&msg, &spec).unwrap().len(), post);
        }
    }

    #[test]
    fn zero_message_encodes_to_zero() {
        let spec = random_spec(64, 91);
        assert_eq!(turbo_encode(&[0; 64], &spec).unwrap(), vec![0u8; 128]);
    }

    #[test]
    fn encoding_is_linear() {
        let spec = random_spec(64, 92);
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        for _ in 0..50 {
            let a = random_msg(64, &mut rng);
            let b = random_msg(64, &mut rng);
            let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let ca = turbo_encode(&a, &spec).unwrap();
            let cb = turbo_encode(&b, &spec).unwrap();
            let csum = turbo_encode(&sum, &spec).unwrap();
            let xor: Vec<u8> = ca.iter().zip(&cb).map(|(x, y)| x ^ y).collect();
            assert_eq!(csum, xor);
        }
    }

    #[test]
    fn default_puncture_removes_only_tail_parity() {
        let spec = random_spec(64, 94);
        let mut rng = ChaCha8Rng::seed_from_u64(95);
        let msg = random_msg(64, &mut rng);
        let pre = turbo_encode_prepuncture(&msg, &spec).unwrap();
        let post = turbo_encode(&msg, &spec).unwrap();
        assert_eq!(&pre[..128], &post[..]);
    }

    #[test]
    fn explicit_punctures_are_validated() {
        let pi = InterleaverDef::Random { seed: 96 };
        let rsc = RscSpec::ccsds();
        assert!(TurboSpec::new(64, rsc, &pi, &PuncturePattern::Explicit(vec![0; 8])).is_err());
        assert!(
            TurboSpec::new(64, rsc, &pi, &PuncturePattern::Explicit((0..7).collect())).is_err()
        );
        assert!(
            TurboSpec::new(64, rsc, &pi, &PuncturePattern::Explicit(vec![130, 131, 132, 133, 134, 135, 136, 1])).is_err()
        );
        // Puncturing in-frame positions instead of the tail is allowed.
        let spec = TurboSpec::new(
            64,
            rsc,
            &pi,
            &PuncturePattern::Explicit(vec![1, 3, 5, 7, 9, 11, 13, 15]),
        )
        .unwrap();
        assert_eq!(spec.n_post(), 128);
        assert_eq!(turbo_encode(&[0; 64], &spec).unwrap().len(), 128);
    }

    #[test]
    fn both_branches_terminate_for_random_messages() {
        let spec = random_spec(64, 97);
        let mut rng = ChaCha8Rng::seed_from_u64(98);
        for _ in 0..100 {
            let msg = random_msg(64, &mut rng);
            let b1 = rsc_encode(spec.rsc(), &msg, true);
            let b2 = rsc_encode(spec.rsc(), &spec.interleaver().permute(&msg), true);
            assert_eq!((b1.final_state, b2.final_state), (0, 0));
        }
    }

    #[test]
    fn noiseless_llrs_decode_in_one_iteration() {
        let spec = random_spec(64, 99);
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        for _ in 0..20 {
            let msg = random_msg(64, &mut rng);
            let cw = turbo_encode(&msg, &spec).unwrap();
            let llr: Vec<f64> = cw.iter().map(|&b| 40.0 * (1.0 - 2.0 * f64::from(b))).collect();
            let (decided, iters) = turbo_decode(&llr, &spec, 10);
            assert_eq!(decided, msg);
            assert_eq!(iters, 1);
        }
    }

    #[test]
    fn high_snr_simulation_is_error_free() {
        let spec = random_spec(64, 101);
        let cfg = ChannelConfig {
            ebn0_db: 6.0,
            code_rate: 0.5,
            jam: JamConfig::None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(102);
        for frame in 0..10_000 {
            let msg = random_msg(64, &mut rng);
            let cw = turbo_encode(&msg, &spec).unwrap();
            let block = apply_channel(&modulate(&cw), &cfg, &mut rng).unwrap();
            let llr = llr_frontend(&block, Jsi::Perfect, false);
            let (decided, _) = turbo_decode(&llr, &spec, 10);
            assert_eq!(decided, msg, "frame {frame}");
        }
    }

    /// Exhaustive bit-MAP over all 2^k messages of a tiny turbo code built
    /// from 2-state accumulator constituents.
    #[test]
    fn decoder_matches_exhaustive_map_on_a_toy_code() {
        let k = 8;
        let rsc = RscSpec::new(0b11, 0b01).unwrap(); // feedback 1+D, parity = accumulator
        let spec = TurboSpec::new(
            k,
            rsc,
            &InterleaverDef::Explicit {
                perm: vec![3, 6, 0, 5, 1, 7, 2, 4],
            },
            &PuncturePattern::TailParity,
        )
        .unwrap();
        assert_eq!(spec.n_post(), 16);

        let codebook: Vec<(Vec<u8>, Vec<u8>)> = (0..1u32 << k)
            .map(|w| {
                let msg: Vec<u8> = (0..k).map(|j| ((w >> j) & 1) as u8).collect();
                let cw = turbo_encode(&msg, &spec).unwrap();
                (msg, cw)
            })
            .collect();

        let cfg = ChannelConfig {
            ebn0_db: 5.0,
            code_rate: 0.5,
            jam: JamConfig::None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for _ in 0..60 {
            let (msg, cw) = &codebook[rng.gen_range(0..codebook.len())];
            let _ = msg;
            let block = apply_channel(&modulate(cw), &cfg, &mut rng).unwrap();
            let llr = llr_frontend(&block, Jsi::Perfect, false);
            // Exhaustive per-bit MAP.
            let mut p0 = vec![0.0f64; k];
            let mut p1 = vec![0.0f64; k];
            for (m, c) in &codebook {
                let metric: f64 = llr
                    .iter()
                    .zip(c)
                    .map(|(&l, &b)| 0.5 * l * (1.0 - 2.0 * f64::from(b)))
                    .sum();
                let w = metric.exp();
                for j in 0..k {
                    if m[j] == 0 {
                        p0[j] += w;
                    } else {
                        p1[j] += w;
                    }
                }
            }
            let map_msg: Vec<u8> = (0..k).map(|j| u8::from(p0[j] < p1[j])).collect();
            let (decided, _) = turbo_decode(&llr, &spec, 10);
            assert_eq!(decided, map_msg);
        }
    }

    #[test]
    fn more_iterations_help_in_the_waterfall() {
        let spec = random_spec(64, 104);
        let cfg = ChannelConfig {
            ebn0_db: 1.0,
            code_rate: 0.5,
            jam: JamConfig::None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(105);
        let mut errors = [0usize; 2]; // [1 iteration, 10 iterations]
        let frames = 1500;
        for _ in 0..frames {
            let msg = random_msg(64, &mut rng);
            let cw = turbo_encode(&msg, &spec).unwrap();
            let block = apply_channel(&modulate(&cw), &cfg, &mut rng).unwrap();
            let llr = llr_frontend(&block, Jsi::Perfect, false);
            for (slot, iters) in [(0usize, 1usize), (1, 10)] {
                let (decided, _) = turbo_decode(&llr, &spec, iters);
                if decided != msg {
                    errors[slot] += 1;
                }
            }
        }
        // Require clear separation: binomial 95% intervals must not overlap.
        let ci = |e: usize| {
            let p = e as f64 / frames as f64;
            let hw = 1.96 * (p * (1.0 - p) / frames as f64).sqrt();
            (p - hw, p + hw)
        };
        let (one_lo, _) = ci(errors[0]);
        let (_, ten_hi) = ci(errors[1]);
        assert!(
            ten_hi < one_lo,
            "1 iter: {} errors, 10 iters: {} errors over {frames}",
            errors[0],
            errors[1]
        );
    }
}
