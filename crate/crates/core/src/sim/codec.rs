//! Uniform encoder/decoder interface over the supported coding schemes.
//!
//! Every scheme is reduced to "encode `k` bits into `n` bits" and "turn `n`
//! log-likelihood ratios into a `k`-bit message, optionally flagging a
//! detected failure". Input lengths are enforced by the engine, which
//! validates them once at build time, so the per-block methods are
//! panic-on-misuse rather than `Result`-returning.

use super::config::SchemeConfig;
use super::SimError;
use crate::bch::{Bch63, Bch63Mode, BchStatus, Ebch128};
use crate::gf2::BitMatrix;
use crate::ldpc::{ldpc_encode, load_alist, spa_decode, ParityCheck};
use crate::mrb::{mrb_decode, MrbConfig};
use crate::turbo::{default_interleaver, turbo_decode, turbo_encode, TurboSpec};

/// Outcome of decoding one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedBlock {
    pub msg: Vec<u8>,
    /// The decoder declared the block uncorrectable instead of deciding.
    pub flagged: bool,
}

/// One coding scheme, usable from worker threads.
pub trait Codec: Send + Sync {
    /// Coded block length in bits.
    fn n(&self) -> usize;
    /// Information bits per block.
    fn k(&self) -> usize;
    fn encode(&self, msg: &[u8]) -> Vec<u8>;
    /// Decodes one block of `n` llrs (positive favors bit 0).
    fn decode(&self, llr: &[f64]) -> DecodedBlock;
    fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }
}

/// Instantiates the scheme described by `cfg`, loading any referenced files.
pub fn build_codec(cfg: &SchemeConfig) -> Result<Box<dyn Codec>, SimError> {
    match cfg {
        SchemeConfig::Uncoded => Ok(Box::new(Uncoded)),
        SchemeConfig::Bch63Sec => Ok(Box::new(Bch63Sec { code: Bch63::new() })),
        SchemeConfig::EbchMrb {
            order,
            pattern_budget,
        } => {
            let code = Ebch128::new();
            let generator = code.generator_matrix();
            Ok(Box::new(EbchMrb {
                code,
                generator,
                cfg: MrbConfig {
                    order: *order,
                    pattern_budget: *pattern_budget,
                },
            }))
        }
        SchemeConfig::Turbo {
            k,
            iterations,
            interleaver,
        } => {
            let pi = match interleaver {
                Some(def) => def.clone(),
                None => default_interleaver(*k).ok_or_else(|| {
                    SimError::Config(format!("no default interleaver for frame size {k}"))
                })?,
            };
            let spec = TurboSpec::standard(*k, &pi)
                .map_err(|e| SimError::Config(format!("turbo setup: {e}")))?;
            Ok(Box::new(Turbo {
                spec,
                iterations: *iterations,
            }))
        }
        SchemeConfig::Ldpc { alist, max_iter } => {
            let text = std::fs::read_to_string(alist)
                .map_err(|e| SimError::Config(format!("cannot read alist file {alist}: {e}")))?;
            let pc = load_alist(&text)
                .map_err(|e| SimError::Config(format!("alist file {alist}: {e}")))?;
            Ok(Box::new(Ldpc {
                pc,
                max_iter: *max_iter,
            }))
        }
    }
}

/// Plain BPSK slicer (one-bit blocks), for calibration runs.
struct Uncoded;

impl Codec for Uncoded {
    fn n(&self) -> usize {
        1
    }
    fn k(&self) -> usize {
        1
    }
    fn encode(&self, msg: &[u8]) -> Vec<u8> {
        msg.to_vec()
    }
    fn decode(&self, llr: &[f64]) -> DecodedBlock {
        DecodedBlock {
            msg: llr.iter().map(|&l| u8::from(l < 0.0)).collect(),
            flagged: false,
        }
    }
}

/// Hard-decision single-error-correcting (63,56) BCH.
struct Bch63Sec {
    code: Bch63,
}

impl Codec for Bch63Sec {
    fn n(&self) -> usize {
        Bch63::N
    }
    fn k(&self) -> usize {
        Bch63::K
    }
    fn encode(&self, msg: &[u8]) -> Vec<u8> {
        self.code.encode(msg).expect("message length checked")
    }
    fn decode(&self, llr: &[f64]) -> DecodedBlock {
        let hard: Vec<u8> = llr.iter().map(|&l| u8::from(l < 0.0)).collect();
        let decision = self
            .code
            .decode_hard(&hard, Bch63Mode::Sec)
            .expect("block length checked");
        DecodedBlock {
            msg: decision.msg,
            flagged: decision.status == BchStatus::DetectedUncorrectable,
        }
    }
}

/// Extended (128,64) BCH under most-reliable-basis reprocessing.
struct EbchMrb {
    code: Ebch128,
    generator: BitMatrix,
    cfg: MrbConfig,
}

impl Codec for EbchMrb {
    fn n(&self) -> usize {
        Ebch128::N
    }
    fn k(&self) -> usize {
        Ebch128::K
    }
    fn encode(&self, msg: &[u8]) -> Vec<u8> {
        self.code.encode(msg).expect("message length checked")
    }
    fn decode(&self, llr: &[f64]) -> DecodedBlock {
        let decision =
            mrb_decode(llr, &self.generator, &self.cfg).expect("inputs validated at build time");
        DecodedBlock {
            msg: decision.msg,
            flagged: false,
        }
    }
}

/// Rate-1/2 sixteen-state parallel turbo code.
struct Turbo {
    spec: TurboSpec,
    iterations: usize,
}

impl Codec for Turbo {
    fn n(&self) -> usize {
        self.spec.n_post()
    }
    fn k(&self) -> usize {
        self.spec.k()
    }
    fn encode(&self, msg: &[u8]) -> Vec<u8> {
        turbo_encode(msg, &self.spec).expect("message length checked")
    }
    fn decode(&self, llr: &[f64]) -> DecodedBlock {
        let (msg, _) = turbo_decode(llr, &self.spec, self.iterations);
        DecodedBlock {
            msg,
            flagged: false,
        }
    }
}

/// Sum-product decoded LDPC code from an adjacency file.
struct Ldpc {
    pc: ParityCheck,
    max_iter: usize,
}

impl Codec for Ldpc {
    fn n(&self) -> usize {
        self.pc.n()
    }
    fn k(&self) -> usize {
        self.pc.k()
    }
    fn encode(&self, msg: &[u8]) -> Vec<u8> {
        ldpc_encode(&self.pc, msg).expect("message length checked")
    }
    fn decode(&self, llr: &[f64]) -> DecodedBlock {
        let decision = spa_decode(&self.pc, llr, self.max_iter);
        DecodedBlock {
            msg: self.pc.extract_msg(&decision.codeword),
            flagged: false,
        }
    }
}
