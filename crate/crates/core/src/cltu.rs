//! Transfer-frame framing and the square row-by-column channel interleaver,
//! with a deterministic burst-jamming overlay.
//!
//! A transfer frame of `M` bits is split into `N = ceil(M/k)` blocks of `k`
//! info bits (the last block zero-filled), each block is encoded to `n` coded
//! bits, and the `C = N*n` coded symbols are passed through an `R x R`
//! row-by-column interleaver with `R = ceil(sqrt(C))`: symbols are written
//! row-wise and read column-wise, skipping the `R*R - C` unused trailing
//! cells so the map stays a bijection on the `C` real positions.
//!
//! A burst jammer hits `B` consecutive *post-interleaver* symbols with extra
//! Gaussian noise of variance `1/(2 * R_c * Eb/J0P)`; after de-interleaving,
//! the hits are dispersed across codewords.

use crate::channel::ReceivedBlock;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Errors from framing or burst configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CltuError {
    #[error("invalid framing parameter: {0}")]
    InvalidParameter(String),
    #[error("burst of {burst} samples does not fit in a block of {block}")]
    BurstDoesNotFit { burst: usize, block: usize },
    #[error("fixed burst at {start} (+{burst}) overruns the block of {block}")]
    BurstOutOfRange {
        start: usize,
        burst: usize,
        block: usize,
    },
}

/// Geometry of one interleaved coded transfer frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CltuLayout {
    /// Transfer-frame length in bits.
    pub m: usize,
    /// Info bits per code block.
    pub k: usize,
    /// Coded bits per code block.
    pub n: usize,
}

impl CltuLayout {
    pub fn new(m: usize, k: usize, n: usize) -> Result<Self, CltuError> {
        if m == 0 || k == 0 || n < k {
            return Err(CltuError::InvalidParameter(format!(
                "need m >= 1 and 1 <= k <= n, got m={m} k={k} n={n}"
            )));
        }
        Ok(Self { m, k, n })
    }

    /// Number of code blocks, `ceil(m/k)`.
    pub fn blocks(&self) -> usize {
        self.m.div_ceil(self.k)
    }

    /// Zero bits appended to complete the last block.
    pub fn fill(&self) -> usize {
        self.blocks() * self.k - self.m
    }

    /// Total coded symbols per frame.
    pub fn coded_len(&self) -> usize {
        self.blocks() * self.n
    }

    /// Interleaver side, `ceil(sqrt(coded_len))`.
    pub fn side(&self) -> usize {
        interleaver_side(self.coded_len())
    }
}

fn interleaver_side(c: usize) -> usize {
    let mut r = (c as f64).sqrt() as usize;
    while r * r < c {
        r += 1;
    }
    r
}

/// Splits a transfer frame into `ceil(m/k)` blocks of `k` bits, zero-filling
/// the tail of the last block.
pub fn partition_tf(tf: &[u8], k: usize) -> Result<Vec<Vec<u8>>, CltuError> {
    let layout = CltuLayout::new(tf.len(), k, k)?;
    let mut blocks: Vec<Vec<u8>> = tf.chunks(k).map(<[u8]>::to_vec).collect();
    if let Some(last) = blocks.last_mut() {
        last.resize(k, 0);
    }
    debug_assert_eq!(blocks.len(), layout.blocks());
    Ok(blocks)
}

/// Reassembles a transfer frame of `m` bits from fixed-size blocks, stripping
/// the zero fill.
pub fn departition(blocks: &[Vec<u8>], m: usize) -> Result<Vec<u8>, CltuError> {
    let k = blocks.first().map_or(0, Vec::len);
    if m == 0 || k == 0 || blocks.iter().any(|b| b.len() != k) {
        return Err(CltuError::InvalidParameter(
            "blocks must be nonempty and equally sized".into(),
        ));
    }
    let total = blocks.len() * k;
    if m > total || total - m >= k {
        return Err(CltuError::InvalidParameter(format!(
            "{m} bits cannot come from {} blocks of {k}",
            blocks.len()
        )));
    }
    let mut tf: Vec<u8> = blocks.iter().flatten().copied().collect();
    tf.truncate(m);
    Ok(tf)
}

/// Read order of the row-write / column-read interleaver: `order[j]` is the
/// pre-interleaver index transmitted at post-interleaver position `j`.
pub fn rowcol_read_order(c: usize) -> Vec<usize> {
    let r = interleaver_side(c);
    let mut order = Vec::with_capacity(c);
    for col in 0..r {
        for row in 0..r {
            let idx = row * r + col;
            if idx < c {
                order.push(idx);
            }
        }
    }
    order
}

/// Permutes a coded block into transmission order.
pub fn rowcol_interleave<T: Copy>(xs: &[T]) -> Vec<T> {
    rowcol_read_order(xs.len()).iter().map(|&i| xs[i]).collect()
}

/// Inverts [`rowcol_interleave`].
pub fn rowcol_deinterleave<T: Copy + Default>(xs: &[T]) -> Vec<T> {
    let mut out = vec![T::default(); xs.len()];
    for (j, &i) in rowcol_read_order(xs.len()).iter().enumerate() {
        out[i] = xs[j];
    }
    out
}

/// Where the burst lands within the transmitted block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BurstPlacement {
    /// Start position drawn uniformly so the burst fits entirely.
    UniformRandom,
    /// Deterministic start position (no randomness consumed).
    Fixed(usize),
}

/// A burst jammer: `length` consecutive post-interleaver symbols hit with
/// extra noise set by `Eb/J0P` (jammer power referred to information bits).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurstSpec {
    pub length: usize,
    pub ebj0p_db: f64,
    pub placement: BurstPlacement,
}

/// Overlays burst noise of variance `1/(2 * code_rate * Eb/J0P)` on
/// `spec.length` consecutive samples of a thermal-noise-only block: samples
/// are perturbed, the jam mask marks the hit range, and the block's jammed
/// variance and jam fraction are updated. Returns the burst start position.
///
/// Draw order is fixed: one placement draw for uniform placement (none for
/// fixed), then `length` Gaussians, so two placements under the same seed add
/// exactly the same total noise energy.
pub fn apply_burst(
    block: &mut ReceivedBlock,
    spec: &BurstSpec,
    code_rate: f64,
    rng: &mut impl Rng,
) -> Result<usize, CltuError> {
    let c = block.samples.len();
    if spec.length == 0 || spec.length > c {
        return Err(CltuError::BurstDoesNotFit {
            burst: spec.length,
            block: c,
        });
    }
    if !(code_rate > 0.0 && code_rate <= 1.0) || !spec.ebj0p_db.is_finite() {
        return Err(CltuError::InvalidParameter(format!(
            "code_rate = {code_rate}, ebj0p_db = {}",
            spec.ebj0p_db
        )));
    }
    if block.jam_mask.iter().any(|&m| m) {
        return Err(CltuError::InvalidParameter(
            "burst overlay expects a block without prior jamming".into(),
        ));
    }
    let start = match spec.placement {
        BurstPlacement::Fixed(start) => {
            if start + spec.length > c {
                return Err(CltuError::BurstOutOfRange {
                    start,
                    burst: spec.length,
                    block: c,
                });
            }
            start
        }
        BurstPlacement::UniformRandom => rng.gen_range(0..=c - spec.length),
    };
    let sigma2_burst = 1.0 / (2.0 * code_rate * 10f64.powf(spec.ebj0p_db / 10.0));
    let sigma_burst = sigma2_burst.sqrt();
    for i in start..start + spec.length {
        let z: f64 = rng.sample(StandardNormal);
        block.samples[i] += sigma_burst * z;
        block.jam_mask[i] = true;
    }
    block.sigma2_jam = block.sigma2_clean + sigma2_burst;
    block.jam_fraction = spec.length as f64 / c as f64;
    Ok(start)
}
