//! Order-`i` most-reliable-basis (MRB) soft-decision decoding for arbitrary
//! binary linear codes given a generator matrix.
//!
//! The decoder ranks received bits by reliability `|llr|`, systematizes the
//! generator on the most reliable linearly independent positions, hard-decides
//! those basis bits, and then re-encodes every error pattern of weight at most
//! `i` over the basis, keeping the candidate codeword with the largest
//! correlation metric `sum_j llr_j * (1 - 2*c_j)`. With `i = k` this is exact
//! maximum likelihood; small `i` trades optimality for speed.
//!
//! Internally candidates are compared through the equivalent discrepancy
//! `W(c) = sum of |llr_j| over bits where c disagrees with the hard decision`
//! (the metric is `sum|llr| - 2W`), which lets each pattern be scored by a few
//! word XORs instead of a full re-encoding.

use crate::gf2::{encode_linear, systematize_preferred, BitMatrix, Gf2Error, Systematized};
use thiserror::Error;

/// Errors from MRB decoding.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MrbError {
    #[error("invalid decoder input: {0}")]
    InvalidInput(String),
    #[error("invalid decoder configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Matrix(#[from] Gf2Error),
}

/// Reprocessing depth and optional work cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MrbConfig {
    /// Maximum Hamming weight of basis error patterns to test (order of the
    /// algorithm). `0` re-encodes the hard decision of the basis only.
    pub order: usize,
    /// Optional cap on the number of tested patterns. Patterns are visited in
    /// a fixed order — increasing weight, then lexicographically over basis
    /// positions sorted by ascending reliability (least reliable flipped
    /// first) — and the cap keeps exactly the first `pattern_budget` of them.
    /// The weight-zero pattern is tested first and counts, so a budget of 1
    /// reduces to order-0 decoding.
    pub pattern_budget: Option<u64>,
}

/// Result of one MRB decoding.
#[derive(Debug, Clone, PartialEq)]
pub struct MrbDecision {
    /// Winning codeword in transmission order.
    pub codeword: Vec<u8>,
    /// Message that encodes to `codeword` under the generator passed in.
    pub msg: Vec<u8>,
    /// Correlation metric `sum_j llr_j * (1 - 2*codeword_j)` of the winner.
    pub metric: f64,
}

/// Decodes one block of `n` log-likelihood ratios (positive favors bit 0)
/// against the `k x n` generator `g`.
pub fn mrb_decode(llr: &[f64], g: &BitMatrix, cfg: &MrbConfig) -> Result<MrbDecision, MrbError> {
    let (k, n) = (g.rows(), g.cols());
    if llr.len() != n {
        return Err(MrbError::InvalidInput(format!(
            "{} llrs for n = {n}",
            llr.len()
        )));
    }
    if llr.iter().any(|v| !v.is_finite()) {
        return Err(MrbError::InvalidInput("non-finite llr".into()));
    }
    if cfg.order > k {
        return Err(MrbError::BadConfig(format!(
            "order {} exceeds dimension {k}",
            cfg.order
        )));
    }
    if cfg.pattern_budget == Some(0) {
        return Err(MrbError::BadConfig("pattern_budget must be >= 1".into()));
    }

    // Step 1: rank positions by reliability, most reliable first; ties keep
    // the lower index first (stable sort).
    let mut preference: Vec<usize> = (0..n).collect();
    preference.sort_by(|&a, &b| llr[b].abs().partial_cmp(&llr[a].abs()).unwrap());

    // Step 2: systematize on the most reliable independent positions.
    let sys = systematize_preferred(g, &preference)?;

    // Permuted-domain views: position j of the systematized code is original
    // position perm[j].
    let llr_p: Vec<f64> = sys.perm.iter().map(|&orig| llr[orig]).collect();
    let hard_p: Vec<u8> = llr_p.iter().map(|&v| u8::from(v < 0.0)).collect();

    // Steps 3-4: hard-decide the basis and re-encode the baseline candidate.
    let v_star = &hard_p[..k];
    let c_star = encode_linear(&sys.g_sys, v_star)?;

    // Steps 5-6: reprocess error patterns over the basis.
    let mut search = Search::new(&llr_p, &hard_p, &c_star, &sys, cfg);
    search.run(cfg.order);
    let (best_pattern, best_w) = search.into_best();

    let mut u = v_star.to_vec();
    for &j in &best_pattern {
        u[j] ^= 1;
    }
    let codeword = permuted_codeword_to_original(&sys, &u, n)?;
    let msg = encode_linear(&sys.row_transform, &u)?;
    debug_assert_eq!(encode_linear(g, &msg).unwrap(), codeword);
    let total_reliability: f64 = llr.iter().map(|v| v.abs()).sum();
    Ok(MrbDecision {
        codeword,
        msg,
        metric: total_reliability - 2.0 * best_w,
    })
}

fn permuted_codeword_to_original(
    sys: &Systematized,
    u: &[u8],
    n: usize,
) -> Result<Vec<u8>, MrbError> {
    let c_perm = encode_linear(&sys.g_sys, u)?;
    let mut orig = vec![0u8; n];
    for (j, &bit) in c_perm.iter().enumerate() {
        orig[sys.perm[j]] = bit;
    }
    Ok(orig)
}

/// Pattern search state. Basis error patterns are identified by the set of
/// flipped basis positions (indices into the systematized basis `0..k`).
struct Search<'a> {
    sys: &'a Systematized,
    v_star: &'a [u8],
    n: usize,
    k: usize,
    /// Basis positions sorted by ascending reliability, and their costs.
    pos: Vec<usize>,
    cost: Vec<f64>,
    /// prefix[t] = sum of the t cheapest basis costs.
    prefix: Vec<f64>,
    /// Parity-column slice (columns k..n) of each systematized generator row,
    /// packed into words.
    parity_rows: Vec<Vec<u64>>,
    /// Parity disagreement of the baseline candidate with the hard decision.
    d0: Vec<u64>,
    /// |llr| of each parity position, indexed as (word * 64 + bit).
    parity_cost: Vec<f64>,
    best_w: f64,
    best_pattern: Vec<usize>,
    best_codeword: Vec<u8>,
    /// Remaining pattern budget; `None` enables branch-and-bound pruning
    /// (safe because pruned subtrees are strictly worse, so the winner and
    /// its ties are unaffected).
    budget: Option<u64>,
    done: bool,
    chosen: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(
        llr_p: &[f64],
        hard_p: &'a [u8],
        c_star: &[u8],
        sys: &'a Systematized,
        cfg: &MrbConfig,
    ) -> Self {
        let k = sys.g_sys.rows();
        let n = sys.g_sys.cols();
        let parity_words = (n - k).div_ceil(64);
        let mut pos: Vec<usize> = (0..k).collect();
        pos.sort_by(|&a, &b| {
            llr_p[a]
                .abs()
                .partial_cmp(&llr_p[b].abs())
                .unwrap()
                .then(sys.perm[a].cmp(&sys.perm[b]))
        });
        let cost: Vec<f64> = pos.iter().map(|&j| llr_p[j].abs()).collect();
        let mut prefix = vec![0.0; k + 1];
        for t in 0..k {
            prefix[t + 1] = prefix[t] + cost[t];
        }
        let extract_parity = |bits: &dyn Fn(usize) -> u8| -> Vec<u64> {
            let mut words = vec![0u64; parity_words];
            for t in 0..n - k {
                if bits(k + t) == 1 {
                    words[t / 64] |= 1u64 << (t % 64);
                }
            }
            words
        };
        let parity_rows: Vec<Vec<u64>> = (0..k)
            .map(|j| extract_parity(&|c| u8::from(sys.g_sys.get(j, c))))
            .collect();
        let d0 = extract_parity(&|c| c_star[c] ^ hard_p[c]);
        let mut parity_cost = vec![0.0; parity_words * 64];
        for t in 0..n - k {
            parity_cost[t] = llr_p[k + t].abs();
        }
        Search {
            sys,
            v_star: &hard_p[..k],
            n,
            k,
            pos,
            cost,
            prefix,
            parity_rows,
            d0,
            parity_cost,
            best_w: f64::INFINITY,
            best_pattern: Vec::new(),
            best_codeword: Vec::new(),
            budget: cfg.pattern_budget,
            done: false,
            chosen: Vec::new(),
        }
    }

    fn prune(&self) -> bool {
        self.budget.is_none()
    }

    /// Charges one pattern against the budget; returns false when exhausted.
    fn take_budget(&mut self) -> bool {
        match self.budget.as_mut() {
            None => true,
            Some(0) => {
                self.done = true;
                false
            }
            Some(b) => {
                *b -= 1;
                true
            }
        }
    }

    fn run(&mut self, order: usize) {
        let mut mask = vec![0u64; self.d0.len()];
        self.evaluate(0.0, &mask);
        for w in 1..=order {
            // The cheapest weight-w pattern costs prefix[w]; at equal parity
            // term that bound grows with w, so once it exceeds the incumbent
            // strictly no higher weight can win or tie.
            if self.done || (self.prune() && self.prefix[w] > self.best_w) {
                break;
            }
            self.descend(w, 0, 0.0, &mut mask);
        }
    }

    fn descend(&mut self, remaining: usize, start: usize, w_basis: f64, mask: &mut Vec<u64>) {
        if self.done {
            return;
        }
        if remaining == 0 {
            self.evaluate(w_basis, mask);
            return;
        }
        for t in start..=self.k - remaining {
            // Completing via the cheapest still-available positions bounds
            // every pattern in this subtree from below; costs ascend with t,
            // so later siblings are bounded too.
            let bound = w_basis + self.cost[t] + (self.prefix[t + remaining] - self.prefix[t + 1]);
            if self.prune() && bound > self.best_w {
                break;
            }
            let j = self.pos[t];
            for (m, r) in mask.iter_mut().zip(&self.parity_rows[j]) {
                *m ^= r;
            }
            self.chosen.push(j);
            self.descend(remaining - 1, t + 1, w_basis + self.cost[t], mask);
            self.chosen.pop();
            for (m, r) in mask.iter_mut().zip(&self.parity_rows[j]) {
                *m ^= r;
            }
            if self.done {
                return;
            }
        }
    }

    fn evaluate(&mut self, w_basis: f64, mask: &[u64]) {
        if !self.take_budget() {
            return;
        }
        let mut w = w_basis;
        for (word, (&d, &m)) in self.d0.iter().zip(mask).enumerate() {
            let mut x = d ^ m;
            while x != 0 {
                w += self.parity_cost[word * 64 + x.trailing_zeros() as usize];
                x &= x - 1;
            }
        }
        if w > self.best_w {
            return;
        }
        let codeword = self.materialize();
        if w < self.best_w || codeword < self.best_codeword {
            self.best_w = w;
            self.best_pattern = self.chosen.clone();
            self.best_codeword = codeword;
        }
    }

    /// Original-order codeword of the currently chosen pattern.
    fn materialize(&self) -> Vec<u8> {
        let mut u = self.v_star.to_vec();
        for &j in &self.chosen {
            u[j] ^= 1;
        }
        permuted_codeword_to_original(self.sys, &u, self.n).expect("dims fixed by construction")
    }

    fn into_best(self) -> (Vec<usize>, f64) {
        debug_assert!(self.best_w.is_finite());
        (self.best_pattern, self.best_w)
    }
}
