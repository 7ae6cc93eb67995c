//! Exact log-MAP BCJR decoding of one terminated recursive systematic
//! constituent code.
//!
//! Log-likelihood ratios follow the convention `llr = ln P(bit=0)/P(bit=1)`,
//! so `P(bit=u)` is proportional to `exp(0.5 * (1-2u) * llr)` and branch
//! metrics are half-sums of signed llrs. The recursion stays exact (max-star
//! with the logarithmic correction term), which makes the output the true
//! a-posteriori llr for the constituent code.

use super::rsc::RscSpec;

/// Log-domain stand-in for probability zero; small enough to never win a
/// max-star against a live path, large enough to keep all arithmetic finite.
const NEG: f64 = -1e30;

/// `max*(a, b) = ln(e^a + e^b)` computed as `max + ln(1 + e^{-|a-b|})`; the
/// correction is skipped once it falls below f64 resolution.
#[inline]
pub(crate) fn maxstar(a: f64, b: f64) -> f64 {
    let (hi, d) = if a >= b { (a, a - b) } else { (b, b - a) };
    if d > 40.0 {
        hi
    } else {
        hi + (-d).exp().ln_1p()
    }
}

/// Transition tables of one constituent trellis, including the single
/// feedback-forced transition per state used during termination.
pub(crate) struct Trellis {
    pub states: usize,
    pub memory: usize,
    /// `next[s][u]`, `parity[s][u]` for information steps.
    next: Vec<[usize; 2]>,
    parity: Vec<[u8; 2]>,
    /// Termination step per state (input forced to the feedback value).
    term_next: Vec<usize>,
    term_parity: Vec<u8>,
}

impl Trellis {
    pub fn new(spec: &RscSpec) -> Self {
        let states = spec.states();
        let mut next = vec![[0usize; 2]; states];
        let mut parity = vec![[0u8; 2]; states];
        let mut term_next = vec![0usize; states];
        let mut term_parity = vec![0u8; states];
        for s in 0..states {
            for u in 0..2u8 {
                let (nx, p) = spec.step(s as u32, u);
                next[s][u as usize] = nx as usize;
                parity[s][u as usize] = p;
            }
            let (nx, _, p) = spec.step_terminate(s as u32);
            term_next[s] = nx as usize;
            term_parity[s] = p;
        }
        Self {
            states,
            memory: spec.memory(),
            next,
            parity,
            term_next,
            term_parity,
        }
    }
}

fn sign(bit: u8) -> f64 {
    1.0 - 2.0 * f64::from(bit)
}

/// Runs one BCJR pass. Inputs per information step: systematic channel llr,
/// parity channel llr, and the a-priori llr from the other constituent.
/// `tail_par` holds the channel llrs of the termination parity bits (zero for
/// punctured ones). Returns `(extrinsic, a_posteriori)` llrs for the
/// information bits, with `a_posteriori = prior + systematic + extrinsic`.
pub(crate) fn bcjr_extrinsic(
    tr: &Trellis,
    sys: &[f64],
    par: &[f64],
    tail_par: &[f64],
    prior: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let k = sys.len();
    let m = tail_par.len();
    debug_assert_eq!(par.len(), k);
    debug_assert_eq!(prior.len(), k);
    debug_assert_eq!(m, tr.memory);
    let total = k + m;
    let s = tr.states;

    // Branch metric of an information step.
    let gamma = |t: usize, st: usize, u: usize| -> f64 {
        0.5 * (sign(u as u8) * (prior[t] + sys[t]) + sign(tr.parity[st][u]) * par[t])
    };
    let gamma_tail = |i: usize, st: usize| -> f64 { 0.5 * sign(tr.term_parity[st]) * tail_par[i] };

    // Forward recursion, normalized per step to keep magnitudes bounded.
    let mut alpha = vec![NEG; (total + 1) * s];
    alpha[0] = 0.0;
    for t in 0..total {
        let (cur, nxt) = (t * s, (t + 1) * s);
        for st in 0..s {
            let a = alpha[cur + st];
            if t < k {
                for u in 0..2 {
                    let slot = nxt + tr.next[st][u];
                    alpha[slot] = maxstar(alpha[slot], a + gamma(t, st, u));
                }
            } else {
                let slot = nxt + tr.term_next[st];
                alpha[slot] = maxstar(alpha[slot], a + gamma_tail(t - k, st));
            }
        }
        let max = alpha[nxt..nxt + s].iter().cloned().fold(f64::MIN, f64::max);
        for v in &mut alpha[nxt..nxt + s] {
            *v -= max;
        }
    }

    // Backward recursion from the terminated (all-zero) state.
    let mut beta = vec![NEG; (total + 1) * s];
    beta[total * s] = 0.0;
    for t in (0..total).rev() {
        let (cur, nxt) = (t * s, (t + 1) * s);
        for st in 0..s {
            beta[cur + st] = if t < k {
                let b0 = beta[nxt + tr.next[st][0]] + gamma(t, st, 0);
                let b1 = beta[nxt + tr.next[st][1]] + gamma(t, st, 1);
                maxstar(b0, b1)
            } else {
                beta[nxt + tr.term_next[st]] + gamma_tail(t - k, st)
            };
        }
        let max = beta[cur..cur + s].iter().cloned().fold(f64::MIN, f64::max);
        for v in &mut beta[cur..cur + s] {
            *v -= max;
        }
    }

    // A-posteriori llr per information bit.
    let mut ext = Vec::with_capacity(k);
    let mut app = Vec::with_capacity(k);
    for t in 0..k {
        let (cur, nxt) = (t * s, (t + 1) * s);
        let mut num = NEG;
        let mut den = NEG;
        for st in 0..s {
            let a = alpha[cur + st];
            num = maxstar(num, a + gamma(t, st, 0) + beta[nxt + tr.next[st][0]]);
            den = maxstar(den, a + gamma(t, st, 1) + beta[nxt + tr.next[st][1]]);
        }
        let l_app = num - den;
        app.push(l_app);
        ext.push(l_app - prior[t] - sys[t]);
    }
    (ext, app)
}
