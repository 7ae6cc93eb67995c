//! Truncated minimum-distance estimation for turbo codes.
//!
//! Turbo encoding (constituent recursions, termination, and puncturing) is
//! linear over GF(2), so the codeword of any message is the XOR of the
//! codewords of its set unit vectors. The estimator enumerates all messages
//! of Hamming weight up to a small cap and reports the lightest codeword
//! found — an upper bound on the true minimum distance, since heavier inputs
//! are not examined.

use super::{turbo_encode, TurboError, TurboSpec};

/// Result of a truncated weight search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceReport {
    /// Lightest codeword weight found (an upper bound on d_min).
    pub d_min_upper: usize,
    /// Number of enumerated codewords attaining that weight.
    pub a_min: usize,
    /// Total information weight of those codewords.
    pub w_min: usize,
    /// Input-weight cap the search used.
    pub search_input_weight_cap: usize,
}

/// Examines every message of weight `1..=max_input_weight` (the cap must be
/// 2, 3, or 4) and reports the minimum post-puncture codeword weight with
/// its multiplicities.
pub fn estimate_dmin(
    spec: &TurboSpec,
    max_input_weight: usize,
) -> Result<DistanceReport, TurboError> {
    if !(2..=4).contains(&max_input_weight) {
        return Err(TurboError::BadParameter(format!(
            "max_input_weight must be 2, 3, or 4, got {max_input_weight}"
        )));
    }
    let k = spec.k();
    let words = spec.n_post().div_ceil(64);
    // Packed codeword of each unit message.
    let rows: Vec<Vec<u64>> = (0..k)
        .map(|j| {
            let mut msg = vec![0u8; k];
            msg[j] = 1;
            let cw = turbo_encode(&msg, spec).expect("length is spec.k by construction");
            let mut packed = vec![0u64; words];
            for (pos, &bit) in cw.iter().enumerate() {
                packed[pos / 64] |= u64::from(bit) << (pos % 64);
            }
            packed
        })
        .collect();

    let mut best = usize::MAX;
    let mut a_min = 0usize;
    let mut w_min = 0usize;
    let mut acc = vec![0u64; words];
    let mut stack: Vec<usize> = Vec::with_capacity(max_input_weight);

    fn visit(
        rows: &[Vec<u64>],
        acc: &mut Vec<u64>,
        stack: &mut Vec<usize>,
        start: usize,
        remaining: usize,
        best: &mut usize,
        a_min: &mut usize,
        w_min: &mut usize,
    ) {
        if !stack.is_empty() {
            let weight: usize = acc.iter().map(|w| w.count_ones() as usize).sum();
            match weight.cmp(best) {
                std::cmp::Ordering::Less => {
                    *best = weight;
                    *a_min = 1;
                    *w_min = stack.len();
                }
                std::cmp::Ordering::Equal => {
                    *a_min += 1;
                    *w_min += stack.len();
                }
                std::cmp::Ordering::Greater => {}
            }
        }
        if remaining == 0 {
            return;
        }
        for j in start..rows.len() {
            for (a, r) in acc.iter_mut().zip(&rows[j]) {
                *a ^= r;
            }
            stack.push(j);
            visit(rows, acc, stack, j + 1, remaining - 1, best, a_min, w_min);
            stack.pop();
            for (a, r) in acc.iter_mut().zip(&rows[j]) {
                *a ^= r;
            }
        }
    }

    visit(
        &rows,
        &mut acc,
        &mut stack,
        0,
        max_input_weight,
        &mut best,
        &mut a_min,
        &mut w_min,
    );
    Ok(DistanceReport {
        d_min_upper: best,
        a_min,
        w_min,
        search_input_weight_cap: max_input_weight,
    })
}
