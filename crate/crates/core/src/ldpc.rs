//! Binary LDPC codes: parity-check ingestion from alist text, systematic
//! encoding through a dense derived generator, and flooding log-likelihood
//! sum-product decoding.
//!
//! The generator is built by reduced row-echelon form over GF(2) with pivots
//! chosen from the rightmost columns first, so the information set lands on
//! the lowest-index non-pivot columns (for a parity-check matrix in the usual
//! `[A | I]` orientation this keeps the classical systematic positions). With
//! block lengths of a few hundred bits, dense elimination costs nothing
//! compared to decoding.

use crate::gf2::BitMatrix;
use thiserror::Error;

/// Errors from parity-check construction, parsing, or encoding.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LdpcError {
    #[error("malformed alist: {0}")]
    Parse(String),
    #[error("duplicate edge between check {check} and variable {var}")]
    DuplicateEdge { check: usize, var: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("message length {got} does not match code dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

/// A sparse binary parity-check matrix with its derived systematic encoder.
#[derive(Debug, Clone)]
pub struct ParityCheck {
    n: usize,
    m: usize,
    /// Variable indices per check, ascending.
    rows: Vec<Vec<usize>>,
    /// Check indices per variable, ascending.
    cols: Vec<Vec<usize>>,
    rank: usize,
    generator: BitMatrix,
    /// Ascending positions carrying information bits (`k` of them).
    info_positions: Vec<usize>,
}

impl ParityCheck {
    /// Builds a code from the per-check adjacency lists of an `m x n` matrix.
    pub fn from_adjacency(
        n: usize,
        m: usize,
        rows: Vec<Vec<usize>>,
    ) -> Result<Self, LdpcError> {
        if n == 0 || m == 0 || rows.len() != m {
            return Err(LdpcError::Parse(format!(
                "adjacency of {} checks for an {m} x {n} matrix",
                rows.len()
            )));
        }
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sorted_rows = Vec::with_capacity(m);
        for (c, vars) in rows.into_iter().enumerate() {
            let mut vars = vars;
            vars.sort_unstable();
            for pair in vars.windows(2) {
                if pair[0] == pair[1] {
                    return Err(LdpcError::DuplicateEdge {
                        check: c,
                        var: pair[0],
                    });
                }
            }
            for &v in &vars {
                if v >= n {
                    return Err(LdpcError::IndexOutOfRange(format!(
                        "variable {v} in check {c} (n = {n})"
                    )));
                }
                cols[v].push(c);
            }
            sorted_rows.push(vars);
        }
        let (rank, generator, info_positions) = derive_generator(n, m, &sorted_rows);
        Ok(Self {
            n,
            m,
            rows: sorted_rows,
            cols,
            rank,
            generator,
            info_positions,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Code dimension `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.n - self.rank
    }

    pub fn checks(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn variables(&self) -> &[Vec<usize>] {
        &self.cols
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// True when every check sums to zero over the given bits.
    pub fn syndrome_ok(&self, bits: &[u8]) -> bool {
        assert_eq!(bits.len(), self.n);
        self.rows
            .iter()
            .all(|vars| vars.iter().fold(0u8, |acc, &v| acc ^ (bits[v] & 1)) == 0)
    }

    /// Reads the information bits out of a codeword.
    pub fn extract_msg(&self, codeword: &[u8]) -> Vec<u8> {
        assert_eq!(codeword.len(), self.n);
        self.info_positions.iter().map(|&p| codeword[p]).collect()
    }
}

/// RREF of the dense parity-check matrix with right-to-left pivot preference;
/// returns `(rank, generator, info_positions)`.
fn derive_generator(n: usize, m: usize, rows: &[Vec<usize>]) -> (usize, BitMatrix, Vec<usize>) {
    let mut h = BitMatrix::zeros(m, n);
    for (c, vars) in rows.iter().enumerate() {
        for &v in vars {
            h.set(c, v, 1);
        }
    }
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; n];
    let mut next = 0usize;
    for col in (0..n).rev() {
        if next == m {
            break;
        }
        let Some(p) = (next..m).find(|&r| h.get(r, col) == 1) else {
            continue;
        };
        h.swap_rows(next, p);
        for r in 0..m {
            if r != next && h.get(r, col) == 1 {
                h.xor_row_into(next, r);
            }
        }
        pivot_row_of_col[col] = Some(next);
        next += 1;
    }
    let rank = next;
    let info_positions: Vec<usize> = (0..n).filter(|&c| pivot_row_of_col[c].is_none()).collect();
    let k = n - rank;
    debug_assert_eq!(info_positions.len(), k);
    let mut g = BitMatrix::zeros(k, n);
    for (t, &j) in info_positions.iter().enumerate() {
        g.set(t, j, 1);
        for (col, pivot) in pivot_row_of_col.iter().enumerate() {
            if let Some(pr) = pivot {
                // Row `pr` reads c_col + sum_{free j} h[pr][j] * c_j = 0.
                g.set(t, col, h.get(*pr, j));
            }
        }
    }
    (rank, g, info_positions)
}

/// Parses the conventional alist text format: `n m`, max column/row degrees,
/// per-column degrees, per-row degrees, then one adjacency line per column
/// and per row with 1-based indices (zero padding tolerated).
pub fn load_alist(text: &str) -> Result<ParityCheck, LdpcError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty());
    let mut next_ints = |what: &str| -> Result<Vec<usize>, LdpcError> {
        let line = lines
            .next()
            .ok_or_else(|| LdpcError::Parse(format!("missing {what}")))?;
        line.split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| LdpcError::Parse(format!("bad integer {t:?} in {what}: {e}")))
            })
            .collect()
    };

    let dims = next_ints("dimensions line")?;
    let [n, m] = dims[..] else {
        return Err(LdpcError::Parse("dimensions line must hold n and m".into()));
    };
    if n == 0 || m == 0 {
        return Err(LdpcError::Parse("empty matrix".into()));
    }
    let maxdeg = next_ints("max-degree line")?;
    let [max_col, max_row] = maxdeg[..] else {
        return Err(LdpcError::Parse("max-degree line must hold two values".into()));
    };
    let col_deg = next_ints("column degree list")?;
    if col_deg.len() != n {
        return Err(LdpcError::Parse(format!(
            "expected {n} column degrees, found {}",
            col_deg.len()
        )));
    }
    let row_deg = next_ints("row degree list")?;
    if row_deg.len() != m {
        return Err(LdpcError::Parse(format!(
            "expected {m} row degrees, found {}",
            row_deg.len()
        )));
    }
    if col_deg.iter().any(|&d| d > max_col) || row_deg.iter().any(|&d| d > max_row) {
        return Err(LdpcError::Parse("degree exceeds declared maximum".into()));
    }

    let mut read_adjacency = |count: usize,
                              degrees: &[usize],
                              what: &str,
                              limit: usize|
     -> Result<Vec<Vec<usize>>, LdpcError> {
        let mut lists = Vec::with_capacity(count);
        for (i, &deg) in degrees.iter().enumerate().take(count) {
            let entries = next_ints(&format!("{what} {i}"))?;
            let nonzero: Vec<usize> = entries.iter().copied().filter(|&e| e != 0).collect();
            if nonzero.len() != deg {
                return Err(LdpcError::Parse(format!(
                    "{what} {i} lists {} entries, degree says {deg}",
                    nonzero.len()
                )));
            }
            let mut indices = Vec::with_capacity(deg);
            for e in nonzero {
                if e > limit {
                    return Err(LdpcError::IndexOutOfRange(format!(
                        "{what} {i} references {e} (limit {limit})"
                    )));
                }
                indices.push(e - 1);
            }
            lists.push(indices);
        }
        Ok(lists)
    };

    let col_lists = read_adjacency(n, &col_deg, "column list", m)?;
    let row_lists = read_adjacency(m, &row_deg, "row list", n)?;

    // Cross-validate the two views describe the same edge set.
    let mut from_cols: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (v, checks) in col_lists.iter().enumerate() {
        for &c in checks {
            from_cols[c].push(v);
        }
    }
    for (c, vars) in from_cols.iter_mut().enumerate() {
        vars.sort_unstable();
        let mut declared = row_lists[c].clone();
        declared.sort_unstable();
        if *vars != declared {
            return Err(LdpcError::Parse(format!(
                "row {c} adjacency disagrees with the column lists"
            )));
        }
    }
    ParityCheck::from_adjacency(n, m, row_lists)
}

/// Serializes to the format accepted by [`load_alist`] (unpadded lists).
pub fn write_alist(pc: &ParityCheck) -> String {
    let mut out = String::new();
    let max_col = pc.cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = pc.rows.iter().map(Vec::len).max().unwrap_or(0);
    out.push_str(&format!("{} {}\n{} {}\n", pc.n, pc.m, max_col, max_row));
    let degree_line = |lists: &[Vec<usize>]| {
        lists
            .iter()
            .map(|l| l.len().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&degree_line(&pc.cols));
    out.push('\n');
    out.push_str(&degree_line(&pc.rows));
    out.push('\n');
    let adjacency = |lists: &[Vec<usize>], out: &mut String| {
        for l in lists {
            let line: Vec<String> = l.iter().map(|&i| (i + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    };
    adjacency(&pc.cols, &mut out);
    adjacency(&pc.rows, &mut out);
    out
}

/// Systematic encoding through the derived generator.
pub fn ldpc_encode(pc: &ParityCheck, msg: &[u8]) -> Result<Vec<u8>, LdpcError> {
    if msg.len() != pc.k() {
        return Err(LdpcError::DimensionMismatch {
            got: msg.len(),
            expected: pc.k(),
        });
    }
    let cw = crate::gf2::encode_linear(pc.generator(), msg)
        .map_err(|e| LdpcError::Parse(format!("generator failure: {e}")))?;
    debug_assert!(pc.syndrome_ok(&cw));
    Ok(cw)
}

/// Messages leaving a check node given the messages entering it: the
/// tanh-rule product excluding each edge in turn.
pub(crate) fn check_node_messages(incoming: &[f64]) -> Vec<f64> {
    let t: Vec<f64> = incoming.iter().map(|&q| (q / 2.0).tanh()).collect();
    (0..incoming.len())
        .map(|i| {
            let prod: f64 = t
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .product();
            2.0 * prod.clamp(-(1.0 - 1e-15), 1.0 - 1e-15).atanh()
        })
        .collect()
}

const MSG_CLAMP: f64 = 30.0;

/// Result of one sum-product decoding.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaDecision {
    /// Hard decision after the last iteration (a codeword iff `converged`).
    pub codeword: Vec<u8>,
    /// A-posteriori llr per variable.
    pub posterior: Vec<f64>,
    /// True when the hard decision satisfies every check and no posterior
    /// sits exactly on the decision boundary.
    pub converged: bool,
    pub iterations_used: usize,
}

/// Flooding-schedule LLR sum-product decoding with early exit on a satisfied
/// syndrome. Messages are clamped to `[-30, 30]` to keep the tanh kernel away
/// from its singularities.
pub fn spa_decode(pc: &ParityCheck, llr: &[f64], max_iter: usize) -> SpaDecision {
    assert_eq!(llr.len(), pc.n(), "llr length must equal n");
    assert!(max_iter >= 1);
    // Edge-indexed message arrays, grouped by check.
    let edge_of: Vec<Vec<usize>> = {
        let mut next = 0usize;
        pc.checks()
            .iter()
            .map(|vars| {
                let ids: Vec<usize> = (next..next + vars.len()).collect();
                next += vars.len();
                ids
            })
            .collect()
    };
    let mut var_edges: Vec<Vec<usize>> = vec![Vec::new(); pc.n()];
    for (c, vars) in pc.checks().iter().enumerate() {
        for (slot, &v) in vars.iter().enumerate() {
            var_edges[v].push(edge_of[c][slot]);
        }
    }
    let total_edges: usize = pc.checks().iter().map(Vec::len).sum();
    let mut q = vec![0.0f64; total_edges];
    let mut r = vec![0.0f64; total_edges];
    for (v, edges) in var_edges.iter().enumerate() {
        for &e in edges {
            q[e] = llr[v].clamp(-MSG_CLAMP, MSG_CLAMP);
        }
    }

    let mut posterior = llr.to_vec();
    let mut hard = vec![0u8; pc.n()];
    for it in 1..=max_iter {
        for (c, vars) in pc.checks().iter().enumerate() {
            let incoming: Vec<f64> = edge_of[c].iter().map(|&e| q[e]).collect();
            let outgoing = check_node_messages(&incoming);
            for (slot, _) in vars.iter().enumerate() {
                r[edge_of[c][slot]] = outgoing[slot].clamp(-MSG_CLAMP, MSG_CLAMP);
            }
        }
        for (v, edges) in var_edges.iter().enumerate() {
            let sum: f64 = edges.iter().map(|&e| r[e]).sum();
            posterior[v] = llr[v] + sum;
            for &e in edges {
                q[e] = (posterior[v] - r[e]).clamp(-MSG_CLAMP, MSG_CLAMP);
            }
        }
        for (h, &p) in hard.iter_mut().zip(&posterior) {
            *h = u8::from(p < 0.0);
        }
        if pc.syndrome_ok(&hard) && posterior.iter().all(|&p| p != 0.0) {
            return SpaDecision {
                codeword: hard,
                posterior,
                converged: true,
                iterations_used: it,
            };
        }
    }
    SpaDecision {
        codeword: hard,
        posterior,
        converged: false,
        iterations_used: max_iter,
    }
}
