//! Turbo-code interleaver families: completely random, S-random (spread),
//! quadratic permutation polynomial (QPP), dithered relative prime (DRP),
//! and explicit permutations loaded from plain-text files.
//!
//! Every constructor materializes the permutation and verifies bijectivity
//! by an exhaustive image check before returning.

use super::TurboError;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;

/// How to build a length-`k` interleaver.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum InterleaverDef {
    /// Uniformly random permutation (Fisher-Yates) from the given seed.
    Random { seed: u64 },
    /// S-random permutation: positions at distance <= s map to values at
    /// distance >= s. `s = None` uses floor(sqrt(k/2)); generation restarts
    /// up to `restart_cap` times (default 1000) before failing.
    Spread {
        seed: u64,
        s: Option<usize>,
        restart_cap: Option<usize>,
    },
    /// pi(j) = (f1*j + f2*j^2) mod k.
    Qpp { f1: usize, f2: usize },
    /// Write-dither of a relative-prime sweep of a read-dither.
    Drp {
        write_dither: Vec<usize>,
        read_dither: Vec<usize>,
        increment: usize,
        offset: usize,
    },
    /// Fully specified permutation.
    Explicit { perm: Vec<usize> },
}

/// A materialized, verified permutation with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    perm: Vec<usize>,
    inv: Vec<usize>,
}

impl Interleaver {
    pub fn new(k: usize, def: &InterleaverDef) -> Result<Self, TurboError> {
        if k == 0 {
            return Err(TurboError::BadInterleaver("k must be positive".into()));
        }
        let perm = match def {
            InterleaverDef::Random { seed } => random_permutation(k, *seed),
            InterleaverDef::Spread {
                seed,
                s,
                restart_cap,
            } => {
                let s = s.unwrap_or_else(|| default_spread(k));
                spread_permutation(k, s, *seed, restart_cap.unwrap_or(1000))?
            }
            InterleaverDef::Qpp { f1, f2 } => qpp_permutation(k, *f1, *f2)?,
            InterleaverDef::Drp {
                write_dither,
                read_dither,
                increment,
                offset,
            } => drp_permutation(k, write_dither, read_dither, *increment, *offset)?,
            InterleaverDef::Explicit { perm } => perm.clone(),
        };
        Self::from_permutation(perm, k)
    }

    fn from_permutation(perm: Vec<usize>, k: usize) -> Result<Self, TurboError> {
        if perm.len() != k {
            return Err(TurboError::BadInterleaver(format!(
                "permutation length {} for k = {k}",
                perm.len()
            )));
        }
        let mut inv = vec![usize::MAX; k];
        for (i, &p) in perm.iter().enumerate() {
            if p >= k || inv[p] != usize::MAX {
                return Err(TurboError::BadInterleaver(format!(
                    "not a bijection on 0..{k} (value {p} at {i})"
                )));
            }
            inv[p] = i;
        }
        Ok(Self { perm, inv })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// `permutation()[i]` is the source index read at output position `i`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inv
    }

    /// `out[i] = xs[perm[i]]`.
    pub fn permute<T: Copy>(&self, xs: &[T]) -> Vec<T> {
        assert_eq!(xs.len(), self.perm.len());
        self.perm.iter().map(|&j| xs[j]).collect()
    }

    /// Inverts [`Interleaver::permute`].
    pub fn depermute<T: Copy>(&self, xs: &[T]) -> Vec<T> {
        assert_eq!(xs.len(), self.perm.len());
        self.inv.iter().map(|&j| xs[j]).collect()
    }
}

/// Default spread target `floor(sqrt(k/2))`.
pub fn default_spread(k: usize) -> usize {
    (k as f64 / 2.0).sqrt().floor() as usize
}

/// Frozen default interleavers for the standard frame sizes, selected by an
/// offline search maximizing the low-input-weight distance estimate of the
/// resulting rate-1/2 code (see the distance module).
pub fn default_interleaver(k: usize) -> Option<InterleaverDef> {
    match k {
        64 => Some(InterleaverDef::Drp {
            write_dither: vec![3, 1, 2, 0],
            read_dither: vec![1, 2, 3, 0],
            increment: 31,
            offset: 0,
        }),
        128 => Some(InterleaverDef::Drp {
            write_dither: vec![3, 1, 2, 0],
            read_dither: vec![0, 3, 2, 1],
            increment: 63,
            offset: 14,
        }),
        256 => Some(InterleaverDef::Drp {
            write_dither: vec![0, 3, 2, 1],
            read_dither: vec![3, 0, 1, 2],
            increment: 63,
            offset: 72,
        }),
        _ => None,
    }
}

/// Uniformly random permutation of `0..k` from a fixed seed.
pub fn random_permutation(k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(&mut rng);
    perm
}

/// S-random generation by rejection: values are proposed in random order and
/// accepted only when at distance >= `s` from the values placed at the `s`
/// previous positions; deadlocks restart the whole permutation.
pub fn spread_permutation(
    k: usize,
    s: usize,
    seed: u64,
    restart_cap: usize,
) -> Result<Vec<usize>, TurboError> {
    if s >= k.max(1) {
        return Err(TurboError::BadInterleaver(format!(
            "spread {s} too large for k = {k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut valid: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..=restart_cap {
        let mut pool: Vec<usize> = (0..k).collect();
        pool.shuffle(&mut rng);
        let mut perm: Vec<usize> = Vec::with_capacity(k);
        let mut ok = true;
        while perm.len() < k {
            valid.clear();
            valid.extend((0..pool.len()).filter(|&idx| {
                perm.iter()
                    .rev()
                    .take(s)
                    .all(|&prev| pool[idx].abs_diff(prev) >= s)
            }));
            if valid.is_empty() {
                ok = false;
                break;
            }
            let pick = valid[rng.gen_range(0..valid.len())];
            perm.push(pool.swap_remove(pick));
        }
        if ok {
            return Ok(perm);
        }
    }
    Err(TurboError::BadInterleaver(format!(
        "spread-{s} generation failed after {restart_cap} restarts"
    )))
}

/// Quadratic permutation polynomial `pi(j) = (f1*j + f2*j^2) mod k`.
pub fn qpp_permutation(k: usize, f1: usize, f2: usize) -> Result<Vec<usize>, TurboError> {
    if gcd(f1, k) != 1 {
        return Err(TurboError::BadInterleaver(format!(
            "qpp requires gcd(f1, k) = 1, got f1 = {f1}, k = {k}"
        )));
    }
    let perm: Vec<usize> = (0..k)
        .map(|j| ((f1 % k) * j % k + (f2 % k) * (j * j % k) % k) % k)
        .collect();
    ensure_bijection(&perm, k, "qpp")?;
    Ok(perm)
}

/// Dithered relative-prime permutation: a local read dither, a stride by an
/// increment coprime to `k` plus offset, then a local write dither. Dither
/// vectors are permutations of `0..w` for block sizes `w` dividing `k`.
pub fn drp_permutation(
    k: usize,
    write_dither: &[usize],
    read_dither: &[usize],
    increment: usize,
    offset: usize,
) -> Result<Vec<usize>, TurboError> {
    for (name, dither) in [("write", write_dither), ("read", read_dither)] {
        let w = dither.len();
        if w == 0 || k % w != 0 {
            return Err(TurboError::BadInterleaver(format!(
                "{name} dither length {w} does not divide k = {k}"
            )));
        }
        let mut seen = vec![false; w];
        for &d in dither {
            if d >= w || seen[d] {
                return Err(TurboError::BadInterleaver(format!(
                    "{name} dither is not a local permutation"
                )));
            }
            seen[d] = true;
        }
    }
    if gcd(increment, k) != 1 {
        return Err(TurboError::BadInterleaver(format!(
            "drp requires gcd(increment, k) = 1, got {increment}, k = {k}"
        )));
    }
    let dither_apply = |dither: &[usize], x: usize| -> usize {
        let w = dither.len();
        (x / w) * w + dither[x % w]
    };
    let perm: Vec<usize> = (0..k)
        .map(|i| {
            let r = dither_apply(read_dither, i);
            let m = (offset + increment * r) % k;
            dither_apply(write_dither, m)
        })
        .collect();
    ensure_bijection(&perm, k, "drp")?;
    Ok(perm)
}

fn ensure_bijection(perm: &[usize], k: usize, kind: &str) -> Result<(), TurboError> {
    let mut seen = vec![false; k];
    for &p in perm {
        if p >= k || seen[p] {
            return Err(TurboError::BadInterleaver(format!(
                "{kind} parameters do not produce a bijection on 0..{k}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Reads a permutation file: first token is `k`, followed by `k`
/// whitespace-separated zero-based indices.
pub fn read_permutation_file(path: &Path) -> Result<Vec<usize>, TurboError> {
    let text = std::fs::read_to_string(path)?;
    let mut tokens = text.split_whitespace();
    let k: usize = tokens
        .next()
        .ok_or_else(|| TurboError::BadInterleaver("empty permutation file".into()))?
        .parse()
        .map_err(|e| TurboError::BadInterleaver(format!("bad length line: {e}")))?;
    let perm: Vec<usize> = tokens
        .map(|t| {
            t.parse()
                .map_err(|e| TurboError::BadInterleaver(format!("bad index {t:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if perm.len() != k {
        return Err(TurboError::BadInterleaver(format!(
            "file declares {k} entries but contains {}",
            perm.len()
        )));
    }
    ensure_bijection(&perm, k, "explicit")?;
    Ok(perm)
}

/// Writes the format read by [`read_permutation_file`].
pub fn write_permutation_file(path: &Path, perm: &[usize]) -> std::io::Result<()> {
    let mut out = perm.len().to_string();
    out.push('\n');
    for chunk in perm.chunks(16) {
        let line: Vec<String> = chunk.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    std::fs::write(path, out)
}

/// Minimum over pairs within `s` positions of output distance; the permuted
/// analogue of the acceptance rule in [`spread_permutation`].
pub fn spread_statistic(perm: &[usize], s: usize) -> usize {
    let mut best = usize::MAX;
    for i in 0..perm.len() {
        for j in i + 1..perm.len().min(i + s + 1) {
            best = best.min(perm[i].abs_diff(perm[j]));
        }
    }
    best
}
