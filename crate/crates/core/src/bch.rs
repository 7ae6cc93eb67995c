//! Binary BCH codes used on the telecommand link.
//!
//! Two codes live here:
//!
//! - [`Bch63`]: the systematic (63,56) code with generator
//!   `g(x) = x^7 + x^6 + x^2 + 1`, decoded by hard decision either as a
//!   single-error corrector (SEC) or as a pure triple-error detector (TED);
//! - [`Ebch128`]: the (128,64) extended BCH code, i.e. the (127,64) code whose
//!   degree-63 generator is the product of the minimal polynomials of
//!   `alpha^1..alpha^20` over GF(2^7), plus an overall even-parity bit. Only
//!   the encoder lives here; decoding is soft (see [`crate::mrb`]).
//!
//! Bit convention: a codeword slice `c[0..n]` carries the coefficient of
//! `x^(n-1-i)` at index `i`, so information bits come first in transmission
//! order and parity bits follow.
//!
//! [`bch63_hard_cer_analytic`] gives the exact codeword error rate of the SEC
//! decoder under two-state (jammed / clean) bit error probabilities.

use crate::gf2::BitMatrix;
use thiserror::Error;

/// Errors from BCH encoding/decoding entry points.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BchError {
    #[error("input length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("invalid bit value {0}; bits must be 0 or 1")]
    InvalidBit(u8),
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
}

fn check_bits(bits: &[u8], expected: usize) -> Result<(), BchError> {
    if bits.len() != expected {
        return Err(BchError::LengthMismatch {
            got: bits.len(),
            expected,
        });
    }
    if let Some(&b) = bits.iter().find(|&&b| b > 1) {
        return Err(BchError::InvalidBit(b));
    }
    Ok(())
}

// --- GF(2)[x] helpers on bit-packed polynomials (bit i = coefficient of x^i) ---

fn poly_degree(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

fn poly_rem(mut a: u128, g: u128) -> u128 {
    let dg = poly_degree(g);
    debug_assert!(dg >= 0);
    while poly_degree(a) >= dg {
        a ^= g << (poly_degree(a) - dg);
    }
    a
}

fn poly_mul(a: u128, b: u128) -> u128 {
    debug_assert!(
        a == 0 || b == 0 || poly_degree(a) + poly_degree(b) < 128,
        "product overflows 128 coefficients"
    );
    let mut out = 0u128;
    let mut a = a;
    let mut shift = 0;
    while a != 0 {
        if a & 1 == 1 {
            out ^= b << shift;
        }
        a >>= 1;
        shift += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// BCH(63,56)
// ---------------------------------------------------------------------------

/// Decoding mode for [`Bch63::decode_hard`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bch63Mode {
    /// Single-error correction: correct any one flipped bit, flag everything
    /// else (the code has minimum distance 4, so double errors are always
    /// detected rather than miscorrected).
    Sec,
    /// Triple-error detection: never correct; any nonzero syndrome is flagged.
    Ted,
}

/// Outcome of a hard-decision decode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BchStatus {
    /// Zero syndrome: the word was accepted as received.
    Clean,
    /// One bit was corrected (SEC mode only).
    Corrected,
    /// The syndrome matched no correctable pattern; `msg` holds the received
    /// information bits unchanged.
    DetectedUncorrectable,
}

/// Result of [`Bch63::decode_hard`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bch63Decision {
    pub msg: Vec<u8>,
    pub status: BchStatus,
}

/// The systematic (63,56) single-error-correcting BCH code.
#[derive(Debug, Clone)]
pub struct Bch63 {
    /// Syndrome value (7 bits) -> error position, for single-bit errors.
    syndrome_pos: [Option<u8>; 128],
}

impl Bch63 {
    pub const N: usize = 63;
    pub const K: usize = 56;
    /// `g(x) = x^7 + x^6 + x^2 + 1`, bit i = coefficient of `x^i`.
    pub const GENERATOR: u64 = 0b1100_0101;

    pub fn new() -> Self {
        let g = Self::GENERATOR as u128;
        let mut syndrome_pos = [None; 128];
        for pos in 0..Self::N {
            // A flip at codeword index `pos` adds x^(62-pos) to the received
            // polynomial.
            let s = poly_rem(1u128 << (62 - pos), g) as usize;
            debug_assert!(
                syndrome_pos[s].is_none(),
                "single-error syndromes must be distinct"
            );
            syndrome_pos[s] = Some(pos as u8);
        }
        Bch63 { syndrome_pos }
    }

    fn rem_of(word: &[u8], n: usize) -> u64 {
        let mut poly = 0u128;
        for (i, &b) in word.iter().enumerate() {
            poly |= (b as u128) << (n - 1 - i);
        }
        poly_rem(poly, Self::GENERATOR as u128) as u64
    }

    /// Systematic encode: information bits first, then the 7 parity bits
    /// (the remainder of `x^7 * m(x)` divided by `g(x)`).
    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>, BchError> {
        check_bits(msg, Self::K)?;
        let mut m = 0u128;
        for (i, &b) in msg.iter().enumerate() {
            m |= (b as u128) << (Self::K - 1 - i);
        }
        let rem = poly_rem(m << 7, Self::GENERATOR as u128) as u64;
        let mut cw = Vec::with_capacity(Self::N);
        cw.extend_from_slice(msg);
        for i in (0..7).rev() {
            cw.push(((rem >> i) & 1) as u8);
        }
        Ok(cw)
    }

    /// Hard-decision decode of a received 63-bit word.
    pub fn decode_hard(&self, received: &[u8], mode: Bch63Mode) -> Result<Bch63Decision, BchError> {
        check_bits(received, Self::N)?;
        let syndrome = Self::rem_of(received, Self::N) as usize;
        if syndrome == 0 {
            return Ok(Bch63Decision {
                msg: received[..Self::K].to_vec(),
                status: BchStatus::Clean,
            });
        }
        if mode == Bch63Mode::Sec {
            if let Some(pos) = self.syndrome_pos[syndrome] {
                let mut corrected = received.to_vec();
                corrected[pos as usize] ^= 1;
                return Ok(Bch63Decision {
                    msg: corrected[..Self::K].to_vec(),
                    status: BchStatus::Corrected,
                });
            }
        }
        Ok(Bch63Decision {
            msg: received[..Self::K].to_vec(),
            status: BchStatus::DetectedUncorrectable,
        })
    }
}

impl Default for Bch63 {
    fn default() -> Self {
        Self::new()
    }
}

// ---------------------------------------------------------------------------
// Analytic SEC codeword error rate under two-state bit error probabilities
// ---------------------------------------------------------------------------

/// Exact codeword error rate of the (63,56) SEC decoder when each bit is
/// received through either a "jammed" channel (bit error probability `p_jam`)
/// or a "clean" one (`p_clean`).
///
/// - `interleaved = false`: pulses cover whole codewords, so a fraction `rho`
///   of codewords sees `p_jam` on all bits and the rest sees `p_clean`.
/// - `interleaved = true`: an ideal interleaver makes every bit independently
///   jammed with probability `rho`; the error count distribution is obtained
///   by convolving the binomial contributions of the two bit classes.
///
/// A codeword fails exactly when more than one of its 63 bits is in error.
pub fn bch63_hard_cer_analytic(
    p_clean: f64,
    p_jam: f64,
    rho: f64,
    interleaved: bool,
) -> Result<f64, BchError> {
    for (name, v) in [("p_clean", p_clean), ("p_jam", p_jam), ("rho", rho)] {
        if !(0.0..=1.0).contains(&v) || !v.is_finite() {
            return Err(BchError::InvalidParameter(format!("{name} = {v}")));
        }
    }
    let n = Bch63::N as f64;
    // P(more than one error) for 63 iid bits at error probability p.
    let multi = |p: f64| 1.0 - (1.0 - p).powi(63) - n * p * (1.0 - p).powi(62);
    if !interleaved {
        return Ok(rho * multi(p_jam) + (1.0 - rho) * multi(p_clean));
    }
    // Number of jammed bits J ~ Binomial(63, rho); given J = j, failures need
    // at least two errors across Binomial(j, p_jam) + Binomial(63-j, p_clean).
    let mut ok_mass = 0.0;
    let mut pmf = (1.0 - rho).powi(63); // P(J = 0)
    for j in 0..=Bch63::N {
        let jf = j as f64;
        let p0 = (1.0 - p_jam).powi(j as i32) * (1.0 - p_clean).powi((Bch63::N - j) as i32);
        let mut p1 = 0.0;
        if j > 0 && p_jam > 0.0 {
            p1 += jf * p_jam * (1.0 - p_jam).powi(j as i32 - 1)
                * (1.0 - p_clean).powi((Bch63::N - j) as i32);
        }
        if j < Bch63::N && p_clean > 0.0 {
            p1 += (n - jf) * p_clean * (1.0 - p_clean).powi((Bch63::N - j) as i32 - 1)
                * (1.0 - p_jam).powi(j as i32);
        }
        ok_mass += pmf * (p0 + p1);
        // Binomial pmf recurrence P(J = j+1) from P(J = j); at rho = 0 or 1
        // all mass sits at J = 0 or J = 63 respectively.
        if j < Bch63::N {
            if rho > 0.0 && rho < 1.0 {
                pmf *= (n - jf) / (jf + 1.0) * rho / (1.0 - rho);
            } else {
                pmf = f64::from(rho == 1.0 && j + 1 == Bch63::N);
            }
        }
    }
    Ok((1.0 - ok_mass).max(0.0))
}

// ---------------------------------------------------------------------------
// Extended BCH(128,64)
// ---------------------------------------------------------------------------

/// GF(2^7) arithmetic tables over the primitive polynomial `x^7 + x^3 + 1`.
struct Gf128 {
    exp: [u8; 254],
    log: [u8; 128],
}

impl Gf128 {
    const PRIMITIVE_POLY: u16 = 0b1000_1001;
    const ORDER: usize = 127;

    fn new() -> Self {
        let mut exp = [0u8; 254];
        let mut log = [0u8; 128];
        let mut x = 1u16;
        for i in 0..Self::ORDER {
            exp[i] = x as u8;
            log[x as usize] = i as u8;
            x <<= 1;
            if x & 0x80 != 0 {
                x ^= Self::PRIMITIVE_POLY;
            }
        }
        for i in Self::ORDER..254 {
            exp[i] = exp[i - Self::ORDER];
        }
        Gf128 { exp, log }
    }

    fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] as usize + self.log[b as usize] as usize) % Self::ORDER]
        }
    }

    fn pow_alpha(&self, e: usize) -> u8 {
        self.exp[e % Self::ORDER]
    }
}

/// The (128,64) extended BCH code: the (127,64) BCH code plus an overall
/// even-parity bit appended as bit 127.
#[derive(Debug, Clone)]
pub struct Ebch128 {
    /// Degree-63 generator polynomial of the underlying (127,64) code.
    generator: u128,
}

impl Ebch128 {
    pub const N: usize = 128;
    pub const K: usize = 64;
    const BASE_N: usize = 127;
    /// The generator covers roots `alpha^1..alpha^DESIGNED_DISTANCE-1`.
    const DESIGNED_DISTANCE: usize = 21;

    pub fn new() -> Self {
        let gf = Gf128::new();
        // Collect the cyclotomic cosets mod 127 covering exponents 1..=20.
        let mut covered = [false; 127];
        let mut generator = 1u128;
        for e in 1..Self::DESIGNED_DISTANCE {
            if covered[e] {
                continue;
            }
            let mut coset = Vec::new();
            let mut x = e;
            loop {
                covered[x] = true;
                coset.push(x);
                x = (x * 2) % Gf128::ORDER;
                if x == e {
                    break;
                }
            }
            generator = poly_mul(generator, minimal_polynomial(&gf, &coset));
        }
        let code = Ebch128 { generator };
        debug_assert_eq!(poly_degree(generator), (Self::BASE_N - Self::K) as i32);
        debug_assert_eq!(poly_rem((1u128 << Self::BASE_N) | 1, generator), 0);
        code
    }

    /// Generator polynomial of the underlying (127,64) code, bit i = `x^i`.
    pub fn generator_poly(&self) -> u128 {
        self.generator
    }

    /// Systematic encode: 64 information bits, 63 cyclic parity bits, one
    /// overall even-parity bit.
    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>, BchError> {
        check_bits(msg, Self::K)?;
        let mut m = 0u128;
        for (i, &b) in msg.iter().enumerate() {
            m |= (b as u128) << (Self::K - 1 - i);
        }
        let shifted = m << (Self::BASE_N - Self::K);
        let rem = poly_rem(shifted, self.generator);
        let mut cw = Vec::with_capacity(Self::N);
        cw.extend_from_slice(msg);
        for i in (0..Self::BASE_N - Self::K).rev() {
            cw.push(((rem >> i) & 1) as u8);
        }
        let parity = cw.iter().fold(0u8, |a, &b| a ^ b);
        cw.push(parity);
        Ok(cw)
    }

    /// True iff `bits` is a codeword: the first 127 bits form a multiple of
    /// the generator polynomial and the overall weight is even.
    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        if check_bits(bits, Self::N).is_err() {
            return false;
        }
        let mut poly = 0u128;
        for (i, &b) in bits[..Self::BASE_N].iter().enumerate() {
            poly |= (b as u128) << (Self::BASE_N - 1 - i);
        }
        poly_rem(poly, self.generator) == 0 && bits.iter().fold(0u8, |a, &b| a ^ b) == 0
    }

    /// Systematic 64x128 generator matrix (rows are encodings of unit
    /// messages), as needed by soft-decision decoders.
    pub fn generator_matrix(&self) -> BitMatrix {
        let mut rows = Vec::with_capacity(Self::K);
        for i in 0..Self::K {
            let mut msg = vec![0u8; Self::K];
            msg[i] = 1;
            rows.push(self.encode(&msg).expect("unit message encodes"));
        }
        BitMatrix::from_rows(&rows).expect("generator rows are well-formed")
    }
}

impl Default for Ebch128 {
    fn default() -> Self {
        Self::new()
    }
}

/// Minimal polynomial over GF(2) of `alpha^e` for the given cyclotomic coset:
/// the product of `(x - alpha^j)` over the coset, whose coefficients collapse
/// into {0, 1}.
fn minimal_polynomial(gf: &Gf128, coset: &[usize]) -> u128 {
    // Coefficients over GF(2^7), index = power of x.
    let mut coeffs = vec![0u8; coset.len() + 1];
    coeffs[0] = 1;
    let mut deg = 0;
    for &j in coset {
        let root = gf.pow_alpha(j);
        // Multiply by (x + root).
        let mut next = vec![0u8; deg + 2];
        for (i, &c) in coeffs[..=deg].iter().enumerate() {
            next[i + 1] ^= c;
            next[i] ^= gf.mul(c, root);
        }
        deg += 1;
        coeffs = next;
    }
    let mut out = 0u128;
    for (i, &c) in coeffs.iter().enumerate() {
        assert!(c <= 1, "minimal polynomial coefficients must lie in GF(2)");
        out |= (c as u128) << i;
    }
    out
}
