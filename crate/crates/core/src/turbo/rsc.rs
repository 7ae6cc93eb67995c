//! Recursive systematic convolutional (RSC) constituent encoders.
//!
//! An `RscSpec` holds the two connection polynomials of a rate-1/2 recursive
//! systematic encoder in the feedback realization: the input enters an
//! accumulator through the feedback taps, the parity output is a feedforward
//! combination of the register, and the systematic output is the input
//! itself. Termination drives the register to zero in `memory()` steps by
//! feeding the feedback value back as the input.

use super::TurboError;

/// Connection polynomials, bit `i` of each mask = coefficient of `D^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RscSpec {
    feedback: u32,
    feedforward: u32,
}

impl RscSpec {
    /// Validates and builds an encoder spec. The feedback polynomial must
    /// contain the constant term (bit 0) for the recursion to be realizable.
    pub fn new(feedback: u32, feedforward: u32) -> Result<Self, TurboError> {
        if feedback & 1 == 0 {
            return Err(TurboError::BadConstituent(
                "feedback polynomial must have a constant term".into(),
            ));
        }
        if feedforward == 0 {
            return Err(TurboError::BadConstituent(
                "feedforward polynomial must be nonzero".into(),
            ));
        }
        let spec = Self {
            feedback,
            feedforward,
        };
        if spec.memory() == 0 || spec.memory() > 12 {
            return Err(TurboError::BadConstituent(format!(
                "memory {} outside supported range 1..=12",
                spec.memory()
            )));
        }
        Ok(spec)
    }

    /// The 16-state constituent of the CCSDS telecommand/telemetry turbo
    /// codes: feedback `1 + D^3 + D^4`, feedforward `1 + D + D^3 + D^4`.
    pub fn ccsds() -> Self {
        Self {
            feedback: 0b1_1001,
            feedforward: 0b1_1011,
        }
    }

    pub fn feedback(&self) -> u32 {
        self.feedback
    }

    pub fn feedforward(&self) -> u32 {
        self.feedforward
    }

    /// Number of register cells (max polynomial degree).
    pub fn memory(&self) -> usize {
        let deg = |p: u32| 31 - p.leading_zeros();
        deg(self.feedback).max(deg(self.feedforward)) as usize
    }

    pub fn states(&self) -> usize {
        1 << self.memory()
    }

    fn parity_of(x: u32) -> u8 {
        (x.count_ones() & 1) as u8
    }

    /// Feedback contribution of the current register contents; feeding this
    /// value as the input zeroes the next register cell.
    pub(crate) fn feedback_term(&self, state: u32) -> u8 {
        Self::parity_of((self.feedback >> 1) & state)
    }

    /// One encoder step on `info`: returns `(next_state, parity_bit)`. State
    /// bit `j` holds the register input from `j+1` steps ago.
    pub(crate) fn step(&self, state: u32, info: u8) -> (u32, u8) {
        let a = info ^ self.feedback_term(state);
        let parity = ((self.feedforward as u8 & 1) & a) ^ Self::parity_of((self.feedforward >> 1) & state);
        let next = ((state << 1) | u32::from(a)) & (self.states() as u32 - 1);
        (next, parity)
    }

    /// One termination step: the info bit is chosen so the register shifts in
    /// a zero. Returns `(next_state, tail_info_bit, tail_parity_bit)`.
    pub(crate) fn step_terminate(&self, state: u32) -> (u32, u8, u8) {
        let info = self.feedback_term(state);
        let (next, parity) = self.step(state, info);
        debug_assert_eq!(next & 1, 0);
        (next, info, parity)
    }
}

/// Output of one constituent encoding pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RscEncoding {
    /// Copy of the input bits.
    pub systematic: Vec<u8>,
    /// One parity bit per input bit.
    pub parity: Vec<u8>,
    /// Termination input bits (`memory()` of them; empty if unterminated).
    pub tail_systematic: Vec<u8>,
    /// Parity bits of the termination steps.
    pub tail_parity: Vec<u8>,
    /// Register contents after the last step (0 when terminated).
    pub final_state: u32,
}

/// Encodes `bits` with the given constituent; when `terminate` is set, runs
/// `memory()` extra feedback-driven steps that end in state zero.
pub fn rsc_encode(spec: &RscSpec, bits: &[u8], terminate: bool) -> RscEncoding {
    let mut state = 0u32;
    let mut parity = Vec::with_capacity(bits.len());
    for &b in bits {
        let (next, p) = spec.step(state, b & 1);
        parity.push(p);
        state = next;
    }
    let mut tail_systematic = Vec::new();
    let mut tail_parity = Vec::new();
    if terminate {
        for _ in 0..spec.memory() {
            let (next, u, p) = spec.step_terminate(state);
            tail_systematic.push(u);
            tail_parity.push(p);
            state = next;
        }
        debug_assert_eq!(state, 0);
    }
    RscEncoding {
        systematic: bits.to_vec(),
        parity,
        tail_systematic,
        tail_parity,
        final_state: state,
    }
}
