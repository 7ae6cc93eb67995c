//! Link-level simulation toolkit for error-correcting codes on jammed
//! telecommand channels.
//!
//! The crate is organized bottom-up:
//!
//! - [`gf2`]: dense GF(2) linear algebra (bit matrices, systematization),
//! - [`bch`]: the BCH(63,56) telecommand code and the extended BCH(128,64) code,
//! - [`mrb`]: soft-decision most-reliable-basis (ordered-statistics) decoding,
//! - [`turbo`]: rate-1/2 parallel turbo codes with CCSDS constituents,
//! - [`ldpc`]: binary LDPC codes from alist files with sum-product decoding,
//! - [`channel`]: BPSK over AWGN plus pulsed / tone / noise-like jamming,
//! - [`cltu`]: transfer-frame segmentation, row-column interleaving, burst jamming,
//! - [`bounds`]: sphere-packing lower bounds (AWGN and pulsed-jamming variants),
//! - [`sim`]: Monte Carlo sweep engine with deterministic parallel substreams.

pub mod bch;
pub mod bounds;
pub mod channel;
pub mod cltu;
pub mod gf2;
pub mod ldpc;
pub mod mrb;
pub mod sim;
pub mod turbo;
