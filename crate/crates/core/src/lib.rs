//! Exact information-cost analysis for the Augmented Index problem and the
//! streaming recognition of Dyck(2).
//!
//! Everything in this crate is `no_std` with `alloc`. File formats, the
//! command-line front end and report emission live in the `dyckinfo` crate.
//!
//! Layout:
//!
//! - [`probkit`]: exact finite distributions, ℓ₁ / Hellinger distances,
//!   entropies and (conditional) mutual information.
//! - [`protocol`]: two-party randomized protocols over explicit coin spaces,
//!   transcript distributions, information costs, cut-and-paste.
//! - [`augindex`]: the Augmented Index function, its hard and easy input
//!   distributions, the block protocol family and the trade-off evaluators.
//! - [`streamvm`]: a space-audited multi-pass streaming runtime.
//! - [`dyck`]: Dyck(2) checkers (stack, height bands, free-group fingerprint).
//! - [`reduction`]: the Ascension embedding and the streaming-to-protocol
//!   compiler, plus the space lower-bound calculator.
//! - [`quantumkit`]: dense density-matrix tools and quantum protocol analysis.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod augindex;
pub mod bits;
pub mod dyck;
mod error;
pub mod math;
pub mod probkit;
pub mod protocol;
pub mod quantumkit;
pub mod reduction;
pub mod streamvm;

pub use bits::Bits;
pub use error::{Error, Result};
