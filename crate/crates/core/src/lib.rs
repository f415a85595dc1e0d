//! Construction, verification and length bounds for q-ary frameproof and
//! strongly selective codes.
//!
//! A code is a [`CodeMatrix`] whose columns are codewords. Three
//! constructions are provided:
//!
//! * [`lll`]: resampling construction of constant-weight codes with bounded
//!   pairwise agreement, giving strongly selective and frameproof codes in
//!   `O(t n^2)` expected time;
//! * [`expurgate`]: random codes with surplus columns, pruned of every
//!   covered column;
//! * [`diagonal`]: the explicit code of length `ceil(n / (q-1))`.
//!
//! [`verify`] holds the exhaustive property checkers, [`bounds`] the
//! closed-form length bounds, and [`sim`] a slotted multichannel conflict
//! resolution simulator driven by a code.

pub mod bounds;
pub mod code;
pub mod codec;
pub mod diagonal;
pub mod error;
pub mod expurgate;
pub mod lll;
pub mod real;
pub mod rng;
pub mod sim;
pub mod verify;

pub use code::{CodeMatrix, ColumnWeightProfile, Symbol};
pub use codec::{read_code, write_code};
pub use error::{Error, Result};
pub use real::Real;

/// Scalar used for every real-valued formula unless stated otherwise.
pub type Scalar = f64;

/// Bound report evaluated in double precision.
pub type BoundReport = bounds::BoundReport<Scalar>;
/// Single bound entry in double precision.
pub type BoundEntry = bounds::BoundEntry<Scalar>;
/// Bound value in double precision.
pub type BoundValue = bounds::BoundValue<Scalar>;
