//! Certification engine and search toolkit for quantitative freeness of
//! matrix group elements: validated interval arithmetic over exact rational
//! matrices, projective contraction certificates, randomized configuration
//! search, and brute-force cross-validation.

pub mod ball;
pub mod certify;
pub mod dyadic;
pub mod error;
pub mod interval;
pub mod matrix;
pub mod norms;
pub mod oracle;
pub mod poly;
pub mod projective;
pub mod proximal;
pub mod scalar;
pub mod search;
pub mod words;

pub use error::{Error, Result};
pub use interval::{Interval, DEFAULT_PREC};
pub use matrix::{Matrix, QMatrix};
pub use scalar::Real;

/// Exact rational scalar used for all group arithmetic.
pub type Q = num_rational::BigRational;
