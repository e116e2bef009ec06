//! Greedy quantization sequences of one-dimensional laws, their product and
//! Box-Müller compositions, recursive quantization-based cubature, exact star
//! discrepancy in dimensions 1 to 3, and the diagnostics and pricing
//! benchmarks built on top of them.

// `!(a < b)` is used on purpose: it also rejects NaN. Quadrature and
// quantile coefficients are kept as published.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cubature;
pub mod diagnostics;
pub mod discrepancy;
pub mod distributions;
pub mod error;
pub mod greedy1d;
pub mod io;
pub mod pricing;
pub mod product_grid;
pub mod quadrature;

pub use cubature::{integrate_full, integrate_stream, CubatureState};
pub use discrepancy::PointSet;
pub use distributions::{Distribution1D, Interval, Moments};
pub use error::{Error, Result};
pub use greedy1d::{GreedySequence, InsertionStep};
pub use pricing::{BasketParams, BsParams};
pub use product_grid::{GaussianGrid, GridProvenance, ProductGrid};
