//! Geometry of symmetric Levy transition densities.
//!
//! A symmetric Levy process with characteristic exponent `psi` has transition
//! densities `p_t(x) = (2pi)^{-n} Int exp(-i x.xi) exp(-t psi(xi)) dxi`.  This
//! crate works with the metric-measure picture on the frequency side: the
//! pseudo-metric `d(xi, eta) = sqrt(psi(xi - eta))` together with Lebesgue
//! measure controls the diagonal `p_t(0)` through ball volumes, and the
//! off-diagonal decay `p_t(x) = p_t(0) exp(-delta_t^2(x))` defines a state-side
//! metric candidate whose negative-definiteness can be tested operationally.
//!
//! Modules are layered: `quad`/`roots`/`special` provide the numerical kernels,
//! `exponents`/`bernstein` the function catalogs, `geometry`/`density` the
//! volume and transform machinery, `offdiag`/`mixtures` the metric diagnostics
//! and subordination pipelines, and `table` the closed-form reference family.

// `!(x > 0.0)` is the NaN-rejecting guard used throughout; `x <= 0.0` would
// silently accept NaN. Reference constants keep their full published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod bernstein;
pub mod dd;
pub mod density;
pub mod eig;
pub mod error;
pub mod exponents;
pub mod geometry;
pub mod mixtures;
pub mod offdiag;
pub mod parallel;
pub mod quad;
pub mod report;
pub mod roots;
pub mod sampling;
pub mod special;
pub mod table;
pub mod util;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
