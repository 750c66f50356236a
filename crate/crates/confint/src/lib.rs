// Validation checks use negated comparisons like `!(x > 0.0)` on
// purpose: unlike `x <= 0.0`, they also fail NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Confidence interval construction and evaluation.
//!
//! The crate covers three estimation settings plus the machinery to judge
//! how well each interval construction actually performs:
//!
//! * [`binom`]: intervals for a binomial proportion (Clopper-Pearson,
//!   Wilson, Wald, likelihood-ratio support, and highest-posterior-density
//!   under a flat prior), plus exact coverage curves by enumeration.
//! * [`mean`]: intervals for the mean of an i.i.d. sample (t, z, and
//!   likelihood-ratio support in t and normal flavours).
//! * [`ml`] and [`bootstrap`]: intervals around maximum-likelihood and
//!   plug-in estimates, via the observed information matrix, the
//!   delete-one jackknife, or bootstrap resampling (percentile, basic,
//!   BCa).
//! * [`coverage`]: Monte Carlo coverage and length experiments with
//!   reproducible, scheduling-independent randomness.
//!
//! Everything rests on [`numerics`], a small self-contained layer with
//! the special functions, root finding, simplex minimization, and seeded
//! random streams the constructions need.

mod error;
mod interval;
mod sample;

pub mod binom;
pub mod bootstrap;
pub mod coverage;
pub mod hpd;
pub mod mean;
pub mod ml;
pub mod numerics;

pub use binom::BinomObservation;
pub use error::{Error, Result};
pub use interval::{Interval, Method};
pub use sample::Sample;
