//! Self-contained numerical substrate: special functions, distribution
//! CDFs and quantiles, bracketed root finding, simplex minimization, and
//! reproducible random streams.
//!
//! Nothing in here knows about confidence intervals; the rest of the
//! crate builds on these primitives.

pub mod dist;
pub mod optimize;
pub mod rng;
pub mod root;
pub mod special;

pub use dist::{
    beta_quantile, binom_cdf, binom_pmf, ln_choose, normal_cdf, normal_quantile, t_cdf,
    t_quantile,
};
pub use optimize::{minimize, MinimizeOptions, MinimizeResult};
pub use rng::RngStream;
pub use root::{find_root, Bracket, DEFAULT_TOL};
pub use special::{log_beta, log_gamma, reg_inc_beta};
