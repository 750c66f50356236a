//! Highest-density interval extraction from a quantile function.
//!
//! For a unimodal distribution the shortest interval holding probability
//! mass 1 - alpha is the highest-density one, and every candidate can be
//! written as [q(beta), q(beta + 1 - alpha)] for a lower-tail mass
//! beta in [0, alpha]. The solver therefore minimizes the width
//!
//! ```text
//! w(beta) = q(beta + 1 - alpha) - q(beta)
//! ```
//!
//! over that one-dimensional range with a golden-section search. The
//! returned interval carries mass exactly 1 - alpha by construction;
//! only the placement of the tails is up to the optimizer.
//!
//! Multimodal densities are out of scope: the caller is responsible for
//! passing a unimodal distribution, and only a coarse monotonicity check
//! of the quantile function guards against outright invalid input. For a
//! symmetric density the result coincides with the equal-tailed interval
//! (beta = alpha/2); for a monotone density one tail collapses to the
//! support boundary.

use crate::error::{Error, Result};

/// Width tolerance, in tail-mass units, of the golden-section search.
const BETA_TOL: f64 = 1e-10;

/// Number of probe points in the monotonicity spot-check.
const MONOTONICITY_PROBES: usize = 50;

/// A highest-density interval plus the tail split that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpdInterval {
    pub lower: f64,
    pub upper: f64,
    /// Probability mass below the interval (the optimal beta). The mass
    /// above is alpha - lower_tail.
    pub lower_tail: f64,
}

impl HpdInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Finds the shortest interval of mass 1 - alpha for the distribution
/// whose quantile function is `quantile`.
///
/// `quantile(p)` must be defined and non-decreasing for p in
/// [0, alpha] and [1 - alpha, 1]; distributions on an infinite support
/// (where q(0) or q(1) diverge) are not usable here, which is fine for
/// the beta posteriors this crate cares about.
pub fn hpd_interval<Q>(quantile: Q, alpha: f64) -> Result<HpdInterval>
where
    Q: Fn(f64) -> Result<f64>,
{
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "hpd_interval requires alpha in (0, 1), got {alpha}"
        )));
    }

    // Spot-check that the quantile function is plausibly monotone. Fifty
    // points across (0, 1) will not prove monotonicity, but they reject
    // the common mistakes (a density passed instead of a quantile, or
    // swapped arguments) before the search produces nonsense.
    let mut prev = f64::NEG_INFINITY;
    for i in 1..=MONOTONICITY_PROBES {
        let p = i as f64 / (MONOTONICITY_PROBES + 1) as f64;
        let value = quantile(p)?;
        if !value.is_finite() {
            return Err(Error::Domain(format!(
                "quantile function returned a non-finite value at p = {p}"
            )));
        }
        if value < prev - 1e-12 {
            return Err(Error::Domain(format!(
                "quantile function is not monotone near p = {p}"
            )));
        }
        prev = value;
    }

    let width = |beta: f64| -> Result<f64> {
        Ok(quantile(beta + 1.0 - alpha)? - quantile(beta)?)
    };

    // golden-section search for the minimizing tail split on [0, alpha]
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut lo = 0.0f64;
    let mut hi = alpha;
    let mut mid_lo = hi - inv_phi * (hi - lo);
    let mut mid_hi = lo + inv_phi * (hi - lo);
    let mut w_lo = width(mid_lo)?;
    let mut w_hi = width(mid_hi)?;
    while hi - lo > BETA_TOL {
        if w_lo <= w_hi {
            hi = mid_hi;
            mid_hi = mid_lo;
            w_hi = w_lo;
            mid_lo = hi - inv_phi * (hi - lo);
            w_lo = width(mid_lo)?;
        } else {
            lo = mid_lo;
            mid_lo = mid_hi;
            w_lo = w_hi;
            mid_hi = lo + inv_phi * (hi - lo);
            w_hi = width(mid_hi)?;
        }
    }
    let mut beta = 0.5 * (lo + hi);
    let mut best = width(beta)?;
    // Monotone densities put the optimum exactly on a boundary of the
    // tail-split range, which golden section approaches but never hits.
    // Snap to a boundary whenever it is at least as short up to solver
    // noise, so those cases get exact support-edge endpoints.
    let slack = 1e-9 * (1.0 + best.abs());
    for cand in [alpha, 0.0] {
        let w = width(cand)?;
        if w <= best + slack {
            beta = cand;
            best = w;
        }
    }
    let lower = quantile(beta)?;
    let upper = quantile(beta + 1.0 - alpha)?;
    if upper < lower {
        return Err(Error::Numeric(format!(
            "quantile function produced a reversed interval at beta = {beta}"
        )));
    }

    Ok(HpdInterval {
        lower,
        upper,
        lower_tail: beta,
    })
}
