//! Confidence and support intervals for a mean value.
//!
//! Every construction here is symmetric about the sample mean x̄ and
//! scales with √(s²/n); they differ only in the factor in front:
//!
//! | construction            | half-width factor                  |
//! |-------------------------|------------------------------------|
//! | [`t_interval`]          | t_{1−α/2}(n−1)                     |
//! | [`z_interval`]          | z_{1−α/2}                          |
//! | [`lr_support_normal`]   | √(2 ln K)                          |
//! | [`lr_support_t`]        | √((K^{2/n}−1)(n−1)) (profiled s²)  |
//!
//! With K = 8 the support factor √(2 ln 8) ≈ 2.0393 sits just above the
//! 95% z factor 1.95996, which is why K = 8 support intervals and 95%
//! confidence intervals are near-interchangeable in practice.
//!
//! The flat-prior HPD intervals coincide exactly with the t/z intervals
//! for a location parameter, so [`hpd_mean`] only re-tags them.

use crate::numerics::{normal_quantile, t_quantile};
use crate::{Error, Interval, Method, Result, Sample};

/// Which reference distribution calibrates the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Calibration {
    /// Student t with n−1 degrees of freedom.
    T,
    /// Standard normal, the n → ∞ limit of the t calibration.
    Normal,
}

/// Above this sample size the t-flavored support interval switches to
/// the normal-flavored formula; see [`lr_support_t`].
const LR_T_CROSSOVER: usize = 1000;

fn check_len(sample: &Sample) -> Result<()> {
    if sample.len() < 2 {
        return Err(Error::domain(format!(
            "mean intervals need at least two values, got {}",
            sample.len()
        )));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    Ok(())
}

// K = 1 is allowed (unlike the binomial support interval) and produces
// the zero-width interval {x̄}: the formulas degrade continuously.
fn check_k_ratio(k_ratio: f64) -> Result<()> {
    if !k_ratio.is_finite() || k_ratio < 1.0 {
        return Err(Error::domain(format!(
            "likelihood-ratio cutoff must be finite and at least 1, got {k_ratio}"
        )));
    }
    Ok(())
}

fn symmetric(sample: &Sample, half_width: f64, method: Method, level: f64) -> Interval {
    let center = sample.mean();
    Interval::new(center - half_width, center + half_width, method, level)
}

/// Classic t interval `x̄ ± t_{1−α/2}(n−1)·√(s²/n)`.
pub fn t_interval(sample: &Sample, alpha: f64) -> Result<Interval> {
    check_len(sample)?;
    check_alpha(alpha)?;
    let t = t_quantile(1.0 - 0.5 * alpha, (sample.len() - 1) as f64)?;
    Ok(symmetric(sample, t * sample.se_mean(), Method::MeanT, 1.0 - alpha))
}

/// Normal-approximation interval `x̄ ± z_{1−α/2}·√(s²/n)`.
///
/// Strictly inside the t interval for the same sample, with the gap
/// closing as n grows.
pub fn z_interval(sample: &Sample, alpha: f64) -> Result<Interval> {
    check_len(sample)?;
    check_alpha(alpha)?;
    let z = normal_quantile(1.0 - 0.5 * alpha)?;
    Ok(symmetric(sample, z * sample.se_mean(), Method::MeanZ, 1.0 - alpha))
}

/// Likelihood-ratio support interval with the variance profiled out:
///
/// ```text
/// x̄ ± √((K^{2/n} − 1) · s²·(n−1)/n)
/// ```
///
/// The factor K^{2/n}−1 loses its leading digits as n grows, so two
/// defenses apply: below the crossover it is computed as
/// `expm1((2/n)·ln K)`, which is accurate for every n, and above
/// n = 1000 the whole computation delegates to [`lr_support_normal`]
/// (relative difference < 1e-3 there), keeping only the `lr-t` tag.
pub fn lr_support_t(sample: &Sample, k_ratio: f64) -> Result<Interval> {
    check_len(sample)?;
    check_k_ratio(k_ratio)?;
    if sample.len() > LR_T_CROSSOVER {
        let wide = lr_support_normal(sample, k_ratio)?;
        return Ok(Interval::new(wide.lower, wide.upper, Method::MeanLrT, k_ratio));
    }
    let n = sample.len() as f64;
    let factor = ((2.0 / n) * k_ratio.ln()).exp_m1();
    let half = (factor * sample.variance() * (n - 1.0) / n).sqrt();
    Ok(symmetric(sample, half, Method::MeanLrT, k_ratio))
}

/// Large-n likelihood-ratio support interval `x̄ ± √((2s²/n)·ln K)`.
pub fn lr_support_normal(sample: &Sample, k_ratio: f64) -> Result<Interval> {
    check_len(sample)?;
    check_k_ratio(k_ratio)?;
    let n = sample.len() as f64;
    let half = (2.0 * sample.variance() / n * k_ratio.ln()).sqrt();
    Ok(symmetric(sample, half, Method::MeanLrNormal, k_ratio))
}

/// Highest-density interval of the flat-prior posterior for the mean.
///
/// The posterior of a location parameter is symmetric and unimodal
/// around x̄, so its HPD region is identical to the frequentist
/// interval of the same calibration; the endpoints are copied verbatim
/// and only the method tag changes.
pub fn hpd_mean(sample: &Sample, alpha: f64, calibration: Calibration) -> Result<Interval> {
    let (base, tag) = match calibration {
        Calibration::T => (t_interval(sample, alpha)?, Method::MeanHpdT),
        Calibration::Normal => (z_interval(sample, alpha)?, Method::MeanHpdNormal),
    };
    Ok(Interval::new(base.lower, base.upper, tag, base.level))
}

/// Route a sample through any of the six constructions. `alpha_or_k`
/// is the tail probability α except for the two support methods, where
/// it is the cutoff K.
pub fn interval_for(method: Method, sample: &Sample, alpha_or_k: f64) -> Result<Interval> {
    match method {
        Method::MeanT => t_interval(sample, alpha_or_k),
        Method::MeanZ => z_interval(sample, alpha_or_k),
        Method::MeanLrT => lr_support_t(sample, alpha_or_k),
        Method::MeanLrNormal => lr_support_normal(sample, alpha_or_k),
        Method::MeanHpdT => hpd_mean(sample, alpha_or_k, Calibration::T),
        Method::MeanHpdNormal => hpd_mean(sample, alpha_or_k, Calibration::Normal),
        other => Err(Error::domain(format!("{other} is not a mean-value method"))),
    }
}
