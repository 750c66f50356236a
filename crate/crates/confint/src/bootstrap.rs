//! Non-parametric bootstrap resampling and the percentile, basic, and
//! BCa interval estimators.
//!
//! The pipeline has two halves. [`boot_distribution`] simulates the
//! estimator's distribution by n-fold drawing with replacement and
//! stores the replicate estimates in generation order. The interval
//! estimators then reduce those replicates: [`percentile_interval`]
//! reads off empirical quantiles directly, [`basic_interval`] reflects
//! them at the original estimate, and [`bca_interval`] shifts the
//! quantile probabilities by a bias correction (from the fraction of
//! replicates below the estimate) and an acceleration (from the
//! delete-one jackknife skewness) before reading them off.
//!
//! Replication counts below r = 1000 make the tail quantiles noisy;
//! callers that let users pick r should nudge them toward at least
//! that.

use crate::numerics::{normal_cdf, normal_quantile, RngStream};
use crate::{Error, Interval, Method, Result, Sample};

/// The simulated distribution of one estimator: the estimate on the
/// original sample plus `r` replicate estimates in generation order.
#[derive(Debug, Clone)]
pub struct BootstrapReplicates {
    theta_hat: f64,
    replicates: Vec<f64>,
    // Ascending copy, built once so every quantile lookup is O(1).
    sorted: Vec<f64>,
}

impl BootstrapReplicates {
    pub fn new(theta_hat: f64, replicates: Vec<f64>) -> Result<Self> {
        if !theta_hat.is_finite() {
            return Err(Error::domain(format!(
                "estimate on the original sample is not finite: {theta_hat}"
            )));
        }
        if replicates.is_empty() {
            return Err(Error::domain("need at least one bootstrap replicate"));
        }
        if let Some(bad) = replicates.iter().find(|t| !t.is_finite()) {
            return Err(Error::domain(format!(
                "replicates must be finite, found {bad}"
            )));
        }
        let mut sorted = replicates.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(BootstrapReplicates {
            theta_hat,
            replicates,
            sorted,
        })
    }

    pub fn theta_hat(&self) -> f64 {
        self.theta_hat
    }

    /// Replicates in the order they were generated.
    pub fn replicates(&self) -> &[f64] {
        &self.replicates
    }

    pub fn r(&self) -> usize {
        self.replicates.len()
    }

    /// Empirical quantile as the order statistic of rank ⌈(r+1)·q⌉,
    /// clamped to [1, r]. Rank-exact, no interpolation.
    fn quantile(&self, q: f64) -> f64 {
        let r = self.sorted.len() as f64;
        let rank = ((r + 1.0) * q).ceil().clamp(1.0, r) as usize;
        self.sorted[rank - 1]
    }
}

/// One bootstrap resample: n draws with replacement from the sample.
pub fn resample(sample: &Sample, rng: &mut RngStream) -> Sample {
    let values = sample.values();
    let drawn: Vec<f64> = (0..values.len())
        .map(|_| values[rng.choose(values.len())])
        .collect();
    Sample::new(drawn).expect("resample of a valid sample stays valid")
}

/// Simulate the estimator's distribution with `r` resamples.
///
/// Replicates are generated sequentially on the given stream, so the
/// result is a pure function of (sample, estimator, r, seed). An
/// estimator failure aborts the run and names the replicate index.
pub fn boot_distribution<F>(
    sample: &Sample,
    estimator: F,
    r: usize,
    rng: &mut RngStream,
) -> Result<BootstrapReplicates>
where
    F: Fn(&Sample) -> Result<f64>,
{
    if r == 0 {
        return Err(Error::domain("replication count must be at least 1"));
    }
    // A failure on the original sample is the caller's problem, not a
    // replicate's; it propagates without an index.
    let theta_hat = estimator(sample)?;

    let mut replicates = Vec::with_capacity(r);
    for i in 0..r {
        let drawn = resample(sample, rng);
        let theta = estimator(&drawn).map_err(|e| Error::Estimator {
            index: i,
            source: Box::new(e),
        })?;
        replicates.push(theta);
    }
    BootstrapReplicates::new(theta_hat, replicates)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    Ok(())
}

fn check_r(reps: &BootstrapReplicates) -> Result<()> {
    if reps.r() < 2 {
        return Err(Error::domain(
            "interval estimators need at least two replicates",
        ));
    }
    Ok(())
}

/// Percentile interval `[Q*(α/2), Q*(1−α/2)]` of the replicates.
pub fn percentile_interval(reps: &BootstrapReplicates, alpha: f64) -> Result<Interval> {
    check_r(reps)?;
    check_alpha(alpha)?;
    Ok(Interval::new(
        reps.quantile(0.5 * alpha),
        reps.quantile(1.0 - 0.5 * alpha),
        Method::BootPercentile,
        1.0 - alpha,
    ))
}

/// Basic interval: the percentile interval reflected at θ̂,
/// `[2θ̂ − Q*(1−α/2), 2θ̂ − Q*(α/2)]`.
pub fn basic_interval(reps: &BootstrapReplicates, alpha: f64) -> Result<Interval> {
    check_r(reps)?;
    check_alpha(alpha)?;
    let two_hat = 2.0 * reps.theta_hat();
    Ok(Interval::new(
        two_hat - reps.quantile(1.0 - 0.5 * alpha),
        two_hat - reps.quantile(0.5 * alpha),
        Method::BootBasic,
        1.0 - alpha,
    ))
}

/// Bias-corrected and accelerated (BCa) interval.
///
/// The bias correction `z₀ = Φ⁻¹(#{θ* < θ̂}/r)` (ties at θ̂ counted as
/// half) and the acceleration `a = Σd³ / (6(Σd²)^{3/2})` from the
/// delete-one jackknife deltas `d_i = θ_(·) − θ_(i)` shift the two tail
/// probabilities
///
/// ```text
/// α_j = Φ(z₀ + (z₀ + z_j)/(1 − a(z₀ + z_j)))
/// ```
///
/// which are then read off the replicate distribution like the
/// percentile interval. With symmetric replicates and a symmetric
/// jackknife (z₀ = 0, a = 0) this collapses to exactly the percentile
/// interval.
pub fn bca_interval<F>(
    reps: &BootstrapReplicates,
    sample: &Sample,
    estimator: F,
    alpha: f64,
) -> Result<Interval>
where
    F: Fn(&Sample) -> Result<f64>,
{
    check_r(reps)?;
    check_alpha(alpha)?;
    if sample.len() < 2 {
        return Err(Error::domain(
            "BCa needs at least two observations for the jackknife",
        ));
    }

    let theta_hat = reps.theta_hat();
    let below = reps.replicates().iter().filter(|t| **t < theta_hat).count() as f64;
    let ties = reps.replicates().iter().filter(|t| **t == theta_hat).count() as f64;
    let frac = (below + 0.5 * ties) / reps.r() as f64;
    if frac <= 0.0 || frac >= 1.0 {
        return Err(Error::Degenerate(format!(
            "all {} replicates fall on one side of the estimate, the bias correction is infinite",
            reps.r()
        )));
    }
    let z0 = normal_quantile(frac)?;

    // Delete-one estimates for the acceleration.
    let values = sample.values();
    let n = values.len();
    let mut deleted = Vec::with_capacity(n);
    let mut buf = Vec::with_capacity(n - 1);
    for i in 0..n {
        buf.clear();
        buf.extend_from_slice(&values[..i]);
        buf.extend_from_slice(&values[i + 1..]);
        let sub = Sample::from_slice(&buf)?;
        let theta = estimator(&sub).map_err(|e| Error::Estimator {
            index: i,
            source: Box::new(e),
        })?;
        deleted.push(theta);
    }
    let center = deleted.iter().sum::<f64>() / n as f64;
    let (mut sum2, mut sum3) = (0.0, 0.0);
    for theta in &deleted {
        let d = center - theta;
        sum2 += d * d;
        sum3 += d * d * d;
    }
    let accel = if sum2 == 0.0 {
        // Zero jackknife dispersion (constant estimator): no skewness
        // information, fall back to pure bias correction.
        0.0
    } else {
        sum3 / (6.0 * sum2.powf(1.5))
    };

    let adjust = |z: f64| -> Result<f64> {
        let u = z0 + z;
        let denom = 1.0 - accel * u;
        if denom <= 0.0 {
            return Err(Error::Degenerate(format!(
                "acceleration {accel:.3e} too large for the requested tail"
            )));
        }
        Ok(normal_cdf(z0 + u / denom))
    };
    let alpha_lo = adjust(normal_quantile(0.5 * alpha)?)?;
    let alpha_hi = adjust(normal_quantile(1.0 - 0.5 * alpha)?)?;

    Ok(Interval::new(
        reps.quantile(alpha_lo),
        reps.quantile(alpha_hi),
        Method::BootBca,
        1.0 - alpha,
    ))
}
