//! Confidence intervals for maximum-likelihood estimates.
//!
//! The point estimate comes from maximizing a user-supplied
//! log-likelihood with the derivative-free simplex optimizer; the
//! spread comes from one of two variance estimates:
//!
//! * the curvature route ([`fit_ml`]): invert the Hessian of the
//!   negative log-likelihood at the maximum (the observed information)
//!   and read standard deviations off the diagonal;
//! * the resampling route ([`jackknife_sigma`]): delete-one estimates
//!   plugged into the jackknife variance formula.
//!
//! Both feed the same symmetric normal-quantile interval, built by
//! [`hessian_ci`] and [`jackknife_ci`]. The exponential distribution,
//! whose closed forms make every step checkable by hand, ships as the
//! built-in worked model ([`exp_model`], [`exp_mle`], [`exp_sigma_hm`]).

use crate::numerics::{minimize, normal_quantile, MinimizeOptions};
use crate::{Error, Interval, Method, Result, Sample};

/// A log-likelihood model: parameter count, ℓ(θ; sample), and a
/// starting point for the optimizer.
///
/// The log-likelihood must return −∞ for parameters outside its
/// domain (never a silently wrong finite value); the optimizer treats
/// those points as infinitely bad and steps around them.
type LogLikFn = Box<dyn Fn(&[f64], &Sample) -> f64 + Send + Sync>;
type StartFn = Box<dyn Fn(&Sample) -> Vec<f64> + Send + Sync>;

pub struct LogLikModel {
    dim: usize,
    loglik: LogLikFn,
    start: StartFn,
}

impl LogLikModel {
    pub fn new<L, S>(dim: usize, loglik: L, start: S) -> Result<Self>
    where
        L: Fn(&[f64], &Sample) -> f64 + Send + Sync + 'static,
        S: Fn(&Sample) -> Vec<f64> + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(Error::domain("a model needs at least one parameter"));
        }
        Ok(LogLikModel {
            dim,
            loglik: Box::new(loglik),
            start: Box::new(start),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn loglik(&self, theta: &[f64], sample: &Sample) -> f64 {
        (self.loglik)(theta, sample)
    }

    pub fn start(&self, sample: &Sample) -> Vec<f64> {
        (self.start)(sample)
    }
}

/// A fitted model: the ML estimate, its covariance matrix (inverse
/// observed information), and the per-component standard deviations
/// `sigma[i] = √covariance[i][i]`.
#[derive(Debug, Clone)]
pub struct MlFit {
    pub theta_hat: Vec<f64>,
    pub sigma: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
}

/// Maximize the log-likelihood and derive the covariance matrix from
/// the curvature at the maximum.
///
/// Runs the simplex optimizer on −ℓ, then inverts the returned
/// finite-difference Hessian (which for −ℓ is the observed
/// information). A Hessian that is singular or not positive definite
/// is reported as a curvature error: it means the asymptotic normal
/// theory behind these intervals does not apply at this fit, and no
/// covariance should be trusted.
pub fn fit_ml(model: &LogLikModel, sample: &Sample) -> Result<MlFit> {
    let start = model.start(sample);
    if start.len() != model.dim() {
        return Err(Error::domain(format!(
            "start point has {} coordinates for a {}-parameter model",
            start.len(),
            model.dim()
        )));
    }

    let fit = minimize(
        |theta| -model.loglik(theta, sample),
        &start,
        MinimizeOptions::default(),
    )?;
    if !fit.converged {
        return Err(Error::numeric(
            "likelihood optimizer exhausted its budget before converging",
        ));
    }

    let covariance = invert_spd(&fit.hessian)?;
    let sigma = (0..model.dim()).map(|i| covariance[i][i].sqrt()).collect();
    Ok(MlFit {
        theta_hat: fit.argmin,
        sigma,
        covariance,
    })
}

/// Curvature-based interval `θ̂_i ± z_{1−α/2}·σ_i` for one component.
pub fn hessian_ci(fit: &MlFit, component: usize, alpha: f64) -> Result<Interval> {
    if component >= fit.theta_hat.len() {
        return Err(Error::domain(format!(
            "component {component} out of range for a {}-parameter fit",
            fit.theta_hat.len()
        )));
    }
    normal_scale_ci(
        fit.theta_hat[component],
        fit.sigma[component],
        alpha,
        Method::MlHessian,
    )
}

/// Jackknife-based interval `θ̂ ± z_{1−α/2}·σ_JK`.
pub fn jackknife_ci(theta_hat: f64, sigma_jk: f64, alpha: f64) -> Result<Interval> {
    if !sigma_jk.is_finite() || sigma_jk < 0.0 {
        return Err(Error::domain(format!(
            "jackknife sigma must be finite and nonnegative, got {sigma_jk}"
        )));
    }
    normal_scale_ci(theta_hat, sigma_jk, alpha, Method::MlJackknife)
}

fn normal_scale_ci(center: f64, sigma: f64, alpha: f64, method: Method) -> Result<Interval> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    let half = normal_quantile(1.0 - 0.5 * alpha)? * sigma;
    Ok(Interval::new(center - half, center + half, method, 1.0 - alpha))
}

/// Delete-one (jackknife) standard deviation of an estimator:
///
/// ```text
/// σ_JK = √((n−1)/n · Σ_i (θ_(i) − θ_(·))²)
/// ```
///
/// where θ_(i) is the estimate with observation i removed and θ_(·)
/// their average. For a vector-valued estimator, call this once per
/// component; the intervals only ever need the diagonal.
///
/// A failure of the estimator on any subsample aborts the whole
/// computation and names the offending index.
pub fn jackknife_sigma<F>(estimator: F, sample: &Sample) -> Result<f64>
where
    F: Fn(&Sample) -> Result<f64>,
{
    let n = sample.len();
    if n < 2 {
        return Err(Error::domain(
            "jackknife needs at least two observations",
        ));
    }
    let values = sample.values();

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
        if !theta.is_finite() {
            return Err(Error::Estimator {
                index: i,
                source: Box::new(Error::numeric(format!(
                    "estimator returned non-finite value {theta}"
                ))),
            });
        }
        deleted.push(theta);
    }

    let nf = n as f64;
    let center = deleted.iter().sum::<f64>() / nf;
    let ss: f64 = deleted.iter().map(|t| (t - center) * (t - center)).sum();
    Ok(((nf - 1.0) / nf * ss).sqrt())
}

/// The exponential distribution `f(x) = λ e^{−λx}` as a ready-made
/// model: ℓ(λ) = n·ln λ − λ·Σ x_i, started at the closed-form
/// estimate 1/x̄.
pub fn exp_model() -> LogLikModel {
    LogLikModel::new(
        1,
        |theta: &[f64], sample: &Sample| {
            let lambda = theta[0];
            if lambda <= 0.0 {
                return f64::NEG_INFINITY;
            }
            let n = sample.len() as f64;
            let total: f64 = sample.values().iter().sum();
            n * lambda.ln() - lambda * total
        },
        |sample: &Sample| vec![1.0 / sample.mean()],
    )
    .expect("one-parameter model is always valid")
}

/// Closed-form exponential rate estimate λ̂ = 1/x̄.
pub fn exp_mle(sample: &Sample) -> Result<f64> {
    if let Some(bad) = sample.values().iter().find(|x| **x < 0.0) {
        return Err(Error::domain(format!(
            "exponential data must be nonnegative, found {bad}"
        )));
    }
    let mean = sample.mean();
    if mean <= 0.0 {
        return Err(Error::domain(
            "exponential rate is undefined for an all-zero sample",
        ));
    }
    Ok(1.0 / mean)
}

/// Closed-form curvature standard deviation σ̂_HM = λ̂/√n for the
/// exponential rate.
pub fn exp_sigma_hm(lambda_hat: f64, n: usize) -> Result<f64> {
    if !lambda_hat.is_finite() || lambda_hat <= 0.0 {
        return Err(Error::domain(format!(
            "rate estimate must be finite and positive, got {lambda_hat}"
        )));
    }
    if n == 0 {
        return Err(Error::domain("sample size must be positive"));
    }
    Ok(lambda_hat / (n as f64).sqrt())
}

/// Invert a symmetric positive-definite matrix.
///
/// Two passes over a copy: first an unpivoted elimination whose pivots
/// are the ratios of leading principal minors, so requiring every
/// pivot > 0 is exactly the positive-definiteness test; then a
/// Gauss-Jordan inversion with partial pivoting for the numbers that
/// are actually returned. The result is symmetrized to scrub rounding.
#[allow(clippy::needless_range_loop)]
fn invert_spd(matrix: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let t = matrix.len();
    let mut scale = 0.0f64;
    for row in matrix {
        for &v in row {
            if !v.is_finite() {
                return Err(Error::numeric(
                    "curvature matrix has non-finite entries (optimum too close to the domain boundary?)",
                ));
            }
            scale = scale.max(v.abs());
        }
    }
    let tol = scale * 1e-13;

    // Positive-definiteness via Sylvester's criterion on a scratch copy.
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    for i in 0..t {
        let pivot = a[i][i];
        if !(pivot > tol) {
            return Err(Error::Curvature(format!(
                "observed information is not positive definite (pivot {i} is {pivot:.3e})"
            )));
        }
        let row_i = a[i].clone();
        for row in a.iter_mut().skip(i + 1) {
            let f = row[i] / pivot;
            for c in i..t {
                row[c] -= f * row_i[c];
            }
        }
    }

    // Gauss-Jordan with partial pivoting on [matrix | I].
    let mut aug: Vec<Vec<f64>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..t).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..t {
        let best = (col..t)
            .max_by(|&r1, &r2| aug[r1][col].abs().total_cmp(&aug[r2][col].abs()))
            .expect("nonempty pivot range");
        aug.swap(col, best);
        let pivot = aug[col][col];
        if pivot.abs() <= tol {
            return Err(Error::Curvature(format!(
                "observed information is numerically singular at column {col}"
            )));
        }
        let inv_p = 1.0 / pivot;
        for v in aug[col].iter_mut() {
            *v *= inv_p;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
    }

    let mut inv: Vec<Vec<f64>> = aug.into_iter().map(|row| row[t..].to_vec()).collect();
    for i in 0..t {
        for j in 0..i {
            let s = 0.5 * (inv[i][j] + inv[j][i]);
            inv[i][j] = s;
            inv[j][i] = s;
        }
    }
    Ok(inv)
}
