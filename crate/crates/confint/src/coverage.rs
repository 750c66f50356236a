//! Coverage experiments: how often does an interval method actually
//! capture the truth, and how long are its intervals?
//!
//! Two evaluation modes share the [`CoverageCurve`] output type:
//!
//! * exact enumeration for the binomial methods (delegated to
//!   [`crate::binom::exact_coverage`], wrapped here by
//!   [`run_binom_exact`]), where `mc_stderr` is zero;
//! * Monte-Carlo simulation for the mean-of-a-cubic-density family
//!   ([`run_mean_experiment`]) and the exponential-rate ML family
//!   ([`run_exp_experiment`]).
//!
//! The simulators are deterministic in a strong sense: every
//! replication draws from its own random stream keyed by
//! `(seed, sample size, replication index)`, batches of replications
//! are folded in a fixed order, and therefore the output is
//! bit-identical for a given config no matter how many worker threads
//! run, which methods are requested alongside, or how the batches are
//! scheduled. Two runs that share a seed also share their simulated
//! samples, so method comparisons are paired rather than independent.
//!
//! Exact per-method length curves for the binomial constructions
//! (maximum over outcomes as n grows, and the per-p̂ sweep at fixed n)
//! are computed by [`binom_max_length_curves`] and
//! [`binom_length_vs_phat`].

use rayon::prelude::*;

use crate::binom::{self, BinomObservation};
use crate::bootstrap::{self, BootstrapReplicates};
use crate::numerics::{normal_quantile, RngStream};
use crate::{mean, ml};
use crate::{Error, Interval, Method, Result, Sample};

/// The mean of the density 3x² on [0, 1]: ∫x·3x² dx = 3/4.
pub const CUBIC_TRUE_MEAN: f64 = 0.75;

/// Inner replication count for bootstrap methods inside the
/// simulation loop (the recommended floor for quantile stability).
pub const BOOT_INNER_R: usize = 1000;

/// Default sample-size grid for the simulated families.
pub const DEFAULT_N_GRID: [usize; 5] = [5, 10, 20, 50, 100];

/// Replications per work unit. Batches are distributed across threads
/// but folded in index order, so the batch size affects throughput
/// only, never the numbers.
const SIM_BATCH: u64 = 1024;

/// 1001 evenly spaced p values spanning [0, 1].
pub fn default_p_grid() -> Vec<f64> {
    (0..=1000).map(|i| f64::from(i) / 1000.0).collect()
}

/// Which data-generating family an experiment simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Exact binomial enumeration; nothing is simulated.
    BinomExact,
    /// Sample mean of n draws from the density f(x) = 3x² on [0, 1].
    MeanCubic,
    /// Exponential rate estimate λ̂ = 1/x̄ on n draws at a true λ.
    ExpMl,
}

/// Everything a simulation needs: family, methods, sizes, counts,
/// levels, and the seed that makes it reproducible.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub family: Family,
    pub methods: Vec<Method>,
    pub n_values: Vec<usize>,
    pub n_reps: u64,
    pub alpha: f64,
    pub k_ratio: f64,
    pub seed: u64,
    /// True parameter of the family where one is free (the exponential
    /// rate λ). The cubic-density family has no free parameter; its
    /// true mean is pinned at 3/4 and this field is ignored.
    pub true_param: f64,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::domain("no interval methods requested"));
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(Error::domain(format!("method {m} requested twice")));
            }
        }
        if self.n_values.is_empty() {
            return Err(Error::domain("no sample sizes requested"));
        }
        for &n in &self.n_values {
            if n < 2 {
                return Err(Error::domain(format!(
                    "each sample size must be at least 2, got {n}"
                )));
            }
            if n >= (1 << 24) {
                return Err(Error::domain(format!(
                    "sample size {n} exceeds the stream-id budget (max 2^24 - 1)"
                )));
            }
        }
        if self.n_reps == 0 {
            return Err(Error::domain("replication count must be at least 1"));
        }
        if self.n_reps >= (1 << 40) {
            return Err(Error::domain(
                "replication count exceeds the stream-id budget (max 2^40 - 1)",
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::domain(format!(
                "alpha must lie strictly between 0 and 1, got {}",
                self.alpha
            )));
        }
        if !self.k_ratio.is_finite() || self.k_ratio < 1.0 {
            return Err(Error::domain(format!(
                "likelihood-ratio cutoff must be finite and at least 1, got {}",
                self.k_ratio
            )));
        }
        Ok(())
    }
}

/// Estimated (or exact) coverage probability and mean interval length
/// of one method along an axis of true parameters or sample sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageCurve {
    pub method: Method,
    /// Abscissa: the true p for binomial enumeration, the sample size
    /// n for the simulated families.
    pub x_axis: Vec<f64>,
    pub coverage: Vec<f64>,
    pub mean_length: Vec<f64>,
    /// √(coverage·(1−coverage)/N) per point; identically zero for
    /// exact enumeration.
    pub mc_stderr: Vec<f64>,
    /// Replication count behind each point; 0 means exact.
    pub n_reps: u64,
}

/// Pearson correlations between the absolute estimation error
/// |λ̂ − λ| and each spread estimate, across all replications at one
/// sample size. NaN when a series is degenerate (e.g. a single
/// replication).
#[derive(Debug, Clone, Copy)]
pub struct SigmaCorrelations {
    pub n: usize,
    pub abs_error_vs_hessian: f64,
    pub abs_error_vs_jackknife: f64,
}

/// Coverage curves plus the per-size correlation diagnostics that only
/// the exponential experiment produces.
#[derive(Debug, Clone)]
pub struct ExpExperiment {
    pub curves: Vec<CoverageCurve>,
    pub correlations: Vec<SigmaCorrelations>,
}

/// n draws from the density f(x) = 3x² on [0, 1], by mapping uniform
/// variates through the inverse CDF x = U^(1/3).
pub fn sample_cubic(n: usize, rng: &mut RngStream) -> Result<Sample> {
    if n == 0 {
        return Err(Error::domain("cannot draw an empty sample"));
    }
    Sample::new((0..n).map(|_| rng.next_uniform().cbrt()).collect())
}

/// n draws from Exponential(λ), by inverting the CDF: −ln(1−U)/λ.
pub fn sample_exponential(n: usize, lambda: f64, rng: &mut RngStream) -> Result<Sample> {
    if n == 0 {
        return Err(Error::domain("cannot draw an empty sample"));
    }
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::domain(format!(
            "exponential rate must be positive, got {lambda}"
        )));
    }
    Sample::new(
        (0..n)
            .map(|_| -(1.0 - rng.next_uniform()).ln() / lambda)
            .collect(),
    )
}

// Stream id layout: sample size in the high 24 bits, replication index
// in the low 40. Keyed by values rather than loop positions, so any
// two runs sharing (seed, n, rep) see identical draws regardless of
// which other sizes, methods, or replication totals were requested.
fn rep_stream(n: usize, rep: u64) -> u64 {
    ((n as u64) << 40) | rep
}

#[derive(Clone, Default)]
struct MethodTally {
    covered: u64,
    length_sum: f64,
}

fn merge_tallies(into: &mut [MethodTally], from: &[MethodTally]) {
    for (a, b) in into.iter_mut().zip(from) {
        a.covered += b.covered;
        a.length_sum += b.length_sum;
    }
}

/// Split 0..n_reps into fixed batches; the batch list (not the thread
/// schedule) defines the fold order.
fn batch_ranges(n_reps: u64) -> Vec<std::ops::Range<u64>> {
    let mut out = Vec::with_capacity(n_reps.div_ceil(SIM_BATCH) as usize);
    let mut lo = 0;
    while lo < n_reps {
        let hi = (lo + SIM_BATCH).min(n_reps);
        out.push(lo..hi);
        lo = hi;
    }
    out
}

fn curve_from_tallies(
    method: Method,
    n_values: &[usize],
    tallies: &[MethodTally],
    n_reps: u64,
) -> CoverageCurve {
    let nf = n_reps as f64;
    let coverage: Vec<f64> = tallies.iter().map(|t| t.covered as f64 / nf).collect();
    let mc_stderr = coverage
        .iter()
        .map(|c| (c * (1.0 - c) / nf).sqrt())
        .collect();
    CoverageCurve {
        method,
        x_axis: n_values.iter().map(|&n| n as f64).collect(),
        coverage,
        mean_length: tallies.iter().map(|t| t.length_sum / nf).collect(),
        mc_stderr,
        n_reps,
    }
}

const MEAN_METHODS: [Method; 7] = [
    Method::MeanT,
    Method::MeanZ,
    Method::MeanLrT,
    Method::MeanLrNormal,
    Method::BootPercentile,
    Method::BootBasic,
    Method::BootBca,
];

const EXP_METHODS: [Method; 5] = [
    Method::MlHessian,
    Method::MlJackknife,
    Method::BootPercentile,
    Method::BootBasic,
    Method::BootBca,
];

fn check_methods(requested: &[Method], allowed: &[Method], family: &str) -> Result<()> {
    for m in requested {
        if !allowed.contains(m) {
            return Err(Error::domain(format!(
                "method {m} is not available for the {family} family"
            )));
        }
    }
    Ok(())
}

fn mean_estimator(s: &Sample) -> Result<f64> {
    Ok(s.mean())
}

/// Coverage of the true mean 3/4 for mean-interval methods on samples
/// from the cubic density, one curve per requested method.
///
/// Within each replication every requested method sees the same
/// sample, and bootstrap methods additionally share one replicate set,
/// so cross-method differences are free of sampling noise between
/// methods.
pub fn run_mean_experiment(config: &ExperimentConfig) -> Result<Vec<CoverageCurve>> {
    config.validate()?;
    if config.family != Family::MeanCubic {
        return Err(Error::domain(
            "this runner only handles the mean-cubic family",
        ));
    }
    check_methods(&config.methods, &MEAN_METHODS, "mean-cubic")?;
    let needs_boot = config.methods.iter().any(|m| m.is_bootstrap());
    let n_methods = config.methods.len();

    let mut per_method: Vec<Vec<MethodTally>> = vec![Vec::new(); n_methods];
    for &n in &config.n_values {
        let batches = batch_ranges(config.n_reps);
        let folded: Vec<Vec<MethodTally>> = batches
            .into_par_iter()
            .map(|range| -> Result<Vec<MethodTally>> {
                let mut acc = vec![MethodTally::default(); n_methods];
                for rep in range {
                    let mut rng = RngStream::new(config.seed, rep_stream(n, rep));
                    let sample = sample_cubic(n, &mut rng)?;
                    let boot = if needs_boot {
                        Some(bootstrap::boot_distribution(
                            &sample,
                            mean_estimator,
                            BOOT_INNER_R,
                            &mut rng,
                        )?)
                    } else {
                        None
                    };
                    for (tally, &method) in acc.iter_mut().zip(&config.methods) {
                        let ci = mean_rep_interval(method, &sample, boot.as_ref(), config)?;
                        if ci.contains(CUBIC_TRUE_MEAN) {
                            tally.covered += 1;
                        }
                        tally.length_sum += ci.width();
                    }
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;

        let mut total = vec![MethodTally::default(); n_methods];
        for batch in &folded {
            merge_tallies(&mut total, batch);
        }
        for (dest, tally) in per_method.iter_mut().zip(total) {
            dest.push(tally);
        }
    }

    Ok(config
        .methods
        .iter()
        .zip(&per_method)
        .map(|(&m, t)| curve_from_tallies(m, &config.n_values, t, config.n_reps))
        .collect())
}

fn mean_rep_interval(
    method: Method,
    sample: &Sample,
    boot: Option<&BootstrapReplicates>,
    config: &ExperimentConfig,
) -> Result<Interval> {
    let boot = || boot.expect("bootstrap distribution prepared for bootstrap methods");
    match method {
        Method::BootPercentile => bootstrap::percentile_interval(boot(), config.alpha),
        Method::BootBasic => bootstrap::basic_interval(boot(), config.alpha),
        Method::BootBca => bootstrap::bca_interval(boot(), sample, mean_estimator, config.alpha),
        m if m.is_support() => mean::interval_for(m, sample, config.k_ratio),
        m => mean::interval_for(m, sample, config.alpha),
    }
}

#[derive(Clone, Default)]
struct CorrTally {
    count: u64,
    sum_d: f64,
    sum_dd: f64,
    sum_h: f64,
    sum_hh: f64,
    sum_dh: f64,
    sum_j: f64,
    sum_jj: f64,
    sum_dj: f64,
}

impl CorrTally {
    fn push(&mut self, d: f64, h: f64, j: f64) {
        self.count += 1;
        self.sum_d += d;
        self.sum_dd += d * d;
        self.sum_h += h;
        self.sum_hh += h * h;
        self.sum_dh += d * h;
        self.sum_j += j;
        self.sum_jj += j * j;
        self.sum_dj += d * j;
    }

    fn merge(&mut self, other: &CorrTally) {
        self.count += other.count;
        self.sum_d += other.sum_d;
        self.sum_dd += other.sum_dd;
        self.sum_h += other.sum_h;
        self.sum_hh += other.sum_hh;
        self.sum_dh += other.sum_dh;
        self.sum_j += other.sum_j;
        self.sum_jj += other.sum_jj;
        self.sum_dj += other.sum_dj;
    }

    fn correlations(&self, n: usize) -> SigmaCorrelations {
        SigmaCorrelations {
            n,
            abs_error_vs_hessian: pearson(
                self.count, self.sum_d, self.sum_h, self.sum_dd, self.sum_hh, self.sum_dh,
            ),
            abs_error_vs_jackknife: pearson(
                self.count, self.sum_d, self.sum_j, self.sum_dd, self.sum_jj, self.sum_dj,
            ),
        }
    }
}

fn pearson(count: u64, sx: f64, sy: f64, sxx: f64, syy: f64, sxy: f64) -> f64 {
    let n = count as f64;
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx <= 0.0 || vy <= 0.0 {
        return f64::NAN;
    }
    (n * sxy - sx * sy) / (vx * vy).sqrt()
}

/// Coverage of the true rate λ for ML-interval methods on exponential
/// samples, plus the correlation between each replication's absolute
/// error |λ̂ − λ| and its two spread estimates σ̂ (curvature-based and
/// jackknife), per sample size.
///
/// The intervals are built from the closed forms λ̂ = 1/x̄ and
/// σ̂ = λ̂/√n rather than re-running the optimizer a million times;
/// their agreement with the numeric fit is covered by the ML module's
/// own contract.
pub fn run_exp_experiment(config: &ExperimentConfig) -> Result<ExpExperiment> {
    config.validate()?;
    if config.family != Family::ExpMl {
        return Err(Error::domain("this runner only handles the exp-ml family"));
    }
    check_methods(&config.methods, &EXP_METHODS, "exp-ml")?;
    let lambda = config.true_param;
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::domain(format!(
            "true exponential rate must be positive, got {lambda}"
        )));
    }
    let needs_boot = config.methods.iter().any(|m| m.is_bootstrap());
    let n_methods = config.methods.len();
    let z = normal_quantile(1.0 - 0.5 * config.alpha)?;

    let mut per_method: Vec<Vec<MethodTally>> = vec![Vec::new(); n_methods];
    let mut correlations = Vec::with_capacity(config.n_values.len());
    for &n in &config.n_values {
        let batches = batch_ranges(config.n_reps);
        let folded: Vec<(Vec<MethodTally>, CorrTally)> = batches
            .into_par_iter()
            .map(|range| -> Result<(Vec<MethodTally>, CorrTally)> {
                let mut acc = vec![MethodTally::default(); n_methods];
                let mut corr = CorrTally::default();
                for rep in range {
                    let mut rng = RngStream::new(config.seed, rep_stream(n, rep));
                    let sample = sample_exponential(n, lambda, &mut rng)?;
                    let lambda_hat = ml::exp_mle(&sample)?;
                    let sigma_hm = ml::exp_sigma_hm(lambda_hat, n)?;
                    let sigma_jk = ml::jackknife_sigma(ml::exp_mle, &sample)?;
                    corr.push((lambda_hat - lambda).abs(), sigma_hm, sigma_jk);

                    let boot = if needs_boot {
                        Some(bootstrap::boot_distribution(
                            &sample,
                            ml::exp_mle,
                            BOOT_INNER_R,
                            &mut rng,
                        )?)
                    } else {
                        None
                    };
                    for (tally, &method) in acc.iter_mut().zip(&config.methods) {
                        let ci = exp_rep_interval(
                            method, &sample, lambda_hat, sigma_hm, sigma_jk, z,
                            boot.as_ref(), config,
                        )?;
                        if ci.contains(lambda) {
                            tally.covered += 1;
                        }
                        tally.length_sum += ci.width();
                    }
                }
                Ok((acc, corr))
            })
            .collect::<Result<_>>()?;

        let mut total = vec![MethodTally::default(); n_methods];
        let mut corr_total = CorrTally::default();
        for (batch, corr) in &folded {
            merge_tallies(&mut total, batch);
            corr_total.merge(corr);
        }
        for (dest, tally) in per_method.iter_mut().zip(total) {
            dest.push(tally);
        }
        correlations.push(corr_total.correlations(n));
    }

    Ok(ExpExperiment {
        curves: config
            .methods
            .iter()
            .zip(&per_method)
            .map(|(&m, t)| curve_from_tallies(m, &config.n_values, t, config.n_reps))
            .collect(),
        correlations,
    })
}

#[allow(clippy::too_many_arguments)]
fn exp_rep_interval(
    method: Method,
    sample: &Sample,
    lambda_hat: f64,
    sigma_hm: f64,
    sigma_jk: f64,
    z: f64,
    boot: Option<&BootstrapReplicates>,
    config: &ExperimentConfig,
) -> Result<Interval> {
    let boot = || boot.expect("bootstrap distribution prepared for bootstrap methods");
    let level = 1.0 - config.alpha;
    match method {
        // λ̂ ± z·σ̂ with the z quantile hoisted out of the hot loop.
        Method::MlHessian => Ok(Interval::new(
            lambda_hat - z * sigma_hm,
            lambda_hat + z * sigma_hm,
            Method::MlHessian,
            level,
        )),
        Method::MlJackknife => Ok(Interval::new(
            lambda_hat - z * sigma_jk,
            lambda_hat + z * sigma_jk,
            Method::MlJackknife,
            level,
        )),
        Method::BootPercentile => bootstrap::percentile_interval(boot(), config.alpha),
        Method::BootBasic => bootstrap::basic_interval(boot(), config.alpha),
        Method::BootBca => bootstrap::bca_interval(boot(), sample, ml::exp_mle, config.alpha),
        other => Err(Error::domain(format!(
            "{other} is not an exp-ml method"
        ))),
    }
}

/// Exact coverage curves for binomial methods on a shared p grid, one
/// enumeration per method, packaged like the simulated families.
pub fn run_binom_exact(
    n: u32,
    methods: &[Method],
    alpha: f64,
    k_ratio: f64,
    p_grid: &[f64],
) -> Result<Vec<CoverageCurve>> {
    if methods.is_empty() {
        return Err(Error::domain("no interval methods requested"));
    }
    for (i, m) in methods.iter().enumerate() {
        if methods[..i].contains(m) {
            return Err(Error::domain(format!("method {m} requested twice")));
        }
    }
    methods
        .iter()
        .map(|&m| {
            let level = if m.is_support() { k_ratio } else { alpha };
            binom::exact_coverage(m, n, level, p_grid)
        })
        .collect()
}

/// All five binomial constructions, in presentation order.
pub const BINOM_METHODS: [Method; 5] = [
    Method::ClopperPearson,
    Method::Wilson,
    Method::Wald,
    Method::BinomLr,
    Method::BinomHpd,
];

/// An exact interval-length curve for one binomial method.
#[derive(Debug, Clone)]
pub struct LengthCurve {
    pub method: Method,
    /// Sample size n (maximum-length curves) or p̂ = k/n (sweep).
    pub x: Vec<f64>,
    pub length: Vec<f64>,
}

/// Maximum interval length over all outcomes k = 0..=n, per method, as
/// a function of n. Exact, no simulation.
pub fn binom_max_length_curves(
    n_values: &[u32],
    alpha: f64,
    k_ratio: f64,
) -> Result<Vec<LengthCurve>> {
    if n_values.is_empty() {
        return Err(Error::domain("no sample sizes requested"));
    }
    let mut curves: Vec<LengthCurve> = BINOM_METHODS
        .iter()
        .map(|&method| LengthCurve {
            method,
            x: Vec::with_capacity(n_values.len()),
            length: Vec::with_capacity(n_values.len()),
        })
        .collect();
    for &n in n_values {
        for curve in curves.iter_mut() {
            let level = if curve.method.is_support() { k_ratio } else { alpha };
            let mut widest: f64 = 0.0;
            for k in 0..=n {
                let obs = BinomObservation::new(n, k)?;
                widest = widest.max(binom::interval_for(curve.method, obs, level)?.width());
            }
            curve.x.push(f64::from(n));
            curve.length.push(widest);
        }
    }
    Ok(curves)
}

/// Interval length as a function of p̂ = k/n at one fixed n, per
/// method. Exact, no simulation.
pub fn binom_length_vs_phat(n: u32, alpha: f64, k_ratio: f64) -> Result<Vec<LengthCurve>> {
    let mut curves: Vec<LengthCurve> = BINOM_METHODS
        .iter()
        .map(|&method| LengthCurve {
            method,
            x: Vec::with_capacity(n as usize + 1),
            length: Vec::with_capacity(n as usize + 1),
        })
        .collect();
    for k in 0..=n {
        let obs = BinomObservation::new(n, k)?;
        for curve in curves.iter_mut() {
            let level = if curve.method.is_support() { k_ratio } else { alpha };
            curve.x.push(obs.p_hat());
            curve.length.push(binom::interval_for(curve.method, obs, level)?.width());
        }
    }
    Ok(curves)
}
