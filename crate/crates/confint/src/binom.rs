//! Interval estimates for a binomial proportion.
//!
//! Five constructions for the same question ("given k successes in n
//! trials, where does the success probability plausibly lie?"):
//!
//! * [`clopper_pearson`]: the exact interval from the binomial tail
//!   equations; conservative but guaranteed coverage.
//! * [`wilson`]: the score interval from inverting the normal
//!   approximation with parameter-dependent variance.
//! * [`wald`]: the textbook `p̂ ± z·SE` interval.
//! * [`lr_support`]: the likelihood-ratio support interval (all p whose
//!   likelihood is within a factor 1/K of the maximum).
//! * [`hpd`]: the highest-density interval of the flat-prior posterior,
//!   which is Beta(k+1, n−k+1).
//!
//! [`exact_coverage`] evaluates any of them by enumerating all n+1
//! outcomes, with no Monte-Carlo noise.

use crate::coverage::CoverageCurve;
use crate::numerics::{
    beta_quantile, binom_cdf, find_root, ln_choose, normal_quantile, Bracket, DEFAULT_TOL,
};
use crate::{Error, Interval, Method, Result};

/// Observed binomial data: `k` successes out of `n` trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinomObservation {
    n: u32,
    k: u32,
}

impl BinomObservation {
    /// Requires at least one trial and `k ≤ n`.
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("need at least one trial"));
        }
        if k > n {
            return Err(Error::domain(format!(
                "success count {k} exceeds trial count {n}"
            )));
        }
        Ok(BinomObservation { n, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The relative frequency k/n that every method centers on.
    pub fn p_hat(&self) -> f64 {
        f64::from(self.k) / f64::from(self.n)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    Ok(())
}

fn check_k_ratio(k_ratio: f64) -> Result<()> {
    if !k_ratio.is_finite() || k_ratio <= 1.0 {
        return Err(Error::domain(format!(
            "likelihood-ratio cutoff must be finite and above 1, got {k_ratio}"
        )));
    }
    Ok(())
}

/// Exact (Clopper-Pearson) interval.
///
/// The lower endpoint solves `1 − binom_cdf(k−1, n, p) = α/2` and the
/// upper solves `binom_cdf(k, n, p) = α/2`. At k = 0 (k = n) the lower
/// (upper) endpoint is pinned to the boundary and the opposite tail
/// equation collapses to the closed form `1 − (α/2)^{1/n}` resp.
/// `(α/2)^{1/n}`.
pub fn clopper_pearson(obs: BinomObservation, alpha: f64) -> Result<Interval> {
    check_alpha(alpha)?;
    let (n, k) = (obs.n(), obs.k());
    let nf = f64::from(n);
    let half = 0.5 * alpha;

    let lower = if k == 0 {
        0.0
    } else if k == n {
        half.powf(1.0 / nf)
    } else {
        cdf_root(k - 1, n, 1.0 - half)?
    };
    let upper = if k == n {
        1.0
    } else if k == 0 {
        1.0 - half.powf(1.0 / nf)
    } else {
        cdf_root(k, n, half)?
    };
    Ok(Interval::new(lower, upper, Method::ClopperPearson, 1.0 - alpha))
}

/// Solve `binom_cdf(k, n, p) = target` for p. The CDF falls
/// monotonically from 1 at p = 0 to 0 at p = 1 (for k < n), so [0, 1]
/// always brackets the solution.
fn cdf_root(k: u32, n: u32, target: f64) -> Result<f64> {
    let f = |p: f64| match binom_cdf(k, n, p) {
        Ok(c) => c - target,
        // find_root rejects non-finite values, which is the failure
        // mode we want for an unexpected CDF error mid-solve.
        Err(_) => f64::NAN,
    };
    find_root(f, Bracket::new(0.0, 1.0)?, DEFAULT_TOL)
}

/// Wilson score interval.
///
/// Inverts the normal approximation while keeping the p-dependent
/// variance, which pulls the midpoint toward 1/2 and keeps endpoints
/// inside [0, 1] on its own; the final clamp only trims float dust.
pub fn wilson(obs: BinomObservation, alpha: f64) -> Result<Interval> {
    check_alpha(alpha)?;
    let z = normal_quantile(1.0 - 0.5 * alpha)?;
    let n = f64::from(obs.n());
    let p = obs.p_hat();
    let z2 = z * z;

    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let radius = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // At k = 0 and k = n the score equation's boundary root cancels
    // algebraically to exactly 0 or 1; pin those so rounding cannot
    // leave the point estimate outside the interval.
    let lower = if obs.k() == 0 {
        0.0
    } else {
        ((center - radius) / denom).clamp(0.0, 1.0)
    };
    let upper = if obs.k() == obs.n() {
        1.0
    } else {
        ((center + radius) / denom).clamp(0.0, 1.0)
    };
    Ok(Interval::new(lower, upper, Method::Wilson, 1.0 - alpha))
}

/// Wald interval `p̂ ± z·√(p̂(1−p̂)/n)`, clamped to [0, 1].
///
/// Degenerates to the single point p̂ at k = 0 and k = n because the
/// plug-in standard error vanishes there.
pub fn wald(obs: BinomObservation, alpha: f64) -> Result<Interval> {
    check_alpha(alpha)?;
    let z = normal_quantile(1.0 - 0.5 * alpha)?;
    let n = f64::from(obs.n());
    let p = obs.p_hat();
    let half_width = z * (p * (1.0 - p) / n).sqrt();
    Ok(Interval::new(
        (p - half_width).clamp(0.0, 1.0),
        (p + half_width).clamp(0.0, 1.0),
        Method::Wald,
        1.0 - alpha,
    ))
}

/// Log of the likelihood ratio L(p)/L(p̂) plus ln K; the support
/// interval is where this is ≥ 0. Evaluated on the log scale because
/// the direct power form under/overflows already at moderate n.
fn support_excess(p: f64, kf: f64, nf: f64, p_hat: f64, ln_k: f64) -> f64 {
    let mut s = ln_k;
    if kf > 0.0 {
        s += kf * (p / p_hat).ln();
    }
    if nf - kf > 0.0 {
        s += (nf - kf) * ((1.0 - p) / (1.0 - p_hat)).ln();
    }
    s
}

/// Likelihood-ratio support interval: every p with
/// `L(p)/L(p̂) ≥ 1/K`, i.e.
///
/// ```text
/// k·ln(p/p̂) + (n−k)·ln((1−p)/(1−p̂)) ≥ −ln K
/// ```
///
/// The two crossings are bracketed by walking geometrically from p̂
/// toward each boundary (the excess drops to −∞ there, so the walk
/// terminates) and then solved with the scalar root finder. At k = 0
/// and k = n one side is pinned and the other has a closed form.
///
/// The reported `level` is K itself, not a coverage probability.
pub fn lr_support(obs: BinomObservation, k_ratio: f64) -> Result<Interval> {
    check_k_ratio(k_ratio)?;
    let (n, k) = (obs.n(), obs.k());
    let nf = f64::from(n);
    let kf = f64::from(k);
    let p_hat = obs.p_hat();
    let ln_k = k_ratio.ln();

    let lower = if k == 0 {
        0.0
    } else if k == n {
        // L(p)/L(1) = p^n, so the cutoff sits at K^(−1/n).
        (-ln_k / nf).exp()
    } else {
        let mut lo = 0.5 * p_hat;
        while support_excess(lo, kf, nf, p_hat, ln_k) >= 0.0 {
            lo *= 0.5;
            if lo < 1e-300 {
                return Err(Error::numeric("support walk-in underflowed toward p = 0"));
            }
        }
        find_root(
            |p| support_excess(p, kf, nf, p_hat, ln_k),
            Bracket::new(lo, p_hat)?,
            DEFAULT_TOL,
        )?
    };

    let upper = if k == n {
        1.0
    } else if k == 0 {
        // Mirror case: L(p)/L(0) = (1−p)^n.
        1.0 - (-ln_k / nf).exp()
    } else {
        let mut hi = 0.5 * (p_hat + 1.0);
        while support_excess(hi, kf, nf, p_hat, ln_k) >= 0.0 {
            hi = 0.5 * (hi + 1.0);
            if 1.0 - hi <= f64::EPSILON {
                return Err(Error::numeric("support walk-in ran into p = 1"));
            }
        }
        find_root(
            |p| support_excess(p, kf, nf, p_hat, ln_k),
            Bracket::new(p_hat, hi)?,
            DEFAULT_TOL,
        )?
    };

    Ok(Interval::new(lower, upper, Method::BinomLr, k_ratio))
}

/// Highest-density interval of the Beta(k+1, n−k+1) posterior obtained
/// from a flat prior on p.
pub fn hpd(obs: BinomObservation, alpha: f64) -> Result<Interval> {
    check_alpha(alpha)?;
    let a = f64::from(obs.k()) + 1.0;
    let b = f64::from(obs.n() - obs.k()) + 1.0;
    let h = crate::hpd::hpd_interval(|q| beta_quantile(q, a, b), alpha)?;
    Ok(Interval::new(h.lower, h.upper, Method::BinomHpd, 1.0 - alpha))
}

/// Route one observation through any of the five constructions.
///
/// `alpha_or_k` is the tail probability α for `exact`, `wilson`,
/// `wald`, and `hpd`, and the cutoff K for `lr`, matching the
/// individual constructors.
pub fn interval_for(method: Method, obs: BinomObservation, alpha_or_k: f64) -> Result<Interval> {
    match method {
        Method::ClopperPearson => clopper_pearson(obs, alpha_or_k),
        Method::Wilson => wilson(obs, alpha_or_k),
        Method::Wald => wald(obs, alpha_or_k),
        Method::BinomLr => lr_support(obs, alpha_or_k),
        Method::BinomHpd => hpd(obs, alpha_or_k),
        other => Err(Error::domain(format!(
            "{other} is not a binomial-proportion method"
        ))),
    }
}

/// Coverage probability and mean interval length by full enumeration.
///
/// For each grid value p, the binomial pmf over k = 0..=n is summed
/// over the outcomes whose interval contains p (boundaries count as
/// inside), which is the exact coverage probability; interval lengths
/// are averaged under the same pmf. Nothing is simulated, so
/// `mc_stderr` is identically zero and `n_reps` is reported as 0.
pub fn exact_coverage(
    method: Method,
    n: u32,
    alpha_or_k: f64,
    p_grid: &[f64],
) -> Result<CoverageCurve> {
    for (i, &p) in p_grid.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!(
                "grid value {p} at index {i} is outside [0, 1]"
            )));
        }
    }

    // One interval and one log binomial coefficient per outcome,
    // computed once and reused across the whole grid.
    let mut intervals = Vec::with_capacity(n as usize + 1);
    let mut ln_ch = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        intervals.push(interval_for(method, BinomObservation::new(n, k)?, alpha_or_k)?);
        ln_ch.push(ln_choose(n, k)?);
    }

    let mut coverage = Vec::with_capacity(p_grid.len());
    let mut mean_length = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let mut cov = 0.0;
        let mut len = 0.0;
        for k in 0..=n {
            let pmf = pmf_cached(ln_ch[k as usize], k, n, p);
            let interval = &intervals[k as usize];
            if interval.contains(p) {
                cov += pmf;
            }
            len += pmf * interval.width();
        }
        // The pmf sums to 1 only up to rounding; clamp so the curve
        // honors coverage ∈ [0, 1] exactly.
        coverage.push(cov.clamp(0.0, 1.0));
        mean_length.push(len);
    }

    Ok(CoverageCurve {
        method,
        x_axis: p_grid.to_vec(),
        coverage,
        mean_length,
        mc_stderr: vec![0.0; p_grid.len()],
        n_reps: 0,
    })
}

/// pmf(k; n, p) from a precomputed ln C(n, k). The boundary cases keep
/// the convention 0^0 = 1 so that p = 0 puts all mass on k = 0 and
/// p = 1 on k = n.
fn pmf_cached(ln_ch: f64, k: u32, n: u32, p: f64) -> f64 {
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    (ln_ch + f64::from(k) * p.ln() + f64::from(n - k) * (1.0 - p).ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn obs(n: u32, k: u32) -> BinomObservation {
        BinomObservation::new(n, k).unwrap()
    }

    // Test-side binomial CDF built from a Pascal-triangle pmf, kept
    // deliberately independent of the numerics module.
    fn pascal_row(n: usize) -> Vec<f64> {
        let mut row = vec![1.0];
        for _ in 0..n {
            let mut next = vec![1.0];
            for i in 1..row.len() {
                next.push(row[i - 1] + row[i]);
            }
            next.push(1.0);
            row = next;
        }
        row
    }

    fn cdf_by_summation(k: u32, n: u32, p: f64) -> f64 {
        let row = pascal_row(n as usize);
        (0..=k as usize)
            .map(|i| row[i] * p.powi(i as i32) * (1.0 - p).powi((n as usize - i) as i32))
            .sum()
    }

    #[test]
    fn observation_validates_inputs() {
        assert!(BinomObservation::new(0, 0).is_err(), "zero trials");
        assert!(BinomObservation::new(5, 6).is_err(), "k > n");
        assert_eq!(obs(8, 2).p_hat(), 0.25);
    }

    #[test]
    fn alpha_and_cutoff_are_validated() {
        for bad in [0.0, 1.0, -0.2, f64::NAN] {
            assert!(clopper_pearson(obs(10, 3), bad).is_err());
            assert!(wilson(obs(10, 3), bad).is_err());
            assert!(wald(obs(10, 3), bad).is_err());
            assert!(hpd(obs(10, 3), bad).is_err());
        }
        for bad in [1.0, 0.5, f64::INFINITY, f64::NAN] {
            assert!(lr_support(obs(10, 3), bad).is_err());
        }
    }

    #[test]
    fn clopper_pearson_solves_both_tail_equations() {
        for (n, k) in [(100u32, 37u32), (25, 1), (60, 59), (13, 7)] {
            let ci = clopper_pearson(obs(n, k), 0.05).unwrap();
            let at_upper = binom_cdf(k, n, ci.upper).unwrap();
            assert!(
                (at_upper - 0.025).abs() <= 1e-8,
                "upper tail equation off at n={n} k={k}: cdf={at_upper}"
            );
            let at_lower = binom_cdf(k - 1, n, ci.lower).unwrap();
            assert!(
                (at_lower - 0.975).abs() <= 1e-8,
                "lower tail equation off at n={n} k={k}: cdf={at_lower}"
            );
        }
    }

    #[test]
    fn clopper_pearson_edge_cases_use_closed_forms() {
        let one_zero = clopper_pearson(obs(1, 0), 0.05).unwrap();
        assert_eq!(one_zero.lower, 0.0);
        assert!((one_zero.upper - 0.975).abs() < 1e-12);

        let all_hits = clopper_pearson(obs(10, 10), 0.05).unwrap();
        assert_eq!(all_hits.upper, 1.0);
        assert!(
            (all_hits.lower - 0.025f64.powf(0.1)).abs() < 1e-12,
            "lower should equal 0.025^(1/10) = 0.6915..."
        );
        assert!((all_hits.lower - 0.6915).abs() < 5e-5);
    }

    #[test]
    fn clopper_pearson_matches_summation_oracle_at_n_100() {
        // Independent endpoint computation: bisect the Pascal-triangle
        // CDF directly, 200 halvings, then compare.
        let ci = clopper_pearson(obs(100, 50), 0.05).unwrap();

        let bisect = |f: &dyn Fn(f64) -> f64| {
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let lower = bisect(&|p| cdf_by_summation(49, 100, p) - 0.975);
        let upper = bisect(&|p| cdf_by_summation(50, 100, p) - 0.025);

        assert!((ci.lower - lower).abs() < 1e-9, "lower {} vs oracle {lower}", ci.lower);
        assert!((ci.upper - upper).abs() < 1e-9, "upper {} vs oracle {upper}", ci.upper);
        // Coarse frozen values for readability.
        assert!((ci.lower - 0.3983).abs() < 5e-4);
        assert!((ci.upper - 0.6017).abs() < 5e-4);
    }

    #[test]
    fn wilson_frozen_values_and_symmetry() {
        let ci = wilson(obs(100, 50), 0.05).unwrap();
        assert!((ci.lower - 0.4038).abs() < 5e-4, "lower {}", ci.lower);
        assert!((ci.upper - 0.5962).abs() < 5e-4, "upper {}", ci.upper);
        // p̂ = 1/2 makes the score interval symmetric about 1/2.
        assert!((ci.lower + ci.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wilson_at_zero_successes_has_closed_form_upper() {
        let n = 7u32;
        let ci = wilson(obs(n, 0), 0.05).unwrap();
        let z = normal_quantile(0.975).unwrap();
        let expected = z * z / (f64::from(n) + z * z);
        assert_eq!(ci.lower, 0.0);
        assert!((ci.upper - expected).abs() < 1e-12);
    }

    #[test]
    fn wald_frozen_values_and_degenerate_edges() {
        let ci = wald(obs(100, 50), 0.05).unwrap();
        assert!((ci.lower - 0.402).abs() < 5e-4);
        assert!((ci.upper - 0.598).abs() < 5e-4);

        let at_zero = wald(obs(100, 0), 0.05).unwrap();
        assert_eq!((at_zero.lower, at_zero.upper), (0.0, 0.0));
        let at_n = wald(obs(100, 100), 0.05).unwrap();
        assert_eq!((at_n.lower, at_n.upper), (1.0, 1.0));
    }

    #[test]
    fn lr_support_closed_form_at_zero_successes() {
        let ci = lr_support(obs(10, 0), 8.0).unwrap();
        assert_eq!(ci.lower, 0.0);
        assert!(
            (ci.upper - (1.0 - 8.0f64.powf(-0.1))).abs() < 1e-12,
            "upper should be 1 - 8^(-1/10) = 0.18774..., got {}",
            ci.upper
        );
        assert!((ci.upper - 0.18774).abs() < 1e-5);

        let mirror = lr_support(obs(10, 10), 8.0).unwrap();
        assert_eq!(mirror.upper, 1.0);
        assert!((mirror.lower - 8.0f64.powf(-0.1)).abs() < 1e-12);
    }

    #[test]
    fn lr_support_endpoints_sit_on_the_cutoff() {
        // Likelihood ratio at both endpoints must equal 1/K, and a
        // 200-step bisection of the log ratio must land on the same
        // endpoints.
        let ci = lr_support(obs(40, 10), 8.0).unwrap();
        let p_hat = 0.25;
        let log_ratio =
            |p: f64| 10.0 * (p / p_hat).ln() + 30.0 * ((1.0 - p) / (1.0 - p_hat)).ln();

        for endpoint in [ci.lower, ci.upper] {
            let ratio = log_ratio(endpoint).exp();
            assert!(
                (ratio - 1.0 / 8.0).abs() < 1e-9,
                "ratio at endpoint {endpoint} is {ratio}, want 1/8"
            );
        }

        let bisect = |mut lo: f64, mut hi: f64| {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if (log_ratio(lo) + 8.0f64.ln()) * (log_ratio(mid) + 8.0f64.ln()) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        };
        assert!((ci.lower - bisect(1e-12, p_hat)).abs() < 1e-8);
        assert!((ci.upper - bisect(p_hat, 1.0 - 1e-12)).abs() < 1e-8);
    }

    #[test]
    fn hpd_symmetric_posterior_gives_symmetric_interval() {
        // k = n/2 makes the posterior Beta(a, a), symmetric about 1/2.
        let ci = hpd(obs(20, 10), 0.05).unwrap();
        assert!((ci.lower + ci.upper - 1.0).abs() < 1e-8, "{ci:?}");
    }

    #[test]
    fn hpd_monotone_posterior_is_an_upper_tail() {
        // k = n: posterior density p^n rises monotonically, so the
        // shortest 95% region is [q(α), 1] with CDF p^(n+1), i.e.
        // lower = α^(1/(n+1)).
        let ci = hpd(obs(10, 10), 0.05).unwrap();
        assert!((ci.upper - 1.0).abs() < 1e-9, "upper {}", ci.upper);
        assert!(
            (ci.lower - 0.05f64.powf(1.0 / 11.0)).abs() < 1e-6,
            "lower {} want {}",
            ci.lower,
            0.05f64.powf(1.0 / 11.0)
        );

        let mirror = hpd(obs(10, 0), 0.05).unwrap();
        assert!(mirror.lower.abs() < 1e-9);
        assert!((mirror.upper - (1.0 - 0.05f64.powf(1.0 / 11.0))).abs() < 1e-6);
    }

    #[test]
    fn hpd_matches_grid_minimization_oracle() {
        // Exhaustive search over the lower-tail mass on a 10^4-point
        // grid; the true HPD interval must not be wider than any grid
        // candidate and must agree with the best one to grid accuracy.
        let (n, k, alpha) = (100u32, 10u32, 0.05);
        let ci = hpd(obs(n, k), alpha).unwrap();
        let (a, b) = (f64::from(k) + 1.0, f64::from(n - k) + 1.0);

        let m = 10_000;
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..=m {
            let beta = alpha * i as f64 / m as f64;
            let lo = beta_quantile(beta, a, b).unwrap();
            let hi = beta_quantile(beta + 1.0 - alpha, a, b).unwrap();
            if hi - lo < best.0 {
                best = (hi - lo, lo, hi);
            }
        }
        assert!((ci.lower - best.1).abs() < 1e-3, "lower {} vs {}", ci.lower, best.1);
        assert!((ci.upper - best.2).abs() < 1e-3, "upper {} vs {}", ci.upper, best.2);
        assert!(ci.width() <= best.0 + 1e-9, "solver width must not exceed grid best");
    }

    #[test]
    fn dispatch_rejects_non_binomial_methods() {
        let err = interval_for(Method::MeanT, obs(10, 5), 0.05).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn max_length_sits_at_the_center_for_wald_and_wilson() {
        let n = 100u32;
        for method in [Method::Wald, Method::Wilson] {
            let center = interval_for(method, obs(n, 50), 0.05).unwrap().width();
            for k in 0..=n {
                let w = interval_for(method, obs(n, k), 0.05).unwrap().width();
                assert!(
                    w <= center + 1e-12,
                    "{method} width at k={k} is {w}, exceeding center width {center}"
                );
            }
        }
    }

    #[test]
    fn exact_coverage_matches_brute_force_re_enumeration() {
        // Independent loop: recompute coverage and mean length for
        // n ≤ 25 with the Pascal-triangle pmf and direct membership
        // checks, for every method.
        let n = 25u32;
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let methods = [
            (Method::ClopperPearson, 0.05),
            (Method::Wilson, 0.05),
            (Method::Wald, 0.05),
            (Method::BinomLr, 8.0),
            (Method::BinomHpd, 0.05),
        ];
        let row = pascal_row(n as usize);

        for (method, level) in methods {
            let curve = exact_coverage(method, n, level, &grid).unwrap();
            for (i, &p) in grid.iter().enumerate() {
                let mut cov = 0.0;
                let mut len = 0.0;
                for k in 0..=n {
                    let pmf = row[k as usize]
                        * p.powi(k as i32)
                        * (1.0 - p).powi((n - k) as i32);
                    let ci = interval_for(method, obs(n, k), level).unwrap();
                    if ci.lower <= p && p <= ci.upper {
                        cov += pmf;
                    }
                    len += pmf * (ci.upper - ci.lower);
                }
                assert!(
                    (curve.coverage[i] - cov.clamp(0.0, 1.0)).abs() < 1e-12,
                    "{method} coverage at p={p}: {} vs oracle {cov}",
                    curve.coverage[i]
                );
                assert!(
                    (curve.mean_length[i] - len).abs() < 1e-12,
                    "{method} mean length at p={p}"
                );
                assert_eq!(curve.mc_stderr[i], 0.0);
            }
            assert_eq!(curve.n_reps, 0);
        }
    }

    #[test]
    fn exact_coverage_wald_single_trial_is_zero_at_half() {
        // n = 1 Wald intervals are {0} and {1}; p = 1/2 is in neither.
        let curve = exact_coverage(Method::Wald, 1, 0.05, &[0.5]).unwrap();
        assert_eq!(curve.coverage[0], 0.0);
    }

    #[test]
    fn exact_coverage_clopper_pearson_guarantee_small_n() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let curve = exact_coverage(Method::ClopperPearson, 12, 0.05, &grid).unwrap();
        for (p, cov) in grid.iter().zip(&curve.coverage) {
            assert!(
                *cov >= 0.95 - 1e-12,
                "guarantee violated at p={p}: coverage {cov}"
            );
        }
    }

    #[test]
    fn exact_coverage_rejects_out_of_range_grid() {
        assert!(exact_coverage(Method::Wilson, 10, 0.05, &[0.5, 1.2]).is_err());
        assert!(exact_coverage(Method::Wilson, 10, 0.05, &[-0.1]).is_err());
        assert!(exact_coverage(Method::Wilson, 10, 0.05, &[f64::NAN]).is_err());
    }

    proptest! {
        // Swap successes and failures and the interval must mirror:
        // method(n, k) = 1 − reverse(method(n, n−k)).
        #[test]
        fn equivariance_under_success_failure_swap(
            n in 1u32..=40,
            k_frac in 0.0f64..1.0,
            alpha in 0.01f64..0.3,
        ) {
            let k = (k_frac * f64::from(n)).round() as u32;
            let k = k.min(n);
            // The HPD tolerance is looser because the shortest-interval
            // tail split is a flat minimum: its width is optimal to near
            // machine precision, but the split itself (and with it each
            // endpoint) is only conditioned like the square root of the
            // optimizer tolerance.
            let methods = [
                (Method::ClopperPearson, alpha, 1e-8),
                (Method::Wilson, alpha, 1e-8),
                (Method::Wald, alpha, 1e-8),
                (Method::BinomLr, 8.0, 1e-8),
                (Method::BinomHpd, alpha, 1e-6),
            ];
            for (method, level, tol) in methods {
                let ci = interval_for(method, obs(n, k), level).unwrap();
                let swapped = interval_for(method, obs(n, n - k), level).unwrap();
                prop_assert!((ci.lower - (1.0 - swapped.upper)).abs() < tol,
                    "{method} lower mismatch at n={n} k={k}");
                prop_assert!((ci.upper - (1.0 - swapped.lower)).abs() < tol,
                    "{method} upper mismatch at n={n} k={k}");
            }
        }

        // Every interval contains p̂, except Wald at the edges where it
        // degenerates to exactly the point p̂.
        #[test]
        fn intervals_contain_the_point_estimate(
            n in 1u32..=60,
            k_frac in 0.0f64..1.0,
            alpha in 0.01f64..0.3,
        ) {
            let k = ((k_frac * f64::from(n)).round() as u32).min(n);
            let o = obs(n, k);
            let methods = [
                (Method::ClopperPearson, alpha),
                (Method::Wilson, alpha),
                (Method::Wald, alpha),
                (Method::BinomLr, 8.0),
                (Method::BinomHpd, alpha),
            ];
            for (method, level) in methods {
                let ci = interval_for(method, o, level).unwrap();
                prop_assert!(
                    ci.contains(o.p_hat()),
                    "{method} at n={n} k={k} misses p̂: [{}, {}]",
                    ci.lower, ci.upper
                );
                prop_assert!(ci.lower >= 0.0 && ci.upper <= 1.0,
                    "{method} endpoints left [0,1]");
            }
        }
    }
}
