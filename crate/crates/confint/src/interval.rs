use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Identifies which construction produced an interval.
///
/// The `Display` form is the stable name used on the command line and in
/// CSV output; `FromStr` accepts exactly those names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Clopper-Pearson interval for a binomial proportion, the "exact"
    /// construction that inverts the binomial tail probabilities.
    ClopperPearson,
    /// Wilson score interval for a binomial proportion.
    Wilson,
    /// Wald (normal approximation) interval for a binomial proportion.
    Wald,
    /// Likelihood-ratio support interval for a binomial proportion.
    BinomLr,
    /// Highest-posterior-density interval for a binomial proportion
    /// under a flat prior.
    BinomHpd,
    /// Student t interval for a mean.
    MeanT,
    /// Normal (z) interval for a mean.
    MeanZ,
    /// Likelihood-ratio support interval for a mean, t flavour.
    MeanLrT,
    /// Likelihood-ratio support interval for a mean, normal flavour.
    MeanLrNormal,
    /// Highest-posterior-density interval for a mean, t flavour.
    MeanHpdT,
    /// Highest-posterior-density interval for a mean, normal flavour.
    MeanHpdNormal,
    /// Normal interval around a maximum-likelihood estimate with the
    /// standard deviation taken from the inverse observed information.
    MlHessian,
    /// Normal interval around an estimate with the delete-one jackknife
    /// standard deviation.
    MlJackknife,
    /// Bootstrap percentile interval.
    BootPercentile,
    /// Basic (reflected percentile) bootstrap interval.
    BootBasic,
    /// Bias-corrected and accelerated bootstrap interval.
    BootBca,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClopperPearson => "exact",
            Method::Wilson => "wilson",
            Method::Wald => "wald",
            Method::BinomLr => "lr",
            Method::BinomHpd => "hpd",
            Method::MeanT => "t",
            Method::MeanZ => "z",
            Method::MeanLrT => "lr-t",
            Method::MeanLrNormal => "lr-normal",
            Method::MeanHpdT => "hpd-t",
            Method::MeanHpdNormal => "hpd-normal",
            Method::MlHessian => "hessian",
            Method::MlJackknife => "jackknife",
            Method::BootPercentile => "boot-percentile",
            Method::BootBasic => "boot-basic",
            Method::BootBca => "boot-bca",
        }
    }

    /// True for the likelihood-ratio support constructions, whose `level`
    /// field holds the likelihood ratio K instead of a coverage level.
    pub fn is_support(self) -> bool {
        matches!(self, Method::BinomLr | Method::MeanLrT | Method::MeanLrNormal)
    }

    pub fn is_bootstrap(self) -> bool {
        matches!(
            self,
            Method::BootPercentile | Method::BootBasic | Method::BootBca
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let method = match s {
            "exact" => Method::ClopperPearson,
            "wilson" => Method::Wilson,
            "wald" => Method::Wald,
            "lr" => Method::BinomLr,
            "hpd" => Method::BinomHpd,
            "t" => Method::MeanT,
            "z" => Method::MeanZ,
            "lr-t" => Method::MeanLrT,
            "lr-normal" => Method::MeanLrNormal,
            "hpd-t" => Method::MeanHpdT,
            "hpd-normal" => Method::MeanHpdNormal,
            "hessian" => Method::MlHessian,
            "jackknife" => Method::MlJackknife,
            "boot-percentile" => Method::BootPercentile,
            "boot-basic" => Method::BootBasic,
            "boot-bca" => Method::BootBca,
            other => return Err(Error::Domain(format!("unknown method name '{other}'"))),
        };
        Ok(method)
    }
}

/// A closed interval [lower, upper] together with the construction that
/// produced it.
///
/// `level` is the nominal two-sided coverage 1 - alpha for probability
/// based constructions, and the likelihood ratio K for support intervals
/// (see [`Method::is_support`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub method: Method,
    pub level: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64, method: Method, level: f64) -> Self {
        debug_assert!(
            lower <= upper,
            "interval bounds out of order: [{lower}, {upper}]"
        );
        Interval {
            lower,
            upper,
            method,
            level,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Closed-interval membership; both endpoints count as covered.
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}
