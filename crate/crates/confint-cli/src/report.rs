//! Output shaping: interval reports, the 6-significant-digit number
//! format shared by all text output, and the coverage CSV.

use std::io::{self, Write};

use confint::coverage::CoverageCurve;
use confint::Interval;
use serde::{Deserialize, Serialize};

/// One interval, ready for printing. `level` holds 1 − α for
/// probability-calibrated methods and the density ratio K for support
/// methods, mirroring the interval itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub method: String,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub point_estimate: f64,
    pub n: usize,
    /// Bootstrap replicate count, present only for bootstrap reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// RNG seed, present only for bootstrap reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl IntervalReport {
    pub fn new(interval: &Interval, point_estimate: f64, n: usize) -> Self {
        IntervalReport {
            method: interval.method.name().to_string(),
            lower: interval.lower,
            upper: interval.upper,
            level: interval.level,
            point_estimate,
            n,
            r: None,
            seed: None,
        }
    }

    pub fn with_bootstrap(mut self, r: usize, seed: u64) -> Self {
        self.r = Some(r);
        self.seed = Some(seed);
        self
    }

    /// The whitespace-separated text form: `method lower upper`.
    pub fn text_line(&self) -> String {
        format!("{} {} {}", self.method, sig6(self.lower), sig6(self.upper))
    }
}

/// Renders with 6 significant digits, the fixed precision of all text
/// and CSV output. Exact zero prints as `0.00000` so columns stay
/// uniform.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    // Values this code never prints in practice; keep them well-formed
    // rather than emitting forty-digit decimals.
    if !(-9..6).contains(&mag) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Writes coverage curves as CSV with the fixed header, rows sorted by
/// (method, x).
pub fn write_coverage_csv(curves: &[CoverageCurve], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "x,method,coverage,mean_length,mc_stderr,n_reps")?;
    let mut by_method: Vec<&CoverageCurve> = curves.iter().collect();
    by_method.sort_by_key(|c| c.method.name());
    for curve in by_method {
        let mut rows: Vec<usize> = (0..curve.x_axis.len()).collect();
        rows.sort_by(|&a, &b| curve.x_axis[a].total_cmp(&curve.x_axis[b]));
        for i in rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                sig6(curve.x_axis[i]),
                curve.method.name(),
                sig6(curve.coverage[i]),
                sig6(curve.mean_length[i]),
                sig6(curve.mc_stderr[i]),
                curve.n_reps,
            )?;
        }
    }
    Ok(())
}
