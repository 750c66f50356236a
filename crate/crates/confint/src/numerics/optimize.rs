//! Derivative-free minimization with a Nelder-Mead simplex, plus a
//! finite-difference Hessian at the minimizer.
//!
//! This is the engine behind maximum-likelihood fitting: the fit
//! minimizes the negative log-likelihood, and the Hessian returned here
//! becomes the observed information matrix. The objective may return
//! +infinity to mark points outside its domain; such points are treated
//! as arbitrarily bad and the simplex moves away from them. NaN, on the
//! other hand, is a hard error.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    pub max_iter: usize,
    /// Convergence threshold on the simplex function-value spread,
    /// relative to 1 + |f_best|.
    pub f_tol: f64,
    /// Convergence threshold on the simplex diameter, relative to
    /// 1 + |x_best|.
    pub x_tol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            max_iter: 0, // 0 means "pick from the dimension"
            f_tol: 1e-13,
            x_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub argmin: Vec<f64>,
    pub value: f64,
    /// Central finite-difference Hessian of the objective at `argmin`,
    /// symmetrized as (H + Hᵀ)/2.
    pub hessian: Vec<Vec<f64>>,
    /// False when the iteration budget ran out before the simplex
    /// collapsed; callers that need the minimizer must treat that as a
    /// failure rather than use the partial result.
    pub converged: bool,
}

// standard Nelder-Mead moves
const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from the start point `x0`.
///
/// Returns an error if the objective is non-finite at `x0` or evaluates
/// to NaN anywhere along the way. Infinite values are allowed away from
/// the start point so that log-likelihoods can fence off their domain.
pub fn minimize<F>(f: F, x0: &[f64], opts: MinimizeOptions) -> Result<MinimizeResult>
where
    F: Fn(&[f64]) -> f64,
{
    if x0.is_empty() {
        return Err(Error::domain("minimize needs at least one coordinate"));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("minimize start point must be finite"));
    }
    let dim = x0.len();
    let max_iter = if opts.max_iter == 0 {
        500 * dim
    } else {
        opts.max_iter
    };

    let eval = |x: &[f64]| -> Result<f64> {
        let v = f(x);
        if v.is_nan() || v == f64::NEG_INFINITY {
            return Err(Error::Numeric(format!(
                "objective returned {v} at {x:?}; only finite values and +inf are allowed"
            )));
        }
        Ok(v)
    };

    // initial simplex: perturb each coordinate by 5%, or a small absolute
    // step where the coordinate is zero
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += if x0[i] != 0.0 { 0.05 * x0[i].abs() } else { 0.00025 };
        simplex.push(v);
    }
    let mut values = Vec::with_capacity(dim + 1);
    for v in &simplex {
        values.push(eval(v)?);
    }
    if !values[0].is_finite() {
        return Err(Error::domain(
            "objective is not finite at the start point of the minimization",
        ));
    }

    let mut converged = false;
    for _ in 0..max_iter {
        // order the simplex, best first
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("no NaN values"));
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        if simplex_converged(&simplex, &values, best, worst, &opts) {
            converged = true;
            break;
        }

        // centroid of all vertices except the worst
        let mut centroid = vec![0.0; dim];
        for (idx, v) in simplex.iter().enumerate() {
            if idx == worst {
                continue;
            }
            for (c, &vi) in centroid.iter_mut().zip(v) {
                *c += vi;
            }
        }
        for c in &mut centroid {
            *c /= dim as f64;
        }

        let worst_vertex = simplex[worst].clone();
        let reflected = blend(&centroid, &worst_vertex, -REFLECT);
        let f_reflected = eval(&reflected)?;

        if f_reflected < values[best] {
            let expanded = blend(&centroid, &worst_vertex, -EXPAND);
            let f_expanded = eval(&expanded)?;
            if f_expanded < f_reflected {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
        } else if f_reflected < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
        } else {
            // contract toward the better of (worst, reflected)
            let (anchor, f_anchor) = if f_reflected < values[worst] {
                (&reflected, f_reflected)
            } else {
                (&worst_vertex, values[worst])
            };
            let contracted = blend(&centroid, anchor, CONTRACT);
            let f_contracted = eval(&contracted)?;
            if f_contracted < f_anchor {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
            } else {
                // shrink everything toward the best vertex
                let best_vertex = simplex[best].clone();
                for (idx, v) in simplex.iter_mut().enumerate() {
                    if idx == best {
                        continue;
                    }
                    for (vi, &bi) in v.iter_mut().zip(&best_vertex) {
                        *vi = bi + SHRINK * (*vi - bi);
                    }
                    values[idx] = eval(v)?;
                }
            }
        }
    }

    let best = (0..=dim)
        .min_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("no NaN values"))
        .expect("non-empty simplex");
    let argmin = simplex[best].clone();
    let value = values[best];
    let hessian = fd_hessian(&f, &argmin);

    Ok(MinimizeResult {
        argmin,
        value,
        hessian,
        converged,
    })
}

fn simplex_converged(
    simplex: &[Vec<f64>],
    values: &[f64],
    best: usize,
    worst: usize,
    opts: &MinimizeOptions,
) -> bool {
    let f_spread = values[worst] - values[best];
    if !(f_spread <= opts.f_tol * (1.0 + values[best].abs())) {
        return false;
    }
    let best_vertex = &simplex[best];
    let scale = 1.0 + best_vertex.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    simplex.iter().all(|v| {
        v.iter()
            .zip(best_vertex)
            .all(|(a, b)| (a - b).abs() <= opts.x_tol * scale)
    })
}

/// point = centroid + t * (vertex - centroid)
fn blend(centroid: &[f64], vertex: &[f64], t: f64) -> Vec<f64> {
    centroid
        .iter()
        .zip(vertex)
        .map(|(c, v)| c + t * (v - c))
        .collect()
}

/// Central finite-difference Hessian with per-coordinate step
/// h_i = cbrt(eps) * max(1, |x_i|), symmetrized.
#[allow(clippy::needless_range_loop)]
fn fd_hessian<F>(f: &F, x: &[f64]) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x.len();
    let step: Vec<f64> = x
        .iter()
        .map(|&xi| f64::EPSILON.cbrt() * xi.abs().max(1.0))
        .collect();
    let f0 = f(x);
    let mut h = vec![vec![0.0; dim]; dim];

    let mut shifted = x.to_vec();
    for i in 0..dim {
        // diagonal: (f(x+h) - 2 f(x) + f(x-h)) / h²
        shifted[i] = x[i] + step[i];
        let fp = f(&shifted);
        shifted[i] = x[i] - step[i];
        let fm = f(&shifted);
        shifted[i] = x[i];
        h[i][i] = (fp - 2.0 * f0 + fm) / (step[i] * step[i]);

        // off-diagonals: four-point cross difference
        for j in (i + 1)..dim {
            shifted[i] = x[i] + step[i];
            shifted[j] = x[j] + step[j];
            let fpp = f(&shifted);
            shifted[j] = x[j] - step[j];
            let fpm = f(&shifted);
            shifted[i] = x[i] - step[i];
            let fmm = f(&shifted);
            shifted[j] = x[j] + step[j];
            let fmp = f(&shifted);
            shifted[i] = x[i];
            shifted[j] = x[j];
            let hij = (fpp - fpm - fmp + fmm) / (4.0 * step[i] * step[j]);
            h[i][j] = hij;
            h[j][i] = hij;
        }
    }
    // symmetrize; the cross terms are already symmetric by construction
    // but the operation also cleans up any asymmetry from rounding
    for i in 0..dim {
        for j in (i + 1)..dim {
            let avg = 0.5 * (h[i][j] + h[j][i]);
            h[i][j] = avg;
            h[j][i] = avg;
        }
    }
    h
}
