//! Independent correctness machinery for the projection solvers.
//!
//! Nothing here calls into [`crate::projection`]'s solvers: the brute-force
//! and grid oracles recompute everything from the raw inputs so that they can
//! be used to check them.

use crate::error::{check_len, Error, Result};
use crate::projection::ProjectionResult;

/// Largest dimension accepted by [`brute_force_project`] (3^12 partitions).
pub const BRUTE_FORCE_MAX_N: usize = 12;

/// Slack used when testing a candidate partition for consistency.
const CONSISTENCY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    Lower,
    Upper,
    Free,
}

/// Exact projection onto `{x : sum(x) <= z, 0 <= x <= b}` by enumerating
/// every assignment of coordinates to the zero / bound / free groups.
///
/// For each assignment with a nonempty free group the threshold follows from
/// the budget, `theta = (sum_U b + sum_C v - z) / |C|`. Candidates that are
/// inconsistent with their own assignment or infeasible are dropped; the
/// remaining one with the lowest objective is returned.
pub fn brute_force_project(v: &[f64], b: &[f64], z: f64) -> Result<Vec<f64>> {
    let n = v.len();
    check_len("b", n, b.len())?;
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let cap: Vec<f64> = v.iter().zip(b).map(|(&vi, &bi)| if bi < vi { bi } else { vi }).collect();

    let mut groups = vec![Group::Lower; n];
    let mut candidate = vec![0.0; n];
    let mut best: Option<(f64, Vec<f64>)> = None;
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for g in groups.iter_mut() {
            *g = match c % 3 {
                0 => Group::Lower,
                1 => Group::Upper,
                _ => Group::Free,
            };
            c /= 3;
        }

        let mut fixed = 0.0;
        let mut free_sum = 0.0;
        let mut free_count = 0usize;
        for i in 0..n {
            match groups[i] {
                Group::Lower => {}
                Group::Upper => fixed += cap[i],
                Group::Free => {
                    free_sum += v[i];
                    free_count += 1;
                }
            }
        }

        if free_count > 0 {
            let theta = (fixed + free_sum - z) / free_count as f64;
            if theta < -CONSISTENCY_TOL {
                continue;
            }
            let consistent = (0..n).all(|i| match groups[i] {
                Group::Lower => v[i] <= theta + CONSISTENCY_TOL,
                Group::Upper => v[i] - cap[i] >= theta - CONSISTENCY_TOL,
                Group::Free => {
                    v[i] - cap[i] <= theta + CONSISTENCY_TOL && theta <= v[i] + CONSISTENCY_TOL
                }
            });
            if !consistent {
                continue;
            }
        }

        let mut norm = 0.0;
        let mut feasible = true;
        for i in 0..n {
            let xi = match groups[i] {
                Group::Lower => 0.0,
                Group::Upper => cap[i],
                Group::Free => {
                    let theta = (fixed + free_sum - z) / free_count as f64;
                    v[i] - theta
                }
            };
            if xi < -CONSISTENCY_TOL || xi > cap[i] + CONSISTENCY_TOL {
                feasible = false;
                break;
            }
            candidate[i] = xi.clamp(0.0, cap[i]);
            norm += candidate[i];
        }
        if !feasible || norm > z + 1e-12 * (1.0 + z) {
            continue;
        }

        let objective: f64 = candidate
            .iter()
            .zip(v)
            .map(|(x, vi)| 0.5 * (x - vi) * (x - vi))
            .sum();
        if best.as_ref().is_none_or(|(f, _)| objective < *f) {
            best = Some((objective, candidate.clone()));
        }
    }
    // The all-zero assignment is always feasible, so a candidate exists.
    Ok(best.expect("zero vector is always feasible").1)
}

/// Grid-search cross-check on the threshold: the smallest grid point
/// `theta = k * step` in `[0, max(v)]` whose clamp fits the budget. The
/// result is within `step` of the exact projection in every coordinate.
pub fn grid_search_project(v: &[f64], b: &[f64], z: f64, step: f64) -> Result<(f64, Vec<f64>)> {
    check_len("b", v.len(), b.len())?;
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidInput(format!("grid step must be positive, got {step}")));
    }
    let clamp_at = |theta: f64| -> Vec<f64> {
        v.iter()
            .zip(b)
            .map(|(&vi, &bi)| (vi - theta).max(0.0).min(bi))
            .collect()
    };
    let top = v.iter().cloned().fold(0.0, f64::max);
    let steps = (top / step).ceil() as usize;
    for k in 0..=steps {
        let theta = k as f64 * step;
        let x = clamp_at(theta);
        if x.iter().sum::<f64>() <= z {
            return Ok((theta, x));
        }
    }
    Ok((top, vec![0.0; v.len()]))
}

/// Residuals of the first-order optimality conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktReport {
    /// `max_i |x_i - v_i + theta - zeta_i + gamma_i|`.
    pub stationarity_residual: f64,
    /// Largest violation of `0 <= x <= b` and `sum(x) <= z`.
    pub primal_violation: f64,
    /// Largest of `|zeta_i x_i|`, `|gamma_i (b_i - x_i)|` and
    /// `|theta (z - sum(x))|`.
    pub comp_slack_residual: f64,
    /// Smallest of `theta`, `zeta_i`, `gamma_i`; negative means dual
    /// infeasible.
    pub dual_feas: f64,
    pub passed: bool,
}

pub fn kkt_check(v: &[f64], b: &[f64], z: f64, result: &ProjectionResult, tol: f64) -> KktReport {
    let x = &result.x;
    let m = &result.multipliers;
    let theta = m.theta;
    let mut stationarity: f64 = 0.0;
    let mut primal: f64 = 0.0;
    let mut slack: f64 = 0.0;
    let mut dual = theta;
    for i in 0..v.len() {
        let (zeta, gamma) = (m.zeta[i], m.gamma[i]);
        stationarity = stationarity.max((x[i] - v[i] + theta - zeta + gamma).abs());
        primal = primal.max(-x[i]).max(x[i] - b[i]);
        slack = slack.max((zeta * x[i]).abs());
        if gamma != 0.0 {
            slack = slack.max((gamma * (b[i] - x[i])).abs());
        }
        dual = dual.min(zeta).min(gamma);
    }
    let norm = crate::sum::sum(x.iter().copied());
    primal = primal.max(norm - z);
    slack = slack.max((theta * (z - norm)).abs());
    KktReport {
        stationarity_residual: stationarity,
        primal_violation: primal,
        comp_slack_residual: slack,
        dual_feas: dual,
        passed: stationarity <= tol && primal <= tol && slack <= tol && dual >= -tol,
    }
}

/// Duality-gap certificate for the penalized bounded problem
/// `min_x |x - v|^2 + sum_i lambda_i |x_i| + zeta'(l - x) + gamma'(x - b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub primal_value: f64,
    /// `G(mu)`.
    pub dual_value: f64,
    /// `primal_value - dual_value`.
    pub gap: f64,
    /// Gap of the same point for the problem without bound terms.
    pub gap_l1: f64,
    /// The gap rebuilt as
    /// `gap_l1 - (zeta - gamma)'(x - v) + (2 mu + zeta - gamma)'(zeta - gamma) / 4`.
    pub decomposed_gap: f64,
    /// Whether `mu >= gamma / 2` holds in every coordinate.
    pub sufficient_condition_holds: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn duality_gap(
    v: &[f64],
    lambda: &[f64],
    l: &[f64],
    b: &[f64],
    x: &[f64],
    zeta: &[f64],
    gamma: &[f64],
    mu: &[f64],
) -> Result<GapReport> {
    let n = v.len();
    for (what, len) in [
        ("lambda", lambda.len()),
        ("l", l.len()),
        ("b", b.len()),
        ("x", x.len()),
        ("zeta", zeta.len()),
        ("gamma", gamma.len()),
        ("mu", mu.len()),
    ] {
        check_len(what, n, len)?;
    }
    for i in 0..n {
        if mu[i].abs() > lambda[i] {
            return Err(Error::DualInfeasible {
                index: i,
                mu: mu[i].abs(),
                lambda: lambda[i],
            });
        }
    }

    let dot = |p: &[f64], q: &[f64]| -> f64 { p.iter().zip(q).map(|(a, b)| a * b).sum() };
    let d: Vec<f64> = zeta.iter().zip(gamma).map(|(z, g)| z - g).collect();
    let x_minus_v: Vec<f64> = x.iter().zip(v).map(|(a, b)| a - b).collect();
    let l_minus_x: Vec<f64> = l.iter().zip(x).map(|(a, b)| a - b).collect();
    let x_minus_b: Vec<f64> = x.iter().zip(b).map(|(a, b)| a - b).collect();

    let l1_primal = dot(&x_minus_v, &x_minus_v)
        + lambda.iter().zip(x).map(|(lam, xi)| lam * xi.abs()).sum::<f64>();
    let primal_value = l1_primal + dot(zeta, &l_minus_x) + dot(gamma, &x_minus_b);

    let l1_dual = -dot(mu, mu) / 4.0 - dot(mu, v);
    let dual_value = l1_dual - dot(mu, &d) / 2.0 - dot(&d, &d) / 4.0 - dot(&d, v) + dot(zeta, l)
        - dot(gamma, b);

    let gap_l1 = l1_primal - l1_dual;
    let two_mu_plus_d: Vec<f64> = mu.iter().zip(&d).map(|(m, di)| 2.0 * m + di).collect();
    let decomposed_gap = gap_l1 - dot(&d, &x_minus_v) + dot(&two_mu_plus_d, &d) / 4.0;

    Ok(GapReport {
        primal_value,
        dual_value,
        gap: primal_value - dual_value,
        gap_l1,
        decomposed_gap,
        sufficient_condition_holds: mu.iter().zip(gamma).all(|(m, g)| *m >= g / 2.0),
    })
}

/// Exact minimizer of the penalized bounded problem for fixed `zeta`, `gamma`
/// and the matching dual point `mu`. Each coordinate is a scalar
/// soft-threshold: `x_i = sign(w_i) max(|w_i| - lambda_i / 2, 0)` with
/// `w_i = v_i + (zeta_i - gamma_i) / 2`.
pub fn penalized_optimum(
    v: &[f64],
    lambda: &[f64],
    zeta: &[f64],
    gamma: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = v.len();
    check_len("lambda", n, lambda.len())?;
    check_len("zeta", n, zeta.len())?;
    check_len("gamma", n, gamma.len())?;
    let mut x = Vec::with_capacity(n);
    let mut mu = Vec::with_capacity(n);
    for i in 0..n {
        let c = gamma[i] - zeta[i];
        let w = v[i] - c / 2.0;
        let xi = w.signum() * (w.abs() - lambda[i] / 2.0).max(0.0);
        x.push(xi);
        // Optimal beta = 2 (x - v); mu = beta - zeta + gamma.
        mu.push((2.0 * (xi - v[i]) + c).clamp(-lambda[i], lambda[i]));
    }
    Ok((x, mu))
}
