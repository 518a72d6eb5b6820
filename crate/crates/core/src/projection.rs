//! Euclidean projection onto the upper-bounded simplex
//! `{x : sum(x) <= z, 0 <= x <= b}` for a nonnegative target `v`.
//!
//! The solution is always `x = clamp(v - theta, 0, b_eff)` for a scalar
//! threshold `theta`, where `b_eff = min(b, v)`. Both solvers below search for
//! that threshold on the piecewise-linear, nonincreasing map
//! `theta -> sum(clamp(v - theta, 0, b_eff))`, whose slope changes only at the
//! breakpoints `v_i` and `v_i - b_i`.
//!
//! [`project_ub_simplex_linear`] runs in worst-case linear time by bisecting
//! the breakpoints around a median-of-medians pivot while carrying running
//! partial sums. [`project_ub_simplex_sorted`] sorts the breakpoints and walks
//! the segments; it exists as an independent reference.

use crate::error::{check_len, check_no_nan, Error, Result};
use crate::select::median_of_medians;
use crate::sum::{sum, CompensatedSum};

/// Target, per-coordinate upper bounds and norm budget of an upper-bounded
/// simplex projection. `f64::INFINITY` in `b` marks an unbounded coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionProblem {
    v: Vec<f64>,
    b: Vec<f64>,
    z: f64,
}

impl ProjectionProblem {
    pub fn new(v: Vec<f64>, b: Vec<f64>, z: f64) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::Empty);
        }
        check_len("b", v.len(), b.len())?;
        check_no_nan("v", &v)?;
        check_no_nan("b", &b)?;
        if z.is_nan() || z < 0.0 {
            return Err(Error::InvalidBudget(z));
        }
        if let Some(i) = v.iter().position(|&x| x < 0.0 || x.is_infinite()) {
            return Err(Error::InvalidInput(format!(
                "target must be finite and nonnegative, v[{i}] = {}",
                v[i]
            )));
        }
        if let Some(i) = b.iter().position(|&x| x < 0.0) {
            return Err(Error::InvalidInput(format!(
                "upper bound must be nonnegative, b[{i}] = {}",
                b[i]
            )));
        }
        Ok(Self { v, b, z })
    }

    /// Problem with every coordinate unbounded, i.e. the plain simplex /
    /// nonnegative L1 ball.
    pub fn unbounded(v: Vec<f64>, z: f64) -> Result<Self> {
        let b = vec![f64::INFINITY; v.len()];
        Self::new(v, b, z)
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }
}

/// Which threshold a breakpoint marks for its coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakKind {
    /// `theta = v_i`: at or above it the coordinate is pinned at zero.
    Lower,
    /// `theta = v_i - b_i`: at or below it the coordinate is pinned at `b_i`.
    Upper,
}

/// A slope change of the budget map. For a fixed index the upper breakpoint
/// never exceeds the lower one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub value: f64,
    pub source_index: usize,
    pub kind: BreakKind,
}

/// Bracket `[theta_lo, theta_hi]` around the optimal threshold together with
/// the partial sums that let the budget be evaluated from the breakpoints
/// still inside the bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSearchState {
    pub theta_lo: f64,
    pub theta_hi: f64,
    /// Sum of all targets.
    pub s_all: CompensatedSum,
    /// Sum of `v_i` over coordinates confirmed at zero.
    pub s_lo: CompensatedSum,
    /// Sum of `v_i - b_i` over coordinates confirmed at their bound.
    pub s_hi: CompensatedSum,
    pub n_lo: usize,
    pub n_hi: usize,
}

/// Corrections gathered from the open window during one partition pass.
#[derive(Debug, Default, Clone, Copy)]
struct WindowSums {
    /// Sum and count of lower breakpoints `<= pivot`.
    lower_sum: CompensatedSum,
    lower_count: usize,
    /// Sum and count of upper breakpoints `>= pivot`.
    upper_sum: CompensatedSum,
    upper_count: usize,
}

impl ThetaSearchState {
    /// Budget used at `pivot`, given the window corrections for that pivot.
    fn budget_at(&self, n: usize, pivot: f64, w: &WindowSums) -> f64 {
        let slope = (n - self.n_lo - self.n_hi - w.upper_count - w.lower_count) as f64;
        sum([
            self.s_all.value(),
            -self.s_lo.value(),
            -self.s_hi.value(),
            -slope * pivot,
            -w.upper_sum.value(),
            -w.lower_sum.value(),
        ])
    }

    /// Sum of the targets of coordinates not yet confirmed at a limit.
    fn unconfirmed_sum(&self) -> f64 {
        sum([self.s_all.value(), -self.s_lo.value(), -self.s_hi.value()])
    }
}

/// KKT multipliers of the projection: `theta` for the budget, `zeta` for
/// `x >= 0` and `gamma` for `x <= b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers {
    pub theta: f64,
    pub zeta: Vec<f64>,
    pub gamma: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub x: Vec<f64>,
    pub theta_star: f64,
    /// Indices with `x_i = 0`.
    pub lower_set: Vec<usize>,
    /// Indices with `x_i = b_i` (effective bound).
    pub upper_set: Vec<usize>,
    /// Indices with `0 < x_i < b_i`.
    pub free_set: Vec<usize>,
    pub multipliers: Multipliers,
    /// Set when `sum(min(v, b)) <= z`, so the budget does not bind.
    pub norm_inactive: bool,
}

impl ProjectionResult {
    fn from_theta(v: &[f64], b_eff: &[f64], theta: f64, norm_inactive: bool) -> Self {
        let n = v.len();
        let x = x_from_theta_unchecked(v, b_eff, theta);
        let mut lower_set = Vec::new();
        let mut upper_set = Vec::new();
        let mut free_set = Vec::new();
        let mut zeta = Vec::with_capacity(n);
        let mut gamma = Vec::with_capacity(n);
        for i in 0..n {
            let z_i = (theta - v[i]).max(0.0);
            let g_i = (v[i] - b_eff[i] - theta).max(0.0);
            // A zero-width coordinate is at both limits; it joins whichever
            // group carries its nonzero multiplier.
            if x[i] == b_eff[i] && g_i > 0.0 {
                upper_set.push(i);
            } else if x[i] == 0.0 {
                lower_set.push(i);
            } else if x[i] == b_eff[i] {
                upper_set.push(i);
            } else {
                free_set.push(i);
            }
            zeta.push(z_i);
            gamma.push(g_i);
        }
        Self {
            x,
            theta_star: theta,
            lower_set,
            upper_set,
            free_set,
            multipliers: Multipliers { theta, zeta, gamma },
            norm_inactive,
        }
    }

    /// `sum(x)`, which equals the L1 norm since the solution is nonnegative.
    pub fn norm(&self) -> f64 {
        sum(self.x.iter().copied())
    }
}

/// `min(b_i, v_i)` per coordinate: no coordinate of the optimum exceeds its
/// target, so tighter bounds are lossless. Infinite bounds become `v_i`.
pub fn effective_bounds(v: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    check_len("b", v.len(), b.len())?;
    Ok(v.iter().zip(b).map(|(&vi, &bi)| bi.min(vi)).collect())
}

/// Candidate solution for a fixed threshold: zero where `v_i <= theta`, the
/// bound where `v_i - b_i >= theta`, and `v_i - theta` in between.
pub fn x_from_theta(v: &[f64], b_eff: &[f64], theta: f64) -> Result<Vec<f64>> {
    check_len("b", v.len(), b_eff.len())?;
    Ok(x_from_theta_unchecked(v, b_eff, theta))
}

#[inline]
fn coordinate_at(v: f64, b: f64, theta: f64) -> f64 {
    if v <= theta {
        0.0
    } else if v - b >= theta {
        b
    } else {
        (v - theta).min(b)
    }
}

fn x_from_theta_unchecked(v: &[f64], b_eff: &[f64], theta: f64) -> Vec<f64> {
    v.iter()
        .zip(b_eff)
        .map(|(&vi, &bi)| coordinate_at(vi, bi, theta))
        .collect()
}

/// Budget consumed by the threshold `theta`, evaluated directly in O(n).
pub fn z_of_theta(v: &[f64], b_eff: &[f64], theta: f64) -> Result<f64> {
    check_len("b", v.len(), b_eff.len())?;
    Ok(sum(v
        .iter()
        .zip(b_eff)
        .map(|(&vi, &bi)| coordinate_at(vi, bi, theta))))
}

/// Effective bounds and the inactive-budget shortcut shared by both solvers.
/// Returns `Err(result)` when the clamp `min(v, b)` already fits the budget.
fn prepare(p: &ProjectionProblem) -> std::result::Result<Vec<f64>, Box<ProjectionResult>> {
    let b_eff: Vec<f64> = p.v.iter().zip(&p.b).map(|(&v, &b)| b.min(v)).collect();
    let capacity = sum(b_eff.iter().copied());
    if capacity <= p.z {
        return Err(Box::new(ProjectionResult::from_theta(&p.v, &b_eff, 0.0, true)));
    }
    Ok(b_eff)
}

/// Worst-case linear-time projection onto the upper-bounded simplex.
///
/// Each round takes the median of medians of the breakpoints left in the bracket,
/// partitions them three ways around it while accumulating the sums needed to
/// evaluate the budget there, and discards the side that cannot contain the
/// optimal threshold. Coordinates whose breakpoints leave the bracket are
/// folded into the running sums, so no round rescans the full input.
pub fn project_ub_simplex_linear(p: &ProjectionProblem) -> ProjectionResult {
    let b_eff = match prepare(p) {
        Ok(b) => b,
        Err(inactive) => return *inactive,
    };
    let v = &p.v;
    let n = v.len();
    let target = p.z;

    let mut state = ThetaSearchState {
        theta_lo: f64::INFINITY,
        theta_hi: f64::NEG_INFINITY,
        s_all: v.iter().copied().collect(),
        s_lo: CompensatedSum::new(),
        s_hi: CompensatedSum::new(),
        n_lo: 0,
        n_hi: 0,
    };
    for i in 0..n {
        if b_eff[i] == 0.0 {
            // Zero-width coordinate: pinned at zero for every theta.
            state.s_lo += v[i];
            state.n_lo += 1;
        } else {
            state.theta_lo = state.theta_lo.min(v[i] - b_eff[i]);
            state.theta_hi = state.theta_hi.max(v[i]);
        }
    }

    // Breakpoints strictly inside the bracket. The budget is sum(b_eff) at
    // theta_lo and zero at theta_hi, so the optimum lies inside.
    let mut window: Vec<Breakpoint> = Vec::with_capacity(2 * (n - state.n_lo));
    for i in 0..n {
        if b_eff[i] == 0.0 {
            continue;
        }
        let lower = v[i];
        let upper = v[i] - b_eff[i];
        if lower < state.theta_hi {
            window.push(Breakpoint {
                value: lower,
                source_index: i,
                kind: BreakKind::Lower,
            });
        }
        if upper > state.theta_lo {
            window.push(Breakpoint {
                value: upper,
                source_index: i,
                kind: BreakKind::Upper,
            });
        }
    }

    let mut lo = 0;
    let mut hi = window.len();
    let mut exact = None;
    while lo < hi {
        let active = &mut window[lo..hi];
        let pivot = median_of_medians(active, |bp| bp.value);
        let (lt, gt, sums) = partition_with_sums(active, pivot);
        let z_pivot = state.budget_at(n, pivot, &sums);

        if z_pivot > target {
            // Optimum lies right of the pivot; lower breakpoints at or below
            // it are confirmed at zero.
            state.theta_lo = pivot;
            state.s_lo += sums.lower_sum;
            state.n_lo += sums.lower_count;
            lo += gt;
        } else if z_pivot < target {
            state.theta_hi = pivot;
            state.s_hi += sums.upper_sum;
            state.n_hi += sums.upper_count;
            hi = lo + lt;
        } else {
            exact = Some(pivot);
            break;
        }
    }

    let theta = exact.unwrap_or_else(|| {
        // No breakpoint left inside the bracket: the budget is linear there
        // with slope -|C|.
        let free = n - state.n_lo - state.n_hi;
        if free == 0 {
            state.theta_lo
        } else {
            let theta = (state.unconfirmed_sum() - target) / free as f64;
            theta.clamp(state.theta_lo, state.theta_hi)
        }
    });
    ProjectionResult::from_theta(v, &b_eff, theta, false)
}

/// Three-way partition of the window around `pivot`, collecting the sums of
/// lower breakpoints `<= pivot` and upper breakpoints `>= pivot` in the same
/// pass.
fn partition_with_sums(data: &mut [Breakpoint], pivot: f64) -> (usize, usize, WindowSums) {
    let mut sums = WindowSums::default();
    let mut lt = 0;
    let mut i = 0;
    let mut gt = data.len();
    while i < gt {
        let bp = data[i];
        match bp.kind {
            BreakKind::Lower if bp.value <= pivot => {
                sums.lower_sum += bp.value;
                sums.lower_count += 1;
            }
            BreakKind::Upper if bp.value >= pivot => {
                sums.upper_sum += bp.value;
                sums.upper_count += 1;
            }
            _ => {}
        }
        if bp.value < pivot {
            data.swap(lt, i);
            lt += 1;
            i += 1;
        } else if bp.value > pivot {
            gt -= 1;
            data.swap(i, gt);
        } else {
            i += 1;
        }
    }
    (lt, gt, sums)
}

/// O(n log n) reference: sort all breakpoints and walk the segments of the
/// budget map from the top until the target is bracketed.
pub fn project_ub_simplex_sorted(p: &ProjectionProblem) -> ProjectionResult {
    let b_eff = match prepare(p) {
        Ok(b) => b,
        Err(inactive) => return *inactive,
    };
    let v = &p.v;
    let target = p.z;

    let mut breaks: Vec<(f64, BreakKind)> = Vec::with_capacity(2 * v.len());
    for (&vi, &bi) in v.iter().zip(&b_eff) {
        if bi > 0.0 {
            breaks.push((vi, BreakKind::Lower));
            breaks.push((vi - bi, BreakKind::Upper));
        }
    }
    breaks.sort_by(|a, b| b.0.total_cmp(&a.0));

    // Walking downwards: crossing a lower breakpoint frees a coordinate,
    // crossing an upper breakpoint pins one at its bound.
    let mut free = 0usize;
    let mut budget = CompensatedSum::new();
    let mut prev = breaks[0].0;
    let mut theta = None;
    for &(t, kind) in &breaks {
        let mut next = budget;
        next += free as f64 * (prev - t);
        if next.value() >= target {
            theta = Some(if free == 0 {
                t
            } else {
                prev - (target - budget.value()) / free as f64
            });
            break;
        }
        budget = next;
        prev = t;
        match kind {
            BreakKind::Lower => free += 1,
            BreakKind::Upper => free -= 1,
        }
    }
    // The walk always brackets the target since it ends at sum(b_eff) > z.
    let theta = theta.unwrap_or(prev);
    ProjectionResult::from_theta(v, &b_eff, theta, false)
}
