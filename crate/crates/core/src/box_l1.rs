//! Projection onto the box-constrained L1 ball `{x : |x|_1 <= z, a <= x <= b}`.
//!
//! Every coordinate is mapped into the nonnegative orthant with a lower bound
//! of zero, the resulting upper-bounded simplex problem is solved, and the
//! mapping is undone:
//!
//! * `[a, b]` entirely negative: flip the sign, then shift by the new lower
//!   bound `-b`.
//! * `[a, b]` entirely positive: shift by `a`.
//! * `a <= 0 <= b`: the optimum shares the sign of `v`, so project `|v_i|`
//!   onto `[0, b]` when `v_i > 0` and onto `[0, -a]` when `v_i < 0`.
//!
//! Shifts consume `|shift_i|` of the budget up front.

use crate::error::{check_len, check_no_nan, Error, Result};
use crate::projection::{project_ub_simplex_linear, ProjectionProblem, ProjectionResult};
use crate::sum::{sum, CompensatedSum};

#[derive(Debug, Clone, PartialEq)]
pub struct BoxL1Problem {
    v: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    z: f64,
}

/// Smallest `|t|` over `t` in `[a, b]`.
fn min_abs_in(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        a
    } else if b < 0.0 {
        -b
    } else {
        0.0
    }
}

impl BoxL1Problem {
    pub fn new(v: Vec<f64>, a: Vec<f64>, b: Vec<f64>, z: f64) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::Empty);
        }
        check_len("a", v.len(), a.len())?;
        check_len("b", v.len(), b.len())?;
        check_no_nan("v", &v)?;
        check_no_nan("a", &a)?;
        check_no_nan("b", &b)?;
        if z.is_nan() || z < 0.0 {
            return Err(Error::InvalidBudget(z));
        }
        if let Some(i) = v.iter().position(|x| x.is_infinite()) {
            return Err(Error::InvalidInput(format!("v[{i}] is not finite")));
        }
        for i in 0..v.len() {
            if a[i] > b[i] || a[i] == f64::INFINITY || b[i] == f64::NEG_INFINITY {
                return Err(Error::InvalidInput(format!(
                    "empty interval at index {i}: [{}, {}]",
                    a[i], b[i]
                )));
            }
        }
        let min_norm = sum(a.iter().zip(&b).map(|(&lo, &hi)| min_abs_in(lo, hi)));
        if min_norm > z {
            return Err(Error::Infeasible {
                min_norm,
                budget: z,
            });
        }
        Ok(Self { v, a, b, z })
    }

    /// Symmetric box `[-bound, bound]` on every coordinate.
    pub fn symmetric(v: Vec<f64>, bound: f64, z: f64) -> Result<Self> {
        let n = v.len();
        Self::new(v, vec![-bound; n], vec![bound; n], z)
    }

    /// Plain L1 ball, no box.
    pub fn l1_ball(v: Vec<f64>, z: f64) -> Result<Self> {
        Self::symmetric(v, f64::INFINITY, z)
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn a(&self) -> &[f64] {
        &self.a
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

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalCase {
    /// `b < 0`.
    NegInterval,
    /// `a > 0`.
    PosInterval,
    /// `a <= 0 <= b`.
    ZeroSpanning,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordTransform {
    /// `+1.0` or `-1.0`.
    pub sign: f64,
    pub shift: f64,
    pub case: IntervalCase,
}

/// Per-coordinate map `x -> sign * x - shift` into the canonical problem,
/// plus the budget left once the shifts are paid for.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalTransform {
    pub coords: Vec<CoordTransform>,
    pub adjusted_budget: f64,
}

impl CanonicalTransform {
    /// Maps an original-space vector into canonical coordinates.
    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.coords)
            .map(|(&xi, c)| c.sign * xi - c.shift)
            .collect()
    }

    /// Maps a canonical-space vector back to original coordinates.
    pub fn inverse(&self, y: &[f64]) -> Vec<f64> {
        y.iter()
            .zip(&self.coords)
            .map(|(&yi, c)| c.sign * (yi + c.shift))
            .collect()
    }
}

pub fn canonicalize(p: &BoxL1Problem) -> Result<(ProjectionProblem, CanonicalTransform)> {
    let n = p.len();
    let mut coords = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    let mut shifted = CompensatedSum::new();
    for i in 0..n {
        let (v, a, b) = (p.v[i], p.a[i], p.b[i]);
        let (coord, t, u) = if b < 0.0 {
            let shift = -b;
            (
                CoordTransform {
                    sign: -1.0,
                    shift,
                    case: IntervalCase::NegInterval,
                },
                -v - shift,
                -a - shift,
            )
        } else if a > 0.0 {
            (
                CoordTransform {
                    sign: 1.0,
                    shift: a,
                    case: IntervalCase::PosInterval,
                },
                v - a,
                b - a,
            )
        } else {
            let (sign, u) = if v > 0.0 {
                (1.0, b)
            } else if v < 0.0 {
                (-1.0, -a)
            } else {
                // v = 0: the optimum is 0, pin it with a zero-width interval.
                (1.0, 0.0)
            };
            (
                CoordTransform {
                    sign,
                    shift: 0.0,
                    case: IntervalCase::ZeroSpanning,
                },
                v.abs(),
                u,
            )
        };
        shifted += coord.shift;
        coords.push(coord);
        // A target below the shifted lower bound is optimally pinned at 0,
        // which a zero target reproduces.
        target.push(t.max(0.0));
        upper.push(u);
    }
    let shifted = shifted.value();
    let adjusted_budget = p.z - shifted;
    if adjusted_budget < 0.0 {
        return Err(Error::Infeasible {
            min_norm: shifted,
            budget: p.z,
        });
    }
    let problem = ProjectionProblem::new(target, upper, adjusted_budget)?;
    Ok((
        problem,
        CanonicalTransform {
            coords,
            adjusted_budget,
        },
    ))
}

/// Full solution of a box-constrained L1 projection.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxL1Solution {
    pub x: Vec<f64>,
    /// Result of the canonical upper-bounded simplex projection.
    pub canonical: ProjectionResult,
    pub transform: CanonicalTransform,
}

pub fn solve_box_l1(p: &BoxL1Problem) -> Result<BoxL1Solution> {
    let (canonical_problem, transform) = canonicalize(p)?;
    let canonical = project_ub_simplex_linear(&canonical_problem);
    let mut x = transform.inverse(&canonical.x);
    for i in 0..x.len() {
        x[i] = x[i].clamp(p.a[i], p.b[i]);
    }
    Ok(BoxL1Solution {
        x,
        canonical,
        transform,
    })
}

/// Euclidean projection of `p.v` onto `{x : |x|_1 <= z, a <= x <= b}`.
pub fn project_box_l1(p: &BoxL1Problem) -> Result<Vec<f64>> {
    solve_box_l1(p).map(|s| s.x)
}
