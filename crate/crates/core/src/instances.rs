//! Random problem generators shared by the benchmarks, the CLI and tests.

use rand::Rng;

use crate::projection::ProjectionProblem;

/// `v, b ~ U[0, 1]^n` with `z = fraction * sum(min(v, b))`.
pub fn uniform_instance<R: Rng>(rng: &mut R, n: usize, fraction: f64) -> ProjectionProblem {
    let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let b: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let capacity: f64 = v.iter().zip(&b).map(|(x, y)| x.min(*y)).sum();
    ProjectionProblem::new(v, b, fraction * capacity).expect("uniform instance is valid")
}

/// Same as [`uniform_instance`] with `z` drawn uniformly in
/// `[0, sum(min(v, b))]`.
pub fn uniform_instance_random_budget<R: Rng>(rng: &mut R, n: usize) -> ProjectionProblem {
    let fraction = rng.random::<f64>();
    uniform_instance(rng, n, fraction)
}

/// Instance with the degeneracies the solvers must survive: repeated values,
/// zero and infinite bounds, and (half the time) a budget sitting exactly on
/// a breakpoint of the budget map.
pub fn degenerate_instance<R: Rng>(rng: &mut R, n: usize) -> ProjectionProblem {
    let levels = [0.0, 0.25, 0.5, 0.75, 1.0];
    let v: Vec<f64> = (0..n)
        .map(|_| levels[rng.random_range(0..levels.len())])
        .collect();
    let b: Vec<f64> = (0..n)
        .map(|_| match rng.random_range(0..6) {
            0 => 0.0,
            1 => f64::INFINITY,
            k => levels[k - 1] * 0.5 + 0.1,
        })
        .collect();
    let b_eff: Vec<f64> = v.iter().zip(&b).map(|(x, y)| y.min(*x)).collect();
    let capacity: f64 = b_eff.iter().sum();
    let z = if rng.random_bool(0.5) {
        // Pick a breakpoint and use the budget it induces.
        let i = rng.random_range(0..n);
        let theta = if rng.random_bool(0.5) { v[i] } else { v[i] - b_eff[i] };
        v.iter()
            .zip(&b_eff)
            .map(|(&vi, &bi)| (vi - theta).max(0.0).min(bi))
            .sum()
    } else {
        rng.random::<f64>() * capacity
    };
    ProjectionProblem::new(v, b, z).expect("degenerate instance is valid")
}
