//! The four subcommands as library functions returning plain data.

use std::time::{Duration, Instant};

use boxproj_core::instances::uniform_instance;
use boxproj_core::pg::{box_l1_projector, WEIGHT_BOUND};
use boxproj_core::{
    generate_synthetic, project_ub_simplex_linear, project_ub_simplex_sorted, projected_gradient,
    solve_box_l1, BoxL1Problem, PGConfig, PGTrace, ProjectionProblem, StepSize,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};

/// Budget used by `bench`, as a fraction of `sum(min(v, b))`.
pub const BENCH_BUDGET_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectSummary {
    pub x: Vec<f64>,
    pub theta_star: f64,
    pub lower: usize,
    pub upper: usize,
    pub free: usize,
    pub norm: f64,
    pub norm_inactive: bool,
    pub elapsed: Duration,
}

/// Projects `v` onto `{x : |x|_1 <= z, lower <= x <= upper}`. Missing lower
/// bounds default to 0 when `nonnegative` is set and to -inf otherwise;
/// missing upper bounds default to +inf.
pub fn project(
    v: Vec<f64>,
    lower: Option<Vec<f64>>,
    upper: Option<Vec<f64>>,
    z: f64,
    nonnegative: bool,
) -> Result<ProjectSummary> {
    let n = v.len();
    let default_lower = if nonnegative { 0.0 } else { f64::NEG_INFINITY };
    let a = lower.unwrap_or_else(|| vec![default_lower; n]);
    let b = upper.unwrap_or_else(|| vec![f64::INFINITY; n]);
    if a.len() != n || b.len() != n {
        return Err(CliError::Validation(format!(
            "bound files must have {n} entries, got lower = {}, upper = {}",
            a.len(),
            b.len()
        )));
    }
    let problem = BoxL1Problem::new(v, a, b, z)?;
    let start = Instant::now();
    let sol = solve_box_l1(&problem)?;
    let elapsed = start.elapsed();
    let norm = sol.x.iter().map(|t| t.abs()).sum();
    Ok(ProjectSummary {
        theta_star: sol.canonical.theta_star,
        lower: sol.canonical.lower_set.len(),
        upper: sol.canonical.upper_set.len(),
        free: sol.canonical.free_set.len(),
        norm,
        norm_inactive: sol.canonical.norm_inactive,
        x: sol.x,
        elapsed,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub method: &'static str,
    /// Seconds.
    pub mean_time: f64,
    pub std_time: f64,
}

fn mean_std(samples: &[f64]) -> (f64, f64) {
    let k = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / k;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, var.sqrt())
}

fn time<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

/// Times both simplex solvers on `reps` uniform instances per size. Every
/// instance is checked for agreement within `tol` before its timing counts.
pub fn bench(sizes: &[usize], reps: usize, seed: u64, tol: f64) -> Result<Vec<BenchRow>> {
    if reps == 0 {
        return Err(CliError::Validation("reps must be at least 1".into()));
    }
    if let Some(&bad) = sizes.iter().find(|&&n| n == 0) {
        return Err(CliError::Validation(format!("sizes must be positive, got {bad}")));
    }
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(2 * sizes.len());
    for n in sizes {
        let mut linear = Vec::with_capacity(reps);
        let mut sorted = Vec::with_capacity(reps);
        for rep in 0..reps {
            let p = uniform_instance(&mut rng, n, BENCH_BUDGET_FRACTION);
            let (a, t_lin) = time(|| project_ub_simplex_linear(&p));
            let (b, t_srt) = time(|| project_ub_simplex_sorted(&p));
            let diff = a.x.iter().zip(&b.x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            if diff > tol {
                return Err(CliError::Disagreement(format!(
                    "n = {n}, rep {rep}: max difference {diff:e} exceeds {tol:e}"
                )));
            }
            linear.push(t_lin);
            sorted.push(t_srt);
        }
        for (method, samples) in [("linear", &linear), ("sorted", &sorted)] {
            let (mean_time, std_time) = mean_std(samples);
            rows.push(BenchRow {
                n,
                method,
                mean_time,
                std_time,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticArgs {
    pub n: usize,
    pub m: usize,
    pub iters: usize,
    pub z_fraction: f64,
    pub seed: u64,
    /// Also run each problem for 100x the iterations to estimate `f(w*)`.
    pub reference: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticReport {
    pub l1: PGTrace,
    pub bounded: PGTrace,
    pub error_l1: f64,
    pub error_bounded: f64,
}

impl LogisticReport {
    /// `(iter, f_L1, f_UBL1)` rows starting at the initial point.
    pub fn rows(&self) -> Vec<(usize, f64, f64)> {
        let mut rows = vec![(0, self.l1.initial_objective, self.bounded.initial_objective)];
        for (k, (a, b)) in self.l1.objectives.iter().zip(&self.bounded.objectives).enumerate() {
            rows.push((k + 1, *a, *b));
        }
        rows
    }
}

fn distance(w: &[f64], target: &[f64]) -> f64 {
    w.iter().zip(target).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

/// Plain L1 and box-bounded L1 projected gradient on the same synthetic
/// data, with `z = z_fraction * n`.
pub fn demo_logistic(args: &LogisticArgs) -> Result<LogisticReport> {
    if args.n == 0 || args.m == 0 {
        return Err(CliError::Validation("n and m must be positive".into()));
    }
    if !(args.z_fraction >= 0.0 && args.z_fraction.is_finite()) {
        return Err(CliError::Validation(format!(
            "z-fraction must be a nonnegative number, got {}",
            args.z_fraction
        )));
    }
    let data = generate_synthetic(args.n, args.m, args.seed);
    let w_true = data.w_true.to_vec();
    let run = |bounds: Option<(f64, f64)>| -> Result<PGTrace> {
        let cfg = PGConfig {
            max_iters: args.iters,
            step: StepSize::InverseLipschitz,
            z: args.z_fraction * args.n as f64,
            bounds,
            seed: args.seed,
        };
        let mut trace = projected_gradient(&data, &cfg, box_l1_projector(&cfg))?;
        if args.reference {
            let long = PGConfig {
                max_iters: 100 * args.iters,
                ..cfg
            };
            let reference = projected_gradient(&data, &long, box_l1_projector(&long))?;
            trace.reference = Some(reference.final_objective());
        }
        Ok(trace)
    };
    let l1 = run(None)?;
    let bounded = run(Some((-WEIGHT_BOUND, WEIGHT_BOUND)))?;
    Ok(LogisticReport {
        error_l1: distance(&l1.w, &w_true),
        error_bounded: distance(&bounded.w, &w_true),
        l1,
        bounded,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationRow {
    pub unit: usize,
    pub v: f64,
    pub b: f64,
    pub x_l1: f64,
    pub x_bounded: f64,
}

/// Allocates `z = |v|_2 * ratio / 100` across units with and without the
/// prior as an upper bound; the prior is rescaled so `|b|_2 = |v|_2`.
pub fn demo_allocation(production: &[f64], prior: &[f64], ratio: f64) -> Result<Vec<AllocationRow>> {
    if production.len() != prior.len() {
        return Err(CliError::Validation(format!(
            "production has {} entries but prior has {}",
            production.len(),
            prior.len()
        )));
    }
    if production.is_empty() {
        return Err(CliError::Validation("no units given".into()));
    }
    if !(ratio > 0.0 && ratio <= 100.0) {
        return Err(CliError::Validation(format!("ratio must be in (0, 100], got {ratio}")));
    }
    for (name, col) in [("production", production), ("prior", prior)] {
        if let Some(i) = col.iter().position(|x| *x < 0.0 || !x.is_finite()) {
            return Err(CliError::Validation(format!(
                "{name} entry {} must be a finite nonnegative number, got {}",
                i + 1,
                col[i]
            )));
        }
    }
    let l2 = |x: &[f64]| x.iter().map(|t| t * t).sum::<f64>().sqrt();
    let v_norm = l2(production);
    let b_norm = l2(prior);
    let b: Vec<f64> = if b_norm > 0.0 {
        prior.iter().map(|p| p * v_norm / b_norm).collect()
    } else {
        vec![0.0; prior.len()]
    };
    let z = v_norm * ratio / 100.0;
    let plain = project_ub_simplex_linear(&ProjectionProblem::unbounded(production.to_vec(), z)?);
    let bounded = project_ub_simplex_linear(&ProjectionProblem::new(production.to_vec(), b.clone(), z)?);
    Ok((0..production.len())
        .map(|i| AllocationRow {
            unit: i + 1,
            v: production[i],
            b: b[i],
            x_l1: plain.x[i],
            x_bounded: bounded.x[i],
        })
        .collect())
}
