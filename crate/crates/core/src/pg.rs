//! Projected-gradient descent for sparse, box-bounded logistic regression,
//! and the synthetic data it is demonstrated on.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::box_l1::{project_box_l1, BoxL1Problem};
use crate::error::{Error, Result};

/// Magnitude bound on the synthetic ground-truth weights.
pub const WEIGHT_BOUND: f64 = 0.5;
/// Scale of the Laplace draw for the synthetic ground-truth weights.
pub const WEIGHT_SCALE: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticDataset {
    /// `m x n` feature matrix, one sample per row.
    pub x: Array2<f64>,
    /// Labels in `{0, 1}`.
    pub y: Array1<f64>,
    pub w_true: Array1<f64>,
    /// Sorted indices of the labels that were flipped after sampling.
    pub flipped: Vec<usize>,
}

impl LogisticDataset {
    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    pub fn n_samples(&self) -> usize {
        self.x.nrows()
    }
}

/// Synthetic dataset with `n` features and `m` samples; 10% of the labels
/// are flipped.
pub fn generate_synthetic(n: usize, m: usize, seed: u64) -> LogisticDataset {
    generate_synthetic_with_flips(n, m, seed, m / 10)
}

/// Like [`generate_synthetic`] but flips exactly `flips` labels.
///
/// Ground-truth weights are Laplace(0, 0.2) draws rejected until within
/// `+-0.5`, with a uniformly random `floor(n / 2)` of them zeroed. Features
/// are standard normal and labels are Bernoulli with the logistic
/// probability of `w_true . x`.
pub fn generate_synthetic_with_flips(n: usize, m: usize, seed: u64, flips: usize) -> LogisticDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w_true = Array1::from_shape_fn(n, |_| loop {
        let w = sample_laplace(&mut rng, WEIGHT_SCALE);
        if w.abs() <= WEIGHT_BOUND {
            break w;
        }
    });
    for i in sample(&mut rng, n, n / 2) {
        w_true[i] = 0.0;
    }
    let x = Array2::from_shape_fn((m, n), |_| StandardNormal.sample(&mut rng));
    let margins = x.dot(&w_true);
    let mut y = margins.mapv(|t| if rng.random::<f64>() < sigmoid(t) { 1.0 } else { 0.0 });
    let mut flipped: Vec<usize> = sample(&mut rng, m, flips.min(m)).into_vec();
    flipped.sort_unstable();
    for &i in &flipped {
        y[i] = 1.0 - y[i];
    }
    LogisticDataset {
        x,
        y,
        w_true,
        flipped,
    }
}

/// Inverse-CDF Laplace sample.
fn sample_laplace<R: Rng>(rng: &mut R, scale: f64) -> f64 {
    let u: f64 = rng.random::<f64>() - 0.5;
    -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(t))` without overflow.
fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// Mean logistic log loss and its gradient `X'(sigma(Xw) - y) / m`.
pub fn logistic_objective_grad(
    w: ArrayView1<f64>,
    x: ArrayView2<f64>,
    y: ArrayView1<f64>,
) -> (f64, Array1<f64>) {
    let m = x.nrows() as f64;
    let margins = x.dot(&w);
    let mut loss = 0.0;
    let mut residual = Array1::zeros(margins.len());
    for (i, &t) in margins.iter().enumerate() {
        // -[y log s(t) + (1 - y) log(1 - s(t))] = softplus(t) - y t
        loss += softplus(t) - y[i] * t;
        residual[i] = sigmoid(t) - y[i];
    }
    let grad = x.t().dot(&residual) / m;
    (loss / m, grad)
}

/// Gradient step schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    Fixed(f64),
    /// `1 / L` with `L = |X|_op^2 / (4 m)` estimated by power iteration.
    InverseLipschitz,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PGConfig {
    pub max_iters: usize,
    pub step: StepSize,
    pub z: f64,
    /// Symmetric box `[lo, hi]` on every weight; `None` means unbounded.
    pub bounds: Option<(f64, f64)>,
    /// Seeds the power iteration start vector.
    pub seed: u64,
}

impl PGConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be at least 1".into()));
        }
        if let StepSize::Fixed(s) = self.step {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidInput(format!("step size must be positive, got {s}")));
            }
        }
        if self.z.is_nan() || self.z < 0.0 {
            return Err(Error::InvalidBudget(self.z));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PGTrace {
    /// `f(w_0)`.
    pub initial_objective: f64,
    /// `f(w_k)` after each projected step, `k = 1..=iterations`.
    pub objectives: Vec<f64>,
    pub w: Vec<f64>,
    /// `f(w*)` for a reference optimum, when one has been attached.
    pub reference: Option<f64>,
}

impl PGTrace {
    pub fn final_objective(&self) -> f64 {
        self.objectives.last().copied().unwrap_or(self.initial_objective)
    }

    /// `f(w_k) - f(w*)` per iteration, when a reference is attached.
    pub fn errors(&self) -> Option<Vec<f64>> {
        self.reference
            .map(|r| self.objectives.iter().map(|f| f - r).collect())
    }
}

/// Generic projected-gradient loop: `w_{k+1} = project(w_k - step * grad f(w_k))`
/// starting from `w_0`.
pub fn minimize_projected<F, P>(
    mut objective: F,
    w0: Vec<f64>,
    step: f64,
    max_iters: usize,
    mut project: P,
) -> Result<PGTrace>
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
    P: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let mut w = w0;
    let (mut f, mut grad) = objective(&w);
    if !f.is_finite() {
        return Err(Error::Diverged {
            iteration: 0,
            value: f,
        });
    }
    let initial_objective = f;
    let mut objectives = Vec::with_capacity(max_iters);
    let mut trial = vec![0.0; w.len()];
    for k in 1..=max_iters {
        for i in 0..w.len() {
            trial[i] = w[i] - step * grad[i];
        }
        w = project(&trial)?;
        (f, grad) = objective(&w);
        if !f.is_finite() {
            return Err(Error::Diverged {
                iteration: k,
                value: f,
            });
        }
        objectives.push(f);
    }
    Ok(PGTrace {
        initial_objective,
        objectives,
        w,
        reference: None,
    })
}

/// Largest eigenvalue of `X'X` by power iteration.
pub fn spectral_norm_sq(x: ArrayView2<f64>, iters: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u: Array1<f64> = Array1::from_shape_fn(x.ncols(), |_| StandardNormal.sample(&mut rng));
    let mut estimate = 0.0;
    for _ in 0..iters {
        let norm = u.dot(&u).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        u /= norm;
        let next = x.t().dot(&x.dot(&u));
        estimate = u.dot(&next);
        u = next;
    }
    estimate
}

/// Projector onto `{w : |w|_1 <= cfg.z, lo <= w <= hi}` for the box in
/// `cfg.bounds` (unbounded when `None`).
pub fn box_l1_projector(cfg: &PGConfig) -> impl FnMut(&[f64]) -> Result<Vec<f64>> {
    let z = cfg.z;
    let (lo, hi) = cfg.bounds.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    move |w: &[f64]| {
        let n = w.len();
        project_box_l1(&BoxL1Problem::new(w.to_vec(), vec![lo; n], vec![hi; n], z)?)
    }
}

/// Projected gradient on the mean logistic loss of `data`, with `w_0 = 0`.
pub fn projected_gradient<P>(data: &LogisticDataset, cfg: &PGConfig, project: P) -> Result<PGTrace>
where
    P: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    cfg.validate()?;
    let step = match cfg.step {
        StepSize::Fixed(s) => s,
        StepSize::InverseLipschitz => {
            let lipschitz = spectral_norm_sq(data.x.view(), 200, cfg.seed) / (4.0 * data.n_samples() as f64);
            if lipschitz > 0.0 {
                1.0 / lipschitz
            } else {
                1.0
            }
        }
    };
    let objective = |w: &[f64]| {
        let (f, g) = logistic_objective_grad(ArrayView1::from(w), data.x.view(), data.y.view());
        (f, g.to_vec())
    };
    minimize_projected(objective, vec![0.0; data.n_features()], step, cfg.max_iters, project)
}
