use boxproj_core::pg::{
    box_l1_projector, generate_synthetic, generate_synthetic_with_flips, logistic_objective_grad,
    projected_gradient, PGConfig, StepSize,
};
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Max relative error between the analytic gradient and central differences.
fn fd_error(w: &Array1<f64>, x: &Array2<f64>, y: &Array1<f64>) -> f64 {
    let h = 1e-5;
    let (_, grad) = logistic_objective_grad(w.view(), x.view(), y.view());
    let mut worst: f64 = 0.0;
    for j in 0..w.len() {
        let mut plus = w.clone();
        let mut minus = w.clone();
        plus[j] += h;
        minus[j] -= h;
        let (fp, _) = logistic_objective_grad(plus.view(), x.view(), y.view());
        let (fm, _) = logistic_objective_grad(minus.view(), x.view(), y.view());
        let fd = (fp - fm) / (2.0 * h);
        let scale = grad[j].abs().max(fd.abs()).max(1e-3);
        worst = worst.max((grad[j] - fd).abs() / scale);
    }
    worst
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let n = rng.random_range(1..8);
        let m = rng.random_range(1..30);
        let x = Array2::from_shape_fn((m, n), |_| rng.random_range(-2.0..2.0));
        let y = Array1::from_shape_fn(m, |_| if rng.random_bool(0.5) { 1.0 } else { 0.0 });
        let w = Array1::from_shape_fn(n, |_| rng.random_range(-1.0..1.0));
        let err = fd_error(&w, &x, &y);
        assert!(err <= 1e-6, "relative error {err}");
    }
}

fn config(z: f64, bounds: Option<(f64, f64)>, iters: usize) -> PGConfig {
    PGConfig {
        max_iters: iters,
        step: StepSize::InverseLipschitz,
        z,
        bounds,
        seed: 1,
    }
}

#[test]
fn iterates_stay_feasible_and_objective_descends() {
    let data = generate_synthetic(30, 300, 4);
    let cfg = config(2.0, Some((-0.5, 0.5)), 150);
    let mut project = box_l1_projector(&cfg);
    let mut iterates = Vec::new();
    let trace = projected_gradient(&data, &cfg, |w| {
        let p = project(w)?;
        iterates.push(p.clone());
        Ok(p)
    })
    .unwrap();
    assert_eq!(trace.objectives.len(), 150);
    for w in &iterates {
        let norm: f64 = w.iter().map(|t| t.abs()).sum();
        assert!(norm <= cfg.z + 1e-9);
        assert!(w.iter().all(|t| (-0.5..=0.5).contains(t)));
    }
    let mut prev = trace.initial_objective;
    for &f in &trace.objectives {
        assert!(f <= prev + 1e-12, "{f} > {prev}");
        prev = f;
    }
}

#[test]
fn unbounded_l1_leaves_the_box_on_some_instance() {
    let mut escaped = false;
    for seed in 0..10 {
        let data = generate_synthetic(20, 200, seed);
        let cfg = config(3.0, None, 200);
        let trace = projected_gradient(&data, &cfg, box_l1_projector(&cfg)).unwrap();
        if trace.w.iter().any(|w| w.abs() > 0.5) {
            escaped = true;
            break;
        }
    }
    assert!(escaped, "plain L1 never left the +-0.5 box");
}

#[test]
fn noiseless_run_approaches_long_run_reference() {
    let data = generate_synthetic_with_flips(10, 400, 12, 0);
    let budget: f64 = data.w_true.iter().map(|w| w.abs()).sum::<f64>() + 0.5;
    let short = config(budget, Some((-0.5, 0.5)), 300);
    let long = config(budget, Some((-0.5, 0.5)), 30_000);
    let trace = projected_gradient(&data, &short, box_l1_projector(&short)).unwrap();
    let reference = projected_gradient(&data, &long, box_l1_projector(&long)).unwrap();
    let gap = trace.final_objective() - reference.final_objective();
    assert!(gap.abs() <= 1e-3, "gap {gap}");
}

#[test]
fn zero_budget_is_constant() {
    let data = generate_synthetic(8, 50, 0);
    let cfg = config(0.0, Some((-0.5, 0.5)), 10);
    let trace = projected_gradient(&data, &cfg, box_l1_projector(&cfg)).unwrap();
    assert!(trace.w.iter().all(|w| *w == 0.0));
    assert!(trace
        .objectives
        .iter()
        .all(|f| (f - std::f64::consts::LN_2).abs() < 1e-15));
}
