//! Box-constrained L1 projection against an enumeration oracle that works in
//! the original coordinates and never canonicalizes.

use boxproj_core::{project_box_l1, BoxL1Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy)]
enum State {
    Zero,
    AtLower,
    AtUpper,
    /// `x_i = v_i - theta * sign(v_i)`.
    Free,
}

/// Enumerates every coordinate state in `{0, a_i, b_i, free}` (plus the
/// unconstrained clamp) and keeps the feasible candidate of least cost.
fn enumerate(v: &[f64], a: &[f64], b: &[f64], z: f64) -> Vec<f64> {
    let n = v.len();
    let tol = 1e-12;
    let cost = |x: &[f64]| -> f64 { x.iter().zip(v).map(|(p, q)| (p - q) * (p - q)).sum() };
    let feasible = |x: &[f64]| -> bool {
        x.iter().map(|t| t.abs()).sum::<f64>() <= z + tol
            && (0..n).all(|i| a[i] - tol <= x[i] && x[i] <= b[i] + tol)
    };

    let clamp: Vec<f64> = (0..n).map(|i| v[i].clamp(a[i], b[i])).collect();
    let mut best = if feasible(&clamp) { Some((cost(&clamp), clamp)) } else { None };

    let states = [State::Zero, State::AtLower, State::AtUpper, State::Free];
    let mut x = vec![0.0; n];
    for code in 0..4usize.pow(n as u32) {
        let pick: Vec<State> = (0..n).map(|i| states[(code >> (2 * i)) & 3]).collect();
        let mut fixed_norm = 0.0;
        let mut free_abs = 0.0;
        let mut free = 0usize;
        let mut valid = true;
        for i in 0..n {
            match pick[i] {
                State::Zero => valid &= a[i] <= 0.0 && 0.0 <= b[i],
                State::AtLower => {
                    valid &= a[i].is_finite();
                    fixed_norm += a[i].abs();
                }
                State::AtUpper => {
                    valid &= b[i].is_finite();
                    fixed_norm += b[i].abs();
                }
                State::Free => {
                    free_abs += v[i].abs();
                    free += 1;
                }
            }
        }
        if !valid {
            continue;
        }
        let theta = if free > 0 {
            (fixed_norm + free_abs - z) / free as f64
        } else {
            0.0
        };
        if theta < 0.0 {
            continue;
        }
        for i in 0..n {
            x[i] = match pick[i] {
                State::Zero => 0.0,
                State::AtLower => a[i],
                State::AtUpper => b[i],
                State::Free => v[i] - theta * v[i].signum(),
            };
        }
        if pick.iter().zip(v).any(|(s, vi)| matches!(s, State::Free) && {
            let t = vi.abs() - theta;
            t < -tol
        }) {
            continue;
        }
        if feasible(&x) {
            let c = cost(&x);
            if best.as_ref().is_none_or(|(f, _)| c < *f) {
                best = Some((c, x.clone()));
            }
        }
    }
    best.expect("feasible problem has a candidate").1
}

fn random_case(rng: &mut ChaCha8Rng, n: usize) -> BoxL1Problem {
    let mut v = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..n {
        // Cycle through the three interval cases so each appears.
        let (lo, hi) = match (i + rng.random_range(0..3)) % 3 {
            0 => {
                let hi = -rng.random_range(0.05..1.0);
                (hi - rng.random_range(0.0..1.0), hi)
            }
            1 => {
                let lo = rng.random_range(0.05..1.0);
                (lo, lo + rng.random_range(0.0..1.0))
            }
            _ => (-rng.random_range(0.0..1.5), rng.random_range(0.0..1.5)),
        };
        v.push(rng.random_range(-2.0..2.0));
        a.push(lo);
        b.push(hi);
    }
    let min_norm: f64 = a
        .iter()
        .zip(&b)
        .map(|(&lo, &hi): (&f64, &f64)| if lo > 0.0 { lo } else if hi < 0.0 { -hi } else { 0.0 })
        .sum();
    let z = min_norm + rng.random_range(0.0..3.0);
    BoxL1Problem::new(v, a, b, z).unwrap()
}

#[test]
fn worked_examples() {
    let p = BoxL1Problem::symmetric(vec![-0.9, 0.5, 0.3], 0.4, 1.0).unwrap();
    let oracle = enumerate(p.v(), p.a(), p.b(), p.z());
    let x = project_box_l1(&p).unwrap();
    for i in 0..3 {
        assert!((x[i] - oracle[i]).abs() < 1e-12);
        assert!((x[i] - [-0.4, 0.4, 0.2][i]).abs() < 1e-12);
    }

    let p = BoxL1Problem::new(vec![1.0, -1.0], vec![0.0; 2], vec![2.0; 2], 1.0).unwrap();
    assert_eq!(enumerate(p.v(), p.a(), p.b(), p.z()), [1.0, 0.0]);
    assert_eq!(project_box_l1(&p).unwrap(), [1.0, 0.0]);
}

#[test]
fn matches_enumeration_on_mixed_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 1..=8 {
        let draws = if n <= 6 { 300 } else { 60 };
        for _ in 0..draws {
            let p = random_case(&mut rng, n);
            let oracle = enumerate(p.v(), p.a(), p.b(), p.z());
            let x = project_box_l1(&p).unwrap();
            let diff = x
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(diff <= 1e-9, "{p:?}\n{x:?}\n{oracle:?}");
        }
    }
}
