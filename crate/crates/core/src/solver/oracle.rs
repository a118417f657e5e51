//! Dense accelerated projected-gradient solver for small duals. Slow but
//! independent of SMO's bookkeeping, so the two cross-check each other.

use nalgebra::{DMatrix, DVector};

use super::{DualProblem, DualSolution};
use crate::error::{HolError, Result};

pub const ORACLE_MAX_VARIABLES: usize = 200;

const MAX_ITERATIONS: usize = 500_000;

/// Project `y` (one threshold's variables, signs `z`) onto
/// `{0 ≤ α ≤ λ, Σ z α = 0}`. The projection is `clip(y − θ z, 0, λ)` for
/// the unique `θ` making the sum vanish, found by bisection.
fn project_block(y: &[f64], z: &[f64], lambda: f64) -> Vec<f64> {
    let at = |theta: f64| -> (Vec<f64>, f64) {
        let a: Vec<f64> = y.iter().zip(z).map(|(&y, &z)| (y - theta * z).clamp(0.0, lambda)).collect();
        let eq = a.iter().zip(z).map(|(a, z)| a * z).sum();
        (a, eq)
    };
    let bound = y.iter().fold(0.0f64, |m, v| m.max(v.abs())) + lambda + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    // Σ z clip(y − θ z) is non-increasing in θ
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid).1 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * bound {
            break;
        }
    }
    let (mut a, eq) = at(0.5 * (lo + hi));
    // absorb the last rounding residue into an interior variable
    if eq != 0.0 {
        if let Some(u) = (0..a.len()).find(|&u| {
            let t = a[u] - z[u] * eq;
            a[u] > 0.0 && a[u] < lambda && (0.0..=lambda).contains(&t)
        }) {
            a[u] -= z[u] * eq;
        }
    }
    a
}

fn project(problem: &DualProblem, y: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(y.len());
    for k in 0..problem.n_thresholds() {
        let block = problem.block(k);
        if block.is_empty() {
            continue;
        }
        let ys: Vec<f64> = block.clone().map(|u| y[u]).collect();
        let zs: Vec<f64> = block.clone().map(|u| problem.vars()[u].z).collect();
        for (u, a) in block.zip(project_block(&ys, &zs, problem.lambda())) {
            out[u] = a;
        }
    }
    out
}

/// Minimize the dual by FISTA with adaptive restart, stopping when the
/// optimality gap (same measure as SMO) drops below `tol`.
pub fn solve_dense_oracle(problem: &DualProblem, tol: f64) -> Result<DualSolution> {
    let n = problem.n_vars();
    if n > ORACLE_MAX_VARIABLES {
        return Err(HolError::OracleTooLarge {
            limit: ORACLE_MAX_VARIABLES,
            actual: n,
        });
    }
    let vars = problem.vars();
    let g = problem.gram();
    let q = DMatrix::from_fn(n, n, |a, b| vars[a].z * vars[b].z * g[[vars[a].i, vars[b].i]]);
    let ones = DVector::from_element(n, 1.0);
    let objective = |a: &DVector<f64>| 0.5 * a.dot(&(&q * a)) - a.sum();
    let lipschitz = if n == 0 {
        1.0
    } else {
        q.clone().symmetric_eigenvalues().max().max(1e-12)
    };
    let step = 1.0 / lipschitz;

    let mut x = DVector::zeros(n);
    let mut y = x.clone();
    let mut t = 1.0f64;
    let mut fx = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_ITERATIONS {
        if iterations % 50 == 0 {
            let alpha: Vec<f64> = x.iter().copied().collect();
            if problem.max_kkt_violation(&alpha) < tol {
                converged = true;
                break;
            }
        }
        let grad = &q * &y - &ones;
        let next = project(problem, &(&y - step * grad));
        let f_next = objective(&next);
        if f_next > fx {
            // restart momentum from the last iterate
            t = 1.0;
            y = x.clone();
        } else {
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            y = &next + ((t - 1.0) / t_next) * (&next - &x);
            x = next;
            fx = f_next;
            t = t_next;
        }
        iterations += 1;
    }
    let alpha: Vec<f64> = x.iter().copied().collect();
    if !converged {
        converged = problem.max_kkt_violation(&alpha) < tol;
    }
    Ok(DualSolution {
        objective: problem.objective(&alpha),
        scores: problem.training_scores(&alpha),
        alpha,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::data::{synthetic, LabelInterval};
    use crate::kernel::{gram_symmetric, KernelSpec};
    use crate::loss::LossKind;
    use crate::solver::{solve_smo, SmoOptions};
    use ndarray::Array2;

    #[test]
    fn block_projection_is_feasible_and_closest() {
        let y = [0.9, -0.3, 2.5, 0.4];
        let z = [1.0, 1.0, -1.0, -1.0];
        let a = project_block(&y, &z, 1.0);
        let eq: f64 = a.iter().zip(&z).map(|(a, z)| a * z).sum();
        assert!(eq.abs() < 1e-12);
        assert!(a.iter().all(|&v| (0.0..=1.0).contains(&v)));
        // any other feasible point on a coarse grid is no closer
        let dist = |p: &[f64]| p.iter().zip(&y).map(|(p, y)| (p - y).powi(2)).sum::<f64>();
        let best = dist(&a);
        for i in 0..=10 {
            for j in 0..=10 {
                for k in 0..=10 {
                    let (a0, a1, a2) = (i as f64 / 10.0, j as f64 / 10.0, k as f64 / 10.0);
                    let a3 = a0 + a1 - a2;
                    if (0.0..=1.0).contains(&a3) {
                        assert!(dist(&[a0, a1, a2, a3]) >= best - 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_box_gives_zero() {
        let ds = synthetic::random_hybrid(8, 2, 3, 0.3, 1);
        let g = Arc::new(gram_symmetric(ds.features(), &KernelSpec::Linear).unwrap());
        let p = DualProblem::new(g, ds.labels(), 3, 0.0, LossKind::Mae).unwrap();
        let sol = solve_dense_oracle(&p, 1e-9).unwrap();
        assert!(sol.alpha.iter().all(|&a| a == 0.0));
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn guard() {
        let n = 101;
        let labels = vec![LabelInterval::precise(2); n];
        let p = DualProblem::new(Arc::new(Array2::eye(n)), &labels, 3, 1.0, LossKind::Mae).unwrap();
        assert!(matches!(solve_dense_oracle(&p, 1e-6), Err(HolError::OracleTooLarge { .. })));
    }

    #[test]
    fn agrees_with_smo() {
        for seed in 0..10 {
            let ds = synthetic::random_hybrid(10, 2, 3, 0.3, seed);
            let g = Arc::new(gram_symmetric(ds.features(), &KernelSpec::Rbf { gamma: 0.5 }).unwrap());
            let p = DualProblem::new(g, ds.labels(), 3, 1.0, LossKind::Mae).unwrap();
            let o = solve_dense_oracle(&p, 1e-6).unwrap();
            let s = solve_smo(&p, &SmoOptions { tol: 1e-7, max_passes: None });
            assert!(o.converged && s.converged, "seed {seed}: oracle {} ({} it), smo {} ({} it)", o.converged, o.iterations, s.converged, s.iterations);
            assert!(o.objective <= 0.0);
            assert!((o.objective - s.objective).abs() < 1e-6, "{} vs {}", o.objective, s.objective);
        }
    }
}
