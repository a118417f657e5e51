//! Sequential minimal optimization over the coupled dual.
//!
//! Each step picks the threshold with the largest optimality gap, then a
//! pair of its variables by the second-order rule of Fan, Chen and Lin
//! (2005). Updating a pair inside one threshold keeps that threshold's
//! equality constraint exact.

use super::{membership, DualProblem, DualSolution};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoOptions {
    /// Stop once the largest optimality gap falls below this.
    pub tol: f64,
    /// Cap on pair updates; `None` means ten per variable.
    pub max_passes: Option<usize>,
}

impl Default for SmoOptions {
    fn default() -> Self {
        SmoOptions {
            tol: 1e-3,
            max_passes: None,
        }
    }
}

pub fn solve_smo(problem: &DualProblem, options: &SmoOptions) -> DualSolution {
    let n_vars = problem.n_vars();
    let cap = options.max_passes.unwrap_or(10 * n_vars).max(1);
    let lambda = problem.lambda();
    let gram = problem.gram();
    let vars = problem.vars();
    let mut alpha = vec![0.0; n_vars];
    // h(x_i) for the current alpha
    let mut s = vec![0.0; problem.n_samples()];
    let mut iterations = 0;
    let mut converged = false;

    loop {
        // threshold with the largest gap, and its first-order choice
        let mut best: Option<(usize, usize, f64)> = None; // (k, u, gap)
        let mut worst_gap: f64 = 0.0;
        for k in 0..problem.n_thresholds() {
            let mut up = f64::NEG_INFINITY;
            let mut up_at = usize::MAX;
            let mut low = f64::INFINITY;
            for u in problem.block(k) {
                let v = vars[u];
                let f = v.z - s[v.i];
                let (in_up, in_low) = membership(v.z, alpha[u], lambda);
                if in_up && f > up {
                    up = f;
                    up_at = u;
                }
                if in_low && f < low {
                    low = f;
                }
            }
            let gap = up - low;
            if gap > worst_gap {
                worst_gap = gap;
                best = Some((k, up_at, gap));
            }
        }
        if worst_gap < options.tol {
            converged = true;
            break;
        }
        if iterations >= cap {
            break;
        }
        let (k, u, _) = best.expect("positive gap has a witness");
        let vu = vars[u];
        let f_u = vu.z - s[vu.i];
        let kuu = gram[[vu.i, vu.i]];

        // second-order choice of the partner
        let mut partner = usize::MAX;
        let mut best_gain = f64::INFINITY;
        for w in problem.block(k) {
            let vw = vars[w];
            let (_, in_low) = membership(vw.z, alpha[w], lambda);
            if !in_low {
                continue;
            }
            let diff = f_u - (vw.z - s[vw.i]);
            if diff <= 0.0 {
                continue;
            }
            let mut quad = kuu + gram[[vw.i, vw.i]] - 2.0 * gram[[vu.i, vw.i]];
            if quad <= 0.0 {
                quad = TAU;
            }
            let gain = -diff * diff / quad;
            if gain < best_gain {
                best_gain = gain;
                partner = w;
            }
        }
        let w = partner;
        let vw = vars[w];

        // analytic two-variable update with clipping to the box
        let g_u = vu.z * s[vu.i] - 1.0;
        let g_w = vw.z * s[vw.i] - 1.0;
        let (old_u, old_w) = (alpha[u], alpha[w]);
        let kww = gram[[vw.i, vw.i]];
        let kuw = gram[[vu.i, vw.i]];
        let mut quad = kuu + kww - 2.0 * kuw;
        if quad <= 0.0 {
            quad = TAU;
        }
        let (mut au, mut aw) = (old_u, old_w);
        if vu.z != vw.z {
            let delta = (-g_u - g_w) / quad;
            let diff = au - aw;
            au += delta;
            aw += delta;
            if diff > 0.0 {
                if aw < 0.0 {
                    aw = 0.0;
                    au = diff;
                }
            } else if au < 0.0 {
                au = 0.0;
                aw = -diff;
            }
            if diff > 0.0 {
                if au > lambda {
                    au = lambda;
                    aw = lambda - diff;
                }
            } else if aw > lambda {
                aw = lambda;
                au = lambda + diff;
            }
        } else {
            let delta = (g_u - g_w) / quad;
            let sum = au + aw;
            au -= delta;
            aw += delta;
            if sum > lambda {
                if au > lambda {
                    au = lambda;
                    aw = sum - lambda;
                }
            } else if aw < 0.0 {
                aw = 0.0;
                au = sum;
            }
            if sum > lambda {
                if aw > lambda {
                    aw = lambda;
                    au = sum - lambda;
                }
            } else if au < 0.0 {
                au = 0.0;
                aw = sum;
            }
        }
        alpha[u] = au;
        alpha[w] = aw;

        let du = (au - old_u) * vu.z;
        let dw = (aw - old_w) * vw.z;
        if vu.i == vw.i {
            let d = du + dw;
            if d != 0.0 {
                for (sj, g) in s.iter_mut().zip(gram.row(vu.i)) {
                    *sj += d * g;
                }
            }
        } else {
            let (ru, rw) = (gram.row(vu.i), gram.row(vw.i));
            for ((sj, gu), gw) in s.iter_mut().zip(ru).zip(rw) {
                *sj += du * gu + dw * gw;
            }
        }
        iterations += 1;
    }

    if !converged {
        log::debug!("SMO stopped after {iterations} pair updates without reaching tol {}", options.tol);
    }
    let scores = problem.training_scores(&alpha);
    DualSolution {
        objective: problem.objective(&alpha),
        alpha,
        iterations,
        converged,
        scores,
    }
}
