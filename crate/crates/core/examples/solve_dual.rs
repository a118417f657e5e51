//! Assemble the coupled dual for a small hybrid-labeled problem, solve it by
//! SMO and by the dense projected-gradient oracle, and recover intercepts.

use hybrid_ordinal::data::synthetic;
use hybrid_ordinal::solver::{assemble_dual, recover_intercepts, solve_dense_oracle, solve_smo, SmoOptions};
use hybrid_ordinal::{KernelSpec, LossKind};

fn main() -> hybrid_ordinal::Result<()> {
    let ds = synthetic::random_hybrid(40, 3, 4, 0.4, 11);
    println!(
        "{} samples ({} interval-labeled), K = {}",
        ds.n_samples(),
        ds.interval_count(),
        ds.n_classes()
    );
    for kind in [LossKind::Mae, LossKind::ZeroOne] {
        let problem = assemble_dual(&ds, &KernelSpec::Rbf { gamma: 0.5 }, 1.0, kind)?;
        let smo = solve_smo(&problem, &SmoOptions { tol: 1e-6, max_passes: None });
        let oracle = solve_dense_oracle(&problem, 1e-6)?;
        let b = recover_intercepts(&problem, &smo)?;
        println!("{kind}: {} dual variables", problem.n_vars());
        println!(
            "  SMO    objective {:.8} after {} updates (converged {}), KKT gap {:.1e}",
            smo.objective,
            smo.iterations,
            smo.converged,
            problem.max_kkt_violation(&smo.alpha)
        );
        println!("  oracle objective {:.8}", oracle.objective);
        println!("  raw intercepts {:.4?}", b.raw);
        println!("  used           {:.4?}", b.values);
    }
    Ok(())
}
