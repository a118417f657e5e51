//! Cross-validated choice of loss, kernel and λ on concentric rings, where
//! only a radial kernel can separate the classes.

use hybrid_ordinal::data::synthetic;
use hybrid_ordinal::model::{default_grid, grid_search_cv, Preprocessing};

fn main() -> hybrid_ordinal::Result<()> {
    let ds = synthetic::radial_rings(30, 4);
    let grid = default_grid(ds.n_features());
    let result = grid_search_cv(&ds, &grid, 5, 0, &Preprocessing::default())?;
    let mut table = result.table.clone();
    table.sort_by(|a, b| a.mean_error.total_cmp(&b.mean_error));
    for row in table.iter().take(5) {
        println!("{:<50} error {:.3}", row.config.to_string(), row.mean_error);
    }
    println!("...\nbest: {} (grid index {})", result.best, result.best_index);
    Ok(())
}
