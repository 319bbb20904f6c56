//! Laplacian scores, coefficients of variation and the resulting 3-partition on Iris.

use pgcompare::fixtures;
use pgcompare::graph::{compute_cardinalities, infer_graph_type};
use pgcompare::insight::{
    coefficient_of_variation, laplacian_heuristic, laplacian_score, LaplacianConfig,
};
use pgcompare::validation::{validate_indicators, Mode, ValidationConfig};
use pgcompare::DenseMatrix;

fn main() -> pgcompare::Result<()> {
    let g = fixtures::iris();
    let s = compute_cardinalities(&g, &infer_graph_type(&g))?;
    let out = validate_indicators(&g, &s, "IRIS", &ValidationConfig::default(), Mode::Eager)?;
    let m = DenseMatrix::try_from(&out.matrix)?;

    let cfg = LaplacianConfig::default();
    for c in 0..m.n_cols() {
        println!(
            "{:<20} LS {:.4}  CV {:.4}",
            m.labels()[c],
            laplacian_score(&m, c, cfg.k_nn)?,
            coefficient_of_variation(&m.column(c))?
        );
    }
    let p = laplacian_heuristic(&m, &cfg)?;
    println!("\npartition {p}  (S compare, D group, U unused)");
    Ok(())
}
