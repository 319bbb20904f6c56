//! Lazy and eager indicator validation on a synthetic airport graph.

use std::path::PathBuf;

use pgcompare::graph::{compute_cardinalities, infer_graph_type};
use pgcompare::io::{generate_synthetic_graph, read_config, SyntheticSpec};
use pgcompare::validation::{validate_indicators, Mode, Outcome, ValidationConfig};

fn main() -> pgcompare::Result<()> {
    let spec_path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/airports_synth.toml");
    let spec: SyntheticSpec = read_config(&spec_path)?;
    let g = generate_synthetic_graph(&spec, 1)?;
    let s = compute_cardinalities(&g, &infer_graph_type(&g))?;

    let cfg = ValidationConfig {
        max_len: 2,
        discard_props: ["identifier".to_owned(), "IATA".to_owned()].into(),
        ..ValidationConfig::default()
    };
    let lazy = validate_indicators(&g, &s, "AIRPORT", &cfg, Mode::Lazy)?;
    let eager = validate_indicators(&g, &s, "AIRPORT", &cfg, Mode::Eager)?;
    assert_eq!(lazy.matrix, eager.matrix);

    for e in &lazy.trace.entries {
        let outcome = match &e.outcome {
            Outcome::Accepted => "ACCEPTED".to_owned(),
            Outcome::Rejected(r) => r.to_string(),
        };
        println!("{:<40} {outcome:<12} {}", e.indicator.to_string(), e.detail);
    }
    println!(
        "\n{} candidates; lazy evaluated {}, eager {}; {} rows x {} indicators kept",
        lazy.stats.candidates,
        lazy.stats.evaluated.len(),
        eager.stats.evaluated.len(),
        lazy.matrix.n_rows(),
        lazy.matrix.n_cols()
    );
    Ok(())
}
