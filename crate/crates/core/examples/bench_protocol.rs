//! A short run of the benchmark protocol over the bundled dataset manifest.

use std::path::PathBuf;

use pgcompare::bench::{run_bench, BenchConfig, Manifest};
use pgcompare::insight::{FuzzyCMedoids, Strategy};

fn main() -> pgcompare::Result<()> {
    let manifest =
        Manifest::load(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/datasets.toml"))?;
    let datasets = manifest
        .datasets
        .iter()
        .filter(|d| d.name != "movies")
        .map(|d| Ok((d.name.clone(), d.matrix()?)))
        .collect::<pgcompare::Result<Vec<_>>>()?;

    let cfg = BenchConfig {
        strategies: vec![Strategy::Rd, Strategy::Lp, Strategy::Sls, Strategy::Ls],
        k_min: 2,
        k_max: 3,
        repeats: 3,
        ..BenchConfig::default()
    };
    let report = run_bench(&datasets, &cfg, &FuzzyCMedoids::default())?;
    println!("dataset   strategy K  score (normalized)  wall seconds");
    for c in &report.summary {
        println!(
            "{:<9} {:<8} {}  {:.3} ± {:.3}       {:.4} ± {:.4}",
            c.dataset,
            c.strategy,
            c.k,
            c.score.mean,
            c.score.sd,
            c.wall_seconds.mean,
            c.wall_seconds.sd
        );
    }
    Ok(())
}
