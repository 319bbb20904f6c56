//! Every search strategy on Iris, then the top comparison insights of the best one.

use pgcompare::fixtures;
use pgcompare::graph::{compute_cardinalities, infer_graph_type};
use pgcompare::insight::{extract_insights, run_strategy, FuzzyCMedoids, SearchConfig, Strategy};
use pgcompare::validation::{validate_indicators, Mode, ValidationConfig};
use pgcompare::DenseMatrix;

fn main() -> pgcompare::Result<()> {
    let g = fixtures::iris();
    let s = compute_cardinalities(&g, &infer_graph_type(&g))?;
    let out = validate_indicators(&g, &s, "IRIS", &ValidationConfig::default(), Mode::Eager)?;
    let m = DenseMatrix::try_from(&out.matrix)?;

    let cfg = SearchConfig {
        k: 3,
        seed: 7,
        ..SearchConfig::default()
    };
    let clusterer = FuzzyCMedoids::default();
    let mut best = None;
    for strategy in Strategy::ALL {
        let r = run_strategy(&m, strategy, &cfg, &clusterer)?;
        println!(
            "{strategy:<4} score {:>10.4}  partition {}  evaluations {}",
            r.score, r.partition, r.evaluations
        );
        if best
            .as_ref()
            .is_none_or(|(_, b): &(Strategy, pgcompare::insight::SearchResult)| r.score > b.score)
        {
            best = Some((strategy, r));
        }
    }

    let (strategy, result) = best.expect("five strategies ran");
    let insights = extract_insights(&m, result, strategy, cfg.seed, 2);
    for (k, c) in insights.clusters.iter().enumerate() {
        println!(
            "\ncluster {k}: {} members, medoid {}",
            c.members.len(),
            m.row_ids()[c.medoid]
        );
        for i in &c.insights {
            println!(
                "  {} vs {}  significance {:.3}",
                m.row_ids()[i.a],
                m.row_ids()[i.b],
                i.significance
            );
            for &(col, a, b) in &i.values {
                println!("    {:<22} {a:.3}  {b:.3}", m.labels()[col]);
            }
        }
    }
    Ok(())
}
