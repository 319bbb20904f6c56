//! Context of the airport node type, candidate indicators and their values.

use pgcompare::context::{
    build_indicator_matrix, compute_context, derive_candidate_indicators,
    enumerate_indicator_paths, Indicator, OpDict,
};
use pgcompare::fixtures;
use pgcompare::graph::{compute_cardinalities, infer_graph_type};

fn main() -> pgcompare::Result<()> {
    let g = fixtures::mini_airports();
    let s = compute_cardinalities(&g, &infer_graph_type(&g))?;
    let ctx = compute_context(&s, "AIRPORT")?;
    println!("context node types: {:?}", ctx.node_types);
    println!("context edge types: {:?}", ctx.edge_types);

    let paths = enumerate_indicator_paths(&s, &ctx, 2);
    let candidates = derive_candidate_indicators(&s, &paths, &OpDict::new());
    println!(
        "{} paths, {} candidate indicators",
        paths.len(),
        candidates.len()
    );

    let picked: Vec<Indicator> = [
        "ROUTE_TO|IATA|node|count",
        "ROUTE_TO|price|edge|sum",
        "BELONG|population|node|id",
        "BELONG.IS_IN|GDP|node|id",
    ]
    .iter()
    .map(|l| l.parse())
    .collect::<pgcompare::Result<_>>()?;
    let m = build_indicator_matrix(&g, &s, "AIRPORT", &picked)?;

    print!("{:<6}", "");
    for i in m.indicators() {
        print!("{:>28}", i.to_string());
    }
    println!();
    for r in 0..m.n_rows() {
        print!("{:<6}", m.row_ids()[r]);
        for v in m.row(r) {
            match v {
                Some(x) => print!("{x:>28}"),
                None => print!("{:>28}", "null"),
            }
        }
        println!();
    }
    Ok(())
}
