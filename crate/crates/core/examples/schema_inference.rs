//! Infer the graph type of a small airport graph and its relationship cardinalities.

use pgcompare::fixtures;
use pgcompare::graph::{check_instance, compute_cardinalities, infer_graph_type};

fn main() -> pgcompare::Result<()> {
    let g = fixtures::mini_airports();
    let s = compute_cardinalities(&g, &infer_graph_type(&g))?;
    assert!(check_instance(&g, &s).is_valid());

    for (name, t) in &s.node_types {
        let props: Vec<&str> = t.base.props.iter().map(String::as_str).collect();
        println!("{name:<8} {}", props.join(", "));
    }
    println!();
    for (name, t) in &s.edge_types {
        println!(
            "{name:<8} {} -> {}  {}:{}",
            t.src, t.tgt, t.card_src, t.card_tgt
        );
    }
    Ok(())
}
