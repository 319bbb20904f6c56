//! Small datasets bundled with the crate.

use crate::graph::PropertyGraph;
use crate::io::{load_tabular_as_graph, parse_graph_json};

pub const MINI_AIRPORTS_JSON: &str = include_str!("../fixtures/mini_airports.json");
pub const IRIS_CSV: &str = include_str!("../fixtures/iris.csv");

/// Two countries, three cities and four airports with routes and passenger flows.
pub fn mini_airports() -> PropertyGraph {
    parse_graph_json(MINI_AIRPORTS_JSON).expect("bundled fixture is valid")
}

/// The 150 Iris measurements as edgeless `IRIS` nodes.
pub fn iris() -> PropertyGraph {
    load_tabular_as_graph(IRIS_CSV.as_bytes(), "IRIS").expect("bundled fixture is valid")
}
