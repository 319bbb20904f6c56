use std::io::Read;

use crate::error::Result;
use crate::graph::{PropertyGraph, Props, Value};

fn cell_value(cell: &str) -> Value {
    let t = cell.trim();
    if t.is_empty() {
        return Value::Null;
    }
    if let Ok(x) = t.parse::<f64>() {
        return Value::Number(x);
    }
    match t {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        _ => Value::Text(t.to_owned()),
    }
}

/// One node per CSV row, labelled `label`, with the columns as properties.
/// Node ids are `<label>:<row index>`.
pub fn load_tabular_as_graph<R: Read>(reader: R, label: &str) -> Result<PropertyGraph> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?.clone();
    let mut b = PropertyGraph::builder();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let props: Props = header
            .iter()
            .zip(rec.iter())
            .map(|(k, v)| (k.to_owned(), cell_value(v)))
            .collect();
        b.add_node(&format!("{label}:{i}"), label, props)?;
    }
    b.build()
}
