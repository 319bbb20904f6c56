//! On-disk formats. Every file names its format and carries `version = 1`;
//! a missing version is read as 1.

mod graph_json;
mod matrix_csv;
mod report;
mod synthetic;
mod tabular;

pub use graph_json::{
    parse_graph_json, read_graph, read_graph_json, read_graph_jsonl, write_graph, write_graph_json,
    write_graph_jsonl, GRAPH_FORMAT,
};
pub use matrix_csv::{
    read_matrix_csv, read_trace_csv, write_matrix_csv, write_trace_csv, MATRIX_FORMAT, TRACE_FORMAT,
};
pub use report::{
    read_graph_type, read_insight_report, read_versioned_json, write_graph_type,
    write_insight_report, write_json, ClusterDoc, InsightDoc, InsightReport, PartitionDoc,
    INSIGHT_FORMAT, SCHEMA_FORMAT,
};
pub use synthetic::{
    generate_synthetic_graph, Distribution, EdgeSpec, NodeSpec, PropSpec, SyntheticSpec,
};
pub use tabular::load_tabular_as_graph;

use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

fn check_header(format: Option<&str>, version: Option<u32>, expected: &str) -> Result<()> {
    if let Some(f) = format {
        if f != expected {
            return Err(Error::Parse(format!(
                "expected a `{expected}` file, found `{f}`"
            )));
        }
    }
    match version {
        Some(v) if v != FORMAT_VERSION => Err(Error::VersionMismatch {
            format: expected.to_owned(),
            found: v,
            expected: FORMAT_VERSION,
        }),
        _ => Ok(()),
    }
}

/// Read a TOML or JSON document, chosen by file extension.
pub fn read_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        Ok(serde_json::from_str(&text)?)
    } else {
        Ok(toml::from_str(&text)?)
    }
}
