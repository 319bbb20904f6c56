use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::check_header;
use crate::error::{Error, Result};
use crate::graph::GraphType;
use crate::insight::{InsightResult, Strategy};
use crate::matrix::DenseMatrix;

pub const INSIGHT_FORMAT: &str = "insight-report";
pub const SCHEMA_FORMAT: &str = "graph-type";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub compare: Vec<String>,
    pub group: Vec<String>,
    pub unused: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsightDoc {
    pub a: String,
    pub b: String,
    pub significance: f64,
    /// Indicator label to `[value(a), value(b)]`.
    pub values: BTreeMap<String, [f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterDoc {
    pub medoid: String,
    pub members: Vec<String>,
    pub insights: Vec<InsightDoc>,
}

/// Exported solution: the partition by indicator label, clusters by row id,
/// and the top-ranked insights of every cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsightReport {
    pub format: String,
    pub version: u32,
    pub strategy: Strategy,
    pub seed: u64,
    pub k: usize,
    pub score: f64,
    pub indicators: Vec<String>,
    pub partition: PartitionDoc,
    pub clusters: Vec<ClusterDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restart_scores: Vec<f64>,
}

impl InsightReport {
    pub fn new(m: &DenseMatrix, r: &InsightResult) -> InsightReport {
        let label = |i: usize| m.labels()[i].clone();
        let row = |j: usize| m.row_ids()[j].clone();
        let names = |idx: Vec<usize>| idx.into_iter().map(label).collect();
        InsightReport {
            format: INSIGHT_FORMAT.into(),
            version: 1,
            strategy: r.strategy,
            seed: r.seed,
            k: r.clustering.k,
            score: r.score,
            indicators: m.labels().to_vec(),
            partition: PartitionDoc {
                compare: names(r.partition.compare()),
                group: names(r.partition.group()),
                unused: names(r.partition.unused()),
            },
            clusters: r
                .clusters
                .iter()
                .map(|c| ClusterDoc {
                    medoid: row(c.medoid),
                    members: c.members.iter().map(|&j| row(j)).collect(),
                    insights: c
                        .insights
                        .iter()
                        .map(|i| InsightDoc {
                            a: row(i.a),
                            b: row(i.b),
                            significance: i.significance,
                            values: i
                                .values
                                .iter()
                                .map(|&(c, x, y)| (label(c), [x, y]))
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
            restart_scores: r.restart_scores.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SchemaDoc {
    format: String,
    version: u32,
    #[serde(flatten)]
    graph_type: GraphType,
}

/// Serialize `value` as pretty JSON followed by a newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut writer: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// Parse a JSON document carrying `format` and `version` fields.
pub fn read_versioned_json<T: DeserializeOwned, R: Read>(reader: R, format: &str) -> Result<T> {
    let v: serde_json::Value = serde_json::from_reader(reader)?;
    let found_format = v.get("format").and_then(|f| f.as_str());
    let version = match v.get("version") {
        None => None,
        Some(x) => Some(
            x.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| Error::Parse("version must be a small integer".into()))?,
        ),
    };
    check_header(found_format, version, format)?;
    Ok(serde_json::from_value(v)?)
}

pub fn write_insight_report<W: Write>(r: &InsightReport, writer: W) -> Result<()> {
    write_json(r, writer)
}

pub fn read_insight_report<R: Read>(reader: R) -> Result<InsightReport> {
    read_versioned_json(reader, INSIGHT_FORMAT)
}

pub fn write_graph_type<W: Write>(s: &GraphType, writer: W) -> Result<()> {
    write_json(
        &SchemaDoc {
            format: SCHEMA_FORMAT.into(),
            version: 1,
            graph_type: s.clone(),
        },
        writer,
    )
}

pub fn read_graph_type<R: Read>(reader: R) -> Result<GraphType> {
    let doc: SchemaDoc = read_versioned_json(reader, SCHEMA_FORMAT)?;
    Ok(doc.graph_type)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{compute_cardinalities, infer_graph_type};
    use crate::insight::{extract_insights, run_strategy, FuzzyCMedoids, SearchConfig};

    #[test]
    fn insight_report_round_trip_is_bit_exact() {
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|j| {
                vec![
                    (j % 3) as f64 / 3.0 + 0.1,
                    (j * 7 % 10) as f64 / 10.0 + 0.05,
                    0.3 + 0.01 * j as f64,
                ]
            })
            .collect();
        let m = DenseMatrix::from_rows(&rows);
        let cfg = SearchConfig {
            seed: 4,
            ..Default::default()
        };
        let res = run_strategy(&m, Strategy::Ls, &cfg, &FuzzyCMedoids::default()).unwrap();
        let report = InsightReport::new(&m, &extract_insights(&m, res, Strategy::Ls, 4, 3));
        let mut buf = Vec::new();
        write_insight_report(&report, &mut buf).unwrap();
        let back = read_insight_report(buf.as_slice()).unwrap();
        assert_eq!(back.score.to_bits(), report.score.to_bits());
        assert_eq!(back, report);
    }

    #[test]
    fn schema_round_trip() {
        let g = fixtures::mini_airports();
        let s = compute_cardinalities(&g, &infer_graph_type(&g)).unwrap();
        let mut buf = Vec::new();
        write_graph_type(&s, &mut buf).unwrap();
        assert_eq!(read_graph_type(buf.as_slice()).unwrap(), s);
    }
}
