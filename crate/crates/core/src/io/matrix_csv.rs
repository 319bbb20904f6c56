use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};

use super::check_header;
use crate::context::Indicator;
use crate::error::{Error, Result};
use crate::matrix::{ColumnMeta, IndicatorMatrix};
use crate::validation::{Outcome, Reason, TraceEntry, ValidationTrace};

pub const MATRIX_FORMAT: &str = "indicator-matrix";
pub const TRACE_FORMAT: &str = "validation-trace";

fn flags(bits: impl Iterator<Item = bool>) -> String {
    bits.map(|b| if b { "1" } else { "0" })
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Split a leading `#key=value;key=value` line from the rest of the input.
fn split_comment<R: Read>(reader: R) -> Result<(BTreeMap<String, String>, String)> {
    let mut r = BufReader::new(reader);
    let mut first = String::new();
    r.read_line(&mut first)?;
    let mut rest = String::new();
    let meta = match first.strip_prefix('#') {
        Some(c) => c
            .trim()
            .split(';')
            .filter(|kv| !kv.is_empty())
            .map(|kv| {
                let (k, v) = kv.split_once('=').unwrap_or((kv, ""));
                (k.trim().to_owned(), v.trim().to_owned())
            })
            .collect(),
        None => {
            rest.push_str(&first);
            BTreeMap::new()
        }
    };
    r.read_to_string(&mut rest)?;
    Ok((meta, rest))
}

fn check_meta(meta: &BTreeMap<String, String>, expected: &str) -> Result<()> {
    let version = match meta.get("version") {
        Some(v) => Some(
            v.parse()
                .map_err(|_| Error::Parse(format!("bad version `{v}`")))?,
        ),
        None => None,
    };
    check_header(meta.get("format").map(String::as_str), version, expected)
}

pub fn write_matrix_csv<W: Write>(m: &IndicatorMatrix, mut writer: W) -> Result<()> {
    writeln!(
        writer,
        "#format={MATRIX_FORMAT};version=1;scaled={};attenuated={}",
        flags(m.meta().iter().map(|c| c.scaled)),
        flags(m.meta().iter().map(|c| c.attenuated)),
    )?;
    let mut w = csv::Writer::from_writer(writer);
    let header: Vec<String> = std::iter::once("node_id".to_owned())
        .chain(m.indicators().iter().map(ToString::to_string))
        .collect();
    w.write_record(&header)?;
    for r in 0..m.n_rows() {
        let rec: Vec<String> = std::iter::once(m.row_ids()[r].clone())
            .chain(m.row(r).iter().map(|&v| fmt_cell(v)))
            .collect();
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix_csv<R: Read>(reader: R) -> Result<IndicatorMatrix> {
    let (meta, body) = split_comment(reader)?;
    check_meta(&meta, MATRIX_FORMAT)?;
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers()?.clone();
    if header.get(0) != Some("node_id") {
        return Err(Error::Parse("first matrix column must be `node_id`".into()));
    }
    let indicators: Vec<Indicator> = header
        .iter()
        .skip(1)
        .map(str::parse)
        .collect::<Result<_>>()?;
    let mut row_ids = Vec::new();
    let mut cells = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        row_ids.push(rec[0].to_owned());
        for cell in rec.iter().skip(1) {
            cells.push(if cell.is_empty() {
                None
            } else {
                Some(
                    cell.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad number `{cell}`")))?,
                )
            });
        }
    }
    let mut m = IndicatorMatrix::new(row_ids, indicators, cells)?;
    let parse_flags = |key: &str| -> Vec<bool> {
        meta.get(key)
            .map(|v| v.split(',').map(|b| b == "1").collect())
            .unwrap_or_default()
    };
    let (scaled, attenuated) = (parse_flags("scaled"), parse_flags("attenuated"));
    for c in 0..m.n_cols() {
        m.set_meta(
            c,
            ColumnMeta {
                scaled: scaled.get(c).copied().unwrap_or(false),
                attenuated: attenuated.get(c).copied().unwrap_or(false),
            },
        );
    }
    Ok(m)
}

fn reason_text(r: &Reason) -> String {
    match r {
        Reason::Redundant(other) => format!("REDUNDANT({other})"),
        r => r.to_string(),
    }
}

fn parse_reason(s: &str) -> Result<Reason> {
    Ok(match s {
        "VARIANCE" => Reason::Variance,
        "DENSITY" => Reason::Density,
        "DISCARDED_PROP" => Reason::DiscardedProp,
        _ => match s
            .strip_prefix("REDUNDANT(")
            .and_then(|x| x.strip_suffix(')'))
        {
            Some(other) => Reason::Redundant(other.to_owned()),
            None => return Err(Error::Parse(format!("unknown rejection reason `{s}`"))),
        },
    })
}

pub fn write_trace_csv<W: Write>(t: &ValidationTrace, mut writer: W) -> Result<()> {
    writeln!(writer, "#format={TRACE_FORMAT};version=1")?;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["indicator_label", "outcome", "reason", "detail"])?;
    for e in &t.entries {
        let (outcome, reason) = match &e.outcome {
            Outcome::Accepted => ("ACCEPTED", String::new()),
            Outcome::Rejected(r) => ("REJECTED", reason_text(r)),
        };
        w.write_record([
            e.indicator.to_string().as_str(),
            outcome,
            &reason,
            &e.detail,
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace_csv<R: Read>(reader: R) -> Result<ValidationTrace> {
    let (meta, body) = split_comment(reader)?;
    check_meta(&meta, TRACE_FORMAT)?;
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let mut entries = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let outcome = match &rec[1] {
            "ACCEPTED" => Outcome::Accepted,
            "REJECTED" => Outcome::Rejected(parse_reason(&rec[2])?),
            o => return Err(Error::Parse(format!("unknown outcome `{o}`"))),
        };
        entries.push(TraceEntry {
            indicator: rec[0].parse()?,
            outcome,
            detail: rec[3].to_owned(),
        });
    }
    Ok(ValidationTrace { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> IndicatorMatrix {
        let mut m = IndicatorMatrix::new(
            vec!["a".into(), "b,c".into()],
            vec![
                "|x|node|id".parse().unwrap(),
                "ROUTE_TO|price|edge|avg".parse().unwrap(),
            ],
            vec![Some(0.1), None, Some(1.0 / 3.0), Some(1e-300)],
        )
        .unwrap();
        m.set_meta(
            1,
            ColumnMeta {
                scaled: true,
                attenuated: false,
            },
        );
        m
    }

    #[test]
    fn matrix_round_trip_keeps_nulls_and_bits() {
        let m = sample();
        let mut buf = Vec::new();
        write_matrix_csv(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("#format=indicator-matrix;version=1;scaled=0,1;attenuated=0,0\n"));
        assert!(text.contains("a,0.1,\n"));
        assert_eq!(read_matrix_csv(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn matrix_version_is_checked() {
        let text = "#format=indicator-matrix;version=3\nnode_id,|x|node|id\na,1\n";
        assert!(matches!(
            read_matrix_csv(text.as_bytes()),
            Err(Error::VersionMismatch { found: 3, .. })
        ));
        let bare = "node_id,|x|node|id\na,1\n";
        assert_eq!(read_matrix_csv(bare.as_bytes()).unwrap().n_rows(), 1);
    }

    #[test]
    fn trace_round_trip() {
        let t = ValidationTrace {
            entries: vec![
                TraceEntry {
                    indicator: "|x|node|id".parse().unwrap(),
                    outcome: Outcome::Accepted,
                    detail: "3 distinct values".into(),
                },
                TraceEntry {
                    indicator: "|y|node|id".parse().unwrap(),
                    outcome: Outcome::Rejected(Reason::Redundant("|x|node|id".into())),
                    detail: "pearson 1.000000 with |x|node|id".into(),
                },
            ],
        };
        let mut buf = Vec::new();
        write_trace_csv(&t, &mut buf).unwrap();
        assert_eq!(read_trace_csv(buf.as_slice()).unwrap(), t);
    }
}
