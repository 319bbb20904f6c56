use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::check_header;
use crate::error::{Error, Result};
use crate::graph::{PropertyGraph, Props};

pub const GRAPH_FORMAT: &str = "property-graph";

#[derive(Debug, Serialize, Deserialize)]
struct NodeDoc {
    id: String,
    label: String,
    #[serde(default)]
    props: Props,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDoc {
    id: String,
    label: String,
    src: String,
    tgt: String,
    #[serde(default)]
    props: Props,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDoc {
    #[serde(default)]
    format: Option<String>,
    #[serde(default)]
    version: Option<u32>,
    #[serde(default)]
    nodes: Vec<NodeDoc>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Line {
    Header {
        #[serde(default)]
        format: Option<String>,
        #[serde(default)]
        version: Option<u32>,
    },
    Node(NodeDoc),
    Edge(EdgeDoc),
}

fn assemble(nodes: Vec<NodeDoc>, edges: Vec<EdgeDoc>) -> Result<PropertyGraph> {
    let mut b = PropertyGraph::builder();
    for n in nodes {
        b.add_node(&n.id, &n.label, n.props)?;
    }
    for e in edges {
        b.add_edge(&e.id, &e.label, &e.src, &e.tgt, e.props)?;
    }
    b.build()
}

fn docs(g: &PropertyGraph) -> (Vec<NodeDoc>, Vec<EdgeDoc>) {
    let nodes = g
        .nodes()
        .map(|(_, n)| NodeDoc {
            id: n.id.clone(),
            label: n.label.clone(),
            props: n.props.clone(),
        })
        .collect();
    let edges = g
        .edges()
        .map(|(_, e)| EdgeDoc {
            id: e.id.clone(),
            label: e.label.clone(),
            src: g.node(e.src).id.clone(),
            tgt: g.node(e.tgt).id.clone(),
            props: e.props.clone(),
        })
        .collect();
    (nodes, edges)
}

pub fn read_graph_json<R: Read>(reader: R) -> Result<PropertyGraph> {
    let doc: GraphDoc = serde_json::from_reader(reader)?;
    check_header(doc.format.as_deref(), doc.version, GRAPH_FORMAT)?;
    assemble(doc.nodes, doc.edges)
}

pub fn parse_graph_json(text: &str) -> Result<PropertyGraph> {
    read_graph_json(text.as_bytes())
}

pub fn write_graph_json<W: Write>(g: &PropertyGraph, mut writer: W) -> Result<()> {
    let (nodes, edges) = docs(g);
    let doc = GraphDoc {
        format: Some(GRAPH_FORMAT.into()),
        version: Some(1),
        nodes,
        edges,
    };
    serde_json::to_writer_pretty(&mut writer, &doc)?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// One JSON object per line, tagged by `kind`; blank lines are skipped.
pub fn read_graph_jsonl<R: Read>(reader: R) -> Result<PropertyGraph> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Line = serde_json::from_str(&line)
            .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        match parsed {
            Line::Header { format, version } => {
                check_header(format.as_deref(), version, GRAPH_FORMAT)?
            }
            Line::Node(n) => nodes.push(n),
            Line::Edge(e) => edges.push(e),
        }
    }
    assemble(nodes, edges)
}

pub fn write_graph_jsonl<W: Write>(g: &PropertyGraph, mut writer: W) -> Result<()> {
    let (nodes, edges) = docs(g);
    let header = Line::Header {
        format: Some(GRAPH_FORMAT.into()),
        version: Some(1),
    };
    let lines = std::iter::once(header)
        .chain(nodes.into_iter().map(Line::Node))
        .chain(edges.into_iter().map(Line::Edge));
    for line in lines {
        serde_json::to_writer(&mut writer, &line)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

fn is_jsonl(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "jsonl")
}

/// Read a graph file; `.jsonl` files use the line format.
pub fn read_graph(path: &Path) -> Result<PropertyGraph> {
    let f = BufReader::new(File::open(path)?);
    if is_jsonl(path) {
        read_graph_jsonl(f)
    } else {
        read_graph_json(f)
    }
}

pub fn write_graph(g: &PropertyGraph, path: &Path) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    if is_jsonl(path) {
        write_graph_jsonl(g, &mut f)?;
    } else {
        write_graph_json(g, &mut f)?;
    }
    f.flush()?;
    Ok(())
}
