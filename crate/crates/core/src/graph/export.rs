use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    expected_edge_count, expected_vertex_count, metric, Anchor, DistanceMatrix, Family,
    LevelGraph, VertexAddress, VertexId, VertexInfo,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
    CsvMetric,
}

impl FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            "csv-metric" => Ok(ExportFormat::CsvMetric),
            other => Err(Error::Validation(format!(
                "unknown format `{other}` (expected json, dot, or csv-metric)"
            ))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    family: Family,
    level: u32,
    vertices: Vec<VertexDoc>,
    edges: Vec<(u32, u32)>,
    anchors: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    manifest: Option<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    id: u32,
    canonical_address: String,
    depth: u32,
}

/// Serialize a graph. JSON round-trips through [`graph_from_json`]; DOT and
/// csv-metric are one-way views.
pub fn export_graph(g: &LevelGraph, format: ExportFormat) -> Result<Vec<u8>> {
    match format {
        ExportFormat::Json => Ok(graph_to_json(g).into_bytes()),
        ExportFormat::Dot => Ok(graph_to_dot(g).into_bytes()),
        ExportFormat::CsvMetric => {
            let d = g.shortest_path_metric()?;
            Ok(metric_to_csv(&d).into_bytes())
        }
    }
}

pub fn graph_to_json(g: &LevelGraph) -> String {
    let doc = GraphDoc {
        family: g.family(),
        level: g.level(),
        vertices: g
            .vertices()
            .map(|(id, info)| VertexDoc {
                id: id.0,
                canonical_address: info.address.to_string(),
                depth: info.depth,
            })
            .collect(),
        edges: g.edges().map(|(u, v)| (u.0, v.0)).collect(),
        anchors: g
            .anchors()
            .iter()
            .map(|(role, id)| (role.to_string(), id.0))
            .collect(),
        manifest: None,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("graph doc serializes");
    s.push('\n');
    s
}

pub fn graph_to_dot(g: &LevelGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {}_{} {{", g.family(), g.level());
    for (id, info) in g.vertices() {
        let _ = writeln!(out, "  {} [label=\"{}\"];", id.0, info.address);
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", u.0, v.0);
    }
    out.push_str("}\n");
    out
}

/// Header row of vertex ids, then the symmetric integer distance rows.
pub fn metric_to_csv(d: &DistanceMatrix) -> String {
    let n = d.len();
    let mut out = String::new();
    let header: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let _ = writeln!(out, "{}", header.join(","));
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| d.get(i, j).to_string()).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Parse a graph document produced by [`graph_to_json`], revalidating the
/// structural invariants (counts, addresses, edge endpoints, depths).
pub fn graph_from_json(text: &str) -> Result<LevelGraph> {
    let doc: GraphDoc = serde_json::from_str(text)
        .map_err(|e| Error::Validation(format!("malformed graph json: {e}")))?;

    if doc.level > super::MAX_LEVEL {
        return Err(Error::Capacity(format!(
            "level {} exceeds the maximum supported level {}",
            doc.level,
            super::MAX_LEVEL
        )));
    }
    let n = doc.vertices.len();
    if n as u64 != expected_vertex_count(doc.family, doc.level) {
        return Err(Error::Validation(format!(
            "vertex count {} does not match family/level (expected {})",
            n,
            expected_vertex_count(doc.family, doc.level)
        )));
    }

    let mut vertices = Vec::with_capacity(n);
    let mut addr_index = HashMap::with_capacity(n);
    for (i, v) in doc.vertices.iter().enumerate() {
        if v.id as usize != i {
            return Err(Error::Validation(format!(
                "vertex ids must be dense and sorted; found {} at position {i}",
                v.id
            )));
        }
        let address: VertexAddress = v.canonical_address.parse()?;
        address.validate(doc.family, doc.level)?;
        if address.canonicalize(doc.family) != address {
            return Err(Error::Validation(format!(
                "address {address} is not canonical"
            )));
        }
        if addr_index.insert(address.clone(), VertexId(i as u32)).is_some() {
            return Err(Error::Validation(format!("duplicate address {address}")));
        }
        vertices.push(VertexInfo { address, depth: v.depth });
    }

    let mut edges = BTreeSet::new();
    for &(u, v) in &doc.edges {
        if u >= n as u32 || v >= n as u32 || u == v {
            return Err(Error::Validation(format!("invalid edge ({u},{v})")));
        }
        let key = if u <= v { (VertexId(u), VertexId(v)) } else { (VertexId(v), VertexId(u)) };
        if !edges.insert(key) {
            return Err(Error::Validation(format!("duplicate edge ({u},{v})")));
        }
    }
    if edges.len() as u64 != expected_edge_count(doc.family, doc.level) {
        return Err(Error::Validation(format!(
            "edge count {} does not match family/level (expected {})",
            edges.len(),
            expected_edge_count(doc.family, doc.level)
        )));
    }

    let mut anchors = BTreeMap::new();
    for (role, id) in &doc.anchors {
        let role: Anchor = role.parse()?;
        if *id >= n as u32 {
            return Err(Error::Validation(format!("anchor {role} points at unknown id {id}")));
        }
        anchors.insert(role, VertexId(*id));
    }
    for &role in doc.family.anchor_roles(doc.level) {
        let id = anchors
            .get(&role)
            .ok_or_else(|| Error::Validation(format!("missing anchor {role}")))?;
        if vertices[id.index()].address != VertexAddress::anchor(role) {
            return Err(Error::Validation(format!(
                "anchor {role} does not point at the {role} vertex"
            )));
        }
    }

    let g = LevelGraph { family: doc.family, level: doc.level, vertices, edges, addr_index, anchors };

    // Depths are redundant; recompute and compare rather than trust.
    let depths = metric::single_source_distances(&g, g.source())
        .map_err(|_| Error::Validation("graph is disconnected".into()))?;
    for ((_, info), depth) in g.vertices().zip(depths) {
        if info.depth != depth {
            return Err(Error::Validation(format!(
                "stored depth {} of {} disagrees with the graph metric ({depth})",
                info.depth, info.address
            )));
        }
    }

    Ok(g)
}

/// Parse a csv-metric file (header row of ids, symmetric integer rows).
/// Lines starting with `#` are ignored.
pub fn parse_csv_metric(text: &str) -> Result<DistanceMatrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Validation("empty metric file".into()))?;
    let ids: Vec<usize> = header
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Validation(format!("bad id `{t}` in metric header")))
        })
        .collect::<Result<_>>()?;
    let n = ids.len();
    if ids.iter().enumerate().any(|(i, &id)| id != i) {
        return Err(Error::Validation(
            "metric header ids must be 0..n in order".into(),
        ));
    }

    let mut d = Vec::with_capacity(n * n);
    for (i, line) in lines.enumerate() {
        if i >= n {
            return Err(Error::Validation("too many rows in metric file".into()));
        }
        let row: Vec<u32> = line
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Validation(format!("bad distance `{t}` in row {i}")))
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Validation(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        d.extend(row);
    }
    if d.len() != n * n {
        return Err(Error::Validation(format!(
            "metric file has {} rows, expected {n}",
            d.len() / n.max(1)
        )));
    }
    DistanceMatrix::from_rows(n, d)
}
