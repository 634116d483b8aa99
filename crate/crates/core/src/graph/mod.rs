//! Recursive construction of the two graph families, hierarchical vertex
//! addressing, and the exact shortest-path metric.

mod address;
mod export;
mod metric;

pub use address::{Anchor, BranchLabel, Family, VertexAddress};
pub use export::{export_graph, graph_from_json, parse_csv_metric, ExportFormat};
pub use metric::DistanceMatrix;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on the recursion level. Level 6 of the Laakso family already
/// has 37,326 vertices; the all-pairs matrix above that exceeds the memory
/// budget.
pub const MAX_LEVEL: u32 = 6;

/// Dense vertex identifier, assigned in deterministic construction order.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexInfo {
    /// Canonical address (unique per vertex).
    pub address: VertexAddress,
    /// Distance from the source pole.
    pub depth: u32,
}

/// A generated graph of one family at one recursion level. Immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct LevelGraph {
    family: Family,
    level: u32,
    vertices: Vec<VertexInfo>,
    edges: BTreeSet<(VertexId, VertexId)>,
    addr_index: HashMap<VertexAddress, VertexId>,
    anchors: BTreeMap<Anchor, VertexId>,
}

impl PartialEq for LevelGraph {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.level == other.level
            && self.vertices == other.vertices
            && self.edges == other.edges
            && self.anchors == other.anchors
    }
}

impl Eq for LevelGraph {}

impl LevelGraph {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, &VertexInfo)> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (VertexId(i as u32), v))
    }

    pub fn vertex(&self, id: VertexId) -> Option<&VertexInfo> {
        self.vertices.get(id.index())
    }

    /// Edges as sorted id pairs, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let key = if u <= v { (u, v) } else { (v, u) };
        self.edges.contains(&key)
    }

    /// Top-level anchors. Laakso graphs of level >= 1 expose A, T, L, R,
    /// B, U; diamond graphs expose S, P, Q, T; level 0 has the two poles
    /// only.
    pub fn anchors(&self) -> &BTreeMap<Anchor, VertexId> {
        &self.anchors
    }

    pub fn anchor(&self, role: Anchor) -> Option<VertexId> {
        self.anchors.get(&role).copied()
    }

    pub fn source(&self) -> VertexId {
        self.anchors[&self.family.source_anchor()]
    }

    pub fn sink(&self) -> VertexId {
        self.anchors[&self.family.sink_anchor()]
    }

    /// Resolve any well-formed address (alias or canonical) to its vertex.
    pub fn resolve_address(&self, addr: &VertexAddress) -> Result<VertexId> {
        addr.validate(self.family, self.level)?;
        let canonical = addr.canonicalize(self.family);
        self.addr_index.get(&canonical).copied().ok_or_else(|| {
            Error::Internal(format!(
                "canonical address {canonical} missing from index"
            ))
        })
    }

    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(u, v) in &self.edges {
            adj[u.index()].push(v);
            adj[v.index()].push(u);
        }
        adj
    }

    /// Exact integer shortest-path distances between all vertex pairs.
    pub fn shortest_path_metric(&self) -> Result<DistanceMatrix> {
        DistanceMatrix::from_graph(self)
    }
}

/// Closed-form vertex count: 2 + 4(6^n - 1)/5 for Laakso, 2 + 2(4^n - 1)/3
/// for diamond.
pub fn expected_vertex_count(family: Family, level: u32) -> u64 {
    match family {
        Family::Laakso => 2 + 4 * (6u64.pow(level) - 1) / 5,
        Family::Diamond => 2 + 2 * (4u64.pow(level) - 1) / 3,
    }
}

/// Closed-form edge count: 6^n for Laakso, 4^n for diamond.
pub fn expected_edge_count(family: Family, level: u32) -> u64 {
    match family {
        Family::Laakso => 6u64.pow(level),
        Family::Diamond => 4u64.pow(level),
    }
}

/// Build the level-`level` graph of `family`.
///
/// Construction is a recursive descent over nested copies in branch order,
/// assigning each vertex its id at the first encounter of its canonical
/// address, so two builds produce identical ids, addresses, and edge sets.
pub fn build_graph(family: Family, level: u32) -> Result<LevelGraph> {
    if level > MAX_LEVEL {
        return Err(Error::Capacity(format!(
            "level {level} exceeds the maximum supported level {MAX_LEVEL}"
        )));
    }

    let mut builder = Builder {
        family,
        level,
        vertices: Vec::new(),
        edges: BTreeSet::new(),
        addr_index: HashMap::new(),
    };
    let mut path = Vec::with_capacity(level as usize);
    builder.descend(&mut path, level);

    let Builder { vertices, edges, addr_index, .. } = builder;

    let mut anchors = BTreeMap::new();
    for &role in family.anchor_roles(level) {
        let id = addr_index[&VertexAddress::anchor(role)];
        anchors.insert(role, id);
    }

    let mut graph = LevelGraph {
        family,
        level,
        vertices,
        edges,
        addr_index,
        anchors,
    };

    if graph.vertex_count() as u64 != expected_vertex_count(family, level)
        || graph.edge_count() as u64 != expected_edge_count(family, level)
    {
        return Err(Error::Internal(format!(
            "construction invariant broken: got {} vertices / {} edges, expected {} / {}",
            graph.vertex_count(),
            graph.edge_count(),
            expected_vertex_count(family, level),
            expected_edge_count(family, level),
        )));
    }

    let depths = metric::single_source_distances(&graph, graph.source())?;
    for (info, depth) in graph.vertices.iter_mut().zip(depths) {
        info.depth = depth;
    }

    Ok(graph)
}

struct Builder {
    family: Family,
    level: u32,
    vertices: Vec<VertexInfo>,
    edges: BTreeSet<(VertexId, VertexId)>,
    addr_index: HashMap<VertexAddress, VertexId>,
}

impl Builder {
    fn descend(&mut self, path: &mut Vec<BranchLabel>, remaining: u32) {
        if remaining == 0 {
            let src = self.intern(path, self.family.source_anchor());
            let dst = self.intern(path, self.family.sink_anchor());
            let key = if src <= dst { (src, dst) } else { (dst, src) };
            self.edges.insert(key);
            return;
        }
        for &label in self.family.branch_labels() {
            path.push(label);
            self.descend(path, remaining - 1);
            path.pop();
        }
    }

    fn intern(&mut self, path: &[BranchLabel], terminal: Anchor) -> VertexId {
        let canonical =
            VertexAddress::new(path.to_vec(), terminal).canonicalize(self.family);
        if let Some(&id) = self.addr_index.get(&canonical) {
            return id;
        }
        let id = VertexId(self.vertices.len() as u32);
        self.addr_index.insert(canonical.clone(), id);
        self.vertices.push(VertexInfo { address: canonical, depth: 0 });
        debug_assert!(self.vertices.len() as u64 <= expected_vertex_count(self.family, self.level));
        id
    }
}
