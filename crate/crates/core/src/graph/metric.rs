use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{LevelGraph, VertexId};

/// Exact integer shortest-path distances between all vertex pairs, stored
/// as a dense symmetric matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    /// All-pairs breadth-first search over unit-length edges.
    pub fn from_graph(g: &LevelGraph) -> Result<Self> {
        let n = g.vertex_count();
        let adj = g.adjacency();
        let mut d = vec![0u32; n * n];
        for source in 0..n {
            let row = bfs(&adj, source)?;
            d[source * n..(source + 1) * n].copy_from_slice(&row);
        }
        Ok(DistanceMatrix { n, d })
    }

    /// Build from a prevalidated dense row-major table.
    pub fn from_rows(n: usize, d: Vec<u32>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::Validation(format!(
                "distance table has {} entries, expected {}",
                d.len(),
                n * n
            )));
        }
        let m = DistanceMatrix { n, d };
        for i in 0..n {
            if m.get(i, i) != 0 {
                return Err(Error::Validation(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::Validation(format!("asymmetric entry at ({i},{j})")));
                }
                if m.get(i, j) == 0 {
                    return Err(Error::Validation(format!(
                        "zero distance between distinct points {i} and {j}"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> u32 {
        self.get(u.index(), v.index())
    }

    pub fn max_distance(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// Check the triangle inequality over all ordered triples. Quadratic
    /// memory is the binding cap long before this cubic scan is.
    pub fn verify_triangle_inequality(&self) -> Result<()> {
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    if self.get(i, j) > self.get(i, k) + self.get(k, j) {
                        return Err(Error::Validation(format!(
                            "triangle inequality violated: d({i},{j}) > d({i},{k}) + d({k},{j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Distances from one source; errors if the graph is disconnected.
pub(crate) fn single_source_distances(g: &LevelGraph, source: VertexId) -> Result<Vec<u32>> {
    bfs(&g.adjacency(), source.index())
}

fn bfs(adj: &[Vec<VertexId>], source: usize) -> Result<Vec<u32>> {
    const UNSEEN: u32 = u32::MAX;
    let mut dist = vec![UNSEEN; adj.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v.index()] == UNSEEN {
                dist[v.index()] = dist[u] + 1;
                queue.push_back(v.index());
            }
        }
    }
    if dist.iter().any(|&x| x == UNSEEN) {
        return Err(Error::Internal("generated graph is disconnected".into()));
    }
    Ok(dist)
}
