//! The recursive support-set embedding of Laakso graphs, realized exactly
//! (slack 0) in the unit-vector basis of the space of absolutely summable
//! sequences: each vertex maps to the sum of basis vectors over its
//! support, and the norm of a difference is the symmetric-difference
//! count.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Anchor, BranchLabel, Family, LevelGraph, VertexAddress, VertexId};
use crate::report::{scan_pairs, DistortionReport, Rat};

/// Sorted subset of {1, ..., 4^n} encoding one vertex: the indices whose
/// basis coefficient is 1. Its size equals the vertex's depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportVector {
    level: u32,
    indices: Vec<u32>,
}

impl SupportVector {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Size of the symmetric difference, which is exactly the realized norm
/// ‖f(a) − f(b)‖: disjoint blocks of unit vectors with coefficients ±1
/// contribute their full count.
pub fn hamming(u: &SupportVector, v: &SupportVector) -> Result<u64> {
    if u.level != v.level {
        return Err(Error::Validation(format!(
            "support vectors of levels {} and {} are not comparable",
            u.level, v.level
        )));
    }
    Ok(symmetric_difference_count(&u.indices, &v.indices))
}

fn symmetric_difference_count(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j) = (0, 0);
    let mut count = 0u64;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                count += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                count += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    count + (a.len() - i) as u64 + (b.len() - j) as u64
}

/// Per-vertex supports for a whole graph. `epsilon` is the exact slack of
/// the realizing vector system; the unit-vector realization achieves 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportEmbedding {
    level: u32,
    epsilon: Rat,
    vectors: Vec<SupportVector>,
}

impl SupportEmbedding {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn epsilon(&self) -> Rat {
        self.epsilon
    }

    pub fn vector(&self, id: VertexId) -> &SupportVector {
        &self.vectors[id.index()]
    }

    pub fn vectors(&self) -> &[SupportVector] {
        &self.vectors
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc<'a> {
            level: u32,
            epsilon: String,
            vectors: BTreeMap<String, &'a [u32]>,
        }
        let doc = Doc {
            level: self.level,
            epsilon: self.epsilon.to_string(),
            vectors: self
                .vectors
                .iter()
                .enumerate()
                .map(|(i, v)| (i.to_string(), v.indices()))
                .collect(),
        };
        serde_json::to_value(doc).expect("embedding serializes")
    }
}

/// Build the support embedding of a Laakso graph.
pub fn support_embed(g: &LevelGraph) -> Result<SupportEmbedding> {
    if g.family() != Family::Laakso {
        return Err(Error::Validation(
            "the support embedding is defined for the laakso family only".into(),
        ));
    }
    let level = g.level();
    let vectors = g
        .vertices()
        .map(|(_, info)| SupportVector {
            level,
            indices: support_for_address(level, &info.address),
        })
        .collect();
    Ok(SupportEmbedding { level, epsilon: Rat::from_integer(0), vectors })
}

/// Support of the vertex at `addr` in the level-`level` graph. Accepts
/// aliases; glued vertices get the same set along every route, which the
/// tests check explicitly.
pub(crate) fn support_for_address(level: u32, addr: &VertexAddress) -> Vec<u32> {
    if addr.path.is_empty() {
        return anchor_support(level, addr.terminal);
    }
    let inner = support_for_address(
        level - 1,
        &VertexAddress::new(addr.path[1..].to_vec(), addr.terminal),
    );
    let q = 4u32.pow(level - 1);
    let shifted = |offset: u32| inner.iter().map(move |&i| i + offset);
    let mut out: Vec<u32> = Vec::new();
    match addr.path[0] {
        BranchLabel::Y => out.extend(inner.iter().copied()),
        BranchLabel::C => {
            out.extend(1..=q);
            out.extend(shifted(q));
        }
        BranchLabel::D => {
            out.extend(1..=q);
            out.extend(shifted(2 * q));
        }
        BranchLabel::E => {
            out.extend(1..=2 * q);
            out.extend(shifted(2 * q));
        }
        BranchLabel::F => {
            out.extend(1..=q);
            out.extend(shifted(q));
            out.extend(2 * q + 1..=3 * q);
        }
        BranchLabel::Z => {
            out.extend(1..=3 * q);
            out.extend(shifted(3 * q));
        }
        other => unreachable!("laakso address cannot contain {other}"),
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    out
}

fn anchor_support(level: u32, terminal: Anchor) -> Vec<u32> {
    if level == 0 {
        return match terminal {
            Anchor::A => Vec::new(),
            Anchor::U => vec![1],
            other => unreachable!("level-0 copy has no {other} anchor"),
        };
    }
    let q = 4u32.pow(level - 1);
    match terminal {
        Anchor::A => Vec::new(),
        Anchor::T => (1..=q).collect(),
        Anchor::L => (1..=2 * q).collect(),
        Anchor::R => (1..=q).chain(2 * q + 1..=3 * q).collect(),
        Anchor::B => (1..=3 * q).collect(),
        Anchor::U => (1..=4 * q).collect(),
        other => unreachable!("laakso copy has no {other} anchor"),
    }
}

/// Scan all pairs and report the extremes of ‖f(a)−f(b)‖ / d(a,b),
/// asserting the two-sided bound 1/2 · d ≤ ‖f(a)−f(b)‖ ≤ d.
///
/// Small levels compare sorted index lists directly; from level 4 up the
/// scan runs on fixed-width bitsets (4^n bits per vertex).
pub fn verify_support_distortion(
    g: &LevelGraph,
    emb: &SupportEmbedding,
    threads: usize,
) -> Result<DistortionReport> {
    if emb.level != g.level() || emb.vectors.len() != g.vertex_count() {
        return Err(Error::Validation(
            "embedding was not built over this graph".into(),
        ));
    }
    let d = g.shortest_path_metric()?;
    let n = g.vertex_count();

    let bits: Option<Vec<Vec<u64>>> = if emb.level >= 4 {
        let words = (4usize.pow(emb.level) + 63) / 64;
        Some(
            emb.vectors
                .iter()
                .map(|v| {
                    let mut w = vec![0u64; words];
                    for &i in v.indices() {
                        let bit = (i - 1) as usize;
                        w[bit / 64] |= 1 << (bit % 64);
                    }
                    w
                })
                .collect(),
        )
    } else {
        None
    };

    let ratio = |i: usize, j: usize| -> Rat {
        let h = match &bits {
            Some(bits) => bits[i]
                .iter()
                .zip(&bits[j])
                .map(|(a, b)| (a ^ b).count_ones() as u64)
                .sum(),
            None => symmetric_difference_count(
                &emb.vectors[i].indices,
                &emb.vectors[j].indices,
            ),
        };
        Rat::new(h as i64, d.get(i, j) as i64)
    };

    let report = scan_pairs(n, threads, ratio)
        .ok_or_else(|| Error::Validation("graph has fewer than two vertices".into()))?;

    let half = Rat::new(1, 2);
    let one = Rat::from_integer(1);
    if report.min_ratio < half {
        let (a, b) = report.witness_min;
        return Err(Error::Counterexample(format!(
            "support distortion lower bound violated at pair ({a},{b}): ratio {}",
            report.min_ratio
        )));
    }
    if report.max_ratio > one {
        let (a, b) = report.witness_max;
        return Err(Error::Counterexample(format!(
            "support Lipschitz bound violated at pair ({a},{b}): ratio {}",
            report.max_ratio
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn laakso(level: u32) -> LevelGraph {
        build_graph(Family::Laakso, level).unwrap()
    }

    #[test]
    fn base_case_supports() {
        let g = laakso(1);
        let emb = support_embed(&g).unwrap();
        let expect = [
            (Anchor::A, vec![]),
            (Anchor::T, vec![1]),
            (Anchor::L, vec![1, 2]),
            (Anchor::R, vec![1, 3]),
            (Anchor::B, vec![1, 2, 3]),
            (Anchor::U, vec![1, 2, 3, 4]),
        ];
        for (role, indices) in expect {
            let id = g.anchor(role).unwrap();
            assert_eq!(emb.vector(id).indices(), indices.as_slice(), "anchor {role}");
        }
    }

    #[test]
    fn r_anchor_is_block1_union_block3() {
        // Level 2: blocks have size 4, and |supp(R)| = d(A,R) = 8.
        let g = laakso(2);
        let emb = support_embed(&g).unwrap();
        let r = g.anchor(Anchor::R).unwrap();
        let expected: Vec<u32> = (1..=4).chain(9..=12).collect();
        assert_eq!(emb.vector(r).indices(), expected.as_slice());
        // Both defining routes give the same set.
        assert_eq!(support_for_address(2, &"D.U".parse().unwrap()), expected);
        assert_eq!(support_for_address(2, &"F.A".parse().unwrap()), expected);

        // Level 3: blocks have size 16.
        let expected3: Vec<u32> = (1..=16).chain(33..=48).collect();
        assert_eq!(support_for_address(3, &"R".parse().unwrap()), expected3);
        assert_eq!(support_for_address(3, &"D.U".parse().unwrap()), expected3);
        assert_eq!(support_for_address(3, &"F.A".parse().unwrap()), expected3);
    }

    #[test]
    fn source_is_empty_sink_is_full() {
        for level in 1..=3 {
            let g = laakso(level);
            let emb = support_embed(&g).unwrap();
            assert!(emb.vector(g.source()).is_empty());
            assert_eq!(emb.vector(g.sink()).len(), 4usize.pow(level));
        }
    }

    #[test]
    fn all_aliases_agree() {
        for level in 1..=3 {
            let g = laakso(level);
            let emb = support_embed(&g).unwrap();
            for (id, info) in g.vertices() {
                for alias in crate::embed::test_util::alias_addresses(level, &info.address) {
                    assert_eq!(
                        support_for_address(level, &alias),
                        emb.vector(id).indices(),
                        "alias {alias} of vertex {id} disagrees"
                    );
                }
            }
        }
    }

    #[test]
    fn depth_law_holds() {
        for level in 0..=4 {
            let g = laakso(level);
            let emb = support_embed(&g).unwrap();
            for (id, info) in g.vertices() {
                assert_eq!(emb.vector(id).len() as u32, info.depth);
            }
        }
    }

    #[test]
    fn adjacent_vertices_differ_in_one_index() {
        for level in 1..=3 {
            let g = laakso(level);
            let emb = support_embed(&g).unwrap();
            for (u, v) in g.edges() {
                assert_eq!(hamming(emb.vector(u), emb.vector(v)).unwrap(), 1);
            }
        }
    }

    #[test]
    fn nesting_along_geodesics_through_the_source() {
        // a above b (on a source-to-b geodesic) forces supp(a) ⊆ supp(b)
        // and hamming = d(a,b).
        for level in 1..=3 {
            let g = laakso(level);
            let emb = support_embed(&g).unwrap();
            let d = g.shortest_path_metric().unwrap();
            let mut nested_pairs = 0;
            for (a, ia) in g.vertices() {
                for (b, ib) in g.vertices() {
                    if ia.depth + d.distance(a, b) == ib.depth {
                        let sa = emb.vector(a).indices();
                        let sb = emb.vector(b).indices();
                        assert!(sa.iter().all(|i| sb.binary_search(i).is_ok()));
                        assert_eq!(
                            hamming(emb.vector(a), emb.vector(b)).unwrap(),
                            d.distance(a, b) as u64
                        );
                        nested_pairs += 1;
                    }
                }
            }
            assert!(nested_pairs > 0);
        }
    }

    #[test]
    fn hamming_examples() {
        let g = laakso(1);
        let emb = support_embed(&g).unwrap();
        let l = emb.vector(g.anchor(Anchor::L).unwrap());
        let r = emb.vector(g.anchor(Anchor::R).unwrap());
        assert_eq!(hamming(l, r).unwrap(), 2);
        assert_eq!(hamming(l, l).unwrap(), 0);
        let a = emb.vector(g.source());
        let u = emb.vector(g.sink());
        assert_eq!(hamming(a, u).unwrap(), 4);
    }

    #[test]
    fn hamming_rejects_level_mismatch() {
        let e1 = support_embed(&laakso(1)).unwrap();
        let e2 = support_embed(&laakso(2)).unwrap();
        assert!(hamming(e1.vector(VertexId(0)), e2.vector(VertexId(0))).is_err());
    }

    #[test]
    fn diamond_input_is_rejected() {
        let g = build_graph(Family::Diamond, 1).unwrap();
        assert!(matches!(support_embed(&g), Err(Error::Validation(_))));
    }

    #[test]
    fn base_case_is_an_isometry() {
        let g = laakso(1);
        let emb = support_embed(&g).unwrap();
        let report = verify_support_distortion(&g, &emb, 1).unwrap();
        assert_eq!(report.min_ratio, Rat::from_integer(1));
        assert_eq!(report.max_ratio, Rat::from_integer(1));
    }

    #[test]
    fn level_2_bounds() {
        let g = laakso(2);
        let emb = support_embed(&g).unwrap();
        let report = verify_support_distortion(&g, &emb, 1).unwrap();
        assert!(report.min_ratio >= Rat::new(1, 2));
        assert_eq!(report.max_ratio, Rat::from_integer(1));
    }

    #[test]
    fn list_and_bitset_scans_agree() {
        let g = laakso(2);
        let emb = support_embed(&g).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let words = (16 + 63) / 64;
        let bits: Vec<Vec<u64>> = emb
            .vectors()
            .iter()
            .map(|v| {
                let mut w = vec![0u64; words];
                for &i in v.indices() {
                    w[((i - 1) / 64) as usize] |= 1 << ((i - 1) % 64);
                }
                w
            })
            .collect();
        for i in 0..g.vertex_count() {
            for j in (i + 1)..g.vertex_count() {
                let via_bits: u64 = bits[i]
                    .iter()
                    .zip(&bits[j])
                    .map(|(a, b)| (a ^ b).count_ones() as u64)
                    .sum();
                assert_eq!(
                    via_bits,
                    hamming(&emb.vectors()[i], &emb.vectors()[j]).unwrap()
                );
                let _ = d.get(i, j);
            }
        }
    }
}
