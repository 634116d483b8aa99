//! Negative-type and hypermetric certificates: integer vertex weights
//! whose weighted distance sums lower-bound the L1 distortion of a metric.
//!
//! For weights k with Σk ∈ {0, 1}, any metric isometric to an L1 subset
//! satisfies Σ_{i<j} k_i k_j d(x_i, x_j) ≤ 0. Splitting the sum by sign,
//! s_plus ≤ c · s_minus for any embedding with distortion c, so
//! s_plus / s_minus is a lower bound on the achievable distortion.

mod search;

pub use search::{
    search_certificates, SearchOptions, SearchResult, SearchStrategy,
    DEFAULT_EXHAUSTIVE_LIMIT,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Family, LevelGraph, VertexAddress};
use crate::report::{Rat, RatioJson};

/// Integer vertex weights, dense over vertex ids (zeros allowed).
/// Valid assignments have Σk = 0 (negative type) or Σk = 1 (hypermetric).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAssignment {
    weights: Vec<i64>,
}

impl WeightAssignment {
    pub fn new(weights: Vec<i64>) -> Self {
        WeightAssignment { weights }
    }

    pub fn from_map(n: usize, map: &BTreeMap<u32, i64>) -> Result<Self> {
        let mut weights = vec![0i64; n];
        for (&id, &k) in map {
            let slot = weights
                .get_mut(id as usize)
                .ok_or_else(|| Error::Validation(format!("weight for unknown vertex {id}")))?;
            *slot = k;
        }
        Ok(WeightAssignment { weights })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.weights.iter().sum()
    }

    /// 0 for negative type, 1 for hypermetric; anything else is invalid.
    pub fn kind(&self) -> Result<u8> {
        match self.sum() {
            0 => {
                if self.weights.iter().all(|&k| k == 0) {
                    return Err(Error::Validation(
                        "negative-type weights must not be all zero".into(),
                    ));
                }
                Ok(0)
            }
            1 => Ok(1),
            s => Err(Error::Validation(format!(
                "weight sum must be 0 or 1, got {s}"
            ))),
        }
    }

    pub fn nonzero_map(&self) -> BTreeMap<u32, i64> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &k)| k != 0)
            .map(|(i, &k)| (i as u32, k))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct WeightsDoc {
    weights: BTreeMap<String, i64>,
}

pub fn weights_to_json_value(w: &WeightAssignment) -> serde_json::Value {
    let doc = WeightsDoc {
        weights: w
            .nonzero_map()
            .into_iter()
            .map(|(id, k)| (id.to_string(), k))
            .collect(),
    };
    serde_json::to_value(doc).expect("weights serialize")
}

pub fn weights_from_json(text: &str, n: usize) -> Result<WeightAssignment> {
    let doc: WeightsDoc = serde_json::from_str(text)
        .map_err(|e| Error::Validation(format!("malformed weights json: {e}")))?;
    let mut map = BTreeMap::new();
    for (id, k) in doc.weights {
        let id: u32 = id
            .parse()
            .map_err(|_| Error::Validation(format!("bad vertex id `{id}` in weights")))?;
        map.insert(id, k);
    }
    WeightAssignment::from_map(n, &map)
}

/// A verified certificate: the weighted distance sums split by product
/// sign, and their exact ratio when the negative side is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub weights: WeightAssignment,
    pub s_plus: i64,
    pub s_minus: i64,
    pub kind: u8,
}

impl Certificate {
    /// s_plus / s_minus; a value > 1 certifies that no embedding into an
    /// L1 space has distortion below it.
    pub fn bound(&self) -> Option<Rat> {
        (self.s_minus > 0).then(|| Rat::new(self.s_plus, self.s_minus))
    }

    /// s_plus > 0 with an empty negative side: the metric violates the
    /// inequality outright and embeds in no L1 space. Impossible for
    /// genuine metrics (two nonzero weights of opposite sign always exist
    /// alongside a positive distance).
    pub fn proves_non_embeddable(&self) -> bool {
        self.s_minus == 0 && self.s_plus > 0
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut v = weights_to_json_value(&self.weights);
        let obj = v.as_object_mut().expect("weights doc is an object");
        obj.insert("s_plus".into(), self.s_plus.into());
        obj.insert("s_minus".into(), self.s_minus.into());
        obj.insert("kind".into(), self.kind.into());
        match self.bound() {
            Some(b) => obj.insert(
                "bound".into(),
                serde_json::to_value(RatioJson::from(b)).unwrap(),
            ),
            None => obj.insert("bound".into(), serde_json::Value::Null),
        };
        if self.proves_non_embeddable() {
            obj.insert("non_embeddable".into(), true.into());
        }
        v
    }
}

/// Compute the exact sums s_plus = Σ_{k_i k_j > 0} k_i k_j d(i,j) and
/// s_minus = Σ_{k_i k_j < 0} |k_i k_j| d(i,j).
pub fn verify_certificate(d: &DistanceMatrix, w: &WeightAssignment) -> Result<Certificate> {
    if w.len() != d.len() {
        return Err(Error::Validation(format!(
            "{} weights for a {}-point metric",
            w.len(),
            d.len()
        )));
    }
    let kind = w.kind()?;
    let (s_plus, s_minus) = weighted_sums(d, w.weights());
    Ok(Certificate { weights: w.clone(), s_plus, s_minus, kind })
}

pub(crate) fn weighted_sums(d: &DistanceMatrix, weights: &[i64]) -> (i64, i64) {
    let mut s_plus = 0i64;
    let mut s_minus = 0i64;
    for i in 0..weights.len() {
        if weights[i] == 0 {
            continue;
        }
        for j in (i + 1)..weights.len() {
            let prod = weights[i] * weights[j];
            if prod > 0 {
                s_plus += prod * d.get(i, j) as i64;
            } else if prod < 0 {
                s_minus += -prod * d.get(i, j) as i64;
            }
        }
    }
    (s_plus, s_minus)
}

/// The weight system certifying the 9/8 lower bound on laakso level 2:
/// +1 on the L and R midpoints of the C and F copies, −1 on those of the
/// D and E copies, zero elsewhere.
pub fn reference_weights_l2(g: &LevelGraph) -> Result<WeightAssignment> {
    if g.family() != Family::Laakso || g.level() != 2 {
        return Err(Error::Validation(
            "these weights are defined on the level-2 laakso graph".into(),
        ));
    }
    branch_midpoint_weights(g, &[("C", 1), ("F", 1), ("D", -1), ("E", -1)], &["L", "R"])
}

/// The weight system certifying the 5/4 lower bound on diamond level 2:
/// +1 on both midpoints of one opposite pair of level-1 quadrilaterals,
/// −1 on the midpoints of the other pair.
pub fn reference_weights_d2(g: &LevelGraph) -> Result<WeightAssignment> {
    if g.family() != Family::Diamond || g.level() != 2 {
        return Err(Error::Validation(
            "these weights are defined on the level-2 diamond graph".into(),
        ));
    }
    branch_midpoint_weights(
        g,
        &[("P1a", 1), ("P2b", 1), ("P1b", -1), ("P2a", -1)],
        &["P", "Q"],
    )
}

fn branch_midpoint_weights(
    g: &LevelGraph,
    branches: &[(&str, i64)],
    midpoints: &[&str],
) -> Result<WeightAssignment> {
    let mut weights = vec![0i64; g.vertex_count()];
    for &(branch, sign) in branches {
        for midpoint in midpoints {
            let addr: VertexAddress = format!("{branch}.{midpoint}").parse()?;
            let id = g.resolve_address(&addr)?;
            weights[id.index()] = sign;
        }
    }
    Ok(WeightAssignment::new(weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn l2_reference_weights_certify_nine_eighths() {
        let g = build_graph(Family::Laakso, 2).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let w = reference_weights_l2(&g).unwrap();
        assert_eq!(w.weights().iter().filter(|&&k| k == 1).count(), 4);
        assert_eq!(w.weights().iter().filter(|&&k| k == -1).count(), 4);
        assert_eq!(w.sum(), 0);
        // The poles carry no weight.
        assert_eq!(w.weights()[g.source().index()], 0);
        assert_eq!(w.weights()[g.sink().index()], 0);
        let cl = g.resolve_address(&"C.L".parse().unwrap()).unwrap();
        assert_eq!(w.weights()[cl.index()], 1);

        let cert = verify_certificate(&d, &w).unwrap();
        assert_eq!(cert.s_plus, 72);
        assert_eq!(cert.s_minus, 64);
        assert_eq!(cert.bound(), Some(Rat::new(9, 8)));
        assert_eq!(cert.kind, 0);
    }

    #[test]
    fn d2_reference_weights_certify_five_fourths() {
        let g = build_graph(Family::Diamond, 2).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let w = reference_weights_d2(&g).unwrap();
        assert_eq!(w.weights().iter().filter(|&&k| k == 1).count(), 4);
        assert_eq!(w.weights().iter().filter(|&&k| k == -1).count(), 4);
        assert_eq!(w.sum(), 0);
        // Corner vertices (the level-1 shape) carry no weight.
        for (_, id) in g.anchors() {
            assert_eq!(w.weights()[id.index()], 0);
        }

        let cert = verify_certificate(&d, &w).unwrap();
        assert_eq!(cert.s_plus, 40);
        assert_eq!(cert.s_minus, 32);
        assert_eq!(cert.bound(), Some(Rat::new(5, 4)));
    }

    #[test]
    fn reference_weights_reject_wrong_graphs() {
        let l1 = build_graph(Family::Laakso, 1).unwrap();
        assert!(reference_weights_l2(&l1).is_err());
        let d2 = build_graph(Family::Diamond, 2).unwrap();
        assert!(reference_weights_l2(&d2).is_err());
        let l2 = build_graph(Family::Laakso, 2).unwrap();
        assert!(reference_weights_d2(&l2).is_err());
    }

    #[test]
    fn degenerate_hypermetric_certificate() {
        let g = build_graph(Family::Laakso, 1).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let mut weights = vec![0i64; 6];
        weights[0] = 1;
        let cert = verify_certificate(&d, &WeightAssignment::new(weights)).unwrap();
        assert_eq!((cert.s_plus, cert.s_minus), (0, 0));
        assert_eq!(cert.bound(), None);
        assert!(!cert.proves_non_embeddable());
        assert_eq!(cert.kind, 1);
    }

    #[test]
    fn invalid_sums_are_rejected() {
        let g = build_graph(Family::Laakso, 1).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let err = verify_certificate(&d, &WeightAssignment::new(vec![1, 1, 0, 0, 0, 0]))
            .unwrap_err();
        assert!(err.to_string().contains('2'));
        assert!(verify_certificate(&d, &WeightAssignment::new(vec![0; 6])).is_err());
        assert!(verify_certificate(&d, &WeightAssignment::new(vec![1, -1])).is_err());
    }

    #[test]
    fn negation_and_scaling_symmetry() {
        let g = build_graph(Family::Laakso, 2).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let w = reference_weights_l2(&g).unwrap();
        let cert = verify_certificate(&d, &w).unwrap();

        let negated = WeightAssignment::new(w.weights().iter().map(|k| -k).collect());
        let neg_cert = verify_certificate(&d, &negated).unwrap();
        assert_eq!((neg_cert.s_plus, neg_cert.s_minus), (cert.s_plus, cert.s_minus));

        let doubled = WeightAssignment::new(w.weights().iter().map(|k| 2 * k).collect());
        let dbl_cert = verify_certificate(&d, &doubled).unwrap();
        assert_eq!(dbl_cert.s_plus, 4 * cert.s_plus);
        assert_eq!(dbl_cert.s_minus, 4 * cert.s_minus);
        assert_eq!(dbl_cert.bound(), cert.bound());
    }

    #[test]
    fn weights_json_round_trip() {
        let g = build_graph(Family::Diamond, 2).unwrap();
        let w = reference_weights_d2(&g).unwrap();
        let json = serde_json::to_string(&weights_to_json_value(&w)).unwrap();
        let parsed = weights_from_json(&json, g.vertex_count()).unwrap();
        assert_eq!(parsed, w);
        assert!(weights_from_json(&json, 3).is_err());
    }
}
