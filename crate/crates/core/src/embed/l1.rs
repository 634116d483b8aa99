//! The recursive L1 embedding of Laakso graphs: each vertex a maps to
//! 4^n · 1_{H(a)} for a finite union H(a) of rational intervals, with
//! measure(H(a)) = 4^{-n} d(source, a).
//!
//! The recursion keeps one copy map untouched (θ) and pushes the other
//! through [`IntervalSet::tile`] (φ), which makes the two copies exactly
//! stochastically independent — the fact the cross-branch distance bound
//! rests on.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::embed::IntervalSet;
use crate::error::{Error, Result};
use crate::graph::{Anchor, BranchLabel, Family, LevelGraph, VertexAddress, VertexId};
use crate::report::{scan_pairs, DistortionReport, Rat};

/// Default construction cap. Resolution grows as g(n) = 4·g(n−1)², so
/// level 3 needs denominator 4^7 and level 4 already 4^15 with interval
/// counts in the millions.
pub const DEFAULT_MAX_L1_LEVEL: u32 = 3;

/// Cap with `allow_large`; beyond this the u64 cell arithmetic would
/// overflow.
pub const ABSOLUTE_MAX_L1_LEVEL: u32 = 4;

/// Common denominator of all interval sets at one level.
pub fn resolution(level: u32) -> u64 {
    match level {
        0 => 1,
        n => {
            let g = resolution(n - 1);
            4 * g * g
        }
    }
}

/// Per-vertex interval sets, all expressed over the common denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalEmbedding {
    level: u32,
    resolution_den: u64,
    sets: Vec<IntervalSet>,
}

impl IntervalEmbedding {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn resolution_den(&self) -> u64 {
        self.resolution_den
    }

    pub fn set(&self, id: VertexId) -> &IntervalSet {
        &self.sets[id.index()]
    }

    pub fn sets(&self) -> &[IntervalSet] {
        &self.sets
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc<'a> {
            level: u32,
            resolution_den: u64,
            sets: BTreeMap<String, &'a [(u64, u64)]>,
        }
        let doc = Doc {
            level: self.level,
            resolution_den: self.resolution_den,
            sets: self
                .sets
                .iter()
                .enumerate()
                .map(|(i, s)| (i.to_string(), s.cells()))
                .collect(),
        };
        serde_json::to_value(doc).expect("embedding serializes")
    }
}

/// Build the interval embedding of a Laakso graph.
pub fn l1_embed(g: &LevelGraph, allow_large: bool) -> Result<IntervalEmbedding> {
    if g.family() != Family::Laakso {
        return Err(Error::Validation(
            "the L1 interval embedding is defined for the laakso family only".into(),
        ));
    }
    let level = g.level();
    let cap = if allow_large { ABSOLUTE_MAX_L1_LEVEL } else { DEFAULT_MAX_L1_LEVEL };
    if level > cap {
        return Err(Error::Capacity(format!(
            "L1 embedding at level {level} exceeds the cap {cap}{}",
            if allow_large { "" } else { " (pass --allow-large for level 4)" }
        )));
    }
    let den = resolution(level);
    let sets = g
        .vertices()
        .map(|(_, info)| {
            interval_for_address(level, &info.address)
                .rescale(den)
                .expect("per-level denominators divide the resolution")
        })
        .collect();
    Ok(IntervalEmbedding { level, resolution_den: den, sets })
}

/// Interval set of the vertex at `addr`. Accepts aliases; gluing is
/// checked by the tests through alias agreement.
pub(crate) fn interval_for_address(level: u32, addr: &VertexAddress) -> IntervalSet {
    if addr.path.is_empty() {
        return anchor_interval(level, addr.terminal);
    }
    let inner = interval_for_address(
        level - 1,
        &VertexAddress::new(addr.path[1..].to_vec(), addr.terminal),
    );
    let den = resolution(level);
    let quarter = den / 4;

    // θ keeps the inner set as is; φ tiles it first. Both end up scaled
    // into one quarter-width slot of [0,1).
    let theta = || {
        inner
            .scale_quarter()
            .rescale(den)
            .expect("theta slot denominator divides the resolution")
    };
    let phi = || {
        inner
            .tile()
            .scale_quarter()
            .rescale(den)
            .expect("phi slot denominator divides the resolution")
    };
    let prefix = |k: u64| IntervalSet::from_cells(den, vec![(0, k * quarter)]).unwrap();

    match addr.path[0] {
        BranchLabel::Y => theta(),
        BranchLabel::C => prefix(1).union(&theta().shift(quarter).unwrap()),
        BranchLabel::D => prefix(1).union(&phi().shift(2 * quarter).unwrap()),
        BranchLabel::E => prefix(2).union(&theta().shift(2 * quarter).unwrap()),
        BranchLabel::F => prefix(1)
            .union(&phi().shift(quarter).unwrap())
            .union(&IntervalSet::from_cells(den, vec![(2 * quarter, 3 * quarter)]).unwrap()),
        BranchLabel::Z => prefix(3).union(&theta().shift(3 * quarter).unwrap()),
        other => unreachable!("laakso address cannot contain {other}"),
    }
}

fn anchor_interval(level: u32, terminal: Anchor) -> IntervalSet {
    let den = resolution(level);
    if level == 0 {
        return match terminal {
            Anchor::A => IntervalSet::empty(1),
            Anchor::U => IntervalSet::full(1),
            other => unreachable!("level-0 copy has no {other} anchor"),
        };
    }
    let q = den / 4;
    let cells = match terminal {
        Anchor::A => vec![],
        Anchor::T => vec![(0, q)],
        Anchor::L => vec![(0, 2 * q)],
        Anchor::R => vec![(0, q), (2 * q, 3 * q)],
        Anchor::B => vec![(0, 3 * q)],
        Anchor::U => vec![(0, 4 * q)],
        other => unreachable!("laakso copy has no {other} anchor"),
    };
    IntervalSet::from_cells(den, cells).unwrap()
}

/// Scan all pairs and report the extremes of
/// 4^n · measure(H(a) Δ H(b)) / d(a,b), asserting 3/4 · d ≤ ‖·‖₁ ≤ d.
pub fn verify_l1_distortion(
    g: &LevelGraph,
    emb: &IntervalEmbedding,
    threads: usize,
) -> Result<DistortionReport> {
    if emb.level != g.level() || emb.sets.len() != g.vertex_count() {
        return Err(Error::Validation(
            "embedding was not built over this graph".into(),
        ));
    }
    let d = g.shortest_path_metric()?;
    let scale = Rat::from_integer(4i64.pow(emb.level));

    let ratio = |i: usize, j: usize| -> Rat {
        let diff = emb.sets[i].symm_diff_measure(&emb.sets[j]);
        scale * diff / Rat::from_integer(d.get(i, j) as i64)
    };

    let report = scan_pairs(g.vertex_count(), threads, ratio)
        .ok_or_else(|| Error::Validation("graph has fewer than two vertices".into()))?;

    if report.min_ratio < Rat::new(3, 4) {
        let (a, b) = report.witness_min;
        return Err(Error::Counterexample(format!(
            "L1 distortion lower bound violated at pair ({a},{b}): ratio {}",
            report.min_ratio
        )));
    }
    if report.max_ratio > Rat::from_integer(1) {
        let (a, b) = report.witness_max;
        return Err(Error::Counterexample(format!(
            "L1 Lipschitz bound violated at pair ({a},{b}): ratio {}",
            report.max_ratio
        )));
    }
    Ok(report)
}

/// Exact independence of the two copy maps: for every ordered vertex pair
/// (a, b) of the previous level, measure(θ(a) ∩ φ(b)) =
/// measure(θ(a)) · measure(φ(b)).
pub fn verify_independence(prev: &IntervalEmbedding) -> Result<()> {
    for (i, theta) in prev.sets.iter().enumerate() {
        for (j, base) in prev.sets.iter().enumerate() {
            let phi = base.tile();
            let lhs = theta.intersect(&phi).measure();
            let rhs = theta.measure() * phi.measure();
            if lhs != rhs {
                return Err(Error::Counterexample(format!(
                    "independence fails at pair ({i},{j}): {lhs} != {rhs}"
                )));
            }
        }
    }
    Ok(())
}

/// Exact check of 1 + min(s+t, 2−s−t) ≤ 4/3 · (1 + s + t − 2st) for
/// s, t ∈ [0,1]: the left side bounds the normalized cross-branch graph
/// distance, the right the independent symmetric-difference measure.
/// Returns whether it holds together with both exact sides.
pub fn cross_branch_ratio_bound(s: Rat, t: Rat) -> Result<(bool, Rat, Rat)> {
    let zero = Rat::from_integer(0);
    let one = Rat::from_integer(1);
    if s < zero || s > one || t < zero || t > one {
        return Err(Error::Validation(format!(
            "arguments must lie in [0,1]; got s={s}, t={t}"
        )));
    }
    let two = Rat::from_integer(2);
    let lhs = one + (s + t).min(two - s - t);
    let rhs = Rat::new(4, 3) * (one + s + t - two * s * t);
    Ok((lhs <= rhs, lhs, rhs))
}
