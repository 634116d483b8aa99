//! Exact minimum L1 distortion of a small metric space, by linear
//! programming over the cone of cut semimetrics.
//!
//! A semimetric embeds isometrically into an L1 space exactly when it is
//! a nonnegative combination of cut semimetrics, so
//!
//!   minimize c  subject to  d ≤ Σ_S λ_S δ_S ≤ c·d,  λ ≥ 0
//!
//! computes the exact least distortion over all L1 embeddings. One
//! canonical cut per subset not containing a fixed root vertex.

mod simplex;

pub use simplex::{rat_int, simplex_solve, BigRat, Cmp, LpRow, LpSolution, StandardLp};

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;

/// 2^15 − 1 canonical cuts is the largest program we solve outright;
/// larger graphs would need column generation, which this module refuses
/// to approximate.
pub const MAX_LP_VERTICES: usize = 16;

/// A weighted family of cuts realizing distances within [d, c·d]. Cut
/// subsets are stored as bitmasks over vertex indices with the root's bit
/// always clear, sorted ascending; only strictly positive weights are
/// kept.
#[derive(Debug, Clone, PartialEq)]
pub struct CutMeasure {
    pub root: usize,
    pub cuts: Vec<(u32, BigRat)>,
    pub scale: BigRat,
}

impl CutMeasure {
    pub fn to_json_value(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct CutDoc {
            subset: Vec<u32>,
            lambda: RatDoc,
        }
        #[derive(Serialize)]
        struct RatDoc {
            num: i64,
            den: i64,
        }
        fn rat_doc(r: &BigRat) -> RatDoc {
            RatDoc {
                num: big_to_i64(r.numer()),
                den: big_to_i64(r.denom()),
            }
        }
        #[derive(Serialize)]
        struct Doc {
            c: RatDoc,
            root: usize,
            cuts: Vec<CutDoc>,
        }
        let doc = Doc {
            c: rat_doc(&self.scale),
            root: self.root,
            cuts: self
                .cuts
                .iter()
                .map(|(mask, lambda)| CutDoc {
                    subset: mask_members(*mask),
                    lambda: rat_doc(lambda),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("cut measure serializes")
    }
}

fn big_to_i64(v: &num::BigInt) -> i64 {
    use num::ToPrimitive;
    v.to_i64().expect("cut-cone rationals fit in 64 bits")
}

fn mask_members(mask: u32) -> Vec<u32> {
    (0..32).filter(|b| mask >> b & 1 == 1).collect()
}

fn delta(mask: u32, i: usize, j: usize) -> bool {
    (mask >> i & 1) != (mask >> j & 1)
}

/// All canonical cut masks for `n` vertices with the root excluded,
/// ascending.
fn canonical_cuts(n: usize, root: usize) -> Vec<u32> {
    let full = (1u32 << n) - 1;
    (1..=full)
        .filter(|m| m & (1 << root) == 0)
        .collect()
}

/// Exact minimum distortion of any embedding of `d` into an L1 space,
/// with a cut measure attaining it. Root defaults to vertex 0.
pub fn solve_min_distortion(d: &DistanceMatrix) -> Result<(BigRat, CutMeasure)> {
    solve_min_distortion_with_root(d, 0)
}

pub fn solve_min_distortion_with_root(
    d: &DistanceMatrix,
    root: usize,
) -> Result<(BigRat, CutMeasure)> {
    let n = d.len();
    if n > MAX_LP_VERTICES {
        return Err(Error::Capacity(format!(
            "{n} vertices exceed the cut-cone LP cap of {MAX_LP_VERTICES} \
             (2^{} cuts would be needed)",
            n - 1
        )));
    }
    if n < 2 {
        return Err(Error::Validation("need at least two points".into()));
    }
    if root >= n {
        return Err(Error::Validation(format!("root {root} out of range")));
    }
    d.verify_triangle_inequality()?;

    let cuts = canonical_cuts(n, root);
    let k = cuts.len();
    // Variables: λ per cut, then c.
    let mut rows = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in (i + 1)..n {
            let dij = rat_int(d.get(i, j) as i64);
            let deltas: Vec<BigRat> = cuts
                .iter()
                .map(|&m| if delta(m, i, j) { BigRat::one() } else { BigRat::zero() })
                .collect();
            let mut lower = deltas.clone();
            lower.push(BigRat::zero());
            rows.push(LpRow { coeffs: lower, cmp: Cmp::Ge, rhs: dij.clone() });
            let mut upper = deltas;
            upper.push(-dij);
            rows.push(LpRow { coeffs: upper, cmp: Cmp::Le, rhs: BigRat::zero() });
        }
    }
    let mut objective = vec![BigRat::zero(); k + 1];
    objective[k] = BigRat::one();

    let sol = simplex_solve(&StandardLp { objective, rows })?;
    let c = sol.objective.clone();

    let measure = CutMeasure {
        root,
        cuts: cuts
            .iter()
            .zip(&sol.x)
            .filter(|(_, lambda)| lambda.is_positive())
            .map(|(&m, lambda)| (m, lambda.clone()))
            .collect(),
        scale: c.clone(),
    };

    // Re-verify feasibility of the measure independently of the solver.
    verify_cut_measure(d, &measure)?;

    Ok((c, measure))
}

/// Check d ≤ Σ λ_S δ_S ≤ c·d directly from the measure.
pub fn verify_cut_measure(d: &DistanceMatrix, m: &CutMeasure) -> Result<()> {
    let n = d.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let realized: BigRat = m
                .cuts
                .iter()
                .filter(|(mask, _)| delta(*mask, i, j))
                .map(|(_, lambda)| lambda.clone())
                .sum();
            let dij = rat_int(d.get(i, j) as i64);
            if realized < dij || realized > &m.scale * &dij {
                return Err(Error::Validation(format!(
                    "cut measure infeasible at pair ({i},{j}): realized {realized}, \
                     distance {dij}, scale {}",
                    m.scale
                )));
            }
        }
    }
    Ok(())
}

/// Mechanical coordinates of a cut measure: one coordinate per cut,
/// value λ_S on the vertices inside S and 0 outside. Pairwise L1
/// distances of the result equal Σ λ_S δ_S by construction.
pub fn cut_coordinates(m: &CutMeasure, n: usize) -> Vec<Vec<BigRat>> {
    (0..n)
        .map(|v| {
            m.cuts
                .iter()
                .map(|(mask, lambda)| {
                    if mask >> v & 1 == 1 { lambda.clone() } else { BigRat::zero() }
                })
                .collect()
        })
        .collect()
}

/// Coordinates of a feasible measure, re-verified: pairwise L1 distances
/// must land in [d, c·d] exactly, else a validation error names the
/// violated pair.
pub fn extract_embedding(d: &DistanceMatrix, m: &CutMeasure) -> Result<Vec<Vec<BigRat>>> {
    let n = d.len();
    let coords = cut_coordinates(m, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let dist: BigRat = coords[i]
                .iter()
                .zip(&coords[j])
                .map(|(a, b)| (a - b).abs())
                .sum();
            let dij = rat_int(d.get(i, j) as i64);
            if dist < dij || dist > &m.scale * &dij {
                return Err(Error::Validation(format!(
                    "extracted embedding violates the bounds at pair ({i},{j}): \
                     distance {dist} vs [{}, {}]",
                    dij,
                    &m.scale * &dij
                )));
            }
        }
    }
    Ok(coords)
}

pub fn embedding_to_json_value(coords: &[Vec<BigRat>]) -> serde_json::Value {
    let doc: std::collections::BTreeMap<String, Vec<serde_json::Value>> = coords
        .iter()
        .enumerate()
        .map(|(v, row)| {
            (
                v.to_string(),
                row.iter()
                    .map(|r| {
                        serde_json::json!({
                            "num": big_to_i64(r.numer()),
                            "den": big_to_i64(r.denom()),
                        })
                    })
                    .collect(),
            )
        })
        .collect();
    serde_json::to_value(doc).expect("embedding serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, Family};

    fn metric(family: Family, level: u32) -> DistanceMatrix {
        build_graph(family, level)
            .unwrap()
            .shortest_path_metric()
            .unwrap()
    }

    #[test]
    fn two_point_metric_is_isometric() {
        let d = metric(Family::Laakso, 0);
        let (c, m) = solve_min_distortion(&d).unwrap();
        assert_eq!(c, rat_int(1));
        assert_eq!(m.cuts.len(), 1);
        assert_eq!(m.cuts[0].0, 0b10);
        assert_eq!(m.cuts[0].1, rat_int(1));
    }

    #[test]
    fn laakso_1_is_isometric() {
        let d = metric(Family::Laakso, 1);
        let (c, m) = solve_min_distortion(&d).unwrap();
        assert_eq!(c, rat_int(1));
        let coords = extract_embedding(&d, &m).unwrap();
        for i in 0..d.len() {
            for j in (i + 1)..d.len() {
                let dist: BigRat = coords[i]
                    .iter()
                    .zip(&coords[j])
                    .map(|(a, b)| (a - b).abs())
                    .sum();
                assert_eq!(dist, rat_int(d.get(i, j) as i64));
            }
        }
    }

    #[test]
    fn diamond_1_is_isometric() {
        let d = metric(Family::Diamond, 1);
        let (c, _) = solve_min_distortion(&d).unwrap();
        assert_eq!(c, rat_int(1));
    }

    #[test]
    fn root_choice_does_not_change_the_optimum() {
        let d = metric(Family::Diamond, 1);
        let reference = solve_min_distortion_with_root(&d, 0).unwrap().0;
        for root in 1..d.len() {
            assert_eq!(
                solve_min_distortion_with_root(&d, root).unwrap().0,
                reference
            );
        }
    }

    #[test]
    fn capacity_cap_is_enforced() {
        let d = metric(Family::Laakso, 2);
        assert!(matches!(solve_min_distortion(&d), Err(Error::Capacity(_))));
    }

    #[test]
    fn single_cut_coordinates_on_a_path() {
        // Path 0 - 1 - 2, one cut {1} with weight 1.
        let m = CutMeasure { root: 0, cuts: vec![(0b010, rat_int(1))], scale: rat_int(1) };
        let coords = cut_coordinates(&m, 3);
        assert_eq!(coords[0], vec![rat_int(0)]);
        assert_eq!(coords[1], vec![rat_int(1)]);
        assert_eq!(coords[2], vec![rat_int(0)]);
        // The same measure is not feasible for the path metric, and
        // extraction says which pair breaks.
        let d = DistanceMatrix::from_rows(3, vec![0, 1, 2, 1, 0, 1, 2, 1, 0]).unwrap();
        let err = extract_embedding(&d, &m).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(err.to_string().contains("(0,2)"));
    }

    #[test]
    #[ignore = "timing probe"]
    fn d2_optimum_probe() {
        let d = metric(Family::Diamond, 2);
        let start = std::time::Instant::now();
        let (c, m) = solve_min_distortion(&d).unwrap();
        println!(
            "c(D2) = {c} with {} cuts in {:?}",
            m.cuts.len(),
            start.elapsed()
        );
    }

    #[test]
    fn path_metric_decomposes_exactly() {
        let d = DistanceMatrix::from_rows(3, vec![0, 1, 2, 1, 0, 1, 2, 1, 0]).unwrap();
        let (c, m) = solve_min_distortion(&d).unwrap();
        assert_eq!(c, rat_int(1));
        let coords = extract_embedding(&d, &m).unwrap();
        let dist: BigRat = coords[0]
            .iter()
            .zip(&coords[2])
            .map(|(a, b)| (a - b).abs())
            .sum();
        assert_eq!(dist, rat_int(2));
    }
}
