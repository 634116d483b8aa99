//! Distortion reports shared by the embedding verifiers and the cut-cone
//! solver, plus the deterministic pair-scan they are computed with.

use num::rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::graph::VertexId;

/// Exact rational used everywhere a ratio of small integers is needed.
pub type Rat = Ratio<i64>;

/// `{num, den}` wire form for exact rationals; the workbench never emits
/// decimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioJson {
    pub num: i64,
    pub den: i64,
}

impl From<Rat> for RatioJson {
    fn from(r: Rat) -> Self {
        RatioJson { num: *r.numer(), den: *r.denom() }
    }
}

impl From<RatioJson> for Rat {
    fn from(r: RatioJson) -> Self {
        Rat::new(r.num, r.den)
    }
}

/// Extremes of ‖f(a)−f(b)‖ / d(a,b) over all vertex pairs, with the
/// lexicographically least pair attaining each extreme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistortionReport {
    pub min_ratio: Rat,
    pub max_ratio: Rat,
    pub witness_min: (VertexId, VertexId),
    pub witness_max: (VertexId, VertexId),
}

impl DistortionReport {
    pub fn distortion(&self) -> Rat {
        self.max_ratio / self.min_ratio
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ReportDoc::from(self)).expect("report serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct ReportDoc {
    min_ratio: RatioJson,
    max_ratio: RatioJson,
    witness_min: (u32, u32),
    witness_max: (u32, u32),
}

impl From<&DistortionReport> for ReportDoc {
    fn from(r: &DistortionReport) -> Self {
        ReportDoc {
            min_ratio: r.min_ratio.into(),
            max_ratio: r.max_ratio.into(),
            witness_min: (r.witness_min.0 .0, r.witness_min.1 .0),
            witness_max: (r.witness_max.0 .0, r.witness_max.1 .0),
        }
    }
}

#[derive(Clone, Copy)]
struct Extremes {
    min: Rat,
    max: Rat,
    witness_min: (u32, u32),
    witness_max: (u32, u32),
}

impl Extremes {
    fn merge(self, other: Extremes) -> Extremes {
        // Strict comparisons keep the earliest witness on ties.
        Extremes {
            min: self.min.min(other.min),
            max: self.max.max(other.max),
            witness_min: if other.min < self.min { other.witness_min } else { self.witness_min },
            witness_max: if other.max > self.max { other.witness_max } else { self.witness_max },
        }
    }
}

/// Scan all pairs i < j of `0..n`, tracking the extremes of `ratio(i, j)`.
///
/// The scan is row-parallel with a reduction in row order, so the result
/// (including witnesses) is independent of the thread count.
pub fn scan_pairs<F>(n: usize, threads: usize, ratio: F) -> Option<DistortionReport>
where
    F: Fn(usize, usize) -> Rat + Sync,
{
    let scan_row = |i: usize| -> Option<Extremes> {
        let mut acc: Option<Extremes> = None;
        for j in (i + 1)..n {
            let r = ratio(i, j);
            let e = Extremes {
                min: r,
                max: r,
                witness_min: (i as u32, j as u32),
                witness_max: (i as u32, j as u32),
            };
            acc = Some(match acc {
                None => e,
                Some(prev) => prev.merge(e),
            });
        }
        acc
    };

    let rows: Vec<Option<Extremes>> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(scan_row).collect()
        })
    } else {
        (0..n).map(scan_row).collect()
    };

    let total = rows
        .into_iter()
        .flatten()
        .reduce(Extremes::merge)?;

    Some(DistortionReport {
        min_ratio: total.min,
        max_ratio: total.max,
        witness_min: (VertexId(total.witness_min.0), VertexId(total.witness_min.1)),
        witness_max: (VertexId(total.witness_max.0), VertexId(total.witness_max.1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_finds_extremes_with_least_witnesses() {
        let values = [
            [0, 2, 1, 1],
            [2, 0, 1, 3],
            [1, 1, 0, 1],
            [1, 3, 1, 0],
        ];
        let report = scan_pairs(4, 1, |i, j| Rat::from_integer(values[i][j])).unwrap();
        assert_eq!(report.min_ratio, Rat::from_integer(1));
        assert_eq!(report.max_ratio, Rat::from_integer(3));
        assert_eq!(report.witness_min, (VertexId(0), VertexId(2)));
        assert_eq!(report.witness_max, (VertexId(1), VertexId(3)));
        assert_eq!(report.distortion(), Rat::from_integer(3));
    }

    #[test]
    fn scan_is_thread_count_invariant() {
        let ratio = |i: usize, j: usize| Rat::new((i * 7 + j * 3) as i64 % 11 + 1, 2);
        let seq = scan_pairs(40, 1, ratio).unwrap();
        let par = scan_pairs(40, 4, ratio).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn scan_of_singleton_is_empty() {
        assert!(scan_pairs(1, 1, |_, _| Rat::from_integer(1)).is_none());
    }
}
