//! Search for the strongest certificate a metric admits over a bounded
//! integer weight range.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cert::{weighted_sums, Certificate, WeightAssignment};
use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;
use crate::report::{Rat, RatioJson};

/// Cap on the pruned exhaustive enumeration size.
pub const DEFAULT_EXHAUSTIVE_LIMIT: u128 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Every weight vector in range with Σk ∈ {0,1}, under sign-fixing:
    /// the first nonzero weight is pinned positive and Σk = −1 vectors
    /// are admitted, then normalized by negation. Deterministic.
    Exhaustive,
    /// Steepest-ascent over single-coordinate ±1 moves with seeded random
    /// restarts. Deterministic for a fixed seed.
    Local,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub strategy: SearchStrategy,
    /// Inclusive weight range, e.g. (−1, 1).
    pub range: (i64, i64),
    /// Evaluation budget for the local strategy; the exhaustive strategy
    /// is bounded by [`DEFAULT_EXHAUSTIVE_LIMIT`] instead.
    pub budget: u64,
    pub seed: u64,
    /// Optional starting assignment for the local strategy.
    pub start: Option<WeightAssignment>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: SearchStrategy::Exhaustive,
            range: (-1, 1),
            budget: 1_000_000,
            seed: 0,
            start: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    /// Strongest certificate found (largest s_plus/s_minus; ties broken
    /// by lexicographically least weight vector). None when no vector in
    /// the searched region had a nonzero negative side.
    pub best: Option<Certificate>,
    /// Certified lower bound on L1 distortion: the best ratio found,
    /// floored at 1 (every metric needs distortion at least 1).
    pub lower_bound: Rat,
    pub evaluations: u64,
    /// Seed, reported for the local strategy only.
    pub seed: Option<u64>,
    /// Precise description of the searched region.
    pub searched: String,
}

impl SearchResult {
    pub fn to_json_value(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc {
            lower_bound: RatioJson,
            evaluations: u64,
            #[serde(skip_serializing_if = "Option::is_none")]
            seed: Option<u64>,
            searched: String,
        }
        let mut v = match &self.best {
            Some(cert) => cert.to_json_value(),
            None => serde_json::json!({}),
        };
        let extra = serde_json::to_value(Doc {
            lower_bound: self.lower_bound.into(),
            evaluations: self.evaluations,
            seed: self.seed,
            searched: self.searched.clone(),
        })
        .unwrap();
        v.as_object_mut()
            .unwrap()
            .extend(extra.as_object().unwrap().clone());
        v
    }
}

pub fn search_certificates(d: &DistanceMatrix, opts: &SearchOptions) -> Result<SearchResult> {
    let (lo, hi) = opts.range;
    if lo > hi || hi < 1 {
        return Err(Error::Validation(format!(
            "weight range [{lo},{hi}] must be nonempty and contain 1"
        )));
    }
    match opts.strategy {
        SearchStrategy::Exhaustive => exhaustive(d, opts),
        SearchStrategy::Local => local(d, opts),
    }
}

struct Best {
    bound: Rat,
    weights: Vec<i64>,
    sums: (i64, i64),
}

/// Offer a candidate with s_minus > 0; keeps the larger bound, breaking
/// ties toward the lexicographically least weight vector.
fn offer(best: &mut Option<Best>, bound: Rat, weights: &[i64], sums: (i64, i64)) {
    let replace = match best {
        None => true,
        Some(b) => bound > b.bound || (bound == b.bound && weights < b.weights.as_slice()),
    };
    if replace {
        *best = Some(Best { bound, weights: weights.to_vec(), sums });
    }
}

fn result_from_best(
    best: Option<Best>,
    evaluations: u64,
    seed: Option<u64>,
    searched: String,
) -> SearchResult {
    let one = Rat::from_integer(1);
    match best {
        Some(b) => SearchResult {
            lower_bound: b.bound.max(one),
            best: Some(Certificate {
                kind: b.weights.iter().sum::<i64>() as u8,
                weights: WeightAssignment::new(b.weights),
                s_plus: b.sums.0,
                s_minus: b.sums.1,
            }),
            evaluations,
            seed,
            searched,
        },
        None => SearchResult { best: None, lower_bound: one, evaluations, seed, searched },
    }
}

fn exhaustive(d: &DistanceMatrix, opts: &SearchOptions) -> Result<SearchResult> {
    let n = d.len();
    let (lo, hi) = opts.range;
    let span = (hi - lo + 1) as u128;
    let total: u128 = span
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX)
        .saturating_div(2); // sign-fixing halves the space
    if total > DEFAULT_EXHAUSTIVE_LIMIT {
        return Err(Error::Capacity(format!(
            "exhaustive search over [{lo},{hi}]^{n} has ~{total} candidates after sign \
             pruning, above the limit {DEFAULT_EXHAUSTIVE_LIMIT}; use the local strategy"
        )));
    }

    let mut weights = vec![0i64; n];
    let mut best: Option<Best> = None;
    let mut evaluations: u64 = 0;
    descend(d, opts.range, &mut weights, 0, 0, false, &mut best, &mut evaluations);

    let searched = format!(
        "exhaustive over [{lo},{hi}]^{n} with weight sum in {{-1,0,1}}, first nonzero \
         weight positive, sum -1 normalized by negation"
    );
    Ok(result_from_best(best, evaluations, None, searched))
}

#[allow(clippy::too_many_arguments)]
fn descend(
    d: &DistanceMatrix,
    range: (i64, i64),
    weights: &mut Vec<i64>,
    pos: usize,
    sum: i64,
    nonzero_seen: bool,
    best: &mut Option<Best>,
    evaluations: &mut u64,
) {
    let n = weights.len();
    if pos == n {
        if !nonzero_seen || !(-1..=1).contains(&sum) {
            return;
        }
        *evaluations += 1;
        let (s_plus, s_minus) = weighted_sums(d, weights);
        if s_minus == 0 {
            return;
        }
        let bound = Rat::new(s_plus, s_minus);
        if sum == -1 {
            // Same sums as the negation, which has Σk = 1.
            let negated: Vec<i64> = weights.iter().map(|k| -k).collect();
            offer(best, bound, &negated, (s_plus, s_minus));
        } else {
            offer(best, bound, weights, (s_plus, s_minus));
        }
        return;
    }
    let remaining = (n - pos - 1) as i64;
    let value_lo = if nonzero_seen { range.0 } else { 0 };
    for k in value_lo..=range.1 {
        let s = sum + k;
        // The tail can still steer the sum into [-1, 1]?
        if s + remaining * range.0 > 1 || s + remaining * range.1 < -1 {
            continue;
        }
        weights[pos] = k;
        descend(d, range, weights, pos + 1, s, nonzero_seen || k != 0, best, evaluations);
    }
    weights[pos] = 0;
}

fn local(d: &DistanceMatrix, opts: &SearchOptions) -> Result<SearchResult> {
    let n = d.len();
    let (lo, hi) = opts.range;
    if let Some(start) = &opts.start {
        if start.len() != n {
            return Err(Error::Validation(format!(
                "start assignment has {} weights for a {n}-point metric",
                start.len()
            )));
        }
        start.kind()?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<Best> = None;
    let mut evaluations: u64 = 0;
    let mut restarts: u64 = 0;

    let evaluate = |w: &[i64], evals: &mut u64, best: &mut Option<Best>| -> Option<Rat> {
        *evals += 1;
        let (s_plus, s_minus) = weighted_sums(d, w);
        if s_minus == 0 {
            return None;
        }
        let bound = Rat::new(s_plus, s_minus);
        offer(best, bound, w, (s_plus, s_minus));
        Some(bound)
    };

    let mut current: Vec<i64> = match &opts.start {
        Some(start) => start.weights().to_vec(),
        None => random_valid_vector(&mut rng, n, lo, hi),
    };
    let mut current_bound = evaluate(&current, &mut evaluations, &mut best);

    while evaluations < opts.budget {
        // Steepest ascent over single-coordinate ±1 moves keeping the sum
        // in {0, 1}.
        let mut move_to: Option<(Rat, i64, Vec<i64>)> = None;
        let sum: i64 = current.iter().sum();
        'moves: for i in 0..n {
            for delta in [-1i64, 1] {
                let k = current[i] + delta;
                if k < lo || k > hi || !(0..=1).contains(&(sum + delta)) {
                    continue;
                }
                let mut cand = current.clone();
                cand[i] = k;
                if let Some(bound) = evaluate(&cand, &mut evaluations, &mut best) {
                    let norm: i64 = cand.iter().map(|k| k.abs()).sum();
                    let better = match &move_to {
                        None => true,
                        Some((b, bn, bw)) => {
                            bound > *b
                                || (bound == *b && norm < *bn)
                                || (bound == *b && norm == *bn && cand < *bw)
                        }
                    };
                    if better {
                        move_to = Some((bound, norm, cand));
                    }
                }
                if evaluations >= opts.budget {
                    break 'moves;
                }
            }
        }

        let improved = match (&move_to, current_bound) {
            (Some((bound, norm, _)), Some(cur)) => {
                *bound > cur
                    || (*bound == cur && *norm < current.iter().map(|k| k.abs()).sum::<i64>())
            }
            (Some(_), None) => true,
            (None, _) => false,
        };
        if improved {
            let (bound, _, w) = move_to.unwrap();
            current = w;
            current_bound = Some(bound);
        } else {
            if evaluations >= opts.budget {
                break;
            }
            restarts += 1;
            current = random_valid_vector(&mut rng, n, lo, hi);
            current_bound = evaluate(&current, &mut evaluations, &mut best);
        }
    }

    let searched = format!(
        "local steepest-ascent over [{lo},{hi}]^{n} with weight sum in {{0,1}}, \
         {restarts} random restarts, {evaluations} evaluations, seed {}",
        opts.seed
    );
    Ok(result_from_best(best, evaluations, Some(opts.seed), searched))
}

/// Uniform random vector repaired to weight sum 0 or 1.
fn random_valid_vector(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Vec<i64> {
    let mut w: Vec<i64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    loop {
        let sum: i64 = w.iter().sum();
        if (0..=1).contains(&sum) {
            if w.iter().all(|&k| k == 0) {
                // All-zero is not a valid negative-type assignment.
                w[rng.gen_range(0..n)] = 1;
                continue;
            }
            return w;
        }
        let i = rng.gen_range(0..n);
        if sum > 1 && w[i] > lo {
            w[i] -= 1;
        } else if sum < 0 && w[i] < hi {
            w[i] += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::{reference_weights_d2, reference_weights_l2, verify_certificate};
    use crate::graph::{build_graph, Family};

    #[test]
    fn exhaustive_on_two_points_reports_the_trivial_bound() {
        let g = build_graph(Family::Laakso, 0).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let res = search_certificates(&d, &SearchOptions::default()).unwrap();
        assert_eq!(res.lower_bound, Rat::from_integer(1));
        // The strongest raw certificate on two points is (1,-1) with
        // s_plus = 0.
        let best = res.best.unwrap();
        assert_eq!(best.weights.weights(), &[1, -1]);
        assert_eq!(best.bound(), Some(Rat::from_integer(0)));
    }

    #[test]
    fn exhaustive_on_d1_and_l1_is_trivial() {
        for family in [Family::Laakso, Family::Diamond] {
            let g = build_graph(family, 1).unwrap();
            let d = g.shortest_path_metric().unwrap();
            let res = search_certificates(&d, &SearchOptions::default()).unwrap();
            assert_eq!(res.lower_bound, Rat::from_integer(1), "{family} level 1");
        }
    }

    #[test]
    fn capacity_error_suggests_local() {
        let g = build_graph(Family::Laakso, 2).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let err = search_certificates(&d, &SearchOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
        assert!(err.to_string().contains("local"));
    }

    #[test]
    fn search_results_recompute_exactly() {
        let g = build_graph(Family::Diamond, 1).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let res = search_certificates(&d, &SearchOptions::default()).unwrap();
        let best = res.best.unwrap();
        let again = verify_certificate(&d, &best.weights).unwrap();
        assert_eq!((again.s_plus, again.s_minus), (best.s_plus, best.s_minus));
        assert_eq!(again.kind, best.kind);
    }

    #[test]
    fn local_seeded_at_l2_reference_weights_keeps_the_bound() {
        let g = build_graph(Family::Laakso, 2).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let start = reference_weights_l2(&g).unwrap();
        let opts = SearchOptions {
            strategy: SearchStrategy::Local,
            budget: 20_000,
            seed: 7,
            start: Some(start),
            ..SearchOptions::default()
        };
        let res = search_certificates(&d, &opts).unwrap();
        assert!(res.lower_bound >= Rat::new(9, 8));
        assert_eq!(res.seed, Some(7));
        let best = res.best.unwrap();
        let again = verify_certificate(&d, &best.weights).unwrap();
        assert_eq!(again.bound().unwrap(), res.lower_bound.max(Rat::from_integer(1)));
    }

    #[test]
    fn local_is_deterministic_per_seed() {
        let g = build_graph(Family::Diamond, 2).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let opts = SearchOptions {
            strategy: SearchStrategy::Local,
            budget: 5_000,
            seed: 42,
            ..SearchOptions::default()
        };
        let a = search_certificates(&d, &opts).unwrap();
        let b = search_certificates(&d, &opts).unwrap();
        assert_eq!(a.lower_bound, b.lower_bound);
        assert_eq!(
            a.best.map(|c| c.weights),
            b.best.map(|c| c.weights)
        );
    }

    #[test]
    fn local_finds_the_d2_bound_from_the_reference_start() {
        let g = build_graph(Family::Diamond, 2).unwrap();
        let d = g.shortest_path_metric().unwrap();
        let opts = SearchOptions {
            strategy: SearchStrategy::Local,
            budget: 10_000,
            seed: 1,
            start: Some(reference_weights_d2(&g).unwrap()),
            ..SearchOptions::default()
        };
        let res = search_certificates(&d, &opts).unwrap();
        assert!(res.lower_bound >= Rat::new(5, 4));
    }
}
