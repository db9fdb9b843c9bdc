use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{probes_by_target, Mean, MetricInput};
use crate::lexicon::{Relation, RelatumSet};
use crate::responses::{AgentResponses, RankedList};

/// 1-based rank within the top k divided by k; words outside the top k get
/// the worst score, 1.
pub fn rank_score(word: &str, list: &RankedList, k: usize) -> f64 {
    match list.top(k).iter().position(|i| i.word == word) {
        Some(pos) => (pos + 1) as f64 / k as f64,
        None => 1.0,
    }
}

fn mean_rank(set: &RelatumSet, list: &RankedList, k: usize) -> f64 {
    set.words().map(|v| rank_score(v, list, k)).collect::<Mean>().value().unwrap_or(1.0)
}

/// One ordered pair (r, s). `delta_rs` and `delta_rr` average over the same
/// (target, prompt) population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub r: Relation,
    pub s: Relation,
    pub delta_rs: f64,
    pub delta_rr: f64,
    pub d: f64,
    pub targets: usize,
    /// Targets of r lacking a non-empty Y^s.
    pub excluded_targets: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguishabilityMatrix {
    pub agent: String,
    /// Ordered pairs r ≠ s; a pair is absent when no target supports it.
    pub pairs: Vec<PairScore>,
}

impl DistinguishabilityMatrix {
    pub fn d(&self, r: Relation, s: Relation) -> Option<f64> {
        self.pair(r, s).map(|p| p.d)
    }

    pub fn pair(&self, r: Relation, s: Relation) -> Option<&PairScore> {
        self.pairs.iter().find(|p| p.r == r && p.s == s)
    }

    pub fn missing_pairs(&self) -> Vec<(Relation, Relation)> {
        ordered_pairs().filter(|&(r, s)| self.pair(r, s).is_none()).collect()
    }

    /// Row-major 6×6 grid, `None` on the diagonal and for missing pairs.
    pub fn grid(&self) -> [[Option<f64>; 6]; 6] {
        let mut g = [[None; 6]; 6];
        for p in &self.pairs {
            g[p.r.index()][p.s.index()] = Some(p.d);
        }
        g
    }
}

pub(crate) fn ordered_pairs() -> impl Iterator<Item = (Relation, Relation)> {
    Relation::ALL
        .into_iter()
        .flat_map(|r| Relation::ALL.into_iter().filter(move |&s| s != r).map(move |s| (r, s)))
}

/// Distinguishability over all 30 ordered pairs. k is the size of the union
/// of the target's relatum sets; per target the prompt mean is taken first.
pub fn distinguishability(input: &MetricInput<'_>, responses: &AgentResponses) -> DistinguishabilityMatrix {
    let pairs: Vec<(Relation, Relation)> = ordered_pairs().collect();
    let scored: Vec<Option<PairScore>> = pairs
        .par_iter()
        .map(|&(r, s)| {
            let mut rs = Mean::default();
            let mut rr = Mean::default();
            let mut excluded = 0;
            for (target, probes) in probes_by_target(input.probes, r) {
                let (Some(yr), Some(ys)) = (
                    input.sets.get(target, r).filter(|y| !y.is_empty()),
                    input.sets.get(target, s).filter(|y| !y.is_empty()),
                ) else {
                    excluded += 1;
                    continue;
                };
                let k = input.sets.union_size(target);
                let mut trs = Mean::default();
                let mut trr = Mean::default();
                for p in probes {
                    let Some(list) = responses.ranked(&p.id).filter(|l| !l.is_empty()) else {
                        continue;
                    };
                    trs.push(mean_rank(ys, list, k));
                    trr.push(mean_rank(yr, list, k));
                }
                if let (Some(a), Some(b)) = (trs.value(), trr.value()) {
                    rs.push(a);
                    rr.push(b);
                }
            }
            match (rs.value(), rr.value()) {
                (Some(delta_rs), Some(delta_rr)) => Some(PairScore {
                    r,
                    s,
                    delta_rs,
                    delta_rr,
                    d: (delta_rs - delta_rr).max(0.0),
                    targets: rs.count(),
                    excluded_targets: excluded,
                }),
                _ => None,
            }
        })
        .collect();
    DistinguishabilityMatrix {
        agent: responses.agent.name.clone(),
        pairs: scored.into_iter().flatten().collect(),
    }
}

/// Distinguishability curve and its area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Audc {
    /// (p, η(p)) at 0, at every distinct D value and at 1.
    pub curve: Vec<(f64, usize)>,
    pub area: f64,
    pub missing_pairs: usize,
}

impl Audc {
    /// Pairs with D strictly above p.
    pub fn eta(&self, p: f64) -> usize {
        self.curve.iter().rev().find(|(x, _)| *x <= p).map(|c| c.1).unwrap_or(self.curve[0].1)
    }
}

/// Step integral of η(p) = #{D > p} over [0, 1]. Missing pairs count as 0.
pub fn audc(matrix: &DistinguishabilityMatrix) -> Audc {
    let missing = matrix.missing_pairs().len();
    if missing > 0 {
        log::warn!("{}: {missing} distinguishability pair(s) missing, counted as 0", matrix.agent);
    }
    let mut ds: Vec<f64> = ordered_pairs().map(|(r, s)| matrix.d(r, s).unwrap_or(0.0)).collect();
    ds.sort_by(|a, b| a.total_cmp(b));
    let eta = |p: f64| ds.iter().filter(|&&d| d > p).count();

    let mut points: Vec<f64> = std::iter::once(0.0).chain(ds.iter().copied()).chain(std::iter::once(1.0)).collect();
    points.dedup();
    let curve: Vec<(f64, usize)> = points.iter().map(|&p| (p, eta(p))).collect();
    let area = points.windows(2).map(|w| (w[1] - w[0]) * eta(w[0]) as f64).sum();
    Audc {
        curve,
        area,
        missing_pairs: missing,
    }
}
