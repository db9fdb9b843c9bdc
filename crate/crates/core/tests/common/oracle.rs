//! Brute-force reference implementations. Everything here recomputes from
//! plain maps and never calls the library's metric code.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use relprobe::dataset::Dataset;
use relprobe::responses::AgentResponses;

pub type Q = Ratio<i128>;

#[derive(Debug, Clone)]
pub struct OProbe {
    pub id: String,
    pub target: String,
    pub relation: String,
    pub prompt: String,
}

#[derive(Debug, Clone)]
pub struct World {
    pub probes: Vec<OProbe>,
    pub sets: BTreeMap<(String, String), BTreeSet<String>>,
    pub tuples: Vec<(String, String, String)>,
}

impl World {
    pub fn new(ds: &Dataset) -> Self {
        World {
            probes: ds
                .probes
                .iter()
                .map(|p| OProbe {
                    id: p.id.to_string(),
                    target: p.target.clone(),
                    relation: p.relation.label().to_string(),
                    prompt: p.prompt_id.clone(),
                })
                .collect(),
            sets: super::plain_sets(ds),
            tuples: ds
                .tuples
                .iter()
                .map(|t| (t.target.clone(), t.relation.label().to_string(), t.relatum.clone()))
                .collect(),
        }
    }

    fn set(&self, target: &str, rel: &str) -> Option<&BTreeSet<String>> {
        self.sets.get(&(target.to_string(), rel.to_string())).filter(|s| !s.is_empty())
    }

    fn targets(&self, rel: &str) -> BTreeMap<&str, Vec<&OProbe>> {
        let mut m: BTreeMap<&str, Vec<&OProbe>> = BTreeMap::new();
        for p in self.probes.iter().filter(|p| p.relation == rel) {
            m.entry(&p.target).or_default().push(p);
        }
        m
    }

    fn union(&self, target: &str) -> usize {
        self.sets
            .iter()
            .filter(|((t, _), _)| t == target)
            .flat_map(|(_, s)| s.iter())
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// Ranked word lists re-derived from raw scores: by count when counts exist,
/// else by probability; ties by word.
pub fn lists(resp: &AgentResponses) -> BTreeMap<String, Vec<String>> {
    let mut out = BTreeMap::new();
    for d in resp.distributions() {
        let mut items: Vec<(String, f64)> = match d.counts() {
            Some(c) => c.iter().map(|(w, &n)| (w.clone(), n as f64)).collect(),
            None => d.probs().iter().map(|(w, &p)| (w.clone(), p)).collect(),
        };
        // Simple selection sort: pick the best remaining each time.
        let mut ranked = Vec::new();
        while !items.is_empty() {
            let mut best = 0;
            for i in 1..items.len() {
                let (a, b) = (&items[i], &items[best]);
                if a.1 > b.1 || (a.1 == b.1 && a.0 < b.0) {
                    best = i;
                }
            }
            ranked.push(items.remove(best).0);
        }
        out.insert(d.probe.to_string(), ranked);
    }
    out
}

fn mean(v: &[Q]) -> Option<Q> {
    if v.is_empty() {
        None
    } else {
        Some(v.iter().sum::<Q>() / Q::from_integer(v.len() as i128))
    }
}

fn answered<'a>(l: &'a BTreeMap<String, Vec<String>>, id: &str) -> Option<&'a Vec<String>> {
    l.get(id).filter(|v| !v.is_empty())
}

fn per_target<F>(w: &World, l: &BTreeMap<String, Vec<String>>, rel: &str, f: F) -> Option<Q>
where
    F: Fn(&OProbe, &[String], &BTreeSet<String>) -> Q,
{
    let mut units = Vec::new();
    for (t, ps) in w.targets(rel) {
        let Some(y) = w.set(t, rel) else { continue };
        let vals: Vec<Q> = ps.iter().filter_map(|p| answered(l, &p.id).map(|list| f(p, list, y))).collect();
        if let Some(m) = mean(&vals) {
            units.push(m);
        }
    }
    mean(&units)
}

pub fn soundness(w: &World, l: &BTreeMap<String, Vec<String>>, rel: &str) -> Option<Q> {
    per_target(w, l, rel, |_, list, y| Q::from_integer(y.contains(&list[0]) as i128))
}

pub fn completeness(w: &World, l: &BTreeMap<String, Vec<String>>, rel: &str) -> Option<Q> {
    per_target(w, l, rel, |_, list, y| {
        let k = y.len().min(list.len());
        let hits = list.iter().take(k).filter(|x| y.contains(*x)).count();
        Q::new(hits as i128, k as i128)
    })
}

pub fn symmetry(w: &World, l: &BTreeMap<String, Vec<String>>, rel: &str, k: usize) -> Option<Q> {
    let pairs: BTreeSet<(String, String)> = w
        .tuples
        .iter()
        .filter(|t| t.1 == rel)
        .map(|t| if t.0 < t.2 { (t.0.clone(), t.2.clone()) } else { (t.2.clone(), t.0.clone()) })
        .collect();
    let in_top = |list: &[String], x: &str| list.iter().take(k).any(|y| y == x);
    let mut units = Vec::new();
    for (a, b) in &pairs {
        let mut vals = Vec::new();
        for p in w.probes.iter().filter(|p| p.relation == rel && &p.target == a) {
            let Some(q) = w.probes.iter().find(|q| q.relation == rel && &q.target == b && q.prompt == p.prompt) else {
                continue;
            };
            let (Some(la), Some(lb)) = (answered(l, &p.id), answered(l, &q.id)) else { continue };
            vals.push(Q::from_integer((in_top(la, b) && in_top(lb, a)) as i128));
        }
        if let Some(m) = mean(&vals) {
            units.push(m);
        }
    }
    mean(&units)
}

/// Edit distance with substitution cost 2 equals |a| + |b| − 2·LCS.
pub fn lcs(a: &[String], b: &[String]) -> usize {
    let mut t = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 0..a.len() {
        for j in 0..b.len() {
            t[i + 1][j + 1] = if a[i] == b[j] { t[i][j] + 1 } else { t[i][j + 1].max(t[i + 1][j]) };
        }
    }
    t[a.len()][b.len()]
}

pub fn similarity(a: &[String], b: &[String], k: usize) -> Q {
    if k == 0 {
        return Q::from_integer(1);
    }
    let d = a.len() + b.len() - 2 * lcs(a, b);
    let s = Q::from_integer(1) - Q::new(d as i128, 2 * k as i128);
    s.max(Q::from_integer(0))
}

pub fn rho(agent: &[String], human: &[String]) -> Q {
    let k = human.len();
    let top: Vec<String> = agent.iter().take(k).cloned().collect();
    let first = Q::from_integer((agent.first() == human.first() && !agent.is_empty()) as i128);
    Q::new(1, 2) * first + Q::new(1, 2) * similarity(&top, human, k)
}

/// Gold probes: prototypical relation, human counts not all equal (or a
/// single word), every word in `vocab`.
pub fn gold_probes(w: &World, human: &AgentResponses, vocab: &BTreeSet<String>) -> BTreeSet<String> {
    let mut kept = BTreeSet::new();
    for p in &w.probes {
        if !["HYP", "HOL", "ANT", "SYN"].contains(&p.relation.as_str()) {
            continue;
        }
        let Some(d) = human.distributions().find(|d| d.probe.as_str() == p.id) else { continue };
        let counts: Vec<u64> = d.counts().unwrap().values().copied().collect();
        let flat = counts.len() >= 2 && counts.iter().all(|&c| c == counts[0]);
        if flat || d.counts().unwrap().keys().any(|x| !vocab.contains(x)) {
            continue;
        }
        kept.insert(p.id.clone());
    }
    kept
}

pub fn prototypicality(
    w: &World,
    agent: &BTreeMap<String, Vec<String>>,
    human: &BTreeMap<String, Vec<String>>,
    gold: &BTreeSet<String>,
    rel: &str,
) -> Option<Q> {
    let mut units = Vec::new();
    for (_, ps) in w.targets(rel) {
        let vals: Vec<Q> = ps
            .iter()
            .filter(|p| gold.contains(&p.id))
            .filter_map(|p| Some(rho(answered(agent, &p.id)?, answered(human, &p.id)?)))
            .collect();
        if let Some(m) = mean(&vals) {
            units.push(m);
        }
    }
    mean(&units)
}

pub const RELATIONS: [&str; 6] = ["HYP", "HPO", "HOL", "MER", "ANT", "SYN"];

/// D for every ordered pair with support.
pub fn distinguishability(w: &World, l: &BTreeMap<String, Vec<String>>) -> BTreeMap<(String, String), Q> {
    let mut out = BTreeMap::new();
    for r in RELATIONS {
        for s in RELATIONS.into_iter().filter(|&s| s != r) {
            let mut rs = Vec::new();
            let mut rr = Vec::new();
            for (t, ps) in w.targets(r) {
                let (Some(yr), Some(ys)) = (w.set(t, r), w.set(t, s)) else { continue };
                let k = w.union(t) as i128;
                let score = |y: &BTreeSet<String>, list: &[String]| {
                    let ranks: Vec<Q> = y
                        .iter()
                        .map(|v| match list.iter().take(k as usize).position(|x| x == v) {
                            Some(i) => Q::new(i as i128 + 1, k),
                            None => Q::from_integer(1),
                        })
                        .collect();
                    mean(&ranks).unwrap()
                };
                let mut a = Vec::new();
                let mut b = Vec::new();
                for p in ps {
                    if let Some(list) = answered(l, &p.id) {
                        a.push(score(ys, list));
                        b.push(score(yr, list));
                    }
                }
                if let (Some(a), Some(b)) = (mean(&a), mean(&b)) {
                    rs.push(a);
                    rr.push(b);
                }
            }
            if let (Some(a), Some(b)) = (mean(&rs), mean(&rr)) {
                out.insert((r.to_string(), s.to_string()), (a - b).max(Q::from_integer(0)));
            }
        }
    }
    out
}

/// Area under η: the sum of all D values.
pub fn audc(d: &BTreeMap<(String, String), Q>) -> Q {
    d.values().sum()
}

pub fn entropy(counts: &[u64]) -> f64 {
    if counts.len() <= 1 {
        return 0.0;
    }
    let n: u64 = counts.iter().sum();
    let h: f64 = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.ln()
        })
        .sum();
    h / (counts.len() as f64).ln()
}

pub fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}
