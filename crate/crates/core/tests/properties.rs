use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use relprobe::lexicon::{
    expand_relatum_set, prune_ambiguous, symmetric_augment, LexiconGraph, Provenance, Relation, RelatumSet, RelatumSets,
    SenseId, Tuple, Vocabulary,
};
use relprobe::metrics::{
    audc, edit_similarity, prototypicality_instance, rank_score, recall_at_k, precision_at_1, symmetry_indicator,
    DistinguishabilityMatrix, PairScore,
};
use relprobe::probegen::ProbeId;
use relprobe::responses::{merge_determiner, rank, tag_oor, RankedList, ResponseDistribution};
use relprobe::stats::{mann_whitney_u, mcnemar, wilcoxon_signed_rank};

const WORDS: [&str; 8] = ["ant", "bee", "cat", "dog", "eel", "fox", "gnu", "hen"];

fn word() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&WORDS[..])
}

fn relation() -> impl Strategy<Value = Relation> {
    prop::sample::select(&Relation::ALL[..])
}

fn tuples() -> impl Strategy<Value = BTreeSet<Tuple>> {
    prop::collection::vec((word(), relation(), word()), 0..30)
        .prop_map(|v| v.into_iter().filter_map(|(w, r, x)| Tuple::new(w, r, x).ok()).collect())
}

fn probs() -> impl Strategy<Value = BTreeMap<String, f64>> {
    prop::collection::btree_map(word().prop_map(str::to_string), 1u32..6, 1..8)
        .prop_map(|m| {
            let total: u32 = m.values().sum();
            m.into_iter().map(|(w, c)| (w, c as f64 / total as f64)).collect()
        })
}

fn dist(p: BTreeMap<String, f64>) -> ResponseDistribution {
    ResponseDistribution::from_probs(ProbeId::from("p"), "m", p).unwrap()
}

fn ranked(p: BTreeMap<String, f64>) -> RankedList {
    rank(&dist(p), None)
}

fn relatum_set(target: &str, r: Relation, words: &BTreeSet<&str>) -> RelatumSet {
    let mut s = RelatumSet::new(target, r);
    for w in words {
        s.members.insert(w.to_string(), Provenance { tuple: true, graph: false });
    }
    s
}

proptest! {
    #[test]
    fn augmentation_is_idempotent_superset(t in tuples()) {
        let a = symmetric_augment(&t);
        prop_assert!(t.is_subset(&a));
        prop_assert_eq!(symmetric_augment(&a), a.clone());
        for x in &a {
            prop_assert!(a.contains(&x.mirrored()));
        }
    }

    #[test]
    fn pruning_leaves_disjoint_sets(sets in prop::collection::vec((relation(), prop::collection::btree_set(word(), 0..5)), 0..6)) {
        let mut by_rel: BTreeMap<Relation, BTreeSet<&str>> = BTreeMap::new();
        for (r, ws) in sets {
            by_rel.entry(r).or_default().extend(ws.into_iter().filter(|w| *w != "zzz"));
        }
        let input: Vec<RelatumSet> = by_rel.iter().map(|(r, ws)| relatum_set("zzz", *r, ws)).collect();
        let out = prune_ambiguous(input.clone());
        for (i, a) in out.iter().enumerate() {
            prop_assert!(!a.is_empty());
            for b in &out[i + 1..] {
                prop_assert!(a.words().all(|w| !b.contains(w)));
            }
            // pruning only removes
            let orig = input.iter().find(|s| s.relation == a.relation).unwrap();
            prop_assert!(a.words().all(|w| orig.contains(w)));
        }
        // a word in exactly one input set survives
        for s in &input {
            for w in s.words() {
                let n = input.iter().filter(|t| t.contains(w)).count();
                let kept = out.iter().any(|t| t.contains(w));
                prop_assert_eq!(kept, n == 1);
            }
        }
    }

    #[test]
    fn expansion_grows_with_vocabulary(
        edges in prop::collection::vec((word(), 1u32..3, relation(), word(), 1u32..3), 1..25),
        small in prop::collection::btree_set(word(), 0..8),
        target in word(),
        r in relation(),
    ) {
        let mut g = LexiconGraph::new();
        for (a, i, rel, b, j) in edges {
            g.add_edge(SenseId { word: a.into(), index: i }, rel, SenseId { word: b.into(), index: j });
        }
        let small_v = Vocabulary::from_words(small.iter().copied(), "small");
        let full_v = Vocabulary::from_words(WORDS, "full");
        let lo = expand_relatum_set(&g, target, r, &small_v).unwrap_or_default();
        let hi = expand_relatum_set(&g, target, r, &full_v).unwrap_or_default();
        prop_assert!(lo.is_subset(&hi));
        prop_assert!(lo.iter().all(|w| small_v.contains(w)));
    }

    #[test]
    fn ranking_is_sorted_and_order_free(p in probs()) {
        let a = ranked(p.clone());
        let reversed: BTreeMap<String, f64> = p.iter().rev().map(|(k, v)| (k.clone(), *v)).collect();
        let b = ranked(reversed);
        prop_assert_eq!(&a, &b);
        for w in a.items.windows(2) {
            prop_assert!(w[0].score > w[1].score || (w[0].score == w[1].score && w[0].word < w[1].word));
        }
        prop_assert_eq!(a.len(), p.len());
        for k in 0..=p.len() {
            let cut = rank(&dist(p.clone()), Some(k));
            prop_assert_eq!(cut.items.as_slice(), a.top(k));
        }
    }

    #[test]
    fn oor_tags_follow_the_gold_sets(p in probs(), gold in prop::collection::btree_set(word(), 0..6), extra in word()) {
        let list = ranked(p);
        let mut sets = RelatumSets::default();
        sets.insert(relatum_set("zzz", Relation::Hypernymy, &gold));
        let tagged = tag_oor(list.clone(), "zzz", &sets);
        let words: Vec<&str> = tagged.words().collect();
        prop_assert_eq!(words, list.words().collect::<Vec<_>>());
        for item in &tagged.items {
            prop_assert_eq!(item.oor, !gold.contains(item.word.as_str()));
        }
        // growing the gold set never turns an in-set word into OOR
        let mut bigger = gold.clone();
        bigger.insert(extra);
        let mut sets2 = RelatumSets::default();
        sets2.insert(relatum_set("zzz", Relation::Hypernymy, &bigger));
        let again = tag_oor(list, "zzz", &sets2);
        for (x, y) in tagged.items.iter().zip(&again.items) {
            prop_assert!(x.oor || !y.oor);
        }
    }

    #[test]
    fn scores_lie_in_unit_interval(p in probs(), q in probs(), gold in prop::collection::btree_set(word(), 1..6), k in 1usize..12) {
        let (a, h) = (ranked(p), ranked(q));
        let set = relatum_set("zzz", Relation::Synonymy, &gold);
        for v in [precision_at_1(&a, &set), recall_at_k(&a, &set)] {
            prop_assert!(v >= 0.into() && v <= 1.into());
        }
        for w in WORDS {
            let s = rank_score(w, &a, k);
            prop_assert!(s > 0.0 && s <= 1.0);
        }
        let rho = prototypicality_instance(&a, &h);
        prop_assert!((0.0..=1.0).contains(&rho));
        let aw: Vec<&str> = a.top(k).iter().map(|i| i.word.as_str()).collect();
        let hw: Vec<&str> = h.top(k).iter().map(|i| i.word.as_str()).collect();
        let s = edit_similarity(&aw, &hw, k);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s, edit_similarity(&hw, &aw, k));
        prop_assert_eq!(prototypicality_instance(&a, &a), 1.0);
    }

    #[test]
    fn eta_is_non_increasing(ds in prop::collection::vec(prop::option::of(0.0f64..=1.0), 30)) {
        let mut pairs = Vec::new();
        let mut i = 0;
        for r in Relation::ALL {
            for s in Relation::ALL {
                if r == s {
                    continue;
                }
                if let Some(d) = ds[i] {
                    pairs.push(PairScore { r, s, delta_rs: d, delta_rr: 0.0, d, targets: 1, excluded_targets: 0 });
                }
                i += 1;
            }
        }
        let a = audc(&DistinguishabilityMatrix { agent: "m".into(), pairs });
        prop_assert!(a.area >= 0.0 && a.area <= 30.0);
        let mut last = usize::MAX;
        for step in 0..=100 {
            let e = a.eta(step as f64 / 100.0);
            prop_assert!(e <= last);
            last = e;
        }
        prop_assert_eq!(a.eta(1.0), 0);
    }

    #[test]
    fn symmetry_indicator_commutes(p in probs(), q in probs(), w in word(), v in word(), k in 1usize..10) {
        let (lw, lv) = (ranked(p), ranked(q));
        let fwd = symmetry_indicator(&lw, v, &lv, w, k);
        prop_assert_eq!(fwd, symmetry_indicator(&lv, w, &lw, v, k));
        if fwd {
            prop_assert!(symmetry_indicator(&lw, v, &lv, w, k + 1));
        }
    }

    #[test]
    fn merge_is_convex_and_swappable(p in probs(), q in probs(), alpha in 0.0f64..=1.0) {
        let (a, an) = (dist(p), dist(q));
        let m = merge_determiner(&a, &an, alpha).unwrap();
        let swapped = merge_determiner(&an, &a, 1.0 - alpha).unwrap();
        for (w, x) in m.probs() {
            prop_assert!((x - swapped.get(w)).abs() < 1e-12);
        }
        prop_assert!((m.mass() - (alpha * a.mass() + (1.0 - alpha) * an.mass())).abs() < 1e-12);
    }

    #[test]
    fn tests_report_valid_p(x in prop::collection::vec(0u8..5, 1..15), y in prop::collection::vec(0u8..5, 1..15)) {
        let n = x.len().min(y.len());
        let xf: Vec<f64> = x[..n].iter().map(|&v| v as f64).collect();
        let yf: Vec<f64> = y[..n].iter().map(|&v| v as f64).collect();
        let w = wilcoxon_signed_rank(&xf, &yf, 0.05).unwrap();
        let back = wilcoxon_signed_rank(&yf, &xf, 0.05).unwrap();
        prop_assert!((w.p_value - back.p_value).abs() < 1e-12);
        let xb: Vec<bool> = xf.iter().map(|v| *v > 2.0).collect();
        let yb: Vec<bool> = yf.iter().map(|v| *v > 2.0).collect();
        let m = mcnemar(&xb, &yb, 0.05).unwrap();
        prop_assert_eq!(m.p_value, mcnemar(&yb, &xb, 0.05).unwrap().p_value);
        let u = mann_whitney_u(&x.iter().map(|&v| v as f64).collect::<Vec<_>>(), &y.iter().map(|&v| v as f64).collect::<Vec<_>>(), 0.05).unwrap();
        for r in [w, m, u] {
            prop_assert!((0.0..=1.0).contains(&r.p_value));
            prop_assert_eq!(r.significant, r.p_value < r.alpha);
        }
    }

    #[test]
    fn probe_ids_are_stable(r in relation(), w in word(), prompt in "[a-z]{1,4}") {
        let a = ProbeId::derive(r, &prompt, w);
        prop_assert_eq!(&a, &ProbeId::derive(r, &prompt, w));
        prop_assert!(a.as_str().starts_with(&r.label().to_lowercase()));
        prop_assert_ne!(a, ProbeId::derive(r, &format!("{prompt}x"), w));
    }
}
