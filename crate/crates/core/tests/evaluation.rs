mod common;

use relprobe::dataset::Dataset;
use relprobe::evaluation::{evaluate_agent, gold_selection, AgentEvaluation, EvalOptions, IngestStats};
use relprobe::lexicon::Relation;
use relprobe::metrics::Metric;
use relprobe::report::{
    ensure_paired, macro_avg, micro, paired_test, pretraining_comparison, significance_grid, size_difference_table,
    write_reports, FrequencyTable, MetricKey,
};
use relprobe::responses::{AgentResponses, HumanIngestStats, ModelIngestStats, Pretraining};
use relprobe::Error;

fn opts() -> EvalOptions {
    EvalOptions {
        symmetry_k: vec![1, 5, 10],
        oor_k: 10,
    }
}

fn model(ds: &Dataset, seed: u64, name: &str, pt: Pretraining, family: &str, params: u64) -> AgentResponses {
    let mut r = common::model_responses(ds, seed, name, pt);
    r.agent.family = Some(family.into());
    r.agent.parameters = Some(params);
    r
}

fn evaluations(ds: &Dataset) -> Vec<AgentEvaluation> {
    let human = common::human_responses(ds, 7);
    let sel = gold_selection(&human, ds);
    let mut evals = vec![evaluate_agent(ds, &human, IngestStats::Human(HumanIngestStats::default()), Some((&human, &sel)), &opts()).unwrap()];
    for (seed, name, pt, fam, params) in [
        (11, "toy-small", Pretraining::Mlm, "toy", 100),
        (13, "toy-large", Pretraining::Mlm, "toy", 300),
        (12, "gen-a", Pretraining::Clm, "gen", 50),
    ] {
        let m = model(ds, seed, name, pt, fam, params);
        let e = evaluate_agent(ds, &m, IngestStats::Model(ModelIngestStats::default()), Some((&human, &sel)), &opts()).unwrap();
        evals.push(e);
    }
    evals
}

#[test]
fn evaluations_hold_invariants_and_round_trip() {
    let ds = common::fixture_dataset();
    let dir = tempfile::tempdir().unwrap();
    for e in evaluations(&ds) {
        e.check_invariants().unwrap();
        assert_eq!(e.scores.len(), 6 * 2 + 2 * 3 + 4);
        e.save(dir.path()).unwrap();
        let back = AgentEvaluation::load(&dir.path().join(format!("{}.json", e.agent.name))).unwrap();
        assert_eq!(back, e);
        assert_eq!(e.prototypicality_gold.as_deref(), Some("humans"));
        assert_eq!(e.selection.is_some(), e.agent.is_human());
    }
}

#[test]
fn human_pool_scores_itself_perfectly_on_prototypicality() {
    let ds = common::fixture_dataset();
    let evals = evaluations(&ds);
    for r in Relation::PROTOTYPICAL {
        if let Some(v) = evals[0].score(Metric::Prototypicality, r, None).and_then(|s| s.value) {
            assert_eq!(v, 1.0, "{r}");
        }
    }
    assert!(!evals[0].entropy.is_empty());
    assert!(evals[1].entropy.is_empty());
}

#[test]
fn micro_and_macro_averages() {
    let ds = common::fixture_dataset();
    let e = &evaluations(&ds)[1];
    let key = MetricKey { metric: Metric::Soundness, k: None };
    let units: Vec<f64> = e
        .scores
        .iter()
        .filter(|s| s.metric == Metric::Soundness)
        .flat_map(|s| s.units.iter().map(|u| u.value))
        .collect();
    let rels: Vec<f64> = e.scores.iter().filter(|s| s.metric == Metric::Soundness).filter_map(|s| s.value).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!((micro(e, key).unwrap() - mean(&units)).abs() < 1e-12);
    assert!((macro_avg(e, key).unwrap() - mean(&rels)).abs() < 1e-12);
}

#[test]
fn paired_tests_pick_the_right_family() {
    let ds = common::fixture_dataset();
    let evals = evaluations(&ds);
    let s = evals[1].score(Metric::Soundness, Relation::Hypernymy, None).unwrap();
    let self_test = paired_test(s, s, 0.05).unwrap();
    assert!(self_test.degenerate);
    assert_eq!(self_test.p_value, 1.0);
    let c1 = evals[1].score(Metric::Completeness, Relation::Hypernymy, None).unwrap();
    let c2 = evals[2].score(Metric::Completeness, Relation::Hypernymy, None).unwrap();
    assert_eq!(paired_test(c1, c2, 0.05).unwrap().test.name(), "wilcoxon");
    let s2 = evals[2].score(Metric::Soundness, Relation::Hypernymy, None).unwrap();
    assert_eq!(paired_test(s, s2, 0.05).unwrap().test.name(), "mcnemar");
}

#[test]
fn comparison_tables() {
    let ds = common::fixture_dataset();
    let evals = evaluations(&ds);
    let size = size_difference_table(&evals, 0.05).unwrap();
    assert!(!size.is_empty());
    assert!(size.iter().all(|r| r.group == "toy" && r.agent_a == "toy-small" && r.agent_b == "toy-large"));
    let row = size.iter().find(|r| r.metric == "soundness" && r.scope == "HYP").unwrap();
    let v = |name: &str| {
        evals.iter().find(|e| e.agent.name == name).unwrap().score(Metric::Soundness, Relation::Hypernymy, None).unwrap().value.unwrap()
    };
    assert!((row.delta.unwrap() - (v("toy-large") - v("toy-small"))).abs() < 1e-12);

    let (best, counts) = pretraining_comparison(&evals, 0.05).unwrap();
    for b in &best {
        assert_eq!(b.best_clm, "gen-a");
        assert!(b.cell.starts_with('(') != b.significant);
    }
    assert!(counts.iter().all(|c| c.pairs == 2 && c.mlm_significantly_better + c.clm_significantly_better <= 2));
    let grid = significance_grid(&evals, 0.05).unwrap();
    assert!(grid.iter().all(|g| (0.0..=1.0).contains(&g.p) && g.significant == (g.p < 0.05)));

    let only_mlm: Vec<AgentEvaluation> = evals.iter().filter(|e| e.agent.pretraining == Some(Pretraining::Mlm)).cloned().collect();
    assert!(matches!(pretraining_comparison(&only_mlm, 0.05), Err(Error::MissingAgentKind(k)) if k == "clm"));

    let mut other = evals[1].clone();
    other.probe_set_hash = "different".into();
    assert!(matches!(ensure_paired(&evals[2], &other), Err(Error::ProbeSetMismatch { .. })));
}

#[test]
fn reports_are_deterministic() {
    let ds = common::fixture_dataset();
    let freq = FrequencyTable::from_pairs(ds.vocab.iter().enumerate().map(|(i, w)| (w.to_string(), (i as u64 * 37) % 11 + 1)));
    let write = || {
        let dir = tempfile::tempdir().unwrap();
        let files = write_reports(dir.path(), &ds, &evaluations(&ds), Some(&freq), 0.05).unwrap();
        let mut out: Vec<(String, Vec<u8>)> = files
            .iter()
            .map(|f| (f.strip_prefix(dir.path()).unwrap().display().to_string(), std::fs::read(f).unwrap()))
            .collect();
        out.sort();
        out
    };
    let a = write();
    let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
    for want in [
        "reports/summary.csv",
        "stats/significance_grid.csv",
        "stats/size_difference.csv",
        "stats/pretraining_best.csv",
        "stats/levene.csv",
        "stats/entropy_mann_whitney.csv",
        "stats/frequency_spearman.csv",
        "stats/oor.csv",
        "figures/metric_bars.csv",
    ] {
        assert!(names.contains(&want), "{want} missing from {names:?}");
    }
    assert_eq!(a, write());
}
