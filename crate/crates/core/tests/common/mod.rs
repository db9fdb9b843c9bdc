#![allow(dead_code)]

pub mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relprobe::dataset::Dataset;
use relprobe::lexicon::{parse_tuples, LexiconGraph, TupleFormat, Vocabulary};
use relprobe::probegen::TemplateSet;
use relprobe::responses::{
    ingest_human, ingest_model_rows, AgentId, AgentResponses, BogusKey, ModelResponseRow, Pretraining, Variant,
};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture_dataset() -> Dataset {
    let src = std::fs::read_to_string(fixture("tuples.jsonl")).unwrap();
    let ingest = parse_tuples(src.as_bytes(), TupleFormat::NativeJsonl, "tuples.jsonl").unwrap();
    let vocab = Vocabulary::load_intersection(&[fixture("vocab.txt"), fixture("vocab_b.txt")]).unwrap();
    let graph = LexiconGraph::load(&fixture("lexicon.jsonl")).unwrap();
    Dataset::build(&[ingest], vocab, Some(&graph), TemplateSet::builtin(), None).unwrap()
}

/// Candidate answers for a probe: every relatum of the target plus a few
/// out-of-relation words.
fn candidates(dataset: &Dataset, target: &str) -> Vec<String> {
    let mut words: BTreeSet<String> = dataset
        .sets
        .for_target(target)
        .flat_map(|s| s.words().map(str::to_string))
        .collect();
    for w in ["sky", "tree", "water", "moon", "room", "home"] {
        words.insert(w.to_string());
    }
    // Converse words so symmetry can fire.
    for t in dataset.tuples.iter().filter(|t| t.target == target) {
        words.insert(t.relatum.clone());
    }
    words.remove(target);
    words.into_iter().collect()
}

pub fn human_rows(dataset: &Dataset, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for (i, p) in dataset.probes.iter().enumerate() {
        let pool = candidates(dataset, &p.target);
        let subset = format!("s{}", i % 3);
        for part in 0..4 {
            let n = rng.gen_range(1..=5).min(pool.len());
            // Skewed draw so that popular answers repeat across participants.
            let mut words: Vec<String> = Vec::new();
            while words.len() < n {
                let idx = (rng.gen::<f64>().powi(2) * pool.len() as f64) as usize;
                let w = &pool[idx.min(pool.len() - 1)];
                if !words.contains(w) {
                    words.push(w.clone());
                }
            }
            rows.push(
                serde_json::json!({"participant": format!("p{part}"), "subset": subset, "probe": p.id, "words": words})
                    .to_string(),
            );
        }
    }
    for s in 0..3 {
        for part in 0..4 {
            rows.push(
                serde_json::json!({"participant": format!("p{part}"), "subset": format!("s{s}"), "probe": "bogus-earth", "words": ["sun"]})
                    .to_string(),
            );
        }
    }
    rows
}

pub fn human_responses(dataset: &Dataset, seed: u64) -> AgentResponses {
    let key = BogusKey::new([("bogus-earth", vec!["sun"])]);
    let src = human_rows(dataset, seed).join("\n");
    ingest_human(src.as_bytes(), "humans", &dataset.probes, &key, AgentId::human("humans"))
        .unwrap()
        .0
}

fn random_topk(rng: &mut ChaCha8Rng, pool: &[String]) -> Vec<(String, f64)> {
    let mut words = pool.to_vec();
    words.shuffle(rng);
    let n = rng.gen_range(1..=words.len().min(12));
    let mut scores: Vec<f64> = (0..n).map(|_| rng.gen_range(1..20) as f64).collect();
    if n > 2 && rng.gen_bool(0.3) {
        scores[1] = scores[0];
    }
    let total: f64 = scores.iter().sum::<f64>() * 1.25;
    words.into_iter().zip(scores).map(|(w, s)| (w, s / total)).collect()
}

pub fn model_rows(dataset: &Dataset, seed: u64, agent: &str) -> Vec<ModelResponseRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for p in dataset.probes.iter() {
        let pool = candidates(dataset, &p.target);
        let variants: &[Variant] = if p.det_before_v() { &[Variant::A, Variant::An] } else { &[Variant::None] };
        for &v in variants {
            rows.push(ModelResponseRow {
                probe: p.id.clone(),
                agent: agent.to_string(),
                variant: v,
                topk: random_topk(&mut rng, &pool),
            });
        }
    }
    rows
}

pub fn model_responses(dataset: &Dataset, seed: u64, agent: &str, pretraining: Pretraining) -> AgentResponses {
    let rows = model_rows(dataset, seed, agent).into_iter().enumerate();
    let id = AgentId::model(agent, pretraining);
    ingest_model_rows(rows, agent, &dataset.probes, id, 0.7).unwrap().0
}

/// Relatum sets as plain maps.
pub fn plain_sets(dataset: &Dataset) -> BTreeMap<(String, String), BTreeSet<String>> {
    dataset
        .sets
        .to_jsonl_rows()
        .into_iter()
        .map(|row| ((row.w, row.r.label().to_string()), row.y.into_iter().collect()))
        .collect()
}
