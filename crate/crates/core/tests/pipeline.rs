mod common;

use std::collections::BTreeSet;

use relprobe::dataset::Dataset;
use relprobe::lexicon::{parse_tuples, Relation, TupleFormat};
use relprobe::probegen::TemplateSet;

fn set(ds: &Dataset, target: &str, r: Relation) -> BTreeSet<String> {
    ds.sets.get(target, r).map(|s| s.words().map(str::to_string).collect()).unwrap_or_default()
}

fn words(ws: &[&str]) -> BTreeSet<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

#[test]
fn ingest_drops_non_nouns_and_duplicates() {
    let src = std::fs::read_to_string(common::fixture("tuples.jsonl")).unwrap();
    let ingest = parse_tuples(src.as_bytes(), TupleFormat::NativeJsonl, "tuples.jsonl").unwrap();
    assert_eq!(ingest.rows, 9);
    assert_eq!(ingest.non_noun, 1);
    assert_eq!(ingest.duplicates, 1);
    assert_eq!(ingest.tuples.len(), 7);
}

#[test]
fn fixture_summary() {
    let ds = common::fixture_dataset();
    ds.check_invariants().unwrap();
    assert_eq!(ds.summary.out_of_vocab_tuples, 1);
    assert_eq!(ds.source_tuples.len(), 6);
    assert_eq!(ds.tuples.len(), 12);
    // "house" listed twice, "sprint"/"run" only in one list.
    assert!(ds.vocab.contains("house"));
    assert!(!ds.vocab.contains("sprint"));
    let targets: Vec<usize> = Relation::ALL.iter().map(|&r| ds.inventory.count(r)).collect();
    assert_eq!(targets, vec![3, 2, 1, 1, 2, 2]);
    let templates = TemplateSet::builtin();
    for r in Relation::ALL {
        assert_eq!(ds.probes.counts()[&r], ds.inventory.count(r) * templates.for_relation(r).count());
    }
}

#[test]
fn relatum_sets_match_hand_derivation() {
    let ds = common::fixture_dataset();
    use Relation::*;
    assert_eq!(set(&ds, "robin", Hypernymy), words(&["bird", "animal"]));
    assert_eq!(set(&ds, "bird", Hypernymy), words(&["animal"]));
    assert_eq!(set(&ds, "bird", Hyponymy), words(&["robin"]));
    assert_eq!(set(&ds, "bird", Meronymy), words(&["wing"]));
    assert_eq!(set(&ds, "animal", Hyponymy), words(&["bird", "cat", "dog", "robin"]));
    assert_eq!(set(&ds, "dog", Meronymy), words(&["tail"]));
    assert_eq!(set(&ds, "building", Meronymy), words(&["roof", "wall"]));
    assert_eq!(set(&ds, "building", Hypernymy), words(&["structure"]));
    assert_eq!(set(&ds, "wall", Holonymy), words(&["building", "house"]));
    assert_eq!(set(&ds, "wall", Meronymy), words(&["brick"]));
    assert_eq!(set(&ds, "hot", Antonymy), words(&["cold"]));
    assert_eq!(set(&ds, "hot", Synonymy), words(&["warm"]));
    assert_eq!(set(&ds, "cold", Antonymy), words(&["hot"]));
    // chilly is out of vocabulary
    assert!(set(&ds, "cold", Synonymy).is_empty());
    // conclusion reaches ending through two relations and is pruned
    assert_eq!(set(&ds, "ending", Synonymy), words(&["termination"]));
    assert!(set(&ds, "ending", Hyponymy).is_empty());
    assert_eq!(set(&ds, "ending", Antonymy), words(&["beginning"]));
    assert_eq!(set(&ds, "termination", Synonymy), words(&["ending"]));
}

#[test]
fn pruned_sets_are_disjoint() {
    let ds = common::fixture_dataset();
    for t in ds.sets.targets() {
        let sets: Vec<_> = ds.sets.for_target(t).collect();
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                assert!(a.words().all(|w| !b.contains(w)), "{t}: {} and {} overlap", a.relation, b.relation);
            }
        }
    }
}

#[test]
fn save_and_load_round_trip() {
    let ds = common::fixture_dataset();
    let dir = tempfile::tempdir().unwrap();
    ds.save(dir.path()).unwrap();
    let back = Dataset::load(dir.path()).unwrap();
    assert_eq!(back.tuples, ds.tuples);
    assert_eq!(back.source_tuples, ds.source_tuples);
    assert_eq!(back.sets.to_jsonl_rows().len(), ds.sets.to_jsonl_rows().len());
    assert_eq!(common::plain_sets(&back), common::plain_sets(&ds));
    let ids: Vec<_> = ds.probes.iter().map(|p| p.id.clone()).collect();
    let back_ids: Vec<_> = back.probes.iter().map(|p| p.id.clone()).collect();
    assert_eq!(ids, back_ids);
    // the saved form is itself stable
    let again = tempfile::tempdir().unwrap();
    back.save(again.path()).unwrap();
    for f in ["probes.jsonl", "relatum_sets.jsonl", "augmented.jsonl"] {
        assert_eq!(
            std::fs::read(dir.path().join(f)).unwrap(),
            std::fs::read(again.path().join(f)).unwrap(),
            "{f}"
        );
    }
}
