//! Cross-module flows through the public API.

use nli_forge::dataset::{read_dataset, write_dataset};
use nli_forge::fragments::{generate_fragment, Category, EntityLexicon};
use nli_forge::hans::{generate_hans, TemplateSet};
use nli_forge::heuristics::{scan_corpus, Granularity};
use nli_forge::resources::{bundled, EntityList, SubstitutionLexicon, Vocabulary};
use nli_forge::score::{score, PredictionFile};
use nli_forge::stress::{annotate, parse_annotations, perturb_substitution, write_annotations, PerturbKind};
use nli_forge::Label;

fn hans(per_template: usize, seed: u64) -> nli_forge::hans::HansOutput {
    let vocab = Vocabulary::parse(bundled::VOCABULARY, "vocabulary.tsv").unwrap();
    let ts = TemplateSet::parse(bundled::TEMPLATES, "templates.tsv", &vocab).unwrap();
    generate_hans(&ts, &vocab, per_template, seed).unwrap()
}

#[test]
fn hans_output_round_trips_through_disk() {
    let out = hans(10, 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hans.jsonl");
    write_dataset(&out.dataset, &path).unwrap();
    let back = read_dataset(&path).unwrap();
    assert_eq!(back.pairs, out.dataset.pairs);
    assert_eq!(back.meta, out.dataset.meta);
    assert!(back.validate().is_empty());
}

#[test]
fn annotations_survive_serialisation_and_feed_substitution() {
    let out = hans(20, 2);
    let text = write_annotations(&out.annotations);
    let parsed = parse_annotations(&text, "mem").unwrap();
    assert_eq!(parsed, out.annotations);
    let aps = annotate(&out.dataset, parsed).unwrap();
    let lex = SubstitutionLexicon::parse(bundled::ANTONYMS, "antonyms.tsv").unwrap();
    let ds = perturb_substitution(&aps, &lex, PerturbKind::Antonym, 3, None);
    assert!(!ds.is_empty());
    assert!(ds
        .pairs
        .iter()
        .all(|p| p.label == Label::Contradiction && p.premise != p.hypothesis));
}

#[test]
fn every_hans_pair_is_counted_by_the_scan() {
    let out = hans(10, 3);
    let r = scan_corpus(&out.dataset, Granularity::Character);
    assert_eq!(r.lexical_overlap.total(), out.dataset.len());
    let subseq = out
        .dataset
        .pairs
        .iter()
        .filter(|p| p.subcategory == "subsequence")
        .count();
    assert!(r.subsequence.total() >= subseq);
}

#[test]
fn gold_as_prediction_scores_perfectly() {
    let names = EntityList::parse(bundled::NAMES, "names").unwrap();
    let places = EntityList::parse(bundled::PLACES, "places").unwrap();
    let lex = EntityLexicon::new(&names, &places).unwrap();
    let ds = generate_fragment(Category::Counting, &lex, 60, 8).unwrap();
    let preds = PredictionFile {
        labels: ds.pairs.iter().map(|p| (p.id.clone(), p.label)).collect(),
    };
    let r = score(&ds, &preds).unwrap();
    assert_eq!(r.overall.correct, 60);
    assert_eq!(r.per_subcategory.len(), 1);
    assert_eq!(r.with_delta(100.0).unwrap().delta, Some(0.0));
}
