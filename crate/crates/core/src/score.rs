//! Scoring prediction files against gold data, and the annotation
//! quality-control statistic.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::Deserialize;

use crate::resources::tsv_rows;
use crate::seed::rng_for;
use crate::{Dataset, Error, Label, Result};

/// Predicted label per pair id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PredictionFile {
    pub labels: BTreeMap<String, Label>,
}

#[derive(Deserialize)]
struct PredictionLine {
    id: String,
    label: String,
}

impl PredictionFile {
    /// Reads `{"id": .., "label": ..}` lines. Repeated ids are an error;
    /// other keys are ignored.
    pub fn read<R: BufRead>(input: R, origin: &str) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for (i, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::io(Path::new(origin), e))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: PredictionLine =
                serde_json::from_str(&line).map_err(|e| Error::load(origin, i + 1, e.to_string()))?;
            let label = rec
                .label
                .parse()
                .map_err(|e: crate::dataset::UnknownLabel| Error::load(origin, i + 1, e.to_string()))?;
            if labels.insert(rec.id.clone(), label).is_some() {
                return Err(Error::DuplicateId(rec.id));
            }
        }
        Ok(PredictionFile { labels })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(std::io::BufReader::new(file), &path.display().to_string())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Accuracy {
    pub correct: usize,
    pub total: usize,
}

impl Accuracy {
    fn add(&mut self, ok: bool) {
        self.total += 1;
        self.correct += usize::from(ok);
    }

    /// None on an empty subset.
    pub fn value(&self) -> Option<f64> {
        (self.total > 0).then(|| self.correct as f64 / self.total as f64)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreReport {
    pub overall: Accuracy,
    pub per_category: BTreeMap<String, Accuracy>,
    /// Keyed by (category, subcategory).
    pub per_subcategory: BTreeMap<(String, String), Accuracy>,
    pub per_gold_label: BTreeMap<Label, Accuracy>,
    pub entailment: Accuracy,
    /// Gold contradiction and neutral pooled.
    pub non_entailment: Accuracy,
    /// Percentage points, when a reference accuracy was supplied.
    pub delta: Option<f64>,
}

impl ScoreReport {
    pub fn overall_acc(&self) -> f64 {
        self.overall.value().unwrap_or(0.0)
    }

    pub fn entailment_acc(&self) -> Option<f64> {
        self.entailment.value()
    }

    pub fn non_entailment_acc(&self) -> Option<f64> {
        self.non_entailment.value()
    }

    /// Sets `delta` from a reference accuracy in percent.
    pub fn with_delta(mut self, reference_pct: f64) -> Result<Self> {
        self.delta = Some(delta(reference_pct, &self)?);
        Ok(self)
    }

    fn rows(&self) -> Vec<(String, String, Option<Accuracy>, Option<f64>)> {
        let mut rows = vec![("overall".to_string(), "all".to_string(), Some(self.overall), None)];
        for (k, a) in &self.per_category {
            rows.push(("category".into(), k.clone(), Some(*a), None));
        }
        for ((c, s), a) in &self.per_subcategory {
            rows.push(("subcategory".into(), format!("{c}/{s}"), Some(*a), None));
        }
        for (l, a) in &self.per_gold_label {
            rows.push(("gold_label".into(), l.to_string(), Some(*a), None));
        }
        rows.push(("split".into(), "entailment".into(), Some(self.entailment), None));
        rows.push(("split".into(), "non-entailment".into(), Some(self.non_entailment), None));
        if let Some(d) = self.delta {
            rows.push(("delta".into(), "reference - non-entailment".into(), None, Some(d)));
        }
        rows
    }

    fn cells(acc: Option<Accuracy>, delta: Option<f64>) -> [String; 3] {
        match (acc, delta) {
            (Some(a), _) => [
                a.correct.to_string(),
                a.total.to_string(),
                a.value().map_or("-".to_string(), |v| pct(v * 100.0)),
            ],
            (None, Some(d)) => [String::new(), String::new(), pct(d)],
            (None, None) => [String::new(), String::new(), "-".into()],
        }
    }

    /// Tab-separated, accuracies as percentages with two decimals; empty
    /// subsets show `-`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("scope\tkey\tcorrect\ttotal\taccuracy\n");
        for (scope, key, acc, delta) in self.rows() {
            let [c, t, a] = Self::cells(acc, delta);
            let _ = writeln!(out, "{scope}\t{key}\t{c}\t{t}\t{a}");
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| scope | key | correct | total | accuracy |\n|---|---|---:|---:|---:|\n");
        for (scope, key, acc, delta) in self.rows() {
            let [c, t, a] = Self::cells(acc, delta);
            let _ = writeln!(out, "| {scope} | {key} | {c} | {t} | {a} |");
        }
        out
    }
}

fn pct(v: f64) -> String {
    format!("{v:.2}")
}

/// Scores every gold pair; missing predictions are an error listing them.
pub fn score(gold: &Dataset, preds: &PredictionFile) -> Result<ScoreReport> {
    let missing: Vec<String> = gold
        .pairs
        .iter()
        .filter(|p| !preds.labels.contains_key(&p.id))
        .map(|p| p.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingPredictions(missing));
    }
    let mut ids = HashSet::new();
    let mut r = ScoreReport::default();
    for p in &gold.pairs {
        if !ids.insert(p.id.as_str()) {
            return Err(Error::DuplicateId(p.id.clone()));
        }
        let ok = preds.labels[&p.id] == p.label;
        r.overall.add(ok);
        r.per_category.entry(p.category.clone()).or_default().add(ok);
        r.per_subcategory
            .entry((p.category.clone(), p.subcategory.clone()))
            .or_default()
            .add(ok);
        r.per_gold_label.entry(p.label).or_default().add(ok);
        if p.label == Label::Entailment {
            r.entailment.add(ok);
        } else {
            r.non_entailment.add(ok);
        }
    }
    Ok(r)
}

/// Reference accuracy minus non-entailment accuracy, both in percent.
pub fn delta(reference_pct: f64, report: &ScoreReport) -> Result<f64> {
    let ne = report.non_entailment_acc().ok_or(Error::NoNonEntailment)?;
    Ok(reference_pct - ne * 100.0)
}

pub const ANNOTATORS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationRow {
    pub id: String,
    pub gold: Label,
    pub votes: Vec<Label>,
}

/// Gold labels with exactly five annotator labels per id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationSheet {
    rows: Vec<AnnotationRow>,
}

impl AnnotationSheet {
    pub fn new(rows: Vec<AnnotationRow>) -> Result<Self> {
        let mut ids = HashSet::new();
        for r in &rows {
            if r.votes.len() != ANNOTATORS {
                return Err(Error::AnnotatorCount {
                    id: r.id.clone(),
                    found: r.votes.len(),
                });
            }
            if !ids.insert(r.id.clone()) {
                return Err(Error::DuplicateId(r.id.clone()));
            }
        }
        Ok(AnnotationSheet { rows })
    }

    pub fn rows(&self) -> &[AnnotationRow] {
        &self.rows
    }

    /// TSV `id gold a1..a5`; a header row starting with `id` is skipped.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (line, cols) in tsv_rows(text) {
            if cols[0] == "id" {
                continue;
            }
            let label = |s: &str| {
                s.trim()
                    .parse::<Label>()
                    .map_err(|e| Error::load(origin, line, e.to_string()))
            };
            if cols.len() < 2 {
                return Err(Error::load(origin, line, "expected id, gold and annotator labels"));
            }
            let votes = cols[2..]
                .iter()
                .filter(|c| !c.trim().is_empty())
                .map(|c| label(c))
                .collect::<Result<Vec<_>>>()?;
            rows.push(AnnotationRow {
                id: cols[0].to_string(),
                gold: label(cols[1])?,
                votes,
            });
        }
        Self::new(rows)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// The single most frequent vote, or None on a tie for first place.
pub fn majority(votes: &[Label]) -> Option<Label> {
    let mut counts: Vec<(usize, Label)> = Label::ALL
        .iter()
        .map(|&l| (votes.iter().filter(|&&v| v == l).count(), l))
        .collect();
    counts.sort_by_key(|c| std::cmp::Reverse(c.0));
    (counts[0].0 > counts[1].0).then_some(counts[0].1)
}

/// Share of ids whose majority vote equals gold; ties count as
/// disagreement. An empty sheet scores 0.
pub fn agreement(sheet: &AnnotationSheet) -> f64 {
    if sheet.rows.is_empty() {
        return 0.0;
    }
    let agree = sheet.rows.iter().filter(|r| majority(&r.votes) == Some(r.gold)).count();
    agree as f64 / sheet.rows.len() as f64
}

/// A blank sheet for the given pairs, ready for five annotators.
pub fn blank_sheet(dataset: &Dataset) -> String {
    let mut out = String::from("id\tgold\ta1\ta2\ta3\ta4\ta5\n");
    for p in &dataset.pairs {
        let _ = writeln!(out, "{}\t{}\t\t\t\t\t", p.id, p.label);
    }
    out
}

/// `n` pairs drawn uniformly without replacement, in draw order.
pub fn sample_for_annotation(dataset: &Dataset, n: usize, seed: u64) -> Result<Dataset> {
    if n > dataset.len() {
        return Err(Error::SampleTooLarge {
            requested: n,
            available: dataset.len(),
        });
    }
    let mut idx: Vec<usize> = (0..dataset.len()).collect();
    let mut rng = rng_for(seed, "sample");
    let (chosen, _) = idx.partial_shuffle(&mut rng, n);
    let mut out = Dataset::new(chosen.iter().map(|&i| dataset.pairs[i].clone()).collect());
    out.meta = dataset.meta.clone();
    out.meta.insert("sample_seed".into(), seed.to_string());
    out.meta.insert("sample_size".into(), n.to_string());
    out.meta.insert("sampled_from".into(), dataset.len().to_string());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::NliPair;
    use proptest::prelude::*;

    fn pair(id: &str, label: Label, cat: &str) -> NliPair {
        let mut p = NliPair::new(format!("前提{id}。"), format!("假设{id}。"), label, cat, "x");
        p.id = id.to_string();
        p
    }

    fn preds(items: &[(&str, Label)]) -> PredictionFile {
        PredictionFile {
            labels: items.iter().map(|(i, l)| (i.to_string(), *l)).collect(),
        }
    }

    /// A report whose non-entailment accuracy is exactly `correct / 10000`.
    fn non_entailment_report(correct: usize) -> ScoreReport {
        ScoreReport {
            non_entailment: Accuracy { correct, total: 10_000 },
            ..Default::default()
        }
    }

    #[test]
    fn three_of_four() {
        use Label::*;
        let gold = Dataset::new(vec![
            pair("a", Entailment, "c1"),
            pair("b", Neutral, "c1"),
            pair("c", Contradiction, "c2"),
            pair("d", Entailment, "c2"),
        ]);
        let r = score(
            &gold,
            &preds(&[
                ("a", Entailment),
                ("b", Neutral),
                ("c", Contradiction),
                ("d", Neutral),
                ("z", Neutral),
            ]),
        )
        .unwrap();
        assert_eq!(r.overall_acc(), 0.75);
        assert_eq!(r.entailment_acc(), Some(0.5));
        assert_eq!(r.non_entailment_acc(), Some(1.0));
        assert_eq!(r.per_category["c2"], Accuracy { correct: 1, total: 2 });
        assert!(r.to_tsv().contains("overall\tall\t3\t4\t75.00\n"));
        assert!(r.to_markdown().contains("| split | entailment | 1 | 2 | 50.00 |"));
    }

    #[test]
    fn all_entailment_has_no_non_entailment_split() {
        let gold = Dataset::new(vec![pair("a", Label::Entailment, "c")]);
        let r = score(&gold, &preds(&[("a", Label::Entailment)])).unwrap();
        assert_eq!(r.entailment_acc(), Some(1.0));
        assert_eq!(r.non_entailment_acc(), None);
        assert!(matches!(delta(80.0, &r), Err(Error::NoNonEntailment)));
        assert!(r.to_tsv().contains("split\tnon-entailment\t0\t0\t-\n"));
    }

    #[test]
    fn missing_predictions_are_listed() {
        let gold = Dataset::new(vec![pair("a", Label::Entailment, "c"), pair("b", Label::Neutral, "c")]);
        match score(&gold, &preds(&[("a", Label::Entailment)])) {
            Err(Error::MissingPredictions(ids)) => assert_eq!(ids, vec!["b".to_string()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn delta_matches_reported_gaps() {
        let d = delta(79.11, &non_entailment_report(6091)).unwrap();
        assert!((d - 18.20).abs() < 0.005, "{d}");
        let d = delta(73.73, &non_entailment_report(5780)).unwrap();
        assert!((d - 15.93).abs() < 0.005, "{d}");
        assert!(delta(60.91, &non_entailment_report(6091)).unwrap().abs() < 1e-9);
    }

    #[test]
    fn duplicate_prediction_ids_are_rejected() {
        let text = "{\"id\":\"a\",\"label\":\"neutral\"}\n{\"id\":\"a\",\"label\":\"entailment\"}\n";
        assert!(matches!(
            PredictionFile::read(text.as_bytes(), "p"),
            Err(Error::DuplicateId(_))
        ));
    }

    fn sheet_row(id: &str, gold: &str, votes: &str) -> String {
        let votes: Vec<String> = votes.chars().map(String::from).collect();
        format!("{id}\t{gold}\t{}", votes.join("\t"))
    }

    #[test]
    fn nine_of_ten_majorities() {
        let mut lines = vec!["id\tgold\ta1\ta2\ta3\ta4\ta5".to_string()];
        for i in 0..9 {
            lines.push(sheet_row(&format!("s{i}"), "E", ["EEEEE", "EEENC", "ENENE"][i % 3]));
        }
        lines.push(sheet_row("s9", "C", "CCNNE"));
        let sheet = AnnotationSheet::parse(&lines.join("\n"), "sheet").unwrap();
        assert_eq!(agreement(&sheet), 0.9);
    }

    #[test]
    fn unanimous_sheet_and_ties() {
        let sheet = AnnotationSheet::parse(&sheet_row("a", "N", "NNNNN"), "s").unwrap();
        assert_eq!(agreement(&sheet), 1.0);
        assert_eq!(
            majority(
                &"EENNC"
                    .chars()
                    .map(|c| c.to_string().parse().unwrap())
                    .collect::<Vec<_>>()
            ),
            None
        );
        let tie = AnnotationSheet::parse(&sheet_row("a", "E", "EENNC"), "s").unwrap();
        assert_eq!(agreement(&tie), 0.0);
        assert!(matches!(
            AnnotationSheet::parse(&sheet_row("a", "E", "EEEE"), "s"),
            Err(Error::AnnotatorCount { found: 4, .. })
        ));
    }

    #[test]
    fn sampling_is_seeded_and_bounded() {
        let ds = Dataset::new((0..1000).map(|i| pair(&format!("p{i}"), Label::Neutral, "c")).collect());
        let a = sample_for_annotation(&ds, 50, 3).unwrap();
        let b = sample_for_annotation(&ds, 50, 3).unwrap();
        assert_eq!(a, b);
        let ids: HashSet<_> = a.pairs.iter().map(|p| p.id.clone()).collect();
        assert_eq!(ids.len(), 50);
        let full = sample_for_annotation(&ds, 1000, 3).unwrap();
        let mut sorted: Vec<_> = full.pairs.iter().map(|p| p.id.clone()).collect();
        assert_ne!(sorted, ds.pairs.iter().map(|p| p.id.clone()).collect::<Vec<_>>());
        sorted.sort();
        let mut orig: Vec<_> = ds.pairs.iter().map(|p| p.id.clone()).collect();
        orig.sort();
        assert_eq!(sorted, orig);
        assert!(matches!(
            sample_for_annotation(&ds, 1001, 3),
            Err(Error::SampleTooLarge {
                requested: 1001,
                available: 1000
            })
        ));
    }

    /// (category, gold label, prediction correct) per row.
    fn arb_rows() -> impl Strategy<Value = Vec<(u8, u8, bool)>> {
        prop::collection::vec((0u8..4, 0u8..3, any::<bool>()), 1..60)
    }

    proptest! {
        #[test]
        fn category_accuracies_recompose_overall(rows in arb_rows()) {
            let mut pairs = Vec::new();
            let mut pr = BTreeMap::new();
            for (i, (cat, label, ok)) in rows.iter().enumerate() {
                let gold = Label::ALL[*label as usize];
                let id = format!("r{i}");
                pairs.push(pair(&id, gold, &format!("cat{cat}")));
                let pred = if *ok { gold } else { Label::ALL[(*label as usize + 1) % 3] };
                pr.insert(id, pred);
            }
            let r = score(&Dataset::new(pairs), &PredictionFile { labels: pr }).unwrap();
            let n = r.overall.total as f64;
            let weighted: f64 = r
                .per_category
                .values()
                .map(|a| a.total as f64 / n * a.value().unwrap())
                .sum();
            prop_assert!((weighted - r.overall_acc()).abs() < 1e-12);
            let split = r.entailment.correct + r.non_entailment.correct;
            prop_assert_eq!(split, r.overall.correct);
        }

        #[test]
        fn delta_is_linear_in_reference(reference in 0.0f64..100.0, correct in 0usize..=10_000) {
            let r = non_entailment_report(correct);
            let step = delta(reference + 1.0, &r).unwrap() - delta(reference, &r).unwrap();
            prop_assert!((step - 1.0).abs() < 1e-9);
        }
    }
}
