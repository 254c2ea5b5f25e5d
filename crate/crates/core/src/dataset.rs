//! NLI records, dataset files and record validation.
//!
//! A dataset file is JSON Lines, one object per pair with the keys `id`,
//! `premise`, `hypothesis`, `label`, `category`, `subcategory` and
//! `provenance`. Dataset-level metadata lives in a sidecar
//! `<name>.meta.json` next to it.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Entailment,
    Neutral,
    Contradiction,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Entailment, Label::Neutral, Label::Contradiction];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Entailment => "entailment",
            Label::Neutral => "neutral",
            Label::Contradiction => "contradiction",
        }
    }

    /// One-letter form for compact tables: E, N or C.
    pub fn short(self) -> char {
        match self {
            Label::Entailment => 'E',
            Label::Neutral => 'N',
            Label::Contradiction => 'C',
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownLabel(pub String);

impl fmt::Display for UnknownLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown label {:?}", self.0)
    }
}

impl std::error::Error for UnknownLabel {}

impl FromStr for Label {
    type Err = UnknownLabel;

    /// Accepts the full names and the one-letter forms, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "entailment" | "e" => Ok(Label::Entailment),
            "neutral" | "n" => Ok(Label::Neutral),
            "contradiction" | "c" => Ok(Label::Contradiction),
            _ => Err(UnknownLabel(s.to_string())),
        }
    }
}

/// One premise/hypothesis/label record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NliPair {
    pub id: String,
    pub premise: String,
    pub hypothesis: String,
    pub label: Label,
    pub category: String,
    pub subcategory: String,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

impl NliPair {
    /// A pair with an empty id; ids are assigned by [`Dataset::assign_ids`].
    pub fn new(
        premise: impl Into<String>,
        hypothesis: impl Into<String>,
        label: Label,
        category: impl Into<String>,
        subcategory: impl Into<String>,
    ) -> Self {
        NliPair {
            id: String::new(),
            premise: premise.into(),
            hypothesis: hypothesis.into(),
            label,
            category: category.into(),
            subcategory: subcategory.into(),
            provenance: BTreeMap::new(),
        }
    }

    pub fn with_provenance(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.provenance.insert(key.into(), value.into());
        self
    }
}

/// A record as it appears on disk, before the label is checked against the
/// closed label set. Used by the validator so that a bad label is reported
/// instead of aborting the read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPair {
    #[serde(default)]
    pub id: String,
    #[serde(default)]
    pub premise: String,
    #[serde(default)]
    pub hypothesis: String,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub category: String,
    #[serde(default)]
    pub subcategory: String,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
    /// Any keys beyond the core schema, e.g. diagnostic annotations.
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl RawPair {
    pub fn to_pair(&self) -> Result<NliPair, UnknownLabel> {
        Ok(NliPair {
            id: self.id.clone(),
            premise: self.premise.clone(),
            hypothesis: self.hypothesis.clone(),
            label: self.label.parse()?,
            category: self.category.clone(),
            subcategory: self.subcategory.clone(),
            provenance: self.provenance.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyId,
    EmptyPremise,
    EmptyHypothesis,
    UnknownLabel(String),
    DuplicateId(String),
    DuplicatePair { first_id: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyId => f.write_str("empty id"),
            Violation::EmptyPremise => f.write_str("empty premise"),
            Violation::EmptyHypothesis => f.write_str("empty hypothesis"),
            Violation::UnknownLabel(l) => write!(f, "unknown label {l:?}"),
            Violation::DuplicateId(id) => write!(f, "duplicate id {id}"),
            Violation::DuplicatePair { first_id } => {
                write!(f, "duplicate premise/hypothesis (first seen as {first_id})")
            }
        }
    }
}

fn text_violations(id: &str, premise: &str, hypothesis: &str) -> Vec<Violation> {
    let mut out = Vec::new();
    if id.trim().is_empty() {
        out.push(Violation::EmptyId);
    }
    if premise.trim().is_empty() {
        out.push(Violation::EmptyPremise);
    }
    if hypothesis.trim().is_empty() {
        out.push(Violation::EmptyHypothesis);
    }
    out
}

/// Record-level invariants of a typed pair. An empty result means the pair is
/// well formed.
pub fn validate_pair(pair: &NliPair) -> Vec<Violation> {
    text_violations(&pair.id, &pair.premise, &pair.hypothesis)
}

/// Record-level invariants of an on-disk record, including the label set.
pub fn validate_raw(raw: &RawPair) -> Vec<Violation> {
    let mut out = text_violations(&raw.id, &raw.premise, &raw.hypothesis);
    if raw.label.parse::<Label>().is_err() {
        out.push(Violation::UnknownLabel(raw.label.clone()));
    }
    out
}

/// Dataset-level uniqueness checks over ids and (premise, hypothesis) keys.
/// Returns (record index, violation).
pub fn uniqueness_violations<'a, I>(records: I) -> Vec<(usize, Violation)>
where
    I: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
{
    let mut ids = HashSet::new();
    let mut texts: HashMap<(&str, &str), &str> = HashMap::new();
    let mut out = Vec::new();
    for (i, (id, premise, hypothesis)) in records.into_iter().enumerate() {
        if !id.is_empty() && !ids.insert(id) {
            out.push((i, Violation::DuplicateId(id.to_string())));
        }
        if let Some(first) = texts.get(&(premise, hypothesis)) {
            out.push((
                i,
                Violation::DuplicatePair {
                    first_id: first.to_string(),
                },
            ));
        } else {
            texts.insert((premise, hypothesis), id);
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub pairs: Vec<NliPair>,
    pub meta: BTreeMap<String, String>,
}

impl Dataset {
    pub fn new(pairs: Vec<NliPair>) -> Self {
        Dataset {
            pairs,
            meta: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Drops later pairs whose (premise, hypothesis) already occurred.
    /// Returns the number of pairs removed.
    pub fn dedup(&mut self) -> usize {
        let before = self.pairs.len();
        let mut seen = HashSet::new();
        self.pairs
            .retain(|p| seen.insert((p.premise.clone(), p.hypothesis.clone())));
        before - self.pairs.len()
    }

    /// Assigns `<category>-<subcategory>-<counter>` ids, counting from 1 per
    /// (category, subcategory) in dataset order.
    pub fn assign_ids(&mut self) {
        let mut counters: HashMap<(String, String), usize> = HashMap::new();
        for pair in &mut self.pairs {
            let n = counters
                .entry((pair.category.clone(), pair.subcategory.clone()))
                .or_insert(0);
            *n += 1;
            pair.id = format!("{}-{}-{:06}", pair.category, pair.subcategory, n);
        }
    }

    /// All record and uniqueness violations, by pair index.
    pub fn validate(&self) -> Vec<(usize, Violation)> {
        let mut out: Vec<(usize, Violation)> = self
            .pairs
            .iter()
            .enumerate()
            .flat_map(|(i, p)| validate_pair(p).into_iter().map(move |v| (i, v)))
            .collect();
        out.extend(uniqueness_violations(
            self.pairs
                .iter()
                .map(|p| (p.id.as_str(), p.premise.as_str(), p.hypothesis.as_str())),
        ));
        out.sort_by_key(|(i, _)| *i);
        out
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for pair in &self.pairs {
            let line = serde_json::to_string(pair).expect("pairs always serialize");
            out.write_all(line.as_bytes())
                .and_then(|_| out.write_all(b"\n"))
                .map_err(|e| Error::io("<writer>", e))?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(input: R, origin: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::io(origin, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let pair: NliPair = serde_json::from_str(&line).map_err(|e| Error::load(origin, i + 1, e.to_string()))?;
            pairs.push(pair);
        }
        Ok(Dataset::new(pairs))
    }
}

/// `x.jsonl` → `x.meta.json`; any other name gets `.meta.json` appended.
pub fn meta_path(path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let stem = name.strip_suffix(".jsonl").unwrap_or(&name);
    path.with_file_name(format!("{stem}.meta.json"))
}

/// Writes the JSONL file and its metadata sidecar.
pub fn write_dataset(dataset: &Dataset, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    dataset.write_jsonl(&mut out)?;
    out.flush().map_err(|e| Error::io(path, e))?;

    let meta = meta_path(path);
    let mut text = serde_json::to_string_pretty(&dataset.meta).expect("string map serializes");
    text.push('\n');
    std::fs::write(&meta, text).map_err(|e| Error::io(&meta, e))
}

/// Reads a JSONL dataset, and its metadata sidecar when one exists.
pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut dataset = Dataset::read_jsonl(BufReader::new(file), &path.display().to_string())?;
    let meta = meta_path(path);
    if meta.exists() {
        let text = std::fs::read_to_string(&meta).map_err(|e| Error::io(&meta, e))?;
        dataset.meta = serde_json::from_str(&text)
            .map_err(|e| Error::load(meta.display().to_string(), e.line(), e.to_string()))?;
    }
    Ok(dataset)
}

/// Parsed records and malformed lines, each tagged with its 1-based line number.
pub type RawLines = (Vec<(usize, RawPair)>, Vec<(usize, String)>);

/// Reads records leniently for validation: malformed JSON lines are returned
/// as (line number, message) instead of failing the whole read.
pub fn read_raw(path: &Path) -> Result<RawLines> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_raw_lines(BufReader::new(file)).map_err(|e| Error::io(path, e))
}

/// Lenient JSONL reading: records that parse, and (line, message) for those
/// that do not. Lines are 1-based; blank lines are skipped.
pub fn read_raw_lines<R: BufRead>(input: R) -> std::io::Result<RawLines> {
    let mut records = Vec::new();
    let mut malformed = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RawPair>(&line) {
            Ok(r) => records.push((i + 1, r)),
            Err(e) => malformed.push((i + 1, e.to_string())),
        }
    }
    Ok((records, malformed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table2_swap() -> NliPair {
        let mut p = NliPair::new(
            "我们把银行职员留在电影院了。",
            "银行职员把我们留在电影院了。",
            Label::Contradiction,
            "hans",
            "lexical_overlap",
        );
        p.id = "hans-lexical_overlap-000001".into();
        p
    }

    #[test]
    fn well_formed_pair_validates() {
        assert!(validate_pair(&table2_swap()).is_empty());
    }

    #[test]
    fn empty_hypothesis_is_reported() {
        let mut p = table2_swap();
        p.hypothesis = "  ".into();
        assert_eq!(validate_pair(&p), vec![Violation::EmptyHypothesis]);
        assert_eq!(Violation::EmptyHypothesis.to_string(), "empty hypothesis");
    }

    #[test]
    fn unknown_label_is_reported() {
        let line = r#"{"id":"x","premise":"a","hypothesis":"b","label":"maybe","category":"c","subcategory":"d"}"#;
        let raw: RawPair = serde_json::from_str(line).unwrap();
        assert_eq!(validate_raw(&raw), vec![Violation::UnknownLabel("maybe".into())]);
        assert!(raw.to_pair().is_err());
    }

    #[test]
    fn labels_serialize_as_lowercase_names() {
        for l in Label::ALL {
            let s = serde_json::to_string(&l).unwrap();
            assert_eq!(s, format!("\"{}\"", l.as_str()));
            assert_eq!(serde_json::from_str::<Label>(&s).unwrap(), l);
        }
        assert_eq!("C".parse::<Label>().unwrap(), Label::Contradiction);
    }

    #[test]
    fn ids_count_per_subcategory() {
        let mut d = Dataset::new(vec![
            NliPair::new("a", "b", Label::Entailment, "hans", "subsequence"),
            NliPair::new("c", "d", Label::Entailment, "hans", "lexical_overlap"),
            NliPair::new("e", "f", Label::Entailment, "hans", "subsequence"),
        ]);
        d.assign_ids();
        let ids: Vec<_> = d.pairs.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(
            ids,
            [
                "hans-subsequence-000001",
                "hans-lexical_overlap-000001",
                "hans-subsequence-000002"
            ]
        );
    }

    #[test]
    fn duplicates_are_flagged() {
        let mut d = Dataset::new(vec![table2_swap(), table2_swap()]);
        d.pairs[1].id = "other".into();
        let v = d.validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], (1, Violation::DuplicatePair { .. })));
    }

    #[test]
    fn meta_sidecar_name() {
        assert_eq!(meta_path(Path::new("out/x.jsonl")), Path::new("out/x.meta.json"));
        assert_eq!(meta_path(Path::new("x.txt")), Path::new("x.txt.meta.json"));
    }

    fn arb_pair() -> impl Strategy<Value = NliPair> {
        (
            "[a-c]{1,3}",
            "\\PC{1,12}",
            "\\PC{1,12}",
            prop::sample::select(Label::ALL.to_vec()),
            prop::collection::btree_map("[a-z]{1,4}", "\\PC{0,6}", 0..3),
        )
            .prop_map(|(id, premise, hypothesis, label, provenance)| NliPair {
                id,
                premise,
                hypothesis,
                label,
                category: "cat".into(),
                subcategory: "sub".into(),
                provenance,
            })
    }

    proptest! {
        #[test]
        fn jsonl_round_trip_is_byte_identical(pairs in prop::collection::vec(arb_pair(), 0..8)) {
            let d = Dataset::new(pairs);
            let mut first = Vec::new();
            d.write_jsonl(&mut first).unwrap();
            let back = Dataset::read_jsonl(first.as_slice(), "mem").unwrap();
            prop_assert_eq!(&back, &d);
            let mut second = Vec::new();
            back.write_jsonl(&mut second).unwrap();
            prop_assert_eq!(first, second);
        }

        #[test]
        fn dedup_is_idempotent(pairs in prop::collection::vec(arb_pair(), 0..12)) {
            let mut once = Dataset::new(pairs);
            once.dedup();
            let mut twice = once.clone();
            prop_assert_eq!(twice.dedup(), 0);
            prop_assert_eq!(twice, once);
        }
    }
}
