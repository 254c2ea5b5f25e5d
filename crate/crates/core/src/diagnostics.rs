//! Hand-written diagnostic sets: schema, loader and validator.
//!
//! Records use the core JSONL schema plus `phenomenon` and
//! `chinese_specific`. Validation never fails on content; every problem is
//! reported with the line it came from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use crate::dataset::{read_raw_lines, uniqueness_violations, validate_raw, RawPair};
use crate::resources::tsv_rows;
use crate::{Error, Label, NliPair, Result};

/// Record key marking an idiom premise authored with one hypothesis per
/// label.
pub const THREE_HYPOTHESES_KEY: &str = "three_hypotheses";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phenomenon {
    Classifier,
    Idioms,
    NonCoreArgument,
    ProDrop,
    TimeOfEvent,
    Anaphora,
    ArgumentStructure,
    CommonSense,
    Comparatives,
    DoubleNegation,
    LexicalSemantics,
    Monotonicity,
    Negation,
    WorldKnowledge,
    Clue,
    ClueExpansion,
}

impl Phenomenon {
    pub const ALL: [Phenomenon; 16] = [
        Phenomenon::Classifier,
        Phenomenon::Idioms,
        Phenomenon::NonCoreArgument,
        Phenomenon::ProDrop,
        Phenomenon::TimeOfEvent,
        Phenomenon::Anaphora,
        Phenomenon::ArgumentStructure,
        Phenomenon::CommonSense,
        Phenomenon::Comparatives,
        Phenomenon::DoubleNegation,
        Phenomenon::LexicalSemantics,
        Phenomenon::Monotonicity,
        Phenomenon::Negation,
        Phenomenon::WorldKnowledge,
        Phenomenon::Clue,
        Phenomenon::ClueExpansion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Phenomenon::Classifier => "classifier",
            Phenomenon::Idioms => "idioms",
            Phenomenon::NonCoreArgument => "non-core argument",
            Phenomenon::ProDrop => "pro-drop",
            Phenomenon::TimeOfEvent => "time-of-event",
            Phenomenon::Anaphora => "anaphora",
            Phenomenon::ArgumentStructure => "argument structure",
            Phenomenon::CommonSense => "common sense",
            Phenomenon::Comparatives => "comparatives",
            Phenomenon::DoubleNegation => "double negation",
            Phenomenon::LexicalSemantics => "lexical semantics",
            Phenomenon::Monotonicity => "monotonicity",
            Phenomenon::Negation => "negation",
            Phenomenon::WorldKnowledge => "world knowledge",
            Phenomenon::Clue => "CLUE",
            Phenomenon::ClueExpansion => "CLUE-expansion",
        }
    }

    /// Features particular to Chinese, starred in the inventory.
    pub fn chinese_specific(self) -> bool {
        matches!(
            self,
            Phenomenon::Classifier
                | Phenomenon::Idioms
                | Phenomenon::NonCoreArgument
                | Phenomenon::ProDrop
                | Phenomenon::TimeOfEvent
        )
    }
}

impl fmt::Display for Phenomenon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Phenomenon {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Phenomenon::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown phenomenon {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRecord {
    pub pair: NliPair,
    pub phenomenon: Phenomenon,
    pub chinese_specific: bool,
}

impl DiagnosticRecord {
    /// Strict conversion; `chinese_specific` defaults to the inventory value
    /// when the record omits it.
    pub fn from_raw(raw: &RawPair) -> std::result::Result<Self, String> {
        let pair = raw.to_pair().map_err(|e| e.to_string())?;
        let phenomenon = match raw.extra.get("phenomenon") {
            Some(Value::String(s)) => s.parse::<Phenomenon>()?,
            Some(other) => return Err(format!("phenomenon must be a string, got {other}")),
            None => return Err("missing phenomenon".into()),
        };
        let chinese_specific = match raw.extra.get("chinese_specific") {
            None => phenomenon.chinese_specific(),
            Some(Value::Bool(b)) => *b,
            Some(other) => return Err(format!("chinese_specific must be a boolean, got {other}")),
        };
        Ok(DiagnosticRecord {
            pair,
            phenomenon,
            chinese_specific,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagnosticViolation {
    /// 1-based line in the input, or 0 for file-level problems.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMismatch {
    pub key: String,
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiagnosticReport {
    /// Records read, well-formed or not.
    pub total: usize,
    pub counts: BTreeMap<Phenomenon, usize>,
    pub chinese_specific: usize,
    pub violations: Vec<DiagnosticViolation>,
}

impl DiagnosticReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, p: Phenomenon) -> usize {
        self.counts.get(&p).copied().unwrap_or(0)
    }

    /// Compares counts against a manifest; the `total` key checks the
    /// record total.
    pub fn compare(&self, manifest: &CountManifest) -> Vec<CountMismatch> {
        manifest
            .expected
            .iter()
            .filter_map(|(key, &expected)| {
                let found = if key == "total" {
                    self.total
                } else {
                    key.parse::<Phenomenon>().map(|p| self.count(p)).unwrap_or(0)
                };
                (found != expected).then(|| CountMismatch {
                    key: key.clone(),
                    expected,
                    found,
                })
            })
            .collect()
    }

    /// `phenomenon\tchinese_specific\tcount` rows, then a total row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("phenomenon\tchinese_specific\tcount\n");
        for p in Phenomenon::ALL {
            out.push_str(&format!("{p}\t{}\t{}\n", p.chinese_specific(), self.count(p)));
        }
        out.push_str(&format!("total\t\t{}\n", self.total));
        out
    }
}

/// Expected per-phenomenon counts, read from a two-column TSV.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountManifest {
    pub expected: BTreeMap<String, usize>,
}

impl CountManifest {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut expected = BTreeMap::new();
        for (line, cols) in tsv_rows(text) {
            let [key, n] = cols[..] else {
                return Err(Error::load(origin, line, "expected key and count"));
            };
            if key != "total" && key.parse::<Phenomenon>().is_err() {
                return Err(Error::load(origin, line, format!("unknown phenomenon {key:?}")));
            }
            let n = n
                .trim()
                .parse()
                .map_err(|_| Error::load(origin, line, format!("bad count {n:?}")))?;
            if expected.insert(key.to_string(), n).is_some() {
                return Err(Error::load(origin, line, format!("{key} listed twice")));
            }
        }
        Ok(CountManifest { expected })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// Validates parsed lines. `malformed` are lines that were not JSON objects.
pub fn validate_records(records: &[(usize, RawPair)], malformed: &[(usize, String)]) -> DiagnosticReport {
    let mut report = DiagnosticReport {
        total: records.len() + malformed.len(),
        ..Default::default()
    };
    let mut push = |line, message: String| report.violations.push(DiagnosticViolation { line, message });
    for (line, msg) in malformed {
        push(*line, format!("not a JSON record: {msg}"));
    }

    let mut idiom_groups: BTreeMap<&str, Vec<(usize, Option<Label>)>> = BTreeMap::new();
    let mut counts: BTreeMap<Phenomenon, usize> = BTreeMap::new();
    let mut chinese = 0;
    for (line, raw) in records {
        for v in validate_raw(raw) {
            push(*line, v.to_string());
        }
        match DiagnosticRecord::from_raw(raw) {
            Ok(rec) => {
                *counts.entry(rec.phenomenon).or_default() += 1;
                if rec.chinese_specific {
                    chinese += 1;
                }
                if rec.chinese_specific != rec.phenomenon.chinese_specific() {
                    push(
                        *line,
                        format!(
                            "chinese_specific is {} but {} is {}",
                            rec.chinese_specific,
                            rec.phenomenon,
                            if rec.phenomenon.chinese_specific() {
                                "starred"
                            } else {
                                "not starred"
                            }
                        ),
                    );
                }
            }
            // Label problems were already reported by validate_raw; count
            // what can still be counted and report the rest.
            Err(msg) => {
                let phenomenon = match raw.extra.get("phenomenon") {
                    Some(Value::String(s)) => s.parse::<Phenomenon>(),
                    Some(other) => Err(format!("phenomenon must be a string, got {other}")),
                    None => Err("missing phenomenon".to_string()),
                };
                match phenomenon {
                    Ok(p) => {
                        *counts.entry(p).or_default() += 1;
                        if raw.label.parse::<Label>().is_ok() {
                            push(*line, msg);
                        }
                    }
                    Err(m) => push(*line, m),
                }
            }
        }
        let convention = matches!(raw.extra.get(THREE_HYPOTHESES_KEY), Some(Value::Bool(true)));
        let is_idiom = matches!(raw.extra.get("phenomenon"), Some(Value::String(s)) if s == "idioms");
        if convention && is_idiom {
            idiom_groups
                .entry(raw.premise.as_str())
                .or_default()
                .push((*line, raw.label.parse().ok()));
        }
    }

    let keys = records
        .iter()
        .map(|(_, r)| (r.id.as_str(), r.premise.as_str(), r.hypothesis.as_str()));
    for (i, v) in uniqueness_violations(keys) {
        push(records[i].0, v.to_string());
    }

    for (premise, group) in idiom_groups {
        let labels: BTreeSet<Label> = group.iter().filter_map(|(_, l)| *l).collect();
        if group.len() != 3 || labels.len() != 3 {
            let found: Vec<String> = group
                .iter()
                .map(|(_, l)| l.map_or("?".to_string(), |l| l.short().to_string()))
                .collect();
            push(
                group[0].0,
                format!(
                    "idiom premise {premise:?} needs three hypotheses, one per label; found {}",
                    found.join("")
                ),
            );
        }
    }

    report.violations.sort_by_key(|v| v.line);
    report.counts = counts;
    report.chinese_specific = chinese;
    report
}

pub fn validate_reader<R: BufRead>(input: R, origin: &str) -> Result<DiagnosticReport> {
    let (records, malformed) = read_raw_lines(input).map_err(|e| Error::io(Path::new(origin), e))?;
    Ok(validate_records(&records, &malformed))
}

/// Reads and validates a diagnostic file. Only I/O failures are errors.
pub fn validate_diagnostics(path: &Path) -> Result<DiagnosticReport> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    validate_reader(std::io::BufReader::new(file), &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::bundled;
    use serde_json::json;

    fn line(id: &str, p: &str, h: &str, label: &str, phen: &str) -> String {
        json!({"id": id, "premise": p, "hypothesis": h, "label": label, "phenomenon": phen}).to_string()
    }

    fn validate(text: &str) -> DiagnosticReport {
        validate_reader(text.as_bytes(), "test").unwrap()
    }

    #[test]
    fn inventory_has_five_starred_features() {
        let starred: Vec<_> = Phenomenon::ALL.iter().filter(|p| p.chinese_specific()).collect();
        assert_eq!(starred.len(), 5);
        for p in Phenomenon::ALL {
            assert_eq!(p.as_str().parse::<Phenomenon>().unwrap(), p);
        }
    }

    #[test]
    fn misspelled_phenomenon_is_a_violation() {
        let r = validate(&line("d1", "他画蛇添足。", "他多此一举。", "entailment", "idoms"));
        assert_eq!(r.violations.len(), 1);
        assert!(r.violations[0].message.contains("idoms"));
        assert_eq!(r.total, 1);
    }

    #[test]
    fn idiom_triples_are_checked_when_marked() {
        let mk = |id: &str, h: &str, label: &str, marked: bool| {
            json!({"id": id, "premise": "他这是画蛇添足。", "hypothesis": h, "label": label,
                   "phenomenon": "idioms", "three_hypotheses": marked})
            .to_string()
        };
        let ok = [
            mk("i1", "他做了多余的事。", "entailment", true),
            mk("i2", "他在画画。", "neutral", true),
            mk("i3", "他做得恰到好处。", "contradiction", true),
        ]
        .join("\n");
        assert!(validate(&ok).is_clean());

        let short = [
            mk("i1", "他做了多余的事。", "entailment", true),
            mk("i2", "他在画画。", "entailment", true),
        ]
        .join("\n");
        let r = validate(&short);
        assert_eq!(r.violations.len(), 1, "{:?}", r.violations);
        assert!(r.violations[0].message.contains("EE"));

        let unmarked = [mk("i1", "他做了多余的事。", "entailment", false)].join("\n");
        assert!(validate(&unmarked).is_clean());
    }

    #[test]
    fn malformed_content_is_reported_not_fatal() {
        let text = [
            "not json".to_string(),
            line("d1", "", "他走了。", "entailment", "pro-drop"),
            line("d2", "他走了。", "他没走。", "maybe", "negation"),
            json!({"id": "d3", "premise": "三本书。", "hypothesis": "书。", "label": "e",
                   "phenomenon": "classifier", "chinese_specific": false})
            .to_string(),
            line("d2", "甲。", "乙。", "neutral", "anaphora"),
        ]
        .join("\n");
        let r = validate(&text);
        let lines: Vec<usize> = r.violations.iter().map(|v| v.line).collect();
        assert_eq!(lines, vec![1, 2, 3, 4, 5]);
        assert_eq!(r.total, 5);
        assert_eq!(r.count(Phenomenon::Negation), 1);
    }

    #[test]
    fn summary_counts_match_a_manifest() {
        let manifest = CountManifest::parse(bundled::DIAGNOSTIC_COUNTS, "diagnostic_counts.tsv").unwrap();
        let mut lines = Vec::new();
        for (key, &n) in &manifest.expected {
            if key == "total" {
                continue;
            }
            for i in 0..n {
                lines.push(line(
                    &format!("{key}-{i}"),
                    &format!("前提{key}{i}。"),
                    "假设。",
                    "neutral",
                    key,
                ));
            }
        }
        let r = validate(&lines.join("\n"));
        assert!(r.is_clean(), "{:?}", &r.violations[..3.min(r.violations.len())]);
        assert_eq!(r.total, 2122);
        assert!(r.compare(&manifest).is_empty());
        assert_eq!(r.count(Phenomenon::Idioms), 251);
        assert_eq!(r.chinese_specific, 139 + 251 + 198 + 186);

        let mut off = manifest.clone();
        off.expected.insert("CLUE-expansion".into(), 800);
        let diff = r.compare(&off);
        assert_eq!(
            diff,
            vec![CountMismatch {
                key: "CLUE-expansion".into(),
                expected: 800,
                found: 796
            }]
        );
        assert!(r.to_tsv().ends_with("total\t\t2122\n"));
    }
}
