//! Lexical-overlap and subsequence detectors, and a corpus scan reporting how
//! labels distribute over pairs that satisfy them.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};

/// Punctuation removed before either heuristic is checked.
pub const PUNCTUATION: &str = "，。！？、；：“”‘’（）《》〈〉【】「」『』…—～·,.!?;:'\"()[]{}<>-~`";

pub fn is_punctuation(c: char) -> bool {
    c.is_whitespace() || PUNCTUATION.contains(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Granularity {
    Character,
    Word,
}

impl Granularity {
    pub fn as_str(self) -> &'static str {
        match self {
            Granularity::Character => "character",
            Granularity::Word => "word",
        }
    }
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "char" | "character" => Ok(Granularity::Character),
            "word" => Ok(Granularity::Word),
            _ => Err(format!("unknown granularity {s:?} (expected char or word)")),
        }
    }
}

/// A tokenized sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSeq {
    tokens: Vec<String>,
    granularity: Granularity,
}

impl TokenSeq {
    pub fn chars(text: &str) -> Self {
        TokenSeq {
            tokens: text.chars().map(String::from).collect(),
            granularity: Granularity::Character,
        }
    }

    /// Pre-segmented text, tokens separated by whitespace.
    pub fn words(text: &str) -> Self {
        TokenSeq {
            tokens: text.split_whitespace().map(String::from).collect(),
            granularity: Granularity::Word,
        }
    }

    pub fn tokenize(text: &str, granularity: Granularity) -> Self {
        match granularity {
            Granularity::Character => Self::chars(text),
            Granularity::Word => Self::words(text),
        }
    }

    /// Character granularity requires every token to be one character.
    pub fn new(tokens: Vec<String>, granularity: Granularity) -> Option<Self> {
        if granularity == Granularity::Character && tokens.iter().any(|t| t.chars().count() != 1) {
            return None;
        }
        Some(TokenSeq { tokens, granularity })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn granularity(&self) -> Granularity {
        self.granularity
    }

    fn content(&self) -> Vec<&str> {
        self.tokens
            .iter()
            .map(String::as_str)
            .filter(|t| !t.chars().all(is_punctuation))
            .collect()
    }
}

fn check(premise: &TokenSeq, hypothesis: &TokenSeq) -> Result<()> {
    if premise.granularity != hypothesis.granularity {
        return Err(Error::GranularityMismatch {
            premise: premise.granularity.as_str(),
            hypothesis: hypothesis.granularity.as_str(),
        });
    }
    Ok(())
}

/// Every hypothesis token occurs somewhere in the premise (set containment).
pub fn has_lexical_overlap(premise: &TokenSeq, hypothesis: &TokenSeq) -> Result<bool> {
    check(premise, hypothesis)?;
    let vocab: HashSet<&str> = premise.content().into_iter().collect();
    Ok(hypothesis.content().iter().all(|t| vocab.contains(t)))
}

/// The hypothesis tokens occur contiguously and in order in the premise.
pub fn is_subsequence(premise: &TokenSeq, hypothesis: &TokenSeq) -> Result<bool> {
    check(premise, hypothesis)?;
    let p = premise.content();
    let h = hypothesis.content();
    Ok(h.is_empty() || (h.len() <= p.len() && p.windows(h.len()).any(|w| w == h.as_slice())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heuristic {
    LexicalOverlap,
    Subsequence,
}

impl Heuristic {
    pub const ALL: [Heuristic; 2] = [Heuristic::LexicalOverlap, Heuristic::Subsequence];

    pub fn as_str(self) -> &'static str {
        match self {
            Heuristic::LexicalOverlap => "lexical_overlap",
            Heuristic::Subsequence => "subsequence",
        }
    }

    pub fn holds(self, premise: &TokenSeq, hypothesis: &TokenSeq) -> Result<bool> {
        match self {
            Heuristic::LexicalOverlap => has_lexical_overlap(premise, hypothesis),
            Heuristic::Subsequence => is_subsequence(premise, hypothesis),
        }
    }

    /// Character-level check on raw text.
    pub fn holds_for_text(self, premise: &str, hypothesis: &str) -> bool {
        self.holds(&TokenSeq::chars(premise), &TokenSeq::chars(hypothesis))
            .expect("same granularity")
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lexical_overlap" => Ok(Heuristic::LexicalOverlap),
            "subsequence" => Ok(Heuristic::Subsequence),
            _ => Err(format!("unknown heuristic {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LabelCounts {
    pub entailment: usize,
    pub contradiction: usize,
    pub neutral: usize,
}

impl LabelCounts {
    pub fn add(&mut self, label: Label) {
        match label {
            Label::Entailment => self.entailment += 1,
            Label::Contradiction => self.contradiction += 1,
            Label::Neutral => self.neutral += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.entailment + self.contradiction + self.neutral
    }

    /// Entailment count over row total; 0 for an empty row.
    pub fn entailment_share(&self) -> f64 {
        share(self.entailment, self.total())
    }

    fn merge(self, o: LabelCounts) -> LabelCounts {
        LabelCounts {
            entailment: self.entailment + o.entailment,
            contradiction: self.contradiction + o.contradiction,
            neutral: self.neutral + o.neutral,
        }
    }
}

fn share(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

/// Label counts per heuristic. A subsequence pair is counted in both rows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HeuristicReport {
    pub lexical_overlap: LabelCounts,
    pub subsequence: LabelCounts,
}

impl HeuristicReport {
    pub fn row(&self, h: Heuristic) -> &LabelCounts {
        match h {
            Heuristic::LexicalOverlap => &self.lexical_overlap,
            Heuristic::Subsequence => &self.subsequence,
        }
    }

    /// Entailment share pooled over both rows: Σ entailment / Σ row totals.
    pub fn combined_entailment_share(&self) -> f64 {
        let e = self.lexical_overlap.entailment + self.subsequence.entailment;
        let t = self.lexical_overlap.total() + self.subsequence.total();
        share(e, t)
    }

    fn merge(self, o: HeuristicReport) -> HeuristicReport {
        HeuristicReport {
            lexical_overlap: self.lexical_overlap.merge(o.lexical_overlap),
            subsequence: self.subsequence.merge(o.subsequence),
        }
    }

    /// Tab-separated table: one row per heuristic plus the pooled row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("heuristic\tentailment\tcontradiction\tneutral\ttotal\tentailment_share\n");
        for h in Heuristic::ALL {
            let r = self.row(h);
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{:.4}\n",
                h.as_str(),
                r.entailment,
                r.contradiction,
                r.neutral,
                r.total(),
                r.entailment_share()
            ));
        }
        let c = self.lexical_overlap.merge(self.subsequence);
        out.push_str(&format!(
            "combined\t{}\t{}\t{}\t{}\t{:.4}\n",
            c.entailment,
            c.contradiction,
            c.neutral,
            c.total(),
            self.combined_entailment_share()
        ));
        out
    }
}

/// Counts every pair under each heuristic it satisfies.
pub fn scan_corpus(dataset: &Dataset, granularity: Granularity) -> HeuristicReport {
    dataset
        .pairs
        .par_iter()
        .map(|pair| {
            let p = TokenSeq::tokenize(&pair.premise, granularity);
            let h = TokenSeq::tokenize(&pair.hypothesis, granularity);
            let mut r = HeuristicReport::default();
            if has_lexical_overlap(&p, &h).expect("same granularity") {
                r.lexical_overlap.add(pair.label);
            }
            if is_subsequence(&p, &h).expect("same granularity") {
                r.subsequence.add(pair.label);
            }
            r
        })
        .reduce(HeuristicReport::default, HeuristicReport::merge)
}
