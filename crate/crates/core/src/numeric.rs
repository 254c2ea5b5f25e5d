//! Numerical-reasoning triples built from sentences that contain a number,
//! and an interval oracle that labels such pairs independently.
//!
//! For a chosen number x and a nearby y:
//! - entailment: x becomes "less than y" when y > x, "more than y" when y < x;
//! - contradiction: x becomes a different y, or x is given a false bound
//!   ("less than x" / "more than x");
//! - neutral: the entailment pair reversed.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;

use crate::dataset::{Dataset, Label, NliPair};
use crate::error::{Error, Result};
use crate::resources::{QuantLexicon, QuantRelation, Quantifier};
use crate::seed::{rng_for, Rng};

pub type Value = Ratio<i128>;

const FULL_ZERO: u32 = '０' as u32;

fn digit_value(c: char) -> Option<(u32, bool)> {
    match c {
        '0'..='9' => Some((c as u32 - '0' as u32, false)),
        '０'..='９' => Some((c as u32 - FULL_ZERO, true)),
        _ => None,
    }
}

/// A run of digits, optionally with one decimal point, inside a sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberSpan {
    /// Byte offsets of the digits in the sentence.
    pub start: usize,
    pub end: usize,
    pub mantissa: i128,
    pub decimals: u32,
    pub full_width: bool,
    pub point: Option<char>,
    /// A quantifier phrase immediately before the number.
    pub prefix: Option<Quantifier>,
}

impl NumberSpan {
    pub fn value(&self) -> Value {
        Ratio::new(self.mantissa, 10i128.pow(self.decimals))
    }

    pub fn eligible(&self) -> bool {
        self.prefix.is_none() && self.mantissa != 0
    }

    /// 10^(digits of the mantissa - 1), in mantissa units.
    pub fn step(&self) -> i128 {
        let digits = self.mantissa.abs().max(1).to_string().len() as u32;
        10i128.pow(digits - 1)
    }

    /// Renders a mantissa with this span's decimals and digit style.
    pub fn format(&self, mantissa: i128) -> String {
        let digits = format!("{:0width$}", mantissa, width = self.decimals as usize + 1);
        let mut s = if self.decimals == 0 {
            digits
        } else {
            let (int, frac) = digits.split_at(digits.len() - self.decimals as usize);
            format!("{int}.{frac}")
        };
        if self.full_width || self.point.is_some_and(|p| p != '.') {
            s = s
                .chars()
                .map(|c| match c {
                    '0'..='9' if self.full_width => char::from_u32(FULL_ZERO + (c as u32 - '0' as u32)).unwrap(),
                    '.' => self.point.unwrap_or('.'),
                    other => other,
                })
                .collect();
        }
        s
    }
}

/// All number spans of `sentence`, each with the quantifier phrase (longest
/// match) that directly precedes it, if any.
pub fn find_spans(sentence: &str, q: &QuantLexicon) -> Vec<NumberSpan> {
    let chars: Vec<(usize, char)> = sentence.char_indices().collect();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let Some((_, full_width)) = digit_value(chars[i].1) else {
            i += 1;
            continue;
        };
        let start = chars[i].0;
        let mut mantissa: i128 = 0;
        let mut decimals = 0;
        let mut point = None;
        let same_style = |c: char| digit_value(c).filter(|(_, fw)| *fw == full_width);
        while i < chars.len() {
            let c = chars[i].1;
            if let Some((d, _)) = same_style(c) {
                mantissa = mantissa.saturating_mul(10).saturating_add(d as i128);
                if point.is_some() {
                    decimals += 1;
                }
                i += 1;
            } else if point.is_none()
                && matches!(c, '.' | '．')
                && chars.get(i + 1).is_some_and(|&(_, n)| same_style(n).is_some())
            {
                point = Some(c);
                i += 1;
            } else {
                break;
            }
        }
        let end = chars.get(i).map_or(sentence.len(), |&(b, _)| b);
        spans.push(NumberSpan {
            start,
            end,
            mantissa,
            decimals,
            full_width,
            point,
            prefix: q.suffix_of(&sentence[..start]).cloned(),
        });
    }
    spans
}

fn replace(sentence: &str, span: &NumberSpan, with: &str) -> String {
    format!("{}{}{}", &sentence[..span.start], with, &sentence[span.end..])
}

/// Candidates x ± k·step for k in 1..=9 that stay positive.
pub fn neighbours(span: &NumberSpan) -> Vec<i128> {
    let x = span.mantissa;
    let step = span.step();
    (1..=9)
        .flat_map(|k| [x - k * step, x + k * step])
        .filter(|&y| y > 0)
        .collect()
}

/// Entailment hypothesis: x replaced by a bound on y that x satisfies.
pub fn rule_entail(sentence: &str, span: &NumberSpan, y: i128, quant: &Quantifier) -> Result<String> {
    let wanted = if y > span.mantissa {
        QuantRelation::LessThan
    } else if y < span.mantissa {
        QuantRelation::MoreThan
    } else {
        return Err(Error::Generation(format!("y must differ from x in {sentence:?}")));
    };
    if quant.relation != wanted {
        return Err(Error::Generation(format!(
            "{:?} is {}, but {} vs {} needs {wanted}",
            quant.surface,
            quant.relation,
            span.format(span.mantissa),
            span.format(y)
        )));
    }
    Ok(replace(sentence, span, &format!("{}{}", quant.surface, span.format(y))))
}

/// Contradiction by replacing x with a different number.
pub fn rule_contradict_replace(sentence: &str, span: &NumberSpan, y: i128) -> Result<String> {
    if y == span.mantissa {
        return Err(Error::Generation(format!("y must differ from x in {sentence:?}")));
    }
    Ok(replace(sentence, span, &span.format(y)))
}

/// Contradiction by bounding x with itself, which x never satisfies.
pub fn rule_contradict_prefix(sentence: &str, span: &NumberSpan, quant: &Quantifier) -> String {
    replace(
        sentence,
        span,
        &format!("{}{}", quant.surface, span.format(span.mantissa)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Entail,
    ContradictReplace,
    ContradictPrefix,
    Reverse,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Entail => "rule1",
            Rule::ContradictReplace => "rule2a",
            Rule::ContradictPrefix => "rule2b",
            Rule::Reverse => "rule3",
        }
    }

    pub fn label(self) -> Label {
        match self {
            Rule::Entail => Label::Entailment,
            Rule::ContradictReplace | Rule::ContradictPrefix => Label::Contradiction,
            Rule::Reverse => Label::Neutral,
        }
    }
}

fn numeric_pair(premise: String, hypothesis: String, rule: Rule) -> NliPair {
    NliPair::new(premise, hypothesis, rule.label(), "numeric", rule.as_str())
}

/// The (E, C, N) triple for one seed sentence.
pub fn generate_numeric(sentence: &str, q: &QuantLexicon, rng: &mut Rng) -> Result<[NliPair; 3]> {
    let spans: Vec<NumberSpan> = find_spans(sentence, q)
        .into_iter()
        .filter(NumberSpan::eligible)
        .collect();
    let span = spans
        .choose(rng)
        .ok_or_else(|| Error::NoNumeral(sentence.to_string()))?;
    let ys = neighbours(span);
    let x = span.format(span.mantissa);

    let y = *ys.choose(rng).expect("x + step is always a candidate");
    let rel = if y > span.mantissa {
        QuantRelation::LessThan
    } else {
        QuantRelation::MoreThan
    };
    let quant = *q.with_relation(rel).choose(rng).expect("lexicon has both relations");
    let e_hyp = rule_entail(sentence, span, y, quant)?;
    let e = numeric_pair(sentence.to_string(), e_hyp.clone(), Rule::Entail)
        .with_provenance("x", &x)
        .with_provenance("y", span.format(y))
        .with_provenance("quantifier", &quant.surface);

    let c = if rng.gen_bool(0.5) {
        let y2 = *ys.choose(rng).unwrap();
        numeric_pair(
            sentence.to_string(),
            rule_contradict_replace(sentence, span, y2)?,
            Rule::ContradictReplace,
        )
        .with_provenance("x", &x)
        .with_provenance("y", span.format(y2))
    } else {
        let quant = *q.entries().iter().collect::<Vec<_>>().choose(rng).unwrap();
        numeric_pair(
            sentence.to_string(),
            rule_contradict_prefix(sentence, span, quant),
            Rule::ContradictPrefix,
        )
        .with_provenance("x", &x)
        .with_provenance("quantifier", &quant.surface)
    };

    let n = numeric_pair(e_hyp, sentence.to_string(), Rule::Reverse)
        .with_provenance("x", &x)
        .with_provenance("y", span.format(y))
        .with_provenance("quantifier", &quant.surface);
    Ok([e, c, n])
}

/// Triples for every distinct seed sentence, each checked by
/// [`numeric_oracle`].
pub fn generate_numeric_dataset(sentences: &[String], q: &QuantLexicon, seed: u64) -> Result<Dataset> {
    let mut seen = HashSet::new();
    let unique: Vec<&String> = sentences
        .iter()
        .filter(|s| !s.trim().is_empty() && seen.insert(s.as_str()))
        .collect();
    let triples: Vec<[NliPair; 3]> = unique
        .par_iter()
        .map(|s| {
            let mut rng = rng_for(seed, &format!("numeric:{s}"));
            let triple = generate_numeric(s, q, &mut rng)?;
            for p in &triple {
                let got = numeric_oracle(p, q)?;
                if got != p.label {
                    return Err(Error::OracleDisagreement {
                        template: p.subcategory.clone(),
                        expected: p.label,
                        actual: got,
                        premise: p.premise.clone(),
                        hypothesis: p.hypothesis.clone(),
                    });
                }
            }
            Ok(triple)
        })
        .collect::<Result<_>>()?;
    let mut d = Dataset::new(triples.into_iter().flatten().collect());
    d.dedup();
    d.assign_ids();
    d.meta = BTreeMap::from([
        ("generator".to_string(), crate::GENERATOR_VERSION.to_string()),
        ("kind".to_string(), "numeric".to_string()),
        ("seed".to_string(), seed.to_string()),
        ("seed_sentences".to_string(), unique.len().to_string()),
        ("emitted".to_string(), d.len().to_string()),
    ]);
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Upper {
    Open(Value),
    Closed(Value),
    Infinite,
}

/// A real interval with open or closed ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Value,
    lo_closed: bool,
    hi: Upper,
}

impl Interval {
    pub fn point(v: Value) -> Self {
        Interval {
            lo: v,
            lo_closed: true,
            hi: Upper::Closed(v),
        }
    }

    /// (0, v)
    pub fn below(v: Value) -> Self {
        Interval {
            lo: Value::from_integer(0),
            lo_closed: false,
            hi: Upper::Open(v),
        }
    }

    /// (v, ∞)
    pub fn above(v: Value) -> Self {
        Interval {
            lo: v,
            lo_closed: false,
            hi: Upper::Infinite,
        }
    }

    pub fn of(value: Value, bound: Option<QuantRelation>) -> Self {
        match bound {
            None => Self::point(value),
            Some(QuantRelation::LessThan) => Self::below(value),
            Some(QuantRelation::MoreThan) => Self::above(value),
        }
    }

    fn is_empty(&self) -> bool {
        match &self.hi {
            Upper::Infinite => false,
            Upper::Closed(h) => *h < self.lo || (*h == self.lo && !self.lo_closed),
            Upper::Open(h) => *h <= self.lo,
        }
    }

    fn intersect(&self, o: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&o.lo) {
            std::cmp::Ordering::Greater => (self.lo, self.lo_closed),
            std::cmp::Ordering::Less => (o.lo, o.lo_closed),
            std::cmp::Ordering::Equal => (self.lo, self.lo_closed && o.lo_closed),
        };
        let hi = match (&self.hi, &o.hi) {
            (Upper::Infinite, h) | (h, Upper::Infinite) => h.clone(),
            (a, b) => {
                let (va, ca) = upper_parts(a);
                let (vb, cb) = upper_parts(b);
                match va.cmp(&vb) {
                    std::cmp::Ordering::Less => a.clone(),
                    std::cmp::Ordering::Greater => b.clone(),
                    std::cmp::Ordering::Equal if ca && cb => Upper::Closed(va),
                    std::cmp::Ordering::Equal => Upper::Open(va),
                }
            }
        };
        Interval { lo, lo_closed, hi }
    }

    pub fn is_disjoint(&self, o: &Interval) -> bool {
        self.intersect(o).is_empty()
    }

    pub fn is_subset(&self, o: &Interval) -> bool {
        self.is_empty() || self.intersect(o) == *self
    }
}

fn upper_parts(u: &Upper) -> (Value, bool) {
    match u {
        Upper::Open(v) => (*v, false),
        Upper::Closed(v) => (*v, true),
        Upper::Infinite => unreachable!(),
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        match &self.hi {
            Upper::Infinite => write!(f, "{l}{}, ∞)", self.lo),
            Upper::Open(h) => write!(f, "{l}{}, {h})", self.lo),
            Upper::Closed(h) => write!(f, "{l}{}, {h}]", self.lo),
        }
    }
}

/// One side of a pair split at its numbers: the text between numbers with
/// quantifier phrases removed, and each number's interval.
fn segment(text: &str, q: &QuantLexicon) -> (Vec<String>, Vec<Interval>) {
    let mut texts = Vec::new();
    let mut intervals = Vec::new();
    let mut cursor = 0;
    for span in find_spans(text, q) {
        let mut before = &text[cursor..span.start];
        let bound = span.prefix.as_ref().and_then(|p| {
            before.strip_suffix(p.surface.as_str()).map(|rest| {
                before = rest;
                p.relation
            })
        });
        texts.push(before.to_string());
        intervals.push(Interval::of(span.value(), bound));
        cursor = span.end;
    }
    texts.push(text[cursor..].to_string());
    (texts, intervals)
}

/// Labels a pair whose sides differ in at most one number and its bound.
pub fn numeric_oracle(pair: &NliPair, q: &QuantLexicon) -> Result<Label> {
    let not_numeric = |why: &str| Error::NotNumericPair(format!("{why}: {} / {}", pair.premise, pair.hypothesis));
    let (pt, pi) = segment(&pair.premise, q);
    let (ht, hi) = segment(&pair.hypothesis, q);
    if pi.is_empty() {
        return Err(not_numeric("no number"));
    }
    if pi.len() != hi.len() || pt != ht {
        return Err(not_numeric("sides differ outside their numbers"));
    }
    let differing: Vec<usize> = (0..pi.len()).filter(|&i| pi[i] != hi[i]).collect();
    let (p, h) = match differing[..] {
        [] => return Ok(Label::Entailment),
        [i] => (&pi[i], &hi[i]),
        _ => return Err(not_numeric("more than one number differs")),
    };
    Ok(if p.is_subset(h) {
        Label::Entailment
    } else if p.is_disjoint(h) {
        Label::Contradiction
    } else {
        Label::Neutral
    })
}
