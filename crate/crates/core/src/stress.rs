//! Stress-test perturbations of existing pairs: distraction, antonym,
//! synonym and spelling.
//!
//! Antonym and synonym need part-of-speech tags, read from an annotation
//! file with one line per side:
//!
//! ```text
//! <id> <TAB> premise|hypothesis <TAB> surface/TAG surface/TAG ...
//! ```
//!
//! TAG is one of our POS names or an LTP-style short tag (`n*`, `v`, `a`,
//! `d`, `r`; anything else is `other`).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;

use crate::dataset::{Dataset, Label, NliPair};
use crate::error::{Error, Result};
use crate::resources::{
    homophone_candidates, tsv_rows, CharFrequency, Distractor, DistractorSet, PinyinTable, Pos, SubstitutionLexicon,
};
use crate::seed::{rng_for, Rng};

pub const DEFAULT_CONNECTOR: &str = "，而且";
const FINAL_PUNCTUATION: &str = "。！？.!?";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub pos: Pos,
}

/// Maps a tag to a POS: our own names first, then LTP short tags.
pub fn pos_from_tag(tag: &str) -> Pos {
    if let Ok(p) = tag.parse() {
        return p;
    }
    match tag {
        t if t.starts_with('n') => Pos::Noun,
        "v" => Pos::Verb,
        "a" => Pos::Adjective,
        "d" => Pos::Adverb,
        "r" => Pos::Pronoun,
        _ => Pos::Other,
    }
}

/// Token annotations for one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub id: String,
    pub premise: Vec<Token>,
    pub hypothesis: Vec<Token>,
}

fn tokens_field(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| format!("{}/{}", t.surface, t.pos))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_annotations(annotations: &[Annotation]) -> String {
    let mut out = String::new();
    for a in annotations {
        out.push_str(&format!("{}\tpremise\t{}\n", a.id, tokens_field(&a.premise)));
        out.push_str(&format!("{}\thypothesis\t{}\n", a.id, tokens_field(&a.hypothesis)));
    }
    out
}

pub fn parse_annotations(text: &str, origin: &str) -> Result<Vec<Annotation>> {
    let mut order = Vec::new();
    let mut by_id: HashMap<String, Annotation> = HashMap::new();
    for (line, cols) in tsv_rows(text) {
        let [id, side, field] = cols[..] else {
            return Err(Error::load(origin, line, "expected id, side and tokens"));
        };
        let mut tokens = Vec::new();
        for tok in field.split(' ').filter(|t| !t.is_empty()) {
            let (surface, tag) = tok
                .rsplit_once('/')
                .ok_or_else(|| Error::load(origin, line, format!("token {tok:?} lacks /TAG")))?;
            if surface.is_empty() {
                return Err(Error::load(origin, line, format!("token {tok:?} has no surface")));
            }
            tokens.push(Token {
                surface: surface.to_string(),
                pos: pos_from_tag(tag),
            });
        }
        let entry = by_id.entry(id.to_string()).or_insert_with(|| {
            order.push(id.to_string());
            Annotation {
                id: id.to_string(),
                premise: Vec::new(),
                hypothesis: Vec::new(),
            }
        });
        match side {
            "premise" => entry.premise = tokens,
            "hypothesis" => entry.hypothesis = tokens,
            other => {
                return Err(Error::load(
                    origin,
                    line,
                    format!("side must be premise or hypothesis, not {other:?}"),
                ))
            }
        }
    }
    Ok(order.into_iter().map(|id| by_id.remove(&id).unwrap()).collect())
}

/// A pair with token/POS annotations whose surfaces rebuild its texts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedPair {
    pub pair: NliPair,
    pub premise: Vec<Token>,
    pub hypothesis: Vec<Token>,
}

impl AnnotatedPair {
    /// An empty hypothesis token list stands for the unannotated hypothesis.
    pub fn new(pair: NliPair, premise: Vec<Token>, mut hypothesis: Vec<Token>) -> Result<Self> {
        if hypothesis.is_empty() {
            hypothesis.push(Token {
                surface: pair.hypothesis.clone(),
                pos: Pos::Other,
            });
        }
        for (side, toks, text) in [
            ("premise", &premise, &pair.premise),
            ("hypothesis", &hypothesis, &pair.hypothesis),
        ] {
            let joined: String = toks.iter().map(|t| t.surface.as_str()).collect();
            if &joined != text {
                return Err(Error::InvalidResource {
                    resource: "annotations".into(),
                    message: format!("{} tokens of {} do not rebuild {text:?}", side, pair.id),
                });
            }
        }
        Ok(AnnotatedPair {
            pair,
            premise,
            hypothesis,
        })
    }
}

/// Attaches annotations to pairs by id. Every pair must be annotated.
pub fn annotate(dataset: &Dataset, annotations: Vec<Annotation>) -> Result<Vec<AnnotatedPair>> {
    let mut by_id: HashMap<String, Annotation> = annotations.into_iter().map(|a| (a.id.clone(), a)).collect();
    let mut missing = Vec::new();
    let mut out = Vec::new();
    for p in &dataset.pairs {
        match by_id.remove(&p.id) {
            Some(a) => out.push(AnnotatedPair::new(p.clone(), a.premise, a.hypothesis)?),
            None => missing.push(p.id.clone()),
        }
    }
    if !missing.is_empty() {
        return Err(Error::InvalidResource {
            resource: "annotations".into(),
            message: format!("no annotation for {}", missing.join(", ")),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Premise,
    Hypothesis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DistractionCondition {
    pub target: Target,
    pub negated: bool,
}

impl DistractionCondition {
    pub const ALL: [DistractionCondition; 4] = [
        DistractionCondition {
            target: Target::Premise,
            negated: false,
        },
        DistractionCondition {
            target: Target::Premise,
            negated: true,
        },
        DistractionCondition {
            target: Target::Hypothesis,
            negated: false,
        },
        DistractionCondition {
            target: Target::Hypothesis,
            negated: true,
        },
    ];

    pub fn name(self) -> &'static str {
        match (self.target, self.negated) {
            (Target::Premise, false) => "premise_plain",
            (Target::Premise, true) => "premise_negated",
            (Target::Hypothesis, false) => "hypothesis_plain",
            (Target::Hypothesis, true) => "hypothesis_negated",
        }
    }
}

impl fmt::Display for DistractionCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistractionCondition {
    type Err = String;

    /// `ph`/`pn`/`hh`/`hn` (premise or hypothesis, plain or negated) or the
    /// long names.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (target, negated) = match s {
            "ph" | "premise_plain" => (Target::Premise, false),
            "pn" | "premise_negated" => (Target::Premise, true),
            "hh" | "hypothesis_plain" => (Target::Hypothesis, false),
            "hn" | "hypothesis_negated" => (Target::Hypothesis, true),
            _ => return Err(format!("unknown condition {s:?} (expected ph, pn, hh or hn)")),
        };
        Ok(DistractionCondition { target, negated })
    }
}

/// Appends `statement` as a clause: before final punctuation when there is
/// one, otherwise followed by 。.
pub fn append_clause(text: &str, connector: &str, statement: &str) -> String {
    match text.chars().last() {
        Some(last) if FINAL_PUNCTUATION.contains(last) => {
            let body = &text[..text.len() - last.len_utf8()];
            format!("{body}{connector}{statement}{last}")
        }
        _ => format!("{text}{connector}{statement}。"),
    }
}

pub fn apply_distraction(
    pair: &NliPair,
    d: &Distractor,
    index: usize,
    cond: DistractionCondition,
    connector: &str,
) -> NliPair {
    let statement = if cond.negated { &d.negated } else { &d.plain };
    let mut out = pair.clone();
    match cond.target {
        Target::Premise => out.premise = append_clause(&pair.premise, connector, statement),
        Target::Hypothesis => out.hypothesis = append_clause(&pair.hypothesis, connector, statement),
    }
    out.category = "distraction".into();
    out.subcategory = cond.name().into();
    out.provenance = source_provenance(pair);
    out.provenance.insert("distractor".into(), index.to_string());
    out.provenance.insert("condition".into(), cond.name().into());
    out
}

fn source_provenance(pair: &NliPair) -> BTreeMap<String, String> {
    BTreeMap::from([("source_id".to_string(), pair.id.clone())])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Substitution {
    Antonym,
    Synonym,
}

impl Substitution {
    fn eligible(self, pos: Pos) -> bool {
        match self {
            Substitution::Antonym => matches!(pos, Pos::Noun | Pos::Adjective),
            Substitution::Synonym => matches!(pos, Pos::Verb | Pos::Adjective),
        }
    }

    fn pick<'a>(self, lex: &'a SubstitutionLexicon, word: &str) -> Option<&'a str> {
        match self {
            Substitution::Antonym => lex.first(word),
            Substitution::Synonym => lex.best(word),
        }
        .map(|c| c.surface.as_str())
    }

    fn label(self) -> Label {
        match self {
            Substitution::Antonym => Label::Contradiction,
            Substitution::Synonym => Label::Entailment,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Substitution::Antonym => "antonym",
            Substitution::Synonym => "synonym",
        }
    }
}

fn eligible_tokens(ap: &AnnotatedPair, lex: &SubstitutionLexicon, kind: Substitution) -> Vec<usize> {
    ap.premise
        .iter()
        .enumerate()
        .filter(|(_, t)| kind.eligible(t.pos) && kind.pick(lex, &t.surface).is_some())
        .map(|(i, _)| i)
        .collect()
}

fn substitute_at(ap: &AnnotatedPair, lex: &SubstitutionLexicon, kind: Substitution, index: usize) -> Option<NliPair> {
    let tok = ap.premise.get(index)?;
    if !kind.eligible(tok.pos) {
        return None;
    }
    let replacement = kind.pick(lex, &tok.surface)?;
    let hypothesis: String = ap
        .premise
        .iter()
        .enumerate()
        .map(|(i, t)| if i == index { replacement } else { t.surface.as_str() })
        .collect();
    let mut provenance = source_provenance(&ap.pair);
    provenance.insert("token_index".into(), index.to_string());
    provenance.insert("original".into(), tok.surface.clone());
    provenance.insert("replacement".into(), replacement.to_string());
    provenance.insert("pos".into(), tok.pos.to_string());
    Some(NliPair {
        id: String::new(),
        premise: ap.pair.premise.clone(),
        hypothesis,
        label: kind.label(),
        category: kind.name().into(),
        subcategory: tok.pos.to_string(),
        provenance,
    })
}

fn substitute(ap: &AnnotatedPair, lex: &SubstitutionLexicon, kind: Substitution, rng: &mut Rng) -> Option<NliPair> {
    let eligible = eligible_tokens(ap, lex, kind);
    let &i = eligible.choose(rng)?;
    substitute_at(ap, lex, kind, i)
}

/// Replaces one uniformly chosen noun or adjective of the premise by its
/// antonym; the result is the hypothesis of a contradiction pair.
pub fn apply_antonym(ap: &AnnotatedPair, lex: &SubstitutionLexicon, rng: &mut Rng) -> Option<NliPair> {
    substitute(ap, lex, Substitution::Antonym, rng)
}

/// [`apply_antonym`] at a given premise token.
pub fn apply_antonym_at(ap: &AnnotatedPair, lex: &SubstitutionLexicon, token: usize) -> Option<NliPair> {
    substitute_at(ap, lex, Substitution::Antonym, token)
}

/// Replaces one uniformly chosen verb or adjective of the premise by its
/// most similar synonym; the result is the hypothesis of an entailment pair.
pub fn apply_synonym(ap: &AnnotatedPair, lex: &SubstitutionLexicon, rng: &mut Rng) -> Option<NliPair> {
    substitute(ap, lex, Substitution::Synonym, rng)
}

/// [`apply_synonym`] at a given premise token.
pub fn apply_synonym_at(ap: &AnnotatedPair, lex: &SubstitutionLexicon, token: usize) -> Option<NliPair> {
    substitute_at(ap, lex, Substitution::Synonym, token)
}

/// Homophone tables and the frequency window for spelling errors.
#[derive(Debug, Clone, Copy)]
pub struct SpellingTables<'a> {
    pub pinyin: &'a PinyinTable,
    pub freq: &'a CharFrequency,
    pub range: (u64, u64),
}

impl SpellingTables<'_> {
    /// Sorted candidates for `ch`; characters without a pronunciation have none.
    pub fn candidates(&self, ch: char) -> Vec<char> {
        homophone_candidates(ch, self.pinyin, self.freq, self.range)
            .map(|s| s.into_iter().collect())
            .unwrap_or_default()
    }
}

/// Replaces the hypothesis character at `char_index` by `replacement`.
pub fn apply_spelling_at(pair: &NliPair, char_index: usize, replacement: char) -> Option<NliPair> {
    let chars: Vec<char> = pair.hypothesis.chars().collect();
    let original = *chars.get(char_index)?;
    let hypothesis: String = chars
        .iter()
        .enumerate()
        .map(|(i, &c)| if i == char_index { replacement } else { c })
        .collect();
    let mut out = pair.clone();
    out.hypothesis = hypothesis;
    out.category = "spelling".into();
    out.subcategory = "homophone".into();
    out.provenance = source_provenance(pair);
    out.provenance.insert("char_index".into(), char_index.to_string());
    out.provenance.insert("original".into(), original.to_string());
    out.provenance.insert("replacement".into(), replacement.to_string());
    Some(out)
}

/// Swaps one uniformly chosen hypothesis character that has a homophone in
/// the frequency window for a uniformly chosen such homophone. The label is
/// kept.
pub fn apply_spelling(pair: &NliPair, tables: SpellingTables<'_>, rng: &mut Rng) -> Option<NliPair> {
    let options: Vec<(usize, Vec<char>)> = pair
        .hypothesis
        .chars()
        .enumerate()
        .map(|(i, c)| (i, tables.candidates(c)))
        .filter(|(_, c)| !c.is_empty())
        .collect();
    let (i, cands) = options.choose(rng)?;
    let replacement = cands[rng.gen_range(0..cands.len())];
    apply_spelling_at(pair, *i, replacement)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PerturbKind {
    Distraction,
    Antonym,
    Synonym,
    Spelling,
}

impl PerturbKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PerturbKind::Distraction => "distraction",
            PerturbKind::Antonym => "antonym",
            PerturbKind::Synonym => "synonym",
            PerturbKind::Spelling => "spelling",
        }
    }
}

impl FromStr for PerturbKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "distraction" => Ok(PerturbKind::Distraction),
            "antonym" => Ok(PerturbKind::Antonym),
            "synonym" => Ok(PerturbKind::Synonym),
            "spelling" => Ok(PerturbKind::Spelling),
            _ => Err(format!("unknown perturbation {s:?}")),
        }
    }
}

/// Dedups, truncates to `limit`, assigns ids and fills the metadata.
fn finish(pairs: Vec<NliPair>, kind: PerturbKind, seed: u64, limit: Option<usize>) -> Dataset {
    let mut d = Dataset::new(pairs);
    d.dedup();
    if let Some(n) = limit {
        d.pairs.truncate(n);
    }
    d.assign_ids();
    d.meta = BTreeMap::from([
        ("generator".to_string(), crate::GENERATOR_VERSION.to_string()),
        ("kind".to_string(), kind.as_str().to_string()),
        ("seed".to_string(), seed.to_string()),
        ("emitted".to_string(), d.len().to_string()),
    ]);
    d
}

/// Distraction over every input pair and every requested condition, each
/// with a distractor drawn per (pair, condition).
pub fn perturb_distraction(
    input: &Dataset,
    set: &DistractorSet,
    conditions: &[DistractionCondition],
    connector: &str,
    seed: u64,
    limit: Option<usize>,
) -> Dataset {
    let pairs: Vec<NliPair> = input
        .pairs
        .par_iter()
        .flat_map_iter(|p| {
            conditions.iter().map(move |&c| {
                let mut rng = rng_for(seed, &format!("distraction:{}:{}", p.id, c));
                let i = rng.gen_range(0..set.len());
                apply_distraction(p, &set.statements()[i], i, c, connector)
            })
        })
        .collect();
    finish(pairs, PerturbKind::Distraction, seed, limit)
}

pub fn perturb_substitution(
    input: &[AnnotatedPair],
    lex: &SubstitutionLexicon,
    kind: PerturbKind,
    seed: u64,
    limit: Option<usize>,
) -> Dataset {
    let sub = match kind {
        PerturbKind::Antonym => Substitution::Antonym,
        PerturbKind::Synonym => Substitution::Synonym,
        _ => panic!("perturb_substitution takes antonym or synonym"),
    };
    let pairs: Vec<NliPair> = input
        .par_iter()
        .filter_map(|ap| {
            let mut rng = rng_for(seed, &format!("{}:{}", sub.name(), ap.pair.id));
            substitute(ap, lex, sub, &mut rng)
        })
        .collect();
    finish(pairs, kind, seed, limit)
}

pub fn perturb_spelling(input: &Dataset, tables: SpellingTables<'_>, seed: u64, limit: Option<usize>) -> Dataset {
    let pairs: Vec<NliPair> = input
        .pairs
        .par_iter()
        .filter_map(|p| {
            let mut rng = rng_for(seed, &format!("spelling:{}", p.id));
            apply_spelling(p, tables, &mut rng)
        })
        .collect();
    finish(pairs, PerturbKind::Spelling, seed, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::bundled;
    use rand::SeedableRng;

    fn pair(p: &str, h: &str, l: Label) -> NliPair {
        let mut x = NliPair::new(p, h, l, "ocnli", "dev");
        x.id = "ocnli-dev-000001".into();
        x
    }

    fn toks(tagged: &str) -> Vec<Token> {
        tagged
            .split(' ')
            .map(|t| {
                let (s, tag) = t.rsplit_once('/').unwrap();
                Token {
                    surface: s.into(),
                    pos: pos_from_tag(tag),
                }
            })
            .collect()
    }

    fn distractors() -> DistractorSet {
        DistractorSet::parse(bundled::DISTRACTORS, "bundled").unwrap()
    }

    #[test]
    fn premise_negated_distraction_matches_the_enterprise_example() {
        let set = distractors();
        let (i, d) = set
            .statements()
            .iter()
            .enumerate()
            .find(|(_, d)| d.negated == "刚做完手术出院的病人不应剧烈运动")
            .unwrap();
        let p = pair(
            "国有企业改革的思路和方针政策已经明确。",
            "根本不存在国有企业。",
            Label::Contradiction,
        );
        let cond: DistractionCondition = "pn".parse().unwrap();
        let out = apply_distraction(&p, d, i, cond, DEFAULT_CONNECTOR);
        assert_eq!(
            out.premise,
            "国有企业改革的思路和方针政策已经明确，而且刚做完手术出院的病人不应剧烈运动。"
        );
        assert_eq!(out.hypothesis, p.hypothesis);
        assert_eq!(out.label, Label::Contradiction);
    }

    #[test]
    fn hypothesis_tautology_distraction() {
        let set = distractors();
        let (i, d) = set.statements().iter().enumerate().find(|(_, d)| d.tautology).unwrap();
        let p = pair(
            "这时李家院子挤满了参观的人。",
            "这地方有个姓李的人家。",
            Label::Entailment,
        );
        let out = apply_distraction(&p, d, i, "hn".parse().unwrap(), DEFAULT_CONNECTOR);
        assert_eq!(out.hypothesis, "这地方有个姓李的人家，而且真的不是假的。");
        assert_eq!(out.label, Label::Entailment);
        assert_eq!(out.provenance["condition"], "hypothesis_negated");
    }

    #[test]
    fn clause_without_final_punctuation_gets_one() {
        assert_eq!(
            append_clause("他来了", "，而且", "真的就是真的"),
            "他来了，而且真的就是真的。"
        );
    }

    #[test]
    fn fiscal_antonym() {
        let lex = SubstitutionLexicon::parse(bundled::ANTONYMS, "bundled").unwrap();
        let p = pair("一些地方财政收支矛盾较大。", "x", Label::Neutral);
        let ap = AnnotatedPair::new(p, toks("一些/m 地方/n 财政/n 收支/n 矛盾/n 较大/a 。/wp"), vec![]).unwrap();
        let mut rng = Rng::seed_from_u64(3);
        let out = apply_antonym(&ap, &lex, &mut rng).unwrap();
        assert_eq!(out.hypothesis, "一些地方财政收支矛盾较小。");
        assert_eq!(out.label, Label::Contradiction);
    }

    #[test]
    fn antonym_without_candidates_is_none() {
        let lex = SubstitutionLexicon::parse(bundled::ANTONYMS, "bundled").unwrap();
        let p = pair("他走了。", "x", Label::Neutral);
        let ap = AnnotatedPair::new(p, toks("他/r 走/v 了/u 。/wp"), vec![]).unwrap();
        assert!(apply_antonym(&ap, &lex, &mut Rng::seed_from_u64(0)).is_none());
    }

    #[test]
    fn kaifu_synonym() {
        let lex = SubstitutionLexicon::parse(bundled::SYNONYMS, "bundled").unwrap();
        let p = pair("海部组阁困难说明了什么。", "x", Label::Neutral);
        let ap = AnnotatedPair::new(p, toks("海部/nh 组阁/v 困难/a 说明/v 了/u 什么/r 。/wp"), vec![]).unwrap();
        let out = apply_synonym_at(&ap, &lex, 2).unwrap();
        assert_eq!(out.hypothesis, "海部组阁艰难说明了什么。");
        assert_eq!(out.label, Label::Entailment);
    }

    #[test]
    fn synonym_takes_the_most_similar() {
        let lex = SubstitutionLexicon::parse("好\t佳\t0.7\n好\t良\t0.9\n", "t").unwrap();
        let p = pair("天气好。", "x", Label::Neutral);
        let ap = AnnotatedPair::new(p, toks("天气/n 好/a 。/wp"), vec![]).unwrap();
        assert_eq!(
            apply_synonym(&ap, &lex, &mut Rng::seed_from_u64(0)).unwrap().hypothesis,
            "天气良。"
        );
        let ap2 = AnnotatedPair::new(pair("天气。", "x", Label::Neutral), toks("天气/n 。/wp"), vec![]).unwrap();
        assert!(apply_synonym(&ap2, &lex, &mut Rng::seed_from_u64(0)).is_none());
    }

    #[test]
    fn coat_spelling() {
        let p = pair(
            "身上裹一件工厂发的棉大衣，手插在袖筒里。",
            "身上至少一件衣服。",
            Label::Entailment,
        );
        let pinyin = PinyinTable::parse(bundled::PINYIN, "b").unwrap();
        let freq = CharFrequency::parse(bundled::CHAR_FREQ, "b").unwrap();
        let tables = SpellingTables {
            pinyin: &pinyin,
            freq: &freq,
            range: crate::resources::SPELLING_FREQ_RANGE,
        };
        assert!(tables.candidates('至').contains(&'质'));
        let out = apply_spelling_at(&p, 2, '质').unwrap();
        assert_eq!(out.hypothesis, "身上质少一件衣服。");
        assert_eq!(out.label, Label::Entailment);
    }

    #[test]
    fn punctuation_and_digits_cannot_be_misspelled() {
        let p = pair("前提。", "123，。!", Label::Neutral);
        let pinyin = PinyinTable::parse(bundled::PINYIN, "b").unwrap();
        let freq = CharFrequency::parse(bundled::CHAR_FREQ, "b").unwrap();
        let tables = SpellingTables {
            pinyin: &pinyin,
            freq: &freq,
            range: (100, 6000),
        };
        assert!(apply_spelling(&p, tables, &mut Rng::seed_from_u64(0)).is_none());
    }

    #[test]
    fn annotation_file_round_trip() {
        let a = Annotation {
            id: "x".into(),
            premise: toks("他/pronoun 走/verb 了。/other"),
            hypothesis: toks("他/pronoun 走/verb"),
        };
        let text = write_annotations(std::slice::from_ref(&a));
        assert_eq!(parse_annotations(&text, "t").unwrap(), vec![a]);
    }

    #[test]
    fn ltp_tags_map_to_pos() {
        assert_eq!(pos_from_tag("ns"), Pos::Noun);
        assert_eq!(pos_from_tag("v"), Pos::Verb);
        assert_eq!(pos_from_tag("a"), Pos::Adjective);
        assert_eq!(pos_from_tag("wp"), Pos::Other);
        assert_eq!(pos_from_tag("locative-noun"), Pos::LocativeNoun);
    }

    #[test]
    fn mismatched_annotation_rejected() {
        let p = pair("他走了。", "x", Label::Neutral);
        assert!(AnnotatedPair::new(p, toks("他/r 跑/v 了/u 。/wp"), vec![]).is_err());
    }
}
