//! Template-driven generation of lexical-overlap and subsequence pairs.
//!
//! A template file holds `template` lines followed by the `slot` lines that
//! belong to them:
//!
//! ```text
//! template  <id>  <heuristic>  <label>  <premise>  <hypothesis>  [notes]
//! slot      <name>  <pos>  [f1,f2,...]  [rel:SLOT,...]
//! ```
//!
//! Patterns mention slots as `{NAME}`. An agreement `rel:SLOT` on slot A holds
//! when A's filler carries some feature `rel_X` and SLOT's filler carries `X`.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use rand::Rng as _;
use rayon::prelude::*;

use crate::dataset::{Dataset, Label, NliPair};
use crate::error::{Error, Result};
use crate::heuristics::{is_punctuation, Heuristic};
use crate::resources::{tsv_rows, FeatureSet, LexEntry, Pos, Vocabulary};
use crate::seed::{derive_seed, Rng};
use crate::stress::{Annotation, Token};

/// Attempts per instantiation before a template is declared unsatisfiable.
const MAX_ATTEMPTS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agreement {
    pub relation: String,
    pub other: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub name: String,
    pub pos: Pos,
    pub required: FeatureSet,
    pub agreement: Vec<Agreement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Literal(String),
    Slot(usize),
}

#[derive(Debug, Clone)]
pub struct Template {
    pub id: String,
    pub heuristic: Heuristic,
    pub label: Label,
    pub premise: Vec<Piece>,
    pub hypothesis: Vec<Piece>,
    pub slots: Vec<Slot>,
    pub notes: String,
}

#[derive(Debug, Clone)]
pub struct TemplateSet {
    pub templates: Vec<Template>,
}

impl TemplateSet {
    pub fn load(path: &Path, vocab: &Vocabulary) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string(), vocab)
    }

    pub fn parse(text: &str, origin: &str, vocab: &Vocabulary) -> Result<Self> {
        struct Pending {
            line: usize,
            id: String,
            heuristic: Heuristic,
            label: Label,
            premise: String,
            hypothesis: String,
            notes: String,
            slots: Vec<Slot>,
        }

        let mut pending: Vec<Pending> = Vec::new();
        for (line, cols) in tsv_rows(text) {
            let err = |m: String| Error::load(origin, line, m);
            match cols[0] {
                "template" => {
                    if !(6..=7).contains(&cols.len()) {
                        return Err(err(
                            "template line needs id, heuristic, label, premise, hypothesis".into()
                        ));
                    }
                    pending.push(Pending {
                        line,
                        id: cols[1].to_string(),
                        heuristic: cols[2].parse().map_err(err)?,
                        label: cols[3]
                            .parse()
                            .map_err(|e: crate::dataset::UnknownLabel| err(e.to_string()))?,
                        premise: cols[4].to_string(),
                        hypothesis: cols[5].to_string(),
                        notes: cols.get(6).unwrap_or(&"").to_string(),
                        slots: Vec::new(),
                    });
                }
                "slot" => {
                    let Some(t) = pending.last_mut() else {
                        return Err(err("slot line before any template".into()));
                    };
                    if !(3..=5).contains(&cols.len()) {
                        return Err(err("slot line needs name and pos".into()));
                    }
                    let names: Vec<&str> = list(cols.get(3).copied().unwrap_or("")).collect();
                    let mut agreement = Vec::new();
                    for a in list(cols.get(4).copied().unwrap_or("")) {
                        let (relation, other) = a
                            .split_once(':')
                            .ok_or_else(|| err(format!("agreement {a:?} is not rel:SLOT")))?;
                        agreement.push(Agreement {
                            relation: relation.to_string(),
                            other: other.to_string(),
                        });
                    }
                    t.slots.push(Slot {
                        name: cols[1].to_string(),
                        pos: cols[2].parse().map_err(err)?,
                        required: vocab.feature_set(&names).map_err(err)?,
                        agreement,
                    });
                }
                other => return Err(err(format!("unknown line kind {other:?}"))),
            }
        }

        let mut ids = HashSet::new();
        let mut templates = Vec::new();
        for p in pending {
            if !ids.insert(p.id.clone()) {
                return Err(Error::load(origin, p.line, format!("template id {} repeated", p.id)));
            }
            let t = Template::new(p.id, p.heuristic, p.label, &p.premise, &p.hypothesis, p.slots, p.notes)?;
            templates.push(t);
        }
        Ok(TemplateSet { templates })
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Template> {
        self.templates.iter().find(|t| t.id == id)
    }
}

fn list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn parse_pattern(id: &str, pattern: &str, slots: &[Slot]) -> Result<Vec<Piece>> {
    let bad = |message: String| Error::InvalidTemplate {
        template: id.to_string(),
        message,
    };
    let mut pieces = Vec::new();
    let mut rest = pattern;
    while !rest.is_empty() {
        match rest.find(['{', '}']) {
            Some(i) if rest[i..].starts_with('}') => return Err(bad(format!("stray }} in {pattern:?}"))),
            Some(i) => {
                if i > 0 {
                    pieces.push(Piece::Literal(rest[..i].to_string()));
                }
                let close = rest[i..]
                    .find('}')
                    .ok_or_else(|| bad(format!("unclosed {{ in {pattern:?}")))?;
                let name = &rest[i + 1..i + close];
                let idx = slots
                    .iter()
                    .position(|s| s.name == name)
                    .ok_or_else(|| bad(format!("pattern mentions undeclared slot {name}")))?;
                pieces.push(Piece::Slot(idx));
                rest = &rest[i + close + 1..];
            }
            None => {
                pieces.push(Piece::Literal(rest.to_string()));
                rest = "";
            }
        }
    }
    Ok(pieces)
}

/// Items of a pattern with punctuation dropped: literal characters and slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Item {
    Char(char),
    Slot(usize),
}

fn items(pieces: &[Piece]) -> Vec<Item> {
    let mut out = Vec::new();
    for p in pieces {
        match p {
            Piece::Literal(s) => out.extend(s.chars().filter(|c| !is_punctuation(*c)).map(Item::Char)),
            Piece::Slot(i) => out.push(Item::Slot(*i)),
        }
    }
    out
}

impl Template {
    /// Builds a template and checks it structurally: slot references resolve,
    /// every slot occurs in the premise, and the patterns themselves satisfy
    /// the declared heuristic whatever the fillers are.
    pub fn new(
        id: String,
        heuristic: Heuristic,
        label: Label,
        premise: &str,
        hypothesis: &str,
        slots: Vec<Slot>,
        notes: String,
    ) -> Result<Self> {
        let bad = |message: String| Error::InvalidTemplate {
            template: id.clone(),
            message,
        };
        let mut names = HashSet::new();
        for s in &slots {
            if !names.insert(s.name.as_str()) {
                return Err(bad(format!("slot {} declared twice", s.name)));
            }
        }
        for s in &slots {
            for a in &s.agreement {
                if !names.contains(a.other.as_str()) || a.other == s.name {
                    return Err(bad(format!("slot {} agrees with unknown slot {}", s.name, a.other)));
                }
            }
        }
        let p = parse_pattern(&id, premise, &slots)?;
        let h = parse_pattern(&id, hypothesis, &slots)?;
        let pi = items(&p);
        let hi = items(&h);
        for (i, s) in slots.iter().enumerate() {
            if !pi.contains(&Item::Slot(i)) {
                return Err(bad(format!("slot {} does not occur in the premise", s.name)));
            }
        }
        let holds = match heuristic {
            Heuristic::LexicalOverlap => hi.iter().all(|x| pi.contains(x)),
            Heuristic::Subsequence => {
                hi.is_empty() || (hi.len() <= pi.len() && pi.windows(hi.len()).any(|w| w == hi.as_slice()))
            }
        };
        if !holds {
            return Err(bad(format!("patterns do not satisfy {heuristic}")));
        }
        Ok(Template {
            id,
            heuristic,
            label,
            premise: p,
            hypothesis: h,
            slots,
            notes,
        })
    }

    fn render(&self, pieces: &[Piece], fillers: &[&LexEntry]) -> (String, Vec<Token>) {
        let mut text = String::new();
        let mut tokens = Vec::new();
        for piece in pieces {
            match piece {
                Piece::Literal(s) => {
                    text.push_str(s);
                    tokens.extend(literal_tokens(s));
                }
                Piece::Slot(i) => {
                    text.push_str(&fillers[*i].surface);
                    tokens.push(Token {
                        surface: fillers[*i].surface.clone(),
                        pos: fillers[*i].pos,
                    });
                }
            }
        }
        (text, tokens)
    }

    /// Whether `candidate` may fill slot `i` given the fillers chosen so far.
    fn admissible(&self, vocab: &Vocabulary, i: usize, candidate: &LexEntry, chosen: &[Option<&LexEntry>]) -> bool {
        if chosen.iter().flatten().any(|e| e.surface == candidate.surface) {
            return false;
        }
        let slot = &self.slots[i];
        let by_name = |name: &str| self.slots.iter().position(|s| s.name == name);
        let own = slot.agreement.iter().all(|a| match chosen[by_name(&a.other).unwrap()] {
            Some(other) => vocab.agrees(&a.relation, candidate, other),
            None => true,
        });
        own && self.slots.iter().enumerate().all(|(j, s)| match chosen[j] {
            Some(other) => s
                .agreement
                .iter()
                .filter(|a| a.other == slot.name)
                .all(|a| vocab.agrees(&a.relation, other, candidate)),
            None => true,
        })
    }

    fn domains<'v>(&self, vocab: &'v Vocabulary) -> Result<Vec<Vec<&'v LexEntry>>> {
        self.slots
            .iter()
            .map(|s| {
                let d = vocab.lookup(s.pos, s.required);
                if d.is_empty() {
                    Err(Error::EmptySlotDomain {
                        template: self.id.clone(),
                        slot: s.name.clone(),
                    })
                } else {
                    Ok(d)
                }
            })
            .collect()
    }

    /// Fills the template with explicitly chosen surfaces, checking every
    /// constraint a sampled instance would satisfy.
    pub fn fill(&self, vocab: &Vocabulary, choices: &[(&str, &str)]) -> Result<Instance> {
        let bad = |message: String| Error::InvalidTemplate {
            template: self.id.clone(),
            message,
        };
        let mut chosen: Vec<Option<&LexEntry>> = vec![None; self.slots.len()];
        for (i, slot) in self.slots.iter().enumerate() {
            let surface = choices
                .iter()
                .find(|(n, _)| *n == slot.name)
                .map(|(_, s)| *s)
                .ok_or_else(|| bad(format!("no filler given for {}", slot.name)))?;
            let entry = vocab
                .find(surface, slot.pos)
                .filter(|e| e.features.contains_all(slot.required))
                .ok_or_else(|| bad(format!("{surface} cannot fill {}", slot.name)))?;
            chosen[i] = Some(entry);
        }
        let fillers: Vec<&LexEntry> = chosen.iter().map(|e| e.unwrap()).collect();
        for i in 0..self.slots.len() {
            let mut others = chosen.clone();
            others[i] = None;
            if !self.admissible(vocab, i, fillers[i], &others) {
                return Err(bad(format!(
                    "{} violates agreement or distinctness",
                    fillers[i].surface
                )));
            }
        }
        Ok(self.instance(&fillers))
    }

    fn instance(&self, fillers: &[&LexEntry]) -> Instance {
        let (premise, premise_tokens) = self.render(&self.premise, fillers);
        let (hypothesis, hypothesis_tokens) = self.render(&self.hypothesis, fillers);
        Instance {
            template: self.id.clone(),
            premise,
            hypothesis,
            fillers: self
                .slots
                .iter()
                .zip(fillers)
                .map(|(s, e)| (s.name.clone(), e.surface.clone()))
                .collect(),
            premise_tokens,
            hypothesis_tokens,
        }
    }

    /// Samples fillers slot by slot, each uniformly from the entries that meet
    /// its POS and features and agree with the slots already filled. Dead
    /// ends and premise == hypothesis restart the attempt.
    pub fn sample(&self, vocab: &Vocabulary, rng: &mut Rng) -> Result<Instance> {
        let domains = self.domains(vocab)?;
        let mut stuck: Option<usize> = None;
        'attempt: for _ in 0..MAX_ATTEMPTS {
            let mut chosen: Vec<Option<&LexEntry>> = vec![None; self.slots.len()];
            for i in 0..self.slots.len() {
                let ok: Vec<&LexEntry> = domains[i]
                    .iter()
                    .copied()
                    .filter(|e| self.admissible(vocab, i, e, &chosen))
                    .collect();
                if ok.is_empty() {
                    stuck = Some(i);
                    continue 'attempt;
                }
                chosen[i] = Some(ok[rng.gen_range(0..ok.len())]);
            }
            let fillers: Vec<&LexEntry> = chosen.into_iter().map(Option::unwrap).collect();
            let inst = self.instance(&fillers);
            if inst.premise != inst.hypothesis {
                return Ok(inst);
            }
        }
        Err(match stuck {
            Some(i) => Error::EmptySlotDomain {
                template: self.id.clone(),
                slot: self.slots[i].name.clone(),
            },
            None => Error::InvalidTemplate {
                template: self.id.clone(),
                message: "premise equals hypothesis for every filler choice tried".into(),
            },
        })
    }
}

fn literal_tokens(s: &str) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::new();
    let mut last_punct = None;
    for c in s.chars() {
        let p = is_punctuation(c);
        match out.last_mut() {
            Some(t) if last_punct == Some(p) => t.surface.push(c),
            _ => out.push(Token {
                surface: c.to_string(),
                pos: Pos::Other,
            }),
        }
        last_punct = Some(p);
    }
    out
}

/// One filled template, with token/POS annotations for both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub template: String,
    pub premise: String,
    pub hypothesis: String,
    pub fillers: Vec<(String, String)>,
    pub premise_tokens: Vec<Token>,
    pub hypothesis_tokens: Vec<Token>,
}

impl Instance {
    pub fn to_pair(&self, t: &Template) -> NliPair {
        let fillers = self
            .fillers
            .iter()
            .map(|(n, s)| format!("{n}={s}"))
            .collect::<Vec<_>>()
            .join(";");
        NliPair::new(
            self.premise.clone(),
            self.hypothesis.clone(),
            t.label,
            "hans",
            t.heuristic.as_str(),
        )
        .with_provenance("template", &t.id)
        .with_provenance("fillers", fillers)
    }
}

/// Samples one pair from `t`.
pub fn instantiate_template(t: &Template, vocab: &Vocabulary, rng: &mut Rng) -> Result<NliPair> {
    Ok(t.sample(vocab, rng)?.to_pair(t))
}

#[derive(Debug, Clone)]
pub struct HansOutput {
    pub dataset: Dataset,
    /// Token/POS annotations, aligned with `dataset.pairs`.
    pub annotations: Vec<Annotation>,
    pub attempted: usize,
}

/// Instantiates every template `per_template` times, drops duplicate
/// (premise, hypothesis) pairs keeping the first in template order, assigns
/// ids and audits each pair against its heuristic.
pub fn generate_hans(ts: &TemplateSet, vocab: &Vocabulary, per_template: usize, seed: u64) -> Result<HansOutput> {
    if per_template == 0 {
        return Err(Error::Generation("per_template must be at least 1".into()));
    }
    let batches: Vec<Vec<Instance>> = ts
        .templates
        .par_iter()
        .map(|t| {
            let mut rng: Rng = rand::SeedableRng::seed_from_u64(derive_seed(seed, &t.id));
            (0..per_template).map(|_| t.sample(vocab, &mut rng)).collect()
        })
        .collect::<Result<_>>()?;

    let attempted: usize = batches.iter().map(Vec::len).sum();
    let mut seen = HashSet::new();
    let mut pairs = Vec::new();
    let mut kept = Vec::new();
    for (t, batch) in ts.templates.iter().zip(batches) {
        for inst in batch {
            if !seen.insert((inst.premise.clone(), inst.hypothesis.clone())) {
                continue;
            }
            if !t.heuristic.holds_for_text(&inst.premise, &inst.hypothesis) {
                return Err(Error::InvalidTemplate {
                    template: t.id.clone(),
                    message: format!(
                        "emitted pair fails {}: {} / {}",
                        t.heuristic, inst.premise, inst.hypothesis
                    ),
                });
            }
            pairs.push(inst.to_pair(t));
            kept.push(inst);
        }
    }

    let mut dataset = Dataset::new(pairs);
    dataset.assign_ids();
    let annotations = dataset
        .pairs
        .iter()
        .zip(kept)
        .map(|(p, inst)| Annotation {
            id: p.id.clone(),
            premise: inst.premise_tokens,
            hypothesis: inst.hypothesis_tokens,
        })
        .collect();

    let meta: BTreeMap<String, String> = [
        ("generator", crate::GENERATOR_VERSION.to_string()),
        ("kind", "hans".to_string()),
        ("seed", seed.to_string()),
        ("per_template", per_template.to_string()),
        ("templates", ts.len().to_string()),
        ("attempted", attempted.to_string()),
        ("emitted", dataset.len().to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    dataset.meta = meta;
    Ok(HansOutput {
        dataset,
        annotations,
        attempted,
    })
}
