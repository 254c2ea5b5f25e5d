//! Chinese surface forms for fragment statements, and a backtracking parser
//! that inverts them. Names may contain characters that also occur in the
//! frames (和, 超, 一), so the parser explores every split and reports
//! ambiguity instead of guessing.

use std::collections::{BTreeSet, HashSet};

use super::{AgeCmp, CountRel, Literal, Person, Place, Statement};
use crate::resources::{bundled, EntityList};
use crate::{Error, Result};

const EU_CLAUSE: &str = "有人到过每一个地方，拥抱过每一个人";

/// The people and places an instance may mention.
#[derive(Debug, Clone)]
pub struct EntityLexicon {
    names: Vec<String>,
    places: Vec<String>,
    name_set: HashSet<String>,
    place_set: HashSet<String>,
    name_lens: BTreeSet<usize>,
    place_lens: BTreeSet<usize>,
}

impl EntityLexicon {
    pub fn new(names: &EntityList, places: &EntityList) -> Result<Self> {
        let names = names.items().to_vec();
        let places = places.items().to_vec();
        let name_set: HashSet<String> = names.iter().cloned().collect();
        let place_set: HashSet<String> = places.iter().cloned().collect();
        if let Some(both) = names.iter().find(|n| place_set.contains(*n)) {
            return Err(Error::InvalidResource {
                resource: "names/places".into(),
                message: format!("{both} is listed as both a person and a place"),
            });
        }
        let name_lens = names.iter().map(|n| n.chars().count()).collect();
        let place_lens = places.iter().map(|n| n.chars().count()).collect();
        Ok(EntityLexicon {
            names,
            places,
            name_set,
            place_set,
            name_lens,
            place_lens,
        })
    }

    pub fn bundled() -> Result<Self> {
        Self::new(
            &EntityList::parse(bundled::NAMES, "names.tsv")?,
            &EntityList::parse(bundled::PLACES, "places.tsv")?,
        )
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }
}

fn join<T: AsRef<str>>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|s| s.as_ref().to_string())
        .collect::<Vec<_>>()
        .join("、")
}

fn literal_clause(lit: &Literal) -> String {
    match lit {
        Literal::Visited(p, l) => format!("{}到过{}", p.0, l.0),
        Literal::NotVisited(p, l) => format!("{}没到过{}", p.0, l.0),
        Literal::Hugged(p, q) => format!("{}拥抱过{}", p.0, q.0),
        Literal::NotHugged(p, q) => format!("{}没拥抱过{}", p.0, q.0),
    }
}

/// Verb and object text for the six groupable kinds.
fn predicate(st: &Statement) -> Option<(&'static str, String)> {
    Some(match st {
        Statement::Visited(_, l) => ("到过", l.0.clone()),
        Statement::NotVisited(_, l) => ("没到过", l.0.clone()),
        Statement::OnlyVisited(_, ls) => ("只到过", join(ls.iter().map(|l| &l.0))),
        Statement::Hugged(_, q) => ("拥抱过", q.0.clone()),
        Statement::NotHugged(_, q) => ("没拥抱过", q.0.clone()),
        Statement::OnlyHugged(_, qs) => ("只拥抱过", join(qs.iter().map(|q| &q.0))),
        _ => return None,
    })
}

fn subject(st: &Statement) -> Option<&Person> {
    match st {
        Statement::Visited(p, _)
        | Statement::NotVisited(p, _)
        | Statement::OnlyVisited(p, _)
        | Statement::Hugged(p, _)
        | Statement::NotHugged(p, _)
        | Statement::OnlyHugged(p, _) => Some(p),
        _ => None,
    }
}

/// One statement as a clause, without final punctuation.
pub fn clause(st: &Statement) -> String {
    if let (Some(p), Some((verb, obj))) = (subject(st), predicate(st)) {
        return format!("{}{verb}{obj}", p.0);
    }
    match st {
        Statement::ExistsUniversal => EU_CLAUSE.to_string(),
        Statement::Conditional(a, c) => format!("如果{}，那么{}", literal_clause(a), literal_clause(c)),
        Statement::CountCompare(p, CountRel::MoreThan, n) => format!("{}拥抱过超过{n}个人", p.0),
        Statement::CountCompare(p, CountRel::FewerThan, n) => format!("{}拥抱过少于{n}个人", p.0),
        Statement::CountCompare(p, CountRel::Exactly, n) => format!("{}正好拥抱过{n}个人", p.0),
        Statement::AgeRel(p, AgeCmp::Younger, q) => format!("{}比{}小", p.0, q.0),
        Statement::AgeRel(p, AgeCmp::Older, q) => format!("{}比{}大", p.0, q.0),
        Statement::AgeRel(p, AgeCmp::Same, q) => format!("{}和{}一样大", p.0, q.0),
        Statement::YoungerThanAll(p, qs) => format!("{}比{}都小", p.0, join(qs.iter().map(|q| &q.0))),
        _ => unreachable!("groupable kinds handled above"),
    }
}

fn same_kind(a: &Statement, b: &Statement) -> bool {
    std::mem::discriminant(a) == std::mem::discriminant(b)
}

/// Joins premises into one sentence. Runs of the same kind with the same
/// object share a listed subject; runs of positive visits or hugs by the
/// same subject share a listed object.
pub fn realize_premise(premises: &[Statement]) -> String {
    let mut clauses = Vec::new();
    let mut i = 0;
    while i < premises.len() {
        let st = &premises[i];
        let Some((verb, obj)) = predicate(st) else {
            clauses.push(clause(st));
            i += 1;
            continue;
        };
        let mut j = i + 1;
        while j < premises.len()
            && same_kind(st, &premises[j])
            && predicate(&premises[j]).map(|x| x.1) == Some(obj.clone())
        {
            j += 1;
        }
        if j > i + 1 {
            let subjects = join(premises[i..j].iter().map(|s| &subject(s).expect("groupable").0));
            clauses.push(format!("{subjects}{verb}{obj}"));
            i = j;
            continue;
        }
        let subj = subject(st).expect("groupable");
        if matches!(st, Statement::Visited(..) | Statement::Hugged(..)) {
            while j < premises.len() && same_kind(st, &premises[j]) && subject(&premises[j]) == Some(subj) {
                j += 1;
            }
        }
        let objects = join(premises[i..j].iter().map(|s| predicate(s).expect("groupable").1));
        clauses.push(format!("{}{verb}{objects}", subj.0));
        i = j;
    }
    format!("{}。", clauses.join("，"))
}

pub fn realize_hypothesis(hypothesis: &Statement) -> String {
    format!("{}。", clause(hypothesis))
}

struct Parser<'a> {
    chars: Vec<char>,
    lex: &'a EntityLexicon,
}

impl<'a> Parser<'a> {
    fn new(text: &str, lex: &'a EntityLexicon) -> Self {
        Parser {
            chars: text.chars().collect(),
            lex,
        }
    }

    fn word(&self, pos: usize, w: &str) -> Option<usize> {
        let mut i = pos;
        for c in w.chars() {
            if self.chars.get(i) != Some(&c) {
                return None;
            }
            i += 1;
        }
        Some(i)
    }

    fn entity(&self, pos: usize, lens: &BTreeSet<usize>, set: &HashSet<String>) -> Vec<(String, usize)> {
        lens.iter()
            .filter(|&&n| pos + n <= self.chars.len())
            .filter_map(|&n| {
                let s: String = self.chars[pos..pos + n].iter().collect();
                set.contains(&s).then_some((s, pos + n))
            })
            .collect()
    }

    fn person(&self, pos: usize) -> Vec<(Person, usize)> {
        self.entity(pos, &self.lex.name_lens, &self.lex.name_set)
            .into_iter()
            .map(|(s, e)| (Person(s), e))
            .collect()
    }

    fn place(&self, pos: usize) -> Vec<(Place, usize)> {
        self.entity(pos, &self.lex.place_lens, &self.lex.place_set)
            .into_iter()
            .map(|(s, e)| (Place(s), e))
            .collect()
    }

    fn list<T: Clone>(&self, pos: usize, item: &dyn Fn(usize) -> Vec<(T, usize)>) -> Vec<(Vec<T>, usize)> {
        let mut out = Vec::new();
        for (x, end) in item(pos) {
            out.push((vec![x.clone()], end));
            if let Some(next) = self.word(end, "、") {
                for (mut rest, e) in self.list(next, item) {
                    rest.insert(0, x.clone());
                    out.push((rest, e));
                }
            }
        }
        out
    }

    fn number(&self, pos: usize) -> Option<(usize, usize)> {
        let end = (pos..self.chars.len())
            .find(|&i| !self.chars[i].is_ascii_digit())
            .unwrap_or(self.chars.len());
        if end == pos || (end - pos > 1 && self.chars[pos] == '0') || end - pos > 6 {
            return None;
        }
        let s: String = self.chars[pos..end].iter().collect();
        s.parse().ok().map(|n| (n, end))
    }

    fn literal(&self, pos: usize) -> Vec<(Literal, usize)> {
        let mut out = Vec::new();
        for (p, e) in self.person(pos) {
            for (verb, neg) in [("到过", false), ("没到过", true)] {
                if let Some(e2) = self.word(e, verb) {
                    for (l, e3) in self.place(e2) {
                        let lit = if neg {
                            Literal::NotVisited(p.clone(), l)
                        } else {
                            Literal::Visited(p.clone(), l)
                        };
                        out.push((lit, e3));
                    }
                }
            }
            for (verb, neg) in [("拥抱过", false), ("没拥抱过", true)] {
                if let Some(e2) = self.word(e, verb) {
                    for (q, e3) in self.person(e2) {
                        let lit = if neg {
                            Literal::NotHugged(p.clone(), q)
                        } else {
                            Literal::Hugged(p.clone(), q)
                        };
                        out.push((lit, e3));
                    }
                }
            }
        }
        out
    }

    /// Every reading of one clause starting at `pos`.
    fn clause(&self, pos: usize) -> Vec<(Vec<Statement>, usize)> {
        let mut out = Vec::new();
        if let Some(e) = self.word(pos, EU_CLAUSE) {
            out.push((vec![Statement::ExistsUniversal], e));
        }
        if let Some(e) = self.word(pos, "如果") {
            for (a, e2) in self.literal(e) {
                if let Some(e3) = self.word(e2, "，那么") {
                    for (c, e4) in self.literal(e3) {
                        out.push((vec![Statement::Conditional(a.clone(), c)], e4));
                    }
                }
            }
        }
        let person = |p| self.person(p);
        let place = |p| self.place(p);
        for (subjects, e) in self.list(pos, &person) {
            let single = subjects.len() == 1;
            let s0 = subjects[0].clone();
            // visits
            for (verb, kind) in [("只到过", 0), ("没到过", 1), ("到过", 2)] {
                let Some(e2) = self.word(e, verb) else { continue };
                for (objs, e3) in self.list(e2, &place) {
                    let sts: Vec<Statement> = match kind {
                        0 => subjects
                            .iter()
                            .map(|s| Statement::OnlyVisited(s.clone(), objs.clone()))
                            .collect(),
                        _ if objs.len() > 1 && (!single || kind == 1) => continue,
                        1 => subjects
                            .iter()
                            .map(|s| Statement::NotVisited(s.clone(), objs[0].clone()))
                            .collect(),
                        _ => subjects
                            .iter()
                            .flat_map(|s| objs.iter().map(move |l| Statement::Visited(s.clone(), l.clone())))
                            .collect(),
                    };
                    out.push((sts, e3));
                }
            }
            // hugs
            for (verb, kind) in [("只拥抱过", 0), ("没拥抱过", 1), ("拥抱过", 2)] {
                let Some(e2) = self.word(e, verb) else { continue };
                for (objs, e3) in self.list(e2, &person) {
                    let sts: Vec<Statement> = match kind {
                        0 => subjects
                            .iter()
                            .map(|s| Statement::OnlyHugged(s.clone(), objs.clone()))
                            .collect(),
                        _ if objs.len() > 1 && (!single || kind == 1) => continue,
                        1 => subjects
                            .iter()
                            .map(|s| Statement::NotHugged(s.clone(), objs[0].clone()))
                            .collect(),
                        _ => subjects
                            .iter()
                            .flat_map(|s| objs.iter().map(move |q| Statement::Hugged(s.clone(), q.clone())))
                            .collect(),
                    };
                    out.push((sts, e3));
                }
            }
            if !single {
                continue;
            }
            for (frame, rel) in [
                ("拥抱过超过", CountRel::MoreThan),
                ("拥抱过少于", CountRel::FewerThan),
                ("正好拥抱过", CountRel::Exactly),
            ] {
                if let Some((n, e3)) = self.word(e, frame).and_then(|e2| self.number(e2)) {
                    if let Some(e4) = self.word(e3, "个人") {
                        out.push((vec![Statement::CountCompare(s0.clone(), rel, n)], e4));
                    }
                }
            }
            if let Some(e2) = self.word(e, "比") {
                for (objs, e3) in self.list(e2, &person) {
                    if objs.len() > 1 {
                        if let Some(e4) = self.word(e3, "都小") {
                            out.push((vec![Statement::YoungerThanAll(s0.clone(), objs)], e4));
                        }
                        continue;
                    }
                    for (w, cmp) in [("小", AgeCmp::Younger), ("大", AgeCmp::Older)] {
                        if let Some(e4) = self.word(e3, w) {
                            out.push((vec![Statement::AgeRel(s0.clone(), cmp, objs[0].clone())], e4));
                        }
                    }
                }
            }
            if let Some(e2) = self.word(e, "和") {
                for (q, e3) in self.person(e2) {
                    if let Some(e4) = self.word(e3, "一样大") {
                        out.push((vec![Statement::AgeRel(s0.clone(), AgeCmp::Same, q)], e4));
                    }
                }
            }
        }
        out
    }

    /// Every reading of clauses separated by "，" from `pos` up to the final "。".
    fn clauses(&self, pos: usize) -> Vec<Vec<Statement>> {
        let mut out = Vec::new();
        for (sts, e) in self.clause(pos) {
            if self.word(e, "。") == Some(self.chars.len()) {
                out.push(sts.clone());
            }
            if let Some(next) = self.word(e, "，") {
                for rest in self.clauses(next) {
                    let mut all = sts.clone();
                    all.extend(rest);
                    out.push(all);
                }
            }
        }
        out
    }
}

fn unique<T: PartialEq>(mut readings: Vec<T>, text: &str) -> Result<T> {
    let mut distinct: Vec<T> = Vec::new();
    for r in readings.drain(..) {
        if !distinct.contains(&r) {
            distinct.push(r);
        }
    }
    match distinct.len() {
        0 => Err(Error::FragmentParse(format!("no reading for {text}"))),
        1 => Ok(distinct.pop().expect("one reading")),
        n => Err(Error::FragmentParse(format!("{n} readings for {text}"))),
    }
}

/// Parses a premise sentence; fails when it has no reading or several.
pub fn parse_premise(text: &str, lex: &EntityLexicon) -> Result<Vec<Statement>> {
    unique(Parser::new(text, lex).clauses(0), text)
}

/// Parses a one-clause hypothesis sentence.
pub fn parse_hypothesis(text: &str, lex: &EntityLexicon) -> Result<Statement> {
    let readings = Parser::new(text, lex)
        .clauses(0)
        .into_iter()
        .filter(|r| r.len() == 1)
        .map(|mut r| r.pop().expect("one statement"))
        .collect();
    unique(readings, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> EntityLexicon {
        EntityLexicon::bundled().unwrap()
    }

    #[test]
    fn grouped_subjects_and_objects_round_trip() {
        let lex = lex();
        let p = |s: &str| Person::from(s);
        let l = |s: &str| Place::from(s);
        let prem = vec![
            Statement::OnlyVisited(p("何峥"), vec![l("临汾市襄汾县")]),
            Statement::OnlyVisited(p("管得宽"), vec![l("临汾市襄汾县")]),
            Statement::Visited(p("李国柱"), l("湛江市麻章区")),
            Statement::Visited(p("李国柱"), l("大连市普兰店区")),
            Statement::NotHugged(p("何峥"), p("丰隆格")),
        ];
        let text = realize_premise(&prem);
        assert_eq!(
            text,
            "何峥、管得宽只到过临汾市襄汾县，李国柱到过湛江市麻章区、大连市普兰店区，何峥没拥抱过丰隆格。"
        );
        assert_eq!(parse_premise(&text, &lex).unwrap(), prem);
    }

    #[test]
    fn names_sharing_frame_characters_parse() {
        let lex = lex();
        let h = parse_hypothesis("王艳没拥抱过包一。", &lex).unwrap();
        assert_eq!(h, Statement::NotHugged(Person::from("王艳"), Person::from("包一")));
        assert!(parse_hypothesis("王艳没拥抱过谁。", &lex).is_err());
    }
}
