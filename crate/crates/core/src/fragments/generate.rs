//! Fragment templates and the generation loop.
//!
//! Each template builds a premise list and a hypothesis with a label known
//! by construction. Every instance is realized, parsed back, and labelled
//! by the oracle; a reading mismatch means resample, a label mismatch is a
//! bug and aborts.

use std::collections::{BTreeMap, HashSet};

use rand::Rng as _;
use rayon::prelude::*;

use super::oracle::oracle_label;
use super::text::{parse_hypothesis, parse_premise, realize_hypothesis, realize_premise, EntityLexicon};
use super::{AgeCmp, Category, CountRel, Literal, Person, Place, Statement};
use crate::seed::{rng_for, Rng};
use crate::{Dataset, Error, Label, NliPair, Result};

const MAX_ATTEMPTS: usize = 200;

pub struct Picker<'a> {
    rng: &'a mut Rng,
    lex: &'a EntityLexicon,
    persons: HashSet<usize>,
    places: HashSet<usize>,
}

impl Picker<'_> {
    fn person(&mut self) -> Person {
        loop {
            let i = self.rng.gen_range(0..self.lex.names().len());
            if self.persons.insert(i) {
                return Person(self.lex.names()[i].clone());
            }
        }
    }

    fn persons(&mut self, k: usize) -> Vec<Person> {
        (0..k).map(|_| self.person()).collect()
    }

    fn place(&mut self) -> Place {
        loop {
            let i = self.rng.gen_range(0..self.lex.places().len());
            if self.places.insert(i) {
                return Place(self.lex.places()[i].clone());
            }
        }
    }

    fn places(&mut self, k: usize) -> Vec<Place> {
        (0..k).map(|_| self.place()).collect()
    }

    fn int(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    /// A visit or hug fact about fresh people, with random polarity.
    fn literal(&mut self) -> Literal {
        let p = self.person();
        let lit = if self.coin() {
            Literal::Visited(p, self.place())
        } else {
            Literal::Hugged(p, self.person())
        };
        if self.coin() {
            lit.negate()
        } else {
            lit
        }
    }
}

type Build = fn(&mut Picker) -> (Vec<Statement>, Statement);

#[derive(Clone, Copy)]
pub struct FragmentTemplate {
    pub name: &'static str,
    pub category: Category,
    pub label: Label,
    /// The template's label pattern is our own design rather than an
    /// attested example.
    pub reconstructed: bool,
    build: Build,
}

impl std::fmt::Debug for FragmentTemplate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FragmentTemplate")
            .field("name", &self.name)
            .field("category", &self.category)
            .field("label", &self.label)
            .finish()
    }
}

const fn t(name: &'static str, category: Category, label: Label, build: Build) -> FragmentTemplate {
    FragmentTemplate {
        name,
        category,
        label,
        reconstructed: false,
        build,
    }
}

const fn r(name: &'static str, category: Category, label: Label, build: Build) -> FragmentTemplate {
    FragmentTemplate {
        reconstructed: true,
        ..t(name, category, label, build)
    }
}

use Category::*;
use Label::{Contradiction as C, Entailment as E, Neutral as N};

/// Each person only visited a place of their own.
fn own_places(pk: &mut Picker) -> (Vec<Person>, Vec<Place>, Vec<Statement>) {
    let k = pk.int(2, 4);
    let ps = pk.persons(k);
    let ls = pk.places(k);
    let prem = ps
        .iter()
        .zip(&ls)
        .map(|(p, l)| Statement::OnlyVisited(p.clone(), vec![l.clone()]))
        .collect();
    (ps, ls, prem)
}

fn two_distinct(pk: &mut Picker, k: usize) -> (usize, usize) {
    let i = pk.index(k);
    let j = (i + 1 + pk.index(k - 1)) % k;
    (i, j)
}

fn neg_e_elsewhere(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, ls, prem) = own_places(pk);
    let (i, j) = two_distinct(pk, ps.len());
    (prem, Statement::NotVisited(ps[i].clone(), ls[j].clone()))
}

fn neg_e_own(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, ls, prem) = own_places(pk);
    let i = pk.index(ps.len());
    (prem, Statement::Visited(ps[i].clone(), ls[i].clone()))
}

fn neg_c_elsewhere(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, ls, prem) = own_places(pk);
    let (i, j) = two_distinct(pk, ps.len());
    (prem, Statement::Visited(ps[i].clone(), ls[j].clone()))
}

fn neg_c_own(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, ls, prem) = own_places(pk);
    let i = pk.index(ps.len());
    (prem, Statement::NotVisited(ps[i].clone(), ls[i].clone()))
}

fn neg_n_stranger(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, ls, prem) = own_places(pk);
    let j = pk.index(ps.len());
    (prem, Statement::Visited(pk.person(), ls[j].clone()))
}

fn neg_n_stranger_not(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, ls, prem) = own_places(pk);
    let j = pk.index(ps.len());
    (prem, Statement::NotVisited(pk.person(), ls[j].clone()))
}

/// Several people who only visited the same one or two places.
fn shared_places(pk: &mut Picker) -> (Vec<Person>, Vec<Place>, Vec<Statement>) {
    let k = pk.int(2, 4);
    let m = pk.int(1, 2);
    let ps = pk.persons(k);
    let ls = pk.places(m);
    let prem = ps
        .iter()
        .map(|p| Statement::OnlyVisited(p.clone(), ls.clone()))
        .collect();
    (ps, ls, prem)
}

fn bool_e_other(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, _, prem) = shared_places(pk);
    let i = pk.index(ps.len());
    (prem, Statement::NotVisited(ps[i].clone(), pk.place()))
}

fn bool_e_listed(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, ls, prem) = shared_places(pk);
    let (i, j) = (pk.index(ps.len()), pk.index(ls.len()));
    (prem, Statement::Visited(ps[i].clone(), ls[j].clone()))
}

fn bool_c_other(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, _, prem) = shared_places(pk);
    let i = pk.index(ps.len());
    (prem, Statement::Visited(ps[i].clone(), pk.place()))
}

fn bool_c_listed(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, ls, prem) = shared_places(pk);
    let (i, j) = (pk.index(ps.len()), pk.index(ls.len()));
    (prem, Statement::NotVisited(ps[i].clone(), ls[j].clone()))
}

fn bool_n_stranger(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (_, ls, prem) = shared_places(pk);
    let j = pk.index(ls.len());
    (prem, Statement::Visited(pk.person(), ls[j].clone()))
}

fn bool_n_stranger_other(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (_, _, prem) = shared_places(pk);
    (prem, Statement::NotVisited(pk.person(), pk.place()))
}

fn quant_n_hug(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let ps = pk.persons(2);
    let lit = Literal::Hugged(ps[0].clone(), ps[1].clone());
    let lit = if pk.coin() { lit.negate() } else { lit };
    (vec![Statement::ExistsUniversal], lit.to_statement())
}

fn quant_n_visit(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let lit = Literal::Visited(pk.person(), pk.place());
    let lit = if pk.coin() { lit.negate() } else { lit };
    (vec![Statement::ExistsUniversal], lit.to_statement())
}

fn quant_n_only_visit(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let ps = pk.persons(2);
    let prem = vec![
        Statement::ExistsUniversal,
        Statement::OnlyVisited(ps[0].clone(), vec![pk.place()]),
    ];
    (prem, Statement::Hugged(ps[0].clone(), ps[1].clone()))
}

fn eu_only_visit(pk: &mut Picker) -> (Person, Place, Vec<Statement>) {
    let p = pk.person();
    let l = pk.place();
    let prem = vec![
        Statement::ExistsUniversal,
        Statement::OnlyVisited(p.clone(), vec![l.clone()]),
    ];
    (p, l, prem)
}

fn eu_only_hug(pk: &mut Picker) -> (Vec<Person>, Vec<Statement>) {
    let ps = pk.persons(3);
    let prem = vec![
        Statement::ExistsUniversal,
        Statement::OnlyHugged(ps[0].clone(), vec![ps[1].clone()]),
    ];
    (ps, prem)
}

fn quant_e_only_visit(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (p, l, prem) = eu_only_visit(pk);
    let h = if pk.coin() {
        Statement::Visited(p, l)
    } else {
        Statement::NotVisited(p, pk.place())
    };
    (prem, h)
}

fn quant_e_only_hug(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, prem) = eu_only_hug(pk);
    (prem, Statement::NotHugged(ps[0].clone(), ps[2].clone()))
}

fn quant_c_only_visit(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (p, _, prem) = eu_only_visit(pk);
    (prem, Statement::Visited(p, pk.place()))
}

fn quant_c_only_hug(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (ps, prem) = eu_only_hug(pk);
    (prem, Statement::Hugged(ps[0].clone(), ps[2].clone()))
}

fn only_hugged(pk: &mut Picker) -> (Person, usize, Vec<Statement>) {
    let k = pk.int(2, 8);
    let p = pk.person();
    let qs = pk.persons(k);
    (p.clone(), k, vec![Statement::OnlyHugged(p, qs)])
}

fn count_c_more(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (p, k, prem) = only_hugged(pk);
    let n = pk.int(k, k + 5);
    (prem, Statement::CountCompare(p, CountRel::MoreThan, n))
}

fn count_c_fewer(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (p, k, prem) = only_hugged(pk);
    let n = pk.int(1, k);
    (prem, Statement::CountCompare(p, CountRel::FewerThan, n))
}

fn count_c_exactly(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (p, k, prem) = only_hugged(pk);
    let mut n = pk.int(1, k + 2);
    if n == k {
        n = k + 3;
    }
    (prem, Statement::CountCompare(p, CountRel::Exactly, n))
}

fn count_e_more(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (p, k, prem) = only_hugged(pk);
    let n = pk.int(1, k - 1);
    (prem, Statement::CountCompare(p, CountRel::MoreThan, n))
}

fn count_e_exactly(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (p, k, prem) = only_hugged(pk);
    (prem, Statement::CountCompare(p, CountRel::Exactly, k))
}

fn count_e_fewer(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (p, k, prem) = only_hugged(pk);
    let n = pk.int(k + 1, k + 5);
    (prem, Statement::CountCompare(p, CountRel::FewerThan, n))
}

fn count_n_hugged_list(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let k = pk.int(2, 5);
    let p = pk.person();
    let prem = pk
        .persons(k)
        .into_iter()
        .map(|q| Statement::Hugged(p.clone(), q))
        .collect();
    let n = pk.int(k, k + 4);
    (prem, Statement::CountCompare(p, CountRel::MoreThan, n))
}

fn count_n_lower_bound(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let p = pk.person();
    let m = pk.int(1, 6);
    let n = pk.int(m + 1, m + 4);
    (
        vec![Statement::CountCompare(p.clone(), CountRel::MoreThan, m)],
        Statement::CountCompare(p, CountRel::MoreThan, n),
    )
}

fn count_e_lower_bound(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let p = pk.person();
    let m = pk.int(2, 8);
    let n = pk.int(1, m);
    (
        vec![Statement::CountCompare(p.clone(), CountRel::MoreThan, m)],
        Statement::CountCompare(p, CountRel::MoreThan, n),
    )
}

fn count_c_lower_bound(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let p = pk.person();
    let m = pk.int(1, 8);
    let n = pk.int(1, m + 1);
    (
        vec![Statement::CountCompare(p.clone(), CountRel::MoreThan, m)],
        Statement::CountCompare(p, CountRel::FewerThan, n),
    )
}

fn cond(a: &Literal, b: &Literal) -> Statement {
    Statement::Conditional(a.clone(), b.clone())
}

fn cond_e_ponens(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (a, b) = (pk.literal(), pk.literal());
    (vec![a.to_statement(), cond(&a, &b)], b.to_statement())
}

fn cond_e_tollens(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (a, b) = (pk.literal(), pk.literal());
    (vec![b.negate().to_statement(), cond(&a, &b)], a.negate().to_statement())
}

fn cond_c_ponens(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (a, b) = (pk.literal(), pk.literal());
    (vec![a.to_statement(), cond(&a, &b)], b.negate().to_statement())
}

fn cond_c_tollens(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (a, b) = (pk.literal(), pk.literal());
    (vec![b.negate().to_statement(), cond(&a, &b)], a.to_statement())
}

fn cond_n_denied_antecedent(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (a, b) = (pk.literal(), pk.literal());
    (vec![a.to_statement(), cond(&a.negate(), &b)], b.negate().to_statement())
}

fn cond_n_affirmed_consequent(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (a, b) = (pk.literal(), pk.literal());
    (vec![b.to_statement(), cond(&a, &b)], a.to_statement())
}

/// p is younger than every q, and m is as old as p.
fn age_chain(pk: &mut Picker, max_k: usize) -> (Person, Vec<Person>, Person, Vec<Statement>) {
    let k = pk.int(2, max_k);
    let p = pk.person();
    let qs = pk.persons(k);
    let m = pk.person();
    let prem = vec![
        Statement::YoungerThanAll(p.clone(), qs.clone()),
        Statement::AgeRel(p.clone(), AgeCmp::Same, m.clone()),
    ];
    (p, qs, m, prem)
}

fn cmp_c_same_older(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (_, qs, m, prem) = age_chain(pk, 4);
    let i = pk.index(qs.len());
    (prem, Statement::AgeRel(m, AgeCmp::Older, qs[i].clone()))
}

fn cmp_c_member_younger(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (p, qs, _, prem) = age_chain(pk, 4);
    let i = pk.index(qs.len());
    (prem, Statement::AgeRel(qs[i].clone(), AgeCmp::Younger, p))
}

fn cmp_e_same_younger(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (_, qs, m, prem) = age_chain(pk, 4);
    let i = pk.index(qs.len());
    (prem, Statement::AgeRel(m, AgeCmp::Younger, qs[i].clone()))
}

fn cmp_e_member_older(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (_, qs, m, prem) = age_chain(pk, 4);
    let i = pk.index(qs.len());
    (prem, Statement::AgeRel(qs[i].clone(), AgeCmp::Older, m))
}

fn cmp_n_members(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (_, qs, _, prem) = age_chain(pk, 4);
    let (i, j) = two_distinct(pk, qs.len());
    (prem, Statement::AgeRel(qs[i].clone(), AgeCmp::Older, qs[j].clone()))
}

fn cmp_n_stranger(pk: &mut Picker) -> (Vec<Statement>, Statement) {
    let (_, _, m, prem) = age_chain(pk, 3);
    (prem, Statement::AgeRel(m, AgeCmp::Younger, pk.person()))
}

const TEMPLATES: &[FragmentTemplate] = &[
    t("negation-e-not-elsewhere", Negation, E, neg_e_elsewhere),
    t("negation-e-visited-own", Negation, E, neg_e_own),
    t("negation-c-visited-elsewhere", Negation, C, neg_c_elsewhere),
    t("negation-c-not-own", Negation, C, neg_c_own),
    t("negation-n-stranger-visited", Negation, N, neg_n_stranger),
    t("negation-n-stranger-not", Negation, N, neg_n_stranger_not),
    t("boolean-e-not-other", Boolean, E, bool_e_other),
    t("boolean-e-visited-listed", Boolean, E, bool_e_listed),
    t("boolean-c-visited-other", Boolean, C, bool_c_other),
    t("boolean-c-not-listed", Boolean, C, bool_c_listed),
    t("boolean-n-stranger-listed", Boolean, N, bool_n_stranger),
    t("boolean-n-stranger-other", Boolean, N, bool_n_stranger_other),
    t("quantifier-n-hug", Quantifier, N, quant_n_hug),
    t("quantifier-n-visit", Quantifier, N, quant_n_visit),
    t("quantifier-n-only-visit", Quantifier, N, quant_n_only_visit),
    r("quantifier-e-only-visit", Quantifier, E, quant_e_only_visit),
    r("quantifier-e-only-hug", Quantifier, E, quant_e_only_hug),
    r("quantifier-c-only-visit", Quantifier, C, quant_c_only_visit),
    r("quantifier-c-only-hug", Quantifier, C, quant_c_only_hug),
    t("counting-c-more-than", Counting, C, count_c_more),
    t("counting-c-fewer-than", Counting, C, count_c_fewer),
    t("counting-c-exactly", Counting, C, count_c_exactly),
    t("counting-c-lower-bound", Counting, C, count_c_lower_bound),
    t("counting-e-more-than", Counting, E, count_e_more),
    t("counting-e-exactly", Counting, E, count_e_exactly),
    t("counting-e-fewer-than", Counting, E, count_e_fewer),
    t("counting-e-lower-bound", Counting, E, count_e_lower_bound),
    t("counting-n-hugged-list", Counting, N, count_n_hugged_list),
    t("counting-n-lower-bound", Counting, N, count_n_lower_bound),
    t("conditional-e-modus-ponens", Conditional, E, cond_e_ponens),
    t("conditional-e-modus-tollens", Conditional, E, cond_e_tollens),
    t("conditional-c-ponens-denied", Conditional, C, cond_c_ponens),
    t("conditional-c-tollens-denied", Conditional, C, cond_c_tollens),
    t(
        "conditional-n-denied-antecedent",
        Conditional,
        N,
        cond_n_denied_antecedent,
    ),
    t(
        "conditional-n-affirmed-consequent",
        Conditional,
        N,
        cond_n_affirmed_consequent,
    ),
    t("comparative-c-same-older", Comparative, C, cmp_c_same_older),
    t("comparative-c-member-younger", Comparative, C, cmp_c_member_younger),
    t("comparative-e-same-younger", Comparative, E, cmp_e_same_younger),
    t("comparative-e-member-older", Comparative, E, cmp_e_member_older),
    t("comparative-n-members", Comparative, N, cmp_n_members),
    t("comparative-n-stranger", Comparative, N, cmp_n_stranger),
];

/// Templates of one category, in a fixed order.
pub fn templates(category: Category) -> Vec<&'static FragmentTemplate> {
    TEMPLATES.iter().filter(|t| t.category == category).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FragmentInstance {
    pub template: &'static str,
    pub label: Label,
    pub reconstructed: bool,
    pub premises: Vec<Statement>,
    pub hypothesis: Statement,
    pub premise_text: String,
    pub hypothesis_text: String,
}

impl FragmentTemplate {
    /// One instance, or `None` when the text does not read back uniquely.
    pub fn instantiate(&self, lex: &EntityLexicon, rng: &mut Rng) -> Result<Option<FragmentInstance>> {
        let mut pk = Picker {
            rng,
            lex,
            persons: HashSet::new(),
            places: HashSet::new(),
        };
        let (premises, hypothesis) = (self.build)(&mut pk);
        let premise_text = realize_premise(&premises);
        let hypothesis_text = realize_hypothesis(&hypothesis);
        let reads_back = parse_premise(&premise_text, lex).is_ok_and(|p| p == premises)
            && parse_hypothesis(&hypothesis_text, lex).is_ok_and(|h| h == hypothesis);
        if !reads_back {
            return Ok(None);
        }
        let actual = oracle_label(&premises, &hypothesis)?;
        if actual != self.label {
            return Err(Error::OracleDisagreement {
                template: self.name.to_string(),
                expected: self.label,
                actual,
                premise: premise_text,
                hypothesis: hypothesis_text,
            });
        }
        Ok(Some(FragmentInstance {
            template: self.name,
            label: self.label,
            reconstructed: self.reconstructed,
            premises,
            hypothesis,
            premise_text,
            hypothesis_text,
        }))
    }
}

/// Template for slot `i`: labels cycle E, N, C and templates of a label
/// take turns.
fn template_for(category: Category, i: usize) -> &'static FragmentTemplate {
    let label = [Label::Entailment, Label::Neutral, Label::Contradiction][i % 3];
    let pool: Vec<_> = templates(category).into_iter().filter(|t| t.label == label).collect();
    pool[(i / 3) % pool.len()]
}

struct Slot {
    instance: FragmentInstance,
    next_attempt: usize,
    rejected: usize,
}

fn fill_slot(category: Category, lex: &EntityLexicon, seed: u64, i: usize, first_attempt: usize) -> Result<Slot> {
    let template = template_for(category, i);
    let mut rejected = 0;
    for attempt in first_attempt..first_attempt + MAX_ATTEMPTS {
        let mut rng = rng_for(seed, &format!("{category}:{i}:{attempt}"));
        match template.instantiate(lex, &mut rng)? {
            Some(instance) => {
                return Ok(Slot {
                    instance,
                    next_attempt: attempt + 1,
                    rejected,
                })
            }
            None => rejected += 1,
        }
    }
    Err(Error::Generation(format!(
        "template {} produced no readable instance in {MAX_ATTEMPTS} attempts",
        template.name
    )))
}

/// `count` distinct instances of one category, and how many candidates were
/// rejected as unreadable or duplicate.
pub fn generate_instances(
    category: Category,
    lex: &EntityLexicon,
    count: usize,
    seed: u64,
) -> Result<(Vec<FragmentInstance>, usize)> {
    let slots: Vec<Slot> = (0..count)
        .into_par_iter()
        .map(|i| fill_slot(category, lex, seed, i, 0))
        .collect::<Result<_>>()?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let mut rejected = 0;
    for (i, mut slot) in slots.into_iter().enumerate() {
        rejected += slot.rejected;
        let mut redraws = 0;
        while !seen.insert((
            slot.instance.premise_text.clone(),
            slot.instance.hypothesis_text.clone(),
        )) {
            rejected += 1;
            redraws += 1;
            if redraws > MAX_ATTEMPTS {
                return Err(Error::Generation(format!("no fresh {category} instance for slot {i}")));
            }
            slot = fill_slot(category, lex, seed, i, slot.next_attempt)?;
            rejected += slot.rejected;
        }
        out.push(slot.instance);
    }
    Ok((out, rejected))
}

/// A labelled dataset of one fragment category.
pub fn generate_fragment(category: Category, lex: &EntityLexicon, count: usize, seed: u64) -> Result<Dataset> {
    let (instances, rejected) = generate_instances(category, lex, count, seed)?;
    let pairs = instances
        .into_iter()
        .map(|inst| {
            NliPair::new(
                inst.premise_text,
                inst.hypothesis_text,
                inst.label,
                "fragment",
                category.as_str(),
            )
            .with_provenance("template", inst.template)
            .with_provenance("reconstructed", inst.reconstructed.to_string())
        })
        .collect();
    let mut dataset = Dataset::new(pairs);
    dataset.assign_ids();
    let meta: BTreeMap<String, String> = [
        ("generator", crate::GENERATOR_VERSION.to_string()),
        ("kind", "fragment".to_string()),
        ("category", category.to_string()),
        ("seed", seed.to_string()),
        ("count", count.to_string()),
        ("emitted", dataset.len().to_string()),
        ("rejected", rejected.to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    dataset.meta = meta;
    Ok(dataset)
}
