//! Semantic fragments: a small logic of visiting places, hugging people and
//! comparing ages, realized in Chinese, with labels decided by a
//! three-valued world-sketch oracle and cross-checked by enumeration.
//!
//! Semantics. Hugging is irreflexive, so "hugged every person" means every
//! other person. The domain holds the mentioned people plus fresh ones
//! (one more than the largest numeral in any count statement, at least one)
//! and the mentioned places plus one fresh place, so unmentioned individuals
//! can witness or falsify open-world claims.

mod brute;
mod generate;
mod oracle;
mod text;

use std::fmt;
use std::str::FromStr;

pub use brute::{brute_force_label, Bounds, MAX_AGE_PERSONS, MAX_FREE_CELLS};
pub use generate::{generate_fragment, generate_instances, templates, FragmentInstance, FragmentTemplate};
pub use oracle::oracle_label;
pub use text::{parse_hypothesis, parse_premise, realize_hypothesis, realize_premise, EntityLexicon};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Person(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place(pub String);

impl From<&str> for Person {
    fn from(s: &str) -> Self {
        Person(s.to_string())
    }
}

impl From<&str> for Place {
    fn from(s: &str) -> Self {
        Place(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountRel {
    MoreThan,
    FewerThan,
    Exactly,
}

impl CountRel {
    pub fn holds(self, count: usize, n: usize) -> bool {
        match self {
            CountRel::MoreThan => count > n,
            CountRel::FewerThan => count < n,
            CountRel::Exactly => count == n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgeCmp {
    Younger,
    Older,
    Same,
}

/// A visit or hug fact, possibly negated; the parts of a conditional.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Visited(Person, Place),
    NotVisited(Person, Place),
    Hugged(Person, Person),
    NotHugged(Person, Person),
}

impl Literal {
    pub fn negate(&self) -> Literal {
        match self.clone() {
            Literal::Visited(p, l) => Literal::NotVisited(p, l),
            Literal::NotVisited(p, l) => Literal::Visited(p, l),
            Literal::Hugged(p, q) => Literal::NotHugged(p, q),
            Literal::NotHugged(p, q) => Literal::Hugged(p, q),
        }
    }

    pub fn to_statement(&self) -> Statement {
        match self.clone() {
            Literal::Visited(p, l) => Statement::Visited(p, l),
            Literal::NotVisited(p, l) => Statement::NotVisited(p, l),
            Literal::Hugged(p, q) => Statement::Hugged(p, q),
            Literal::NotHugged(p, q) => Statement::NotHugged(p, q),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Visited(Person, Place),
    NotVisited(Person, Place),
    OnlyVisited(Person, Vec<Place>),
    Hugged(Person, Person),
    NotHugged(Person, Person),
    OnlyHugged(Person, Vec<Person>),
    /// Someone visited every place and hugged every other person.
    ExistsUniversal,
    Conditional(Literal, Literal),
    CountCompare(Person, CountRel, usize),
    AgeRel(Person, AgeCmp, Person),
    YoungerThanAll(Person, Vec<Person>),
}

impl Statement {
    pub fn as_literal(&self) -> Option<Literal> {
        Some(match self.clone() {
            Statement::Visited(p, l) => Literal::Visited(p, l),
            Statement::NotVisited(p, l) => Literal::NotVisited(p, l),
            Statement::Hugged(p, q) => Literal::Hugged(p, q),
            Statement::NotHugged(p, q) => Literal::NotHugged(p, q),
            _ => return None,
        })
    }

    pub fn is_age(&self) -> bool {
        matches!(self, Statement::AgeRel(..) | Statement::YoungerThanAll(..))
    }

    /// People and places in order of first mention.
    pub fn entities(&self, persons: &mut Vec<Person>, places: &mut Vec<Place>) {
        fn person(v: &mut Vec<Person>, p: &Person) {
            if !v.contains(p) {
                v.push(p.clone());
            }
        }
        fn place(v: &mut Vec<Place>, l: &Place) {
            if !v.contains(l) {
                v.push(l.clone());
            }
        }
        match self {
            Statement::Visited(p, l) | Statement::NotVisited(p, l) => {
                person(persons, p);
                place(places, l);
            }
            Statement::OnlyVisited(p, ls) => {
                person(persons, p);
                ls.iter().for_each(|l| place(places, l));
            }
            Statement::Hugged(p, q) | Statement::NotHugged(p, q) | Statement::AgeRel(p, _, q) => {
                person(persons, p);
                person(persons, q);
            }
            Statement::OnlyHugged(p, qs) | Statement::YoungerThanAll(p, qs) => {
                person(persons, p);
                qs.iter().for_each(|q| person(persons, q));
            }
            Statement::ExistsUniversal => {}
            Statement::Conditional(a, c) => {
                a.to_statement().entities(persons, places);
                c.to_statement().entities(persons, places);
            }
            Statement::CountCompare(p, _, _) => person(persons, p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Boolean,
    Comparative,
    Conditional,
    Counting,
    Negation,
    Quantifier,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::Boolean,
        Category::Comparative,
        Category::Conditional,
        Category::Counting,
        Category::Negation,
        Category::Quantifier,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Boolean => "boolean",
            Category::Comparative => "comparative",
            Category::Conditional => "conditional",
            Category::Counting => "counting",
            Category::Negation => "negation",
            Category::Quantifier => "quantifier",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown fragment category {s:?}"))
    }
}

/// People and places of an instance: mentioned ones first, then fresh ones.
#[derive(Debug, Clone)]
pub(crate) struct Domain {
    pub persons: Vec<Person>,
    pub places: Vec<Place>,
}

impl Domain {
    pub fn new(premises: &[Statement], hypothesis: &Statement, fresh_persons: usize, fresh_places: usize) -> Self {
        let mut persons = Vec::new();
        let mut places = Vec::new();
        for s in premises.iter().chain(std::iter::once(hypothesis)) {
            s.entities(&mut persons, &mut places);
        }
        for i in 0..fresh_persons {
            persons.push(Person(format!("#person{i}")));
        }
        for i in 0..fresh_places {
            places.push(Place(format!("#place{i}")));
        }
        Domain { persons, places }
    }

    /// The default padding: one fresh place, and one more fresh person than
    /// the largest count numeral (at least one).
    pub fn padding(premises: &[Statement], hypothesis: &Statement) -> (usize, usize) {
        let max_n = premises
            .iter()
            .chain(std::iter::once(hypothesis))
            .filter_map(|s| match s {
                Statement::CountCompare(_, _, n) => Some(*n),
                _ => None,
            })
            .max();
        (max_n.map_or(1, |n| (n + 1).max(1)), 1)
    }

    pub fn person(&self, p: &Person) -> usize {
        self.persons.iter().position(|x| x == p).expect("person in domain")
    }

    pub fn place(&self, l: &Place) -> usize {
        self.places.iter().position(|x| x == l).expect("place in domain")
    }

    pub fn np(&self) -> usize {
        self.persons.len()
    }

    pub fn nl(&self) -> usize {
        self.places.len()
    }

    /// Cell index of visit(p, l); hug cells follow the visit block. Hug
    /// cells on the diagonal exist but are always false.
    pub fn visit_cell(&self, p: usize, l: usize) -> usize {
        p * self.nl() + l
    }

    pub fn hug_cell(&self, p: usize, q: usize) -> usize {
        self.np() * self.nl() + p * self.np() + q
    }

    pub fn is_diagonal(&self, cell: usize) -> bool {
        let base = self.np() * self.nl();
        cell >= base && (cell - base).is_multiple_of(self.np() + 1)
    }

    pub fn cells(&self) -> usize {
        self.np() * self.nl() + self.np() * self.np()
    }

    /// (cell, value) for a literal.
    pub fn literal(&self, lit: &Literal) -> (usize, bool) {
        match lit {
            Literal::Visited(p, l) => (self.visit_cell(self.person(p), self.place(l)), true),
            Literal::NotVisited(p, l) => (self.visit_cell(self.person(p), self.place(l)), false),
            Literal::Hugged(p, q) => (self.hug_cell(self.person(p), self.person(q)), true),
            Literal::NotHugged(p, q) => (self.hug_cell(self.person(p), self.person(q)), false),
        }
    }
}
