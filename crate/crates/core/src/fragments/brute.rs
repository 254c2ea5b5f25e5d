//! Exhaustive model enumeration, used to cross-check the oracle on small
//! instances.

use std::collections::BTreeSet;

use super::{AgeCmp, Domain, Statement};
use crate::{Error, Label, Result};

pub const MAX_FREE_CELLS: usize = 24;
pub const MAX_AGE_PERSONS: usize = 6;

/// How many unmentioned people and places the enumerated domain holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub fresh_persons: usize,
    pub fresh_places: usize,
}

impl Bounds {
    /// The padding the oracle uses.
    pub fn padding(premises: &[Statement], hypothesis: &Statement) -> Self {
        let (fresh_persons, fresh_places) = Domain::padding(premises, hypothesis);
        Bounds {
            fresh_persons,
            fresh_places,
        }
    }
}

fn relevant_cells(dom: &Domain, st: &Statement, out: &mut BTreeSet<usize>) {
    let hug_row = |p: usize, out: &mut BTreeSet<usize>| {
        out.extend((0..dom.np()).filter(|&q| q != p).map(|q| dom.hug_cell(p, q)));
    };
    match st {
        Statement::Visited(..) | Statement::NotVisited(..) | Statement::Hugged(..) | Statement::NotHugged(..) => {
            out.insert(dom.literal(&st.as_literal().expect("literal")).0);
        }
        Statement::Conditional(a, c) => {
            out.insert(dom.literal(a).0);
            out.insert(dom.literal(c).0);
        }
        Statement::OnlyVisited(p, _) => {
            let p = dom.person(p);
            out.extend((0..dom.nl()).map(|l| dom.visit_cell(p, l)));
        }
        Statement::OnlyHugged(p, _) | Statement::CountCompare(p, _, _) => hug_row(dom.person(p), out),
        Statement::ExistsUniversal => {
            for p in 0..dom.np() {
                out.extend((0..dom.nl()).map(|l| dom.visit_cell(p, l)));
                hug_row(p, out);
            }
        }
        Statement::AgeRel(..) | Statement::YoungerThanAll(..) => {}
    }
    // Diagonal hug cells are constant.
    for p in 0..dom.np() {
        out.remove(&dom.hug_cell(p, p));
    }
}

fn hug_count(dom: &Domain, w: &[bool], p: usize) -> usize {
    (0..dom.np()).filter(|&q| q != p && w[dom.hug_cell(p, q)]).count()
}

fn holds(dom: &Domain, w: &[bool], st: &Statement) -> bool {
    match st {
        Statement::Visited(..) | Statement::NotVisited(..) | Statement::Hugged(..) | Statement::NotHugged(..) => {
            let (c, v) = dom.literal(&st.as_literal().expect("literal"));
            w[c] == v
        }
        Statement::Conditional(a, c) => {
            let (ca, va) = dom.literal(a);
            let (cc, vc) = dom.literal(c);
            w[ca] != va || w[cc] == vc
        }
        Statement::OnlyVisited(p, ls) => {
            let p = dom.person(p);
            (0..dom.nl()).all(|l| w[dom.visit_cell(p, l)] == ls.contains(&dom.places[l]))
        }
        Statement::OnlyHugged(p, qs) => {
            let pi = dom.person(p);
            !qs.contains(p)
                && (0..dom.np())
                    .filter(|&q| q != pi)
                    .all(|q| w[dom.hug_cell(pi, q)] == qs.contains(&dom.persons[q]))
        }
        Statement::CountCompare(p, rel, n) => rel.holds(hug_count(dom, w, dom.person(p)), *n),
        Statement::ExistsUniversal => (0..dom.np())
            .any(|x| (0..dom.nl()).all(|l| w[dom.visit_cell(x, l)]) && hug_count(dom, w, x) == dom.np() - 1),
        Statement::AgeRel(..) | Statement::YoungerThanAll(..) => true,
    }
}

fn age_holds(dom: &Domain, age: &[usize], st: &Statement) -> bool {
    match st {
        Statement::AgeRel(p, cmp, q) => {
            let (a, b) = (age[dom.person(p)], age[dom.person(q)]);
            match cmp {
                AgeCmp::Younger => a < b,
                AgeCmp::Older => a > b,
                AgeCmp::Same => a == b,
            }
        }
        Statement::YoungerThanAll(p, qs) => qs.iter().all(|q| age[dom.person(p)] < age[dom.person(q)]),
        _ => true,
    }
}

/// Labels `hypothesis` by enumerating every model over the bounded domain.
/// Cells no statement reads are left false; cells fixed by a top-level fact
/// are pinned.
pub fn brute_force_label(premises: &[Statement], hypothesis: &Statement, bounds: Bounds) -> Result<Label> {
    let dom = Domain::new(premises, hypothesis, bounds.fresh_persons, bounds.fresh_places);

    let mut relevant = BTreeSet::new();
    for st in premises.iter().chain(std::iter::once(hypothesis)) {
        relevant_cells(&dom, st, &mut relevant);
    }
    let mut world = vec![false; dom.cells()];
    let mut pinned = BTreeSet::new();
    for st in premises {
        let fixed: Vec<(usize, bool)> = match st {
            Statement::OnlyVisited(p, ls) => {
                let p = dom.person(p);
                (0..dom.nl())
                    .map(|l| (dom.visit_cell(p, l), ls.contains(&dom.places[l])))
                    .collect()
            }
            Statement::OnlyHugged(p, qs) if !qs.contains(p) => {
                let pi = dom.person(p);
                (0..dom.np())
                    .filter(|&q| q != pi)
                    .map(|q| (dom.hug_cell(pi, q), qs.contains(&dom.persons[q])))
                    .collect()
            }
            _ => match st.as_literal() {
                Some(lit) => vec![dom.literal(&lit)],
                None => Vec::new(),
            },
        };
        for (c, v) in fixed {
            if dom.is_diagonal(c) {
                if v {
                    return Err(Error::InconsistentPremises);
                }
                continue;
            }
            if pinned.insert(c) {
                world[c] = v;
            } else if world[c] != v {
                return Err(Error::InconsistentPremises);
            }
        }
    }
    let free: Vec<usize> = relevant.difference(&pinned).copied().collect();
    if free.len() > MAX_FREE_CELLS {
        return Err(Error::TooLargeToEnumerate(format!(
            "{} free cells, at most {MAX_FREE_CELLS}",
            free.len()
        )));
    }

    let mut age_people: Vec<usize> = Vec::new();
    for st in premises.iter().chain(std::iter::once(hypothesis)) {
        if st.is_age() {
            let (mut ps, mut ls) = (Vec::new(), Vec::new());
            st.entities(&mut ps, &mut ls);
            for p in ps {
                let i = dom.person(&p);
                if !age_people.contains(&i) {
                    age_people.push(i);
                }
            }
        }
    }
    if age_people.len() > MAX_AGE_PERSONS {
        return Err(Error::TooLargeToEnumerate(format!(
            "{} people compared by age, at most {MAX_AGE_PERSONS}",
            age_people.len()
        )));
    }

    let mut cell_models = false;
    let (mut cell_true, mut cell_false) = (false, false);
    for mask in 0u64..(1u64 << free.len()) {
        for (bit, &c) in free.iter().enumerate() {
            world[c] = mask >> bit & 1 == 1;
        }
        if premises.iter().all(|st| holds(&dom, &world, st)) {
            cell_models = true;
            if holds(&dom, &world, hypothesis) {
                cell_true = true;
            } else {
                cell_false = true;
            }
        }
    }

    let n = age_people.len();
    let mut age = vec![0usize; dom.np()];
    let mut age_models = n == 0;
    let (mut age_true, mut age_false) = (false, false);
    if n > 0 {
        let total = n.pow(n as u32);
        for mut code in 0..total {
            for &i in &age_people {
                age[i] = code % n;
                code /= n;
            }
            if premises.iter().all(|st| age_holds(&dom, &age, st)) {
                age_models = true;
                if age_holds(&dom, &age, hypothesis) {
                    age_true = true;
                } else {
                    age_false = true;
                }
            }
        }
    }

    if !cell_models || !age_models {
        return Err(Error::InconsistentPremises);
    }
    let (t, f) = if hypothesis.is_age() {
        (age_true, age_false)
    } else {
        (cell_true, cell_false)
    };
    Ok(match (t, f) {
        (true, false) => Label::Entailment,
        (false, true) => Label::Contradiction,
        _ => Label::Neutral,
    })
}
