//! Three-valued world sketches.
//!
//! A sketch marks every visit and hug cell true, false or unknown, and gives
//! each person's hug row a bound on how many others they hugged. Premises
//! that cannot be captured by one sketch (the existential, conditionals)
//! split it into branches. Once every premise is resolved the remaining
//! constraints are per row, so a branch is satisfiable exactly when each row
//! is, and a hypothesis can be checked row by row.
//!
//! Age comparisons do not interact with the cells and are decided on their
//! own by closing a graph of weak and strict edges.

use super::{AgeCmp, CountRel, Domain, Literal, Statement};
use crate::{Error, Label, Result};

#[derive(Debug, Clone)]
struct Sketch {
    cells: Vec<Option<bool>>,
    lo: Vec<usize>,
    hi: Vec<usize>,
}

impl Sketch {
    fn new(dom: &Domain) -> Self {
        let mut cells = vec![None; dom.cells()];
        for p in 0..dom.np() {
            cells[dom.hug_cell(p, p)] = Some(false);
        }
        Sketch {
            cells,
            lo: vec![0; dom.np()],
            hi: vec![dom.np().saturating_sub(1); dom.np()],
        }
    }

    #[must_use]
    fn set(&mut self, cell: usize, value: bool) -> bool {
        match self.cells[cell] {
            Some(v) => v == value,
            None => {
                self.cells[cell] = Some(value);
                true
            }
        }
    }

    fn row(&self, dom: &Domain, p: usize) -> (usize, usize) {
        let mut t = 0;
        let mut u = 0;
        for q in (0..dom.np()).filter(|&q| q != p) {
            match self.cells[dom.hug_cell(p, q)] {
                Some(true) => t += 1,
                None => u += 1,
                Some(false) => {}
            }
        }
        (t, u)
    }

    fn rows_feasible(&self, dom: &Domain) -> bool {
        (0..dom.np()).all(|p| {
            let (t, u) = self.row(dom, p);
            self.lo[p] <= self.hi[p] && t <= self.hi[p] && t + u >= self.lo[p]
        })
    }

    /// Forces unknown cells in rows whose bound is already tight.
    #[must_use]
    fn propagate(&mut self, dom: &Domain) -> bool {
        for p in 0..dom.np() {
            let (t, u) = self.row(dom, p);
            if self.lo[p] > self.hi[p] || t > self.hi[p] || t + u < self.lo[p] {
                return false;
            }
            if u == 0 {
                continue;
            }
            let fill = if t == self.hi[p] {
                Some(false)
            } else if t + u == self.lo[p] {
                Some(true)
            } else {
                None
            };
            if let Some(v) = fill {
                for q in (0..dom.np()).filter(|&q| q != p) {
                    let c = dom.hug_cell(p, q);
                    if self.cells[c].is_none() {
                        self.cells[c] = Some(v);
                    }
                }
            }
        }
        true
    }

    fn literal(&self, dom: &Domain, lit: &Literal) -> Option<bool> {
        let (c, v) = dom.literal(lit);
        self.cells[c].map(|x| x == v)
    }

    /// Whether some world of this branch also satisfies `extra`.
    fn feasible_with(&self, dom: &Domain, extra: &[(usize, bool)]) -> bool {
        let mut s = self.clone();
        extra.iter().all(|&(c, v)| s.set(c, v)) && s.rows_feasible(dom)
    }

    fn count_range(&self, dom: &Domain, p: usize) -> (usize, usize) {
        let (t, u) = self.row(dom, p);
        (self.lo[p].max(t), self.hi[p].min(t + u))
    }
}

fn apply_fixed(s: &mut Sketch, dom: &Domain, st: &Statement) -> bool {
    match st {
        Statement::Visited(..) | Statement::NotVisited(..) | Statement::Hugged(..) | Statement::NotHugged(..) => {
            let (c, v) = dom.literal(&st.as_literal().expect("literal"));
            s.set(c, v)
        }
        Statement::OnlyVisited(p, ls) => {
            let p = dom.person(p);
            (0..dom.nl()).all(|l| s.set(dom.visit_cell(p, l), ls.contains(&dom.places[l])))
        }
        Statement::OnlyHugged(p, qs) => {
            let pi = dom.person(p);
            !qs.contains(p)
                && (0..dom.np())
                    .filter(|&q| q != pi)
                    .all(|q| s.set(dom.hug_cell(pi, q), qs.contains(&dom.persons[q])))
        }
        Statement::CountCompare(p, rel, n) => {
            let p = dom.person(p);
            match rel {
                CountRel::MoreThan => s.lo[p] = s.lo[p].max(n + 1),
                CountRel::FewerThan if *n == 0 => return false,
                CountRel::FewerThan => s.hi[p] = s.hi[p].min(n - 1),
                CountRel::Exactly => {
                    s.lo[p] = s.lo[p].max(*n);
                    s.hi[p] = s.hi[p].min(*n);
                }
            }
            true
        }
        _ => true,
    }
}

/// All satisfiable branches of the non-age premises.
fn branches(dom: &Domain, premises: &[Statement], mentioned: usize) -> Vec<Sketch> {
    let mut s = Sketch::new(dom);
    if !premises.iter().all(|st| apply_fixed(&mut s, dom, st)) || !s.propagate(dom) {
        return Vec::new();
    }
    let mut out = vec![s];

    if premises.contains(&Statement::ExistsUniversal) {
        // Unmentioned people are interchangeable, so one of them stands in
        // for all as a candidate witness.
        let fresh = (mentioned < dom.np()).then_some(mentioned);
        let witnesses: Vec<usize> = (0..mentioned).chain(fresh).collect();
        out = out
            .into_iter()
            .flat_map(|s| {
                witnesses
                    .iter()
                    .filter_map(|&x| {
                        let mut b = s.clone();
                        let ok = (0..dom.nl()).all(|l| b.set(dom.visit_cell(x, l), true))
                            && (0..dom.np())
                                .filter(|&q| q != x)
                                .all(|q| b.set(dom.hug_cell(x, q), true))
                            && b.propagate(dom);
                        ok.then_some(b)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }

    for st in premises {
        let Statement::Conditional(a, c) = st else { continue };
        let (ca, va) = dom.literal(a);
        let (cc, vc) = dom.literal(c);
        out = out
            .into_iter()
            .flat_map(|s| {
                let mut next = Vec::new();
                let ante = s.literal(dom, a);
                let cons = s.literal(dom, c);
                if ante == Some(false) || cons == Some(true) {
                    next.push(s);
                    return next;
                }
                if ante.is_none() {
                    let mut b = s.clone();
                    if b.set(ca, !va) && b.propagate(dom) {
                        next.push(b);
                    }
                }
                let mut b = s;
                if b.set(ca, va) && b.set(cc, vc) && b.propagate(dom) {
                    next.push(b);
                }
                next
            })
            .collect();
    }
    out
}

/// (can be true, can be false) for a non-age hypothesis in one branch.
fn evaluate(s: &Sketch, dom: &Domain, h: &Statement) -> (bool, bool) {
    match h {
        Statement::Visited(..) | Statement::NotVisited(..) | Statement::Hugged(..) | Statement::NotHugged(..) => {
            let (c, v) = dom.literal(&h.as_literal().expect("literal"));
            (s.feasible_with(dom, &[(c, v)]), s.feasible_with(dom, &[(c, !v)]))
        }
        Statement::Conditional(a, c) => {
            let (ca, va) = dom.literal(a);
            let (cc, vc) = dom.literal(c);
            (
                s.feasible_with(dom, &[(ca, !va)]) || s.feasible_with(dom, &[(cc, vc)]),
                s.feasible_with(dom, &[(ca, va), (cc, !vc)]),
            )
        }
        Statement::OnlyVisited(p, ls) => {
            let p = dom.person(p);
            let pattern: Vec<(usize, bool)> = (0..dom.nl())
                .map(|l| (dom.visit_cell(p, l), ls.contains(&dom.places[l])))
                .collect();
            only(s, dom, &pattern)
        }
        Statement::OnlyHugged(p, qs) => {
            let pi = dom.person(p);
            let pattern: Vec<(usize, bool)> = (0..dom.np())
                .filter(|&q| q != pi)
                .map(|q| (dom.hug_cell(pi, q), qs.contains(&dom.persons[q])))
                .collect();
            if qs.contains(p) {
                (false, true)
            } else {
                only(s, dom, &pattern)
            }
        }
        Statement::CountCompare(p, rel, n) => {
            let (a, b) = s.count_range(dom, dom.person(p));
            ((a..=b).any(|c| rel.holds(c, *n)), (a..=b).any(|c| !rel.holds(c, *n)))
        }
        Statement::ExistsUniversal => {
            let full = dom.np() - 1;
            let can_true = (0..dom.np()).any(|x| {
                (0..dom.nl()).all(|l| s.cells[dom.visit_cell(x, l)] != Some(false))
                    && (0..dom.np())
                        .filter(|&q| q != x)
                        .all(|q| s.cells[dom.hug_cell(x, q)] != Some(false))
                    && s.hi[x] >= full
            });
            let can_false = (0..dom.np()).all(|x| {
                (0..dom.nl()).any(|l| s.cells[dom.visit_cell(x, l)] != Some(true)) || s.count_range(dom, x).0 < full
            });
            (can_true, can_false)
        }
        Statement::AgeRel(..) | Statement::YoungerThanAll(..) => unreachable!("age hypotheses are decided separately"),
    }
}

fn only(s: &Sketch, dom: &Domain, pattern: &[(usize, bool)]) -> (bool, bool) {
    let can_true = s.feasible_with(dom, pattern);
    let can_false = pattern.iter().any(|&(c, v)| s.feasible_with(dom, &[(c, !v)]));
    (can_true, can_false)
}

/// Edge `(a, b, strict)` means age(a) < age(b) when strict, else age(a) <= age(b).
type AgeEdge = (usize, usize, bool);

fn age_edges(dom: &Domain, st: &Statement) -> Vec<AgeEdge> {
    match st {
        Statement::AgeRel(p, cmp, q) => {
            let (p, q) = (dom.person(p), dom.person(q));
            match cmp {
                AgeCmp::Younger => vec![(p, q, true)],
                AgeCmp::Older => vec![(q, p, true)],
                AgeCmp::Same => vec![(p, q, false), (q, p, false)],
            }
        }
        Statement::YoungerThanAll(p, qs) => {
            let p = dom.person(p);
            qs.iter().map(|q| (p, dom.person(q), true)).collect()
        }
        _ => Vec::new(),
    }
}

/// Disjuncts of the negation, each a conjunction of edges.
fn negated_age_edges(dom: &Domain, st: &Statement) -> Vec<Vec<AgeEdge>> {
    match st {
        Statement::AgeRel(p, cmp, q) => {
            let (p, q) = (dom.person(p), dom.person(q));
            match cmp {
                AgeCmp::Younger => vec![vec![(q, p, false)]],
                AgeCmp::Older => vec![vec![(p, q, false)]],
                AgeCmp::Same => vec![vec![(p, q, true)], vec![(q, p, true)]],
            }
        }
        Statement::YoungerThanAll(p, qs) => {
            let p = dom.person(p);
            qs.iter().map(|q| vec![(dom.person(q), p, false)]).collect()
        }
        _ => Vec::new(),
    }
}

/// Consistent over a linear order of ages iff no cycle passes through a
/// strict edge.
fn ages_consistent(n: usize, edges: &[AgeEdge]) -> bool {
    // 0 none, 1 weak, 2 strict
    let mut r = vec![vec![0u8; n]; n];
    for &(a, b, strict) in edges {
        r[a][b] = r[a][b].max(if strict { 2 } else { 1 });
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                if r[k][j] > 0 {
                    let v = r[i][k].max(r[k][j]);
                    if v > r[i][j] {
                        r[i][j] = v;
                    }
                }
            }
        }
    }
    (0..n).all(|i| r[i][i] < 2)
}

fn label_of(can_true: bool, can_false: bool) -> Label {
    match (can_true, can_false) {
        (true, false) => Label::Entailment,
        (false, true) => Label::Contradiction,
        _ => Label::Neutral,
    }
}

/// Decides the label of `hypothesis` given `premises` over the default
/// domain.
pub fn oracle_label(premises: &[Statement], hypothesis: &Statement) -> Result<Label> {
    let (fp, fl) = Domain::padding(premises, hypothesis);
    let dom = Domain::new(premises, hypothesis, fp, fl);
    let mentioned = dom.np() - fp;

    let premise_ages: Vec<AgeEdge> = premises.iter().flat_map(|s| age_edges(&dom, s)).collect();
    if !ages_consistent(dom.np(), &premise_ages) {
        return Err(Error::InconsistentPremises);
    }
    let branches = branches(&dom, premises, mentioned);
    if branches.is_empty() {
        return Err(Error::InconsistentPremises);
    }

    let (can_true, can_false) = if hypothesis.is_age() {
        let with = |extra: &[AgeEdge]| {
            let mut all = premise_ages.clone();
            all.extend_from_slice(extra);
            ages_consistent(dom.np(), &all)
        };
        (
            with(&age_edges(&dom, hypothesis)),
            negated_age_edges(&dom, hypothesis).iter().any(|d| with(d)),
        )
    } else {
        branches.iter().fold((false, false), |(t, f), s| {
            let (a, b) = evaluate(s, &dom, hypothesis);
            (t || a, f || b)
        })
    };
    Ok(label_of(can_true, can_false))
}
