//! Normal forms in the free De Morgan algebra, independent of DM4: push
//! negations onto generators, then keep a join of meets of literals with
//! absorbed terms removed. A generator and its negation are unrelated
//! atoms, since excluded middle and contradiction both fail.

use alloc::collections::BTreeSet;

use super::dm4::IExpr;
use crate::term::Name;

/// A generator, possibly negated.
pub type Literal = (Name, bool);

/// Join of meets. `{}` is the bottom, `{{}}` the top.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Dnf(pub BTreeSet<BTreeSet<Literal>>);

impl Dnf {
    pub fn bot() -> Dnf {
        Dnf(BTreeSet::new())
    }

    pub fn top() -> Dnf {
        Dnf([BTreeSet::new()].into())
    }

    fn literal(x: &Name, positive: bool) -> Dnf {
        Dnf([[(x.clone(), positive)].into()].into())
    }

    /// Drops every conjunct that contains another one.
    fn absorb(terms: BTreeSet<BTreeSet<Literal>>) -> Dnf {
        let keep = terms
            .iter()
            .filter(|t| !terms.iter().any(|u| u != *t && u.is_subset(t)))
            .cloned()
            .collect();
        Dnf(keep)
    }

    pub fn join(&self, o: &Dnf) -> Dnf {
        Dnf::absorb(self.0.union(&o.0).cloned().collect())
    }

    pub fn meet(&self, o: &Dnf) -> Dnf {
        let mut terms = BTreeSet::new();
        for a in &self.0 {
            for b in &o.0 {
                terms.insert(a.union(b).cloned().collect());
            }
        }
        Dnf::absorb(terms)
    }
}

pub fn dnf(e: &IExpr) -> Dnf {
    nnf(e, false)
}

fn nnf(e: &IExpr, negated: bool) -> Dnf {
    match (e, negated) {
        (IExpr::Zero, false) | (IExpr::One, true) => Dnf::bot(),
        (IExpr::One, false) | (IExpr::Zero, true) => Dnf::top(),
        (IExpr::Gen(x), n) => Dnf::literal(x, !n),
        (IExpr::Neg(a), n) => nnf(a, !n),
        (IExpr::Meet(a, b), false) | (IExpr::Join(a, b), true) => {
            nnf(a, negated).meet(&nnf(b, negated))
        }
        (IExpr::Join(a, b), false) | (IExpr::Meet(a, b), true) => {
            nnf(a, negated).join(&nnf(b, negated))
        }
    }
}

/// Equality in the free algebra by comparing normal forms.
pub fn free_eq(a: &IExpr, b: &IExpr) -> bool {
    dnf(a) == dnf(b)
}
