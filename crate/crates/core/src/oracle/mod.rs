//! Semantic oracles for the interval and face algebras, and audits of the
//! rewrite rules and equations stated over them.

mod dm4;
mod face;
mod free;

use alloc::string::String;
use core::fmt;

use crate::rewriter::{convertible, FuelExhausted, RewriteRule, RuleSet};
use crate::term::{Term, TypingContext};
use crate::verdict::Verdict;

pub use dm4::{eval_interval, interval_eq, DM4Value, IExpr, IntervalAssignment, UnboundGenerator};
pub use face::{eval_face, face_eq, face_leq, FExpr, FaceAssignment, FaceValue};
pub use free::{dnf, free_eq, Dnf, Literal};

/// A term outside the interval and face algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutOfDomain {
    pub term: Term,
    pub reason: String,
}

impl fmt::Display for OutOfDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}` is out of domain: {}", self.term, self.reason)
    }
}

impl core::error::Error for OutOfDomain {}

fn out(t: &Term, reason: &str) -> OutOfDomain {
    OutOfDomain {
        term: t.clone(),
        reason: reason.into(),
    }
}

/// How terms are read as algebra expressions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Translation {
    /// Read undeclared constants as generators, as for command-line input
    /// where variables parse as constants.
    pub constants_as_generators: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Interval,
    Face,
}

impl Translation {
    fn generator(&self, t: &Term) -> Option<crate::term::Name> {
        match t {
            Term::FVar(x) => Some(x.clone()),
            Term::Const(c) if self.constants_as_generators => Some(c.clone()),
            _ => None,
        }
    }

    pub fn interval(&self, t: &Term) -> Result<IExpr, OutOfDomain> {
        let (h, args) = t.spine();
        let Term::Const(c) = h else {
            return match (self.generator(t), args.is_empty()) {
                (Some(x), true) => Ok(IExpr::Gen(x)),
                _ => Err(out(t, "not an interval expression")),
            };
        };
        Ok(match (&**c, args.as_slice()) {
            ("0", []) => IExpr::Zero,
            ("1", []) => IExpr::One,
            ("sym", [a]) => IExpr::neg(self.interval(a)?),
            ("Imin", [a, b]) => IExpr::meet(self.interval(a)?, self.interval(b)?),
            ("Imax", [a, b]) => IExpr::join(self.interval(a)?, self.interval(b)?),
            (_, []) => match self.generator(t) {
                Some(x) if !is_face_const(c) => IExpr::Gen(x),
                _ => return Err(out(t, "not an interval expression")),
            },
            _ => return Err(out(t, "not an interval expression")),
        })
    }

    pub fn face(&self, t: &Term) -> Result<FExpr, OutOfDomain> {
        let (h, args) = t.spine();
        let Term::Const(c) = h else {
            return match (self.generator(t), args.is_empty()) {
                (Some(x), true) => Ok(FExpr::Gen(x)),
                _ => Err(out(t, "not a face expression")),
            };
        };
        Ok(match (&**c, args.as_slice()) {
            ("0f", []) => FExpr::FBot,
            ("1f", []) => FExpr::FTop,
            ("eq0", [e]) => FExpr::Eq0(self.interval(e)?),
            ("eq1", [e]) => FExpr::Eq1(self.interval(e)?),
            ("Fmin", [a, b]) => FExpr::meet(self.face(a)?, self.face(b)?),
            ("Fmax", [a, b]) => FExpr::join(self.face(a)?, self.face(b)?),
            (_, []) => match self.generator(t) {
                Some(x) if !is_interval_const(c) => FExpr::Gen(x),
                _ => return Err(out(t, "not a face expression")),
            },
            _ => return Err(out(t, "not a face expression")),
        })
    }

    /// The algebra a term belongs to, judged by its head.
    pub fn sort_of(&self, t: &Term) -> Option<Sort> {
        match t.head_const() {
            Some(c) if is_interval_const(c) => Some(Sort::Interval),
            Some(c) if is_face_const(c) => Some(Sort::Face),
            _ => None,
        }
    }
}

fn is_interval_const(c: &str) -> bool {
    matches!(c, "0" | "1" | "sym" | "Imin" | "Imax")
}

fn is_face_const(c: &str) -> bool {
    matches!(c, "0f" | "1f" | "eq0" | "eq1" | "Fmin" | "Fmax")
}

/// A falsifying assignment from either oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Interval(IntervalAssignment),
    Face(FaceAssignment),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Interval(rho) => {
                for (k, (x, v)) in rho.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x} = {v}")?;
                }
                Ok(())
            }
            Witness::Face(s) => write!(f, "{s}"),
        }
    }
}

/// Decides `lhs = rhs` in whichever algebra the two sides belong to.
pub fn equation_sound(
    tr: &Translation,
    lhs: &Term,
    rhs: &Term,
) -> Result<Verdict<Witness>, OutOfDomain> {
    let sort = tr
        .sort_of(lhs)
        .or_else(|| tr.sort_of(rhs))
        .unwrap_or(Sort::Interval);
    equation_sound_in(sort, tr, lhs, rhs)
}

pub fn equation_sound_in(
    sort: Sort,
    tr: &Translation,
    lhs: &Term,
    rhs: &Term,
) -> Result<Verdict<Witness>, OutOfDomain> {
    Ok(match sort {
        Sort::Interval => match interval_eq(&tr.interval(lhs)?, &tr.interval(rhs)?) {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(Witness::Interval(w)),
        },
        Sort::Face => match face_eq(&tr.face(lhs)?, &tr.face(rhs)?) {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(Witness::Face(w)),
        },
    })
}

/// Whether a rule is valid in its algebra. Pattern variables are
/// generators; repeated variables share one.
pub fn check_rule_sound(r: &RewriteRule) -> Result<Verdict<Witness>, OutOfDomain> {
    let lhs = r.lhs_term();
    if Translation::default().sort_of(&lhs).is_none() {
        return Err(out(&lhs, "rule head is not an algebra operation"));
    }
    equation_sound(&Translation::default(), &lhs, &r.rhs)
}

/// Audits the type of an equation constant: a telescope of interval or
/// face variables ending in `ceps (cEq X lhs rhs)`.
pub fn check_equation_sound(ty: &Term) -> Result<Verdict<Witness>, OutOfDomain> {
    let (_, carrier, l, r) =
        equation_sides(ty).ok_or_else(|| out(ty, "not a decoded external equation"))?;
    let sort = match carrier.head_const().map(|c| &**c) {
        Some("I") if carrier.spine().1.is_empty() => Sort::Interval,
        Some("F") if carrier.spine().1.is_empty() => Sort::Face,
        _ => return Err(out(&carrier, "equation is not over the interval or faces")),
    };
    equation_sound_in(sort, &Translation::default(), &l, &r)
}

/// Where an algebra equation stands with respect to a rule set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// The two sides are convertible.
    Definitional,
    /// Valid in the algebra but not convertible, so it can only be stated
    /// as an external equation.
    External,
    /// Not valid at all.
    Invalid(Witness),
}

pub fn classify(
    rules: &RuleSet,
    lhs: &Term,
    rhs: &Term,
    fuel: u64,
) -> Result<Result<Classification, OutOfDomain>, FuelExhausted> {
    let conv = convertible(rules, lhs, rhs, fuel)?;
    Ok(
        equation_sound(&Translation::default(), lhs, rhs).map(|v| match (v, conv) {
            (Verdict::Fails(w), _) => Classification::Invalid(w),
            (Verdict::Holds, true) => Classification::Definitional,
            (Verdict::Holds, false) => Classification::External,
        }),
    )
}

/// Opens an equation type's telescope into a context, the carrier type
/// and the two sides.
pub fn equation_sides(ty: &Term) -> Option<(TypingContext, Term, Term, Term)> {
    let mut ctx = TypingContext::new();
    let mut t = ty.clone();
    while let Term::Pi(x, dom, cod) = &t {
        let x = x.clone();
        ctx.push(x.clone(), (**dom).clone());
        t = cod.open(&x);
    }
    let (h, args) = t.spine();
    let (Term::Const(c), [e]) = (h, args.as_slice()) else {
        return None;
    };
    if &**c != "ceps" {
        return None;
    }
    let (h, args) = e.spine();
    match (h, args.as_slice()) {
        (Term::Const(c), [x, l, r]) if &**c == "cEq" => {
            Some((ctx, (*x).clone(), (*l).clone(), (*r).clone()))
        }
        _ => None,
    }
}
