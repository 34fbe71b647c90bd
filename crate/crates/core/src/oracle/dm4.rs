use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::term::{Name, Term};
use crate::verdict::Verdict;

/// Interval expression: an element of the free De Morgan algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IExpr {
    Zero,
    One,
    Gen(Name),
    Neg(Box<IExpr>),
    Meet(Box<IExpr>, Box<IExpr>),
    Join(Box<IExpr>, Box<IExpr>),
}

impl IExpr {
    pub fn gen(x: &str) -> IExpr {
        IExpr::Gen(crate::term::name(x))
    }

    pub fn neg(e: IExpr) -> IExpr {
        IExpr::Neg(Box::new(e))
    }

    pub fn meet(a: IExpr, b: IExpr) -> IExpr {
        IExpr::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: IExpr, b: IExpr) -> IExpr {
        IExpr::Join(Box::new(a), Box::new(b))
    }

    pub fn generators(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_generators(&mut out);
        out
    }

    pub(crate) fn collect_generators(&self, out: &mut BTreeSet<Name>) {
        match self {
            IExpr::Zero | IExpr::One => {}
            IExpr::Gen(x) => {
                out.insert(x.clone());
            }
            IExpr::Neg(a) => a.collect_generators(out),
            IExpr::Meet(a, b) | IExpr::Join(a, b) => {
                a.collect_generators(out);
                b.collect_generators(out);
            }
        }
    }

    /// The term over `0`, `1`, `sym`, `Imin`, `Imax`; generators become
    /// free variables.
    pub fn to_term(&self) -> Term {
        match self {
            IExpr::Zero => Term::cst("0"),
            IExpr::One => Term::cst("1"),
            IExpr::Gen(x) => Term::FVar(x.clone()),
            IExpr::Neg(a) => Term::app(Term::cst("sym"), a.to_term()),
            IExpr::Meet(a, b) => Term::apps(Term::cst("Imin"), [a.to_term(), b.to_term()]),
            IExpr::Join(a, b) => Term::apps(Term::cst("Imax"), [a.to_term(), b.to_term()]),
        }
    }
}

impl fmt::Display for IExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

/// The four-element De Morgan algebra: a diamond whose negation fixes the
/// two incomparable middle elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DM4Value {
    Bot,
    A,
    B,
    Top,
}

impl DM4Value {
    /// Enumeration order for exhaustive sweeps.
    pub const ALL: [DM4Value; 4] = [DM4Value::Top, DM4Value::A, DM4Value::B, DM4Value::Bot];

    // Bot = 00, A = 10, B = 01, Top = 11. Meet and join are bitwise.
    fn bits(self) -> u8 {
        match self {
            DM4Value::Bot => 0b00,
            DM4Value::A => 0b10,
            DM4Value::B => 0b01,
            DM4Value::Top => 0b11,
        }
    }

    fn from_bits(b: u8) -> DM4Value {
        match b & 0b11 {
            0b00 => DM4Value::Bot,
            0b10 => DM4Value::A,
            0b01 => DM4Value::B,
            _ => DM4Value::Top,
        }
    }

    pub fn meet(self, o: DM4Value) -> DM4Value {
        Self::from_bits(self.bits() & o.bits())
    }

    pub fn join(self, o: DM4Value) -> DM4Value {
        Self::from_bits(self.bits() | o.bits())
    }

    /// Swaps the bits and complements them.
    pub fn neg(self) -> DM4Value {
        let b = self.bits();
        Self::from_bits(!(((b & 1) << 1) | (b >> 1)))
    }

    pub fn leq(self, o: DM4Value) -> bool {
        self.meet(o) == self
    }
}

impl fmt::Display for DM4Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DM4Value::Bot => "Bot",
            DM4Value::A => "A",
            DM4Value::B => "B",
            DM4Value::Top => "Top",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnboundGenerator(pub Name);

impl fmt::Display for UnboundGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "generator `{}` has no value", self.0)
    }
}

impl core::error::Error for UnboundGenerator {}

pub type IntervalAssignment = BTreeMap<Name, DM4Value>;

pub fn eval_interval(e: &IExpr, rho: &IntervalAssignment) -> Result<DM4Value, UnboundGenerator> {
    Ok(match e {
        IExpr::Zero => DM4Value::Bot,
        IExpr::One => DM4Value::Top,
        IExpr::Gen(x) => *rho.get(x).ok_or_else(|| UnboundGenerator(x.clone()))?,
        IExpr::Neg(a) => eval_interval(a, rho)?.neg(),
        IExpr::Meet(a, b) => eval_interval(a, rho)?.meet(eval_interval(b, rho)?),
        IExpr::Join(a, b) => eval_interval(a, rho)?.join(eval_interval(b, rho)?),
    })
}

/// Calls `f` on every assignment of `values` to `gens`, in lexicographic
/// order of `values`, until it returns `false`.
pub(crate) fn sweep<V: Copy>(
    gens: &[Name],
    values: &[V],
    f: &mut dyn FnMut(&BTreeMap<Name, V>) -> bool,
) -> bool {
    fn go<V: Copy>(
        gens: &[Name],
        values: &[V],
        acc: &mut BTreeMap<Name, V>,
        f: &mut dyn FnMut(&BTreeMap<Name, V>) -> bool,
    ) -> bool {
        match gens.split_first() {
            None => f(acc),
            Some((g, rest)) => {
                for v in values {
                    acc.insert(g.clone(), *v);
                    if !go(rest, values, acc, f) {
                        return false;
                    }
                }
                acc.remove(g);
                true
            }
        }
    }
    go(gens, values, &mut BTreeMap::new(), f)
}

/// Equality in the free De Morgan algebra, decided by evaluation in DM4
/// under every assignment of the generators.
pub fn interval_eq(e1: &IExpr, e2: &IExpr) -> Verdict<IntervalAssignment> {
    let mut gens = e1.generators();
    gens.extend(e2.generators());
    let gens: Vec<Name> = gens.into_iter().collect();
    let mut witness = None;
    sweep(&gens, &DM4Value::ALL, &mut |rho| {
        let same = eval_interval(e1, rho) == eval_interval(e2, rho);
        if !same {
            witness = Some(rho.clone());
        }
        same
    });
    match witness {
        None => Verdict::Holds,
        Some(w) => Verdict::Fails(w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use DM4Value::*;

    fn i() -> IExpr {
        IExpr::gen("i")
    }

    #[test]
    fn algebra_laws() {
        for x in DM4Value::ALL {
            assert_eq!(x.neg().neg(), x);
            assert_eq!(x.meet(Bot), Bot);
            assert_eq!(x.join(Top), Top);
            for y in DM4Value::ALL {
                assert_eq!(x.meet(y).neg(), x.neg().join(y.neg()));
            }
        }
        assert_eq!(A.neg(), A);
        assert_eq!(B.neg(), B);
        assert_eq!(Bot.neg(), Top);
        assert!(!A.leq(B) && !B.leq(A));
        assert_eq!(A.join(B), Top);
        assert_eq!(A.meet(B), Bot);
    }

    #[test]
    fn evaluation() {
        let rho: IntervalAssignment = [(crate::term::name("i"), A)].into();
        assert_eq!(eval_interval(&IExpr::meet(i(), IExpr::Zero), &rho), Ok(Bot));
        assert_eq!(eval_interval(&IExpr::neg(IExpr::neg(i())), &rho), Ok(A));
        assert_eq!(
            eval_interval(&IExpr::join(i(), IExpr::neg(i())), &rho),
            Ok(A)
        );
        assert!(eval_interval(&IExpr::gen("j"), &rho).is_err());
    }

    #[test]
    fn equalities() {
        let (j, k) = (IExpr::gen("j"), IExpr::gen("k"));
        assert!(interval_eq(&IExpr::meet(i(), j.clone()), &IExpr::meet(j.clone(), i())).holds());
        let lhs = IExpr::join(IExpr::meet(i(), j.clone()), k.clone());
        let rhs = IExpr::meet(IExpr::join(i(), k.clone()), IExpr::join(j, k));
        assert!(interval_eq(&lhs, &rhs).holds());
        let v = interval_eq(&IExpr::join(i(), IExpr::neg(i())), &IExpr::One);
        assert_eq!(v, Verdict::Fails([(crate::term::name("i"), A)].into()));
    }
}
