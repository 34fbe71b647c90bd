use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use super::dm4::{sweep, IExpr, UnboundGenerator};
use crate::term::{Name, Term};
use crate::verdict::Verdict;

/// Face expression. `Gen` is a face variable, ranging over all faces.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FExpr {
    FBot,
    FTop,
    Eq0(IExpr),
    Eq1(IExpr),
    FMeet(Box<FExpr>, Box<FExpr>),
    FJoin(Box<FExpr>, Box<FExpr>),
    Gen(Name),
}

impl FExpr {
    pub fn meet(a: FExpr, b: FExpr) -> FExpr {
        FExpr::FMeet(Box::new(a), Box::new(b))
    }

    pub fn join(a: FExpr, b: FExpr) -> FExpr {
        FExpr::FJoin(Box::new(a), Box::new(b))
    }

    /// Interval generators, then face generators.
    pub fn generators(&self) -> (BTreeSet<Name>, BTreeSet<Name>) {
        let mut i = BTreeSet::new();
        let mut f = BTreeSet::new();
        self.collect(&mut i, &mut f);
        (i, f)
    }

    fn collect(&self, i: &mut BTreeSet<Name>, f: &mut BTreeSet<Name>) {
        match self {
            FExpr::FBot | FExpr::FTop => {}
            FExpr::Eq0(e) | FExpr::Eq1(e) => e.collect_generators(i),
            FExpr::FMeet(a, b) | FExpr::FJoin(a, b) => {
                a.collect(i, f);
                b.collect(i, f);
            }
            FExpr::Gen(x) => {
                f.insert(x.clone());
            }
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            FExpr::FBot => Term::cst("0f"),
            FExpr::FTop => Term::cst("1f"),
            FExpr::Eq0(e) => Term::app(Term::cst("eq0"), e.to_term()),
            FExpr::Eq1(e) => Term::app(Term::cst("eq1"), e.to_term()),
            FExpr::FMeet(a, b) => Term::apps(Term::cst("Fmin"), [a.to_term(), b.to_term()]),
            FExpr::FJoin(a, b) => Term::apps(Term::cst("Fmax"), [a.to_term(), b.to_term()]),
            FExpr::Gen(x) => Term::FVar(x.clone()),
        }
    }
}

impl fmt::Display for FExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

/// A coordinate of a cube point: an endpoint or the interior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaceValue {
    Zero,
    Half,
    One,
}

impl FaceValue {
    pub const ALL: [FaceValue; 3] = [FaceValue::One, FaceValue::Half, FaceValue::Zero];

    pub fn neg(self) -> FaceValue {
        match self {
            FaceValue::Zero => FaceValue::One,
            FaceValue::Half => FaceValue::Half,
            FaceValue::One => FaceValue::Zero,
        }
    }
}

impl fmt::Display for FaceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceValue::Zero => "Zero",
            FaceValue::Half => "Half",
            FaceValue::One => "One",
        })
    }
}

/// A cube point, plus a truth value for each face variable at that point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaceAssignment {
    pub interval: BTreeMap<Name, FaceValue>,
    pub faces: BTreeMap<Name, bool>,
}

impl fmt::Display for FaceAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            let r = if first { Ok(()) } else { f.write_str(", ") };
            first = false;
            r
        };
        for (x, v) in &self.interval {
            sep(f)?;
            write!(f, "{x} = {v}")?;
        }
        for (x, v) in &self.faces {
            sep(f)?;
            write!(f, "{x} = {v}")?;
        }
        Ok(())
    }
}

fn eval_chain(e: &IExpr, s: &FaceAssignment) -> Result<FaceValue, UnboundGenerator> {
    Ok(match e {
        IExpr::Zero => FaceValue::Zero,
        IExpr::One => FaceValue::One,
        IExpr::Gen(x) => *s
            .interval
            .get(x)
            .ok_or_else(|| UnboundGenerator(x.clone()))?,
        IExpr::Neg(a) => eval_chain(a, s)?.neg(),
        IExpr::Meet(a, b) => eval_chain(a, s)?.min(eval_chain(b, s)?),
        IExpr::Join(a, b) => eval_chain(a, s)?.max(eval_chain(b, s)?),
    })
}

/// Whether the point `s` lies on the face.
pub fn eval_face(f: &FExpr, s: &FaceAssignment) -> Result<bool, UnboundGenerator> {
    Ok(match f {
        FExpr::FBot => false,
        FExpr::FTop => true,
        FExpr::Eq0(e) => eval_chain(e, s)? == FaceValue::Zero,
        FExpr::Eq1(e) => eval_chain(e, s)? == FaceValue::One,
        FExpr::FMeet(a, b) => eval_face(a, s)? && eval_face(b, s)?,
        FExpr::FJoin(a, b) => eval_face(a, s)? || eval_face(b, s)?,
        FExpr::Gen(x) => *s.faces.get(x).ok_or_else(|| UnboundGenerator(x.clone()))?,
    })
}

/// Equality of faces, decided pointwise over every three-valued point.
pub fn face_eq(f1: &FExpr, f2: &FExpr) -> Verdict<FaceAssignment> {
    let (mut is, mut fs) = f1.generators();
    let (is2, fs2) = f2.generators();
    is.extend(is2);
    fs.extend(fs2);
    let is: Vec<Name> = is.into_iter().collect();
    let fs: Vec<Name> = fs.into_iter().collect();
    let mut witness = None;
    sweep(&is, &FaceValue::ALL, &mut |iv| {
        sweep(&fs, &[true, false], &mut |fv| {
            let s = FaceAssignment {
                interval: iv.clone(),
                faces: fv.clone(),
            };
            let same = eval_face(f1, &s) == eval_face(f2, &s);
            if !same {
                witness = Some(s);
            }
            same
        })
    });
    match witness {
        None => Verdict::Holds,
        Some(w) => Verdict::Fails(w),
    }
}

/// Face inclusion: `f1 <= f2` iff `f1 /\ f2 = f1`.
pub fn face_leq(f1: &FExpr, f2: &FExpr) -> Verdict<FaceAssignment> {
    face_eq(&FExpr::meet(f1.clone(), f2.clone()), f1)
}
