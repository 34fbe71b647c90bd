use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::rules::{display_pos, Pattern, RuleSet, Subst};
use crate::term::{Name, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuelExhausted;

impl fmt::Display for FuelExhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("fuel exhausted")
    }
}

impl core::error::Error for FuelExhausted {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    Beta,
    Eta,
    Rule(Name),
}

/// One reduction step. `pos` walks from the root: for applications 0 is the
/// function and 1 the argument; for binders 0 is the domain and 1 the body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub pos: Vec<u8>,
    pub kind: StepKind,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            StepKind::Beta => "beta",
            StepKind::Eta => "eta",
            StepKind::Rule(r) => r,
        };
        write!(f, "{} {kind}", display_pos(&self.pos))
    }
}

/// Reduction engine over a rule set with a fuel budget. Every beta, eta and
/// rule step costs one unit of fuel, including steps taken while checking
/// non-linear patterns.
pub struct Reducer<'r> {
    rules: &'r RuleSet,
    fuel: u64,
    steps: u64,
    trace: Option<Vec<Step>>,
}

impl<'r> Reducer<'r> {
    pub fn new(rules: &'r RuleSet, fuel: u64) -> Self {
        Reducer {
            rules,
            fuel,
            steps: 0,
            trace: None,
        }
    }

    /// Records every step taken by `whnf` and `normalize`.
    pub fn tracing(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn fuel_left(&self) -> u64 {
        self.fuel
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    pub fn take_trace(&mut self) -> Vec<Step> {
        self.trace.replace(Vec::new()).unwrap_or_default()
    }

    fn tick(&mut self, pos: &[u8], kind: impl FnOnce() -> StepKind) -> Result<(), FuelExhausted> {
        if self.fuel == 0 {
            return Err(FuelExhausted);
        }
        self.fuel -= 1;
        self.steps += 1;
        if let Some(tr) = &mut self.trace {
            tr.push(Step {
                pos: pos.to_vec(),
                kind: kind(),
            });
        }
        Ok(())
    }

    pub fn whnf(&mut self, t: &Term) -> Result<Term, FuelExhausted> {
        let mut pos = Vec::new();
        self.whnf_at(t.clone(), &mut pos)
    }

    pub fn normalize(&mut self, t: &Term) -> Result<Term, FuelExhausted> {
        let mut pos = Vec::new();
        self.normalize_at(t.clone(), &mut pos)
    }

    pub fn convertible(&mut self, a: &Term, b: &Term) -> Result<bool, FuelExhausted> {
        let saved = self.trace.take();
        let r = self.conv(a, b);
        self.trace = saved;
        r
    }

    fn whnf_at(&mut self, t: Term, pos: &mut Vec<u8>) -> Result<Term, FuelExhausted> {
        let (mut head, mut args) = t.into_spine();
        'outer: loop {
            match &head {
                Term::Lam(_, _, body) if !args.is_empty() => {
                    let n = args.len();
                    with_zeros(pos, n - 1, |p| self.tick(p, || StepKind::Beta))?;
                    let a = args.remove(0);
                    let reduct = body.instantiate(&a);
                    (head, args) = respine(reduct, args);
                }
                Term::Const(c) => {
                    let rules = self.rules.rules_for(c);
                    for rule in rules {
                        let k = rule.args.len();
                        let n = args.len();
                        if k > n {
                            continue;
                        }
                        let mut s = Subst::new();
                        if self.match_args(&rule.args, &mut args[..k], n, pos, &mut s)? {
                            with_zeros(pos, n - k, |p| {
                                self.tick(p, || StepKind::Rule(rule.name.clone()))
                            })?;
                            let reduct = rule.instantiate_rhs(&s);
                            let rest = args.split_off(k);
                            (head, args) = respine(reduct, rest);
                            continue 'outer;
                        }
                    }
                    break;
                }
                _ => break,
            }
        }
        Ok(Term::apps(head, args))
    }

    /// Matches `pats` against the first arguments of a spine of `n`
    /// arguments rooted at `pos`, reducing arguments in place as needed.
    fn match_args(
        &mut self,
        pats: &[Pattern],
        args: &mut [Term],
        n: usize,
        pos: &mut Vec<u8>,
        s: &mut Subst,
    ) -> Result<bool, FuelExhausted> {
        for (m, (p, a)) in pats.iter().zip(args.iter_mut()).enumerate() {
            let depth = pos.len();
            pos.extend(core::iter::repeat_n(0, n - 1 - m));
            pos.push(1);
            let ok = self.match_pat(p, a, pos, s);
            pos.truncate(depth);
            if !ok? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn match_pat(
        &mut self,
        p: &Pattern,
        t: &mut Term,
        pos: &mut Vec<u8>,
        s: &mut Subst,
    ) -> Result<bool, FuelExhausted> {
        match p {
            Pattern::Var(x) => {
                if let Some(bound) = s.get(x) {
                    let bound = bound.clone();
                    return self.convertible(&bound, t);
                }
                s.insert(x.clone(), t.clone());
                Ok(true)
            }
            Pattern::Const(c, pargs) => {
                let w = self.whnf_at(core::mem::replace(t, Term::BVar(0)), pos)?;
                let (h, mut targs) = w.into_spine();
                let ok = match &h {
                    Term::Const(d) if d == c && targs.len() == pargs.len() => {
                        let n = targs.len();
                        self.match_args(pargs, &mut targs, n, pos, s)?
                    }
                    _ => false,
                };
                *t = Term::apps(h, targs);
                Ok(ok)
            }
        }
    }

    fn normalize_at(&mut self, t: Term, pos: &mut Vec<u8>) -> Result<Term, FuelExhausted> {
        let mut t = self.whnf_at(t, pos)?;
        loop {
            let t2 = match t {
                Term::App(..) => {
                    let (h, args) = t.into_spine();
                    let n = args.len();
                    let h = with_zeros(pos, n, |p| self.normalize_at(h, p))?;
                    let mut out = Vec::with_capacity(n);
                    for (m, a) in args.into_iter().enumerate() {
                        let depth = pos.len();
                        pos.extend(core::iter::repeat_n(0, n - 1 - m));
                        pos.push(1);
                        let r = self.normalize_at(a, pos);
                        pos.truncate(depth);
                        out.push(r?);
                    }
                    Term::apps(h, out)
                }
                Term::Lam(x, d, b) => {
                    let d = match d {
                        Some(d) => Some(child(pos, 0, |p| self.normalize_at((*d).clone(), p))?),
                        None => None,
                    };
                    let b = child(pos, 1, |p| self.normalize_at((*b).clone(), p))?;
                    match &b {
                        Term::App(f, a) if matches!(**a, Term::BVar(0)) && !f.mentions_bvar(0) => {
                            self.tick(pos, || StepKind::Eta)?;
                            f.shift(-1, 0)
                        }
                        _ => Term::lam_raw(x, d, b),
                    }
                }
                Term::Pi(x, d, b) => {
                    let d = child(pos, 0, |p| self.normalize_at((*d).clone(), p))?;
                    let b = child(pos, 1, |p| self.normalize_at((*b).clone(), p))?;
                    Term::pi_raw(x, d, b)
                }
                other => other,
            };
            let before = self.steps;
            t = self.whnf_at(t2, pos)?;
            if self.steps == before {
                return Ok(t);
            }
        }
    }

    fn conv(&mut self, a: &Term, b: &Term) -> Result<bool, FuelExhausted> {
        if a.alpha_eq(b) {
            return Ok(true);
        }
        let a = self.whnf(a)?;
        let b = self.whnf(b)?;
        if a.alpha_eq(&b) {
            return Ok(true);
        }
        match (&a, &b) {
            (Term::Lam(_, _, b1), Term::Lam(_, _, b2)) => self.conv(b1, b2),
            (Term::Lam(_, _, body), other) | (other, Term::Lam(_, _, body)) => {
                let expanded = Term::app(other.shift(1, 0), Term::BVar(0));
                self.conv(body, &expanded)
            }
            (Term::Pi(_, d1, c1), Term::Pi(_, d2, c2)) => {
                Ok(self.conv(d1, d2)? && self.conv(c1, c2)?)
            }
            (Term::App(..), Term::App(..)) => {
                let (h1, a1) = a.spine();
                let (h2, a2) = b.spine();
                if a1.len() != a2.len() || !self.conv(h1, h2)? {
                    return Ok(false);
                }
                for (x, y) in a1.iter().zip(a2.iter()) {
                    if !self.conv(x, y)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        }
    }
}

fn respine(t: Term, rest: Vec<Term>) -> (Term, Vec<Term>) {
    let (h, mut args) = t.into_spine();
    args.extend(rest);
    (h, args)
}

fn with_zeros<R>(pos: &mut Vec<u8>, k: usize, f: impl FnOnce(&mut Vec<u8>) -> R) -> R {
    let depth = pos.len();
    pos.extend(core::iter::repeat_n(0, k));
    let r = f(pos);
    pos.truncate(depth);
    r
}

fn child<R>(pos: &mut Vec<u8>, c: u8, f: impl FnOnce(&mut Vec<u8>) -> R) -> R {
    pos.push(c);
    let r = f(pos);
    pos.pop();
    r
}

pub fn whnf(rules: &RuleSet, t: &Term, fuel: u64) -> Result<Term, FuelExhausted> {
    Reducer::new(rules, fuel).whnf(t)
}

pub fn normalize(rules: &RuleSet, t: &Term, fuel: u64) -> Result<Term, FuelExhausted> {
    Reducer::new(rules, fuel).normalize(t)
}

pub fn normalize_traced(
    rules: &RuleSet,
    t: &Term,
    fuel: u64,
) -> Result<(Term, Vec<Step>), FuelExhausted> {
    let mut r = Reducer::new(rules, fuel).tracing();
    let nf = r.normalize(t)?;
    Ok((nf, r.take_trace()))
}

pub fn convertible(rules: &RuleSet, a: &Term, b: &Term, fuel: u64) -> Result<bool, FuelExhausted> {
    Reducer::new(rules, fuel).convertible(a, b)
}

/// Syntactic matching: no reduction is performed. Repeated variables must
/// satisfy `conv`.
pub fn match_pattern(
    p: &Pattern,
    t: &Term,
    conv: &mut dyn FnMut(&Term, &Term) -> bool,
) -> Option<Subst> {
    let mut s = Subst::new();
    match_into(p, t, conv, &mut s).then_some(s)
}

fn match_into(
    p: &Pattern,
    t: &Term,
    conv: &mut dyn FnMut(&Term, &Term) -> bool,
    s: &mut Subst,
) -> bool {
    match p {
        Pattern::Var(x) => match s.get(x) {
            Some(prev) => {
                let prev = prev.clone();
                conv(&prev, t)
            }
            None => {
                s.insert(x.clone(), t.clone());
                true
            }
        },
        Pattern::Const(c, pargs) => {
            let (h, targs) = t.spine();
            matches!(h, Term::Const(d) if d == c)
                && targs.len() == pargs.len()
                && pargs
                    .iter()
                    .zip(targs)
                    .all(|(p, a)| match_into(p, a, conv, s))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayError {
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step + 1, self.reason)
    }
}

impl core::error::Error for ReplayError {}

/// Applies a recorded trace to `t` step by step, checking that each step is
/// a legal redex at its position. Returns the final term.
pub fn replay(rules: &RuleSet, t: &Term, trace: &[Step], fuel: u64) -> Result<Term, ReplayError> {
    let mut cur = t.clone();
    for (i, step) in trace.iter().enumerate() {
        let err = |reason: String| ReplayError { step: i, reason };
        cur = rewrite_at(&cur, &step.pos, &mut |sub| {
            apply_step(rules, sub, &step.kind, fuel)
        })
        .map_err(err)?;
    }
    Ok(cur)
}

fn apply_step(rules: &RuleSet, t: &Term, kind: &StepKind, fuel: u64) -> Result<Term, String> {
    match kind {
        StepKind::Beta => match t {
            Term::App(f, a) => match &**f {
                Term::Lam(_, _, body) => Ok(body.instantiate(a)),
                _ => Err(alloc::format!("no beta redex at `{t}`")),
            },
            _ => Err(alloc::format!("no beta redex at `{t}`")),
        },
        StepKind::Eta => match t {
            Term::Lam(_, _, b) => match &**b {
                Term::App(f, a) if matches!(**a, Term::BVar(0)) && !f.mentions_bvar(0) => {
                    Ok(f.shift(-1, 0))
                }
                _ => Err(alloc::format!("no eta redex at `{t}`")),
            },
            _ => Err(alloc::format!("no eta redex at `{t}`")),
        },
        StepKind::Rule(name) => {
            let rule = rules
                .get(name)
                .ok_or_else(|| alloc::format!("unknown rule `{name}`"))?;
            let mut budget = Reducer::new(rules, fuel);
            let mut conv = |a: &Term, b: &Term| budget.convertible(a, b).unwrap_or(false);
            let s = match_pattern(&rule.lhs(), t, &mut conv)
                .ok_or_else(|| alloc::format!("rule `{name}` does not match `{t}`"))?;
            Ok(rule.instantiate_rhs(&s))
        }
    }
}

fn rewrite_at(
    t: &Term,
    pos: &[u8],
    f: &mut dyn FnMut(&Term) -> Result<Term, String>,
) -> Result<Term, String> {
    let Some((&c, rest)) = pos.split_first() else {
        return f(t);
    };
    let bad = || alloc::format!("position does not exist in `{t}`");
    match (t, c) {
        (Term::App(g, a), 0) => Ok(Term::app(rewrite_at(g, rest, f)?, (**a).clone())),
        (Term::App(g, a), 1) => Ok(Term::app((**g).clone(), rewrite_at(a, rest, f)?)),
        (Term::Lam(x, Some(d), b), 0) => Ok(Term::lam_raw(
            x.clone(),
            Some(rewrite_at(d, rest, f)?),
            (**b).clone(),
        )),
        (Term::Lam(x, d, b), 1) => Ok(Term::lam_raw(
            x.clone(),
            d.as_ref().map(|d| (**d).clone()),
            rewrite_at(b, rest, f)?,
        )),
        (Term::Pi(x, d, b), 0) => Ok(Term::pi_raw(
            x.clone(),
            rewrite_at(d, rest, f)?,
            (**b).clone(),
        )),
        (Term::Pi(x, d, b), 1) => Ok(Term::pi_raw(
            x.clone(),
            (**d).clone(),
            rewrite_at(b, rest, f)?,
        )),
        _ => Err(bad()),
    }
}
