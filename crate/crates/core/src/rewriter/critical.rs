use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::reduce::{FuelExhausted, Reducer};
use super::rules::{Pattern, RewriteRule, RuleSet, Subst};
use crate::term::{name, Name, Term};
use crate::verdict::Verdict;

/// Two one-step reducts of a most general overlap of two left-hand sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    /// Rule applied at the root of `overlap`; gives `left`.
    pub outer: Name,
    /// Rule applied at `position`; gives `right`.
    pub inner: Name,
    /// Argument indices from the root of `overlap` to the inner redex.
    pub position: Vec<usize>,
    pub overlap: Term,
    pub left: Term,
    pub right: Term,
}

impl fmt::Display for CriticalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} / {} at {}: {} ~> ({}, {})",
            self.outer,
            self.inner,
            display_arg_path(&self.position),
            self.overlap,
            self.left,
            self.right
        )
    }
}

pub fn display_arg_path(p: &[usize]) -> String {
    if p.is_empty() {
        "root".into()
    } else {
        p.iter()
            .map(|k| alloc::format!("{k}"))
            .collect::<Vec<_>>()
            .join(".")
    }
}

type USubst = BTreeMap<Name, Pattern>;

fn walk<'a>(p: &'a Pattern, s: &'a USubst) -> &'a Pattern {
    let mut p = p;
    while let Pattern::Var(x) = p {
        match s.get(x) {
            Some(q) => p = q,
            None => break,
        }
    }
    p
}

fn occurs(x: &Name, p: &Pattern, s: &USubst) -> bool {
    match walk(p, s) {
        Pattern::Var(y) => y == x,
        Pattern::Const(_, args) => args.iter().any(|a| occurs(x, a, s)),
    }
}

/// Syntactic first-order unification with occurs check.
fn unify(a: &Pattern, b: &Pattern, s: &mut USubst) -> bool {
    let a = walk(a, s).clone();
    let b = walk(b, s).clone();
    match (&a, &b) {
        (Pattern::Var(x), Pattern::Var(y)) if x == y => true,
        (Pattern::Var(x), other) | (other, Pattern::Var(x)) => {
            if occurs(x, other, s) {
                return false;
            }
            s.insert(x.clone(), other.clone());
            true
        }
        (Pattern::Const(c, xs), Pattern::Const(d, ys)) => {
            c == d && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify(x, y, s))
        }
    }
}

fn resolve(p: &Pattern, s: &USubst) -> Pattern {
    match walk(p, s) {
        Pattern::Var(x) => Pattern::Var(x.clone()),
        Pattern::Const(c, args) => {
            Pattern::Const(c.clone(), args.iter().map(|a| resolve(a, s)).collect())
        }
    }
}

fn subterms<'a>(p: &'a Pattern, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Pattern)>) {
    if let Pattern::Const(_, args) = p {
        out.push((path.clone(), p));
        for (k, a) in args.iter().enumerate() {
            path.push(k);
            subterms(a, path, out);
            path.pop();
        }
    }
}

fn term_replacing(p: &Pattern, path: &[usize], repl: &Term) -> Term {
    match (p, path.split_first()) {
        (_, None) => repl.clone(),
        (Pattern::Const(c, args), Some((&k, rest))) => Term::apps(
            Term::Const(c.clone()),
            args.iter().enumerate().map(|(i, a)| {
                if i == k {
                    term_replacing(a, rest, repl)
                } else {
                    a.to_term()
                }
            }),
        ),
        (Pattern::Var(_), Some(_)) => unreachable!("paths only lead through constants"),
    }
}

fn renamed(r: &RewriteRule, tag: &str) -> (Pattern, Term) {
    let f = |x: &Name| name(&alloc::format!("{x}#{tag}"));
    let lhs = r.lhs().rename(&f);
    let rhs = r.rhs.subst_many(&|x: &str| Some(Term::FVar(f(&name(x)))));
    (lhs, rhs)
}

fn apply_usubst(t: &Term, s: &USubst) -> Term {
    t.subst_many(&|x: &str| s.get(x).map(|p| resolve(p, s).to_term()))
}

/// Renames the variables of a pair in order of first appearance in the
/// overlap, dropping the disambiguating suffixes where possible.
fn canonicalize(cp: &mut CriticalPair) {
    let mut order: Vec<Name> = Vec::new();
    let mut seen = BTreeSet::new();
    collect_fvars(&cp.overlap, &mut order, &mut seen);
    collect_fvars(&cp.left, &mut order, &mut seen);
    collect_fvars(&cp.right, &mut order, &mut seen);
    let mut used: BTreeSet<String> = cp
        .overlap
        .constants()
        .into_iter()
        .chain(cp.left.constants())
        .chain(cp.right.constants())
        .map(|c| String::from(&*c))
        .collect();
    let mut map: BTreeMap<Name, Name> = BTreeMap::new();
    for v in order {
        let mut base = String::from(v.split('#').next().unwrap_or("x"));
        while used.contains(&base) {
            base.push('\'');
        }
        used.insert(base.clone());
        map.insert(v, name(&base));
    }
    let f = |x: &str| map.get(x).map(|n| Term::FVar(n.clone()));
    cp.overlap = cp.overlap.subst_many(&f);
    cp.left = cp.left.subst_many(&f);
    cp.right = cp.right.subst_many(&f);
}

fn collect_fvars(t: &Term, order: &mut Vec<Name>, seen: &mut BTreeSet<Name>) {
    match t {
        Term::FVar(x) => {
            if seen.insert(x.clone()) {
                order.push(x.clone());
            }
        }
        Term::App(f, a) => {
            collect_fvars(f, order, seen);
            collect_fvars(a, order, seen);
        }
        Term::Lam(_, d, b) => {
            if let Some(d) = d {
                collect_fvars(d, order, seen);
            }
            collect_fvars(b, order, seen);
        }
        Term::Pi(_, d, b) => {
            collect_fvars(d, order, seen);
            collect_fvars(b, order, seen);
        }
        _ => {}
    }
}

/// All critical pairs between the given rules: root overlaps of distinct
/// rules and overlaps at every non-variable position of a left-hand side.
/// A rule of arity k also overlaps an application of its head to more than
/// k arguments, since it fires on the prefix.
pub fn critical_pairs(rules: &[RewriteRule]) -> Vec<CriticalPair> {
    let mut out = Vec::new();
    let mut keys = BTreeSet::new();
    for (i, r1) in rules.iter().enumerate() {
        let (l1, rhs1) = renamed(r1, "1");
        let mut nodes = Vec::new();
        subterms(&l1, &mut Vec::new(), &mut nodes);
        for (path, node) in nodes {
            let Pattern::Const(c, args) = node else {
                continue;
            };
            for (j, r2) in rules.iter().enumerate() {
                if &r2.head != c || r2.args.len() > args.len() {
                    continue;
                }
                let k2 = r2.args.len();
                if path.is_empty() && k2 == args.len() && j <= i {
                    // same rule, or the mirror image of a pair already seen
                    continue;
                }
                let (l2, rhs2) = renamed(r2, "2");
                let prefix = Pattern::Const(c.clone(), args[..k2].to_vec());
                let mut s = USubst::new();
                if !unify(&prefix, &l2, &mut s) {
                    continue;
                }
                let overlap_p = resolve(&l1, &s);
                let Some(Pattern::Const(_, inst_args)) = node_at(&overlap_p, &path).cloned() else {
                    continue;
                };
                let inner_reduct = Term::apps(
                    apply_usubst(&rhs2, &s),
                    inst_args[k2..].iter().map(Pattern::to_term),
                );
                let mut cp = CriticalPair {
                    outer: r1.name.clone(),
                    inner: r2.name.clone(),
                    position: path.clone(),
                    overlap: overlap_p.to_term(),
                    left: apply_usubst(&rhs1, &s),
                    right: term_replacing(&overlap_p, &path, &inner_reduct),
                };
                canonicalize(&mut cp);
                let key = (
                    cp.outer.clone(),
                    cp.inner.clone(),
                    cp.position.clone(),
                    crate::parser::pretty_print(&cp.overlap),
                );
                if keys.insert(key) {
                    out.push(cp);
                }
            }
        }
    }
    out
}

fn node_at<'a>(p: &'a Pattern, path: &[usize]) -> Option<&'a Pattern> {
    match path.split_first() {
        None => Some(p),
        Some((&k, rest)) => match p {
            Pattern::Const(_, args) => node_at(args.get(k)?, rest),
            Pattern::Var(_) => None,
        },
    }
}

/// Normalizes both reducts. `Fails` carries the two distinct normal forms.
pub fn joinable(
    rules: &RuleSet,
    cp: &CriticalPair,
    fuel: u64,
) -> Result<Verdict<(Term, Term)>, FuelExhausted> {
    let mut r = Reducer::new(rules, fuel);
    let a = r.normalize(&cp.left)?;
    let b = r.normalize(&cp.right)?;
    Ok(if a.alpha_eq(&b) {
        Verdict::Holds
    } else {
        Verdict::Fails((a, b))
    })
}

/// A closed instance of a critical pair and the normal forms of its sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub subst: Subst,
    pub left: Term,
    pub right: Term,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (x, t)) in self.subst.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} := {t}")?;
        }
        write!(f, ": ({}, {})", self.left, self.right)
    }
}

const MAX_INSTANCES: usize = 64;

/// Instances of `cp` whose two sides have distinct normal forms, found by
/// replacing each variable with a constant that some left-hand side
/// matches at the same argument position. Such constants fit the
/// variable's type whenever the rules are well typed.
pub fn closed_instances(
    rules: &RuleSet,
    cp: &CriticalPair,
    fuel: u64,
) -> Result<Vec<Instance>, FuelExhausted> {
    let mut slots: BTreeMap<(Name, usize), BTreeSet<Name>> = BTreeMap::new();
    for r in rules.iter() {
        pattern_constants(&r.lhs(), &mut slots);
    }
    let mut cands: BTreeMap<Name, BTreeSet<Name>> = BTreeMap::new();
    var_slots(&cp.overlap, &mut |x, slot| {
        let found = slots.get(&slot).cloned().unwrap_or_default();
        cands.entry(x.clone()).or_default().extend(found);
    });
    if cands.is_empty() || cands.values().any(|c| c.is_empty()) {
        return Ok(Vec::new());
    }
    let vars: Vec<(Name, Vec<Name>)> = cands
        .into_iter()
        .map(|(x, cs)| (x, cs.into_iter().collect()))
        .collect();
    let mut out = Vec::new();
    let mut idx = alloc::vec![0usize; vars.len()];
    let mut r = Reducer::new(rules, fuel);
    loop {
        let subst: Subst = vars
            .iter()
            .zip(&idx)
            .map(|((x, cs), &k)| (x.clone(), Term::Const(cs[k].clone())))
            .collect();
        let f = |x: &str| subst.get(x).cloned();
        let left = r.normalize(&cp.left.subst_many(&f))?;
        let right = r.normalize(&cp.right.subst_many(&f))?;
        if !left.alpha_eq(&right) {
            out.push(Instance { subst, left, right });
        }
        // odometer over the candidate lists
        let mut k = 0;
        loop {
            if k == idx.len() || out.len() >= MAX_INSTANCES {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < vars[k].1.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn pattern_constants(p: &Pattern, slots: &mut BTreeMap<(Name, usize), BTreeSet<Name>>) {
    if let Pattern::Const(c, args) = p {
        for (m, a) in args.iter().enumerate() {
            if let Pattern::Const(d, sub) = a {
                if sub.is_empty() {
                    slots.entry((c.clone(), m)).or_default().insert(d.clone());
                }
            }
            pattern_constants(a, slots);
        }
    }
}

fn var_slots(t: &Term, f: &mut dyn FnMut(&Name, (Name, usize))) {
    let (h, args) = t.spine();
    if let Term::Const(c) = h {
        for (m, a) in args.iter().enumerate() {
            if let Term::FVar(x) = a {
                f(x, (c.clone(), m));
            }
        }
    }
    for a in args {
        var_slots(a, f);
    }
}
