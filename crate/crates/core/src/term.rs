//! Lambda-Pi terms in locally nameless form.
//!
//! Bound variables are de Bruijn indices (`BVar`), free variables and
//! typing-context entries are names (`FVar`). Binder names are display hints
//! only and never take part in equality.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Type,
    Kind,
}

#[derive(Clone, Debug)]
pub enum Term {
    Sort(Sort),
    Const(Name),
    /// Reference to an enclosing binder, counted outwards from 0.
    BVar(u32),
    /// Free variable: a typing-context entry or a rule pattern variable.
    FVar(Name),
    App(Arc<Term>, Arc<Term>),
    Lam(Name, Option<Arc<Term>>, Arc<Term>),
    Pi(Name, Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn typ() -> Term {
        Term::Sort(Sort::Type)
    }

    pub fn kind() -> Term {
        Term::Sort(Sort::Kind)
    }

    pub fn cst(n: &str) -> Term {
        Term::Const(name(n))
    }

    pub fn var(n: &str) -> Term {
        Term::FVar(name(n))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(head: Term, args: I) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn lam(x: &str, dom: Option<Term>, body: Term) -> Term {
        Term::Lam(name(x), dom.map(Arc::new), Arc::new(body))
    }

    pub fn pi(x: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(name(x), Arc::new(dom), Arc::new(cod))
    }

    pub fn lam_raw(x: Name, dom: Option<Term>, body: Term) -> Term {
        Term::Lam(x, dom.map(Arc::new), Arc::new(body))
    }

    pub fn pi_raw(x: Name, dom: Term, cod: Term) -> Term {
        Term::Pi(x, Arc::new(dom), Arc::new(cod))
    }

    /// Non-dependent arrow `dom -> cod`; `cod` must not refer to the new binder.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::Pi(name("_"), Arc::new(dom), Arc::new(cod.shift(1, 0)))
    }

    /// Lambda binding the free variable `x` of `body`.
    pub fn lam_over(x: &str, dom: Option<Term>, body: &Term) -> Term {
        Term::lam(x, dom, body.close(x))
    }

    /// Pi binding the free variable `x` of `cod`.
    pub fn pi_over(x: &str, dom: Term, cod: &Term) -> Term {
        Term::pi(x, dom, cod.close(x))
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn into_spine(self) -> (Term, Vec<Term>) {
        let mut args = Vec::new();
        let mut t = self;
        loop {
            match t {
                Term::App(f, a) => {
                    args.push(Arc::unwrap_or_clone(a));
                    t = Arc::unwrap_or_clone(f);
                }
                head => {
                    args.reverse();
                    return (head, args);
                }
            }
        }
    }

    pub fn head_const(&self) -> Option<&Name> {
        match self.spine().0 {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }

    /// True if some `BVar(k)` with `k >= depth` occurs unbound.
    pub fn has_loose_bvar_from(&self, depth: u32) -> bool {
        match self {
            Term::BVar(k) => *k >= depth,
            Term::Sort(_) | Term::Const(_) | Term::FVar(_) => false,
            Term::App(f, a) => f.has_loose_bvar_from(depth) || a.has_loose_bvar_from(depth),
            Term::Lam(_, d, b) => {
                d.as_ref().is_some_and(|d| d.has_loose_bvar_from(depth))
                    || b.has_loose_bvar_from(depth + 1)
            }
            Term::Pi(_, d, b) => d.has_loose_bvar_from(depth) || b.has_loose_bvar_from(depth + 1),
        }
    }

    /// True if `BVar(depth)` (seen from the top of `self`) occurs.
    pub fn mentions_bvar(&self, depth: u32) -> bool {
        match self {
            Term::BVar(k) => *k == depth,
            Term::Sort(_) | Term::Const(_) | Term::FVar(_) => false,
            Term::App(f, a) => f.mentions_bvar(depth) || a.mentions_bvar(depth),
            Term::Lam(_, d, b) => {
                d.as_ref().is_some_and(|d| d.mentions_bvar(depth)) || b.mentions_bvar(depth + 1)
            }
            Term::Pi(_, d, b) => d.mentions_bvar(depth) || b.mentions_bvar(depth + 1),
        }
    }

    pub fn is_locally_closed(&self) -> bool {
        !self.has_loose_bvar_from(0)
    }

    /// Adds `by` to every loose index `>= cutoff`. Negative shifts must not
    /// underflow; callers only lower indices they know are absent.
    pub fn shift(&self, by: i64, cutoff: u32) -> Term {
        if by == 0 || !self.has_loose_bvar_from(cutoff) {
            return self.clone();
        }
        self.shift_unchecked(by, cutoff)
    }

    fn shift_unchecked(&self, by: i64, cutoff: u32) -> Term {
        match self {
            Term::BVar(k) if *k >= cutoff => Term::BVar((*k as i64 + by) as u32),
            Term::App(f, a) => {
                Term::App(Arc::new(f.shift(by, cutoff)), Arc::new(a.shift(by, cutoff)))
            }
            Term::Lam(x, d, b) => Term::Lam(
                x.clone(),
                d.as_ref().map(|d| Arc::new(d.shift(by, cutoff))),
                Arc::new(b.shift(by, cutoff + 1)),
            ),
            Term::Pi(x, d, b) => Term::Pi(
                x.clone(),
                Arc::new(d.shift(by, cutoff)),
                Arc::new(b.shift(by, cutoff + 1)),
            ),
            t => t.clone(),
        }
    }

    /// Replaces the outermost loose index of a binder body by `arg`
    /// (the body of `Lam`/`Pi` instantiated at `arg`).
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.subst_bvar(0, arg)
    }

    fn subst_bvar(&self, depth: u32, arg: &Term) -> Term {
        if !self.has_loose_bvar_from(depth) {
            return self.clone();
        }
        match self {
            Term::BVar(k) if *k == depth => arg.shift(depth as i64, 0),
            Term::BVar(k) if *k > depth => Term::BVar(k - 1),
            Term::App(f, a) => Term::App(
                Arc::new(f.subst_bvar(depth, arg)),
                Arc::new(a.subst_bvar(depth, arg)),
            ),
            Term::Lam(x, d, b) => Term::Lam(
                x.clone(),
                d.as_ref().map(|d| Arc::new(d.subst_bvar(depth, arg))),
                Arc::new(b.subst_bvar(depth + 1, arg)),
            ),
            Term::Pi(x, d, b) => Term::Pi(
                x.clone(),
                Arc::new(d.subst_bvar(depth, arg)),
                Arc::new(b.subst_bvar(depth + 1, arg)),
            ),
            t => t.clone(),
        }
    }

    /// Opens a binder body with the free variable `x`.
    pub fn open(&self, x: &Name) -> Term {
        self.instantiate(&Term::FVar(x.clone()))
    }

    /// Abstracts the free variable `x`, producing a binder body.
    pub fn close(&self, x: &str) -> Term {
        self.close_at(x, 0)
    }

    fn close_at(&self, x: &str, depth: u32) -> Term {
        match self {
            Term::FVar(y) if &**y == x => Term::BVar(depth),
            Term::BVar(k) if *k >= depth => Term::BVar(k + 1),
            Term::App(f, a) => Term::App(
                Arc::new(f.close_at(x, depth)),
                Arc::new(a.close_at(x, depth)),
            ),
            Term::Lam(y, d, b) => Term::Lam(
                y.clone(),
                d.as_ref().map(|d| Arc::new(d.close_at(x, depth))),
                Arc::new(b.close_at(x, depth + 1)),
            ),
            Term::Pi(y, d, b) => Term::Pi(
                y.clone(),
                Arc::new(d.close_at(x, depth)),
                Arc::new(b.close_at(x, depth + 1)),
            ),
            t => t.clone(),
        }
    }

    /// Capture-avoiding substitution of the free variable `x` by `replacement`.
    pub fn subst(&self, x: &str, replacement: &Term) -> Term {
        self.subst_with(&|y: &str| (y == x).then(|| replacement.clone()), 0)
    }

    /// Simultaneous substitution of free variables; names mapped to `None`
    /// are left alone.
    pub fn subst_many<F: Fn(&str) -> Option<Term>>(&self, f: &F) -> Term {
        self.subst_with(f, 0)
    }

    fn subst_with<F: Fn(&str) -> Option<Term>>(&self, f: &F, depth: u32) -> Term {
        match self {
            Term::FVar(y) => match f(y) {
                Some(t) => t.shift(depth as i64, 0),
                None => self.clone(),
            },
            Term::App(g, a) => Term::App(
                Arc::new(g.subst_with(f, depth)),
                Arc::new(a.subst_with(f, depth)),
            ),
            Term::Lam(y, d, b) => Term::Lam(
                y.clone(),
                d.as_ref().map(|d| Arc::new(d.subst_with(f, depth))),
                Arc::new(b.subst_with(f, depth + 1)),
            ),
            Term::Pi(y, d, b) => Term::Pi(
                y.clone(),
                Arc::new(d.subst_with(f, depth)),
                Arc::new(b.subst_with(f, depth + 1)),
            ),
            t => t.clone(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect(&mut out, &|t| match t {
            Term::FVar(x) => Some(x.clone()),
            _ => None,
        });
        out
    }

    pub fn constants(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect(&mut out, &|t| match t {
            Term::Const(c) => Some(c.clone()),
            _ => None,
        });
        out
    }

    fn collect<F: Fn(&Term) -> Option<Name>>(&self, out: &mut BTreeSet<Name>, f: &F) {
        if let Some(n) = f(self) {
            out.insert(n);
        }
        match self {
            Term::App(g, a) => {
                g.collect(out, f);
                a.collect(out, f);
            }
            Term::Lam(_, d, b) => {
                if let Some(d) = d {
                    d.collect(out, f);
                }
                b.collect(out, f);
            }
            Term::Pi(_, d, b) => {
                d.collect(out, f);
                b.collect(out, f);
            }
            _ => {}
        }
    }

    /// Alpha-equivalence. Binder names and lambda domain annotations are
    /// ignored: annotations are checking hints, not part of term identity.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Sort(a), Term::Sort(b)) => a == b,
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::BVar(a), Term::BVar(b)) => a == b,
            (Term::FVar(a), Term::FVar(b)) => a == b,
            (Term::App(f1, a1), Term::App(f2, a2)) => f1.alpha_eq(f2) && a1.alpha_eq(a2),
            (Term::Lam(_, _, b1), Term::Lam(_, _, b2)) => b1.alpha_eq(b2),
            (Term::Pi(_, d1, b1), Term::Pi(_, d2, b2)) => d1.alpha_eq(d2) && b1.alpha_eq(b2),
            _ => false,
        }
    }

    /// Structural equality that also compares lambda annotations (binder
    /// names are still ignored).
    pub fn same_annotated(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::App(f1, a1), Term::App(f2, a2)) => {
                f1.same_annotated(f2) && a1.same_annotated(a2)
            }
            (Term::Lam(_, d1, b1), Term::Lam(_, d2, b2)) => {
                let doms = match (d1, d2) {
                    (None, None) => true,
                    (Some(a), Some(b)) => a.same_annotated(b),
                    _ => false,
                };
                doms && b1.same_annotated(b2)
            }
            (Term::Pi(_, d1, b1), Term::Pi(_, d2, b2)) => {
                d1.same_annotated(d2) && b1.same_annotated(b2)
            }
            (a, b) => a.alpha_eq(b),
        }
    }

    /// True when `KIND` occurs only where a classifier may stand.
    pub fn kind_well_placed(&self) -> bool {
        fn go(t: &Term, classifier: bool) -> bool {
            match t {
                Term::Sort(Sort::Kind) => classifier,
                Term::Sort(_) | Term::Const(_) | Term::BVar(_) | Term::FVar(_) => true,
                Term::App(f, a) => go(f, false) && go(a, false),
                Term::Lam(_, d, b) => d.as_ref().is_none_or(|d| go(d, false)) && go(b, false),
                Term::Pi(_, d, b) => go(d, false) && go(b, classifier),
            }
        }
        go(self, true)
    }

    /// Number of nodes; used for reporting and test generators.
    pub fn size(&self) -> usize {
        match self {
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, d, b) => 1 + d.as_ref().map_or(0, |d| d.size()) + b.size(),
            Term::Pi(_, d, b) => 1 + d.size() + b.size(),
            _ => 1,
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_eq(other)
    }
}

impl Eq for Term {}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::pretty_print(self))
    }
}

/// Ordered typing context. Lookup is innermost-first, so a later entry
/// shadows an earlier one with the same name.
#[derive(Clone, Debug, Default)]
pub struct TypingContext {
    entries: Vec<(Name, Term)>,
}

impl TypingContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: Name, ty: Term) {
        self.entries.push((x, ty));
    }

    pub fn with(mut self, x: &str, ty: Term) -> Self {
        self.push(name(x), ty);
        self
    }

    pub fn pop(&mut self) -> Option<(Name, Term)> {
        self.entries.pop()
    }

    pub fn lookup(&self, x: &str) -> Option<&Term> {
        self.entries
            .iter()
            .rev()
            .find(|(y, _)| &**y == x)
            .map(|(_, t)| t)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.lookup(x).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, Term)> {
        self.entries.iter()
    }

    pub fn names(&self) -> Vec<Name> {
        self.entries.iter().map(|(x, _)| x.clone()).collect()
    }
}

/// A fresh-name supply. Generated names contain `#`, which the surface
/// syntax cannot produce, so they never collide with user identifiers.
#[derive(Debug, Default)]
pub struct Fresh {
    next: u64,
}

impl Fresh {
    pub fn name(&mut self, hint: &str) -> Name {
        self.next += 1;
        let base = hint.split('#').next().unwrap_or("x");
        let base = if base.is_empty() || base == "_" {
            "x"
        } else {
            base
        };
        let mut s = String::from(base);
        s.push('#');
        s.push_str(&alloc::format!("{}", self.next));
        Arc::from(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(x: &str, body: Term) -> Term {
        Term::lam_over(x, None, &body)
    }

    #[test]
    fn subst_identity_target() {
        let t = Term::var("x").subst("x", &Term::cst("0"));
        assert_eq!(t, Term::cst("0"));
    }

    #[test]
    fn subst_is_homomorphic() {
        let t = Term::apps(Term::cst("Imin"), [Term::var("i"), Term::var("i")]);
        let r = t.subst("i", &Term::cst("1"));
        assert_eq!(
            r,
            Term::apps(Term::cst("Imin"), [Term::cst("1"), Term::cst("1")])
        );
    }

    #[test]
    fn subst_avoids_capture() {
        // (x => y)[y := x] must not capture the free x.
        let t = lam("x", Term::var("y"));
        let r = t.subst("y", &Term::var("x"));
        match &r {
            Term::Lam(_, _, body) => assert!(matches!(&**body, Term::FVar(v) if &**v == "x")),
            _ => panic!("expected a lambda"),
        }
        assert!(!r.alpha_eq(&lam("x", Term::var("x"))));
        assert_eq!(r.free_vars().into_iter().collect::<Vec<_>>(), [name("x")]);
        let printed = crate::parser::pretty_print(&r);
        assert_eq!(printed, "x' => x");
    }

    #[test]
    fn alpha_eq_examples() {
        assert!(lam("x", Term::var("x")).alpha_eq(&lam("y", Term::var("y"))));
        let k1 = lam("x", lam("y", Term::var("x")));
        let k2 = lam("a", lam("b", Term::var("b")));
        assert!(!k1.alpha_eq(&k2));
        let p1 = Term::pi_over("x", Term::cst("I"), &Term::var("A"));
        let p2 = Term::pi_over("z", Term::cst("I"), &Term::var("A"));
        assert!(p1.alpha_eq(&p2));
    }

    #[test]
    fn free_vars_examples() {
        assert!(lam("x", Term::var("x")).free_vars().is_empty());
        let fx = Term::app(Term::var("f"), Term::var("x"));
        assert_eq!(fx.free_vars().len(), 2);
        let p = Term::pi_over(
            "x",
            Term::var("A"),
            &Term::app(Term::var("B"), Term::var("x")),
        );
        let fv: Vec<_> = p.free_vars().into_iter().collect();
        assert_eq!(fv, [name("A"), name("B")]);
    }

    #[test]
    fn instantiate_shifts_under_binders() {
        // (y => #1 #0)[#0 := FVar a] inside a lambda body
        let body = Term::lam("y", None, Term::app(Term::BVar(1), Term::BVar(0)));
        let r = body.instantiate(&Term::var("a"));
        let expected = Term::lam("y", None, Term::app(Term::var("a"), Term::BVar(0)));
        assert!(r.alpha_eq(&expected));
        // substituting a term with a loose index under one binder shifts it
        let r2 = body.instantiate(&Term::BVar(3));
        let expected2 = Term::lam("y", None, Term::app(Term::BVar(4), Term::BVar(0)));
        assert!(r2.alpha_eq(&expected2));
    }

    #[test]
    fn kind_placement() {
        assert!(Term::arrow(Term::cst("A"), Term::kind()).kind_well_placed());
        assert!(!Term::app(Term::cst("f"), Term::kind()).kind_well_placed());
        assert!(!Term::pi("x", Term::kind(), Term::typ()).kind_well_placed());
    }

    #[test]
    fn context_shadowing_is_innermost_first() {
        let ctx = TypingContext::new()
            .with("x", Term::cst("A"))
            .with("x", Term::cst("B"));
        assert_eq!(ctx.lookup("x"), Some(&Term::cst("B")));
    }

    #[test]
    fn fresh_names_are_distinct() {
        let mut f = Fresh::default();
        assert_ne!(f.name("x"), f.name("x"));
        assert!(f.name("y#3").starts_with("y#"));
    }
}
