use alloc::collections::BTreeSet;
use alloc::format;

use super::error::{ErrorKind, TypeError};
use super::Signature;
use crate::rewriter::{Pattern, Reducer, RewriteRule};
use crate::term::{Fresh, Name, Sort, Term, TypingContext};

pub(crate) struct Checker<'s> {
    sig: &'s Signature,
    red: Reducer<'s>,
    fresh: Fresh,
    /// Pattern variables of the rule being checked. Their types are only
    /// known up to the instantiation, so they match anything in `conv_flex`.
    flex: BTreeSet<Name>,
}

impl<'s> Checker<'s> {
    pub(crate) fn new(sig: &'s Signature, fuel: u64) -> Self {
        Checker {
            sig,
            red: Reducer::new(sig.rules(), fuel),
            fresh: Fresh::default(),
            flex: BTreeSet::new(),
        }
    }

    fn whnf(&mut self, t: &Term) -> Result<Term, TypeError> {
        Ok(self.red.whnf(t)?)
    }

    fn conv(&mut self, a: &Term, b: &Term) -> Result<bool, TypeError> {
        Ok(self.red.convertible(a, b)?)
    }

    pub(crate) fn infer(&mut self, ctx: &mut TypingContext, t: &Term) -> Result<Term, TypeError> {
        match t {
            Term::Sort(Sort::Type) => Ok(Term::kind()),
            Term::Sort(Sort::Kind) => Err(TypeError::new(ErrorKind::SortError, "Kind has no type")),
            Term::Const(c) => match self.sig.lookup(c) {
                Some(info) => Ok(info.ty.clone()),
                None => Err(TypeError::new(
                    ErrorKind::Unbound,
                    format!("unknown constant `{c}`"),
                )),
            },
            Term::FVar(x) => ctx.lookup(x).cloned().ok_or_else(|| {
                TypeError::new(ErrorKind::Unbound, format!("unbound variable `{x}`"))
            }),
            Term::BVar(k) => Err(TypeError::new(
                ErrorKind::Unbound,
                format!("dangling bound variable #{k}"),
            )),
            Term::App(f, a) => {
                let tf = self.infer(ctx, f)?;
                match self.whnf(&tf)? {
                    Term::Pi(_, dom, cod) => {
                        self.check(ctx, a, &dom)?;
                        Ok(cod.instantiate(a))
                    }
                    other => Err(TypeError::new(
                        ErrorKind::NotAFunction,
                        format!("`{f}` is applied but its type is not a product"),
                    )
                    .with_terms(None, Some(&other))),
                }
            }
            Term::Lam(x, Some(dom), body) => {
                self.expect_type(ctx, dom)?;
                let y = self.fresh.name(x);
                ctx.push(y.clone(), (**dom).clone());
                let tb = self.infer(ctx, &body.open(&y));
                ctx.pop();
                let tb = tb?;
                if matches!(tb, Term::Sort(Sort::Kind)) {
                    return Err(TypeError::new(
                        ErrorKind::SortError,
                        "abstraction body cannot be a type family",
                    ));
                }
                Ok(Term::pi_raw(x.clone(), (**dom).clone(), tb.close(&y)))
            }
            Term::Lam(x, None, _) => Err(TypeError::new(
                ErrorKind::CannotInfer,
                format!("cannot infer the domain of `{x}`; annotate it or check against a product"),
            )),
            Term::Pi(x, dom, cod) => {
                self.expect_type(ctx, dom)?;
                let y = self.fresh.name(x);
                ctx.push(y.clone(), (**dom).clone());
                let s = self.infer(ctx, &cod.open(&y));
                ctx.pop();
                let s = self.whnf(&s?)?;
                match s {
                    Term::Sort(_) => Ok(s),
                    other => Err(TypeError::new(
                        ErrorKind::SortError,
                        "codomain of a product must be a type or a kind",
                    )
                    .with_terms(None, Some(&other))),
                }
            }
        }
    }

    /// Checks `t : Type`.
    fn expect_type(&mut self, ctx: &mut TypingContext, t: &Term) -> Result<(), TypeError> {
        let s = self.infer(ctx, t)?;
        match self.whnf(&s)? {
            Term::Sort(Sort::Type) => Ok(()),
            other => Err(
                TypeError::new(ErrorKind::SortError, format!("`{t}` should be a type"))
                    .with_terms(Some(&Term::typ()), Some(&other)),
            ),
        }
    }

    /// Checks that `t` is a type or a kind.
    pub(crate) fn expect_sorted(
        &mut self,
        ctx: &mut TypingContext,
        t: &Term,
    ) -> Result<(), TypeError> {
        if matches!(t, Term::Sort(Sort::Kind)) {
            return Ok(());
        }
        let s = self.infer(ctx, t)?;
        match self.whnf(&s)? {
            Term::Sort(_) => Ok(()),
            other => Err(TypeError::new(
                ErrorKind::SortError,
                format!("`{t}` is neither a type nor a kind"),
            )
            .with_terms(None, Some(&other))),
        }
    }

    pub(crate) fn check(
        &mut self,
        ctx: &mut TypingContext,
        t: &Term,
        ty: &Term,
    ) -> Result<(), TypeError> {
        if let Term::Lam(x, dom, body) = t {
            let Term::Pi(_, a, b) = self.whnf(ty)? else {
                return Err(TypeError::new(
                    ErrorKind::Mismatch,
                    "abstraction checked against a type that is not a product",
                )
                .with_terms(Some(ty), None));
            };
            if let Some(d) = dom {
                self.expect_type(ctx, d)?;
                if !self.conv(d, &a)? {
                    return Err(TypeError::mismatch(&a, d));
                }
            }
            let y = self.fresh.name(x);
            ctx.push(y.clone(), (*a).clone());
            let r = self.check(ctx, &body.open(&y), &b.open(&y));
            ctx.pop();
            return r;
        }
        let actual = self.infer(ctx, t)?;
        if self.conv(&actual, ty)? {
            Ok(())
        } else {
            Err(TypeError::mismatch(ty, &actual))
        }
    }

    /// Checks that a rule preserves types: the right-hand side has the type
    /// of the left-hand side in the context the left-hand side induces.
    pub(crate) fn check_rule(&mut self, rule: &RewriteRule) -> Result<(), TypeError> {
        self.flex = rule.vars.iter().cloned().collect();
        let r = self.check_rule_inner(rule);
        self.flex.clear();
        r.map_err(|e| TypeError {
            kind: ErrorKind::RuleIllTyped,
            message: format!("rule {rule}: [{}] {}", e.kind, e.message),
            ..e
        })
    }

    fn check_rule_inner(&mut self, rule: &RewriteRule) -> Result<(), TypeError> {
        let mut ctx = TypingContext::new();
        let lhs_ty = self.spine_type(&mut ctx, &rule.head, &rule.args)?;
        // the right-hand side is checked with plain conversion
        self.flex.clear();
        self.check(&mut ctx, &rule.rhs, &lhs_ty)
    }

    fn spine_type(
        &mut self,
        ctx: &mut TypingContext,
        head: &Name,
        args: &[Pattern],
    ) -> Result<Term, TypeError> {
        let mut ty = self.infer(ctx, &Term::Const(head.clone()))?;
        for a in args {
            let Term::Pi(_, dom, cod) = self.whnf(&ty)? else {
                return Err(TypeError::new(
                    ErrorKind::NotAFunction,
                    format!("`{head}` is applied to too many arguments"),
                )
                .with_terms(None, Some(&ty)));
            };
            let at = self.pattern(ctx, a, &dom)?;
            ty = cod.instantiate(&at);
        }
        Ok(ty)
    }

    fn pattern(
        &mut self,
        ctx: &mut TypingContext,
        p: &Pattern,
        expected: &Term,
    ) -> Result<Term, TypeError> {
        match p {
            Pattern::Var(x) => {
                if let Some(t) = ctx.lookup(x).cloned() {
                    if !self.conv_flex(&t, expected)? {
                        return Err(TypeError::mismatch(expected, &t));
                    }
                } else {
                    ctx.push(x.clone(), expected.clone());
                }
                Ok(Term::FVar(x.clone()))
            }
            Pattern::Const(c, args) => {
                let t = self.spine_type(ctx, c, args)?;
                if !self.conv_flex(&t, expected)? {
                    return Err(TypeError::mismatch(expected, &t));
                }
                Ok(p.to_term())
            }
        }
    }

    fn is_flex(&self, t: &Term) -> bool {
        matches!(t.spine().0, Term::FVar(x) if self.flex.contains(x))
    }

    /// Conversion in which a subterm headed by a pattern variable is
    /// compatible with anything.
    fn conv_flex(&mut self, a: &Term, b: &Term) -> Result<bool, TypeError> {
        if self.conv(a, b)? {
            return Ok(true);
        }
        let a = self.whnf(a)?;
        let b = self.whnf(b)?;
        if self.is_flex(&a) || self.is_flex(&b) {
            return Ok(true);
        }
        match (&a, &b) {
            (Term::Pi(x, d1, c1), Term::Pi(_, d2, c2)) => {
                if !self.conv_flex(d1, d2)? {
                    return Ok(false);
                }
                let y = self.fresh.name(x);
                self.conv_flex(&c1.open(&y), &c2.open(&y))
            }
            (Term::Lam(x, _, b1), Term::Lam(_, _, b2)) => {
                let y = self.fresh.name(x);
                self.conv_flex(&b1.open(&y), &b2.open(&y))
            }
            (Term::App(..), Term::App(..)) => {
                let (h1, xs) = a.spine();
                let (h2, ys) = b.spine();
                if xs.len() != ys.len() || !self.conv_flex(h1, h2)? {
                    return Ok(false);
                }
                for (x, y) in xs.into_iter().zip(ys) {
                    if !self.conv_flex(x, y)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(a.alpha_eq(&b)),
        }
    }
}
