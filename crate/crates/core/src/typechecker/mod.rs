//! Bidirectional type checking for the lambda-Pi calculus modulo rewriting.

mod check;
mod error;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::parser::{Declaration, SourceSpan};
use crate::rewriter::{RewriteRule, RuleSet};
use crate::term::{name, Name, Term, TypingContext};
use check::Checker;

pub use error::{ErrorKind, TypeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Staticity {
    /// No rule may have this constant as its head.
    Static,
    Definable,
}

#[derive(Clone, Debug)]
pub struct ConstInfo {
    pub staticity: Staticity,
    pub ty: Term,
    /// Position in the checked declaration list.
    pub index: usize,
    /// Where the declaration came from, when known.
    pub origin: Option<SourceSpan>,
}

/// A checked signature: typed constants and the rules that compute on them.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    consts: BTreeMap<Name, ConstInfo>,
    order: Vec<Name>,
    rules: RuleSet,
    /// Number of declarations checked so far, rules included.
    decls: usize,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, c: &str) -> Option<&ConstInfo> {
        self.consts.get(c)
    }

    pub fn type_of(&self, c: &str) -> Option<&Term> {
        self.lookup(c).map(|i| &i.ty)
    }

    pub fn contains(&self, c: &str) -> bool {
        self.consts.contains_key(c)
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    /// Constant names in declaration order.
    pub fn constants(&self) -> impl Iterator<Item = (&Name, &ConstInfo)> {
        self.order.iter().map(|n| (n, &self.consts[n]))
    }

    /// Number of declared constants.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    /// Number of checked declarations, rules included.
    pub fn declarations(&self) -> usize {
        self.decls
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn infer(&self, ctx: &TypingContext, t: &Term, fuel: u64) -> Result<Term, TypeError> {
        Checker::new(self, fuel).infer(&mut ctx.clone(), t)
    }

    pub fn check(
        &self,
        ctx: &TypingContext,
        t: &Term,
        ty: &Term,
        fuel: u64,
    ) -> Result<(), TypeError> {
        Checker::new(self, fuel).check(&mut ctx.clone(), t, ty)
    }

    /// Checks a rule against this signature without adding it.
    pub fn check_rule(&self, rule: &RewriteRule, fuel: u64) -> Result<(), TypeError> {
        Checker::new(self, fuel).check_rule(rule)
    }

    /// The signature extended by `d`, or why `d` is rejected.
    pub fn check_declaration(&self, d: &Declaration, fuel: u64) -> Result<Signature, TypeError> {
        let mut s = self.clone();
        s.add(d, None, fuel)?;
        Ok(s)
    }

    /// Checks `d` and adds it in place. On error `self` is unchanged.
    fn add(
        &mut self,
        d: &Declaration,
        origin: Option<&SourceSpan>,
        fuel: u64,
    ) -> Result<(), TypeError> {
        if let Some(n) = d.name() {
            if self.contains(n) {
                return Err(TypeError::new(
                    ErrorKind::Redeclaration,
                    format!("`{n}` is already declared"),
                ));
            }
        }
        match d {
            Declaration::StaticConst { name: c, ty }
            | Declaration::DefinableConst { name: c, ty } => {
                Checker::new(self, fuel).expect_sorted(&mut TypingContext::new(), ty)?;
                let staticity = if matches!(d, Declaration::StaticConst { .. }) {
                    Staticity::Static
                } else {
                    Staticity::Definable
                };
                self.insert(c, staticity, ty.clone(), origin);
            }
            Declaration::Definition { name: c, ty, body } => {
                let mut ck = Checker::new(self, fuel);
                let mut ctx = TypingContext::new();
                let ty = match ty {
                    Some(ty) => {
                        ck.expect_sorted(&mut ctx, ty)?;
                        ck.check(&mut ctx, body, ty)?;
                        ty.clone()
                    }
                    None => {
                        let ty = ck.infer(&mut ctx, body)?;
                        ck.expect_sorted(&mut ctx, &ty)?;
                        ty
                    }
                };
                self.insert(c, Staticity::Definable, ty, origin);
                self.rules.add(RewriteRule::unfold(c, body));
            }
            Declaration::Rule { vars, lhs, rhs } => {
                let names: Vec<Name> = vars.iter().map(|(v, _)| v.clone()).collect();
                let rule = RewriteRule::new(name("_"), &names, lhs, rhs)
                    .map_err(|e| TypeError::new(ErrorKind::RuleIllTyped, format!("{e}")))?;
                match self.lookup(&rule.head) {
                    None => {
                        return Err(TypeError::new(
                            ErrorKind::Unbound,
                            format!("rule head `{}` is not declared", rule.head),
                        ))
                    }
                    Some(i) if i.staticity == Staticity::Static => {
                        return Err(TypeError::new(
                            ErrorKind::NotDefinable,
                            format!("`{}` is static and cannot head a rule", rule.head),
                        ))
                    }
                    Some(_) => {}
                }
                self.check_rule(&rule, fuel)?;
                self.rules.add(rule);
            }
        }
        self.decls += 1;
        Ok(())
    }

    fn insert(&mut self, c: &Name, staticity: Staticity, ty: Term, origin: Option<&SourceSpan>) {
        self.order.push(c.clone());
        self.consts.insert(
            c.clone(),
            ConstInfo {
                staticity,
                index: self.decls,
                ty,
                origin: origin.cloned(),
            },
        );
    }

    /// Adds declarations in order, stopping at the first rejected one.
    fn extend(&mut self, ds: &[Declaration], fuel: u64) -> Result<(), TypeError> {
        for (k, d) in ds.iter().enumerate() {
            self.add(d, None, fuel).map_err(|e| e.at(k, None))?;
        }
        Ok(())
    }

    fn extend_located(
        &mut self,
        ds: &[(Declaration, SourceSpan)],
        fuel: u64,
    ) -> Result<(), TypeError> {
        for (k, (d, span)) in ds.iter().enumerate() {
            self.add(d, Some(span), fuel)
                .map_err(|e| e.at(k, Some(span)))?;
        }
        Ok(())
    }
}

/// Checks a list of declarations from the empty signature. `fuel` bounds
/// the reduction spent on each declaration.
pub fn check_signature(ds: &[Declaration], fuel: u64) -> Result<Signature, TypeError> {
    let mut s = Signature::new();
    s.extend(ds, fuel)?;
    Ok(s)
}

pub fn check_signature_located(
    ds: &[(Declaration, SourceSpan)],
    fuel: u64,
) -> Result<Signature, TypeError> {
    let mut s = Signature::new();
    s.extend_located(ds, fuel)?;
    Ok(s)
}

#[cfg(test)]
mod tests;
