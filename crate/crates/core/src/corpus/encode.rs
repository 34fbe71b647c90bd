use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::term::{name, Name, Term, TypingContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Layer {
    Internal,
    External,
}

impl Layer {
    fn prefix(self, c: &str) -> Term {
        match self {
            Layer::Internal => Term::cst(c),
            Layer::External => Term::Const(name(&alloc::format!("x{c}"))),
        }
    }

    fn decode(self, l: &Term, code: Term) -> Term {
        Term::apps(self.prefix("eps"), [l.clone(), code])
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layer::Internal => "internal",
            Layer::External => "external",
        })
    }
}

/// A universe level: a declared level constant or a level variable, under
/// finitely many `lsuc`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Const(Name),
    Var(Name),
    Suc(Box<Level>),
}

impl Level {
    pub fn named(c: &str) -> Level {
        Level::Const(name(c))
    }

    pub fn var(x: &str) -> Level {
        Level::Var(name(x))
    }

    /// Level variables, outermost first.
    pub fn vars(&self) -> Vec<Name> {
        match self {
            Level::Const(_) => Vec::new(),
            Level::Var(x) => alloc::vec![x.clone()],
            Level::Suc(l) => l.vars(),
        }
    }

    pub fn suc(&self) -> Level {
        Level::Suc(Box::new(self.clone()))
    }

    pub fn to_term(&self) -> Term {
        match self {
            Level::Const(c) => Term::Const(c.clone()),
            Level::Var(x) => Term::FVar(x.clone()),
            Level::Suc(l) => Term::app(Term::cst("lsuc"), l.to_term()),
        }
    }
}

/// Two-level type theory syntax. Types and terms share one grammar; each
/// former records its layer. Dependent formers bind `x` in their second
/// type. Elimination forms carry the types the encoding needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ast {
    Var(Name),
    /// The universe of codes at `level`, itself a type one level up.
    Univ(Layer, Level),
    /// A type at `level`, lifted one level up.
    Lift(Layer, Level, Box<Ast>),
    /// The external type that coerces an internal one.
    Coerce(Box<Ast>),
    False(Layer),
    True(Layer),
    Nat(Layer),
    Pi(Layer, Name, Box<Ast>, Box<Ast>),
    Sig(Layer, Name, Box<Ast>, Box<Ast>),
    Sum(Layer, Box<Ast>, Box<Ast>),
    Eq(Layer, Box<Ast>, Box<Ast>, Box<Ast>),
    Tt(Layer),
    Zero(Layer),
    Succ(Layer, Box<Ast>),
    Lam {
        layer: Layer,
        x: Name,
        dom: Box<Ast>,
        cod: Box<Ast>,
        body: Box<Ast>,
    },
    App {
        layer: Layer,
        x: Name,
        dom: Box<Ast>,
        cod: Box<Ast>,
        fun: Box<Ast>,
        arg: Box<Ast>,
    },
    Pair {
        layer: Layer,
        x: Name,
        fst_ty: Box<Ast>,
        snd_ty: Box<Ast>,
        fst: Box<Ast>,
        snd: Box<Ast>,
    },
    Fst {
        layer: Layer,
        x: Name,
        fst_ty: Box<Ast>,
        snd_ty: Box<Ast>,
        pair: Box<Ast>,
    },
    Snd {
        layer: Layer,
        x: Name,
        fst_ty: Box<Ast>,
        snd_ty: Box<Ast>,
        pair: Box<Ast>,
    },
    Inl {
        layer: Layer,
        left: Box<Ast>,
        right: Box<Ast>,
        val: Box<Ast>,
    },
    Inr {
        layer: Layer,
        left: Box<Ast>,
        right: Box<Ast>,
        val: Box<Ast>,
    },
    Refl {
        layer: Layer,
        ty: Box<Ast>,
        val: Box<Ast>,
    },
    /// Into the coercion of an internal type.
    Up(Box<Ast>, Box<Ast>),
    /// Out of the coercion of an internal type.
    Down(Box<Ast>, Box<Ast>),
}

impl Ast {
    pub fn var(x: &str) -> Ast {
        Ast::Var(name(x))
    }

    /// The layer of a type former; `None` for variables and terms.
    pub fn type_layer(&self) -> Option<Layer> {
        match self {
            Ast::Univ(l, _)
            | Ast::Lift(l, _, _)
            | Ast::False(l)
            | Ast::True(l)
            | Ast::Nat(l)
            | Ast::Pi(l, ..)
            | Ast::Sig(l, ..)
            | Ast::Sum(l, ..)
            | Ast::Eq(l, ..) => Some(*l),
            Ast::Coerce(_) => Some(Layer::External),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodeError {
    pub expected: Layer,
    pub found: Layer,
    /// The former whose argument is on the wrong layer.
    pub at: String,
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "layer mismatch in {}: expected an {} type, found an {} one",
            self.at, self.expected, self.found
        )
    }
}

impl core::error::Error for EncodeError {}

fn expect(layer: Layer, ty: &Ast, at: &str) -> Result<(), EncodeError> {
    match ty.type_layer() {
        Some(found) if found != layer => Err(EncodeError {
            expected: layer,
            found,
            at: at.into(),
        }),
        _ => Ok(()),
    }
}

struct Enc<'a> {
    l: &'a Term,
}

impl Enc<'_> {
    fn go(&self, e: &Ast) -> Result<Term, EncodeError> {
        let l = self.l;
        Ok(match e {
            Ast::Var(x) => Term::FVar(x.clone()),
            Ast::Univ(layer, lev) => Term::app(layer.prefix("t"), lev.to_term()),
            Ast::Lift(layer, lev, a) => {
                expect(*layer, a, "lift")?;
                let lt = lev.to_term();
                let inner = Enc { l: &lt }.go(a)?;
                Term::apps(layer.prefix("lUp"), [lt, inner])
            }
            Ast::Coerce(a) => {
                expect(Layer::Internal, a, "coercion")?;
                Term::apps(Term::cst("c"), [l.clone(), self.go(a)?])
            }
            Ast::False(layer) => Term::app(layer.prefix("False"), l.clone()),
            Ast::True(layer) => Term::app(layer.prefix("True"), l.clone()),
            Ast::Nat(layer) => Term::app(layer.prefix("Nat"), l.clone()),
            Ast::Pi(layer, x, a, b) => self.former(*layer, "Pi", x, a, b)?,
            Ast::Sig(layer, x, a, b) => self.former(*layer, "Sig", x, a, b)?,
            Ast::Sum(layer, a, b) => {
                expect(*layer, a, "sum")?;
                expect(*layer, b, "sum")?;
                Term::apps(layer.prefix("Sum"), [l.clone(), self.go(a)?, self.go(b)?])
            }
            Ast::Eq(layer, a, x, y) => {
                expect(*layer, a, "equality")?;
                Term::apps(
                    layer.prefix("Eq"),
                    [l.clone(), self.go(a)?, self.go(x)?, self.go(y)?],
                )
            }
            Ast::Tt(layer) => Term::app(layer.prefix("tt"), l.clone()),
            Ast::Zero(layer) => Term::app(layer.prefix("zero"), l.clone()),
            Ast::Succ(layer, n) => Term::apps(layer.prefix("succ"), [l.clone(), self.go(n)?]),
            Ast::Lam {
                layer,
                x,
                dom,
                cod,
                body,
            } => {
                let (a, fam) = self.family(*layer, "abstraction", x, dom, cod)?;
                let f = Term::lam_over(x, Some(layer.decode(l, a.clone())), &self.go(body)?);
                Term::apps(layer.prefix("plam"), [l.clone(), a, fam, f])
            }
            Ast::App {
                layer,
                x,
                dom,
                cod,
                fun,
                arg,
            } => {
                let (a, fam) = self.family(*layer, "application", x, dom, cod)?;
                Term::apps(
                    layer.prefix("papp"),
                    [l.clone(), a, fam, self.go(fun)?, self.go(arg)?],
                )
            }
            Ast::Pair {
                layer,
                x,
                fst_ty,
                snd_ty,
                fst,
                snd,
            } => {
                let (a, fam) = self.family(*layer, "pair", x, fst_ty, snd_ty)?;
                Term::apps(
                    layer.prefix("pair"),
                    [l.clone(), a, fam, self.go(fst)?, self.go(snd)?],
                )
            }
            Ast::Fst {
                layer,
                x,
                fst_ty,
                snd_ty,
                pair,
            } => {
                let (a, fam) = self.family(*layer, "projection", x, fst_ty, snd_ty)?;
                Term::apps(layer.prefix("p1"), [l.clone(), a, fam, self.go(pair)?])
            }
            Ast::Snd {
                layer,
                x,
                fst_ty,
                snd_ty,
                pair,
            } => {
                let (a, fam) = self.family(*layer, "projection", x, fst_ty, snd_ty)?;
                Term::apps(layer.prefix("p2"), [l.clone(), a, fam, self.go(pair)?])
            }
            Ast::Inl {
                layer,
                left,
                right,
                val,
            } => self.injection(*layer, "inl", left, right, val)?,
            Ast::Inr {
                layer,
                left,
                right,
                val,
            } => self.injection(*layer, "inr", left, right, val)?,
            Ast::Refl { layer, ty, val } => {
                expect(*layer, ty, "reflexivity")?;
                Term::apps(
                    layer.prefix("refl"),
                    [l.clone(), self.go(ty)?, self.go(val)?],
                )
            }
            Ast::Up(a, v) => {
                expect(Layer::Internal, a, "isomorphism")?;
                Term::apps(Term::cst("isoUp"), [l.clone(), self.go(a)?, self.go(v)?])
            }
            Ast::Down(a, v) => {
                expect(Layer::Internal, a, "isomorphism")?;
                Term::apps(Term::cst("isoDown"), [l.clone(), self.go(a)?, self.go(v)?])
            }
        })
    }

    /// `⟦A⟧` and the family `x : eps l ⟦A⟧ => ⟦B⟧`.
    fn family(
        &self,
        layer: Layer,
        at: &str,
        x: &Name,
        a: &Ast,
        b: &Ast,
    ) -> Result<(Term, Term), EncodeError> {
        expect(layer, a, at)?;
        expect(layer, b, at)?;
        let a = self.go(a)?;
        let fam = Term::lam_over(x, Some(layer.decode(self.l, a.clone())), &self.go(b)?);
        Ok((a, fam))
    }

    fn former(
        &self,
        layer: Layer,
        c: &str,
        x: &Name,
        a: &Ast,
        b: &Ast,
    ) -> Result<Term, EncodeError> {
        let (a, fam) = self.family(layer, c, x, a, b)?;
        Ok(Term::apps(layer.prefix(c), [self.l.clone(), a, fam]))
    }

    fn injection(
        &self,
        layer: Layer,
        c: &str,
        left: &Ast,
        right: &Ast,
        val: &Ast,
    ) -> Result<Term, EncodeError> {
        expect(layer, left, c)?;
        expect(layer, right, c)?;
        Ok(Term::apps(
            layer.prefix(c),
            [
                self.l.clone(),
                self.go(left)?,
                self.go(right)?,
                self.go(val)?,
            ],
        ))
    }
}

/// Translates two-level syntax at level `l`. Variables stay variables;
/// each former becomes its constant, external ones `x`-prefixed.
pub fn encode(e: &Ast, l: &Level) -> Result<Term, EncodeError> {
    Enc { l: &l.to_term() }.go(e)
}

/// Each entry `x : A` at level `l` becomes `x : eps l ⟦A⟧`, or `xeps` on
/// the external layer.
pub fn encode_context(entries: &[(Name, Ast, Level, Layer)]) -> Result<TypingContext, EncodeError> {
    let mut ctx = TypingContext::new();
    for (x, a, l, layer) in entries {
        expect(*layer, a, "context")?;
        let lt = l.to_term();
        let code = Enc { l: &lt }.go(a)?;
        ctx.push(x.clone(), layer.decode(&lt, code));
    }
    Ok(ctx)
}

/// Shorthand for building context entries.
pub fn entries<const N: usize>(
    xs: [(&str, Ast, Level, Layer); N],
) -> Vec<(Name, Ast, Level, Layer)> {
    xs.into_iter()
        .map(|(x, a, l, layer)| (name(x), a, l, layer))
        .collect()
}
