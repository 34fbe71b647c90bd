use alloc::boxed::Box;
use alloc::vec::Vec;

use super::encode::{encode, encode_context, entries, Ast, EncodeError, Layer, Level};
use crate::term::{name, Name, Term, TypingContext};

/// A typing judgment of two-level type theory, `ctx |- term : ty`, with
/// `ty` a type at `ty_level` on `layer`.
#[derive(Clone, Debug)]
pub struct Judgment {
    pub name: &'static str,
    pub ctx: Vec<(Name, Ast, Level, Layer)>,
    pub term: Ast,
    /// Level at which the term is encoded. Differs from `ty_level` only
    /// for type codes.
    pub term_level: Level,
    pub ty: Ast,
    pub ty_level: Level,
    pub layer: Layer,
}

/// An encoded judgment, ready for the checker. Level variables come
/// first in the context, typed by `Lev`.
#[derive(Clone, Debug)]
pub struct Encoded {
    pub ctx: TypingContext,
    pub term: Term,
    pub ty: Term,
}

impl Judgment {
    pub fn encode(&self) -> Result<Encoded, EncodeError> {
        let lt = self.ty_level.to_term();
        let code = encode(&self.ty, &self.ty_level)?;
        let decode = match self.layer {
            Layer::Internal => "eps",
            Layer::External => "xeps",
        };
        let mut ctx = TypingContext::new();
        let levels = self
            .ctx
            .iter()
            .map(|e| &e.2)
            .chain([&self.term_level, &self.ty_level]);
        for x in levels.flat_map(Level::vars) {
            if !ctx.contains(&x) {
                ctx.push(x, Term::cst("Lev"));
            }
        }
        for (x, ty) in encode_context(&self.ctx)?.iter() {
            ctx.push(x.clone(), ty.clone());
        }
        Ok(Encoded {
            ctx,
            term: encode(&self.term, &self.term_level)?,
            ty: Term::apps(Term::cst(decode), [lt, code]),
        })
    }
}

fn b(a: Ast) -> Box<Ast> {
    Box::new(a)
}

fn v(x: &str) -> Ast {
    Ast::var(x)
}

fn v_box(x: &str) -> Box<Ast> {
    b(v(x))
}

/// Hand-built judgments over a level variable `l`, covering both layers,
/// dependent sums and products, equality, naturals, sums, lifts, universes
/// and the coercion.
pub fn judgments() -> Vec<Judgment> {
    use Layer::{External as Ex, Internal as In};
    let l0 = Level::var("l");
    let l1 = l0.suc();
    let ctx = entries([
        ("A", Ast::Univ(In, l0.clone()), l1.clone(), In),
        ("B", Ast::Univ(In, l0.clone()), l1.clone(), In),
        ("X", Ast::Univ(Ex, l0.clone()), l1.clone(), Ex),
        ("Y", Ast::Univ(Ex, l0.clone()), l1.clone(), Ex),
        ("a", v("A"), l0.clone(), In),
        ("bb", v("B"), l0.clone(), In),
        ("xa", v("X"), l0.clone(), Ex),
        ("xb", v("Y"), l0.clone(), Ex),
        (
            "p",
            Ast::Sig(In, name("_"), v_box("A"), v_box("B")),
            l0.clone(),
            In,
        ),
        (
            "f",
            Ast::Pi(In, name("_"), v_box("A"), v_box("B")),
            l0.clone(),
            In,
        ),
        ("ca", Ast::Coerce(v_box("A")), l0.clone(), Ex),
    ]);
    let sig_ab = |layer: Layer, a: &str, bt: &str| Ast::Sig(layer, name("_"), v_box(a), v_box(bt));
    let j = |name: &'static str, term: Ast, ty: Ast, layer: Layer| Judgment {
        name,
        ctx: ctx.clone(),
        term,
        term_level: l0.clone(),
        ty,
        ty_level: l0.clone(),
        layer,
    };
    alloc::vec![
        j(
            "sigma-pair",
            Ast::Pair {
                layer: In,
                x: name("_"),
                fst_ty: v_box("A"),
                snd_ty: v_box("B"),
                fst: v_box("a"),
                snd: v_box("bb"),
            },
            sig_ab(In, "A", "B"),
            In,
        ),
        j(
            "sigma-first",
            Ast::Fst {
                layer: In,
                x: name("_"),
                fst_ty: v_box("A"),
                snd_ty: v_box("B"),
                pair: v_box("p"),
            },
            v("A"),
            In,
        ),
        j(
            "sigma-second",
            Ast::Snd {
                layer: In,
                x: name("_"),
                fst_ty: v_box("A"),
                snd_ty: v_box("B"),
                pair: v_box("p"),
            },
            v("B"),
            In,
        ),
        j(
            "sigma-swap",
            Ast::Pair {
                layer: In,
                x: name("_"),
                fst_ty: v_box("B"),
                snd_ty: v_box("A"),
                fst: b(Ast::Snd {
                    layer: In,
                    x: name("_"),
                    fst_ty: v_box("A"),
                    snd_ty: v_box("B"),
                    pair: v_box("p"),
                }),
                snd: b(Ast::Fst {
                    layer: In,
                    x: name("_"),
                    fst_ty: v_box("A"),
                    snd_ty: v_box("B"),
                    pair: v_box("p"),
                }),
            },
            sig_ab(In, "B", "A"),
            In,
        ),
        j(
            "pi-identity",
            Ast::Lam {
                layer: In,
                x: name("y"),
                dom: v_box("A"),
                cod: v_box("A"),
                body: v_box("y"),
            },
            Ast::Pi(In, name("_"), v_box("A"), v_box("A")),
            In,
        ),
        j(
            "pi-application",
            Ast::App {
                layer: In,
                x: name("_"),
                dom: v_box("A"),
                cod: v_box("B"),
                fun: v_box("f"),
                arg: v_box("a"),
            },
            v("B"),
            In,
        ),
        j(
            "eq-reflexivity",
            Ast::Refl {
                layer: In,
                ty: v_box("A"),
                val: v_box("a"),
            },
            Ast::Eq(In, v_box("A"), v_box("a"), v_box("a")),
            In,
        ),
        j(
            "nat-successor",
            Ast::Succ(In, b(Ast::Zero(In))),
            Ast::Nat(In),
            In,
        ),
        j(
            "sum-injection",
            Ast::Inr {
                layer: In,
                left: v_box("A"),
                right: v_box("B"),
                val: v_box("bb"),
            },
            Ast::Sum(In, v_box("A"), v_box("B")),
            In,
        ),
        j("unit", Ast::Tt(In), Ast::True(In), In),
        Judgment {
            name: "lift",
            term: v("a"),
            ty: Ast::Lift(In, l0.clone(), v_box("A")),
            ty_level: l1.clone(),
            term_level: l0.clone(),
            ..j("", v("a"), v("A"), In)
        },
        Judgment {
            name: "universe",
            term: Ast::Sig(In, name("_"), b(Ast::Nat(In)), v_box("A")),
            ty: Ast::Univ(In, l0.clone()),
            ty_level: l1.clone(),
            term_level: l0.clone(),
            ..j("", v("a"), v("A"), In)
        },
        j(
            "coercion-up",
            Ast::Up(v_box("A"), v_box("a")),
            Ast::Coerce(v_box("A")),
            Ex,
        ),
        j(
            "coercion-down",
            Ast::Down(v_box("A"), v_box("ca")),
            v("A"),
            In
        ),
        j(
            "external-pair",
            Ast::Pair {
                layer: Ex,
                x: name("_"),
                fst_ty: v_box("X"),
                snd_ty: v_box("Y"),
                fst: v_box("xa"),
                snd: v_box("xb"),
            },
            sig_ab(Ex, "X", "Y"),
            Ex,
        ),
        j(
            "external-reflexivity",
            Ast::Refl {
                layer: Ex,
                ty: v_box("X"),
                val: v_box("xa"),
            },
            Ast::Eq(Ex, v_box("X"), v_box("xa"), v_box("xa")),
            Ex,
        ),
        j(
            "external-lambda",
            Ast::Lam {
                layer: Ex,
                x: name("y"),
                dom: v_box("X"),
                cod: v_box("Y"),
                body: v_box("xb"),
            },
            Ast::Pi(Ex, name("_"), v_box("X"), v_box("Y")),
            Ex,
        ),
        Judgment {
            name: "external-universe",
            term: Ast::Coerce(b(Ast::Nat(In))),
            ty: Ast::Univ(Ex, l0.clone()),
            ty_level: l1,
            term_level: l0.clone(),
            ..j("", v("a"), v("A"), Ex)
        },
    ]
}
