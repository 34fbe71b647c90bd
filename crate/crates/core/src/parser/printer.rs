use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::Declaration;
use crate::term::{Name, Sort, Term};

/// Renders a term in the surface syntax. Binder names are primed as needed
/// so that the output re-parses to an alpha-equal term.
pub fn pretty_print(t: &Term) -> String {
    let mut p = Printer::new(t, &[]);
    p.term(t, Prec::Term);
    p.out
}

pub fn print_declaration(d: &Declaration) -> String {
    match d {
        Declaration::StaticConst { name, ty } => alloc::format!("{name} : {}.", pretty_print(ty)),
        Declaration::DefinableConst { name, ty } => {
            alloc::format!("def {name} : {}.", pretty_print(ty))
        }
        Declaration::Definition { name, ty, body } => match ty {
            Some(ty) => alloc::format!(
                "def {name} : {} := {}.",
                pretty_print(ty),
                pretty_print(body)
            ),
            None => alloc::format!("def {name} := {}.", pretty_print(body)),
        },
        Declaration::Rule { vars, lhs, rhs } => {
            let mut s = String::from("[");
            for (k, (v, arity)) in vars.iter().enumerate() {
                if k > 0 {
                    s.push_str(", ");
                }
                s.push_str(v);
                if let Some(a) = arity {
                    let _ = write!(s, " : {a}");
                }
            }
            s.push_str("] ");
            let reserved: Vec<&Name> = vars.iter().map(|(v, _)| v).collect();
            let mut p = Printer::new(lhs, &reserved);
            p.term(lhs, Prec::Term);
            s.push_str(&p.out);
            s.push_str(" --> ");
            let mut p = Printer::new(rhs, &reserved);
            p.term(rhs, Prec::Term);
            s.push_str(&p.out);
            s.push('.');
            s
        }
    }
}

pub fn print_declarations(ds: &[Declaration]) -> String {
    let mut s = String::new();
    for d in ds {
        s.push_str(&print_declaration(d));
        s.push('\n');
    }
    s
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Term,
    App,
    Atom,
}

struct Printer {
    out: String,
    /// Names of enclosing binders, innermost last.
    scope: Vec<String>,
    /// Names that binders must never take: constants and free variables.
    taken: BTreeSet<String>,
}

impl Printer {
    fn new(t: &Term, reserved: &[&Name]) -> Self {
        let mut taken: BTreeSet<String> = t
            .constants()
            .into_iter()
            .chain(t.free_vars())
            .map(|n| n.to_string())
            .collect();
        taken.extend(reserved.iter().map(|n| n.to_string()));
        taken.insert("Type".into());
        taken.insert("def".into());
        Printer {
            out: String::new(),
            scope: Vec::new(),
            taken,
        }
    }

    fn binder(&self, hint: &str, used: bool) -> String {
        let base = hint.split('#').next().unwrap_or("");
        if !used && (base == "_" || base.is_empty()) {
            return "_".into();
        }
        let mut x: String = if base.is_empty() || base == "_" {
            "x".into()
        } else {
            base.into()
        };
        while self.taken.contains(&x) || self.scope.contains(&x) {
            x.push('\'');
        }
        x
    }

    fn term(&mut self, t: &Term, ctx: Prec) {
        match t {
            Term::Sort(Sort::Type) => self.out.push_str("Type"),
            Term::Sort(Sort::Kind) => self.out.push_str("Kind"),
            Term::Const(c) => self.out.push_str(c),
            Term::FVar(x) => self.out.push_str(x),
            Term::BVar(k) => match self.scope.len().checked_sub(*k as usize + 1) {
                Some(i) => {
                    let n = self.scope[i].clone();
                    self.out.push_str(&n);
                }
                None => {
                    let _ = write!(self.out, "#{k}");
                }
            },
            Term::App(f, a) => {
                let paren = ctx > Prec::App;
                if paren {
                    self.out.push('(');
                }
                self.term(f, Prec::App);
                self.out.push(' ');
                self.term(a, Prec::Atom);
                if paren {
                    self.out.push(')');
                }
            }
            Term::Lam(x, dom, body) => {
                let paren = ctx > Prec::Term;
                if paren {
                    self.out.push('(');
                }
                let x = self.binder(x, body.mentions_bvar(0));
                self.out.push_str(&x);
                if let Some(d) = dom {
                    self.out.push_str(" : ");
                    self.term(d, Prec::App);
                }
                self.out.push_str(" => ");
                self.scope.push(x);
                self.term(body, Prec::Term);
                self.scope.pop();
                if paren {
                    self.out.push(')');
                }
            }
            Term::Pi(x, dom, cod) => {
                let paren = ctx > Prec::Term;
                if paren {
                    self.out.push('(');
                }
                let used = cod.mentions_bvar(0);
                let x = self.binder(x, used);
                if used {
                    self.out.push_str(&x);
                    self.out.push_str(" : ");
                }
                self.term(dom, Prec::App);
                self.out.push_str(" -> ");
                self.scope.push(x);
                self.term(cod, Prec::Term);
                self.scope.pop();
                if paren {
                    self.out.push(')');
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_file, parse_term};
    use super::*;

    fn roundtrip(s: &str) -> String {
        let t = parse_term(s).unwrap();
        let p = pretty_print(&t);
        let back = parse_term(&p).unwrap();
        assert!(back.same_annotated(&t), "{s} printed as {p}");
        p
    }

    #[test]
    fn simple_forms() {
        assert_eq!(roundtrip("x => x"), "x => x");
        assert_eq!(pretty_print(&Term::typ()), "Type");
        assert_eq!(roundtrip("A -> B -> C"), "A -> B -> C");
        assert_eq!(roundtrip("(A -> B) -> C"), "(A -> B) -> C");
        assert_eq!(roundtrip("i : Lev -> T (lsuc i)"), "i : Lev -> T (lsuc i)");
        assert_eq!(roundtrip("f (g x) (y => y)"), "f (g x) (y => y)");
        assert_eq!(roundtrip("_ => c"), "_ => c");
    }

    #[test]
    fn sig_type_roundtrips() {
        roundtrip("i : Lev -> A : T i -> (eps i A -> T i) -> T i");
        roundtrip("i : Lev => A : T i => B : (eps i A -> T i) => eps i (Sig i A B)");
    }

    #[test]
    fn binders_avoid_constants() {
        // a binder named like a constant it encloses must be renamed
        let t = Term::lam("c", None, Term::app(Term::cst("c"), Term::BVar(0)));
        let p = pretty_print(&t);
        assert_eq!(p, "c' => c c'");
        assert_eq!(parse_term(&p).unwrap(), t);
    }

    #[test]
    fn shadowing_is_resolved() {
        let t = Term::lam("x", None, Term::lam("x", None, Term::BVar(1)));
        let p = pretty_print(&t);
        assert_eq!(parse_term(&p).unwrap(), t);
    }

    #[test]
    fn declarations() {
        let src =
            "def K (A : Type) (a : A) : A := a.\n[x] f (g x) --> x.\ndef f : A -> A.\nc : Type.";
        let ds = parse_file(src).unwrap();
        let printed = print_declarations(&ds);
        assert_eq!(parse_file(&printed).unwrap(), ds);
    }
}
