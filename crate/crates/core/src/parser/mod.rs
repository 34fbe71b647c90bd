//! The `.dk`-style theory format: declarations, definitions, rewrite rules.

mod lexer;
mod printer;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::rewriter::{RewriteRule, RuleError};
use crate::term::{name, Name, Term};
use lexer::{lex, Tok, Token};

pub use printer::{pretty_print, print_declaration, print_declarations};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Option<Name>,
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize, line: u32, col: u32) -> Self {
        SourceSpan {
            file: None,
            start,
            end,
            line,
            col,
        }
    }

    pub fn with_file(mut self, file: Option<&Name>) -> Self {
        self.file = file.cloned();
        self
    }

    fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            end: other.end.max(self.start),
            ..self.clone()
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let file = self.file.as_deref().unwrap_or("<input>");
        write!(f, "{file}:{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    fn new(message: String, span: SourceSpan) -> Self {
        ParseError { message, span }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [parse] {}", self.span, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Declaration {
    /// `c : T.`
    StaticConst { name: Name, ty: Term },
    /// `def c : T.`
    DefinableConst { name: Name, ty: Term },
    /// `def c (x : A) : T := t.`, parameters folded into `ty` and `body`.
    Definition {
        name: Name,
        ty: Option<Term>,
        body: Term,
    },
    /// `[x, y] lhs --> rhs.` Pattern variables occur as `FVar`s.
    Rule {
        vars: Vec<(Name, Option<u32>)>,
        lhs: Term,
        rhs: Term,
    },
}

impl Declaration {
    pub fn name(&self) -> Option<&Name> {
        match self {
            Declaration::StaticConst { name, .. }
            | Declaration::DefinableConst { name, .. }
            | Declaration::Definition { name, .. } => Some(name),
            Declaration::Rule { .. } => None,
        }
    }

    pub fn rule_head(&self) -> Option<&Name> {
        match self {
            Declaration::Rule { lhs, .. } => lhs.head_const(),
            _ => None,
        }
    }

    pub fn var_names(&self) -> Vec<Name> {
        match self {
            Declaration::Rule { vars, .. } => vars.iter().map(|(v, _)| v.clone()).collect(),
            _ => Vec::new(),
        }
    }
}

pub fn parse_file(text: &str) -> Result<Vec<Declaration>, ParseError> {
    Ok(parse_file_located(text, None)?
        .into_iter()
        .map(|(d, _)| d)
        .collect())
}

/// Parses a file, keeping the source span of each declaration.
pub fn parse_file_located(
    text: &str,
    file: Option<&str>,
) -> Result<Vec<(Declaration, SourceSpan)>, ParseError> {
    let file = file.map(name);
    let tag = |e: ParseError| ParseError {
        span: e.span.clone().with_file(file.as_ref()),
        ..e
    };
    let toks = lex(text).map_err(tag)?;
    let mut p = Parser::new(&toks);
    let mut out = Vec::new();
    while p.peek() != &Tok::Eof {
        let start = p.span();
        let decls = p.declaration().map_err(tag)?;
        let span = start.to(p.prev_span()).with_file(file.as_ref());
        for d in decls {
            p.note(&d)
                .map_err(|m| tag(ParseError::new(m, span.clone())))?;
            out.push((d, span.clone()));
        }
    }
    Ok(out)
}

/// Parses one term. Every unbound identifier becomes a constant.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_in(text, &[])
}

/// Parses one term, reading the listed identifiers as free variables.
pub fn parse_term_in(text: &str, free: &[&str]) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks);
    p.free = free.iter().map(|s| name(s)).collect();
    let t = p.term()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    /// Binder names, innermost last.
    scope: Vec<Name>,
    /// Identifiers read as `FVar` (rule pattern variables).
    free: BTreeSet<Name>,
    statics: BTreeSet<Name>,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token]) -> Self {
        Parser {
            toks,
            pos: 0,
            scope: Vec::new(),
            free: BTreeSet::new(),
            statics: BTreeSet::new(),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        let i = (self.pos + 1).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span.clone()
    }

    fn prev_span(&self) -> &SourceSpan {
        &self.toks[self.pos.saturating_sub(1)].span
    }

    fn advance(&mut self) -> &Tok {
        let t = &self.toks[self.pos].tok;
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, what: &str) -> Result<T, ParseError> {
        Err(ParseError::new(
            alloc::format!("expected {what}, found {}", self.peek().describe()),
            self.span(),
        ))
    }

    fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.peek() == t {
            self.advance();
            Ok(())
        } else {
            self.error(&t.describe())
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s != "def" && s != "Type" => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => self.error("an identifier"),
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    /// Records per-file facts used for early rule validation.
    fn note(&mut self, d: &Declaration) -> Result<(), String> {
        match d {
            Declaration::StaticConst { name, .. } => {
                self.statics.insert(name.clone());
            }
            Declaration::Rule { lhs, .. } => {
                if let Some(h) = lhs.head_const() {
                    if self.statics.contains(h) {
                        return Err(alloc::format!(
                            "rule head `{h}` is a static constant, not a `def`"
                        ));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn declaration(&mut self) -> Result<Vec<Declaration>, ParseError> {
        if self.peek() == &Tok::LBrack {
            let mut rules = Vec::new();
            while self.peek() == &Tok::LBrack {
                rules.push(self.rule()?);
            }
            self.expect(&Tok::Dot)?;
            return Ok(rules);
        }
        if self.is_kw("def") {
            self.advance();
            let d = self.definition()?;
            self.expect(&Tok::Dot)?;
            return Ok(alloc::vec![d]);
        }
        let n = self.ident()?;
        self.expect(&Tok::Colon)?;
        let ty = self.term()?;
        self.expect(&Tok::Dot)?;
        Ok(alloc::vec![Declaration::StaticConst { name: name(&n), ty }])
    }

    fn definition(&mut self) -> Result<Declaration, ParseError> {
        let n = name(&self.ident()?);
        let mut params: Vec<(String, Term)> = Vec::new();
        while self.peek() == &Tok::LParen {
            self.advance();
            let x = self.ident()?;
            self.expect(&Tok::Colon)?;
            let a = self.term()?;
            self.expect(&Tok::RParen)?;
            self.scope.push(name(&x));
            params.push((x, a));
        }
        let ty = if self.peek() == &Tok::Colon {
            self.advance();
            Some(self.term()?)
        } else {
            None
        };
        let body = if self.peek() == &Tok::Assign {
            self.advance();
            Some(self.term()?)
        } else {
            None
        };
        self.scope.truncate(self.scope.len() - params.len());
        // Parameters were parsed with de Bruijn scoping already; wrap them.
        let wrap_pi = |t: Term| {
            params.iter().rev().fold(t, |acc, (x, a)| {
                Term::Pi(name(x), Arc::new(a.clone()), Arc::new(acc))
            })
        };
        let wrap_lam = |t: Term| {
            params.iter().rev().fold(t, |acc, (x, a)| {
                Term::Lam(name(x), Some(Arc::new(a.clone())), Arc::new(acc))
            })
        };
        match (ty, body) {
            (Some(ty), None) if params.is_empty() => {
                Ok(Declaration::DefinableConst { name: n, ty })
            }
            (Some(_), None) => self.error("`:=` after a parameterised `def`"),
            (ty, Some(body)) => Ok(Declaration::Definition {
                name: n,
                ty: ty.map(wrap_pi),
                body: wrap_lam(body),
            }),
            (None, None) => self.error("`:` or `:=`"),
        }
    }

    fn rule(&mut self) -> Result<Declaration, ParseError> {
        let start = self.span();
        self.expect(&Tok::LBrack)?;
        let mut vars = Vec::new();
        if self.peek() != &Tok::RBrack {
            loop {
                let v = name(&self.ident()?);
                let arity = if self.peek() == &Tok::Colon {
                    self.advance();
                    let digits = self.ident()?;
                    match digits.parse::<u32>() {
                        Ok(k) => Some(k),
                        Err(_) => return self.error("an arity"),
                    }
                } else {
                    None
                };
                vars.push((v, arity));
                if self.peek() == &Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(&Tok::RBrack)?;
        self.free = vars.iter().map(|(v, _)| v.clone()).collect();
        let lhs = self.term()?;
        self.expect(&Tok::LongArrow)?;
        let rhs = self.term()?;
        self.free.clear();
        let names: Vec<Name> = vars.iter().map(|(v, _)| v.clone()).collect();
        let span = start.to(self.prev_span());
        if let Err(e) = RewriteRule::new(name("_"), &names, &lhs, &rhs) {
            let msg = match e {
                RuleError::HeadNotConstant => {
                    "rule left-hand side is not headed by a constant".into()
                }
                RuleError::NotAPattern(t) => alloc::format!("`{t}` is not a first-order pattern"),
                RuleError::UnusedVar(v) => {
                    alloc::format!("pattern variable `{v}` does not occur in the left-hand side")
                }
                RuleError::UnboundRhsVar(v) => {
                    alloc::format!(
                        "variable `{v}` of the right-hand side is not a pattern variable"
                    )
                }
            };
            return Err(ParseError::new(msg, span));
        }
        Ok(Declaration::Rule { vars, lhs, rhs })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if let Tok::Ident(x) = self.peek() {
            if x != "Type" && x != "def" {
                match self.peek2() {
                    Tok::Colon => {
                        let x = self.ident()?;
                        self.advance();
                        let dom = self.app()?;
                        return match self.peek() {
                            Tok::Arrow => {
                                self.advance();
                                let body = self.under(&x)?;
                                Ok(Term::Pi(name(&x), Arc::new(dom), Arc::new(body)))
                            }
                            Tok::FatArrow => {
                                self.advance();
                                let body = self.under(&x)?;
                                Ok(Term::Lam(name(&x), Some(Arc::new(dom)), Arc::new(body)))
                            }
                            _ => self.error("`->` or `=>` after a binder"),
                        };
                    }
                    Tok::FatArrow => {
                        let x = self.ident()?;
                        self.advance();
                        let body = self.under(&x)?;
                        return Ok(Term::Lam(name(&x), None, Arc::new(body)));
                    }
                    _ => {}
                }
            }
        }
        let a = self.app()?;
        if self.peek() == &Tok::Arrow {
            self.advance();
            let b = self.under("_")?;
            return Ok(Term::Pi(name("_"), Arc::new(a), Arc::new(b)));
        }
        Ok(a)
    }

    fn under(&mut self, x: &str) -> Result<Term, ParseError> {
        self.scope.push(name(x));
        let r = self.term();
        self.scope.pop();
        r
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while matches!(self.peek(), Tok::Ident(s) if s != "def") || self.peek() == &Tok::LParen {
            let a = self.atom()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let t = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) if s == "Type" => {
                self.advance();
                Ok(Term::typ())
            }
            Tok::Ident(s) if s != "def" => {
                self.advance();
                Ok(self.resolve(&s))
            }
            _ => self.error("a term"),
        }
    }

    fn resolve(&self, x: &str) -> Term {
        // `_` is only a binder name; it never refers to anything.
        if x != "_" {
            if let Some(k) = self.scope.iter().rev().position(|y| &**y == x) {
                return Term::BVar(k as u32);
            }
        }
        let n = name(x);
        if self.free.contains(&n) {
            Term::FVar(n)
        } else {
            Term::Const(n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_declaration() {
        let d = parse_file("T : Lev -> Type.").unwrap();
        assert_eq!(
            d,
            [Declaration::StaticConst {
                name: name("T"),
                ty: Term::arrow(Term::cst("Lev"), Term::typ())
            }]
        );
    }

    #[test]
    fn rule_with_five_variables() {
        let d = parse_file("[i,A,B,a,b] p1 i A B (pair i A B a b) --> a.").unwrap();
        let Declaration::Rule { vars, lhs, rhs } = &d[0] else {
            panic!("expected a rule")
        };
        assert_eq!(vars.len(), 5);
        assert_eq!(lhs.head_const().map(|h| &**h), Some("p1"));
        assert_eq!(rhs, &Term::var("a"));
    }

    #[test]
    fn empty_input() {
        assert!(parse_file("").unwrap().is_empty());
        assert!(parse_file("  (; only a comment ;)  ").unwrap().is_empty());
    }

    #[test]
    fn annotated_lambda() {
        let t = parse_term("x : A => x").unwrap();
        assert!(t.same_annotated(&Term::lam("x", Some(Term::cst("A")), Term::BVar(0))));
    }

    #[test]
    fn application_is_left_associative() {
        let t = parse_term("Imax (sym i) j").unwrap();
        let expected = Term::app(
            Term::app(
                Term::cst("Imax"),
                Term::app(Term::cst("sym"), Term::cst("i")),
            ),
            Term::cst("j"),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn dependent_product() {
        let t = parse_term("i : Lev -> T (lsuc i)").unwrap();
        let expected = Term::pi(
            "i",
            Term::cst("Lev"),
            Term::app(Term::cst("T"), Term::app(Term::cst("lsuc"), Term::BVar(0))),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn arrows_are_right_associative() {
        let t = parse_term("A -> B -> C").unwrap();
        let expected = Term::arrow(Term::cst("A"), Term::arrow(Term::cst("B"), Term::cst("C")));
        assert_eq!(t, expected);
        let l = parse_term("x => y => x").unwrap();
        assert_eq!(l, Term::lam("x", None, Term::lam("y", None, Term::BVar(1))));
    }

    #[test]
    fn binder_domain_stops_at_arrow() {
        // `x : A -> B -> C` is `Pi x:A. (B -> C)`
        let t = parse_term("x : A -> B x -> C").unwrap();
        let Term::Pi(_, dom, cod) = &t else { panic!() };
        assert_eq!(**dom, Term::cst("A"));
        assert!(matches!(&**cod, Term::Pi(..)));
    }

    #[test]
    fn grouped_rules_and_arities() {
        let d = parse_file("def f : A -> A. [i] f i --> i  [x:0] f (f x) --> x.").unwrap();
        assert_eq!(d.len(), 3);
        let Declaration::Rule { vars, .. } = &d[2] else {
            panic!()
        };
        assert_eq!(vars[0].1, Some(0));
    }

    #[test]
    fn definitions_with_parameters() {
        let d = parse_file("def K (A : Type) (a : A) : A := a.").unwrap();
        let Declaration::Definition { ty, body, .. } = &d[0] else {
            panic!()
        };
        let ty = ty.clone().unwrap();
        assert_eq!(ty, parse_term("A : Type -> a : A -> A").unwrap());
        assert_eq!(body, &parse_term("A : Type => a : A => a").unwrap());
        let d = parse_file("def tSig := (i : Lev => i).").unwrap();
        assert!(matches!(&d[0], Declaration::Definition { ty: None, .. }));
    }

    #[test]
    fn rule_errors() {
        assert!(parse_file("[x, y] f x --> x.").is_err());
        assert!(parse_file("[x] f x --> y.").unwrap().len() == 1);
        let e = parse_file("[x] f x --> g y x.").unwrap();
        // `y` is a constant here, which is fine
        assert_eq!(e.len(), 1);
        let err = parse_file("c : Type.\n[] c --> c.").unwrap_err();
        assert!(err.message.contains("static"));
        assert_eq!(err.span.line, 2);
        assert!(parse_file("[x] x --> x.").is_err());
        assert!(parse_file("[x] f (y => x) --> x.").is_err());
    }

    #[test]
    fn syntax_error_location() {
        let err = parse_file_located("A : Type.\nB : -> .", Some("f.dk")).unwrap_err();
        assert_eq!(err.span.line, 2);
        assert!(alloc::format!("{err}").starts_with("f.dk:2:5: [parse]"));
    }

    #[test]
    fn pattern_variables_are_free() {
        let d = parse_file("[i] eps (lsuc i) (t i) --> T i.").unwrap();
        let Declaration::Rule { lhs, .. } = &d[0] else {
            panic!()
        };
        assert!(lhs.free_vars().contains(&name("i")));
        let t = parse_term_in("Imin i j", &["i"]).unwrap();
        assert_eq!(t.free_vars().len(), 1);
    }
}
