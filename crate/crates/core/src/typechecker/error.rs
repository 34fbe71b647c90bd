use alloc::string::String;
use core::fmt;

use crate::parser::SourceSpan;
use crate::rewriter::FuelExhausted;
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Mismatch,
    NotAFunction,
    Unbound,
    SortError,
    RuleIllTyped,
    Fuel,
    Redeclaration,
    NotDefinable,
    CannotInfer,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Mismatch => "mismatch",
            ErrorKind::NotAFunction => "not-a-function",
            ErrorKind::Unbound => "unbound",
            ErrorKind::SortError => "sort-error",
            ErrorKind::RuleIllTyped => "rule-ill-typed",
            ErrorKind::Fuel => "fuel",
            ErrorKind::Redeclaration => "redeclaration",
            ErrorKind::NotDefinable => "not-definable",
            ErrorKind::CannotInfer => "cannot-infer",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub kind: ErrorKind,
    pub message: String,
    pub expected: Option<Term>,
    pub actual: Option<Term>,
    pub span: Option<SourceSpan>,
    /// Index of the offending declaration in the checked list.
    pub decl_index: Option<usize>,
}

impl TypeError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        TypeError {
            kind,
            message: message.into(),
            expected: None,
            actual: None,
            span: None,
            decl_index: None,
        }
    }

    pub fn mismatch(expected: &Term, actual: &Term) -> Self {
        TypeError {
            expected: Some(expected.clone()),
            actual: Some(actual.clone()),
            ..TypeError::new(ErrorKind::Mismatch, "types are not convertible")
        }
    }

    pub fn with_terms(mut self, expected: Option<&Term>, actual: Option<&Term>) -> Self {
        self.expected = expected.cloned();
        self.actual = actual.cloned();
        self
    }

    pub fn at(mut self, index: usize, span: Option<&SourceSpan>) -> Self {
        self.decl_index.get_or_insert(index);
        if self.span.is_none() {
            self.span = span.cloned();
        }
        self
    }

    pub fn location(&self) -> String {
        match (&self.span, self.decl_index) {
            (Some(s), _) => alloc::format!("{s}"),
            (None, Some(i)) => alloc::format!("<input>:declaration {}", i + 1),
            (None, None) => "<input>".into(),
        }
    }
}

impl From<FuelExhausted> for TypeError {
    fn from(_: FuelExhausted) -> Self {
        TypeError::new(ErrorKind::Fuel, "fuel exhausted during conversion")
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}]", self.location(), self.kind)?;
        match (&self.expected, &self.actual) {
            (Some(e), Some(a)) => write!(f, " expected {e} got {a}"),
            (Some(e), None) => write!(f, " expected {e}: {}", self.message),
            (None, Some(a)) => write!(f, " got {a}: {}", self.message),
            (None, None) => write!(f, " {}", self.message),
        }
    }
}

impl core::error::Error for TypeError {}
