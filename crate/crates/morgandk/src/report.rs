//! Output records. Text mode prints them for people; json-lines prints one
//! JSON object per record. Diagnostics and trace steps go to standard
//! error, everything else to standard output.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use morgandk_core::oracle::Witness;
use morgandk_core::parser::ParseError;
use morgandk_core::rewriter::{display_arg_path, CriticalPair, Instance, Step};
use morgandk_core::typechecker::TypeError;
use morgandk_core::Term;
use serde::Serialize;

use crate::cli::Format;
use crate::trace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub subst: BTreeMap<String, String>,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Record {
    Diagnostic {
        category: String,
        location: String,
        message: String,
    },
    Checked {
        files: usize,
        declarations: usize,
        constants: usize,
        rules: usize,
    },
    Step {
        index: usize,
        position: String,
        step: String,
    },
    NormalForm {
        term: String,
    },
    Verdict {
        holds: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<BTreeMap<String, String>>,
    },
    CriticalPair {
        outer: String,
        inner: String,
        position: String,
        overlap: String,
        left: String,
        right: String,
        left_nf: String,
        right_nf: String,
        instances: Vec<InstanceRecord>,
    },
    Summary {
        pairs: usize,
        non_joinable: usize,
    },
}

impl Record {
    pub fn diagnostic(
        category: &str,
        location: impl fmt::Display,
        message: impl fmt::Display,
    ) -> Record {
        Record::Diagnostic {
            category: category.into(),
            location: location.to_string(),
            message: message.to_string(),
        }
    }

    pub fn type_error(e: &TypeError) -> Record {
        let location = e.location();
        let full = e.to_string();
        let prefix = format!("{location}: [{}] ", e.kind);
        let message = full.strip_prefix(&prefix).unwrap_or(&full);
        Record::diagnostic(e.kind.as_str(), location, message)
    }

    pub fn parse_error(e: &ParseError) -> Record {
        Record::diagnostic("parse", &e.span, &e.message)
    }

    pub fn step(index: usize, s: &Step) -> Record {
        Record::Step {
            index,
            position: trace::position(s),
            step: trace::step_name(s),
        }
    }

    pub fn verdict(w: Option<&Witness>) -> Record {
        let witness = w.map(|w| match w {
            Witness::Interval(rho) => rho
                .iter()
                .map(|(x, v)| (x.to_string(), v.to_string()))
                .collect(),
            Witness::Face(s) => s
                .interval
                .iter()
                .map(|(x, v)| (x.to_string(), v.to_string()))
                .chain(s.faces.iter().map(|(x, v)| (x.to_string(), v.to_string())))
                .collect(),
        });
        Record::Verdict {
            holds: witness.is_none(),
            witness,
        }
    }

    pub fn critical_pair(cp: &CriticalPair, nfs: &(Term, Term), instances: &[Instance]) -> Record {
        Record::CriticalPair {
            outer: cp.outer.to_string(),
            inner: cp.inner.to_string(),
            position: display_arg_path(&cp.position),
            overlap: cp.overlap.to_string(),
            left: cp.left.to_string(),
            right: cp.right.to_string(),
            left_nf: nfs.0.to_string(),
            right_nf: nfs.1.to_string(),
            instances: instances
                .iter()
                .map(|i| InstanceRecord {
                    subst: i
                        .subst
                        .iter()
                        .map(|(x, t)| (x.to_string(), t.to_string()))
                        .collect(),
                    left: i.left.to_string(),
                    right: i.right.to_string(),
                })
                .collect(),
        }
    }

    fn to_stderr(&self) -> bool {
        matches!(self, Record::Diagnostic { .. } | Record::Step { .. })
    }
}

fn assignment(m: &BTreeMap<String, String>) -> String {
    m.iter()
        .map(|(x, v)| format!("{x} = {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Record::Diagnostic { category, location, message } => {
                write!(f, "{location}: [{category}] {message}")
            }
            Record::Checked { files, declarations, constants, rules } => write!(
                f,
                "ok: {declarations} declarations from {files} files ({constants} constants, {rules} rules)"
            ),
            Record::Step { index, position, step } => write!(f, "step {index}: {position} {step}"),
            Record::NormalForm { term } => f.write_str(term),
            Record::Verdict { witness: None, .. } => f.write_str("holds"),
            Record::Verdict { witness: Some(w), .. } => write!(f, "fails: {}", assignment(w)),
            Record::CriticalPair {
                outer,
                inner,
                position,
                overlap,
                left_nf,
                right_nf,
                instances,
                ..
            } => {
                writeln!(f, "non-joinable: {outer} / {inner} at {position}")?;
                writeln!(f, "  overlap: {overlap}")?;
                writeln!(f, "  left:    {left_nf}")?;
                write!(f, "  right:   {right_nf}")?;
                for i in instances {
                    write!(f, "\n  instance {}: ({}, {})", assignment(&i.subst).replace(" = ", " := "), i.left, i.right)?;
                }
                Ok(())
            }
            Record::Summary { pairs, non_joinable } => {
                write!(f, "{pairs} critical pairs, {non_joinable} not joinable")
            }
        }
    }
}

pub struct Reporter<'w> {
    format: Format,
    out: &'w mut dyn Write,
    err: &'w mut dyn Write,
}

impl<'w> Reporter<'w> {
    pub fn new(format: Format, out: &'w mut dyn Write, err: &'w mut dyn Write) -> Self {
        Reporter { format, out, err }
    }

    pub fn emit(&mut self, r: &Record) -> io::Result<()> {
        let w: &mut dyn Write = if r.to_stderr() {
            &mut *self.err
        } else {
            &mut *self.out
        };
        match self.format {
            Format::Text => writeln!(w, "{r}"),
            Format::JsonLines => {
                serde_json::to_writer(&mut *w, r).map_err(io::Error::other)?;
                writeln!(w)
            }
        }
    }
}
