use std::io::{self, Write};
use std::path::PathBuf;

use morgandk_core::corpus::{build, cubical_algebra_rules, TheoryConfig, EXAMPLES};
use morgandk_core::oracle::{equation_sound_in, Sort, Translation, Witness};
use morgandk_core::parser::{parse_term, Declaration, ParseError, SourceSpan};
use morgandk_core::rewriter::{
    closed_instances, critical_pairs, joinable, normalize, normalize_traced, RuleSet,
};
use morgandk_core::typechecker::{check_signature_located, ErrorKind, Signature};
use morgandk_core::Verdict;

use crate::cli::{CliConfig, Command, OracleKind};
use crate::io::{load, InputError};
use crate::report::{Record, Reporter};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    /// Type error, failed oracle query or non-joinable critical pair.
    Fails = 1,
    /// Missing file, parse error or a term outside the oracle's algebra.
    Input = 2,
    Fuel = 3,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

type Outcome<T> = Result<T, Exit>;

struct Run<'a, 'w> {
    cfg: &'a CliConfig,
    rep: Reporter<'w>,
    io_error: Option<io::Error>,
}

impl Run<'_, '_> {
    fn emit(&mut self, r: Record) {
        if let Err(e) = self.rep.emit(&r) {
            self.io_error.get_or_insert(e);
        }
    }

    fn input_error(&mut self, e: InputError) -> Exit {
        let r = match &e {
            InputError::Parse(p) => Record::parse_error(p),
            InputError::Missing(p) | InputError::Read(p, _) => Record::diagnostic(
                "input",
                p.display(),
                e.to_string()
                    .trim_start_matches(&format!("{}: ", p.display())),
            ),
        };
        self.emit(r);
        Exit::Input
    }

    fn load(&mut self, paths: &[PathBuf]) -> Outcome<Vec<(Declaration, SourceSpan)>> {
        load(paths).map_err(|e| self.input_error(e))
    }

    /// The bundled files selected by the flags, checked for consistency.
    fn corpus(&mut self, examples: bool) -> Outcome<(usize, Vec<(Declaration, SourceSpan)>)> {
        let theory: &TheoryConfig = &self.cfg.theory;
        if let Err(e) = build(theory) {
            self.emit(Record::diagnostic("config", "<corpus>", e));
            return Err(Exit::Fails);
        }
        let files: Vec<_> = theory
            .files()
            .into_iter()
            .filter(|f| examples || f.path != EXAMPLES.path)
            .collect();
        Ok((
            files.len(),
            files.iter().flat_map(|f| f.located()).collect(),
        ))
    }

    fn check(&mut self, ds: &[(Declaration, SourceSpan)]) -> Outcome<Signature> {
        check_signature_located(ds, self.cfg.fuel).map_err(|e| {
            self.emit(Record::type_error(&e));
            match e.kind {
                ErrorKind::Fuel => Exit::Fuel,
                _ => Exit::Fails,
            }
        })
    }

    fn fuel_out(&mut self, what: &str) -> Exit {
        self.emit(Record::diagnostic(
            "fuel",
            "<input>",
            format!("fuel exhausted after {} steps while {what}", self.cfg.fuel),
        ));
        Exit::Fuel
    }

    fn cmd_check(&mut self, paths: &[PathBuf]) -> Outcome<Exit> {
        let (files, ds) = if paths.is_empty() {
            self.corpus(true)?
        } else {
            (paths.len(), self.load(paths)?)
        };
        let sig = self.check(&ds)?;
        self.emit(Record::Checked {
            files,
            declarations: sig.declarations(),
            constants: sig.len(),
            rules: sig.rules().len(),
        });
        Ok(Exit::Ok)
    }

    fn cmd_reduce(&mut self, term: &str, inputs: &[PathBuf], no_prelude: bool) -> Outcome<Exit> {
        let mut ds = if no_prelude {
            Vec::new()
        } else {
            self.corpus(false)?.1
        };
        ds.extend(self.load(inputs)?);
        let sig = self.check(&ds)?;
        let t = parse_term(term).map_err(|e| {
            let span = e.span.clone().with_file(Some(&"<term>".into()));
            self.emit(Record::parse_error(&ParseError { span, ..e }));
            Exit::Input
        })?;
        let nf = if self.cfg.trace {
            let (nf, steps) = normalize_traced(sig.rules(), &t, self.cfg.fuel)
                .map_err(|_| self.fuel_out("reducing"))?;
            for (i, s) in steps.iter().enumerate() {
                self.emit(Record::step(i + 1, s));
            }
            nf
        } else {
            normalize(sig.rules(), &t, self.cfg.fuel).map_err(|_| self.fuel_out("reducing"))?
        };
        self.emit(Record::NormalForm {
            term: nf.to_string(),
        });
        Ok(Exit::Ok)
    }

    fn cmd_oracle(&mut self, kind: OracleKind, lhs: &str, rhs: &str) -> Outcome<Exit> {
        let mut side = |text: &str, label: &str| {
            parse_term(text).map_err(|e| {
                let span = e.span.clone().with_file(Some(&label.into()));
                self.emit(Record::parse_error(&ParseError { span, ..e }));
                Exit::Input
            })
        };
        let l = side(lhs, "<lhs>")?;
        let r = side(rhs, "<rhs>")?;
        let sort = match kind {
            OracleKind::Interval => Sort::Interval,
            OracleKind::Face => Sort::Face,
        };
        let tr = Translation {
            constants_as_generators: true,
        };
        match equation_sound_in(sort, &tr, &l, &r) {
            Err(e) => {
                self.emit(Record::diagnostic("out-of-domain", "<input>", e));
                Err(Exit::Input)
            }
            Ok(v) => {
                let w: Option<&Witness> = v.witness();
                self.emit(Record::verdict(w));
                Ok(if v.holds() { Exit::Ok } else { Exit::Fails })
            }
        }
    }

    fn cmd_cp(&mut self, paths: &[PathBuf]) -> Outcome<Exit> {
        let rules = if paths.is_empty() {
            cubical_algebra_rules()
        } else {
            let ds: Vec<Declaration> = self.load(paths)?.into_iter().map(|(d, _)| d).collect();
            match RuleSet::from_declarations(&ds) {
                Ok(rs) => rs
                    .iter()
                    .filter(|r| !r.name.ends_with("/def"))
                    .cloned()
                    .collect(),
                Err(e) => {
                    self.emit(Record::diagnostic("parse", "<input>", e));
                    return Err(Exit::Input);
                }
            }
        };
        let fuel = self.cfg.fuel;
        let pairs = critical_pairs(&rules.to_vec());
        let mut bad = 0;
        for cp in &pairs {
            let v =
                joinable(&rules, cp, fuel).map_err(|_| self.fuel_out("joining a critical pair"))?;
            if let Verdict::Fails(nfs) = v {
                bad += 1;
                let inst = closed_instances(&rules, cp, fuel)
                    .map_err(|_| self.fuel_out("instantiating a critical pair"))?;
                self.emit(Record::critical_pair(cp, &nfs, &inst));
            }
        }
        self.emit(Record::Summary {
            pairs: pairs.len(),
            non_joinable: bad,
        });
        Ok(if bad == 0 { Exit::Ok } else { Exit::Fails })
    }
}

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
pub fn run(cfg: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<Exit> {
    let mut run = Run {
        cfg,
        rep: Reporter::new(cfg.format, out, err),
        io_error: None,
    };
    let result = match &cfg.command {
        Command::Check { paths } => run.cmd_check(paths),
        Command::Reduce {
            term,
            inputs,
            no_prelude,
        } => run.cmd_reduce(term, inputs, *no_prelude),
        Command::Oracle { kind, lhs, rhs } => run.cmd_oracle(*kind, lhs, rhs),
        Command::Cp { paths } => run.cmd_cp(paths),
    };
    match run.io_error {
        Some(e) => Err(e),
        None => Ok(result.unwrap_or_else(|e| e)),
    }
}
