use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use morgandk_core::corpus::{NatStrength, TheoryConfig};
use morgandk_core::DEFAULT_FUEL;

/// Checker for the lambda-Pi calculus modulo rewriting, with De Morgan
/// interval and face oracles.
#[derive(Debug, Parser)]
#[command(name = "morgandk", version)]
pub struct Cli {
    /// Reduction budget per declaration or query.
    #[arg(
        long,
        global = true,
        env = "MORGANDK_FUEL",
        default_value_t = DEFAULT_FUEL,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    pub fuel: u64,

    /// Optional theory block for the built-in corpus: t1, t2, t3,
    /// univalence or nat=none|external|definitional. Repeatable.
    #[arg(long = "flag", global = true, value_name = "FLAG")]
    pub flags: Vec<Flag>,

    /// Print every reduction step.
    #[arg(long, global = true)]
    pub trace: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Check theory files as one signature, in argument order. Without
    /// files, checks the built-in corpus selected by the flags.
    Check { paths: Vec<PathBuf> },
    /// Print the normal form of a term.
    Reduce {
        term: String,
        /// Declarations to load after the prelude. Repeatable.
        #[arg(short = 'i', long = "input", value_name = "FILE")]
        inputs: Vec<PathBuf>,
        /// Do not load the built-in corpus.
        #[arg(long)]
        no_prelude: bool,
    },
    /// Decide an equation in the interval or face algebra. Identifiers
    /// other than the algebra operations are generators.
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        lhs: String,
        rhs: String,
    },
    /// Report critical pairs that do not join. Without files, analyzes the
    /// built-in interval and face rules.
    Cp { paths: Vec<PathBuf> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Interval,
    Face,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flag {
    T1,
    T2,
    T3,
    Univalence,
    Nat(NatStrength),
}

impl FromStr for Flag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "t1" => Ok(Flag::T1),
            "t2" => Ok(Flag::T2),
            "t3" => Ok(Flag::T3),
            "univalence" => Ok(Flag::Univalence),
            _ => match s.strip_prefix("nat=") {
                Some(v) => v.parse().map(Flag::Nat),
                None => Err(format!(
                    "unknown flag `{s}` (expected t1, t2, t3, univalence or nat=<strength>)"
                )),
            },
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::T1 => f.write_str("t1"),
            Flag::T2 => f.write_str("t2"),
            Flag::T3 => f.write_str("t3"),
            Flag::Univalence => f.write_str("univalence"),
            Flag::Nat(s) => write!(f, "nat={s}"),
        }
    }
}

/// A validated invocation.
#[derive(Clone, Debug)]
pub struct CliConfig {
    pub command: Command,
    pub fuel: u64,
    pub theory: TheoryConfig,
    pub trace: bool,
    pub format: Format,
}

impl Cli {
    /// Resolves flags into a theory configuration. The cubical fragment is
    /// always on.
    pub fn config(&self) -> CliConfig {
        let mut theory = TheoryConfig::default().with_cubical();
        for flag in &self.flags {
            match flag {
                Flag::T1 => theory.t1_injectivity = true,
                Flag::T2 => theory.t2_primitive_iso_as_rewrite = true,
                Flag::T3 => theory.t3_repletion = true,
                Flag::Univalence => theory.include_weak_univalence = true,
                Flag::Nat(s) => theory.nat_morphism_strength = *s,
            }
        }
        CliConfig {
            command: self.command.clone(),
            fuel: self.fuel,
            theory,
            trace: self.trace,
            format: self.format,
        }
    }
}

impl CliConfig {
    pub fn paths(&self) -> Vec<&PathBuf> {
        match &self.command {
            Command::Check { paths } | Command::Cp { paths } => paths.iter().collect(),
            Command::Reduce { inputs, .. } => inputs.iter().collect(),
            Command::Oracle { .. } => Vec::new(),
        }
    }
}
