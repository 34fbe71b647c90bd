//! The shipped theories: two-level type theory with optional axioms, the
//! cubical fragment built on top of it, and worked examples.

mod encode;
mod judgments;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::parser::{parse_file, parse_file_located, Declaration, SourceSpan};
use crate::rewriter::{critical_pairs, joinable, RuleSet};
use crate::term::{Term, TypingContext};
use crate::verdict::Verdict;

pub use encode::{encode, encode_context, entries, Ast, EncodeError, Layer, Level};
pub use judgments::{judgments, Encoded, Judgment};

/// A theory file bundled into the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoryFile {
    /// Path relative to the `theories/` directory.
    pub path: &'static str,
    pub text: &'static str,
}

macro_rules! theory {
    ($path:literal) => {
        TheoryFile {
            path: $path,
            text: include_str!(concat!("../../../../theories/", $path)),
        }
    };
}

pub const CORE: TheoryFile = theory!("00-2ltt-core.dk");
pub const AXIOM_T1: TheoryFile = theory!("02-axiom-t1.dk");
pub const AXIOM_T2: TheoryFile = theory!("03-axiom-t2.dk");
pub const AXIOM_T3: TheoryFile = theory!("04-axiom-t3.dk");
pub const UNIVALENCE: TheoryFile = theory!("05-univalence.dk");
pub const NAT_NONE: TheoryFile = theory!("nat/none.dk");
pub const NAT_EXTERNAL: TheoryFile = theory!("nat/external.dk");
pub const NAT_DEFINITIONAL: TheoryFile = theory!("nat/definitional.dk");
pub const CUBICAL_BASE: TheoryFile = theory!("10-cubical-base.dk");
pub const CUBICAL_INTERVAL: TheoryFile = theory!("11-cubical-interval.dk");
pub const CUBICAL_PATHS: TheoryFile = theory!("12-cubical-paths.dk");
pub const CUBICAL_FACES: TheoryFile = theory!("13-cubical-faces.dk");
pub const CUBICAL_COMP: TheoryFile = theory!("14-cubical-comp.dk");
pub const EXAMPLES: TheoryFile = theory!("20-examples.dk");
pub const FIRST_ATTEMPT_FACETYPE: TheoryFile = theory!("fixtures/first-attempt-facetype.dk");

/// Every bundled file, fixtures included.
pub const ALL_FILES: [TheoryFile; 15] = [
    CORE,
    AXIOM_T1,
    AXIOM_T2,
    AXIOM_T3,
    UNIVALENCE,
    NAT_NONE,
    NAT_EXTERNAL,
    NAT_DEFINITIONAL,
    CUBICAL_BASE,
    CUBICAL_INTERVAL,
    CUBICAL_PATHS,
    CUBICAL_FACES,
    CUBICAL_COMP,
    EXAMPLES,
    FIRST_ATTEMPT_FACETYPE,
];

impl TheoryFile {
    /// Parses the file. Bundled files always parse; a failure is a bug.
    pub fn declarations(&self) -> Vec<Declaration> {
        match parse_file(self.text) {
            Ok(ds) => ds,
            Err(e) => panic!("bundled theory {} does not parse: {e}", self.path),
        }
    }

    pub fn located(&self) -> Vec<(Declaration, SourceSpan)> {
        match parse_file_located(self.text, Some(self.path)) {
            Ok(ds) => ds,
            Err(e) => panic!("bundled theory {} does not parse: {e}", self.path),
        }
    }
}

/// How the internal and external natural numbers are related.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum NatStrength {
    /// Only the map from external to coerced internal numbers.
    #[default]
    None,
    /// An isomorphism up to external equality.
    External,
    /// An isomorphism whose inverse laws are rewrite rules.
    Definitional,
}

impl NatStrength {
    pub const ALL: [NatStrength; 3] = [
        NatStrength::None,
        NatStrength::External,
        NatStrength::Definitional,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NatStrength::None => "none",
            NatStrength::External => "external",
            NatStrength::Definitional => "definitional",
        }
    }

    fn file(self) -> TheoryFile {
        match self {
            NatStrength::None => NAT_NONE,
            NatStrength::External => NAT_EXTERNAL,
            NatStrength::Definitional => NAT_DEFINITIONAL,
        }
    }
}

impl fmt::Display for NatStrength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NatStrength {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(NatStrength::None),
            "external" | "external_eq" | "external-eq" => Ok(NatStrength::External),
            "definitional" => Ok(NatStrength::Definitional),
            _ => Err(alloc::format!(
                "unknown nat strength `{s}` (expected none, external or definitional)"
            )),
        }
    }
}

/// Which optional blocks go into the signature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TheoryConfig {
    /// Coercion is injective.
    pub t1_injectivity: bool,
    /// Coercion commutes with the primitive formers by rewriting.
    pub t2_primitive_iso_as_rewrite: bool,
    /// Every external type isomorphic to a coerced one is a coercion.
    pub t3_repletion: bool,
    pub nat_morphism_strength: NatStrength,
    pub include_weak_univalence: bool,
    pub cubical: bool,
}

impl TheoryConfig {
    /// All flag combinations of the two-level blocks, cubical off.
    pub fn sweep() -> Vec<TheoryConfig> {
        let mut out = Vec::new();
        for bits in 0..16u8 {
            for nat in NatStrength::ALL {
                out.push(TheoryConfig {
                    t1_injectivity: bits & 1 != 0,
                    t2_primitive_iso_as_rewrite: bits & 2 != 0,
                    t3_repletion: bits & 4 != 0,
                    include_weak_univalence: bits & 8 != 0,
                    nat_morphism_strength: nat,
                    cubical: false,
                });
            }
        }
        out
    }

    pub fn with_cubical(mut self) -> Self {
        self.cubical = true;
        self
    }

    /// The two-level files this configuration selects, in dependency order.
    pub fn files_2ltt(&self) -> Vec<TheoryFile> {
        let mut fs = alloc::vec![CORE, self.nat_morphism_strength.file()];
        if self.t1_injectivity {
            fs.push(AXIOM_T1);
        }
        if self.t2_primitive_iso_as_rewrite {
            fs.push(AXIOM_T2);
        }
        if self.t3_repletion {
            fs.push(AXIOM_T3);
        }
        if self.include_weak_univalence {
            fs.push(UNIVALENCE);
        }
        fs
    }

    /// Every file of the full signature, examples last when cubical is on.
    pub fn files(&self) -> Vec<TheoryFile> {
        let mut fs = self.files_2ltt();
        if self.cubical {
            fs.extend(CUBICAL_FILES);
            fs.push(EXAMPLES);
        }
        fs
    }
}

const CUBICAL_FILES: [TheoryFile; 5] = [
    CUBICAL_BASE,
    CUBICAL_INTERVAL,
    CUBICAL_PATHS,
    CUBICAL_FACES,
    CUBICAL_COMP,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigError {
    /// The cubical blocks were requested with `cubical` off.
    CubicalDisabled,
    /// The selected rules have a critical pair that does not join.
    NonJoinable(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::CubicalDisabled => write!(f, "the cubical fragment is not enabled"),
            ConfigError::NonJoinable(cp) => {
                write!(
                    f,
                    "inconsistent configuration: critical pair {cp} does not join"
                )
            }
        }
    }
}

impl core::error::Error for ConfigError {}

const AUDIT_FUEL: u64 = 10_000;

fn concat(files: &[TheoryFile]) -> Vec<Declaration> {
    files.iter().flat_map(|f| f.declarations()).collect()
}

/// The two-level signature for `cfg`. Combinations whose rules would
/// overlap without joining are rejected.
pub fn build_2ltt(cfg: &TheoryConfig) -> Result<Vec<Declaration>, ConfigError> {
    let ds = concat(&cfg.files_2ltt());
    let rules = match RuleSet::from_declarations(&ds) {
        Ok(rs) => rs,
        Err(e) => panic!("bundled rule is malformed: {e}"),
    };
    for cp in critical_pairs(&rules.to_vec()) {
        match joinable(&rules, &cp, AUDIT_FUEL) {
            Ok(Verdict::Holds) => {}
            _ => return Err(ConfigError::NonJoinable(alloc::format!("{cp}"))),
        }
    }
    Ok(ds)
}

/// The cubical blocks, to be appended to `build_2ltt` of the same config.
pub fn build_cubical(cfg: &TheoryConfig) -> Result<Vec<Declaration>, ConfigError> {
    if !cfg.cubical {
        return Err(ConfigError::CubicalDisabled);
    }
    Ok(concat(&CUBICAL_FILES))
}

/// The two-level signature followed by the cubical blocks when enabled.
pub fn build(cfg: &TheoryConfig) -> Result<Vec<Declaration>, ConfigError> {
    let mut ds = build_2ltt(cfg)?;
    if cfg.cubical {
        ds.extend(build_cubical(cfg)?);
    }
    Ok(ds)
}

/// Worked examples; they need the cubical fragment.
pub fn build_examples() -> Vec<Declaration> {
    EXAMPLES.declarations()
}

/// The quarantined rewrite rules decoding faces directly. Never part of
/// a shipped signature.
pub fn first_attempt_facetype() -> Vec<Declaration> {
    FIRST_ATTEMPT_FACETYPE.declarations()
}

/// The rules of the interval and face blocks.
pub fn cubical_algebra_rules() -> RuleSet {
    rules_of(&[CUBICAL_INTERVAL, CUBICAL_FACES])
        .iter()
        .filter(|r| ALGEBRA_HEADS.contains(&&*r.head))
        .cloned()
        .collect()
}

const ALGEBRA_HEADS: [&str; 7] = ["Imin", "Imax", "sym", "eq0", "eq1", "Fmin", "Fmax"];

/// Every rewrite rule of the given files, definitions excluded.
pub fn rules_of(files: &[TheoryFile]) -> RuleSet {
    RuleSet::from_declarations(&concat(files))
        .unwrap_or_else(|e| panic!("bundled rule is malformed: {e}"))
        .iter()
        .filter(|r| !r.name.ends_with("/def"))
        .cloned()
        .collect()
}

/// The filling line between a point and its composition, as a term over
/// its parameters.
#[derive(Clone, Debug)]
pub struct FillingExample {
    /// `phi`, `A`, `u`, `a0`, `coh` and `j`, in that order.
    pub ctx: TypingContext,
    pub term: Term,
    pub ty: Term,
}

impl FillingExample {
    /// Term and type with `j` replaced by `at`.
    pub fn at(&self, at: &Term) -> (Term, Term) {
        (self.term.subst("j", at), self.ty.subst("j", at))
    }

    /// The composition the line ends in.
    pub fn composition(&self) -> Term {
        let l = self.term.spine().1[0].clone();
        let p = |x: &str| Term::var(x);
        Term::apps(
            Term::cst("primCompTerm"),
            [l, p("phi"), p("A"), p("u"), p("a0"), p("coh")],
        )
    }
}

pub fn filling_example(l: &Level) -> FillingExample {
    const PARAMS: [(&str, &str); 6] = [
        ("phi", "ceps F"),
        ("A", "ceps I -> T l"),
        ("u", "ceps (faceType phi) -> i : ceps I -> eps l (A i)"),
        ("a0", "eps l (A 0)"),
        (
            "coh",
            "e : ceps (faceType phi) -> tCubicalEq l (A 0) a0 (u e 0)",
        ),
        ("j", "ceps I"),
    ];
    let lt = l.to_term();
    let read = |src: &str, scope: &[&str]| -> Term {
        let mut free: Vec<&str> = scope.to_vec();
        free.push("l");
        match crate::parser::parse_term_in(src, &free) {
            Ok(t) => t.subst("l", &lt),
            Err(e) => panic!("filling example does not parse: {e}"),
        }
    };
    let mut ctx = TypingContext::new();
    let mut scope: Vec<&str> = Vec::new();
    for (x, ty) in PARAMS {
        ctx.push(crate::term::name(x), read(ty, &scope));
        scope.push(x);
    }
    let term = read(
        "primCompTerm l phi (i : ceps I => A (Imin i j)) (e => i => u e (Imin i j)) a0 coh",
        &scope,
    );
    let ty = read("eps l (A j)", &scope);
    FillingExample { ctx, term, ty }
}

#[cfg(test)]
mod tests;
