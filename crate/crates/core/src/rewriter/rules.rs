use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::parser::Declaration;
use crate::term::{name, Name, Term};

/// First-order left-hand-side pattern.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Pattern {
    Var(Name),
    Const(Name, Vec<Pattern>),
}

impl Pattern {
    /// Reads a pattern from a term whose pattern variables are `FVar`s.
    pub fn from_term(t: &Term) -> Option<Pattern> {
        match t {
            Term::FVar(x) => Some(Pattern::Var(x.clone())),
            Term::Const(_) | Term::App(..) => {
                let (h, args) = t.spine();
                let Term::Const(c) = h else { return None };
                let args = args
                    .into_iter()
                    .map(Pattern::from_term)
                    .collect::<Option<Vec<_>>>()?;
                Some(Pattern::Const(c.clone(), args))
            }
            _ => None,
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Pattern::Var(x) => Term::FVar(x.clone()),
            Pattern::Const(c, args) => {
                Term::apps(Term::Const(c.clone()), args.iter().map(Pattern::to_term))
            }
        }
    }

    /// Variable occurrences, left to right, with repetitions.
    pub fn var_occurrences(&self, out: &mut Vec<Name>) {
        match self {
            Pattern::Var(x) => out.push(x.clone()),
            Pattern::Const(_, args) => args.iter().for_each(|a| a.var_occurrences(out)),
        }
    }

    pub fn rename(&self, f: &impl Fn(&Name) -> Name) -> Pattern {
        match self {
            Pattern::Var(x) => Pattern::Var(f(x)),
            Pattern::Const(c, args) => {
                Pattern::Const(c.clone(), args.iter().map(|a| a.rename(f)).collect())
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleError {
    HeadNotConstant,
    NotAPattern(Term),
    UnusedVar(Name),
    UnboundRhsVar(Name),
}

impl fmt::Display for RuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleError::HeadNotConstant => write!(f, "left-hand side is not headed by a constant"),
            RuleError::NotAPattern(t) => write!(f, "`{t}` is not a first-order pattern"),
            RuleError::UnusedVar(v) => write!(f, "pattern variable `{v}` is unused"),
            RuleError::UnboundRhsVar(v) => write!(f, "right-hand side variable `{v}` is unbound"),
        }
    }
}

impl core::error::Error for RuleError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    /// `head/n`, numbered per head in declaration order.
    pub name: Name,
    pub head: Name,
    pub args: Vec<Pattern>,
    /// Pattern variables occur as `FVar`s.
    pub rhs: Term,
    pub vars: Vec<Name>,
}

impl RewriteRule {
    pub fn new(
        rule_name: Name,
        vars: &[Name],
        lhs: &Term,
        rhs: &Term,
    ) -> Result<RewriteRule, RuleError> {
        let (h, args) = lhs.spine();
        let Term::Const(head) = h else {
            return Err(RuleError::HeadNotConstant);
        };
        let args = args
            .into_iter()
            .map(|a| Pattern::from_term(a).ok_or_else(|| RuleError::NotAPattern(a.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let lhs_vars = lhs.free_vars();
        if let Some(v) = vars.iter().find(|v| !lhs_vars.contains(*v)) {
            return Err(RuleError::UnusedVar(v.clone()));
        }
        if let Some(v) = rhs.free_vars().into_iter().find(|v| !vars.contains(v)) {
            return Err(RuleError::UnboundRhsVar(v));
        }
        Ok(RewriteRule {
            name: rule_name,
            head: head.clone(),
            args,
            rhs: rhs.clone(),
            vars: vars.to_vec(),
        })
    }

    /// The unfolding rule `c --> body` of a definition.
    pub fn unfold(head: &Name, body: &Term) -> RewriteRule {
        RewriteRule {
            name: name(&alloc::format!("{head}/def")),
            head: head.clone(),
            args: Vec::new(),
            rhs: body.clone(),
            vars: Vec::new(),
        }
    }

    pub fn lhs(&self) -> Pattern {
        Pattern::Const(self.head.clone(), self.args.clone())
    }

    pub fn lhs_term(&self) -> Term {
        self.lhs().to_term()
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_left_linear(&self) -> bool {
        let mut occ = Vec::new();
        self.lhs().var_occurrences(&mut occ);
        let set: BTreeSet<_> = occ.iter().collect();
        set.len() == occ.len()
    }

    pub fn instantiate_rhs(&self, s: &Subst) -> Term {
        self.rhs.subst_many(&|x: &str| s.get(x).cloned())
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = Declaration::Rule {
            vars: self.vars.iter().map(|v| (v.clone(), None)).collect(),
            lhs: self.lhs_term(),
            rhs: self.rhs.clone(),
        };
        f.write_str(&crate::parser::print_declaration(&d))
    }
}

pub type Subst = BTreeMap<Name, Term>;

/// Rules indexed by head constant, each head's rules in declaration order.
#[derive(Clone, Debug, Default)]
pub struct RuleSet {
    by_head: BTreeMap<Name, Vec<Arc<RewriteRule>>>,
    all: Vec<Arc<RewriteRule>>,
}

impl RuleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a rule, renaming it `head/n`. Unfolding rules keep `head/def`.
    pub fn add(&mut self, mut rule: RewriteRule) -> Name {
        let list = self.by_head.entry(rule.head.clone()).or_default();
        if !rule.name.ends_with("/def") {
            let n = list.iter().filter(|r| !r.name.ends_with("/def")).count() + 1;
            rule.name = name(&alloc::format!("{}/{n}", rule.head));
        }
        let rule = Arc::new(rule);
        list.push(rule.clone());
        self.all.push(rule.clone());
        rule.name.clone()
    }

    /// Rules of every `Rule` and `Definition` declaration, in order.
    pub fn from_declarations(ds: &[Declaration]) -> Result<RuleSet, RuleError> {
        let mut rs = RuleSet::new();
        for d in ds {
            match d {
                Declaration::Rule { vars, lhs, rhs } => {
                    let names: Vec<Name> = vars.iter().map(|(v, _)| v.clone()).collect();
                    rs.add(RewriteRule::new(name("_"), &names, lhs, rhs)?);
                }
                Declaration::Definition { name: c, body, .. } => {
                    rs.add(RewriteRule::unfold(c, body));
                }
                _ => {}
            }
        }
        Ok(rs)
    }

    pub fn rules_for(&self, head: &str) -> &[Arc<RewriteRule>] {
        self.by_head.get(head).map_or(&[], |v| v.as_slice())
    }

    pub fn get(&self, rule_name: &str) -> Option<&RewriteRule> {
        let head = rule_name.rsplit_once('/').map_or(rule_name, |(h, _)| h);
        self.rules_for(head)
            .iter()
            .find(|r| &*r.name == rule_name)
            .map(|r| &**r)
    }

    pub fn iter(&self) -> impl Iterator<Item = &RewriteRule> {
        self.all.iter().map(|r| &**r)
    }

    pub fn to_vec(&self) -> Vec<RewriteRule> {
        self.iter().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    pub fn heads(&self) -> impl Iterator<Item = &Name> {
        self.by_head.keys()
    }

    pub fn has_rules(&self, head: &str) -> bool {
        !self.rules_for(head).is_empty()
    }
}

impl FromIterator<RewriteRule> for RuleSet {
    fn from_iter<I: IntoIterator<Item = RewriteRule>>(iter: I) -> Self {
        let mut rs = RuleSet::new();
        for r in iter {
            rs.add(r);
        }
        rs
    }
}

pub(crate) fn display_pos(pos: &[u8]) -> alloc::string::String {
    if pos.is_empty() {
        return "root".into();
    }
    pos.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_file;

    #[test]
    fn rules_are_named_per_head() {
        let ds = parse_file("[i] f i --> i. [] g --> g. [i] f (f i) --> i.").unwrap();
        let rs = RuleSet::from_declarations(&ds).unwrap();
        let names: Vec<_> = rs.iter().map(|r| r.name.to_string()).collect();
        assert_eq!(names, ["f/1", "g/1", "f/2"]);
        assert_eq!(rs.get("f/2").unwrap().arity(), 1);
    }

    #[test]
    fn non_linearity_is_flagged() {
        let ds = parse_file("[i, A, a] isoDown i A (isoUp i A a) --> a.").unwrap();
        let rs = RuleSet::from_declarations(&ds).unwrap();
        assert!(!rs.iter().next().unwrap().is_left_linear());
        let ds = parse_file("[i] sym (sym i) --> i.").unwrap();
        let rs = RuleSet::from_declarations(&ds).unwrap();
        assert!(rs.iter().next().unwrap().is_left_linear());
    }

    #[test]
    fn rule_display_reparses() {
        let ds = parse_file("[A,u,v,f,e] app A u v (lam A f) e --> f e.").unwrap();
        let rs = RuleSet::from_declarations(&ds).unwrap();
        let shown = alloc::format!("{}", rs.iter().next().unwrap());
        assert_eq!(parse_file(&shown).unwrap(), ds);
    }
}
