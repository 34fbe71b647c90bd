//! Matching, reduction, conversion and critical-pair analysis.

mod critical;
mod reduce;
mod rules;

pub use critical::{
    closed_instances, critical_pairs, display_arg_path, joinable, CriticalPair, Instance,
};
pub use reduce::{
    convertible, match_pattern, normalize, normalize_traced, replay, whnf, FuelExhausted, Reducer,
    ReplayError, Step, StepKind,
};
pub use rules::{Pattern, RewriteRule, RuleError, RuleSet, Subst};
