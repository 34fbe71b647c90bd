//! Kernel for the lambda-Pi calculus modulo rewriting, with the two-level
//! and cubical theories it was built to check.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::result_large_err, clippy::should_implement_trait)]

extern crate alloc;

pub mod corpus;
pub mod oracle;
pub mod parser;
pub mod rewriter;
pub mod term;
pub mod typechecker;
pub mod verdict;

pub use term::{Name, Sort, Term, TypingContext};
pub use verdict::Verdict;

/// Default reduction budget.
pub const DEFAULT_FUEL: u64 = 100_000;
