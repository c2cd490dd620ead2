//! Type checker, denotational evaluator and equivalence tester for polarized SILL.

pub mod domain;
pub mod equiv;
pub mod semantics;
pub mod syntax;
pub mod typecheck;
