//! Exhaustiveness and redundancy checking for pattern matches over GADTs.
//!
//! The pipeline: [`syntax`] parses a small declaration language,
//! [`tycore`] lowers declarations and unifies types, [`matrix`] computes the
//! patterns left uncovered by a list of arms, [`search`] decides whether such
//! a pattern can match any well-typed value, and [`driver`] turns the answers
//! into diagnostics. [`horn`] is an independent oracle that encodes the
//! declarations as Horn clauses and searches for inhabitants by resolution.

pub mod driver;
pub mod horn;
pub mod matrix;
pub mod search;
pub mod syntax;
pub mod tycore;
