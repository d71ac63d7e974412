//! Analyzer for sequent-calculus rules of n-ary connectives.

pub mod calculus;
pub mod classify;
pub mod cut;
pub mod doi;
pub mod dsl;
pub mod reflection;
pub mod exec;
pub mod fuzz;
pub mod generator;
pub mod report;
