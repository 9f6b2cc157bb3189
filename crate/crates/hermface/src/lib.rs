//! Verification harness for face lattices of Hermitian PSD cones: seeded
//! parallel trials, JSON reports and file formats.

pub mod cli;
pub mod engine;
pub mod formats;
pub mod report;
pub mod seed;
pub mod suites;
