//! The five-dimensional model: the seven-point normal form, the three span
//! conditions, the conic factorization, and projective equivalence of bodies
//! whose face lattice is the real projective plane.
//!
//! Points of ℝ⁵ are handled in homogeneous coordinates `(x, 1)`, and affine
//! 2-planes as 3-dimensional linear subspaces of ℝ⁶.

pub mod config;
pub mod equivalence;
pub mod model;
pub mod poly;
pub mod roots;

use alloc::boxed::Box;
use thiserror::Error;

use crate::rational::Q;

pub use config::{
    combined_condition, combined_matrix, compare_with_printed, det_condition_i, factor_condition, plane_from_params,
    EntryComparison, Factorization, PlaneParams, INCIDENCE,
};
pub use equivalence::{projective_equivalence, Equivalence};
pub use model::{canonical_body, spans_check, CanonicalBody, ProjectiveModel, SevenPointConfig, Span, SpansCheck};
pub use poly::Poly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Rp5Error {
    #[error("plane generators are affinely dependent")]
    DegenerateGenerators,
    #[error("no span condition with index {0}")]
    BadSpanIndex(usize),
    #[error("combined condition has degree {degree} at c = {c}, d = {d}")]
    DegenerateCubic { c: Box<Q>, d: Box<Q>, degree: usize },
    #[error("no linear factor over the rationals at c = {c}, d = {d}")]
    Irreducible { c: Box<Q>, d: Box<Q> },
    #[error("points are not in general position")]
    GeneralPosition,
    #[error("vectors span dimension {found}, expected {expected}")]
    RankDeficient { expected: usize, found: usize },
    #[error("subspaces do not meet in a unique point (singular values {smallest:e}, {second:e})")]
    NoUniqueMeet { smallest: f64, second: f64 },
    #[error("point is not extreme (rank-one residual {0:e})")]
    NotExtreme(f64),
    #[error("conic is degenerate or has no real points")]
    DegenerateConic,
    #[error("normalization map is singular")]
    SingularNormalization,
}
