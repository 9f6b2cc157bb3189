//! Faces of the PSD cone `C_n(𝔽)` for 𝔽 ∈ {ℝ, ℂ, ℍ}.
//!
//! A face is stored through its range subspace: the face generated by a PSD
//! matrix `A` is `{B ⪰ 0 : range B ⊆ range A}`, and `face ↦ range` identifies
//! the face lattice with the lattice of 𝔽-subspaces of 𝔽ⁿ. Joins are subspace
//! sums, meets are intersections, and the lattice rank of a face is the
//! 𝔽-dimension of its range.

mod body;

pub use body::{
    face_barycenter, hausdorff_distance, minimal_face_containing, radial_decompose, radial_extend,
    support_value, RadialDecomposition, SlicedBody,
};

use alloc::vec::Vec;

use thiserror::Error;

use crate::algebra::{Field, HermitianMatrix};
use crate::linalg::{self, FVector};
use crate::tolerance::DEFAULT_TOL;

/// Subspace distance below which two faces are considered equal.
pub const FACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("PSD cones are handled for R, C and H only, got {0}")]
    UnsupportedField(Field),
    #[error("matrix is not PSD (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("cone mismatch: C_{n1}({f1}) vs C_{n2}({f2})")]
    ConeMismatch { f1: Field, n1: usize, f2: Field, n2: usize },
    #[error("precondition F <= H violated (containment residual {0:e})")]
    NotBelow(f64),
    #[error("point is not in the body (pairing residual {residual:e}, min eigenvalue {min_eigenvalue:e})")]
    NotInBody { residual: f64, min_eigenvalue: f64 },
    #[error("the apex face is empty in a slice")]
    EmptyFace,
    #[error("face is unbounded in this slice")]
    Unbounded,
    #[error("vertex map sends a face of rank {expected} to a set spanning rank {found}")]
    NonFace { expected: usize, found: usize, witness: HermitianMatrix },
    #[error("invalid dimension query (n = {n}, d = {d})")]
    BadDimension { n: usize, d: usize },
}

pub(crate) fn check_field(field: Field) -> Result<(), ConeError> {
    if field.is_associative() {
        Ok(())
    } else {
        Err(ConeError::UnsupportedField(field))
    }
}

/// An 𝔽-subspace of 𝔽ⁿ with an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    field: Field,
    n: usize,
    basis: Vec<FVector>,
}

impl Subspace {
    /// Span of arbitrary vectors.
    pub fn span(field: Field, n: usize, vectors: &[FVector]) -> Self {
        let basis = if vectors.is_empty() {
            Vec::new()
        } else {
            linalg::range_basis(&HermitianMatrix::gram(field, n, vectors))
        };
        Subspace { field, n, basis }
    }

    /// Wraps a basis the caller guarantees to be orthonormal.
    pub fn from_orthonormal(field: Field, n: usize, basis: Vec<FVector>) -> Self {
        debug_assert!(basis.iter().all(|v| v.len() == n));
        Subspace { field, n, basis }
    }

    pub fn zero(field: Field, n: usize) -> Self {
        Subspace { field, n, basis: Vec::new() }
    }

    pub fn full(field: Field, n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { crate::Element::one(field) } else { crate::Element::zero(field) })
                    .collect()
            })
            .collect();
        Subspace { field, n, basis }
    }

    /// Range of a Hermitian matrix.
    pub fn range_of(a: &HermitianMatrix) -> Self {
        Subspace { field: a.field(), n: a.n(), basis: linalg::range_basis(a) }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FVector] {
        &self.basis
    }

    pub fn projector(&self) -> HermitianMatrix {
        linalg::projector(self.field, self.n, &self.basis)
    }

    pub fn complement(&self) -> Self {
        if self.dim() == 0 {
            return Self::full(self.field, self.n);
        }
        let q = HermitianMatrix::identity(self.field, self.n).expect("identity").sub(&self.projector());
        Self::from_projector_sum(&q)
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::from_projector_sum(&self.projector().add(&other.projector()))
    }

    fn from_projector_sum(p: &HermitianMatrix) -> Self {
        Subspace { field: p.field(), n: p.n(), basis: linalg::range_basis_scaled(p, 1.0) }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement().sum(&other.complement()).complement()
    }

    /// `‖(I − P_other) P_self‖`: zero iff `self ⊆ other`.
    pub fn excess_over(&self, other: &Self) -> f64 {
        self.basis
            .iter()
            .map(|v| linalg::vnorm(&linalg::residual(&other.basis, v)))
            .fold(0.0, f64::max)
    }

    pub fn is_within(&self, other: &Self, tol: f64) -> bool {
        self.excess_over(other) <= tol
    }

    /// Sine of the largest principal angle when dimensions agree, 1 otherwise.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return 1.0;
        }
        if self.dim() == 0 {
            return 0.0;
        }
        linalg::op_norm(&self.projector().sub(&other.projector()))
    }

    /// Largest deviation of the Gram matrix of the basis from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, x) in self.basis.iter().enumerate() {
            for (j, y) in self.basis.iter().enumerate() {
                let mut g = linalg::inner(x, y);
                if i == j {
                    g = g - crate::Element::one(self.field);
                }
                worst = worst.max(g.max_abs());
            }
        }
        worst
    }
}

/// A face of `C_n(𝔽)`, identified with its range subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    range: Subspace,
}

impl Face {
    pub fn from_range(range: Subspace) -> Self {
        Face { range }
    }

    pub fn apex(field: Field, n: usize) -> Self {
        Face { range: Subspace::zero(field, n) }
    }

    pub fn full(field: Field, n: usize) -> Self {
        Face { range: Subspace::full(field, n) }
    }

    pub fn field(&self) -> Field {
        self.range.field
    }

    pub fn n(&self) -> usize {
        self.range.n
    }

    pub fn range(&self) -> &Subspace {
        &self.range
    }

    pub fn rank(&self) -> usize {
        self.range.dim()
    }

    pub fn is_below(&self, other: &Face) -> bool {
        self.rank() <= other.rank() && self.range.is_within(&other.range, FACE_TOL)
    }

    pub fn same_as(&self, other: &Face) -> bool {
        self.range.distance(&other.range) < FACE_TOL
    }

    /// The face with the orthogonal-complement range.
    pub fn complement(&self) -> Face {
        Face { range: self.range.complement() }
    }

    /// A PSD generator of the face (the projector onto its range).
    pub fn generator(&self) -> HermitianMatrix {
        self.range.projector()
    }

    /// Whether `a` lies in the face: `range a ⊆ range F`.
    pub fn contains(&self, a: &HermitianMatrix) -> bool {
        Subspace::range_of(a).is_within(&self.range, 1e-7)
    }

    fn check_same_cone(&self, other: &Face) -> Result<(), ConeError> {
        if self.field() != other.field() || self.n() != other.n() {
            return Err(ConeError::ConeMismatch {
                f1: self.field(),
                n1: self.n(),
                f2: other.field(),
                n2: other.n(),
            });
        }
        Ok(())
    }
}

/// `λ_min(A) ≥ −tol·(1 + λ_max(A))`.
pub fn is_psd(a: &HermitianMatrix, tol: f64) -> Result<bool, ConeError> {
    check_field(a.field())?;
    if a.n() == 0 {
        return Ok(true);
    }
    let (lo, hi) = linalg::extreme_eigenvalues(a);
    Ok(lo >= -tol * (1.0 + hi.max(0.0)))
}

/// The face generated by a PSD matrix: range `(ker A)^⊥`.
pub fn face_of(a: &HermitianMatrix) -> Result<Face, ConeError> {
    check_field(a.field())?;
    if !is_psd(a, DEFAULT_TOL)? {
        let (lo, _) = linalg::extreme_eigenvalues(a);
        return Err(ConeError::NotPsd { min_eigenvalue: lo });
    }
    Ok(Face { range: Subspace::range_of(a) })
}

pub fn face_join(f: &Face, g: &Face) -> Result<Face, ConeError> {
    f.check_same_cone(g)?;
    Ok(Face { range: f.range.sum(&g.range) })
}

/// Range of the meet is the complement of `span(ker F ∪ ker G)`.
pub fn face_meet(f: &Face, g: &Face) -> Result<Face, ConeError> {
    f.check_same_cone(g)?;
    Ok(Face { range: f.range.intersection(&g.range) })
}

/// Outcome of a lattice-law evaluation on faces.
#[derive(Clone, Debug, PartialEq)]
pub struct LawCheck {
    pub holds: bool,
    /// Lattice ranks of the two sides.
    pub ranks: (usize, usize),
    /// Subspace distance between the two sides.
    pub residual: f64,
}

/// `F ∨ (G ∧ H) = (F ∨ G) ∧ H` for `F ≤ H`.
pub fn modular_law_check(f: &Face, g: &Face, h: &Face) -> Result<LawCheck, ConeError> {
    f.check_same_cone(g)?;
    f.check_same_cone(h)?;
    if !f.is_below(h) {
        return Err(ConeError::NotBelow(f.range.excess_over(&h.range)));
    }
    let lhs = face_join(f, &face_meet(g, h)?)?;
    let rhs = face_meet(&face_join(f, g)?, h)?;
    let residual = lhs.range.distance(&rhs.range);
    Ok(LawCheck {
        holds: lhs.rank() == rhs.rank() && residual < FACE_TOL,
        ranks: (lhs.rank(), rhs.rank()),
        residual,
    })
}

/// `rk F + rk G = rk(F ∨ G) + rk(F ∧ G)`, compared as integers.
pub fn rank_identity_check(f: &Face, g: &Face) -> Result<bool, ConeError> {
    let j = face_join(f, g)?;
    let m = face_meet(f, g)?;
    Ok(f.rank() + g.rank() == j.rank() + m.rank())
}

/// Real dimension of the Hermitian `n × n` matrices over a `d`-dimensional algebra.
pub fn ambient_dimension(n: usize, d: usize) -> usize {
    n + n * (n - 1) / 2 * d
}

/// `n(n−1)/2 · d + n − 1`, the dimension of a compact slice of `C_n(𝔽)`.
pub fn predicted_dimension(n: usize, d: usize) -> Result<usize, ConeError> {
    if n < 2 || Field::from_dim(d).is_none() {
        return Err(ConeError::BadDimension { n, d });
    }
    Ok(n * (n - 1) / 2 * d + n - 1)
}
