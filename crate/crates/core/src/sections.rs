//! Sections `{A ⪰ 0 : ⟨M, A⟩ = 1}` for PSD `M`, possibly singular, and their
//! behaviour at infinity.
//!
//! For PSD `M` and `A`, `⟨M, A⟩ = 0` exactly when `range A ⊆ ker M`, so the
//! recession cone is the face of the cone with range `ker M`, and the
//! recession set of the face with range `W` is supported on `W ∩ ker M`.

use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{Element, Field, HermitianMatrix};
use crate::cone_faces::{face_join, face_meet, is_psd, ConeError, Face, Subspace};
use crate::linalg::{self, FVector};
use crate::sample;
use crate::tolerance::DEFAULT_TOL;

/// Frobenius distance below which two unit ray directions are equal.
pub const DIRECTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SectionError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("functional is not PSD (smallest eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("functional is zero")]
    ZeroFunctional,
    #[error("face is compact; it has no recession direction")]
    NotApplicable,
    #[error("face does not meet the section")]
    EmptyFace,
    #[error("section is compact")]
    Compact,
    #[error("point lies on the face")]
    PointOnFace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectionBody {
    functional: HermitianMatrix,
    kernel: Subspace,
}

pub fn make_section(functional: HermitianMatrix) -> Result<SectionBody, SectionError> {
    if !functional.field().is_associative() {
        return Err(ConeError::UnsupportedField(functional.field()).into());
    }
    let (lo, hi) = linalg::extreme_eigenvalues(&functional);
    if hi <= DEFAULT_TOL {
        return Err(if lo < -DEFAULT_TOL { SectionError::NotPsd(lo) } else { SectionError::ZeroFunctional });
    }
    if !is_psd(&functional, DEFAULT_TOL)? {
        return Err(SectionError::NotPsd(lo));
    }
    let kernel = Subspace::range_of(&functional).complement();
    Ok(SectionBody { functional, kernel })
}

impl SectionBody {
    pub fn field(&self) -> Field {
        self.functional.field()
    }

    pub fn n(&self) -> usize {
        self.functional.n()
    }

    pub fn functional(&self) -> &HermitianMatrix {
        &self.functional
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn is_compact(&self) -> bool {
        self.kernel.dim() == 0
    }

    pub fn pairing(&self, a: &HermitianMatrix) -> f64 {
        self.functional.inner(a)
    }

    /// `vv*/⟨M, vv*⟩`; fails for directions in the kernel.
    pub fn extreme_point(&self, v: &[Element]) -> Result<HermitianMatrix, SectionError> {
        let p = HermitianMatrix::gram(self.field(), self.n(), &[v.to_vec()]);
        let s = self.pairing(&p);
        if s <= DEFAULT_TOL * p.frobenius() {
            return Err(ConeError::Unbounded.into());
        }
        Ok(p.scale(1.0 / s))
    }

    /// Whether the face with this range has points in the section.
    pub fn face_is_nonempty(&self, face: &Face) -> bool {
        !face.range().is_within(&self.kernel, 1e-9)
    }

    /// The recession set of a face: the cone of PSD matrices supported on
    /// `W ∩ ker M`.
    pub fn recession_support(&self, face: &Face) -> Subspace {
        face.range().intersection(&self.kernel)
    }
}

/// The recession cone, `{A ⪰ 0 : range A ⊆ ker M}`, whose extreme rays are
/// `vv*` for `v ∈ ker M`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecessionCone {
    pub support: Subspace,
}

impl RecessionCone {
    pub fn is_trivial(&self) -> bool {
        self.support.dim() == 0
    }

    /// The cone as a face of `C_n(𝔽)`.
    pub fn face(&self) -> Face {
        Face::from_range(self.support.clone())
    }

    /// The single ray direction when the support is one-dimensional.
    pub fn unique_ray(&self) -> Option<HermitianMatrix> {
        (self.support.dim() == 1).then(|| ray_direction(&self.support.basis()[0], self.support.ambient_dim()))
    }

    /// A random extreme ray direction, unit Frobenius norm.
    pub fn sample_ray<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<HermitianMatrix> {
        (!self.is_trivial()).then(|| ray_direction(&random_in(&self.support, rng), self.support.ambient_dim()))
    }
}

pub fn recession_rays(body: &SectionBody) -> RecessionCone {
    RecessionCone { support: body.kernel.clone() }
}

fn ray_direction(v: &[Element], n: usize) -> HermitianMatrix {
    let field = v[0].field();
    let p = HermitianMatrix::gram(field, n, &[v.to_vec()]);
    p.scale(1.0 / p.frobenius())
}

fn random_in<R: Rng + ?Sized>(s: &Subspace, rng: &mut R) -> FVector {
    let field = s.field();
    let mut v: FVector = (0..s.ambient_dim()).map(|_| Element::zero(field)).collect();
    for b in s.basis() {
        let c = sample::element(rng, field);
        for (x, y) in v.iter_mut().zip(linalg::scale_right(b, &c)) {
            *x = *x + y;
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniqueRay {
    pub unique: bool,
    /// 𝔽-dimension of `W ∩ ker M`.
    pub support_dim: usize,
    /// Largest distance of a sampled recession direction from the first one.
    pub spread: f64,
}

/// Whether the recession set of a non-compact face is a single ray, decided
/// by the dimension of its support and cross-checked on `n_dirs` sampled
/// recession directions.
pub fn unique_ray_check<R: Rng + ?Sized>(body: &SectionBody, face: &Face, n_dirs: usize, rng: &mut R) -> Result<UniqueRay, SectionError> {
    if !body.face_is_nonempty(face) {
        return Err(SectionError::EmptyFace);
    }
    let support = body.recession_support(face);
    if support.dim() == 0 {
        return Err(SectionError::NotApplicable);
    }
    let cone = RecessionCone { support: support.clone() };
    let first = cone.sample_ray(rng).expect("nontrivial");
    let mut spread: f64 = 0.0;
    for _ in 0..n_dirs {
        // random PSD element of the recession set
        let vs: Vec<FVector> = (0..2).map(|_| random_in(&support, rng)).collect();
        let a = HermitianMatrix::gram(body.field(), body.n(), &vs);
        let a = a.scale(1.0 / a.frobenius());
        spread = spread.max(a.max_abs_diff(&first));
    }
    let unique = support.dim() == 1 && spread < DIRECTION_TOL;
    Ok(UniqueRay { unique, support_dim: support.dim(), spread })
}

/// Real dimension of the intersection of two recession sets, i.e. of the
/// cone of PSD matrices supported on `W_A ∩ W_B ∩ ker M`.
pub fn shared_direction_check(body: &SectionBody, a: &Face, b: &Face) -> usize {
    let k = body.recession_support(a).intersection(&body.recession_support(b)).dim();
    let d = body.field().dim();
    k + d * k * k.saturating_sub(1) / 2
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParallelClass {
    /// Unit-norm ray direction shared by the members.
    pub direction: HermitianMatrix,
    pub members: Vec<usize>,
}

/// Groups non-compact faces with a unique ray by that ray. Faces without a
/// unique ray are skipped.
pub fn parallel_classes(body: &SectionBody, faces: &[Face]) -> Result<Vec<ParallelClass>, SectionError> {
    if body.is_compact() {
        return Err(SectionError::Compact);
    }
    let mut classes: Vec<ParallelClass> = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        let support = body.recession_support(f);
        if support.dim() != 1 || !body.face_is_nonempty(f) {
            continue;
        }
        let dir = ray_direction(&support.basis()[0], body.n());
        match classes.iter_mut().find(|c| c.direction.max_abs_diff(&dir) < DIRECTION_TOL) {
            Some(c) => c.members.push(i),
            None => classes.push(ParallelClass { direction: dir, members: alloc::vec![i] }),
        }
    }
    Ok(classes)
}

/// Whether two faces share a point of the section.
pub fn meet_in_body(body: &SectionBody, a: &Face, b: &Face) -> Result<bool, SectionError> {
    Ok(body.face_is_nonempty(&face_meet(a, b)?))
}

/// The face through an extreme point `vv*` that shares the ray of `face`:
/// range `span(v, k)` with `k` spanning `W ∩ ker M`.
pub fn parallel_through(body: &SectionBody, face: &Face, v: &[Element]) -> Result<Face, SectionError> {
    let support = body.recession_support(face);
    if support.dim() != 1 {
        return Err(SectionError::NotApplicable);
    }
    let p = Face::from_range(Subspace::span(body.field(), body.n(), &[v.to_vec()]));
    if p.is_below(face) {
        return Err(SectionError::PointOnFace);
    }
    let k = Face::from_range(support);
    Ok(face_join(&p, &k)?)
}

/// Image in the compact trace slice: finite points and ray directions are
/// both rescaled to trace one.
pub fn closure_point(a: &HermitianMatrix) -> HermitianMatrix {
    a.scale(1.0 / a.trace())
}

/// Random face of the given rank through an 𝔽-line of the kernel.
pub fn face_through_direction<R: Rng + ?Sized>(body: &SectionBody, k: &[Element], rank: usize, rng: &mut R) -> Face {
    let mut vs = alloc::vec![k.to_vec()];
    for _ in 1..rank {
        vs.push(sample::vector(rng, body.field(), body.n()));
    }
    Face::from_range(Subspace::span(body.field(), body.n(), &vs))
}
