//! Slices `{A ⪰ 0 : ⟨M, A⟩ = 1}` of the cone, barycenters, the radial
//! decomposition and its extension of vertex maps, and support functions.

use alloc::vec::Vec;

use rand::Rng;

use super::{check_field, face_join, face_of, ConeError, Face};
use num_traits::Float;
use crate::algebra::{Element, Field, HermitianMatrix};
use crate::linalg::{self, FVector};
use crate::sample;
use crate::tolerance::RANK_CUTOFF;

/// Bisection steps used to locate the boundary crossing of a ray.
const BISECTION_STEPS: usize = 60;

/// The slice of `C_n(𝔽)` cut out by `⟨M, A⟩ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlicedBody {
    functional: HermitianMatrix,
}

impl SlicedBody {
    pub fn new(functional: HermitianMatrix) -> Result<Self, ConeError> {
        check_field(functional.field())?;
        Ok(SlicedBody { functional })
    }

    /// The trace slice `tr A = 1`.
    pub fn trace(field: Field, n: usize) -> Result<Self, ConeError> {
        check_field(field)?;
        Self::new(HermitianMatrix::identity(field, n).expect("identity"))
    }

    pub fn field(&self) -> Field {
        self.functional.field()
    }

    pub fn n(&self) -> usize {
        self.functional.n()
    }

    pub fn functional(&self) -> &HermitianMatrix {
        &self.functional
    }

    /// `⟨M, A⟩ = Re tr(MA)`.
    pub fn pairing(&self, a: &HermitianMatrix) -> f64 {
        self.functional.inner(a)
    }

    /// Compact iff `M` is positive definite.
    pub fn is_compact(&self) -> bool {
        let (lo, hi) = linalg::extreme_eigenvalues(&self.functional);
        lo > RANK_CUTOFF * hi.abs().max(1.0)
    }

    pub fn contains(&self, a: &HermitianMatrix, tol: f64) -> bool {
        self.membership(a, tol).is_ok()
    }

    fn membership(&self, a: &HermitianMatrix, tol: f64) -> Result<(), ConeError> {
        let residual = (self.pairing(a) - 1.0).abs();
        let (lo, hi) = linalg::extreme_eigenvalues(a);
        if residual > tol * (1.0 + a.frobenius()) || lo < -tol * (1.0 + hi.max(0.0)) {
            return Err(ConeError::NotInBody { residual, min_eigenvalue: lo });
        }
        Ok(())
    }

    /// The extreme point `vv*/⟨M, vv*⟩` on the ray through `vv*`.
    pub fn extreme_point(&self, v: &[Element]) -> Result<HermitianMatrix, ConeError> {
        let p = HermitianMatrix::gram(self.field(), self.n(), &[v.to_vec()]);
        let s = self.pairing(&p);
        if s <= RANK_CUTOFF * p.frobenius() {
            return Err(ConeError::Unbounded);
        }
        Ok(p.scale(1.0 / s))
    }

    /// Rescales a nonzero PSD matrix onto the slice.
    pub fn normalize(&self, a: &HermitianMatrix) -> Result<HermitianMatrix, ConeError> {
        let s = self.pairing(a);
        if s <= RANK_CUTOFF * a.frobenius() {
            return Err(ConeError::Unbounded);
        }
        Ok(a.scale(1.0 / s))
    }

    /// `V*MV` for an orthonormal basis of the face, required positive definite.
    fn compressed_functional(&self, face: &Face) -> Result<HermitianMatrix, ConeError> {
        if face.rank() == 0 {
            return Err(ConeError::EmptyFace);
        }
        let mw = linalg::compress(&self.functional, face.range().basis());
        let (lo, hi) = linalg::extreme_eigenvalues(&mw);
        if lo <= RANK_CUTOFF * hi.abs() {
            return Err(ConeError::Unbounded);
        }
        Ok(mw)
    }
}

/// `a = (1 − λ)·b + λ·p` with `b` the barycenter of the minimal face of `a`
/// and `p` on the relative boundary of that face.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialDecomposition {
    pub point: HermitianMatrix,
    pub face: Face,
    pub barycenter: HermitianMatrix,
    /// Equal to `point` when `lambda = 0`.
    pub boundary: HermitianMatrix,
    pub lambda: f64,
}

impl RadialDecomposition {
    /// `‖a − ((1−λ)b + λp)‖_F`.
    pub fn residual(&self) -> f64 {
        let recon = self.barycenter.scale(1.0 - self.lambda).add(&self.boundary.scale(self.lambda));
        self.point.sub(&recon).frobenius()
    }
}

/// The face with range `(ker a)^⊥` for a point of the body.
pub fn minimal_face_containing(a: &HermitianMatrix, body: &SlicedBody) -> Result<Face, ConeError> {
    body.membership(a, 1e-9)?;
    face_of(a)
}

/// Center of mass of `face ∩ body`.
///
/// With `V` an orthonormal basis of the range and `M_W = V*MV`, the face is
/// the slice of `C_k(𝔽)` by `M_W`; the congruence `X ↦ M_W^{1/2} X M_W^{1/2}`
/// carries it affinely onto the trace slice, whose barycenter is `I/k`.
/// Pulling back gives `V M_W⁻¹ V* / k`.
pub fn face_barycenter(face: &Face, body: &SlicedBody) -> Result<HermitianMatrix, ConeError> {
    let mw = body.compressed_functional(face)?;
    let k = face.rank() as f64;
    let x = linalg::spectral_map(&mw, |l| 1.0 / (l * k));
    Ok(linalg::expand(&x, face.range().basis(), body.n()))
}

fn lambda_min_on(face: &Face, a: &HermitianMatrix) -> f64 {
    linalg::extreme_eigenvalues(&linalg::compress(a, face.range().basis())).0
}

pub fn radial_decompose(a: &HermitianMatrix, body: &SlicedBody) -> Result<RadialDecomposition, ConeError> {
    let face = minimal_face_containing(a, body)?;
    let b = face_barycenter(&face, body)?;
    let dir = a.sub(&b);
    if dir.frobenius() <= 1e-12 * (1.0 + b.frobenius()) {
        return Ok(RadialDecomposition {
            point: a.clone(),
            face,
            barycenter: b,
            boundary: a.clone(),
            lambda: 0.0,
        });
    }
    let at = |t: f64| b.add(&dir.scale(t));
    let (mut lo, mut hi) = (1.0, 2.0);
    while lambda_min_on(&face, &at(hi)) >= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(ConeError::Unbounded);
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if lambda_min_on(&face, &at(mid)) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let boundary = at(lo);
    Ok(RadialDecomposition {
        point: a.clone(),
        face,
        barycenter: b,
        boundary,
        lambda: 1.0 / lo,
    })
}

/// Image face of `face` under a vertex map: the join of the faces of the
/// images of basis extreme points, checked on the midpoints of basis pairs.
fn image_face<V>(face: &Face, source: &SlicedBody, vertex_map: &V) -> Result<Face, ConeError>
where
    V: Fn(&HermitianMatrix) -> HermitianMatrix,
{
    let basis = face.range().basis();
    let k = basis.len();
    let mut image: Option<Face> = None;
    for v in basis {
        let q = vertex_map(&source.extreme_point(v)?);
        let f = face_of(&q)?;
        image = Some(match image {
            None => f,
            Some(g) => face_join(&g, &f)?,
        });
    }
    let image = image.ok_or(ConeError::EmptyFace)?;
    if image.rank() != k {
        return Err(ConeError::NonFace { expected: k, found: image.rank(), witness: face.generator() });
    }
    let half = Element::real(face.field(), core::f64::consts::FRAC_1_SQRT_2);
    for i in 0..k {
        for j in i + 1..k {
            let w: FVector = basis[i].iter().zip(&basis[j]).map(|(x, y)| (*x + *y) * half).collect();
            let q = vertex_map(&source.extreme_point(&w)?);
            if !image.contains(&q) {
                let found = face_join(&image, &face_of(&q)?)?.rank();
                return Err(ConeError::NonFace { expected: k, found, witness: q });
            }
        }
    }
    Ok(image)
}

/// Extends a map on extreme points to the whole body by
/// `φ(a) = (1 − λ(a))·φ(b(a)) + λ(a)·φ(p(a))`, with `φ(b(F))` the barycenter of
/// the image face. Recursion terminates at extreme points, where `vertex_map`
/// is applied directly.
pub fn radial_extend<V>(
    source: &SlicedBody,
    target: &SlicedBody,
    vertex_map: V,
    a: &HermitianMatrix,
) -> Result<HermitianMatrix, ConeError>
where
    V: Fn(&HermitianMatrix) -> HermitianMatrix,
{
    extend_rec(source, target, &vertex_map, a)
}

fn extend_rec<V>(source: &SlicedBody, target: &SlicedBody, vertex_map: &V, a: &HermitianMatrix) -> Result<HermitianMatrix, ConeError>
where
    V: Fn(&HermitianMatrix) -> HermitianMatrix,
{
    let face = minimal_face_containing(a, source)?;
    if face.rank() == 1 {
        return Ok(vertex_map(a));
    }
    let image = image_face(&face, source, vertex_map)?;
    let image_bary = face_barycenter(&image, target)?;
    let rd = radial_decompose(a, source)?;
    if rd.lambda == 0.0 {
        return Ok(image_bary);
    }
    // Strip rounding dust outside the boundary face before recursing.
    let sub = face_of(&rd.boundary)?;
    let p = source.normalize(&linalg::expand(
        &linalg::compress(&rd.boundary, sub.range().basis()),
        sub.range().basis(),
        source.n(),
    ))?;
    let fp = extend_rec(source, target, vertex_map, &p)?;
    Ok(image_bary.scale(1.0 - rd.lambda).add(&fp.scale(rd.lambda)))
}

/// `h_F(D) = max ⟨D, A⟩` over `A ∈ F ∩ body`.
pub fn support_value(face: &Face, body: &SlicedBody, d: &HermitianMatrix) -> Result<f64, ConeError> {
    let mw = body.compressed_functional(face)?;
    let s = linalg::spectral_map(&mw, |l| 1.0 / Float::sqrt(l));
    let dw = linalg::compress(d, face.range().basis());
    let c = s.matrix().matmul(dw.matrix()).and_then(|m| m.matmul(s.matrix())).expect("shapes");
    let c = HermitianMatrix::from_upper(face.field(), face.rank(), |i, j| c[(i, j)]).expect("square");
    Ok(linalg::extreme_eigenvalues(&c).1)
}

/// Sampled Hausdorff distance `sup_D |h_F(D) − h_G(D)|` over `n_dirs` random
/// unit directions. Reusing the same RNG state gives a prefix-monotone
/// estimate in `n_dirs`.
pub fn hausdorff_distance<R: Rng + ?Sized>(
    f: &Face,
    g: &Face,
    body: &SlicedBody,
    n_dirs: usize,
    rng: &mut R,
) -> Result<f64, ConeError> {
    let dirs: Vec<HermitianMatrix> = (0..n_dirs).map(|_| sample::unit_hermitian(rng, body.field(), body.n())).collect();
    let mut best: f64 = 0.0;
    for d in &dirs {
        best = best.max((support_value(f, body, d)? - support_value(g, body, d)?).abs());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(d: &[f64]) -> HermitianMatrix {
        HermitianMatrix::diag(Field::R, d).unwrap()
    }

    fn trace3() -> SlicedBody {
        SlicedBody::trace(Field::R, 3).unwrap()
    }

    #[test]
    fn minimal_faces() {
        let body = trace3();
        assert_eq!(minimal_face_containing(&diag(&[0.5, 0.5, 0.0]), &body).unwrap().rank(), 2);
        assert_eq!(minimal_face_containing(&diag(&[1.0, 1.0, 1.0]).scale(1.0 / 3.0), &body).unwrap().rank(), 3);
        assert_eq!(minimal_face_containing(&diag(&[0.0, 1.0, 0.0]), &body).unwrap().rank(), 1);
        assert!(matches!(minimal_face_containing(&diag(&[1.0, 1.0, 0.0]), &body), Err(ConeError::NotInBody { .. })));
    }

    #[test]
    fn barycenters() {
        let body = trace3();
        let f = face_of(&diag(&[1.0, 1.0, 0.0])).unwrap();
        assert!(face_barycenter(&f, &body).unwrap().max_abs_diff(&diag(&[0.5, 0.5, 0.0])) < 1e-14);
        let e = face_of(&diag(&[0.0, 0.0, 1.0])).unwrap();
        assert!(face_barycenter(&e, &body).unwrap().max_abs_diff(&diag(&[0.0, 0.0, 1.0])) < 1e-14);
        let full = super::super::Face::full(Field::R, 3);
        assert!(face_barycenter(&full, &body).unwrap().max_abs_diff(&diag(&[1.0, 1.0, 1.0]).scale(1.0 / 3.0)) < 1e-14);
        assert_eq!(face_barycenter(&super::super::Face::apex(Field::R, 3), &body), Err(ConeError::EmptyFace));
    }

    #[test]
    fn weighted_barycenter_segment() {
        // M = diag(1, 2): the rank-2 face is the 2x2 trace-like body; on the
        // diagonal edge a11 + 2 a22 = 1 the barycenter of the full face still
        // has pairing 1 and lies in the interior.
        let body = SlicedBody::new(diag(&[1.0, 2.0])).unwrap();
        let full = super::super::Face::full(Field::R, 2);
        let b = face_barycenter(&full, &body).unwrap();
        assert!((body.pairing(&b) - 1.0).abs() < 1e-14);
        assert!(b.max_abs_diff(&diag(&[0.5, 0.25])) < 1e-14);
    }

    #[test]
    fn radial_example() {
        let body = trace3();
        let rd = radial_decompose(&diag(&[0.6, 0.4, 0.0]), &body).unwrap();
        assert!((rd.lambda - 0.2).abs() < 1e-12);
        assert!(rd.boundary.max_abs_diff(&diag(&[1.0, 0.0, 0.0])) < 1e-12);
        assert!(rd.residual() < 1e-12);
        let rd0 = radial_decompose(&diag(&[0.5, 0.5, 0.0]), &body).unwrap();
        assert_eq!(rd0.lambda, 0.0);
    }

    #[test]
    fn radial_lambda_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for field in Field::ASSOCIATIVE {
            let body = SlicedBody::trace(field, 4).unwrap();
            for _ in 0..40 {
                let k = rng.random_range(1..=4);
                let a = body.normalize(&sample::psd_of_rank(&mut rng, field, 4, k)).unwrap();
                let rd = radial_decompose(&a, &body).unwrap();
                assert!((0.0..1.0).contains(&rd.lambda));
                assert!(rd.residual() < 1e-9);
                if k > 1 {
                    assert!(face_of(&rd.boundary).unwrap().rank() < k);
                }
            }
        }
    }

    #[test]
    fn identity_extension() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let body = trace3();
        for _ in 0..50 {
            let a = body.normalize(&sample::psd(&mut rng, Field::R, 3).add(&diag(&[1e-3, 0.0, 0.0]))).unwrap();
            let img = radial_extend(&body, &body, |x: &HermitianMatrix| x.clone(), &a).unwrap();
            assert!(img.max_abs_diff(&a) < 1e-9);
        }
        let e = diag(&[1.0, 0.0, 0.0]);
        let img = radial_extend(&body, &body, |x: &HermitianMatrix| x.scale(2.0), &e).unwrap();
        assert_eq!(img, e.scale(2.0));
    }

    #[test]
    fn non_face_map_is_reported() {
        let body = trace3();
        // Sends every extreme point to one of two fixed points depending on the
        // sign of a coordinate: not face-preserving on rank-2 faces.
        let squash = |x: &HermitianMatrix| {
            if x.get(0, 0).re() > 0.4 {
                diag(&[1.0, 0.0, 0.0])
            } else {
                diag(&[0.0, 1.0, 0.0])
            }
        };
        let a = diag(&[0.2, 0.3, 0.5]);
        assert!(matches!(radial_extend(&body, &body, squash, &a), Err(ConeError::NonFace { .. })));
    }

    #[test]
    fn support_and_hausdorff() {
        let body = trace3();
        let a = diag(&[1.0, 0.0, 0.0]);
        let b = diag(&[0.0, 1.0, 0.0]);
        let (fa, fb) = (face_of(&a).unwrap(), face_of(&b).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(hausdorff_distance(&fa, &fa, &body, 50, &mut rng).unwrap(), 0.0);
        let diff = a.sub(&b);
        let exact = diff.frobenius();
        let dir = diff.scale(1.0 / exact);
        let h = (support_value(&fa, &body, &dir).unwrap() - support_value(&fb, &body, &dir).unwrap()).abs();
        assert!((h - exact).abs() < 1e-12);
        let est = hausdorff_distance(&fa, &fb, &body, 200, &mut rng).unwrap();
        assert!(est <= exact + 1e-12);
        let r1 = hausdorff_distance(&fa, &fb, &body, 10, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let r2 = hausdorff_distance(&fa, &fb, &body, 100, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!(r1 <= r2);
    }
}
