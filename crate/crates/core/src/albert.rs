//! The exceptional Jordan algebra `H₃(𝕆)` and the octonionic projective plane.
//!
//! Slot convention: for
//!
//! ```text
//!     ⎡ a  z  y ⎤
//! A = ⎢ z̄  b  x ⎥
//!     ⎣ ȳ  x̄  c ⎦
//! ```
//!
//! `x` sits in slot (2,3), `y` in (1,3) and `z` in (1,2). Points of the plane
//! are trace-1 idempotents, lines are trace-2 idempotents, and incidence is
//! face membership in the cone of squares.

use alloc::boxed::Box;
use thiserror::Error;

use num_traits::Float;
use crate::algebra::{Element, Field, HermitianMatrix};

/// λ ladder used by [`in_face`].
pub const LAMBDA_LADDER: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlbertError {
    #[error("idempotency residual {residual:e} exceeds {limit:e}")]
    NotIdempotent { residual: f64, limit: f64, witness: Box<AlbertElement> },
    #[error("expected trace {expected}, got {got}")]
    WrongTrace { expected: f64, got: f64 },
    #[error("degenerate input: the two arguments coincide (distance {0:e})")]
    Degenerate(f64),
    #[error("cross product vanishes (trace {trace:e})")]
    NormalizationFailure { trace: f64, witness: Box<AlbertElement> },
    #[error("characteristic cubic has negative discriminant {discriminant:e}")]
    NegativeDiscriminant { discriminant: f64, witness: Box<AlbertElement> },
}

/// An element of `H₃(𝕆)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlbertElement {
    pub diag: [f64; 3],
    /// Slot (2,3).
    pub x: Element,
    /// Slot (1,3).
    pub y: Element,
    /// Slot (1,2).
    pub z: Element,
}

fn oct_zero() -> Element {
    Element::zero(Field::O)
}

impl AlbertElement {
    pub fn new(diag: [f64; 3], x: Element, y: Element, z: Element) -> Self {
        assert!(
            x.field() == Field::O && y.field() == Field::O && z.field() == Field::O,
            "off-diagonal entries must be octonions"
        );
        AlbertElement { diag, x, y, z }
    }

    pub fn diagonal(diag: [f64; 3]) -> Self {
        Self::new(diag, oct_zero(), oct_zero(), oct_zero())
    }

    pub fn zero() -> Self {
        Self::diagonal([0.0; 3])
    }

    pub fn identity() -> Self {
        Self::diagonal([1.0; 3])
    }

    /// Diagonal matrix unit `E_ii` (0-based `i`).
    pub fn unit(i: usize) -> Self {
        let mut d = [0.0; 3];
        d[i] = 1.0;
        Self::diagonal(d)
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    pub fn to_matrix(&self) -> HermitianMatrix {
        let [a, b, c] = self.diag;
        HermitianMatrix::from_upper(Field::O, 3, |i, j| match (i, j) {
            (0, 0) => Element::real(Field::O, a),
            (1, 1) => Element::real(Field::O, b),
            (2, 2) => Element::real(Field::O, c),
            (0, 1) => self.z,
            (0, 2) => self.y,
            (1, 2) => self.x,
            _ => unreachable!(),
        })
        .expect("3x3 over O")
    }

    /// Reads the upper triangle of a 3×3 octonionic matrix.
    pub fn from_matrix(m: &HermitianMatrix) -> Self {
        assert!(m.field() == Field::O && m.n() == 3, "expected a 3x3 octonionic matrix");
        Self::new(
            [m.get(0, 0).re(), m.get(1, 1).re(), m.get(2, 2).re()],
            *m.get(1, 2),
            *m.get(0, 2),
            *m.get(0, 1),
        )
    }

    /// The 27 real coordinates `(a, b, c, x, y, z)`.
    pub fn coords(&self) -> [f64; 27] {
        let mut out = [0.0; 27];
        out[..3].copy_from_slice(&self.diag);
        out[3..11].copy_from_slice(self.x.coeffs());
        out[11..19].copy_from_slice(self.y.coeffs());
        out[19..27].copy_from_slice(self.z.coeffs());
        out
    }

    pub fn from_coords(c: &[f64; 27]) -> Self {
        let oct = |s: &[f64]| Element::new(Field::O, s).expect("8 coefficients");
        Self::new([c[0], c[1], c[2]], oct(&c[3..11]), oct(&c[11..19]), oct(&c[19..27]))
    }

    /// Euclidean norm of the coordinate vector.
    pub fn coord_norm(&self) -> f64 {
        Float::sqrt(self.coords().iter().map(|v| v * v).sum::<f64>())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            [self.diag[0] + o.diag[0], self.diag[1] + o.diag[1], self.diag[2] + o.diag[2]],
            self.x + o.x,
            self.y + o.y,
            self.z + o.z,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.diag.map(|d| d * s), self.x.scale(s), self.y.scale(s), self.z.scale(s))
    }

    /// Trace form `tr(A∘B)`.
    pub fn inner(&self, o: &Self) -> f64 {
        jordan_product(self, o).trace()
    }
}

/// `(AB + BA)/2`.
pub fn jordan_product(a: &AlbertElement, b: &AlbertElement) -> AlbertElement {
    AlbertElement::from_matrix(&a.to_matrix().jordan(&b.to_matrix()).expect("same shape"))
}

/// `(tr, σ, det)` of the characteristic cubic `λ³ − tr·λ² + σ·λ − det`.
pub fn char_coeffs(a: &AlbertElement) -> (f64, f64, f64) {
    let t = a.trace();
    let sigma = 0.5 * (t * t - jordan_product(a, a).trace());
    let [p, q, r] = a.diag;
    let cyc = ((a.z * a.x) * a.y.conj()).re();
    let det = p * q * r - p * a.x.norm_sqr() - q * a.y.norm_sqr() - r * a.z.norm_sqr() + 2.0 * cyc;
    (t, sigma, det)
}

/// Discriminant of the characteristic cubic.
pub fn discriminant(a: &AlbertElement) -> f64 {
    let (t, s, d) = char_coeffs(a);
    18.0 * t * s * d - 4.0 * Float::powi(t, 3) * d + t * t * s * s - 4.0 * Float::powi(s, 3) - 27.0 * d * d
}

fn coefficient_scale(t: f64, s: f64, d: f64) -> f64 {
    t.abs().max(Float::sqrt(s.abs())).max(Float::cbrt(d.abs()))
}

/// Roots of the characteristic cubic, ascending, by the trigonometric method.
///
/// The roots are real for every element of `H₃(𝕆)`; a discriminant below
/// `−1e-8·scale⁶` is reported instead of silently clamped.
pub fn char_roots(a: &AlbertElement) -> Result<[f64; 3], AlbertError> {
    let (t, s, d) = char_coeffs(a);
    let scale = coefficient_scale(t, s, d);
    let disc = discriminant(a);
    if disc < -1e-8 * Float::powi(scale, 6) {
        return Err(AlbertError::NegativeDiscriminant { discriminant: disc, witness: Box::new(a.clone()) });
    }
    Ok(cubic_roots(t, s, d))
}

/// Real roots of `λ³ − tλ² + sλ − d`, assuming all three are real.
pub fn cubic_roots(t: f64, s: f64, d: f64) -> [f64; 3] {
    let shift = t / 3.0;
    let p = s - t * t / 3.0;
    let q = -2.0 * Float::powi(t, 3) / 27.0 + t * s / 3.0 - d;
    let mut r = if p >= 0.0 {
        let m = Float::cbrt(-q);
        [m; 3]
    } else {
        let m = 2.0 * Float::sqrt(-p / 3.0);
        let arg = ((3.0 * q) / (2.0 * p) * Float::sqrt(-3.0 / p)).clamp(-1.0, 1.0);
        let theta = Float::acos(arg) / 3.0;
        let tau = 2.0 * core::f64::consts::PI / 3.0;
        [m * theta.cos(), m * (theta - tau).cos(), m * (theta - 2.0 * tau).cos()]
    };
    for x in &mut r {
        *x += shift;
    }
    r.sort_by(f64::total_cmp);
    r
}

/// All roots of the characteristic cubic are `≥ −tol` (up to scale).
///
/// For a real-rooted cubic the roots are nonnegative iff `tr`, `σ` and `det`
/// are; each coefficient is compared at its own degree of homogeneity so that
/// the test is scale-invariant.
pub fn cone_member(a: &AlbertElement, tol: f64) -> bool {
    let (t, s, d) = char_coeffs(a);
    let k = 1.0 + coefficient_scale(t, s, d);
    t >= -tol * k && s >= -tol * k * k && d >= -tol * k * k * k
}

/// Coordinate norm of `A∘A − A`.
pub fn idempotency_residual(a: &AlbertElement) -> f64 {
    jordan_product(a, a).sub(a).coord_norm()
}

pub fn is_idempotent(a: &AlbertElement, tol: f64) -> bool {
    idempotency_residual(a) <= tol
}

/// The rank-one element `vv*/|v|²` for `v = (x, y, 1)`.
pub fn chart_point(x: &Element, y: &Element) -> Result<AlbertElement, AlbertError> {
    let s = 1.0 + x.norm_sqr() + y.norm_sqr();
    let inv = 1.0 / s;
    let p = AlbertElement::new(
        [x.norm_sqr() * inv, y.norm_sqr() * inv, inv],
        y.scale(inv),
        x.scale(inv),
        (*x * y.conj()).scale(inv),
    );
    let residual = idempotency_residual(&p);
    if residual > 1e-8 {
        return Err(AlbertError::NotIdempotent { residual, limit: 1e-8, witness: Box::new(p) });
    }
    Ok(p)
}

/// `cone_member(M − λA)` for some λ on the ladder.
pub fn in_face(a: &AlbertElement, m: &AlbertElement, tol: f64) -> bool {
    LAMBDA_LADDER.iter().any(|&l| cone_member(&m.sub(&a.scale(l)), tol))
}

fn require_idempotent(p: &AlbertElement, trace: f64) -> Result<(), AlbertError> {
    let residual = idempotency_residual(p);
    if residual > 1e-8 {
        return Err(AlbertError::NotIdempotent { residual, limit: 1e-8, witness: Box::new(p.clone()) });
    }
    if (p.trace() - trace).abs() > 1e-8 {
        return Err(AlbertError::WrongTrace { expected: trace, got: p.trace() });
    }
    Ok(())
}

/// `I − P`.
pub fn dual_line(p: &AlbertElement) -> Result<AlbertElement, AlbertError> {
    require_idempotent(p, 1.0)?;
    Ok(AlbertElement::identity().sub(p))
}

/// `[A ∈ face(I − B)] = [B ∈ face(I − A)]`.
pub fn duality_check(a: &AlbertElement, b: &AlbertElement, tol: f64) -> Result<bool, AlbertError> {
    let (la, lb) = (dual_line(a)?, dual_line(b)?);
    Ok(in_face(a, &lb, tol) == in_face(b, &la, tol))
}

/// Freudenthal cross product
/// `P×Q = P∘Q − ½(tr P)Q − ½(tr Q)P + ½((tr P)(tr Q) − tr(P∘Q))·I`.
pub fn cross(p: &AlbertElement, q: &AlbertElement) -> AlbertElement {
    let (tp, tq) = (p.trace(), q.trace());
    let pq = jordan_product(p, q);
    let c = 0.5 * (tp * tq - pq.trace());
    pq.sub(&q.scale(0.5 * tp)).sub(&p.scale(0.5 * tq)).add(&AlbertElement::identity().scale(c))
}

/// The line through two distinct points, as the trace-2 idempotent `I − R`
/// with `R` the trace-normalized cross product.
pub fn line_through(p: &AlbertElement, q: &AlbertElement) -> Result<AlbertElement, AlbertError> {
    require_idempotent(p, 1.0)?;
    require_idempotent(q, 1.0)?;
    let dist = p.sub(q).coord_norm();
    if dist <= 1e-6 {
        return Err(AlbertError::Degenerate(dist));
    }
    let r = cross(p, q);
    let tr = r.trace();
    if tr.abs() < 1e-12 {
        return Err(AlbertError::NormalizationFailure { trace: tr, witness: Box::new(r) });
    }
    let e = AlbertElement::identity().sub(&r.scale(1.0 / tr));
    let residual = idempotency_residual(&e);
    if residual > 1e-8 {
        return Err(AlbertError::NotIdempotent { residual, limit: 1e-8, witness: Box::new(e) });
    }
    Ok(e)
}

/// The common point of two distinct lines.
pub fn meet_of_lines(e1: &AlbertElement, e2: &AlbertElement) -> Result<AlbertElement, AlbertError> {
    require_idempotent(e1, 2.0)?;
    require_idempotent(e2, 2.0)?;
    let id = AlbertElement::identity();
    let l = line_through(&id.sub(e1), &id.sub(e2))?;
    Ok(id.sub(&l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn oct(rng: &mut ChaCha8Rng) -> Element {
        sample::element(rng, Field::O).scale(0.8)
    }

    fn random_point(rng: &mut ChaCha8Rng) -> AlbertElement {
        chart_point(&oct(rng), &oct(rng)).unwrap()
    }

    #[test]
    fn jordan_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = AlbertElement::new([1.0, 2.0, 3.0], oct(&mut rng), oct(&mut rng), oct(&mut rng));
        assert!(jordan_product(&a, &AlbertElement::identity()).sub(&a).coord_norm() < 1e-14);
        assert_eq!(jordan_product(&AlbertElement::unit(0), &AlbertElement::unit(1)), AlbertElement::zero());
        let z = oct(&mut rng);
        let x = AlbertElement::new([0.0; 3], oct_zero(), oct_zero(), z);
        let n = z.norm_sqr();
        assert!(jordan_product(&x, &x).sub(&AlbertElement::diagonal([n, n, 0.0])).coord_norm() < 1e-14);
        // A∘A agrees with the matrix square
        let sq = a.to_matrix().matrix().matmul(a.to_matrix().matrix()).unwrap();
        assert!(jordan_product(&a, &a).to_matrix().matrix().max_abs_diff(&sq) < 1e-12);
    }

    #[test]
    fn char_coeff_examples() {
        assert_eq!(char_coeffs(&AlbertElement::identity()), (3.0, 3.0, 1.0));
        let (t, s, d) = char_coeffs(&AlbertElement::diagonal([2.0, 3.0, 5.0]));
        assert_eq!((t, s, d), (10.0, 31.0, 30.0));
        let r = cubic_roots(t, s, d);
        for (got, want) in r.iter().zip([2.0, 3.0, 5.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn determinant_annihilates_chart_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let p = random_point(&mut rng);
            let (t, s, d) = char_coeffs(&p);
            assert!((t - 1.0).abs() < 1e-12);
            assert!(s.abs() < 1e-10 && d.abs() < 1e-10, "σ = {s:e}, det = {d:e}");
        }
    }

    #[test]
    fn determinant_pairing_is_pinned() {
        // the cyclic term distinguishes (z·x)·ȳ from its conjugate pairing
        let e = |k| Element::unit(Field::O, k);
        let a = AlbertElement::new([0.0; 3], e(1), e(2) * e(1), e(2));
        let (_, _, d) = char_coeffs(&a);
        let direct = 2.0 * ((a.z * a.x) * a.y.conj()).re();
        assert_eq!(d, direct);
        assert!(d.abs() > 0.5);
    }

    #[test]
    fn cone_membership() {
        assert!(cone_member(&AlbertElement::identity(), 1e-10));
        assert!(!cone_member(&AlbertElement::diagonal([1.0, 1.0, -1.0]), 1e-10));
        assert!(cone_member(&AlbertElement::diagonal([1.0, 1.0, 0.0]), 1e-10));
    }

    #[test]
    fn idempotents() {
        assert!(is_idempotent(&AlbertElement::unit(0), 1e-12));
        assert!(!is_idempotent(&AlbertElement::identity().scale(0.5), 1e-12));
        let p = chart_point(&oct_zero(), &oct_zero()).unwrap();
        assert_eq!(p, AlbertElement::unit(2));
        let one = Element::one(Field::O);
        let p = chart_point(&one, &oct_zero()).unwrap();
        let want = AlbertElement::new([0.5, 0.0, 0.5], oct_zero(), one.scale(0.5), oct_zero());
        assert!(p.sub(&want).coord_norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = random_point(&mut rng);
            let q = AlbertElement::identity().sub(&p);
            assert!(idempotency_residual(&q) < 1e-12);
            assert!((q.trace() - 2.0).abs() < 1e-12);
            assert!(cone_member(&p, 1e-10));
            assert!(discriminant(&p) >= -1e-8);
        }
    }

    #[test]
    fn face_membership_examples() {
        let l = AlbertElement::diagonal([1.0, 1.0, 0.0]);
        assert!(in_face(&AlbertElement::unit(0), &l, 1e-10));
        assert!(!in_face(&AlbertElement::unit(2), &l, 1e-10));
        assert!(in_face(&l, &l, 1e-10));
        let (e1, e2) = (AlbertElement::unit(0), AlbertElement::unit(1));
        assert!(duality_check(&e2, &e1, 1e-10).unwrap());
        assert!(in_face(&e2, &dual_line(&e1).unwrap(), 1e-10));
        assert!(duality_check(&e1, &e1, 1e-10).unwrap());
        assert!(!in_face(&e1, &dual_line(&e1).unwrap(), 1e-10));
    }

    #[test]
    fn lines_and_meets() {
        let (e1, e2) = (AlbertElement::unit(0), AlbertElement::unit(1));
        let l = line_through(&e1, &e2).unwrap();
        assert!(l.sub(&AlbertElement::diagonal([1.0, 1.0, 0.0])).coord_norm() < 1e-14);
        assert!(matches!(line_through(&e1, &e1), Err(AlbertError::Degenerate(_))));
        let m = meet_of_lines(&AlbertElement::diagonal([1.0, 1.0, 0.0]), &AlbertElement::diagonal([1.0, 0.0, 1.0])).unwrap();
        assert!(m.sub(&e1).coord_norm() < 1e-14);
        let d = AlbertElement::diagonal([1.0, 1.0, 0.0]);
        assert!(meet_of_lines(&d, &d).is_err());
        assert!(matches!(dual_line(&AlbertElement::identity().scale(0.5)), Err(AlbertError::NotIdempotent { .. })));
    }

    #[test]
    fn incidence_and_uniqueness() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let (p, q) = (random_point(&mut rng), random_point(&mut rng));
            let l = line_through(&p, &q).unwrap();
            assert!(in_face(&p, &l, 1e-10) && in_face(&q, &l, 1e-10));
            // a third point of l, obtained by meeting l with another line
            let other = dual_line(&random_point(&mut rng)).unwrap();
            let x = meet_of_lines(&l, &other).unwrap();
            assert!(in_face(&x, &l, 1e-10) && in_face(&x, &other, 1e-10));
            let l2 = line_through(&p, &x).unwrap();
            assert!(l2.sub(&l).coord_norm() < 1e-8);
        }
    }

    #[test]
    fn membership_invariant_under_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = AlbertElement::new(
                [sample::element(&mut rng, Field::R).re(), 0.5, 1.0],
                oct(&mut rng),
                oct(&mut rng),
                oct(&mut rng),
            );
            // simultaneous row/column swap of indices 1 and 2
            let m = a.to_matrix();
            let perm = HermitianMatrix::from_upper(Field::O, 3, |i, j| {
                let s = [0usize, 2, 1];
                *m.get(s[i], s[j])
            })
            .unwrap();
            let b = AlbertElement::from_matrix(&perm);
            let (ra, rb) = (cubic_roots_of(&a), cubic_roots_of(&b));
            for (x, y) in ra.iter().zip(&rb) {
                assert!((x - y).abs() < 1e-9);
            }
            assert_eq!(cone_member(&a, 1e-10), cone_member(&b, 1e-10));
        }
    }

    #[test]
    fn membership_invariant_under_orthogonal_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            // quaternionic entries, so the conjugation stays inside one associative slice
            let quat = |rng: &mut ChaCha8Rng| {
                let h = sample::element(rng, Field::H);
                h.embed(Field::O)
            };
            let a = AlbertElement::new([1.0, 0.2, -0.1], quat(&mut rng), quat(&mut rng), quat(&mut rng));
            let q = sample::orthogonal(&mut rng, 3);
            let m = a.to_matrix();
            let b = HermitianMatrix::from_upper(Field::O, 3, |i, j| {
                let mut acc = Element::zero(Field::O);
                for k in 0..3 {
                    for l in 0..3 {
                        acc = acc + m.get(k, l).scale(q[(i, k)] * q[(j, l)]);
                    }
                }
                acc
            })
            .unwrap();
            let b = AlbertElement::from_matrix(&b);
            let (ca, cb) = (char_coeffs(&a), char_coeffs(&b));
            assert!((ca.0 - cb.0).abs() < 1e-10 && (ca.1 - cb.1).abs() < 1e-10 && (ca.2 - cb.2).abs() < 1e-10);
            assert_eq!(cone_member(&a, 1e-10), cone_member(&b, 1e-10));
        }
    }

    fn cubic_roots_of(a: &AlbertElement) -> [f64; 3] {
        char_roots(a).unwrap()
    }
}
