//! Bodies projectively equivalent to the trace slice of C₃(ℝ).
//!
//! A [`ProjectiveModel`] is such a body given by an invertible 6×6 matrix `G`
//! sending the coordinates (x₁₁, x₂₂, x₃₃, x₁₂, x₁₃, x₂₃) of a symmetric 3×3
//! matrix to homogeneous coordinates of ℝ⁵. Extreme points are images of
//! rank-one projectors and faces are images of the disks of trace-one PSD
//! matrices supported on a 2-dimensional subspace.

use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix3, Matrix6, Matrix6x3, SMatrix, SymmetricEigen, Vector3, Vector6};
use num_traits::{Float, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

use super::config::{factor_condition, normal_form_points, INCIDENCE, QUADRANGLE};
use super::Rp5Error;
use crate::cone_faces::SlicedBody;
use crate::rational::{q, QMatrix, Q};
use crate::Field;

/// Two spans meet when their distance is below this.
pub const SPAN_TOL: f64 = 1e-8;
/// Homogeneous points closer than this (relative) to the hyperplane at
/// infinity are not dehomogenized.
pub const FINITE_RATIO: f64 = 0.05;

pub const DEFAULT_QUADRANGLE: [[i64; 3]; 4] = [[1, 2, -3], [2, 0, 0], [1, -1, 3], [-3, -2, -1]];

pub fn sym_vec(m: &Matrix3<f64>) -> Vector6<f64> {
    Vector6::new(m[(0, 0)], m[(1, 1)], m[(2, 2)], m[(0, 1)], m[(0, 2)], m[(1, 2)])
}

pub fn sym_unvec(v: &Vector6<f64>) -> Matrix3<f64> {
    Matrix3::new(v[0], v[3], v[4], v[3], v[1], v[5], v[4], v[5], v[2])
}

pub fn rank_one(v: &Vector3<f64>) -> Matrix3<f64> {
    v * v.transpose() / v.norm_squared()
}

fn cross_i(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// The seven vectors of ℝ³ whose lines realize the configuration: the
/// quadrangle at indices 0, 1, 3, 5 and its diagonal points at 2, 4, 6.
pub fn seven_vectors_exact(quad: [[i64; 3]; 4]) -> [[i64; 3]; 7] {
    let [v0, v1, v3, v5] = quad;
    let v2 = cross_i(cross_i(v0, v1), cross_i(v3, v5));
    let v4 = cross_i(cross_i(v0, v3), cross_i(v1, v5));
    let v6 = cross_i(cross_i(v0, v5), cross_i(v1, v3));
    [v0, v1, v2, v3, v4, v5, v6]
}

pub fn seven_vectors(quad: &[Vector3<f64>; 4]) -> [Vector3<f64>; 7] {
    let [v0, v1, v3, v5] = quad;
    let v2 = v0.cross(v1).cross(&v3.cross(v5));
    let v4 = v0.cross(v3).cross(&v1.cross(v5));
    let v6 = v0.cross(v5).cross(&v1.cross(v3));
    [*v0, *v1, v2, *v3, v4, *v5, v6]
}

fn sym_vec_exact(v: [i64; 3]) -> [Q; 6] {
    let n = q(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    [v[0] * v[0], v[1] * v[1], v[2] * v[2], v[0] * v[1], v[0] * v[2], v[1] * v[2]].map(|x| q(x) / &n)
}

/// The unique projective map sending `src[i]` to a multiple of `dst[i]` for
/// the seven points of a frame of ℝP⁵.
pub fn frame_map_exact(src: &[[Q; 6]; 7], dst: &[[Q; 6]; 7]) -> Result<QMatrix, Rp5Error> {
    let h = QMatrix::from_fn(6, 6, |r, c| src[c][r].clone());
    let hp = QMatrix::from_fn(6, 6, |r, c| dst[c][r].clone());
    let alpha = h.solve(&src[6]).ok_or(Rp5Error::GeneralPosition)?;
    let beta = hp.solve(&dst[6]).ok_or(Rp5Error::GeneralPosition)?;
    if alpha.iter().chain(beta.iter()).any(|x| x.is_zero()) {
        return Err(Rp5Error::GeneralPosition);
    }
    let hinv = h.inverse().ok_or(Rp5Error::GeneralPosition)?;
    let scaled = QMatrix::from_fn(6, 6, |r, c| &hp[(r, c)] * &beta[c] / &alpha[c]);
    Ok(scaled.mul(&hinv))
}

pub fn frame_map(src: &[Vector6<f64>; 7], dst: &[Vector6<f64>; 7]) -> Result<Matrix6<f64>, Rp5Error> {
    let h = Matrix6::from_columns(&src[..6]);
    let hp = Matrix6::from_columns(&dst[..6]);
    let hinv = h.try_inverse().ok_or(Rp5Error::GeneralPosition)?;
    let hpinv = hp.try_inverse().ok_or(Rp5Error::GeneralPosition)?;
    let alpha = hinv * src[6];
    let beta = hpinv * dst[6];
    let small = |v: &Vector6<f64>| v.iter().any(|x| x.abs() < 1e-12 * v.amax());
    if small(&alpha) || small(&beta) {
        return Err(Rp5Error::GeneralPosition);
    }
    let d = Matrix6::from_diagonal(&beta.component_div(&alpha));
    let m = hp * d * hinv;
    Ok(m / m.norm())
}

/// A projective plane of ℝP⁵: a 3-dimensional subspace of ℝ⁶ with an
/// orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Span {
    basis: Matrix6x3<f64>,
}

impl Span {
    pub fn from_vectors(v: &[Vector6<f64>; 3]) -> Result<Self, Rp5Error> {
        let m = Matrix6x3::from_columns(v);
        let svd = m.svd(true, false);
        let s = &svd.singular_values;
        let smax = s.max();
        let rank = s.iter().filter(|&&x| x > 1e-10 * smax).count();
        if smax == 0.0 || rank < 3 {
            return Err(Rp5Error::RankDeficient { expected: 3, found: rank });
        }
        Ok(Span { basis: svd.u.expect("requested") })
    }

    /// The affine plane through three points of ℝ⁵.
    pub fn from_affine_points(p: &[[f64; 5]; 3]) -> Result<Self, Rp5Error> {
        Self::from_vectors(&p.map(|x| Vector6::new(x[0], x[1], x[2], x[3], x[4], 1.0)))
    }

    pub fn basis(&self) -> &Matrix6x3<f64> {
        &self.basis
    }

    pub fn coords(&self, h: &Vector6<f64>) -> Vector3<f64> {
        self.basis.transpose() * h
    }

    /// Relative distance of a point from the span.
    pub fn point_residual(&self, h: &Vector6<f64>) -> f64 {
        (h - self.basis * self.coords(h)).norm() / h.norm()
    }

    /// Sine of the smallest principal angle; zero iff the planes meet in ℝP⁵.
    pub fn distance(&self, other: &Span) -> f64 {
        let p = Matrix6::identity() - self.basis * self.basis.transpose();
        (p * other.basis).singular_values().min()
    }

    /// The unique common point of two planes.
    pub fn meet_point(&self, other: &Span) -> Result<Vector6<f64>, Rp5Error> {
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<6, 3>(0, 0).copy_from(&self.basis);
        m.fixed_view_mut::<6, 3>(0, 3).copy_from(&(-other.basis));
        let svd = m.svd(false, true);
        let mut order: Vec<usize> = (0..6).collect();
        order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
        let (smallest, second) = (svd.singular_values[order[0]], svd.singular_values[order[1]]);
        if smallest > 1e-6 || second < 1e-6 {
            return Err(Rp5Error::NoUniqueMeet { smallest, second });
        }
        let v = svd.v_t.expect("requested").row(order[0]).transpose();
        let p = self.basis * Vector3::new(v[0], v[1], v[2]);
        Ok(p / p.norm())
    }

    pub fn transform(&self, m: &Matrix6<f64>) -> Result<Span, Rp5Error> {
        let b = m * self.basis;
        Self::from_vectors(&[b.column(0).into(), b.column(1).into(), b.column(2).into()])
    }
}

/// Seven extreme points p₀..p₆ and six faces F₁..F₆ in projective-plane
/// position, with each face's boundary conic.
#[derive(Clone, Debug)]
pub struct SevenPointConfig {
    /// Homogeneous coordinates; the scale is part of the data because the
    /// conics are written in these coordinates.
    pub points: [Vector6<f64>; 7],
    pub spans: [Span; 6],
    pub incidence: [[usize; 3]; 6],
    /// `conics[i]` in coordinates u ↦ Σ u_k · points[incidence[i][k]];
    /// boundary iff uᵀKu = 0, interior where positive.
    pub conics: [Matrix3<f64>; 6],
}

impl SevenPointConfig {
    /// The matrix whose columns are the three points of face `i`.
    pub fn point_frame(&self, i: usize) -> Matrix6x3<f64> {
        Matrix6x3::from_columns(&self.incidence[i].map(|k| self.points[k]))
    }

    /// Largest relative distance of a point from a span it should lie on.
    pub fn incidence_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, pts) in self.incidence.iter().enumerate() {
            for &k in pts {
                worst = worst.max(self.spans[i].point_residual(&self.points[k]));
            }
        }
        worst
    }
}

#[derive(Clone, Debug)]
pub struct ProjectiveModel {
    g: Matrix6<f64>,
    g_inv: Matrix6<f64>,
    vectors: [Vector3<f64>; 7],
    config: SevenPointConfig,
}

fn orthonormal_pair(x: &Vector3<f64>, y: &Vector3<f64>) -> Result<(Vector3<f64>, Vector3<f64>), Rp5Error> {
    let xh = x.normalize();
    let r = y - xh * xh.dot(y);
    if r.norm() < 1e-10 * y.norm() {
        return Err(Rp5Error::RankDeficient { expected: 2, found: 1 });
    }
    Ok((xh, r.normalize()))
}

fn det2(m: &nalgebra::Matrix2<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

impl ProjectiveModel {
    /// The body with normalization `g` and the configuration generated by a
    /// quadrangle of lines in ℝ³.
    pub fn new(g: Matrix6<f64>, quadrangle: &[Vector3<f64>; 4]) -> Result<Self, Rp5Error> {
        let g_inv = g.try_inverse().ok_or(Rp5Error::SingularNormalization)?;
        let vectors = seven_vectors(quadrangle);
        if vectors.iter().any(|v| v.norm() < 1e-12) {
            return Err(Rp5Error::GeneralPosition);
        }
        let points = vectors.map(|v| g * sym_vec(&rank_one(&v)));
        let hinv = Matrix6::from_columns(&points[..6]).try_inverse().ok_or(Rp5Error::GeneralPosition)?;
        let alpha = hinv * points[6];
        if alpha.iter().any(|x| x.abs() < 1e-10 * alpha.amax()) {
            return Err(Rp5Error::GeneralPosition);
        }
        let mut spans = Vec::with_capacity(6);
        let mut conics = [Matrix3::zeros(); 6];
        for (i, pts) in INCIDENCE.iter().enumerate() {
            let (x, y) = orthonormal_pair(&vectors[pts[0]], &vectors[pts[1]])?;
            spans.push(Self::span_for(&g, &x, &y)?);
            let v = nalgebra::Matrix3x2::from_columns(&[x, y]);
            let xs: [nalgebra::Matrix2<f64>; 3] = pts.map(|k| v.transpose() * rank_one(&vectors[k]) * v);
            for a in 0..3 {
                for b in 0..3 {
                    conics[i][(a, b)] = if a == b {
                        det2(&xs[a])
                    } else {
                        0.5 * (det2(&(xs[a] + xs[b])) - det2(&xs[a]) - det2(&xs[b]))
                    };
                }
            }
        }
        let spans: [Span; 6] = spans.try_into().expect("six spans");
        let config = SevenPointConfig { points, spans, incidence: INCIDENCE, conics };
        Ok(ProjectiveModel { g, g_inv, vectors, config })
    }

    fn span_for(g: &Matrix6<f64>, x: &Vector3<f64>, y: &Vector3<f64>) -> Result<Span, Rp5Error> {
        let sym = x * y.transpose() + y * x.transpose();
        Span::from_vectors(&[g * sym_vec(&(x * x.transpose())), g * sym_vec(&(y * y.transpose())), g * sym_vec(&sym)])
    }

    /// The image `T(self)` under a projective map, configured by a new
    /// quadrangle (given in the canonical coordinates of the body).
    pub fn transformed(&self, t: &Matrix6<f64>, quadrangle: &[Vector3<f64>; 4]) -> Result<Self, Rp5Error> {
        Self::new(t * self.g, quadrangle)
    }

    pub fn normalization(&self) -> &Matrix6<f64> {
        &self.g
    }

    pub fn config(&self) -> &SevenPointConfig {
        &self.config
    }

    /// The lines of ℝ³ behind p₀..p₆.
    pub fn vectors(&self) -> &[Vector3<f64>; 7] {
        &self.vectors
    }

    pub fn pushforward(&self, a: &Matrix3<f64>) -> Vector6<f64> {
        self.g * sym_vec(a)
    }

    /// The symmetric matrix behind a homogeneous point (up to scale).
    pub fn pullback(&self, h: &Vector6<f64>) -> Matrix3<f64> {
        sym_unvec(&(self.g_inv * h))
    }

    pub fn extreme_point(&self, v: &Vector3<f64>) -> Vector6<f64> {
        self.pushforward(&rank_one(v))
    }

    /// The span of the face whose preimage is supported on span(x, y).
    pub fn face_span(&self, x: &Vector3<f64>, y: &Vector3<f64>) -> Result<Span, Rp5Error> {
        let (x, y) = orthonormal_pair(x, y)?;
        Self::span_for(&self.g, &x, &y)
    }

    /// A boundary point of the face supported on span(x, y), at angle `theta`.
    pub fn boundary_point(&self, x: &Vector3<f64>, y: &Vector3<f64>, theta: f64) -> Result<Vector6<f64>, Rp5Error> {
        let (x, y) = orthonormal_pair(x, y)?;
        Ok(self.extreme_point(&(x * Float::cos(theta) + y * Float::sin(theta))))
    }

    fn spectrum(&self, h: &Vector6<f64>) -> (Vec<(f64, Vector3<f64>)>, f64) {
        let m = self.pullback(h);
        let e = SymmetricEigen::new(m);
        let mut pairs: Vec<(f64, Vector3<f64>)> =
            (0..3).map(|k| (e.eigenvalues[k], e.eigenvectors.column(k).into())).collect();
        pairs.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()));
        let top = pairs[0].0.abs();
        let rest = pairs[1].0.abs() + pairs[2].0.abs();
        (pairs, if top == 0.0 { f64::INFINITY } else { rest / top })
    }

    /// Zero iff the point is an extreme point of the body (rank one after
    /// pullback, up to sign and scale).
    pub fn extreme_residual(&self, h: &Vector6<f64>) -> f64 {
        self.spectrum(h).1
    }

    /// The line of ℝ³ behind an extreme point.
    pub fn extreme_direction(&self, h: &Vector6<f64>) -> Result<Vector3<f64>, Rp5Error> {
        let (pairs, res) = self.spectrum(h);
        if res > 1e-6 {
            return Err(Rp5Error::NotExtreme(res));
        }
        Ok(pairs[0].1)
    }

    /// The span of the face generated by two extreme points.
    pub fn face_through(&self, h1: &Vector6<f64>, h2: &Vector6<f64>) -> Result<Span, Rp5Error> {
        let (x, y) = (self.extreme_direction(h1)?, self.extreme_direction(h2)?);
        self.face_span(&x, &y)
    }

    /// Zero iff the span is the span of a face: all pulled-back matrices
    /// annihilate a common vector.
    ///
    /// Measured as the smallest singular value of the stacked normalized
    /// pullbacks, which avoids squaring them.
    pub fn face_residual(&self, s: &Span) -> f64 {
        let mut stack = SMatrix::<f64, 9, 3>::zeros();
        for k in 0..3 {
            let m = self.pullback(&s.basis().column(k).into());
            stack.fixed_view_mut::<3, 3>(3 * k, 0).copy_from(&(m / m.norm()));
        }
        stack.singular_values().min()
    }

    pub fn random_face<R: Rng + ?Sized>(rng: &mut R) -> (Vector3<f64>, Vector3<f64>) {
        (random_vector(rng), random_vector(rng))
    }
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    Vector3::from_fn(|_, _| rng.sample(StandardNormal))
}

/// Smallest |det| of a triple of normalized vectors that should be
/// independent, for quadrangles drawn by [`random_quadrangle`].
pub const QUADRANGLE_SPREAD: f64 = 0.1;

/// Spread of a quadrangle: the smallest |det| over the triples of its seven
/// normalized configuration vectors that are not collinear.
pub fn quadrangle_spread(quad: &[Vector3<f64>; 4]) -> f64 {
    let raw = seven_vectors(quad);
    if raw.iter().any(|x| x.norm() < 1e-12) {
        return 0.0;
    }
    let v = raw.map(|x| x.normalize());
    let mut worst = f64::INFINITY;
    for a in 0..7 {
        for b in a + 1..7 {
            for c in b + 1..7 {
                if INCIDENCE.contains(&[a, b, c]) {
                    continue;
                }
                worst = worst.min(Matrix3::from_columns(&[v[a], v[b], v[c]]).determinant().abs());
            }
        }
    }
    worst
}

/// A random quadrangle with spread at least [`QUADRANGLE_SPREAD`].
pub fn random_quadrangle<R: Rng + ?Sized>(rng: &mut R) -> [Vector3<f64>; 4] {
    loop {
        let q = core::array::from_fn(|_| random_vector(rng));
        if quadrangle_spread(&q) >= QUADRANGLE_SPREAD {
            return q;
        }
    }
}

pub fn random_point<R: Rng + ?Sized>(rng: &mut R) -> Vector6<f64> {
    Vector6::from_fn(|_, _| rng.sample(StandardNormal))
}

/// A random affine 2-plane of ℝ⁵.
pub fn random_plane<R: Rng + ?Sized>(rng: &mut R) -> Span {
    loop {
        let p: [[f64; 5]; 3] = core::array::from_fn(|_| core::array::from_fn(|_| rng.sample(StandardNormal)));
        if let Ok(s) = Span::from_affine_points(&p) {
            return s;
        }
    }
}

pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R) -> Matrix6<f64> {
    loop {
        let t = Matrix6::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let s = t.singular_values();
        if s.min() > 1e-2 * s.max() {
            return t;
        }
    }
}

/// The trace slice of C₃(ℝ) moved to the normal form.
#[derive(Clone, Debug)]
pub struct CanonicalBody {
    pub body: SlicedBody,
    pub model: ProjectiveModel,
    /// Exact normalization map on the coordinates of [`sym_vec`].
    pub normalization: QMatrix,
    pub vectors: [[i64; 3]; 7],
    /// Exact homogeneous images of the seven projectors.
    pub images: [[Q; 6]; 7],
}

impl CanonicalBody {
    /// Exact homogeneous image of the projector onto the line of `v`.
    pub fn image_exact(&self, v: [i64; 3]) -> [Q; 6] {
        let x = sym_vec_exact(v);
        let y = self.normalization.mul_vec(&x);
        core::array::from_fn(|i| y[i].clone())
    }

    /// Boundary conics of F₁..F₆ in the coordinates of their three incident
    /// normal-form points `(pₖ, 1)`.
    pub fn exact_conics(&self) -> [QMatrix; 6] {
        let v = self.vectors;
        let det2 = |m: &[[Q; 2]; 2]| &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        core::array::from_fn(|face| {
            let pts = INCIDENCE[face];
            let basis = [v[pts[0]], v[pts[1]]];
            // Vᵀ vₖvₖᵀ V / λₖ with λₖ the last coordinate of the image
            let xs: [[[Q; 2]; 2]; 3] = pts.map(|k| {
                let w = basis.map(|b| q(b[0] * v[k][0] + b[1] * v[k][1] + b[2] * v[k][2]));
                let n = q(v[k].iter().map(|x| x * x).sum());
                let lambda = &self.images[k][5] * &n;
                core::array::from_fn(|r| core::array::from_fn(|c| &w[r] * &w[c] / &lambda))
            });
            let sum = |a: &[[Q; 2]; 2], b: &[[Q; 2]; 2]| -> [[Q; 2]; 2] {
                core::array::from_fn(|r| core::array::from_fn(|c| &a[r][c] + &b[r][c]))
            };
            QMatrix::from_fn(3, 3, |a, b| {
                if a == b {
                    det2(&xs[a])
                } else {
                    (det2(&sum(&xs[a], &xs[b])) - det2(&xs[a]) - det2(&xs[b])) / q(2)
                }
            })
        })
    }

    /// Largest deviation of the dehomogenized images from p₀..p₆.
    pub fn normal_form_residual(&self) -> f64 {
        let target = normal_form_points();
        let mut worst: f64 = 0.0;
        for (img, t) in self.images.iter().zip(target.iter()) {
            for k in 0..5 {
                let d = &img[k] / &img[5] - &t[k];
                worst = worst.max(d.to_f64().unwrap_or(f64::INFINITY).abs());
            }
        }
        worst
    }

    /// Normal-form parameters (a, b, c, d, e, f) of a span: its meets with
    /// S₁, S₂, S₃. `None` when a meet is at or near infinity.
    pub fn span_params(&self, s: &Span) -> Option<[f64; 6]> {
        let spans = &self.model.config().spans;
        let mut pts = [[0.0; 5]; 3];
        for k in 0..3 {
            let h = spans[k].meet_point(s).ok()?;
            if h[5].abs() < FINITE_RATIO * h.norm() {
                return None;
            }
            pts[k] = core::array::from_fn(|i| h[i] / h[5]);
        }
        Some([pts[0][0], pts[0][1], pts[1][2], pts[1][3], pts[2][0], pts[2][4]])
    }
}

pub fn canonical_body() -> Result<CanonicalBody, Rp5Error> {
    canonical_body_with(DEFAULT_QUADRANGLE)
}

/// Canonical body built from a quadrangle of integer vectors.
pub fn canonical_body_with(quadrangle: [[i64; 3]; 4]) -> Result<CanonicalBody, Rp5Error> {
    let vectors = seven_vectors_exact(quadrangle);
    if vectors.iter().any(|v| v.iter().all(|&x| x == 0)) {
        return Err(Rp5Error::GeneralPosition);
    }
    let src = vectors.map(sym_vec_exact);
    let nf = normal_form_points();
    let dst: [[Q; 6]; 7] = core::array::from_fn(|i| core::array::from_fn(|k| if k < 5 { nf[i][k].clone() } else { q(1) }));
    let normalization = frame_map_exact(&src, &dst)?;
    let images = src.clone().map(|x| {
        let y = normalization.mul_vec(&x);
        core::array::from_fn(|i| y[i].clone())
    });
    let gf = normalization.to_f64();
    let g = Matrix6::from_fn(|r, c| gf[(r, c)]);
    let quad = QUADRANGLE.map(|k| Vector3::from_fn(|i, _| vectors[k][i] as f64));
    let model = ProjectiveModel::new(g, &quad)?;
    let body = SlicedBody::trace(Field::R, 3).map_err(|_| Rp5Error::SingularNormalization)?;
    Ok(CanonicalBody { body, model, normalization, vectors, images })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpansCheck {
    pub base: [f64; 6],
    pub sampled_max: f64,
    pub samples: usize,
    pub passed: bool,
}

/// Whether `s` meets the six base spans and `n_samples` random face spans.
pub fn spans_check<R: Rng + ?Sized>(s: &Span, model: &ProjectiveModel, n_samples: usize, rng: &mut R) -> SpansCheck {
    let base = core::array::from_fn(|i| model.config().spans[i].distance(s));
    let mut sampled_max: f64 = 0.0;
    let mut samples = 0;
    while samples < n_samples {
        let (x, y) = ProjectiveModel::random_face(rng);
        let Ok(f) = model.face_span(&x, &y) else { continue };
        sampled_max = sampled_max.max(f.distance(s));
        samples += 1;
    }
    let passed = base.iter().all(|&d| d < SPAN_TOL) && sampled_max < SPAN_TOL;
    SpansCheck { base, sampled_max, samples, passed }
}

/// Projective conic through sample points (homogeneous coordinates in ℝ³),
/// normalized to unit Frobenius norm.
pub fn fit_conic(samples: &[Vector3<f64>]) -> Result<Matrix3<f64>, Rp5Error> {
    if samples.len() < 5 {
        return Err(Rp5Error::DegenerateConic);
    }
    let rows = samples.len().max(6);
    let mut m = DMatrix::zeros(rows, 6);
    for (r, u) in samples.iter().enumerate() {
        let u = u.normalize();
        let row = [u[0] * u[0], u[1] * u[1], u[2] * u[2], 2.0 * u[0] * u[1], 2.0 * u[0] * u[2], 2.0 * u[1] * u[2]];
        for (c, x) in row.iter().enumerate() {
            m[(r, c)] = *x;
        }
    }
    let svd = m.svd(false, true);
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or(Rp5Error::DegenerateConic)?;
    let v = svd.v_t.expect("requested").row(k).transpose();
    let c = Matrix3::new(v[0], v[3], v[4], v[3], v[1], v[5], v[4], v[5], v[2]);
    Ok(c / c.norm())
}

pub fn conic_residual(k: &Matrix3<f64>, u: &Vector3<f64>) -> f64 {
    (u.transpose() * k * u)[(0, 0)].abs() / (k.norm() * u.norm_squared())
}

/// Fits the boundary conic of the face on span(x, y) from six boundary
/// samples and returns the worst residual at `n_test` further samples.
pub fn boundary_conic_residual<R: Rng + ?Sized>(
    model: &ProjectiveModel,
    x: &Vector3<f64>,
    y: &Vector3<f64>,
    n_test: usize,
    rng: &mut R,
) -> Result<f64, Rp5Error> {
    let span = model.face_span(x, y)?;
    let sample = |rng: &mut R| -> Result<Vector3<f64>, Rp5Error> {
        let theta = rng.random_range(0.0..core::f64::consts::PI);
        Ok(span.coords(&model.boundary_point(x, y, theta)?))
    };
    let fit: Vec<Vector3<f64>> = (0..6).map(|_| sample(rng)).collect::<Result<_, _>>()?;
    let k = fit_conic(&fit)?;
    let mut worst: f64 = 0.0;
    for _ in 0..n_test {
        worst = worst.max(conic_residual(&k, &sample(rng)?));
    }
    Ok(worst)
}

/// Agreement of the quadratic factor with the boundary of F₁.
#[derive(Clone, Debug, PartialEq)]
pub struct ConicFactorCheck {
    pub c: f64,
    pub d: f64,
    /// Worst relative value of the quadratic factor on boundary points of F₁.
    pub quadratic_residual: f64,
    /// Smallest relative value of the linear factor on the same points.
    pub linear_min: f64,
    /// Distance between the quadratic factor and the conic fitted in S₁,
    /// both normalized, up to sign.
    pub fitted_distance: f64,
}

impl CanonicalBody {
    /// Fixes the boundary point of F₂ on the line of `s·v₀ + t·v₃`, factors
    /// the combined condition exactly at its (c, d), and tests the quadratic
    /// factor on `n` boundary points of F₁.
    pub fn conic_factor_check<R: Rng + ?Sized>(&self, s: i64, t: i64, n: usize, rng: &mut R) -> Result<Option<ConicFactorCheck>, Rp5Error> {
        let [v0, _, _, v3, _, _, _] = self.vectors;
        let v = core::array::from_fn(|i| s * v0[i] + t * v3[i]);
        let h = self.image_exact(v);
        let hf: [f64; 6] = h.clone().map(|x| x.to_f64().unwrap_or(f64::NAN));
        let norm = Float::sqrt(hf.iter().map(|x| x * x).sum::<f64>());
        if hf[5].abs() < FINITE_RATIO * norm {
            return Ok(None);
        }
        let c = &h[2] / &h[5];
        let d = &h[3] / &h[5];
        if c.is_zero() || d.is_zero() {
            return Ok(None);
        }
        let f = factor_condition(&c, &d)?;
        let kq = f.conic_matrix().to_f64();
        let kq = Matrix3::from_fn(|r, col| kq[(r, col)]);
        let kq = kq / kq.norm();
        let [al, be, ga] = f.line_coefficients().map(|x| x.to_f64().unwrap_or(f64::NAN));
        let lnorm = Float::sqrt(al * al + be * be + ga * ga);

        let vf = self.model.vectors();
        let (x, y) = (vf[0], vf[1]);
        let span = self.model.config().spans[0].clone();
        let mut quadratic_residual: f64 = 0.0;
        let mut linear_min = f64::INFINITY;
        let mut fit = Vec::new();
        let mut taken = 0;
        while taken < n {
            let theta = rng.random_range(0.0..core::f64::consts::PI);
            let p = self.model.boundary_point(&x, &y, theta)?;
            fit.push(span.coords(&p));
            if p[5].abs() < FINITE_RATIO * p.norm() {
                continue;
            }
            let w = Vector3::new(p[0] / p[5], p[1] / p[5], 1.0);
            quadratic_residual = quadratic_residual.max(conic_residual(&kq, &w));
            linear_min = linear_min.min((al * w[0] + be * w[1] + ga).abs() / (lnorm * w.norm()));
            taken += 1;
        }
        // express the factor in the coordinates of the span basis
        let mut e = Matrix6x3::zeros();
        e[(0, 0)] = 1.0;
        e[(1, 1)] = 1.0;
        e[(5, 2)] = 1.0;
        let tmat = span.basis().transpose() * e;
        let tinv = tmat.try_inverse().ok_or(Rp5Error::SingularNormalization)?;
        let kspan = tinv.transpose() * kq * tinv;
        let kspan = kspan / kspan.norm();
        let kfit = fit_conic(&fit)?;
        let fitted_distance = (kspan - kfit).norm().min((kspan + kfit).norm());
        Ok(Some(ConicFactorCheck {
            c: c.to_f64().unwrap_or(f64::NAN),
            d: d.to_f64().unwrap_or(f64::NAN),
            quadratic_residual,
            linear_min,
            fitted_distance,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rp5::config::combined_condition_poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seven_points_hit_normal_form() {
        let cb = canonical_body().unwrap();
        assert_eq!(cb.normal_form_residual(), 0.0);
        assert!(cb.model.config().incidence_residual() < 1e-12);
        for (i, p) in cb.model.config().points.iter().enumerate() {
            assert!(cb.model.extreme_residual(p) < 1e-12, "point {i}");
        }
    }

    #[test]
    fn collinear_triples_are_coplanar_lines() {
        let v = seven_vectors_exact(DEFAULT_QUADRANGLE);
        for t in INCIDENCE {
            let [a, b, c] = t.map(|k| v[k]);
            let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
            assert_eq!(det, 0, "{t:?}");
        }
        let det = |a: [i64; 3], b: [i64; 3], c: [i64; 3]| {
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
        };
        // the diagonal points are not collinear
        assert_ne!(det(v[2], v[4], v[6]), 0);
    }

    #[test]
    fn exact_conics_match_model() {
        let cb = canonical_body().unwrap();
        let lambda: [f64; 7] = core::array::from_fn(|k| cb.model.config().points[k][5]);
        for (face, k) in cb.exact_conics().iter().enumerate() {
            for i in 0..3 {
                assert!(k[(i, i)].is_zero());
            }
            assert!(!k.det().is_zero());
            let pts = INCIDENCE[face];
            let kf = cb.model.config().conics[face];
            let scaled = Matrix3::from_fn(|r, c| kf[(r, c)] / (lambda[pts[r]] * lambda[pts[c]]));
            let ke = k.to_f64();
            let ke = Matrix3::from_fn(|r, c| ke[(r, c)]);
            let (a, b) = (ke / ke.norm(), scaled / scaled.norm());
            assert!((a - b).norm().min((a + b).norm()) < 1e-10, "face {face}");
        }
    }

    #[test]
    fn base_spans_parametrize_to_zero() {
        let cb = canonical_body().unwrap();
        let poly = combined_condition_poly().unwrap();
        for i in 3..6 {
            let p = cb.span_params(&cb.model.config().spans[i]).unwrap();
            let x = [p[0], p[1], p[2], p[3], 0.0, 0.0];
            assert!(poly.eval_f64(&x).abs() < 1e-9, "span {}", i + 1);
        }
    }

    #[test]
    fn sampled_spans_satisfy_combined_condition() {
        let cb = canonical_body().unwrap();
        let poly = combined_condition_poly().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        for _ in 0..200 {
            let (x, y) = ProjectiveModel::random_face(&mut rng);
            let s = cb.model.face_span(&x, &y).unwrap();
            if let Some(p) = cb.span_params(&s) {
                let x = [p[0], p[1], p[2], p[3], 0.0, 0.0];
                let scale = poly.magnitude_f64(&x);
                assert!(poly.eval_f64(&x).abs() <= 1e-8 * scale, "{p:?}");
                checked += 1;
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn spans_forward_and_random() {
        let cb = canonical_body().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (x, y) = ProjectiveModel::random_face(&mut rng);
            let s = cb.model.face_span(&x, &y).unwrap();
            assert!(spans_check(&s, &cb.model, 20, &mut rng).passed);
            assert!(!spans_check(&random_plane(&mut rng), &cb.model, 20, &mut rng).passed);
        }
    }

    #[test]
    fn five_of_six_fails() {
        // a plane through p₀ and one point on each of S₄, S₅ meets S₁, S₂,
        // S₃ (at p₀), S₄, S₅, and generically misses S₆
        let cb = canonical_body().unwrap();
        let cfg = cb.model.config();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inside = |i: usize, rng: &mut ChaCha8Rng| cfg.spans[i].basis() * Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let s = Span::from_vectors(&[cfg.points[0], inside(3, &mut rng), inside(4, &mut rng)]).unwrap();
        let r = spans_check(&s, &cb.model, 10, &mut rng);
        assert!(r.base[..5].iter().all(|&d| d < SPAN_TOL));
        assert!(r.base[5] > 1e-4);
        assert!(!r.passed);
    }

    #[test]
    fn boundary_conics_fit() {
        let cb = canonical_body().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = *cb.model.vectors();
        for t in INCIDENCE {
            let r = boundary_conic_residual(&cb.model, &v[t[0]], &v[t[1]], 100, &mut rng).unwrap();
            assert!(r < 1e-8, "{t:?}: {r:e}");
        }
    }

    #[test]
    fn config_conics_vanish_on_points() {
        let cb = canonical_body().unwrap();
        let cfg = cb.model.config();
        for k in &cfg.conics {
            for j in 0..3 {
                assert!(k[(j, j)].abs() < 1e-12);
            }
            assert!(k.norm() > 1e-6);
        }
    }

    #[test]
    fn quadratic_factor_is_the_boundary() {
        let cb = canonical_body().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut done = 0;
        for (s, t) in [(1, 1), (2, -1), (1, 3), (-3, 2), (5, 1)] {
            if let Some(r) = cb.conic_factor_check(s, t, 60, &mut rng).unwrap() {
                assert!(r.quadratic_residual < 1e-9, "{r:?}");
                assert!(r.fitted_distance < 1e-7, "{r:?}");
                assert!(r.linear_min > 1e-6, "{r:?}");
                done += 1;
            }
        }
        assert!(done >= 3);
    }
}
