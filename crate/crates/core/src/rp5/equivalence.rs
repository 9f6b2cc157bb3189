//! The face-preserving projective map between two bodies, built from a
//! matching of two boundary conics through a common extreme point.

use nalgebra::{Matrix3, Matrix6, Matrix6x3, SymmetricEigen, Vector3, Vector6};
use num_traits::Float;

use super::model::{frame_map, ProjectiveModel, Span};
use super::Rp5Error;
use super::INCIDENCE;

#[derive(Clone, Debug)]
pub struct Equivalence {
    /// Acts on homogeneous coordinates; unit Frobenius norm.
    pub rho: Matrix6<f64>,
    /// p₀′..p₆′ in the target body.
    pub images: [Vector6<f64>; 7],
    /// How far ρ is from a multiple of the conic matching on span(F₁) and
    /// span(F₂).
    pub extension_residual: f64,
}

/// R with K ∝ Rᵀ·diag(1, 1, −1)·R.
fn conic_normalizer(k: &Matrix3<f64>) -> Result<Matrix3<f64>, Rp5Error> {
    let mut e = SymmetricEigen::new(*k);
    let negatives = e.eigenvalues.iter().filter(|&&x| x < 0.0).count();
    if negatives == 2 {
        e.eigenvalues = -e.eigenvalues;
    }
    let top = e.eigenvalues.amax();
    if top == 0.0 || e.eigenvalues.iter().any(|x| x.abs() < 1e-12 * top) {
        return Err(Rp5Error::DegenerateConic);
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
    if e.eigenvalues[order[1]] <= 0.0 || e.eigenvalues[order[2]] >= 0.0 {
        return Err(Rp5Error::DegenerateConic);
    }
    let mut r = Matrix3::zeros();
    for (row, &k) in order.iter().enumerate() {
        let s = e.eigenvalues[k].abs().sqrt();
        r.set_row(row, &(e.eigenvectors.column(k).transpose() * s));
    }
    Ok(r)
}

/// Projective map of coordinates taking the conic `ka` to `kb` and the first
/// coordinate point to itself.
fn conic_map(ka: &Matrix3<f64>, kb: &Matrix3<f64>) -> Result<Matrix3<f64>, Rp5Error> {
    let ra = conic_normalizer(ka)?;
    let rb = conic_normalizer(kb)?;
    let angle = |x: Vector3<f64>| Float::atan2(x[1] / x[2], x[0] / x[2]);
    let t = angle(rb.column(0).into()) - angle(ra.column(0).into());
    let (s, c) = (Float::sin(t), Float::cos(t));
    let rot = Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0);
    let rb_inv = rb.try_inverse().ok_or(Rp5Error::DegenerateConic)?;
    Ok(rb_inv * rot * ra)
}

fn proportionality_residual(x: &Matrix6x3<f64>, y: &Matrix6x3<f64>) -> f64 {
    let lambda = x.dot(y) / y.dot(y);
    (x - y * lambda).norm() / x.norm()
}

/// A projective map ρ of ℝP⁵ with ρ(face span of A) = face span of B.
///
/// B's own p₀, F₁, F₂ are used as the target point and faces.
pub fn projective_equivalence(a: &ProjectiveModel, b: &ProjectiveModel) -> Result<Equivalence, Rp5Error> {
    let (ca, cb) = (a.config(), b.config());
    let mut images = [Vector6::zeros(); 7];
    images[0] = cb.points[0];
    let mut matched = [Matrix6x3::zeros(); 2];
    for face in 0..2 {
        let m = conic_map(&ca.conics[face], &cb.conics[face])?;
        let l = cb.point_frame(face) * m;
        let [_, i, j] = INCIDENCE[face];
        images[i] = l.column(1).into();
        images[j] = l.column(2).into();
        matched[face] = l;
    }
    // faces of B generated by the corresponding pairs among p₁..p₄
    let pair_face = |face: usize, images: &[Vector6<f64>; 7]| -> Result<Span, Rp5Error> {
        let pts: alloc::vec::Vec<usize> = INCIDENCE[face].iter().copied().filter(|&k| k <= 4).collect();
        b.face_through(&images[pts[0]], &images[pts[1]])
    };
    let s4 = pair_face(3, &images)?;
    let s5 = pair_face(4, &images)?;
    let s6 = pair_face(5, &images)?;
    images[5] = s4.meet_point(&s5)?;
    let s3 = b.face_through(&images[0], &images[5])?;
    images[6] = s3.meet_point(&s6)?;
    let rho = frame_map(&ca.points, &images)?;
    let extension_residual = (0..2)
        .map(|face| proportionality_residual(&(rho * ca.point_frame(face)), &matched[face]))
        .fold(0.0, f64::max);
    Ok(Equivalence { rho, images, extension_residual })
}
