//! Faces of C_n(𝔽) against subspace arithmetic, lattice laws, radial
//! extension and the dimension count.

use hermface_core::cone_faces::{
    ambient_dimension, face_join, face_meet, face_of, modular_law_check, predicted_dimension, radial_extend,
    rank_identity_check, Face, SlicedBody, Subspace,
};
use hermface_core::linalg::{self, FVector};
use hermface_core::{sample, Element, Field, HermitianMatrix, Matrix};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{SuiteConfig, UsageError};
use crate::engine::{Batch, Outcome};
use crate::formats::{FaceDoc, MatrixDoc};
use crate::report::Report;

pub const SUBSPACE_TOL: f64 = 1e-9;
pub const RADIAL_TOL: f64 = 1e-9;
/// Eigenvalues of `P_F + P_G` above `2 − MEET_GAP` belong to `F ∩ G`.
const MEET_GAP: f64 = 1e-7;
pub const MAX_N: usize = 8;

fn vectors(rng: &mut ChaCha8Rng, field: Field, n: usize, k: usize) -> Vec<FVector> {
    (0..k).map(|_| sample::vector(rng, field, n)).collect()
}

fn combination(rng: &mut ChaCha8Rng, field: Field, of: &[FVector], n: usize) -> FVector {
    let mut v = vec![Element::zero(field); n];
    for b in of {
        let c = sample::element(rng, field);
        for (x, y) in v.iter_mut().zip(linalg::scale_right(b, &c)) {
            *x = *x + y;
        }
    }
    v
}

/// Two PSD matrices of random ranks whose ranges share a random number of
/// generators.
pub fn psd_pair(rng: &mut ChaCha8Rng, field: Field, n: usize) -> (HermitianMatrix, HermitianMatrix) {
    let ra = rng.random_range(0..=n);
    let rb = rng.random_range(0..=n);
    let kc = rng.random_range(0..=ra.min(rb));
    let common = vectors(rng, field, n, kc);
    let mut a = common.clone();
    a.extend(vectors(rng, field, n, ra - common.len()));
    let mut b = common;
    b.extend(vectors(rng, field, n, rb - b.len()));
    (HermitianMatrix::gram(field, n, &a), HermitianMatrix::gram(field, n, &b))
}

/// The span of the eigenvectors of `P_F + P_G` with eigenvalue 2.
pub fn meet_oracle(f: &Face, g: &Face) -> Subspace {
    let p = f.range().projector().add(&g.range().projector());
    let top = linalg::spectral_map(&p, |x| if x > 2.0 - MEET_GAP { 1.0 } else { 0.0 });
    Subspace::range_of(&top)
}

fn n_for(cfg: &SuiteConfig, i: usize, hi: usize) -> usize {
    cfg.n.unwrap_or(2 + i % (hi - 1))
}

fn join_meet(cfg: &SuiteConfig, field: Field) -> Report {
    let tol = cfg.tol(SUBSPACE_TOL);
    Batch::new("nu-join-meet", cfg.trials(1000), cfg.seed).field(field).n(cfg.n).tolerance(tol).timed(cfg.timed).run(|i, rng| {
        let n = n_for(cfg, i, 6);
        let (a, b) = psd_pair(rng, field, n);
        let run = || -> Result<Outcome, hermface_core::cone_faces::ConeError> {
            let (f, g) = (face_of(&a)?, face_of(&b)?);
            let (join, meet) = (face_join(&f, &g)?, face_meet(&f, &g)?);
            let join_oracle = Subspace::range_of(&a.add(&b));
            let meet_oracle = meet_oracle(&f, &g);
            let residual = join.range().distance(&join_oracle).max(meet.range().distance(&meet_oracle));
            let ranks_ok = join.rank() == join_oracle.dim() && meet.rank() == meet_oracle.dim() && rank_identity_check(&f, &g)?;
            let witness = || {
                json!({
                    "a": MatrixDoc::from_hermitian(&a),
                    "b": MatrixDoc::from_hermitian(&b),
                    "ranks": [f.rank(), g.rank(), join.rank(), meet.rank()],
                    "oracle_ranks": [join_oracle.dim(), meet_oracle.dim()],
                })
            };
            Ok(if ranks_ok { Outcome::within(residual, tol, witness) } else { Outcome::fail(residual, witness()) })
        };
        run().unwrap_or_else(Outcome::error)
    })
}

fn modular(cfg: &SuiteConfig, field: Field) -> Report {
    Batch::new("modular-law", cfg.trials(1000), cfg.seed).field(field).n(cfg.n).timed(cfg.timed).run(|i, rng| {
        let n = n_for(cfg, i, 6);
        let kh = rng.random_range(0..=n);
        let hv = vectors(rng, field, n, kh);
        let fk = rng.random_range(0..=hv.len());
        let fv: Vec<FVector> = (0..fk).map(|_| combination(rng, field, &hv, n)).collect();
        let shared = rng.random_range(0..=hv.len());
        let mut gv: Vec<FVector> = hv[..shared].to_vec();
        let extra = rng.random_range(0..=n - shared);
        gv.extend(vectors(rng, field, n, extra));
        let face = |v: &[FVector]| Face::from_range(Subspace::span(field, n, v));
        let (f, g, h) = (face(&fv), face(&gv), face(&hv));
        match modular_law_check(&f, &g, &h) {
            Ok(c) if c.holds && c.ranks.0 == c.ranks.1 => Outcome::pass(c.residual),
            Ok(c) => Outcome::fail(
                c.residual,
                json!({
                    "f": FaceDoc::from_face(&f),
                    "g": FaceDoc::from_face(&g),
                    "h": FaceDoc::from_face(&h),
                    "ranks": [c.ranks.0, c.ranks.1],
                }),
            ),
            Err(e) => Outcome::error(e),
        }
    })
}

fn trace_point(rng: &mut ChaCha8Rng, body: &SlicedBody) -> HermitianMatrix {
    let r = rng.random_range(1..=body.n());
    body.normalize(&sample::psd_of_rank(rng, body.field(), body.n(), r)).expect("nonzero PSD matrix")
}

fn radial_identity(cfg: &SuiteConfig, field: Field) -> Report {
    let tol = cfg.tol(RADIAL_TOL);
    Batch::new("radial-identity", cfg.trials(1000), cfg.seed).field(field).n(cfg.n).tolerance(tol).timed(cfg.timed).run(|i, rng| {
        let n = n_for(cfg, i, 4);
        let body = SlicedBody::trace(field, n).expect("trace slice");
        let a = trace_point(rng, &body);
        match radial_extend(&body, &body, |x| x.clone(), &a) {
            Ok(b) => Outcome::within(b.max_abs_diff(&a), tol, || json!({ "point": MatrixDoc::from_hermitian(&a) })),
            Err(e) => Outcome::error(e),
        }
    })
}

/// `A ↦ UAU*`.
pub fn conjugate(u: &Matrix, a: &HermitianMatrix) -> HermitianMatrix {
    let m = u.matmul(a.matrix()).and_then(|m| m.matmul(&u.adjoint())).expect("square matrices of one size");
    HermitianMatrix::from_upper(a.field(), a.n(), |i, j| m[(i, j)]).expect("associative field")
}

fn radial_conjugation(cfg: &SuiteConfig, field: Field) -> Report {
    let tol = cfg.tol(RADIAL_TOL);
    Batch::new("radial-conjugation", cfg.trials(100), cfg.seed).field(field).n(cfg.n).tolerance(tol).timed(cfg.timed).run(|i, rng| {
        let n = n_for(cfg, i, 4);
        let body = SlicedBody::trace(field, n).expect("trace slice");
        let u = Matrix::from_columns(field, n, &sample::subspace_basis(rng, field, n, n));
        let a = trace_point(rng, &body);
        match radial_extend(&body, &body, |x| conjugate(&u, x), &a) {
            Ok(b) => Outcome::within(b.max_abs_diff(&conjugate(&u, &a)), tol, || {
                json!({ "point": MatrixDoc::from_hermitian(&a) })
            }),
            Err(e) => Outcome::error(e),
        }
    })
}

/// Real dimension of the trace-zero part of H_n(𝔽), as the numerical rank
/// of the coordinates of random trace-zero matrices.
pub fn sampled_slice_dimension(rng: &mut ChaCha8Rng, field: Field, n: usize) -> usize {
    let d = field.dim();
    let samples = n * n * d + 4;
    let mut m = DMatrix::zeros(samples, n * n * d);
    for r in 0..samples {
        let a = sample::unit_hermitian(rng, field, n);
        let shift = a.trace() / n as f64;
        for i in 0..n {
            for j in 0..n {
                let e = a.get(i, j);
                for (k, c) in e.coeffs().iter().enumerate() {
                    let c = if i == j && k == 0 { c - shift } else { *c };
                    m[(r, (i * n + j) * d + k)] = c;
                }
            }
        }
    }
    let sv = m.singular_values();
    let top = sv.max();
    sv.iter().filter(|&&s| s > 1e-9 * top).count()
}

pub const PLANE_DIMENSIONS: [(usize, usize); 4] = [(1, 5), (2, 8), (4, 14), (8, 26)];

fn dimension(cfg: &SuiteConfig) -> Report {
    let mut cases: Vec<(usize, usize)> = Vec::new();
    for n in 2..=5 {
        for d in [1, 2, 4] {
            cases.push((n, d));
        }
    }
    cases.push((3, 8));
    Batch::new("dimension-formula", cases.len(), cfg.seed).timed(cfg.timed).run(|i, rng| {
        let (n, d) = cases[i];
        let Ok(predicted) = predicted_dimension(n, d) else {
            return Outcome::error(format!("no prediction for n = {n}, d = {d}"));
        };
        let field = Field::from_dim(d).expect("division algebra dimension");
        let sampled = sampled_slice_dimension(rng, field, n);
        let mut ok = predicted == sampled;
        if n == 3 {
            let table = PLANE_DIMENSIONS.iter().find(|(dd, _)| *dd == d).map(|(_, v)| *v);
            ok &= Some(predicted) == table && predicted == ambient_dimension(3, d) - 1;
        }
        if ok {
            Outcome::pass(0.0)
        } else {
            Outcome::fail(0.0, json!({ "n": n, "d": d, "predicted": predicted, "sampled": sampled }))
        }
    })
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<Report>, UsageError> {
    let fields = cfg.associative_fields("verify-cone")?;
    cfg.check_n(1, MAX_N)?;
    let mut out = Vec::new();
    for &f in &fields {
        out.push(join_meet(cfg, f));
        out.push(modular(cfg, f));
        out.push(radial_identity(cfg, f));
        out.push(radial_conjugation(cfg, f));
    }
    out.push(dimension(cfg));
    Ok(out)
}
