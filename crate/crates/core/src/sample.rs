//! Random instances for property sweeps. All samplers take the caller's RNG
//! so that trials stay reproducible under a fixed seed.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{Element, Field, HermitianMatrix};
use crate::linalg::{self, FVector};

/// Element with independent standard-normal coefficients.
pub fn element<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Element {
    let c: Vec<f64> = (0..field.dim()).map(|_| rng.sample(StandardNormal)).collect();
    Element::new(field, &c).expect("width")
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> FVector {
    (0..n).map(|_| element(rng, field)).collect()
}

/// Uniformly distributed unit vector in 𝔽ⁿ.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> FVector {
    loop {
        let v = vector(rng, field, n);
        let nrm = linalg::vnorm(&v);
        if nrm > 1e-8 {
            return linalg::scale_right(&v, &Element::real(field, 1.0 / nrm));
        }
    }
}

/// Orthonormal basis of a random `k`-dimensional subspace of 𝔽ⁿ.
pub fn subspace_basis<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize, k: usize) -> Vec<FVector> {
    let cands: Vec<FVector> = (0..k).map(|_| vector(rng, field, n)).collect();
    linalg::orthonormalize(&cands, k, 1e-8)
}

/// Random PSD matrix of rank `k` (sum of `k` random rank-one terms).
pub fn psd_of_rank<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize, k: usize) -> HermitianMatrix {
    let vs: Vec<FVector> = (0..k).map(|_| vector(rng, field, n)).collect();
    HermitianMatrix::gram(field, n, &vs)
}

/// PSD matrix of random rank in `0..=n`.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> HermitianMatrix {
    let k = rng.random_range(0..=n);
    psd_of_rank(rng, field, n, k)
}

/// Hermitian matrix with Gaussian entries, scaled to unit Frobenius norm.
pub fn unit_hermitian<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> HermitianMatrix {
    let m = HermitianMatrix::from_upper(field, n, |_, _| element(rng, field)).expect("hermitian");
    let f = m.frobenius();
    m.scale(1.0 / f)
}

/// Random real orthogonal matrix (QR of a Gaussian matrix).
pub fn orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> nalgebra::DMatrix<f64> {
    let g = nalgebra::DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}
