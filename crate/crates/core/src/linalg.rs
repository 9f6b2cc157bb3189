//! Eigen-structure of Hermitian matrices over ℝ, ℂ and ℍ.
//!
//! Everything goes through the real representation `v ↦ A v` on ℝ^{dn}.
//! For associative 𝔽 that operator commutes with right multiplication by
//! scalars, so its eigenspaces are 𝔽-subspaces and every 𝔽-eigenvalue shows
//! up exactly `d` times.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use num_traits::Float;
use crate::algebra::{Element, Field, HermitianMatrix, Matrix};
use crate::tolerance::RANK_CUTOFF;

/// A vector in 𝔽ⁿ.
pub type FVector = Vec<Element>;

/// Real eigen-decomposition with eigenvalues ascending.
pub fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// 𝔽-eigenvalues of a Hermitian matrix, ascending, each listed once per
/// 𝔽-multiplicity.
pub fn eigenvalues(a: &HermitianMatrix) -> Vec<f64> {
    assert!(a.field().is_associative(), "eigenvalues over O go through the cubic");
    let d = a.field().dim();
    let (vals, _) = sym_eigen(&a.real_rep());
    vals.chunks(d).map(|c| c.iter().sum::<f64>() / d as f64).collect()
}

/// `(λ_min, λ_max)`.
pub fn extreme_eigenvalues(a: &HermitianMatrix) -> (f64, f64) {
    let (vals, _) = sym_eigen(&a.real_rep());
    (vals[0], vals[vals.len() - 1])
}

/// Applies `f` to the spectrum of `a`.
pub fn spectral_map(a: &HermitianMatrix, f: impl Fn(f64) -> f64) -> HermitianMatrix {
    let (vals, vecs) = sym_eigen(&a.real_rep());
    let fl = DVector::from_iterator(vals.len(), vals.iter().map(|&x| f(x)));
    let real = &vecs * DMatrix::from_diagonal(&fl) * vecs.transpose();
    HermitianMatrix::from_real_rep(a.field(), &real)
}

pub fn to_real(v: &[Element]) -> DVector<f64> {
    let d = v.first().map_or(1, |e| e.field().dim());
    DVector::from_iterator(v.len() * d, v.iter().flat_map(|e| e.coeffs().iter().copied()))
}

pub fn from_real(field: Field, r: &[f64]) -> FVector {
    r.chunks(field.dim()).map(|c| Element::new(field, c).expect("chunk width")).collect()
}

/// 𝔽-valued inner product `Σ v̄ᵢ wᵢ`.
pub fn inner(v: &[Element], w: &[Element]) -> Element {
    let field = v[0].field();
    v.iter().zip(w).fold(Element::zero(field), |acc, (a, b)| acc + &a.conj() * b)
}

pub fn vnorm(v: &[Element]) -> f64 {
    Float::sqrt(v.iter().map(|e| e.norm_sqr()).sum::<f64>())
}

/// Right scalar multiple `v·s`.
pub fn scale_right(v: &[Element], s: &Element) -> FVector {
    v.iter().map(|e| e * s).collect()
}

pub fn sub(v: &[Element], w: &[Element]) -> FVector {
    v.iter().zip(w).map(|(a, b)| *a - *b).collect()
}

/// Removes from `v` its components along the orthonormal family `basis`.
pub fn residual(basis: &[FVector], v: &[Element]) -> FVector {
    let mut r: FVector = v.to_vec();
    // two passes keep the result orthogonal to working precision
    for _ in 0..2 {
        for b in basis {
            let c = inner(b, &r);
            r = sub(&r, &scale_right(b, &c));
        }
    }
    r
}

/// Greedy 𝔽-Gram–Schmidt: repeatedly adopts the candidate with the largest
/// residual until `k` vectors are chosen or every residual is below `floor`.
pub fn orthonormalize(candidates: &[FVector], k: usize, floor: f64) -> Vec<FVector> {
    let mut basis: Vec<FVector> = Vec::new();
    while basis.len() < k {
        let best = candidates
            .iter()
            .map(|c| residual(&basis, c))
            .map(|r| (vnorm(&r), r))
            .max_by(|a, b| a.0.total_cmp(&b.0));
        match best {
            Some((nrm, r)) if nrm > floor => {
                let inv = Element::real(r[0].field(), 1.0 / nrm);
                basis.push(scale_right(&r, &inv));
            }
            _ => break,
        }
    }
    basis
}

/// Orthonormal 𝔽-basis of the range of a PSD (or any Hermitian) matrix,
/// with eigenvalues below `RANK_CUTOFF · |λ|_max` treated as zero.
pub fn range_basis(a: &HermitianMatrix) -> Vec<FVector> {
    range_basis_scaled(a, 0.0)
}

/// As [`range_basis`], with the cutoff taken relative to
/// `max(|λ|_max, scale)`. Projector arithmetic passes `scale = 1` so that
/// rounding noise in `I − P` is not mistaken for a range.
pub fn range_basis_scaled(a: &HermitianMatrix, scale: f64) -> Vec<FVector> {
    let field = a.field();
    let d = field.dim();
    let (vals, vecs) = sym_eigen(&a.real_rep());
    let top = vals.iter().fold(scale, |m, v| m.max(v.abs()));
    if top == 0.0 {
        return Vec::new();
    }
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].abs() > RANK_CUTOFF * top).collect();
    let k = (keep.len() + d / 2) / d;
    let cands: Vec<FVector> = keep
        .iter()
        .map(|&i| from_real(field, vecs.column(i).as_slice()))
        .collect();
    orthonormalize(&cands, k, 1e-6)
}

/// `Σ v v*` over an orthonormal family: the orthogonal projector onto its span.
pub fn projector(field: Field, n: usize, basis: &[FVector]) -> HermitianMatrix {
    HermitianMatrix::gram(field, n, basis)
}

/// `V* A V`, the compression of `a` to the span of the columns of `v`.
pub fn compress(a: &HermitianMatrix, basis: &[FVector]) -> HermitianMatrix {
    let field = a.field();
    let v = Matrix::from_columns(field, a.n(), basis);
    let c = v.adjoint().matmul(a.matrix()).and_then(|m| m.matmul(&v)).expect("shapes");
    let k = basis.len();
    HermitianMatrix::from_upper(field, k, |i, j| c[(i, j)]).expect("compression")
}

/// `V X V*`, the inverse of [`compress`] for an orthonormal `basis`.
pub fn expand(x: &HermitianMatrix, basis: &[FVector], n: usize) -> HermitianMatrix {
    let field = x.field();
    let v = Matrix::from_columns(field, n, basis);
    let c = v.matmul(x.matrix()).and_then(|m| m.matmul(&v.adjoint())).expect("shapes");
    HermitianMatrix::from_upper(field, n, |i, j| c[(i, j)]).expect("expansion")
}

/// `A v`.
pub fn apply(a: &HermitianMatrix, v: &[Element]) -> FVector {
    let n = a.n();
    (0..n)
        .map(|i| (0..n).fold(Element::zero(a.field()), |acc, j| acc + a.get(i, j) * &v[j]))
        .collect()
}

/// Operator-norm distance between two Hermitian matrices.
pub fn op_norm(a: &HermitianMatrix) -> f64 {
    let (lo, hi) = extreme_eigenvalues(a);
    lo.abs().max(hi.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quaternionic_eigenvalues_are_not_doubled_in_output() {
        let j = Element::unit(Field::H, 2);
        let d = HermitianMatrix::diag(Field::H, &[(j * j.conj()).re(), 3.0]).unwrap();
        assert_eq!(eigenvalues(&d), alloc::vec![1.0, 3.0]);
    }

    #[test]
    fn range_of_rank_k_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for field in Field::ASSOCIATIVE {
            for k in 0..=4 {
                let a = sample::psd_of_rank(&mut rng, field, 5, k);
                let b = range_basis(&a);
                assert_eq!(b.len(), k);
                for (i, x) in b.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        let ip = inner(x, y);
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((ip - Element::real(field, want)).max_abs() < 1e-10, "{ip:?}");
                    }
                }
                let p = projector(field, 5, &b);
                let resid = a.sub(&expand(&compress(&a, &b), &b, 5));
                assert!(resid.frobenius() < 1e-9 * (1.0 + a.frobenius()));
                assert!((p.trace() - k as f64).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn spectral_map_inverse_square_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for field in Field::ASSOCIATIVE {
            let a = sample::psd_of_rank(&mut rng, field, 4, 4).add(&HermitianMatrix::identity(field, 4).unwrap());
            let s = spectral_map(&a, |x| 1.0 / x.sqrt());
            let id = s.matrix().matmul(a.matrix()).unwrap().matmul(s.matrix()).unwrap();
            assert!(id.max_abs_diff(&Matrix::identity(field, 4)) < 1e-10);
        }
    }
}
