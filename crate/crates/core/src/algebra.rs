//! Normed division algebras via Cayley–Dickson doubling, and matrices over them.
//!
//! An [`Element`] stores up to eight real coefficients; only the first
//! `field.dim()` are meaningful. Coefficient 0 is the real part. The
//! multiplication table is the one produced by the doubling rule
//!
//! ```text
//! (a, b)(c, d) = (ac − d̄b, da + bc̄)
//! ```
//!
//! applied recursively, with the first half of the coefficient vector as the
//! "a" part. For ℍ this gives the usual `i·j = k`. For 𝕆 the basis units are
//! `e0..e7`, with `e4` the doubling unit over ℍ.
//!
//! The scalar type is generic: `f64` is the working backend and
//! [`num_rational::BigRational`] gives exact arithmetic (used for ℝ and ℂ by
//! the symbolic checks).

use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::Neg;

use nalgebra::DMatrix;
use num_traits::{Float, Num};
use thiserror::Error;

/// Scalars usable as algebra coefficients.
pub trait Scalar: Clone + Debug + Num + Neg<Output = Self> {}

impl<T: Clone + Debug + Num + Neg<Output = T>> Scalar for T {}

/// One of the four normed division algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    R,
    C,
    H,
    O,
}

impl Field {
    pub const ALL: [Field; 4] = [Field::R, Field::C, Field::H, Field::O];
    /// The fields whose PSD cones have a computable eigen-structure here.
    pub const ASSOCIATIVE: [Field; 3] = [Field::R, Field::C, Field::H];

    /// Real dimension.
    pub const fn dim(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
            Field::O => 8,
        }
    }

    pub fn from_dim(dim: usize) -> Option<Field> {
        match dim {
            1 => Some(Field::R),
            2 => Some(Field::C),
            4 => Some(Field::H),
            8 => Some(Field::O),
            _ => None,
        }
    }

    pub const fn is_associative(self) -> bool {
        !matches!(self, Field::O)
    }

    pub const fn symbol(self) -> &'static str {
        match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
            Field::O => "O",
        }
    }

    pub fn parse(s: &str) -> Option<Field> {
        match s {
            "R" | "r" => Some(Field::R),
            "C" | "c" => Some(Field::C),
            "H" | "h" => Some(Field::H),
            "O" | "o" => Some(Field::O),
            _ => None,
        }
    }
}

impl core::fmt::Display for Field {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(Field, Field),
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("unsupported coefficient count {0} (must be 1, 2, 4 or 8)")]
    BadDimension(usize),
    #[error("octonionic Hermitian matrices must be 3x3, got n = {0}")]
    OctonionSize(usize),
    #[error("matrix is not Hermitian at ({0}, {1})")]
    NotHermitian(usize, usize),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("wrong field: expected {expected}, got {got}")]
    WrongField { expected: Field, got: Field },
}

fn zeros<T: Scalar>() -> [T; 8] {
    core::array::from_fn(|_| T::zero())
}

fn conj_into<T: Scalar>(x: &[T], out: &mut [T]) {
    out[0] = x[0].clone();
    for (o, v) in out[1..x.len()].iter_mut().zip(&x[1..]) {
        *o = -v.clone();
    }
}

/// Recursive Cayley–Dickson product of two coefficient slices of equal
/// power-of-two length.
fn cd_mul<T: Scalar>(x: &[T], y: &[T], out: &mut [T]) {
    let n = x.len();
    if n == 1 {
        out[0] = x[0].clone() * y[0].clone();
        return;
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let mut t1 = zeros::<T>();
    let mut t2 = zeros::<T>();
    let mut bar = zeros::<T>();

    // ac − d̄b
    cd_mul(a, c, &mut t1[..h]);
    conj_into(d, &mut bar[..h]);
    cd_mul(&bar[..h], b, &mut t2[..h]);
    for i in 0..h {
        out[i] = t1[i].clone() - t2[i].clone();
    }
    // da + bc̄
    cd_mul(d, a, &mut t1[..h]);
    conj_into(c, &mut bar[..h]);
    cd_mul(b, &bar[..h], &mut t2[..h]);
    for i in 0..h {
        out[h + i] = t1[i].clone() + t2[i].clone();
    }
}

/// An element of ℝ, ℂ, ℍ or 𝕆.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Element<T = f64> {
    field: Field,
    coeffs: [T; 8],
}

impl<T: Scalar> Element<T> {
    pub fn new(field: Field, coeffs: &[T]) -> Result<Self, AlgebraError> {
        if coeffs.len() != field.dim() {
            return Err(AlgebraError::CoefficientCount {
                expected: field.dim(),
                got: coeffs.len(),
            });
        }
        let mut c = zeros::<T>();
        c[..coeffs.len()].clone_from_slice(coeffs);
        Ok(Element { field, coeffs: c })
    }

    /// Builds an element whose field is inferred from the coefficient count.
    pub fn from_coeffs(coeffs: &[T]) -> Result<Self, AlgebraError> {
        let field = Field::from_dim(coeffs.len()).ok_or(AlgebraError::BadDimension(coeffs.len()))?;
        Self::new(field, coeffs)
    }

    pub fn zero(field: Field) -> Self {
        Element { field, coeffs: zeros() }
    }

    pub fn one(field: Field) -> Self {
        Self::real(field, T::one())
    }

    pub fn real(field: Field, x: T) -> Self {
        let mut e = Self::zero(field);
        e.coeffs[0] = x;
        e
    }

    /// The `k`-th basis unit (`k = 0` is 1).
    pub fn unit(field: Field, k: usize) -> Self {
        assert!(k < field.dim(), "basis index {k} out of range for {field}");
        let mut e = Self::zero(field);
        e.coeffs[k] = T::one();
        e
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs[..self.field.dim()]
    }

    pub fn re(&self) -> T {
        self.coeffs[0].clone()
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.field);
        conj_into(self.coeffs(), &mut out.coeffs[..self.field.dim()]);
        out
    }

    /// Sum of squared coefficients.
    pub fn norm_sqr(&self) -> T {
        self.coeffs()
            .iter()
            .fold(T::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs()[1..].iter().all(|c| c.is_zero())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::DimensionMismatch(self.field, other.field));
        }
        let d = self.field.dim();
        let mut out = Self::zero(self.field);
        cd_mul(&self.coeffs[..d], &other.coeffs[..d], &mut out.coeffs[..d]);
        Ok(out)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = c.clone() * s.clone();
        }
        out
    }

    /// Re-tags the element as a member of a larger algebra (ℝ ⊂ ℂ ⊂ ℍ ⊂ 𝕆).
    pub fn embed(&self, field: Field) -> Self {
        assert!(field.dim() >= self.field.dim(), "cannot embed {} into {field}", self.field);
        Element { field, coeffs: self.coeffs.clone() }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        let mut out = Self::zero(self.field);
        for i in 0..self.field.dim() {
            out.coeffs[i] = f(self.coeffs[i].clone(), other.coeffs[i].clone());
        }
        out
    }
}

impl Element<f64> {
    pub fn norm(&self) -> f64 {
        Float::sqrt(self.norm_sqr())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Cayley–Dickson product.
pub fn cd_multiply<T: Scalar>(x: &Element<T>, y: &Element<T>) -> Result<Element<T>, AlgebraError> {
    x.checked_mul(y)
}

pub fn cd_conjugate<T: Scalar>(x: &Element<T>) -> Element<T> {
    x.conj()
}

impl<T: Scalar> core::ops::Add for Element<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl<T: Scalar> core::ops::Sub for Element<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl<T: Scalar> Neg for Element<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

/// Panics on a field mismatch; use [`Element::checked_mul`] for the fallible form.
impl<T: Scalar> core::ops::Mul for Element<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("field mismatch in product")
    }
}

impl<T: Scalar> core::ops::Mul for &Element<T> {
    type Output = Element<T>;
    fn mul(self, rhs: Self) -> Element<T> {
        self.checked_mul(rhs).expect("field mismatch in product")
    }
}

/// A dense rectangular matrix over one of the division algebras.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T = f64> {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Element<T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: alloc::vec![Element::zero(field); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = Element::one(field);
        }
        m
    }

    pub fn from_entries(field: Field, rows: usize, cols: usize, data: Vec<Element<T>>) -> Result<Self, AlgebraError> {
        if data.len() != rows * cols {
            return Err(AlgebraError::EntryCount { expected: rows * cols, got: data.len() });
        }
        if let Some(e) = data.iter().find(|e| e.field() != field) {
            return Err(AlgebraError::WrongField { expected: field, got: e.field() });
        }
        Ok(Matrix { field, rows, cols, data })
    }

    /// A column matrix from a vector of entries.
    pub fn column(field: Field, v: Vec<Element<T>>) -> Self {
        let rows = v.len();
        Self::from_entries(field, rows, 1, v).expect("column entries")
    }

    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<Element<T>>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Element<T>] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<Element<T>> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.field != rhs.field {
            return Err(AlgebraError::DimensionMismatch(self.field, rhs.field));
        }
        if self.cols != rhs.rows {
            return Err(AlgebraError::EntryCount { expected: self.cols, got: rhs.rows });
        }
        let mut out = Self::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Element::zero(self.field);
                for k in 0..self.cols {
                    acc = acc + &self[(i, k)] * &rhs[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: T) -> Self {
        let data = self.data.iter().map(|e| e.scale(s.clone())).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.field, self.rows, self.cols), (rhs.field, rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.field, self.rows, self.cols), (rhs.field, rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn trace(&self) -> Element<T> {
        (0..self.rows.min(self.cols)).fold(Element::zero(self.field), |acc, i| acc + self[(i, i)].clone())
    }

    /// Sum of squared coefficients over all entries.
    pub fn frobenius_sqr(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, e| acc + e.norm_sqr())
    }
}

impl<T> core::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = Element<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Element<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> core::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Element<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix<f64> {
    pub fn frobenius(&self) -> f64 {
        Float::sqrt(self.frobenius_sqr())
    }

    /// Real `(d·rows) × (d·cols)` matrix of the map `v ↦ M v` on 𝔽ⁿ ≅ ℝ^{dn}.
    ///
    /// Block `(i, j)` is left multiplication by `M[i][j]`. For ℝ, ℂ and ℍ the
    /// result commutes with right scalar multiplication.
    pub fn real_rep(&self) -> DMatrix<f64> {
        let d = self.field.dim();
        let mut out = DMatrix::zeros(self.rows * d, self.cols * d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                for c in 0..d {
                    let col = a * &Element::unit(self.field, c);
                    for r in 0..d {
                        out[(i * d + r, j * d + c)] = col.coeffs[r];
                    }
                }
            }
        }
        out
    }

    /// Inverse of [`Matrix::real_rep`] for representations that commute with
    /// right scalar multiplication: reads each block's first column.
    pub fn from_real_rep(field: Field, real: &DMatrix<f64>) -> Self {
        let d = field.dim();
        let (rows, cols) = (real.nrows() / d, real.ncols() / d);
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let c: Vec<f64> = (0..d).map(|r| real[(i * d + r, j * d)]).collect();
                m[(i, j)] = Element::new(field, &c).expect("block width");
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).max_abs())
            .fold(0.0, f64::max)
    }
}

/// An `n × n` self-adjoint matrix over ℝ, ℂ, ℍ (any n) or 𝕆 (n = 3).
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T = f64> {
    inner: Matrix<T>,
}

impl<T: Scalar> HermitianMatrix<T> {
    /// Validates exact self-adjointness of a row-major entry list.
    pub fn new(field: Field, n: usize, entries: Vec<Element<T>>) -> Result<Self, AlgebraError> {
        let inner = Matrix::from_entries(field, n, n, entries)?;
        Self::from_matrix(inner)
    }

    pub fn from_matrix(inner: Matrix<T>) -> Result<Self, AlgebraError> {
        let n = inner.rows;
        if inner.cols != n {
            return Err(AlgebraError::EntryCount { expected: n * n, got: inner.rows * inner.cols });
        }
        if inner.field == Field::O && n != 3 {
            return Err(AlgebraError::OctonionSize(n));
        }
        for i in 0..n {
            for j in i..n {
                if inner[(i, j)] != inner[(j, i)].conj() {
                    return Err(AlgebraError::NotHermitian(i, j));
                }
            }
        }
        Ok(HermitianMatrix { inner })
    }

    /// Builds the matrix from its upper triangle; the lower triangle and the
    /// imaginary parts of the diagonal are filled in to force self-adjointness.
    pub fn from_upper(field: Field, n: usize, mut upper: impl FnMut(usize, usize) -> Element<T>) -> Result<Self, AlgebraError> {
        if field == Field::O && n != 3 {
            return Err(AlgebraError::OctonionSize(n));
        }
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = Element::real(field, upper(i, i).re());
            for j in i + 1..n {
                let e = upper(i, j);
                m[(j, i)] = e.conj();
                m[(i, j)] = e;
            }
        }
        Ok(HermitianMatrix { inner: m })
    }

    pub fn identity(field: Field, n: usize) -> Result<Self, AlgebraError> {
        Self::from_matrix(Matrix::identity(field, n))
    }

    pub fn zeros(field: Field, n: usize) -> Result<Self, AlgebraError> {
        Self::from_matrix(Matrix::zeros(field, n, n))
    }

    pub fn diag(field: Field, d: &[T]) -> Result<Self, AlgebraError> {
        Self::from_upper(field, d.len(), |i, j| {
            if i == j {
                Element::real(field, d[i].clone())
            } else {
                Element::zero(field)
            }
        })
    }

    /// `Σ v vᴴ` over the given column vectors.
    pub fn gram(field: Field, n: usize, vectors: &[Vec<Element<T>>]) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for v in vectors {
            for i in 0..n {
                for j in i..n {
                    let e = &v[i] * &v[j].conj();
                    m[(i, j)] = m[(i, j)].clone() + e;
                }
            }
        }
        Self::from_upper(field, n, |i, j| m[(i, j)].clone()).expect("gram")
    }

    pub fn field(&self) -> Field {
        self.inner.field
    }

    pub fn n(&self) -> usize {
        self.inner.rows
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> &Element<T> {
        &self.inner[(i, j)]
    }

    pub fn trace(&self) -> T {
        self.inner.trace().re()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        HermitianMatrix { inner: self.inner.add(&rhs.inner) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        HermitianMatrix { inner: self.inner.sub(&rhs.inner) }
    }

    pub fn scale(&self, s: T) -> Self {
        HermitianMatrix { inner: self.inner.scale(s) }
    }

    /// Symmetrized product `(MN + NM)/2`.
    pub fn jordan(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        let mn = self.inner.matmul(&rhs.inner)?;
        let nm = rhs.inner.matmul(&self.inner)?;
        let two = T::one() + T::one();
        let sum = mn.add(&nm);
        let n = self.n();
        // Exact self-adjointness holds algebraically; the rebuild from the upper
        // triangle removes rounding asymmetry in the f64 backend.
        Self::from_upper(self.field(), n, |i, j| sum[(i, j)].scale(T::one() / two.clone()))
    }

    /// `⟨M, A⟩ = Re tr(MA)`, the trace inner product.
    pub fn inner(&self, rhs: &Self) -> T {
        let n = self.n();
        let mut acc = T::zero();
        for i in 0..n {
            for k in 0..n {
                acc = acc + (&self.inner[(i, k)] * &rhs.inner[(k, i)]).re();
            }
        }
        acc
    }

    /// Embeds the matrix entrywise into a larger algebra.
    pub fn embed(&self, field: Field) -> Result<Self, AlgebraError> {
        let data = self.inner.data.iter().map(|e| e.embed(field)).collect();
        Self::new(field, self.n(), data)
    }
}

impl HermitianMatrix<f64> {
    pub fn frobenius(&self) -> f64 {
        self.inner.frobenius()
    }

    /// Rebuilds a Hermitian matrix from a real representation, symmetrizing
    /// away rounding.
    pub fn from_real_rep(field: Field, real: &DMatrix<f64>) -> Self {
        let m = Matrix::from_real_rep(field, real);
        Self::from_upper(field, m.rows(), |i, j| {
            if i == j {
                m[(i, i)]
            } else {
                (m[(i, j)] + m[(j, i)].conj()).scale(0.5)
            }
        })
        .expect("square real representation")
    }

    pub fn real_rep(&self) -> DMatrix<f64> {
        self.inner.real_rep()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.inner.max_abs_diff(&other.inner)
    }
}

/// Complex 2×2 block of the quaternion `a + bi + cj + dk`:
/// `[[a+bi, c+di], [−c+di, a−bi]]`.
fn quaternion_block<T: Scalar>(q: &Element<T>) -> [[Element<T>; 2]; 2] {
    let c = q.coeffs();
    let z = |re: T, im: T| Element::new(Field::C, &[re, im]).expect("complex");
    [
        [z(c[0].clone(), c[1].clone()), z(c[2].clone(), c[3].clone())],
        [z(-c[2].clone(), c[3].clone()), z(c[0].clone(), -c[1].clone())],
    ]
}

/// Complex `2n × 2n` form of a quaternionic matrix, applied entrywise.
pub fn realify_matrix<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>, AlgebraError> {
    if m.field() != Field::H {
        return Err(AlgebraError::WrongField { expected: Field::H, got: m.field() });
    }
    let mut out = Matrix::zeros(Field::C, 2 * m.rows(), 2 * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let b = quaternion_block(&m[(i, j)]);
            for (r, row) in b.into_iter().enumerate() {
                for (c, e) in row.into_iter().enumerate() {
                    out[(2 * i + r, 2 * j + c)] = e;
                }
            }
        }
    }
    Ok(out)
}

/// Complex Hermitian `2n × 2n` representation of a quaternionic Hermitian
/// matrix. Each quaternionic eigenvalue appears twice.
pub fn realify<T: Scalar>(m: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>, AlgebraError> {
    HermitianMatrix::from_matrix(realify_matrix(m.matrix())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_el(rng: &mut ChaCha8Rng, field: Field) -> Element {
        let c: Vec<f64> = (0..field.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        Element::new(field, &c).unwrap()
    }

    fn close(a: &Element, b: &Element, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol
    }

    #[test]
    fn quaternion_units() {
        let i = Element::<f64>::unit(Field::H, 1);
        let j = Element::unit(Field::H, 2);
        let k = Element::unit(Field::H, 3);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, -Element::one(Field::H));
    }

    #[test]
    fn one_plus_i_times_one_plus_j() {
        let x = Element::new(Field::H, &[1.0, 1.0, 0.0, 0.0]).unwrap();
        let y = Element::new(Field::H, &[1.0, 0.0, 1.0, 0.0]).unwrap();
        let p = x * y;
        assert_eq!(p.coeffs(), &[1.0, 1.0, 1.0, 1.0]);
        assert!((p.norm() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn octonions_are_not_associative() {
        let e = |k| Element::<f64>::unit(Field::O, k);
        let lhs = (e(1) * e(2)) * e(4);
        let rhs = e(1) * (e(2) * e(4));
        assert_ne!(lhs, rhs);
        // both sides are ± the same unit
        assert_eq!(lhs, -rhs);
    }

    #[test]
    fn conjugate_and_norm() {
        let x = Element::new(Field::H, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(x.conj().coeffs(), &[1.0, -1.0, -1.0, -1.0]);
        let z = Element::new(Field::C, &[3.0, 4.0]).unwrap();
        assert_eq!(z.norm(), 5.0);
    }

    #[test]
    fn mismatched_fields_error() {
        let x = Element::<f64>::one(Field::C);
        let y = Element::<f64>::one(Field::H);
        assert_eq!(cd_multiply(&x, &y), Err(AlgebraError::DimensionMismatch(Field::C, Field::H)));
        assert!(Element::<f64>::new(Field::H, &[1.0, 2.0]).is_err());
        assert!(Element::<f64>::from_coeffs(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn composition_alternativity_and_moufang() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for field in Field::ALL {
            for _ in 0..1000 {
                let (x, y, z) = (rand_el(&mut rng, field), rand_el(&mut rng, field), rand_el(&mut rng, field));
                let nxy = (x * y).norm();
                assert!((nxy - x.norm() * y.norm()).abs() <= 1e-12 * (1.0 + nxy));
                assert!(close(&(x * (x * y)), &((x * x) * y), 1e-12));
                assert!(close(&((y * x) * x), &(y * (x * x)), 1e-12));
                let xx = (x * x.conj()).re();
                assert!((xx - x.norm_sqr()).abs() < 1e-14);
                // (xy)(zx) = x((yz)x)
                let l = (x * y) * (z * x);
                let r = x * ((y * z) * x);
                assert!(close(&l, &r, 1e-10));
                if field.is_associative() {
                    assert!(close(&((x * y) * z), &(x * (y * z)), 1e-12));
                }
            }
        }
    }

    #[test]
    fn realify_identity_and_multiplicativity() {
        let id = HermitianMatrix::<f64>::identity(Field::H, 2).unwrap();
        assert_eq!(realify(&id).unwrap(), HermitianMatrix::identity(Field::C, 4).unwrap());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.random_range(1..4);
            let mk = |rng: &mut ChaCha8Rng| {
                let d: Vec<Element> = (0..n * n).map(|_| rand_el(rng, Field::H)).collect();
                Matrix::from_entries(Field::H, n, n, d).unwrap()
            };
            let (a, b) = (mk(&mut rng), mk(&mut rng));
            let lhs = realify_matrix(&a.matmul(&b).unwrap()).unwrap();
            let rhs = realify_matrix(&a).unwrap().matmul(&realify_matrix(&b).unwrap()).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        }
    }

    #[test]
    fn realify_rejects_other_fields() {
        let id = HermitianMatrix::<f64>::identity(Field::C, 2).unwrap();
        assert!(realify(&id).is_err());
    }

    #[test]
    fn hermitian_validation() {
        let f = Field::C;
        let z = Element::new(f, &[1.0, 2.0]).unwrap();
        let ok = HermitianMatrix::new(f, 2, alloc::vec![Element::one(f), z, z.conj(), Element::one(f)]);
        assert!(ok.is_ok());
        let bad = HermitianMatrix::new(f, 2, alloc::vec![Element::one(f), z, z, Element::one(f)]);
        assert_eq!(bad, Err(AlgebraError::NotHermitian(0, 1)));
        assert_eq!(HermitianMatrix::<f64>::identity(Field::O, 4), Err(AlgebraError::OctonionSize(4)));
    }

    #[test]
    fn jordan_product_is_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for field in Field::ALL {
            let n = if field == Field::O { 3 } else { 4 };
            for _ in 0..50 {
                let mut mk = || HermitianMatrix::from_upper(field, n, |_, _| rand_el(&mut rng, field)).unwrap();
                let (a, b) = (mk(), mk());
                let mn = a.matrix().matmul(b.matrix()).unwrap();
                let nm = b.matrix().matmul(a.matrix()).unwrap();
                let s = mn.add(&nm).scale(0.5);
                assert!(s.max_abs_diff(&s.adjoint()) < 1e-12);
                assert!(a.jordan(&b).unwrap().matrix().max_abs_diff(&s) < 1e-12);
            }
        }
    }

    #[test]
    fn real_rep_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for field in Field::ASSOCIATIVE {
            let a = HermitianMatrix::from_upper(field, 3, |_, _| rand_el(&mut rng, field)).unwrap();
            let r = a.real_rep();
            assert!((r.clone() - r.transpose()).amax() < 1e-15);
            assert!(HermitianMatrix::from_real_rep(field, &r).max_abs_diff(&a) < 1e-15);
        }
    }

    #[test]
    fn exact_rational_backend() {
        use num_rational::BigRational;
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let x = Element::new(Field::C, &[q(1, 2), q(-3, 7)]).unwrap();
        let y = Element::new(Field::C, &[q(2, 3), q(5, 11)]).unwrap();
        let p = &x * &y;
        // (1/2 − 3i/7)(2/3 + 5i/11) = 1/3 + 15/77 + (5/22 − 2/7) i
        assert_eq!(p.coeffs(), &[q(1, 3) + q(15, 77), q(5, 22) - q(2, 7)]);
        assert_eq!(p.norm_sqr(), x.norm_sqr() * y.norm_sqr());
    }
}
