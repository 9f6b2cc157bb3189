//! Normal form, plane parametrization and the determinant conditions.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::poly::{det3, Poly};
use super::roots::rational_roots;
use super::Rp5Error;
use crate::rational::{q, QMatrix, Q};

/// Points of each base span, as indices into p₀..p₆.
pub const INCIDENCE: [[usize; 3]; 6] = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [2, 3, 5], [1, 4, 5], [1, 3, 6]];

/// The quadrangle p₀, p₁, p₃, p₅; the other three points are its diagonal
/// points.
pub const QUADRANGLE: [usize; 4] = [0, 1, 3, 5];

pub fn normal_form_points() -> [[Q; 5]; 7] {
    let mut pts: [[Q; 5]; 7] = core::array::from_fn(|_| core::array::from_fn(|_| q(0)));
    for (i, p) in pts.iter_mut().enumerate().skip(1).take(5) {
        p[i - 1] = q(1);
    }
    pts[6] = core::array::from_fn(|_| q(1));
    pts
}

/// An affine equation `Σ coeffs·x = rhs` on ℝ⁵ with coordinates (x,y,z,v,w).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineEquation {
    pub coeffs: [i64; 5],
    pub rhs: i64,
}

const fn eq(coeffs: [i64; 5], rhs: i64) -> AffineEquation {
    AffineEquation { coeffs, rhs }
}

/// Cut-out equations of S₄, S₅, S₆ in the order the rows are displayed.
pub fn span_equations(i: usize) -> Option<[AffineEquation; 3]> {
    match i {
        4 => Some([eq([1, 0, 0, 0, 0], 0), eq([0, 0, 0, 1, 0], 0), eq([0, 1, 1, 0, 1], 1)]),
        5 => Some([eq([0, 1, 0, 0, 0], 0), eq([0, 0, 1, 0, 0], 0), eq([1, 0, 0, 1, 1], 1)]),
        6 => Some([eq([0, 1, 0, 0, -1], 0), eq([0, 0, 0, 1, -1], 0), eq([1, 0, 1, 0, -1], 1)]),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneParams {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub d: Q,
    pub e: Q,
    pub f: Q,
}

impl PlaneParams {
    pub fn new(v: [Q; 6]) -> Self {
        let [a, b, c, d, e, f] = v;
        PlaneParams { a, b, c, d, e, f }
    }

    pub fn from_ints(v: [i64; 6]) -> Self {
        Self::new(v.map(q))
    }

    pub fn values(&self) -> [Q; 6] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone(), self.e.clone(), self.f.clone()]
    }

    /// u₁ ∈ S₁, u₂ ∈ S₂, u₃ ∈ S₃.
    pub fn generators(&self) -> [[Q; 5]; 3] {
        let z = q(0);
        [
            [self.a.clone(), self.b.clone(), z.clone(), z.clone(), z.clone()],
            [z.clone(), z.clone(), self.c.clone(), self.d.clone(), z],
            [self.e.clone(), self.e.clone(), self.e.clone(), self.e.clone(), self.f.clone()],
        ]
    }
}

/// The plane r·u₁ + s·u₂ + t·u₃, r+s+t = 1, as its three generators.
pub fn plane_from_params(p: &PlaneParams) -> Result<[[Q; 5]; 3], Rp5Error> {
    let g = p.generators();
    let diffs = QMatrix::from_fn(2, 5, |i, j| &g[i + 1][j] - &g[0][j]);
    if diffs.rank() < 2 {
        return Err(Rp5Error::DegenerateGenerators);
    }
    Ok(g)
}

fn generator_polys() -> [[Poly; 5]; 3] {
    let v = Poly::var;
    let z = Poly::zero;
    [[v(0), v(1), z(), z(), z()], [z(), z(), v(2), v(3), z()], [v(4), v(4), v(4), v(4), v(5)]]
}

/// The i-th displayed matrix (i ∈ {4,5,6}): rows are the equations of Sᵢ,
/// columns the generators, entry = equation(u_j) − rhs.
pub fn condition_matrix(i: usize) -> Result<[[Poly; 3]; 3], Rp5Error> {
    let eqs = span_equations(i).ok_or(Rp5Error::BadSpanIndex(i))?;
    let u = generator_polys();
    Ok(core::array::from_fn(|r| {
        core::array::from_fn(|col| {
            let mut p = Poly::int(-eqs[r].rhs);
            for (uk, &ck) in u[col].iter().zip(&eqs[r].coeffs) {
                p = p.add(&uk.scale(&q(ck)));
            }
            p
        })
    }))
}

pub fn condition_poly(i: usize) -> Result<Poly, Rp5Error> {
    Ok(det3(&condition_matrix(i)?))
}

pub fn det_condition_i(p: &PlaneParams, i: usize) -> Result<Q, Rp5Error> {
    Ok(condition_poly(i)?.eval(&p.values()))
}

/// Rows (∂/∂e, ∂/∂f, value at e = f = 0) of the three conditions.
pub fn combined_matrix() -> Result<[[Poly; 3]; 3], Rp5Error> {
    let mut rows: Vec<[Poly; 3]> = Vec::new();
    for i in 4..=6 {
        let p = condition_poly(i)?;
        let c0 = p.subs(4, &q(0)).subs(5, &q(0));
        rows.push([p.derivative(4), p.derivative(5), c0]);
    }
    let mut it = rows.into_iter();
    Ok(core::array::from_fn(|_| it.next().expect("three rows")))
}

pub const PRINTED_COMBINED: [[&str; 3]; 3] = [
    ["-ac+2ad-bd+a+d", "ad", "-ad"],
    ["-ac+2bc-bd+b+c", "bc", "-bc"],
    ["-ad-bc+2bd+b+d", "ad+bc-bd-b-d", "-bd"],
];

pub fn printed_combined_matrix() -> [[Poly; 3]; 3] {
    PRINTED_COMBINED.map(|row| row.map(|s| Poly::parse(s).expect("printed entries parse")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryComparison {
    pub row: usize,
    pub col: usize,
    pub derived: String,
    pub printed: String,
    /// derived − printed; zero when the entry matches.
    pub difference: String,
    pub matches: bool,
}

pub fn compare_with_printed() -> Result<Vec<EntryComparison>, Rp5Error> {
    use alloc::string::ToString;
    let derived = combined_matrix()?;
    let printed = printed_combined_matrix();
    let mut out = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            let diff = derived[r][c].sub(&printed[r][c]);
            out.push(EntryComparison {
                row: r,
                col: c,
                derived: derived[r][c].to_string(),
                printed: printed[r][c].to_string(),
                difference: diff.to_string(),
                matches: diff.is_zero(),
            });
        }
    }
    Ok(out)
}

pub fn combined_condition_poly() -> Result<Poly, Rp5Error> {
    Ok(det3(&combined_matrix()?))
}

pub fn combined_condition(a: &Q, b: &Q, c: &Q, d: &Q) -> Result<Q, Rp5Error> {
    let x = [a.clone(), b.clone(), c.clone(), d.clone(), q(0), q(0)];
    Ok(combined_condition_poly()?.eval(&x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub c: Q,
    pub d: Q,
    /// q(a, b) in variables a, b.
    pub cubic: Poly,
    pub linear: Poly,
    pub quadratic: Poly,
}

impl Factorization {
    /// (α, β, γ) of αa + βb + γ.
    pub fn line_coefficients(&self) -> [Q; 3] {
        let l = &self.linear;
        let c0 = l.subs(0, &q(0)).subs(1, &q(0)).as_constant().unwrap_or_default();
        [
            l.coefficient(0, 1).as_constant().unwrap_or_default(),
            l.coefficient(1, 1).as_constant().unwrap_or_default(),
            c0,
        ]
    }

    /// Symmetric matrix K with quadratic(a, b) = (a, b, 1) K (a, b, 1)ᵀ.
    pub fn conic_matrix(&self) -> QMatrix {
        let p = &self.quadratic;
        let coef = |ea: usize, eb: usize| {
            p.coefficient(0, ea).coefficient(1, eb).as_constant().unwrap_or_default()
        };
        let half = crate::rational::qr(1, 2);
        let (aa, bb, cc) = (coef(2, 0), coef(0, 2), coef(0, 0));
        let (ab, a1, b1) = (coef(1, 1) * &half, coef(1, 0) * &half, coef(0, 1) * &half);
        QMatrix::from_rows(&[
            alloc::vec![aa, ab.clone(), a1.clone()],
            alloc::vec![ab, bb, b1.clone()],
            alloc::vec![a1, b1, cc],
        ])
    }
}

/// Common rational roots of polynomials in the single variable `var`.
fn common_roots(polys: &[Poly], var: usize) -> Option<Vec<Q>> {
    let nonzero: Vec<&Poly> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Some(alloc::vec![q(0)]);
    }
    let pivot = nonzero.iter().min_by_key(|p| p.degree_in(var)).expect("nonempty");
    if pivot.degree_in(var) == 0 {
        return None;
    }
    let coeffs: Vec<Q> = (0..=pivot.degree_in(var))
        .map(|k| pivot.coefficient(var, k).as_constant().unwrap_or_default())
        .collect();
    let roots = rational_roots(&coeffs)?;
    Some(roots.into_iter().filter(|r| nonzero.iter().all(|p| p.subs(var, r).is_zero())).collect())
}

/// Finds a linear factor of a polynomial in a, b over ℚ.
pub fn linear_factor(p: &Poly) -> Option<Poly> {
    const A: usize = 0;
    const B: usize = 1;
    const NU: usize = 2;
    let nu = Poly::var(NU);
    let deg = p.total_degree();
    let top = p.homogeneous_part(deg);
    // a = μ b + ν: top(μ, 1) must vanish
    let top_coeffs: Vec<Q> = (0..=deg)
        .map(|k| top.coefficient(A, k).coefficient(B, deg - k).as_constant().unwrap_or_default())
        .collect();
    if let Some(mus) = rational_roots(&top_coeffs) {
        for mu in mus {
            let sub = Poly::var(B).scale(&mu).add(&nu);
            let composed = p.compose(A, &sub);
            let coeffs: Vec<Poly> = (0..=composed.degree_in(B)).map(|j| composed.coefficient(B, j)).collect();
            if let Some(nus) = common_roots(&coeffs, NU) {
                if let Some(v) = nus.first() {
                    return Some(Poly::var(A).sub(&Poly::var(B).scale(&mu)).sub(&Poly::constant(v.clone())));
                }
            }
        }
    }
    // b = ν
    let composed = p.compose(B, &nu);
    let coeffs: Vec<Poly> = (0..=composed.degree_in(A)).map(|j| composed.coefficient(A, j)).collect();
    let nus = common_roots(&coeffs, NU)?;
    nus.first().map(|v| Poly::var(B).sub(&Poly::constant(v.clone())))
}

/// Exact factorization of q(a, b) = combined_condition(a, b, c, d).
pub fn factor_condition(c: &Q, d: &Q) -> Result<Factorization, Rp5Error> {
    let cubic = combined_condition_poly()?.subs(2, c).subs(3, d);
    let witness = || Rp5Error::Irreducible { c: Box::new(c.clone()), d: Box::new(d.clone()) };
    if cubic.total_degree() != 3 {
        return Err(Rp5Error::DegenerateCubic { c: Box::new(c.clone()), d: Box::new(d.clone()), degree: cubic.total_degree() });
    }
    let linear = linear_factor(&cubic).ok_or_else(witness)?;
    let var = if linear.degree_in(0) == 1 { 0 } else { 1 };
    let (quadratic, rem) = cubic.div_rem(&linear, var).ok_or_else(witness)?;
    if !rem.is_zero() || quadratic.total_degree() != 2 || linear.mul(&quadratic) != cubic {
        return Err(witness());
    }
    Ok(Factorization { c: c.clone(), d: d.clone(), cubic, linear, quadratic })
}

/// A span index with the triples of normal-form points lying on it.
pub type SpanTriples = (usize, Vec<[usize; 3]>);

/// Spans S₄, S₅, S₆ paired with every triple of normal-form points lying on
/// them; the incidence table is the list of singleton answers.
pub fn recover_incidence() -> Result<Vec<SpanTriples>, Rp5Error> {
    let pts = normal_form_points();
    let mut out = Vec::new();
    for i in 4..=6 {
        let eqs = span_equations(i).ok_or(Rp5Error::BadSpanIndex(i))?;
        let on = |p: &[Q; 5]| {
            eqs.iter().all(|e| {
                let lhs = (0..5).fold(Q::zero(), |acc, k| acc + &p[k] * q(e.coeffs[k]));
                lhs == q(e.rhs)
            })
        };
        let mut triples = Vec::new();
        for x in 0..7 {
            for y in x + 1..7 {
                for z in y + 1..7 {
                    if [x, y, z].iter().all(|&k| on(&pts[k])) {
                        triples.push([x, y, z]);
                    }
                }
            }
        }
        out.push((i, triples));
    }
    Ok(out)
}

/// Plane parameters of the plane through u₁ = point on S₁ etc., where the
/// three points are given in ℝ⁵ and must have the parametrized shapes.
pub fn params_of(u1: &[Q; 5], u2: &[Q; 5], u3: &[Q; 5]) -> Option<PlaneParams> {
    let z = Q::zero();
    let ok = u1[2..].iter().all(|x| *x == z)
        && u2[0] == z
        && u2[1] == z
        && u2[4] == z
        && u3[0] == u3[1]
        && u3[1] == u3[2]
        && u3[2] == u3[3];
    ok.then(|| {
        PlaneParams::new([u1[0].clone(), u1[1].clone(), u2[2].clone(), u2[3].clone(), u3[0].clone(), u3[4].clone()])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;
    use alloc::string::ToString;

    #[test]
    fn first_condition_at_origin_slice() {
        let p = condition_poly(4).unwrap().subs(4, &q(0)).subs(5, &q(0));
        assert_eq!(p, Poly::parse("-ad").unwrap());
        let m = condition_matrix(4).unwrap();
        assert_eq!(m[2][2].to_string(), "2e+f-1");
        assert_eq!(m[0][0].to_string(), "a");
    }

    #[test]
    fn conditions_affine_in_e_f() {
        for i in 4..=6 {
            let p = condition_poly(i).unwrap();
            for (x, y) in [(4, 4), (4, 5), (5, 5)] {
                assert!(p.derivative(x).derivative(y).is_zero(), "condition {i}");
            }
        }
    }

    #[test]
    fn displayed_matrices() {
        let shown = [
            [["a", "0", "e"], ["0", "d", "e"], ["b-1", "c-1", "2e+f-1"]],
            [["b", "0", "e"], ["0", "c", "e"], ["a-1", "d-1", "2e+f-1"]],
            [["b", "0", "e-f"], ["0", "d", "e-f"], ["a-1", "c-1", "2e-f-1"]],
        ];
        for (k, i) in (4..=6).enumerate() {
            let m = condition_matrix(i).unwrap();
            for r in 0..3 {
                for c in 0..3 {
                    assert_eq!(m[r][c], Poly::parse(shown[k][r][c]).unwrap());
                }
            }
        }
    }

    #[test]
    fn first_row_by_hand() {
        let m = combined_matrix().unwrap();
        assert_eq!(m[0][0], Poly::parse("-ac+2ad-bd+a+d").unwrap());
        assert_eq!(m[0][1], Poly::parse("ad").unwrap());
        assert_eq!(m[0][2], Poly::parse("-ad").unwrap());
    }

    #[test]
    fn printed_matrix_fidelity() {
        let cmp = compare_with_printed().unwrap();
        assert_eq!(cmp.len(), 9);
        for e in cmp {
            assert!(e.matches, "entry ({}, {}): derived {} printed {}", e.row, e.col, e.derived, e.printed);
        }
    }

    #[test]
    fn factorization_at_two_three() {
        let f = factor_condition(&q(2), &q(3)).unwrap();
        assert_eq!(f.linear.mul(&f.quadratic), f.cubic);
        assert_eq!(f.linear.total_degree(), 1);
        assert_eq!(f.quadratic.total_degree(), 2);
        // 2·(3a − 5b − 3)·(3a² + 2ab − 3a − 3b² + 3b), up to scalars
        let l = Poly::parse("3a-5b-3").unwrap();
        let (_, rem) = f.linear.div_rem(&l, 0).unwrap();
        assert!(rem.is_zero());
        let [al, be, ga] = f.line_coefficients();
        assert_eq!(&al * q(-5), &be * q(3));
        assert_eq!(&al * q(-3), &ga * q(3));
        let k = f.conic_matrix();
        assert_eq!(k[(2, 2)], q(0));
    }

    #[test]
    fn factorization_rational_points() {
        for (c, d) in [(qr(1, 3), qr(-7, 2)), (qr(5, 4), qr(2, 9)), (q(-3), qr(11, 5))] {
            let f = factor_condition(&c, &d).unwrap();
            assert_eq!(f.linear.mul(&f.quadratic), f.cubic);
        }
    }

    #[test]
    fn incidence_is_recovered() {
        let rec = recover_incidence().unwrap();
        for (i, triples) in rec {
            assert_eq!(triples, alloc::vec![INCIDENCE[i - 1]], "span {i}");
        }
    }

    #[test]
    fn rank_test_matches_condition() {
        // combined = 0 iff the 3×3 system in (e, f, 1) is singular
        let m = combined_matrix().unwrap();
        for (a, b, c, d) in [(qr(1, 2), q(3), q(-1), qr(2, 7)), (q(0), q(1), q(1), q(0))] {
            let x = [a.clone(), b.clone(), c.clone(), d.clone(), q(0), q(0)];
            let qm = QMatrix::from_fn(3, 3, |r, k| m[r][k].eval(&x));
            let cc = combined_condition(&a, &b, &c, &d).unwrap();
            assert_eq!(qm.rank() < 3, cc.is_zero());
        }
    }

    #[test]
    fn degenerate_generators() {
        assert!(plane_from_params(&PlaneParams::from_ints([1, 0, 1, 0, 0, 0])).is_ok());
        assert!(plane_from_params(&PlaneParams::from_ints([0, 0, 0, 0, 0, 0])).is_err());
    }

    #[test]
    fn base_spans_satisfy_their_conditions() {
        // S₄ meets S₁, S₂, S₃ at p₂, p₃, p₅
        let pts = normal_form_points();
        let p = params_of(&pts[2], &pts[3], &pts[5]).unwrap();
        for i in 4..=6 {
            assert!(det_condition_i(&p, i).unwrap().is_zero());
        }
        assert!(combined_condition(&p.a, &p.b, &p.c, &p.d).unwrap().is_zero());
    }
}
