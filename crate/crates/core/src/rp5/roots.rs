//! Rational roots of univariate polynomials with rational coefficients.
//!
//! A rational root p/q of a primitive integer polynomial has q dividing the
//! leading coefficient L, so two such roots are at least 1/L² apart. Each real
//! root is isolated in floating point, bracketed exactly, bisected below that
//! separation and read off as the simplest rational in its bracket.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{q, Q};

/// `coeffs[k]` is the coefficient of `x^k`.
pub fn eval(coeffs: &[Q], x: &Q) -> Q {
    coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn eval_f(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn derivative(c: &[Q]) -> Vec<Q> {
    c.iter().enumerate().skip(1).map(|(k, x)| x * q(k as i64)).collect()
}

fn div_rem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut rem = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quo = alloc::vec![Q::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let t = rem.last().expect("nonempty") / b.last().expect("nonempty");
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &t * bj;
        }
        quo[k] = t;
        rem.pop();
        rem = trim(rem);
    }
    (quo, rem)
}

fn gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// Scales to a primitive integer polynomial.
fn primitive(c: &[Q]) -> Vec<BigInt> {
    let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| if g.is_zero() { x } else { x / &g }).collect()
}

/// Real roots of a float polynomial: monotone pieces between critical points
/// are bisected.
fn real_roots(c: &[f64]) -> Vec<f64> {
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return alloc::vec![-c[0] / c[1]];
    }
    let lead = c[deg];
    let bound = 1.0 + c[..deg].iter().map(|x| (x / lead).abs()).fold(0.0, f64::max);
    let deriv: Vec<f64> = (1..=deg).map(|k| c[k] * k as f64).collect();
    let mut knots = alloc::vec![-bound];
    knots.extend(real_roots(&deriv).into_iter().filter(|x| x.abs() < bound));
    knots.push(bound);
    knots.sort_by(|a, b| a.total_cmp(b));
    let mut out = Vec::new();
    for w in knots.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let flo = eval_f(c, lo);
        if flo == 0.0 {
            out.push(lo);
            continue;
        }
        if flo.signum() == eval_f(c, hi).signum() {
            // touching critical point; kept as a candidate
            if eval_f(c, hi).abs() < 1e-9 * c.iter().map(|x| x.abs()).fold(0.0, f64::max) {
                out.push(hi);
            }
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eval_f(c, mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

fn floor(x: &Q) -> Q {
    Q::from_integer(x.floor().to_integer())
}

/// Simplest rational (smallest denominator) in the closed interval.
pub fn simplest_between(lo: &Q, hi: &Q) -> Q {
    if lo > hi {
        return simplest_between(hi, lo);
    }
    if !lo.is_positive() && !hi.is_negative() {
        return Q::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = floor(lo);
    if fl == *lo {
        return fl;
    }
    let next = &fl + Q::one();
    if next <= *hi {
        return next;
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

fn sign(c: &[Q], x: &Q) -> i8 {
    let v = eval(c, x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// All rational roots, each verified by exact evaluation. Returns `None` for
/// the zero polynomial.
pub fn rational_roots(coeffs: &[Q]) -> Option<Vec<Q>> {
    let mut c = trim(coeffs.to_vec());
    if c.is_empty() {
        return None;
    }
    let mut roots = Vec::new();
    if c[0].is_zero() {
        roots.push(q(0));
        while c.first().is_some_and(|x| x.is_zero()) {
            c.remove(0);
        }
    }
    if c.len() < 2 {
        return Some(roots);
    }
    let g = gcd(&c, &derivative(&c));
    let (sf, _) = div_rem(&c, &g);
    let ints = primitive(&sf);
    let sf: Vec<Q> = ints.iter().map(|x| Q::from_integer(x.clone())).collect();
    let lead = ints.last().expect("nonempty").abs();
    let sep = Q::new(BigInt::one(), &lead * &lead * BigInt::from(2));
    let big = ints.iter().map(|x| x.abs()).max().expect("nonempty");
    let cf: Vec<f64> = ints.iter().map(|x| Q::new(x.clone(), big.clone()).to_f64().unwrap_or(0.0)).collect();
    for r in real_roots(&cf) {
        let Some(rq) = Q::from_float(r) else { continue };
        if sign(&sf, &rq) == 0 {
            if !roots.contains(&rq) {
                roots.push(rq);
            }
            continue;
        }
        // exact bracket around the float root
        let mut delta = 1e-9 * (1.0 + r.abs());
        let mut bracket = None;
        for _ in 0..40 {
            let (Some(lo), Some(hi)) = (Q::from_float(r - delta), Q::from_float(r + delta)) else { break };
            let (sl, sh) = (sign(&sf, &lo), sign(&sf, &hi));
            if sl == 0 {
                bracket = Some((lo.clone(), lo));
                break;
            }
            if sh == 0 {
                bracket = Some((hi.clone(), hi));
                break;
            }
            if sl != sh {
                bracket = Some((lo, hi));
                break;
            }
            delta *= 4.0;
        }
        let Some((mut lo, mut hi)) = bracket else { continue };
        let slo = sign(&sf, &lo);
        while &hi - &lo > sep {
            let mid = (&lo + &hi) / q(2);
            match sign(&sf, &mid) {
                0 => {
                    lo = mid.clone();
                    hi = mid;
                }
                s if s == slo => lo = mid,
                _ => hi = mid,
            }
        }
        let cand = simplest_between(&lo, &hi);
        if eval(&sf, &cand).is_zero() && !roots.contains(&cand) {
            roots.push(cand);
        }
    }
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    fn from_roots(lead: Q, rs: &[Q]) -> Vec<Q> {
        let mut c = alloc::vec![lead];
        for r in rs {
            let mut n = alloc::vec![Q::zero(); c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                n[k + 1] += ck;
                n[k] -= ck * r;
            }
            c = n;
        }
        c
    }

    #[test]
    fn finds_rational_roots() {
        let c = from_roots(qr(7, 3), &[qr(-5, 11), q(3), qr(2, 9)]);
        let mut r = rational_roots(&c).unwrap();
        r.sort();
        assert_eq!(r, alloc::vec![qr(-5, 11), qr(2, 9), q(3)]);
    }

    #[test]
    fn double_and_zero_roots() {
        let c = from_roots(q(1), &[qr(1, 3), qr(1, 3), q(0)]);
        let mut r = rational_roots(&c).unwrap();
        r.sort();
        assert_eq!(r, alloc::vec![q(0), qr(1, 3)]);
    }

    #[test]
    fn huge_denominators() {
        let a = Q::new(BigInt::from(123_456_789_012_345i64), BigInt::from(987_654_321_098_765_431i64));
        let b = Q::new(BigInt::from(-31i64), BigInt::from(1i64) << 60);
        let c = from_roots(qr(3, 7), &[a.clone(), b.clone(), q(5)]);
        let r = rational_roots(&c).unwrap();
        assert!(r.contains(&a) && r.contains(&b) && r.contains(&q(5)));
    }

    #[test]
    fn irrational_roots_are_skipped() {
        assert!(rational_roots(&[q(-2), q(0), q(1)]).unwrap().is_empty());
        assert!(rational_roots(&[q(0)]).is_none());
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(&qr(3, 10), &qr(4, 10)), qr(1, 3));
        assert_eq!(simplest_between(&qr(-1, 2), &qr(1, 2)), q(0));
        assert_eq!(simplest_between(&qr(-7, 5), &qr(-13, 10)), qr(-4, 3));
    }
}
