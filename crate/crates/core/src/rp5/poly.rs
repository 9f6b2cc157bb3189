//! Sparse multivariate polynomials over ℚ in the six variables `a … f`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::rational::{q, Q};

pub const NVARS: usize = 6;
pub const VAR_NAMES: [char; NVARS] = ['a', 'b', 'c', 'd', 'e', 'f'];

pub type Monomial = [u8; NVARS];

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: &'static str,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at byte {}", self.message, self.position)
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term([0; NVARS], c);
        p
    }

    pub fn int(c: i64) -> Self {
        Self::constant(q(c))
    }

    pub fn var(i: usize) -> Self {
        let mut m = [0; NVARS];
        m[i] = 1;
        let mut p = Poly::zero();
        p.add_term(m, Q::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            p.add_term(*m, c * s);
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = [0; NVARS];
                for i in 0..NVARS {
                    m[i] = m1[i] + m2[i];
                }
                p.add_term(m, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::int(1), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            if m[var] > 0 {
                let mut d = *m;
                d[var] -= 1;
                p.add_term(d, c * q(m[var] as i64));
            }
        }
        p
    }

    /// Replaces variable `var` by the constant `value`.
    pub fn subs(&self, var: usize, value: &Q) -> Self {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            let mut d = *m;
            d[var] = 0;
            let mut f = c.clone();
            for _ in 0..m[var] {
                f *= value;
            }
            p.add_term(d, f);
        }
        p
    }

    /// Replaces variable `var` by the polynomial `value`.
    pub fn compose(&self, var: usize, value: &Poly) -> Self {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            let mut d = *m;
            d[var] = 0;
            let mut mono = Poly::zero();
            mono.add_term(d, c.clone());
            p = p.add(&mono.mul(&value.pow(m[var] as u32)));
        }
        p
    }

    pub fn eval(&self, x: &[Q; NVARS]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for i in 0..NVARS {
                for _ in 0..m[i] {
                    t *= &x[i];
                }
            }
            acc + t
        })
    }

    pub fn eval_f64(&self, x: &[f64; NVARS]) -> f64 {
        self.terms.iter().fold(0.0, |acc, (m, c)| {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for i in 0..NVARS {
                t *= Float::powi(x[i], m[i] as i32);
            }
            acc + t
        })
    }

    /// Σ |coefficient · monomial|, the natural scale for [`Self::eval_f64`].
    pub fn magnitude_f64(&self, x: &[f64; NVARS]) -> f64 {
        self.terms.iter().fold(0.0, |acc, (m, c)| {
            let mut t = c.to_f64().unwrap_or(f64::NAN).abs();
            for i in 0..NVARS {
                t *= Float::powi(x[i].abs(), m[i] as i32);
            }
            acc + t
        })
    }

    pub fn degree_in(&self, var: usize) -> usize {
        self.terms.keys().map(|m| m[var] as usize).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|m| m.iter().map(|&e| e as usize).sum()).max().unwrap_or(0)
    }

    /// Coefficient of `var^k` as a polynomial in the other variables.
    pub fn coefficient(&self, var: usize, k: usize) -> Self {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            if m[var] as usize == k {
                let mut d = *m;
                d[var] = 0;
                p.add_term(d, c.clone());
            }
        }
        p
    }

    /// Homogeneous part of total degree `k`.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            if m.iter().map(|&e| e as usize).sum::<usize>() == k {
                p.add_term(*m, c.clone());
            }
        }
        p
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&[0; NVARS]).cloned(),
            _ => None,
        }
    }

    pub fn variables(&self) -> Vec<usize> {
        (0..NVARS).filter(|&i| self.degree_in(i) > 0).collect()
    }

    /// Division with respect to `var` by a divisor whose leading coefficient
    /// in `var` is a nonzero constant. Returns `(quotient, remainder)` with
    /// `deg_var(remainder) < deg_var(divisor)`.
    pub fn div_rem(&self, divisor: &Poly, var: usize) -> Option<(Poly, Poly)> {
        let dd = divisor.degree_in(var);
        let lead = divisor.coefficient(var, dd).as_constant().filter(|c| !c.is_zero())?;
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while !rem.is_zero() && rem.degree_in(var) >= dd {
            let k = rem.degree_in(var);
            let top = rem.coefficient(var, k).scale(&lead.recip());
            let mut shift = [0; NVARS];
            shift[var] = (k - dd) as u8;
            let mut mono = Poly::zero();
            mono.add_term(shift, Q::one());
            let t = top.mul(&mono);
            quo = quo.add(&t);
            rem = rem.sub(&t.mul(divisor));
        }
        Some((quo, rem))
    }

    /// Parses expressions such as `-ac+2ad-bd+a+d` or `2e+f-1`: a signed sum
    /// of terms, each an optional integer (or `p/q`) coefficient followed by
    /// variable letters with optional `^k` exponents and optional `*`.
    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let bytes: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut i = 0;
        let mut p = Poly::zero();
        if bytes.is_empty() {
            return Err(ParseError { position: 0, message: "empty expression" });
        }
        while i < bytes.len() {
            let mut sign = q(1);
            if bytes[i] == '+' || bytes[i] == '-' {
                if bytes[i] == '-' {
                    sign = q(-1);
                }
                i += 1;
            } else if i != 0 {
                return Err(ParseError { position: i, message: "expected + or -" });
            }
            let start = i;
            let mut num: Option<Q> = None;
            let digits = |i: &mut usize| {
                let mut v: i64 = 0;
                let s0 = *i;
                while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                    v = v * 10 + bytes[*i].to_digit(10).expect("digit") as i64;
                    *i += 1;
                }
                (*i > s0).then_some(v)
            };
            if let Some(n) = digits(&mut i) {
                let mut c = q(n);
                if i < bytes.len() && bytes[i] == '/' {
                    i += 1;
                    let d = digits(&mut i).ok_or(ParseError { position: i, message: "expected denominator" })?;
                    if d == 0 {
                        return Err(ParseError { position: i, message: "zero denominator" });
                    }
                    c /= q(d);
                }
                num = Some(c);
            }
            let mut m = [0u8; NVARS];
            while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i] == '*') {
                if bytes[i] == '*' {
                    i += 1;
                    continue;
                }
                let v = VAR_NAMES
                    .iter()
                    .position(|&c| c == bytes[i])
                    .ok_or(ParseError { position: i, message: "unknown variable" })?;
                i += 1;
                let mut e = 1u8;
                if i < bytes.len() && bytes[i] == '^' {
                    i += 1;
                    e = digits(&mut i).ok_or(ParseError { position: i, message: "expected exponent" })? as u8;
                }
                m[v] += e;
            }
            if i == start {
                return Err(ParseError { position: i, message: "expected a term" });
            }
            p.add_term(m, sign * num.unwrap_or_else(Q::one));
        }
        Ok(p)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // higher total degree first, then lexicographic in a, b, …
        let mut terms: Vec<(&Monomial, &Q)> = self.terms.iter().collect();
        terms.sort_by(|(m1, _), (m2, _)| {
            let d1: u32 = m1.iter().map(|&e| e as u32).sum();
            let d2: u32 = m2.iter().map(|&e| e as u32).sum();
            d2.cmp(&d1).then(m2.cmp(m1))
        });
        for (k, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                f.write_str("-")?;
            } else if k > 0 {
                f.write_str("+")?;
            }
            let is_const = m.iter().all(|&e| e == 0);
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
            }
            let mut name = String::new();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    name.push(VAR_NAMES[i]);
                }
            }
            f.write_str(&name)?;
        }
        Ok(())
    }
}

/// 3×3 determinant by cofactor expansion.
pub fn det3(m: &[[Poly; 3]; 3]) -> Poly {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1]));
    m[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&m[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&m[0][2].mul(&minor(1, 2, 0, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parse_and_print() {
        let p = Poly::parse("-ac+2ad-bd+a+d").unwrap();
        assert_eq!(p.to_string(), "-ac+2ad-bd+a+d");
        let r = Poly::parse("2e+f-1").unwrap();
        assert_eq!(r, Poly::var(4).scale(&q(2)).add(&Poly::var(5)).sub(&Poly::int(1)));
        assert!(Poly::parse("a+-").is_err());
        assert!(Poly::parse("x").is_err());
        assert_eq!(Poly::parse("a^2b").unwrap(), Poly::var(0).mul(&Poly::var(0)).mul(&Poly::var(1)));
        assert_eq!(Poly::parse("1/2a").unwrap(), Poly::var(0).scale(&crate::rational::qr(1, 2)));
    }

    #[test]
    fn calculus() {
        let p = Poly::parse("a^2b+3ab-e").unwrap();
        assert_eq!(p.derivative(0), Poly::parse("2ab+3b").unwrap());
        assert_eq!(p.subs(1, &q(2)), Poly::parse("2a^2+6a-e").unwrap());
        assert_eq!(p.compose(0, &Poly::parse("b+1").unwrap()), Poly::parse("b^3+2b^2+b+3b^2+3b-e").unwrap());
        assert_eq!(p.total_degree(), 3);
        assert_eq!(p.degree_in(0), 2);
    }

    #[test]
    fn division() {
        let l = Poly::parse("a-2b+1").unwrap();
        let qd = Poly::parse("a^2+ab-3").unwrap();
        let (quo, rem) = l.mul(&qd).div_rem(&l, 0).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quo, qd);
        let (_, rem) = qd.div_rem(&l, 0).unwrap();
        assert!(!rem.is_zero());
    }
}
