//! JSON interchange for matrices, faces, Albert elements, polytopes,
//! lattices and the exact seven-point configuration.
//!
//! Rationals are written as `"p/q"` strings and round-trip exactly; floating
//! values are plain JSON numbers.

use std::path::Path;

use hermface_core::albert::AlbertElement;
use hermface_core::cone_faces::{Face, Subspace};
use hermface_core::lattice::{FiniteLattice, PolytopeV};
use hermface_core::rational::{to_f64, QMatrix, Q};
use hermface_core::rp5::config::normal_form_points;
use hermface_core::rp5::{CanonicalBody, INCIDENCE};
use hermface_core::{Element, Field, HermitianMatrix};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("unknown field {0:?}")]
    Field(String),
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("non-finite number")]
    NonFinite,
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Algebra(#[from] hermface_core::AlgebraError),
    #[error(transparent)]
    Lattice(#[from] hermface_core::lattice::LatticeError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A coefficient: a float, or an exact rational string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Exact(String),
}

impl Scalar {
    pub fn exact(x: &Q) -> Self {
        Scalar::Exact(x.to_string())
    }

    pub fn to_q(&self) -> Result<Q, FormatError> {
        match self {
            Scalar::Number(x) => Q::from_float(*x).ok_or(FormatError::NonFinite),
            Scalar::Exact(s) => parse_q(s),
        }
    }

    pub fn to_f64(&self) -> Result<f64, FormatError> {
        match self {
            Scalar::Number(x) => Ok(*x),
            Scalar::Exact(s) => Ok(to_f64(&parse_q(s)?)),
        }
    }
}

pub fn parse_q(s: &str) -> Result<Q, FormatError> {
    s.trim().parse::<Q>().map_err(|_| FormatError::Rational(s.to_string()))
}

fn parse_field(s: &str) -> Result<Field, FormatError> {
    Field::parse(s).ok_or_else(|| FormatError::Field(s.to_string()))
}

fn shape(what: &str, expected: usize, got: usize) -> FormatError {
    FormatError::Shape(format!("{what}: expected {expected} entries, got {got}"))
}

/// `entries[i][j]` lists the real coefficients of the (i, j) entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub field: String,
    pub n: usize,
    pub entries: Vec<Vec<Vec<Scalar>>>,
}

impl MatrixDoc {
    pub fn from_hermitian(a: &HermitianMatrix) -> Self {
        let n = a.n();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| a.get(i, j).coeffs().iter().map(|&c| Scalar::Number(c)).collect()).collect())
            .collect();
        MatrixDoc { field: a.field().symbol().into(), n, entries }
    }

    pub fn from_exact(a: &HermitianMatrix<Q>) -> Self {
        let n = a.n();
        let entries =
            (0..n).map(|i| (0..n).map(|j| a.get(i, j).coeffs().iter().map(Scalar::exact).collect()).collect()).collect();
        MatrixDoc { field: a.field().symbol().into(), n, entries }
    }

    fn elements<T: hermface_core::algebra::Scalar>(
        &self,
        conv: impl Fn(&Scalar) -> Result<T, FormatError>,
    ) -> Result<(Field, Vec<Element<T>>), FormatError> {
        let field = parse_field(&self.field)?;
        if self.entries.len() != self.n {
            return Err(shape("rows", self.n, self.entries.len()));
        }
        let mut out = Vec::with_capacity(self.n * self.n);
        for row in &self.entries {
            if row.len() != self.n {
                return Err(shape("columns", self.n, row.len()));
            }
            for e in row {
                if e.len() != field.dim() {
                    return Err(shape("coefficients", field.dim(), e.len()));
                }
                let coeffs = e.iter().map(&conv).collect::<Result<Vec<T>, _>>()?;
                out.push(Element::new(field, &coeffs)?);
            }
        }
        Ok((field, out))
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix, FormatError> {
        let (field, entries) = self.elements(Scalar::to_f64)?;
        Ok(HermitianMatrix::new(field, self.n, entries)?)
    }

    pub fn to_exact(&self) -> Result<HermitianMatrix<Q>, FormatError> {
        let (field, entries) = self.elements(Scalar::to_q)?;
        Ok(HermitianMatrix::new(field, self.n, entries)?)
    }
}

/// A face of C_n(𝔽), given by an orthonormal basis of its range;
/// `basis[k][i]` is the coefficient list of entry i of column k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceDoc {
    pub field: String,
    pub n: usize,
    pub basis: Vec<Vec<Vec<f64>>>,
}

impl FaceDoc {
    pub fn from_face(f: &Face) -> Self {
        let basis = f.range().basis().iter().map(|v| v.iter().map(|e| e.coeffs().to_vec()).collect()).collect();
        FaceDoc { field: f.field().symbol().into(), n: f.n(), basis }
    }

    pub fn to_face(&self) -> Result<Face, FormatError> {
        let field = parse_field(&self.field)?;
        let mut vectors = Vec::with_capacity(self.basis.len());
        for col in &self.basis {
            if col.len() != self.n {
                return Err(shape("basis vector", self.n, col.len()));
            }
            vectors.push(col.iter().map(|c| Element::new(field, c)).collect::<Result<Vec<_>, _>>()?);
        }
        let range = Subspace::span(field, self.n, &vectors);
        if range.dim() != vectors.len() {
            return Err(FormatError::Shape(format!("basis of {} vectors spans dimension {}", vectors.len(), range.dim())));
        }
        Ok(Face::from_range(range))
    }
}

/// Slots: `x` at (2,3), `y` at (1,3), `z` at (1,2).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlbertDoc {
    pub diag: [f64; 3],
    pub x: [f64; 8],
    pub y: [f64; 8],
    pub z: [f64; 8],
}

impl AlbertDoc {
    pub fn from_element(a: &AlbertElement) -> Self {
        let oct = |e: &Element| -> [f64; 8] { e.coeffs().try_into().expect("octonion") };
        AlbertDoc { diag: a.diag, x: oct(&a.x), y: oct(&a.y), z: oct(&a.z) }
    }

    pub fn to_element(&self) -> Result<AlbertElement, FormatError> {
        let oct = |c: &[f64; 8]| Element::new(Field::O, c);
        Ok(AlbertElement::new(self.diag, oct(&self.x)?, oct(&self.y)?, oct(&self.z)?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeDoc {
    pub vertices: Vec<Vec<String>>,
}

impl PolytopeDoc {
    pub fn from_polytope(p: &PolytopeV) -> Self {
        PolytopeDoc { vertices: p.vertices().iter().map(|v| v.iter().map(Q::to_string).collect()).collect() }
    }

    pub fn to_polytope(&self) -> Result<PolytopeV, FormatError> {
        let vertices =
            self.vertices.iter().map(|v| v.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>, _>>()).collect::<Result<_, _>>()?;
        Ok(PolytopeV::new(vertices)?)
    }
}

/// `order[a][b] = 1` when a ≤ b.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub size: usize,
    pub order: Vec<Vec<u8>>,
}

impl LatticeDoc {
    pub fn from_lattice(l: &FiniteLattice) -> Self {
        let m = l.len();
        LatticeDoc { size: m, order: (0..m).map(|a| (0..m).map(|b| u8::from(l.leq(a, b))).collect()).collect() }
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice, FormatError> {
        if self.order.len() != self.size || self.order.iter().any(|r| r.len() != self.size) {
            return Err(FormatError::Shape(format!("order table must be {0}×{0}", self.size)));
        }
        let leq = self.order.iter().flatten().map(|&x| x != 0).collect();
        Ok(FiniteLattice::from_order(self.size, leq)?)
    }
}

/// The normal-form points p₀..p₆ of ℝ⁵, the incident triples, the spans
/// as their three points, and the boundary conics in the coordinates of
/// those points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub points: Vec<Vec<String>>,
    pub incidence: Vec<[usize; 3]>,
    pub spans: Vec<Vec<Vec<String>>>,
    pub conics: Vec<Vec<Vec<String>>>,
}

/// Exact content of a [`ConfigDoc`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExactConfig {
    pub points: Vec<[Q; 5]>,
    pub incidence: Vec<[usize; 3]>,
    pub conics: Vec<QMatrix>,
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(Q::to_string).collect()
}

impl ConfigDoc {
    pub fn from_canonical(cb: &CanonicalBody) -> Self {
        let points = normal_form_points();
        let conics = cb.exact_conics();
        ConfigDoc {
            points: points.iter().map(|p| strings(p)).collect(),
            incidence: INCIDENCE.to_vec(),
            spans: INCIDENCE.iter().map(|t| t.iter().map(|&k| strings(&points[k])).collect()).collect(),
            conics: conics.iter().map(|k| (0..3).map(|r| strings(&k.row(r))).collect()).collect(),
        }
    }

    pub fn to_exact(&self) -> Result<ExactConfig, FormatError> {
        let point = |p: &Vec<String>| -> Result<[Q; 5], FormatError> {
            let v = p.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>, _>>()?;
            v.try_into().map_err(|v: Vec<Q>| shape("point", 5, v.len()))
        };
        let points = self.points.iter().map(point).collect::<Result<Vec<_>, _>>()?;
        for t in &self.incidence {
            if t.iter().any(|&k| k >= points.len()) {
                return Err(FormatError::Shape(format!("incidence {t:?} names a missing point")));
            }
        }
        for (t, span) in self.incidence.iter().zip(&self.spans) {
            let given = span.iter().map(point).collect::<Result<Vec<_>, _>>()?;
            if given.len() != 3 || given.iter().zip(t).any(|(g, &k)| *g != points[k]) {
                return Err(FormatError::Shape(format!("span {t:?} does not list its incident points")));
            }
        }
        let conics = self
            .conics
            .iter()
            .map(|rows| {
                let rows = rows.iter().map(|r| r.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
                if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
                    return Err(FormatError::Shape("conics are 3×3".into()));
                }
                Ok(QMatrix::from_rows(&rows))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExactConfig { points, incidence: self.incidence.clone(), conics })
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hermface_core::rational::qr;

    #[test]
    fn scalars_parse_both_ways() {
        assert_eq!(Scalar::Exact("-3/4".into()).to_q().unwrap(), qr(-3, 4));
        assert_eq!(Scalar::Number(0.5).to_q().unwrap(), qr(1, 2));
        assert!(Scalar::Exact("x".into()).to_q().is_err());
        let v: Vec<Scalar> = serde_json::from_str(r#"[1.5, "2/3"]"#).unwrap();
        assert_eq!(v, vec![Scalar::Number(1.5), Scalar::Exact("2/3".into())]);
    }

    #[test]
    fn rejects_bad_shapes() {
        let doc = MatrixDoc { field: "C".into(), n: 1, entries: vec![vec![vec![Scalar::Number(1.0)]]] };
        assert!(matches!(doc.to_hermitian(), Err(FormatError::Shape(_))));
        let doc = MatrixDoc { field: "Z".into(), n: 0, entries: vec![] };
        assert!(matches!(doc.to_hermitian(), Err(FormatError::Field(_))));
    }
}
