//! Face lattices of small V-polytopes by exact facet enumeration.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::{FiniteLattice, LatticeError};
use crate::rational::{q, QMatrix, Q};

pub const MAX_VERTICES: usize = 12;
pub const MAX_DIM: usize = 5;

/// Convex hull of finitely many rational points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeV {
    dim: usize,
    vertices: Vec<Vec<Q>>,
}

/// A face lattice together with the vertex set of each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    pub lattice: FiniteLattice,
    /// Bit `i` of `faces[x]` is set iff vertex `i` lies in face `x`.
    pub faces: Vec<u32>,
}

impl FaceLattice {
    pub fn index_of(&self, mask: u32) -> Option<usize> {
        self.faces.iter().position(|&f| f == mask)
    }
}

impl PolytopeV {
    /// Accepts any vertex list within the size caps; convex position is
    /// checked when the face lattice is extracted.
    pub fn new(vertices: Vec<Vec<Q>>) -> Result<Self, LatticeError> {
        if vertices.len() > MAX_VERTICES {
            return Err(LatticeError::TooManyVertices(vertices.len()));
        }
        let dim = vertices.first().map_or(0, Vec::len);
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(LatticeError::Ragged);
        }
        if dim > MAX_DIM {
            return Err(LatticeError::DimensionTooLarge(dim));
        }
        Ok(PolytopeV { dim, vertices })
    }

    pub fn from_ints(vertices: &[&[i64]]) -> Self {
        Self::new(vertices.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect()).expect("corpus polytope")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    pub fn point() -> Self {
        Self::from_ints(&[&[]])
    }

    pub fn segment() -> Self {
        Self::from_ints(&[&[0], &[1]])
    }

    pub fn triangle() -> Self {
        Self::from_ints(&[&[0, 0], &[1, 0], &[0, 1]])
    }

    /// Standard `d`-simplex: the origin and the unit vectors.
    pub fn simplex(d: usize) -> Self {
        let mut vs = alloc::vec![alloc::vec![q(0); d]];
        for i in 0..d {
            let mut v = alloc::vec![q(0); d];
            v[i] = q(1);
            vs.push(v);
        }
        Self::new(vs).expect("simplex")
    }

    /// Vertices in cyclic order `v₁ = (0,0), v₂ = (1,0), v₃ = (1,1), v₄ = (0,1)`.
    pub fn square() -> Self {
        Self::from_ints(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])
    }

    pub fn cube() -> Self {
        let vs: Vec<Vec<Q>> = (0..8).map(|k| (0..3).map(|i| q((k >> i) & 1)).collect()).collect();
        Self::new(vs).expect("cube")
    }

    pub fn octahedron() -> Self {
        Self::from_ints(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]])
    }

    pub fn pentagon() -> Self {
        Self::from_ints(&[&[0, 0], &[2, 0], &[3, 2], &[1, 3], &[-1, 2]])
    }

    /// Named corpus members.
    pub fn named(name: &str) -> Option<Self> {
        Some(match name {
            "point" => Self::point(),
            "segment" => Self::segment(),
            "triangle" | "simplex2" => Self::triangle(),
            "simplex3" => Self::simplex(3),
            "simplex4" => Self::simplex(4),
            "square" => Self::square(),
            "cube" => Self::cube(),
            "octahedron" => Self::octahedron(),
            "pentagon" => Self::pentagon(),
            _ => return None,
        })
    }

    pub const CORPUS: [&'static str; 9] =
        ["point", "segment", "simplex2", "simplex3", "simplex4", "square", "cube", "octahedron", "pentagon"];

    /// Coordinates of every vertex in an affine frame of the hull, so that
    /// the hull is full-dimensional in `ℚ^k`.
    fn affine_coordinates(&self) -> (usize, Vec<Vec<Q>>) {
        let v0 = &self.vertices[0];
        let diffs: Vec<Vec<Q>> = self.vertices.iter().map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect()).collect();
        if self.dim == 0 {
            return (0, alloc::vec![Vec::new(); self.vertices.len()]);
        }
        // independent difference vectors form the frame
        let mut frame: Vec<Vec<Q>> = Vec::new();
        for d in &diffs {
            let mut trial = frame.clone();
            trial.push(d.clone());
            if QMatrix::from_rows(&trial).rank() == trial.len() {
                frame = trial;
            }
        }
        let k = frame.len();
        if k == 0 {
            return (0, alloc::vec![Vec::new(); self.vertices.len()]);
        }
        let basis = QMatrix::from_rows(&frame).transpose();
        let coords = diffs.iter().map(|d| basis.solve(d).expect("in affine hull")).collect();
        (k, coords)
    }

    /// Vertex masks of the facets.
    pub fn facets(&self) -> Vec<u32> {
        let (k, pts) = self.affine_coordinates();
        let nv = pts.len();
        let mut out = BTreeSet::new();
        if k == 0 {
            return Vec::new();
        }
        for subset in subsets(nv, k) {
            // hyperplane a·x = b through the subset: null vector of [x | −1]
            let rows: Vec<Vec<Q>> = subset
                .iter()
                .map(|&i| {
                    let mut r = pts[i].clone();
                    r.push(q(-1));
                    r
                })
                .collect();
            let ns = QMatrix::from_rows(&rows).nullspace();
            if ns.len() != 1 {
                continue;
            }
            let h = &ns[0];
            let side = |p: &Vec<Q>| p.iter().zip(h).fold(-h[k].clone(), |acc, (x, a)| acc + x * a);
            let vals: Vec<Q> = pts.iter().map(side).collect();
            let pos = vals.iter().any(Signed::is_positive);
            let neg = vals.iter().any(Signed::is_negative);
            if pos && neg {
                continue;
            }
            let mask = vals.iter().enumerate().filter(|(_, v)| v.is_zero()).fold(0u32, |m, (i, _)| m | 1 << i);
            out.insert(mask);
        }
        out.into_iter().collect()
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Faces are the intersections of facet vertex sets, together with `∅` and
/// the whole polytope, ordered by inclusion.
pub fn face_lattice_of_polytope(p: &PolytopeV) -> Result<FaceLattice, LatticeError> {
    let nv = p.vertices.len();
    let all: u32 = if nv == 32 { u32::MAX } else { (1u32 << nv) - 1 };
    let facets = p.facets();
    let mut faces: BTreeSet<u32> = BTreeSet::new();
    faces.insert(0);
    faces.insert(all);
    let mut frontier: Vec<u32> = facets.clone();
    while let Some(f) = frontier.pop() {
        if faces.insert(f) {
            for &g in &facets {
                let x = f & g;
                if !faces.contains(&x) {
                    frontier.push(x);
                }
            }
        }
    }
    for i in 0..nv {
        let through = facets.iter().filter(|&&f| f >> i & 1 == 1).fold(all, |acc, &f| acc & f);
        if through != 1 << i {
            return Err(LatticeError::NotConvexPosition(i));
        }
    }
    let mut faces: Vec<u32> = faces.into_iter().collect();
    faces.sort_by_key(|f| (f.count_ones(), *f));
    let m = faces.len();
    let lattice = FiniteLattice::from_relation(m, |a, b| faces[a] & faces[b] == faces[a])?;
    Ok(FaceLattice { lattice, faces })
}

/// `P₁` placed at `(x, 0, 0)` and `P₂` at `(0, y, 1)` in `ℚ^{d₁+d₂+1}`.
pub fn star_join(p1: &PolytopeV, p2: &PolytopeV) -> Result<PolytopeV, LatticeError> {
    let (d1, d2) = (p1.dim, p2.dim);
    let d = d1 + d2 + 1;
    let mut vs = Vec::new();
    for v in &p1.vertices {
        let mut w = v.clone();
        w.extend(core::iter::repeat_n(q(0), d2 + 1));
        vs.push(w);
    }
    for v in &p2.vertices {
        let mut w = alloc::vec![q(0); d1];
        w.extend(v.iter().cloned());
        w.push(q(1));
        vs.push(w);
    }
    debug_assert!(vs.iter().all(|w| w.len() == d));
    PolytopeV::new(vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{direct_product, lattice_isomorphic, Modularity};

    fn size(name: &str) -> usize {
        face_lattice_of_polytope(&PolytopeV::named(name).unwrap()).unwrap().lattice.len()
    }

    /// Brute-force face oracle for planar polygons: a vertex subset is a face
    /// iff it is ∅, everything, a single vertex or a boundary edge, with edges
    /// found as pairs whose line leaves every other vertex strictly on one side.
    fn polygon_face_count(p: &PolytopeV) -> usize {
        let v = p.vertices();
        let n = v.len();
        let mut edges = 0;
        for i in 0..n {
            for j in i + 1..n {
                let side = |k: usize| {
                    let (a, b, c) = (&v[i], &v[j], &v[k]);
                    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
                };
                let others: Vec<Q> = (0..n).filter(|&k| k != i && k != j).map(side).collect();
                if others.iter().all(Signed::is_positive) || others.iter().all(Signed::is_negative) {
                    edges += 1;
                }
            }
        }
        2 + n + edges
    }

    #[test]
    fn corpus_sizes() {
        assert_eq!(size("point"), 2);
        assert_eq!(size("segment"), 4);
        assert_eq!(size("simplex2"), 8);
        assert_eq!(size("square"), 10);
        assert_eq!(size("square"), polygon_face_count(&PolytopeV::square()));
        assert_eq!(size("pentagon"), polygon_face_count(&PolytopeV::pentagon()));
        assert_eq!(size("simplex3"), 16);
        assert_eq!(size("simplex4"), 32);
        assert_eq!(size("cube"), 28);
        assert_eq!(size("octahedron"), 28);
    }

    #[test]
    fn square_witness() {
        let fl = face_lattice_of_polytope(&PolytopeV::square()).unwrap();
        let l = &fl.lattice;
        let f = fl.index_of(0b0001).unwrap();
        let g = fl.index_of(0b0100).unwrap();
        let h = fl.index_of(0b0011).unwrap();
        assert!(l.leq(f, h));
        assert_eq!(l.join(f, l.meet(g, h)), f);
        assert_eq!(l.meet(l.join(f, g), h), h);
        assert!(matches!(l.is_modular(), Modularity::Violated { .. }));
    }

    #[test]
    fn cube_is_not_octahedron() {
        let c = face_lattice_of_polytope(&PolytopeV::cube()).unwrap();
        let o = face_lattice_of_polytope(&PolytopeV::octahedron()).unwrap();
        assert!(lattice_isomorphic(&c.lattice, &o.lattice).unwrap().is_none());
    }

    #[test]
    fn interior_point_rejected() {
        let p = PolytopeV::from_ints(&[&[0, 0], &[2, 0], &[0, 2], &[1, 0]]);
        assert!(matches!(face_lattice_of_polytope(&p), Err(LatticeError::NotConvexPosition(3))));
        let p = PolytopeV::from_ints(&[&[0, 0], &[4, 0], &[0, 4], &[1, 1]]);
        assert!(matches!(face_lattice_of_polytope(&p), Err(LatticeError::NotConvexPosition(3))));
    }

    #[test]
    fn star_joins() {
        let s = PolytopeV::segment();
        let pt = PolytopeV::point();
        assert_eq!(face_lattice_of_polytope(&star_join(&pt, &pt).unwrap()).unwrap().lattice.len(), 4);
        assert_eq!(face_lattice_of_polytope(&star_join(&s, &pt).unwrap()).unwrap().lattice.len(), 8);
        let j = face_lattice_of_polytope(&star_join(&s, &s).unwrap()).unwrap();
        let ls = face_lattice_of_polytope(&s).unwrap().lattice;
        let prod = direct_product(&ls, &ls).unwrap();
        assert!(lattice_isomorphic(&j.lattice, &prod).unwrap().is_some());
        let t3 = face_lattice_of_polytope(&PolytopeV::simplex(3)).unwrap();
        assert!(lattice_isomorphic(&j.lattice, &t3.lattice).unwrap().is_some());
    }
}
