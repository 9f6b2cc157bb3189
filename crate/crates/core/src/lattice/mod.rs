//! Explicit finite lattices.
//!
//! Elements are indices `0..m`. The order is stored as a dense boolean table
//! and meets/joins as dense index tables; everything is exact.

mod iso;
mod polytope;

pub use iso::lattice_isomorphic;
pub use polytope::{face_lattice_of_polytope, star_join, FaceLattice, PolytopeV};

use alloc::vec::Vec;

use thiserror::Error;

/// Largest lattice `direct_product` will build.
pub const PRODUCT_CAP: usize = 4096;
/// Largest lattice `is_irreducible` will decide.
pub const IRREDUCIBLE_CAP: usize = 512;
/// Largest lattice `lattice_isomorphic` will search.
pub const ISO_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("order relation is not a partial order ({0})")]
    NotPartialOrder(&'static str),
    #[error("elements {0} and {1} have no {2}")]
    NotLattice(usize, usize, &'static str),
    #[error("lattice too large: {size} elements exceeds the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("lattice is empty")]
    Empty,
    #[error("polytope has {0} vertices (at most 12 supported)")]
    TooManyVertices(usize),
    #[error("polytope ambient dimension {0} exceeds 5")]
    DimensionTooLarge(usize),
    #[error("vertices have inconsistent dimensions")]
    Ragged,
    #[error("vertex {0} is not an extreme point of the hull")]
    NotConvexPosition(usize),
}

/// A finite lattice with precomputed meet and join tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    m: usize,
    leq: Vec<bool>,
    meet: Vec<u16>,
    join: Vec<u16>,
    bottom: usize,
    top: usize,
}

/// Result of the exhaustive modularity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modularity {
    Modular,
    /// `(f, g, h)` with `f ≤ h` and `f ∨ (g ∧ h) ≠ (f ∨ g) ∧ h`.
    Violated { f: usize, g: usize, h: usize },
}

impl Modularity {
    pub fn is_modular(&self) -> bool {
        matches!(self, Modularity::Modular)
    }
}

/// Result of the product-decomposition search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// `x ↦ (x ∧ u, x ∧ v)` is an isomorphism onto `[0,u] × [0,v]`.
    Reducible { u: usize, v: usize },
    /// Above the size cap.
    Undecided,
}

impl FiniteLattice {
    /// Builds a lattice from an order table `leq[a * m + b] = (a ≤ b)`.
    pub fn from_order(m: usize, leq: Vec<bool>) -> Result<Self, LatticeError> {
        if m == 0 {
            return Err(LatticeError::Empty);
        }
        if m > PRODUCT_CAP {
            return Err(LatticeError::TooLarge { size: m, cap: PRODUCT_CAP });
        }
        assert_eq!(leq.len(), m * m, "order table size");
        let le = |a: usize, b: usize| leq[a * m + b];
        for a in 0..m {
            if !le(a, a) {
                return Err(LatticeError::NotPartialOrder("not reflexive"));
            }
            for b in 0..m {
                if a != b && le(a, b) && le(b, a) {
                    return Err(LatticeError::NotPartialOrder("not antisymmetric"));
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                if le(a, b) {
                    for c in 0..m {
                        if le(b, c) && !le(a, c) {
                            return Err(LatticeError::NotPartialOrder("not transitive"));
                        }
                    }
                }
            }
        }
        let mut meet = alloc::vec![0u16; m * m];
        let mut join = alloc::vec![0u16; m * m];
        for a in 0..m {
            for b in a..m {
                let glb = (0..m)
                    .filter(|&x| le(x, a) && le(x, b))
                    .fold(None, |best: Option<usize>, x| match best {
                        Some(y) if le(x, y) => Some(y),
                        _ => Some(x),
                    })
                    .ok_or(LatticeError::NotLattice(a, b, "lower bound"))?;
                if !(0..m).all(|x| !(le(x, a) && le(x, b)) || le(x, glb)) {
                    return Err(LatticeError::NotLattice(a, b, "greatest lower bound"));
                }
                let lub = (0..m)
                    .filter(|&x| le(a, x) && le(b, x))
                    .fold(None, |best: Option<usize>, x| match best {
                        Some(y) if le(y, x) => Some(y),
                        _ => Some(x),
                    })
                    .ok_or(LatticeError::NotLattice(a, b, "upper bound"))?;
                if !(0..m).all(|x| !(le(a, x) && le(b, x)) || le(lub, x)) {
                    return Err(LatticeError::NotLattice(a, b, "least upper bound"));
                }
                meet[a * m + b] = glb as u16;
                meet[b * m + a] = glb as u16;
                join[a * m + b] = lub as u16;
                join[b * m + a] = lub as u16;
            }
        }
        let bottom = (0..m).find(|&x| (0..m).all(|y| le(x, y))).ok_or(LatticeError::NotLattice(0, 0, "bottom"))?;
        let top = (0..m).find(|&x| (0..m).all(|y| le(y, x))).ok_or(LatticeError::NotLattice(0, 0, "top"))?;
        Ok(FiniteLattice { m, leq, meet, join, bottom, top })
    }

    /// Builds a lattice from an order predicate.
    pub fn from_relation(m: usize, le: impl Fn(usize, usize) -> bool) -> Result<Self, LatticeError> {
        let leq = (0..m * m).map(|k| le(k / m, k % m)).collect();
        Self::from_order(m, leq)
    }

    /// The chain `0 < 1 < … < k−1`.
    pub fn chain(k: usize) -> Self {
        Self::from_relation(k, |a, b| a <= b).expect("chain")
    }

    /// Subsets of a `k`-set under inclusion.
    pub fn boolean(k: usize) -> Self {
        Self::from_relation(1 << k, |a, b| a & b == a).expect("boolean lattice")
    }

    /// `M₃`: bottom, three pairwise incomparable atoms, top.
    pub fn diamond() -> Self {
        Self::from_relation(5, |a, b| a == b || a == 0 || b == 4).expect("M3")
    }

    /// `N₅`: `0 < a < c < 1` and `0 < b < 1`.
    pub fn pentagon() -> Self {
        // 0 = bottom, 1 = a, 2 = c, 3 = b, 4 = top
        Self::from_relation(5, |x, y| x == y || x == 0 || y == 4 || (x == 1 && y == 2)).expect("N5")
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.m + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.m + b] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.m + b] as usize
    }

    /// The order table, row-major.
    pub fn order_table(&self) -> &[bool] {
        &self.leq
    }

    /// `b` covers `a`.
    pub fn covers(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b) && (0..self.m).all(|x| x == a || x == b || !(self.leq(a, x) && self.leq(x, b)))
    }

    /// Length of the longest chain from the bottom to each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.m).collect();
        order.sort_by_key(|&x| (0..self.m).filter(|&y| self.leq(y, x)).count());
        let mut h = alloc::vec![0usize; self.m];
        for (i, &x) in order.iter().enumerate() {
            for &y in &order[..i] {
                if y != x && self.leq(y, x) {
                    h[x] = h[x].max(h[y] + 1);
                }
            }
        }
        h
    }

    pub fn atoms(&self) -> Vec<usize> {
        (0..self.m).filter(|&x| self.covers(self.bottom, x)).collect()
    }

    /// Exhaustive check of the lattice identities (idempotence, commutativity,
    /// associativity, absorption) and consistency with the order.
    pub fn check_axioms(&self) -> bool {
        let m = self.m;
        for a in 0..m {
            if self.meet(a, a) != a || self.join(a, a) != a {
                return false;
            }
            for b in 0..m {
                if self.meet(a, b) != self.meet(b, a) || self.join(a, b) != self.join(b, a) {
                    return false;
                }
                if self.meet(a, self.join(a, b)) != a || self.join(a, self.meet(a, b)) != a {
                    return false;
                }
                if self.leq(a, b) != (self.meet(a, b) == a) {
                    return false;
                }
                for c in 0..m {
                    if self.meet(self.meet(a, b), c) != self.meet(a, self.meet(b, c))
                        || self.join(self.join(a, b), c) != self.join(a, self.join(b, c))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Exhaustive search over all `f ≤ h` and all `g`.
    pub fn is_modular(&self) -> Modularity {
        let m = self.m;
        for f in 0..m {
            for h in 0..m {
                if !self.leq(f, h) {
                    continue;
                }
                for g in 0..m {
                    if self.join(f, self.meet(g, h)) != self.meet(self.join(f, g), h) {
                        return Modularity::Violated { f, g, h };
                    }
                }
            }
        }
        Modularity::Modular
    }

    /// Every element is the join of the atoms below it.
    pub fn is_atomic(&self) -> bool {
        let atoms = self.atoms();
        (0..self.m).all(|x| {
            atoms
                .iter()
                .filter(|&&a| self.leq(a, x))
                .fold(self.bottom, |acc, &a| self.join(acc, a))
                == x
        })
    }

    /// Every element has a complement.
    pub fn is_complemented(&self) -> bool {
        (0..self.m).all(|x| (0..self.m).any(|y| self.meet(x, y) == self.bottom && self.join(x, y) == self.top))
    }

    /// Principal ideal `[0, u]` as a sorted element list.
    pub fn down_set(&self, u: usize) -> Vec<usize> {
        (0..self.m).filter(|&x| self.leq(x, u)).collect()
    }

    /// The sublattice `[0, u]`, re-indexed.
    pub fn interval_below(&self, u: usize) -> Self {
        let els = self.down_set(u);
        Self::from_relation(els.len(), |a, b| self.leq(els[a], els[b])).expect("interval of a lattice")
    }

    pub fn is_irreducible(&self) -> Irreducibility {
        if self.m > IRREDUCIBLE_CAP {
            return Irreducibility::Undecided;
        }
        let (bot, top) = (self.bottom, self.top);
        for u in 0..self.m {
            if u == bot || u == top {
                continue;
            }
            for v in u + 1..self.m {
                if v == bot || v == top || self.meet(u, v) != bot || self.join(u, v) != top {
                    continue;
                }
                if self.splits(u, v) {
                    return Irreducibility::Reducible { u, v };
                }
            }
        }
        Irreducibility::Irreducible
    }

    /// Whether `x ↦ (x ∧ u, x ∧ v)` is a lattice isomorphism onto
    /// `[0,u] × [0,v]`, with inverse `(a, b) ↦ a ∨ b`.
    fn splits(&self, u: usize, v: usize) -> bool {
        let total = (0..self.m).all(|x| self.join(self.meet(x, u), self.meet(x, v)) == x);
        if !total {
            return false;
        }
        let (du, dv) = (self.down_set(u), self.down_set(v));
        du.iter().all(|&a| {
            dv.iter().all(|&b| {
                let j = self.join(a, b);
                self.meet(j, u) == a && self.meet(j, v) == b
            })
        })
    }
}

/// Product order on pairs; element `(a, b)` has index `a · |L2| + b`.
pub fn direct_product(l1: &FiniteLattice, l2: &FiniteLattice) -> Result<FiniteLattice, LatticeError> {
    let (m1, m2) = (l1.m, l2.m);
    let m = m1 * m2;
    if m > PRODUCT_CAP {
        return Err(LatticeError::TooLarge { size: m, cap: PRODUCT_CAP });
    }
    let split = |x: usize| (x / m2, x % m2);
    let mut leq = alloc::vec![false; m * m];
    let mut meet = alloc::vec![0u16; m * m];
    let mut join = alloc::vec![0u16; m * m];
    for x in 0..m {
        let (a, b) = split(x);
        for y in 0..m {
            let (c, d) = split(y);
            leq[x * m + y] = l1.leq(a, c) && l2.leq(b, d);
            meet[x * m + y] = (l1.meet(a, c) * m2 + l2.meet(b, d)) as u16;
            join[x * m + y] = (l1.join(a, c) * m2 + l2.join(b, d)) as u16;
        }
    }
    Ok(FiniteLattice {
        m,
        leq,
        meet,
        join,
        bottom: l1.bottom * m2 + l2.bottom,
        top: l1.top * m2 + l2.top,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lattices() {
        assert!(FiniteLattice::diamond().is_modular().is_modular());
        assert!(!FiniteLattice::pentagon().is_modular().is_modular());
        let b3 = FiniteLattice::boolean(3);
        assert!(b3.check_axioms());
        assert!(b3.is_atomic() && b3.is_complemented());
        assert_eq!(b3.atoms().len(), 3);
        assert_eq!(FiniteLattice::chain(4).heights(), alloc::vec![0, 1, 2, 3]);
    }

    #[test]
    fn rejects_non_lattices() {
        // two incomparable maximal elements, no top
        let r = FiniteLattice::from_relation(3, |a, b| a == b || a == 0);
        assert!(matches!(r, Err(LatticeError::NotLattice(..))));
        let r = FiniteLattice::from_relation(2, |_, _| true);
        assert!(matches!(r, Err(LatticeError::NotPartialOrder(_))));
    }

    #[test]
    fn products() {
        let c2 = FiniteLattice::chain(2);
        let p = direct_product(&c2, &c2).unwrap();
        assert!(p.check_axioms());
        assert!(lattice_isomorphic(&p, &FiniteLattice::boolean(2)).unwrap().is_some());
        let t = FiniteLattice::chain(1);
        let d = FiniteLattice::diamond();
        assert!(lattice_isomorphic(&direct_product(&d, &t).unwrap(), &d).unwrap().is_some());
        let big = FiniteLattice::chain(65);
        assert!(matches!(direct_product(&big, &big), Err(LatticeError::TooLarge { .. })));
        let np = direct_product(&FiniteLattice::pentagon(), &c2).unwrap();
        assert!(!np.is_modular().is_modular());
        assert!(direct_product(&d, &c2).unwrap().is_modular().is_modular());
    }

    #[test]
    fn irreducibility() {
        assert_eq!(FiniteLattice::chain(2).is_irreducible(), Irreducibility::Irreducible);
        assert_eq!(FiniteLattice::diamond().is_irreducible(), Irreducibility::Irreducible);
        assert!(matches!(FiniteLattice::boolean(3).is_irreducible(), Irreducibility::Reducible { .. }));
        let c3 = FiniteLattice::chain(3);
        let p = direct_product(&c3, &FiniteLattice::diamond()).unwrap();
        let Irreducibility::Reducible { u, v } = p.is_irreducible() else {
            panic!("product not split");
        };
        let (a, b) = (p.interval_below(u), p.interval_below(v));
        assert_eq!(a.len() * b.len(), p.len());
    }
}
