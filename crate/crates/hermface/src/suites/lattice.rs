//! Face lattices of the polytope corpus: lattice axioms, atomicity,
//! complements, modularity and the ∗-join product rule.

use hermface_core::lattice::{
    direct_product, face_lattice_of_polytope, lattice_isomorphic, star_join, FaceLattice, FiniteLattice, Modularity,
    PolytopeV,
};
use serde_json::{json, Value};
use std::time::Instant;

use super::{SuiteConfig, UsageError};
use crate::engine::{Batch, Outcome};
use crate::report::Report;

pub const JOIN_FACTORS: [&str; 3] = ["point", "segment", "triangle"];

fn vertex_list(mask: u32) -> Vec<u32> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// Whether `(f, g, h)` breaks the modular law, evaluated from scratch.
fn violates(l: &FiniteLattice, f: usize, g: usize, h: usize) -> bool {
    l.leq(f, h) && l.join(f, l.meet(g, h)) != l.meet(l.join(f, g), h)
}

fn shape_check(name: &str, cfg: &SuiteConfig) -> Report {
    let p = PolytopeV::named(name).expect("corpus member");
    let start = Instant::now();
    let mut r = Batch::new(&format!("face-lattice/{name}"), 1, cfg.seed).empty_report();
    let fl = match face_lattice_of_polytope(&p) {
        Ok(fl) => fl,
        Err(e) => {
            r.failures = 1;
            r.witness = Some(Value::String(e.to_string()));
            return r;
        }
    };
    let l = &fl.lattice;
    let simplex = p.vertices().len() == p.dim() + 1;
    let modularity = l.is_modular();
    let mut problems = Vec::new();
    if !l.check_axioms() {
        problems.push("lattice axioms");
    }
    if !l.is_atomic() {
        problems.push("atomic");
    }
    if !l.is_complemented() {
        problems.push("complemented");
    }
    if modularity.is_modular() != simplex {
        problems.push("modular iff simplex");
    }
    if let Modularity::Violated { f, g, h } = modularity {
        if !violates(l, f, g, h) {
            problems.push("witness triple");
        }
        r.witness = Some(triple(&fl, f, g, h));
    }
    r.failures = usize::from(!problems.is_empty());
    r.detail = Some(json!({
        "vertices": p.vertices().len(),
        "dim": p.dim(),
        "faces": l.len(),
        "modular": modularity.is_modular(),
        "problems": problems,
    }));
    if cfg.timed {
        r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    r
}

fn triple(fl: &FaceLattice, f: usize, g: usize, h: usize) -> Value {
    let l = &fl.lattice;
    let faces = |x: usize| vertex_list(fl.faces[x]);
    json!({
        "f": faces(f),
        "g": faces(g),
        "h": faces(h),
        "lhs": faces(l.join(f, l.meet(g, h))),
        "rhs": faces(l.meet(l.join(f, g), h)),
    })
}

/// `φ` is a bijection with `a ≤ b ⟺ φ(a) ≤ φ(b)`.
fn is_order_isomorphism(a: &FiniteLattice, b: &FiniteLattice, phi: &[usize]) -> bool {
    let m = a.len();
    if b.len() != m || phi.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &x in phi {
        if x >= m || std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    (0..m).all(|x| (0..m).all(|y| a.leq(x, y) == b.leq(phi[x], phi[y])))
}

fn products(cfg: &SuiteConfig) -> Report {
    let pairs: Vec<(&str, &str)> = JOIN_FACTORS.iter().flat_map(|a| JOIN_FACTORS.iter().map(move |b| (*a, *b))).collect();
    Batch::new("star-join-product", pairs.len(), cfg.seed).timed(cfg.timed).run(|i, _| {
        let (a, b) = pairs[i];
        let (p1, p2) = (PolytopeV::named(a).expect("corpus"), PolytopeV::named(b).expect("corpus"));
        let run = || -> Result<Outcome, hermface_core::lattice::LatticeError> {
            let joined = face_lattice_of_polytope(&star_join(&p1, &p2)?)?.lattice;
            let product = direct_product(&face_lattice_of_polytope(&p1)?.lattice, &face_lattice_of_polytope(&p2)?.lattice)?;
            let iso = lattice_isomorphic(&joined, &product)?;
            let ok = iso.as_deref().is_some_and(|phi| is_order_isomorphism(&joined, &product, phi));
            let w = json!({ "pair": [a, b], "join_faces": joined.len(), "product_size": product.len() });
            Ok(if ok { Outcome::pass(0.0) } else { Outcome::fail(0.0, w) })
        };
        run().unwrap_or_else(Outcome::error)
    })
}

pub fn run(cfg: &SuiteConfig, shape: Option<&str>) -> Result<Vec<Report>, UsageError> {
    let shapes: Vec<&str> = match shape {
        Some(s) if PolytopeV::named(s).is_some() => vec![s],
        Some(s) => return Err(UsageError::UnknownShape(s.to_string(), PolytopeV::CORPUS.join(", "))),
        None => PolytopeV::CORPUS.to_vec(),
    };
    let mut out: Vec<Report> = shapes.iter().map(|s| shape_check(s, cfg)).collect();
    if shape.is_none() {
        out.push(products(cfg));
    }
    Ok(out)
}
