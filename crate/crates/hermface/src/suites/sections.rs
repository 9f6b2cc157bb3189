//! Sections of C_n(𝔽) by a PSD functional: compactness, recession rays and
//! the affine plane structure of the non-compact section by E₁₁.

use hermface_core::cone_faces::{face_join, Face, Subspace};
use hermface_core::linalg::{self, FVector};
use hermface_core::sections::{
    closure_point, face_through_direction, make_section, meet_in_body, parallel_classes, parallel_through,
    recession_rays, shared_direction_check, unique_ray_check, SectionBody,
};
use hermface_core::{sample, Element, Field, HermitianMatrix};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{SuiteConfig, UsageError};
use crate::engine::{Batch, Outcome};
use crate::formats::MatrixDoc;
use crate::report::Report;

/// Eigenvalue floor, relative to the largest, for positive definiteness.
pub const DEFINITE_FLOOR: f64 = 1e-9;
pub const CLOSURE_TOL: f64 = 1e-8;

pub fn e11(field: Field, n: usize) -> HermitianMatrix {
    let mut d = vec![0.0; n];
    d[0] = 1.0;
    HermitianMatrix::diag(field, &d).expect("associative field")
}

fn in_subspace(rng: &mut ChaCha8Rng, s: &Subspace) -> FVector {
    let field = s.field();
    let mut v = vec![Element::zero(field); s.ambient_dim()];
    for b in s.basis() {
        let c = sample::element(rng, field);
        for (x, y) in v.iter_mut().zip(linalg::scale_right(b, &c)) {
            *x = *x + y;
        }
    }
    v
}

fn compactness(cfg: &SuiteConfig, field: Field, n: usize) -> Report {
    Batch::new("compactness", cfg.trials(200), cfg.seed).field(field).n(Some(n)).timed(cfg.timed).run(|_, rng| {
        let r = rng.random_range(1..=n);
        let m = sample::psd_of_rank(rng, field, n, r);
        let eig = linalg::eigenvalues(&m);
        let top = eig.iter().copied().fold(0.0, f64::max);
        let definite = eig.iter().all(|&x| x > DEFINITE_FLOOR * top);
        match make_section(m.clone()) {
            Ok(body) if body.is_compact() == definite && recession_rays(&body).is_trivial() == definite => Outcome::pass(0.0),
            Ok(body) => Outcome::fail(
                0.0,
                json!({ "functional": MatrixDoc::from_hermitian(&m), "compact": body.is_compact(), "definite": definite }),
            ),
            Err(e) => Outcome::error(e),
        }
    })
}

/// A random face of exactly this rank through the direction `k`; nearly
/// dependent draws collapse the span and are drawn again.
fn face_of_rank(body: &SectionBody, k: &[Element], rank: usize, rng: &mut ChaCha8Rng) -> Face {
    loop {
        let face = face_through_direction(body, k, rank, rng);
        if face.rank() == rank {
            return face;
        }
    }
}

/// A singular nonzero PSD functional and a face through a random kernel
/// direction whose range meets the kernel in one 𝔽-line.
fn non_compact_face(rng: &mut ChaCha8Rng, field: Field, n: usize) -> (SectionBody, Face, FVector) {
    let r = rng.random_range(1..n);
    let m = sample::psd_of_rank(rng, field, n, r);
    let body = make_section(m).expect("nonzero PSD functional");
    let k = in_subspace(rng, body.kernel());
    let rank = n - body.kernel().dim() + 1;
    let face = face_of_rank(&body, &k, rank, rng);
    (body, face, k)
}

fn unique_ray(cfg: &SuiteConfig, field: Field, n: usize) -> Report {
    Batch::new("unique-ray", cfg.trials(200), cfg.seed).field(field).n(Some(n)).timed(cfg.timed).run(|_, rng| {
        let (body, face, _) = non_compact_face(rng, field, n);
        match unique_ray_check(&body, &face, 20, rng) {
            Ok(u) if u.unique => Outcome::pass(u.spread),
            Ok(u) => Outcome::fail(u.spread, json!({ "support_dim": u.support_dim, "face_rank": face.rank() })),
            Err(e) => Outcome::error(e),
        }
    })
}

fn shared_direction(cfg: &SuiteConfig, field: Field, n: usize) -> Report {
    Batch::new("shared-direction", cfg.trials(200), cfg.seed).field(field).n(Some(n)).timed(cfg.timed).run(|i, rng| {
        let (body, a, k) = non_compact_face(rng, field, n);
        // odd trials reuse the direction of the first face
        let same = i % 2 == 1;
        let k2 = if same { k } else { in_subspace(rng, body.kernel()) };
        let b = face_of_rank(&body, &k2, a.rank(), rng);
        let shared = shared_direction_check(&body, &a, &b);
        // a one-dimensional kernel leaves a single direction for every face
        let expect_shared = same || body.kernel().dim() == 1;
        if shared <= 1 && (shared == 1) == expect_shared {
            Outcome::pass(0.0)
        } else {
            Outcome::fail(0.0, json!({ "shared": shared, "same_direction": same, "kernel_dim": body.kernel().dim() }))
        }
    })
}

fn closure_defect(p: &HermitianMatrix) -> f64 {
    let eig = linalg::eigenvalues(p);
    let top = eig.iter().copied().fold(f64::MIN, f64::max);
    let rest: f64 = eig.iter().map(|x| x.abs()).sum::<f64>() - top.abs();
    (top - 1.0).abs().max(rest).max((p.trace() - 1.0).abs())
}

/// On the section by E₁₁: sampled faces fall into one class per chosen
/// kernel direction, classes map injectively to extreme points of the
/// cut-off face `⟨E₁₁, ·⟩ = 0` of the trace slice, and finite extreme points
/// map off that face.
fn classes(cfg: &SuiteConfig, field: Field, n: usize) -> Report {
    let body = make_section(e11(field, n)).expect("E11 is PSD");
    Batch::new("parallel-classes", cfg.trials(200), cfg.seed).field(field).n(Some(n)).tolerance(CLOSURE_TOL).timed(cfg.timed).run(
        |_, rng| {
            let m = rng.random_range(2..=5);
            let dirs: Vec<FVector> = (0..m).map(|_| in_subspace(rng, body.kernel())).collect();
            let mut faces: Vec<(usize, Face)> = Vec::new();
            for (j, k) in dirs.iter().enumerate() {
                for _ in 0..rng.random_range(1..=3) {
                    faces.push((j, face_of_rank(&body, k, 2, rng)));
                }
            }
            faces.shuffle(rng);
            let list: Vec<Face> = faces.iter().map(|(_, f)| f.clone()).collect();
            let found = match parallel_classes(&body, &list) {
                Ok(c) => c,
                Err(e) => return Outcome::error(e),
            };
            let mut residual: f64 = 0.0;
            let mut problems: Vec<String> = Vec::new();
            if found.len() != m {
                problems.push(format!("{} classes for {m} directions", found.len()));
            }
            let mut points: Vec<HermitianMatrix> = Vec::new();
            for c in &found {
                let labels: Vec<usize> = c.members.iter().map(|&i| faces[i].0).collect();
                let j = labels[0];
                if labels.iter().any(|&l| l != j) || faces.iter().filter(|(l, _)| *l == j).count() != labels.len() {
                    problems.push(format!("class of direction {j} is not the set of its faces"));
                }
                let p = closure_point(&c.direction);
                let expected = closure_point(&HermitianMatrix::gram(field, n, &[dirs[j].clone()]));
                residual = residual.max(closure_defect(&p)).max(p.max_abs_diff(&expected)).max(body.pairing(&p).abs());
                for (a, &x) in c.members.iter().enumerate() {
                    for &y in &c.members[a + 1..] {
                        if meet_in_body(&body, &list[x], &list[y]).unwrap_or(true) {
                            problems.push(format!("parallel faces {x} and {y} meet"));
                        }
                    }
                }
                if points.iter().any(|q| q.max_abs_diff(&p) < 1e-6) {
                    problems.push("two classes share a closure point".into());
                }
                points.push(p);
            }
            // finite extreme points close up off the cut-off face
            for _ in 0..5 {
                let v = sample::vector(rng, field, n);
                match body.extreme_point(&v) {
                    Ok(x) => {
                        let p = closure_point(&x);
                        // ⟨E₁₁, vv*/|v|²⟩ = |v₁|²/|v|²
                        let expected = v[0].norm_sqr() / v.iter().map(Element::norm_sqr).sum::<f64>();
                        residual = residual.max(closure_defect(&p)).max((body.pairing(&p) - expected).abs());
                        if body.pairing(&p) <= 0.0 {
                            problems.push("finite point closes onto the cut-off face".into());
                        }
                    }
                    Err(e) => problems.push(e.to_string()),
                }
            }
            if problems.is_empty() {
                Outcome::within(residual, CLOSURE_TOL, || json!({ "directions": m }))
            } else {
                Outcome::fail(residual, json!({ "problems": problems }))
            }
        },
    )
}

/// Two finite extreme points lie on one line with one direction, and the
/// parallel through a point off a line shares its direction but not its
/// points.
fn affine_axioms(cfg: &SuiteConfig, field: Field, n: usize) -> Report {
    let body = make_section(e11(field, n)).expect("E11 is PSD");
    Batch::new("affine-axioms", cfg.trials(200), cfg.seed).field(field).n(Some(n)).timed(cfg.timed).run(|_, rng| {
        let (v, w) = (sample::vector(rng, field, n), sample::vector(rng, field, n));
        let pv = Face::from_range(Subspace::span(field, n, std::slice::from_ref(&v)));
        let pw = Face::from_range(Subspace::span(field, n, std::slice::from_ref(&w)));
        let mut run = || -> Result<Vec<&'static str>, hermface_core::sections::SectionError> {
            let mut problems = Vec::new();
            let line = face_join(&pv, &pw)?;
            if line.rank() != 2 || !body.face_is_nonempty(&line) || body.recession_support(&line).dim() != 1 {
                problems.push("join of two points is not a line with one direction");
            }
            let u = sample::vector(rng, field, n);
            let par = parallel_through(&body, &line, &u)?;
            if !par.contains(&HermitianMatrix::gram(field, n, std::slice::from_ref(&u))) {
                problems.push("parallel misses its point");
            }
            if shared_direction_check(&body, &line, &par) != 1 {
                problems.push("parallel has another direction");
            }
            if meet_in_body(&body, &line, &par)? {
                problems.push("parallel meets the line");
            }
            Ok(problems)
        };
        match run() {
            Ok(p) if p.is_empty() => Outcome::pass(0.0),
            Ok(p) => Outcome::fail(0.0, json!({ "problems": p })),
            Err(e) => Outcome::error(e),
        }
    })
}

/// Description of the section by E₁₁.
fn demo_summary(field: Field, n: usize) -> serde_json::Value {
    let body = make_section(e11(field, n)).expect("E11 is PSD");
    let rays = recession_rays(&body);
    json!({
        "functional": "E11",
        "compact": body.is_compact(),
        "kernel_dim": body.kernel().dim(),
        "recession_face_rank": rays.face().rank(),
        "ray_directions": format!("vv* for v in a {}-dimensional kernel over {field}", body.kernel().dim()),
    })
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<Report>, UsageError> {
    let fields = cfg.associative_fields("sections")?;
    cfg.check_n(3, 8)?;
    let n = cfg.n.unwrap_or(3);
    let mut out = Vec::new();
    for &f in &fields {
        let mut c = compactness(cfg, f, n);
        c.detail = Some(demo_summary(f, n));
        out.push(c);
        out.push(unique_ray(cfg, f, n));
        out.push(shared_direction(cfg, f, n));
        out.push(classes(cfg, f, n));
        out.push(affine_axioms(cfg, f, n));
    }
    Ok(out)
}
