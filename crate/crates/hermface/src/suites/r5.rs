//! The five-dimensional body: printed-matrix fidelity, exact factorization,
//! the span criterion, boundary conics and projective equivalence.

use hermface_core::rational::{qr, Q};
use hermface_core::rp5::config::{combined_condition_poly, recover_incidence};
use hermface_core::rp5::model::{
    boundary_conic_residual, random_invertible, random_plane, random_quadrangle, random_vector, SPAN_TOL,
};
use hermface_core::rp5::{
    canonical_body, compare_with_printed, factor_condition, projective_equivalence, spans_check, CanonicalBody,
    ProjectiveModel, Span, INCIDENCE,
};
use nalgebra::Vector3;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{SuiteConfig, UsageError};
use crate::engine::{Batch, Outcome};
use crate::report::Report;

pub const CONIC_TOL: f64 = 1e-7;
pub const FACE_MAP_TOL: f64 = 1e-7;
/// Relative size of the combined condition at sampled span parameters.
pub const CONDITION_TOL: f64 = 1e-8;
pub const QUADRATIC_TOL: f64 = 1e-9;
pub const LINEAR_FLOOR: f64 = 1e-6;
const SPAN_SAMPLES: usize = 20;

fn fidelity(cfg: &SuiteConfig) -> Report {
    let mut r = Batch::new("printed-matrix", 9, cfg.seed).empty_report();
    match compare_with_printed() {
        Ok(table) => {
            r.trials = table.len();
            r.failures = table.iter().filter(|e| !e.matches).count();
            r.detail = Some(json!(table
                .iter()
                .map(|e| json!({
                    "entry": format!("({},{})", e.row + 1, e.col + 1),
                    "derived": e.derived,
                    "printed": e.printed,
                    "match": e.matches,
                }))
                .collect::<Vec<_>>()));
            let diffs: Vec<_> = table
                .iter()
                .filter(|e| !e.matches)
                .map(|e| json!({ "entry": format!("({},{})", e.row + 1, e.col + 1), "difference": e.difference }))
                .collect();
            if !diffs.is_empty() {
                r.witness = Some(json!(diffs));
            }
        }
        Err(e) => {
            r.failures = 1;
            r.witness = Some(json!(e.to_string()));
        }
    }
    r
}

fn incidence(cfg: &SuiteConfig) -> Report {
    let mut r = Batch::new("incidence", 3, cfg.seed).empty_report();
    match recover_incidence() {
        Ok(found) => {
            let rows: Vec<_> = found
                .iter()
                .map(|(i, triples)| {
                    let ok = triples.as_slice() == [INCIDENCE[i - 1]];
                    json!({ "span": format!("S{i}"), "points": triples, "expected": INCIDENCE[i - 1], "match": ok })
                })
                .collect();
            r.failures = rows.iter().filter(|x| x["match"] != true).count();
            r.detail = Some(json!(rows));
        }
        Err(e) => {
            r.failures = 1;
            r.witness = Some(json!(e.to_string()));
        }
    }
    r
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    let mut num = 0;
    while num == 0 {
        num = rng.random_range(-30..=30);
    }
    qr(num, rng.random_range(1..=12))
}

fn factorization(cfg: &SuiteConfig) -> Report {
    let poly = combined_condition_poly().ok();
    Batch::new("factorization", cfg.trials(100), cfg.seed).timed(cfg.timed).run(|_, rng| {
        let Some(poly) = &poly else { return Outcome::error("combined condition unavailable") };
        let (c, d) = (random_rational(rng), random_rational(rng));
        let w = || json!({ "c": c.to_string(), "d": d.to_string() });
        let f = match factor_condition(&c, &d) {
            Ok(f) => f,
            Err(e) => return Outcome::fail(0.0, json!({ "c": c.to_string(), "d": d.to_string(), "error": e.to_string() })),
        };
        // the factors reproduce the condition at independent rational points
        for _ in 0..4 {
            let (a, b) = (random_rational(rng), random_rational(rng));
            let x = [a.clone(), b.clone(), c.clone(), d.clone(), Q::from_integer(0.into()), Q::from_integer(0.into())];
            if poly.eval(&x) != f.linear.eval(&x) * f.quadratic.eval(&x) {
                return Outcome::fail(0.0, w());
            }
        }
        Outcome::pass(0.0)
    })
}

fn spans_forward(cfg: &SuiteConfig, cb: &CanonicalBody) -> Report {
    Batch::new("spans-forward", cfg.trials(200), cfg.seed).tolerance(SPAN_TOL).timed(cfg.timed).run(|_, rng| {
        let (x, y) = ProjectiveModel::random_face(rng);
        let s = match cb.model.face_span(&x, &y) {
            Ok(s) => s,
            Err(e) => return Outcome::error(e),
        };
        let r = spans_check(&s, &cb.model, SPAN_SAMPLES, rng);
        let residual = r.base.iter().copied().fold(r.sampled_max, f64::max);
        if r.passed {
            Outcome::pass(residual)
        } else {
            Outcome::fail(residual, json!({ "x": x.as_slice(), "y": y.as_slice(), "base": r.base }))
        }
    })
}

fn spans_random(cfg: &SuiteConfig, cb: &CanonicalBody) -> Report {
    Batch::new("spans-random", cfg.trials(200), cfg.seed).timed(cfg.timed).run(|_, rng| {
        let s = random_plane(rng);
        let r = spans_check(&s, &cb.model, SPAN_SAMPLES, rng);
        if r.passed {
            Outcome::fail(0.0, json!({ "basis": s.basis().as_slice() }))
        } else {
            Outcome::pass(0.0)
        }
    })
}

/// Planes through p₀ and a point on each of S₄ and S₅ meet five of the six
/// base spans; the criterion must still reject them.
fn five_of_six(cfg: &SuiteConfig, cb: &CanonicalBody) -> Report {
    let conf = cb.model.config();
    Batch::new("spans-five-of-six", cfg.trials(50), cfg.seed).timed(cfg.timed).run(|_, rng| {
        let mut inside = |i: usize| conf.spans[i].basis() * Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let (u, v) = (inside(3), inside(4));
        let s = match Span::from_vectors(&[conf.points[0], u, v]) {
            Ok(s) => s,
            Err(e) => return Outcome::error(e),
        };
        let r = spans_check(&s, &cb.model, SPAN_SAMPLES, rng);
        let five = r.base[..5].iter().all(|&d| d < SPAN_TOL);
        if five && !r.passed {
            Outcome::pass(r.base[..5].iter().copied().fold(0.0, f64::max))
        } else {
            Outcome::fail(0.0, json!({ "base": r.base, "passed": r.passed }))
        }
    })
}

fn condition_loci(cfg: &SuiteConfig, cb: &CanonicalBody) -> Report {
    let poly = combined_condition_poly().ok();
    let mut r = Batch::new("combined-condition", cfg.trials(200), cfg.seed).tolerance(CONDITION_TOL).timed(cfg.timed).run(|_, rng| {
        let Some(poly) = &poly else { return Outcome::error("combined condition unavailable") };
        let (x, y) = ProjectiveModel::random_face(rng);
        let Ok(s) = cb.model.face_span(&x, &y) else { return Outcome::error("degenerate face") };
        // spans meeting S₁, S₂ or S₃ near infinity have no finite parameters
        let Some(p) = cb.span_params(&s) else { return Outcome::pass(0.0) };
        let at = [p[0], p[1], p[2], p[3], 0.0, 0.0];
        let rel = poly.eval_f64(&at).abs() / poly.magnitude_f64(&at).max(f64::MIN_POSITIVE);
        Outcome::within(rel, CONDITION_TOL, || json!({ "params": p }))
    });
    r.detail = Some(json!({ "note": "spans with a meet near infinity count as passing" }));
    r
}

fn boundary_conics(cfg: &SuiteConfig, cb: &CanonicalBody) -> Report {
    let tol = cfg.tol(CONIC_TOL);
    let v = *cb.model.vectors();
    Batch::new("boundary-conics", cfg.trials(100).max(6), cfg.seed).tolerance(tol).timed(cfg.timed).run(|i, rng| {
        // the six configuration faces, then random ones
        let (x, y) = if i < 6 { (v[INCIDENCE[i][0]], v[INCIDENCE[i][1]]) } else { ProjectiveModel::random_face(rng) };
        match boundary_conic_residual(&cb.model, &x, &y, 100, rng) {
            Ok(res) => Outcome::within(res, tol, || json!({ "x": x.as_slice(), "y": y.as_slice() })),
            Err(e) => Outcome::error(e),
        }
    })
}

fn conic_factor(cfg: &SuiteConfig, cb: &CanonicalBody) -> Report {
    Batch::new("conic-factor", cfg.trials(20), cfg.seed).timed(cfg.timed).run(|_, rng| {
        let (mut s, mut t) = (0, 0);
        while s == 0 && t == 0 {
            s = rng.random_range(-6..=6);
            t = rng.random_range(-6..=6);
        }
        match cb.conic_factor_check(s, t, 60, rng) {
            Ok(Some(r)) => {
                let residual = r.quadratic_residual.max(r.fitted_distance);
                if r.quadratic_residual < QUADRATIC_TOL && r.fitted_distance < CONIC_TOL && r.linear_min > LINEAR_FLOOR {
                    Outcome::pass(residual)
                } else {
                    Outcome::fail(residual, json!({ "s": s, "t": t, "c": r.c, "d": r.d, "linear_min": r.linear_min }))
                }
            }
            // the boundary point lies near infinity or on a coordinate plane
            Ok(None) => Outcome::pass(0.0),
            Err(e) => Outcome::fail(0.0, json!({ "s": s, "t": t, "error": e.to_string() })),
        }
    })
}

fn equivalence(cfg: &SuiteConfig, cb: &CanonicalBody) -> Report {
    let tol = cfg.tol(FACE_MAP_TOL);
    Batch::new("equivalence", cfg.trials(20), cfg.seed).tolerance(tol).timed(cfg.timed).run(|_, rng| {
        let t = random_invertible(rng);
        let quad = random_quadrangle(rng);
        let run = |rng: &mut ChaCha8Rng| -> Result<f64, hermface_core::rp5::Rp5Error> {
            let b = cb.model.transformed(&t, &quad)?;
            let eq = projective_equivalence(&cb.model, &b)?;
            let mut worst: f64 = 0.0;
            for _ in 0..200 {
                let (x, y) = ProjectiveModel::random_face(rng);
                let s = cb.model.face_span(&x, &y)?.transform(&eq.rho)?;
                worst = worst.max(b.face_residual(&s));
            }
            for _ in 0..50 {
                let p = eq.rho * cb.model.extreme_point(&random_vector(rng));
                worst = worst.max(b.extreme_residual(&p));
            }
            Ok(worst)
        };
        match run(rng) {
            Ok(res) => Outcome::within(res, tol, || json!({ "t": t.as_slice() })),
            Err(e) => Outcome::fail(0.0, json!({ "t": t.as_slice(), "error": e.to_string() })),
        }
    })
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<Report>, UsageError> {
    if cfg.field.is_some_and(|f| f != hermface_core::Field::R) || cfg.n.is_some_and(|n| n != 3) {
        return Err(UsageError::Combination("r5 works with the trace slice of C3(R); use --field R --n 3 or omit both".into()));
    }
    let mut out = vec![fidelity(cfg), incidence(cfg), factorization(cfg)];
    match canonical_body() {
        Ok(cb) => {
            out.push(spans_forward(cfg, &cb));
            out.push(spans_random(cfg, &cb));
            out.push(five_of_six(cfg, &cb));
            out.push(condition_loci(cfg, &cb));
            out.push(boundary_conics(cfg, &cb));
            out.push(conic_factor(cfg, &cb));
            out.push(equivalence(cfg, &cb));
        }
        Err(e) => {
            let mut r = Batch::new("canonical-body", 1, cfg.seed).empty_report();
            r.failures = 1;
            r.witness = Some(json!(e.to_string()));
            out.push(r);
        }
    }
    Ok(out)
}
