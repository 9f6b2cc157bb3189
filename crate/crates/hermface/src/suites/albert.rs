//! Points and lines of the octonionic plane as idempotents of H₃(𝕆).

use hermface_core::albert::{
    chart_point, char_coeffs, dual_line, duality_check, idempotency_residual, in_face, jordan_product, line_through,
    meet_of_lines, AlbertElement, AlbertError,
};
use hermface_core::{sample, Element, Field};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{SuiteConfig, UsageError};
use crate::engine::{Batch, Outcome};
use crate::formats::AlbertDoc;
use crate::report::Report;

pub const IDEMPOTENT_TOL: f64 = 1e-10;
pub const INVARIANT_TOL: f64 = 1e-9;
pub const INCIDENCE_TOL: f64 = 1e-8;
/// Slack of the face-membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

fn octonion(rng: &mut ChaCha8Rng) -> Element {
    let s = rng.random_range(0.05..3.0);
    sample::element(rng, Field::O).scale(s)
}

pub fn random_point(rng: &mut ChaCha8Rng) -> Result<AlbertElement, AlbertError> {
    chart_point(&octonion(rng), &octonion(rng))
}

/// Deviation of a trace-`k` idempotent: `|P∘P − P|`, `|tr P − k|`, and for
/// points `|σ|` and `|det|`.
fn idempotent_defect(p: &AlbertElement, k: f64) -> f64 {
    let (t, s, d) = char_coeffs(p);
    let mut r = idempotency_residual(p).max((t - k).abs());
    if k == 1.0 {
        r = r.max(s.abs()).max(d.abs());
    }
    r
}

/// `|P∘(I − E)|`, zero exactly when P lies on the line E.
fn off_line(p: &AlbertElement, e: &AlbertElement) -> f64 {
    jordan_product(p, &AlbertElement::identity().sub(e)).coord_norm()
}

fn doc(p: &AlbertElement) -> serde_json::Value {
    json!(AlbertDoc::from_element(p))
}

fn chart(cfg: &SuiteConfig) -> Report {
    let tol = cfg.tol(IDEMPOTENT_TOL);
    Batch::new("chart-idempotents", cfg.trials(10_000), cfg.seed).field(Field::O).n(Some(3)).tolerance(tol).timed(cfg.timed).run(
        |i, rng| {
            // the three coordinate points first
            let p = if i < 3 {
                let mut d = [0.0; 3];
                d[i] = 1.0;
                Ok(AlbertElement::diagonal(d))
            } else {
                random_point(rng)
            };
            match p {
                Ok(p) => {
                    let (_, s, d) = char_coeffs(&p);
                    let idem = idempotency_residual(&p).max((p.trace() - 1.0).abs());
                    let inv = s.abs().max(d.abs());
                    let pass = idem <= tol && inv <= INVARIANT_TOL;
                    let w = || json!({ "point": doc(&p), "sigma": s, "det": d });
                    if pass {
                        Outcome::pass(idem.max(inv))
                    } else {
                        Outcome::fail(idem.max(inv), w())
                    }
                }
                Err(e) => Outcome::error(e),
            }
        },
    )
}

/// A point on the line `I − A`: the meet of that line with a random line.
fn point_on_dual(rng: &mut ChaCha8Rng, a: &AlbertElement) -> Result<AlbertElement, AlbertError> {
    let l = line_through(&random_point(rng)?, &random_point(rng)?)?;
    meet_of_lines(&l, &dual_line(a)?)
}

fn duality(cfg: &SuiteConfig) -> Report {
    Batch::new("duality", cfg.trials(1000), cfg.seed).field(Field::O).n(Some(3)).timed(cfg.timed).run(|i, rng| {
        let mut run = || -> Result<Outcome, AlbertError> {
            let a = random_point(rng)?;
            // odd trials use incident pairs, where both memberships hold
            let incident = i % 2 == 1;
            let b = if incident { point_on_dual(rng, &a)? } else { random_point(rng)? };
            let agree = duality_check(&a, &b, MEMBERSHIP_TOL)?;
            let both = in_face(&a, &dual_line(&b)?, MEMBERSHIP_TOL) && in_face(&b, &dual_line(&a)?, MEMBERSHIP_TOL);
            let residual = if incident { off_line(&b, &dual_line(&a)?) } else { 0.0 };
            Ok(if agree && (!incident || both) {
                Outcome::pass(residual)
            } else {
                Outcome::fail(residual, json!({ "a": doc(&a), "b": doc(&b), "incident": incident }))
            })
        };
        run().unwrap_or_else(Outcome::error)
    })
}

fn lines(cfg: &SuiteConfig) -> Report {
    let tol = cfg.tol(INCIDENCE_TOL);
    Batch::new("line-through", cfg.trials(500), cfg.seed).field(Field::O).n(Some(3)).tolerance(tol).timed(cfg.timed).run(|_, rng| {
        let mut run = || -> Result<Outcome, AlbertError> {
            let (p, q) = (random_point(rng)?, random_point(rng)?);
            let e = line_through(&p, &q)?;
            // a third point of E, then the line it spans with p
            let r = meet_of_lines(&e, &line_through(&random_point(rng)?, &random_point(rng)?)?)?;
            let again = line_through(&p, &r)?;
            let residual = idempotent_defect(&e, 2.0)
                .max(off_line(&p, &e))
                .max(off_line(&q, &e))
                .max(off_line(&r, &e))
                .max(again.sub(&e).coord_norm());
            let member = in_face(&p, &e, MEMBERSHIP_TOL) && in_face(&q, &e, MEMBERSHIP_TOL);
            let w = || json!({ "p": doc(&p), "q": doc(&q), "line": doc(&e) });
            Ok(if member { Outcome::within(residual, tol, w) } else { Outcome::fail(residual, w()) })
        };
        run().unwrap_or_else(Outcome::error)
    })
}

fn meets(cfg: &SuiteConfig) -> Report {
    let tol = cfg.tol(INCIDENCE_TOL);
    Batch::new("meet-of-lines", cfg.trials(500), cfg.seed).field(Field::O).n(Some(3)).tolerance(tol).timed(cfg.timed).run(|_, rng| {
        let mut run = || -> Result<Outcome, AlbertError> {
            let e1 = line_through(&random_point(rng)?, &random_point(rng)?)?;
            let e2 = line_through(&random_point(rng)?, &random_point(rng)?)?;
            let m = meet_of_lines(&e1, &e2)?;
            let residual = idempotent_defect(&m, 1.0).max(off_line(&m, &e1)).max(off_line(&m, &e2));
            let member = in_face(&m, &e1, MEMBERSHIP_TOL) && in_face(&m, &e2, MEMBERSHIP_TOL);
            let w = || json!({ "e1": doc(&e1), "e2": doc(&e2), "meet": doc(&m) });
            Ok(if member { Outcome::within(residual, tol, w) } else { Outcome::fail(residual, w()) })
        };
        run().unwrap_or_else(Outcome::error)
    })
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<Report>, UsageError> {
    if matches!(cfg.field, Some(f) if f != Field::O) {
        return Err(UsageError::Combination("verify-albert works over O only".into()));
    }
    if matches!(cfg.n, Some(n) if n != 3) {
        return Err(UsageError::Combination("the Albert algebra is H3(O); n must be 3".into()));
    }
    Ok(vec![chart(cfg), duality(cfg), lines(cfg), meets(cfg)])
}
