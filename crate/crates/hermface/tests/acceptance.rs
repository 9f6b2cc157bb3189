//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::time::{Duration, Instant};

use hermface::report::Report;
use hermface::suites::{albert, cone, lattice, r5, sections, SuiteConfig};
use hermface_core::cone_faces::{ambient_dimension, predicted_dimension};
use hermface_core::lattice::{face_lattice_of_polytope, PolytopeV};
use serde_json::Value;

const SEED: u64 = 20240601;

struct Verdict {
    ok: bool,
    notes: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict { ok: true, notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, note: impl Into<String>) {
        if !ok {
            self.ok = false;
            self.notes.push(note.into());
        }
    }

    fn reports<'a>(&mut self, reports: impl IntoIterator<Item = &'a Report>) {
        for r in reports {
            let mut note = format!(
                "{} [{} n={:?}]: {} of {} trials failed, max residual {:e}",
                r.check,
                r.field.as_deref().unwrap_or("-"),
                r.n,
                r.failures,
                r.trials,
                r.max_residual
            );
            if let Some(w) = &r.witness {
                note.push_str(&format!(", witness {w}"));
            }
            self.require(r.passed(), note);
        }
    }

    fn runtime(&mut self, elapsed: Duration, limit_s: u64) {
        self.require(elapsed < Duration::from_secs(limit_s), format!("took {elapsed:?}, limit {limit_s} s"));
    }
}

fn config() -> SuiteConfig {
    let mut cfg = SuiteConfig::new(SEED);
    cfg.timed = true;
    cfg
}

fn named<'a>(reports: &'a [Report], check: &str) -> Vec<&'a Report> {
    let found: Vec<&Report> = reports.iter().filter(|r| r.check == check).collect();
    assert!(!found.is_empty(), "no report named {check}");
    found
}

fn elapsed(reports: &[&Report]) -> Duration {
    Duration::from_millis(reports.iter().map(|r| r.elapsed_ms.expect("timed run")).sum())
}

fn vertex_mask(v: &Value) -> u32 {
    v.as_array().expect("vertex list").iter().map(|i| 1u32 << i.as_u64().expect("vertex index")).sum()
}

/// Recomputes a reported non-modular triple against the face lattice.
fn witness_holds(shape: &str, w: &Value) -> bool {
    let fl = face_lattice_of_polytope(&PolytopeV::named(shape).expect("shape")).expect("face lattice");
    let index = |key: &str| fl.faces.iter().position(|&m| m == vertex_mask(&w[key]));
    let (Some(f), Some(g), Some(h)) = (index("f"), index("g"), index("h")) else {
        return false;
    };
    let l = &fl.lattice;
    l.leq(f, h) && l.join(f, l.meet(g, h)) != l.meet(l.join(f, g), h)
}

fn nu_isomorphism(cone: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    let reports = named(cone, "nu-join-meet");
    v.require(reports.len() == 3, "expected one report per associative field");
    v.require(reports.iter().all(|r| r.trials == 1000), "expected 1000 pairs per field");
    v.reports(reports.iter().copied());
    v.runtime(elapsed(&reports), 60);
    v
}

fn modularity(cone: &[Report], lat: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    let mut timed = named(cone, "modular-law");
    v.require(timed.iter().all(|r| r.trials == 1000), "expected 1000 triples per field");
    v.reports(timed.iter().copied());
    for shape in ["square", "cube"] {
        let r = named(lat, &format!("face-lattice/{shape}"))[0];
        v.reports([r]);
        match &r.witness {
            Some(w) => v.require(witness_holds(shape, w), format!("{shape}: witness {w} does not violate the law")),
            None => v.require(false, format!("{shape}: no witness triple")),
        }
        timed.push(r);
    }
    for shape in ["point", "segment", "simplex2", "simplex3", "simplex4"] {
        let r = named(lat, &format!("face-lattice/{shape}"))[0];
        v.reports([r]);
        v.require(r.detail.as_ref().is_some_and(|d| d["modular"] == true), format!("{shape}: not certified modular"));
        timed.push(r);
    }
    v.runtime(elapsed(&timed), 30);
    v
}

fn join_product(lat: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    let reports = named(lat, "star-join-product");
    v.require(reports[0].trials == 9, "expected all 9 ordered pairs");
    v.reports(reports.iter().copied());
    v.runtime(elapsed(&reports), 10);
    v
}

fn dimension_formula(cone: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    for (d, expected) in [(1, 5), (2, 8), (4, 14), (8, 26)] {
        let got = predicted_dimension(3, d).ok();
        v.require(got == Some(expected), format!("d = {d}: predicted {got:?}, expected {expected}"));
        v.require(got == Some(ambient_dimension(3, d) - 1), format!("d = {d}: not one less than the ambient count"));
    }
    let reports = named(cone, "dimension-formula");
    v.require(reports[0].trials == 13, "expected n = 2..5 for d = 1, 2, 4 and the octonionic plane");
    v.reports(reports.iter().copied());
    v
}

fn albert_suite(alb: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    let mut all = Vec::new();
    for (check, trials) in [("chart-idempotents", 10_000), ("duality", 1000), ("line-through", 500), ("meet-of-lines", 500)]
    {
        let r = named(alb, check);
        v.require(r[0].trials == trials, format!("{check}: expected {trials} trials"));
        all.extend(r);
    }
    v.require(named(alb, "chart-idempotents")[0].tolerance == Some(1e-10), "idempotent residual bound is not 1e-10");
    v.reports(all.iter().copied());
    v.runtime(elapsed(&all), 120);
    v
}

fn printed_matrix(rp: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    let r = named(rp, "printed-matrix");
    v.require(r[0].trials == 9, "expected 9 entries");
    v.reports(r);
    v
}

fn factorization(rp: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    let r = named(rp, "factorization");
    v.require(r[0].trials == 100, "expected 100 rational points");
    v.runtime(elapsed(&r), 60);
    v.reports(r);
    v
}

fn spans(rp: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    let fwd = named(rp, "spans-forward");
    let rnd = named(rp, "spans-random");
    v.require(fwd[0].trials == 200 && rnd[0].trials == 200, "expected 200 spans each way");
    v.require(fwd[0].tolerance == Some(1e-8), "span tolerance is not 1e-8");
    v.reports(fwd.into_iter().chain(rnd));
    v
}

fn boundary_conics(rp: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    let r = named(rp, "boundary-conics");
    v.require(r[0].tolerance == Some(1e-7), "conic residual bound is not 1e-7");
    v.reports(r);
    v
}

fn equivalence(rp: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    let r = named(rp, "equivalence");
    v.require(r[0].trials == 20, "expected 20 transforms");
    v.require(r[0].tolerance == Some(1e-7), "face span bound is not 1e-7");
    v.reports(r);
    v
}

fn radial(cone: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    let id = named(cone, "radial-identity");
    let conj = named(cone, "radial-conjugation");
    v.require(id.iter().all(|r| r.trials == 1000), "expected 1000 identity points");
    v.require(conj.iter().all(|r| r.trials == 100), "expected 100 conjugation points");
    v.require(id.iter().chain(&conj).all(|r| r.tolerance == Some(1e-9)), "radial bound is not 1e-9");
    v.reports(id.into_iter().chain(conj));
    v
}

fn sections_suite(sec: &[Report]) -> Verdict {
    let mut v = Verdict::new();
    let checks = ["compactness", "unique-ray", "shared-direction", "parallel-classes"];
    let reports: Vec<&Report> = checks.iter().flat_map(|c| named(sec, c)).collect();
    v.require(reports.iter().all(|r| r.trials == 200), "expected 200 samples per check");
    v.require(
        named(sec, "parallel-classes").iter().any(|r| r.field.as_deref() == Some("R") && r.n == Some(3)),
        "parallel classes not run on the real 3x3 section",
    );
    v.reports(reports);
    v
}

fn timed_run<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn main() {
    let cfg = config();
    let (cone, t_cone) = timed_run(|| cone::run(&cfg).expect("cone suite"));
    let (lat, t_lat) = timed_run(|| lattice::run(&cfg, None).expect("lattice suite"));
    let (alb, t_alb) = timed_run(|| albert::run(&cfg).expect("albert suite"));
    let (rp, t_rp) = timed_run(|| r5::run(&cfg).expect("r5 suite"));
    let (sec, t_sec) = timed_run(|| sections::run(&cfg).expect("sections suite"));
    println!("suite wall times: cone {t_cone:?}, lattice {t_lat:?}, albert {t_alb:?}, r5 {t_rp:?}, sections {t_sec:?}");

    let verdicts = [
        ("1 nu-isomorphism", nu_isomorphism(&cone)),
        ("2 modularity", modularity(&cone, &lat)),
        ("3 join product", join_product(&lat)),
        ("4 dimension formula", dimension_formula(&cone)),
        ("5 albert suite", albert_suite(&alb)),
        ("6 printed matrix", printed_matrix(&rp)),
        ("7 factorization", factorization(&rp)),
        ("8 face spans", spans(&rp)),
        ("9 boundary conics", boundary_conics(&rp)),
        ("10 projective equivalence", equivalence(&rp)),
        ("11 radial extension", radial(&cone)),
        ("12 sections suite", sections_suite(&sec)),
    ];
    let mut failed = Vec::new();
    for (name, v) in &verdicts {
        println!("{} criterion {name}", if v.ok { "PASS" } else { "FAIL" });
        for note in &v.notes {
            println!("    {note}");
        }
        if !v.ok {
            failed.push(*name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
