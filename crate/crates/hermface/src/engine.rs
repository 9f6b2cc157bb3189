//! Independent trials run in parallel and merged by sum, max and
//! lowest-failing-index, so the merged report does not depend on scheduling.

use std::time::Instant;

use hermface_core::Field;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::report::Report;
use crate::seed::trial_rng;

/// Result of one trial.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub residual: f64,
    pub pass: bool,
    pub witness: Option<Value>,
}

impl Outcome {
    pub fn pass(residual: f64) -> Self {
        Outcome { residual, pass: true, witness: None }
    }

    pub fn fail(residual: f64, witness: Value) -> Self {
        Outcome { residual, pass: false, witness: Some(witness) }
    }

    /// Passes when `residual ≤ tol`; the witness is built only on failure.
    pub fn within(residual: f64, tol: f64, witness: impl FnOnce() -> Value) -> Self {
        if residual <= tol {
            Outcome::pass(residual)
        } else {
            Outcome::fail(residual, witness())
        }
    }

    pub fn error(e: impl std::fmt::Display) -> Self {
        Outcome { residual: 0.0, pass: false, witness: Some(Value::String(e.to_string())) }
    }
}

/// What a batch of trials is reported as.
#[derive(Clone, Debug)]
pub struct Batch<'a> {
    pub check: &'a str,
    pub field: Option<Field>,
    pub n: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub timed: bool,
}

impl<'a> Batch<'a> {
    pub fn new(check: &'a str, trials: usize, seed: u64) -> Self {
        Batch { check, field: None, n: None, trials, seed, tolerance: None, timed: false }
    }

    pub fn field(mut self, f: Field) -> Self {
        self.field = Some(f);
        self
    }

    pub fn n(mut self, n: Option<usize>) -> Self {
        self.n = n;
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn timed(mut self, timed: bool) -> Self {
        self.timed = timed;
        self
    }

    fn key(&self) -> String {
        let field = self.field.map(|f| f.symbol()).unwrap_or("-");
        let n = self.n.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
        format!("{}/{field}/{n}", self.check)
    }

    pub fn empty_report(&self) -> Report {
        let mut r = Report::new(self.check, self.seed);
        r.field = self.field.map(|f| f.symbol().to_string());
        r.n = self.n;
        r.trials = self.trials;
        r.tolerance = self.tolerance;
        r
    }

    /// Runs `trial(i, rng)` for every index; non-finite residuals count as
    /// failures and are left out of the maximum.
    pub fn run<F>(&self, trial: F) -> Report
    where
        F: Fn(usize, &mut ChaCha8Rng) -> Outcome + Sync,
    {
        let start = Instant::now();
        let key = self.key();
        let (failures, max_residual, first) = (0..self.trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(self.seed, &key, i as u64);
                let mut o = trial(i, &mut rng);
                if !o.residual.is_finite() {
                    o.pass = false;
                    o.witness.get_or_insert_with(|| Value::String(format!("residual {}", o.residual)));
                    o.residual = 0.0;
                }
                let first = (!o.pass).then(|| (i, o.witness.unwrap_or(Value::Null)));
                (usize::from(!o.pass), o.residual, first)
            })
            .reduce(
                || (0, 0.0, None),
                |a, b| {
                    let first = match (a.2, b.2) {
                        (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                        (x, y) => x.or(y),
                    };
                    (a.0 + b.0, f64::max(a.1, b.1), first)
                },
            );
        let mut r = self.empty_report();
        r.failures = failures;
        r.max_residual = max_residual;
        r.witness = first.map(|(i, w)| serde_json::json!({ "trial": i, "data": w }));
        if self.timed {
            r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn merge_is_deterministic() {
        let batch = Batch::new("t", 500, 1);
        let run = || {
            batch.run(|i, rng| {
                let x: f64 = rng.random();
                if i % 97 == 5 {
                    Outcome::fail(x, Value::from(i))
                } else {
                    Outcome::pass(x)
                }
            })
        };
        let a = run();
        assert_eq!(a, run());
        assert_eq!(a.failures, 6);
        assert_eq!(a.witness.as_ref().unwrap()["trial"], 5);
        assert!(a.max_residual > 0.9);
    }

    #[test]
    fn non_finite_residual_fails() {
        let r = Batch::new("t", 3, 1).run(|i, _| Outcome::pass(if i == 1 { f64::NAN } else { 0.5 }));
        assert_eq!(r.failures, 1);
        assert_eq!(r.max_residual, 0.5);
    }
}
