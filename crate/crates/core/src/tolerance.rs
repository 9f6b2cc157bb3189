//! Shared tolerance constants and the approximate-equality rule.

/// Default tolerance for approximate equalities.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Singular values below `RANK_CUTOFF · σ_max` count as zero.
pub const RANK_CUTOFF: f64 = 1e-9;

/// `|a − b| ≤ tol · (1 + max(|a|, |b|))`.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_absolute_relative() {
        assert!(approx_eq(1e12, 1e12 + 1.0, DEFAULT_TOL));
        assert!(!approx_eq(0.0, 1e-9, DEFAULT_TOL));
        assert!(approx_eq(0.0, 1e-11, DEFAULT_TOL));
    }
}
