use super::SubordinationError;

/// Dimension, fractional order, and nonlinearity exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FractionalParams {
    pub dim: usize,
    pub alpha: f64,
    pub p: f64,
    /// Set exactly when `p = 1 + 2/N`.
    pub fujita_critical: bool,
}

impl FractionalParams {
    /// Validates `N >= 1`, `0 < alpha < 1`, `p > 1`, and that a critical
    /// flag comes with `p = 1 + 2/N`.
    pub fn new(dim: usize, alpha: f64, p: f64, fujita_critical: bool) -> Result<Self, SubordinationError> {
        let mut errs = Vec::new();
        if dim == 0 {
            errs.push("dimension N must be >= 1".to_string());
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            errs.push(format!("alpha must lie in (0, 1), got {alpha}"));
        }
        if !(p > 1.0 && p.is_finite()) {
            errs.push(format!("p must exceed 1, got {p}"));
        }
        if fujita_critical && dim > 0 && p != Self::fujita_exponent(dim) {
            errs.push(format!("fujita_critical requires p = 1 + 2/N = {}, got {p}", Self::fujita_exponent(dim)));
        }
        if errs.is_empty() {
            Ok(Self { dim, alpha, p, fujita_critical })
        } else {
            Err(SubordinationError::Params(errs.join("; ")))
        }
    }

    /// Critical exponent `p = 1 + 2/N`.
    pub fn fujita(dim: usize, alpha: f64) -> Result<Self, SubordinationError> {
        if dim == 0 {
            return Err(SubordinationError::Params("dimension N must be >= 1".into()));
        }
        Self::new(dim, alpha, Self::fujita_exponent(dim), true)
    }

    pub fn fujita_exponent(dim: usize) -> f64 {
        1.0 + 2.0 / dim as f64
    }
}
