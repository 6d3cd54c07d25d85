//! Non-increasing rearrangements of radial profiles and grid functions, weak
//! Zygmund norms `sup_s [LOG(s)^gamma int_0^s (f*)^q]^(1/q)` with
//! `LOG(s) = log(e + 1/s)`, their uniformly local variants, and numerical
//! checks of the inequalities used to control them.

mod checks;
mod lemmas;
mod norm;
mod rearrangement;

pub use checks::{gamma_monotonicity, holder_check, power_norm_check, RatioReport};
pub use lemmas::{
    log_constant_i, log_constant_ii_sup, log_equivalence_bounds, log_integral_check, log_integral_lhs,
    log_integral_rhs, LogConstantReport, LogEquivalence, LogIntegralPart, LogIntegralReport,
};
pub use norm::{
    grid_local_norm, measure_grid_for, uniformly_local_norm, uniformly_local_norm_on, uniformly_local_norm_refined,
    zygmund_norm, zygmund_norms, NormQuery, NormResult,
};
pub(crate) use norm::golden_max_pub;
pub use rearrangement::{rearrange, rearrange_grid, MeasureGrid, ProfileRow, RearrangementProfile};

use crate::heat::HeatError;

#[derive(Debug, thiserror::Error)]
pub enum ZygmundError {
    #[error("invalid norm query: {0}")]
    Query(String),
    #[error("profile is not non-increasing near s = {0}")]
    NotMonotone(f64),
    #[error("exponents: {0}")]
    Exponents(String),
    #[error("measure grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Heat(#[from] HeatError),
}

/// `log(e + 1/s)`.
pub fn loge(s: f64) -> f64 {
    loge_of_ln(s.ln())
}

/// `log(e + 1/s)` from `ln s`, without overflow for extreme `s`.
pub fn loge_of_ln(ln_s: f64) -> f64 {
    if ln_s < 0.0 {
        -ln_s + (1.0 + ln_s).exp().ln_1p()
    } else {
        (std::f64::consts::E + (-ln_s).exp()).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loge_matches_direct_formula() {
        for &s in &[1e-300, 1e-20, 1e-3, 0.5, 1.0, 7.0, 1e9, 1e300] {
            let direct = (std::f64::consts::E + 1.0 / s).ln();
            assert!((loge(s) - direct).abs() <= 4e-16 * direct, "s = {s}");
        }
        assert!((loge_of_ln(-1e4) - (1e4 + 1.0_f64.ln_1p() * 0.0)).abs() < 1e-9);
    }
}
