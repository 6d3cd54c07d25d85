//! Bounds on the lifespan `T_alpha[phi]` at `p = 1 + 2/N`: sufficient-condition
//! lower bounds, necessary-condition upper bounds, numerical blow-up brackets,
//! constant calibration, and power-law fits of `log T` across sweeps.

mod calibrate;
mod conditions;
mod fit;
mod mass;
mod numeric;
mod sweep;

pub use calibrate::{calibrate, Calibration, CalibrationSpec, PilotPoint};
pub use conditions::{
    necessary_constant, necessary_t, necessary_t_in, sufficient_ratio_thm1, sufficient_ratio_thm2, sufficient_t_thm1,
    sufficient_t_thm1_in, sufficient_t_thm2, sufficient_t_thm2_in, NecessaryForm, ProbeRange,
};
pub use fit::{fit_scaling, Regime, ScalingFit};
pub use mass::BallMass;
pub use numeric::{
    estimate, numeric_lifespan, numeric_lifespan_with, probe, LifespanEstimate, NumericConfig, NumericLifespan,
    Status, Verdict,
};
pub use sweep::{kappa_series, kappa_violations, run_sweep, Family, FitRow, SweepPoint, SweepRow, SweepSpec, DEFAULT_ALPHAS};

use crate::heat::HeatError;
use crate::solver::SolverError;
use crate::subordination::SubordinationError;
use crate::zygmund::ZygmundError;

#[derive(Debug, thiserror::Error)]
pub enum LifespanError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("fit: {0}")]
    Fit(String),
    #[error(transparent)]
    Zygmund(#[from] ZygmundError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Heat(#[from] HeatError),
    #[error(transparent)]
    Subordination(#[from] SubordinationError),
}

/// Outcome of a threshold search over `ln T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeBound {
    /// The condition already fails at the smallest probed time.
    Zero,
    /// Threshold, stored as `ln T` so that extreme times stay representable.
    Finite(f64),
    /// The condition still holds at the largest probed time.
    Unbounded,
}

impl TimeBound {
    pub fn ln_t(&self) -> f64 {
        match *self {
            TimeBound::Zero => f64::NEG_INFINITY,
            TimeBound::Finite(x) => x,
            TimeBound::Unbounded => f64::INFINITY,
        }
    }

    pub fn t(&self) -> f64 {
        self.ln_t().exp()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, TimeBound::Finite(_))
    }
}

/// `log(e + 2T)` from `ln T`.
pub(crate) fn log_e_2t(ln_t: f64) -> f64 {
    if ln_t > 30.0 {
        ln_t + std::f64::consts::LN_2 + (std::f64::consts::E / 2.0 * (-ln_t).exp()).ln_1p()
    } else {
        (std::f64::consts::E + 2.0 * ln_t.exp()).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_e_2t_is_continuous_across_the_switch() {
        for x in [-50.0, 0.0, 29.999, 30.001, 700.0] {
            let direct = (std::f64::consts::E + 2.0 * f64::exp(x)).ln();
            if direct.is_finite() {
                assert!((log_e_2t(x) - direct).abs() < 1e-13 * direct);
            }
        }
        assert!((log_e_2t(1000.0) - (1000.0 + std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn time_bound_flags() {
        assert_eq!(TimeBound::Zero.t(), 0.0);
        assert_eq!(TimeBound::Unbounded.t(), f64::INFINITY);
        assert!((TimeBound::Finite(1.0).t() - std::f64::consts::E).abs() < 1e-15);
    }
}
