//! Gamma, Mittag-Leffler and Wright functions, and the positive rule
//! discretising the subordinator density.

mod gamma;
mod mittag_leffler;
mod theta;
mod wright;

pub use gamma::{gamma, ln_gamma, rgamma};
pub use mittag_leffler::mittag_leffler;
pub use theta::{build_theta_quadrature, ThetaQuadrature, CERTIFIED_MOMENTS};
pub use wright::{wright_moment, WrightDensity};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecialError {
    #[error("alpha = {0} outside the admissible range")]
    AlphaOutOfRange(f64),
    #[error("argument {0} outside the supported domain")]
    ArgumentOutOfRange(f64),
    #[error("moment order {0} must exceed -1")]
    MomentOrder(f64),
    #[error("theta rule reached {achieved:e} against tolerance {tol:e} within {max_nodes} nodes")]
    QuadratureTolerance { tol: f64, achieved: f64, max_nodes: usize },
}
