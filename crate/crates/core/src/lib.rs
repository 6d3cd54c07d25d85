//! Numerical toolkit for the time-fractional Fujita problem
//! `D_t^alpha u = Delta u + |u|^(p-1) u`, `u(0) = phi`, at `p = 1 + 2/N`.
//!
//! The kernels (`special`, `heat`, `subordination`, `solver`) are generic
//! over [`Real`]; the analysis layers (`zygmund`, `lifespan`) work in `f64`.

pub mod heat;
pub mod lifespan;
pub mod quad;
pub mod scalar;
pub mod solver;
pub mod special;
pub mod subordination;
pub mod zygmund;

pub use scalar::Real;

/// `f64` instances of the generic kernels.
pub type Grid = heat::SpatialGrid<f64>;
pub type ThetaRule = special::ThetaQuadrature<f64>;
pub type Mainardi = special::WrightDensity<f64>;
pub type Operator = subordination::SubordinatedOperator<f64>;
pub type Path = solver::Trajectory<f64>;
pub type Outcome = solver::PicardOutcome<f64>;

/// `f32` instances, for memory-bound sweeps where 1e-6 accuracy suffices.
pub type Grid32 = heat::SpatialGrid<f32>;
pub type Operator32 = subordination::SubordinatedOperator<f32>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
