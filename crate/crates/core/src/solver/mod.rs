//! Mild solutions of `u = P(t) phi + alpha int_0^t (t-s)^(alpha-1) S(t-s) |u|^(p-1) u ds`
//! by Picard iteration, with a Caputo L1 scheme and a scalar Volterra solver as
//! independent references.

mod caputo;
mod grid;
mod kernel;
mod picard;
mod volterra;

pub use caputo::{caputo_l1_solve, caputo_l1_solve_with, L1Config};
pub use grid::{Grading, TimeGrid};
pub use kernel::{DuhamelTables, LaplaceTable, ProductRule};
pub use picard::{
    duhamel_map, picard_solve, picard_solve_with, residual, BudgetSpec, ContractionBudget, DuhamelMap,
    PicardOutcome, SolverConfig, Trajectory,
};
pub use volterra::{scalar_blow_up, scalar_volterra, ScalarBlowUp, ScalarPath};

use crate::heat::HeatError;
use crate::special::SpecialError;
use crate::subordination::FractionalParams;

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("time grid: {0}")]
    Grid(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("state {0} does not match the grid of the initial datum")]
    Shape(usize),
    #[error("explicit update at step {step} grew by {growth:e}, above the cap {cap:e}")]
    StepRejected { step: usize, growth: f64, cap: f64 },
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Heat(#[from] HeatError),
}

fn check_params(params: &FractionalParams, grid: &TimeGrid, dim: usize) -> Result<(), SolverError> {
    if (params.alpha - grid.alpha).abs() > 0.0 {
        return Err(SolverError::Config(format!("grid alpha {} differs from {}", grid.alpha, params.alpha)));
    }
    if params.dim != dim {
        return Err(SolverError::Config(format!("datum has dimension {dim}, parameters say {}", params.dim)));
    }
    Ok(())
}
