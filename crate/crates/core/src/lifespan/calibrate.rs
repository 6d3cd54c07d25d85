use rayon::prelude::*;

use super::{
    necessary_constant, numeric_lifespan_with, sufficient_ratio_thm1, sufficient_ratio_thm2, BallMass, LifespanError,
    NecessaryForm, NumericConfig, NumericLifespan,
};
use crate::heat::RadialProfile;
use crate::solver::LaplaceTable;
use crate::subordination::FractionalParams;

/// Pilot family `kappa * reference` over a grid of `(alpha, kappa)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationSpec {
    pub reference: RadialProfile,
    pub alphas: Vec<f64>,
    pub kappas: Vec<f64>,
    /// Weights of the first sufficient condition to calibrate, one constant each.
    pub gammas: Vec<f64>,
    pub numeric: NumericConfig,
}

impl CalibrationSpec {
    pub fn gaussian(dim: usize) -> Result<Self, LifespanError> {
        Ok(Self {
            reference: RadialProfile::gaussian(dim, 1.0)?,
            alphas: vec![0.5, 0.9],
            kappas: vec![1.0, 2.0, 4.0],
            gammas: vec![dim as f64 / 2.0, dim as f64 / 2.0 + 1.0],
            numeric: NumericConfig::default(),
        })
    }
}

/// Constants implied by one pilot run at the lower end `lo` of its bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct PilotPoint {
    pub alpha: f64,
    pub kappa: f64,
    pub bracket: NumericLifespan,
    /// Per weight in [`Calibration::gammas`]: the first sufficient-condition ratio at `lo`.
    pub c_thm1: Vec<f64>,
    pub c_thm2: f64,
    pub gamma1: f64,
    pub gamma1_log: f64,
}

/// Calibrated constants. `c_thm1` and `c_thm2` are the largest constants whose
/// sufficient times stay below every pilot bracket; `gamma1` and `gamma1_log`
/// the smallest whose necessary times stay above them.
#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub gammas: Vec<f64>,
    pub c_thm1: Vec<f64>,
    pub c_thm2: f64,
    pub gamma1: f64,
    pub gamma1_log: f64,
    pub pilot: Vec<PilotPoint>,
}

impl Calibration {
    /// Fixed constants without a pilot.
    pub fn manual(gammas: Vec<f64>, c_thm1: Vec<f64>, c_thm2: f64, gamma1: f64, gamma1_log: f64) -> Result<Self, LifespanError> {
        if gammas.len() != c_thm1.len() {
            return Err(LifespanError::Input("one first-condition constant per weight".into()));
        }
        let all = c_thm1.iter().chain([&c_thm2, &gamma1, &gamma1_log]);
        if all.into_iter().any(|c| !(*c > 0.0 && c.is_finite())) {
            return Err(LifespanError::Input("calibrated constants must be positive and finite".into()));
        }
        Ok(Self { gammas, c_thm1, c_thm2, gamma1, gamma1_log, pilot: Vec::new() })
    }

    pub fn c_thm1_for(&self, gamma: f64) -> Result<f64, LifespanError> {
        self.gammas
            .iter()
            .position(|&g| (g - gamma).abs() <= 1e-12 * g.abs().max(1.0))
            .map(|i| self.c_thm1[i])
            .ok_or_else(|| LifespanError::Input(format!("no first-condition constant calibrated for gamma = {gamma}")))
    }
}

pub fn calibrate(spec: &CalibrationSpec) -> Result<Calibration, LifespanError> {
    spec.numeric.validate()?;
    if spec.alphas.is_empty() || spec.kappas.is_empty() {
        return Err(LifespanError::Input("calibration needs at least one alpha and one kappa".into()));
    }
    let dim = spec.reference.dim;
    let tables: Vec<LaplaceTable> = spec
        .alphas
        .par_iter()
        .map(|&a| LaplaceTable::new(a, spec.numeric.solver.theta_tol, spec.numeric.solver.theta_max_nodes))
        .collect::<Result<_, _>>()?;
    let jobs: Vec<(usize, f64)> = (0..spec.alphas.len()).flat_map(|i| spec.kappas.iter().map(move |&k| (i, k))).collect();
    let results: Vec<Option<PilotPoint>> = jobs
        .par_iter()
        .map(|&(i, kappa)| -> Result<Option<PilotPoint>, LifespanError> {
            let alpha = spec.alphas[i];
            let params = FractionalParams::fujita(dim, alpha)?;
            let phi = spec.reference.scaled(kappa);
            let bracket = numeric_lifespan_with(&tables[i], &phi, &params, &spec.numeric)?;
            if !(bracket.lo > 0.0 && bracket.hi.is_finite()) {
                return Ok(None);
            }
            let ln_t = bracket.lo.ln();
            let c_thm1 = spec
                .gammas
                .iter()
                .map(|&g| sufficient_ratio_thm1(&phi, g, &params, ln_t))
                .collect::<Result<Vec<_>, _>>()?;
            let mass = BallMass::new(&phi)?;
            Ok(Some(PilotPoint {
                alpha,
                kappa,
                bracket,
                c_thm1,
                c_thm2: sufficient_ratio_thm2(&phi, &params, ln_t)?,
                gamma1: necessary_constant(&mass, &params, ln_t, NecessaryForm::Exact),
                gamma1_log: necessary_constant(&mass, &params, ln_t, NecessaryForm::Log),
            }))
        })
        .collect::<Result<_, _>>()?;
    let pilot: Vec<PilotPoint> = results.into_iter().flatten().collect();
    if pilot.is_empty() {
        return Err(LifespanError::Input("no pilot run produced a finite blow-up bracket".into()));
    }
    let min = |f: &dyn Fn(&PilotPoint) -> f64| pilot.iter().map(f).fold(f64::INFINITY, f64::min);
    let max = |f: &dyn Fn(&PilotPoint) -> f64| pilot.iter().map(f).fold(0.0, f64::max);
    Ok(Calibration {
        gammas: spec.gammas.clone(),
        c_thm1: (0..spec.gammas.len()).map(|j| min(&|p| p.c_thm1[j])).collect(),
        c_thm2: min(&|p| p.c_thm2),
        gamma1: max(&|p| p.gamma1),
        gamma1_log: max(&|p| p.gamma1_log),
        pilot,
    })
}
