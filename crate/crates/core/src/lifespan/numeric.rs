use std::cell::Cell;

use super::{Calibration, LifespanError, NecessaryForm, TimeBound};
use crate::heat::{RadialProfile, SpatialGrid};
use crate::solver::{picard_solve_with, LaplaceTable, SolverConfig, TimeGrid};
use crate::subordination::FractionalParams;

#[derive(Clone, Debug, PartialEq)]
pub struct NumericConfig {
    /// Graded steps of the first resolution; blow-up is confirmed at twice this.
    pub steps: usize,
    pub half_width: f64,
    pub points: usize,
    pub solver: SolverConfig,
    pub t_start: f64,
    pub t_min: f64,
    pub t_max: f64,
    /// Target `hi / lo - 1` of the final bracket.
    pub rel_width: f64,
    pub max_probes: usize,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            steps: 48,
            half_width: 16.0,
            points: 128,
            solver: SolverConfig::default(),
            t_start: 1.0,
            t_min: 1e-6,
            t_max: 1e3,
            rel_width: 0.05,
            max_probes: 60,
        }
    }
}

impl NumericConfig {
    pub fn validate(&self) -> Result<(), LifespanError> {
        let mut errs = Vec::new();
        if self.steps < 2 {
            errs.push(format!("steps must be >= 2, got {}", self.steps));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            errs.push(format!("half_width must be positive, got {}", self.half_width));
        }
        if self.points < 4 {
            errs.push(format!("points must be >= 4, got {}", self.points));
        }
        if !(self.t_min > 0.0 && self.t_min <= self.t_start && self.t_start <= self.t_max && self.t_max.is_finite()) {
            errs.push(format!("need 0 < t_min <= t_start <= t_max < inf, got {} {} {}", self.t_min, self.t_start, self.t_max));
        }
        if !(self.rel_width > 0.0) {
            errs.push(format!("rel_width must be positive, got {}", self.rel_width));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(LifespanError::Input(errs.join("; ")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Solvable,
    /// Blow-up flag, or successive distances that stopped shrinking.
    Unsolvable,
    /// Out of iterations while still contracting.
    Inconclusive,
}

/// One Picard solve on `[0, horizon]` with `steps` graded steps.
pub fn probe(
    table: &LaplaceTable,
    phi: &SpatialGrid<f64>,
    params: &FractionalParams,
    horizon: f64,
    steps: usize,
    solver: &SolverConfig,
) -> Result<Verdict, LifespanError> {
    let grid = TimeGrid::graded(horizon, steps, params.alpha)?;
    let out = picard_solve_with(table, phi, params, &grid, solver)?;
    if out.trajectory.blow_up.is_some() {
        return Ok(Verdict::Unsolvable);
    }
    if out.converged {
        return Ok(Verdict::Solvable);
    }
    let first = out.distances.first().copied().unwrap_or(f64::INFINITY);
    let last = out.distances.last().copied().unwrap_or(f64::INFINITY);
    Ok(if !(last < first) { Verdict::Unsolvable } else { Verdict::Inconclusive })
}

/// Bracket `lo < T_alpha[phi] <= hi` from the solver. `lo = 0` when already
/// unsolvable at `t_min`; `hi = inf` when still solvable at `t_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericLifespan {
    pub lo: f64,
    pub hi: f64,
    pub probes: usize,
    /// Probe budget exhausted, or an inconclusive probe entered the bracket.
    pub low_confidence: bool,
}

impl NumericLifespan {
    /// Geometric midpoint of the bracket, with the flags passed through.
    pub fn t(&self) -> f64 {
        if self.hi.is_infinite() {
            f64::INFINITY
        } else if self.lo == 0.0 {
            0.0
        } else {
            (self.lo * self.hi).sqrt()
        }
    }

    pub fn is_unbounded(&self) -> bool {
        self.hi.is_infinite()
    }

    pub fn rel_width(&self) -> f64 {
        self.hi / self.lo - 1.0
    }
}

pub fn numeric_lifespan(phi: &RadialProfile, params: &FractionalParams, config: &NumericConfig) -> Result<NumericLifespan, LifespanError> {
    let table = LaplaceTable::new(params.alpha, config.solver.theta_tol, config.solver.theta_max_nodes)?;
    numeric_lifespan_with(&table, phi, params, config)
}

/// Bisection on the horizon. A horizon counts as unsolvable only when both
/// resolutions (`steps` and `2 steps`) fail to produce a converged solution.
pub fn numeric_lifespan_with(
    table: &LaplaceTable,
    phi: &RadialProfile,
    params: &FractionalParams,
    config: &NumericConfig,
) -> Result<NumericLifespan, LifespanError> {
    config.validate()?;
    if phi.dim != params.dim {
        return Err(LifespanError::Input(format!("profile dimension {} differs from N = {}", phi.dim, params.dim)));
    }
    let grid = phi.sample_grid(config.half_width, config.points)?;
    let probes = Cell::new(0_usize);
    let doubtful = Cell::new(false);
    let solvable = |t: f64| -> Result<bool, LifespanError> {
        probes.set(probes.get() + 1);
        let coarse = probe(table, &grid, params, t, config.steps, &config.solver)?;
        if coarse == Verdict::Solvable {
            return Ok(true);
        }
        let fine = probe(table, &grid, params, t, 2 * config.steps, &config.solver)?;
        if coarse == Verdict::Inconclusive || fine == Verdict::Inconclusive {
            doubtful.set(true);
        }
        Ok(fine == Verdict::Solvable)
    };
    let (mut lo, mut hi);
    let mut t = config.t_start;
    if solvable(t)? {
        lo = t;
        hi = f64::INFINITY;
        while t < config.t_max {
            t = (4.0 * t).min(config.t_max);
            if solvable(t)? {
                lo = t;
            } else {
                hi = t;
                break;
            }
        }
    } else {
        hi = t;
        lo = 0.0;
        while t > config.t_min {
            t = (t / 4.0).max(config.t_min);
            if solvable(t)? {
                lo = t;
                break;
            }
            hi = t;
        }
    }
    let mut exhausted = false;
    if lo > 0.0 && hi.is_finite() {
        while hi / lo > 1.0 + config.rel_width {
            if probes.get() >= config.max_probes {
                exhausted = true;
                break;
            }
            let mid = (lo * hi).sqrt();
            if solvable(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    Ok(NumericLifespan { lo, hi, probes: probes.get(), low_confidence: exhausted || doubtful.get() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Consistent,
    /// Some lower bound exceeds some upper bound beyond the solver tolerance.
    Inverted,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Consistent => "consistent",
            Status::Inverted => "inverted",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LifespanEstimate {
    /// Larger of the two sufficient-condition bounds.
    pub t_sufficient: TimeBound,
    pub t_sufficient_thm1: TimeBound,
    pub t_sufficient_thm2: TimeBound,
    pub t_necessary: TimeBound,
    pub t_numeric: Option<NumericLifespan>,
    pub status: Status,
}

fn max_bound(a: TimeBound, b: TimeBound) -> TimeBound {
    if a.ln_t() >= b.ln_t() {
        a
    } else {
        b
    }
}

impl LifespanEstimate {
    /// Packages the bounds. Checks `T_sufficient <= T_necessary`, and against a
    /// numeric bracket `T_sufficient <= hi`, `lo <= T_necessary`, each with the
    /// bracket's relative tolerance.
    pub fn new(thm1: TimeBound, thm2: TimeBound, necessary: TimeBound, numeric: Option<NumericLifespan>, tol: f64) -> Self {
        let sufficient = max_bound(thm1, thm2);
        let slack = tol.ln_1p();
        let (s, n) = (sufficient.ln_t(), necessary.ln_t());
        let mut inverted = sufficient.is_finite() && necessary.is_finite() && s > n;
        inverted |= sufficient == TimeBound::Unbounded && necessary != TimeBound::Unbounded;
        if let Some(num) = numeric {
            inverted |= s > num.hi.ln() + slack;
            inverted |= num.lo.ln() > n + slack;
        }
        let status = if inverted { Status::Inverted } else { Status::Consistent };
        Self { t_sufficient: sufficient, t_sufficient_thm1: thm1, t_sufficient_thm2: thm2, t_necessary: necessary, t_numeric: numeric, status }
    }
}

/// All three estimates for one datum. `gamma` is the weight of the first sufficient condition; the
/// numeric bracket is computed only when `numeric` is given.
pub fn estimate(
    phi: &RadialProfile,
    params: &FractionalParams,
    calibration: &Calibration,
    gamma: f64,
    numeric: Option<(&LaplaceTable, &NumericConfig)>,
) -> Result<LifespanEstimate, LifespanError> {
    let thm1 = super::sufficient_t_thm1(phi, gamma, params, calibration.c_thm1_for(gamma)?)?;
    let thm2 = super::sufficient_t_thm2(phi, params, calibration.c_thm2)?;
    let necessary = super::necessary_t(phi, params, calibration.gamma1, NecessaryForm::Exact)?;
    let (num, tol) = match numeric {
        Some((table, cfg)) => (Some(numeric_lifespan_with(table, phi, params, cfg)?), cfg.rel_width),
        None => (None, 0.0),
    };
    Ok(LifespanEstimate::new(thm1, thm2, necessary, num, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::scalar_blow_up;

    #[test]
    fn homogeneous_lifespan_matches_the_scalar_blow_up() {
        let (a, c) = (0.5, 1.0);
        let params = FractionalParams::new(1, a, 2.0, false).unwrap();
        let blow = scalar_blow_up(c, a, 2.0, 5.0, 20_000).unwrap();
        let phi = RadialProfile::constant(1).unwrap().scaled(c);
        let cfg = NumericConfig { points: 8, half_width: 4.0, t_start: 0.05, ..NumericConfig::default() };
        let out = numeric_lifespan(&phi, &params, &cfg).unwrap();
        assert!(out.rel_width() <= 0.05 && !out.low_confidence, "{out:?}");
        assert!((out.t() / blow.time - 1.0).abs() < 0.1, "{out:?} vs {blow:?}");
    }

    #[test]
    fn tiny_data_is_solvable_on_every_probe() {
        let params = FractionalParams::fujita(1, 0.5).unwrap();
        let phi = RadialProfile::gaussian(1, 1.0).unwrap().scaled(1e-4);
        let cfg = NumericConfig { t_max: 10.0, ..NumericConfig::default() };
        let out = numeric_lifespan(&phi, &params, &cfg).unwrap();
        assert!(out.is_unbounded() && out.t().is_infinite());
    }

    #[test]
    fn status_flags_inversions() {
        let num = NumericLifespan { lo: 1.0, hi: 1.04, probes: 5, low_confidence: false };
        let ok = LifespanEstimate::new(TimeBound::Finite(-1.0), TimeBound::Zero, TimeBound::Finite(2.0), Some(num), 0.05);
        assert_eq!(ok.status, Status::Consistent);
        assert_eq!(ok.t_sufficient, TimeBound::Finite(-1.0));
        let bad = LifespanEstimate::new(TimeBound::Finite(1.0), TimeBound::Zero, TimeBound::Finite(2.0), Some(num), 0.05);
        assert_eq!(bad.status, Status::Inverted);
        let crossed = LifespanEstimate::new(TimeBound::Finite(1.0), TimeBound::Zero, TimeBound::Finite(0.5), None, 0.0);
        assert_eq!(crossed.status, Status::Inverted);
    }

    #[test]
    fn config_validation_lists_every_problem() {
        let cfg = NumericConfig { steps: 1, t_min: 0.0, ..NumericConfig::default() };
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("steps") && msg.contains("t_min"), "{msg}");
    }
}
