use rayon::prelude::*;

use super::{
    necessary_t_in, numeric_lifespan_with, sufficient_t_thm1, sufficient_t_thm2, BallMass, Calibration,
    LifespanError, LifespanEstimate, NecessaryForm, NumericConfig, ProbeRange, Regime, ScalingFit, TimeBound,
};
use crate::heat::RadialProfile;
use crate::solver::LaplaceTable;
use crate::subordination::FractionalParams;

pub const DEFAULT_ALPHAS: [f64; 5] = [0.5, 0.7, 0.9, 0.95, 0.99];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Fbeta(f64),
    /// `(1 + |x|)^(-N)`.
    LeeNi,
    /// `exp(-(|x| / width)^2)`.
    Gaussian(f64),
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Fbeta(_) => "f_beta",
            Family::LeeNi => "phi_A",
            Family::Gaussian(_) => "gaussian",
        }
    }

    /// `beta`, the decay exponent `A = N`, or the width.
    pub fn parameter(self, dim: usize) -> f64 {
        match self {
            Family::Fbeta(b) => b,
            Family::LeeNi => dim as f64,
            Family::Gaussian(w) => w,
        }
    }

    pub fn profile(self, dim: usize) -> Result<RadialProfile, LifespanError> {
        Ok(match self {
            Family::Fbeta(b) => RadialProfile::fbeta(dim, b)?,
            Family::LeeNi => RadialProfile::lee_ni(dim)?,
            Family::Gaussian(w) => RadialProfile::gaussian(dim, w)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub dim: usize,
    pub kappas: Vec<f64>,
    pub alphas: Vec<f64>,
    /// Weight `gamma` of the first sufficient condition.
    pub gamma: f64,
    /// Numeric brackets are computed only with a config.
    pub numeric: Option<NumericConfig>,
}

impl SweepSpec {
    /// `count` values log-spaced over `decades`, starting at `kappa_min`.
    pub fn log_kappas(kappa_min: f64, decades: f64, count: usize) -> Vec<f64> {
        (0..count)
            .map(|j| kappa_min * 10f64.powf(decades * j as f64 / (count.max(2) - 1) as f64))
            .collect()
    }

    /// Eight values over 1.5 decades and the default `alpha` set.
    pub fn with_defaults(family: Family, dim: usize, kappa_min: f64, gamma: f64) -> Self {
        Self { family, dim, kappas: Self::log_kappas(kappa_min, 1.5, 8), alphas: DEFAULT_ALPHAS.to_vec(), gamma, numeric: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub family: &'static str,
    pub beta_or_a: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub estimate: LifespanEstimate,
}

/// `(parameter, ln T)` for a fit; see [`super::fit_scaling`].
pub type SweepPoint = (f64, f64);

#[derive(Clone, Debug, PartialEq)]
pub struct FitRow {
    pub regime: Regime,
    pub label: String,
    pub hypothesized: f64,
    pub fit: ScalingFit,
}

/// Every `(alpha, kappa)` of `spec`, alpha-major and kappa-minor; points run
/// in parallel and come back in that order.
pub fn run_sweep(spec: &SweepSpec, calibration: &Calibration) -> Result<Vec<SweepRow>, LifespanError> {
    if spec.kappas.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
        return Err(LifespanError::Input("kappas must be positive and finite".into()));
    }
    let c1 = calibration.c_thm1_for(spec.gamma)?;
    let base = spec.family.profile(spec.dim)?;
    let params: Vec<FractionalParams> =
        spec.alphas.iter().map(|&a| FractionalParams::fujita(spec.dim, a)).collect::<Result<_, _>>()?;
    let tables: Option<Vec<LaplaceTable>> = match &spec.numeric {
        Some(cfg) => {
            cfg.validate()?;
            Some(
                spec.alphas
                    .par_iter()
                    .map(|&a| LaplaceTable::new(a, cfg.solver.theta_tol, cfg.solver.theta_max_nodes))
                    .collect::<Result<_, _>>()?,
            )
        }
        None => None,
    };
    let masses: Vec<BallMass> =
        spec.kappas.par_iter().map(|&k| BallMass::new(&base.scaled(k))).collect::<Result<_, _>>()?;
    let jobs: Vec<(usize, usize)> =
        (0..spec.alphas.len()).flat_map(|i| (0..spec.kappas.len()).map(move |j| (i, j))).collect();
    jobs.par_iter()
        .map(|&(i, j)| {
            let p = &params[i];
            let phi = base.scaled(spec.kappas[j]);
            let thm1 = sufficient_t_thm1(&phi, spec.gamma, p, c1)?;
            let thm2 = sufficient_t_thm2(&phi, p, calibration.c_thm2)?;
            let nec = necessary_t_in(&masses[j], p, calibration.gamma1, NecessaryForm::Exact, &ProbeRange::necessary(p))?;
            let (num, tol) = match (&spec.numeric, &tables) {
                (Some(cfg), Some(t)) => (Some(numeric_lifespan_with(&t[i], &phi, p, cfg)?), cfg.rel_width),
                _ => (None, 0.0),
            };
            Ok(SweepRow {
                family: spec.family.label(),
                beta_or_a: spec.family.parameter(spec.dim),
                kappa: spec.kappas[j],
                alpha: spec.alphas[i],
                estimate: LifespanEstimate::new(thm1, thm2, nec, num, tol),
            })
        })
        .collect()
}

/// Number of adjacent pairs, along kappa at fixed alpha, where a bound grows with kappa.
pub fn kappa_violations(rows: &[SweepRow], bound: impl Fn(&LifespanEstimate) -> f64) -> usize {
    let mut count = 0;
    for pair in rows.windows(2) {
        if pair[0].alpha == pair[1].alpha && pair[1].kappa > pair[0].kappa {
            let (a, b) = (bound(&pair[0].estimate), bound(&pair[1].estimate));
            if b > a {
                count += 1;
            }
        }
    }
    count
}

/// Rows at one `alpha` as `(kappa, ln T)` for finite bounds only.
pub fn kappa_series(rows: &[SweepRow], alpha: f64, bound: impl Fn(&LifespanEstimate) -> TimeBound) -> Vec<SweepPoint> {
    rows.iter()
        .filter(|r| r.alpha == alpha)
        .filter_map(|r| {
            let b = bound(&r.estimate);
            b.is_finite().then(|| (r.kappa, b.ln_t()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_grid_spans_the_decades() {
        let k = SweepSpec::log_kappas(0.1, 1.5, 8);
        assert_eq!(k.len(), 8);
        assert!((k[0] - 0.1).abs() < 1e-15 && (k[7] / 10f64.powf(0.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_rows_are_ordered_and_monotone() {
        let cal = Calibration::manual(vec![1.5], vec![1.0], 1.0, 1.0, 1.0).unwrap();
        let spec = SweepSpec {
            family: Family::Fbeta(1.0),
            dim: 1,
            kappas: SweepSpec::log_kappas(2.0, 1.0, 4),
            alphas: vec![0.5, 0.9],
            gamma: 1.5,
            numeric: None,
        };
        let rows = run_sweep(&spec, &cal).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows[..4].iter().all(|r| r.alpha == 0.5) && rows[4..].iter().all(|r| r.alpha == 0.9));
        assert!(rows.windows(2).take(3).all(|w| w[1].kappa > w[0].kappa));
        assert_eq!(kappa_violations(&rows, |e| e.t_sufficient_thm1.ln_t()), 0);
        assert_eq!(kappa_violations(&rows, |e| e.t_sufficient_thm2.ln_t()), 0);
        assert_eq!(kappa_violations(&rows, |e| e.t_necessary.ln_t()), 0);
        assert_eq!(kappa_series(&rows, 0.5, |e| e.t_sufficient_thm1).len(), 4);
    }
}
