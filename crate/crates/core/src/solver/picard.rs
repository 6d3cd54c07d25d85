use rustfft::num_complex::Complex;

use super::grid::TimeGrid;
use super::kernel::{DuhamelTables, LaplaceTable, ProductRule};
use super::{check_params, SolverError};
use crate::heat::{SpatialGrid, Spectral};
use crate::scalar::Real;
use crate::subordination::FractionalParams;
use crate::zygmund::{grid_local_norm, loge};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub steps: usize,
    pub max_iter: usize,
    /// Relative sup-node distance between successive iterates.
    pub tol: f64,
    pub rule: ProductRule,
    pub theta_tol: f64,
    pub theta_max_nodes: usize,
    pub blow_up_threshold: f64,
    /// Multiplier of `|u|^(p-1) u`; zero gives the linear problem.
    pub source_scale: f64,
    pub budget: Option<BudgetSpec>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            steps: 64,
            max_iter: 400,
            tol: 1e-10,
            rule: ProductRule::default(),
            theta_tol: 1e-8,
            theta_max_nodes: 20_000,
            blow_up_threshold: 1e12,
            source_scale: 1.0,
            budget: None,
        }
    }
}

/// Exponents of the weighted norm
/// `sup_t t^{(alpha N/2)(1-1/p)} (log(e+1/t))^{gamma - gamma_tilde/p} ||u(t)||_{p,gamma_tilde;T^{alpha/2}}`
/// and the radius factor `c1` of `K = c1 alpha^{N/2} (1-alpha)^{N/2} (log(e+1/T))^gamma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetSpec {
    pub gamma: f64,
    pub gamma_tilde: f64,
    pub c1: f64,
}

impl BudgetSpec {
    pub fn radius(&self, params: &FractionalParams, horizon: f64) -> f64 {
        let n = params.dim as f64;
        let a = params.alpha;
        self.c1 * a.powf(n / 2.0) * (1.0 - a).powf(n / 2.0) * loge(horizon).powf(self.gamma)
    }

    pub fn weighted_norm<T: Real>(&self, params: &FractionalParams, grid: &TimeGrid, k: usize, u: &SpatialGrid<T>) -> f64 {
        let t = grid.nodes[k];
        if t == 0.0 {
            return 0.0;
        }
        let (n, a, p) = (params.dim as f64, params.alpha, params.p);
        let rho = grid.horizon.powf(a / 2.0);
        let w = t.powf(a * n / 2.0 * (1.0 - 1.0 / p)) * loge(t).powf(self.gamma - self.gamma_tilde / p);
        w * grid_local_norm(u, p, self.gamma_tilde, rho)
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    pub grid: TimeGrid,
    /// One state per retained node; shorter than the grid after blow-up.
    pub states: Vec<SpatialGrid<T>>,
    pub sup_history: Vec<f64>,
    /// Weighted norm per node when a [`BudgetSpec`] is given, else empty.
    pub norm_history: Vec<f64>,
    /// Node-wise sup distance of the last Picard step, relative to the global sup.
    pub residual_history: Vec<f64>,
    /// First node at which the sup exceeded the threshold or turned non-finite.
    pub blow_up: Option<usize>,
}

impl<T: Real> Trajectory<T> {
    pub(crate) fn from_states(grid: TimeGrid, states: Vec<SpatialGrid<T>>, blow_up: Option<usize>) -> Self {
        let sup_history = states.iter().map(|s| s.sup_norm().f64()).collect();
        Self { grid, states, sup_history, norm_history: Vec::new(), residual_history: Vec::new(), blow_up }
    }

    pub fn sup(&self) -> f64 {
        self.sup_history.iter().fold(0.0, |m: f64, &v| m.max(v))
    }

    pub fn last(&self) -> &SpatialGrid<T> {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn times(&self) -> &[f64] {
        &self.grid.nodes[..self.states.len()]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractionBudget {
    /// Ball radius `K`; infinite without a [`BudgetSpec`].
    pub radius: f64,
    /// Largest ratio of successive iterate distances.
    pub c_map: f64,
    pub ratios: Vec<f64>,
    /// Every successive ratio below one.
    pub contracting: bool,
    /// Largest weighted norm over all iterates and nodes.
    pub max_weighted_norm: Option<f64>,
    /// Contracting, and every iterate stays in the ball of radius `K`.
    pub satisfied: bool,
    pub kappa_theoretical: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct PicardOutcome<T> {
    pub trajectory: Trajectory<T>,
    pub budget: ContractionBudget,
    pub distances: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// The discrete map `Phi` on a fixed time grid and initial datum.
pub struct DuhamelMap<T: Real> {
    pub grid: TimeGrid,
    pub params: FractionalParams,
    spectral: Spectral<T>,
    template: SpatialGrid<T>,
    classes: usize,
    /// [`DuhamelTables::source`] converted to `T`.
    source: Vec<Vec<T>>,
    source_scale: T,
    linear: Vec<Vec<Complex<T>>>,
}

impl<T: Real> DuhamelMap<T> {
    pub fn new(
        table: &LaplaceTable,
        phi: &SpatialGrid<T>,
        params: &FractionalParams,
        grid: &TimeGrid,
        rule: ProductRule,
        source_scale: f64,
    ) -> Result<Self, SolverError> {
        check_params(params, grid, phi.dim)?;
        if (table.alpha - params.alpha).abs() > 0.0 {
            return Err(SolverError::Config("Laplace table built for a different alpha".into()));
        }
        let spectral = Spectral::for_grid(phi)?;
        let moduli: Vec<f64> = spectral.moduli.iter().map(|m| m.f64()).collect();
        let tables = DuhamelTables::new(table, grid, &moduli, rule);
        let phi_hat = spectral.forward(&phi.values);
        let linear = tables
            .propagator
            .iter()
            .map(|row| phi_hat.iter().zip(&spectral.classes).map(|(&c, &k)| c * T::of(row[k])).collect())
            .collect();
        Ok(Self {
            grid: grid.clone(),
            params: *params,
            spectral,
            template: phi.clone(),
            classes: tables.classes,
            source: tables.source.iter().map(|r| r.iter().map(|&c| T::of(c)).collect()).collect(),
            source_scale: T::of(source_scale),
            linear,
        })
    }

    fn state(&self, hat: Vec<Complex<T>>) -> SpatialGrid<T> {
        SpatialGrid { values: self.spectral.inverse(hat), ..self.template.clone() }
    }

    /// `P(t_k) phi` at every node.
    pub fn linear_part(&self) -> Vec<SpatialGrid<T>> {
        self.linear.iter().map(|h| self.state(h.clone())).collect()
    }

    /// `Phi(u)` at every node; `u` must hold one state per node.
    pub fn apply(&self, u: &[SpatialGrid<T>]) -> Result<Vec<SpatialGrid<T>>, SolverError> {
        if u.len() != self.grid.nodes.len() {
            return Err(SolverError::Shape(u.len()));
        }
        let p = T::of(self.params.p);
        let mut sources = Vec::with_capacity(u.len());
        for (i, s) in u.iter().enumerate() {
            if !s.same_shape(&self.template) {
                return Err(SolverError::Shape(i));
            }
            let f: Vec<T> = s.values.iter().map(|&v| self.source_scale * v.abs().powf(p - T::one()) * v).collect();
            sources.push(self.spectral.forward(&f));
        }
        let nc = self.classes;
        let classes = &self.spectral.classes;
        let out = (0..u.len())
            .map(|k| {
                let mut acc = self.linear[k].clone();
                let row = &self.source[k];
                for (i, f) in sources.iter().enumerate().take(k + 1) {
                    let c = &row[i * nc..(i + 1) * nc];
                    for ((a, &fv), &cls) in acc.iter_mut().zip(f).zip(classes) {
                        *a = *a + fv * c[cls];
                    }
                }
                self.state(acc)
            })
            .collect();
        Ok(out)
    }

    /// Relative sup-node distance `max_k |u_k - Phi(u)_k| / max_k |u_k|`.
    pub fn residual(&self, u: &[SpatialGrid<T>]) -> Result<f64, SolverError> {
        let image = self.apply(u)?;
        Ok(relative_distance(&image, u).0)
    }
}

/// `(max_k |a_k - b_k| / max_k |a_k|, per-node distances scaled the same way)`.
fn relative_distance<T: Real>(a: &[SpatialGrid<T>], b: &[SpatialGrid<T>]) -> (f64, Vec<f64>) {
    let scale = a.iter().fold(0.0_f64, |m, s| m.max(s.sup_norm().f64()));
    let nodes: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x.sup_distance(y).f64();
            if d == 0.0 { 0.0 } else { d / scale }
        })
        .collect();
    (nodes.iter().fold(0.0, |m: f64, &v| m.max(v)), nodes)
}

fn first_bad<T: Real>(states: &[SpatialGrid<T>], threshold: f64) -> Option<usize> {
    states.iter().position(|s| s.values.iter().any(|v| !v.is_finite() || v.abs().f64() > threshold))
}

/// One application of the Duhamel map with a freshly built kernel.
pub fn duhamel_map<T: Real>(
    u: &Trajectory<T>,
    phi: &SpatialGrid<T>,
    params: &FractionalParams,
    config: &SolverConfig,
) -> Result<Trajectory<T>, SolverError> {
    let table = LaplaceTable::new(params.alpha, config.theta_tol, config.theta_max_nodes)?;
    let map = DuhamelMap::new(&table, phi, params, &u.grid, config.rule, config.source_scale)?;
    let image = map.apply(&u.states)?;
    let bad = first_bad(&image, config.blow_up_threshold);
    let kept = bad.map_or(image.len(), |k| k);
    Ok(Trajectory::from_states(u.grid.clone(), image.into_iter().take(kept).collect(), bad))
}

pub fn residual<T: Real>(
    u: &Trajectory<T>,
    phi: &SpatialGrid<T>,
    params: &FractionalParams,
    config: &SolverConfig,
) -> Result<f64, SolverError> {
    if u.blow_up.is_some() || u.states.len() != u.grid.nodes.len() {
        return Ok(f64::INFINITY);
    }
    let table = LaplaceTable::new(params.alpha, config.theta_tol, config.theta_max_nodes)?;
    DuhamelMap::new(&table, phi, params, &u.grid, config.rule, config.source_scale)?.residual(&u.states)
}

pub fn picard_solve<T: Real>(
    phi: &SpatialGrid<T>,
    params: &FractionalParams,
    grid: &TimeGrid,
    config: &SolverConfig,
) -> Result<PicardOutcome<T>, SolverError> {
    let table = LaplaceTable::new(params.alpha, config.theta_tol, config.theta_max_nodes)?;
    picard_solve_with(&table, phi, params, grid, config)
}

/// Picard iteration from `u^0 = P(.) phi` with a prebuilt Laplace table.
pub fn picard_solve_with<T: Real>(
    table: &LaplaceTable,
    phi: &SpatialGrid<T>,
    params: &FractionalParams,
    grid: &TimeGrid,
    config: &SolverConfig,
) -> Result<PicardOutcome<T>, SolverError> {
    if !(config.tol > 0.0) {
        return Err(SolverError::Config("tolerance must be positive".into()));
    }
    let map = DuhamelMap::new(table, phi, params, grid, config.rule, config.source_scale)?;
    let weighted = |states: &[SpatialGrid<T>]| -> Vec<f64> {
        config.budget.map_or_else(Vec::new, |b| {
            states.iter().enumerate().map(|(k, s)| b.weighted_norm(params, grid, k, s)).collect()
        })
    };
    let mut u = map.linear_part();
    let mut max_norm = weighted(&u).into_iter().fold(0.0_f64, f64::max);
    let mut distances = Vec::new();
    let mut node_dist = vec![0.0; u.len()];
    let mut converged = false;
    let mut blow_up = first_bad(&u, config.blow_up_threshold);
    let mut iterations = 0;
    while blow_up.is_none() && iterations < config.max_iter {
        let next = map.apply(&u)?;
        iterations += 1;
        if let Some(k) = first_bad(&next, config.blow_up_threshold) {
            blow_up = Some(k);
            u = next;
            break;
        }
        let (d, nodes) = relative_distance(&next, &u);
        distances.push(d);
        node_dist = nodes;
        u = next;
        if config.budget.is_some() {
            max_norm = weighted(&u).into_iter().fold(max_norm, f64::max);
        }
        if d < config.tol {
            converged = true;
            break;
        }
    }
    let kept = blow_up.unwrap_or(u.len());
    u.truncate(kept);
    let mut trajectory = Trajectory::from_states(grid.clone(), u, blow_up);
    trajectory.norm_history = weighted(&trajectory.states);
    node_dist.truncate(kept);
    trajectory.residual_history = node_dist;

    let ratios: Vec<f64> = distances
        .windows(2)
        .map(|w| if w[1] == 0.0 { 0.0 } else { w[1] / w[0] })
        .collect();
    let c_map = ratios.iter().fold(0.0, |m: f64, &r| m.max(r));
    let contracting = blow_up.is_none() && ratios.iter().all(|&r| r < 1.0);
    let kappa = config.budget.map(|b| b.radius(params, grid.horizon));
    let max_weighted_norm = config.budget.map(|_| max_norm);
    let radius = kappa.unwrap_or(f64::INFINITY);
    let budget = ContractionBudget {
        radius,
        c_map,
        ratios,
        contracting,
        max_weighted_norm,
        satisfied: contracting && converged && max_weighted_norm.is_none_or(|m| m <= radius),
        kappa_theoretical: kappa,
    };
    Ok(PicardOutcome { trajectory, budget, distances, iterations, converged })
}
