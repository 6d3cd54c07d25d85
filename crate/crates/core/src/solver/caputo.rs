use rustfft::num_complex::Complex;

use super::grid::TimeGrid;
use super::picard::Trajectory;
use super::{check_params, SolverError};
use crate::heat::{SpatialGrid, Spectral};
use crate::scalar::Real;
use crate::special::gamma;
use crate::subordination::FractionalParams;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct L1Config {
    pub blow_up_threshold: f64,
    /// Largest admissible `sup u_k / sup u_{k-1}` in one explicit step.
    pub growth_cap: f64,
    pub source_scale: f64,
}

impl Default for L1Config {
    fn default() -> Self {
        Self { blow_up_threshold: 1e12, growth_cap: 1e3, source_scale: 1.0 }
    }
}

pub fn caputo_l1_solve<T: Real>(
    phi: &SpatialGrid<T>,
    params: &FractionalParams,
    grid: &TimeGrid,
) -> Result<Trajectory<T>, SolverError> {
    caputo_l1_solve_with(phi, params, grid, &L1Config::default())
}

/// L1 discretisation of `D_t^alpha u = Delta u + |u|^(p-1) u`: implicit in the
/// Laplacian mode by mode, explicit in the source.
pub fn caputo_l1_solve_with<T: Real>(
    phi: &SpatialGrid<T>,
    params: &FractionalParams,
    grid: &TimeGrid,
    config: &L1Config,
) -> Result<Trajectory<T>, SolverError> {
    check_params(params, grid, phi.dim)?;
    let a = params.alpha;
    let sp = Spectral::for_grid(phi)?;
    let n = grid.steps();
    let t = &grid.nodes;
    let g = gamma(2.0 - a);
    let p = T::of(params.p);
    let scale = T::of(config.source_scale);
    let moduli: Vec<T> = sp.classes.iter().map(|&c| sp.moduli[c]).collect();

    let mut states = vec![phi.clone()];
    let mut hat_prev = sp.forward(&phi.values);
    let mut jumps: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    let mut blow_up = None;
    for k in 1..=n {
        let b = |j: usize| -> f64 {
            ((t[k] - t[j]).powf(1.0 - a) - (t[k] - t[j + 1]).powf(1.0 - a)) / (g * (t[j + 1] - t[j]))
        };
        let prev = states.last().expect("nonempty");
        let f: Vec<T> = prev.values.iter().map(|&v| scale * v.abs().powf(p - T::one()) * v).collect();
        let mut rhs = sp.forward(&f);
        let bl = T::of(b(k - 1));
        for (r, &h) in rhs.iter_mut().zip(&hat_prev) {
            *r = *r + h * bl;
        }
        for (j, d) in jumps.iter().enumerate() {
            let bj = T::of(b(j));
            for (r, &dj) in rhs.iter_mut().zip(d) {
                *r = *r - dj * bj;
            }
        }
        let hat: Vec<Complex<T>> = rhs.iter().zip(&moduli).map(|(&r, &k2)| r / (bl + k2)).collect();
        let state = SpatialGrid { values: sp.inverse(hat.clone()), ..phi.clone() };
        let sup = state.sup_norm().f64();
        if !sup.is_finite() || sup > config.blow_up_threshold {
            blow_up = Some(k);
            break;
        }
        let before = prev.sup_norm().f64();
        if before > 0.0 && sup / before > config.growth_cap {
            return Err(SolverError::StepRejected { step: k, growth: sup / before, cap: config.growth_cap });
        }
        jumps.push(hat.iter().zip(&hat_prev).map(|(&x, &y)| x - y).collect());
        hat_prev = hat;
        states.push(state);
    }
    Ok(Trajectory::from_states(grid.clone(), states, blow_up))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::mittag_leffler;

    #[test]
    fn zero_data_stays_zero() {
        let p = FractionalParams::fujita(1, 0.5).unwrap();
        let grid = TimeGrid::graded(1.0, 20, 0.5).unwrap();
        let phi = SpatialGrid::<f64>::zeros(1, 4.0, 16).unwrap();
        let out = caputo_l1_solve(&phi, &p, &grid).unwrap();
        assert_eq!(out.sup(), 0.0);
        assert_eq!(out.states.len(), 21);
    }

    #[test]
    fn linear_mode_matches_mittag_leffler() {
        let a = 0.6;
        let p = FractionalParams::fujita(1, a).unwrap();
        let xi = std::f64::consts::PI / 4.0;
        let phi = SpatialGrid::from_fn(1, 8.0, 32, |x| (xi * x[0]).cos()).unwrap();
        let cfg = L1Config { source_scale: 0.0, ..L1Config::default() };
        let mut errs = Vec::new();
        for steps in [100, 200, 400] {
            let grid = TimeGrid::graded(2.0, steps, a).unwrap();
            let out = caputo_l1_solve_with(&phi, &p, &grid, &cfg).unwrap();
            let mut err = 0.0_f64;
            for (k, s) in out.states.iter().enumerate() {
                let e = mittag_leffler(a, -xi * xi * grid.powers[k]).unwrap();
                let want = phi.with_values(phi.values.iter().map(|v| v * e).collect()).unwrap();
                err = err.max(s.sup_distance(&want));
            }
            errs.push(err);
        }
        assert!(errs[2] < 1e-3, "{errs:?}");
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
    }

    #[test]
    fn growth_cap_rejects_steps() {
        let p = FractionalParams::fujita(1, 0.5).unwrap();
        let grid = TimeGrid::uniform(10.0, 4, 0.5).unwrap();
        let phi = SpatialGrid::from_fn(1, 4.0, 16, |_| 20.0).unwrap();
        let cfg = L1Config { growth_cap: 2.0, ..L1Config::default() };
        assert!(matches!(caputo_l1_solve_with(&phi, &p, &grid, &cfg), Err(SolverError::StepRejected { .. })));
    }
}
