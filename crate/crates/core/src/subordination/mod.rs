//! Subordinated operators
//! `P_alpha(t) = int h_alpha(theta) e^{t^alpha theta Delta} dtheta` and
//! `S_alpha(t) = int theta h_alpha(theta) e^{t^alpha theta Delta} dtheta`,
//! realised through the positive theta rule and the spectral heat semigroup.

mod bound;
mod params;

pub use bound::{verify_semigroup_bound, BoundRow, BoundTable, SemigroupExponents};
pub use params::FractionalParams;

use crate::heat::{HeatError, SpatialGrid, Spectral};
use crate::scalar::Real;
use crate::special::{build_theta_quadrature, SpecialError, ThetaQuadrature};
use crate::zygmund::ZygmundError;

#[derive(Debug, thiserror::Error)]
pub enum SubordinationError {
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Heat(#[from] HeatError),
    #[error(transparent)]
    Zygmund(#[from] ZygmundError),
    #[error("time must be nonnegative")]
    NegativeTime,
    #[error("invalid parameters: {0}")]
    Params(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Weight `h_alpha(theta)`; unit mass.
    P,
    /// Weight `theta h_alpha(theta)`; mass `1/Gamma(1+alpha)`.
    S,
}

#[derive(Clone, Debug)]
pub struct SubordinatedOperator<T> {
    pub alpha: T,
    pub rule: ThetaQuadrature<T>,
}

impl<T: Real> SubordinatedOperator<T> {
    pub fn new(alpha: f64, tol: f64, max_nodes: usize) -> Result<Self, SubordinationError> {
        Ok(Self { alpha: T::of(alpha), rule: build_theta_quadrature(alpha, tol, max_nodes)? })
    }

    pub fn for_params(params: &FractionalParams, tol: f64, max_nodes: usize) -> Result<Self, SubordinationError> {
        Self::new(params.alpha, tol, max_nodes)
    }

    pub fn from_rule(rule: ThetaQuadrature<T>) -> Self {
        Self { alpha: rule.alpha, rule }
    }

    /// Fourier multiplier of `P(t)` or `S(t)` at `|xi|^2 = k2`.
    pub fn symbol(&self, family: Family, t: T, k2: T) -> T {
        let z = k2 * t.powf(self.alpha);
        match family {
            Family::P => self.rule.integrate(|th| (-(th * z)).exp()),
            Family::S => self.rule.integrate(|th| th * (-(th * z)).exp()),
        }
    }

    pub fn symbol_table(&self, family: Family, t: T, spectral: &Spectral<T>) -> Vec<T> {
        spectral.moduli.iter().map(|&k2| self.symbol(family, t, k2)).collect()
    }

    /// `alpha int_a^b tau^(alpha-1) S(tau) dtau` at `|xi|^2 = k2`, in closed form
    /// per node: `(e^{-k2 theta a^alpha} - e^{-k2 theta b^alpha}) / k2`.
    pub fn duhamel_symbol(&self, a: T, b: T, k2: T) -> T {
        let aa = a.powf(self.alpha);
        let ba = b.powf(self.alpha);
        let gap = ba - aa;
        if k2 == T::zero() {
            return self.rule.integrate(|th| th) * gap;
        }
        self.rule.integrate(|th| {
            let z = k2 * th;
            -(-(z * aa)).exp() * (-(z * gap)).exp_m1() / k2
        })
    }

    pub fn apply(&self, family: Family, t: T, u: &SpatialGrid<T>) -> Result<SpatialGrid<T>, SubordinationError> {
        if t < T::zero() {
            return Err(SubordinationError::NegativeTime);
        }
        let sp = Spectral::for_grid(u)?;
        let table = self.symbol_table(family, t, &sp);
        Ok(u.with_values(sp.apply_classes(&u.values, &table))?)
    }

    pub fn apply_p(&self, t: T, u: &SpatialGrid<T>) -> Result<SpatialGrid<T>, SubordinationError> {
        self.apply(Family::P, t, u)
    }

    pub fn apply_s(&self, t: T, u: &SpatialGrid<T>) -> Result<SpatialGrid<T>, SubordinationError> {
        self.apply(Family::S, t, u)
    }
}
