use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{HeatError, SpatialGrid};
use crate::scalar::Real;

/// FFT engine for one grid shape. Modes are grouped by `|xi|^2` so that
/// radial symbols are evaluated once per distinct modulus.
#[derive(Clone)]
pub struct Spectral<T: Real> {
    pub dim: usize,
    pub points: usize,
    pub half_width: T,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
    /// Distinct `|xi|^2`, increasing; `moduli[0] = 0`.
    pub moduli: Vec<T>,
    /// Class of each flat mode index.
    pub classes: Vec<usize>,
}

impl<T: Real> std::fmt::Debug for Spectral<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral")
            .field("dim", &self.dim)
            .field("points", &self.points)
            .field("moduli", &self.moduli.len())
            .finish()
    }
}

impl<T: Real> Spectral<T> {
    pub fn new(dim: usize, half_width: T, points: usize) -> Result<Self, HeatError> {
        SpatialGrid::<T>::zeros(dim, half_width, points)?;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(points);
        let inv = planner.plan_fft_inverse(points);
        let m = points as i64;
        let wave = |k: usize| -> i64 {
            let k = k as i64;
            if k <= m / 2 { k } else { k - m }
        };
        let total = points.pow(dim as u32);
        let mut ints = Vec::with_capacity(total);
        for idx in 0..total {
            let s = if dim == 1 {
                wave(idx).pow(2)
            } else {
                wave(idx / points).pow(2) + wave(idx % points).pow(2)
            };
            ints.push(s);
        }
        let mut distinct: Vec<i64> = ints.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let unit = (T::PI() / half_width).powi(2);
        let moduli = distinct.iter().map(|&s| unit * T::of(s as f64)).collect();
        let classes = ints.iter().map(|s| distinct.binary_search(s).expect("present")).collect();
        Ok(Self { dim, points, half_width, fwd, inv, moduli, classes })
    }

    pub fn for_grid(grid: &SpatialGrid<T>) -> Result<Self, HeatError> {
        Self::new(grid.dim, grid.half_width, grid.points)
    }

    fn transform(&self, data: &mut [Complex<T>], plan: &Arc<dyn Fft<T>>) {
        let m = self.points;
        plan.process(data);
        if self.dim == 2 {
            let mut col = vec![Complex::new(T::zero(), T::zero()); m];
            for j in 0..m {
                for i in 0..m {
                    col[i] = data[i * m + j];
                }
                plan.process(&mut col);
                for i in 0..m {
                    data[i * m + j] = col[i];
                }
            }
        }
    }

    /// Discrete Fourier coefficients (unnormalised). Grid phases are
    /// irrelevant because only radial multipliers are applied.
    pub fn forward(&self, values: &[T]) -> Vec<Complex<T>> {
        let mut data: Vec<Complex<T>> = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.transform(&mut data, &self.fwd);
        data
    }

    /// Inverse of [`Self::forward`], real part.
    pub fn inverse(&self, mut data: Vec<Complex<T>>) -> Vec<T> {
        self.transform(&mut data, &self.inv);
        let scale = T::one() / T::of(data.len() as f64);
        data.into_iter().map(|c| c.re * scale).collect()
    }

    /// Multiplies each mode by `symbol[class]`.
    pub fn apply_classes(&self, values: &[T], symbol: &[T]) -> Vec<T> {
        let mut data = self.forward(values);
        for (c, &k) in data.iter_mut().zip(&self.classes) {
            *c = *c * symbol[k];
        }
        self.inverse(data)
    }

    pub fn heat_symbol(&self, t: T) -> Vec<T> {
        self.moduli.iter().map(|&k2| (-k2 * t).exp()).collect()
    }
}

