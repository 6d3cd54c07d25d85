use super::HeatError;
use crate::scalar::Real;

/// Values at the cell centres `x_i = -L + (i + 1/2) h`, `h = 2L/M`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialGrid<T> {
    pub dim: usize,
    pub half_width: T,
    pub points: usize,
    pub values: Vec<T>,
}

impl<T: Real> SpatialGrid<T> {
    pub fn zeros(dim: usize, half_width: T, points: usize) -> Result<Self, HeatError> {
        if dim != 1 && dim != 2 {
            return Err(HeatError::Dimension(dim));
        }
        if points < 8 {
            return Err(HeatError::TooFewPoints(points));
        }
        if !(half_width > T::zero()) {
            return Err(HeatError::HalfWidth);
        }
        Ok(Self { dim, half_width, points, values: vec![T::zero(); points.pow(dim as u32)] })
    }

    /// Samples `f(x)` with `x` of length `dim`.
    pub fn from_fn<F: Fn(&[T]) -> T>(
        dim: usize,
        half_width: T,
        points: usize,
        f: F,
    ) -> Result<Self, HeatError> {
        let mut g = Self::zeros(dim, half_width, points)?;
        let mut x = [T::zero(); 2];
        for idx in 0..g.values.len() {
            g.fill_point(idx, &mut x);
            g.values[idx] = f(&x[..dim]);
        }
        Ok(g)
    }

    pub fn with_values(&self, values: Vec<T>) -> Result<Self, HeatError> {
        if values.len() != self.values.len() {
            return Err(HeatError::Shape);
        }
        Ok(Self { values, ..*self })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> T {
        T::of(2.0) * self.half_width / T::of(self.points as f64)
    }

    pub fn coordinate(&self, i: usize) -> T {
        -self.half_width + (T::of(i as f64) + T::of(0.5)) * self.spacing()
    }

    pub fn fill_point(&self, idx: usize, x: &mut [T; 2]) {
        if self.dim == 1 {
            x[0] = self.coordinate(idx);
        } else {
            x[0] = self.coordinate(idx / self.points);
            x[1] = self.coordinate(idx % self.points);
        }
    }

    pub fn radius(&self, idx: usize) -> T {
        let mut x = [T::zero(); 2];
        self.fill_point(idx, &mut x);
        x[..self.dim].iter().map(|&c| c * c).sum::<T>().sqrt()
    }

    pub fn cell_volume(&self) -> T {
        self.spacing().powi(self.dim as i32)
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    pub fn integral(&self) -> T {
        self.values.iter().copied().sum::<T>() * self.cell_volume()
    }

    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::of(self.len() as f64)
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points == other.points && self.half_width == other.half_width
    }

    /// `sup |self - other|`.
    pub fn sup_distance(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }
}

