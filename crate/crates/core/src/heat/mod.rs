//! Heat kernel, its radial bound, and the periodic heat semigroup on a
//! uniform grid of cell centres in `[-L, L)^N`, `N` in {1, 2}.

mod grid;
mod profile;
mod radial;
mod snapshot;
mod spectral;

pub use grid::SpatialGrid;
pub use profile::{unit_ball_volume, OriginLaw, RadialProfile, Shape, TailLaw};
pub use radial::radial_heat;
pub use snapshot::{read_snapshot, write_snapshot};
pub use spectral::Spectral;

use crate::scalar::Real;

#[derive(Debug, thiserror::Error)]
pub enum HeatError {
    #[error("dimension {0} unsupported (1 or 2)")]
    Dimension(usize),
    #[error("grid needs at least 8 points per axis, got {0}")]
    TooFewPoints(usize),
    #[error("half width must be positive")]
    HalfWidth,
    #[error("time must be nonnegative")]
    NegativeTime,
    #[error("time must be positive")]
    NonPositiveTime,
    #[error("profile: {0}")]
    Profile(String),
    #[error("grids differ in shape")]
    Shape,
    #[error("snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Gaussian `G_t(x) = (4 pi t)^(-N/2) exp(-|x|^2 / 4t)`, `N = x.len()`.
pub fn gauss_kernel<T: Real>(t: T, x: &[T]) -> Result<T, HeatError> {
    if !(t > T::zero()) {
        return Err(HeatError::NonPositiveTime);
    }
    let r2: T = x.iter().map(|&c| c * c).sum();
    let n = T::of(x.len() as f64);
    Ok((T::of(4.0) * T::PI() * t).powf(-n / T::of(2.0)) * (-r2 / (T::of(4.0) * t)).exp())
}

/// Radial majorant `h_t(r) = t^(-N/2) (1 + t^(-1/2) r)^(-N-2)`.
pub fn ht_bound<T: Real>(t: T, r: T, dim: usize) -> Result<T, HeatError> {
    if !(t > T::zero()) {
        return Err(HeatError::NonPositiveTime);
    }
    let n = T::of(dim as f64);
    Ok(t.powf(-n / T::of(2.0)) * (T::one() + r / t.sqrt()).powf(-n - T::of(2.0)))
}

/// `e^{t Delta} f` by exact multiplication with `exp(-|xi|^2 t)`.
pub fn heat_apply<T: Real>(t: T, f: &SpatialGrid<T>) -> Result<SpatialGrid<T>, HeatError> {
    if t < T::zero() {
        return Err(HeatError::NegativeTime);
    }
    let sp = Spectral::for_grid(f)?;
    f.with_values(sp.apply_classes(&f.values, &sp.heat_symbol(t)))
}

/// Periodised Gaussian at offset `d` along one axis of period `2L`.
fn periodic_gauss_1d(t: f64, d: f64, period: f64) -> f64 {
    let reach = ((60.0 * t).sqrt() / period).ceil() as i64 + 1;
    let norm = (4.0 * std::f64::consts::PI * t).sqrt();
    (-reach..=reach)
        .map(|m| {
            let y = d + period * m as f64;
            (-y * y / (4.0 * t)).exp()
        })
        .sum::<f64>()
        / norm
}

/// `e^{t Delta} f` by direct quadrature against the periodised Gaussian;
/// `O(M^(2N))`, intended as a reference for small grids.
pub fn heat_apply_dense<T: Real>(t: T, f: &SpatialGrid<T>) -> Result<SpatialGrid<T>, HeatError> {
    if t < T::zero() {
        return Err(HeatError::NegativeTime);
    }
    if t == T::zero() {
        return Ok(f.clone());
    }
    let tf = t.f64();
    let m = f.points;
    let h = f.spacing().f64();
    let period = 2.0 * f.half_width.f64();
    let k1: Vec<f64> = (0..m).map(|d| periodic_gauss_1d(tf, d as f64 * h, period) * h).collect();
    let idx = |a: usize, b: usize| if a >= b { a - b } else { b - a };
    let mut out = vec![T::zero(); f.len()];
    if f.dim == 1 {
        for i in 0..m {
            let s: f64 = (0..m).map(|j| k1[idx(i, j)] * f.values[j].f64()).sum();
            out[i] = T::of(s);
        }
    } else {
        for i in 0..m * m {
            let (i0, i1) = (i / m, i % m);
            let mut s = 0.0;
            for j in 0..m * m {
                let (j0, j1) = (j / m, j % m);
                s += k1[idx(i0, j0)] * k1[idx(i1, j1)] * f.values[j].f64();
            }
            out[i] = T::of(s);
        }
    }
    f.with_values(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bump(dim: usize, m: usize) -> SpatialGrid<f64> {
        SpatialGrid::from_fn(dim, 4.0, m, |x| {
            let r2: f64 = x.iter().map(|c| c * c).sum();
            (-r2).exp() + 0.3 * (-(x[0] - 1.0).powi(2) * 4.0).exp()
        })
        .unwrap()
    }

    #[test]
    fn fourier_mode_decays_exactly() {
        let l = 3.0_f64;
        for k in [1usize, 2, 5] {
            let xi = std::f64::consts::PI * k as f64 / l;
            let g = SpatialGrid::from_fn(1, l, 64, |x| (xi * x[0]).cos()).unwrap();
            for &t in &[0.01, 0.3, 2.0] {
                let out = heat_apply(t, &g).unwrap();
                let expect = (-xi * xi * t).exp();
                for (i, v) in out.values.iter().enumerate() {
                    assert!((v - expect * (xi * g.coordinate(i)).cos()).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn two_dimensional_mode() {
        let l = 2.0_f64;
        let xi = std::f64::consts::PI / l;
        let g = SpatialGrid::from_fn(2, l, 16, |x| (xi * x[0]).cos() * (2.0 * xi * x[1]).cos()).unwrap();
        let out = heat_apply(0.2, &g).unwrap();
        let decay = (-(xi * xi + 4.0 * xi * xi) * 0.2).exp();
        for (a, b) in out.values.iter().zip(&g.values) {
            assert!((a - decay * b).abs() < 1e-13);
        }
    }

    #[test]
    fn spectral_matches_dense_reference() {
        for dim in [1, 2] {
            let g = bump(dim, if dim == 1 { 64 } else { 24 });
            // Aliasing of the sampled kernel is negligible once t >> h^2.
            for &t in &[0.25, 0.5] {
                let a = heat_apply(t, &g).unwrap();
                let b = heat_apply_dense(t, &g).unwrap();
                assert!(a.sup_distance(&b) < 1e-8, "dim {dim}, t {t}: {}", a.sup_distance(&b));
            }
        }
    }

    #[test]
    fn mean_preserved() {
        let g = bump(2, 32);
        let out = heat_apply(0.7, &g).unwrap();
        assert!((out.mean() - g.mean()).abs() < 1e-14);
    }

    #[test]
    fn semigroup_property() {
        let g = bump(1, 128);
        let a = heat_apply(0.3, &heat_apply(0.2, &g).unwrap()).unwrap();
        let b = heat_apply(0.5, &g).unwrap();
        assert!(a.sup_distance(&b) < 1e-14);
    }

    #[test]
    fn snapshot_roundtrip_is_bit_exact() {
        let g = bump(2, 8);
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &g, 0.125).unwrap();
        let (h, t) = read_snapshot::<f64, _>(buf.as_slice()).unwrap();
        assert_eq!(t, 0.125);
        assert_eq!(h, g);
    }

    #[test]
    fn kernel_values() {
        assert!((gauss_kernel(1.0_f64 / (4.0 * std::f64::consts::PI), &[0.0]).unwrap() - 1.0).abs() < 1e-15);
        let v = gauss_kernel(1.0_f64, &[2.0, 0.0]).unwrap();
        assert!((v - (-1.0_f64).exp() / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!((ht_bound(4.0_f64, 2.0, 1).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(ht_bound(1.0_f64, 0.0, 2).unwrap(), 1.0);
        assert!(gauss_kernel(0.0_f64, &[1.0]).is_err());
        assert!(ht_bound(-1.0_f64, 1.0, 1).is_err());
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(SpatialGrid::<f64>::zeros(3, 1.0, 16).is_err());
        assert!(SpatialGrid::<f64>::zeros(1, 1.0, 4).is_err());
        assert!(heat_apply(-1.0, &bump(1, 16)).is_err());
    }

    #[test]
    fn single_precision_heat() {
        let g = SpatialGrid::<f32>::from_fn(1, 4.0, 32, |x| (-x[0] * x[0]).exp()).unwrap();
        let out = heat_apply(0.5_f32, &g).unwrap();
        assert!((out.mean() - g.mean()).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn max_principle(t in 0.001_f64..5.0, seed in 0u64..1000) {
            let g = SpatialGrid::from_fn(1, 10.0, 256, |x| {
                let c = (seed as f64 * 0.37).sin() * 3.0;
                (-(x[0] - c).powi(2)).exp()
            }).unwrap();
            let out = heat_apply(t, &g).unwrap();
            // Bounded by the datum's sup 1, not by its sample max: the spectral
            // flow evolves the trigonometric interpolant.
            prop_assert!(out.values.iter().all(|&v| v <= 1.0 + 1e-12 && v >= -1e-12));
        }

        #[test]
        fn kernel_below_radial_bound(t in 1e-4_f64..1e4, r in 0.0_f64..1e3, dim in 1usize..3) {
            // sup_y exp(-y^2/4) (1 + y)^(N+2) is below 40 for N <= 2.
            let x = [r, 0.0];
            let ratio = gauss_kernel(t, &x[..dim]).unwrap() / ht_bound(t, r, dim).unwrap();
            prop_assert!(ratio <= 40.0);
        }
    }
}
