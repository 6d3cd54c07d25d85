use super::gamma::rgamma;
use super::SpecialError;
use crate::quad::{integrate, integrate_to_infinity};
use crate::scalar::Real;

/// Below this `|z|` the power series is summed directly.
const SERIES_LIMIT: f64 = 1.0;

/// `E_alpha(z)` for `0 < alpha <= 1` and real `z <= 0`.
pub fn mittag_leffler<T: Real>(alpha: T, z: T) -> Result<T, SpecialError> {
    let a = alpha.f64();
    if !(a > 0.0 && a <= 1.0) {
        return Err(SpecialError::AlphaOutOfRange(a));
    }
    let zf = z.f64();
    if zf.is_nan() || zf > 0.0 {
        return Err(SpecialError::ArgumentOutOfRange(zf));
    }
    let x = -zf;
    let v = if 1.0 - a < 1e-12 {
        (-x).exp()
    } else if x <= SERIES_LIMIT {
        ml_series(a, x)
    } else {
        ml_integral(a, x)
    };
    Ok(T::of(v))
}

/// `sum_n (-x)^n / Gamma(alpha n + 1)`.
pub(crate) fn ml_series(alpha: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for n in 0..2000 {
        let term = pow * rgamma(alpha * n as f64 + 1.0);
        sum += term;
        if n > 4 && term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
        pow *= -x;
    }
    sum
}

/// Spectral form `sin(a pi)/(a pi) int_0^inf exp(-(u x)^(1/a)) / (u^2 + 2u cos(a pi) + 1) du`.
pub(crate) fn ml_integral(alpha: f64, x: f64) -> f64 {
    let api = alpha * std::f64::consts::PI;
    let c = api.cos();
    let inv = 1.0 / alpha;
    let f = |u: f64| (-(u * x).powf(inv)).exp() / (u * u + 2.0 * u * c + 1.0);
    let b = (8.0 / x).min(1.0);
    let mut v = integrate(f, 0.0, b, 0.0, 1e-15, 400).value;
    if b < 1.0 {
        v += integrate(f, b, 1.0, 0.0, 1e-15, 400).value;
    }
    v += integrate_to_infinity(f, 1.0, 0.0, 1e-15, 400).value;
    api.sin() / api * v
}
