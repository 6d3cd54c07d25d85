use super::gamma::{gamma, ln_gamma};
use super::SpecialError;
use crate::quad::integrate;
use crate::scalar::Real;

/// Probability density of the subordinator `theta`, i.e. the Wright function
/// `M_alpha(theta) = sum_n (-theta)^n / (n! Gamma(1 - alpha - alpha n))`.
///
/// Below `switch_point` the series is summed; above it the positive integral
/// form `theta^(a/(1-a)) / ((1-a) pi) int_0^pi A(u) exp(-A(u) theta^(1/(1-a))) du`
/// is used, which has no cancellation.
#[derive(Clone, Copy, Debug)]
pub struct WrightDensity<T> {
    pub alpha: T,
    pub switch_point: T,
}

impl<T: Real> WrightDensity<T> {
    pub fn new(alpha: T) -> Result<Self, SpecialError> {
        let a = alpha.f64();
        if !(a > 0.0 && a < 1.0) {
            return Err(SpecialError::AlphaOutOfRange(a));
        }
        Ok(Self { alpha, switch_point: T::one() })
    }

    pub fn with_switch_point(mut self, switch_point: T) -> Self {
        self.switch_point = switch_point;
        self
    }

    /// Density at `theta >= 0`; zero for negative arguments.
    pub fn eval(&self, theta: T) -> T {
        let t = theta.f64();
        if t < 0.0 {
            return T::zero();
        }
        let a = self.alpha.f64();
        if t <= self.switch_point.f64() {
            T::of(wright_series(a, t))
        } else {
            T::of(wright_integral(a, t))
        }
    }
}

/// `(1/pi) sum_{n>=1} (-x)^(n-1) / (n-1)! Gamma(a n) sin(pi a n)`.
pub(crate) fn wright_series(a: f64, x: f64) -> f64 {
    let pi = std::f64::consts::PI;
    if x == 0.0 {
        return 1.0 / gamma(1.0 - a);
    }
    let lx = x.ln();
    let mut sum = 0.0;
    for n in 1..4000 {
        let nf = n as f64;
        let lmag = (nf - 1.0) * lx + ln_gamma(a * nf) - ln_gamma(nf);
        let mag = lmag.exp();
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * mag * (pi * a * nf).sin();
        if n > 8 && mag < 1e-18 * sum.abs().max(1e-300) && (nf - 1.0) > x {
            break;
        }
    }
    sum / pi
}

/// Log of the Kanter function `A(u) = (sin(a u)/sin u)^(1/(1-a)) sin((1-a) u)/sin(a u)`.
fn ln_kanter(a: f64, u: f64) -> f64 {
    let b = 1.0 - a;
    (a / b) * (a * u).sin().ln() - u.sin().ln() / b + (b * u).sin().ln()
}

pub(crate) fn wright_integral(a: f64, x: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let b = 1.0 - a;
    let lx = x.ln() / b;
    // The prefactor x^(a/b) stays inside the exponent to avoid inf * 0.
    let pre = a / b * x.ln();
    let f = |u: f64| {
        let la = ln_kanter(a, u);
        let v = (pre + la - (la + lx).exp()).exp();
        if v.is_finite() { v } else { 0.0 }
    };
    let q = integrate(f, 0.0, pi, 0.0, 1e-14, 2000);
    q.value / (b * pi)
}

/// `int_0^inf theta^delta M_alpha(theta) dtheta = Gamma(1+delta)/Gamma(1+alpha delta)` for `delta > -1`.
pub fn wright_moment<T: Real>(alpha: T, delta: T) -> Result<T, SpecialError> {
    let d = delta.f64();
    if !(d > -1.0) {
        return Err(SpecialError::MomentOrder(d));
    }
    let a = alpha.f64();
    if !(a > 0.0 && a <= 1.0) {
        return Err(SpecialError::AlphaOutOfRange(a));
    }
    Ok(T::of((ln_gamma(1.0 + d) - ln_gamma(1.0 + a * d)).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_to_infinity;

    #[test]
    fn half_is_gaussian() {
        let m = WrightDensity::new(0.5_f64).unwrap();
        let mut t = 0.0_f64;
        while t < 12.0 {
            let r = (-t * t / 4.0).exp() / std::f64::consts::PI.sqrt();
            let v = m.eval(t);
            assert!((v - r).abs() < 1e-14 + 1e-11 * r, "theta {t}: {v} vs {r}");
            t += 0.0625;
        }
    }

    #[test]
    fn value_at_origin() {
        for &a in &[0.1_f64, 0.3, 0.7, 0.95] {
            let m = WrightDensity::new(a).unwrap();
            assert!((m.eval(0.0) - 1.0 / gamma(1.0_f64 - a)).abs() < 1e-14);
        }
    }

    #[test]
    fn series_and_integral_agree_on_overlap() {
        for &a in &[0.1_f64, 0.3, 0.5, 0.7, 0.9, 0.99] {
            for &x in &[0.4_f64, 0.8, 1.0, 1.3] {
                // The series is only used where x^(1/(1-a)) is moderate.
                if x.powf(1.0 / (1.0 - a)) > 3.0 {
                    continue;
                }
                let s = wright_series(a, x);
                let i = wright_integral(a, x);
                let scale = s.abs().max(1e-3);
                assert!((s - i).abs() < 1e-11 * scale, "alpha {a}, x {x}: {s} vs {i}");
            }
        }
    }

    #[test]
    fn nonnegative_and_normalised() {
        for &a in &[0.2_f64, 0.5, 0.8, 0.95] {
            let m = WrightDensity::new(a).unwrap();
            let mut t = 0.0_f64;
            while t < 6.0 {
                assert!(m.eval(t) >= 0.0);
                t += 0.01;
            }
            let q = integrate_to_infinity(|t| m.eval(t), 0.0, 0.0, 1e-11, 2000);
            assert!((q.value - 1.0).abs() < 1e-9, "alpha {a}: mass {}", q.value);
        }
    }

    #[test]
    fn moment_formula() {
        assert!((wright_moment(0.5_f64, 1.0).unwrap() - 1.0 / gamma(1.5)).abs() < 1e-15);
        assert!((wright_moment(0.3_f64, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(wright_moment(0.5_f64, -1.0).is_err());
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        assert!(WrightDensity::new(1.0_f64).is_err());
        assert!(WrightDensity::new(0.0_f64).is_err());
    }
}
