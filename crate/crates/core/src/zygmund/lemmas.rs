use super::{loge, loge_of_ln, ZygmundError};
use crate::quad::{integrate, integrate_to_infinity};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogIntegralPart {
    /// `int_0^s tau^-a LOG^-q <= C log(e + 2s) s^(1-a) LOG(s)^(1-q)`, `0 < a <= 1`, `q > 1`.
    I,
    /// `int_0^s tau^-a LOG^-q <= C (1-a)^-1 s^(1-a) LOG(s)^-q`, `0 < a < 1`.
    II,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogIntegralReport {
    pub part: LogIntegralPart,
    pub a: f64,
    pub q: f64,
    /// Largest `lhs / rhs` on the fitting grid.
    pub fitted_c: f64,
    /// Largest `lhs / (fitted_c rhs)` on the verification grid.
    pub worst_ratio: f64,
    pub passed: bool,
}

/// Slack on the verification grid relative to the fitted constant.
pub const VERIFY_SLACK: f64 = 1.05;

/// `int_0^s tau^-a LOG(tau)^-q dtau`, by `tau = s e^-v`.
pub fn log_integral_lhs(a: f64, q: f64, s: f64) -> f64 {
    let ls = s.ln();
    let f = |v: f64| (-(1.0 - a) * v).exp() * loge_of_ln(ls - v).powf(-q);
    // Beyond v_cut, LOG(tau) = v - ln s up to e^-59.
    let v_cut = (60.0 + ls).max(0.0);
    let body = integrate(f, 0.0, v_cut, 0.0, 1e-13, 4000).value;
    let tail = if a == 1.0 {
        (v_cut - ls).powf(1.0 - q) / (q - 1.0)
    } else {
        integrate_to_infinity(|v: f64| (-(1.0 - a) * v).exp() * (v - ls).powf(-q), v_cut, 0.0, 1e-13, 4000).value
    };
    s.powf(1.0 - a) * (body + tail)
}

pub fn log_integral_rhs(part: LogIntegralPart, a: f64, q: f64, s: f64) -> f64 {
    match part {
        LogIntegralPart::I => (std::f64::consts::E + 2.0 * s).ln() * s.powf(1.0 - a) * loge(s).powf(1.0 - q),
        LogIntegralPart::II => s.powf(1.0 - a) * loge(s).powf(-q) / (1.0 - a),
    }
}

fn log_grid(lo: f64, hi: f64, per_decade: f64) -> Vec<f64> {
    let n = ((hi / lo).log10() * per_decade).round().max(1.0) as usize;
    (0..=n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / n as f64).exp()).collect()
}

/// Fits `C` as the largest ratio on a grid with 10 points per decade over
/// `[s_lo, s_hi]`, then verifies `lhs <= 1.05 C rhs` on 100 points per decade.
pub fn log_integral_check(part: LogIntegralPart, a: f64, q: f64, s_lo: f64, s_hi: f64) -> Result<LogIntegralReport, ZygmundError> {
    let ok = match part {
        LogIntegralPart::I => a > 0.0 && a <= 1.0 && q > 1.0,
        LogIntegralPart::II => a > 0.0 && a < 1.0 && q.is_finite(),
    };
    if !ok || !(s_lo > 0.0 && s_hi > s_lo) {
        return Err(ZygmundError::Exponents(format!("log integral {part:?}: a = {a}, q = {q} out of range")));
    }
    let ratio = |s: f64| log_integral_lhs(a, q, s) / log_integral_rhs(part, a, q, s);
    let fitted_c = log_grid(s_lo, s_hi, 10.0).into_iter().map(ratio).fold(0.0, f64::max);
    let worst_ratio = log_grid(s_lo, s_hi, 100.0).into_iter().map(|s| ratio(s) / fitted_c).fold(0.0, f64::max);
    Ok(LogIntegralReport { part, a, q, fitted_c, worst_ratio, passed: fitted_c.is_finite() && worst_ratio <= VERIFY_SLACK })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogConstantReport {
    pub samples: usize,
    pub violations: usize,
    /// Smallest `log(e + k/s) - k LOG(s)` and `LOG(s)/k - log(e + k/s)`.
    pub lower_margin: f64,
    pub upper_margin: f64,
}

/// Pointwise `k LOG(s) <= log(e + k/s) <= LOG(s) / k` over all pairs.
pub fn log_constant_i(ks: &[f64], ss: &[f64]) -> LogConstantReport {
    let mut rep = LogConstantReport { samples: 0, violations: 0, lower_margin: f64::INFINITY, upper_margin: f64::INFINITY };
    for &k in ks {
        for &s in ss {
            let mid = loge_of_ln(s.ln() - k.ln());
            let base = loge(s);
            let lo = mid - k * base;
            let hi = base / k - mid;
            rep.samples += 1;
            if lo < 0.0 || hi < 0.0 {
                rep.violations += 1;
            }
            rep.lower_margin = rep.lower_margin.min(lo);
            rep.upper_margin = rep.upper_margin.min(hi);
        }
    }
    rep
}

/// `sup k^eps LOG(s k) / LOG(s)` with `s` in `[s_lo, s_hi]` and `k` in
/// `[k_lo, 1)`, both log-sampled.
pub fn log_constant_ii_sup(eps: f64, s_lo: f64, s_hi: f64, k_lo: f64, per_decade: f64) -> f64 {
    let ks: Vec<f64> = log_grid(k_lo, 1.0, per_decade).into_iter().filter(|&k| k < 1.0).collect();
    let mut best = 0.0_f64;
    for s in log_grid(s_lo, s_hi, per_decade) {
        let base = loge(s);
        for &k in &ks {
            best = best.max(k.powf(eps) * loge_of_ln(s.ln() + k.ln()) / base);
        }
    }
    best
}

/// Comparison functions equivalent to `LOG(s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogEquivalence {
    /// `log(L + 1/s)`, `L > 1`.
    Shifted(f64),
    /// `log(e + k/s)`, `k > 0`.
    Scaled(f64),
    /// `log(e + 1/s^k)`, `k > 0`.
    Power(f64),
}

impl LogEquivalence {
    pub fn eval(&self, s: f64) -> f64 {
        let ls = s.ln();
        match *self {
            LogEquivalence::Shifted(l) => {
                if ls < 0.0 {
                    -ls + (l * s).ln_1p()
                } else {
                    (l + 1.0 / s).ln()
                }
            }
            LogEquivalence::Scaled(k) => loge_of_ln(ls - k.ln()),
            LogEquivalence::Power(k) => loge_of_ln(k * ls),
        }
    }
}

/// Smallest and largest `LOG(s) / variant(s)` over a log grid of `[s_lo, s_hi]`.
pub fn log_equivalence_bounds(variant: LogEquivalence, s_lo: f64, s_hi: f64, per_decade: f64) -> (f64, f64) {
    log_grid(s_lo, s_hi, per_decade)
        .into_iter()
        .map(|s| loge(s) / variant.eval(s))
        .fold((f64::INFINITY, 0.0), |(lo, hi), r| (lo.min(r), hi.max(r)))
}
