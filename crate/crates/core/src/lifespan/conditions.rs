use super::{log_e_2t, BallMass, LifespanError, TimeBound};
use crate::heat::RadialProfile;
use crate::subordination::FractionalParams;
use crate::zygmund::{loge_of_ln, uniformly_local_norm, NormQuery};

/// Search interval `[ln_min, ln_max]` for `ln T`; bisection stops once the
/// bracket is below `tol * max(1, |ln T|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeRange {
    pub ln_min: f64,
    pub ln_max: f64,
    pub tol: f64,
}

impl ProbeRange {
    pub fn new(ln_min: f64, ln_max: f64, tol: f64) -> Result<Self, LifespanError> {
        if !(ln_min < ln_max && ln_min.is_finite() && ln_max.is_finite() && tol > 0.0) {
            return Err(LifespanError::Input(format!("bad probe range [{ln_min}, {ln_max}] with tol {tol}")));
        }
        Ok(Self { ln_min, ln_max, tol })
    }

    /// Keeps the ball measure `omega T^{alpha N/2}` within `e^{+-250}`.
    pub fn sufficient(params: &FractionalParams) -> Self {
        let b = 500.0 / (params.alpha * params.dim as f64);
        Self { ln_min: -b, ln_max: b, tol: 1e-7 }
    }

    /// Unbounded below, since the condition is evaluated in `ln sigma`; above,
    /// `T^{alpha/2}` stays inside the tabulated ball masses.
    pub fn necessary(params: &FractionalParams) -> Self {
        Self { ln_min: -1e7, ln_max: 600.0 / (params.alpha * params.dim as f64), tol: 1e-7 }
    }
}

/// Largest `ln T` in the range where `holds` is true, assuming it holds on an
/// initial segment. `upper` returns the first failing end of the final bracket.
fn threshold<F>(mut holds: F, range: &ProbeRange, upper: bool) -> Result<TimeBound, LifespanError>
where
    F: FnMut(f64) -> Result<bool, LifespanError>,
{
    if !holds(range.ln_min)? {
        return Ok(TimeBound::Zero);
    }
    if holds(range.ln_max)? {
        return Ok(TimeBound::Unbounded);
    }
    let (mut lo, mut hi) = (range.ln_min, range.ln_max);
    while hi - lo > range.tol * lo.abs().max(hi.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(TimeBound::Finite(if upper { hi } else { lo }))
}

fn local_norm(phi: &RadialProfile, gamma: f64, ln_rho: f64) -> Result<f64, LifespanError> {
    let r = uniformly_local_norm(phi, &NormQuery::local(1.0, gamma, ln_rho.exp())?)?;
    Ok(r.value)
}

fn check_constant(name: &str, c: f64) -> Result<(), LifespanError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(LifespanError::Input(format!("{name} must be positive and finite, got {c}")));
    }
    Ok(())
}

/// `||phi||_{1,gamma;T^{alpha/2}} / (alpha^{N/2} (1-alpha)^{N/2} LOG(T)^gamma)`;
/// the sufficient condition with constant `C` reads `ratio <= C`.
pub fn sufficient_ratio_thm1(phi: &RadialProfile, gamma: f64, params: &FractionalParams, ln_t: f64) -> Result<f64, LifespanError> {
    let (n, a) = (params.dim as f64, params.alpha);
    let norm = local_norm(phi, gamma, 0.5 * a * ln_t)?;
    let rhs = (a * (1.0 - a)).powf(n / 2.0) * loge_of_ln(ln_t).powf(gamma);
    Ok(norm / rhs)
}

/// `||phi||_{1,N/2;T^{alpha/2}} / (alpha^{N/2} log(e+2T)^{-N/2})`.
pub fn sufficient_ratio_thm2(phi: &RadialProfile, params: &FractionalParams, ln_t: f64) -> Result<f64, LifespanError> {
    let (n, a) = (params.dim as f64, params.alpha);
    let norm = local_norm(phi, n / 2.0, 0.5 * a * ln_t)?;
    Ok(norm / (a.powf(n / 2.0) * log_e_2t(ln_t).powf(-n / 2.0)))
}

fn check_dim(phi: &RadialProfile, params: &FractionalParams) -> Result<(), LifespanError> {
    if phi.dim != params.dim {
        return Err(LifespanError::Input(format!("profile dimension {} differs from N = {}", phi.dim, params.dim)));
    }
    Ok(())
}

pub fn sufficient_t_thm1(phi: &RadialProfile, gamma: f64, params: &FractionalParams, c_cal: f64) -> Result<TimeBound, LifespanError> {
    sufficient_t_thm1_in(phi, gamma, params, c_cal, &ProbeRange::sufficient(params))
}

/// Largest probed `T` whose ratio from [`sufficient_ratio_thm1`] is at most `c_cal`.
pub fn sufficient_t_thm1_in(
    phi: &RadialProfile,
    gamma: f64,
    params: &FractionalParams,
    c_cal: f64,
    range: &ProbeRange,
) -> Result<TimeBound, LifespanError> {
    check_dim(phi, params)?;
    check_constant("C_cal", c_cal)?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(LifespanError::Input(format!("gamma must be >= 0, got {gamma}")));
    }
    threshold(|x| Ok(sufficient_ratio_thm1(phi, gamma, params, x)? <= c_cal), range, false)
}

pub fn sufficient_t_thm2(phi: &RadialProfile, params: &FractionalParams, c_cal: f64) -> Result<TimeBound, LifespanError> {
    sufficient_t_thm2_in(phi, params, c_cal, &ProbeRange::sufficient(params))
}

pub fn sufficient_t_thm2_in(
    phi: &RadialProfile,
    params: &FractionalParams,
    c_cal: f64,
    range: &ProbeRange,
) -> Result<TimeBound, LifespanError> {
    check_dim(phi, params)?;
    check_constant("C_cal", c_cal)?;
    threshold(|x| Ok(sufficient_ratio_thm2(phi, params, x)? <= c_cal), range, false)
}

/// Right-hand side of the necessary condition, up to the constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NecessaryForm {
    /// `(int_{sigma^{2/alpha}/(16T)}^{1/4} t^{-alpha} dt)^{-N/2}`.
    #[default]
    Exact,
    /// `(T/sigma^{2/alpha})^{N(1-alpha)/2} (log(e + T/sigma^{2/alpha}))^{-N/2}`.
    Log,
}

/// `ln` of the right-hand side shape at `sigma = T^{alpha/2} e^{-alpha u/2}`, `u >= 0`.
fn ln_shape(form: NecessaryForm, n: f64, eps: f64, u: f64) -> f64 {
    match form {
        NecessaryForm::Exact => {
            // v = ln(16 T / sigma^{2/alpha}); 4^{-eps} - e^{-eps v} = e^{-eps v} expm1(eps (v - ln 4)).
            let v = u + 16.0_f64.ln();
            let ln_i = -eps * v + (eps * (v - 4.0_f64.ln())).exp_m1().ln() - eps.ln();
            -0.5 * n * ln_i
        }
        NecessaryForm::Log => {
            let log_ex = u + (1.0 - u).exp().ln_1p();
            0.5 * n * eps * u - 0.5 * n * log_ex.ln()
        }
    }
}

fn ln_necessary_constant(mass: &BallMass, params: &FractionalParams, ln_t: f64, form: NecessaryForm) -> f64 {
    let (n, a) = (params.dim as f64, params.alpha);
    let eps = 1.0 - a;
    let g = |u: f64| mass.ln_mass(0.5 * a * (ln_t - u)) - ln_shape(form, n, eps, u);
    // Past eps u = 60 the integral has saturated and the mass only decreases.
    let u_max = 60.0 / eps + 200.0;
    let points = 400;
    let u_min = 1e-4_f64;
    let us: Vec<f64> = std::iter::once(0.0)
        .chain((0..points).map(|j| u_min * (u_max / u_min).powf(j as f64 / (points - 1) as f64)))
        .collect();
    let vals: Vec<f64> = us.iter().map(|&u| g(u)).collect();
    let (j, &best) = vals
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("non-empty grid");
    let lo = us[j.saturating_sub(1)];
    let hi = us[(j + 1).min(us.len() - 1)];
    if hi > lo {
        let (_, refined) = crate::zygmund::golden_max_pub(g, lo, hi, 60);
        best.max(refined)
    } else {
        best
    }
}

/// `sup_{0 < sigma < T^{alpha/2}} int_{B(0;sigma)} phi / shape(sigma, T)`: the
/// smallest constant for which the necessary condition holds at `T`.
pub fn necessary_constant(mass: &BallMass, params: &FractionalParams, ln_t: f64, form: NecessaryForm) -> f64 {
    ln_necessary_constant(mass, params, ln_t, form).exp()
}

pub fn necessary_t(phi: &RadialProfile, params: &FractionalParams, gamma1: f64, form: NecessaryForm) -> Result<TimeBound, LifespanError> {
    necessary_t_in(&BallMass::new(phi)?, params, gamma1, form, &ProbeRange::necessary(params))
}

/// Smallest probed `T` at which the necessary condition with constant
/// `gamma1` fails, so that no nonnegative solution exists on `(0, T)`.
pub fn necessary_t_in(
    mass: &BallMass,
    params: &FractionalParams,
    gamma1: f64,
    form: NecessaryForm,
    range: &ProbeRange,
) -> Result<TimeBound, LifespanError> {
    if mass.dim != params.dim {
        return Err(LifespanError::Input(format!("mass table dimension {} differs from N = {}", mass.dim, params.dim)));
    }
    check_constant("gamma1", gamma1)?;
    let ln_g = gamma1.ln();
    threshold(|x| Ok(ln_necessary_constant(mass, params, x, form) <= ln_g), range, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    fn params(a: f64) -> FractionalParams {
        FractionalParams::fujita(1, a).unwrap()
    }

    #[test]
    fn exact_shape_matches_the_time_integral() {
        let (a, t) = (0.7_f64, 3.0_f64);
        for u in [0.0, 0.3, 5.0, 40.0] {
            let sigma = t.powf(a / 2.0) * (-a * u / 2.0).exp();
            let lower = sigma.powf(2.0 / a) / (16.0 * t);
            let i = integrate(|s: f64| s.powf(-a), lower, 0.25, 0.0, 1e-13, 200).value;
            let want = -0.5 * i.ln();
            assert!((ln_shape(NecessaryForm::Exact, 1.0, 1.0 - a, u) - want).abs() < 1e-10, "u {u}");
        }
    }

    #[test]
    fn sufficient_threshold_is_monotone_in_kappa() {
        let g = RadialProfile::gaussian(1, 1.0).unwrap();
        let p = params(0.5);
        let mut last = f64::INFINITY;
        for k in [0.5, 1.0, 2.0, 4.0] {
            let t = sufficient_t_thm1(&g.scaled(k), 0.5, &p, 1.0).unwrap();
            assert!(t.is_finite());
            assert!(t.ln_t() <= last);
            last = t.ln_t();
        }
    }

    #[test]
    fn sufficient_threshold_satisfies_its_condition() {
        let f = RadialProfile::fbeta(1, 1.0).unwrap().scaled(5.0);
        let p = params(0.7);
        let TimeBound::Finite(x) = sufficient_t_thm1(&f, 1.5, &p, 1.0).unwrap() else { panic!("expected finite") };
        assert!(sufficient_ratio_thm1(&f, 1.5, &p, x).unwrap() <= 1.0);
        assert!(sufficient_ratio_thm1(&f, 1.5, &p, x + 1e-4 * x.abs()).unwrap() > 1.0);
    }

    #[test]
    fn gamma_zero_is_the_ball_mass_condition() {
        // gamma = 0: the norm is the mass of the ball of radius T^{alpha/2}.
        let g = RadialProfile::gaussian(1, 1.0).unwrap();
        let p = params(0.5);
        for ln_t in [-3.0, 0.0, 2.0] {
            let r = sufficient_ratio_thm1(&g, 0.0, &p, ln_t).unwrap();
            let mass = g.ball_mass((0.25 * ln_t).exp());
            assert!((r * 0.25_f64.sqrt() / mass - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn flags_at_the_ends_of_the_range() {
        let g = RadialProfile::gaussian(1, 1.0).unwrap();
        let p = params(0.5);
        assert_eq!(sufficient_t_thm1(&g, 0.5, &p, 1e6).unwrap(), TimeBound::Unbounded);
        let huge = RadialProfile::fbeta(1, 1.0).unwrap().scaled(1e9);
        assert_eq!(sufficient_t_thm2(&huge, &p, 1.0).unwrap(), TimeBound::Zero);
        let tiny = g.scaled(1e-9);
        assert_eq!(necessary_t(&tiny, &p, 1.0, NecessaryForm::Exact).unwrap(), TimeBound::Unbounded);
    }

    #[test]
    fn necessary_threshold_decreases_with_kappa() {
        let f = RadialProfile::fbeta(1, 0.0).unwrap();
        let p = params(0.9);
        let mut last = f64::INFINITY;
        for k in [2.0, 4.0, 8.0] {
            let t = necessary_t(&f.scaled(k), &p, 1.0, NecessaryForm::Exact).unwrap();
            assert!(t.is_finite(), "{t:?}");
            assert!(t.ln_t() < last);
            last = t.ln_t();
        }
    }

    #[test]
    fn necessary_constant_matches_a_brute_force_sup() {
        let g = RadialProfile::gaussian(1, 1.0).unwrap().scaled(3.0);
        let mass = BallMass::new(&g).unwrap();
        let (a, t) = (0.6_f64, 0.8_f64);
        let p = params(a);
        let mut brute = 0.0_f64;
        for i in 1..20_000 {
            let sigma = t.powf(a / 2.0) * i as f64 / 20_000.0;
            let lower = sigma.powf(2.0 / a) / (16.0 * t);
            let int = ((0.25_f64).powf(1.0 - a) - lower.powf(1.0 - a)) / (1.0 - a);
            brute = brute.max(g.ball_mass(sigma) * int.sqrt());
        }
        let got = necessary_constant(&mass, &p, t.ln(), NecessaryForm::Exact);
        assert!((got / brute - 1.0).abs() < 1e-6, "{got} vs {brute}");
    }
}
