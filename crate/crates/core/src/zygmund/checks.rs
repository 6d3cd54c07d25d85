use super::norm::{golden_max_pub as golden_max, measure_grid_for, uniformly_local_norm, zygmund_norms, NormQuery, NormResult};
use super::rearrangement::{rearrange, singular_limit};
use super::{loge, ZygmundError};
use crate::heat::RadialProfile;
use crate::quad::integrate_pieces;

/// Two sides of an inequality and their quotient `lhs / rhs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl RatioReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        let ratio = if lhs.is_infinite() && rhs.is_infinite() {
            1.0
        } else if lhs == 0.0 && rhs == 0.0 {
            1.0
        } else {
            lhs / rhs
        };
        Self { lhs, rhs, ratio }
    }
}

fn check_rho(rho: f64) -> Result<(), ZygmundError> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(ZygmundError::Exponents(format!("rho must be positive, got {rho}")))
    }
}

/// `||f1 f2||_{1, gamma; rho}` against `||f1||_{q1, g1; rho} ||f2||_{q2, g2; rho}`
/// with `1 = 1/q1 + 1/q2` and `gamma = g1/q1 + g2/q2`.
pub fn holder_check(
    f1: &RadialProfile,
    f2: &RadialProfile,
    q1: f64,
    q2: f64,
    g1: f64,
    g2: f64,
    rho: f64,
) -> Result<RatioReport, ZygmundError> {
    check_rho(rho)?;
    if !(q1 >= 1.0 && q2 >= 1.0) {
        return Err(ZygmundError::Exponents(format!("q1, q2 must be >= 1, got {q1}, {q2}")));
    }
    let inv = |q: f64| if q.is_infinite() { 0.0 } else { 1.0 / q };
    if (inv(q1) + inv(q2) - 1.0).abs() > 1e-12 {
        return Err(ZygmundError::Exponents(format!("1/q1 + 1/q2 = {} != 1", inv(q1) + inv(q2))));
    }
    if !(g1 >= 0.0 && g2 >= 0.0) {
        return Err(ZygmundError::Exponents("weights must be nonnegative".into()));
    }
    let gamma = g1 * inv(q1) + g2 * inv(q2);
    let prod = f1.product(f2)?;
    let lhs = uniformly_local_norm(&prod, &NormQuery::local(1.0, gamma, rho)?)?.value;
    let n1 = uniformly_local_norm(f1, &NormQuery::local(q1, g1, rho)?)?.value;
    let n2 = uniformly_local_norm(f2, &NormQuery::local(q2, g2, rho)?)?.value;
    Ok(RatioReport::new(lhs, n1 * n2))
}

/// `|| |f|^r ||_{q, gamma; rho}` against `||f||_{rq, gamma; rho}^r`. The right
/// side integrates in the radial variable on its own grid, independently of
/// the measure-axis route on the left.
pub fn power_norm_check(f: &RadialProfile, r: f64, q: f64, gamma: f64, rho: f64) -> Result<RatioReport, ZygmundError> {
    check_rho(rho)?;
    if !(r > 0.0 && q >= 1.0 && r * q >= 1.0) {
        return Err(ZygmundError::Exponents(format!("need r > 0, q >= 1 and rq >= 1, got r = {r}, q = {q}")));
    }
    let lhs = uniformly_local_norm(&f.pow(r), &NormQuery::local(q, gamma, rho)?)?;
    let rhs = radial_route_norm(f, r * q, gamma, rho);
    let rhs = if rhs.is_infinite() { rhs } else { rhs.powf(r) };
    Ok(RatioReport::new(lhs.value, rhs))
}

/// `sup_{sigma <= rho} [LOG(omega sigma^N)^gamma N omega int_0^sigma f^q r^{N-1} dr]^(1/q)`.
fn radial_route_norm(f: &RadialProfile, q: f64, gamma: f64, rho: f64) -> f64 {
    let g = f.pow(q);
    let n = f.dim as i32;
    let nw = f.dim as f64 * f.omega();
    let singular = matches!(g.origin_law(), crate::heat::OriginLaw::LogSingular { .. });
    let sigma_min = if singular { (1e-12 * rho).min(1e-10) } else { 1e-12 * rho };
    let head = g.head_integral(g.measure_of(sigma_min));
    if !head.is_finite() {
        return f64::INFINITY;
    }
    let limit = singular_limit(&g, gamma);
    if limit.is_infinite() {
        return f64::INFINITY;
    }
    let decades = (rho / sigma_min).log10();
    let count = 1500.max((decades * 73.0) as usize);
    let (a, b) = (sigma_min.ln(), rho.ln());
    let mut nodes: Vec<f64> = (0..=count).map(|i| a + (b - a) * i as f64 / count as f64).collect();
    for bp in g.breakpoints() {
        if bp > sigma_min && bp < rho {
            nodes.push(bp.ln());
        }
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let mass = |lo: f64, hi: f64| {
        integrate_pieces(|v: f64| nw * g.value(v.exp()) * (v * n as f64).exp(), &[lo, hi], 0.0, 1e-12, 1000).value
    };
    let weighted = |v: f64, m: f64| if m == 0.0 { 0.0 } else { loge(g.omega() * (v * n as f64).exp()).powf(gamma) * m };
    let mut cum = vec![head];
    for w in nodes.windows(2) {
        let last = *cum.last().expect("non-empty");
        cum.push(last + mass(w[0], w[1]));
    }
    let (i, mut best) = nodes
        .iter()
        .zip(&cum)
        .map(|(&v, &m)| weighted(v, m))
        .enumerate()
        .fold((0, limit), |acc, x| if x.1 > acc.1 { x } else { acc });
    let lo = i.saturating_sub(1);
    let hi = (i + 1).min(nodes.len() - 1);
    if hi > lo {
        let (v0, c0) = (nodes[lo], cum[lo]);
        let (_, val) = golden_max(|v| weighted(v, c0 + mass(v0, v)), nodes[lo], nodes[hi], 40);
        best = best.max(val);
    }
    best.powf(1.0 / q)
}

/// Norms for increasing weights on one profile; values are non-decreasing
/// in `gamma` by construction of the shared candidate set.
pub fn gamma_monotonicity(f: &RadialProfile, q: f64, gammas: &[f64], rho: f64) -> Result<Vec<NormResult>, ZygmundError> {
    let query = NormQuery::local(q, 0.0, rho)?;
    let grid = measure_grid_for(f, &query)?;
    let r = rearrange(f, &grid)?;
    Ok(zygmund_norms(&r, q, gammas, Some(f.measure_of(rho))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind() -> RadialProfile {
        RadialProfile::indicator(1, 1.0).unwrap()
    }

    #[test]
    fn holder_indicator_cases() {
        for &(q1, g1, g2) in &[(2.0, 0.0, 0.0), (2.0, 1.0, 0.5), (3.0, 2.0, 0.0), (1.5, 0.3, 1.0)] {
            let q2 = q1 / (q1 - 1.0);
            let r = holder_check(&ind(), &ind(), q1, q2, g1, g2, 1.5).unwrap();
            assert!(r.ratio <= 1.0 + 1e-12, "{q1} {g1} {g2}: {r:?}");
        }
    }

    #[test]
    fn holder_singular_times_lee_ni() {
        let f1 = RadialProfile::fbeta(1, 1.0).unwrap().capped(1e-4);
        let f2 = RadialProfile::lee_ni(1).unwrap();
        for &rho in &[0.1, 1.0, 10.0] {
            let r = holder_check(&f1, &f2, 2.0, 2.0, 1.0, 1.0, rho).unwrap();
            assert!(r.ratio <= 1.0 + 1e-6, "rho {rho}: {r:?}");
        }
    }

    #[test]
    fn holder_degenerate_infinity_route() {
        // f2 = 1 on the ball: ||f1 * 1|| = ||f1|| * sup f2.
        let f1 = RadialProfile::fbeta(1, 1.0).unwrap();
        let one = RadialProfile::constant(1).unwrap();
        let r = holder_check(&f1, &one, 1.0, f64::INFINITY, 1.2, 0.0, 0.8).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn holder_rejects_bad_exponents() {
        assert!(holder_check(&ind(), &ind(), 2.0, 3.0, 0.0, 0.0, 1.0).is_err());
        assert!(holder_check(&ind(), &ind(), 0.5, -1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn power_norm_cases() {
        let r = power_norm_check(&ind(), 2.0, 1.0, 0.0, 1.0).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-12 && (r.rhs - 2.0).abs() < 1e-12);
        let g = RadialProfile::gaussian(2, 1.0).unwrap();
        let r = power_norm_check(&g, 1.0, 2.0, 1.0, 2.0).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-8);
        let f1 = RadialProfile::fbeta(1, 1.0).unwrap();
        let r = power_norm_check(&f1, 3.0, 1.0, 1.0, 1.0).unwrap();
        assert!(r.lhs.is_infinite() && r.ratio == 1.0);
        let r = power_norm_check(&f1.capped(1e-3), 3.0, 1.0, 1.0, 1.0).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-6, "{r:?}");
        let r = power_norm_check(&f1, 1.0 / 1.5, 1.5, 1.5, 0.7).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-6, "{r:?}");
        assert!(power_norm_check(&f1, 0.5, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn monotone_in_gamma() {
        let f = RadialProfile::fbeta(2, 0.5).unwrap();
        let gs = [0.0, 0.1, 0.5, 1.0, 1.4999, 1.5];
        let out = gamma_monotonicity(&f, 1.0, &gs, 2.0).unwrap();
        for w in out.windows(2) {
            assert!(w[1].value >= w[0].value);
        }
    }
}
