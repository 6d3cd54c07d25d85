use super::SubordinationError;
use crate::heat::{radial_heat, RadialProfile};
use crate::zygmund::{loge, uniformly_local_norm, uniformly_local_norm_on, MeasureGrid, NormQuery};
use rayon::prelude::*;

/// Exponents of the smoothing estimate from `L^{q, gamma2}` to `L^{r, gamma1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemigroupExponents {
    pub q: f64,
    pub r: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl SemigroupExponents {
    /// Requires `1 <= q <= r <= inf`, `gamma1, gamma2 >= 0`, and `gamma1 >= gamma2` when `r = q`.
    pub fn new(q: f64, r: f64, gamma1: f64, gamma2: f64) -> Result<Self, SubordinationError> {
        if !(q >= 1.0 && r >= q) {
            return Err(SubordinationError::Params(format!("need 1 <= q <= r, got q = {q}, r = {r}")));
        }
        if !(gamma1 >= 0.0 && gamma2 >= 0.0) {
            return Err(SubordinationError::Params("weights must be nonnegative".into()));
        }
        if r == q && gamma1 < gamma2 {
            return Err(SubordinationError::Params(format!("r = q needs gamma1 >= gamma2, got {gamma1} < {gamma2}")));
        }
        Ok(Self { q, r, gamma1, gamma2 })
    }

    fn inv(x: f64) -> f64 {
        if x.is_infinite() {
            0.0
        } else {
            1.0 / x
        }
    }

    /// `(1/q - 1/r, -gamma2/q + gamma1/r)`.
    pub fn orders(&self) -> (f64, f64) {
        let (iq, ir) = (Self::inv(self.q), Self::inv(self.r));
        (iq - ir, -self.gamma2 * iq + self.gamma1 * ir)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundRow {
    pub t: f64,
    pub rho: f64,
    /// `||e^{t Delta} f||_{r, gamma1; rho}`.
    pub lhs: f64,
    /// `(rho_term + t_term) ||f||_{q, gamma2; rho}`.
    pub rhs: f64,
    pub ratio: f64,
    pub rho_term: f64,
    pub t_term: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundTable {
    pub rows: Vec<BoundRow>,
    pub sup_ratio: f64,
    pub argmax: (f64, f64),
}

/// Radii at which the evolved profile is sampled: the origin, then 60 per
/// decade from well inside both `sqrt(t)` and the smallest ball to twice the
/// largest ball.
fn sample_radii(t: f64, rho_min: f64, rho_max: f64) -> Vec<f64> {
    let lo = 1e-3 * t.sqrt().min(rho_min);
    let hi = 2.0 * rho_max;
    let n = ((hi / lo).log10() * 60.0).ceil() as usize;
    let mut out = vec![0.0];
    out.extend((0..=n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / n as f64).exp()));
    out
}

/// Ratio of `||e^{t Delta} f||_{r, gamma1; rho}` to
/// `[rho^{-N d} LOG(rho)^e + t^{-N d / 2} LOG(t)^e] ||f||_{q, gamma2; rho}`
/// over the product of `t_set` and `rho_set`, where `d = 1/q - 1/r` and
/// `e = -gamma2/q + gamma1/r`. One-dimensional profiles only.
pub fn verify_semigroup_bound(
    exps: &SemigroupExponents,
    rho_set: &[f64],
    t_set: &[f64],
    f: &RadialProfile,
) -> Result<BoundTable, SubordinationError> {
    if rho_set.is_empty() || t_set.is_empty() || rho_set.iter().chain(t_set).any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(SubordinationError::Params("t and rho sets must be non-empty and positive".into()));
    }
    let n = f.dim as f64;
    let (d, e) = exps.orders();
    let rho_min = rho_set.iter().copied().fold(f64::INFINITY, f64::min);
    let rho_max = rho_set.iter().copied().fold(0.0, f64::max);
    let norms_f = rho_set
        .iter()
        .map(|&rho| Ok(uniformly_local_norm(f, &NormQuery::local(exps.q, exps.gamma2, rho)?)?.value))
        .collect::<Result<Vec<f64>, SubordinationError>>()?;
    let per_t: Vec<Result<Vec<BoundRow>, SubordinationError>> = t_set
        .par_iter()
        .map(|&t| {
            let u = radial_heat(f, t, &sample_radii(t, rho_min, rho_max))?;
            let t_term = t.powf(-n * d / 2.0) * loge(t).powf(e);
            rho_set
                .iter()
                .zip(&norms_f)
                .map(|(&rho, &nf)| {
                    // The sampled radii already resolve u; a light log grid fills the gaps.
                    let s_b = u.measure_of(rho);
                    let grid = MeasureGrid::new(1e-12 * s_b, s_b, 256)?;
                    let lhs = uniformly_local_norm_on(&u, &NormQuery::local(exps.r, exps.gamma1, rho)?, &grid)?.value;
                    let rho_term = rho.powf(-n * d) * loge(rho).powf(e);
                    let rhs = (rho_term + t_term) * nf;
                    Ok(BoundRow { t, rho, lhs, rhs, ratio: lhs / rhs, rho_term, t_term })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(t_set.len() * rho_set.len());
    for r in per_t {
        rows.extend(r?);
    }
    let best = rows.iter().fold(&rows[0], |b, r| if r.ratio > b.ratio { r } else { b });
    let (sup_ratio, argmax) = (best.ratio, (best.t, best.rho));
    Ok(BoundTable { rows, sup_ratio, argmax })
}
