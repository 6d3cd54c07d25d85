use super::rearrangement::{rearrange, MeasureGrid, RearrangementProfile, POINTS_PER_DECADE};
use super::{loge, ZygmundError};
use crate::heat::{RadialProfile, SpatialGrid};
use crate::scalar::Real;

/// Exponent `q` in `[1, inf]`, weight `gamma >= 0`, optional locality radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormQuery {
    pub q: f64,
    pub gamma: f64,
    pub rho: Option<f64>,
}

impl NormQuery {
    pub fn new(q: f64, gamma: f64, rho: Option<f64>) -> Result<Self, ZygmundError> {
        if !(q >= 1.0) {
            return Err(ZygmundError::Query(format!("q must be >= 1, got {q}")));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(ZygmundError::Query(format!("gamma must be >= 0, got {gamma}")));
        }
        if let Some(r) = rho {
            if !(r > 0.0 && r.is_finite()) {
                return Err(ZygmundError::Query(format!("rho must be positive, got {r}")));
            }
        }
        Ok(Self { q, gamma, rho })
    }

    pub fn global(q: f64, gamma: f64) -> Result<Self, ZygmundError> {
        Self::new(q, gamma, None)
    }

    pub fn local(q: f64, gamma: f64, rho: f64) -> Result<Self, ZygmundError> {
        Self::new(q, gamma, Some(rho))
    }

    /// Hoelder conjugate `q / (q - 1)`.
    pub fn conjugate(&self) -> f64 {
        if self.q == 1.0 {
            f64::INFINITY
        } else if self.q.is_infinite() {
            1.0
        } else {
            self.q / (self.q - 1.0)
        }
    }
}

/// Norm value with the measure at which the supremum is attained; `argmax_s`
/// is `0` or `inf` when the supremum is a limit. Divergent norms carry
/// `value = inf` and `divergent = true`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub argmax_s: f64,
    pub divergent: bool,
}

impl NormResult {
    fn divergent() -> Self {
        Self { value: f64::INFINITY, argmax_s: 0.0, divergent: true }
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

pub(crate) fn golden_max_pub<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, iters: usize) -> (f64, f64) {
    golden_max(f, a, b, iters)
}

fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Norms of one profile for several weights. All weights are maximised over
/// a common candidate set (grid nodes plus every refined argmax), so
/// `gamma_1 >= gamma_2` implies `value_1 >= value_2` exactly.
///
/// `s_cap` restricts to `0 < s <= s_cap`; without it the supremum also
/// includes the limit `s -> inf`, where the weight tends to one.
pub fn zygmund_norms(profile: &RearrangementProfile, q: f64, gammas: &[f64], s_cap: Option<f64>) -> Vec<NormResult> {
    if q.is_infinite() {
        let v = profile.values[0];
        let r = NormResult { value: v, argmax_s: 0.0, divergent: v.is_infinite() };
        return vec![r; gammas.len()];
    }
    let p = profile.powered(q);
    if !p.cumulative[1].is_finite() {
        return vec![NormResult::divergent(); gammas.len()];
    }
    let s_end = s_cap.map_or(p.s_max(), |c| c.min(p.s_max()));
    let mut cand: Vec<(f64, f64)> = p
        .points
        .iter()
        .zip(&p.cumulative)
        .skip(1)
        .take_while(|(s, _)| **s < s_end)
        .map(|(&s, &c)| (s, c))
        .collect();
    cand.push((s_end, p.cumulative_at(s_end)));
    let weighted = |s: f64, c: f64, g: f64| if c == 0.0 { 0.0 } else { loge(s).powf(g) * c };

    let mut refined = Vec::new();
    for &g in gammas {
        let (i, _) = cand
            .iter()
            .enumerate()
            .map(|(i, &(s, c))| (i, weighted(s, c, g)))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        let lo = if i == 0 { cand[0].0 } else { cand[i - 1].0 };
        let hi = cand[(i + 1).min(cand.len() - 1)].0;
        if hi > lo {
            let (v, _) = golden_max(|v| weighted(v.exp(), p.cumulative_at(v.exp()), g), lo.ln(), hi.ln(), 40);
            let s = v.exp();
            refined.push((s, p.cumulative_at(s)));
        }
    }
    cand.extend(refined);

    let total = if s_cap.is_none() { Some(p.total()) } else { None };
    gammas
        .iter()
        .map(|&g| {
            let head = p.head_limit(g);
            if head.is_infinite() || total.is_some_and(f64::is_infinite) {
                return NormResult::divergent();
            }
            let mut best = (head, 0.0);
            for &(s, c) in &cand {
                let w = weighted(s, c, g);
                if w > best.0 {
                    best = (w, s);
                }
            }
            if let Some(t) = total {
                if t > best.0 {
                    best = (t, f64::INFINITY);
                }
            }
            NormResult { value: best.0.powf(1.0 / q), argmax_s: best.1, divergent: false }
        })
        .collect()
}

/// Norm of a rearranged profile; with `rho` the supremum runs over
/// `0 < s <= |B(0; rho)|`.
pub fn zygmund_norm(profile: &RearrangementProfile, query: &NormQuery) -> NormResult {
    let cap = query.rho.map(|r| crate::heat::unit_ball_volume(profile.dim) * r.powi(profile.dim as i32));
    zygmund_norms(profile, query.q, &[query.gamma], cap)[0]
}

/// Default measure grid for a query on a radial profile.
pub fn measure_grid_for(f: &RadialProfile, query: &NormQuery) -> Result<MeasureGrid, ZygmundError> {
    match query.rho {
        Some(rho) => MeasureGrid::for_profile(f, f.measure_of(rho)),
        None => {
            let s_max = f.support_measure().min(1e12);
            let mut s_min = 1e-12_f64.min(1e-12 * s_max);
            if let crate::heat::OriginLaw::LogSingular { .. } = f.origin_law() {
                s_min = s_min.min(f.omega() * 1e-10_f64.powi(f.dim as i32));
            }
            let points = 4096.max(((s_max / s_min).log10() * POINTS_PER_DECADE).ceil() as usize);
            MeasureGrid::new(s_min, s_max, points)
        }
    }
}

/// `||f chi_{B(0; rho)}||`, which for radial non-increasing `f` equals the
/// supremum over all ball centres.
pub fn uniformly_local_norm(f: &RadialProfile, query: &NormQuery) -> Result<NormResult, ZygmundError> {
    uniformly_local_norm_refined(f, query, 1)
}

/// As [`uniformly_local_norm`] with the measure grid refined `factor` times;
/// a query without `rho` gives the global norm.
pub fn uniformly_local_norm_refined(f: &RadialProfile, query: &NormQuery, factor: usize) -> Result<NormResult, ZygmundError> {
    let grid = measure_grid_for(f, query)?.refined(factor.max(1));
    uniformly_local_norm_on(f, query, &grid)
}

/// As [`uniformly_local_norm`] on a caller-supplied measure grid.
pub fn uniformly_local_norm_on(f: &RadialProfile, query: &NormQuery, grid: &MeasureGrid) -> Result<NormResult, ZygmundError> {
    let r = rearrange(f, grid)?;
    Ok(zygmund_norm(&r, query))
}

/// `sup_z ||u chi_{B(z; rho)}||_{q, gamma}` for a grid function on the
/// periodic box. Balls are unions of cells whose centres lie within `rho`;
/// step rearrangements are maximised over their breakpoints. Centres are
/// taken on a sub-lattice (at most 128 per axis in one dimension, 8 in two)
/// together with the cell of largest `|u|`.
pub fn grid_local_norm<T: Real>(u: &SpatialGrid<T>, q: f64, gamma: f64, rho: f64) -> f64 {
    let m = u.points;
    let h = u.spacing().f64();
    let cell = u.cell_volume().f64();
    let signed = |d: usize| -> f64 {
        let d = if d > m / 2 { d as f64 - m as f64 } else { d as f64 };
        d * h
    };
    let offsets: Vec<(usize, usize)> = if u.dim == 1 {
        (0..m).filter(|&d| signed(d).abs() <= rho).map(|d| (d, 0)).collect()
    } else {
        (0..m)
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .filter(|&(a, b)| signed(a).hypot(signed(b)) <= rho)
            .collect()
    };
    if offsets.is_empty() {
        return 0.0;
    }
    let stride = if u.dim == 1 { (m / 128).max(1) } else { (m / 8).max(1) };
    let mut centres: Vec<usize> = if u.dim == 1 {
        (0..m).step_by(stride).collect()
    } else {
        (0..m).step_by(stride).flat_map(|a| (0..m).step_by(stride).map(move |b| a * m + b)).collect()
    };
    let argmax = u
        .values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap_or(std::cmp::Ordering::Equal))
        .map_or(0, |x| x.0);
    centres.push(argmax);
    let mut buf = Vec::with_capacity(offsets.len());
    let mut best = 0.0_f64;
    for &c in &centres {
        buf.clear();
        let (ci, cj) = if u.dim == 1 { (c, 0) } else { (c / m, c % m) };
        for &(a, b) in &offsets {
            let idx = if u.dim == 1 { (ci + a) % m } else { ((ci + a) % m) * m + (cj + b) % m };
            buf.push(u.values[idx].f64().abs().powf(q));
        }
        buf.sort_by(|x, y| y.total_cmp(x));
        let mut acc = 0.0;
        for (k, v) in buf.iter().enumerate() {
            acc += v * cell;
            let s = (k + 1) as f64 * cell;
            best = best.max(loge(s).powf(gamma) * acc);
        }
    }
    best.powf(1.0 / q)
}
