use super::{loge, ZygmundError};
use crate::heat::{OriginLaw, RadialProfile, SpatialGrid, TailLaw};
use crate::scalar::Real;

/// Log-uniform grid on the measure axis.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub points: usize,
}

pub const DEFAULT_POINTS: usize = 4096;
pub const POINTS_PER_DECADE: f64 = 100.0;

impl MeasureGrid {
    pub fn new(s_min: f64, s_max: f64, points: usize) -> Result<Self, ZygmundError> {
        if !(s_min > 0.0 && s_max > s_min && s_max.is_finite()) || points < 2 {
            return Err(ZygmundError::Grid(format!("need 0 < s_min < s_max, got [{s_min}, {s_max}]")));
        }
        Ok(Self { s_min, s_max, points })
    }

    /// Default grid up to `s_max`: starts at `1e-12 min(s_max, omega_N)`, or
    /// lower for singular profiles, with `max(4096, 100 per decade)` points.
    pub fn for_profile(f: &RadialProfile, s_max: f64) -> Result<Self, ZygmundError> {
        let mut s_min = 1e-12 * s_max.min(f.omega());
        if let OriginLaw::LogSingular { .. } = f.origin_law() {
            s_min = s_min.min(f.omega() * 1e-10_f64.powi(f.dim as i32));
        }
        let decades = (s_max / s_min).log10();
        let points = DEFAULT_POINTS.max((decades * POINTS_PER_DECADE).ceil() as usize);
        Self::new(s_min, s_max, points)
    }

    pub fn refined(&self, factor: usize) -> Self {
        Self { points: (self.points - 1) * factor + 1, ..self.clone() }
    }

    /// Nodes `0 = s_0 < s_1 = s_min < ... = s_max` with `extra` inserted.
    pub fn nodes(&self, extra: &[f64]) -> Vec<f64> {
        let (a, b) = (self.s_min.ln(), self.s_max.ln());
        let m = (self.points - 1) as f64;
        let mut out: Vec<f64> = (0..self.points).map(|i| (a + (b - a) * i as f64 / m).exp()).collect();
        out[0] = self.s_min;
        out[self.points - 1] = self.s_max;
        out.extend(extra.iter().copied().filter(|&s| s > self.s_min && s < self.s_max));
        out.push(0.0);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Source {
    Radial(RadialProfile),
    /// `f*(s) = values[j]` on `(s_{j-1}, s_j]`.
    Steps,
}

/// Samples of `f*` on a measure grid with exact cumulative integrals.
#[derive(Clone, Debug, PartialEq)]
pub struct RearrangementProfile {
    pub dim: usize,
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub tail: TailLaw,
    source: Source,
}

/// One row of the audit table for a weight exponent `gamma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileRow {
    pub s: f64,
    pub weight: f64,
    pub cumulative: f64,
    pub weighted_value: f64,
}

/// `f*(s) = f(r(s))`, exact for radial non-increasing profiles.
pub fn rearrange(f: &RadialProfile, grid: &MeasureGrid) -> Result<RearrangementProfile, ZygmundError> {
    let extra: Vec<f64> = f.breakpoints().iter().map(|&r| f.measure_of(r)).collect();
    let points = grid.nodes(&extra);
    let mut values: Vec<f64> = points.iter().map(|&s| f.rearranged(s)).collect();
    values[0] = f.value(0.0);
    for j in 1..values.len() {
        if values[j] > values[j - 1] {
            return Err(ZygmundError::NotMonotone(points[j]));
        }
    }
    let cumulative = radial_cumulative(f, &points);
    Ok(RearrangementProfile { dim: f.dim, points, values, cumulative, tail: f.tail_law(), source: Source::Radial(f.clone()) })
}

fn radial_cumulative(f: &RadialProfile, points: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; points.len()];
    let breaks = f.measure_breakpoints();
    out[1] = f.head_integral(points[1]);
    for j in 2..points.len() {
        out[j] = out[j - 1] + f.measure_integral_with(points[j - 1], points[j], &breaks);
    }
    out
}

/// Step rearrangement of `|u|` restricted to `cells` (all cells when `None`);
/// every cell carries the measure `h^N`.
pub fn rearrange_grid<T: Real>(u: &SpatialGrid<T>, cells: Option<&[usize]>) -> RearrangementProfile {
    let mut v: Vec<f64> = match cells {
        Some(idx) => idx.iter().map(|&i| u.values[i].f64().abs()).collect(),
        None => u.values.iter().map(|x| x.f64().abs()).collect(),
    };
    v.sort_by(|a, b| b.total_cmp(a));
    steps_profile(u.dim, u.cell_volume().f64(), v)
}

fn steps_profile(dim: usize, cell: f64, sorted: Vec<f64>) -> RearrangementProfile {
    let mut points = Vec::with_capacity(sorted.len() + 1);
    let mut values = Vec::with_capacity(sorted.len() + 1);
    let mut cumulative = Vec::with_capacity(sorted.len() + 1);
    points.push(0.0);
    values.push(sorted.first().copied().unwrap_or(0.0));
    cumulative.push(0.0);
    let mut acc = 0.0;
    for (k, v) in sorted.into_iter().enumerate() {
        acc += v * cell;
        points.push((k + 1) as f64 * cell);
        values.push(v);
        cumulative.push(acc);
    }
    RearrangementProfile { dim, points, values, cumulative, tail: TailLaw::Vanishing, source: Source::Steps }
}

impl RearrangementProfile {
    /// Rearrangement of `|f|^q` on the same nodes. Values are exactly the
    /// `q`-th powers of the stored samples.
    pub fn powered(&self, q: f64) -> RearrangementProfile {
        if q == 1.0 {
            return self.clone();
        }
        let values: Vec<f64> = self.values.iter().map(|v| v.powf(q)).collect();
        match &self.source {
            Source::Radial(f) => {
                let g = f.pow(q);
                let cumulative = radial_cumulative(&g, &self.points);
                let tail = g.tail_law();
                Self { dim: self.dim, points: self.points.clone(), values, cumulative, tail, source: Source::Radial(g) }
            }
            Source::Steps => {
                let mut cumulative = vec![0.0; self.points.len()];
                for j in 1..self.points.len() {
                    cumulative[j] = cumulative[j - 1] + values[j] * (self.points[j] - self.points[j - 1]);
                }
                Self { values, cumulative, ..self.clone() }
            }
        }
    }

    pub fn s_max(&self) -> f64 {
        *self.points.last().expect("non-empty")
    }

    /// `int_0^s f*` for `0 <= s <= s_max`.
    pub fn cumulative_at(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let j = self.points.partition_point(|&x| x < s).clamp(1, self.points.len() - 1);
        let (a, ca) = (self.points[j - 1], self.cumulative[j - 1]);
        if s == self.points[j] {
            return self.cumulative[j];
        }
        match &self.source {
            Source::Radial(f) => {
                if j == 1 {
                    f.head_integral(s)
                } else {
                    ca + f.measure_integral(a, s)
                }
            }
            Source::Steps => ca + self.values[j] * (s - a),
        }
    }

    /// `lim_{s -> 0} LOG(s)^gamma int_0^s f*`: zero, finite, or `+inf`.
    pub fn head_limit(&self, gamma: f64) -> f64 {
        match &self.source {
            Source::Radial(f) => singular_limit(f, gamma),
            Source::Steps => 0.0,
        }
    }

    /// `int_0^inf f*`, using the tail law beyond the last node.
    pub fn total(&self) -> f64 {
        let last = *self.cumulative.last().expect("non-empty");
        match self.tail {
            TailLaw::Vanishing => last,
            TailLaw::Power(b) => {
                if b <= 1.0 {
                    f64::INFINITY
                } else {
                    last + self.values.last().expect("non-empty") * self.s_max() / (b - 1.0)
                }
            }
        }
    }

    pub fn rows(&self, gamma: f64) -> Vec<ProfileRow> {
        self.points
            .iter()
            .zip(&self.cumulative)
            .skip(1)
            .map(|(&s, &c)| {
                let weight = loge(s).powf(gamma);
                ProfileRow { s, weight, cumulative: c, weighted_value: weight * c }
            })
            .collect()
    }
}

/// `lim_{s -> 0} LOG(s)^gamma int_0^s f*` from the origin law of `f`.
pub(crate) fn singular_limit(f: &RadialProfile, gamma: f64) -> f64 {
    match f.origin_law() {
        OriginLaw::Bounded => 0.0,
        OriginLaw::LogSingular { amplitude, power, log_power } => {
            if power < 1.0 {
                return 0.0;
            }
            if power > 1.0 || log_power <= 1.0 {
                return f64::INFINITY;
            }
            let d = gamma - (log_power - 1.0);
            if d.abs() <= 1e-12 * (1.0 + gamma) {
                // The head integral is pre Y^(1-l) / (l-1) with Y = log(omega/s).
                let n = f.dim as f64;
                amplitude * f.omega() * n.powf(log_power) / (log_power - 1.0)
            } else if d < 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat::unit_ball_volume;
    use proptest::prelude::*;

    fn grid(s_max: f64) -> MeasureGrid {
        MeasureGrid::new(1e-12 * s_max, s_max, 4096).unwrap()
    }

    #[test]
    fn indicator_rearranges_to_interval() {
        let f = RadialProfile::indicator(1, 1.0).unwrap();
        let r = rearrange(&f, &grid(10.0)).unwrap();
        for (&s, &v) in r.points.iter().zip(&r.values) {
            assert_eq!(v, if s <= 2.0 { 1.0 } else { 0.0 });
        }
        assert!((r.cumulative_at(10.0) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn exponential_against_histogram_oracle() {
        // f = e^{-|x|} in one dimension: f*(s) = e^{-s/2}. The oracle sorts a
        // fine sampling of f on [-40, 40] and reads off the value at cumulative measure s.
        let f = RadialProfile::exponential(1, 1.0).unwrap();
        let r = rearrange(&f, &grid(30.0)).unwrap();
        let h = 1e-4;
        let mut samples: Vec<f64> = (0..800_000).map(|i| (-(-40.0 + (i as f64 + 0.5) * h).abs()).exp()).collect();
        samples.sort_by(|a, b| b.total_cmp(a));
        for &s in &[0.01, 0.5, 1.0, 3.0, 10.0, 25.0] {
            let hist = samples[(s / h) as usize];
            let j = r.points.partition_point(|&x| x < s);
            let exact = (-s / 2.0).exp();
            assert!((hist - exact).abs() < 2e-4);
            assert!((f.rearranged(s) - exact).abs() < 1e-14);
            assert!(r.values[j] <= (-r.points[j - 1] / 2.0).exp());
        }
    }

    #[test]
    fn scaling_commutes_with_rearrangement() {
        let f = RadialProfile::gaussian(2, 0.7).unwrap();
        let a = rearrange(&f.scaled(3.0), &grid(50.0)).unwrap();
        let b = rearrange(&f, &grid(50.0)).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - 3.0 * y).abs() <= 1e-15 * x.max(1.0));
        }
    }

    #[test]
    fn power_integrals_preserved() {
        // int |f|^q dx by the radial formula against the measure-axis cumulative.
        let f = RadialProfile::exponential(2, 1.3).unwrap();
        for &q in &[1.0, 2.0, 3.5] {
            let r = rearrange(&f, &grid(1e4)).unwrap().powered(q);
            let radial = 2.0 * std::f64::consts::PI / (1.3 * q).powi(2);
            assert!((r.total() - radial).abs() < 1e-8 * radial);
        }
    }

    #[test]
    fn powered_values_are_exact_powers() {
        let f = RadialProfile::fbeta(1, 1.0).unwrap();
        let r = rearrange(&f, &MeasureGrid::for_profile(&f, 2.0).unwrap()).unwrap();
        let r2 = r.powered(2.5);
        for (a, b) in r.values.iter().zip(&r2.values) {
            assert_eq!(a.powf(2.5), *b);
        }
        let direct = rearrange(&f.pow(2.5), &MeasureGrid::for_profile(&f, 2.0).unwrap()).unwrap();
        for (a, b) in direct.values.iter().zip(&r2.values).skip(1) {
            assert!((a - b).abs() <= 8.0 * f64::EPSILON * a);
        }
    }

    #[test]
    fn rejects_non_monotone_input() {
        let f = RadialProfile::lee_ni(1).unwrap().scaled(-1.0);
        assert!(rearrange(&f, &grid(1.0)).is_ok());
        let bad = RadialProfile { shape: crate::heat::Shape::Sampled { radii: vec![0.0, 1.0], values: vec![1.0, 2.0], tail_exponent: 0.0 }, ..f };
        assert!(matches!(rearrange(&bad, &grid(1.0)), Err(ZygmundError::NotMonotone(_))));
    }

    #[test]
    fn grid_rearrangement_is_a_step_function() {
        let u = SpatialGrid::from_fn(1, 1.0, 8, |x: &[f64]| x[0]).unwrap();
        let r = rearrange_grid(&u, None);
        assert_eq!(r.values[1], 0.875);
        assert!((r.cumulative_at(0.625) - (0.875 * 0.5 + 0.625 * 0.125)).abs() < 1e-15);
        assert!((r.total() - 0.25 * (0.875 + 0.625 + 0.375 + 0.125) * 2.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn cumulative_is_concave(rate in 0.1_f64..10.0, dim in 1usize..4) {
            let f = RadialProfile::exponential(dim, rate).unwrap();
            let s_max = unit_ball_volume(dim) * (40.0 / rate).powi(dim as i32);
            let r = rearrange(&f, &MeasureGrid::new(1e-10 * s_max, s_max, 400).unwrap()).unwrap();
            for j in 1..r.points.len() - 1 {
                let slope_l = (r.cumulative[j] - r.cumulative[j - 1]) / (r.points[j] - r.points[j - 1]);
                let slope_r = (r.cumulative[j + 1] - r.cumulative[j]) / (r.points[j + 1] - r.points[j]);
                prop_assert!(r.cumulative[j + 1] >= r.cumulative[j]);
                prop_assert!(slope_r <= slope_l * (1.0 + 1e-9));
            }
        }
    }
}
