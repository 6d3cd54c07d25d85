use super::{HeatError, OriginLaw, RadialProfile, TailLaw};
use crate::quad::integrate_pieces;

/// `e^{t Delta} f` on `R` for a radial profile in one dimension, sampled at
/// `radii` (which must start at 0) and returned as a sampled profile.
///
/// `u(x) = int_0^inf f(y) (G_t(x - y) + G_t(x + y)) dy`, integrated in `log y`
/// with the origin law supplying the mass below `1e-12 sqrt(t)`.
pub fn radial_heat(f: &RadialProfile, t: f64, radii: &[f64]) -> Result<RadialProfile, HeatError> {
    if f.dim != 1 {
        return Err(HeatError::Dimension(f.dim));
    }
    if !(t > 0.0) {
        return Err(HeatError::NonPositiveTime);
    }
    let sq = t.sqrt();
    let g = |d: f64| (-d * d / (4.0 * t)).exp() / (4.0 * std::f64::consts::PI * t).sqrt();
    let y_h = 1e-12 * sq.min(1.0);
    let head = match f.origin_law() {
        OriginLaw::Bounded => y_h * f.value(0.0),
        OriginLaw::LogSingular { .. } => f.ball_mass(y_h) / 2.0,
    };
    let bps = f.breakpoints();
    let mut values: Vec<f64> = radii
        .iter()
        .map(|&x| {
            let top = x + 40.0 * sq;
            let mut breaks = vec![y_h.ln()];
            for &b in bps.iter().chain([x - 12.0 * sq, x - 3.0 * sq, x, x + 3.0 * sq, x + 12.0 * sq].iter()) {
                if b > y_h && b < top {
                    breaks.push(b.ln());
                }
            }
            breaks.push(top.ln());
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            let body = integrate_pieces(
                |v: f64| {
                    let y = v.exp();
                    f.value(y) * (g(x - y) + g(x + y)) * y
                },
                &breaks,
                0.0,
                1e-12,
                4000,
            );
            head * 2.0 * g(x) + body.value
        })
        .collect();
    // Convolution of symmetric decreasing functions is symmetric decreasing;
    // remove quadrature-level wiggles so the sample is admissible.
    for i in 1..values.len() {
        values[i] = values[i].min(values[i - 1]);
    }
    let tail = match f.tail_law() {
        TailLaw::Vanishing => f64::INFINITY,
        TailLaw::Power(b) => b * f.dim as f64,
    };
    RadialProfile::sampled(1, radii.to_vec(), values, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat::SpatialGrid;

    #[test]
    fn gaussian_evolves_in_closed_form() {
        // e^{t Delta} exp(-x^2) = (1 + 4t)^(-1/2) exp(-x^2 / (1 + 4t)).
        let f = RadialProfile::gaussian(1, 1.0).unwrap();
        let radii: Vec<f64> = (0..50).map(|i| i as f64 * 0.2).collect();
        for &t in &[1e-3, 0.3, 5.0] {
            let u = radial_heat(&f, t, &radii).unwrap();
            for &x in &radii {
                let e = (1.0 + 4.0 * t).powf(-0.5) * (-x * x / (1.0 + 4.0 * t)).exp();
                assert!((u.value(x) - e).abs() < 1e-11, "t {t}, x {x}");
            }
        }
    }

    #[test]
    fn singular_data_matches_grid_reference() {
        let f = RadialProfile::fbeta(1, 1.0).unwrap();
        let t = 0.5;
        let radii: Vec<f64> = (0..40).map(|i| i as f64 * 0.1).collect();
        let u = radial_heat(&f, t, &radii).unwrap();
        // f_beta decays like 1/|x|; a wide box keeps periodic images small.
        let mut g = SpatialGrid::from_fn(1, 400.0, 8192, |x: &[f64]| f.value(x[0].abs())).unwrap();
        let h = g.spacing();
        let avg = f.ball_mass(h) / (2.0 * h);
        g.values[4095] = avg;
        g.values[4096] = avg;
        let spec = crate::heat::heat_apply(t, &g).unwrap();
        for (i, x) in radii.iter().enumerate().step_by(5) {
            let idx = 4096 + (x / h).round() as usize;
            let xi = g.coordinate(idx);
            let r = u.value(xi.abs());
            assert!(((spec.values[idx] - r) / r).abs() < 2e-3, "i {i}: {} vs {r}", spec.values[idx]);
        }
    }
}
