use crate::special::gamma;

/// Uniform-step solution of `u(t) = c + (1/Gamma(alpha)) int_0^t (t-s)^(alpha-1) |u|^(p-1) u ds`,
/// the spatially constant reduction of the mild formulation.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarPath {
    pub alpha: f64,
    pub step: f64,
    pub values: Vec<f64>,
    /// Time of the first node past the blow-up threshold.
    pub blow_up: Option<f64>,
}

impl ScalarPath {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|k| k as f64 * self.step)
    }

    /// Linear interpolation in `t^alpha`, where the solution is smooth near zero.
    pub fn at(&self, t: f64) -> Option<f64> {
        let x = t / self.step;
        let k = x.floor() as usize;
        if k + 1 >= self.values.len() {
            return (k < self.values.len() && x == k as f64).then(|| self.values[k]);
        }
        let (t0, t1) = (k as f64 * self.step, (k + 1) as f64 * self.step);
        let w = (t.powf(self.alpha) - t0.powf(self.alpha)) / (t1.powf(self.alpha) - t0.powf(self.alpha));
        Some(self.values[k] + w * (self.values[k + 1] - self.values[k]))
    }
}

/// Fractional Adams predictor-corrector with `steps` uniform steps on `[0, horizon]`.
pub fn scalar_volterra(c: f64, alpha: f64, p: f64, horizon: f64, steps: usize, threshold: f64) -> ScalarPath {
    let h = horizon / steps as f64;
    let f = |u: f64| u.abs().powf(p - 1.0) * u;
    let pa: Vec<f64> = (0..=steps + 1).map(|k| (k as f64).powf(alpha)).collect();
    let pa1: Vec<f64> = (0..=steps + 1).map(|k| (k as f64).powf(alpha + 1.0)).collect();
    let cp = h.powf(alpha) / gamma(alpha + 1.0);
    let cc = h.powf(alpha) / gamma(alpha + 2.0);
    let mut u = vec![c];
    let mut fu = vec![f(c)];
    let mut blow_up = None;
    for k in 0..steps {
        let mut pred = 0.0;
        let mut corr = (pa1[k] - (k as f64 - alpha) * pa[k + 1]) * fu[0];
        for j in 0..=k {
            pred += (pa[k + 1 - j] - pa[k - j]) * fu[j];
            if j >= 1 {
                corr += (pa1[k - j + 2] + pa1[k - j] - 2.0 * pa1[k - j + 1]) * fu[j];
            }
        }
        let up = c + cp * pred;
        let next = c + cc * (f(up) + corr);
        if !next.is_finite() || next.abs() > threshold {
            blow_up = Some((k + 1) as f64 * h);
            break;
        }
        u.push(next);
        fu.push(f(next));
    }
    ScalarPath { alpha, step: h, values: u, blow_up }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarBlowUp {
    /// Detection time at the finest resolution.
    pub time: f64,
    /// Detection time at half that resolution.
    pub coarse: f64,
}

impl ScalarBlowUp {
    /// Interval spanned by the two resolutions, widened by their difference.
    pub fn bracket(&self) -> (f64, f64) {
        let d = (self.time - self.coarse).abs();
        (self.time.min(self.coarse) - d, self.time.max(self.coarse) + d)
    }
}

/// Blow-up time of the scalar problem, `None` if the solution stays below
/// `threshold` on `[0, horizon]` at the finer resolution.
pub fn scalar_blow_up(c: f64, alpha: f64, p: f64, horizon: f64, steps: usize) -> Option<ScalarBlowUp> {
    let fine = scalar_volterra(c, alpha, p, horizon, steps, 1e12).blow_up?;
    let coarse = scalar_volterra(c, alpha, p, horizon, steps / 2, 1e12).blow_up.unwrap_or(horizon);
    Some(ScalarBlowUp { time: fine, coarse })
}
