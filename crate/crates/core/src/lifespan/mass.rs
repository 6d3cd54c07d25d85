use super::LifespanError;
use crate::heat::{OriginLaw, RadialProfile};

const LN_LO: f64 = -40.0;
const STEP: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Head {
    /// `M(sigma) ~ M_0 (sigma / sigma_0)^N`.
    Power(f64),
    /// `M(sigma) ~ M_0 (ln sigma / ln sigma_0)^(1 - log_power)`.
    Log(f64),
}

/// `sigma -> int_{B(0; sigma)} phi` tabulated in `ln sigma`, with the origin
/// law below the table and cubic Hermite interpolation of `ln M` inside it.
#[derive(Clone, Debug, PartialEq)]
pub struct BallMass {
    pub dim: usize,
    ln_hi: f64,
    ln_m: Vec<f64>,
    /// `d ln M / d ln sigma` at the nodes.
    slope: Vec<f64>,
    head: Head,
}

impl BallMass {
    pub fn new(phi: &RadialProfile) -> Result<Self, LifespanError> {
        let n = phi.dim as f64;
        let head = match phi.origin_law() {
            OriginLaw::Bounded => Head::Power(n),
            OriginLaw::LogSingular { power, log_power, .. } if power == 1.0 && log_power > 1.0 => Head::Log(log_power),
            _ => return Err(LifespanError::Input("ball mass needs a locally integrable profile".into())),
        };
        // Keeps omega sigma^N below the overflow threshold.
        let ln_hi = 340.0 / n;
        let nodes = ((ln_hi - LN_LO) / STEP).ceil() as usize + 1;
        let breaks = phi.measure_breakpoints();
        let sigma = |i: usize| (LN_LO + STEP * i as f64).exp();
        let mut mass = Vec::with_capacity(nodes);
        mass.push(phi.ball_mass(sigma(0)));
        for i in 1..nodes {
            let (a, b) = (phi.measure_of(sigma(i - 1)), phi.measure_of(sigma(i)));
            mass.push(mass[i - 1] + phi.measure_integral_with(a, b, &breaks));
        }
        if !(mass[0] > 0.0 && mass.iter().all(|m| m.is_finite())) {
            return Err(LifespanError::Input("ball mass must be positive and finite".into()));
        }
        let slope = (0..nodes)
            .map(|i| {
                let r = sigma(i);
                n * phi.measure_of(r) * phi.value(r) / mass[i]
            })
            .collect();
        Ok(Self { dim: phi.dim, ln_hi: LN_LO + STEP * (nodes - 1) as f64, ln_m: mass.iter().map(|m| m.ln()).collect(), slope, head })
    }

    /// Largest tabulated `ln sigma`.
    pub fn ln_sigma_max(&self) -> f64 {
        self.ln_hi
    }

    /// `ln M(sigma)` from `ln sigma`; linear extrapolation above the table.
    pub fn ln_mass(&self, ln_sigma: f64) -> f64 {
        if ln_sigma <= LN_LO {
            return match self.head {
                Head::Power(n) => self.ln_m[0] + n * (ln_sigma - LN_LO),
                Head::Log(l) => self.ln_m[0] + (1.0 - l) * (ln_sigma / LN_LO).ln(),
            };
        }
        let last = self.ln_m.len() - 1;
        if ln_sigma >= self.ln_hi {
            return self.ln_m[last] + self.slope[last] * (ln_sigma - self.ln_hi);
        }
        let x = (ln_sigma - LN_LO) / STEP;
        let i = (x.floor() as usize).min(last - 1);
        let t = x - i as f64;
        let (y0, y1) = (self.ln_m[i], self.ln_m[i + 1]);
        let (d0, d1) = (self.slope[i] * STEP, self.slope[i + 1] * STEP);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1
    }

    pub fn mass(&self, ln_sigma: f64) -> f64 {
        self.ln_mass(ln_sigma).exp()
    }
}
