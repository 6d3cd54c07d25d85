use super::{HeatError, SpatialGrid};
use crate::quad::{integrate, integrate_pieces, integrate_to_infinity};
use crate::special::gamma;

/// Volume `omega_N` of the unit ball in `R^N`.
pub fn unit_ball_volume(dim: usize) -> f64 {
    let n = dim as f64;
    std::f64::consts::PI.powf(n / 2.0) / gamma(n / 2.0 + 1.0)
}

/// Base shapes of radial profiles. `Fbeta` is
/// `r^(-N) (log(e + 1/r))^(-N/2 - 1 - beta)`, `LeeNi` is `(1 + r)^(-N)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Indicator { radius: f64 },
    Gaussian { width: f64 },
    Exponential { rate: f64 },
    Fbeta { beta: f64 },
    LeeNi,
    Constant,
    /// Piecewise linear through `(radii[i], values[i])`, `radii[0] = 0`; beyond
    /// the last radius `v_K (r / r_K)^(-tail_exponent)`, identically zero when
    /// the exponent is infinite.
    Sampled { radii: Vec<f64>, values: Vec<f64>, tail_exponent: f64 },
    /// Pointwise product of two profiles of the same dimension.
    Product(Box<RadialProfile>, Box<RadialProfile>),
}

/// Decay of the rearrangement at large measure: `f*(s) ~ s^(-b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailLaw {
    /// Compact support or faster than any power.
    Vanishing,
    Power(f64),
}

/// Behaviour at the origin. `LogSingular` means
/// `f*(s) ~ amplitude (omega/s)^power (N^(-1) log(omega/s))^(-log_power)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OriginLaw {
    Bounded,
    LogSingular { amplitude: f64, power: f64, log_power: f64 },
}

/// Nonnegative, radially non-increasing function on `R^N`:
/// `r -> (scale * shape(max(r, cap)))^power`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    pub dim: usize,
    pub shape: Shape,
    pub scale: f64,
    pub power: f64,
    pub cap: f64,
}

fn profile_err(msg: impl Into<String>) -> HeatError {
    HeatError::Profile(msg.into())
}

impl RadialProfile {
    fn analytic(dim: usize, shape: Shape) -> Result<Self, HeatError> {
        if dim == 0 {
            return Err(HeatError::Dimension(dim));
        }
        Ok(Self { dim, shape, scale: 1.0, power: 1.0, cap: 0.0 })
    }

    pub fn indicator(dim: usize, radius: f64) -> Result<Self, HeatError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(profile_err("indicator radius must be positive"));
        }
        Self::analytic(dim, Shape::Indicator { radius })
    }

    pub fn gaussian(dim: usize, width: f64) -> Result<Self, HeatError> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(profile_err("gaussian width must be positive"));
        }
        Self::analytic(dim, Shape::Gaussian { width })
    }

    pub fn exponential(dim: usize, rate: f64) -> Result<Self, HeatError> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(profile_err("exponential rate must be positive"));
        }
        Self::analytic(dim, Shape::Exponential { rate })
    }

    /// `f_beta`, admissible for `beta > -N/2`.
    pub fn fbeta(dim: usize, beta: f64) -> Result<Self, HeatError> {
        if !(beta > -(dim as f64) / 2.0 && beta.is_finite()) {
            return Err(profile_err(format!("f_beta needs beta > -N/2, got {beta}")));
        }
        Self::analytic(dim, Shape::Fbeta { beta })
    }

    /// `phi_N = (1 + |x|)^(-N)`.
    pub fn lee_ni(dim: usize) -> Result<Self, HeatError> {
        Self::analytic(dim, Shape::LeeNi)
    }

    pub fn constant(dim: usize) -> Result<Self, HeatError> {
        Self::analytic(dim, Shape::Constant)
    }

    pub fn sampled(
        dim: usize,
        radii: Vec<f64>,
        values: Vec<f64>,
        tail_exponent: f64,
    ) -> Result<Self, HeatError> {
        if radii.len() < 2 || radii.len() != values.len() {
            return Err(profile_err("sampled profile needs matching radii and values, at least two"));
        }
        if radii[0] != 0.0 || radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(profile_err("radii must start at 0 and increase strictly"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(profile_err("values must be finite and nonnegative"));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(profile_err("values must be non-increasing"));
        }
        if !(tail_exponent >= 0.0) {
            return Err(profile_err("tail exponent must be nonnegative"));
        }
        Self::analytic(dim, Shape::Sampled { radii, values, tail_exponent })
    }

    pub fn product(&self, other: &RadialProfile) -> Result<Self, HeatError> {
        if self.dim != other.dim {
            return Err(profile_err("product of profiles in different dimensions"));
        }
        Self::analytic(self.dim, Shape::Product(Box::new(self.clone()), Box::new(other.clone())))
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { scale: self.scale * k.abs(), ..self.clone() }
    }

    pub fn pow(&self, q: f64) -> Self {
        Self { power: self.power * q, ..self.clone() }
    }

    /// Constant below `radius`; removes an origin singularity.
    pub fn capped(&self, radius: f64) -> Self {
        Self { cap: self.cap.max(radius), ..self.clone() }
    }

    fn base(&self, r: f64) -> f64 {
        let n = self.dim as f64;
        match &self.shape {
            Shape::Indicator { radius } => {
                if r <= *radius {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::Gaussian { width } => (-(r / width).powi(2)).exp(),
            Shape::Exponential { rate } => (-rate * r).exp(),
            Shape::Fbeta { beta } => {
                if r == 0.0 {
                    f64::INFINITY
                } else {
                    r.powf(-n) * (1.0_f64.exp() + 1.0 / r).ln().powf(-(n / 2.0 + 1.0 + beta))
                }
            }
            Shape::LeeNi => (1.0 + r).powf(-n),
            Shape::Constant => 1.0,
            Shape::Sampled { radii, values, tail_exponent } => {
                let last = radii.len() - 1;
                if r >= radii[last] {
                    if tail_exponent.is_infinite() {
                        return if r == radii[last] { values[last] } else { 0.0 };
                    }
                    return values[last] * (r / radii[last]).powf(-tail_exponent);
                }
                let j = radii.partition_point(|&x| x <= r) - 1;
                let w = (r - radii[j]) / (radii[j + 1] - radii[j]);
                values[j] + w * (values[j + 1] - values[j])
            }
            Shape::Product(a, b) => {
                let x = a.value(r);
                if x == 0.0 {
                    0.0
                } else {
                    x * b.value(r)
                }
            }
        }
    }

    /// `f(r)`; `+inf` only at the origin of an uncapped singular profile.
    pub fn value(&self, r: f64) -> f64 {
        let b = self.base(r.max(self.cap));
        if b == 0.0 {
            return 0.0;
        }
        (self.scale * b).powf(self.power)
    }

    pub fn omega(&self) -> f64 {
        unit_ball_volume(self.dim)
    }

    /// Radius of the ball of measure `s`.
    pub fn radius_of(&self, s: f64) -> f64 {
        (s / self.omega()).powf(1.0 / self.dim as f64)
    }

    pub fn measure_of(&self, r: f64) -> f64 {
        self.omega() * r.powi(self.dim as i32)
    }

    /// Rearrangement `f*(s) = f(r(s))`.
    pub fn rearranged(&self, s: f64) -> f64 {
        self.value(self.radius_of(s))
    }

    pub fn origin_law(&self) -> OriginLaw {
        match self.shape {
            Shape::Fbeta { beta } if self.cap == 0.0 => {
                let n = self.dim as f64;
                OriginLaw::LogSingular {
                    amplitude: self.scale.powf(self.power),
                    power: self.power,
                    log_power: (n / 2.0 + 1.0 + beta) * self.power,
                }
            }
            Shape::Product(ref a, ref b) if self.cap == 0.0 => {
                let k = self.scale.powf(self.power);
                let value_at = |f: &RadialProfile| f.value(0.0);
                match (a.origin_law(), b.origin_law()) {
                    (OriginLaw::Bounded, OriginLaw::Bounded) => OriginLaw::Bounded,
                    (OriginLaw::LogSingular { amplitude, power, log_power }, OriginLaw::Bounded) => {
                        OriginLaw::LogSingular {
                            amplitude: k * (amplitude * value_at(b)).powf(self.power),
                            power: power * self.power,
                            log_power: log_power * self.power,
                        }
                    }
                    (OriginLaw::Bounded, OriginLaw::LogSingular { amplitude, power, log_power }) => {
                        OriginLaw::LogSingular {
                            amplitude: k * (amplitude * value_at(a)).powf(self.power),
                            power: power * self.power,
                            log_power: log_power * self.power,
                        }
                    }
                    (
                        OriginLaw::LogSingular { amplitude: a1, power: p1, log_power: l1 },
                        OriginLaw::LogSingular { amplitude: a2, power: p2, log_power: l2 },
                    ) => OriginLaw::LogSingular {
                        amplitude: k * (a1 * a2).powf(self.power),
                        power: (p1 + p2) * self.power,
                        log_power: (l1 + l2) * self.power,
                    },
                }
            }
            _ => OriginLaw::Bounded,
        }
    }

    pub fn tail_law(&self) -> TailLaw {
        if self.scale == 0.0 {
            return TailLaw::Vanishing;
        }
        let n = self.dim as f64;
        match &self.shape {
            Shape::Indicator { .. } | Shape::Gaussian { .. } | Shape::Exponential { .. } => TailLaw::Vanishing,
            Shape::Fbeta { .. } | Shape::LeeNi => TailLaw::Power(self.power),
            Shape::Constant => TailLaw::Power(0.0),
            Shape::Sampled { values, tail_exponent, .. } => {
                if tail_exponent.is_infinite() || *values.last().expect("non-empty") == 0.0 {
                    TailLaw::Vanishing
                } else {
                    TailLaw::Power(tail_exponent / n * self.power)
                }
            }
            Shape::Product(a, b) => match (a.tail_law(), b.tail_law()) {
                (TailLaw::Power(x), TailLaw::Power(y)) => TailLaw::Power((x + y) * self.power),
                _ => TailLaw::Vanishing,
            },
        }
    }

    /// Radii at which the profile has a jump or kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        if self.cap > 0.0 {
            out.push(self.cap);
        }
        match &self.shape {
            Shape::Indicator { radius } => out.push(*radius),
            Shape::Sampled { radii, .. } if radii.len() <= 20_000 => out.extend_from_slice(&radii[1..]),
            Shape::Product(a, b) => {
                out.extend(a.breakpoints());
                out.extend(b.breakpoints());
            }
            _ => {}
        }
        out.retain(|&r| r >= self.cap);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Largest measure on which the rearrangement is positive.
    pub fn support_measure(&self) -> f64 {
        match &self.shape {
            Shape::Indicator { radius } => self.measure_of(*radius),
            Shape::Sampled { radii, values, tail_exponent } if tail_exponent.is_infinite() => {
                let last = values.iter().rposition(|&v| v > 0.0).map_or(0, |i| (i + 1).min(radii.len() - 1));
                self.measure_of(radii[last])
            }
            Shape::Product(a, b) => a.support_measure().min(b.support_measure()),
            _ => f64::INFINITY,
        }
    }

    /// `int_0^{s0} f*(s) ds` for small `s0`, using the origin law.
    pub fn head_integral(&self, s0: f64) -> f64 {
        match self.origin_law() {
            OriginLaw::Bounded => {
                if s0 <= self.measure_of(self.cap) {
                    s0 * self.value(0.0)
                } else {
                    integrate(|s| self.rearranged(s), 0.0, s0, 0.0, 1e-13, 200).value
                }
            }
            OriginLaw::LogSingular { amplitude, power, log_power } => {
                let omega = self.omega();
                let n = self.dim as f64;
                let y0 = (omega / s0).ln();
                if power > 1.0 || (power == 1.0 && log_power <= 1.0) || y0 <= 0.0 {
                    return f64::INFINITY;
                }
                let pre = amplitude * omega.powf(power) * n.powf(log_power);
                if power == 1.0 {
                    pre * y0.powf(1.0 - log_power) / (log_power - 1.0)
                } else {
                    let q = integrate_to_infinity(
                        |u: f64| (-(1.0 - power) * u).exp() * (y0 + u).powf(-log_power),
                        0.0,
                        0.0,
                        1e-13,
                        400,
                    );
                    pre * s0.powf(1.0 - power) * q.value
                }
            }
        }
    }

    /// Measure below which the head law is used.
    pub fn head_measure(&self, s_hi: f64) -> f64 {
        match self.origin_law() {
            OriginLaw::Bounded => (1e-12 * s_hi).min(self.measure_of(self.cap).max(f64::MIN_POSITIVE)),
            OriginLaw::LogSingular { .. } => (1e-12 * s_hi).min(self.omega() * 1e-12_f64.powi(self.dim as i32)),
        }
    }

    /// Measures of the breakpoints, sorted.
    pub fn measure_breakpoints(&self) -> Vec<f64> {
        self.breakpoints().into_iter().map(|r| self.measure_of(r)).collect()
    }

    /// `int_{s_lo}^{s_hi} f*(s) ds` by adaptive quadrature in `log s`.
    pub fn measure_integral(&self, s_lo: f64, s_hi: f64) -> f64 {
        self.measure_integral_with(s_lo, s_hi, &self.measure_breakpoints())
    }

    /// As [`Self::measure_integral`] with precomputed [`Self::measure_breakpoints`].
    pub fn measure_integral_with(&self, s_lo: f64, s_hi: f64, breaks_s: &[f64]) -> f64 {
        if !(s_hi > s_lo) {
            return 0.0;
        }
        let mut breaks = vec![s_lo.ln()];
        let first = breaks_s.partition_point(|&s| s <= s_lo);
        breaks.extend(breaks_s[first..].iter().take_while(|&&s| s < s_hi).map(|s| s.ln()));
        breaks.push(s_hi.ln());
        integrate_pieces(
            |v: f64| {
                let s = v.exp();
                self.rearranged(s) * s
            },
            &breaks,
            0.0,
            1e-12,
            2000,
        )
        .value
    }

    /// `int_{B(0; sigma)} f dx`.
    pub fn ball_mass(&self, sigma: f64) -> f64 {
        let s = self.measure_of(sigma);
        if s == 0.0 {
            return 0.0;
        }
        let s0 = self.head_measure(s);
        self.head_integral(s0) + self.measure_integral(s0, s)
    }

    /// Samples onto a grid at cell centres. For singular profiles the `2^N`
    /// cells touching the origin take the average of `f` over their union.
    pub fn sample_grid(&self, half_width: f64, points: usize) -> Result<SpatialGrid<f64>, HeatError> {
        if self.dim > 2 {
            return Err(HeatError::Dimension(self.dim));
        }
        let mut g = SpatialGrid::from_fn(self.dim, half_width, points, |x| {
            self.value(x.iter().map(|c| c * c).sum::<f64>().sqrt())
        })?;
        if let OriginLaw::LogSingular { .. } = self.origin_law() {
            let h = g.spacing();
            let block = (2.0 * h).powi(self.dim as i32);
            let avg = self.ball_mass(self.radius_of(block)) / block;
            let mut x = [0.0; 2];
            for idx in 0..g.len() {
                g.fill_point(idx, &mut x);
                if x[..self.dim].iter().all(|c| c.abs() < h) {
                    g.values[idx] = avg;
                }
            }
        }
        Ok(g)
    }

    /// Smallest half width whose ball leaves less than `rel_tol` of the total
    /// mass outside; `None` when the profile is not integrable.
    pub fn box_half_width(&self, rel_tol: f64) -> Option<f64> {
        if self.tail_law() != TailLaw::Vanishing {
            if let TailLaw::Power(b) = self.tail_law() {
                if b <= 1.0 {
                    return None;
                }
            }
        }
        let total = self.ball_mass(1e12_f64.min(self.support_radius_hint() * 1e3));
        if !total.is_finite() || total <= 0.0 {
            return None;
        }
        let (mut lo, mut hi) = (1e-6, 1.0);
        while total - self.ball_mass(hi) > rel_tol * total {
            hi *= 2.0;
            if hi > 1e12 {
                return None;
            }
        }
        for _ in 0..60 {
            let mid = (lo * hi).sqrt();
            if total - self.ball_mass(mid) > rel_tol * total {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(hi)
    }

    fn support_radius_hint(&self) -> f64 {
        match &self.shape {
            Shape::Indicator { radius } => *radius,
            Shape::Gaussian { width } => 40.0 * width,
            Shape::Exponential { rate } => 800.0 / rate,
            Shape::Sampled { radii, .. } => *radii.last().expect("non-empty") * 10.0,
            Shape::Product(a, b) => a.support_radius_hint().min(b.support_radius_hint()),
            _ => 1e9,
        }
    }
}
