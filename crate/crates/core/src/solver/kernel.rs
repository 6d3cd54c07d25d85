use rayon::prelude::*;

use super::grid::TimeGrid;
use super::SolverError;
use crate::special::{build_theta_quadrature, ThetaQuadrature};

const PER_DECADE: usize = 600;
const LN_Z_MIN: f64 = -23.025850929940457; // ln 1e-10
const LN_Z_MAX: f64 = 32.23619130191664; // ln 1e14

/// Cubic Hermite interpolants in `ln z` of the rule's Laplace transforms
/// `F(z) = sum w e^{-theta z}` and `G(z) = sum w theta e^{-theta z}`, so that
/// the symbols of `P_alpha` and `S_alpha` at `z = |xi|^2 t^alpha` are `F` and `G`,
/// and of the antiderivative `A(z) = int_0^z F = sum w (1 - e^{-theta z}) / theta`.
#[derive(Clone, Debug)]
pub struct LaplaceTable {
    pub alpha: f64,
    pub rule: ThetaQuadrature<f64>,
    step: f64,
    /// `(F, dF/du, G, dG/du, A, dA/du)` at `u_i = LN_Z_MIN + i step`.
    knots: Vec<[f64; 6]>,
    moments: [f64; 3],
}

impl LaplaceTable {
    pub fn new(alpha: f64, tol: f64, max_nodes: usize) -> Result<Self, SolverError> {
        Ok(Self::from_rule(build_theta_quadrature(alpha, tol, max_nodes)?))
    }

    pub fn from_rule(rule: ThetaQuadrature<f64>) -> Self {
        let step = std::f64::consts::LN_10 / PER_DECADE as f64;
        let count = ((LN_Z_MAX - LN_Z_MIN) / step).ceil() as usize + 1;
        let knots = (0..count)
            .into_par_iter()
            .map(|i| {
                let z = (LN_Z_MIN + i as f64 * step).exp();
                let [f, g, h] = direct(&rule, z);
                [f, -z * g, g, -z * h, antiderivative(&rule, z), z * f]
            })
            .collect();
        let moments = [rule.moment(0.0), rule.moment(1.0), rule.moment(2.0)];
        Self { alpha: rule.alpha, rule, step, knots, moments }
    }

    /// `[F, G, A]` at `z = e^{ln_z}`; `ln_z = -inf` stands for `z = 0`.
    pub fn triple(&self, ln_z: f64) -> [f64; 3] {
        let [m0, m1, m2] = self.moments;
        if ln_z < LN_Z_MIN {
            let z = ln_z.exp();
            return [m0 - z * m1, m1 - z * m2, z * (m0 - 0.5 * z * m1)];
        }
        let u = (ln_z - LN_Z_MIN) / self.step;
        let i = u.floor() as usize;
        if i + 1 >= self.knots.len() {
            let z = ln_z.exp();
            let [f, g, _] = direct(&self.rule, z);
            return [f, g, antiderivative(&self.rule, z)];
        }
        let x = u - i as f64;
        let x2 = x * x;
        let x3 = x2 * x;
        let (h00, h10, h01, h11) =
            (2.0 * x3 - 3.0 * x2 + 1.0, (x3 - 2.0 * x2 + x) * self.step, -2.0 * x3 + 3.0 * x2, (x3 - x2) * self.step);
        let (a, b) = (&self.knots[i], &self.knots[i + 1]);
        let mut out = [0.0; 3];
        for (s, o) in out.iter_mut().enumerate() {
            *o = h00 * a[2 * s] + h10 * a[2 * s + 1] + h01 * b[2 * s] + h11 * b[2 * s + 1];
        }
        out
    }

    fn lookup(&self, z: f64, slot: usize) -> f64 {
        debug_assert!(z >= 0.0);
        self.triple(z.ln())[slot]
    }

    /// Symbol of `P_alpha(t)` at `z = |xi|^2 t^alpha`.
    pub fn p_symbol(&self, z: f64) -> f64 {
        self.lookup(z, 0)
    }

    /// Symbol of `S_alpha(t)` at `z = |xi|^2 t^alpha`.
    pub fn s_symbol(&self, z: f64) -> f64 {
        self.lookup(z, 1)
    }

    pub fn antiderivative(&self, z: f64) -> f64 {
        self.lookup(z, 2)
    }

    /// `alpha int_a^b tau^(alpha-1) S(tau) dtau` at modulus `k2`, given
    /// `a^alpha` and `b^alpha`; equals `(F(k2 a^alpha) - F(k2 b^alpha)) / k2`.
    pub fn duhamel(&self, k2: f64, a_pow: f64, b_pow: f64) -> f64 {
        let lk = k2.ln();
        let lo = self.triple(lk + a_pow.ln());
        let hi = self.triple(lk + b_pow.ln());
        self.interval(k2, a_pow, b_pow, &lo, &hi).0
    }

    /// `int_{y_a}^{y_b} (y - y_a) G(k2 y) dy`, the first moment of the Duhamel
    /// kernel in `y = tau^alpha`; `k2^2` times it equals
    /// `A(z_b) - A(z_a) - (z_b - z_a) F(z_b)`.
    pub fn duhamel_moment(&self, k2: f64, ya: f64, yb: f64) -> f64 {
        let lk = k2.ln();
        let lo = self.triple(lk + ya.ln());
        let hi = self.triple(lk + yb.ln());
        self.interval(k2, ya, yb, &lo, &hi).1
    }

    /// Zeroth and first kernel moments on `[ya, yb]` from the triples at both ends.
    fn interval(&self, k2: f64, ya: f64, yb: f64, lo: &[f64; 3], hi: &[f64; 3]) -> (f64, f64) {
        let gap = yb - ya;
        if k2 == 0.0 {
            let m1 = self.moments[1];
            return (m1 * gap, 0.5 * m1 * gap * gap);
        }
        let (za, zb) = (k2 * ya, k2 * yb);
        let drop = lo[0] - hi[0];
        let mid = || self.s_symbol(0.5 * (za + zb));
        let zeroth = if drop > 1e-4 * lo[0] {
            drop / k2
        } else {
            gap * (lo[1] + 4.0 * mid() + hi[1]) / 6.0
        };
        let first = if drop > 1e-3 * lo[0] {
            (hi[2] - lo[2] - (zb - za) * hi[0]) / (k2 * k2)
        } else {
            gap * gap * (2.0 * mid() + hi[1]) / 6.0
        };
        (zeroth, first)
    }
}

fn antiderivative(rule: &ThetaQuadrature<f64>, z: f64) -> f64 {
    rule.nodes.iter().zip(&rule.weights).map(|(&th, &w)| -w * (-th * z).exp_m1() / th).sum()
}

/// `[F, G, H]` with `H = sum w theta^2 e^{-theta z}`, summed over the rule.
fn direct(rule: &ThetaQuadrature<f64>, z: f64) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (&th, &w) in rule.nodes.iter().zip(&rule.weights) {
        let e = w * (-th * z).exp();
        out[0] += e;
        out[1] += e * th;
        out[2] += e * th * th;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ProductRule {
    /// `alpha w_kj S(t_k - t_j) F(u_j)`.
    LeftPoint,
    /// Exact kernel moment on each interval, source frozen at the left node.
    ExactLeft,
    /// Exact kernel moment on each interval, source averaged over its two nodes.
    ExactAverage,
    /// Exact kernel moments against the source interpolated linearly in
    /// `y = (t_k - s)^alpha` on each interval.
    #[default]
    ExactLinear,
}

/// Per-class Fourier coefficients of the discrete Duhamel map on one time grid:
/// `u_k = P_k phi + sum_{i <= k} C_ki F(u_i)`.
#[derive(Clone, Debug)]
pub struct DuhamelTables {
    pub classes: usize,
    /// `P(t_k)` symbol rows.
    pub propagator: Vec<Vec<f64>>,
    /// Row `k` holds `C_ki` for `i = 0..=k`, class-major within each `i`.
    pub source: Vec<Vec<f64>>,
}

impl DuhamelTables {
    pub fn new(table: &LaplaceTable, grid: &TimeGrid, moduli: &[f64], rule: ProductRule) -> Self {
        let n = grid.steps();
        let nc = moduli.len();
        let propagator = (0..=n).map(|k| moduli.iter().map(|&k2| table.p_symbol(k2 * grid.powers[k])).collect()).collect();
        let log_moduli: Vec<f64> = moduli.iter().map(|m| m.ln()).collect();
        let source = (0..=n)
            .into_par_iter()
            .map(|k| {
                let mut row = vec![0.0; (k + 1) * nc];
                let lags: Vec<f64> = (0..=k).map(|j| grid.lag_power(k, j)).collect();
                let log_lags: Vec<f64> = lags.iter().map(|y| y.ln()).collect();
                let mut cache = vec![[0.0; 3]; k + 1];
                for (c, &k2) in moduli.iter().enumerate() {
                    for (t, &ly) in cache.iter_mut().zip(&log_lags) {
                        *t = table.triple(log_moduli[c] + ly);
                    }
                    for j in 0..k {
                        // y decreases in j: node j sits at y = lags[j], node j + 1 at lags[j + 1].
                        let (hi, lo) = (lags[j], lags[j + 1]);
                        match rule {
                            ProductRule::LeftPoint => {
                                row[j * nc + c] += grid.alpha * grid.weight(k, j) * cache[j][1];
                            }
                            _ => {
                                let (d, m) = table.interval(k2, lo, hi, &cache[j + 1], &cache[j]);
                                let (wj, wj1) = match rule {
                                    ProductRule::ExactLeft => (d, 0.0),
                                    ProductRule::ExactAverage => (0.5 * d, 0.5 * d),
                                    _ => (m / (hi - lo), d - m / (hi - lo)),
                                };
                                row[j * nc + c] += wj;
                                row[(j + 1) * nc + c] += wj1;
                            }
                        }
                    }
                }
                row
            })
            .collect();
        Self { classes: nc, propagator, source }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subordination::{Family, SubordinatedOperator};

    #[test]
    fn interpolant_matches_direct_sums() {
        let t = LaplaceTable::new(0.6, 1e-8, 20_000).unwrap();
        let mut z = 1e-12;
        while z < 1e15 {
            let [f, g, _] = direct(&t.rule, z);
            assert!((t.p_symbol(z) - f).abs() < 1e-11 * f, "F at {z}: {} vs {f}", t.p_symbol(z));
            assert!((t.s_symbol(z) - g).abs() < 1e-11 * g, "G at {z}: {} vs {g}", t.s_symbol(z));
            z *= 1.37;
        }
        assert_eq!(t.p_symbol(0.0), t.moments[0]);
    }

    #[test]
    fn duhamel_matches_closed_form() {
        let t = LaplaceTable::new(0.4, 1e-8, 20_000).unwrap();
        let op = SubordinatedOperator::<f64>::from_rule(t.rule.clone());
        for &k2 in &[0.0, 1e-9, 0.3, 20.0, 4e3] {
            for &(a, b) in &[(0.0, 1e-6), (0.05, 0.6), (1.0, 1.0 + 1e-7), (2.0, 30.0)] {
                let exact = op.duhamel_symbol(a, b, k2);
                let c = t.duhamel(k2, f64::powf(a, 0.4), f64::powf(b, 0.4));
                assert!((c - exact).abs() <= 1e-9 * exact.abs() + 1e-15, "k2 {k2} [{a},{b}]: {c} vs {exact}");
            }
        }
    }

    #[test]
    fn first_moment_matches_quadrature() {
        let t = LaplaceTable::new(0.7, 1e-8, 20_000).unwrap();
        for &k2 in &[0.0, 1e-9, 0.3, 20.0, 4e3] {
            for &(ya, yb) in &[(0.0, 1e-6), (0.05, 0.6), (1.0, 1.0 + 1e-7), (2.0, 30.0)] {
                let q = crate::quad::integrate(|y: f64| (y - ya) * t.s_symbol(k2 * y), ya, yb, 0.0, 1e-13, 2000);
                let m = t.duhamel_moment(k2, ya, yb);
                assert!((m - q.value).abs() <= 1e-9 * q.value.abs() + 1e-20, "k2 {k2} [{ya},{yb}]: {m} vs {}", q.value);
            }
        }
    }

    #[test]
    fn antiderivative_matches_direct_sum() {
        let t = LaplaceTable::new(0.3, 1e-8, 20_000).unwrap();
        let mut z = 1e-12;
        while z < 1e15 {
            let a = antiderivative(&t.rule, z);
            assert!((t.antiderivative(z) - a).abs() < 1e-11 * a, "A at {z}");
            z *= 1.71;
        }
    }

    #[test]
    fn s_symbol_matches_operator() {
        let t = LaplaceTable::new(0.8, 1e-8, 20_000).unwrap();
        let op = SubordinatedOperator::<f64>::from_rule(t.rule.clone());
        for &k2 in &[0.5, 7.0] {
            for &tau in &[0.01, 0.4, 3.0] {
                let z = k2 * f64::powf(tau, 0.8);
                assert!((t.s_symbol(z) - op.symbol(Family::S, tau, k2)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rules_share_the_constant_mode() {
        let t = LaplaceTable::new(0.5, 1e-8, 20_000).unwrap();
        let grid = TimeGrid::graded(1.5, 16, 0.5).unwrap();
        let rows: Vec<_> = [ProductRule::LeftPoint, ProductRule::ExactLeft, ProductRule::ExactAverage, ProductRule::ExactLinear]
            .iter()
            .map(|&r| DuhamelTables::new(&t, &grid, &[0.0], r))
            .collect();
        for k in 1..=16 {
            let want = t.moments[1] * grid.powers[k];
            for r in &rows {
                let s: f64 = r.source[k].iter().sum();
                assert!((s - want).abs() < 1e-12 * want);
            }
        }
    }
}
