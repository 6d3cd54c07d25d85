use super::wright::{wright_moment, WrightDensity};
use super::SpecialError;
use crate::quad::{kronrod_rule, Quad};
use crate::scalar::Real;

/// Moment orders the rule is certified against.
pub const CERTIFIED_MOMENTS: [f64; 5] = [-0.5, 0.0, 0.5, 1.0, 2.0];

/// Positive quadrature rule for `int_0^inf g(theta) M_alpha(theta) dtheta`.
///
/// Invariants: nodes strictly increasing and positive, weights nonnegative,
/// certified moments reproduced to `tol` (relative).
#[derive(Clone, Debug)]
pub struct ThetaQuadrature<T> {
    pub alpha: T,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub tol: f64,
    pub max_moment_error: f64,
}

impl<T: Real> ThetaQuadrature<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i g(theta_i)`.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut g: F) -> T {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * g(t)).sum()
    }

    pub fn moment(&self, delta: T) -> T {
        self.integrate(|t| t.powf(delta))
    }

    /// `sum_i w_i exp(-theta_i z)`, approximating `E_alpha(-z)`.
    pub fn laplace(&self, z: T) -> T {
        self.integrate(|t| (-(t * z)).exp())
    }
}

/// Panel of the composite rule. The head panel `[0, b]` maps `theta = b v^2`.
#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    head: bool,
}

/// Width of the origin panel; below it `exp(-theta z)` is flat for `z < 1e10`.
const HEAD: f64 = 1.0 / (1u64 << 39) as f64;
const GEOMETRIC_RATIO: f64 = 8.0;

impl Panel {
    fn nodes(&self) -> ([f64; 15], [f64; 15]) {
        if self.head {
            let (v, w) = kronrod_rule(0.0_f64, 1.0);
            let mut x = [0.0; 15];
            let mut wt = [0.0; 15];
            for i in 0..15 {
                x[i] = self.b * v[i] * v[i];
                wt[i] = w[i] * 2.0 * self.b * v[i];
            }
            (x, wt)
        } else {
            kronrod_rule(self.a, self.b)
        }
    }
}

fn panel_estimate(p: &Panel, m: &WrightDensity<f64>) -> Quad<f64> {
    let g = |t: f64| m.eval(t) * (t.powf(-0.5) + 1.0 + t * t);
    let (x, w) = p.nodes();
    let kron: f64 = x.iter().zip(&w).map(|(&t, &wt)| wt * g(t)).sum();
    // Embedded 7-point Gauss rule sits on the odd Kronrod nodes.
    let (_, wg) = gauss7(p);
    let gauss: f64 = (0..7).map(|j| wg[j] * g(x[2 * j + 1])).sum();
    Quad { value: kron, error: (kron - gauss).abs(), converged: true }
}

fn gauss7(p: &Panel) -> ([f64; 7], [f64; 7]) {
    const WG: [f64; 4] = [
        0.129_484_966_168_869_693_270_611_432_679_082,
        0.279_705_391_489_276_667_901_467_771_423_780,
        0.381_830_050_505_118_944_950_369_775_488_975,
        0.417_959_183_673_469_387_755_102_040_816_327,
    ];
    let (x, _) = p.nodes();
    let mut w = [0.0; 7];
    let full = [WG[0], WG[1], WG[2], WG[3], WG[2], WG[1], WG[0]];
    let (v, _) = kronrod_rule(0.0_f64, 1.0);
    for j in 0..7 {
        let base = full[j] * 0.5;
        w[j] = if p.head { base * 2.0 * p.b * v[2 * j + 1] } else { base * (p.b - p.a) };
    }
    let mut xs = [0.0; 7];
    for j in 0..7 {
        xs[j] = x[2 * j + 1];
    }
    (xs, w)
}

fn tail_end(m: &WrightDensity<f64>) -> f64 {
    let mut t = 4.0;
    while t < 1e4 && m.eval(t) * (1.0 + t * t) > 1e-24 {
        t *= 1.5;
    }
    t
}

/// Builds a positive rule reproducing the certified moments of `M_alpha` to
/// relative accuracy `tol`, using at most `max_nodes` nodes.
pub fn build_theta_quadrature<T: Real>(
    alpha: f64,
    tol: f64,
    max_nodes: usize,
) -> Result<ThetaQuadrature<T>, SpecialError> {
    let m = WrightDensity::new(alpha)?;
    let exact: Vec<f64> = CERTIFIED_MOMENTS
        .iter()
        .map(|&d| wright_moment(alpha, d))
        .collect::<Result<_, _>>()?;
    let t_max = tail_end(&m);

    let mut panels = vec![Panel { a: 0.0, b: HEAD, head: true }];
    let mut a = HEAD;
    while a < 1.0 {
        let b = (a * GEOMETRIC_RATIO).min(1.0);
        panels.push(Panel { a, b, head: false });
        a = b;
    }
    let body = 8;
    for k in 0..body {
        let lo = 1.0 + (t_max - 1.0) * k as f64 / body as f64;
        let hi = 1.0 + (t_max - 1.0) * (k + 1) as f64 / body as f64;
        panels.push(Panel { a: lo, b: hi, head: false });
    }
    let mut est: Vec<Quad<f64>> = panels.iter().map(|p| panel_estimate(p, &m)).collect();

    let mut goal = tol * 1e-2;
    loop {
        // Bisect non-head panels until the embedded error estimate meets `goal`.
        loop {
            let total: f64 = est.iter().map(|q| q.error).sum();
            if total <= goal || panels.len() * 15 > max_nodes {
                break;
            }
            let (idx, _) = est
                .iter()
                .enumerate()
                .filter(|(i, _)| !panels[*i].head)
                .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
                .expect("body panels exist");
            let p = panels[idx];
            let mid = 0.5 * (p.a + p.b);
            let left = Panel { a: p.a, b: mid, head: false };
            let right = Panel { a: mid, b: p.b, head: false };
            panels[idx] = left;
            est[idx] = panel_estimate(&left, &m);
            panels.push(right);
            est.push(panel_estimate(&right, &m));
        }
        let mut order: Vec<usize> = (0..panels.len()).collect();
        order.sort_by(|&i, &j| panels[i].a.total_cmp(&panels[j].a));
        let mut nodes = Vec::with_capacity(panels.len() * 15);
        let mut weights = Vec::with_capacity(panels.len() * 15);
        for &i in &order {
            let (x, w) = panels[i].nodes();
            for k in 0..15 {
                nodes.push(x[k]);
                weights.push(w[k] * m.eval(x[k]));
            }
        }
        let worst = CERTIFIED_MOMENTS
            .iter()
            .zip(&exact)
            .map(|(&d, &e)| {
                let q: f64 = nodes.iter().zip(&weights).map(|(&t, &w)| w * t.powf(d)).sum();
                let r = ((q - e) / e).abs();
                if r.is_nan() { f64::INFINITY } else { r }
            })
            .fold(0.0, f64::max);
        if worst <= tol && nodes.len() <= max_nodes {
            return Ok(ThetaQuadrature {
                alpha: T::of(alpha),
                nodes: nodes.into_iter().map(T::of).collect(),
                weights: weights.into_iter().map(T::of).collect(),
                tol,
                max_moment_error: worst,
            });
        }
        if panels.len() * 15 > max_nodes || goal < 1e-16 {
            return Err(SpecialError::QuadratureTolerance { tol, achieved: worst, max_nodes });
        }
        goal *= 0.1;
    }
}
