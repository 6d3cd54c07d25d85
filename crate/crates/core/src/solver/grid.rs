use super::SolverError;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Grading {
    /// `t_k = T (k/n)^(1/alpha)`.
    #[default]
    Graded,
    Uniform,
    /// `t_k = T (k/n)^r` with `r >= 1`.
    Power(f64),
}

impl Grading {
    pub fn exponent(self, alpha: f64) -> f64 {
        match self {
            Grading::Graded => 1.0 / alpha,
            Grading::Uniform => 1.0,
            Grading::Power(r) => r,
        }
    }
}

/// Time nodes `0 = t_0 < ... < t_n = T` for the kernel `(t - s)^(alpha - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    pub horizon: f64,
    pub alpha: f64,
    pub grading: Grading,
    pub nodes: Vec<f64>,
    /// `t_k^alpha`, from `T^alpha (k/n)^(r alpha)` rather than from rounded nodes.
    pub powers: Vec<f64>,
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize, alpha: f64, grading: Grading) -> Result<Self, SolverError> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(SolverError::Grid(format!("horizon must be positive and finite, got {horizon}")));
        }
        if steps < 2 {
            return Err(SolverError::Grid(format!("need at least 2 steps, got {steps}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(SolverError::Grid(format!("alpha must lie in (0,1), got {alpha}")));
        }
        let r = grading.exponent(alpha);
        if !(r >= 1.0 && r.is_finite()) {
            return Err(SolverError::Grid(format!("grading exponent must be at least 1, got {r}")));
        }
        let n = steps as f64;
        let (nodes, powers): (Vec<f64>, Vec<f64>) = (0..=steps)
            .map(|k| {
                let x = k as f64 / n;
                (horizon * x.powf(r), horizon.powf(alpha) * x.powf(r * alpha))
            })
            .unzip();
        let mut grid = Self { horizon, alpha, grading, nodes, powers };
        grid.nodes[steps] = horizon;
        for w in grid.nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(SolverError::Grid("nodes collapse in floating point".into()));
            }
        }
        Ok(grid)
    }

    pub fn graded(horizon: f64, steps: usize, alpha: f64) -> Result<Self, SolverError> {
        Self::new(horizon, steps, alpha, Grading::Graded)
    }

    pub fn uniform(horizon: f64, steps: usize, alpha: f64) -> Result<Self, SolverError> {
        Self::new(horizon, steps, alpha, Grading::Uniform)
    }

    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Same grading and horizon with `factor` times as many steps.
    pub fn refined(&self, factor: usize) -> Result<Self, SolverError> {
        Self::new(self.horizon, self.steps() * factor, self.alpha, self.grading)
    }

    /// `(t_k - t_j)^alpha`.
    pub fn lag_power(&self, k: usize, j: usize) -> f64 {
        if j == 0 {
            self.powers[k]
        } else if j == k {
            0.0
        } else {
            (self.nodes[k] - self.nodes[j]).powf(self.alpha)
        }
    }

    /// `w_kj = int_{t_j}^{t_{j+1}} (t_k - s)^(alpha-1) ds` for `j < k`.
    pub fn weight(&self, k: usize, j: usize) -> f64 {
        debug_assert!(j < k);
        (self.lag_power(k, j) - self.lag_power(k, j + 1)) / self.alpha
    }

    pub fn weights(&self, k: usize) -> Vec<f64> {
        (0..k).map(|j| self.weight(k, j)).collect()
    }
}
