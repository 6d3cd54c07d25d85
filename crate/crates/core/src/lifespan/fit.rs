use statrs::distribution::{ContinuousCDF, StudentsT};

use super::LifespanError;

/// Asymptotic regime of a sweep, fixing the abscissa `X` of `|log T| ~ A X^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `X = kappa`.
    KappaLarge,
    /// `X = 1 / kappa`.
    KappaSmall,
    /// `X = 1 / (1 - alpha)`.
    AlphaToOne,
}

impl Regime {
    pub fn abscissa(self, x: f64) -> f64 {
        match self {
            Regime::KappaLarge => x,
            Regime::KappaSmall => 1.0 / x,
            Regime::AlphaToOne => 1.0 / (1.0 - x),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::KappaLarge => "kappa_large",
            Regime::KappaSmall => "kappa_small",
            Regime::AlphaToOne => "alpha_to_one",
        }
    }
}

/// Least-squares fit of `ln |ln T| = ln A + e ln X`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub regime: Regime,
    /// 95% Student-t interval for the exponent.
    pub interval: (f64, f64),
    pub points: usize,
}

impl ScalingFit {
    pub fn overlaps(&self, other: &ScalingFit) -> bool {
        self.interval.0 <= other.interval.1 && other.interval.0 <= self.interval.1
    }
}

/// `sweep` holds `(kappa or alpha, ln T)`; at least six points, all `ln T`
/// finite, nonzero and of one sign.
pub fn fit_scaling(sweep: &[(f64, f64)], regime: Regime) -> Result<ScalingFit, LifespanError> {
    if sweep.len() < 6 {
        return Err(LifespanError::Fit(format!("need at least 6 sweep points, got {}", sweep.len())));
    }
    if let Some(&(x, y)) = sweep.iter().find(|(x, y)| !(y.is_finite() && x.is_finite())) {
        return Err(LifespanError::Fit(format!("non-finite sweep point ({x}, ln T = {y})")));
    }
    if sweep.iter().any(|&(_, y)| y == 0.0) || !(sweep.iter().all(|p| p.1 > 0.0) || sweep.iter().all(|p| p.1 < 0.0)) {
        return Err(LifespanError::Fit("ln T must be nonzero and of one sign".into()));
    }
    let pts: Vec<(f64, f64)> = sweep.iter().map(|&(x, y)| (regime.abscissa(x).ln(), y.abs().ln())).collect();
    if pts.iter().any(|p| !p.0.is_finite()) {
        return Err(LifespanError::Fit("abscissa must be positive".into()));
    }
    let (slope, intercept, r2, se) = least_squares(&pts)?;
    let dof = (pts.len() - 2) as f64;
    let q = StudentsT::new(0.0, 1.0, dof).map_err(|e| LifespanError::Fit(e.to_string()))?.inverse_cdf(0.975);
    Ok(ScalingFit {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared: r2,
        regime,
        interval: (slope - q * se, slope + q * se),
        points: pts.len(),
    })
}

/// Slope, intercept, `r^2` and slope standard error.
pub(crate) fn least_squares(pts: &[(f64, f64)]) -> Result<(f64, f64, f64, f64), LifespanError> {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(LifespanError::Fit("abscissae are all equal".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r2 = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    let se = if pts.len() > 2 { (ss_res / (n - 2.0) / sxx).sqrt() } else { f64::INFINITY };
    Ok((slope, intercept, r2, se))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_power_is_recovered() {
        let sweep: Vec<(f64, f64)> = (0..8).map(|j| {
            let k = 10f64.powf(j as f64 * 1.5 / 7.0);
            (k, -3.0 * k.sqrt())
        }).collect();
        let fit = fit_scaling(&sweep, Regime::KappaLarge).unwrap();
        assert!((fit.exponent - 0.5).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() < 1e-11);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.interval.1 - fit.interval.0 < 1e-10);
    }

    #[test]
    fn rejects_bad_sweeps() {
        let ok: Vec<(f64, f64)> = (1..=6).map(|j| (j as f64, -(j as f64))).collect();
        assert!(fit_scaling(&ok[..5], Regime::KappaLarge).is_err());
        let mut inf = ok.clone();
        inf[2].1 = f64::NEG_INFINITY;
        assert!(fit_scaling(&inf, Regime::KappaLarge).is_err());
        let mut mixed = ok.clone();
        mixed[0].1 = 1.0;
        assert!(fit_scaling(&mixed, Regime::KappaLarge).is_err());
    }

    #[test]
    fn alpha_regime_uses_the_inverse_gap() {
        let sweep: Vec<(f64, f64)> = [0.9, 0.92, 0.94, 0.96, 0.98, 0.99].iter().map(|&a| (a, -2.0 / (1.0 - a))).collect();
        let fit = fit_scaling(&sweep, Regime::AlphaToOne).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-12 && (fit.prefactor - 2.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn r_squared_in_unit_interval(ys in proptest::collection::vec(0.1f64..100.0, 6..12)) {
            let sweep: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| ((i + 1) as f64, y)).collect();
            let fit = fit_scaling(&sweep, Regime::KappaSmall).unwrap();
            prop_assert!((0.0..=1.0).contains(&fit.r_squared));
            prop_assert!(fit.interval.0 <= fit.exponent && fit.exponent <= fit.interval.1);
        }
    }
}
