use std::path::PathBuf;

use fracfujita::heat::RadialProfile;
use fracfujita::lifespan::{NumericConfig, Regime, DEFAULT_ALPHAS};
use fracfujita::subordination::{FractionalParams, SemigroupExponents};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Moments,
    Lemmas,
    Norms,
    Semigroup,
    Solve,
    Lifespan,
    Sweep,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Moments => "moments",
            Experiment::Lemmas => "lemmas",
            Experiment::Norms => "norms",
            Experiment::Semigroup => "semigroup",
            Experiment::Solve => "solve",
            Experiment::Lifespan => "lifespan",
            Experiment::Sweep => "sweep",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub calibration: CalibrationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<MomentsParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmasParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norms: Option<NormsParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<SemigroupParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifespan: Option<LifespanParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepParams>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Pass/fail thresholds of the emitted tables; `--tol-scale` multiplies each
/// absolute or relative tolerance, and the excess over one of each slack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub moment_abs: f64,
    pub mittag_leffler_abs: f64,
    pub mass_rel: f64,
    pub lemma_slack: f64,
    pub lemma_c_spread: f64,
    pub power_norm_rel: f64,
    pub holder_slack: f64,
    pub semigroup_growth: f64,
    pub picard_vs_l1: f64,
    pub fit_exponent_rel: f64,
    pub fit_r_squared: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            moment_abs: 1e-6,
            mittag_leffler_abs: 1e-5,
            mass_rel: 1e-8,
            lemma_slack: 1.05,
            lemma_c_spread: 2.0,
            power_norm_rel: 1e-6,
            holder_slack: 1.0 + 1e-6,
            semigroup_growth: 0.1,
            picard_vs_l1: 5e-3,
            fit_exponent_rel: 0.15,
            fit_r_squared: 0.95,
        }
    }
}

impl Tolerances {
    pub fn scaled(&self, s: f64) -> Self {
        let slack = |x: f64| 1.0 + (x - 1.0) * s;
        Self {
            moment_abs: self.moment_abs * s,
            mittag_leffler_abs: self.mittag_leffler_abs * s,
            mass_rel: self.mass_rel * s,
            lemma_slack: slack(self.lemma_slack),
            lemma_c_spread: slack(self.lemma_c_spread),
            power_norm_rel: self.power_norm_rel * s,
            holder_slack: slack(self.holder_slack),
            semigroup_growth: self.semigroup_growth * s,
            picard_vs_l1: self.picard_vs_l1 * s,
            fit_exponent_rel: self.fit_exponent_rel * s,
            fit_r_squared: 1.0 - (1.0 - self.fit_r_squared) * s,
        }
    }

    fn check(&self, v: &mut Vec<String>) {
        let pos = [
            ("moment_abs", self.moment_abs),
            ("mittag_leffler_abs", self.mittag_leffler_abs),
            ("mass_rel", self.mass_rel),
            ("power_norm_rel", self.power_norm_rel),
            ("semigroup_growth", self.semigroup_growth),
            ("picard_vs_l1", self.picard_vs_l1),
            ("fit_exponent_rel", self.fit_exponent_rel),
        ];
        for (k, x) in pos {
            if !(x > 0.0 && x.is_finite()) {
                v.push(format!("tolerances.{k}: must be positive and finite, got {x}"));
            }
        }
        for (k, x) in [("lemma_slack", self.lemma_slack), ("lemma_c_spread", self.lemma_c_spread), ("holder_slack", self.holder_slack)] {
            if !(x >= 1.0 && x.is_finite()) {
                v.push(format!("tolerances.{k}: must be >= 1, got {x}"));
            }
        }
        if !(self.fit_r_squared > 0.0 && self.fit_r_squared < 1.0) {
            v.push(format!("tolerances.fit_r_squared: must lie in (0, 1), got {}", self.fit_r_squared));
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalibrationMode {
    /// Gaussian pilot runs against the numeric lifespan.
    #[default]
    Pilot,
    Manual,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationConfig {
    pub mode: CalibrationMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_thm1: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_thm2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma1_log: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileFamily {
    Indicator,
    Gaussian,
    Exponential,
    Fbeta,
    LeeNi,
    Constant,
}

/// `kappa * shape`, with the one shape parameter its family needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub family: ProfileFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default = "one")]
    pub kappa: f64,
}

fn one() -> f64 {
    1.0
}

impl ProfileSpec {
    pub fn gaussian(width: f64, kappa: f64) -> Self {
        Self { family: ProfileFamily::Gaussian, beta: None, width: Some(width), radius: None, rate: None, kappa }
    }

    pub fn fbeta(beta: f64, kappa: f64) -> Self {
        Self { family: ProfileFamily::Fbeta, beta: Some(beta), width: None, radius: None, rate: None, kappa }
    }

    fn param(&self) -> (&'static str, Option<f64>) {
        match self.family {
            ProfileFamily::Indicator => ("radius", self.radius),
            ProfileFamily::Gaussian => ("width", self.width),
            ProfileFamily::Exponential => ("rate", self.rate),
            ProfileFamily::Fbeta => ("beta", self.beta),
            ProfileFamily::LeeNi | ProfileFamily::Constant => ("", None),
        }
    }

    pub fn label(&self) -> String {
        let name = match self.family {
            ProfileFamily::Indicator => "indicator",
            ProfileFamily::Gaussian => "gaussian",
            ProfileFamily::Exponential => "exponential",
            ProfileFamily::Fbeta => "f_beta",
            ProfileFamily::LeeNi => "phi_A",
            ProfileFamily::Constant => "constant",
        };
        match self.param() {
            (k, Some(x)) => format!("{name}({k}={x};kappa={})", self.kappa),
            _ => format!("{name}(kappa={})", self.kappa),
        }
    }

    /// Unscaled base shape.
    pub fn base(&self, dim: usize) -> Result<RadialProfile, String> {
        let (key, value) = self.param();
        let given = [("beta", self.beta), ("width", self.width), ("radius", self.radius), ("rate", self.rate)];
        if let Some((k, _)) = given.iter().find(|(k, v)| v.is_some() && *k != key) {
            return Err(format!("parameter {k} does not apply to this family"));
        }
        let need = |v: Option<f64>| v.ok_or_else(|| format!("missing parameter {key}"));
        let r = match self.family {
            ProfileFamily::Indicator => RadialProfile::indicator(dim, need(value)?),
            ProfileFamily::Gaussian => RadialProfile::gaussian(dim, need(value)?),
            ProfileFamily::Exponential => RadialProfile::exponential(dim, need(value)?),
            ProfileFamily::Fbeta => RadialProfile::fbeta(dim, need(value)?),
            ProfileFamily::LeeNi => RadialProfile::lee_ni(dim),
            ProfileFamily::Constant => RadialProfile::constant(dim),
        };
        r.map_err(|e| e.to_string())
    }

    pub fn build(&self, dim: usize) -> Result<RadialProfile, String> {
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(format!("kappa must be positive and finite, got {}", self.kappa));
        }
        Ok(self.base(dim)?.scaled(self.kappa))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MomentsParams {
    pub alphas: Vec<f64>,
    pub deltas: Vec<f64>,
    pub theta_tol: f64,
    pub max_nodes: usize,
    pub z_max: f64,
    pub z_points: usize,
}

impl Default for MomentsParams {
    fn default() -> Self {
        Self {
            alphas: vec![0.3, 0.5, 0.7, 0.9],
            deltas: vec![-0.5, 0.0, 0.5, 1.0, 2.0],
            theta_tol: 1e-10,
            max_nodes: 20_000,
            z_max: 10.0,
            z_points: 101,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmasParams {
    pub s_min: f64,
    pub s_max: f64,
    pub part_i_a: Vec<f64>,
    pub part_i_q: Vec<f64>,
    pub part_ii_a: Vec<f64>,
    pub part_ii_q: Vec<f64>,
    pub constant_k_min: f64,
    pub constant_k_points: usize,
    pub constant_ii_eps: Vec<f64>,
    pub constant_ii_k_min: f64,
}

impl Default for LemmasParams {
    fn default() -> Self {
        Self {
            s_min: 1e-6,
            s_max: 1e3,
            part_i_a: vec![0.25, 0.5, 0.75, 1.0],
            part_i_q: vec![1.5, 2.0, 3.0],
            part_ii_a: (1..=9).map(|j| j as f64 / 10.0).collect(),
            part_ii_q: vec![-2.0, 0.0, 2.0],
            constant_k_min: 1e-3,
            constant_k_points: 61,
            constant_ii_eps: vec![0.1, 0.5],
            constant_ii_k_min: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormsParams {
    pub dim: usize,
    pub profiles: Vec<ProfileSpec>,
    pub q: Vec<f64>,
    pub gammas: Vec<f64>,
    pub rhos: Vec<f64>,
    /// Powers `r` of the power-norm identity, run with each `q` where `r q >= 1`.
    pub power_r: Vec<f64>,
    /// First Holder exponents; the second is conjugate.
    pub holder_q1: Vec<f64>,
}

impl Default for NormsParams {
    fn default() -> Self {
        Self {
            dim: 1,
            profiles: vec![ProfileSpec::fbeta(1.0, 1.0), ProfileSpec::gaussian(1.0, 1.0)],
            q: vec![1.0, 2.0],
            gammas: vec![0.0, 0.5, 1.0, 1.5],
            rhos: vec![0.1, 1.0, 10.0],
            power_r: vec![2.0],
            holder_q1: vec![2.0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentSpec {
    pub q: f64,
    pub r: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SemigroupParams {
    pub alphas: Vec<f64>,
    pub times: Vec<f64>,
    pub theta_tol: f64,
    pub max_nodes: usize,
    /// Datum of the mass and mean checks of `P` and `S`.
    pub operator_profile: ProfileSpec,
    pub half_width: f64,
    pub grid_points: usize,
    /// Datum of the semigroup bound.
    pub profile: ProfileSpec,
    pub exponents: Vec<ExponentSpec>,
    pub t_min: f64,
    pub t_max: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub points: usize,
    pub refine: usize,
}

impl Default for SemigroupParams {
    fn default() -> Self {
        Self {
            alphas: vec![0.3, 0.5, 0.7, 0.9],
            times: vec![0.01, 0.5, 2.0],
            theta_tol: 1e-10,
            max_nodes: 20_000,
            operator_profile: ProfileSpec::gaussian(1.0, 1.0),
            half_width: 16.0,
            grid_points: 256,
            profile: ProfileSpec::fbeta(1.0, 1.0),
            exponents: vec![
                ExponentSpec { q: 1.0, r: 3.0, gamma1: 0.5, gamma2: 1.5 },
                ExponentSpec { q: 1.0, r: 1.0, gamma1: 1.0, gamma2: 1.0 },
            ],
            t_min: 1e-4,
            t_max: 1e2,
            rho_min: 1e-2,
            rho_max: 1e2,
            points: 20,
            refine: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingChoice {
    #[default]
    Graded,
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveParams {
    pub dim: usize,
    pub alpha: f64,
    /// Defaults to `1 + 2/N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Defaults to whether `p = 1 + 2/N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fujita_critical: Option<bool>,
    pub profile: ProfileSpec,
    pub horizon: f64,
    pub steps: usize,
    pub grading: GradingChoice,
    pub half_width: f64,
    pub points: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub blow_up_threshold: f64,
    /// Also run the Caputo L1 scheme on a grid refined by `l1_refine`.
    pub compare_l1: bool,
    pub l1_refine: usize,
}

impl Default for SolveParams {
    fn default() -> Self {
        Self {
            dim: 1,
            alpha: 0.7,
            p: None,
            fujita_critical: None,
            profile: ProfileSpec::gaussian(1.0, 0.5),
            horizon: 1.0,
            steps: 128,
            grading: GradingChoice::Graded,
            half_width: 16.0,
            points: 128,
            max_iter: 400,
            tol: 1e-10,
            blow_up_threshold: 1e12,
            compare_l1: true,
            l1_refine: 8,
        }
    }
}

impl SolveParams {
    pub fn exponent(&self) -> f64 {
        self.p.unwrap_or_else(|| FractionalParams::fujita_exponent(self.dim.max(1)))
    }

    pub fn params(&self) -> Result<FractionalParams, String> {
        let p = self.exponent();
        let critical = self.fujita_critical.unwrap_or(self.dim > 0 && p == FractionalParams::fujita_exponent(self.dim));
        FractionalParams::new(self.dim, self.alpha, p, critical).map_err(|e| format!("FractionalParams: {e}"))
    }
}

/// Overrides of the numeric blow-up search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericParams {
    pub steps: usize,
    pub half_width: f64,
    pub points: usize,
    pub t_start: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub rel_width: f64,
    pub max_probes: usize,
}

impl Default for NumericParams {
    fn default() -> Self {
        let d = NumericConfig::default();
        Self {
            steps: d.steps,
            half_width: d.half_width,
            points: d.points,
            t_start: d.t_start,
            t_min: d.t_min,
            t_max: d.t_max,
            rel_width: d.rel_width,
            max_probes: d.max_probes,
        }
    }
}

impl NumericParams {
    pub fn config(&self) -> NumericConfig {
        NumericConfig {
            steps: self.steps,
            half_width: self.half_width,
            points: self.points,
            t_start: self.t_start,
            t_min: self.t_min,
            t_max: self.t_max,
            rel_width: self.rel_width,
            max_probes: self.max_probes,
            ..NumericConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LifespanParams {
    pub dim: usize,
    /// Base shape; each run uses `kappa * profile.kappa` times it.
    pub profile: ProfileSpec,
    pub alphas: Vec<f64>,
    pub kappas: Vec<f64>,
    /// Weight of the first sufficient condition; defaults to `N/2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub numeric: bool,
    pub numeric_config: NumericParams,
}

impl Default for LifespanParams {
    fn default() -> Self {
        Self {
            dim: 1,
            profile: ProfileSpec::gaussian(1.0, 1.0),
            alphas: vec![0.5, 0.9],
            kappas: vec![1.0, 2.0],
            gamma: None,
            numeric: true,
            numeric_config: NumericParams::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    Fbeta,
    LeeNi,
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeChoice {
    KappaLarge,
    KappaSmall,
    AlphaToOne,
}

impl RegimeChoice {
    pub fn regime(self) -> Regime {
        match self {
            RegimeChoice::KappaLarge => Regime::KappaLarge,
            RegimeChoice::KappaSmall => Regime::KappaSmall,
            RegimeChoice::AlphaToOne => Regime::AlphaToOne,
        }
    }
}

/// Hypothesized exponents of `|ln T|` per bound; unset ones fall back to
/// the family defaults, if any.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hypotheses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thm1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thm2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub necessary: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepParams {
    pub family: SweepFamily,
    /// Decay exponent of `f_beta`.
    pub beta: f64,
    /// Gaussian width.
    pub width: f64,
    pub dim: usize,
    pub kappa_min: f64,
    pub decades: f64,
    pub count: usize,
    /// Replaces the log grid when given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappas: Option<Vec<f64>>,
    pub alphas: Vec<f64>,
    /// Defaults to `N/2 + beta` for `f_beta`, else `N/2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Defaults by family: `kappa_large` for `f_beta` with `beta > 0` and the
    /// Gaussian, `alpha_to_one` for `f_0`, `kappa_small` for `phi_A`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeChoice>,
    pub numeric: bool,
    pub numeric_config: NumericParams,
    pub hypotheses: Hypotheses,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            family: SweepFamily::Fbeta,
            beta: 1.0,
            width: 1.0,
            dim: 1,
            kappa_min: 10.0,
            decades: 1.5,
            count: 8,
            kappas: None,
            alphas: DEFAULT_ALPHAS.to_vec(),
            gamma: None,
            regime: None,
            numeric: false,
            numeric_config: NumericParams::default(),
            hypotheses: Hypotheses::default(),
        }
    }
}

impl SweepParams {
    pub fn gamma(&self) -> f64 {
        let half = self.dim as f64 / 2.0;
        self.gamma.unwrap_or(match self.family {
            SweepFamily::Fbeta => half + self.beta,
            _ => half,
        })
    }

    pub fn regime(&self) -> RegimeChoice {
        self.regime.unwrap_or(match self.family {
            SweepFamily::Fbeta if self.beta == 0.0 => RegimeChoice::AlphaToOne,
            SweepFamily::LeeNi => RegimeChoice::KappaSmall,
            _ => RegimeChoice::KappaLarge,
        })
    }
}

/// Parse failure with the offending line, when known.
#[derive(Debug)]
pub struct ParseError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
    pub context: Option<String>,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l} column {c}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

pub fn parse(text: &str) -> Result<ExperimentConfig, ParseError> {
    toml::from_str(text).map_err(|e: toml::de::Error| {
        let message = e.message().trim().replace('\n', " ");
        match e.span() {
            Some(span) => {
                let start = span.start.min(text.len());
                let line = text[..start].matches('\n').count() + 1;
                let column = start - text[..start].rfind('\n').map_or(0, |i| i + 1) + 1;
                let context = text.lines().nth(line - 1).map(|l| l.to_string());
                ParseError { line: Some(line), column: Some(column), message, context }
            }
            None => ParseError { line: None, column: None, message, context: None },
        }
    })
}

impl ExperimentConfig {
    /// Fills the selected experiment's block with defaults and drops the
    /// others; returns the names of dropped blocks.
    pub fn resolve(mut self) -> (Self, Vec<&'static str>) {
        let mut dropped = Vec::new();
        let e = self.experiment;
        macro_rules! keep {
            ($field:ident, $variant:ident) => {
                if e == Experiment::$variant {
                    self.$field.get_or_insert_with(Default::default);
                } else if self.$field.take().is_some() {
                    dropped.push(stringify!($field));
                }
            };
        }
        keep!(moments, Moments);
        keep!(lemmas, Lemmas);
        keep!(norms, Norms);
        keep!(semigroup, Semigroup);
        keep!(solve, Solve);
        keep!(lifespan, Lifespan);
        keep!(sweep, Sweep);
        (self, dropped)
    }

    /// Every violated precondition of a resolved config, without computing.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        self.tolerances.check(&mut v);
        if let Some(m) = &self.moments {
            check_alphas("moments.alphas", &m.alphas, &mut v);
            nonempty("moments.deltas", m.deltas.len(), &mut v);
            for &d in &m.deltas {
                if !(d > -1.0 && d.is_finite()) {
                    v.push(format!("moments.deltas: moments need delta > -1, got {d}"));
                }
            }
            positive("moments.theta_tol", m.theta_tol, &mut v);
            positive("moments.z_max", m.z_max, &mut v);
            at_least("moments.max_nodes", m.max_nodes, 16, &mut v);
            at_least("moments.z_points", m.z_points, 2, &mut v);
        }
        if let Some(l) = &self.lemmas {
            if !(l.s_min > 0.0 && l.s_max > l.s_min && l.s_max.is_finite()) {
                v.push(format!("lemmas: need 0 < s_min < s_max, got {} and {}", l.s_min, l.s_max));
            }
            for &a in &l.part_i_a {
                if !(a > 0.0 && a <= 1.0) {
                    v.push(format!("lemmas.part_i_a: needs 0 < a <= 1, got {a}"));
                }
            }
            for &q in &l.part_i_q {
                if !(q > 1.0 && q.is_finite()) {
                    v.push(format!("lemmas.part_i_q: needs q > 1, got {q}"));
                }
            }
            for &a in &l.part_ii_a {
                if !(a > 0.0 && a < 1.0) {
                    v.push(format!("lemmas.part_ii_a: needs 0 < a < 1, got {a}"));
                }
            }
            for &q in &l.part_ii_q {
                if !q.is_finite() {
                    v.push(format!("lemmas.part_ii_q: must be finite, got {q}"));
                }
            }
            if !(l.constant_k_min > 0.0 && l.constant_k_min < 1.0) {
                v.push(format!("lemmas.constant_k_min: must lie in (0, 1), got {}", l.constant_k_min));
            }
            at_least("lemmas.constant_k_points", l.constant_k_points, 2, &mut v);
            for &e in &l.constant_ii_eps {
                positive("lemmas.constant_ii_eps", e, &mut v);
            }
            if !(l.constant_ii_k_min > 0.0 && l.constant_ii_k_min < 1.0) {
                v.push(format!("lemmas.constant_ii_k_min: must lie in (0, 1), got {}", l.constant_ii_k_min));
            }
        }
        if let Some(n) = &self.norms {
            nonempty("norms.profiles", n.profiles.len(), &mut v);
            for (i, p) in n.profiles.iter().enumerate() {
                if let Err(e) = p.build(n.dim) {
                    v.push(format!("norms.profiles[{i}]: {e}"));
                }
            }
            for &q in &n.q {
                if !(q >= 1.0) {
                    v.push(format!("norms.q: needs q >= 1, got {q}"));
                }
            }
            for &g in &n.gammas {
                if !(g >= 0.0 && g.is_finite()) {
                    v.push(format!("norms.gammas: needs gamma >= 0, got {g}"));
                }
            }
            for &r in &n.rhos {
                positive("norms.rhos", r, &mut v);
            }
            for &r in &n.power_r {
                positive("norms.power_r", r, &mut v);
            }
            for &q in &n.holder_q1 {
                if !(q > 1.0) {
                    v.push(format!("norms.holder_q1: needs q1 > 1, got {q}"));
                }
            }
        }
        if let Some(s) = &self.semigroup {
            check_alphas("semigroup.alphas", &s.alphas, &mut v);
            for &t in &s.times {
                positive("semigroup.times", t, &mut v);
            }
            positive("semigroup.theta_tol", s.theta_tol, &mut v);
            if let Err(e) = s.profile.build(1) {
                v.push(format!("semigroup.profile: {e}"));
            }
            if let Err(e) = s.operator_profile.build(1) {
                v.push(format!("semigroup.operator_profile: {e}"));
            }
            positive("semigroup.half_width", s.half_width, &mut v);
            at_least("semigroup.grid_points", s.grid_points, 4, &mut v);
            nonempty("semigroup.exponents", s.exponents.len(), &mut v);
            for (i, e) in s.exponents.iter().enumerate() {
                if let Err(err) = SemigroupExponents::new(e.q, e.r, e.gamma1, e.gamma2) {
                    v.push(format!("semigroup.exponents[{i}]: SemigroupExponents: {err}"));
                }
            }
            range("semigroup t", s.t_min, s.t_max, &mut v);
            range("semigroup rho", s.rho_min, s.rho_max, &mut v);
            at_least("semigroup.points", s.points, 2, &mut v);
            at_least("semigroup.refine", s.refine, 2, &mut v);
        }
        if let Some(s) = &self.solve {
            if let Err(e) = s.params() {
                v.push(format!("solve: {e}"));
            }
            if s.dim > 2 {
                v.push(format!("solve.dim: grids support N = 1 or 2, got {}", s.dim));
            }
            if let Err(e) = s.profile.build(s.dim.max(1)) {
                v.push(format!("solve.profile: {e}"));
            }
            positive("solve.horizon", s.horizon, &mut v);
            positive("solve.half_width", s.half_width, &mut v);
            positive("solve.tol", s.tol, &mut v);
            positive("solve.blow_up_threshold", s.blow_up_threshold, &mut v);
            at_least("solve.steps", s.steps, 2, &mut v);
            at_least("solve.points", s.points, 4, &mut v);
            at_least("solve.max_iter", s.max_iter, 1, &mut v);
            at_least("solve.l1_refine", s.l1_refine, 1, &mut v);
        }
        if let Some(l) = &self.lifespan {
            lifespan_dim("lifespan.dim", l.dim, &mut v);
            check_alphas("lifespan.alphas", &l.alphas, &mut v);
            nonempty("lifespan.kappas", l.kappas.len(), &mut v);
            for &k in &l.kappas {
                positive("lifespan.kappas", k, &mut v);
            }
            if let Err(e) = l.profile.base(l.dim.max(1)) {
                v.push(format!("lifespan.profile: {e}"));
            }
            positive("lifespan.profile.kappa", l.profile.kappa, &mut v);
            if let Some(g) = l.gamma {
                nonneg("lifespan.gamma", g, &mut v);
            }
            if l.numeric {
                numeric("lifespan.numeric_config", &l.numeric_config, &mut v);
            }
            self.check_calibration(l.dim, l.gamma.unwrap_or(l.dim as f64 / 2.0), &mut v);
        }
        if let Some(s) = &self.sweep {
            lifespan_dim("sweep.dim", s.dim, &mut v);
            check_alphas("sweep.alphas", &s.alphas, &mut v);
            match s.family {
                SweepFamily::Fbeta => {
                    if let Err(e) = RadialProfile::fbeta(s.dim.max(1), s.beta) {
                        v.push(format!("sweep.beta: {e}"));
                    }
                }
                SweepFamily::Gaussian => positive("sweep.width", s.width, &mut v),
                SweepFamily::LeeNi => {}
            }
            match &s.kappas {
                Some(k) => {
                    nonempty("sweep.kappas", k.len(), &mut v);
                    for &x in k {
                        positive("sweep.kappas", x, &mut v);
                    }
                    if k.windows(2).any(|w| !(w[1] > w[0])) {
                        v.push("sweep.kappas: must increase strictly".into());
                    }
                }
                None => {
                    positive("sweep.kappa_min", s.kappa_min, &mut v);
                    positive("sweep.decades", s.decades, &mut v);
                    at_least("sweep.count", s.count, 2, &mut v);
                }
            }
            nonneg("sweep.gamma", s.gamma(), &mut v);
            if s.numeric {
                numeric("sweep.numeric_config", &s.numeric_config, &mut v);
            }
            self.check_calibration(s.dim, s.gamma(), &mut v);
        }
        v
    }

    fn check_calibration(&self, dim: usize, gamma: f64, v: &mut Vec<String>) {
        let c = &self.calibration;
        match c.mode {
            CalibrationMode::Pilot => {
                if let Some(a) = &c.alphas {
                    check_alphas("calibration.alphas", a, v);
                }
                if let Some(k) = &c.kappas {
                    nonempty("calibration.kappas", k.len(), v);
                    for &x in k {
                        positive("calibration.kappas", x, v);
                    }
                }
                let gammas = c.gammas.clone().unwrap_or_else(|| default_gammas(dim));
                if !gammas.iter().any(|&g| (g - gamma).abs() <= 1e-12 * g.abs().max(1.0)) {
                    v.push(format!("calibration.gammas: {gammas:?} does not include the condition weight {gamma}"));
                }
                for k in ["c_thm1", "c_thm2", "gamma1", "gamma1_log"] {
                    let set = match k {
                        "c_thm1" => c.c_thm1.is_some(),
                        "c_thm2" => c.c_thm2.is_some(),
                        "gamma1" => c.gamma1.is_some(),
                        _ => c.gamma1_log.is_some(),
                    };
                    if set {
                        v.push(format!("calibration.{k}: only used with mode = \"manual\""));
                    }
                }
            }
            CalibrationMode::Manual => {
                let gammas = c.gammas.clone().unwrap_or_default();
                match &c.c_thm1 {
                    Some(cs) if cs.len() == gammas.len() && !cs.is_empty() => {
                        for &x in cs {
                            positive("calibration.c_thm1", x, v);
                        }
                    }
                    _ => v.push("calibration: manual mode needs gammas and c_thm1 of equal, nonzero length".into()),
                }
                if !gammas.iter().any(|&g| (g - gamma).abs() <= 1e-12 * g.abs().max(1.0)) {
                    v.push(format!("calibration.gammas: {gammas:?} does not include the condition weight {gamma}"));
                }
                for (k, x) in [("c_thm2", c.c_thm2), ("gamma1", c.gamma1), ("gamma1_log", c.gamma1_log)] {
                    match x {
                        Some(x) => positive(&format!("calibration.{k}"), x, v),
                        None => v.push(format!("calibration.{k}: required in manual mode")),
                    }
                }
                if c.alphas.is_some() || c.kappas.is_some() {
                    v.push("calibration: alphas and kappas are only used with mode = \"pilot\"".into());
                }
            }
        }
    }
}

pub fn default_gammas(dim: usize) -> Vec<f64> {
    let half = dim as f64 / 2.0;
    vec![half, half + 1.0]
}

fn check_alphas(key: &str, alphas: &[f64], v: &mut Vec<String>) {
    nonempty(key, alphas.len(), v);
    for &a in alphas {
        if let Err(e) = FractionalParams::new(1, a, 3.0, false) {
            v.push(format!("{key}: FractionalParams: {e}"));
        }
    }
}

fn lifespan_dim(key: &str, dim: usize, v: &mut Vec<String>) {
    if dim == 0 {
        v.push(format!("{key}: FractionalParams: dimension N must be >= 1"));
    }
    if dim > 2 {
        v.push(format!("{key}: numeric grids support N = 1 or 2, got {dim}"));
    }
}

fn numeric(key: &str, n: &NumericParams, v: &mut Vec<String>) {
    if let Err(e) = n.config().validate() {
        v.push(format!("{key}: {e}"));
    }
}

fn nonempty(key: &str, len: usize, v: &mut Vec<String>) {
    if len == 0 {
        v.push(format!("{key}: must not be empty"));
    }
}

fn positive(key: &str, x: f64, v: &mut Vec<String>) {
    if !(x > 0.0 && x.is_finite()) {
        v.push(format!("{key}: must be positive and finite, got {x}"));
    }
}

fn nonneg(key: &str, x: f64, v: &mut Vec<String>) {
    if !(x >= 0.0 && x.is_finite()) {
        v.push(format!("{key}: must be >= 0, got {x}"));
    }
}

fn at_least(key: &str, x: usize, min: usize, v: &mut Vec<String>) {
    if x < min {
        v.push(format!("{key}: must be >= {min}, got {x}"));
    }
}

fn range(key: &str, lo: f64, hi: f64, v: &mut Vec<String>) {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        v.push(format!("{key}: need 0 < min < max, got {lo} and {hi}"));
    }
}
