use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;

use fracfujita::heat::SpatialGrid;
use fracfujita::lifespan::{
    calibrate, estimate, fit_scaling, kappa_violations, run_sweep, Calibration, CalibrationSpec, Family,
    LifespanEstimate, SweepRow, SweepSpec, TimeBound,
};
use fracfujita::solver::{caputo_l1_solve, picard_solve_with, LaplaceTable, SolverConfig, TimeGrid};
use fracfujita::special::{build_theta_quadrature, gamma, mittag_leffler, wright_moment};
use fracfujita::subordination::{verify_semigroup_bound, FractionalParams, SemigroupExponents, SubordinatedOperator};
use fracfujita::zygmund::{
    gamma_monotonicity, holder_check, log_constant_i, log_constant_ii_sup, log_integral_check, power_norm_check,
    uniformly_local_norm, LogIntegralPart, NormQuery,
};

use crate::config::{
    default_gammas, CalibrationMode, Experiment, ExperimentConfig, GradingChoice, Hypotheses, RegimeChoice,
    SweepFamily, SweepParams,
};
use crate::output::{num, opt, Output};

pub fn run(config: &ExperimentConfig, out: &mut Output) -> Result<()> {
    let missing = || anyhow!("{} block missing after resolve", config.experiment.name());
    match config.experiment {
        Experiment::Moments => moments(config, out),
        Experiment::Lemmas => lemmas(config, out),
        Experiment::Norms => norms(config, out),
        Experiment::Semigroup => semigroup(config, out),
        Experiment::Solve => solve(config, out),
        Experiment::Lifespan => lifespan(config, out),
        Experiment::Sweep => sweep(config.sweep.as_ref().ok_or_else(missing)?, config, out),
    }
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (a.ln() + (b / a).ln() * i as f64 / (n - 1) as f64).exp()).collect()
}

fn flag(b: bool) -> String {
    b.to_string()
}

fn moments(config: &ExperimentConfig, out: &mut Output) -> Result<()> {
    let m = config.moments.as_ref().context("moments block")?;
    let tol = &config.tolerances;
    let rules = m
        .alphas
        .iter()
        .map(|&a| build_theta_quadrature::<f64>(a, m.theta_tol, m.max_nodes))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    let mut ok = true;
    for (&a, rule) in m.alphas.iter().zip(&rules) {
        for &d in &m.deltas {
            let (q, exact) = (rule.moment(d), wright_moment(a, d)?);
            let err = (q - exact).abs();
            ok &= err <= tol.moment_abs;
            rows.push(vec![num(a), num(d), num(q), num(exact), num(err), flag(err <= tol.moment_abs)]);
        }
    }
    out.table("moments.csv", &["alpha", "delta", "quadrature", "closed_form", "abs_err", "passed"], &rows)?;
    out.check("moments", ok);

    let mut rows = Vec::new();
    let mut ok = true;
    for (&a, rule) in m.alphas.iter().zip(&rules) {
        for i in 0..m.z_points {
            let z = m.z_max * i as f64 / (m.z_points - 1) as f64;
            let (lap, ml) = (rule.laplace(z), mittag_leffler(a, -z)?);
            let err = (lap - ml).abs();
            ok &= err <= tol.mittag_leffler_abs;
            rows.push(vec![num(a), num(z), num(lap), num(ml), num(err), flag(err <= tol.mittag_leffler_abs)]);
        }
    }
    out.table("mittag_leffler.csv", &["alpha", "z", "laplace", "mittag_leffler", "abs_err", "passed"], &rows)?;
    out.check("mittag_leffler", ok);
    Ok(())
}

fn lemmas(config: &ExperimentConfig, out: &mut Output) -> Result<()> {
    let l = config.lemmas.as_ref().context("lemmas block")?;
    let tol = &config.tolerances;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut row = |check: &str, a: Option<f64>, q: Option<f64>, eps: Option<f64>, stat: &str, value: f64, thr: Option<f64>, passed: Option<bool>| {
        rows.push(vec![
            check.into(),
            opt(a),
            opt(q),
            opt(eps),
            stat.into(),
            num(value),
            opt(thr),
            passed.map(flag).unwrap_or_default(),
        ]);
    };
    let mut ok = true;
    let jobs_i: Vec<(f64, f64)> = l.part_i_a.iter().flat_map(|&a| l.part_i_q.iter().map(move |&q| (a, q))).collect();
    let rep_i = jobs_i
        .par_iter()
        .map(|&(a, q)| log_integral_check(LogIntegralPart::I, a, q, l.s_min, l.s_max))
        .collect::<Result<Vec<_>, _>>()?;
    for r in &rep_i {
        let pass = r.fitted_c.is_finite() && r.worst_ratio <= tol.lemma_slack;
        ok &= pass;
        row("log_integral_i", Some(r.a), Some(r.q), None, "fitted_c", r.fitted_c, None, None);
        row("log_integral_i", Some(r.a), Some(r.q), None, "worst_ratio", r.worst_ratio, Some(tol.lemma_slack), Some(pass));
    }
    let jobs_ii: Vec<(f64, f64)> = l.part_ii_q.iter().flat_map(|&q| l.part_ii_a.iter().map(move |&a| (q, a))).collect();
    let rep_ii = jobs_ii
        .par_iter()
        .map(|&(q, a)| log_integral_check(LogIntegralPart::II, a, q, l.s_min, l.s_max))
        .collect::<Result<Vec<_>, _>>()?;
    for &q in &l.part_ii_q {
        let mut cs = Vec::new();
        for r in rep_ii.iter().filter(|r| r.q == q) {
            let pass = r.fitted_c.is_finite() && r.worst_ratio <= tol.lemma_slack;
            ok &= pass;
            row("log_integral_ii", Some(r.a), Some(q), None, "fitted_c", r.fitted_c, None, None);
            row("log_integral_ii", Some(r.a), Some(q), None, "worst_ratio", r.worst_ratio, Some(tol.lemma_slack), Some(pass));
            cs.push(r.fitted_c);
        }
        // The constant is uniform in a only for q >= 0.
        if q >= 0.0 && !cs.is_empty() {
            let (lo, hi) = cs.iter().fold((f64::INFINITY, 0.0_f64), |(l, h), &c| (l.min(c), h.max(c)));
            let pass = hi / lo < tol.lemma_c_spread;
            ok &= pass;
            row("log_integral_ii", None, Some(q), None, "c_spread_over_a", hi / lo, Some(tol.lemma_c_spread), Some(pass));
        }
    }
    let ks = logspace(l.constant_k_min, 1.0, l.constant_k_points);
    let ss = logspace(l.s_min, l.s_max, ((l.s_max / l.s_min).log10() * 20.0).ceil() as usize + 1);
    let lc = log_constant_i(&ks, &ss);
    ok &= lc.violations == 0;
    row("log_constant_i", None, None, None, "samples", lc.samples as f64, None, None);
    row("log_constant_i", None, None, None, "violations", lc.violations as f64, Some(0.0), Some(lc.violations == 0));
    row("log_constant_i", None, None, None, "lower_margin", lc.lower_margin, Some(0.0), Some(lc.lower_margin >= 0.0));
    row("log_constant_i", None, None, None, "upper_margin", lc.upper_margin, Some(0.0), Some(lc.upper_margin >= 0.0));
    for &eps in &l.constant_ii_eps {
        let sup = log_constant_ii_sup(eps, l.s_min, l.s_max, l.constant_ii_k_min, 20.0);
        ok &= sup.is_finite();
        row("log_constant_ii", None, None, Some(eps), "sup", sup, None, Some(sup.is_finite()));
    }
    out.table("lemmas.csv", &["check", "a", "q", "eps", "statistic", "value", "threshold", "passed"], &rows)?;
    out.check("lemmas", ok);
    Ok(())
}

fn norms(config: &ExperimentConfig, out: &mut Output) -> Result<()> {
    let n = config.norms.as_ref().context("norms block")?;
    let tol = &config.tolerances;
    let profiles = n.profiles.iter().map(|p| p.build(n.dim).map_err(|e| anyhow!(e))).collect::<Result<Vec<_>>>()?;
    let labels: Vec<String> = n.profiles.iter().map(|p| p.label()).collect();

    let jobs: Vec<(usize, f64, f64, f64)> = (0..profiles.len())
        .flat_map(|i| n.q.iter().flat_map(move |&q| n.gammas.iter().flat_map(move |&g| n.rhos.iter().map(move |&r| (i, q, g, r)))))
        .collect();
    let values = jobs
        .par_iter()
        .map(|&(i, q, g, r)| uniformly_local_norm(&profiles[i], &NormQuery::local(q, g, r)?))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<Vec<String>> = jobs
        .iter()
        .zip(&values)
        .map(|(&(i, q, g, r), v)| {
            vec![labels[i].clone(), num(q), num(g), num(r), num(v.value), num(v.argmax_s), flag(v.divergent)]
        })
        .collect();
    out.table("norms.csv", &["profile", "q", "gamma", "rho", "value", "argmax_s", "divergent"], &rows)?;

    let header = ["check", "profile", "q", "r", "gamma", "rho", "lhs", "rhs", "ratio", "threshold", "passed"];
    let mut rows = Vec::new();
    let mut ok = true;
    for (i, f) in profiles.iter().enumerate() {
        for &q in &n.q {
            for &r in n.power_r.iter().filter(|&&r| r * q >= 1.0) {
                for &g in &n.gammas {
                    for &rho in &n.rhos {
                        let rep = power_norm_check(f, r, q, g, rho)?;
                        let dev = (rep.ratio - 1.0).abs();
                        let pass = dev <= tol.power_norm_rel;
                        ok &= pass;
                        rows.push(vec![
                            "power_norm".into(),
                            labels[i].clone(),
                            num(q),
                            num(r),
                            num(g),
                            num(rho),
                            num(rep.lhs),
                            num(rep.rhs),
                            num(rep.ratio),
                            num(tol.power_norm_rel),
                            flag(pass),
                        ]);
                    }
                }
            }
        }
        for &q1 in &n.holder_q1 {
            let q2 = q1 / (q1 - 1.0);
            for &g in &n.gammas {
                for &rho in &n.rhos {
                    let rep = holder_check(f, f, q1, q2, g, g, rho)?;
                    let pass = rep.ratio <= tol.holder_slack;
                    ok &= pass;
                    rows.push(vec![
                        "holder".into(),
                        labels[i].clone(),
                        num(q1),
                        num(q2),
                        num(g),
                        num(rho),
                        num(rep.lhs),
                        num(rep.rhs),
                        num(rep.ratio),
                        num(tol.holder_slack),
                        flag(pass),
                    ]);
                }
            }
        }
        let mut gs = n.gammas.clone();
        gs.sort_by(f64::total_cmp);
        for &q in &n.q {
            for &rho in &n.rhos {
                let vals = gamma_monotonicity(f, q, &gs, rho)?;
                let pass = vals.windows(2).all(|w| w[1].value >= w[0].value);
                ok &= pass;
                let (first, last) = (vals.first().map(|v| v.value), vals.last().map(|v| v.value));
                rows.push(vec![
                    "gamma_monotone".into(),
                    labels[i].clone(),
                    num(q),
                    String::new(),
                    String::new(),
                    num(rho),
                    opt(first),
                    opt(last),
                    opt(first.zip(last).map(|(a, b)| a / b)),
                    String::new(),
                    flag(pass),
                ]);
            }
        }
    }
    out.table("checks.csv", &header, &rows)?;
    out.check("norm_checks", ok);
    Ok(())
}

fn semigroup(config: &ExperimentConfig, out: &mut Output) -> Result<()> {
    let s = config.semigroup.as_ref().context("semigroup block")?;
    let tol = &config.tolerances;
    let g = s.operator_profile.build(1).map_err(|e| anyhow!(e))?.sample_grid(s.half_width, s.grid_points)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for &a in &s.alphas {
        let op = SubordinatedOperator::<f64>::new(a, s.theta_tol, s.max_nodes)?;
        for &t in &s.times {
            let p = op.apply_p(t, &g)?.integral() / g.integral();
            let m = op.apply_s(t, &g)?.mean() / g.mean() * gamma(1.0 + a);
            for (name, q, v) in [("P", "mass_ratio", p), ("S", "mean_ratio_times_gamma", m)] {
                let err = (v - 1.0).abs();
                ok &= err <= tol.mass_rel;
                rows.push(vec![num(a), num(t), name.into(), q.into(), num(v), num(err), flag(err <= tol.mass_rel)]);
            }
        }
    }
    out.table("operators.csv", &["alpha", "t", "operator", "quantity", "value", "rel_err", "passed"], &rows)?;
    out.check("operators", ok);

    let f = s.profile.build(1).map_err(|e| anyhow!(e))?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let mut ok = true;
    for e in &s.exponents {
        let exps = SemigroupExponents::new(e.q, e.r, e.gamma1, e.gamma2)?;
        let m = s.points * s.refine;
        let base = verify_semigroup_bound(&exps, &logspace(s.rho_min, s.rho_max, s.points), &logspace(s.t_min, s.t_max, s.points), &f)?;
        let fine = verify_semigroup_bound(&exps, &logspace(s.rho_min, s.rho_max, m), &logspace(s.t_min, s.t_max, m), &f)?;
        for (level, table) in [("base", &base), ("refined", &fine)] {
            for r in &table.rows {
                rows.push(vec![
                    num(e.q),
                    num(e.r),
                    num(e.gamma1),
                    num(e.gamma2),
                    level.into(),
                    num(r.t),
                    num(r.rho),
                    num(r.lhs),
                    num(r.rhs),
                    num(r.ratio),
                    num(r.rho_term),
                    num(r.t_term),
                ]);
            }
        }
        let growth = fine.sup_ratio / base.sup_ratio - 1.0;
        let pass = base.sup_ratio.is_finite() && growth < tol.semigroup_growth;
        ok &= pass;
        summary.push(vec![
            num(e.q),
            num(e.r),
            num(e.gamma1),
            num(e.gamma2),
            num(base.sup_ratio),
            num(fine.sup_ratio),
            num(fine.argmax.0),
            num(fine.argmax.1),
            num(growth),
            num(tol.semigroup_growth),
            flag(pass),
        ]);
    }
    out.table(
        "semigroup_bound.csv",
        &["q", "r", "gamma1", "gamma2", "level", "t", "rho", "lhs", "rhs", "ratio", "rho_term", "t_term"],
        &rows,
    )?;
    out.table(
        "semigroup_summary.csv",
        &["q", "r", "gamma1", "gamma2", "sup_ratio", "sup_ratio_refined", "argmax_t", "argmax_rho", "growth", "threshold", "passed"],
        &summary,
    )?;
    out.check("semigroup_bound", ok);
    Ok(())
}

fn solve(config: &ExperimentConfig, out: &mut Output) -> Result<()> {
    let s = config.solve.as_ref().context("solve block")?;
    let params = s.params().map_err(|e| anyhow!(e))?;
    let phi: SpatialGrid<f64> = s.profile.build(s.dim).map_err(|e| anyhow!(e))?.sample_grid(s.half_width, s.points)?;
    let grid = match s.grading {
        GradingChoice::Graded => TimeGrid::graded(s.horizon, s.steps, s.alpha)?,
        GradingChoice::Uniform => TimeGrid::uniform(s.horizon, s.steps, s.alpha)?,
    };
    let cfg = SolverConfig {
        steps: s.steps,
        max_iter: s.max_iter,
        tol: s.tol,
        blow_up_threshold: s.blow_up_threshold,
        ..SolverConfig::default()
    };
    let table = LaplaceTable::new(s.alpha, cfg.theta_tol, cfg.theta_max_nodes)?;
    let picard = picard_solve_with(&table, &phi, &params, &grid, &cfg)?;
    let traj = &picard.trajectory;
    let l1 = if s.compare_l1 {
        let fine = grid.refined(s.l1_refine)?;
        Some(caputo_l1_solve(&phi, &params, &fine)?)
    } else {
        None
    };
    let scale = traj.sup();
    let mut worst = 0.0_f64;
    let mut rows = Vec::new();
    for (k, state) in traj.states.iter().enumerate() {
        let l1_state = l1.as_ref().and_then(|l| l.states.get(s.l1_refine * k));
        let dist = l1_state.map(|u| u.sup_distance(state) / scale);
        if let Some(d) = dist {
            worst = worst.max(d);
        }
        rows.push(vec![
            num(grid.nodes[k]),
            num(traj.sup_history[k]),
            opt(traj.residual_history.get(k).copied()),
            opt(l1_state.map(|u| u.sup_norm())),
            opt(dist),
        ]);
    }
    let mut header = vec!["t", "sup_picard", "residual"];
    header.extend(["sup_l1", "rel_diff_l1"]);
    out.table("solve.csv", &header, &rows)?;

    let blow = traj.blow_up.map(|k| grid.nodes[k]);
    let l1_blow = l1.as_ref().and_then(|l| l.blow_up.map(|k| l.grid.nodes[k]));
    let tol = config.tolerances.picard_vs_l1;
    let compared = l1.is_some() && blow.is_none() && l1_blow.is_none();
    let agree = !compared || worst <= tol;
    let summary = vec![vec![
        num(s.alpha),
        num(params.p),
        s.profile.label(),
        picard.iterations.to_string(),
        flag(picard.converged),
        opt(blow),
        opt(l1_blow),
        if compared { num(worst) } else { String::new() },
        num(tol),
        flag(agree && (picard.converged || blow.is_some())),
    ]];
    out.table(
        "solve_summary.csv",
        &["alpha", "p", "profile", "iterations", "converged", "blow_up_t", "l1_blow_up_t", "max_rel_diff_l1", "threshold", "passed"],
        &summary,
    )?;
    out.check("picard", picard.converged || blow.is_some());
    if compared {
        out.check("picard_vs_l1", agree);
    }
    Ok(())
}

fn resolve_calibration(config: &ExperimentConfig, dim: usize) -> Result<Calibration> {
    let c = &config.calibration;
    match c.mode {
        CalibrationMode::Manual => Ok(Calibration::manual(
            c.gammas.clone().unwrap_or_default(),
            c.c_thm1.clone().unwrap_or_default(),
            c.c_thm2.unwrap_or_default(),
            c.gamma1.unwrap_or_default(),
            c.gamma1_log.unwrap_or_default(),
        )?),
        CalibrationMode::Pilot => {
            let mut spec = CalibrationSpec::gaussian(dim)?;
            if let Some(a) = &c.alphas {
                spec.alphas = a.clone();
            }
            if let Some(k) = &c.kappas {
                spec.kappas = k.clone();
            }
            spec.gammas = c.gammas.clone().unwrap_or_else(|| default_gammas(dim));
            Ok(calibrate(&spec)?)
        }
    }
}

fn calibration_table(cal: &Calibration, out: &mut Output) -> Result<()> {
    let mut rows = Vec::new();
    for (g, c) in cal.gammas.iter().zip(&cal.c_thm1) {
        rows.push(vec!["c_thm1".into(), num(*g), num(*c)]);
    }
    rows.push(vec!["c_thm2".into(), String::new(), num(cal.c_thm2)]);
    rows.push(vec!["gamma1".into(), String::new(), num(cal.gamma1)]);
    rows.push(vec!["gamma1_log".into(), String::new(), num(cal.gamma1_log)]);
    out.table("calibration.csv", &["constant", "gamma", "value"], &rows)?;
    if !cal.pilot.is_empty() {
        let rows: Vec<Vec<String>> = cal
            .pilot
            .iter()
            .map(|p| {
                vec![
                    num(p.alpha),
                    num(p.kappa),
                    num(p.bracket.lo),
                    num(p.bracket.hi),
                    p.bracket.probes.to_string(),
                    flag(p.bracket.low_confidence),
                    p.c_thm1.iter().map(|c| num(*c)).collect::<Vec<_>>().join(";"),
                    num(p.c_thm2),
                    num(p.gamma1),
                    num(p.gamma1_log),
                ]
            })
            .collect();
        out.table(
            "pilot.csv",
            &["alpha", "kappa", "T_lo", "T_hi", "probes", "low_confidence", "c_thm1", "c_thm2", "gamma1", "gamma1_log"],
            &rows,
        )?;
    }
    Ok(())
}

fn bound_t(b: TimeBound) -> String {
    num(b.t())
}

fn bound_ln(b: TimeBound) -> String {
    num(b.ln_t())
}

fn lifespan(config: &ExperimentConfig, out: &mut Output) -> Result<()> {
    let l = config.lifespan.as_ref().context("lifespan block")?;
    let cal = resolve_calibration(config, l.dim)?;
    calibration_table(&cal, out)?;
    let gamma_w = l.gamma.unwrap_or(l.dim as f64 / 2.0);
    let base = l.profile.base(l.dim).map_err(|e| anyhow!(e))?;
    let ncfg = l.numeric_config.config();
    let params = l.alphas.iter().map(|&a| FractionalParams::fujita(l.dim, a)).collect::<Result<Vec<_>, _>>()?;
    let tables = if l.numeric {
        Some(
            l.alphas
                .par_iter()
                .map(|&a| LaplaceTable::new(a, ncfg.solver.theta_tol, ncfg.solver.theta_max_nodes))
                .collect::<Result<Vec<_>, _>>()?,
        )
    } else {
        None
    };
    let jobs: Vec<(usize, f64)> = (0..l.alphas.len()).flat_map(|i| l.kappas.iter().map(move |&k| (i, k))).collect();
    let ests: Vec<LifespanEstimate> = jobs
        .par_iter()
        .map(|&(i, k)| {
            let phi = base.scaled(k * l.profile.kappa);
            estimate(&phi, &params[i], &cal, gamma_w, tables.as_ref().map(|t| (&t[i], &ncfg)))
        })
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut ok = true;
    for (&(i, k), e) in jobs.iter().zip(&ests) {
        ok &= e.status.label() == "consistent";
        let n = e.t_numeric;
        rows.push(vec![
            l.profile.label(),
            num(k),
            num(l.alphas[i]),
            num(gamma_w),
            bound_t(e.t_sufficient),
            bound_t(e.t_necessary),
            opt(n.map(|n| n.lo)),
            opt(n.map(|n| n.hi)),
            n.map(|n| n.probes.to_string()).unwrap_or_default(),
            n.map(|n| flag(n.low_confidence)).unwrap_or_default(),
            bound_ln(e.t_sufficient_thm1),
            bound_ln(e.t_sufficient_thm2),
            bound_ln(e.t_necessary),
            e.status.label().into(),
        ]);
    }
    out.table(
        "lifespan.csv",
        &[
            "profile",
            "kappa",
            "alpha",
            "gamma",
            "T_sufficient",
            "T_necessary",
            "T_numeric_lo",
            "T_numeric_hi",
            "probes",
            "low_confidence",
            "ln_T_thm1",
            "ln_T_thm2",
            "ln_T_necessary",
            "status",
        ],
        &rows,
    )?;
    out.check("lifespan_consistent", ok);
    Ok(())
}

#[derive(Clone, Copy)]
enum Bound {
    Thm1,
    Thm2,
    Necessary,
}

impl Bound {
    const ALL: [Bound; 3] = [Bound::Thm1, Bound::Thm2, Bound::Necessary];

    fn label(self) -> &'static str {
        match self {
            Bound::Thm1 => "thm1",
            Bound::Thm2 => "thm2",
            Bound::Necessary => "necessary",
        }
    }

    fn of(self, e: &LifespanEstimate) -> TimeBound {
        match self {
            Bound::Thm1 => e.t_sufficient_thm1,
            Bound::Thm2 => e.t_sufficient_thm2,
            Bound::Necessary => e.t_necessary,
        }
    }

    fn hypothesis(self, h: &Hypotheses) -> Option<f64> {
        match self {
            Bound::Thm1 => h.thm1,
            Bound::Thm2 => h.thm2,
            Bound::Necessary => h.necessary,
        }
    }
}

/// Exponents of `|ln T|` expected at the family's own weight; none elsewhere.
fn default_hypotheses(s: &SweepParams) -> Hypotheses {
    let n = s.dim as f64;
    let own_weight = s.gamma.is_none();
    let mut h = Hypotheses::default();
    match (s.family, s.regime()) {
        (SweepFamily::Fbeta, RegimeChoice::KappaLarge) if s.beta > 0.0 && own_weight => {
            h.thm1 = Some(2.0 / (n + 2.0 * s.beta));
        }
        (SweepFamily::LeeNi, RegimeChoice::KappaSmall) => {
            h.thm2 = Some(2.0 / (n + 2.0));
            if own_weight {
                h.thm1 = Some(1.0);
            }
        }
        (SweepFamily::Fbeta, RegimeChoice::AlphaToOne) if s.beta == 0.0 => h.necessary = Some(1.0),
        _ => {}
    }
    Hypotheses {
        thm1: s.hypotheses.thm1.or(h.thm1),
        thm2: s.hypotheses.thm2.or(h.thm2),
        necessary: s.hypotheses.necessary.or(h.necessary),
    }
}

fn sweep(s: &SweepParams, config: &ExperimentConfig, out: &mut Output) -> Result<()> {
    let cal = resolve_calibration(config, s.dim)?;
    calibration_table(&cal, out)?;
    let family = match s.family {
        SweepFamily::Fbeta => Family::Fbeta(s.beta),
        SweepFamily::LeeNi => Family::LeeNi,
        SweepFamily::Gaussian => Family::Gaussian(s.width),
    };
    let spec = SweepSpec {
        family,
        dim: s.dim,
        kappas: s.kappas.clone().unwrap_or_else(|| SweepSpec::log_kappas(s.kappa_min, s.decades, s.count)),
        alphas: s.alphas.clone(),
        gamma: s.gamma(),
        numeric: s.numeric.then(|| s.numeric_config.config()),
    };
    let rows = run_sweep(&spec, &cal)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let e = &r.estimate;
            vec![
                r.family.into(),
                num(r.beta_or_a),
                num(r.kappa),
                num(r.alpha),
                bound_t(e.t_sufficient),
                bound_t(e.t_necessary),
                opt(e.t_numeric.map(|n| n.t())),
                opt(e.t_numeric.map(|n| n.lo)),
                opt(e.t_numeric.map(|n| n.hi)),
                e.status.label().into(),
                bound_ln(e.t_sufficient_thm1),
                bound_ln(e.t_sufficient_thm2),
                bound_ln(e.t_necessary),
            ]
        })
        .collect();
    out.table(
        "sweep.csv",
        &[
            "family",
            "beta_or_A",
            "kappa",
            "alpha",
            "T_sufficient",
            "T_necessary",
            "T_numeric",
            "T_numeric_lo",
            "T_numeric_hi",
            "status",
            "ln_T_thm1",
            "ln_T_thm2",
            "ln_T_necessary",
        ],
        &table,
    )?;
    out.check("sweep_consistent", rows.iter().all(|r| r.estimate.status.label() == "consistent"));
    out.check("sufficient_nonincreasing_in_kappa", kappa_violations(&rows, |e| e.t_sufficient.ln_t()) == 0);
    out.check("necessary_nonincreasing_in_kappa", kappa_violations(&rows, |e| e.t_necessary.ln_t()) == 0);
    fits(s, &spec, &rows, config, out)
}

fn fits(s: &SweepParams, spec: &SweepSpec, rows: &[SweepRow], config: &ExperimentConfig, out: &mut Output) -> Result<()> {
    let tol = &config.tolerances;
    let regime = s.regime();
    let hyp = default_hypotheses(s);
    // One series per fixed alpha (kappa regimes) or per fixed kappa (alpha regime).
    let groups: Vec<(&str, f64, Vec<&SweepRow>)> = match regime {
        RegimeChoice::AlphaToOne => spec
            .kappas
            .iter()
            .map(|&k| ("kappa", k, rows.iter().filter(|r| r.kappa == k).collect()))
            .collect(),
        _ => spec.alphas.iter().map(|&a| ("alpha", a, rows.iter().filter(|r| r.alpha == a).collect())).collect(),
    };
    let mut table = Vec::new();
    for (fixed, value, group) in &groups {
        for b in Bound::ALL {
            let pts: Vec<(f64, f64)> = group
                .iter()
                .filter_map(|r| {
                    let t = b.of(&r.estimate);
                    let x = if regime == RegimeChoice::AlphaToOne { r.alpha } else { r.kappa };
                    t.is_finite().then(|| (x, t.ln_t()))
                })
                .collect();
            let h = b.hypothesis(&hyp);
            let mut row = vec![regime.regime().label().to_string(), b.label().into(), (*fixed).into(), num(*value), opt(h)];
            match fit_scaling(&pts, regime.regime()) {
                Ok(f) => {
                    let passed = h.map(|h| {
                        (f.exponent - h).abs() <= tol.fit_exponent_rel * h.abs() && f.r_squared >= tol.fit_r_squared
                    });
                    if let Some(p) = passed {
                        out.check(format!("fit {} {fixed}={}", b.label(), num(*value)), p);
                    }
                    row.extend([
                        num(f.exponent),
                        num(f.interval.0),
                        num(f.interval.1),
                        num(f.r_squared),
                        f.points.to_string(),
                        passed.map(flag).unwrap_or_else(|| "n/a".into()),
                        String::new(),
                    ]);
                }
                Err(e) => {
                    row.extend([String::new(), String::new(), String::new(), String::new(), pts.len().to_string()]);
                    row.extend(["skipped".into(), e.to_string()]);
                }
            }
            table.push(row);
        }
    }
    out.table(
        "fits.csv",
        &[
            "regime",
            "bound",
            "fixed",
            "fixed_value",
            "hypothesized_exponent",
            "fitted_exponent",
            "ci_lo",
            "ci_hi",
            "r_squared",
            "points",
            "passed",
            "note",
        ],
        &table,
    )
}
