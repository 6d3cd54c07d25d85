use fracfujita::heat::RadialProfile;
use fracfujita::lifespan::{
    calibrate, estimate, fit_scaling, necessary_t, run_sweep, sufficient_t_thm2, Calibration, CalibrationSpec,
    Family, NecessaryForm, NumericConfig, Regime, Status, SweepSpec,
};
use fracfujita::solver::LaplaceTable;
use fracfujita::subordination::FractionalParams;

#[test]
fn calibrated_bounds_bracket_the_numeric_lifespan() {
    let cal = calibrate(&CalibrationSpec::gaussian(1).unwrap()).unwrap();
    assert!(cal.c_thm2 > 0.0 && cal.gamma1 > 0.0);
    let params = FractionalParams::fujita(1, 0.7).unwrap();
    let cfg = NumericConfig::default();
    let table = LaplaceTable::new(0.7, cfg.solver.theta_tol, cfg.solver.theta_max_nodes).unwrap();
    // Off the pilot grid in both alpha and kappa.
    let phi = RadialProfile::gaussian(1, 1.0).unwrap().scaled(1.5);
    let est = estimate(&phi, &params, &cal, 0.5, Some((&table, &cfg))).unwrap();
    let num = est.t_numeric.unwrap();
    assert!(num.lo > 0.0 && num.hi.is_finite());
    assert_eq!(est.status, Status::Consistent, "{est:?}");
    assert!(est.t_sufficient.t() <= num.hi * 1.05 && num.lo <= est.t_necessary.t() * 1.05);
}

#[test]
fn upper_bound_grows_like_the_inverse_gap() {
    let phi = RadialProfile::fbeta(1, 0.0).unwrap().scaled(10.0);
    let scaled: Vec<f64> = [0.9, 0.95, 0.99]
        .iter()
        .map(|&a| {
            let p = FractionalParams::fujita(1, a).unwrap();
            necessary_t(&phi, &p, 2.0, NecessaryForm::Exact).unwrap().ln_t() * (1.0 - a)
        })
        .collect();
    assert!(scaled.iter().all(|&x| x < 0.0));
    assert!(scaled.iter().all(|&x| (x / scaled[0] - 1.0).abs() < 0.05), "{scaled:?}");
}

#[test]
fn log_form_of_the_necessary_condition_orders_like_the_exact_form() {
    let p = FractionalParams::fujita(1, 0.9).unwrap();
    let ts: Vec<(f64, f64)> = [3.0, 10.0]
        .iter()
        .map(|&k| {
            let phi = RadialProfile::fbeta(1, 0.0).unwrap().scaled(k);
            let e = necessary_t(&phi, &p, 2.0, NecessaryForm::Exact).unwrap().ln_t();
            let l = necessary_t(&phi, &p, 2.0, NecessaryForm::Log).unwrap().ln_t();
            (e, l)
        })
        .collect();
    assert!(ts[1].0 < ts[0].0 && ts[1].1 < ts[0].1, "{ts:?}");
}

#[test]
fn small_kappa_sufficient_bound_is_flat_in_alpha() {
    let phi = RadialProfile::fbeta(1, 0.0).unwrap().scaled(0.1);
    let v: Vec<f64> = [0.9, 0.99]
        .iter()
        .map(|&a| sufficient_t_thm2(&phi, &FractionalParams::fujita(1, a).unwrap(), 1.879).unwrap().ln_t())
        .collect();
    assert!(v[0] > 0.0 && (v[1] / v[0] - 1.0).abs() < 0.05, "{v:?}");
}

#[test]
fn large_kappa_fit_on_a_short_sweep() {
    let cal = Calibration::manual(vec![1.5], vec![0.227], 1.879, 2.104, 1.997).unwrap();
    let spec = SweepSpec {
        family: Family::Fbeta(1.0),
        dim: 1,
        kappas: SweepSpec::log_kappas(30.0, 1.0, 6),
        alphas: vec![0.5],
        gamma: 1.5,
        numeric: None,
    };
    let rows = run_sweep(&spec, &cal).unwrap();
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.kappa, r.estimate.t_sufficient_thm1.ln_t())).collect();
    let fit = fit_scaling(&pts, Regime::KappaLarge).unwrap();
    assert!((fit.exponent - 2.0 / 3.0).abs() < 0.05, "{fit:?}");
    assert!(rows.iter().all(|r| r.estimate.status == Status::Consistent));
}
