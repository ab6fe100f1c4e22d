use advdiff::analysis::{
    fit_peclet_constant, fit_peclet_piecewise, generate_synthetic_measurements, integrated_abs, interpolate_series,
    misfit, read_measurements_csv, sensitivity, write_measurements_csv, FitOptions, MeasurementSeries,
    SensitivityParam, SyntheticOptions,
};
use advdiff::cases::build_gypsum_case;
use advdiff::{Grid1D, PecletModel, Problem, Scheme};
use approx::assert_relative_eq;
use proptest::prelude::*;

/// Gypsum case on a coarse grid, first adsorption ramp only.
fn quick_gypsum(pe: PecletModel<f64>) -> (Problem, Vec<f64>) {
    let case = build_gypsum_case(pe);
    let mut spec = case.spec.with_grid(Grid1D::new(31).unwrap());
    spec.time.horizon = 8.0;
    spec.time.dt = 0.05;
    spec.time.decimation = 1;
    (spec, case.probes)
}

fn clean(spec: &Problem, probes: &[f64], period: f64) -> Vec<MeasurementSeries> {
    let opts = SyntheticOptions { scheme: Scheme::Sg, sigma: 0.0, period, seed: 0 };
    generate_synthetic_measurements(spec, probes, &opts).unwrap()
}

fn quick_fit() -> FitOptions {
    FitOptions { grid_points: 12, tolerance: 1e-3, ..Default::default() }
}

#[test]
fn csv_round_trip_is_exact() {
    let data = vec![
        MeasurementSeries::new(0.25, vec![(0.0, 0.3), (0.1, 0.31234567890123456), (0.2, 0.7)]).unwrap(),
        MeasurementSeries::new(0.5, vec![(0.0, 0.3), (0.3, 1.0 / 3.0)]).unwrap(),
    ];
    let mut buf = Vec::new();
    write_measurements_csv(&mut buf, &data, 1.0, 1.0).unwrap();
    assert!(String::from_utf8(buf.clone()).unwrap().starts_with("t,x,phi\n"));
    let back = read_measurements_csv(&buf[..], 1.0, 1.0).unwrap();
    assert_eq!(back, data);

    let mut buf = Vec::new();
    write_measurements_csv(&mut buf, &data, 3600.0, 0.0375).unwrap();
    let back = read_measurements_csv(&buf[..], 3600.0, 0.0375).unwrap();
    for (a, b) in back.iter().zip(&data) {
        assert_relative_eq!(a.x, b.x, max_relative = 1e-15);
        for (p, q) in a.samples.iter().zip(&b.samples) {
            assert_relative_eq!(p.0, q.0, max_relative = 1e-15);
            assert_eq!(p.1, q.1);
        }
    }
}

#[test]
fn csv_keeps_the_temperature_column() {
    let mut s = MeasurementSeries::new(0.5, vec![(0.0, 0.3), (1.0, 0.4)]).unwrap();
    s.temperature = Some(vec![(0.0, 296.15), (1.0, 297.0)]);
    let mut buf = Vec::new();
    write_measurements_csv(&mut buf, std::slice::from_ref(&s), 1.0, 1.0).unwrap();
    assert!(String::from_utf8(buf.clone()).unwrap().starts_with("t,x,phi,T\n"));
    assert_eq!(read_measurements_csv(&buf[..], 1.0, 1.0).unwrap(), vec![s]);
}

#[test]
fn csv_rejects_invalid_series() {
    for text in ["t,x,phi\n0,0.5,0.3\n0,0.5,0.4\n", "t,x,phi\n0,0.5,1.3\n", "t,x\n0,0.5\n", "t,x,phi\n0,0.5,abc\n", "t,x,phi\n"] {
        assert!(read_measurements_csv(text.as_bytes(), 1.0, 1.0).is_err(), "{text:?}");
    }
    assert!(MeasurementSeries::new(0.5, vec![(0.0, -0.1)]).is_err());
}

#[test]
fn interpolation_is_linear_and_clamped() {
    let (t, v) = ([0.0, 1.0, 3.0], [1.0, 3.0, 2.0]);
    assert_eq!(interpolate_series(&t, &v, 0.5), 2.0);
    assert_eq!(interpolate_series(&t, &v, 2.0), 2.5);
    assert_eq!(interpolate_series(&t, &v, -1.0), 1.0);
    assert_eq!(interpolate_series(&t, &v, 9.0), 2.0);
}

#[test]
fn synthetic_data_is_deterministic_and_noisy_at_the_stated_level() {
    let (spec, probes) = quick_gypsum(PecletModel::Constant(1.8));
    let opts = SyntheticOptions { scheme: Scheme::Sg, sigma: 0.01, period: 0.01, seed: 11 };
    let a = generate_synthetic_measurements(&spec, &probes, &opts).unwrap();
    let b = generate_synthetic_measurements(&spec, &probes, &opts).unwrap();
    assert_eq!(a, b);
    let c = generate_synthetic_measurements(&spec, &probes, &SyntheticOptions { seed: 12, ..opts }).unwrap();
    assert_ne!(a, c);
    let exact = clean(&spec, &probes, 0.01);
    let resid: Vec<f64> =
        a.iter().zip(&exact).flat_map(|(s, e)| s.samples.iter().zip(&e.samples).map(|(p, q)| p.1 - q.1)).collect();
    let n = resid.len() as f64;
    let mean = resid.iter().sum::<f64>() / n;
    let sd = (resid.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    assert!(n > 1500.0);
    assert!((0.008..=0.012).contains(&sd), "{sd}");
    assert!(mean.abs() < 3.0 * 0.01 / n.sqrt() + 1e-4);
    // stamps every period, ending at the horizon
    assert_eq!(a[0].samples.len(), 801);
    assert_eq!(a[0].samples.last().unwrap().0, 8.0);
}

#[test]
fn integrated_abs_is_the_trapezoid_rule() {
    let n = 2001;
    let t: Vec<f64> = (0..n).map(|k| k as f64 * std::f64::consts::TAU / (n - 1) as f64).collect();
    let v: Vec<f64> = t.iter().map(|x| x.sin()).collect();
    assert!((integrated_abs(&t, &v) - 4.0).abs() < 1e-5);
    assert_eq!(integrated_abs(&[0.0, 2.0], &[-1.0, -3.0]), 4.0);
}

#[test]
fn sensitivity_vanishes_where_it_must() {
    let (spec, probes) = quick_gypsum(PecletModel::Constant(0.0));
    let s = sensitivity(&spec, Scheme::Sg, SensitivityParam::Peclet, &probes, 0.01).unwrap();
    assert!(s.iter().all(|series| series.theta.iter().all(|&v| v == 0.0)));
    let (spec, probes) = quick_gypsum(PecletModel::Constant(1.8));
    for param in [SensitivityParam::Diffusion, SensitivityParam::Peclet] {
        let s = sensitivity(&spec, Scheme::Sg, param, &probes, 0.01).unwrap();
        for series in &s {
            assert_eq!(series.theta[0], 0.0);
            assert_eq!(series.times, spec.time.stored_times());
            assert!(series.theta.iter().any(|v| v.abs() > 1e-3));
        }
    }
    assert!(sensitivity(&spec, Scheme::Sg, SensitivityParam::Peclet, &probes, 0.0).is_err());
    assert!(sensitivity(&spec, Scheme::Sg, SensitivityParam::Peclet, &probes, 0.5).is_err());
}

#[test]
fn sensitivity_is_converged_in_delta() {
    let (spec, probes) = quick_gypsum(PecletModel::Constant(1.8));
    for param in [SensitivityParam::Diffusion, SensitivityParam::Peclet] {
        let a = sensitivity(&spec, Scheme::Sg, param, &probes[..1], 0.01).unwrap();
        let b = sensitivity(&spec, Scheme::Sg, param, &probes[..1], 0.005).unwrap();
        let peak = a[0].theta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = a[0].theta.iter().zip(&b[0].theta).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        assert!(diff < 1e-3 * peak, "{param}: {diff} vs {peak}");
    }
}

#[test]
fn sensitivity_parameter_names_parse() {
    for (s, p) in [("d", SensitivityParam::Diffusion), ("d_m", SensitivityParam::Diffusion), ("pe", SensitivityParam::Peclet)] {
        assert_eq!(s.parse::<SensitivityParam>().unwrap(), p);
    }
    assert!("bi".parse::<SensitivityParam>().is_err());
}

#[test]
fn clean_data_has_zero_misfit_at_the_truth() {
    let (spec, probes) = quick_gypsum(PecletModel::Constant(1.8));
    let data = clean(&spec, &probes, 0.1);
    assert!(misfit(&spec, &data, &PecletModel::Constant(1.8), Scheme::Sg) < 1e-14);
    assert!(misfit(&spec, &data, &PecletModel::Constant(1.0), Scheme::Sg) > 1e-3);
}

#[test]
fn constant_fit_recovers_planted_values() {
    for planted in [0.0, 1.3] {
        let (spec, probes) = quick_gypsum(PecletModel::Constant(planted));
        let data = clean(&spec, &probes, 0.1);
        let fit = fit_peclet_constant(&spec, &data, (0.0, 4.0), &quick_fit()).unwrap();
        let PecletModel::Constant(pe) = fit.model else { panic!("constant model expected") };
        assert!((pe - planted).abs() < 5e-3, "{planted}: {pe}");
        assert!(fit.misfit < 1e-4);
    }
}

#[test]
fn single_segment_fit_is_the_constant_fit() {
    let (spec, probes) = quick_gypsum(PecletModel::Constant(1.3));
    let data = clean(&spec, &probes, 0.2);
    let a = fit_peclet_constant(&spec, &data, (0.0, 4.0), &quick_fit()).unwrap();
    let b = fit_peclet_piecewise(&spec, &data, &[0.0, 8.0], (0.0, 4.0), &quick_fit()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn duplicated_series_do_not_move_the_fit() {
    let (spec, probes) = quick_gypsum(PecletModel::Constant(1.3));
    let opts = SyntheticOptions { scheme: Scheme::Sg, sigma: 0.005, period: 0.2, seed: 3 };
    let data = generate_synthetic_measurements(&spec, &probes, &opts).unwrap();
    let twice: Vec<MeasurementSeries> = data.iter().chain(&data).cloned().collect();
    let a = fit_peclet_constant(&spec, &data, (0.0, 4.0), &quick_fit()).unwrap();
    let b = fit_peclet_constant(&spec, &twice, (0.0, 4.0), &quick_fit()).unwrap();
    assert_eq!(a.model, b.model);
    assert_relative_eq!(a.misfit, b.misfit, max_relative = 1e-12);
}

#[test]
fn two_segment_fit_recovers_planted_profile() {
    let boundaries = [0.0, 3.0, 8.0];
    let planted = PecletModel::piecewise(&boundaries, &[0.8, 2.5]).unwrap();
    let (spec, probes) = quick_gypsum(planted);
    let data = clean(&spec, &probes, 0.1);
    let constant = fit_peclet_constant(&spec, &data, (0.0, 4.0), &quick_fit()).unwrap();
    let fit = fit_peclet_piecewise(&spec, &data, &boundaries, (0.0, 4.0), &quick_fit()).unwrap();
    let values = fit.model.values();
    assert!((values[0] - 0.8).abs() < 0.05 && (values[1] - 2.5).abs() < 0.05, "{values:?}");
    assert!(fit.misfit < constant.misfit);
}

#[test]
fn fit_rejects_bad_bounds_and_empty_data() {
    let (spec, probes) = quick_gypsum(PecletModel::Constant(1.3));
    let data = clean(&spec, &probes, 1.0);
    assert!(fit_peclet_constant(&spec, &data, (2.0, 1.0), &quick_fit()).is_err());
    assert!(fit_peclet_constant(&spec, &[], (0.0, 4.0), &quick_fit()).is_err());
    assert!(fit_peclet_piecewise(&spec, &data, &[0.0, 5.0, 4.0, 8.0], (0.0, 4.0), &quick_fit()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn csv_round_trip_holds_for_any_series(
        x in 0.0f64..1.0,
        steps in prop::collection::vec((1e-3f64..1.0, 0.0f64..1.0), 1..40),
    ) {
        let mut t = 0.0;
        let samples: Vec<(f64, f64)> = steps.iter().map(|&(dt, phi)| { t += dt; (t, phi) }).collect();
        let data = vec![MeasurementSeries::new(x, samples).unwrap()];
        let mut buf = Vec::new();
        write_measurements_csv(&mut buf, &data, 1.0, 1.0).unwrap();
        prop_assert_eq!(read_measurements_csv(&buf[..], 1.0, 1.0).unwrap(), data);
    }
}
