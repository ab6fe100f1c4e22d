use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use advdiff::analysis::{
    fit_peclet_constant, fit_peclet_piecewise, generate_synthetic_measurements, interpolate_series,
    read_measurements_csv, write_measurements_csv, FitOptions, SensitivityParam, SyntheticOptions,
};
use advdiff::cases::{gypsum_scenario, CaseId};
use advdiff::config::{load_problem, problem_to_json};
use advdiff::driver::{solve, steady_state_solve};
use advdiff::metrics::{convergence_study, ReferenceOptions, Vary};
use advdiff::{
    relative_humidity, DimensionalScenario, Grid, Peclet, Problem, Scheme, Time, DEFAULT_SAFETY,
};
use serde::Serialize;

use super::output::{csv, prepare_dir, write_json, write_text, Failure, DIVERGED};
use super::ProblemArgs;

const CONFIG_PROBES: [f64; 3] = [0.0, 0.5, 1.0];

/// Problem after overrides, with its probes and output scales.
struct Setup {
    spec: Problem,
    scheme: Scheme,
    probes: Vec<f64>,
    /// Multiply dimensionless time and position by these on output.
    scale_t: f64,
    scale_x: f64,
}

impl Setup {
    fn phi(&self, u: f64) -> Result<f64, Failure> {
        Ok(relative_humidity(u, self.spec.initial.humidity)?.phi)
    }
}

fn setup(args: &ProblemArgs) -> Result<Setup, Failure> {
    let scheme: Scheme = args.scheme.parse()?;
    let (mut spec, mut probes, scenario): (Problem, Vec<f64>, Option<DimensionalScenario<f64>>) =
        match (&args.case, &args.config) {
            (Some(id), None) => {
                let id: CaseId = id.parse()?;
                let case = id.build::<f64>();
                let scenario = (args.dimensional && id == CaseId::GypsumS6).then(gypsum_scenario::<f64>);
                (case.spec, case.probes, scenario)
            }
            (None, Some(path)) => {
                let loaded = load_problem(path, args.dimensional)?;
                (loaded.spec, CONFIG_PROBES.to_vec(), loaded.scenario)
            }
            _ => return Err(Failure::usage("give exactly one of --case or --config")),
        };
    if args.dimensional && scenario.is_none() {
        return Err(Failure::usage("--dimensional needs a config with a `dimensional` block or the gypsum_s6 case"));
    }

    if let Some(dx) = args.dx {
        spec.grid = Grid::with_spacing(dx)?;
    }
    let mut time = spec.time;
    if let Some(h) = args.horizon {
        time.horizon = h;
    }
    if args.adaptive {
        let safety = match time.mode {
            advdiff::StepMode::Adaptive { safety } => safety,
            advdiff::StepMode::Fixed => DEFAULT_SAFETY,
        };
        time = Time::adaptive(args.dt.unwrap_or(time.dt), time.horizon, safety).with_decimation(time.decimation);
    } else if let Some(dt) = args.dt {
        time = Time::fixed(dt, time.horizon).with_decimation(time.decimation);
    }
    if let Some(k) = args.decimation {
        time = time.with_decimation(k);
    }
    spec.time = time;
    match (&args.peclet, &args.peclet_segments) {
        (Some(v), None) if v.len() == 1 => spec.peclet = Peclet::Constant(v[0]),
        (Some(v), Some(b)) => spec.peclet = Peclet::piecewise(b, v)?,
        (Some(_), None) => return Err(Failure::usage("several --peclet values need --peclet-segments")),
        (None, Some(_)) => return Err(Failure::usage("--peclet-segments needs --peclet values")),
        (None, None) => {}
    }
    if let Some(p) = &args.probes {
        probes = p.clone();
    }
    spec.validate()?;
    let (scale_t, scale_x) = scenario.map_or((1.0, 1.0), |s| (s.reference_time, s.length));
    prepare_dir(&args.out)?;
    Ok(Setup { spec, scheme, probes, scale_t, scale_x })
}

pub fn simulate(args: &ProblemArgs) -> Result<(), Failure> {
    let s = setup(args)?;
    let run = solve(&s.spec, s.scheme, &s.probes)?;
    let nodes = run.field.grid.nodes();
    let mut rows = Vec::with_capacity(run.field.times.len() * nodes.len());
    for (t, row) in run.field.times.iter().zip(&run.field.rows) {
        for (x, &u) in nodes.iter().zip(row) {
            rows.push([t * s.scale_t, x * s.scale_x, u, s.phi(u)?]);
        }
    }
    write_text(&args.out, "solution.csv", &csv("t,x,u,phi", rows))?;
    let mut rows = Vec::new();
    for (p, &x) in run.probes.positions.iter().enumerate() {
        for (t, &u) in run.field.times.iter().zip(&run.probes.series[p]) {
            rows.push([t * s.scale_t, x * s.scale_x, u, s.phi(u)?]);
        }
    }
    write_text(&args.out, "probes.csv", &csv("t,x,u,phi", rows))?;
    write_json(&args.out, "report.json", &run.report)?;
    if !run.is_completed() {
        let message = run.report.message.clone().unwrap_or_else(|| "run stopped early".into());
        return Err(Failure { code: DIVERGED, message: format!("{message}; partial solution written") });
    }
    Ok(())
}

#[derive(Serialize)]
struct ConvergenceSummary<'a> {
    vary: Vary,
    scheme: Scheme,
    slope: f64,
    intercept: f64,
    residual: f64,
    warning: &'a Option<String>,
    points: &'a [(f64, f64)],
    oracle: &'a advdiff::metrics::RichardsonCheck,
}

pub fn converge(
    args: &ProblemArgs,
    vary: &str,
    values: &[f64],
    ref_space: Option<usize>,
    ref_time: Option<usize>,
) -> Result<(), Failure> {
    let vary = match vary {
        "dx" => Vary::Dx,
        "dt" => Vary::Dt,
        other => return Err(Failure::usage(format!("--vary must be dx or dt, got `{other}`"))),
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if sorted.len() < 3 || sorted.len() != values.len() {
        return Err(Failure::usage("--values needs at least three distinct step sizes"));
    }
    let s = setup(args)?;
    let opts = match vary {
        Vary::Dx => ReferenceOptions::fitted(ref_space.unwrap_or(2), ref_time.unwrap_or(2)),
        Vary::Dt => ReferenceOptions::temporal(s.scheme, ref_time.unwrap_or(16)),
    };
    let study = convergence_study(&s.spec, s.scheme, vary, values, opts)?;
    let t = &study.table;
    write_text(&args.out, "convergence.csv", &csv("h,eps", t.points.iter().map(|&(h, e)| [h, e])))?;
    let summary = ConvergenceSummary {
        vary,
        scheme: s.scheme,
        slope: t.slope,
        intercept: t.intercept,
        residual: t.residual,
        warning: &t.warning,
        points: &t.points,
        oracle: &study.oracle,
    };
    write_json(&args.out, "convergence.json", &summary)
}

pub fn sensitivity(args: &ProblemArgs, param: &str, delta: f64) -> Result<(), Failure> {
    let param: SensitivityParam = param.parse()?;
    let s = setup(args)?;
    let series = advdiff::analysis::sensitivity(&s.spec, s.scheme, param, &s.probes, delta)?;
    let rows = series
        .iter()
        .flat_map(|ser| ser.times.iter().zip(&ser.theta).map(move |(&t, &v)| (t, ser.x, v)))
        .map(|(t, x, v)| [t * s.scale_t, x * s.scale_x, v]);
    write_text(&args.out, "sensitivity.csv", &csv("t,x,theta", rows))
}

pub fn fit_peclet(args: &ProblemArgs, data: &Path, segments: Option<&[f64]>, bounds: (f64, f64)) -> Result<(), Failure> {
    let s = setup(args)?;
    let file = File::open(data).map_err(|e| Failure::usage(format!("{}: {e}", data.display())))?;
    let measured = read_measurements_csv(BufReader::new(file), s.scale_t, s.scale_x)?;
    let opts = FitOptions { scheme: s.scheme, ..FitOptions::default() };
    let fit = match segments {
        Some(b) => {
            let b: Vec<f64> = b.iter().map(|t| t / s.scale_t).collect();
            fit_peclet_piecewise(&s.spec, &measured, &b, bounds, &opts)?
        }
        None => fit_peclet_constant(&s.spec, &measured, bounds, &opts)?,
    };
    write_json(&args.out, "fit.json", &fit)?;

    let fitted = s.spec.clone().with_peclet(fit.model.clone());
    let probes: Vec<f64> = measured.iter().map(|m| m.x).collect();
    let run = solve(&fitted, s.scheme, &probes)?.completed()?;
    let mut rows = Vec::new();
    for (p, m) in measured.iter().enumerate() {
        for &(t, phi) in &m.samples {
            let u = interpolate_series(&run.field.times, &run.probes.series[p], t);
            rows.push([t * s.scale_t, m.x * s.scale_x, phi, s.phi(u)?]);
        }
    }
    write_text(&args.out, "fit_curves.csv", &csv("t,x,phi_meas,phi_sim", rows))
}

pub fn steady(args: &ProblemArgs) -> Result<(), Failure> {
    let s = setup(args)?;
    let u = steady_state_solve(&s.spec, s.scheme)?;
    let rows = s
        .spec
        .grid
        .nodes()
        .into_iter()
        .zip(&u)
        .map(|(x, &u)| Ok([x * s.scale_x, u, s.phi(u)?]))
        .collect::<Result<Vec<_>, Failure>>()?;
    write_text(&args.out, "steady.csv", &csv("x,u,phi", rows))
}

pub fn gen_data(args: &ProblemArgs, sigma: f64, period: f64) -> Result<(), Failure> {
    let s = setup(args)?;
    let opts = SyntheticOptions { scheme: s.scheme, sigma, period: period / s.scale_t, seed: args.seed };
    let data = generate_synthetic_measurements(&s.spec, &s.probes, &opts)?;
    let mut buf = Vec::new();
    write_measurements_csv(&mut buf, &data, s.scale_t, s.scale_x)?;
    std::fs::write(args.out.join("measurements.csv"), buf)?;
    Ok(())
}

pub fn export(args: &ProblemArgs) -> Result<(), Failure> {
    let s = setup(args)?;
    write_text(&args.out, "problem.json", &(problem_to_json(&s.spec)? + "\n"))
}
