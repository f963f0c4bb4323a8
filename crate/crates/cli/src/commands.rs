use std::io::Write;
use std::path::PathBuf;

use mosqdyn::certify::{certify as run_certify, CertifyOptions, CertifyReport};
use mosqdyn::export::{fmt_real, write_orbit_csv};
use mosqdyn::ode::{equilibrium_report, integrate_ode, OdeConfig};
use mosqdyn::sampling::{random_w0_parameters, rng_from_seed, DEFAULT_SEED, SEED_ENV_VAR};
use mosqdyn::spectral::{classify_origin, FixedPointType, Matrix2, DEFAULT_HYPERBOLICITY_TOL};
use mosqdyn::sweep::{run_sweep, summarize, write_sweep_csv, GridRange, SweepSpec};
use mosqdyn::{apply_w, iterate_orbit, OrbitConfig, Parameters, State, ValidationMode, Verdict};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ConfigFile;
use crate::output::{write_atomic, write_output};
use crate::{
    CertifyArgs, ClassifyArgs, CliError, CompareArgs, Format, OrbitArgs, ParamArgs, SimulateArgs,
    StartArgs, SweepArgs,
};

/// `println!` that tolerates a closed stdout (e.g. piped into `head`).
macro_rules! say {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn json_err(e: serde_json::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn required<T>(v: Option<T>, key: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{key}")))
}

fn parameters(cfg: &ConfigFile, a: &ParamArgs) -> Result<Parameters, CliError> {
    Ok(Parameters::new(
        required(cfg.get(a.alpha, "alpha")?, "alpha")?,
        required(cfg.get(a.beta, "beta")?, "beta")?,
        required(cfg.get(a.mu, "mu")?, "mu")?,
        cfg.get_or(a.d0, "d0", 0.0)?,
        cfg.get_or(a.d1, "d1", 0.0)?,
    ))
}

fn ensure_valid(p: &Parameters, mode: ValidationMode) -> Result<(), CliError> {
    let report = p.validate(mode);
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("invalid parameters: {}", report.violations().join("; "))))
    }
}

fn start(cfg: &ConfigFile, s: &StartArgs, default: State) -> Result<State, CliError> {
    let st = State::new(cfg.get_or(s.x0, "x0", default.x)?, cfg.get_or(s.y0, "y0", default.y)?);
    if !st.in_quadrant() {
        return Err(CliError::Usage(format!("initial state ({}, {}) must be finite and nonnegative", st.x, st.y)));
    }
    Ok(st)
}

fn orbit_config(cfg: &ConfigFile, o: &OrbitArgs) -> Result<OrbitConfig, CliError> {
    let d = OrbitConfig::default();
    let c = OrbitConfig {
        max_iters: cfg.get_or(o.steps, "steps", d.max_iters)?,
        conv_tol: cfg.get_or(o.conv_tol, "conv-tol", d.conv_tol)?,
        div_threshold: cfg.get_or(o.div_threshold, "div-threshold", d.div_threshold)?,
        record_every: cfg.get_or(o.record_every, "record-every", d.record_every)?,
    };
    c.validate()?;
    Ok(c)
}

fn params_line(p: &Parameters) -> String {
    format!("--alpha {} --beta {} --mu {} --d0 {} --d1 {}", p.alpha, p.beta, p.mu, p.d0, p.d1)
}

pub fn simulate(a: SimulateArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(a.params.config.as_deref())?;
    let p = parameters(&cfg, &a.params)?;
    ensure_valid(&p, ValidationMode::W0)?;
    let s0 = start(&cfg, &a.start, State::new(1.0, 1.0))?;
    let oc = orbit_config(&cfg, &a.orbit)?;
    let format = match cfg.get::<String>(None, "format")? {
        _ if a.format.is_some() => a.format.unwrap(),
        Some(f) if f == "json" => Format::Json,
        Some(f) if f == "csv" => Format::Csv,
        Some(f) => return Err(CliError::Usage(format!("unknown format {f:?}"))),
        None => Format::Csv,
    };
    let orbit = iterate_orbit(&p, s0, &oc)?;
    let out: Option<PathBuf> = a.out.or(cfg.get(None, "out")?);
    write_output(out.as_deref(), |w| match format {
        Format::Csv => write_orbit_csv(w, &orbit).map_err(CliError::from),
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &orbit).map_err(json_err)?;
            writeln!(w).map_err(io_err)
        }
    })?;
    let summary = format!(
        "verdict={} n_steps={} y_limit_estimate={}",
        orbit.verdict.as_str(),
        orbit.n_steps,
        orbit.y_limit_estimate
    );
    if out.is_some() {
        say!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn expected_class(p: &Parameters) -> FixedPointType {
    if p.beta < p.mu {
        FixedPointType::Attracting
    } else if p.beta > p.mu {
        FixedPointType::Saddle
    } else {
        FixedPointType::Nonhyperbolic
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    parameters: Parameters,
    jacobian: Matrix2,
    lambda1: f64,
    lambda2: f64,
    classification: FixedPointType,
    r0: f64,
    expected: FixedPointType,
    matches: bool,
}

pub fn classify(a: ClassifyArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(a.params.config.as_deref())?;
    let p = parameters(&cfg, &a.params)?;
    ensure_valid(&p, ValidationMode::General)?;
    if p.d0 != 0.0 || p.d1 != 0.0 {
        return Err(CliError::Usage("classify covers the case d0 = d1 = 0".into()));
    }
    let tol = cfg.get_or(a.tol, "tol", DEFAULT_HYPERBOLICITY_TOL)?;
    let s = classify_origin(&p, tol)?;
    let expected = expected_class(&p);
    let report = ClassifyReport {
        parameters: p,
        jacobian: s.jacobian,
        lambda1: s.lambda1,
        lambda2: s.lambda2,
        classification: s.classification,
        r0: mosqdyn::ode::compute_r0(&p)?,
        expected,
        matches: s.classification == expected,
    };
    say!("{}", serde_json::to_string_pretty(&report).map_err(json_err)?);
    Ok(())
}

fn parse_range(text: &str, name: &str) -> Result<GridRange, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || CliError::Usage(format!("--{name}-range expects lo,hi,steps, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(GridRange {
        lo: parts[0].parse().map_err(|_| bad())?,
        hi: parts[1].parse().map_err(|_| bad())?,
        steps: parts[2].parse().map_err(|_| bad())?,
    })
}

fn axis(cfg: &ConfigFile, name: &str, range: Option<String>, value: Option<f64>) -> Result<GridRange, CliError> {
    let key = format!("{name}-range");
    if let Some(r) = cfg.get(range, &key)? {
        return parse_range(&r, name);
    }
    match cfg.get(value, name)? {
        Some(v) => Ok(GridRange::fixed(v)),
        None => Err(CliError::Usage(format!("missing --{name} or --{name}-range"))),
    }
}

pub fn sweep(a: SweepArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(a.params.config.as_deref())?;
    let spec = SweepSpec {
        alpha: axis(&cfg, "alpha", a.alpha_range, a.params.alpha)?,
        beta: axis(&cfg, "beta", a.beta_range, a.params.beta)?,
        mu: axis(&cfg, "mu", a.mu_range, a.params.mu)?,
        d0: cfg.get_or(a.params.d0, "d0", 0.0)?,
        d1: cfg.get_or(a.params.d1, "d1", 0.0)?,
        start: start(&cfg, &a.start, State::new(1.0, 1.0))?,
        orbit: orbit_config(&cfg, &a.orbit)?,
    };
    let cells = run_sweep(&spec)?;
    let out = a.out.or(cfg.get(None, "out")?).unwrap_or_else(|| PathBuf::from("sweep.csv"));
    write_atomic(&out, |w| write_sweep_csv(w, &cells).map_err(CliError::from))?;
    let s = summarize(&cells);
    say!(
        "cells={} in_condition={} out_of_condition={} agree={} disagree={} extinction={} survival={} exhausted={}",
        s.cells, s.in_condition, s.out_of_condition, s.agree, s.disagree, s.extinction, s.survival, s.exhausted
    );
    if s.all_agree() {
        return Ok(());
    }
    for c in cells.iter().filter(|c| c.agree == Some(false)) {
        eprintln!(
            "disagreement in cell {}: {} vs {} ({})",
            c.index,
            c.classification.map_or("-", |k| k.as_str()),
            c.verdict.map_or("-", |v| v.as_str()),
            params_line(&c.parameters)
        );
    }
    Err(CliError::Check(format!("{} of {} in-condition cells disagree", s.disagree, s.in_condition)))
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV_VAR}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn print_report(label: &str, r: &CertifyReport) {
    say!("{label}: {}", params_line(&r.parameters));
    for o in &r.outcomes {
        say!("  [{}] {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
}

pub fn certify(a: CertifyArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(a.params.config.as_deref())?;
    let has_params = a.params.alpha.is_some() || cfg.get::<f64>(None, "alpha")?.is_some();
    let trials: usize = cfg.get_or(a.trials, "trials", 0)?;
    let given = if has_params {
        let p = parameters(&cfg, &a.params)?;
        ensure_valid(&p, ValidationMode::W0)?;
        Some(p)
    } else if trials == 0 {
        return Err(CliError::Usage("give parameters or --trials".into()));
    } else {
        None
    };
    let d = CertifyOptions::default();
    let opts = CertifyOptions {
        p_max: cfg.get_or(a.p_max, "p-max", d.p_max)?,
        grid_n: cfg.get_or(a.grid, "grid", d.grid_n)?,
        orbit_steps: cfg.get_or(a.steps, "steps", d.orbit_steps)?,
        start: start(&cfg, &a.start, d.start)?,
        quadrant_scans: !(a.fast || cfg.get_or(None, "fast", false)?),
    };

    let mut params: Vec<(String, Parameters)> = given.into_iter().map(|p| ("given".to_string(), p)).collect();
    if trials > 0 {
        let seed = resolve_seed(cfg.get(a.seed, "seed")?)?;
        say!("seed={seed}");
        let mut rng = rng_from_seed(seed);
        for i in 0..trials {
            params.push((format!("trial {i}"), random_w0_parameters(&mut rng, 1e-3)));
        }
    }
    let reports: Vec<CertifyReport> = params
        .par_iter()
        .map(|(_, p)| run_certify(p, &opts))
        .collect::<mosqdyn::Result<_>>()?;

    let mut failed = Vec::new();
    for ((label, _), r) in params.iter().zip(&reports) {
        print_report(label, r);
        if !r.all_passed() {
            failed.push((label.as_str(), r));
        }
    }
    if let Some(out) = a.out.or(cfg.get(None, "out")?) {
        write_atomic(&out, |w| {
            serde_json::to_writer_pretty(&mut *w, &reports).map_err(json_err)?;
            writeln!(w).map_err(io_err)
        })?;
    }
    let passed = reports.len() - failed.len();
    say!("certified {passed}/{} parameter set(s)", reports.len());
    if failed.is_empty() {
        return Ok(());
    }
    for (label, r) in &failed {
        let names: Vec<&str> = r.failures().map(|o| o.name.as_str()).collect();
        eprintln!("{label} failed [{}]; reproduce with: mosqdyn certify {}", names.join(", "), params_line(&r.parameters));
    }
    Err(CliError::Check(format!("{} parameter set(s) failed certification", failed.len())))
}

/// Samples the RK4 trajectory at integer times.
fn sample_integer_times(traj: &[(f64, State)], step: f64, n_max: u64) -> Result<Vec<State>, CliError> {
    let per_unit = (1.0 / step).round();
    if ((1.0 / step) - per_unit).abs() > 1e-9 * per_unit {
        return Err(CliError::Usage(format!("--step {step} must divide 1")));
    }
    (0..=n_max)
        .map(|n| {
            let idx = (n as f64 * per_unit) as usize;
            traj.get(idx.min(traj.len() - 1))
                .map(|&(_, s)| s)
                .ok_or_else(|| CliError::Usage("empty trajectory".into()))
        })
        .collect()
}

pub fn compare(a: CompareArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(a.params.config.as_deref())?;
    let p = parameters(&cfg, &a.params)?;
    let mode = if p.is_case_w0() { ValidationMode::W0 } else { ValidationMode::General };
    ensure_valid(&p, mode)?;
    let s0 = start(&cfg, &a.start, State::new(1.0, 1.0))?;
    let d = OdeConfig::default();
    let ode = OdeConfig {
        step: cfg.get_or(a.step, "step", d.step)?,
        t_end: cfg.get_or(a.t_end, "t-end", 100.0)?,
        conv_tol: d.conv_tol,
    };
    if !(ode.t_end >= 1.0) || ode.t_end.fract() != 0.0 {
        return Err(CliError::Usage(format!("--t-end {} must be a positive integer", ode.t_end)));
    }
    let n_max = ode.t_end as u64;

    let mut discrete = Vec::with_capacity(n_max as usize + 1);
    let mut s = s0;
    discrete.push(s);
    for _ in 0..n_max {
        s = apply_w(&p, s)?;
        discrete.push(s);
    }
    let traj = integrate_ode(&p, s0, &ode)?;
    let continuous = sample_integer_times(&traj, ode.step, n_max)?;

    let out: Option<PathBuf> = a.out.or(cfg.get(None, "out")?);
    write_output(out.as_deref(), |w| write_compare_csv(w, &discrete, &continuous))?;

    let eq = equilibrium_report(&p)?;
    let mut notes = Vec::new();
    let discrete_extinct = if p.is_case_w0() {
        let oc = orbit_config(&cfg, &a.orbit)?;
        let orbit = iterate_orbit(&p, s0, &OrbitConfig { record_every: oc.max_iters.max(1), ..oc })?;
        notes.push(format!(
            "discrete: {} after {} steps (y -> {})",
            orbit.verdict.as_str(),
            orbit.n_steps,
            orbit.y_limit_estimate
        ));
        if orbit.verdict == Verdict::Survival {
            notes.push("discrete: larvae grow without bound, adults approach alpha/mu".into());
        }
        Some(p.beta < p.mu)
    } else {
        let last = discrete[discrete.len() - 1];
        notes.push(format!("discrete: state at n = {n_max} is ({}, {})", last.x, last.y));
        None
    };

    let last = traj[traj.len() - 1].1;
    notes.push(format!("continuous: r0 = {}, trivial equilibrium {}", eq.r0, if eq.trivial_stable { "stable" } else { "unstable" }));
    let target = if eq.trivial_stable { Some(State::ORIGIN) } else { eq.positive_equilibrium };
    match target {
        Some(t) => {
            let dist = last.distance_sup(&t);
            let status = if dist <= ode.conv_tol { "settled at" } else { "heading to" };
            notes.push(format!(
                "continuous: {status} ({}, {}); distance {dist:e} at t = {}",
                t.x, t.y, ode.t_end
            ));
        }
        None => notes.push(format!(
            "continuous: d1 = 0 leaves no positive equilibrium; larvae grow without bound (x = {} at t = {})",
            last.x, ode.t_end
        )),
    }
    if let Some(extinct) = discrete_extinct {
        let coherent = extinct == eq.trivial_stable;
        notes.push(format!(
            "threshold coherence: {} (discrete extinction iff beta < mu, continuous iff r0 <= 1)",
            if coherent { "yes" } else { "no" }
        ));
    }
    let print = |line: &str| if out.is_some() { say!("{line}") } else { eprintln!("{line}") };
    for n in &notes {
        print(n);
    }
    Ok(())
}

fn write_compare_csv(w: &mut dyn Write, discrete: &[State], continuous: &[State]) -> Result<(), CliError> {
    writeln!(w, "n,x_discrete,y_discrete,x_continuous,y_continuous").map_err(io_err)?;
    for (n, (d, c)) in discrete.iter().zip(continuous).enumerate() {
        writeln!(w, "{n},{},{},{},{}", fmt_real(d.x), fmt_real(d.y), fmt_real(c.x), fmt_real(c.y)).map_err(io_err)?;
    }
    Ok(())
}

