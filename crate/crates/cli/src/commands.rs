use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mch_core::coeffs::{coeffs_for, u_leading};
use mch_core::geometry::{stationary_points, xi_of_kappa, XI_LEFT, XI_RIGHT};
use mch_core::pde::{predicted_wavenumbers, ray_report, RayReport};
use mch_core::rh::assemble_leading;
use mch_core::{
    FieldState, GaussianProfile, QuadratureSpec, RayParameter, ReflectionCoefficient, RunDiagnostics, SectorClass,
    SimConfig, Simulator,
};
use serde::{Deserialize, Serialize};

use crate::args::{CoeffsArgs, CompareArgs, EvaluateArgs, SelftestArgs, SimulateArgs, Sweep};
use crate::error::{CliError, CliResult};

const METADATA: &str = "metadata.json";

/// Sector of `xi` with rays within `margin` of an edge reported as boundary.
fn sector_with_margin(xi: f64, margin: f64) -> SectorClass {
    if [XI_LEFT, 0.0, XI_RIGHT].iter().any(|b| (xi - b).abs() < margin) {
        SectorClass::Boundary
    } else {
        mch_core::geometry::classify_sector(xi)
    }
}

fn check_single_ray(sweep: &Sweep, xi_of: impl Fn(f64) -> f64, margin: f64) -> CliResult<()> {
    if let [z] = sweep.values.as_slice() {
        if sector_with_margin(xi_of(*z), margin) == SectorClass::Boundary {
            return Err(CliError::Usage(format!(
                "ray {z} lies within {margin} of a sector boundary"
            )));
        }
    }
    Ok(())
}

fn num(v: f64) -> String {
    // Prints `-0` as `0`.
    format!("{}", v + 0.0)
}

/// CSV writer on `dir/name`, or on stdout when no directory is given.
fn csv_writer(out: Option<&Path>, name: &str) -> CliResult<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            Box::new(fs::File::create(dir.join(name))?)
        }
        None => Box::new(std::io::stdout()),
    };
    Ok(csv::Writer::from_writer(sink))
}

pub fn coeffs(args: &CoeffsArgs) -> CliResult<()> {
    let rc = args.reflection.reflection()?;
    let spec = args.reflection.quadrature()?;
    let frame = args.frame;
    check_single_ray(&args.zeta, |z| RayParameter::new(z, frame).xi, args.margin)?;
    let mut w = csv_writer(args.out.as_deref(), "coeffs.csv")?;
    w.write_record([
        "zeta", "sector", "branch", "kappa", "mu", "h", "C1", "C2", "C3", "C4_tilde",
    ])?;
    for &zeta in &args.zeta.values {
        let ray = RayParameter::new(zeta, frame);
        let sector = sector_with_margin(ray.xi, args.margin);
        if !sector.is_oscillatory() {
            let mut row = vec![num(zeta), sector.label().to_string()];
            row.resize(10, String::new());
            w.write_record(&row)?;
            continue;
        }
        for c in coeffs_for(&rc, ray.xi, &spec)? {
            w.write_record([
                num(zeta),
                sector.label().to_string(),
                c.branch.to_string(),
                num(c.kappa),
                num(c.mu),
                num(c.h),
                num(c.c1),
                num(c.c2),
                num(c.c3),
                num(c.c4_tilde),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Closed-form and residue-sum values of `û` on the `y`-frame ray `xi`.
fn dual_values(rc: &ReflectionCoefficient, xi: f64, t: f64, spec: &QuadratureSpec) -> CliResult<(f64, f64, f64)> {
    let cs = coeffs_for(rc, xi, spec)?;
    let formula: f64 = cs.iter().map(|c| c.term_y(t)).sum();
    let envelope: f64 = cs.iter().map(|c| c.envelope(t)).sum();
    let dual = assemble_leading(rc, xi, t, spec)?.u_hat;
    Ok((formula, dual, envelope))
}

pub fn evaluate(args: &EvaluateArgs) -> CliResult<()> {
    let rc = args.reflection.reflection()?;
    let spec = args.reflection.quadrature()?;
    let frame = args.frame;
    check_single_ray(&args.zeta, |z| RayParameter::new(z, frame).xi, args.margin)?;
    let mut w = csv_writer(args.out.as_deref(), "evaluate.csv")?;
    w.write_record([
        "zeta",
        "t",
        "x",
        "sector",
        "u_leading",
        "envelope",
        "u_hat_formula",
        "u_hat_dual",
    ])?;
    let mut worst: f64 = 0.0;
    for &zeta in &args.zeta.values {
        let ray = RayParameter::new(zeta, frame);
        let sector = sector_with_margin(ray.xi, args.margin);
        for &t in &args.t.0 {
            let x = zeta * t;
            let mut row = vec![num(zeta), num(t), num(x), sector.label().to_string()];
            match sector {
                SectorClass::Boundary => row.resize(8, String::new()),
                SectorClass::FastDecayLeft | SectorClass::FastDecayRight => {
                    let v = u_leading(&rc, x, t, frame, &spec)?.value.unwrap_or_default();
                    row.extend([num(v), num(0.0), num(0.0), num(0.0)]);
                }
                _ => {
                    let v = u_leading(&rc, x, t, frame, &spec)?
                        .value
                        .ok_or_else(|| CliError::Accuracy(format!("no leading term at zeta = {zeta}")))?;
                    let (formula, dual, envelope) = dual_values(&rc, ray.xi, t, &spec)?;
                    if envelope > 0.0 {
                        worst = worst.max((formula - dual).abs() / envelope);
                    }
                    row.extend([num(v), num(envelope), num(formula), num(dual)]);
                }
            }
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    if worst > 1e-9 {
        return Err(CliError::Accuracy(format!(
            "dual path differs from the closed form by {worst:.2e} of the envelope"
        )));
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct SnapshotEntry {
    t: f64,
    file: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct RunMetadata {
    config: SimConfig,
    snapshots: Vec<SnapshotEntry>,
    diagnostics: RunDiagnostics,
}

pub fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let mut times = args.t.0.clone();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let config = SimConfig {
        half_length: args.half_length,
        modes: args.modes,
        dt: args.dt,
        t_end: *times.last().expect("at least one time"),
        profile: GaussianProfile {
            amplitude: args.amplitude,
            width: args.width,
            center: 0.0,
        },
        ..SimConfig::default()
    };
    let mut sim = Simulator::new(config)?;
    fs::create_dir_all(&args.out)?;
    let grid = config.grid();
    let mut snapshots = Vec::with_capacity(times.len());
    for (i, &t) in times.iter().enumerate() {
        sim.advance_to(t)?;
        let state = sim.state();
        let file = format!("snapshot_{i:03}.csv");
        let mut w = csv::Writer::from_path(args.out.join(&file))?;
        w.write_record(["x", "u_tilde", "m_tilde"])?;
        for ((x, u), m) in grid.iter().zip(&state.u_tilde).zip(&state.m_tilde) {
            w.write_record([num(*x), num(*u), num(*m)])?;
        }
        w.flush()?;
        snapshots.push(SnapshotEntry { t, file });
    }
    let meta = RunMetadata {
        config,
        snapshots,
        diagnostics: sim.diagnostics(),
    };
    fs::write(args.out.join(METADATA), serde_json::to_string_pretty(&meta)?)?;
    let d = meta.diagnostics;
    println!(
        "t = {} after {} steps; mean drift {:.2e}; max |u~| {:.3e}",
        d.t, d.steps, d.mean_relative_drift, d.max_abs_u
    );
    Ok(())
}

fn read_snapshot(path: &Path, t: f64, config: &SimConfig) -> CliResult<FieldState> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut u_tilde = Vec::with_capacity(config.modes);
    let mut m_tilde = Vec::with_capacity(config.modes);
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| -> CliResult<f64> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::Io(format!("{}: malformed row {:?}", path.display(), rec)))
        };
        u_tilde.push(field(1)?);
        m_tilde.push(field(2)?);
    }
    if u_tilde.len() != config.modes {
        return Err(CliError::Io(format!(
            "{}: {} rows, expected {}",
            path.display(),
            u_tilde.len(),
            config.modes
        )));
    }
    Ok(FieldState { t, u_tilde, m_tilde })
}

#[derive(Debug, Serialize)]
struct RayVerdict {
    #[serde(flatten)]
    report: RayReport,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct CompareReport {
    input: PathBuf,
    tol_k: f64,
    tol_exponent: f64,
    rays: Vec<RayVerdict>,
    /// Predicted `k_loc` at `ζ̃ = 1`.
    self_check_k_loc: f64,
    mean_relative_drift: f64,
    passed: bool,
}

pub fn compare(args: &CompareArgs) -> CliResult<()> {
    let meta_path = args.input.join(METADATA);
    let text = fs::read_to_string(&meta_path).map_err(|e| CliError::Io(format!("{}: {e}", meta_path.display())))?;
    let meta: RunMetadata = serde_json::from_str(&text)?;
    let states = meta
        .snapshots
        .iter()
        .map(|s| read_snapshot(&args.input.join(&s.file), s.t, &meta.config))
        .collect::<CliResult<Vec<_>>>()?;

    let mut rays = Vec::with_capacity(args.zeta.values.len());
    for &zeta in &args.zeta.values {
        let report = ray_report(&states, &meta.config, zeta)?;
        let passed = if report.label == "fast" {
            report.envelope_exponent.is_some_and(|p| p <= -1.0)
        } else {
            report.rel_err.is_some_and(|e| e.abs() < args.tol_k)
                && report
                    .envelope_exponent
                    .is_some_and(|p| (p + 0.5).abs() <= args.tol_exponent)
        };
        rays.push(RayVerdict { report, passed });
    }
    let report = CompareReport {
        input: args.input.clone(),
        tol_k: args.tol_k,
        tol_exponent: args.tol_exponent,
        self_check_k_loc: predicted_wavenumbers(1.0).first().copied().unwrap_or(f64::NAN),
        mean_relative_drift: meta.diagnostics.mean_relative_drift,
        passed: rays.iter().all(|r| r.passed),
        rays,
    };
    let json = serde_json::to_string_pretty(&report)?;
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("report.json"), &json)?;
        }
        None => println!("{json}"),
    }
    for r in &report.rays {
        eprintln!(
            "zeta~ {:>6}: {} ({})",
            r.report.zeta_tilde,
            if r.passed { "pass" } else { "FAIL" },
            r.report.label
        );
    }
    if !report.passed {
        return Err(CliError::Accuracy("some rays are outside the tolerances".into()));
    }
    Ok(())
}

pub fn selftest(args: &SelftestArgs) -> CliResult<()> {
    let rc = args.reflection.reflection()?;
    let spec = args.reflection.quadrature()?;
    let mut failures = 0;
    let mut report = |name: &str, ok: bool, detail: String| {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    let mut round_trip: f64 = 0.0;
    for i in 1..400 {
        let xi = XI_LEFT + (XI_RIGHT - XI_LEFT) * i as f64 / 400.0;
        if xi.abs() < 1e-9 {
            continue;
        }
        let stat = stationary_points(xi)?;
        for p in [Some(stat.zero), stat.one].into_iter().flatten() {
            round_trip = round_trip.max((xi_of_kappa(p.kappa) - xi).abs());
        }
    }
    report("geometry", round_trip <= 1e-12, format!("round trip {round_trip:.1e}"));

    let k = predicted_wavenumbers(1.0)[0];
    report("k_loc at 1", (k - 0.485_868_2).abs() < 1e-6, format!("{k:.7}"));

    let mut worst: f64 = 0.0;
    for xi in [0.3, 1.0, 1.9, -0.22, -0.125, -0.05] {
        for t in [1e2, 1e4] {
            let (formula, dual, envelope) = dual_values(&rc, xi, t, &spec)?;
            if envelope > 0.0 {
                worst = worst.max((formula - dual).abs() / envelope);
            }
        }
    }
    report(
        "dual path",
        worst < 1e-9,
        format!("max gap {worst:.1e} of the envelope"),
    );

    if failures > 0 {
        return Err(CliError::Accuracy(format!("{failures} self-test check(s) failed")));
    }
    Ok(())
}
