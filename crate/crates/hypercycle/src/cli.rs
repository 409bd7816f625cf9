//! Command-line front end.
//!
//! Subcommands: `fixed-points`, `spectrum`, `simulate`, `normal-form`,
//! `curve`, `sweep`, `verify`. Exit codes: 0 success, 2 configuration or
//! domain error, 3 degenerate parameter (`k1 = 0`), 4 internal cross-check
//! discrepancy, 5 gate failure.
//!
//! Exact quantities serialize as rational strings (`"-16/5"`), never as
//! floats; CSV floats carry 17 significant digits and JSON numbers are
//! round-trip exact.

use crate::coords::ReducedState;
use crate::curve::{self, Classification, SweepOptions};
use crate::jets::ExactComplex;
use crate::model::{self, ModelError, Params, SimplexPoint};
use crate::normalform;
use crate::verify;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_CONFIG: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_DISCREPANCY: u8 = 4;
const EXIT_GATE: u8 = 5;

#[derive(Debug)]
enum CliError {
    Config(String),
    Degenerate(String),
    Discrepancy(String),
    Gate(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            CliError::Discrepancy(_) => EXIT_DISCREPANCY,
            CliError::Gate(_) => EXIT_GATE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m)
            | CliError::Degenerate(m)
            | CliError::Discrepancy(m)
            | CliError::Gate(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io error: {e}"))
    }
}

#[derive(Parser)]
#[command(
    name = "hypercycle",
    version,
    about = "Discrete hypercycle dynamics: fixed points, exact normal form, invariant curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interior fixed point, vertices, and boundary-segment membership.
    FixedPoints(FixedPointsArgs),
    /// Closed-form and numeric spectra at the interior fixed point.
    Spectrum(SpectrumArgs),
    /// Iterate the map from a start point and emit the orbit.
    Simulate(SimulateArgs),
    /// Exact cubic normal form, kill table, and stability verdict.
    NormalForm(NormalFormArgs),
    /// Invariant-curve estimate and Fourier refinement at one k1.
    Curve(CurveArgs),
    /// Radius-scaling sweep over k1 with a log-log fit.
    Sweep(SweepArgs),
    /// Run the acceptance checks and print one line per criterion.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Comma-separated list of reals (wrapper so clap keeps it one argument).
#[derive(Clone, Debug)]
struct CommaList(Vec<f64>);

impl CommaList {
    fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

fn parse_k(s: &str) -> Result<CommaList, String> {
    let vals: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    vals.map(CommaList).map_err(|e| format!("expected comma-separated reals: {e}"))
}

fn k_array(vals: &CommaList) -> Result<[f64; 4], CliError> {
    let vals = vals.as_slice();
    if vals.len() != 4 {
        return Err(CliError::Config(format!("--k needs 4 coefficients, got {}", vals.len())));
    }
    Ok([vals[0], vals[1], vals[2], vals[3]])
}

fn params_from(vals: &CommaList) -> Result<Params, CliError> {
    Params::new(k_array(vals)?).map_err(|e| CliError::Config(e.to_string()))
}

#[derive(Args)]
struct FixedPointsArgs {
    /// Rate coefficients k1,k2,k3,k4.
    #[arg(long, value_parser = parse_k, allow_hyphen_values = true, default_value = "1,1,1,1")]
    k: CommaList,
    /// Fixed-point test tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, value_parser = parse_k, allow_hyphen_values = true, default_value = "1,1,1,1")]
    k: CommaList,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_parser = parse_k, allow_hyphen_values = true, default_value = "1,1,1,1")]
    k: CommaList,
    /// Start point x1,x2,x3,x4 (defaults to the barycenter).
    #[arg(long, value_parser = parse_k, allow_hyphen_values = true)]
    x0: Option<CommaList>,
    /// Number of recorded iterates.
    #[arg(long, default_value_t = 100)]
    iters: usize,
    /// Discarded transient iterates.
    #[arg(long, default_value_t = 0)]
    burn: usize,
    #[arg(long, default_value_t = SimplexPoint::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NormalFormArgs {
    /// Emit the full derivation transcript instead of the summary.
    #[arg(long)]
    show_steps: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, value_parser = parse_k, allow_hyphen_values = true, default_value = "0.05,1,1,1")]
    k: CommaList,
    /// Recorded orbit samples.
    #[arg(long, default_value_t = curve::DEFAULT_SAMPLES)]
    iters: usize,
    /// Transient length (defaults to the attraction-rate based choice).
    #[arg(long)]
    burn: Option<u64>,
    /// Reduced-coordinate start z1,z3,z4 (defaults to (0.5 sqrt(delta), 0, 0)).
    #[arg(long, value_parser = parse_k, allow_hyphen_values = true)]
    z0: Option<CommaList>,
    /// Fourier modes for the invariance refinement.
    #[arg(long, default_value_t = 32)]
    modes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Tail rates k2,k3,k4 come from here (k1 is swept).
    #[arg(long, value_parser = parse_k, allow_hyphen_values = true, default_value = "1,1,1,1")]
    k: CommaList,
    /// Sweep grid of k1 values.
    #[arg(long, value_parser = parse_k, default_value = "0.001,0.002,0.005,0.01,0.02,0.05,0.1")]
    grid: CommaList,
    /// Analyse a single k1 instead of the grid (with --only).
    #[arg(long)]
    k1: Option<f64>,
    /// With --k1: emit one estimate row only.
    #[arg(long)]
    only: bool,
    #[arg(long, default_value_t = curve::DEFAULT_SAMPLES)]
    iters: usize,
    #[arg(long)]
    burn: Option<u64>,
    /// Worker threads for the sweep.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Gate mode: exit 5 unless the fitted slope lies in [0.4, 0.6].
    #[arg(long)]
    gate: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output path; in CSV mode a JSON fit summary lands next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

/// Parses arguments, dispatches, and maps errors to exit codes.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::FixedPoints(args) => run_fixed_points(args),
        Command::Spectrum(args) => run_spectrum(args),
        Command::Simulate(args) => run_simulate(args),
        Command::NormalForm(args) => run_normal_form(args),
        Command::Curve(args) => run_curve(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Verify(args) => run_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn full(v: f64) -> String {
    format!("{v:.16e}")
}

fn ec_json(c: &ExactComplex) -> Value {
    json!({ "re": c.re.to_string(), "im": c.im.to_string() })
}

fn complex_json(c: num_complex::Complex64) -> Value {
    json!({ "re": c.re, "im": c.im })
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// fixed-points
// ---------------------------------------------------------------------------

type SegmentPoint = fn(f64) -> [f64; 4];

fn segment_membership(p: &Params, tol: f64) -> Vec<(String, bool)> {
    let alphas = [0.25, 0.5, 0.75];
    let segments: [(&str, SegmentPoint); 3] = [
        ("(a, 0, 1-a, 0)", |a| [a, 0.0, 1.0 - a, 0.0]),
        ("(0, a, 0, 1-a)", |a| [0.0, a, 0.0, 1.0 - a]),
        ("(a, 0, 0, 1-a)", |a| [a, 0.0, 0.0, 1.0 - a]),
    ];
    segments
        .into_iter()
        .map(|(name, point)| {
            let all_fixed = alphas.iter().all(|&a| {
                let x = SimplexPoint::new(point(a)).expect("valid segment point");
                model::is_fixed_point(&x, p, tol).is_fixed
            });
            (name.to_string(), all_fixed)
        })
        .collect()
}

fn run_fixed_points(args: FixedPointsArgs) -> Result<(), CliError> {
    let p = params_from(&args.k)?;
    if p.k1() == 0.0 {
        let msg = "k1 = 0 is the degenerate parameter: P has collided with the corner \
                   Q = (0,0,0,1) and the additional segment {(a,0,0,1-a)} consists of fixed points";
        let body = json!({
            "k": args.k.as_slice(),
            "degenerate": msg,
            "segments": segment_membership(&p, args.tol)
                .into_iter()
                .map(|(name, fixed)| json!({"segment": name, "fixed": fixed}))
                .collect::<Vec<_>>(),
        });
        write_output(&args.out, &pretty(&body))?;
        return Err(CliError::Degenerate(msg.into()));
    }

    let interior = match model::interior_fixed_point(&p) {
        Ok(fp) => json!(fp.coords().to_vec()),
        Err(ModelError::OutsideSimplex { coords }) => json!({
            "outside_simplex": coords.to_vec(),
            "note": "k1 < 0: the fixed-point formula leaves the simplex; no interior fixed point",
        }),
        Err(e) => return Err(CliError::Config(e.to_string())),
    };
    let vertices: Vec<Value> = (0..4)
        .map(|m| {
            let v = SimplexPoint::vertex(m);
            let check = model::is_fixed_point(&v, &p, args.tol);
            json!({ "vertex": v.coords().to_vec(), "fixed": check.is_fixed })
        })
        .collect();
    let segments: Vec<Value> = segment_membership(&p, args.tol)
        .into_iter()
        .map(|(name, fixed)| json!({ "segment": name, "fixed": fixed }))
        .collect();
    let body = json!({
        "k": args.k.as_slice(),
        "tol": args.tol,
        "interior_fixed_point": interior,
        "vertices": vertices,
        "segments": segments,
    });
    let content = match args.format {
        Format::Json => pretty(&body),
        Format::Csv => {
            let mut s = String::from("# schema=1\nobject,value\n");
            s.push_str(&format!("interior_fixed_point,\"{}\"\n", body["interior_fixed_point"]));
            for v in body["vertices"].as_array().unwrap() {
                s.push_str(&format!("vertex {},{}\n", v["vertex"], v["fixed"]));
            }
            for seg in body["segments"].as_array().unwrap() {
                s.push_str(&format!("segment {},{}\n", seg["segment"], seg["fixed"]));
            }
            s
        }
    };
    write_output(&args.out, &content)
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

fn spectrum_json(report: &model::SpectrumReport) -> Value {
    json!({
        "eigenvalues": report.eigenvalues.iter().map(|e| complex_json(*e)).collect::<Vec<_>>(),
        "moduli": report.moduli.to_vec(),
        "transversal_index": report.transversal_index,
    })
}

fn run_spectrum(args: SpectrumArgs) -> Result<(), CliError> {
    let p = params_from(&args.k)?;
    let closed = model::closed_form_spectrum(&p).map_err(|e| match e {
        ModelError::DegenerateParameter { reason } => CliError::Degenerate(reason),
        other => CliError::Config(other.to_string()),
    })?;
    let fp = model::interior_fixed_point(&p).map_err(|e| CliError::Config(e.to_string()))?;
    let numeric = model::numeric_spectrum(&fp, &p).map_err(|e| CliError::Config(e.to_string()))?;
    let body = json!({
        "k": args.k.as_slice(),
        "delta": p.delta(),
        "interior_fixed_point": fp.coords().to_vec(),
        "closed_form": spectrum_json(&closed),
        "numeric_at_P": spectrum_json(&numeric),
    });
    let content = match args.format {
        Format::Json => pretty(&body),
        Format::Csv => {
            let mut s = String::from("# schema=1\nsource,index,re,im,modulus\n");
            for (label, report) in [("closed_form", &closed), ("numeric", &numeric)] {
                for (i, e) in report.eigenvalues.iter().enumerate() {
                    s.push_str(&format!(
                        "{label},{i},{},{},{}\n",
                        full(e.re),
                        full(e.im),
                        full(report.moduli[i])
                    ));
                }
            }
            s
        }
    };
    write_output(&args.out, &content)
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let p = params_from(&args.k)?;
    let x0 = match &args.x0 {
        Some(vals) => SimplexPoint::with_tol(k_array(vals)?, args.tol)
            .map_err(|e| CliError::Config(e.to_string()))?,
        None => SimplexPoint::center(),
    };
    let orbit = model::iterate(&x0, &p, args.iters, args.burn)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let content = match args.format {
        Format::Csv => {
            let mut s = format!(
                "# schema=1\n# k={:?} x0={:?} burn={}\nstep,x1,x2,x3,x4\n",
                p.k(),
                x0.coords(),
                args.burn
            );
            for (i, x) in orbit.iter().enumerate() {
                let c = x.coords();
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    args.burn + i + 1,
                    full(c[0]),
                    full(c[1]),
                    full(c[2]),
                    full(c[3])
                ));
            }
            s
        }
        Format::Json => pretty(&json!({
            "k": args.k.as_slice(),
            "x0": x0.coords().to_vec(),
            "burn": args.burn,
            "orbit": orbit.iter().map(|x| x.coords().to_vec()).collect::<Vec<_>>(),
        })),
    };
    write_output(&args.out, &content)
}

// ---------------------------------------------------------------------------
// normal-form
// ---------------------------------------------------------------------------

fn kill_table_json(kill: &normalform::QuadraticKill) -> Value {
    let mut map = serde_json::Map::new();
    for comp in 0..3 {
        for slot in 0..6 {
            map.insert(
                normalform::QuadraticKill::name(comp, slot),
                ec_json(&kill.coeffs[comp][slot]),
            );
        }
    }
    Value::Object(map)
}

fn transcript(d: &normalform::Derivation) -> String {
    let mut s = String::new();
    s.push_str("== reduced field g, exact degree-3 jet (coordinates z1, z3, z4) ==\n");
    s.push_str(&d.g_jet.render());
    s.push_str("\n== linear change: eigencoordinates zeta = (xi, conj xi, eta) ==\n");
    s.push_str("spectrum: ");
    for (i, l) in d.eigen.spectrum.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&l.to_string());
    }
    s.push_str("\n\n== conjugated field g1 = Cinv g(C zeta) ==\n");
    s.push_str(&d.g1.render());
    s.push_str("\n== quadratic kill table (h = id + h_tilde) ==\n");
    for comp in 0..3 {
        for slot in 0..6 {
            s.push_str(&format!(
                "{} = {}\n",
                normalform::QuadraticKill::name(comp, slot),
                d.kill.coeffs[comp][slot]
            ));
        }
    }
    s.push_str("\n== transformed field g2 = Dh^{-1} g1(h(x)), quadratics annihilated ==\n");
    s.push_str(&d.g2.render());
    s.push_str("\n== resonant data ==\n");
    s.push_str(&format!("alpha_1 = {}\n", d.result.alpha1));
    s.push_str(&format!("nu coefficient = {}\n", d.result.nu_resonant));
    match d.result.weak_stability_order {
        Some(order) => s.push_str(&format!(
            "weakly stable of order {order}; attracting invariant curve of radius ~ sqrt(delta) for small k1 > 0\n"
        )),
        None => s.push_str("not weakly stable at order 1\n"),
    }
    s
}

fn run_normal_form(args: NormalFormArgs) -> Result<(), CliError> {
    let d = normalform::derive().map_err(|e| CliError::Discrepancy(e.to_string()))?;
    if !d.discrepancies.is_empty() {
        let mut msg = String::from("pipeline cross-check mismatches:\n");
        for disc in &d.discrepancies {
            msg.push_str(&format!(
                "  [{}] {}: computed {} expected {}\n",
                disc.stage, disc.item, disc.computed, disc.expected
            ));
        }
        return Err(CliError::Discrepancy(msg));
    }
    if args.show_steps {
        return write_output(&args.out, &transcript(&d));
    }
    let verdict = normalform::weak_stability_verdict(&d.result)
        .map_err(|e| CliError::Discrepancy(e.to_string()))?;
    let body = json!({
        "alpha1": ec_json(&d.result.alpha1),
        "nu_resonant": ec_json(&d.result.nu_resonant),
        "omega": ec_json(&d.result.omega),
        "stable_eigenvalue": ec_json(&d.result.stable_eigenvalue),
        "spectrum": d.eigen.spectrum.iter().map(ec_json).collect::<Vec<_>>(),
        "kill_table": kill_table_json(&d.kill),
        "weak_stability_order": d.result.weak_stability_order,
        "weakly_stable": d.result.verdict,
        "theorem": {
            "spectrum_hypothesis": verdict.spectrum_hypothesis,
            "weakly_stable": verdict.weakly_stable,
            "decided_at_order": verdict.decided_at_order,
            "radius_exponent": verdict.radius_exponent,
            "note": "conclusion applies with epsilon = delta; delta = k1 + O(k1^2)",
        },
    });
    let content = match args.format {
        Format::Json => pretty(&body),
        Format::Csv => {
            let mut s = String::from("# schema=1\nquantity,re,im\n");
            s.push_str(&format!(
                "alpha1,{},{}\n",
                d.result.alpha1.re, d.result.alpha1.im
            ));
            s.push_str(&format!(
                "nu_resonant,{},{}\n",
                d.result.nu_resonant.re, d.result.nu_resonant.im
            ));
            for comp in 0..3 {
                for slot in 0..6 {
                    let c = &d.kill.coeffs[comp][slot];
                    s.push_str(&format!(
                        "{},{},{}\n",
                        normalform::QuadraticKill::name(comp, slot),
                        c.re,
                        c.im
                    ));
                }
            }
            s
        }
    };
    write_output(&args.out, &content)
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

fn estimate_json(e: &curve::CurveEstimate) -> Value {
    json!({
        "k1": e.k1,
        "delta": e.delta,
        "radius_mean": e.radius_mean,
        "radius_std": e.radius_std,
        "rotation": e.rotation,
        "rms_radius": e.rms_radius,
        "classification": e.classification.to_string(),
    })
}

fn run_curve(args: CurveArgs) -> Result<(), CliError> {
    let p = params_from(&args.k)?;
    if p.k1() <= 0.0 {
        return Err(CliError::Config(format!(
            "curve analysis needs k1 > 0, got {} (use `simulate` or the sweep's degenerate side)",
            p.k1()
        )));
    }
    let burn = args.burn.unwrap_or_else(|| curve::auto_burn(p.delta()));
    let z0 = match args.z0.as_ref().map(CommaList::as_slice) {
        Some([z1, z3, z4]) => Some(ReducedState::new([*z1, *z3, *z4])),
        Some(other) => {
            return Err(CliError::Config(format!("--z0 needs 3 coordinates, got {}", other.len())))
        }
        None => None,
    };
    let orbit = curve::attract_orbit(&p, z0, burn, args.iters, args.seed)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let estimate = curve::estimate_curve(&orbit).map_err(|e| CliError::Config(e.to_string()))?;

    let refined = if estimate.classification == Classification::ClosedCurve {
        Some(
            curve::refine_curve(&p, &orbit, args.modes)
                .map_err(|e| CliError::Config(e.to_string()))?,
        )
    } else {
        None
    };

    let content = match args.format {
        Format::Json => {
            let fourier = refined.as_ref().map(|f| {
                let coords = ["z1", "z3", "z4"];
                let mut modes = serde_json::Map::new();
                for (d, name) in coords.iter().enumerate() {
                    let rows: Vec<Value> = f
                        .modes
                        .iter()
                        .enumerate()
                        .map(|(m, row)| json!([m, row[d].re, row[d].im]))
                        .collect();
                    modes.insert((*name).to_string(), Value::Array(rows));
                }
                json!({
                    "rho": f.rho,
                    "residual": f.residual,
                    "modes": Value::Object(modes),
                })
            });
            pretty(&json!({
                "k": args.k.as_slice(),
                "seed": orbit.seed,
                "burn": orbit.burn,
                "samples": orbit.n,
                "estimate": estimate_json(&estimate),
                "fourier": fourier,
            }))
        }
        Format::Csv => {
            let mut s = format!(
                "# schema=1\n# seed={}\n# burn={}\n# k1={} delta={}\n# classification={}\n# radius_mean={} radius_std={} rotation={}\n",
                orbit.seed,
                orbit.burn,
                full(estimate.k1),
                full(estimate.delta),
                estimate.classification,
                full(estimate.radius_mean),
                full(estimate.radius_std),
                full(estimate.rotation),
            );
            if let Some(f) = &refined {
                let mut buf = Vec::new();
                curve::write_modes_csv(f, &mut buf)?;
                s.push_str(&String::from_utf8(buf).expect("utf8 csv"));
            }
            s
        }
    };
    write_output(&args.out, &content)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn fit_summary_json(fit: &curve::ScalingFit, seed: u64) -> Value {
    json!({
        "seed": seed,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "points": fit.points.iter().map(|pt| json!({
            "k1": pt.k1,
            "delta": pt.delta,
            "used": pt.used,
            "note": pt.note,
            "estimate": pt.estimate.as_ref().map(estimate_json),
        })).collect::<Vec<_>>(),
    })
}

fn sibling_json_path(path: &Path) -> PathBuf {
    match path.extension() {
        Some(ext) if ext == "json" => path.with_extension("fit.json"),
        _ => path.with_extension("json"),
    }
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let base = params_from(&args.k)?;
    let opts = SweepOptions {
        n: args.iters,
        burn: args.burn,
        jobs: args.jobs,
        seed: args.seed,
        ..Default::default()
    };

    if args.only {
        let k1 = args
            .k1
            .ok_or_else(|| CliError::Config("--only needs --k1".into()))?;
        let k = base.k();
        let p = Params::new([k1, k[1], k[2], k[3]]).map_err(|e| CliError::Config(e.to_string()))?;
        let estimate =
            curve::single_point_estimate(&p, &opts).map_err(|e| CliError::Config(e.to_string()))?;
        let content = match args.format {
            Format::Json => pretty(&json!({ "seed": args.seed, "estimate": estimate_json(&estimate) })),
            Format::Csv => format!(
                "# schema=1\n# seed={}\nk1,delta,radius_mean,radius_std,rotation,classification\n{},{},{},{},{},{}\n",
                args.seed,
                full(estimate.k1),
                full(estimate.delta),
                full(estimate.radius_mean),
                full(estimate.radius_std),
                full(estimate.rotation),
                estimate.classification
            ),
        };
        return write_output(&args.out, &content);
    }

    if args.k1.is_some() {
        return Err(CliError::Config("--k1 without --only; pass a grid with --grid".into()));
    }

    let fit = curve::sweep_scaling(&base, args.grid.as_slice(), &opts)
        .map_err(|e| CliError::Config(e.to_string()))?;

    match args.format {
        Format::Json => {
            write_output(&args.out, &pretty(&fit_summary_json(&fit, args.seed)))?;
        }
        Format::Csv => {
            let mut buf = Vec::new();
            curve::write_sweep_csv(&fit, args.seed, &mut buf)?;
            let mut csv = String::from_utf8(buf).expect("utf8 csv");
            csv.push_str(&format!(
                "# slope={}\n# intercept={}\n# r_squared={}\n",
                full(fit.slope),
                full(fit.intercept),
                full(fit.r_squared)
            ));
            write_output(&args.out, &csv)?;
            let summary = pretty(&fit_summary_json(&fit, args.seed));
            match &args.out {
                Some(path) => fs::write(sibling_json_path(path), summary)?,
                None => {
                    let mut stdout = std::io::stdout().lock();
                    stdout.write_all(summary.as_bytes())?;
                }
            }
        }
    }

    if args.gate && !(0.4..=0.6).contains(&fit.slope) {
        return Err(CliError::Gate(format!(
            "fitted slope {:.4} outside the gate interval [0.4, 0.6]",
            fit.slope
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    let results = verify::run_all();
    match args.format {
        Format::Csv => {
            for criterion in &results {
                println!("{}", criterion.report_line());
            }
        }
        Format::Json => {
            let body: Vec<Value> = results
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id,
                        "name": c.name,
                        "passed": c.passed,
                        "elapsed_seconds": c.elapsed.as_secs_f64(),
                        "detail": c.detail,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&Value::Array(body)).expect("serializable"));
        }
    }
    let failed: Vec<u32> = results.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Gate(format!("criteria failed: {failed:?}")))
    }
}
