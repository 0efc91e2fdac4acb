//! `latticew` — bracket tables, polygon/operator conversions, verification
//! suites, and chart flows, with machine-readable reports.

mod suites;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use latticew::json as wjson;
use latticew::poisson::coordinate_bracket_table;
use latticew::polygon::{normalize_to_section, operator_from_polygon, polygon_from_operator};
use latticew::scalar::{Rat, Scalar};
use latticew::w2::{chart_from_operator, hamiltonian_step, w2_bracket, ChartHamiltonian};

use suites::{default_config, run_suite, Mode, SuiteConfig, SUITE_NAMES};

#[derive(Parser)]
#[command(
    name = "latticew",
    about = "Lattice W-algebra brackets, polygon dictionaries, and verification suites",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Rational,
    F64,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Rational => Mode::Rational,
            ModeArg::F64 => Mode::F64,
        }
    }
}

#[derive(Args)]
struct IoArgs {
    /// Input file (JSON)
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file; stdout when omitted
    #[arg(long = "out")]
    output: Option<PathBuf>,
    /// Scalar field for parsing and computation
    #[arg(long, value_enum, default_value = "rational")]
    mode: ModeArg,
}

#[derive(Subcommand)]
enum Command {
    /// Full pairwise bracket table of an operator or chart
    Bracket(IoArgs),
    /// Run a verification suite; exit 0 iff all trials pass
    Verify {
        /// Suite name, or "all"
        #[arg(long)]
        suite: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value = "42")]
        seed: u64,
        #[arg(long, value_enum, default_value = "rational")]
        mode: ModeArg,
        /// Tolerance; exact suites force 0 in rational mode
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Polygon ↔ operator conversion with diagnostics
    Polygon(IoArgs),
    /// Integrate a chart Hamiltonian flow, emitting a CSV trajectory
    Flow {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        /// Hamiltonian: "sum-x" or "sum-log-x"
        #[arg(long, default_value = "sum-x")]
        hamiltonian: String,
        #[arg(long, default_value = "0.001")]
        dt: f64,
        #[arg(long, default_value = "100")]
        steps: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Bracket(io) => cmd_bracket(&io),
        Command::Verify {
            suite,
            m,
            n,
            trials,
            seed,
            mode,
            tol,
            output,
        } => cmd_verify(&suite, m, n, trials, seed, mode.into(), tol, output.as_deref()),
        Command::Polygon(io) => cmd_polygon(&io),
        Command::Flow {
            input,
            output,
            hamiltonian,
            dt,
            steps,
        } => cmd_flow(&input, &output, &hamiltonian, dt, steps),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", path.display()))
}

fn emit(output: Option<&Path>, value: &Value) -> Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(value)?);
    match output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_bracket(io: &IoArgs) -> Result<bool> {
    let doc = read_json(&io.input)?;
    let report = match Mode::from(io.mode) {
        Mode::Rational => bracket_report::<Rat>(&doc)?,
        Mode::F64 => bracket_report::<f64>(&doc)?,
    };
    emit(io.output.as_deref(), &report)?;
    Ok(true)
}

fn bracket_report<S: Scalar>(doc: &Value) -> Result<Value> {
    let obj = doc
        .as_object()
        .ok_or_else(|| anyhow!("input must be a JSON object"))?;
    let pairs: Vec<Value> = if obj.contains_key("coeffs") {
        let d = wjson::operator_from_json::<S>(doc)?;
        if d.lo() < 0 {
            bail!("bracket tables are defined for difference operators (lo ≥ 0)");
        }
        coordinate_bracket_table(&d)?
            .into_iter()
            .map(|(p, q, v)| {
                json!({
                    "p": [p.power, p.site],
                    "q": [q.power, q.site],
                    "value": v.to_json(),
                })
            })
            .collect()
    } else if obj.contains_key("x") {
        let x = wjson::chart_from_json::<S>(doc)?;
        let n = x.period();
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i..n {
                rows.push(json!({
                    "p": [0, i],
                    "q": [0, j],
                    "value": w2_bracket(&x, i as i64, j as i64).to_json(),
                }));
            }
        }
        rows
    } else {
        bail!("input must contain \"coeffs\" (operator) or \"x\" (chart)");
    };
    Ok(json!({ "pairs": pairs }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: &str,
    m: Option<usize>,
    n: Option<usize>,
    trials: Option<u64>,
    seed: u64,
    mode: Mode,
    tol: Option<f64>,
    output: Option<&Path>,
) -> Result<bool> {
    let names: Vec<&str> = if suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![suite]
    };
    let mut reports = Vec::new();
    let mut all_pass = true;
    for name in names {
        // the jacobi suite is float-only regardless of the global mode
        let suite_mode = if suite == "all" && name == "jacobi" {
            Mode::F64
        } else {
            mode
        };
        let defaults = default_config(name, seed);
        let cfg = SuiteConfig {
            m: m.unwrap_or(defaults.m),
            n: n.unwrap_or(defaults.n),
            trials: trials.unwrap_or(defaults.trials),
            seed,
            tolerance: tol.unwrap_or(defaults.tolerance),
        };
        if cfg.m == 0 || cfg.n == 0 {
            bail!("m and N must be positive");
        }
        if cfg.tolerance < 0.0 {
            bail!("tolerance must be nonnegative");
        }
        let report = run_suite(name, suite_mode, cfg).map_err(|e| anyhow!(e))?;
        let pass = report.pass();
        all_pass &= pass;
        println!(
            "suite {:<14} mode {:<8} m={} N={} trials={} tol={:e}: {}",
            report.suite,
            suite_mode.name(),
            report.config.m,
            report.config.n,
            report.config.trials,
            report.config.tolerance,
            if pass { "PASS" } else { "FAIL" }
        );
        reports.push((suite_mode, report));
    }
    let body = json!({
        "mode": mode.name(),
        "seed": seed,
        "pass": all_pass,
        "suites": reports
            .iter()
            .map(|(m, r)| {
                let mut v = r.to_json();
                v.as_object_mut()
                    .unwrap()
                    .insert("mode".into(), json!(m.name()));
                v
            })
            .collect::<Vec<_>>(),
    });
    if let Some(path) = output {
        emit(Some(path), &body)?;
    }
    Ok(all_pass)
}

fn cmd_polygon(io: &IoArgs) -> Result<bool> {
    let doc = read_json(&io.input)?;
    let report = match Mode::from(io.mode) {
        Mode::Rational => polygon_report::<Rat>(&doc)?,
        Mode::F64 => polygon_report::<f64>(&doc)?,
    };
    emit(io.output.as_deref(), &report)?;
    Ok(true)
}

fn polygon_report<S: Scalar>(doc: &Value) -> Result<Value> {
    let obj = doc
        .as_object()
        .ok_or_else(|| anyhow!("input must be a JSON object"))?;
    let (input_kind, polygon, operator) = if obj.contains_key("coeffs") {
        let d = wjson::operator_from_json::<S>(doc)?;
        let p = polygon_from_operator(&d)?;
        let rdo = operator_from_polygon(&p)?;
        ("operator", p, rdo)
    } else if obj.contains_key("lifts") {
        let p = wjson::polygon_from_json::<S>(doc)?;
        p.check_nondegenerate()?;
        let rdo = operator_from_polygon(&p)?;
        ("polygon", p, rdo)
    } else {
        bail!("input must contain \"coeffs\" (operator) or \"lifts\" (polygon)");
    };
    let determinants: Vec<Value> = polygon
        .frame_determinants()
        .iter()
        .map(|v| v.to_json())
        .collect();
    let (canonical, canonical_error) = match normalize_to_section(&operator) {
        Ok((canonical, _, _)) => (wjson::operator_to_json(&canonical), Value::Null),
        Err(e) => (Value::Null, json!(e.to_string())),
    };
    let cross_ratios = if polygon.dim() == 2 {
        match chart_from_operator(&operator) {
            Ok(x) => Value::Array(x.values().iter().map(|v| v.to_json()).collect()),
            Err(_) => Value::Null,
        }
    } else {
        Value::Null
    };
    Ok(json!({
        "input_kind": input_kind,
        "operator": wjson::operator_to_json(&operator),
        "polygon": wjson::polygon_to_json(&polygon),
        "frame_determinants": determinants,
        "canonical": canonical,
        "canonical_error": canonical_error,
        "cross_ratios": cross_ratios,
    }))
}

fn cmd_flow(input: &Path, output: &Path, hamiltonian: &str, dt: f64, steps: u64) -> Result<bool> {
    let doc = read_json(input)?;
    let mut x = wjson::chart_from_json::<f64>(&doc)?;
    x.check_regular()?;
    let h = match hamiltonian {
        "sum-x" => ChartHamiltonian::SumX,
        "sum-log-x" => ChartHamiltonian::SumLogX,
        other => bail!("unknown hamiltonian {other:?}; use sum-x or sum-log-x"),
    };
    let n = x.period();
    let mut rows = String::new();
    let header: Vec<String> = std::iter::once("step".to_string())
        .chain((0..n).map(|i| format!("x_{i}")))
        .chain(["H".to_string(), "drift".to_string()])
        .collect();
    rows.push_str(&header.join(","));
    rows.push('\n');
    let h0 = h.eval(&x);
    let mut write_row = |step: u64, x: &latticew::w2::CrossRatioChart<f64>| {
        let mut cells: Vec<String> = vec![step.to_string()];
        cells.extend(x.values().iter().map(|v| format!("{v:.17e}")));
        let hv = h.eval(x);
        cells.push(format!("{hv:.17e}"));
        cells.push(format!("{:.17e}", (hv - h0).abs()));
        rows.push_str(&cells.join(","));
        rows.push('\n');
    };
    write_row(0, &x);
    for step in 1..=steps {
        x = hamiltonian_step(&x, &h, dt);
        if let Err(e) = x.check_regular() {
            fs::write(output, &rows)
                .with_context(|| format!("cannot write {}", output.display()))?;
            eprintln!("flow degenerated at step {step}: {e}");
            return Ok(false);
        }
        write_row(step, &x);
    }
    fs::write(output, &rows).with_context(|| format!("cannot write {}", output.display()))?;
    Ok(true)
}
