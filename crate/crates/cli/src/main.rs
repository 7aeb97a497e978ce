mod obj;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tangentloci::report::{demo_json, flatten, format_json, parse_instances, solve_json, DEMOS};
use tangentloci::selfcheck::{run_selfcheck, Check};
use tangentloci::spheres::{solve, SolveOptions, SolveResult, Sphere};
use tangentloci::{Error, Tolerances};

const SEED_VAR: &str = "TANGENTLOCI_SEED";

#[derive(Debug, Parser)]
#[command(name = "tangentloci", version, about = "Common tangent lines to four spheres and quadric basket demos")]
struct Cli {
    /// Relative threshold for numerical rank decisions.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Radius for grouping polynomial roots into multiplicities.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_cluster: f64,
    /// Random seed; falls back to $TANGENTLOCI_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write spheres and real tangent lines as a Wavefront OBJ file.
    #[arg(long, global = true, value_name = "PATH")]
    emit_obj: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance or a list of instances read from a JSON file ("-" for stdin).
    Tangents { input: PathBuf },
    /// Print a named configuration with its verification report.
    Demo { name: String },
    /// Run the invariant suite.
    Selfcheck,
}

struct RunConfig {
    tol: Tolerances,
    seed: u64,
    format: Format,
    emit_obj: Option<PathBuf>,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn config(cli: &Cli) -> Result<RunConfig, String> {
    for (name, t) in [("--tol", cli.tol), ("--tol-cluster", cli.tol_cluster)] {
        if !(t > 0.0 && t < 1.0) {
            return Err(format!("{name} must lie in (0, 1), got {t}"));
        }
    }
    let seed = match cli.seed {
        Some(s) => s,
        None => match std::env::var(SEED_VAR) {
            Ok(v) => v.trim().parse().map_err(|_| format!("{SEED_VAR} is not an unsigned integer: {v:?}"))?,
            Err(_) => 0,
        },
    };
    Ok(RunConfig {
        tol: Tolerances::default().with_rank(cli.tol).with_cluster(cli.tol_cluster),
        seed,
        format: cli.format,
        emit_obj: cli.emit_obj.clone(),
    })
}

fn read_input(path: &Path) -> std::io::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| e.to_string())?;
    for r in rows {
        w.write_record(&r).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn cmd_tangents(input: &Path, cfg: &RunConfig) -> ExitCode {
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", input.display())),
    };
    let batch = text.trim_start().starts_with('[');
    let instances = match parse_instances(&text) {
        Ok(i) => i,
        Err(e) => return fail(e),
    };
    let mut outputs = Vec::with_capacity(instances.len());
    let mut solved: Vec<([Sphere; 4], SolveResult)> = Vec::new();
    let mut code = 0u8;
    for (k, inst) in instances.iter().enumerate() {
        let spheres = match inst.spheres() {
            Ok(s) => s,
            Err(e) => return fail(format!("instance {k}: {e}")),
        };
        let tol = match inst.tol {
            Some(t) if !(t > 0.0 && t < 1.0) => return fail(format!("instance {k}: tol must lie in (0, 1)")),
            Some(t) => cfg.tol.with_rank(t),
            None => cfg.tol,
        };
        let opts = SolveOptions {
            seed: inst.seed.unwrap_or(cfg.seed),
            cluster: tol.cluster,
            ..SolveOptions::default()
        };
        match solve(&spheres, &opts) {
            Ok(res) => {
                outputs.push(solve_json(&res, &tol));
                solved.push((spheres, res));
            }
            Err(e @ Error::DefectiveCount { .. }) => {
                eprintln!("instance {k}: {e}");
                outputs.push(json!({"error": e.to_string()}));
                code = 2;
            }
            Err(e) => return fail(format!("instance {k}: {e}")),
        }
    }
    if let Some(path) = &cfg.emit_obj {
        if let Err(e) = std::fs::write(path, obj::scene(&solved)) {
            return fail(format!("{}: {e}", path.display()));
        }
    }
    let text = match cfg.format {
        Format::Json => {
            let v = if batch { Value::Array(outputs) } else { outputs.remove(0) };
            format_json(&v).map_err(|e| e.to_string())
        }
        Format::Csv => csv_rows(
            &["instance", "key", "value"],
            outputs
                .iter()
                .enumerate()
                .flat_map(|(k, v)| flatten(v).into_iter().map(move |(p, x)| vec![k.to_string(), p, x])),
        ),
    };
    match text {
        Ok(t) => print!("{t}"),
        Err(e) => return fail(e),
    }
    ExitCode::from(code)
}

fn cmd_demo(name: &str, cfg: &RunConfig) -> ExitCode {
    if !DEMOS.contains(&name) {
        return fail(format!("unknown demo {name:?}; available: {}", DEMOS.join(", ")));
    }
    if cfg.emit_obj.is_some() {
        eprintln!("warning: --emit-obj applies to the tangents command only");
    }
    let v = match demo_json(name, &cfg.tol) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let text = match cfg.format {
        Format::Json => format_json(&v).map_err(|e| e.to_string()),
        Format::Csv => csv_rows(&["key", "value"], flatten(&v).into_iter().map(|(p, x)| vec![p, x])),
    };
    match text {
        Ok(t) => {
            print!("{t}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn check_json(c: &Check) -> Value {
    let mut v = json!({"name": c.name, "passed": c.passed, "threshold": c.threshold});
    let obj = v.as_object_mut().expect("object");
    if c.value.is_finite() {
        obj.insert("value".into(), json!(c.value));
    } else {
        obj.insert("status".into(), json!("error"));
    }
    v
}

fn cmd_selfcheck(cfg: &RunConfig) -> ExitCode {
    let checks = run_selfcheck(&cfg.tol, cfg.seed);
    let all = checks.iter().all(|c| c.passed);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let text = match cfg.format {
        Format::Json => format_json(&json!({
            "passed": all,
            "seed": cfg.seed,
            "tol": cfg.tol.rank,
            "tol_cluster": cfg.tol.cluster,
            "failed": failed,
            "checks": checks.iter().map(check_json).collect::<Vec<_>>(),
        }))
        .map_err(|e| e.to_string()),
        Format::Csv => csv_rows(
            &["name", "passed", "value", "threshold"],
            checks.iter().map(|c| {
                let value = if c.value.is_finite() { format!("{:.16e}", c.value) } else { String::new() };
                vec![c.name.clone(), c.passed.to_string(), value, format!("{:.16e}", c.threshold)]
            }),
        ),
    };
    match text {
        Ok(t) => print!("{t}"),
        Err(e) => return fail(e),
    }
    if all {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match &cli.command {
        Command::Tangents { input } => cmd_tangents(input, &cfg),
        Command::Demo { name } => cmd_demo(name, &cfg),
        Command::Selfcheck => cmd_selfcheck(&cfg),
    }
}
