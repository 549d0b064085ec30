//! `novikov`: batch verification of scenario files.

mod commands;
mod error;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use commands::{Overrides, OPS};
pub use error::CliError;
use scenario::{Command, Scenario, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "novikov", version, about = "Exact Morse and Novikov complex verification")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Check d^2 = 0 and the structural identities of a declaration.
    Verify(Args),
    /// Integer homology, or Novikov ranks for series-valued complexes.
    Homology(Args),
    /// Assemble a cobordism complex or the Novikov differential F-hat.
    Assemble(Args),
    /// Compare the attaching map with theta' theta''.
    GlueCheck(Args),
    /// Compare F-hat with the unrolled cover of a fundamental domain.
    UnrollCompare(Args),
    /// Invert a unit series or a filtered endomorphism.
    Invert(Args),
    /// Check the four-term identity on a square complex.
    SettingCheck(Args),
    /// Run every command in the scenario.
    Report(Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct Args {
    /// Scenario file.
    scenario: PathBuf,
    /// Run this operation on one declaration instead of the scenario's commands.
    #[arg(long)]
    target: Option<String>,
    /// Series precision N: results are exact modulo z^N.
    #[arg(long)]
    precision: Option<i64>,
    /// Number of unrolled stages L.
    #[arg(long)]
    stages: Option<usize>,
    /// Rational threshold, e.g. 5/2.
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Seed for randomized declarations.
    #[arg(long)]
    seed: Option<u64>,
    /// Add wall-clock timings to the report. Timed reports are not reproducible.
    #[arg(long)]
    timing: bool,
}

impl Sub {
    fn split(&self) -> (Option<&'static str>, &Args) {
        match self {
            Sub::Verify(a) => (Some("verify"), a),
            Sub::Homology(a) => (Some("homology"), a),
            Sub::Assemble(a) => (Some("assemble"), a),
            Sub::GlueCheck(a) => (Some("glue-check"), a),
            Sub::UnrollCompare(a) => (Some("unroll-compare"), a),
            Sub::Invert(a) => (Some("invert"), a),
            Sub::SettingCheck(a) => (Some("setting-check"), a),
            Sub::Report(a) => (None, a),
        }
    }
}

fn selected(scenario: &Scenario, op: Option<&str>, target: &Option<String>) -> Result<Vec<Command>, CliError> {
    let cmds: Vec<Command> = match (op, target) {
        (Some(op), Some(t)) => vec![Command {
            op: op.to_string(),
            target: t.clone(),
            precision: None,
            stages: None,
            epsilon: None,
            expect: None,
        }],
        (None, Some(t)) => scenario.commands.iter().filter(|c| &c.target == t).cloned().collect(),
        (Some(op), None) => scenario.commands.iter().filter(|c| c.op == op).cloned().collect(),
        (None, None) => scenario.commands.clone(),
    };
    if cmds.is_empty() {
        return Err(CliError::Usage(format!("nothing to run: no matching commands in the scenario (operations: {})", OPS.join(", "))));
    }
    Ok(cmds)
}

fn run(op: Option<&str>, args: &Args) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(&args.scenario)
        .map_err(|source| CliError::Io { path: args.scenario.display().to_string(), source })?;
    let scenario = Scenario::parse(&text, args.seed)?;
    let overrides = Overrides { precision: args.precision, stages: args.stages, epsilon: args.epsilon.clone() };
    let cmds = selected(&scenario, op, &args.target)?;
    let prepared = cmds
        .iter()
        .map(|c| commands::prepare(&scenario, c, &overrides).map(|p| (c, p)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut all_pass = true;
    let mut entries = Vec::new();
    for (cmd, p) in prepared {
        let start = Instant::now();
        let outcome = commands::execute(&scenario, cmd, &p);
        let elapsed = start.elapsed();
        let mut entry = json!({
            "op": cmd.op,
            "target": cmd.target,
            "parameters": {
                "precision": p.precision,
                "stages": p.stages,
                "epsilon": p.epsilon.map(|e| e.to_string()),
            },
        });
        match outcome {
            Ok(o) => {
                all_pass &= o.passed();
                entry["status"] = json!(if o.passed() { "pass" } else { "fail" });
                entry["summary"] = json!(o.summary);
                entry["result"] = o.result;
                entry["discrepancies"] = json!(o.discrepancies);
            }
            Err(msg) => {
                all_pass = false;
                entry["status"] = json!("error");
                entry["summary"] = json!(msg);
                entry["result"] = Value::Null;
                entry["discrepancies"] = json!([{ "error": msg }]);
            }
        }
        if args.timing {
            entry["timing_ms"] = json!(elapsed.as_secs_f64() * 1e3);
        }
        entries.push(entry);
    }
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "description": scenario.description,
        "seed": args.seed,
        "status": if all_pass { "pass" } else { "fail" },
        "commands": entries,
    }))
}

fn text_report(report: &Value) -> String {
    let mut out = String::new();
    for c in report["commands"].as_array().into_iter().flatten() {
        let status = c["status"].as_str().unwrap_or("").to_uppercase();
        out += &format!("{status} {} {}: {}", c["op"].as_str().unwrap_or(""), c["target"].as_str().unwrap_or(""), c["summary"].as_str().unwrap_or(""));
        if let Some(t) = c.get("timing_ms") {
            out += &format!(" ({t} ms)");
        }
        out.push('\n');
        for d in c["discrepancies"].as_array().into_iter().flatten() {
            out += &format!("  {d}\n");
        }
    }
    out += &format!("status: {}\n", report["status"].as_str().unwrap_or(""));
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (op, args) = cli.command.split();
    match run(op, args) {
        Ok(report) => {
            match args.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
                Format::Text => print!("{}", text_report(&report)),
            }
            if report["status"] == "pass" {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
