use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hydrino_audit::claims::{run_all, run_claim, AuditConfig, Report};
use hydrino_audit::hydrogen::{format_table, hydrino_table};
use hydrino_audit::radial::{admissibility, wronskian_scan};
use hydrino_audit::{parse_expr, print_expr};
use serde_json::json;

/// Exit codes: 0 all verdicts as expected, 1 some verdict differs, 2 usage or input error.
#[derive(Parser)]
#[command(name = "audit", version, about = "Symbolic-numeric audit of orbit-sphere and hydrino claims")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every registered claim.
    RunAll {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// TOML file overriding tolerances, samples and constants.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run one claim by id (C1..C9).
    Claim {
        id: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Parse an expression and print its canonical form.
    ParseExpr {
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Print hydrino levels k = 1..=k_max.
    HydrinoTable {
        #[arg(long, default_value_t = 200)]
        k_max: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Admissibility of the radial problem at real principal quantum number.
    Radial {
        #[arg(long)]
        nu: f64,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long)]
        json: bool,
    },
    /// Scan the matching Wronskian over a range of nu and report its zeros.
    RadialScan {
        #[arg(long, default_value_t = 0.3)]
        nu_min: f64,
        #[arg(long, default_value_t = 3.5)]
        nu_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 2.0)]
        r_match: f64,
    },
}

fn load_config(path: Option<PathBuf>) -> Result<AuditConfig, String> {
    match path {
        Some(p) => AuditConfig::from_path(&p).map_err(|e| e.to_string()),
        None => Ok(AuditConfig::default()),
    }
}

fn emit_report(report: &Report, format: Format) -> ExitCode {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    if report.all_match() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable output")
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::RunAll { format, config } => {
            let cfg = load_config(config)?;
            Ok(emit_report(&run_all(&cfg), format))
        }
        Command::Claim { id, format, config } => {
            let cfg = load_config(config)?;
            let result = run_claim(&id, &cfg).map_err(|e| e.to_string())?;
            let report = Report::new(&cfg, vec![result]);
            Ok(emit_report(&report, format))
        }
        Command::ParseExpr { expr, json } => {
            let e = parse_expr(&expr).map_err(|err| err.render(&expr))?;
            if json {
                let out = json!({
                    "input": expr,
                    "canonical": print_expr(&e),
                    "free_symbols": e.free_symbols(),
                    "contains_delta": e.contains_delta(),
                });
                println!("{}", pretty(&out));
            } else {
                println!("{}", print_expr(&e));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::HydrinoTable { k_max, format } => {
            let levels = hydrino_table(k_max, &Default::default()).map_err(|e| e.to_string())?;
            match format {
                Format::Json => println!("{}", pretty(&levels)),
                Format::Text => print!("{}", format_table(&levels)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Radial { nu, l, json } => {
            let v = admissibility(nu, l).map_err(|e| e.to_string())?;
            if json {
                println!("{}", pretty(&v));
            } else {
                println!(
                    "nu = {nu}, l = {l}: {} (E = {:.6} Eh, W = {:.3e}){}",
                    if v.admissible { "admissible" } else { "not admissible" },
                    v.energy_hartree,
                    v.wronskian,
                    if v.failure_modes.is_empty() {
                        String::new()
                    } else {
                        format!("; fails {}", v.failure_modes.join(", "))
                    }
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::RadialScan {
            nu_min,
            nu_max,
            steps,
            l,
            r_match,
        } => {
            let scan = wronskian_scan(l, nu_min, nu_max, steps, r_match).map_err(|e| e.to_string())?;
            let out = json!({
                "l": scan.l,
                "r_match": scan.r_match,
                "steps": steps,
                "zeros": scan.zeros,
            });
            println!("{}", pretty(&out));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
