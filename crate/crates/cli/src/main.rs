//! `moufang` - runs the loop-identity verification suite from the command
//! line and emits human-readable or machine-readable reports.

mod report;

use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::Parser;

use moufang::{order_cap, run_suite, CheckName, LoopModel};
use report::{Report, Timings};

/// Exact verification of Moufang-loop differential identities on
/// truncated power-series charts.
#[derive(Parser, Debug)]
#[command(name = "moufang", version, about, disable_help_subcommand = true)]
struct Cli {
    /// Model to verify: abelian, heisenberg, quaternion_chart,
    /// octonion_chart, non_moufang, or file:<path> for a custom model.
    #[arg(long, default_value = "octonion_chart")]
    model: String,

    /// Truncation order of the verification (capped by MOUFANG_MAX_ORDER).
    #[arg(long, default_value_t = 4)]
    order: u32,

    /// Comma-separated check names, or "all". With "all", checks whose
    /// minimum order exceeds --order are skipped; explicitly named checks
    /// below their minimum order are an error.
    #[arg(long, default_value = "all")]
    checks: String,

    /// Output format.
    #[arg(long, value_parser = ["text", "json"], default_value = "text")]
    output: String,

    /// Write the tensor export (bracket constants and, at order >= 4, the
    /// third-order associator tensor) to this path.
    #[arg(long)]
    export_tensors: Option<String>,

    /// Worker threads for running checks concurrently.
    #[arg(long)]
    jobs: Option<usize>,
}

struct ResolvedConfig {
    model: LoopModel,
    order: u32,
    checks: Vec<CheckName>,
    skipped: Vec<CheckName>,
}

fn resolve(cli: &Cli) -> Result<ResolvedConfig, String> {
    let cap = order_cap();
    if cli.order < 1 || cli.order > cap {
        return Err(format!(
            "--order must be between 1 and {cap} (MOUFANG_MAX_ORDER overrides the cap), got {}",
            cli.order
        ));
    }
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err("--jobs must be at least 1".into());
        }
    }

    let model = LoopModel::by_name(&cli.model).map_err(|e| e.to_string())?;

    let (checks, skipped) = if cli.checks.trim() == "all" {
        let runnable = CheckName::all_for_order(cli.order);
        let skipped = CheckName::all()
            .into_iter()
            .filter(|c| !runnable.contains(c))
            .collect();
        (runnable, skipped)
    } else {
        let mut list = Vec::new();
        for raw in cli.checks.split(',') {
            let name = raw.trim();
            if name.is_empty() {
                continue;
            }
            let check = CheckName::from_str(name).map_err(|e| e.to_string())?;
            if check.min_order() > cli.order {
                return Err(format!(
                    "check '{}' requires --order >= {}, got {}",
                    check.id(),
                    check.min_order(),
                    cli.order
                ));
            }
            list.push(check);
        }
        if list.is_empty() {
            return Err("--checks selected no checks".into());
        }
        (list, Vec::new())
    };

    Ok(ResolvedConfig {
        model,
        order: cli.order,
        checks,
        skipped,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let config = match resolve(&cli) {
        Ok(config) => config,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };

    let started = Instant::now();
    let results = match run_suite(
        &config.model,
        config.order,
        &config.checks,
        cli.jobs,
    ) {
        Ok(results) => results,
        Err(error) => {
            eprintln!("error: {error}");
            return ExitCode::from(2);
        }
    };
    let total_ms = started.elapsed().as_secs_f64() * 1e3;

    if let Some(path) = &cli.export_tensors {
        if let Err(error) = report::export_tensors(&config.model, config.order, path) {
            eprintln!("error: {error}");
            return ExitCode::from(2);
        }
    }

    let report = Report::new(&cli, &config.model, &config.checks, results, Timings { total_ms });

    match cli.output.as_str() {
        "json" => print!("{}", report.to_json()),
        _ => {
            let notes = report::advisory_notes(&config.model, config.order, &config.checks);
            print!("{}", report.to_text(&config.skipped, &notes));
        }
    }

    if report.overall_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
