use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nullcorr_cli::{parse_field, parse_seed, preset, run, ConfigError, JobConfig, Report};

#[derive(Parser)]
#[command(
    name = "nullcorr",
    version,
    about = "Exact cohomology checks for weighted null-correlation bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a job config.
    Run {
        config: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a bundled verification preset.
    VerifyPaper {
        #[arg(long, value_parser = ["classical", "p5-weighted"])]
        preset: String,
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Args)]
struct RunOpts {
    /// Run tasks concurrently; the report order is unchanged.
    #[arg(long)]
    parallel: bool,
    /// `p=<prime>` or `rational`.
    #[arg(long)]
    field: Option<String>,
    /// Write report.json and table CSVs here instead of the config's output paths.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)
}

/// `table.csv` -> `table_2.csv` when a job has several tables.
fn numbered(path: &Path, k: usize, count: usize) -> PathBuf {
    if count == 1 {
        return path.to_path_buf();
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{k}"),
    };
    path.with_file_name(name)
}

fn emit(report: &Report, out: Option<&Path>) -> std::io::Result<()> {
    let json = report.to_json();
    let tables = report.csv_tables();
    let output = &report.config.output;
    let (json_path, csv_path) = match out {
        Some(dir) => (Some(dir.join("report.json")), Some(dir.join("table.csv"))),
        None => (output.json_path.clone(), output.csv_path.clone()),
    };
    match json_path {
        Some(p) => write(&p, &json)?,
        None => print!("{json}"),
    }
    if let Some(p) = csv_path {
        for (k, csv) in tables.iter().enumerate() {
            write(&numbered(&p, k + 1, tables.len()), csv)?;
        }
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<ExitCode, ConfigError> {
    let (cfg, opts) = match cli.command {
        Command::Run { config, opts } => (JobConfig::load(&config)?, opts),
        Command::VerifyPaper { preset: name, opts } => (preset(&name)?, opts),
    };
    let field = opts.field.as_deref().map(parse_field).transpose()?;
    let seed = std::env::var("NULLCORR_SEED")
        .ok()
        .map(|s| parse_seed(&s))
        .transpose()?;
    let report = run(cfg.with_overrides(field, seed)?, opts.parallel)?;
    if let Err(e) = emit(&report, opts.out.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return Ok(ExitCode::from(2));
    }
    for t in report.tasks.iter().filter(|t| t.error.is_some()) {
        eprintln!(
            "task {:?} failed: {}",
            t.task,
            t.error.as_deref().unwrap_or_default()
        );
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
