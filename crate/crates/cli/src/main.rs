use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use imgtouch::audio::{parse_log, write_log};
use imgtouch::harness::{replay, simulate, ReplayError, SessionMetrics, SimError, Strategy};
use imgtouch::hints::bake_prominence;
use imgtouch::trace::{parse_trace, write_trace};
use imgtouch::validate::has_errors;
use imgtouch::{annot, validate, AnnotatedImage, EngineConfig, Tools, ValidationIssue};

/// Replay, simulate and measure touchscreen image exploration sessions.
#[derive(Parser)]
#[command(name = "imgtouch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an annotation file and list its issues.
    Validate { annot: PathBuf },
    /// Run a touch trace through the engine and write the event log.
    Replay {
        annot: PathBuf,
        trace: PathBuf,
        /// Comma-separated: menu_beacon, hints, zoom (or all, none).
        #[arg(long, default_value = "none")]
        tools: Tools,
        /// Event log path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        metrics: Option<PathBuf>,
        /// Engine config (TOML).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run a synthetic exploration strategy.
    Simulate {
        annot: PathBuf,
        /// grid:<pitch> or beacon.
        #[arg(long)]
        strategy: Strategy,
        #[arg(long, default_value = "none")]
        tools: Tools,
        #[arg(long)]
        out_trace: Option<PathBuf>,
        #[arg(long)]
        metrics: Option<PathBuf>,
        /// Event log path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Randomizes the beacon strategy's starting finger position.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Recompute session metrics from an event log.
    Metrics {
        log: PathBuf,
        /// Annotation the session explored (gives the coverage denominator).
        #[arg(long)]
        annot: PathBuf,
    },
    /// Bake CAM prominence into each area's "prominence" field.
    Prominence {
        annot: PathBuf,
        /// Rewrite the file instead of printing to stdout.
        #[arg(long)]
        in_place: bool,
    },
}

/// Exit codes: 2 for invalid input, 3 for I/O failures.
enum Failure {
    Invalid(anyhow::Error),
    Io(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Io)
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Io)
}

fn load_image(path: &Path) -> CliResult<AnnotatedImage> {
    annot::from_json(&read(path)?)
        .with_context(|| format!("in {}", path.display()))
        .map_err(Failure::Invalid)
}

fn load_config(path: Option<&Path>) -> CliResult<EngineConfig> {
    match path {
        None => Ok(EngineConfig::default()),
        Some(p) => EngineConfig::from_toml_str(&read(p)?)
            .with_context(|| format!("in {}", p.display()))
            .map_err(Failure::Invalid),
    }
}

fn report(issues: &[ValidationIssue]) {
    for issue in issues {
        eprintln!("{issue}");
    }
}

fn invalid(issues: &[ValidationIssue]) -> Failure {
    report(issues);
    Failure::Invalid(anyhow!("annotation failed validation"))
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Validate { annot } => {
            let image = load_image(&annot)?;
            let issues = validate(&image);
            if has_errors(&issues) {
                return Err(invalid(&issues));
            }
            report(&issues);
            println!("ok: {} areas, {} warning(s)", image.total_areas(), issues.len());
            Ok(())
        }
        Command::Replay { annot, trace, tools, out, metrics, config } => {
            let image = load_image(&annot)?;
            let config = load_config(config.as_deref())?;
            let touches = parse_trace(&read(&trace)?)
                .with_context(|| format!("in {}", trace.display()))
                .map_err(Failure::Invalid)?;
            let result = replay(&image, &touches, tools, &config).map_err(|e| match e {
                ReplayError::Invalid(issues) => invalid(&issues),
                other => Failure::Invalid(other.into()),
            })?;
            emit(out.as_deref(), &write_log(&result.events))?;
            if let Some(m) = metrics {
                write(&m, &result.metrics.to_json())?;
            }
            Ok(())
        }
        Command::Simulate { annot, strategy, tools, out_trace, metrics, out, seed, config } => {
            let image = load_image(&annot)?;
            let config = load_config(config.as_deref())?;
            let result = simulate(&image, strategy, tools, &config, seed).map_err(|e| match e {
                SimError::Invalid(issues) => invalid(&issues),
                other => Failure::Invalid(other.into()),
            })?;
            if let Some(p) = out_trace {
                write(&p, &write_trace(&result.trace))?;
            }
            if let Some(p) = out {
                write(&p, &write_log(&result.events))?;
            }
            match metrics {
                Some(p) => write(&p, &result.metrics.to_json()),
                None => emit(None, &result.metrics.to_json()),
            }
        }
        Command::Metrics { log, annot } => {
            let image = load_image(&annot)?;
            let events = parse_log(&read(&log)?)
                .with_context(|| format!("in {}", log.display()))
                .map_err(Failure::Invalid)?;
            emit(None, &SessionMetrics::from_log(&events, &image).to_json())
        }
        Command::Prominence { annot, in_place } => {
            let mut image = load_image(&annot)?;
            let table = bake_prominence(&image).map_err(|e| Failure::Invalid(e.into()))?;
            for (path, value) in table.iter() {
                if let Some(area) = image.area_mut(path) {
                    area.prominence = Some(value);
                }
            }
            let text = annot::to_json(&image);
            if in_place {
                write(&annot, &text)
            } else {
                emit(None, &text)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = f.code();
            let (Failure::Invalid(e) | Failure::Io(e)) = f;
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
