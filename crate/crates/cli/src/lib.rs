//! Command line front end and local service for quickdash.

pub mod server;

use std::fs::{self, File};
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use quickdash_core::{
    compile, load_csv, parse_spec, validate_spec, CompileError, CompileRequest, CsvOptions, DataRef, DataTable,
    OutputFormat,
};

pub const DEFAULT_PORT: u16 = 7450;

/// Exit status for a spec that failed to parse or validate.
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_FAILURE: u8 = 1;

#[derive(Debug, Parser)]
#[command(name = "quickdash", version, about = "Compile data-first dashboard specs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the inferred schema of a CSV file.
    Schema { data: PathBuf },
    /// Check a spec against a data file and print the report.
    Validate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
    /// Compile a spec into chart IR and/or a static HTML page.
    Compile {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Output file. With `--format both` its extension is replaced by .json and .html.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Ir)]
        format: Format,
    },
    /// Serve the authoring endpoints over HTTP.
    Serve {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Directory with the built UI bundle; defaults to ./ui/dist when it exists.
        #[arg(long)]
        ui: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ir,
    Html,
    Both,
}

impl From<Format> for OutputFormat {
    fn from(format: Format) -> Self {
        match format {
            Format::Ir => OutputFormat::Ir,
            Format::Html => OutputFormat::Html,
            Format::Both => OutputFormat::Both,
        }
    }
}

/// Failure carrying the process exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure {
            code: EXIT_FAILURE,
            error,
        }
    }
}

fn validation_failure(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_VALIDATION,
        error: error.into(),
    }
}

pub fn run(cli: Cli) -> ExitCode {
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Schema { data } => {
            let table = load(&data)?;
            print_out(&pretty(table.schema())?)?;
            Ok(())
        }
        Command::Validate { spec, data } => validate(&spec, &data),
        Command::Compile {
            spec,
            data,
            out,
            format,
        } => compile_to(&spec, &data, &out, format),
        Command::Serve { data, port, ui } => serve(&data, port, ui),
    }
}

fn load(path: &Path) -> anyhow::Result<DataTable> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let table = load_csv(file, CsvOptions::default()).with_context(|| format!("cannot load {}", path.display()))?;
    for warning in table.warnings() {
        eprintln!("warning: {warning}");
    }
    Ok(table)
}

fn read_spec(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes a line to stdout; a reader that went away early is not an error.
fn print_out(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn pretty<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn validate(spec_path: &Path, data: &Path) -> Result<(), Failure> {
    let text = read_spec(spec_path)?;
    let table = load(data)?;
    let spec = parse_spec(&text).map_err(validation_failure)?;
    let (_, report) = validate_spec(&spec, table.schema());
    print_out(&pretty(&report)?)?;
    if report.is_ok() {
        Ok(())
    } else {
        Err(validation_failure(anyhow::anyhow!(
            "spec has {} validation error(s)",
            report.errors.len()
        )))
    }
}

/// Output paths for a format: `out` itself, or `out` with .json and .html for both.
pub fn output_paths(out: &Path, format: Format) -> (Option<PathBuf>, Option<PathBuf>) {
    match format {
        Format::Ir => (Some(out.to_path_buf()), None),
        Format::Html => (None, Some(out.to_path_buf())),
        Format::Both => (Some(out.with_extension("json")), Some(out.with_extension("html"))),
    }
}

fn compile_to(spec_path: &Path, data: &Path, out: &Path, format: Format) -> Result<(), Failure> {
    let request = CompileRequest {
        spec: read_spec(spec_path)?,
        data: DataRef::Loaded(Arc::new(load(data)?)),
        output: format.into(),
    };
    let artifacts = match compile(&request) {
        Ok(artifacts) => artifacts,
        Err(CompileError::Validation(report)) => {
            eprintln!("{}", pretty(&report)?);
            return Err(validation_failure(CompileError::Validation(report)));
        }
        Err(e @ CompileError::Parse(_)) => return Err(validation_failure(e)),
        Err(e) => return Err(anyhow::Error::from(e).into()),
    };
    for warning in &artifacts.compiled.report.warnings {
        eprintln!("warning: {}: {}", warning.path, warning.message);
    }
    let (ir_path, html_path) = output_paths(out, format);
    for (path, body) in [(ir_path, artifacts.ir), (html_path, artifacts.html)] {
        if let (Some(path), Some(body)) = (path, body) {
            fs::write(&path, body).with_context(|| format!("cannot write {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn serve(data: &Path, port: u16, ui: Option<PathBuf>) -> Result<(), Failure> {
    let table = Arc::new(load(data)?);
    let ui_dir = ui.or_else(|| Some(PathBuf::from("ui/dist")).filter(|d| d.is_dir()));
    let state = server::AppState { table, ui_dir };
    let runtime = tokio::runtime::Runtime::new().context("cannot start runtime")?;
    runtime.block_on(async move {
        let addr = SocketAddr::from(([127, 0, 0, 1], port));
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("cannot listen on {addr}"))?;
        tracing::info!(%addr, "serving");
        eprintln!("listening on http://{addr}");
        axum::serve(listener, server::router(state))
            .await
            .context("server stopped")?;
        Ok(())
    })
}
