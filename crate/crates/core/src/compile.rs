//! The end-to-end pipeline: parse, validate, expand, aggregate, resolve
//! scales, recommend, lay out and serialize.

use std::fs::File;
use std::path::PathBuf;
use std::sync::Arc;

use thiserror::Error;

use crate::data::{load_csv, AggregateError, CsvOptions, DataTable, LoadError};
use crate::emit::{to_html, to_ir_string};
use crate::expand::{aggregate_intents, expand, resolve_scales_from};
use crate::layout::{layout, DashboardDoc};
use crate::model::{parse_spec, DashboardSpec, ParseError};
use crate::recommend::{recommend, RecommendError};
use crate::validate::{validate_spec, ValidationReport};

#[derive(Debug, Error)]
pub enum CompileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("spec failed validation with {} error(s)", .0.errors.len())]
    Validation(ValidationReport),
    #[error("cannot read data: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Aggregate(#[from] AggregateError),
    #[error(transparent)]
    Recommend(#[from] RecommendError),
}

/// A compiled dashboard plus the warnings validation produced.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub doc: DashboardDoc,
    pub report: ValidationReport,
}

/// Compiles a parsed spec against a loaded table.
pub fn compile_dashboard(spec: &DashboardSpec, table: &DataTable) -> Result<Compiled, CompileError> {
    let (normalized, report) = validate_spec(spec, table.schema());
    if !report.is_ok() {
        return Err(CompileError::Validation(report));
    }
    let intents = expand(&normalized);
    let aggregates = aggregate_intents(table, &intents)?;
    let scales = resolve_scales_from(&intents, &aggregates);
    let charts = intents
        .iter()
        .zip(aggregates)
        .map(|(intent, data)| Ok(recommend(intent, table.schema(), &scales)?.with_data(data)))
        .collect::<Result<Vec<_>, CompileError>>()?;
    Ok(Compiled {
        doc: layout(&normalized, charts),
        report,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Ir,
    Html,
    Both,
}

/// Where the table comes from.
#[derive(Debug, Clone)]
pub enum DataRef {
    Path(PathBuf),
    Loaded(Arc<DataTable>),
}

#[derive(Debug, Clone)]
pub struct CompileRequest {
    /// Spec document text.
    pub spec: String,
    pub data: DataRef,
    pub output: OutputFormat,
}

#[derive(Debug, Clone)]
pub struct Artifacts {
    pub ir: Option<String>,
    pub html: Option<String>,
    pub compiled: Compiled,
}

/// Runs the full pipeline for a request and renders the requested outputs.
pub fn compile(request: &CompileRequest) -> Result<Artifacts, CompileError> {
    let spec = parse_spec(&request.spec)?;
    let table = match &request.data {
        DataRef::Path(path) => Arc::new(load_csv(File::open(path)?, CsvOptions::default())?),
        DataRef::Loaded(table) => Arc::clone(table),
    };
    let compiled = compile_dashboard(&spec, &table)?;
    let ir = matches!(request.output, OutputFormat::Ir | OutputFormat::Both).then(|| to_ir_string(&compiled.doc));
    let html = matches!(request.output, OutputFormat::Html | OutputFormat::Both).then(|| to_html(&compiled.doc));
    Ok(Artifacts { ir, html, compiled })
}
