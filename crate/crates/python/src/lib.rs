//! Python bindings for the quickdash dashboard compiler.
//!
//! Structured results (schemas, reports, skeletons) cross into Python as
//! plain dicts and lists with the same shape as the JSON the service returns.

use std::fs::File;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use quickdash_core::recommend::Mark;
use quickdash_core::{
    compile_dashboard, override_mark, to_html, to_ir_string, CompileError, CsvOptions, DashboardDoc, DashboardSpec,
    DataTable,
};
use serde::Serialize;

create_exception!(quickdash, QuickdashError, PyValueError);
create_exception!(quickdash, ParseError, QuickdashError);
create_exception!(quickdash, ValidationError, QuickdashError);
create_exception!(quickdash, LoadError, QuickdashError);

fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| QuickdashError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_error(err: quickdash_core::ParseError) -> PyErr {
    ParseError::new_err((err.to_string(), err.code(), err.path().to_string()))
}

fn compile_error(py: Python<'_>, err: CompileError) -> PyErr {
    match err {
        CompileError::Parse(e) => parse_error(e),
        CompileError::Validation(report) => match to_python(py, &report) {
            Ok(report) => ValidationError::new_err((err_message(&report), report.unbind())),
            Err(e) => e,
        },
        CompileError::Io(e) => LoadError::new_err(e.to_string()),
        CompileError::Load(e) => LoadError::new_err(e.to_string()),
        other => QuickdashError::new_err(other.to_string()),
    }
}

fn err_message(report: &Bound<'_, PyAny>) -> String {
    let count = report.get_item("errors").and_then(|e| e.len()).unwrap_or_default();
    format!("spec failed validation with {count} error(s)")
}

fn mark_from_name(name: &str) -> PyResult<Mark> {
    Mark::from_name(name).ok_or_else(|| PyValueError::new_err(format!("unknown mark `{name}`")))
}

/// An immutable table with inferred column types.
#[pyclass(module = "quickdash", frozen)]
pub struct Table {
    inner: Arc<DataTable>,
}

#[pymethods]
impl Table {
    /// Parses CSV text with a header row.
    #[staticmethod]
    fn from_csv_text(text: &str) -> PyResult<Self> {
        quickdash_core::load_csv(text.as_bytes(), CsvOptions::default())
            .map(|t| Table { inner: Arc::new(t) })
            .map_err(|e| LoadError::new_err(e.to_string()))
    }

    #[getter]
    fn row_count(&self) -> usize {
        self.inner.row_count()
    }

    #[getter]
    fn columns(&self) -> Vec<String> {
        self.inner.schema().columns.iter().map(|c| c.name.clone()).collect()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings().to_vec()
    }

    /// Column names, types and statistics as a dict.
    fn schema<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, self.inner.schema())
    }

    fn __repr__(&self) -> String {
        format!("Table(rows={}, columns={:?})", self.inner.row_count(), self.columns())
    }
}

/// A parsed dashboard spec.
#[pyclass(module = "quickdash", frozen)]
pub struct Spec {
    inner: DashboardSpec,
}

#[pymethods]
impl Spec {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        quickdash_core::parse_spec(text)
            .map(|inner| Spec { inner })
            .map_err(parse_error)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn section_count(&self) -> usize {
        self.inner.sections.len()
    }

    /// Returns `(normalized spec, report dict)`; never raises for invalid specs.
    fn validate<'py>(&self, py: Python<'py>, table: &Table) -> PyResult<(Spec, Bound<'py, PyAny>)> {
        let (normalized, report) = quickdash_core::validate_spec(&self.inner, table.inner.schema());
        Ok((Spec { inner: normalized }, to_python(py, &report)?))
    }

    /// Predicted chart counts, grid shapes and marks, from the schema alone.
    fn preview<'py>(&self, py: Python<'py>, table: &Table) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &quickdash_core::preview(&self.inner, table.inner.schema()))
    }

    fn __eq__(&self, other: &Spec) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Spec({})", self.inner.to_json().replace('\n', ""))
    }
}

/// A snapshot of one chart in a compiled dashboard.
#[pyclass(module = "quickdash", frozen, get_all)]
pub struct Chart {
    id: usize,
    section: usize,
    row: usize,
    col: usize,
    title: String,
    mark: String,
    compatible_marks: Vec<String>,
    encoded_field_count: usize,
    referenced_columns: Vec<String>,
    dropped_categories: usize,
}

#[pymethods]
impl Chart {
    fn __repr__(&self) -> String {
        format!("Chart(id={}, mark={:?}, title={:?})", self.id, self.mark, self.title)
    }
}

/// A compiled, laid-out dashboard.
#[pyclass(module = "quickdash")]
pub struct Dashboard {
    doc: DashboardDoc,
    warnings: Vec<String>,
}

#[pymethods]
impl Dashboard {
    #[getter]
    fn title(&self) -> String {
        self.doc.title.clone()
    }

    /// Validation warnings, as `path: message` strings.
    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.warnings.clone()
    }

    #[getter]
    fn charts(&self) -> Vec<Chart> {
        self.doc
            .charts
            .iter()
            .enumerate()
            .map(|(id, c)| Chart {
                id,
                section: c.section_index,
                row: c.row,
                col: c.col,
                title: c.title.clone(),
                mark: c.mark.name().to_string(),
                compatible_marks: c.compatible_marks().iter().map(|m| m.name().to_string()).collect(),
                encoded_field_count: c.encoded_field_count(),
                referenced_columns: c.referenced_columns().iter().map(|s| s.to_string()).collect(),
                dropped_categories: c.diagnostics.dropped_categories,
            })
            .collect()
    }

    /// `(rows, cols)` of each section's grid.
    fn grid_shapes(&self) -> Vec<(usize, usize)> {
        self.doc.sections.iter().map(|s| (s.rows, s.cols)).collect()
    }

    /// Switches a chart's mark; raises ValueError if the mark does not fit its encodings.
    fn override_mark(&mut self, chart_id: usize, mark: &str) -> PyResult<()> {
        let mark = mark_from_name(mark)?;
        let chart = self
            .doc
            .charts
            .get(chart_id)
            .ok_or_else(|| PyIndexError::new_err(format!("no chart {chart_id}")))?;
        let changed = override_mark(chart, mark).map_err(|e| QuickdashError::new_err(e.to_string()))?;
        self.doc.charts[chart_id] = changed;
        Ok(())
    }

    fn to_ir(&self) -> String {
        to_ir_string(&self.doc)
    }

    fn to_html(&self) -> String {
        to_html(&self.doc)
    }

    fn __len__(&self) -> usize {
        self.doc.charts.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dashboard(title={:?}, charts={})",
            self.doc.title,
            self.doc.charts.len()
        )
    }
}

/// Loads a CSV file with a header row.
#[pyfunction]
fn load_csv(path: &str) -> PyResult<Table> {
    let file = File::open(path).map_err(|e| LoadError::new_err(format!("{path}: {e}")))?;
    quickdash_core::load_csv(file, CsvOptions::default())
        .map(|t| Table { inner: Arc::new(t) })
        .map_err(|e| LoadError::new_err(e.to_string()))
}

/// Parses spec text; raises ParseError with `(message, code, path)` args.
#[pyfunction]
fn parse_spec(text: &str) -> PyResult<Spec> {
    Spec::parse(text)
}

/// Compiles a spec (a `Spec` or spec text) against a table.
///
/// Raises ValidationError with `(message, report)` args when the spec does
/// not validate.
#[pyfunction]
fn compile(py: Python<'_>, spec: &Bound<'_, PyAny>, table: &Table) -> PyResult<Dashboard> {
    let spec = match spec.cast::<Spec>() {
        Ok(spec) => spec.get().inner.clone(),
        Err(_) => Spec::parse(&spec.extract::<String>()?)?.inner,
    };
    let table = Arc::clone(&table.inner);
    let compiled = py
        .detach(move || compile_dashboard(&spec, &table))
        .map_err(|e| compile_error(py, e))?;
    Ok(Dashboard {
        warnings: compiled
            .report
            .warnings
            .iter()
            .map(|w| format!("{}: {}", w.path, w.message))
            .collect(),
        doc: compiled.doc,
    })
}

/// Marks a chart may use, in a stable order.
#[pyfunction]
fn marks() -> Vec<&'static str> {
    Mark::ALL.iter().map(|m| m.name()).collect()
}

#[pymodule]
fn quickdash(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<Table>()?;
    m.add_class::<Spec>()?;
    m.add_class::<Chart>()?;
    m.add_class::<Dashboard>()?;
    m.add_function(wrap_pyfunction!(load_csv, m)?)?;
    m.add_function(wrap_pyfunction!(parse_spec, m)?)?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(marks, m)?)?;
    m.add("QuickdashError", py.get_type::<QuickdashError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("ValidationError", py.get_type::<ValidationError>())?;
    m.add("LoadError", py.get_type::<LoadError>())?;
    m.add("IR_VERSION", quickdash_core::emit::IR_VERSION)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
