//! Compiles data-first dashboard specifications into laid-out dashboards.
//!
//! A spec names sections of metrics and dimension groups. Compilation
//! validates it against a table, expands every section into the cross product
//! of its metrics and groups, aggregates each chart's data, resolves one
//! shared axis domain per metric per section, recommends a single chart for
//! each combination and places the charts on a grid.
//!
//! ```no_run
//! use quickdash_core::{compile_dashboard, load_csv, parse_spec, to_ir_string, CsvOptions};
//!
//! let table = load_csv(std::fs::File::open("superstore.csv")?, CsvOptions::default())?;
//! let spec = parse_spec(r#"{"Sections": [{"Metrics": ["Sales (SUM)"],
//!     "DimensionGroups": [{"PrimaryField": "Region"}]}]}"#)?;
//! let compiled = compile_dashboard(&spec, &table)?;
//! print!("{}", to_ir_string(&compiled.doc));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod compile;
pub mod data;
pub mod emit;
pub mod expand;
pub mod layout;
pub mod model;
pub mod recommend;
pub mod validate;

pub use compile::{
    compile, compile_dashboard, Artifacts, CompileError, CompileRequest, Compiled, DataRef, OutputFormat,
};
pub use data::{aggregate, load_csv, AggregateResult, ColumnType, CsvOptions, DataTable, TableSchema, TimeUnit};
pub use emit::{preview, to_html, to_ir_string, PreviewSkeleton};
pub use expand::{expand, resolve_scales, ChartIntent, Domain, ScaleResolution};
pub use layout::{layout, DashboardDoc};
pub use model::{parse_spec, Aggregation, DashboardSpec, DimensionGroup, MetricLayout, MetricRef, ParseError, Section};
pub use recommend::{override_mark, recommend, Channel, ChartSpec, Mark, PreferredAxis, RecommendError};
pub use validate::{validate_spec, Diagnostic, DiagnosticCode, ValidationReport};
