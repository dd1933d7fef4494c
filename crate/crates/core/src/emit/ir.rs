//! Chart-IR: the versioned JSON form of a compiled dashboard.
//!
//! Output is byte-stable: struct field order is fixed, no hash maps are
//! serialized, floats use the shortest round-trip representation and the
//! document ends with a newline.

use serde::Serialize;

use crate::data::{ColumnType, GroupKey, TimeUnit};
use crate::expand::Domain;
use crate::layout::DashboardDoc;
use crate::model::{DashboardSpec, MetricLayout, MetricRef};
use crate::recommend::{Channel, ChartSpec, EncodedValue, Encoding, Mark};

pub const IR_VERSION: u32 = 1;

/// JSON Schema describing the IR document.
pub const IR_SCHEMA: &str = include_str!("../../schema/ir.schema.json");

fn generator() -> String {
    format!("quickdash {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IrDocument<'a> {
    ir_version: u32,
    generator: String,
    title: &'a str,
    sections: Vec<IrSection<'a>>,
    charts: Vec<IrChart<'a>>,
    spec: &'a DashboardSpec,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IrSection<'a> {
    index: usize,
    title: &'a str,
    metric_layout: &'static str,
    rows: usize,
    cols: usize,
    cell_width: u32,
    cell_height: u32,
    cells: &'a [Vec<Option<usize>>],
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IrChart<'a> {
    id: usize,
    section: usize,
    row: usize,
    col: usize,
    title: &'a str,
    mark: Mark,
    editable: bool,
    compatible_marks: Vec<Mark>,
    encodings: Vec<IrEncoding<'a>>,
    scales: Vec<IrScale>,
    data: IrData<'a>,
    diagnostics: IrDiagnostics,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IrEncoding<'a> {
    channel: Channel,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<Vec<String>>,
    #[serde(rename = "type")]
    value_type: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_unit: Option<TimeUnit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    domain: Option<Domain>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sort: Option<&'static str>,
    title: &'a str,
}

#[derive(Serialize)]
struct IrScale {
    metric: String,
    domain: Domain,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IrData<'a> {
    fields: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_unit: Option<TimeUnit>,
    rows: Vec<Vec<IrValue<'a>>>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum IrValue<'a> {
    Key(&'a GroupKey),
    Number(Option<f64>),
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IrDiagnostics {
    dropped_rows: usize,
    dropped_categories: usize,
}

fn type_name(ty: ColumnType) -> &'static str {
    match ty {
        ColumnType::Quantitative => "quantitative",
        ColumnType::Categorical => "categorical",
        ColumnType::Temporal => "temporal",
    }
}

fn labels(metrics: &[MetricRef]) -> Vec<String> {
    metrics.iter().map(MetricRef::label).collect()
}

fn ir_encoding(encoding: &Encoding) -> IrEncoding<'_> {
    let (field, series, metrics, value_type) = match &encoding.value {
        EncodedValue::Field { name, column_type } => (Some(name.as_str()), None, None, type_name(*column_type)),
        EncodedValue::Metrics(metrics) => (None, None, Some(labels(metrics)), "quantitative"),
        EncodedValue::MetricSeries(metrics) => (None, Some("metric"), Some(labels(metrics)), "categorical"),
    };
    IrEncoding {
        channel: encoding.channel,
        field,
        series,
        metrics,
        value_type,
        time_unit: encoding.time_unit,
        domain: encoding.domain,
        sort: encoding.sort_descending.then_some("-y"),
        title: &encoding.title,
    }
}

fn ir_chart(id: usize, chart: &ChartSpec) -> IrChart<'_> {
    let data = match &chart.data {
        Some(result) => IrData {
            fields: result
                .group_fields
                .iter()
                .cloned()
                .chain(result.metrics.iter().map(MetricRef::label))
                .collect(),
            time_unit: result.time_unit,
            rows: result
                .rows
                .iter()
                .map(|row| {
                    row.keys
                        .iter()
                        .map(IrValue::Key)
                        .chain(row.values.iter().map(|v| IrValue::Number(*v)))
                        .collect()
                })
                .collect(),
        },
        None => IrData {
            fields: Vec::new(),
            time_unit: None,
            rows: Vec::new(),
        },
    };
    IrChart {
        id,
        section: chart.section_index,
        row: chart.row,
        col: chart.col,
        title: &chart.title,
        mark: chart.mark,
        editable: chart.editable,
        compatible_marks: chart.compatible_marks(),
        encodings: chart.encodings.iter().map(ir_encoding).collect(),
        scales: chart
            .scales
            .iter()
            .map(|(metric, domain)| IrScale {
                metric: metric.label(),
                domain: *domain,
            })
            .collect(),
        data,
        diagnostics: IrDiagnostics {
            dropped_rows: chart.diagnostics.dropped_rows,
            dropped_categories: chart.diagnostics.dropped_categories,
        },
    }
}

/// Serializes a compiled dashboard to IR JSON text.
pub fn to_ir_string(doc: &DashboardDoc) -> String {
    let ir = IrDocument {
        ir_version: IR_VERSION,
        generator: generator(),
        title: &doc.title,
        sections: doc
            .sections
            .iter()
            .enumerate()
            .map(|(index, grid)| IrSection {
                index,
                title: &grid.title,
                metric_layout: doc
                    .provenance
                    .sections
                    .get(index)
                    .map_or(MetricLayout::Repeat, |s| s.layout())
                    .token(),
                rows: grid.rows,
                cols: grid.cols,
                cell_width: grid.cell_width,
                cell_height: grid.cell_height,
                cells: &grid.cells,
            })
            .collect(),
        charts: doc.charts.iter().enumerate().map(|(id, c)| ir_chart(id, c)).collect(),
        spec: &doc.provenance,
    };
    let mut text = serde_json::to_string_pretty(&ir).expect("IR serialization is infallible");
    text.push('\n');
    text
}
