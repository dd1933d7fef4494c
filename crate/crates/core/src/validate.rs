//! Checks a parsed spec against a table schema and normalizes it.

use serde::Serialize;

use crate::data::{ColumnType, TableSchema};
use crate::model::{DashboardSpec, MetricLayout, MetricRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DiagnosticCode {
    NoSections,
    UnknownField,
    AggregationTypeMismatch,
    DimensionTypeMismatch,
    DuplicateFieldInGroup,
    DuplicateMetric,
    MetricDefaulted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    fn new(code: DiagnosticCode, path: String, message: String) -> Self {
        Diagnostic { code, path, message }
    }

    /// Index of the section this diagnostic points into, if any.
    pub fn section_index(&self) -> Option<usize> {
        let rest = self.path.strip_prefix("Sections[")?;
        rest[..rest.find(']')?].parse().ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Validates every section, collecting all problems.
///
/// The returned spec has `COUNT(*)` in any section that listed no metrics and
/// an explicit metric layout everywhere.
pub fn validate_spec(spec: &DashboardSpec, schema: &TableSchema) -> (DashboardSpec, ValidationReport) {
    let mut report = ValidationReport::default();
    let mut normalized = spec.clone();

    if spec.sections.is_empty() {
        report.errors.push(Diagnostic::new(
            DiagnosticCode::NoSections,
            "Sections".into(),
            "a dashboard needs at least one section".into(),
        ));
    }

    for (s, section) in normalized.sections.iter_mut().enumerate() {
        let section_path = format!("Sections[{s}]");
        section.metric_layout = Some(section.metric_layout.unwrap_or(MetricLayout::Repeat));

        if section.metrics.is_empty() {
            section.metrics.push(MetricRef::count_star());
            report.warnings.push(Diagnostic::new(
                DiagnosticCode::MetricDefaulted,
                format!("{section_path}.Metrics"),
                "no metrics given; defaulting to COUNT(*)".into(),
            ));
        } else {
            for (m, metric) in section.metrics.iter().enumerate() {
                let path = format!("{section_path}.Metrics[{m}]");
                if section.metrics[..m].contains(metric) {
                    report.errors.push(Diagnostic::new(
                        DiagnosticCode::DuplicateMetric,
                        path.clone(),
                        format!("{metric} is listed more than once in this section"),
                    ));
                }
                let Some(field) = metric.field() else { continue };
                match schema.column_type(field) {
                    None => report.errors.push(Diagnostic::new(
                        DiagnosticCode::UnknownField,
                        path,
                        format!("no column named `{field}`"),
                    )),
                    Some(ty) if metric.aggregation().requires_quantitative() && ty != ColumnType::Quantitative => {
                        report.errors.push(Diagnostic::new(
                            DiagnosticCode::AggregationTypeMismatch,
                            path,
                            format!(
                                "{} needs a quantitative column but `{field}` is {}",
                                metric.aggregation(),
                                type_name(ty)
                            ),
                        ))
                    }
                    Some(_) => {}
                }
            }
        }

        for (g, group) in section.dimension_groups.iter().enumerate() {
            let group_path = format!("{section_path}.DimensionGroups[{g}]");
            if group.secondary.as_deref() == Some(group.primary.as_str()) {
                report.errors.push(Diagnostic::new(
                    DiagnosticCode::DuplicateFieldInGroup,
                    group_path.clone(),
                    format!("`{}` appears twice in the same group", group.primary),
                ));
            }
            let fields = [
                ("PrimaryField", Some(&group.primary)),
                ("SecondaryField", group.secondary.as_ref()),
            ];
            for (key, field) in fields {
                let Some(field) = field else { continue };
                let path = format!("{group_path}.{key}");
                match schema.column_type(field) {
                    None => report.errors.push(Diagnostic::new(
                        DiagnosticCode::UnknownField,
                        path,
                        format!("no column named `{field}`"),
                    )),
                    Some(ty) if !ty.is_dimension() => report.errors.push(Diagnostic::new(
                        DiagnosticCode::DimensionTypeMismatch,
                        path,
                        format!(
                            "dimensions must be categorical or temporal but `{field}` is {}",
                            type_name(ty)
                        ),
                    )),
                    Some(_) => {}
                }
            }
        }
    }

    (normalized, report)
}

fn type_name(ty: ColumnType) -> &'static str {
    match ty {
        ColumnType::Quantitative => "quantitative",
        ColumnType::Categorical => "categorical",
        ColumnType::Temporal => "temporal",
    }
}
