//! Data-free preview of what a spec will compile to.

use serde::Serialize;

use crate::data::TableSchema;
use crate::expand::expand_section;
use crate::layout::{grid_shape, section_title};
use crate::model::{DashboardSpec, MetricRef};
use crate::recommend::{predict_mark, Mark};
use crate::validate::{validate_spec, Diagnostic};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CellSkeleton {
    pub row: usize,
    pub col: usize,
    pub metrics: Vec<String>,
    pub group: Vec<String>,
    /// `None` when the section has errors that prevent a recommendation.
    pub mark: Option<Mark>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SectionSkeleton {
    pub index: usize,
    pub title: String,
    pub chart_count: usize,
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<CellSkeleton>,
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PreviewSkeleton {
    pub sections: Vec<SectionSkeleton>,
    /// Problems not tied to one section.
    pub errors: Vec<Diagnostic>,
}

impl PreviewSkeleton {
    pub fn chart_count(&self) -> usize {
        self.sections.iter().map(|s| s.chart_count).sum()
    }

    pub fn has_errors(&self) -> bool {
        !self.errors.is_empty() || self.sections.iter().any(|s| !s.errors.is_empty())
    }
}

/// Predicts chart counts, grid shapes and marks from the schema alone.
pub fn preview(spec: &DashboardSpec, schema: &TableSchema) -> PreviewSkeleton {
    let (normalized, report) = validate_spec(spec, schema);
    let for_section = |list: &[Diagnostic], index: usize| -> Vec<Diagnostic> {
        list.iter()
            .filter(|d| d.section_index() == Some(index))
            .cloned()
            .collect()
    };

    let sections = normalized
        .sections
        .iter()
        .enumerate()
        .map(|(index, section)| {
            let errors = for_section(&report.errors, index);
            let (rows, cols) = grid_shape(section);
            let cells: Vec<CellSkeleton> = expand_section(index, section)
                .iter()
                .map(|intent| CellSkeleton {
                    row: intent.row_hint,
                    col: intent.col_hint,
                    metrics: intent.metrics.iter().map(MetricRef::label).collect(),
                    group: intent
                        .group
                        .as_ref()
                        .map(|g| g.fields().map(str::to_string).collect())
                        .unwrap_or_default(),
                    mark: if errors.is_empty() {
                        predict_mark(intent, schema).ok()
                    } else {
                        None
                    },
                })
                .collect();
            SectionSkeleton {
                index,
                title: section_title(section),
                chart_count: cells.len(),
                rows,
                cols,
                cells,
                errors,
                warnings: for_section(&report.warnings, index),
            }
        })
        .collect();

    PreviewSkeleton {
        sections,
        errors: report
            .errors
            .iter()
            .filter(|d| d.section_index().is_none())
            .cloned()
            .collect(),
    }
}
