//! Section expansion into chart intents and per-section axis scales.
//!
//! Every metric of a section is crossed with every dimension group. Under
//! [`MetricLayout::Repeat`] each metric gets its own chart and the grid has one
//! row per metric; under [`MetricLayout::Layer`] all metrics share each chart.
//! A section without dimension groups yields KPI intents (no group).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::Serialize;

use crate::data::{aggregate, auto_time_unit, AggregateError, AggregateResult, DataTable};
use crate::model::{DashboardSpec, DimensionGroup, MetricLayout, MetricRef, Section};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartIntent {
    pub section_index: usize,
    pub metrics: Vec<MetricRef>,
    pub group: Option<DimensionGroup>,
    pub row_hint: usize,
    pub col_hint: usize,
}

impl ChartIntent {
    pub fn is_layered(&self) -> bool {
        self.metrics.len() > 1
    }
}

fn section_metrics(section: &Section) -> Vec<MetricRef> {
    if section.metrics.is_empty() {
        vec![MetricRef::count_star()]
    } else {
        section.metrics.clone()
    }
}

/// Intents for one section, row-major.
pub fn expand_section(section_index: usize, section: &Section) -> Vec<ChartIntent> {
    let metrics = section_metrics(section);
    let groups: Vec<Option<&DimensionGroup>> = if section.dimension_groups.is_empty() {
        vec![None]
    } else {
        section.dimension_groups.iter().map(Some).collect()
    };
    let rows: Vec<Vec<MetricRef>> = match section.layout() {
        MetricLayout::Repeat => metrics.into_iter().map(|m| vec![m]).collect(),
        MetricLayout::Layer => vec![metrics],
    };

    let mut intents = Vec::with_capacity(rows.len() * groups.len());
    for (row_hint, row_metrics) in rows.iter().enumerate() {
        for (col_hint, group) in groups.iter().enumerate() {
            intents.push(ChartIntent {
                section_index,
                metrics: row_metrics.clone(),
                group: group.cloned(),
                row_hint,
                col_hint,
            });
        }
    }
    intents
}

/// Expands a validated spec, section-major.
pub fn expand(spec: &DashboardSpec) -> Vec<ChartIntent> {
    spec.sections
        .iter()
        .enumerate()
        .flat_map(|(i, section)| expand_section(i, section))
        .collect()
}

/// Chart count for a section without building the intents.
pub fn section_chart_count(section: &Section) -> usize {
    let groups = section.dimension_groups.len().max(1);
    match section.layout() {
        MetricLayout::Layer => groups,
        MetricLayout::Repeat => groups * section.metrics.len().max(1),
    }
}

/// Closed axis interval for a metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub min: f64,
    pub max: f64,
}

impl Domain {
    /// Zero-based interval covering `values`, widened when it would be empty.
    pub fn covering(values: impl IntoIterator<Item = f64>) -> Self {
        let (lo, hi) = values
            .into_iter()
            .fold((0.0f64, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if lo < hi {
            Domain { min: lo, max: hi }
        } else {
            Domain {
                min: lo.min(0.0),
                max: hi.max(1.0),
            }
        }
    }

    pub fn union(self, other: Domain) -> Domain {
        Domain {
            min: self.min.min(other.min),
            max: self.max.max(other.max),
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        self.min <= value && value <= self.max
    }
}

impl Serialize for Domain {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.min)?;
        seq.serialize_element(&self.max)?;
        seq.end()
    }
}

/// Shared axis domains keyed by (section, metric).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScaleResolution {
    pub entries: BTreeMap<(usize, MetricRef), Domain>,
}

impl ScaleResolution {
    pub fn domain(&self, section_index: usize, metric: &MetricRef) -> Option<Domain> {
        self.entries.get(&(section_index, metric.clone())).copied()
    }
}

/// Aggregates one intent with the automatic time unit of its group.
pub fn aggregate_intent(table: &DataTable, intent: &ChartIntent) -> Result<AggregateResult, AggregateError> {
    let group = intent.group.as_ref();
    aggregate(table, &intent.metrics, group, auto_time_unit(table.schema(), group))
}

/// Aggregates every intent, in intent order.
pub fn aggregate_intents(table: &DataTable, intents: &[ChartIntent]) -> Result<Vec<AggregateResult>, AggregateError> {
    intents.par_iter().map(|i| aggregate_intent(table, i)).collect()
}

/// Resolves scales from precomputed aggregates (one per intent, same order).
pub fn resolve_scales_from(intents: &[ChartIntent], aggregates: &[AggregateResult]) -> ScaleResolution {
    let mut values: BTreeMap<(usize, MetricRef), Vec<f64>> = BTreeMap::new();
    for (intent, result) in intents.iter().zip(aggregates) {
        for metric in &intent.metrics {
            values
                .entry((intent.section_index, metric.clone()))
                .or_default()
                .extend(result.metric_values(metric));
        }
    }
    ScaleResolution {
        entries: values
            .into_iter()
            .map(|(key, vals)| (key, Domain::covering(vals)))
            .collect(),
    }
}

/// Aggregates every intent and derives one domain per (section, metric).
pub fn resolve_scales(intents: &[ChartIntent], table: &DataTable) -> Result<ScaleResolution, AggregateError> {
    let aggregates = aggregate_intents(table, intents)?;
    Ok(resolve_scales_from(intents, &aggregates))
}
