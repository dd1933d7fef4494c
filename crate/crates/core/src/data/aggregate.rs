use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::table::{ColumnData, ColumnType, DataTable, TableSchema};
use super::time::{format_timestamp, TimeUnit};
use crate::model::{Aggregation, DimensionGroup, MetricRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AggregateError {
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("{metric} needs a quantitative column but `{field}` is not")]
    MetricOnNonQuantitative { metric: String, field: String },
    #[error("`{0}` is quantitative and cannot be used as a group key")]
    QuantitativeGroupKey(String),
    #[error("group contains temporal field `{0}` but no time unit was given")]
    MissingTimeUnit(String),
    #[error("a time unit was given but the group has no temporal field")]
    UnexpectedTimeUnit,
}

/// One component of a group key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupKey {
    Text(String),
    /// Bin start in UTC milliseconds.
    Time(i64),
}

impl Ord for GroupKey {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GroupKey::Time(a), GroupKey::Time(b)) => a.cmp(b),
            (GroupKey::Text(a), GroupKey::Text(b)) => a.cmp(b),
            (GroupKey::Time(_), GroupKey::Text(_)) => Ordering::Less,
            (GroupKey::Text(_), GroupKey::Time(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for GroupKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for GroupKey {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            GroupKey::Text(s) => serializer.serialize_str(s),
            GroupKey::Time(ms) => serializer.serialize_str(&format_timestamp(*ms)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub keys: Vec<GroupKey>,
    /// One value per metric, in metric order. `None` when MEAN, MIN or MAX saw no values.
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub group_fields: Vec<String>,
    pub metrics: Vec<MetricRef>,
    pub time_unit: Option<TimeUnit>,
    /// Ordered by key ascending.
    pub rows: Vec<AggregateRow>,
    /// Rows left out because a group field was null.
    pub dropped_rows: usize,
}

impl AggregateResult {
    /// Values of one metric across rows, skipping nulls.
    pub fn metric_values(&self, metric: &MetricRef) -> impl Iterator<Item = f64> + '_ {
        let index = self.metrics.iter().position(|m| m == metric);
        self.rows
            .iter()
            .filter_map(move |row| index.and_then(|i| row.values[i]))
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    rows: usize,
    non_null: usize,
    sum: f64,
    min: Option<f64>,
    max: Option<f64>,
}

impl Accumulator {
    fn push_number(&mut self, value: f64) {
        self.non_null += 1;
        self.sum += value;
        self.min = Some(self.min.map_or(value, |m| m.min(value)));
        self.max = Some(self.max.map_or(value, |m| m.max(value)));
    }

    fn finish(&self, aggregation: Aggregation) -> Option<f64> {
        match aggregation {
            Aggregation::Sum => Some(self.sum),
            Aggregation::Mean => (self.non_null > 0).then(|| self.sum / self.non_null as f64),
            Aggregation::Min => self.min,
            Aggregation::Max => self.max,
            Aggregation::Count => Some(self.non_null as f64),
            Aggregation::CountStar => Some(self.rows as f64),
        }
    }
}

enum MetricSource<'a> {
    Rows,
    Numbers(&'a [Option<f64>]),
    Presence(&'a ColumnData),
}

fn metric_source<'a>(table: &'a DataTable, metric: &MetricRef) -> Result<MetricSource<'a>, AggregateError> {
    let Some(field) = metric.field() else {
        return Ok(MetricSource::Rows);
    };
    let column = table
        .column(field)
        .ok_or_else(|| AggregateError::UnknownField(field.to_string()))?;
    match (metric.aggregation(), column) {
        (Aggregation::Count, data) => Ok(MetricSource::Presence(data)),
        (_, ColumnData::Quantitative(values)) => Ok(MetricSource::Numbers(values)),
        _ => Err(AggregateError::MetricOnNonQuantitative {
            metric: metric.label(),
            field: field.to_string(),
        }),
    }
}

enum KeySource<'a> {
    Text(&'a [Option<String>]),
    Time(&'a [Option<i64>], TimeUnit),
}

impl KeySource<'_> {
    fn key(&self, row: usize) -> Option<GroupKey> {
        match self {
            KeySource::Text(values) => values[row].clone().map(GroupKey::Text),
            KeySource::Time(values, unit) => values[row].map(|ms| GroupKey::Time(unit.truncate(ms))),
        }
    }
}

/// Grouped aggregation of `metrics` by the fields of `group`.
///
/// Without a group the result has exactly one row. Temporal keys are
/// truncated to `time_unit`, which must be present exactly when the group
/// has a temporal field.
pub fn aggregate(
    table: &DataTable,
    metrics: &[MetricRef],
    group: Option<&DimensionGroup>,
    time_unit: Option<TimeUnit>,
) -> Result<AggregateResult, AggregateError> {
    let sources = metrics
        .iter()
        .map(|m| metric_source(table, m))
        .collect::<Result<Vec<_>, _>>()?;

    let group_fields: Vec<String> = group
        .map(|g| g.fields().map(str::to_string).collect())
        .unwrap_or_default();
    let mut saw_temporal = false;
    let mut keys = Vec::with_capacity(group_fields.len());
    for field in &group_fields {
        let column = table
            .column(field)
            .ok_or_else(|| AggregateError::UnknownField(field.clone()))?;
        keys.push(match column {
            ColumnData::Categorical(values) => KeySource::Text(values),
            ColumnData::Temporal(values) => {
                saw_temporal = true;
                let unit = time_unit.ok_or_else(|| AggregateError::MissingTimeUnit(field.clone()))?;
                KeySource::Time(values, unit)
            }
            ColumnData::Quantitative(_) => return Err(AggregateError::QuantitativeGroupKey(field.clone())),
        });
    }
    if time_unit.is_some() && !saw_temporal {
        return Err(AggregateError::UnexpectedTimeUnit);
    }

    let mut groups: BTreeMap<Vec<GroupKey>, Vec<Accumulator>> = BTreeMap::new();
    if keys.is_empty() {
        groups.insert(Vec::new(), vec![Accumulator::default(); metrics.len()]);
    }
    let mut dropped_rows = 0;
    for row in 0..table.row_count() {
        let Some(key) = keys.iter().map(|k| k.key(row)).collect::<Option<Vec<_>>>() else {
            dropped_rows += 1;
            continue;
        };
        let accs = groups
            .entry(key)
            .or_insert_with(|| vec![Accumulator::default(); metrics.len()]);
        for (acc, source) in accs.iter_mut().zip(&sources) {
            acc.rows += 1;
            match source {
                MetricSource::Rows => {}
                MetricSource::Numbers(values) => {
                    if let Some(v) = values[row] {
                        acc.push_number(v);
                    }
                }
                MetricSource::Presence(data) => {
                    if !data.is_null(row) {
                        acc.non_null += 1;
                    }
                }
            }
        }
    }

    let rows = groups
        .into_iter()
        .map(|(keys, accs)| AggregateRow {
            keys,
            values: accs
                .iter()
                .zip(metrics)
                .map(|(acc, m)| acc.finish(m.aggregation()))
                .collect(),
        })
        .collect();

    Ok(AggregateResult {
        group_fields,
        metrics: metrics.to_vec(),
        time_unit: if saw_temporal { time_unit } else { None },
        rows,
        dropped_rows,
    })
}

/// Time unit for a group: the automatic bin of its first temporal field, or
/// `None` when the group has no temporal field. Every temporal key of the
/// group is binned with this unit. A temporal column with no values gets day bins.
pub fn auto_time_unit(schema: &TableSchema, group: Option<&DimensionGroup>) -> Option<TimeUnit> {
    group?
        .fields()
        .find(|f| schema.column_type(f) == Some(ColumnType::Temporal))
        .map(|f| schema.auto_time_unit(f).unwrap_or(TimeUnit::Day))
}
