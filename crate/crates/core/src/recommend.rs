//! Rule-based chart recommendation.
//!
//! Exactly one chart is produced per intent. The recommender only looks at
//! column types and the shape of the intent (one metric or layered metrics,
//! group arity), never at whether a field was authored as a metric or a
//! dimension.
//!
//! | metrics  | group                 | mark          | x          | color           | column-facet |
//! |----------|-----------------------|---------------|------------|-----------------|--------------|
//! | any      | none                  | `kpi_card`    |            |                 |              |
//! | one      | temporal              | `line`        | temporal   |                 |              |
//! | one      | categorical           | `bar` (top 20)| categorical|                 |              |
//! | one      | temporal+categorical  | `multi_line`  | temporal   | categorical     |              |
//! | one      | categorical+categorical | `grouped_bar` | primary  | secondary       |              |
//! | one      | temporal+temporal     | `multi_line`  | primary    | secondary       |              |
//! | layered  | temporal              | `multi_line`  | temporal   | metric name     |              |
//! | layered  | categorical           | `grouped_bar` | categorical| metric name     |              |
//! | layered  | two fields            | `multi_line` / `grouped_bar` | temporal if any, else primary | metric name | other field |
//!
//! Layered metrics always share one y axis.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::data::{auto_time_unit, AggregateResult, ColumnType, TableSchema, TimeUnit};
use crate::expand::{ChartIntent, Domain, ScaleResolution};
use crate::model::{DimensionGroup, MetricRef};

/// Categorical bar charts keep at most this many categories.
pub const BAR_CATEGORY_LIMIT: usize = 20;
/// Non-metric fields plus one slot for the metrics.
pub const ENCODING_FIELD_BUDGET: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mark {
    Line,
    Bar,
    GroupedBar,
    MultiLine,
    KpiCard,
}

impl Mark {
    pub const ALL: [Mark; 5] = [Mark::Line, Mark::Bar, Mark::GroupedBar, Mark::MultiLine, Mark::KpiCard];

    pub fn name(self) -> &'static str {
        match self {
            Mark::Line => "line",
            Mark::Bar => "bar",
            Mark::GroupedBar => "grouped_bar",
            Mark::MultiLine => "multi_line",
            Mark::KpiCard => "kpi_card",
        }
    }

    pub fn from_name(name: &str) -> Option<Mark> {
        Mark::ALL.into_iter().find(|m| m.name() == name)
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Channel {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "color")]
    Color,
    #[serde(rename = "column-facet")]
    ColumnFacet,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::X => "x",
            Channel::Y => "y",
            Channel::Color => "color",
            Channel::ColumnFacet => "column-facet",
        }
    }

    pub fn from_name(name: &str) -> Option<Channel> {
        [Channel::X, Channel::Y, Channel::Color, Channel::ColumnFacet]
            .into_iter()
            .find(|c| c.name() == name)
    }
}

/// What an encoding channel shows.
#[derive(Debug, Clone, PartialEq)]
pub enum EncodedValue {
    /// A dimension column.
    Field { name: String, column_type: ColumnType },
    /// Metric values on a shared quantitative scale.
    Metrics(Vec<MetricRef>),
    /// One series per metric, keyed by metric label.
    MetricSeries(Vec<MetricRef>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    pub channel: Channel,
    pub value: EncodedValue,
    /// Bin of a temporal field.
    pub time_unit: Option<TimeUnit>,
    /// Quantitative domain, present on metric encodings.
    pub domain: Option<Domain>,
    /// Categories sorted by descending value instead of by key.
    pub sort_descending: bool,
    pub title: String,
}

impl Encoding {
    pub fn field_name(&self) -> Option<&str> {
        match &self.value {
            EncodedValue::Field { name, .. } => Some(name),
            _ => None,
        }
    }

    pub fn is_temporal(&self) -> bool {
        matches!(
            self.value,
            EncodedValue::Field {
                column_type: ColumnType::Temporal,
                ..
            }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ChartDiagnostics {
    /// Rows excluded because a group field was null.
    pub dropped_rows: usize,
    /// Categories cut by the bar category limit.
    pub dropped_categories: usize,
}

/// One recommended chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub section_index: usize,
    pub row: usize,
    pub col: usize,
    pub mark: Mark,
    pub encodings: Vec<Encoding>,
    pub metrics: Vec<MetricRef>,
    pub group: Option<DimensionGroup>,
    /// Section domain of each metric, in metric order.
    pub scales: Vec<(MetricRef, Domain)>,
    pub title: String,
    pub editable: bool,
    pub category_limit: Option<usize>,
    pub data: Option<AggregateResult>,
    pub diagnostics: ChartDiagnostics,
}

impl ChartSpec {
    pub fn encoding(&self, channel: Channel) -> Option<&Encoding> {
        self.encodings.iter().find(|e| e.channel == channel)
    }

    /// Distinct non-metric fields, plus one if any metric is encoded.
    pub fn encoded_field_count(&self) -> usize {
        let mut fields: Vec<&str> = self.encodings.iter().filter_map(Encoding::field_name).collect();
        fields.sort_unstable();
        fields.dedup();
        fields.len() + usize::from(!self.metrics.is_empty())
    }

    /// Every column the chart reads, metrics first. `COUNT(*)` reads no column.
    pub fn referenced_columns(&self) -> Vec<&str> {
        let mut columns: Vec<&str> = self.metrics.iter().filter_map(MetricRef::field).collect();
        if let Some(group) = &self.group {
            columns.extend(group.fields());
        }
        let mut seen = Vec::with_capacity(columns.len());
        columns.retain(|c| {
            let fresh = !seen.contains(c);
            seen.push(*c);
            fresh
        });
        columns
    }

    /// Marks this chart could be switched to.
    pub fn compatible_marks(&self) -> Vec<Mark> {
        Mark::ALL
            .into_iter()
            .filter(|&m| mark_violation(self, m).is_none())
            .collect()
    }

    /// Attaches aggregated data, applying the category limit.
    pub fn with_data(mut self, mut data: AggregateResult) -> ChartSpec {
        self.diagnostics.dropped_rows = data.dropped_rows;
        if let Some(limit) = self.category_limit {
            if data.rows.len() > limit {
                // Descending by value, nulls last, ties by key.
                data.rows.sort_by(|a, b| {
                    let va = a.values.first().copied().flatten();
                    let vb = b.values.first().copied().flatten();
                    match (va, vb) {
                        (Some(x), Some(y)) => y.total_cmp(&x),
                        (Some(_), None) => std::cmp::Ordering::Less,
                        (None, Some(_)) => std::cmp::Ordering::Greater,
                        (None, None) => std::cmp::Ordering::Equal,
                    }
                    .then_with(|| a.keys.cmp(&b.keys))
                });
                self.diagnostics.dropped_categories = data.rows.len() - limit;
                data.rows.truncate(limit);
                if let Some(x) = self.encodings.iter_mut().find(|e| e.channel == Channel::X) {
                    x.sort_descending = true;
                }
            }
        }
        self.data = Some(data);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecommendError {
    #[error("no rule applies: {0}")]
    NoApplicableRule(String),
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("no resolved scale for {metric} in section {section}")]
    MissingScale { section: usize, metric: String },
    #[error("cannot change {from} to {to}: {reason}")]
    IncompatibleMark { from: Mark, to: Mark, reason: String },
    #[error("channel {channel} is assigned to both `{first}` and `{second}`")]
    ChannelConflict {
        channel: &'static str,
        first: String,
        second: String,
    },
}

/// Requested channel per field. Metrics always stay on y; requests for
/// dimension fields move them between x, color and column-facet.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PreferredAxis {
    assignments: BTreeMap<String, Channel>,
}

impl PreferredAxis {
    pub fn new() -> Self {
        PreferredAxis::default()
    }

    pub fn assign(&mut self, field: impl Into<String>, channel: Channel) -> Result<(), RecommendError> {
        let field = field.into();
        if let Some((other, _)) = self.assignments.iter().find(|(f, c)| **c == channel && **f != field) {
            return Err(RecommendError::ChannelConflict {
                channel: channel.name(),
                first: other.clone(),
                second: field,
            });
        }
        self.assignments.insert(field, channel);
        Ok(())
    }

    pub fn get(&self, field: &str) -> Option<Channel> {
        self.assignments.get(field).copied()
    }

    pub fn assignments(&self) -> impl Iterator<Item = (&str, Channel)> {
        self.assignments.iter().map(|(f, c)| (f.as_str(), *c))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Slot {
    Dim(String, ColumnType),
    MetricSeries,
}

/// Mark and channel roles chosen by the rule table.
#[derive(Debug, Clone, PartialEq)]
struct Plan {
    mark: Mark,
    x: Option<Slot>,
    color: Option<Slot>,
    facet: Option<Slot>,
}

impl Plan {
    fn slot_mut(&mut self, channel: Channel) -> Option<&mut Option<Slot>> {
        match channel {
            Channel::X => Some(&mut self.x),
            Channel::Color => Some(&mut self.color),
            Channel::ColumnFacet => Some(&mut self.facet),
            Channel::Y => None,
        }
    }

    fn channel_of(&self, field: &str) -> Option<Channel> {
        let holds = |slot: &Option<Slot>| matches!(slot, Some(Slot::Dim(f, _)) if f == field);
        if holds(&self.x) {
            Some(Channel::X)
        } else if holds(&self.color) {
            Some(Channel::Color)
        } else if holds(&self.facet) {
            Some(Channel::ColumnFacet)
        } else {
            None
        }
    }

    fn derive_mark(&mut self) {
        let temporal_x = matches!(self.x, Some(Slot::Dim(_, ColumnType::Temporal)));
        let series = self.color.is_some();
        self.mark = match (self.x.is_some(), temporal_x, series) {
            (false, _, _) => Mark::KpiCard,
            (true, true, false) => Mark::Line,
            (true, true, true) => Mark::MultiLine,
            (true, false, false) => Mark::Bar,
            (true, false, true) => Mark::GroupedBar,
        };
    }

    /// Moves dimension fields to their requested channels. x is never left empty.
    fn apply_preferences(&mut self, preferred: &PreferredAxis) {
        for (field, target) in preferred.assignments() {
            let Some(current) = self.channel_of(field) else {
                continue;
            };
            if current == target || target == Channel::Y {
                continue;
            }
            let target_slot = self.slot_mut(target).expect("target is not y").clone();
            match target_slot {
                Some(Slot::MetricSeries) => continue,
                None if current == Channel::X => continue,
                _ => {}
            }
            let moving = self.slot_mut(current).expect("current is not y").take();
            *self.slot_mut(current).expect("current is not y") = target_slot;
            *self.slot_mut(target).expect("target is not y") = moving;
        }
        self.derive_mark();
    }
}

fn dim(schema: &TableSchema, field: &str) -> Result<Slot, RecommendError> {
    let ty = schema
        .column_type(field)
        .ok_or_else(|| RecommendError::UnknownField(field.to_string()))?;
    if !ty.is_dimension() {
        return Err(RecommendError::NoApplicableRule(format!(
            "`{field}` is quantitative and cannot break down a metric"
        )));
    }
    Ok(Slot::Dim(field.to_string(), ty))
}

fn is_temporal(slot: &Slot) -> bool {
    matches!(slot, Slot::Dim(_, ColumnType::Temporal))
}

/// The rule table.
fn plan(intent: &ChartIntent, schema: &TableSchema) -> Result<Plan, RecommendError> {
    if intent.metrics.is_empty() {
        return Err(RecommendError::NoApplicableRule("intent has no metrics".into()));
    }
    let layered = intent.is_layered();
    let Some(group) = &intent.group else {
        return Ok(Plan {
            mark: Mark::KpiCard,
            x: None,
            color: None,
            facet: None,
        });
    };
    let primary = dim(schema, &group.primary)?;
    let secondary = group.secondary.as_deref().map(|f| dim(schema, f)).transpose()?;

    let mut plan = match (secondary, layered) {
        (None, false) => Plan {
            mark: Mark::Line,
            x: Some(primary),
            color: None,
            facet: None,
        },
        (None, true) => Plan {
            mark: Mark::Line,
            x: Some(primary),
            color: Some(Slot::MetricSeries),
            facet: None,
        },
        (Some(secondary), layered) => {
            // The temporal field takes x when exactly one of the two is temporal.
            let (x, other) = if !is_temporal(&primary) && is_temporal(&secondary) {
                (secondary, primary)
            } else {
                (primary, secondary)
            };
            if layered {
                Plan {
                    mark: Mark::Line,
                    x: Some(x),
                    color: Some(Slot::MetricSeries),
                    facet: Some(other),
                }
            } else {
                Plan {
                    mark: Mark::Line,
                    x: Some(x),
                    color: Some(other),
                    facet: None,
                }
            }
        }
    };
    plan.derive_mark();
    Ok(plan)
}

/// Mark the rule table picks for an intent, without scales or data.
pub fn predict_mark(intent: &ChartIntent, schema: &TableSchema) -> Result<Mark, RecommendError> {
    plan(intent, schema).map(|p| p.mark)
}

fn metric_labels(metrics: &[MetricRef]) -> String {
    metrics.iter().map(MetricRef::label).collect::<Vec<_>>().join(", ")
}

/// Chart title: `Sales (SUM) by Ship Date`.
pub fn chart_title(metrics: &[MetricRef], group: Option<&DimensionGroup>) -> String {
    match group {
        Some(group) => format!("{} by {}", metric_labels(metrics), group.label()),
        None => metric_labels(metrics),
    }
}

/// Recommends with metrics on y and no channel requests.
pub fn recommend(
    intent: &ChartIntent,
    schema: &TableSchema,
    scales: &ScaleResolution,
) -> Result<ChartSpec, RecommendError> {
    recommend_with_axis(intent, schema, scales, &PreferredAxis::default())
}

/// Applies the rule table to one intent. The returned chart carries no data;
/// see [`ChartSpec::with_data`].
pub fn recommend_with_axis(
    intent: &ChartIntent,
    schema: &TableSchema,
    scales: &ScaleResolution,
    preferred: &PreferredAxis,
) -> Result<ChartSpec, RecommendError> {
    let mut plan = plan(intent, schema)?;
    plan.apply_preferences(preferred);

    let metric_scales = intent
        .metrics
        .iter()
        .map(|m| {
            scales
                .domain(intent.section_index, m)
                .map(|d| (m.clone(), d))
                .ok_or_else(|| RecommendError::MissingScale {
                    section: intent.section_index,
                    metric: m.label(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let y_domain = metric_scales
        .iter()
        .map(|(_, d)| *d)
        .reduce(Domain::union)
        .expect("intent has at least one metric");

    let time_unit = auto_time_unit(schema, intent.group.as_ref());
    let slot_encoding = |channel: Channel, slot: &Slot| match slot {
        Slot::Dim(name, column_type) => {
            let unit = (*column_type == ColumnType::Temporal).then_some(time_unit).flatten();
            Encoding {
                channel,
                value: EncodedValue::Field {
                    name: name.clone(),
                    column_type: *column_type,
                },
                time_unit: unit,
                domain: None,
                sort_descending: false,
                title: match unit {
                    Some(unit) => format!("{name} ({})", unit.name()),
                    None => name.clone(),
                },
            }
        }
        Slot::MetricSeries => Encoding {
            channel,
            value: EncodedValue::MetricSeries(intent.metrics.clone()),
            time_unit: None,
            domain: None,
            sort_descending: false,
            title: "Metric".into(),
        },
    };

    let mut encodings = Vec::with_capacity(4);
    if let Some(x) = &plan.x {
        encodings.push(slot_encoding(Channel::X, x));
    }
    encodings.push(Encoding {
        channel: Channel::Y,
        value: EncodedValue::Metrics(intent.metrics.clone()),
        time_unit: None,
        domain: Some(y_domain),
        sort_descending: false,
        title: metric_labels(&intent.metrics),
    });
    if let Some(color) = &plan.color {
        encodings.push(slot_encoding(Channel::Color, color));
    }
    if let Some(facet) = &plan.facet {
        encodings.push(slot_encoding(Channel::ColumnFacet, facet));
    }

    let category_limit = (plan.mark == Mark::Bar && !intent.is_layered()).then_some(BAR_CATEGORY_LIMIT);

    Ok(ChartSpec {
        section_index: intent.section_index,
        row: intent.row_hint,
        col: intent.col_hint,
        mark: plan.mark,
        encodings,
        metrics: intent.metrics.clone(),
        group: intent.group.clone(),
        scales: metric_scales,
        title: chart_title(&intent.metrics, intent.group.as_ref()),
        editable: true,
        category_limit,
        data: None,
        diagnostics: ChartDiagnostics::default(),
    })
}

/// Why `mark` cannot display `chart`, or `None` when it can.
fn mark_violation(chart: &ChartSpec, mark: Mark) -> Option<String> {
    let x = chart.encoding(Channel::X);
    let temporal_x = x.is_some_and(Encoding::is_temporal);
    let series = chart.encoding(Channel::Color).is_some();
    match mark {
        Mark::KpiCard => x.map(|_| "kpi_card shows a single value and cannot break down by a dimension".to_string()),
        _ if x.is_none() => Some(format!("{mark} needs an x field but this chart has no dimension")),
        Mark::Line | Mark::MultiLine if !temporal_x => Some(format!("{mark} needs an ordered (temporal) x field")),
        Mark::Line if series => Some("line draws a single series; this chart has a color series".into()),
        Mark::MultiLine if !series => Some("multi_line needs a series field on color".into()),
        Mark::Bar if series => Some("bar draws a single series; this chart has a color series".into()),
        Mark::GroupedBar if !series => Some("grouped_bar needs a series field on color (no series field)".into()),
        _ => None,
    }
}

/// Changes the chart's mark, keeping its encodings. The input is left unchanged.
pub fn override_mark(chart: &ChartSpec, new_mark: Mark) -> Result<ChartSpec, RecommendError> {
    if let Some(reason) = mark_violation(chart, new_mark) {
        return Err(RecommendError::IncompatibleMark {
            from: chart.mark,
            to: new_mark,
            reason,
        });
    }
    let mut changed = chart.clone();
    changed.mark = new_mark;
    Ok(changed)
}
