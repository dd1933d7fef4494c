//! Dashboard specification types and the external JSON document form.
//!
//! A dashboard is an ordered list of sections. Each section crosses its
//! metrics with its dimension groups; how the metrics are combined is
//! controlled by [`MetricLayout`].
//!
//! Documents look like:
//!
//! ```json
//! {
//!   "Sections": [{
//!     "Metrics": ["Sales (SUM)", {"field": "Shipping Cost", "agg": "SUM"}],
//!     "DimensionGroups": [{"PrimaryField": "Ship Date"}, {"PrimaryField": "Region"}],
//!     "MetricLayout": "Repeat"
//!   }]
//! }
//! ```

use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};
use thiserror::Error;

/// Token used for the row-count metric in documents.
pub const COUNT_STAR_TOKEN: &str = "COUNT(*)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Aggregation {
    Sum,
    Mean,
    Min,
    Max,
    Count,
    CountStar,
}

impl Aggregation {
    pub const ALL: [Aggregation; 6] = [
        Aggregation::Sum,
        Aggregation::Mean,
        Aggregation::Min,
        Aggregation::Max,
        Aggregation::Count,
        Aggregation::CountStar,
    ];

    /// Parses a document token. `COUNT_STAR` is accepted as an alias of `COUNT(*)`.
    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "SUM" => Some(Aggregation::Sum),
            "MEAN" => Some(Aggregation::Mean),
            "MIN" => Some(Aggregation::Min),
            "MAX" => Some(Aggregation::Max),
            "COUNT" => Some(Aggregation::Count),
            COUNT_STAR_TOKEN | "COUNT_STAR" => Some(Aggregation::CountStar),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Aggregation::Sum => "SUM",
            Aggregation::Mean => "MEAN",
            Aggregation::Min => "MIN",
            Aggregation::Max => "MAX",
            Aggregation::Count => "COUNT",
            Aggregation::CountStar => COUNT_STAR_TOKEN,
        }
    }

    /// SUM, MEAN, MIN and MAX only make sense over numbers.
    pub fn requires_quantitative(self) -> bool {
        matches!(
            self,
            Aggregation::Sum | Aggregation::Mean | Aggregation::Min | Aggregation::Max
        )
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A field paired with its preferred aggregation, or the row count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetricRef {
    field: Option<String>,
    aggregation: Aggregation,
}

impl MetricRef {
    /// Builds a column metric. Returns `None` for `CountStar`, which carries no column.
    pub fn new(field: impl Into<String>, aggregation: Aggregation) -> Option<Self> {
        if aggregation == Aggregation::CountStar {
            return None;
        }
        Some(MetricRef {
            field: Some(field.into()),
            aggregation,
        })
    }

    pub fn count_star() -> Self {
        MetricRef {
            field: None,
            aggregation: Aggregation::CountStar,
        }
    }

    pub fn field(&self) -> Option<&str> {
        self.field.as_deref()
    }

    pub fn aggregation(&self) -> Aggregation {
        self.aggregation
    }

    /// Display label, also the compact document form: `Sales (SUM)` or `COUNT(*)`.
    pub fn label(&self) -> String {
        match &self.field {
            Some(field) => format!("{} ({})", field, self.aggregation),
            None => COUNT_STAR_TOKEN.to_string(),
        }
    }

    /// Whether the compact string form parses back to this exact metric.
    fn compact_round_trips(&self) -> bool {
        parse_compact_metric(&self.label()).ok().as_ref() == Some(self)
    }
}

impl fmt::Display for MetricRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for MetricRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.compact_round_trips() {
            return serializer.serialize_str(&self.label());
        }
        let mut map = serializer.serialize_map(Some(2))?;
        if let Some(field) = &self.field {
            map.serialize_entry("field", field)?;
        }
        map.serialize_entry("agg", self.aggregation.token())?;
        map.end()
    }
}

/// One or two dimensions broken out on the same chart.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimensionGroup {
    pub primary: String,
    pub secondary: Option<String>,
}

impl DimensionGroup {
    pub fn single(primary: impl Into<String>) -> Self {
        DimensionGroup {
            primary: primary.into(),
            secondary: None,
        }
    }

    pub fn pair(primary: impl Into<String>, secondary: impl Into<String>) -> Self {
        DimensionGroup {
            primary: primary.into(),
            secondary: Some(secondary.into()),
        }
    }

    pub fn fields(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.primary.as_str()).chain(self.secondary.as_deref())
    }

    pub fn len(&self) -> usize {
        1 + usize::from(self.secondary.is_some())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self) -> String {
        match &self.secondary {
            Some(secondary) => format!("{} + {}", self.primary, secondary),
            None => self.primary.clone(),
        }
    }
}

impl Serialize for DimensionGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.len()))?;
        map.serialize_entry("PrimaryField", &self.primary)?;
        if let Some(secondary) = &self.secondary {
            map.serialize_entry("SecondaryField", secondary)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MetricLayout {
    Layer,
    #[default]
    Repeat,
}

impl MetricLayout {
    pub fn token(self) -> &'static str {
        match self {
            MetricLayout::Layer => "Layer",
            MetricLayout::Repeat => "Repeat",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Section {
    pub metrics: Vec<MetricRef>,
    pub dimension_groups: Vec<DimensionGroup>,
    /// `None` when the author left it out; [`Section::layout`] applies the default.
    pub metric_layout: Option<MetricLayout>,
    pub title: Option<String>,
}

impl Section {
    pub fn layout(&self) -> MetricLayout {
        self.metric_layout.unwrap_or_default()
    }
}

impl Serialize for Section {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("Section", 4)?;
        state.serialize_field("Metrics", &self.metrics)?;
        state.serialize_field("DimensionGroups", &self.dimension_groups)?;
        match self.metric_layout {
            Some(layout) => state.serialize_field("MetricLayout", layout.token())?,
            None => state.skip_field("MetricLayout")?,
        }
        match &self.title {
            Some(title) => state.serialize_field("Title", title)?,
            None => state.skip_field("Title")?,
        }
        state.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DashboardSpec {
    pub sections: Vec<Section>,
    pub title: Option<String>,
}

impl DashboardSpec {
    /// Serializes to the external document form; `parse_spec` reads it back unchanged.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization is infallible")
    }
}

impl Serialize for DashboardSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("Dashboard", 2)?;
        match &self.title {
            Some(title) => state.serialize_field("Title", title)?,
            None => state.skip_field("Title")?,
        }
        state.serialize_field("Sections", &self.sections)?;
        state.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: unknown key `{key}`")]
    UnknownKey { path: String, key: String },
    #[error("{path}: unknown aggregation `{token}` (expected SUM, MEAN, MIN, MAX, COUNT or COUNT(*))")]
    UnknownAggregation { path: String, token: String },
    #[error("{path}: missing required key `{key}`")]
    MissingKey { path: String, key: String },
    #[error("{path}: dimension group has {size} fields, at most 2 are allowed")]
    GroupTooLarge { path: String, size: usize },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "Syntax",
            ParseError::UnknownKey { .. } => "UnknownKey",
            ParseError::UnknownAggregation { .. } => "UnknownAggregation",
            ParseError::MissingKey { .. } => "MissingKey",
            ParseError::GroupTooLarge { .. } => "GroupTooLarge",
            ParseError::Invalid { .. } => "Invalid",
        }
    }

    pub fn path(&self) -> &str {
        match self {
            ParseError::Syntax { .. } => ROOT_PATH,
            ParseError::UnknownKey { path, .. }
            | ParseError::UnknownAggregation { path, .. }
            | ParseError::MissingKey { path, .. }
            | ParseError::GroupTooLarge { path, .. }
            | ParseError::Invalid { path, .. } => path,
        }
    }
}

/// Path of the document root in error reports.
pub const ROOT_PATH: &str = "$";

fn join_key(path: &str, key: &str) -> String {
    if path == ROOT_PATH {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn join_index(path: &str, index: usize) -> String {
    format!("{path}[{index}]")
}

/// Resolves a report path such as `Sections[0].Metrics[1]` against a document.
pub fn lookup_path<'a>(doc: &'a Value, path: &str) -> Option<&'a Value> {
    if path == ROOT_PATH {
        return Some(doc);
    }
    let mut node = doc;
    for segment in path.split('.') {
        let (key, rest) = match segment.find('[') {
            Some(pos) => segment.split_at(pos),
            None => (segment, ""),
        };
        node = node.as_object()?.get(key)?;
        let mut rest = rest;
        while let Some(stripped) = rest.strip_prefix('[') {
            let end = stripped.find(']')?;
            let index: usize = stripped[..end].parse().ok()?;
            node = node.as_array()?.get(index)?;
            rest = &stripped[end + 1..];
        }
        if !rest.is_empty() {
            return None;
        }
    }
    Some(node)
}

fn compact_metric_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^(?s)(.*\S)\s*\(([^()]*)\)$").expect("valid regex"))
}

#[derive(Debug, PartialEq)]
enum CompactMetricError {
    Malformed,
    UnknownAggregation(String),
    CountStarWithField,
}

/// Parses `Field (AGG)` or the bare `COUNT(*)`.
fn parse_compact_metric(text: &str) -> Result<MetricRef, CompactMetricError> {
    if text.trim() == COUNT_STAR_TOKEN {
        return Ok(MetricRef::count_star());
    }
    let caps = compact_metric_regex()
        .captures(text)
        .ok_or(CompactMetricError::Malformed)?;
    let field = &caps[1];
    let token = caps[2].trim();
    // "Sales (COUNT(*))" nests parentheses and never matches the regex; the
    // only way to mention COUNT(*) with a field is the alias spelling.
    let aggregation =
        Aggregation::from_token(token).ok_or_else(|| CompactMetricError::UnknownAggregation(token.to_string()))?;
    MetricRef::new(field, aggregation).ok_or(CompactMetricError::CountStarWithField)
}

fn check_keys(map: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), ParseError> {
    // serde_json maps iterate in key order, so the reported key is deterministic.
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(key) => Err(ParseError::UnknownKey {
            path: path.to_string(),
            key: key.clone(),
        }),
        None => Ok(()),
    }
}

fn expect_object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>, ParseError> {
    value.as_object().ok_or_else(|| ParseError::Invalid {
        path: path.to_string(),
        message: "expected an object".into(),
    })
}

fn expect_array<'a>(value: &'a Value, path: &str) -> Result<&'a Vec<Value>, ParseError> {
    value.as_array().ok_or_else(|| ParseError::Invalid {
        path: path.to_string(),
        message: "expected an array".into(),
    })
}

fn expect_string(value: &Value, path: &str) -> Result<String, ParseError> {
    value.as_str().map(str::to_string).ok_or_else(|| ParseError::Invalid {
        path: path.to_string(),
        message: "expected a string".into(),
    })
}

fn required<'a>(map: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, ParseError> {
    map.get(key).ok_or_else(|| ParseError::MissingKey {
        path: path.to_string(),
        key: key.to_string(),
    })
}

fn parse_metric(value: &Value, path: &str) -> Result<MetricRef, ParseError> {
    match value {
        Value::String(text) => parse_compact_metric(text).map_err(|err| match err {
            CompactMetricError::UnknownAggregation(token) => ParseError::UnknownAggregation {
                path: path.to_string(),
                token,
            },
            CompactMetricError::Malformed => ParseError::Invalid {
                path: path.to_string(),
                message: format!("metric `{text}` is not of the form `Field (AGG)` or `COUNT(*)`"),
            },
            CompactMetricError::CountStarWithField => ParseError::Invalid {
                path: path.to_string(),
                message: "COUNT(*) does not take a field".into(),
            },
        }),
        Value::Object(map) => {
            check_keys(map, path, &["field", "agg"])?;
            let agg_path = join_key(path, "agg");
            let token = expect_string(required(map, path, "agg")?, &agg_path)?;
            let aggregation = Aggregation::from_token(&token).ok_or_else(|| ParseError::UnknownAggregation {
                path: agg_path,
                token: token.clone(),
            })?;
            let field = map
                .get("field")
                .map(|v| expect_string(v, &join_key(path, "field")))
                .transpose()?;
            match (field, aggregation) {
                (None, Aggregation::CountStar) => Ok(MetricRef::count_star()),
                (Some(_), Aggregation::CountStar) => Err(ParseError::Invalid {
                    path: path.to_string(),
                    message: "COUNT(*) does not take a field".into(),
                }),
                (Some(field), aggregation) => {
                    Ok(MetricRef::new(field, aggregation).expect("non COUNT(*) aggregation always takes a field"))
                }
                (None, _) => Err(ParseError::MissingKey {
                    path: path.to_string(),
                    key: "field".into(),
                }),
            }
        }
        _ => Err(ParseError::Invalid {
            path: path.to_string(),
            message: "metric must be a string or an object".into(),
        }),
    }
}

fn parse_group(value: &Value, path: &str) -> Result<DimensionGroup, ParseError> {
    match value {
        Value::Object(map) => {
            check_keys(map, path, &["PrimaryField", "SecondaryField"])?;
            let primary = expect_string(required(map, path, "PrimaryField")?, &join_key(path, "PrimaryField"))?;
            let secondary = match map.get("SecondaryField") {
                None | Some(Value::Null) => None,
                Some(v) => Some(expect_string(v, &join_key(path, "SecondaryField"))?),
            };
            Ok(DimensionGroup { primary, secondary })
        }
        // Shorthand accepted from tooling: ["Ship Date", "Region"].
        Value::Array(items) => {
            if items.len() > 2 {
                return Err(ParseError::GroupTooLarge {
                    path: path.to_string(),
                    size: items.len(),
                });
            }
            let mut fields = items
                .iter()
                .enumerate()
                .map(|(i, v)| expect_string(v, &join_index(path, i)));
            let primary = fields.next().transpose()?.ok_or_else(|| ParseError::Invalid {
                path: path.to_string(),
                message: "dimension group needs at least one field".into(),
            })?;
            let secondary = fields.next().transpose()?;
            Ok(DimensionGroup { primary, secondary })
        }
        _ => Err(ParseError::Invalid {
            path: path.to_string(),
            message: "dimension group must be an object or an array of field names".into(),
        }),
    }
}

fn parse_section(value: &Value, path: &str) -> Result<Section, ParseError> {
    let map = expect_object(value, path)?;
    check_keys(map, path, &["Metrics", "DimensionGroups", "MetricLayout", "Title"])?;

    let metrics_path = join_key(path, "Metrics");
    let metrics = expect_array(required(map, path, "Metrics")?, &metrics_path)?
        .iter()
        .enumerate()
        .map(|(i, v)| parse_metric(v, &join_index(&metrics_path, i)))
        .collect::<Result<Vec<_>, _>>()?;

    let groups_path = join_key(path, "DimensionGroups");
    let dimension_groups = expect_array(required(map, path, "DimensionGroups")?, &groups_path)?
        .iter()
        .enumerate()
        .map(|(i, v)| parse_group(v, &join_index(&groups_path, i)))
        .collect::<Result<Vec<_>, _>>()?;

    let layout_path = join_key(path, "MetricLayout");
    let metric_layout = match map.get("MetricLayout") {
        None | Some(Value::Null) => None,
        Some(v) => match expect_string(v, &layout_path)?.as_str() {
            "Layer" => Some(MetricLayout::Layer),
            "Repeat" => Some(MetricLayout::Repeat),
            other => {
                return Err(ParseError::Invalid {
                    path: layout_path,
                    message: format!("MetricLayout must be \"Layer\" or \"Repeat\", got \"{other}\""),
                })
            }
        },
    };

    let title = map
        .get("Title")
        .map(|v| expect_string(v, &join_key(path, "Title")))
        .transpose()?;

    Ok(Section {
        metrics,
        dimension_groups,
        metric_layout,
        title,
    })
}

/// Parses a spec document from an already decoded JSON value.
pub fn parse_spec_value(doc: &Value) -> Result<DashboardSpec, ParseError> {
    let map = expect_object(doc, ROOT_PATH)?;
    check_keys(map, ROOT_PATH, &["Sections", "Title"])?;
    let sections = expect_array(required(map, ROOT_PATH, "Sections")?, "Sections")?
        .iter()
        .enumerate()
        .map(|(i, v)| parse_section(v, &join_index("Sections", i)))
        .collect::<Result<Vec<_>, _>>()?;
    let title = map.get("Title").map(|v| expect_string(v, "Title")).transpose()?;
    Ok(DashboardSpec { sections, title })
}

/// Parses a UTF-8 spec document.
///
/// An empty `Sections` array parses; it is rejected later by validation so
/// that previews can still report it alongside other problems.
pub fn parse_spec(text: &str) -> Result<DashboardSpec, ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|err| ParseError::Syntax {
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    })?;
    parse_spec_value(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_1: &str = r#"{
        "Sections": [{
            "Metrics": ["Sales (SUM)", "Shipping Cost (SUM)"],
            "DimensionGroups": [{"PrimaryField": "Ship Date"}, {"PrimaryField": "Region"}],
            "MetricLayout": "Repeat"
        }]
    }"#;

    #[test]
    fn parses_example_one() {
        let spec = parse_spec(EXAMPLE_1).unwrap();
        assert_eq!(spec.sections.len(), 1);
        let section = &spec.sections[0];
        assert_eq!(
            section.metrics,
            vec![
                MetricRef::new("Sales", Aggregation::Sum).unwrap(),
                MetricRef::new("Shipping Cost", Aggregation::Sum).unwrap(),
            ]
        );
        assert_eq!(
            section.dimension_groups,
            vec![DimensionGroup::single("Ship Date"), DimensionGroup::single("Region")]
        );
        assert_eq!(section.metric_layout, Some(MetricLayout::Repeat));
    }

    #[test]
    fn empty_sections_parse() {
        let spec = parse_spec(r#"{"Sections": []}"#).unwrap();
        assert!(spec.sections.is_empty());
    }

    #[test]
    fn unknown_aggregation() {
        let doc = r#"{"Sections": [{"Metrics": ["Sales (MEDIAN)"], "DimensionGroups": []}]}"#;
        assert_eq!(
            parse_spec(doc).unwrap_err(),
            ParseError::UnknownAggregation {
                path: "Sections[0].Metrics[0]".into(),
                token: "MEDIAN".into()
            }
        );
        let doc = r#"{"Sections": [{"Metrics": [{"field": "Sales", "agg": "P99"}], "DimensionGroups": []}]}"#;
        assert_eq!(parse_spec(doc).unwrap_err().code(), "UnknownAggregation");
    }

    #[test]
    fn unknown_keys_rejected() {
        let doc = r#"{"Sections": [{"Metrics": [], "DimensionGroups": [], "Colour": "red"}]}"#;
        assert_eq!(
            parse_spec(doc).unwrap_err(),
            ParseError::UnknownKey {
                path: "Sections[0]".into(),
                key: "Colour".into()
            }
        );
        let doc =
            r#"{"Sections": [{"Metrics": [], "DimensionGroups": [{"PrimaryField": "A", "TertiaryField": "B"}]}]}"#;
        assert_eq!(parse_spec(doc).unwrap_err().code(), "UnknownKey");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_spec("{\n  \"Sections\": [,]\n}").unwrap_err();
        match err {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn record_and_compact_forms_agree() {
        let doc = r#"{"Sections": [{"Metrics": [{"field": "Sales", "agg": "SUM"}, {"agg": "COUNT(*)"}, "COUNT(*)"], "DimensionGroups": []}]}"#;
        let spec = parse_spec(doc).unwrap();
        assert_eq!(
            spec.sections[0].metrics,
            vec![
                MetricRef::new("Sales", Aggregation::Sum).unwrap(),
                MetricRef::count_star(),
                MetricRef::count_star()
            ]
        );
    }

    #[test]
    fn count_star_rejects_field() {
        let doc = r#"{"Sections": [{"Metrics": [{"field": "Sales", "agg": "COUNT(*)"}], "DimensionGroups": []}]}"#;
        assert_eq!(parse_spec(doc).unwrap_err().code(), "Invalid");
    }

    #[test]
    fn field_names_with_parentheses() {
        let metric = parse_compact_metric("Profit (USD) (MAX)").unwrap();
        assert_eq!(metric.field(), Some("Profit (USD)"));
        assert_eq!(metric.aggregation(), Aggregation::Max);
        assert_eq!(parse_compact_metric("Sales"), Err(CompactMetricError::Malformed));
    }

    #[test]
    fn array_group_shorthand() {
        let doc = r#"{"Sections": [{"Metrics": [], "DimensionGroups": [["Ship Date", "Region"]]}]}"#;
        let spec = parse_spec(doc).unwrap();
        assert_eq!(
            spec.sections[0].dimension_groups[0],
            DimensionGroup::pair("Ship Date", "Region")
        );

        let doc = r#"{"Sections": [{"Metrics": [], "DimensionGroups": [["A", "B", "C"]]}]}"#;
        assert_eq!(
            parse_spec(doc).unwrap_err(),
            ParseError::GroupTooLarge {
                path: "Sections[0].DimensionGroups[0]".into(),
                size: 3
            }
        );
    }

    #[test]
    fn awkward_field_names_serialize_as_records() {
        let metric = MetricRef::new(" padded ", Aggregation::Sum).unwrap();
        let json = serde_json::to_value(&metric).unwrap();
        assert_eq!(json, serde_json::json!({"field": " padded ", "agg": "SUM"}));
        let spec = DashboardSpec {
            sections: vec![Section {
                metrics: vec![metric],
                ..Section::default()
            }],
            title: None,
        };
        assert_eq!(parse_spec(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn lookup_resolves_paths() {
        let doc: Value = serde_json::from_str(EXAMPLE_1).unwrap();
        assert_eq!(
            lookup_path(&doc, "Sections[0].Metrics[1]"),
            Some(&Value::String("Shipping Cost (SUM)".into()))
        );
        assert!(lookup_path(&doc, "Sections[0].DimensionGroups[1].PrimaryField").is_some());
        assert!(lookup_path(&doc, "Sections[3]").is_none());
        assert_eq!(lookup_path(&doc, ROOT_PATH), Some(&doc));
    }
}
