use std::collections::BTreeSet;
use std::io::Read;

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use serde::Serialize;
use thiserror::Error;

use super::time::{format_timestamp, TimeUnit};

/// Share of non-null cells that must parse under a type for the column to get that type.
pub const INFERENCE_THRESHOLD_PERCENT: usize = 95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnType {
    Quantitative,
    Categorical,
    Temporal,
}

impl ColumnType {
    pub fn is_dimension(self) -> bool {
        matches!(self, ColumnType::Categorical | ColumnType::Temporal)
    }
}

/// Observed extent of a temporal column, in UTC milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeRange {
    pub min_ms: i64,
    pub max_ms: i64,
}

impl TimeRange {
    pub fn auto_unit(&self) -> TimeUnit {
        TimeUnit::for_span(self.min_ms, self.max_ms)
    }
}

impl Serialize for TimeRange {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut state = serializer.serialize_struct("TimeRange", 2)?;
        state.serialize_field("min", &format_timestamp(self.min_ms))?;
        state.serialize_field("max", &format_timestamp(self.max_ms))?;
        state.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ColumnSchema {
    pub name: String,
    #[serde(rename = "type")]
    pub column_type: ColumnType,
    pub cardinality: usize,
    pub null_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_range: Option<TimeRange>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TableSchema {
    pub columns: Vec<ColumnSchema>,
    pub row_count: usize,
}

impl TableSchema {
    pub fn column(&self, name: &str) -> Option<&ColumnSchema> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn column_type(&self, name: &str) -> Option<ColumnType> {
        self.column(name).map(|c| c.column_type)
    }

    /// Bin used for a temporal field when the recommender has no override.
    pub fn auto_time_unit(&self, name: &str) -> Option<TimeUnit> {
        let column = self.column(name)?;
        match column.column_type {
            // A temporal column with every cell null has no range; any unit works.
            ColumnType::Temporal => Some(column.time_range.map_or(TimeUnit::Day, |r| r.auto_unit())),
            _ => None,
        }
    }
}

/// Typed cell storage for one column. `None` marks a null.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Quantitative(Vec<Option<f64>>),
    Categorical(Vec<Option<String>>),
    Temporal(Vec<Option<i64>>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Quantitative(v) => v.len(),
            ColumnData::Categorical(v) => v.len(),
            ColumnData::Temporal(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column_type(&self) -> ColumnType {
        match self {
            ColumnData::Quantitative(_) => ColumnType::Quantitative,
            ColumnData::Categorical(_) => ColumnType::Categorical,
            ColumnData::Temporal(_) => ColumnType::Temporal,
        }
    }

    pub fn is_null(&self, row: usize) -> bool {
        match self {
            ColumnData::Quantitative(v) => v[row].is_none(),
            ColumnData::Categorical(v) => v[row].is_none(),
            ColumnData::Temporal(v) => v[row].is_none(),
        }
    }

    fn describe(&self, name: &str) -> ColumnSchema {
        let null_count = (0..self.len()).filter(|&i| self.is_null(i)).count();
        let (cardinality, time_range) = match self {
            ColumnData::Quantitative(v) => {
                let distinct: BTreeSet<u64> = v.iter().flatten().map(|x| canonical_bits(*x)).collect();
                (distinct.len(), None)
            }
            ColumnData::Categorical(v) => (v.iter().flatten().collect::<BTreeSet<_>>().len(), None),
            ColumnData::Temporal(v) => {
                let distinct: BTreeSet<i64> = v.iter().flatten().copied().collect();
                let range = match (distinct.first(), distinct.last()) {
                    (Some(&min_ms), Some(&max_ms)) => Some(TimeRange { min_ms, max_ms }),
                    _ => None,
                };
                (distinct.len(), range)
            }
        };
        ColumnSchema {
            name: name.to_string(),
            column_type: self.column_type(),
            cardinality,
            null_count,
            time_range,
        }
    }
}

// -0.0 and 0.0 are the same value for cardinality purposes.
fn canonical_bits(x: f64) -> u64 {
    if x == 0.0 {
        0.0f64.to_bits()
    } else {
        x.to_bits()
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("input contains no data rows")]
    EmptyInput,
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRows { line: u64, expected: usize, found: usize },
    #[error("duplicate column header `{0}`")]
    DuplicateHeader(String),
    #[error("column `{name}` has {found} cells but the table has {expected} rows")]
    ColumnLength {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            delimiter: b',',
            has_header: true,
        }
    }
}

/// Accepted date/time formats. A column is temporal when one pattern covers
/// enough of its cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemporalPattern {
    /// `2024-01-31`
    IsoDate,
    /// `2024-01-31T08:30:00`, optional fraction, optional `Z`/offset, `T` or space separator.
    IsoDateTime,
    /// `01/31/2024`
    UsDate,
}

impl TemporalPattern {
    pub const ALL: [TemporalPattern; 3] = [
        TemporalPattern::IsoDate,
        TemporalPattern::IsoDateTime,
        TemporalPattern::UsDate,
    ];

    /// Parses a trimmed cell to UTC milliseconds.
    pub fn parse(self, cell: &str) -> Option<i64> {
        match self {
            TemporalPattern::IsoDate => NaiveDate::parse_from_str(cell, "%Y-%m-%d").ok().and_then(date_millis),
            TemporalPattern::UsDate => {
                // chrono accepts single digit months and days here; require the padded form.
                if cell.len() != 10 {
                    return None;
                }
                NaiveDate::parse_from_str(cell, "%m/%d/%Y").ok().and_then(date_millis)
            }
            TemporalPattern::IsoDateTime => {
                if let Ok(ts) = DateTime::parse_from_rfc3339(cell) {
                    return Some(ts.timestamp_millis());
                }
                const NAIVE: [&str; 4] = [
                    "%Y-%m-%dT%H:%M:%S%.f",
                    "%Y-%m-%d %H:%M:%S%.f",
                    "%Y-%m-%dT%H:%M",
                    "%Y-%m-%d %H:%M",
                ];
                NAIVE
                    .iter()
                    .find_map(|fmt| NaiveDateTime::parse_from_str(cell, fmt).ok())
                    .map(|dt| dt.and_utc().timestamp_millis())
            }
        }
    }
}

fn date_millis(date: NaiveDate) -> Option<i64> {
    date.and_hms_opt(0, 0, 0).map(|dt| dt.and_utc().timestamp_millis())
}

/// Finite numbers only; `NaN` and `inf` spellings are not numbers here.
pub fn parse_number(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn meets_threshold(matches: usize, non_null: usize) -> bool {
    non_null > 0 && matches * 100 >= non_null * INFERENCE_THRESHOLD_PERCENT
}

/// Column type decided from raw cells, plus the temporal pattern when temporal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inference {
    pub column_type: ColumnType,
    pub pattern: Option<TemporalPattern>,
}

/// Temporal first, then quantitative, else categorical.
pub fn infer_column(cells: &[Option<String>]) -> Inference {
    let values: Vec<&str> = cells.iter().flatten().map(String::as_str).collect();
    let non_null = values.len();

    let best_pattern = TemporalPattern::ALL
        .iter()
        .map(|&p| (p, values.iter().filter(|v| p.parse(v).is_some()).count()))
        // max_by_key keeps the last maximum; list order breaks ties in favor of the first.
        .rev()
        .max_by_key(|&(_, n)| n);
    if let Some((pattern, matches)) = best_pattern {
        if meets_threshold(matches, non_null) {
            return Inference {
                column_type: ColumnType::Temporal,
                pattern: Some(pattern),
            };
        }
    }
    let numeric = values.iter().filter(|v| parse_number(v).is_some()).count();
    let column_type = if meets_threshold(numeric, non_null) {
        ColumnType::Quantitative
    } else {
        ColumnType::Categorical
    };
    Inference {
        column_type,
        pattern: None,
    }
}

/// Untyped cells as read from a delimited file, trimmed, with empty cells as `None`.
#[derive(Debug, Clone, Default)]
pub struct RawTable {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<Option<String>>>,
}

impl RawTable {
    pub fn row_count(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}

fn convert(cells: &[Option<String>], inference: Inference) -> ColumnData {
    match (inference.column_type, inference.pattern) {
        (ColumnType::Temporal, Some(pattern)) => ColumnData::Temporal(
            cells
                .iter()
                .map(|c| c.as_deref().and_then(|v| pattern.parse(v)))
                .collect(),
        ),
        (ColumnType::Quantitative, _) => {
            ColumnData::Quantitative(cells.iter().map(|c| c.as_deref().and_then(parse_number)).collect())
        }
        _ => ColumnData::Categorical(cells.to_vec()),
    }
}

/// Infers per-column types and statistics for raw cells.
pub fn infer_schema(raw: &RawTable) -> TableSchema {
    let columns = raw
        .headers
        .iter()
        .zip(&raw.columns)
        .map(|(name, cells)| convert(cells, infer_column(cells)).describe(name))
        .collect();
    TableSchema {
        columns,
        row_count: raw.row_count(),
    }
}

/// An immutable in-memory table with typed columns.
#[derive(Debug, Clone)]
pub struct DataTable {
    schema: TableSchema,
    columns: Vec<ColumnData>,
    warnings: Vec<String>,
}

impl DataTable {
    /// Builds a table from already typed columns.
    pub fn from_columns(columns: Vec<(String, ColumnData)>) -> Result<Self, LoadError> {
        let row_count = columns.first().map_or(0, |(_, c)| c.len());
        let mut seen = BTreeSet::new();
        for (name, data) in &columns {
            if !seen.insert(name.as_str()) {
                return Err(LoadError::DuplicateHeader(name.clone()));
            }
            if data.len() != row_count {
                return Err(LoadError::ColumnLength {
                    name: name.clone(),
                    expected: row_count,
                    found: data.len(),
                });
            }
        }
        let schema = TableSchema {
            columns: columns.iter().map(|(name, data)| data.describe(name)).collect(),
            row_count,
        };
        Ok(DataTable {
            schema,
            columns: columns.into_iter().map(|(_, data)| data).collect(),
            warnings: Vec::new(),
        })
    }

    /// Types raw cells; cells that do not parse under the inferred type become nulls.
    pub fn from_raw(raw: RawTable) -> Result<Self, LoadError> {
        if raw.row_count() == 0 {
            return Err(LoadError::EmptyInput);
        }
        let mut warnings = Vec::new();
        let columns = raw
            .headers
            .iter()
            .zip(&raw.columns)
            .map(|(name, cells)| {
                if cells.iter().all(Option::is_none) {
                    warnings.push(format!("column `{name}` is entirely null; treated as categorical"));
                }
                (name.clone(), convert(cells, infer_column(cells)))
            })
            .collect();
        let mut table = DataTable::from_columns(columns)?;
        table.warnings = warnings;
        Ok(table)
    }

    pub fn schema(&self) -> &TableSchema {
        &self.schema
    }

    pub fn row_count(&self) -> usize {
        self.schema.row_count
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn column(&self, name: &str) -> Option<&ColumnData> {
        let index = self.schema.columns.iter().position(|c| c.name == name)?;
        Some(&self.columns[index])
    }
}

/// Reads delimited text into a [`RawTable`] without typing it.
pub fn read_csv<R: Read>(source: R, options: CsvOptions) -> Result<RawTable, LoadError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(source);

    let mut records = reader.records();
    let first = match records.next() {
        Some(record) => record?,
        None => return Err(LoadError::EmptyInput),
    };
    let width = first.len();
    let clean = |cell: &str| {
        let cell = cell.trim();
        (!cell.is_empty()).then(|| cell.to_string())
    };

    let mut columns: Vec<Vec<Option<String>>> = vec![Vec::new(); width];
    let headers: Vec<String> = if options.has_header {
        first
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let h = if i == 0 { h.trim_start_matches('\u{feff}') } else { h };
                h.trim().to_string()
            })
            .collect()
    } else {
        for (column, cell) in columns.iter_mut().zip(first.iter()) {
            column.push(clean(cell));
        }
        (1..=width).map(|i| format!("column_{i}")).collect()
    };

    let mut seen = BTreeSet::new();
    for header in &headers {
        if !seen.insert(header.as_str()) {
            return Err(LoadError::DuplicateHeader(header.clone()));
        }
    }

    for record in records {
        let record = record?;
        if record.len() != width {
            return Err(LoadError::RaggedRows {
                line: record.position().map_or(0, |p| p.line()),
                expected: width,
                found: record.len(),
            });
        }
        for (column, cell) in columns.iter_mut().zip(record.iter()) {
            column.push(clean(cell));
        }
    }
    Ok(RawTable { headers, columns })
}

/// Loads and types a delimited file.
pub fn load_csv<R: Read>(source: R, options: CsvOptions) -> Result<DataTable, LoadError> {
    DataTable::from_raw(read_csv(source, options)?)
}
