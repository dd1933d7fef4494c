//! Tabular data: CSV loading, schema inference and grouped aggregation.

mod aggregate;
mod table;
mod time;

pub use aggregate::{aggregate, auto_time_unit, AggregateError, AggregateResult, AggregateRow, GroupKey};
pub use table::{
    infer_column, infer_schema, load_csv, parse_number, read_csv, ColumnData, ColumnSchema, ColumnType, CsvOptions,
    DataTable, Inference, LoadError, RawTable, TableSchema, TemporalPattern, TimeRange, INFERENCE_THRESHOLD_PERCENT,
};
pub use time::{format_timestamp, TimeUnit, DAY_BIN_MAX_SPAN_MS, HOUR_BIN_MAX_SPAN_MS, MONTH_BIN_MAX_SPAN_MS};
