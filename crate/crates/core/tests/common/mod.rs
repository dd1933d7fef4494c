//! Test-only generators and a naive aggregation oracle.
//!
//! The oracle deliberately shares nothing with the engine: it finds distinct
//! keys by linear scan, re-scans every row per key, bins timestamps through
//! calendar strings and sorts with its own comparator.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::path::PathBuf;

use chrono::{DateTime, Datelike, NaiveDate, Utc};
use quickdash_core::data::ColumnData;
use quickdash_core::{
    load_csv, Aggregation, CsvOptions, DashboardSpec, DataTable, DimensionGroup, MetricLayout, MetricRef, Section,
    TimeUnit,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn superstore() -> DataTable {
    load_csv(
        std::fs::File::open(fixture_path("superstore.csv")).unwrap(),
        CsvOptions::default(),
    )
    .unwrap()
}

pub const EXAMPLE_1: &str = r#"{
  "Sections": [{
    "Metrics": ["Sales (SUM)", "Shipping Cost (SUM)"],
    "DimensionGroups": [{"PrimaryField": "Ship Date"}, {"PrimaryField": "Region"}],
    "MetricLayout": "Repeat"
  }]
}"#;

pub const EXAMPLE_2: &str = r#"{
  "Sections": [{
    "Metrics": ["Sales (SUM)", "Shipping Cost (SUM)"],
    "DimensionGroups": [{"PrimaryField": "Ship Date"}, {"PrimaryField": "Ship Date", "SecondaryField": "Region"}],
    "MetricLayout": "Layer"
  }]
}"#;

pub const EXAMPLE_3: &str = r#"{
  "Sections": [{
    "Metrics": ["Sales (SUM)", "Shipping Cost (SUM)"],
    "DimensionGroups": [{"PrimaryField": "Ship Date"}, {"PrimaryField": "Ship Date", "SecondaryField": "Region"}],
    "MetricLayout": "Layer"
  },
  {
    "Metrics": ["Sales (SUM)", "Shipping Cost (SUM)"],
    "DimensionGroups": [{"PrimaryField": "Region"}, {"PrimaryField": "Region", "SecondaryField": "Category"}],
    "MetricLayout": "Repeat"
  }]
}"#;

// ---------------------------------------------------------------- oracle

#[derive(Debug, Clone, PartialEq)]
pub enum OracleKey {
    Text(String),
    Time(i64),
}

fn oracle_cmp(a: &[OracleKey], b: &[OracleKey]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = match (x, y) {
            (OracleKey::Text(p), OracleKey::Text(q)) => p.as_bytes().cmp(q.as_bytes()),
            (OracleKey::Time(p), OracleKey::Time(q)) => p.cmp(q),
            _ => panic!("mixed key types in one position"),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Bin start computed by formatting the calendar fields and parsing back.
pub fn oracle_bin(ms: i64, unit: TimeUnit) -> i64 {
    let ts = DateTime::<Utc>::from_timestamp_millis(ms).unwrap();
    let text = match unit {
        TimeUnit::Year => format!("{:04}-01-01 00", ts.year()),
        TimeUnit::Month => format!("{:04}-{:02}-01 00", ts.year(), ts.month()),
        TimeUnit::Day => ts.format("%Y-%m-%d 00").to_string(),
        TimeUnit::Hour => ts.format("%Y-%m-%d %H").to_string(),
        TimeUnit::Week => {
            let iso = ts.iso_week();
            NaiveDate::from_isoywd_opt(iso.year(), iso.week(), chrono::Weekday::Mon)
                .unwrap()
                .format("%Y-%m-%d 00")
                .to_string()
        }
    };
    let date = NaiveDate::parse_from_str(&text[..10], "%Y-%m-%d").unwrap();
    let hour: u32 = text[11..].parse().unwrap();
    date.and_hms_opt(hour, 0, 0).unwrap().and_utc().timestamp_millis()
}

fn oracle_key(column: &ColumnData, row: usize, unit: Option<TimeUnit>) -> Option<OracleKey> {
    match column {
        ColumnData::Categorical(v) => v[row].clone().map(OracleKey::Text),
        ColumnData::Temporal(v) => v[row].map(|ms| OracleKey::Time(oracle_bin(ms, unit.unwrap()))),
        ColumnData::Quantitative(_) => panic!("oracle groups only by dimensions"),
    }
}

fn oracle_value(column: Option<&ColumnData>, agg: Aggregation, rows: &[usize]) -> Option<f64> {
    let numbers = || -> Vec<f64> {
        match column {
            Some(ColumnData::Quantitative(v)) => rows.iter().filter_map(|&r| v[r]).collect(),
            _ => panic!("numeric aggregation over non-numeric column"),
        }
    };
    match agg {
        Aggregation::CountStar => Some(rows.len() as f64),
        Aggregation::Count => {
            let column = column.unwrap();
            let present = rows
                .iter()
                .filter(|&&r| match column {
                    ColumnData::Quantitative(v) => v[r].is_some(),
                    ColumnData::Categorical(v) => v[r].is_some(),
                    ColumnData::Temporal(v) => v[r].is_some(),
                })
                .count();
            Some(present as f64)
        }
        Aggregation::Sum => Some(numbers().iter().sum()),
        Aggregation::Mean => {
            let n = numbers();
            if n.is_empty() {
                None
            } else {
                Some(n.iter().sum::<f64>() / n.len() as f64)
            }
        }
        Aggregation::Min => {
            let n = numbers();
            let mut best: Option<f64> = None;
            for x in n {
                if best.is_none_or(|b| x < b) {
                    best = Some(x);
                }
            }
            best
        }
        Aggregation::Max => {
            let n = numbers();
            let mut best: Option<f64> = None;
            for x in n {
                if best.is_none_or(|b| x > b) {
                    best = Some(x);
                }
            }
            best
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub keys: Vec<OracleKey>,
    pub values: Vec<Option<f64>>,
}

/// Naive nested-loop group-by over named columns.
pub fn oracle_aggregate(
    columns: &[(String, ColumnData)],
    row_count: usize,
    metrics: &[MetricRef],
    group: Option<&DimensionGroup>,
    unit: Option<TimeUnit>,
) -> (Vec<OracleRow>, usize) {
    let find = |name: &str| columns.iter().find(|(n, _)| n == name).map(|(_, c)| c);
    let group_columns: Vec<&ColumnData> = group
        .map(|g| g.fields().map(|f| find(f).unwrap()).collect())
        .unwrap_or_default();

    let row_keys: Vec<Option<Vec<OracleKey>>> = (0..row_count)
        .map(|row| group_columns.iter().map(|c| oracle_key(c, row, unit)).collect())
        .collect();
    let mut distinct: Vec<Vec<OracleKey>> = Vec::new();
    let mut dropped = 0;
    for key in &row_keys {
        match key {
            Some(key) => {
                if !distinct.iter().any(|k| k == key) {
                    distinct.push(key.clone());
                }
            }
            None => dropped += 1,
        }
    }
    if group_columns.is_empty() && distinct.is_empty() {
        distinct.push(Vec::new());
    }
    distinct.sort_by(|a, b| oracle_cmp(a, b));

    let rows = distinct
        .into_iter()
        .map(|key| {
            let members: Vec<usize> = (0..row_count)
                .filter(|&row| row_keys[row].as_ref() == Some(&key))
                .collect();
            let values = metrics
                .iter()
                .map(|m| oracle_value(m.field().and_then(find), m.aggregation(), &members))
                .collect();
            OracleRow { keys: key, values }
        })
        .collect();
    (rows, dropped)
}

/// Relative comparison; exact when `tol` is zero.
pub fn close(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => {
            if tol == 0.0 {
                x == y
            } else {
                (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
            }
        }
        _ => false,
    }
}

// ---------------------------------------------------------------- generators

const WORDS: [&str; 12] = [
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india", "juliet", "kilo", "lima",
];

/// A random typed table: always one quantitative and one categorical column,
/// plus up to three more of any type.
pub fn random_table<R: Rng>(rng: &mut R, max_rows: usize) -> (Vec<(String, ColumnData)>, usize) {
    let rows = rng.gen_range(0..=max_rows);
    let extra = rng.gen_range(0..=3);
    let mut types = vec![0u8, 1u8];
    for _ in 0..extra {
        types.push(rng.gen_range(0..3));
    }
    let null_rate = rng.gen_range(0.0..0.2);
    let cardinality = rng.gen_range(1..=WORDS.len());
    let base = 1_600_000_000_000i64;
    let span = *[3_600_000i64 * 48, 86_400_000 * 90, 86_400_000 * 600, 86_400_000 * 3000]
        .choose(rng)
        .unwrap();

    let columns = types
        .iter()
        .enumerate()
        .map(|(i, ty)| {
            let name = format!("c{i}");
            let data = match ty {
                0 => ColumnData::Quantitative(
                    (0..rows)
                        .map(|_| {
                            (!rng.gen_bool(null_rate)).then(|| {
                                if rng.gen_bool(0.3) {
                                    rng.gen_range(-50i32..50) as f64
                                } else {
                                    rng.gen_range(-1.0e4..1.0e6)
                                }
                            })
                        })
                        .collect(),
                ),
                1 => ColumnData::Categorical(
                    (0..rows)
                        .map(|_| (!rng.gen_bool(null_rate)).then(|| WORDS[rng.gen_range(0..cardinality)].to_string()))
                        .collect(),
                ),
                _ => ColumnData::Temporal(
                    (0..rows)
                        .map(|_| (!rng.gen_bool(null_rate)).then(|| base + rng.gen_range(0..=span)))
                        .collect(),
                ),
            };
            (name, data)
        })
        .collect();
    (columns, rows)
}

pub fn quantitative_fields(columns: &[(String, ColumnData)]) -> Vec<String> {
    columns
        .iter()
        .filter(|(_, c)| matches!(c, ColumnData::Quantitative(_)))
        .map(|(n, _)| n.clone())
        .collect()
}

pub fn dimension_fields(columns: &[(String, ColumnData)]) -> Vec<String> {
    columns
        .iter()
        .filter(|(_, c)| !matches!(c, ColumnData::Quantitative(_)))
        .map(|(n, _)| n.clone())
        .collect()
}

pub fn random_metric<R: Rng>(rng: &mut R, quantitative: &[String], all: &[String]) -> MetricRef {
    match rng.gen_range(0..10) {
        0 => MetricRef::count_star(),
        1 => MetricRef::new(all.choose(rng).unwrap().clone(), Aggregation::Count).unwrap(),
        _ => {
            let agg = *[
                Aggregation::Sum,
                Aggregation::Mean,
                Aggregation::Min,
                Aggregation::Max,
                Aggregation::Count,
            ]
            .choose(rng)
            .unwrap();
            MetricRef::new(quantitative.choose(rng).unwrap().clone(), agg).unwrap()
        }
    }
}

pub fn random_group<R: Rng>(rng: &mut R, dimensions: &[String]) -> DimensionGroup {
    let primary = dimensions.choose(rng).unwrap().clone();
    let others: Vec<&String> = dimensions.iter().filter(|d| **d != primary).collect();
    if !others.is_empty() && rng.gen_bool(0.4) {
        DimensionGroup::pair(primary, (*others.choose(rng).unwrap()).clone())
    } else {
        DimensionGroup::single(primary)
    }
}

/// A spec that validates against a schema with the given fields.
pub fn random_valid_spec<R: Rng>(rng: &mut R, quantitative: &[String], dimensions: &[String]) -> DashboardSpec {
    let all: Vec<String> = quantitative.iter().chain(dimensions).cloned().collect();
    let sections = (0..rng.gen_range(1..=3))
        .map(|i| {
            let mut metrics: Vec<MetricRef> = Vec::new();
            for _ in 0..rng.gen_range(0..=3) {
                let m = random_metric(rng, quantitative, &all);
                if !metrics.contains(&m) {
                    metrics.push(m);
                }
            }
            let dimension_groups = (0..rng.gen_range(0..=3))
                .map(|_| random_group(rng, dimensions))
                .collect();
            let metric_layout = match rng.gen_range(0..3) {
                0 => None,
                1 => Some(MetricLayout::Layer),
                _ => Some(MetricLayout::Repeat),
            };
            Section {
                metrics,
                dimension_groups,
                metric_layout,
                title: rng.gen_bool(0.2).then(|| format!("Section {i}")),
            }
        })
        .collect();
    DashboardSpec {
        sections,
        title: rng.gen_bool(0.3).then(|| "Random".to_string()),
    }
}

pub fn superstore_quantitative() -> Vec<String> {
    vec!["Sales".into(), "Shipping Cost".into()]
}

pub fn superstore_dimensions() -> Vec<String> {
    vec!["Ship Date".into(), "Region".into(), "Category".into()]
}
