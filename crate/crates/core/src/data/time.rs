use chrono::{DateTime, Datelike, Duration, NaiveDate, NaiveDateTime, TimeZone, Timelike, Utc};
use serde::Serialize;

/// Span thresholds for automatic temporal binning, in milliseconds.
pub const HOUR_BIN_MAX_SPAN_MS: i64 = 72 * 3_600_000;
pub const DAY_BIN_MAX_SPAN_MS: i64 = 120 * 86_400_000;
pub const MONTH_BIN_MAX_SPAN_MS: i64 = 740 * 86_400_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    Year,
    Month,
    Week,
    Day,
    Hour,
}

impl TimeUnit {
    pub const ALL: [TimeUnit; 5] = [
        TimeUnit::Year,
        TimeUnit::Month,
        TimeUnit::Week,
        TimeUnit::Day,
        TimeUnit::Hour,
    ];

    /// Picks the bin for a column whose values span `[min_ms, max_ms]`.
    pub fn for_span(min_ms: i64, max_ms: i64) -> Self {
        let span = max_ms.saturating_sub(min_ms);
        if span <= HOUR_BIN_MAX_SPAN_MS {
            TimeUnit::Hour
        } else if span <= DAY_BIN_MAX_SPAN_MS {
            TimeUnit::Day
        } else if span <= MONTH_BIN_MAX_SPAN_MS {
            TimeUnit::Month
        } else {
            TimeUnit::Year
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TimeUnit::Year => "year",
            TimeUnit::Month => "month",
            TimeUnit::Week => "week",
            TimeUnit::Day => "day",
            TimeUnit::Hour => "hour",
        }
    }

    /// Floors a UTC millisecond timestamp to the start of its bin. Weeks start on Monday.
    pub fn truncate(self, ms: i64) -> i64 {
        let Some(ts) = Utc.timestamp_millis_opt(ms).single() else {
            return ms;
        };
        let date = ts.date_naive();
        let floored: NaiveDateTime = match self {
            TimeUnit::Year => start_of_day(NaiveDate::from_ymd_opt(date.year(), 1, 1)),
            TimeUnit::Month => start_of_day(NaiveDate::from_ymd_opt(date.year(), date.month(), 1)),
            TimeUnit::Week => {
                let back = i64::from(date.weekday().num_days_from_monday());
                start_of_day(Some(date - Duration::days(back)))
            }
            TimeUnit::Day => start_of_day(Some(date)),
            TimeUnit::Hour => date.and_hms_opt(ts.hour(), 0, 0).expect("hour of a valid timestamp"),
        };
        floored.and_utc().timestamp_millis()
    }
}

fn start_of_day(date: Option<NaiveDate>) -> NaiveDateTime {
    date.and_then(|d| d.and_hms_opt(0, 0, 0))
        .expect("calendar arithmetic on a valid date")
}

/// ISO-8601 rendering at millisecond precision, e.g. `2024-03-01T00:00:00.000Z`.
pub fn format_timestamp(ms: i64) -> String {
    match DateTime::<Utc>::from_timestamp_millis(ms) {
        Some(ts) => ts.format("%Y-%m-%dT%H:%M:%S%.3fZ").to_string(),
        None => ms.to_string(),
    }
}
