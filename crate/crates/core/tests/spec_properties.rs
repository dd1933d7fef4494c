mod common;

use common::*;
use proptest::prelude::*;
use quickdash_core::model::lookup_path;
use quickdash_core::validate::DiagnosticCode;
use quickdash_core::{
    parse_spec, validate_spec, Aggregation, DashboardSpec, DimensionGroup, MetricLayout, MetricRef, Section,
    TableSchema,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNKNOWN: &str = "No Such Column";

/// Any spec over a pool that mixes good fields, wrong-typed fields and an
/// unknown field. Metric lists may repeat entries.
fn random_any_spec(rng: &mut ChaCha8Rng) -> DashboardSpec {
    let pool = [
        "Sales",
        "Shipping Cost",
        "Ship Date",
        "Region",
        "Category",
        UNKNOWN,
        "Odd (name)",
        " spaced ",
    ];
    let aggs = [
        Aggregation::Sum,
        Aggregation::Mean,
        Aggregation::Min,
        Aggregation::Max,
        Aggregation::Count,
    ];
    let sections = (0..rng.gen_range(0..=3))
        .map(|i| Section {
            metrics: (0..rng.gen_range(0..=4))
                .map(|_| {
                    if rng.gen_bool(0.15) {
                        MetricRef::count_star()
                    } else {
                        MetricRef::new(*pool.choose(rng).unwrap(), *aggs.choose(rng).unwrap()).unwrap()
                    }
                })
                .collect(),
            dimension_groups: (0..rng.gen_range(0..=3))
                .map(|_| {
                    let primary = *pool.choose(rng).unwrap();
                    if rng.gen_bool(0.4) {
                        DimensionGroup::pair(primary, *pool.choose(rng).unwrap())
                    } else {
                        DimensionGroup::single(primary)
                    }
                })
                .collect(),
            metric_layout: [None, Some(MetricLayout::Layer), Some(MetricLayout::Repeat)]
                .choose(rng)
                .copied()
                .unwrap(),
            title: rng.gen_bool(0.2).then(|| format!("S{i} \"quoted\"")),
        })
        .collect();
    DashboardSpec {
        sections,
        title: rng.gen_bool(0.3).then(|| "Any".to_string()),
    }
}

fn schema() -> TableSchema {
    superstore().schema().clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn serialized_specs_parse_back_unchanged(seed in any::<u64>()) {
        let spec = random_any_spec(&mut ChaCha8Rng::seed_from_u64(seed));
        let text = spec.to_json();
        prop_assert_eq!(parse_spec(&text).unwrap(), spec);
    }

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>()) {
        let schema = schema();
        let spec = random_any_spec(&mut ChaCha8Rng::seed_from_u64(seed));
        let (once, first) = validate_spec(&spec, &schema);
        let (twice, second) = validate_spec(&once, &schema);
        prop_assert_eq!(&twice, &once);
        prop_assert_eq!(second.errors, first.errors);
        prop_assert!(second.warnings.iter().all(|w| w.code != DiagnosticCode::MetricDefaulted));
    }

    #[test]
    fn every_diagnostic_path_resolves(seed in any::<u64>()) {
        let schema = schema();
        let spec = random_any_spec(&mut ChaCha8Rng::seed_from_u64(seed));
        let doc: serde_json::Value = serde_json::from_str(&spec.to_json()).unwrap();
        let (_, report) = validate_spec(&spec, &schema);
        for d in report.errors.iter().chain(&report.warnings) {
            prop_assert!(lookup_path(&doc, &d.path).is_some(), "unresolvable path {}", d.path);
        }
    }

    /// Validation reports every problem, not just the first.
    #[test]
    fn validation_reports_every_unknown_field(seed in any::<u64>()) {
        let schema = schema();
        let spec = random_any_spec(&mut ChaCha8Rng::seed_from_u64(seed));
        let (_, report) = validate_spec(&spec, &schema);
        let expected: usize = spec
            .sections
            .iter()
            .map(|s| {
                s.metrics.iter().filter(|m| m.field().is_some_and(|f| schema.column(f).is_none())).count()
                    + s.dimension_groups
                        .iter()
                        .flat_map(|g| g.fields())
                        .filter(|f| schema.column(f).is_none())
                        .count()
            })
            .sum();
        let found = report.errors.iter().filter(|d| d.code == DiagnosticCode::UnknownField).count();
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn valid_specs_validate_cleanly(seed in any::<u64>()) {
        let schema = schema();
        let spec = random_valid_spec(
            &mut ChaCha8Rng::seed_from_u64(seed),
            &superstore_quantitative(),
            &superstore_dimensions(),
        );
        let (normalized, report) = validate_spec(&spec, &schema);
        prop_assert!(report.is_ok(), "{:?}", report.errors);
        for section in &normalized.sections {
            prop_assert!(!section.metrics.is_empty());
            prop_assert!(section.metric_layout.is_some());
        }
    }

    /// Arbitrary text never panics the parser.
    #[test]
    fn parser_is_total(text in ".{0,200}") {
        let _ = parse_spec(&text);
    }
}

#[test]
fn three_field_group_is_rejected_at_parse() {
    let err =
        parse_spec(r#"{"Sections": [{"Metrics": [], "DimensionGroups": [["Region", "Category", "Ship Date"]]}]}"#)
            .unwrap_err();
    assert_eq!(err.code(), "GroupTooLarge");
    assert_eq!(err.path(), "Sections[0].DimensionGroups[0]");
}

#[test]
fn mismatch_paths_point_at_offending_entries() {
    let spec = parse_spec(
        r#"{"Sections": [{"Metrics": ["Sales (SUM)", "Region (MEAN)"],
            "DimensionGroups": [{"PrimaryField": "Region"}, {"PrimaryField": "Region", "SecondaryField": "Sales"}]}]}"#,
    )
    .unwrap();
    let (_, report) = validate_spec(&spec, &schema());
    let paths: Vec<(DiagnosticCode, &str)> = report.errors.iter().map(|d| (d.code, d.path.as_str())).collect();
    assert_eq!(
        paths,
        vec![
            (DiagnosticCode::AggregationTypeMismatch, "Sections[0].Metrics[1]"),
            (
                DiagnosticCode::DimensionTypeMismatch,
                "Sections[0].DimensionGroups[1].SecondaryField"
            ),
        ]
    );
}
