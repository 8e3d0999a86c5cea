//! Report records survive a JSON round trip unchanged.

use ctproof::report::{AttemptRecord, Coord, InitialCheck, Timing, VarBound};
use ctproof::ReportRecord;
use proptest::prelude::*;

fn text() -> impl Strategy<Value = String> {
    "[ -~\\n\"\\\\é]{0,12}"
}

fn coords() -> impl Strategy<Value = Vec<Coord>> {
    prop::collection::vec((text(), any::<i64>()).prop_map(|(var, value)| Coord { var, value }), 0..3)
}

fn record() -> impl Strategy<Value = ReportRecord> {
    let head = (
        text(),
        prop::sample::select(vec!["rigorous", "semi-rigorous", "inconclusive", "refuted"]),
        prop::sample::select(vec!["gosper", "determinant", "initial-check", "none"]),
        text(),
        any::<u64>(),
        prop::option::of(0usize..10),
        prop::option::of(0usize..10),
        prop::option::of(text()),
    );
    let grid = (
        0usize..100,
        0usize..100,
        prop::collection::vec((text(), any::<u32>()).prop_map(|(var, degree)| VarBound { var, degree }), 0..3),
        any::<u64>(),
        any::<u64>(),
        prop::option::of(coords()),
        prop::option::of(any::<i64>()),
    );
    let tail = (
        prop::collection::vec((any::<i64>(), any::<bool>()).prop_map(|(n, ok)| InitialCheck { n, ok }), 0..4),
        prop::option::of(prop::collection::vec(text(), 1..4)),
        prop::option::of(text()),
        prop::collection::vec(
            (0usize..6, 0usize..6, any::<u64>(), prop::option::of(coords())).prop_map(|(order, degree, total, witness)| {
                AttemptRecord {
                    order,
                    degree,
                    rows: order + 3,
                    cols: degree + 2,
                    grid_total: total,
                    grid_tested: total / 2,
                    witness,
                }
            }),
            0..3,
        ),
        prop::collection::vec(text(), 0..3),
        prop::option::of(prop::collection::vec((text(), any::<u64>()).prop_map(|(stage, micros)| Timing { stage, micros }), 0..3)),
        prop::option::of(any::<u64>()),
    );
    (head, grid, tail).prop_map(
        |(
            (name, verdict, method, certainty, seed, order, degree, shape),
            (rows, cols, degree_bounds, grid_total, grid_tested, nonzero_point, leading_root_bound),
            (initial_checks, recurrence, certificate, attempts, notes, timings, duration_ms),
        )| ReportRecord {
            name,
            tool_version: "0.1.0".into(),
            verdict: verdict.into(),
            method: method.into(),
            certainty,
            seed,
            order,
            degree,
            shape,
            rows,
            cols,
            degree_bounds,
            grid_total,
            grid_tested,
            nonzero_point,
            leading_root_bound,
            specialization: Vec::new(),
            initial_checks,
            recurrence,
            certificate,
            attempts,
            notes,
            timings,
            duration_ms,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn json_round_trip_is_lossless(rec in record()) {
        let line = rec.to_json_line();
        prop_assert!(!line.contains('\n'));
        let back: ReportRecord = serde_json::from_str(&line).unwrap();
        prop_assert_eq!(&back, &rec);
        prop_assert_eq!(back.to_json_line(), line);
    }
}
