//! Shared fixtures for the criterion benches.

use orderfx_core::synth::{generate, SynthConfig, TargetRow};
use orderfx_core::{prepare, PreparedQuery, QueryRecord, ScoreMode};

/// A seeded log of `queries` records with a few planted similar pairs.
pub fn sample_log(queries: usize) -> Vec<QueryRecord> {
    let planted = (queries / 500).max(1);
    let cfg = SynthConfig {
        seed: 42,
        total_queries: queries.max(planted),
        target_rows: Some(vec![
            TargetRow {
                criteria: 0.10,
                sft: planted,
                sftsc: planted / 2,
                irq: planted / 2,
            },
            TargetRow {
                criteria: 0.0,
                sft: planted / 2,
                sftsc: planted / 4,
                irq: planted / 4,
            },
        ]),
        ..SynthConfig::default()
    };
    generate(&cfg).expect("bench config is feasible")
}

pub fn prepared_log(queries: usize) -> Vec<PreparedQuery> {
    prepare(&sample_log(queries), ScoreMode::Raw).expect("synthetic log is valid")
}
