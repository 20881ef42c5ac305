//! Order effects in multidimensional relevance judgment.
//!
//! The crate has two halves. [`analysis`] scans a query log for queries whose
//! top two documents have near-identical relevance profiles but where only
//! the second one received a satisfied click. [`explain`] accounts for such a
//! query with a two-dimensional Hilbert-space model ([`hilbert`]) in which
//! judging a document along two incompatible relevance dimensions gives
//! different probabilities depending on the order.
//!
//! [`profile`] turns per-dimension scores into profiles, [`record`] reads and
//! writes JSON Lines logs, and [`synth`] generates seeded synthetic logs.

#![forbid(unsafe_code)]

pub mod analysis;
mod error;
pub mod explain;
pub mod hilbert;
pub mod profile;
pub mod record;
pub mod synth;

pub use analysis::{analyze, prepare, AnalysisReport, PreparedQuery, ReportRow, SatThreshold};
pub use error::{Error, Result};
pub use explain::{explain, explain_auto, preferred_dimension, Explanation};
pub use hilbert::{order_effect, BasisChange, BasisRepresentation, OrderEffect, StateVector};
pub use profile::{Dimension, DimensionScores, DimensionalProfile, MatchingCriteria};
pub use record::{read_jsonl, write_jsonl, ClickEvent, Document, QueryRecord, ScoreMode};
pub use synth::{generate, SynthConfig, TargetRow};
