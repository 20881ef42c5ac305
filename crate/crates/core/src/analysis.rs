//! The irrational-judgment test over a query log.
//!
//! For each matching criteria the log is narrowed three times:
//!
//! * **SFT**: the rank-1 and rank-2 documents have matching profiles;
//! * **SFTSC**: of those, the rank-2 document was SAT-clicked;
//! * **IRQ**: of those, the rank-1 document was not SAT-clicked.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{matches, DimensionalProfile, MatchingCriteria};
use crate::record::{ClickEvent, QueryRecord, ScoreMode};

/// Default dwell threshold for a satisfied click, in seconds.
pub const DEFAULT_SAT_SECONDS: f64 = 30.0;

/// A click counts as satisfied when its dwell strictly exceeds this value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct SatThreshold(f64);

impl SatThreshold {
    pub fn new(seconds: f64) -> Result<Self> {
        if !seconds.is_finite() || seconds < 0.0 {
            return Err(Error::domain("SAT threshold", seconds));
        }
        Ok(SatThreshold(seconds))
    }

    pub fn seconds(self) -> f64 {
        self.0
    }
}

impl Default for SatThreshold {
    fn default() -> Self {
        SatThreshold(DEFAULT_SAT_SECONDS)
    }
}

/// `clicked ∧ dwell > threshold`.
pub fn is_sat_click(event: &ClickEvent, threshold_seconds: f64) -> Result<bool> {
    let t = SatThreshold::new(threshold_seconds)?;
    Ok(sat(event, t))
}

fn sat(event: &ClickEvent, t: SatThreshold) -> bool {
    event.clicked && event.dwell_seconds > t.0
}

/// A query reduced to what the test looks at: per-document profiles and clicks.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedQuery {
    pub query_id: String,
    pub profiles: Vec<DimensionalProfile>,
    pub clicks: Vec<ClickEvent>,
    pub degenerate: bool,
}

impl PreparedQuery {
    pub fn from_record(record: &QueryRecord, mode: ScoreMode) -> Result<Self> {
        let (profiles, degenerate) = record.profiles(mode)?;
        Ok(PreparedQuery {
            query_id: record.query_id().to_owned(),
            profiles,
            clicks: record.docs().iter().map(|d| d.click).collect(),
            degenerate,
        })
    }

    fn top_two(&self) -> Option<[&DimensionalProfile; 2]> {
        match self.profiles.as_slice() {
            [first, second, ..] => Some([first, second]),
            _ => None,
        }
    }
}

/// Normalizes every record of a log.
pub fn prepare(log: &[QueryRecord], mode: ScoreMode) -> Result<Vec<PreparedQuery>> {
    log.par_iter()
        .map(|r| PreparedQuery::from_record(r, mode))
        .collect()
}

pub type QueryIds = BTreeSet<String>;

/// Queries whose first two documents match under `c`. Queries with fewer
/// than two documents are never members.
pub fn find_sft(log: &[PreparedQuery], c: MatchingCriteria) -> QueryIds {
    log.par_iter()
        .filter(|q| q.top_two().is_some_and(|[a, b]| matches(a, b, c)))
        .map(|q| q.query_id.clone())
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Number of queries with fewer than two documents.
pub fn count_skipped(log: &[PreparedQuery]) -> usize {
    log.iter().filter(|q| q.top_two().is_none()).count()
}

fn select(
    log: &[PreparedQuery],
    ids: &QueryIds,
    keep: impl Fn(&PreparedQuery) -> bool + Sync,
) -> QueryIds {
    log.par_iter()
        .filter(|q| ids.contains(&q.query_id) && q.top_two().is_some() && keep(q))
        .map(|q| q.query_id.clone())
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Members of `sft_ids` whose rank-2 document is SAT-clicked.
pub fn find_sftsc(log: &[PreparedQuery], sft_ids: &QueryIds, t: SatThreshold) -> QueryIds {
    select(log, sft_ids, |q| sat(&q.clicks[1], t))
}

/// Members of `sftsc_ids` whose rank-1 document is not SAT-clicked.
pub fn find_irq(log: &[PreparedQuery], sftsc_ids: &QueryIds, t: SatThreshold) -> QueryIds {
    select(log, sftsc_ids, |q| !sat(&q.clicks[0], t))
}

/// One line of the report: counts for a single matching criteria.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub matching_criteria: MatchingCriteria,
    pub sft: usize,
    pub sftsc: usize,
    pub irq: usize,
    /// `100 · irq / sft`, 0 when `sft` is 0.
    pub irq_percent_of_sft: f64,
}

impl ReportRow {
    /// The IRQ percentage at the two decimals used in every output format.
    pub fn irq_percent_rounded(&self) -> f64 {
        (self.irq_percent_of_sft * 100.0).round() / 100.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub total_queries: usize,
    /// Queries with fewer than two documents.
    pub skipped_queries: usize,
    /// Queries where some dimension had identical raw scores for every document.
    pub degenerate_queries: usize,
    pub sat_threshold_seconds: SatThreshold,
    pub rows: Vec<ReportRow>,
}

pub fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

/// Runs the three-stage narrowing once per criteria, in the order given.
pub fn analyze(
    log: &[PreparedQuery],
    criteria: &[MatchingCriteria],
    t: SatThreshold,
) -> Result<AnalysisReport> {
    if criteria.is_empty() {
        return Err(Error::Contract(
            "at least one matching criteria is required".into(),
        ));
    }
    let rows = criteria
        .iter()
        .map(|&c| {
            let sft = find_sft(log, c);
            let sftsc = find_sftsc(log, &sft, t);
            let irq = find_irq(log, &sftsc, t);
            ReportRow {
                matching_criteria: c,
                sft: sft.len(),
                sftsc: sftsc.len(),
                irq: irq.len(),
                irq_percent_of_sft: percent(irq.len(), sft.len()),
            }
        })
        .collect();
    Ok(AnalysisReport {
        total_queries: log.len(),
        skipped_queries: count_skipped(log),
        degenerate_queries: log.iter().filter(|q| q.degenerate).count(),
        sat_threshold_seconds: t,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::build_profile;

    fn click(rank: u32, dwell: Option<f64>) -> ClickEvent {
        match dwell {
            Some(d) => ClickEvent::new(rank, true, d).unwrap(),
            None => ClickEvent::new(rank, false, 0.0).unwrap(),
        }
    }

    fn query(id: &str, profiles: &[[f64; 7]], dwell: &[Option<f64>]) -> PreparedQuery {
        PreparedQuery {
            query_id: id.into(),
            profiles: profiles.iter().map(|p| build_profile(p).unwrap()).collect(),
            clicks: dwell
                .iter()
                .enumerate()
                .map(|(i, d)| click(i as u32 + 1, *d))
                .collect(),
            degenerate: false,
        }
    }

    fn c(x: f64) -> MatchingCriteria {
        MatchingCriteria::new(x).unwrap()
    }

    #[test]
    fn sat_click_is_strict() {
        assert!(is_sat_click(&click(1, Some(31.0)), 30.0).unwrap());
        assert!(!is_sat_click(&click(1, Some(30.0)), 30.0).unwrap());
        assert!(!is_sat_click(&click(1, None), 30.0).unwrap());
        assert!(is_sat_click(&click(1, Some(1.0)), -1.0).is_err());
    }

    #[test]
    fn narrowing_chain() {
        let p = [0.5; 7];
        let mut far = p;
        far[0] = 0.1;
        let log = vec![
            query("irq", &[p, p], &[None, Some(45.0)]),
            query("both", &[p, p], &[Some(60.0), Some(45.0)]),
            query("short", &[p, p], &[None, Some(12.0)]),
            query("far", &[p, far], &[None, Some(45.0)]),
            query("single", &[p], &[Some(45.0)]),
        ];
        let t = SatThreshold::default();
        let sft = find_sft(&log, c(0.0));
        assert_eq!(sft.len(), 3);
        let sftsc = find_sftsc(&log, &sft, t);
        assert_eq!(sftsc.len(), 2);
        let irq = find_irq(&log, &sftsc, t);
        assert_eq!(irq.into_iter().collect::<Vec<_>>(), vec!["irq".to_string()]);

        let report = analyze(&log, &[c(0.0), c(0.0)], t).unwrap();
        assert_eq!(report.rows[0], report.rows[1]);
        assert_eq!(report.skipped_queries, 1);
        assert_eq!(report.total_queries, 5);
        assert!((report.rows[0].irq_percent_of_sft - 100.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_and_clickless_logs() {
        let t = SatThreshold::default();
        assert!(find_sft(&[], c(0.1)).is_empty());

        let p = [0.5; 7];
        let log = vec![query("a", &[p, p], &[None, None])];
        let sft = find_sft(&log, c(0.0));
        assert_eq!(sft.len(), 1);
        assert!(find_sftsc(&log, &sft, t).is_empty());
    }

    #[test]
    fn every_first_doc_satisfied_gives_no_irq() {
        let p = [0.5; 7];
        let log = vec![
            query("a", &[p, p], &[Some(40.0), Some(40.0)]),
            query("b", &[p, p, p], &[Some(90.0), Some(31.5), None]),
        ];
        let t = SatThreshold::default();
        let sft = find_sft(&log, c(0.0));
        let sftsc = find_sftsc(&log, &sft, t);
        assert_eq!(sftsc.len(), 2);
        assert!(find_irq(&log, &sftsc, t).is_empty());
    }

    #[test]
    fn single_document_log() {
        let log = vec![query("only", &[[0.2; 7]], &[None])];
        let r = analyze(&log, &[c(0.0)], SatThreshold::default()).unwrap();
        assert_eq!((r.rows[0].sft, r.rows[0].sftsc, r.rows[0].irq), (0, 0, 0));
        assert_eq!(r.rows[0].irq_percent_of_sft, 0.0);
        assert_eq!(r.skipped_queries, 1);
    }

    #[test]
    fn analyze_requires_criteria() {
        assert!(analyze(&[], &[], SatThreshold::default()).is_err());
    }

    #[test]
    fn percent_rounding() {
        let row = ReportRow {
            matching_criteria: c(0.0),
            sft: 170,
            sftsc: 27,
            irq: 25,
            irq_percent_of_sft: percent(25, 170),
        };
        assert_eq!(row.irq_percent_rounded(), 14.71);
    }
}
