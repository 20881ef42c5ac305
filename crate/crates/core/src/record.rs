//! Query-log records and their JSON Lines encoding.
//!
//! One query per line:
//!
//! ```text
//! {"query_id":"q1","docs":[{"doc_id":"d1","rank":1,"scores":{"habit":0.3,...},"clicked":true,"dwell_seconds":42.0}]}
//! ```

use std::collections::HashSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{
    build_profile, minmax_normalize, Dimension, DimensionScores, DimensionalProfile, DIMENSIONS,
};

/// Click and dwell observed on one ranked document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClickEvent {
    pub doc_rank: u32,
    pub clicked: bool,
    pub dwell_seconds: f64,
}

impl ClickEvent {
    pub fn new(doc_rank: u32, clicked: bool, dwell_seconds: f64) -> Result<Self> {
        if doc_rank == 0 {
            return Err(Error::invalid(None, "ranks start at 1"));
        }
        if !dwell_seconds.is_finite() || dwell_seconds < 0.0 {
            return Err(Error::invalid(
                None,
                format!("dwell_seconds must be non-negative, got {dwell_seconds}"),
            ));
        }
        if !clicked && dwell_seconds != 0.0 {
            return Err(Error::invalid(
                None,
                format!("rank {doc_rank} not clicked but has dwell {dwell_seconds}"),
            ));
        }
        Ok(ClickEvent {
            doc_rank,
            clicked,
            dwell_seconds,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub doc_id: String,
    pub scores: DimensionScores,
    pub click: ClickEvent,
}

impl Document {
    pub fn rank(&self) -> u32 {
        self.click.doc_rank
    }
}

/// How the `scores` of a record are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreMode {
    /// Raw per-dimension scores, min-max normalized across the query's documents.
    #[default]
    Raw,
    /// Scores are already profile probabilities in `[0, 1]`.
    Normalized,
}

/// A query with its documents in rank order `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryRecord {
    query_id: String,
    docs: Vec<Document>,
}

impl QueryRecord {
    /// Sorts `docs` by rank and checks the ranks are exactly `1..=n`.
    pub fn new(query_id: impl Into<String>, mut docs: Vec<Document>) -> Result<Self> {
        let query_id = query_id.into();
        if docs.is_empty() {
            return Err(Error::invalid(
                None,
                format!("query {query_id} has no documents"),
            ));
        }
        docs.sort_by_key(Document::rank);
        for (i, d) in docs.iter().enumerate() {
            if d.rank() as usize != i + 1 {
                return Err(Error::invalid(
                    None,
                    format!("query {query_id}: ranks are not contiguous from 1"),
                ));
            }
        }
        Ok(QueryRecord { query_id, docs })
    }

    pub fn query_id(&self) -> &str {
        &self.query_id
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    /// Profiles of every document, plus whether any dimension was degenerate
    /// (all documents scored equally) under raw normalization.
    pub fn profiles(&self, mode: ScoreMode) -> Result<(Vec<DimensionalProfile>, bool)> {
        match mode {
            ScoreMode::Normalized => {
                let profiles = self
                    .docs
                    .iter()
                    .map(|d| build_profile(d.scores.as_array()))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::invalid(None, format!("query {}: {e}", self.query_id)))?;
                Ok((profiles, false))
            }
            ScoreMode::Raw => {
                let n = self.docs.len();
                let mut columns = vec![[0.0; DIMENSIONS]; n];
                let mut degenerate = false;
                for dim in Dimension::ALL {
                    let raw: Vec<f64> = self.docs.iter().map(|d| d.scores.get(dim)).collect();
                    let norm = minmax_normalize(&raw)?;
                    degenerate |= norm.degenerate;
                    for (row, v) in columns.iter_mut().zip(norm.values) {
                        row[dim.index()] = v;
                    }
                }
                let profiles = columns
                    .into_iter()
                    .map(DimensionalProfile::new)
                    .collect::<Result<Vec<_>>>()?;
                Ok((profiles, degenerate))
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireScores {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    habit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interest: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    novelty: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reliability: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    topicality: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    understandability: Option<f64>,
}

impl WireScores {
    fn to_array(&self) -> [Option<f64>; DIMENSIONS] {
        [
            self.habit,
            self.interest,
            self.novelty,
            self.reliability,
            self.scope,
            self.topicality,
            self.understandability,
        ]
    }

    fn from_scores(s: &DimensionScores) -> Self {
        let v = s.as_array();
        WireScores {
            habit: Some(v[0]),
            interest: Some(v[1]),
            novelty: Some(v[2]),
            reliability: Some(v[3]),
            scope: Some(v[4]),
            topicality: Some(v[5]),
            understandability: Some(v[6]),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct WireDoc {
    doc_id: String,
    rank: u32,
    scores: WireScores,
    #[serde(default)]
    clicked: bool,
    #[serde(default)]
    dwell_seconds: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct WireRecord {
    query_id: String,
    docs: Vec<WireDoc>,
}

fn from_wire(w: WireRecord) -> Result<QueryRecord> {
    let qid = w.query_id;
    let docs = w
        .docs
        .into_iter()
        .map(|d| {
            let raw = d.scores.to_array();
            let mut scores = [0.0; DIMENSIONS];
            for dim in Dimension::ALL {
                scores[dim.index()] = raw[dim.index()].ok_or_else(|| {
                    Error::invalid(
                        None,
                        format!("query {qid}, doc {}: missing dimension {dim}", d.doc_id),
                    )
                })?;
            }
            let scores = DimensionScores::new(scores)
                .map_err(|e| Error::invalid(None, format!("query {qid}, doc {}: {e}", d.doc_id)))?;
            let click = ClickEvent::new(d.rank, d.clicked, d.dwell_seconds)
                .map_err(|e| Error::invalid(None, format!("query {qid}, doc {}: {e}", d.doc_id)))?;
            Ok(Document {
                doc_id: d.doc_id,
                scores,
                click,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    QueryRecord::new(qid, docs)
}

fn to_wire(r: &QueryRecord) -> WireRecord {
    WireRecord {
        query_id: r.query_id.clone(),
        docs: r
            .docs
            .iter()
            .map(|d| WireDoc {
                doc_id: d.doc_id.clone(),
                rank: d.rank(),
                scores: WireScores::from_scores(&d.scores),
                clicked: d.click.clicked,
                dwell_seconds: d.click.dwell_seconds,
            })
            .collect(),
    }
}

fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::Validation { message, .. } => Error::Validation {
            line: Some(line),
            message,
        },
        other => Error::Validation {
            line: Some(line),
            message: other.to_string(),
        },
    }
}

/// Decodes a single JSONL line.
pub fn parse_line(line: &str, line_no: usize) -> Result<QueryRecord> {
    let wire: WireRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
        line: line_no,
        message: e.to_string(),
    })?;
    from_wire(wire).map_err(|e| at_line(e, line_no))
}

/// Reads a whole log. Blank lines are ignored; query ids must be unique.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<QueryRecord>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rec = parse_line(&line, line_no)?;
        if !seen.insert(rec.query_id.clone()) {
            return Err(Error::invalid(
                Some(line_no),
                format!("duplicate query_id {}", rec.query_id),
            ));
        }
        out.push(rec);
    }
    Ok(out)
}

/// Writes one line per record, in the given order.
pub fn write_jsonl<W: Write>(records: &[QueryRecord], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, &to_wire(r)).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = r#"{"query_id":"q1","docs":[{"doc_id":"b","rank":2,"scores":{"habit":1,"interest":2,"novelty":3,"reliability":4,"scope":5,"topicality":6,"understandability":7},"clicked":true,"dwell_seconds":40.5},{"doc_id":"a","rank":1,"scores":{"habit":0,"interest":0,"novelty":0,"reliability":0,"scope":0,"topicality":0,"understandability":0},"clicked":false,"dwell_seconds":0}]}"#;

    #[test]
    fn parses_and_sorts_by_rank() {
        let r = parse_line(LINE, 1).unwrap();
        assert_eq!(r.docs()[0].doc_id, "a");
        assert_eq!(r.docs()[1].click.dwell_seconds, 40.5);
        assert_eq!(r.docs()[1].scores.get(Dimension::Understandability), 7.0);
    }

    #[test]
    fn roundtrip_through_jsonl() {
        let r = parse_line(LINE, 1).unwrap();
        let mut buf = Vec::new();
        write_jsonl(std::slice::from_ref(&r), &mut buf).unwrap();
        let back = read_jsonl(buf.as_slice()).unwrap();
        assert_eq!(back, vec![r]);
    }

    #[test]
    fn missing_dimension_names_query_and_dimension() {
        let line = LINE.replace(r#""scope":5,"#, "");
        let err = read_jsonl(format!("\n{line}\n").as_bytes()).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("line 2") && msg.contains("q1") && msg.contains("scope"),
            "{msg}"
        );
    }

    #[test]
    fn corrupt_line_reports_line_number() {
        let input = format!("{LINE}\n{{not json\n");
        match read_jsonl(input.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_rank_gaps_duplicates_and_stray_dwell() {
        let gap = LINE.replace(r#""rank":2"#, r#""rank":3"#);
        assert!(matches!(
            parse_line(&gap, 1),
            Err(Error::Validation { line: Some(1), .. })
        ));

        let dup = format!("{LINE}\n{LINE}\n");
        assert!(read_jsonl(dup.as_bytes()).is_err());

        let stray = LINE.replace(
            r#""clicked":false,"dwell_seconds":0"#,
            r#""clicked":false,"dwell_seconds":12"#,
        );
        assert!(parse_line(&stray, 1).is_err());

        let empty = r#"{"query_id":"q","docs":[]}"#;
        assert!(parse_line(empty, 1).is_err());
    }

    #[test]
    fn raw_profiles_flag_degenerate_dimensions() {
        let r = parse_line(LINE, 1).unwrap();
        let (p, degenerate) = r.profiles(ScoreMode::Raw).unwrap();
        assert!(!degenerate);
        assert_eq!(p[0].values(), &[0.0; 7]);
        assert_eq!(p[1].values(), &[1.0; 7]);

        // Raw scores above 1 are not valid profiles.
        assert!(r.profiles(ScoreMode::Normalized).is_err());
    }
}
