//! Dimensional profiles: per-dimension relevance probabilities of a document
//! for a query, and the similarity test between two profiles.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of relevance dimensions.
pub const DIMENSIONS: usize = 7;

/// Relevance dimensions, in the fixed HINRSTU order used everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Habit,
    Interest,
    Novelty,
    Reliability,
    Scope,
    Topicality,
    Understandability,
}

impl Dimension {
    pub const ALL: [Dimension; DIMENSIONS] = [
        Dimension::Habit,
        Dimension::Interest,
        Dimension::Novelty,
        Dimension::Reliability,
        Dimension::Scope,
        Dimension::Topicality,
        Dimension::Understandability,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Lowercase key used in log files and on the command line.
    pub fn key(self) -> &'static str {
        match self {
            Dimension::Habit => "habit",
            Dimension::Interest => "interest",
            Dimension::Novelty => "novelty",
            Dimension::Reliability => "reliability",
            Dimension::Scope => "scope",
            Dimension::Topicality => "topicality",
            Dimension::Understandability => "understandability",
        }
    }

    /// Single-letter column header.
    pub fn letter(self) -> char {
        "HINRSTU".as_bytes()[self.index()] as char
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Dimension::ALL
            .into_iter()
            .find(|d| {
                d.key() == s || (s.len() == 1 && d.letter().to_ascii_lowercase().to_string() == s)
            })
            .ok_or_else(|| Error::invalid(None, format!("unknown dimension {s:?}")))
    }
}

/// Raw per-dimension relevance scores of one document, HINRSTU order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionScores([f64; DIMENSIONS]);

impl DimensionScores {
    pub fn new(scores: [f64; DIMENSIONS]) -> Result<Self> {
        if let Some(d) = Dimension::ALL
            .into_iter()
            .find(|d| !scores[d.index()].is_finite())
        {
            return Err(Error::invalid(None, format!("score for {d} is not finite")));
        }
        Ok(DimensionScores(scores))
    }

    pub fn get(&self, d: Dimension) -> f64 {
        self.0[d.index()]
    }

    pub fn as_array(&self) -> &[f64; DIMENSIONS] {
        &self.0
    }
}

/// Normalized relevance probabilities of one document, HINRSTU order.
///
/// Entries are probabilities (squared amplitudes); the amplitude for a
/// dimension is recovered with [`DimensionalProfile::amplitude`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DimensionalProfile([f64; DIMENSIONS]);

impl DimensionalProfile {
    pub fn new(values: [f64; DIMENSIONS]) -> Result<Self> {
        for d in Dimension::ALL {
            let v = values[d.index()];
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain("profile probability", v));
            }
        }
        Ok(DimensionalProfile(values))
    }

    pub fn get(&self, d: Dimension) -> f64 {
        self.0[d.index()]
    }

    pub fn amplitude(&self, d: Dimension) -> f64 {
        self.get(d).sqrt()
    }

    pub fn values(&self) -> &[f64; DIMENSIONS] {
        &self.0
    }
}

/// Builds a profile from seven normalized per-dimension probabilities.
pub fn build_profile(normalized: &[f64]) -> Result<DimensionalProfile> {
    let values: [f64; DIMENSIONS] = normalized.try_into().map_err(|_| {
        Error::Contract(format!(
            "profile needs {DIMENSIONS} values, got {}",
            normalized.len()
        ))
    })?;
    DimensionalProfile::new(values)
}

/// Maximum tolerated relative difference for two profiles to count as similar.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct MatchingCriteria(f64);

impl MatchingCriteria {
    pub fn new(threshold: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::domain("matching criteria", threshold));
        }
        Ok(MatchingCriteria(threshold))
    }

    pub fn threshold(self) -> f64 {
        self.0
    }
}

impl fmt::Display for MatchingCriteria {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Min-max normalized values for one dimension across a query's documents.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub values: Vec<f64>,
    /// Set when every input was equal; all values are then 0.
    pub degenerate: bool,
}

/// Maps `λᵢ ↦ (λᵢ − min λ) / (max λ − min λ)`.
pub fn minmax_normalize(scores: &[f64]) -> Result<Normalized> {
    if scores.is_empty() {
        return Err(Error::Contract(
            "cannot normalize an empty score list".into(),
        ));
    }
    if let Some(&bad) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::domain("raw score", bad));
    }
    let (lo, hi) = scores
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
            (lo.min(s), hi.max(s))
        });
    let span = hi - lo;
    if span == 0.0 {
        return Ok(Normalized {
            values: vec![0.0; scores.len()],
            degenerate: true,
        });
    }
    let values = scores
        .iter()
        .map(|&s| ((s - lo) / span).clamp(0.0, 1.0))
        .collect();
    Ok(Normalized {
        values,
        degenerate: false,
    })
}

/// Component-wise `|v₂ − v₁| / max(v₂, v₁)`, with `0/0` taken as 0.
pub fn relative_difference(p1: &DimensionalProfile, p2: &DimensionalProfile) -> [f64; DIMENSIONS] {
    std::array::from_fn(|i| {
        let (x, y) = (p1.0[i], p2.0[i]);
        let m = x.max(y);
        if m == 0.0 {
            0.0
        } else {
            (x - y).abs() / m
        }
    })
}

/// True iff every relative difference is at most the threshold (inclusive).
pub fn matches(p1: &DimensionalProfile, p2: &DimensionalProfile, c: MatchingCriteria) -> bool {
    relative_difference(p1, p2)
        .iter()
        .all(|&r| r <= c.threshold())
}
