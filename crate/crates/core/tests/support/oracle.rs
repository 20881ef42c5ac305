//! Literal recount of the SFT / SFTSC / IRQ definitions straight from JSONL
//! text. Shares no code with the library.

use serde_json::Value;

const KEYS: [&str; 7] = [
    "habit",
    "interest",
    "novelty",
    "reliability",
    "scope",
    "topicality",
    "understandability",
];

pub struct Doc {
    pub rank: u64,
    pub scores: [f64; 7],
    pub clicked: bool,
    pub dwell: f64,
}

pub fn parse(jsonl: &str) -> Vec<Vec<Doc>> {
    jsonl
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            let mut docs: Vec<Doc> = v["docs"]
                .as_array()
                .unwrap()
                .iter()
                .map(|d| {
                    let mut scores = [0.0; 7];
                    for (i, k) in KEYS.iter().enumerate() {
                        scores[i] = d["scores"][k].as_f64().unwrap();
                    }
                    Doc {
                        rank: d["rank"].as_u64().unwrap(),
                        scores,
                        clicked: d["clicked"].as_bool().unwrap_or(false),
                        dwell: d["dwell_seconds"].as_f64().unwrap_or(0.0),
                    }
                })
                .collect();
            docs.sort_by_key(|d| d.rank);
            docs
        })
        .collect()
}

/// Profiles of the top two documents, normalizing each dimension over all
/// of the query's documents.
fn top_two_profiles(docs: &[Doc], normalized: bool) -> ([f64; 7], [f64; 7]) {
    let mut out = ([0.0; 7], [0.0; 7]);
    for i in 0..7 {
        let col: Vec<f64> = docs.iter().map(|d| d.scores[i]).collect();
        let (v1, v2) = if normalized {
            (col[0], col[1])
        } else {
            let mut lo = col[0];
            let mut hi = col[0];
            for &x in &col {
                if x < lo {
                    lo = x;
                }
                if x > hi {
                    hi = x;
                }
            }
            if hi == lo {
                (0.0, 0.0)
            } else {
                ((col[0] - lo) / (hi - lo), (col[1] - lo) / (hi - lo))
            }
        };
        out.0[i] = v1;
        out.1[i] = v2;
    }
    out
}

fn similar(a: &[f64; 7], b: &[f64; 7], criteria: f64) -> bool {
    (0..7).all(|i| {
        let m = if a[i] > b[i] { a[i] } else { b[i] };
        let r = if m == 0.0 {
            0.0
        } else {
            (a[i] - b[i]).abs() / m
        };
        r <= criteria
    })
}

fn sat(d: &Doc, threshold: f64) -> bool {
    d.clicked && d.dwell > threshold
}

/// `(sft, sftsc, irq)` for one criteria.
pub fn count(
    log: &[Vec<Doc>],
    criteria: f64,
    threshold: f64,
    normalized: bool,
) -> (usize, usize, usize) {
    let mut sft = 0;
    let mut sftsc = 0;
    let mut irq = 0;
    for docs in log {
        if docs.len() < 2 {
            continue;
        }
        let (p1, p2) = top_two_profiles(docs, normalized);
        if !similar(&p1, &p2, criteria) {
            continue;
        }
        sft += 1;
        if sat(&docs[1], threshold) {
            sftsc += 1;
            if !sat(&docs[0], threshold) {
                irq += 1;
            }
        }
    }
    (sft, sftsc, irq)
}
