//! Seeded synthetic query logs.
//!
//! Without targets every query gets random profiles, with a share of
//! near-duplicate top-two pairs so the similarity test has something to
//! find. With targets, queries are planted in nested similarity bands so
//! that analysing the log at each target criteria yields exactly the
//! requested SFT/SFTSC/IRQ counts:
//!
//! ```text
//! band k: max relative difference in (c[k+1], c[k]]   (innermost: ≤ c[last])
//! ```
//!
//! A query planted in band `k` is counted by rows `0..=k`, so band sizes are
//! the differences between consecutive rows. Every other query gets a top-two
//! pair that fails the loosest criteria.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::analysis::SatThreshold;
use crate::error::{Error, Result};
use crate::profile::{matches, DimensionScores, MatchingCriteria, DIMENSIONS};
use crate::record::{ClickEvent, Document, QueryRecord, ScoreMode};

/// Planted queries need two extra documents to pin each dimension's min and max.
const PLANTED_MIN_DOCS: usize = 4;
/// Smallest gap between consecutive target criteria.
const MIN_CRITERIA_GAP: f64 = 2e-3;
const MAX_REJECTIONS: usize = 10_000;

/// Target counts for one matching criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetRow {
    pub criteria: f64,
    pub sft: usize,
    pub sftsc: usize,
    pub irq: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DwellDistribution {
    pub mean: f64,
    pub std_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub seed: u64,
    pub total_queries: usize,
    /// Inclusive range of documents per query.
    pub docs_per_query: (usize, usize),
    pub target_rows: Option<Vec<TargetRow>>,
    pub sat_threshold_seconds: f64,
    /// Dwell of satisfied clicks; samples are kept at least 1 s above the threshold.
    pub sat_dwell: DwellDistribution,
    /// Dwell of short clicks; samples are kept at least 1 s below the threshold.
    pub short_dwell: DwellDistribution,
    /// Probability that a background document is clicked.
    pub click_rate: f64,
    /// Probability that a background click is satisfied.
    pub sat_click_share: f64,
    /// Scales the relative differences of non-deciding dimensions in planted
    /// pairs, and the perturbation of near-duplicate pairs in untargeted logs.
    pub profile_jitter: f64,
    /// Share of untargeted queries whose rank-2 profile copies rank 1 with jitter.
    pub similar_pair_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            total_queries: 1000,
            docs_per_query: (2, 6),
            target_rows: None,
            sat_threshold_seconds: crate::analysis::DEFAULT_SAT_SECONDS,
            sat_dwell: DwellDistribution {
                mean: 95.0,
                std_dev: 50.0,
            },
            short_dwell: DwellDistribution {
                mean: 10.0,
                std_dev: 7.0,
            },
            click_rate: 0.35,
            sat_click_share: 0.5,
            profile_jitter: 0.15,
            similar_pair_rate: 0.3,
        }
    }
}

impl SynthConfig {
    /// Calibration reproducing the published query-log counts.
    pub fn table1(seed: u64) -> Self {
        SynthConfig {
            seed,
            total_queries: 152_941,
            docs_per_query: (2, 5),
            target_rows: Some(vec![
                TargetRow {
                    criteria: 0.10,
                    sft: 309,
                    sftsc: 44,
                    irq: 40,
                },
                TargetRow {
                    criteria: 0.05,
                    sft: 238,
                    sftsc: 30,
                    irq: 27,
                },
                TargetRow {
                    criteria: 0.0,
                    sft: 170,
                    sftsc: 27,
                    irq: 25,
                },
            ]),
            profile_jitter: 0.5,
            ..SynthConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Infeasible(m));
        let (lo, hi) = self.docs_per_query;
        if lo == 0 || lo > hi {
            return bad(format!("docs_per_query ({lo}, {hi}) is not a valid range"));
        }
        for (name, v) in [
            ("click_rate", self.click_rate),
            ("sat_click_share", self.sat_click_share),
            ("profile_jitter", self.profile_jitter),
            ("similar_pair_rate", self.similar_pair_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must be in [0, 1], got {v}"));
            }
        }
        SatThreshold::new(self.sat_threshold_seconds)
            .map_err(|e| Error::Infeasible(e.to_string()))?;
        for d in [self.sat_dwell, self.short_dwell] {
            if !d.mean.is_finite() || !d.std_dev.is_finite() || d.std_dev < 0.0 {
                return bad(format!("invalid dwell distribution {d:?}"));
            }
        }
        let Some(rows) = &self.target_rows else {
            return Ok(());
        };
        for r in rows {
            if !(0.0..=1.0).contains(&r.criteria) {
                return bad(format!("criteria {} outside [0, 1]", r.criteria));
            }
            if !(r.irq <= r.sftsc && r.sftsc <= r.sft && r.sft <= self.total_queries) {
                return bad(format!(
                    "row {}: need irq <= sftsc <= sft <= total ({} queries), got {}/{}/{}",
                    r.criteria, self.total_queries, r.sft, r.sftsc, r.irq
                ));
            }
        }
        for w in rows.windows(2) {
            let (outer, inner) = (w[0], w[1]);
            if outer.criteria - inner.criteria < MIN_CRITERIA_GAP {
                return bad(format!(
                    "criteria must decrease by at least {MIN_CRITERIA_GAP}: {} then {}",
                    outer.criteria, inner.criteria
                ));
            }
        }
        for (k, band) in bands(rows).iter().enumerate() {
            let Some(band) = band else {
                return bad(format!(
                    "rows {} and {} are not nested (each count must shrink with the criteria)",
                    rows[k].criteria,
                    rows[k + 1].criteria
                ));
            };
            if band.irq > band.sftsc || band.sftsc > band.sft {
                return bad(format!(
                    "band at criteria {} is inconsistent",
                    rows[k].criteria
                ));
            }
        }
        if let Some(outer) = rows.first() {
            if outer.sft > 0 && hi < 2 {
                return bad("planted queries need at least two documents".into());
            }
            if outer.sft < self.total_queries && outer.criteria >= 1.0 && hi >= 2 {
                return bad("no pair can fail a matching criteria of 1".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct Band {
    sft: usize,
    sftsc: usize,
    irq: usize,
}

/// Per-band counts (differences of consecutive rows); `None` where nesting fails.
fn bands(rows: &[TargetRow]) -> Vec<Option<Band>> {
    (0..rows.len())
        .map(|k| {
            let r = rows[k];
            let (sft, sftsc, irq) = rows
                .get(k + 1)
                .map_or((0, 0, 0), |n| (n.sft, n.sftsc, n.irq));
            let band = Band {
                sft: r.sft.checked_sub(sft)?,
                sftsc: r.sftsc.checked_sub(sftsc)?,
                irq: r.irq.checked_sub(irq)?,
            };
            // Non-IRQ SFTSC queries nest as well.
            (r.sftsc - r.irq).checked_sub(sftsc - irq)?;
            Some(band)
        })
        .collect()
}

/// What a query contributes to the report.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Role {
    Background,
    /// Planted at the given relative difference.
    Planted {
        diff: f64,
        clicks: PlantedClicks,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PlantedClicks {
    SftOnly,
    SftscOnly,
    Irq,
}

struct Generator<'a> {
    cfg: &'a SynthConfig,
    rng: ChaCha8Rng,
    sat: Normal<f64>,
    short: Normal<f64>,
    threshold: f64,
}

/// Generates a log; deterministic for a fixed config.
pub fn generate(cfg: &SynthConfig) -> Result<Vec<QueryRecord>> {
    cfg.validate()?;
    let mut g = Generator {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        sat: Normal::new(cfg.sat_dwell.mean, cfg.sat_dwell.std_dev)
            .map_err(|e| Error::Infeasible(e.to_string()))?,
        short: Normal::new(cfg.short_dwell.mean, cfg.short_dwell.std_dev)
            .map_err(|e| Error::Infeasible(e.to_string()))?,
        threshold: cfg.sat_threshold_seconds,
    };
    let mut roles = planted_roles(cfg);
    roles.resize(cfg.total_queries, Role::Background);
    roles.shuffle(&mut g.rng);

    let width = cfg.total_queries.max(1).to_string().len();
    let loosest = cfg
        .target_rows
        .as_ref()
        .and_then(|r| r.first())
        .map(|r| MatchingCriteria::new(r.criteria))
        .transpose()?;

    roles
        .into_iter()
        .enumerate()
        .map(|(i, role)| {
            let id = format!("q{:0width$}", i + 1);
            match role {
                Role::Planted { diff, clicks } => g.planted(id, diff, clicks),
                Role::Background => match loosest {
                    Some(c) => g.background_not_matching(id, c),
                    None => g.background(id, cfg.similar_pair_rate),
                },
            }
        })
        .collect()
}

fn planted_roles(cfg: &SynthConfig) -> Vec<Role> {
    let Some(rows) = &cfg.target_rows else {
        return Vec::new();
    };
    let mut roles = Vec::new();
    for (k, band) in bands(rows).into_iter().enumerate() {
        let band = band.expect("validated");
        let upper = rows[k].criteria;
        let lower = rows.get(k + 1).map_or(0.0, |n| n.criteria);
        // The innermost band at criteria 0 holds identical pairs.
        let diff = if k + 1 == rows.len() {
            upper / 2.0
        } else {
            (upper + lower) / 2.0
        };
        let plant = |clicks| Role::Planted { diff, clicks };
        roles.extend(std::iter::repeat_n(plant(PlantedClicks::Irq), band.irq));
        roles.extend(std::iter::repeat_n(
            plant(PlantedClicks::SftscOnly),
            band.sftsc - band.irq,
        ));
        roles.extend(std::iter::repeat_n(
            plant(PlantedClicks::SftOnly),
            band.sft - band.sftsc,
        ));
    }
    roles
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

impl Generator<'_> {
    fn doc_count(&mut self, at_least: usize) -> usize {
        let (lo, hi) = self.cfg.docs_per_query;
        self.rng.random_range(lo.max(at_least)..=hi.max(at_least))
    }

    fn sat_dwell(&mut self) -> f64 {
        let x = round1(self.sat.sample(&mut self.rng));
        x.max((self.threshold + 1.0).ceil())
    }

    fn short_dwell(&mut self) -> f64 {
        let cap = (self.threshold - 1.0).max(0.0).floor();
        round1(self.short.sample(&mut self.rng)).clamp(0.0, cap)
    }

    fn click_sat(&mut self) -> (bool, f64) {
        (true, self.sat_dwell())
    }

    /// Not clicked, or clicked with a short dwell.
    fn click_not_sat(&mut self) -> (bool, f64) {
        if self.rng.random_bool(0.5) {
            (false, 0.0)
        } else {
            (true, self.short_dwell())
        }
    }

    fn click_random(&mut self) -> (bool, f64) {
        if !self.rng.random_bool(self.cfg.click_rate) {
            (false, 0.0)
        } else if self.rng.random_bool(self.cfg.sat_click_share) {
            self.click_sat()
        } else {
            (true, self.short_dwell())
        }
    }

    /// Random profiles in `[0, 1]` with one document pinned to 1 and another
    /// to 0 in each dimension.
    #[allow(clippy::needless_range_loop)]
    fn random_profiles(&mut self, n: usize) -> Vec<[f64; DIMENSIONS]> {
        let mut p: Vec<[f64; DIMENSIONS]> = (0..n)
            .map(|_| std::array::from_fn(|_| self.rng.random::<f64>()))
            .collect();
        if n >= 2 {
            for dim in 0..DIMENSIONS {
                let hi = self.rng.random_range(0..n);
                let lo = (hi + self.rng.random_range(1..n)) % n;
                p[hi][dim] = 1.0;
                p[lo][dim] = 0.0;
            }
        }
        p
    }

    /// Raw scores: a random affine image of each profile column.
    fn raw_scores(&mut self, profiles: &[[f64; DIMENSIONS]]) -> Vec<[f64; DIMENSIONS]> {
        let mut raw = vec![[0.0; DIMENSIONS]; profiles.len()];
        for dim in 0..DIMENSIONS {
            let offset: f64 = self.rng.random_range(-3.0..3.0);
            let scale: f64 = self.rng.random_range(0.5..5.0);
            for (r, p) in raw.iter_mut().zip(profiles) {
                r[dim] = round6(offset + scale * p[dim]);
            }
        }
        raw
    }

    fn record(
        &mut self,
        id: String,
        profiles: &[[f64; DIMENSIONS]],
        clicks: Vec<(bool, f64)>,
    ) -> Result<QueryRecord> {
        let raw = self.raw_scores(profiles);
        let docs = raw
            .into_iter()
            .zip(clicks)
            .enumerate()
            .map(|(i, (scores, (clicked, dwell)))| {
                let rank = i as u32 + 1;
                Ok(Document {
                    doc_id: format!("d{rank}"),
                    scores: DimensionScores::new(scores)?,
                    click: ClickEvent::new(rank, clicked, dwell)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        QueryRecord::new(id, docs)
    }

    fn background(&mut self, id: String, similar_rate: f64) -> Result<QueryRecord> {
        let n = self.doc_count(1);
        let mut p = self.random_profiles(n);
        if n >= 2 && self.rng.random_bool(similar_rate) {
            let exact = self.rng.random_bool(1.0 / 3.0);
            let jitter = self.cfg.profile_jitter;
            let top = p[0];
            for (v, t) in p[1].iter_mut().zip(top) {
                let shrink = if exact {
                    0.0
                } else {
                    self.rng.random::<f64>() * jitter
                };
                *v = t * (1.0 - shrink);
            }
        }
        let clicks = (0..n).map(|_| self.click_random()).collect();
        self.record(id, &p, clicks)
    }

    fn background_not_matching(
        &mut self,
        id: String,
        loosest: MatchingCriteria,
    ) -> Result<QueryRecord> {
        for _ in 0..MAX_REJECTIONS {
            let rec = self.background(id.clone(), 0.0)?;
            let (profiles, _) = rec.profiles(ScoreMode::Raw)?;
            match profiles.as_slice() {
                [a, b, ..] if matches(a, b, loosest) => continue,
                _ => return Ok(rec),
            }
        }
        Err(Error::Infeasible(format!(
            "could not draw a non-matching pair for {id} at criteria {loosest}"
        )))
    }

    fn planted(&mut self, id: String, diff: f64, clicks: PlantedClicks) -> Result<QueryRecord> {
        let n = self.doc_count(PLANTED_MIN_DOCS);
        let mut first = [0.0; DIMENSIONS];
        for v in first.iter_mut() {
            *v = self.rng.random_range(0.2..0.9);
        }
        let mut second = first;
        let deciding = self.rng.random_range(0..DIMENSIONS);
        for dim in 0..DIMENSIONS {
            let d = if dim == deciding {
                diff
            } else {
                diff * self.cfg.profile_jitter * self.rng.random::<f64>()
            };
            second[dim] = first[dim] * (1.0 - d);
            if self.rng.random_bool(0.5) {
                std::mem::swap(&mut first[dim], &mut second[dim]);
            }
        }

        let mut rest: Vec<[f64; DIMENSIONS]> = vec![[1.0; DIMENSIONS], [0.0; DIMENSIONS]];
        for _ in PLANTED_MIN_DOCS..n {
            rest.push(std::array::from_fn(|_| self.rng.random::<f64>()));
        }
        rest.shuffle(&mut self.rng);
        let mut profiles = vec![first, second];
        profiles.extend(rest);

        let (c1, c2) = match clicks {
            PlantedClicks::Irq => (self.click_not_sat(), self.click_sat()),
            PlantedClicks::SftscOnly => (self.click_sat(), self.click_sat()),
            PlantedClicks::SftOnly => {
                let c1 = self.click_random();
                (c1, self.click_not_sat())
            }
        };
        let mut cl = vec![c1, c2];
        cl.extend((2..n).map(|_| self.click_random()));
        self.record(id, &profiles, cl)
    }
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}
