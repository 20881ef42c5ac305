//! Rendering of reports and walkthroughs. Text output uses four decimals;
//! CSV and JSON keep full precision except the IRQ percentage (two decimals).

use std::fmt::Write;

use orderfx_core::hilbert::BasisChange;
use orderfx_core::synth::SynthConfig;
use orderfx_core::{
    AnalysisReport, Dimension, DimensionalProfile, Explanation, OrderEffect, QueryRecord,
    StateVector,
};
use serde::Serialize;

pub const CSV_HEADER: &str = "matching_criteria,sft,sftsc,irq,irq_percent_of_sft";

pub fn report_csv(report: &AnalysisReport) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{:.2}",
            r.matching_criteria,
            r.sft,
            r.sftsc,
            r.irq,
            r.irq_percent_rounded()
        );
    }
    s
}

#[derive(Serialize)]
struct JsonRow {
    matching_criteria: f64,
    sft: usize,
    sftsc: usize,
    irq: usize,
    irq_percent_of_sft: f64,
}

#[derive(Serialize)]
struct JsonReport {
    total_queries: usize,
    skipped_queries: usize,
    degenerate_queries: usize,
    sat_threshold_seconds: f64,
    rows: Vec<JsonRow>,
}

pub fn report_json(report: &AnalysisReport) -> String {
    let out = JsonReport {
        total_queries: report.total_queries,
        skipped_queries: report.skipped_queries,
        degenerate_queries: report.degenerate_queries,
        sat_threshold_seconds: report.sat_threshold_seconds.seconds(),
        rows: report
            .rows
            .iter()
            .map(|r| JsonRow {
                matching_criteria: r.matching_criteria.threshold(),
                sft: r.sft,
                sftsc: r.sftsc,
                irq: r.irq,
                irq_percent_of_sft: r.irq_percent_rounded(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&out).expect("report serializes");
    s.push('\n');
    s
}

/// `0.05` → `5%`.
fn as_percent(fraction: f64) -> String {
    let p = (fraction * 100.0 * 1e4).round() / 1e4;
    format!("{p}%")
}

pub fn report_text(report: &AnalysisReport) -> String {
    let head = [
        "Matching Criteria",
        "SFT",
        "SFTSC",
        "IRQ",
        "IRQ percent(of SFT)",
    ];
    let rows: Vec<[String; 5]> = report
        .rows
        .iter()
        .map(|r| {
            [
                as_percent(r.matching_criteria.threshold()),
                r.sft.to_string(),
                r.sftsc.to_string(),
                r.irq.to_string(),
                format!("{:.2}", r.irq_percent_rounded()),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..5)
        .map(|i| {
            rows.iter()
                .map(|r| r[i].len())
                .chain([head[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut s = String::new();
    let line = |cells: &[&str]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join(" | ")
    };
    let _ = writeln!(s, "{}", line(&head));
    let _ = writeln!(
        s,
        "{}",
        widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .join("-+-")
    );
    for r in &rows {
        let cells: Vec<&str> = r.iter().map(String::as_str).collect();
        let _ = writeln!(s, "{}", line(&cells));
    }
    let _ = writeln!(
        s,
        "\ntotal queries: {}, skipped (< 2 documents): {}, degenerate: {}, SAT dwell > {} s",
        report.total_queries,
        report.skipped_queries,
        report.degenerate_queries,
        report.sat_threshold_seconds.seconds()
    );
    s
}

fn ratio_text(r: Option<f64>) -> String {
    r.map_or_else(|| "undefined".to_owned(), |r| format!("{r:.4}"))
}

pub fn explanation_text(
    e: &Explanation,
    d1: &DimensionalProfile,
    d2: &DimensionalProfile,
) -> String {
    let (f, s2) = (e.dim_first, e.dim_second);
    let mut s = String::new();
    let _ = writeln!(s, "query {}", e.query_id);
    let _ = write!(s, "Document rank");
    for d in Dimension::ALL {
        let _ = write!(s, " | {:>6}", d.letter());
    }
    s.push('\n');
    for (rank, p) in [(1, d1), (2, d2)] {
        let _ = write!(s, "{rank:>13}");
        for d in Dimension::ALL {
            let _ = write!(s, " | {:.4}", p.get(d));
        }
        s.push('\n');
    }
    let _ = writeln!(
        s,
        "\ndimensions: {f} (first), {s2} (second){}",
        if e.degenerate {
            " [degenerate profile]"
        } else {
            ""
        }
    );
    let _ = writeln!(
        s,
        "|d1> = {:.4}|{f}> + {:.4}|~{f}> = {:.4}|{s2}> + {:.4}|~{s2}>",
        d1.amplitude(f),
        (1.0 - d1.get(f)).sqrt(),
        d1.amplitude(s2),
        (1.0 - d1.get(s2)).sqrt()
    );
    let _ = writeln!(s, "|<{f}|{s2}>|^2 = {:.4}", e.cross_probability);
    for (rank, o) in [(1, e.d1), (2, e.d2)] {
        let _ = writeln!(
            s,
            "document {rank}: {f} -> {s2} = {:.4}, {s2} -> {f} = {:.4}",
            o.first_then_second, o.second_then_first
        );
    }
    let _ = writeln!(
        s,
        "document 1 judged {s2} -> {f}: {:.4}\ndocument 2 judged {f} -> {s2}: {:.4}\nratio: {}",
        e.p_reverse,
        e.p_forward,
        ratio_text(e.ratio)
    );
    s
}

#[derive(Serialize)]
struct JsonExplanation<'a> {
    #[serde(flatten)]
    explanation: &'a Explanation,
    profile_d1: &'a DimensionalProfile,
    profile_d2: &'a DimensionalProfile,
}

pub fn explanation_json(
    e: &Explanation,
    d1: &DimensionalProfile,
    d2: &DimensionalProfile,
) -> String {
    let mut s = serde_json::to_string_pretty(&JsonExplanation {
        explanation: e,
        profile_d1: d1,
        profile_d2: d2,
    })
    .expect("explanation serializes");
    s.push('\n');
    s
}

fn ket(v: StateVector, first: &str, second: &str) -> String {
    let sign = if v.b() < 0.0 { '-' } else { '+' };
    // `+ 0.0` folds -0.0 into 0.0.
    format!(
        "{:.4}|{first}> {sign} {:.4}|{second}>",
        v.a() + 0.0,
        v.b().abs()
    )
}

pub fn projection_text(
    first: StateVector,
    second: StateVector,
    change: &BasisChange,
    fx: &OrderEffect,
) -> String {
    let p_a = first.a() * first.a();
    let p_b = second.a() * second.a();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "state in basis A:  |S> = {}   P(A) = {p_a:.4}",
        ket(first, "A", "~A")
    );
    let _ = writeln!(
        s,
        "state in basis B:  |S> = {}   P(B) = {p_b:.4}",
        ket(second, "B", "~B")
    );
    let _ = writeln!(s, "basis B in basis A:");
    let _ = writeln!(s, "  |B>  = {}", ket(change.c_in_ab, "A", "~A"));
    let _ = writeln!(s, "  |~B> = {}", ket(change.d_in_ab, "A", "~A"));
    let _ = writeln!(s, "|<A|B>|^2 = {:.4}", fx.cross_probability);
    let _ = writeln!(
        s,
        "P(A, B) = {p_a:.4} * {:.4} = {:.4}",
        fx.cross_probability, fx.p_ab
    );
    let _ = writeln!(
        s,
        "P(B, A) = {p_b:.4} * {:.4} = {:.4}",
        fx.cross_probability, fx.p_ba
    );
    let _ = writeln!(
        s,
        "delta = {:.4}, ratio = {}",
        fx.delta,
        ratio_text(fx.ratio)
    );
    s
}

pub fn synth_summary(log: &[QueryRecord], cfg: &SynthConfig) -> String {
    let docs: usize = log.iter().map(|q| q.docs().len()).sum();
    let clicks = log
        .iter()
        .flat_map(|q| q.docs())
        .filter(|d| d.click.clicked)
        .count();
    let sat = log
        .iter()
        .flat_map(|q| q.docs())
        .filter(|d| d.click.clicked && d.click.dwell_seconds > cfg.sat_threshold_seconds)
        .count();
    format!(
        "seed {}: {} queries, {docs} documents, {clicks} clicks ({sat} satisfied)",
        cfg.seed,
        log.len()
    )
}
