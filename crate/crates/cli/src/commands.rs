use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use orderfx_core::analysis::{find_irq, find_sft, find_sftsc};
use orderfx_core::synth::{generate, SynthConfig};
use orderfx_core::{
    analyze as run_analysis, explain as explain_pair, explain_auto, order_effect, prepare,
    read_jsonl, write_jsonl, Dimension, Error, MatchingCriteria, PreparedQuery, QueryRecord,
    SatThreshold, ScoreMode, StateVector,
};

use crate::format;
use crate::{AnalyzeArgs, ExplainArgs, ExplainFormat, Format, InputArgs, ProjectArgs, SynthArgs};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_IO: u8 = 2;
pub const EXIT_INVALID: u8 = 3;
pub const EXIT_INFEASIBLE: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Domain { .. } => EXIT_USAGE,
            Error::Io(_) => EXIT_IO,
            Error::Contract(_)
            | Error::Validation { .. }
            | Error::Parse { .. }
            | Error::NotFound(_) => EXIT_INVALID,
            Error::Infeasible(_) => EXIT_INFEASIBLE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn load(path: &Path) -> Result<Vec<QueryRecord>, Failure> {
    let file = File::open(path).map_err(|e| Failure::io(path, e))?;
    read_jsonl(BufReader::new(file)).map_err(|e| match e {
        Error::Io(e) => Failure::io(path, e),
        other => other.into(),
    })
}

fn prepared(
    input: &InputArgs,
) -> Result<(Vec<QueryRecord>, Vec<PreparedQuery>, SatThreshold), Failure> {
    let threshold = SatThreshold::new(input.sat_dwell)?;
    let log = load(&input.input)?;
    let mode = if input.normalized {
        ScoreMode::Normalized
    } else {
        ScoreMode::Raw
    };
    let prepared = prepare(&log, mode)?;
    Ok((log, prepared, threshold))
}

fn emit(out: Option<&Path>, body: &str) -> CmdResult {
    match out {
        Some(path) => {
            let mut f = File::create(path).map_err(|e| Failure::io(path, e))?;
            f.write_all(body.as_bytes())
                .map_err(|e| Failure::io(path, e))
        }
        None => io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn criteria(values: &[f64]) -> Result<Vec<MatchingCriteria>, Failure> {
    if values.is_empty() {
        return Err(Failure::usage("at least one matching criteria is required"));
    }
    values
        .iter()
        .map(|&c| MatchingCriteria::new(c).map_err(Failure::from))
        .collect()
}

pub fn analyze(args: AnalyzeArgs) -> CmdResult {
    let criteria = criteria(&args.criteria)?;
    let (_, log, threshold) = prepared(&args.input)?;
    let report = run_analysis(&log, &criteria, threshold)?;
    let body = match args.format {
        Format::Csv => format::report_csv(&report),
        Format::Json => format::report_json(&report),
        Format::Text => format::report_text(&report),
    };
    emit(args.out.as_deref(), &body)
}

fn parse_dims(dims: &[String]) -> Result<(Dimension, Dimension), Failure> {
    match dims {
        [first, second] => {
            let f: Dimension = first
                .parse()
                .map_err(|e: Error| Failure::usage(e.to_string()))?;
            let s: Dimension = second
                .parse()
                .map_err(|e: Error| Failure::usage(e.to_string()))?;
            if f == s {
                return Err(Failure::usage(format!(
                    "--dims needs two different dimensions, got {f} twice"
                )));
            }
            Ok((f, s))
        }
        _ => Err(Failure::usage(
            "--dims takes exactly two comma-separated dimensions",
        )),
    }
}

pub fn explain(args: ExplainArgs) -> CmdResult {
    let dims = args.dims.as_deref().map(parse_dims).transpose()?;
    let c = MatchingCriteria::new(args.criteria)?;
    let (_, log, threshold) = prepared(&args.input)?;
    let query = log
        .iter()
        .find(|q| q.query_id == args.query)
        .ok_or_else(|| Failure::from(Error::NotFound(args.query.clone())))?;
    let [d1, d2] = match query.profiles.as_slice() {
        [a, b, ..] => [a, b],
        _ => {
            return Err(Failure {
                code: EXIT_INVALID,
                message: format!("query {} has fewer than two documents", query.query_id),
            })
        }
    };

    let single = std::slice::from_ref(query);
    let sft = find_sft(single, c);
    let irq = find_irq(single, &find_sftsc(single, &sft, threshold), threshold);
    if irq.is_empty() {
        eprintln!(
            "warning: query {} is not an irrational-behaviour query at criteria {c}",
            query.query_id
        );
    }

    let explanation = match dims {
        Some((f, s)) => explain_pair(&query.query_id, d1, d2, f, s)?,
        None => explain_auto(&query.query_id, d1, d2)?,
    };
    let body = match args.format {
        ExplainFormat::Json => format::explanation_json(&explanation, d1, d2),
        ExplainFormat::Text => format::explanation_text(&explanation, d1, d2),
    };
    emit(None, &body)
}

pub fn project(args: ProjectArgs) -> CmdResult {
    let first = StateVector::from_probability(args.p_first)
        .map_err(|e| Failure::usage(format!("--p-first: {e}")))?;
    let second = StateVector::from_probability(args.p_second)
        .map_err(|e| Failure::usage(format!("--p-second: {e}")))?;
    let rep = orderfx_core::BasisRepresentation::new("A", first, "B", second)?;
    let change = orderfx_core::hilbert::change_of_basis(&rep)?;
    let fx = order_effect(first, second)?;
    emit(None, &format::projection_text(first, second, &change, &fx))
}

fn synth_config(args: &SynthArgs) -> Result<SynthConfig, Failure> {
    let mut cfg = if args.table1 {
        SynthConfig::table1(0)
    } else if let Some(path) = &args.config {
        let file = File::open(path).map_err(|e| Failure::io(path, e))?;
        serde_json::from_reader(BufReader::new(file)).map_err(|e| Failure {
            code: EXIT_INVALID,
            message: format!("{}: {e}", path.display()),
        })?
    } else {
        SynthConfig::default()
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(n) = args.queries {
        cfg.total_queries = n;
    }
    Ok(cfg)
}

pub fn synth(args: SynthArgs) -> CmdResult {
    let cfg = synth_config(&args)?;
    let log = generate(&cfg)?;
    let path = &args.out;
    let file = File::create(path).map_err(|e| Failure::io(path, e))?;
    write_jsonl(&log, BufWriter::new(file)).map_err(|e| match e {
        Error::Io(e) => Failure::io(path, e),
        other => other.into(),
    })?;
    println!("{}", format::synth_summary(&log, &cfg));
    Ok(())
}
