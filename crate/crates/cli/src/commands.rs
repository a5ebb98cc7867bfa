use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use shared_state::checker::{
    check_equal, check_refines, denote_any, denote_b, hush_redundancy, run_nogo2,
    run_nogo3, validate_axioms, CheckError, Denotation, Report, SampleConfig, Verdict, Witness,
    WitnessSide,
};
use shared_state::kernel::Term;
use shared_state::presentations::{apply_translation, find_translation, PresentationError, Theory};
use shared_state::store::{Locations, StoreError};
use shared_state::traces::{par, TraceError, TraceSet};
use thiserror::Error;

use crate::syntax::{parse_file, print_term, ParseError, TermFile};

/// Most locations the command line accepts.
pub const MAX_CLI_LOCATIONS: usize = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{err}")]
    Parse { path: PathBuf, err: ParseError },
    #[error("cannot read {path}: {err}")]
    Io { path: PathBuf, err: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

/// Exit status when a checked relation holds or every check passes.
pub const EXIT_HOLDS: i32 = 0;
/// Exit status when a relation is refuted or a check fails.
pub const EXIT_REFUTED: i32 = 1;
/// Exit status for parse, sort and configuration errors.
pub const EXIT_ERROR: i32 = 2;

/// Locations from a comma-separated list, with a warning on stderr past two.
pub fn parse_locs(list: &str, warn: &mut dyn Write) -> Result<Locations, CliError> {
    let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let locs = Locations::new(names)?;
    check_locs(&locs, warn)?;
    Ok(locs)
}

fn check_locs(locs: &Locations, warn: &mut dyn Write) -> Result<(), CliError> {
    if locs.len() > MAX_CLI_LOCATIONS {
        return Err(CliError::Usage(format!(
            "at most {MAX_CLI_LOCATIONS} locations are supported, got {}",
            locs.len()
        )));
    }
    if locs.len() > 2 {
        writeln!(
            warn,
            "warning: {} locations give {} stores; every enumeration scales with 2^|locations|",
            locs.len(),
            locs.store_count()
        )?;
    }
    Ok(())
}

pub fn load(path: &Path, locs: &Locations, warn: &mut dyn Write) -> Result<TermFile, CliError> {
    let src = std::fs::read_to_string(path).map_err(|err| CliError::Io {
        path: path.to_path_buf(),
        err,
    })?;
    let file = parse_file(&src, locs).map_err(|err| CliError::Parse {
        path: path.to_path_buf(),
        err,
    })?;
    if file.explicit_locs {
        check_locs(&file.locs, warn)?;
    }
    Ok(file)
}

fn named<'a>(file: &'a TermFile, name: &str) -> Result<&'a Term, CliError> {
    file.term(name)
        .ok_or_else(|| CliError::Usage(format!("no term named `{name}`")))
}

fn report_verdict(v: &Verdict, locs: &Locations, out: &mut dyn Write) -> Result<i32, CliError> {
    if v.holds {
        writeln!(out, "holds")?;
        return Ok(EXIT_HOLDS);
    }
    let side = match v.direction {
        Some(WitnessSide::RightOnly) => "right side only",
        _ => "left side only",
    };
    writeln!(out, "refuted")?;
    if let Some(w) = &v.witness {
        writeln!(out, "witness ({side}): {}", w.show(locs))?;
        if let Witness::Trace(t) = w {
            writeln!(out, "state-changing transitions: {}", t.state_changes())?;
        }
    }
    Ok(EXIT_REFUTED)
}

/// `lhs = rhs`. Exit 0 when provable, 1 with a witness otherwise.
pub fn cmd_eq(file: &TermFile, lhs: &str, rhs: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let v = check_equal(file.theory, &file.locs, &file.ctx, named(file, lhs)?, named(file, rhs)?)?;
    report_verdict(&v, &file.locs, out)
}

/// `lhs ≤ rhs`.
pub fn cmd_refines(file: &TermFile, lhs: &str, rhs: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let v = check_refines(file.theory, &file.locs, &file.ctx, named(file, lhs)?, named(file, rhs)?)?;
    report_verdict(&v, &file.locs, out)
}

pub fn traces_json(k: &TraceSet, locs: &Locations) -> Value {
    Value::Array(
        k.generators()
            .map(|g| {
                let steps: Vec<Value> = g
                    .steps()
                    .iter()
                    .map(|t| json!([locs.render(t.from), locs.render(t.to)]))
                    .collect();
                json!({
                    "start_sort": g.start().keyword(),
                    "transitions": steps,
                    "value_sort": g.value_sort().keyword(),
                    "value": g.value().to_string(),
                })
            })
            .collect(),
    )
}

fn write_traces(k: &TraceSet, locs: &Locations, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&traces_json(k, locs)).expect("serialisable"))?;
    } else {
        for g in k.generators() {
            writeln!(out, "{}", g.show(locs))?;
        }
    }
    Ok(())
}

/// Prints the canonical generators of a term's denotation.
pub fn cmd_denote(file: &TermFile, name: &str, json: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let t = named(file, name)?;
    let locs = &file.locs;
    match denote_any(file.theory, locs, &file.ctx, t)? {
        Denotation::Traces(k) => write_traces(&k, locs, json, out)?,
        Denotation::Table(table) => {
            if json {
                let rows: Vec<Value> = table
                    .rows()
                    .map(|(s, row)| {
                        let outs: Vec<Value> =
                            row.iter().map(|(x, r)| json!([x.to_string(), locs.render(*r)])).collect();
                        json!({ "from": locs.render(s), "outcomes": outs })
                    })
                    .collect();
                writeln!(out, "{}", serde_json::to_string_pretty(&Value::Array(rows)).expect("serialisable"))?;
            } else {
                for (s, row) in table.rows() {
                    let outs: Vec<String> =
                        row.iter().map(|(x, r)| format!("({x}, {})", locs.render(*r))).collect();
                    writeln!(out, "{} ↦ {{{}}}", locs.render(s), outs.join(", "))?;
                }
            }
        }
        Denotation::Values(vs) => {
            let names: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            if json {
                writeln!(out, "{}", json!(names))?;
            } else {
                for n in names {
                    writeln!(out, "{n}")?;
                }
            }
        }
    }
    Ok(EXIT_HOLDS)
}

/// Prints the image of a term under the translation from `from` to `to`.
pub fn cmd_translate(
    file: &TermFile,
    name: &str,
    from: Option<Theory>,
    to: Theory,
    sexp: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let from = from.unwrap_or(file.theory);
    if from != file.theory {
        return Err(CliError::Usage(format!(
            "the file is written in {}, not {from}",
            file.theory
        )));
    }
    let e = find_translation(&file.locs, from, to)
        .ok_or_else(|| CliError::Usage(format!("no translation from {from} to {to}")))?;
    let image = apply_translation(&e, named(file, name)?)?;
    if sexp {
        writeln!(out, "{}", print_term(&image, &file.locs))?;
    } else {
        writeln!(out, "{}", image.show(&file.locs))?;
    }
    Ok(EXIT_HOLDS)
}

fn finish(report: &Report, out: &mut dyn Write) -> Result<i32, CliError> {
    write!(out, "{report}")?;
    let verdict = if report.passed() { "all passed" } else { "FAILED" };
    writeln!(out, "{verdict}: {} checks", report.checked())?;
    Ok(if report.passed() { EXIT_HOLDS } else { EXIT_REFUTED })
}

/// Validates every axiom instance of `theory` under sampled environments.
pub fn cmd_axioms(theory: Theory, locs: &Locations, cfg: &SampleConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    finish(&validate_axioms(theory, locs, cfg)?, out)
}

/// The no-go experiments: 2 for the single-cell witness, 3 for yield and
/// hush on closed sets.
pub fn cmd_nogo(
    which: u8,
    depth: usize,
    locs: &Locations,
    cfg: &SampleConfig,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let report = match which {
        2 => run_nogo2(locs, depth)?,
        3 => {
            let mut r = run_nogo3(locs, cfg)?;
            r.extend(hush_redundancy(locs, cfg, 3)?);
            r
        }
        other => return Err(CliError::Usage(format!("no experiment {other}; expected 2 or 3"))),
    };
    finish(&report, out)
}

/// Interleavings of two transitions-theory terms, valued by pairs.
pub fn cmd_par(file: &TermFile, n1: &str, n2: &str, json: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let locs = &file.locs;
    let (k1, k2) = match file.theory {
        Theory::B => (
            denote_b(locs, &file.ctx, named(file, n1)?)?,
            denote_b(locs, &file.ctx, named(file, n2)?)?,
        ),
        other => return Err(CliError::Usage(format!("par needs a B file, this one is {other}"))),
    };
    let k = par(&k1, &k2, |a, b| format!("({a},{b})").into())?;
    write_traces(&k, locs, json, out)?;
    Ok(EXIT_HOLDS)
}
