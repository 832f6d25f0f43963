//! The subcommands, as plain functions over documents.

use std::thread;

use serde::Serialize;
use thiserror::Error;

use gamma0_core::{
    farey_order_sequence, label_all_sides, run_cllt, run_dklt, verify_bounds, verify_sequence,
    FareyFraction, FareySequence, Level, Seed, VerificationReport,
};

use crate::document::SequenceDocument;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] gamma0_core::Error),
}

impl CliError {
    /// Every error is a usage or I/O problem; verification failures are
    /// reported through [`VerificationReport`] instead.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Cllt,
    Dklt,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Cllt => "cllt",
            Algorithm::Dklt => "dklt",
        }
    }
}

/// The Farey sequence of order `r`.
pub fn cmd_order(r: i64) -> CliResult<SequenceDocument> {
    if r < 1 {
        return Err(CliError::Usage(format!("order must be at least 1, got {r}")));
    }
    Ok(SequenceDocument::unlabeled(&farey_order_sequence(r)?, "order"))
}

/// A complete, labeled Farey sequence for Γ0(N).
pub fn cmd_gamma0(n: i64, algorithm: Algorithm, seed: Seed) -> CliResult<SequenceDocument> {
    if n <= 3 {
        return Err(CliError::Usage(format!("level must be greater than 3, got {n}")));
    }
    let level = Level::new(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let seq = match algorithm {
        Algorithm::Cllt => run_cllt(&level, seed)?,
        Algorithm::Dklt => {
            if !level.is_prime_power() {
                return Err(CliError::Usage(format!(
                    "the dklt algorithm needs a prime-power level, got {n}"
                )));
            }
            run_dklt(&level)?.sequence
        }
    };
    Ok(SequenceDocument::labeled(&seq, &level, algorithm.tag()))
}

/// Parses a document, rejecting anything that is not valid JSON of the
/// right shape.
pub fn parse_document(text: &str) -> CliResult<SequenceDocument> {
    Ok(serde_json::from_str(text)?)
}

/// Re-derives everything a document claims. Bounds are checked only for
/// documents produced by the prime-power construction.
pub fn cmd_verify(doc: &SequenceDocument) -> CliResult<VerificationReport> {
    let info = doc
        .level
        .as_ref()
        .ok_or_else(|| CliError::Usage("document has no level to verify against".into()))?;
    let level = Level::new(info.n).map_err(|e| CliError::Usage(e.to_string()))?;

    let mut entries = Vec::with_capacity(doc.entries.len());
    let mut problems = Vec::new();
    for (i, e) in doc.entries.iter().enumerate() {
        if e.index != i {
            problems.push(format!("entry {i} has index {}", e.index));
        }
        match FareyFraction::new(e.num, e.den) {
            Ok(f) => entries.push(f),
            Err(err) => problems.push(format!("entry {i}: {err}")),
        }
    }
    let stated = info.p.zip(info.exponent);
    if stated.is_some() && stated != level.prime_power() {
        problems.push(format!("stated factorization {stated:?} is wrong for {}", info.n));
    }
    let seq = FareySequence::unverified(entries);
    let mut report = verify_sequence(&seq, &level);
    report.checks.insert(
        0,
        gamma0_core::Check {
            name: "document_entries".into(),
            passed: problems.is_empty(),
            detail: if problems.is_empty() {
                format!("{} well-formed entries", doc.entries.len())
            } else {
                problems.join("; ")
            },
        },
    );
    if !problems.is_empty() || report.find("neighbors").is_none_or(|c| !c.passed) {
        return Ok(report);
    }

    let expected = SequenceDocument::labeled(&label_all_sides(&seq, &level), &level, &doc.algorithm);
    let side_problem = if doc.sides.len() != expected.sides.len() {
        Some(format!("{} sides listed, {} expected", doc.sides.len(), expected.sides.len()))
    } else {
        doc.sides
            .iter()
            .zip(&expected.sides)
            .position(|(a, b)| a != b)
            .map(|i| format!("side {i} is {:?}, expected {:?}", doc.sides[i], expected.sides[i]))
    };
    report.checks.push(gamma0_core::Check {
        name: "document_sides".into(),
        passed: side_problem.is_none(),
        detail: side_problem.unwrap_or_else(|| "labels, partners and matrices match".into()),
    });
    report.checks.push(gamma0_core::Check {
        name: "document_stats".into(),
        passed: doc.stats == expected.stats,
        detail: if doc.stats == expected.stats {
            "stats match".into()
        } else {
            format!("stats {:?}, expected {:?}", doc.stats, expected.stats)
        },
    });
    if doc.algorithm == Algorithm::Dklt.tag() {
        report.merge(verify_bounds(&seq, &level));
    }
    Ok(report)
}

/// Outcome of one level in a batch run.
#[derive(Clone, Debug, Serialize)]
pub struct BatchResult {
    pub level: i64,
    pub passed: bool,
    pub members: usize,
    pub max_denominator: i64,
    pub error: Option<String>,
}

fn batch_one(n: i64, algorithm: Algorithm, seed: Seed) -> BatchResult {
    let outcome = cmd_gamma0(n, algorithm, seed).and_then(|doc| {
        let report = cmd_verify(&doc)?;
        Ok((doc, report))
    });
    match outcome {
        Ok((doc, report)) => BatchResult {
            level: n,
            passed: report.passed(),
            members: doc.stats.members,
            max_denominator: doc.stats.max_denominator,
            error: report.failures().next().map(|c| format!("{}: {}", c.name, c.detail)),
        },
        Err(e) => BatchResult { level: n, passed: false, members: 0, max_denominator: 0, error: Some(e.to_string()) },
    }
}

/// Constructs and verifies every level, spreading the work over `jobs`
/// threads. Results come back in the order of `levels`.
pub fn cmd_batch(levels: &[i64], algorithm: Algorithm, seed: Seed, jobs: usize) -> Vec<BatchResult> {
    let jobs = jobs.clamp(1, levels.len().max(1));
    let mut slots: Vec<Option<BatchResult>> = vec![None; levels.len()];
    let chunk = levels.len().div_ceil(jobs).max(1);
    thread::scope(|s| {
        for (lv, out) in levels.chunks(chunk).zip(slots.chunks_mut(chunk)) {
            s.spawn(move || {
                for (&n, slot) in lv.iter().zip(out) {
                    *slot = Some(batch_one(n, algorithm, seed));
                }
            });
        }
    });
    slots.into_iter().map(|r| r.expect("every slot is filled")).collect()
}

/// Human-readable rendering of a report.
pub fn report_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        out.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    out.push_str(&format!(
        "{} (N = {}, {} members, max denominator {} x{})\n",
        if report.passed() { "VERIFIED" } else { "REJECTED" },
        report.level,
        report.member_count,
        report.max_denominator,
        report.max_denominator_multiplicity
    ));
    out
}
