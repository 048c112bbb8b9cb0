//! Front end for the `localglobal` detectors: job documents in, result
//! documents out.
//!
//! The non-CM hypothesis behind termination on elliptic curves is not
//! checked. Verdicts stay correct on CM curves because dependences are
//! verified exactly and independences carry a local certificate; only an
//! `inconclusive` run becomes more likely.

mod job;
mod output;

use localglobal::detector::{
    detect_ec, detect_mul, find_witness_primes, local_report, DetectorError, Verdict, WitnessQuery,
};
use localglobal::ec_rational::torsion_subgroup;
use thiserror::Error;

pub use job::{
    emit_job, parse_curve, parse_job, parse_point, parse_rational, ConfigOverrides, JobSpec, Mode, Task,
    MAX_COEFF_BOUND,
};
pub use output::{DetectDoc, LocalReportDoc, TorsionDoc, WitnessDoc};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<DetectorError> for CliError {
    fn from(e: DetectorError) -> Self {
        match e {
            DetectorError::InvalidInput(_) | DetectorError::BadPrime { .. } => CliError::Input(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

/// A finished job: the machine document and a one-paragraph summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: String,
    pub summary: String,
}

fn render<T: serde::Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}

fn verdict_summary(v: &Verdict, processed: usize, skipped: usize) -> String {
    let detail = match v {
        Verdict::Dependent { coeffs } => format!("coefficients {coeffs:?}"),
        Verdict::Independent { certificate } => format!("{certificate:?}"),
        Verdict::SaturationNeeded { a, coeffs } => format!("SOUNDNESS ALARM: a = {a}, coefficients {coeffs:?}"),
        Verdict::Inconclusive { reason } => reason.as_str().to_string(),
    };
    format!("{}: {detail} ({processed} primes, {skipped} skipped)", v.name())
}

pub fn run(job: &JobSpec) -> Result<Outcome, CliError> {
    let cfg = job.config.to_config()?;
    let mode = job.mode();
    let (document, summary) = match &job.task {
        Task::EcDetect { curve, target, gens } => {
            let r = detect_ec(curve, target, gens, &cfg)?;
            let s = verdict_summary(&r.verdict, r.primes_processed, r.primes_skipped());
            (render(&output::detect_doc(mode, &r, &cfg)), s)
        }
        Task::MulDetect { target, gens } => {
            let r = detect_mul(target, gens, &cfg)?;
            let s = verdict_summary(&r.verdict, r.primes_processed, r.primes_skipped());
            (render(&output::detect_doc(mode, &r, &cfg)), s)
        }
        Task::Witness {
            curve,
            points,
            i,
            j,
            ell,
            m,
        } => {
            let zero_based = |v: &[usize]| -> Result<Vec<usize>, CliError> {
                v.iter()
                    .map(|&k| k.checked_sub(1).ok_or_else(|| CliError::Input("i, j: indices start at 1".into())))
                    .collect()
            };
            let q = WitnessQuery {
                i: zero_based(i)?,
                j: zero_based(j)?,
                ell: *ell,
                m: *m,
                prime_bound: cfg.prime_bound,
            };
            let r = find_witness_primes(curve, points, &q, &cfg)?;
            let s = format!(
                "witness: {} of {} scanned primes match ({} skipped)",
                r.matches.len(),
                r.scanned,
                r.skipped.len()
            );
            (render(&output::witness_doc(&q, &r, cfg.seed)), s)
        }
        Task::LocalReport {
            curve,
            target,
            gens,
            prime,
        } => {
            let r = local_report(curve, target, gens, *prime, &cfg)?;
            let s = format!(
                "E(F_{}) has order {} = Z/{} x Z/{}; target {}",
                r.p,
                r.n,
                r.d1,
                r.d2,
                if r.membership.is_unsolvable() { "outside the reduced subgroup" } else { "inside the reduced subgroup" }
            );
            (render(&output::local_report_doc(&r, cfg.seed)), s)
        }
        Task::Torsion { curve } => {
            let t = torsion_subgroup(curve).map_err(|e| CliError::Internal(e.to_string()))?;
            let s = format!("torsion subgroup of {curve} has order {}", t.order);
            (render(&output::torsion_doc(curve, &t)), s)
        }
    };
    Ok(Outcome { document, summary })
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
