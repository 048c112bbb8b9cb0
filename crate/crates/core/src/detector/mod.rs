//! Local-global dependence detection.
//!
//! Both detectors stream primes in increasing order, solve the membership
//! problem in each reduced group and intersect the resulting coefficient
//! cosets. An unsolvable prime proves independence outright; a dependence is
//! only reported after the proposed relation has been checked exactly.

mod ec;
mod mul;
mod pipeline;
mod report;
mod witness;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ec_finite::{FiniteError, LocalMembership};

pub use ec::{detect_ec, EcProblem};
pub use mul::{detect_mul, multiplicative_dlog, primitive_root, MulProblem};
pub use pipeline::{run_pipeline, LocalProblem, PrimeOutcome};
pub use report::{local_report, LocalReport};
pub use witness::{find_witness_primes, WitnessMatch, WitnessQuery, WitnessReport};

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    pub prime_bound: u64,
    pub stability_window: usize,
    pub coeff_bound: BigInt,
    pub saturation_bound: u64,
    pub seed: u64,
    /// Largest tolerated `skipped / processed` before a run without a
    /// certificate is called off.
    pub max_skipped_fraction: f64,
    pub worker_count: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            prime_bound: 100_000,
            stability_window: 5,
            coeff_bound: BigInt::from(1u64 << 20),
            saturation_bound: 64,
            seed: 0x5eed,
            max_skipped_fraction: 0.1,
            worker_count: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug, Error)]
pub enum DetectorError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{p} is not a prime of good reduction")]
    BadPrime { p: u64 },
    #[error(transparent)]
    Finite(#[from] FiniteError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Why `P` is not in the subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `r_p(P)` is not in `r_p(Lambda)`; `local` was recomputed from scratch
    /// before being reported.
    LocalObstruction { witness_prime: u64, local: LocalMembership },
    /// `P` is a nonzero torsion element and `Lambda` is torsion-free.
    Torsion { order: u32 },
    /// `-x = prod g_i^c_i` exactly, so `x` differs from an element of the
    /// subgroup by the torsion element `-1`.
    SignMismatch { coeffs: Vec<BigInt> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconclusiveReason {
    BudgetExhausted,
    NoStableCandidate,
    TooManySkippedPrimes,
}

impl InconclusiveReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            InconclusiveReason::BudgetExhausted => "budget_exhausted",
            InconclusiveReason::NoStableCandidate => "no_stable_candidate",
            InconclusiveReason::TooManySkippedPrimes => "too_many_skipped_primes",
        }
    }
}

/// Outcome of a detection run. `Dependent` and `SaturationNeeded` are only
/// built after the relation was checked with exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Dependent { coeffs: Vec<BigInt> },
    Independent { certificate: Certificate },
    SaturationNeeded { a: u64, coeffs: Vec<BigInt> },
    Inconclusive { reason: InconclusiveReason },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Dependent { .. } => "dependent",
            Verdict::Independent { .. } => "independent",
            Verdict::SaturationNeeded { .. } => "saturation_needed",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn coeffs(&self) -> Option<&[BigInt]> {
        match self {
            Verdict::Dependent { coeffs } | Verdict::SaturationNeeded { coeffs, .. } => Some(coeffs),
            _ => None,
        }
    }

    pub fn witness_prime(&self) -> Option<u64> {
        match self {
            Verdict::Independent {
                certificate: Certificate::LocalObstruction { witness_prime, .. },
            } => Some(*witness_prime),
            _ => None,
        }
    }
}

/// Candidate after one absorbed prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub prime: u64,
    pub candidate: Option<Vec<BigInt>>,
    pub stable_for: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedPrime {
    pub prime: u64,
    pub reason: String,
}

/// Everything a run did, in prime order. Identical for identical inputs and
/// seed whatever the worker count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub verdict: Verdict,
    pub primes_processed: usize,
    pub skipped: Vec<SkippedPrime>,
    pub stability_trace: Vec<TraceEntry>,
    pub warnings: Vec<String>,
    /// Events that contradict the theory the detector relies on, such as the
    /// saturation fallback succeeding.
    pub alarms: Vec<String>,
    pub seed: u64,
}

impl RunReport {
    pub fn primes_skipped(&self) -> usize {
        self.skipped.len()
    }

    pub(crate) fn immediate(verdict: Verdict, seed: u64) -> Self {
        RunReport {
            verdict,
            primes_processed: 0,
            skipped: Vec::new(),
            stability_trace: Vec::new(),
            warnings: Vec::new(),
            alarms: Vec::new(),
            seed,
        }
    }
}

/// Per-prime generator seed, so that results never depend on scheduling.
pub(crate) fn prime_seed(seed: u64, p: u64) -> u64 {
    let mut z = seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed used when re-deriving a witness independently of the main run.
pub(crate) fn recheck_seed(seed: u64) -> u64 {
    prime_seed(!seed, 0x0072_6563_6865_636b)
}
