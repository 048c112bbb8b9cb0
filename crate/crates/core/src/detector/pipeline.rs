use std::collections::HashSet;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::ec_finite::LocalMembership;
use crate::relation_solver::{candidate, is_isolated, shortest_representative, CandidateTracker, CosetConstraint};

use super::{
    prime_seed, recheck_seed, Certificate, DetectorConfig, DetectorError, InconclusiveReason, RunReport,
    SkippedPrime, TraceEntry, Verdict,
};

/// Primes handed to the worker pool at a time. Fixed so that the amount of
/// work done past a witness prime does not depend on the thread count.
const BATCH: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeOutcome {
    Skipped(String),
    Local(LocalMembership),
}

/// One membership question `P in <P_1, ..., P_r>` seen through reductions.
pub trait LocalProblem: Sync {
    fn rank(&self) -> usize;

    /// Usable primes up to `bound`, increasing.
    fn primes(&self, bound: u64) -> Vec<u64>;

    /// The local membership result at `p`; must depend only on `p` and
    /// `seed`.
    fn local(&self, p: u64, seed: u64) -> PrimeOutcome;

    /// Whether `a P = sum c_i P_i` holds exactly.
    fn verify(&self, a: u64, coeffs: &[BigInt]) -> bool;

    /// Recomputes the obstruction at `p` from scratch with `seed` and checks
    /// it by other means where that is cheap.
    fn confirm_obstruction(&self, p: u64, seed: u64) -> Result<LocalMembership, DetectorError>;
}

/// Streams primes through `problem` until a certificate is found or the
/// prime bound is reached.
pub fn run_pipeline<P: LocalProblem>(problem: &P, cfg: &DetectorConfig) -> Result<RunReport, DetectorError> {
    if cfg.stability_window == 0 || cfg.saturation_bound == 0 || cfg.worker_count == 0 {
        return Err(DetectorError::InvalidInput(
            "stability window, saturation bound and worker count must be positive".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| DetectorError::Pool(e.to_string()))?;

    let mut report = RunReport::immediate(Verdict::Inconclusive { reason: InconclusiveReason::BudgetExhausted }, cfg.seed);
    let mut state = CosetConstraint::initial(problem.rank());
    let mut tracker = CandidateTracker::new();
    let mut rejected: HashSet<Vec<BigInt>> = HashSet::new();
    // set once at most one coefficient vector within the bound remains
    let mut frozen: Option<Option<Vec<BigInt>>> = None;

    let primes = problem.primes(cfg.prime_bound);
    for batch in primes.chunks(BATCH) {
        let outcomes: Vec<PrimeOutcome> = pool.install(|| {
            batch
                .par_iter()
                .map(|&p| problem.local(p, prime_seed(cfg.seed, p)))
                .collect()
        });
        for (&p, outcome) in batch.iter().zip(outcomes) {
            report.primes_processed += 1;
            let local = match outcome {
                PrimeOutcome::Skipped(reason) => {
                    log::debug!("prime {p} skipped: {reason}");
                    report.skipped.push(SkippedPrime { prime: p, reason });
                    continue;
                }
                PrimeOutcome::Local(local) => local,
            };
            if local.is_unsolvable() {
                let local = problem.confirm_obstruction(p, recheck_seed(cfg.seed))?;
                report.verdict = Verdict::Independent {
                    certificate: Certificate::LocalObstruction { witness_prime: p, local },
                };
                return Ok(report);
            }
            let cand = match &mut frozen {
                None => {
                    state = match state.absorb(&local) {
                        Ok(next) => next,
                        Err(contradiction) => {
                            report.warnings.push(format!(
                                "{contradiction}; prime {p} left out (the generators may be dependent)"
                            ));
                            report.skipped.push(SkippedPrime {
                                prime: p,
                                reason: "contradicts earlier primes".into(),
                            });
                            continue;
                        }
                    };
                    let cand = candidate(&state, &cfg.coeff_bound);
                    if is_isolated(&state.coset, &cfg.coeff_bound) {
                        log::debug!("coset isolated after prime {p}; candidate fixed at {cand:?}");
                        frozen = Some(cand.clone());
                    }
                    cand
                }
                // the only possible small solution is known; later primes can
                // only rule it out
                Some(slot) => {
                    let coset = local.coset().expect("solvable");
                    if slot.as_ref().is_some_and(|c| !coset.contains(c)) {
                        *slot = None;
                    }
                    slot.clone()
                }
            };
            let stable_for = tracker.observe(cand.clone());
            report.stability_trace.push(TraceEntry {
                prime: p,
                candidate: cand.clone(),
                stable_for,
            });
            let Some(coeffs) = cand else { continue };
            if stable_for < cfg.stability_window || rejected.contains(&coeffs) {
                continue;
            }
            if problem.verify(1, &coeffs) {
                report.verdict = Verdict::Dependent { coeffs };
                return Ok(report);
            }
            report
                .warnings
                .push(format!("stable candidate {coeffs:?} failed exact verification at prime {p}"));
            rejected.insert(coeffs);
            if let Some((a, coeffs)) = saturate(problem, &state, cfg) {
                report.alarms.push(format!(
                    "saturation fallback succeeded with a = {a}: the relation holds only for a multiple of the target"
                ));
                log::error!("soundness alarm: saturation fallback fired with a = {a}");
                report.verdict = Verdict::SaturationNeeded { a, coeffs };
                return Ok(report);
            }
        }
    }

    let reason = if report.skipped.len() as f64 > cfg.max_skipped_fraction * report.primes_processed as f64 {
        InconclusiveReason::TooManySkippedPrimes
    } else if tracker.stable_for() >= cfg.stability_window || report.primes_processed == 0 {
        InconclusiveReason::BudgetExhausted
    } else {
        InconclusiveReason::NoStableCandidate
    };
    report.verdict = Verdict::Inconclusive { reason };
    Ok(report)
}

/// Smallest `a` in `2..=saturation_bound` with `a P = sum c_i P_i` for the
/// shortest `c` in the coset scaled by `a`.
fn saturate<P: LocalProblem>(problem: &P, state: &CosetConstraint, cfg: &DetectorConfig) -> Option<(u64, Vec<BigInt>)> {
    (2..=cfg.saturation_bound).find_map(|a| {
        let scaled = state.coset.scaled_offset(&BigInt::from(a));
        let c = shortest_representative(&scaled);
        let small = c.iter().all(|x| num_traits::Signed::abs(x) <= cfg.coeff_bound);
        (small && problem.verify(a, &c)).then_some((a, c))
    })
}
