use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ec_finite::{
    count_points, group_structure, local_membership, subgroup_closure, CurveFp, FiniteError, FpPoint, Limits,
    LocalMembership,
};
use crate::ec_rational::{good_primes, reduce_point, torsion_order, CurveQ, PointQ};

use super::pipeline::{run_pipeline, LocalProblem, PrimeOutcome};
use super::{Certificate, DetectorConfig, DetectorError, RunReport, Verdict};

/// Largest prime at which an obstruction is also checked by enumerating the
/// reduced subgroup.
const CLOSURE_CHECK_LIMIT: u64 = 50;

/// `P in <P_1, ..., P_r>` on `E(Q)`.
#[derive(Debug, Clone)]
pub struct EcProblem {
    curve: CurveQ,
    target: PointQ,
    gens: Vec<PointQ>,
    limits: Limits,
}

impl EcProblem {
    /// Checks that every point is on the curve and that no generator is
    /// torsion.
    pub fn new(curve: CurveQ, target: PointQ, gens: Vec<PointQ>) -> Result<Self, DetectorError> {
        for pt in std::iter::once(&target).chain(&gens) {
            if !curve.contains(pt) {
                return Err(DetectorError::InvalidInput(format!("{pt} is not on {curve}")));
            }
        }
        for (i, g) in gens.iter().enumerate() {
            if let Some(n) = torsion_order(&curve, g) {
                return Err(DetectorError::InvalidInput(format!(
                    "generator {} = {g} is torsion of order {n}",
                    i + 1
                )));
            }
        }
        Ok(EcProblem {
            curve,
            target,
            gens,
            limits: Limits::default(),
        })
    }

    pub fn curve(&self) -> &CurveQ {
        &self.curve
    }

    fn reduced(&self, p: u64) -> Result<(CurveFp, FpPoint, Vec<FpPoint>), FiniteError> {
        let ep = self.curve.reduce(p)?;
        let target = reduce_point(&self.target, p);
        let gens = self.gens.iter().map(|g| reduce_point(g, p)).collect();
        Ok((ep, target, gens))
    }

    fn solve_at(&self, p: u64, seed: u64) -> Result<LocalMembership, FiniteError> {
        let (ep, target, gens) = self.reduced(p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = count_points(&ep, &mut rng, &self.limits)?;
        let s = group_structure(&ep, n, &mut rng, &self.limits)?;
        local_membership(&ep, &s, &target, &gens, &self.limits)
    }
}

impl LocalProblem for EcProblem {
    fn rank(&self) -> usize {
        self.gens.len()
    }

    fn primes(&self, bound: u64) -> Vec<u64> {
        good_primes(&self.curve, bound).collect()
    }

    fn local(&self, p: u64, seed: u64) -> PrimeOutcome {
        match self.solve_at(p, seed) {
            Ok(local) => PrimeOutcome::Local(local),
            Err(e) => PrimeOutcome::Skipped(e.to_string()),
        }
    }

    fn verify(&self, a: u64, coeffs: &[BigInt]) -> bool {
        let lhs = self.curve.scalar_mul(&BigInt::from(a), &self.target);
        lhs == self.curve.linear_combination(coeffs, &self.gens)
    }

    fn confirm_obstruction(&self, p: u64, seed: u64) -> Result<LocalMembership, DetectorError> {
        let local = self.solve_at(p, seed)?;
        if !local.is_unsolvable() {
            return Err(DetectorError::Inconsistent(format!(
                "obstruction at {p} vanished when recomputed"
            )));
        }
        if p <= CLOSURE_CHECK_LIMIT {
            let (ep, target, gens) = self.reduced(p)?;
            if subgroup_closure(&ep, &gens).contains(&target) {
                return Err(DetectorError::Inconsistent(format!(
                    "enumeration mod {p} puts the target in the subgroup"
                )));
            }
        }
        Ok(local)
    }
}

/// Decides whether `target` lies in the subgroup generated by `gens`.
///
/// The generators are assumed independent; only their being non-torsion is
/// checked.
pub fn detect_ec(
    curve: &CurveQ,
    target: &PointQ,
    gens: &[PointQ],
    cfg: &DetectorConfig,
) -> Result<RunReport, DetectorError> {
    let problem = EcProblem::new(curve.clone(), target.clone(), gens.to_vec())?;
    if target.is_infinity() {
        let coeffs = vec![BigInt::from(0); gens.len()];
        debug_assert!(problem.verify(1, &coeffs));
        return Ok(RunReport::immediate(Verdict::Dependent { coeffs }, cfg.seed));
    }
    if let Some(order) = torsion_order(curve, target) {
        let certificate = Certificate::Torsion { order };
        return Ok(RunReport::immediate(Verdict::Independent { certificate }, cfg.seed));
    }
    run_pipeline(&problem, cfg)
}
