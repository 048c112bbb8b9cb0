use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{
    crt_u64, factor_small, inv_mod, isqrt_u64, pow_mod, primes_up_to, solve_congruence_system, IntMatrix,
    SystemError,
};
use crate::ec_finite::{LocalMembership, LocalResult};

use super::pipeline::{run_pipeline, LocalProblem, PrimeOutcome};
use super::{Certificate, DetectorConfig, DetectorError, RunReport, Verdict};

const CLOSURE_CHECK_LIMIT: u64 = 50;

/// Whether `g` generates `F_p^*`, given the prime factors of `p - 1`.
fn is_primitive(g: u64, p: u64, factors: &[(u64, u32)]) -> bool {
    !g.is_multiple_of(p) && factors.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1)
}

/// Smallest primitive root modulo an odd prime.
pub fn primitive_root(p: u64) -> u64 {
    let factors = factor_small(p - 1).expect("p - 1 is nonzero");
    (2..p).find(|&g| is_primitive(g, p, &factors)).unwrap_or(1)
}

fn random_primitive_root<R: Rng>(p: u64, factors: &[(u64, u32)], rng: &mut R) -> u64 {
    if p == 3 {
        return 2;
    }
    loop {
        let g = rng.gen_range(2..p);
        if is_primitive(g, p, factors) {
            return g;
        }
    }
}

fn bsgs_mod(base: u64, target: u64, order: u64, p: u64) -> Option<u64> {
    let m = isqrt_u64(order.saturating_sub(1)) + 1;
    let mut table = HashMap::with_capacity(m as usize);
    let mut cur = 1u64;
    for j in 0..m {
        table.entry(cur).or_insert(j);
        cur = (cur as u128 * base as u128 % p as u128) as u64;
    }
    let stride = inv_mod(pow_mod(base, m, p), p)?;
    let mut gamma = target;
    for i in 0..m {
        if let Some(&j) = table.get(&gamma) {
            return Some(i * m + j);
        }
        gamma = (gamma as u128 * stride as u128 % p as u128) as u64;
    }
    None
}

/// `k` in `[0, p - 1)` with `g^k = h mod p`, for a primitive root `g`.
pub fn multiplicative_dlog(g: u64, h: u64, p: u64, factors: &[(u64, u32)]) -> Option<u64> {
    let n = p - 1;
    let mut residues = Vec::with_capacity(factors.len());
    for &(q, e) in factors {
        let qe = q.pow(e);
        let gq = pow_mod(g, n / qe, p);
        let hq = pow_mod(h, n / qe, p);
        let gamma = pow_mod(gq, qe / q, p);
        let gq_inv = inv_mod(gq, p)?;
        let (mut x, mut qk) = (0u64, 1u64);
        for k in 0..e {
            let residual = (pow_mod(gq_inv, x, p) as u128 * hq as u128 % p as u128) as u64;
            let probe = pow_mod(residual, q.pow(e - 1 - k), p);
            x += bsgs_mod(gamma, probe, q, p)? * qk;
            qk *= q;
        }
        residues.push((x, qe));
    }
    let (k, _) = crt_u64(&residues).unwrap_or((0, 1));
    (pow_mod(g, k, p) == h % p).then_some(k)
}

fn residue(v: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = v.numer().mod_floor(&pb).to_u64()?;
    let den = v.denom().mod_floor(&pb).to_u64()?;
    Some((num as u128 * inv_mod(den, p)? as u128 % p as u128) as u64)
}

fn pow_rational(v: &BigRational, k: &BigInt) -> Option<BigRational> {
    let e = k.magnitude().to_u32()?;
    let r = BigRational::new(v.numer().pow(e), v.denom().pow(e));
    Some(if k.is_negative() { r.recip() } else { r })
}

/// `x in <g_1, ..., g_r>` inside `Q^*`.
#[derive(Debug, Clone)]
pub struct MulProblem {
    target: BigRational,
    gens: Vec<BigRational>,
}

impl MulProblem {
    pub fn new(target: BigRational, gens: Vec<BigRational>) -> Result<Self, DetectorError> {
        if target.is_zero() {
            return Err(DetectorError::InvalidInput("target is zero".into()));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.is_zero() || g.abs().is_one() {
                return Err(DetectorError::InvalidInput(format!(
                    "generator {} = {g} is zero or a root of unity",
                    i + 1
                )));
            }
        }
        Ok(MulProblem { target, gens })
    }

    fn is_bad(&self, p: u64) -> bool {
        std::iter::once(&self.target)
            .chain(&self.gens)
            .any(|v| (v.numer() % p).is_zero() || (v.denom() % p).is_zero())
    }

    fn residues(&self, p: u64) -> (u64, Vec<u64>) {
        let t = residue(&self.target, p).expect("good prime");
        let gs = self.gens.iter().map(|g| residue(g, p).expect("good prime")).collect();
        (t, gs)
    }

    fn solve_at(&self, p: u64, seed: u64) -> Result<LocalMembership, String> {
        let factors = factor_small(p - 1).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_primitive_root(p, &factors, &mut rng);
        let (t, gs) = self.residues(p);
        let log = |h: u64| multiplicative_dlog(g, h, p, &factors).ok_or_else(|| format!("no discrete log of {h} mod {p}"));
        let et = log(t)?;
        let row = gs
            .iter()
            .map(|&h| log(h).map(|e| BigInt::from(e % ((p - 1) / 2))))
            .collect::<Result<Vec<_>, _>>()?;
        let a = if row.is_empty() {
            IntMatrix::zeros(1, 0)
        } else {
            IntMatrix::from_rows(&[row])
        };
        // F_p^* / {+-1} is cyclic of order (p - 1) / 2, generated by g
        let m = (p - 1) / 2;
        let result = match solve_congruence_system(&a, &[BigInt::from(et % m)], &[BigInt::from(m)]) {
            Ok(coset) => LocalResult::SolutionCoset { coset, modulus: m },
            Err(SystemError::Unsolvable) => LocalResult::Unsolvable,
            Err(e) => return Err(e.to_string()),
        };
        Ok(LocalMembership { p, result })
    }
}

impl LocalProblem for MulProblem {
    fn rank(&self) -> usize {
        self.gens.len()
    }

    fn primes(&self, bound: u64) -> Vec<u64> {
        primes_up_to(bound)
            .into_iter()
            .filter(|&p| p > 2 && !self.is_bad(p))
            .collect()
    }

    fn local(&self, p: u64, seed: u64) -> PrimeOutcome {
        match self.solve_at(p, seed) {
            Ok(local) => PrimeOutcome::Local(local),
            Err(reason) => PrimeOutcome::Skipped(reason),
        }
    }

    /// Up to sign; [`detect_mul`] settles the sign afterwards.
    fn verify(&self, a: u64, coeffs: &[BigInt]) -> bool {
        let Some(lhs) = pow_rational(&self.target.abs(), &BigInt::from(a)) else {
            return false;
        };
        let mut rhs = BigRational::one();
        for (g, c) in self.gens.iter().zip(coeffs) {
            match pow_rational(&g.abs(), c) {
                Some(v) => rhs *= v,
                None => return false,
            }
        }
        lhs == rhs
    }

    fn confirm_obstruction(&self, p: u64, seed: u64) -> Result<LocalMembership, DetectorError> {
        let local = self.solve_at(p, seed).map_err(DetectorError::Inconsistent)?;
        if !local.is_unsolvable() {
            return Err(DetectorError::Inconsistent(format!(
                "obstruction at {p} vanished when recomputed"
            )));
        }
        if p <= CLOSURE_CHECK_LIMIT {
            let (t, mut gs) = self.residues(p);
            gs.push(p - 1);
            let mut seen = BTreeSet::from([1u64]);
            let mut frontier = vec![1u64];
            while let Some(v) = frontier.pop() {
                for &g in &gs {
                    let w = v * g % p;
                    if seen.insert(w) {
                        frontier.push(w);
                    }
                }
            }
            if seen.contains(&t) {
                return Err(DetectorError::Inconsistent(format!(
                    "enumeration mod {p} puts the target in the subgroup"
                )));
            }
        }
        Ok(local)
    }
}

/// Decides whether `x` is a product of integer powers of `gens`.
///
/// The primes only see `x` up to sign: the local groups are `F_p^* / {+-1}`.
/// A relation found there is checked exactly on absolute values and then
/// on signs; a sign mismatch proves independence because `-1` is not in a
/// torsion-free subgroup.
pub fn detect_mul(x: &BigRational, gens: &[BigRational], cfg: &DetectorConfig) -> Result<RunReport, DetectorError> {
    let problem = MulProblem::new(x.clone(), gens.to_vec())?;
    if x.is_one() {
        let coeffs = vec![BigInt::zero(); gens.len()];
        return Ok(RunReport::immediate(Verdict::Dependent { coeffs }, cfg.seed));
    }
    if (-x).is_one() {
        let certificate = Certificate::Torsion { order: 2 };
        return Ok(RunReport::immediate(Verdict::Independent { certificate }, cfg.seed));
    }
    let mut report = run_pipeline(&problem, cfg)?;
    if let Verdict::Dependent { coeffs } = &report.verdict {
        let negatives = gens
            .iter()
            .zip(coeffs)
            .filter(|(g, c)| g.is_negative() && c.is_odd())
            .count();
        if (negatives % 2 == 1) != x.is_negative() {
            let certificate = Certificate::SignMismatch { coeffs: coeffs.clone() };
            report.verdict = Verdict::Independent { certificate };
        }
    }
    Ok(report)
}
