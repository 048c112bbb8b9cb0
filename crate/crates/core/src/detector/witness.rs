use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::is_prime_u64;
use crate::ec_finite::{count_points, point_order, FiniteError, Limits};
use crate::ec_rational::{good_primes, reduce_point, CurveQ, PointQ};

use super::{prime_seed, DetectorConfig, DetectorError, SkippedPrime};

/// Primes where the points in `i` have order prime to `ell` and those in `j`
/// have order divisible by `ell^m`. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessQuery {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub ell: u64,
    pub m: u32,
    pub prime_bound: u64,
}

impl WitnessQuery {
    fn validate(&self, r: usize) -> Result<(), DetectorError> {
        let bad = |msg: String| Err(DetectorError::InvalidInput(msg));
        if self.m == 0 {
            return bad("M must be at least 1".into());
        }
        if !is_prime_u64(self.ell) {
            return bad(format!("l = {} is not prime", self.ell));
        }
        let mut seen = vec![false; r];
        for &k in self.i.iter().chain(&self.j) {
            if k >= r {
                return bad(format!("index {} out of range for {r} points", k + 1));
            }
            if std::mem::replace(&mut seen[k], true) {
                return bad(format!("index {} appears twice", k + 1));
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("I and J must cover every point".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessMatch {
    pub prime: u64,
    /// Order of each reduced point.
    pub orders: Vec<u64>,
    /// Exponent of `ell` in each order.
    pub ell_valuations: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub matches: Vec<WitnessMatch>,
    pub scanned: usize,
    pub skipped: Vec<SkippedPrime>,
}

impl WitnessReport {
    /// Fraction of scanned primes that matched.
    pub fn density(&self) -> f64 {
        if self.scanned == 0 {
            0.0
        } else {
            self.matches.len() as f64 / self.scanned as f64
        }
    }
}

fn valuation(mut n: u64, l: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(l) {
        n /= l;
        v += 1;
    }
    v
}

fn orders_at(curve: &CurveQ, points: &[PointQ], p: u64, seed: u64) -> Result<Vec<u64>, FiniteError> {
    let limits = Limits::default();
    let ep = curve.reduce(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = count_points(&ep, &mut rng, &limits)?;
    points
        .iter()
        .map(|pt| point_order(&ep, &reduce_point(pt, p), n))
        .collect()
}

/// Scans the good primes up to the query bound.
pub fn find_witness_primes(
    curve: &CurveQ,
    points: &[PointQ],
    q: &WitnessQuery,
    cfg: &DetectorConfig,
) -> Result<WitnessReport, DetectorError> {
    q.validate(points.len())?;
    if let Some(pt) = points.iter().find(|pt| !curve.contains(pt)) {
        return Err(DetectorError::InvalidInput(format!("{pt} is not on {curve}")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count.max(1))
        .build()
        .map_err(|e| DetectorError::Pool(e.to_string()))?;
    let primes: Vec<u64> = good_primes(curve, q.prime_bound).collect();
    let results: Vec<Result<Vec<u64>, FiniteError>> = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| orders_at(curve, points, p, prime_seed(cfg.seed, p)))
            .collect()
    });

    let mut report = WitnessReport {
        matches: Vec::new(),
        scanned: 0,
        skipped: Vec::new(),
    };
    let ml = q.ell.checked_pow(q.m);
    for (&p, result) in primes.iter().zip(results) {
        let orders = match result {
            Ok(orders) => orders,
            Err(e) => {
                report.skipped.push(SkippedPrime {
                    prime: p,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        report.scanned += 1;
        let coprime = q.i.iter().all(|&k| orders[k] % q.ell != 0);
        let divisible = q.j.iter().all(|&k| ml.is_some_and(|ml| orders[k] % ml == 0));
        if coprime && divisible {
            let ell_valuations = orders.iter().map(|&o| valuation(o, q.ell)).collect();
            report.matches.push(WitnessMatch {
                prime: p,
                orders,
                ell_valuations,
            });
        }
    }
    Ok(report)
}
