//! Integer factorization: trial division followed by Pollard rho (Brent's
//! cycle detection) with a bounded number of re-randomized attempts.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::primes::{gcd_u64, is_prime, is_prime_u64, mul_mod};

const TRIAL_BOUND: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("pollard rho exhausted its budget on {0}")]
    BudgetExceeded(BigUint),
    #[error("cannot factor zero")]
    Zero,
}

/// Limits for the rho stage.
#[derive(Debug, Clone, Copy)]
pub struct RhoBudget {
    pub steps_per_attempt: u64,
    pub attempts: u32,
}

impl Default for RhoBudget {
    fn default() -> Self {
        RhoBudget {
            steps_per_attempt: 10_000_000,
            attempts: 8,
        }
    }
}

/// A complete prime factorization. `factors` is sorted by prime and every
/// exponent is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub value: BigUint,
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Builds a factorization of a product from known prime powers.
    pub fn from_prime_powers(mut factors: Vec<(BigUint, u32)>) -> Self {
        factors.sort();
        let mut merged: Vec<(BigUint, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            if e == 0 {
                continue;
            }
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        let value = merged
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        Factorization {
            value,
            factors: merged,
        }
    }

    /// The factors as machine words, when they all fit.
    pub fn small_factors(&self) -> Option<Vec<(u64, u32)>> {
        self.factors
            .iter()
            .map(|(p, e)| p.to_u64().map(|p| (p, *e)))
            .collect()
    }

    pub fn exponent_of(&self, prime: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(p, _)| p == prime)
            .map_or(0, |(_, e)| *e)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

pub fn factor(n: &BigUint) -> Result<Factorization, FactorError> {
    factor_with_budget(n, RhoBudget::default())
}

pub fn factor_u64(n: u64) -> Result<Factorization, FactorError> {
    factor(&BigUint::from(n))
}

/// Factorization of a machine word as `(prime, exponent)` pairs.
pub fn factor_small(n: u64) -> Result<Vec<(u64, u32)>, FactorError> {
    if n == 0 {
        return Err(FactorError::Zero);
    }
    factor_small_with(n, RhoBudget::default())
}

pub fn factor_with_budget(n: &BigUint, budget: RhoBudget) -> Result<Factorization, FactorError> {
    if n.is_zero() {
        return Err(FactorError::Zero);
    }
    if let Some(small) = n.to_u64() {
        let fs = factor_small_with(small, budget)?;
        return Ok(Factorization {
            value: n.clone(),
            factors: fs.into_iter().map(|(p, e)| (BigUint::from(p), e)).collect(),
        });
    }
    let mut found: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut d = 2u64;
    while d < TRIAL_BOUND {
        let dd = BigUint::from(d);
        let mut e = 0;
        while (&rest % &dd).is_zero() {
            rest /= &dd;
            e += 1;
        }
        if e > 0 {
            found.push((dd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    let mut seed = 1u64;
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            let mut ps = Vec::new();
            split_u64(small, budget, &mut ps)?;
            found.extend(ps.into_iter().map(|p| (BigUint::from(p), 1)));
            continue;
        }
        if is_prime(&m) {
            found.push((m, 1));
            continue;
        }
        let d = rho_big(&m, budget, seed).ok_or_else(|| FactorError::BudgetExceeded(m.clone()))?;
        seed += 1;
        stack.push(&m / &d);
        stack.push(d);
    }
    Ok(Factorization::from_prime_powers(found))
}

fn factor_small_with(n: u64, budget: RhoBudget) -> Result<Vec<(u64, u32)>, FactorError> {
    let mut out = Vec::new();
    let rest = strip_small(n, &mut out);
    if rest > 1 {
        let mut big = Vec::new();
        split_u64(rest, budget, &mut big)?;
        out.extend(big.into_iter().map(|p| (p, 1)));
    }
    out.sort();
    let mut merged: Vec<(u64, u32)> = Vec::new();
    for (p, e) in out {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(merged)
}

fn strip_small(mut n: u64, out: &mut Vec<(u64, u32)>) -> u64 {
    let mut d = 2u64;
    while d < TRIAL_BOUND && d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 && n < TRIAL_BOUND * TRIAL_BOUND {
        // no factor below TRIAL_BOUND and n < TRIAL_BOUND^2 means n is prime
        out.push((n, 1));
        return 1;
    }
    n
}

// pushes the prime factors of n (with repetition)
fn split_u64(n: u64, budget: RhoBudget, out: &mut Vec<u64>) -> Result<(), FactorError> {
    if n == 1 {
        return Ok(());
    }
    if is_prime_u64(n) {
        out.push(n);
        return Ok(());
    }
    let d = rho_u64(n, budget).ok_or_else(|| FactorError::BudgetExceeded(BigUint::from(n)))?;
    split_u64(d, budget, out)?;
    split_u64(n / d, budget, out)
}

fn rho_u64(n: u64, budget: RhoBudget) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n);
    for _ in 0..budget.attempts {
        let c = rng.gen_range(1..n);
        let y0 = rng.gen_range(0..n);
        if let Some(d) = brent_u64(n, c, y0, budget.steps_per_attempt) {
            return Some(d);
        }
    }
    None
}

fn brent_u64(n: u64, c: u64, y0: u64, max_steps: u64) -> Option<u64> {
    let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let batch = 128u64;
    let (mut y, mut x, mut ys) = (y0, y0, y0);
    let mut g = 1u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut steps = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..batch.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += batch;
        }
        steps += r;
        if steps > max_steps {
            return None;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &BigUint, budget: RhoBudget, seed: u64) -> Option<BigUint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..budget.attempts {
        let c = BigUint::from(rng.gen::<u64>()) % n;
        let mut x = BigUint::from(rng.gen::<u64>()) % n;
        let mut y = x.clone();
        let mut steps = 0u64;
        let mut q = BigUint::one();
        loop {
            // Floyd with batched gcds
            for _ in 0..64 {
                x = (&x * &x + &c) % n;
                y = (&y * &y + &c) % n;
                y = (&y * &y + &c) % n;
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            steps += 64;
            let g = q.gcd(n);
            if g.is_one() {
                if steps > budget.steps_per_attempt {
                    break;
                }
                continue;
            }
            if &g != n {
                return Some(g);
            }
            break;
        }
    }
    None
}
