//! Discrete logarithms in cyclic subgroups of `E(F_p)`.

use std::collections::HashMap;

use crate::arith::{crt_u64, factor_small, isqrt_u64};

use super::count::point_order;
use super::curve::{CurveFp, FpPoint};
use super::{FiniteError, Limits};

/// `k` in `[0, order)` with `k * base = target`, by baby-step giant-step.
/// `order` must be a multiple of the order of `base`.
pub fn bsgs(
    e: &CurveFp,
    base: &FpPoint,
    order: u64,
    target: &FpPoint,
    limits: &Limits,
) -> Result<Option<u64>, FiniteError> {
    if order <= 1 {
        return Ok(target.is_infinity().then_some(0));
    }
    let m = isqrt_u64(order - 1) + 1;
    if m > limits.table_cap {
        return Err(FiniteError::TableTooLarge {
            p: e.p(),
            needed: m,
            cap: limits.table_cap,
        });
    }
    let mut table: HashMap<FpPoint, u64> = HashMap::with_capacity(m as usize);
    let mut cur = FpPoint::Infinity;
    for j in 0..m {
        table.entry(cur).or_insert(j);
        cur = e.add(&cur, base);
    }
    let stride = e.neg(&e.mul(m, base));
    let mut gamma = *target;
    for i in 0..m {
        if let Some(&j) = table.get(&gamma) {
            let k = i * m + j;
            if k < order {
                return Ok(Some(k));
            }
        }
        gamma = e.add(&gamma, &stride);
    }
    Ok(None)
}

/// `k` with `k * base = target`, or `None` when `target` is not in the
/// subgroup generated by `base`.
///
/// `m` must annihilate `base`; `factors` is its factorization (computed
/// when empty and `m > 1`). The answer is reduced modulo the exact order of
/// `base`, which divides `m`. Each prime-power part is solved digit by digit
/// with a baby-step giant-step of size about `sqrt(l)`.
pub fn dlog(
    e: &CurveFp,
    base: &FpPoint,
    m: u64,
    target: &FpPoint,
    factors: &[(u64, u32)],
    limits: &Limits,
) -> Result<Option<u64>, FiniteError> {
    if target.is_infinity() {
        return Ok(Some(0));
    }
    let owned;
    let factors = if factors.is_empty() && m > 1 {
        owned = factor_small(m)?;
        &owned[..]
    } else {
        factors
    };
    let order = order_from_factors(e, base, m, factors);
    if order == 1 {
        return Ok(None);
    }
    if !e.mul(order, target).is_infinity() {
        return Ok(None);
    }
    let mut residues = Vec::new();
    for &(l, _) in factors {
        let k = valuation(order, l);
        if k == 0 {
            continue;
        }
        let lk = l.pow(k);
        let cof = order / lk;
        let b = e.mul(cof, base);
        let t = e.mul(cof, target);
        let gamma = e.mul(lk / l, &b);
        let mut x = 0u64;
        let mut lpow = 1u64;
        for i in 0..k {
            let residual = e.sub(&t, &e.mul(x, &b));
            let h = e.mul(l.pow(k - 1 - i), &residual);
            let Some(d) = bsgs(e, &gamma, l, &h, limits)? else {
                return Ok(None);
            };
            x += d * lpow;
            lpow *= l;
        }
        residues.push((x, lk));
    }
    let (k, _) = crt_u64(&residues).expect("coprime prime powers");
    Ok((e.mul(k, base) == *target).then_some(k))
}

fn order_from_factors(e: &CurveFp, pt: &FpPoint, m: u64, factors: &[(u64, u32)]) -> u64 {
    let mut order = m;
    for &(l, k) in factors {
        for _ in 0..k {
            if e.mul(order / l, pt).is_infinity() {
                order /= l;
            } else {
                break;
            }
        }
    }
    debug_assert_eq!(Ok(order), point_order(e, pt, m));
    order
}

pub(crate) fn valuation(mut n: u64, l: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(l) {
        n /= l;
        v += 1;
    }
    v
}
