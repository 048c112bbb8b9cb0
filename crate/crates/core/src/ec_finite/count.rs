//! Group orders: brute force for small fields, Mestre-style order finding in
//! the Hasse interval (using the quadratic twist) above that.

use std::collections::HashMap;

use num_integer::Integer;
use rand::Rng;

use crate::arith::{factor_small, isqrt_u64};

use super::curve::{legendre, CurveFp, FpPoint};
use super::{FiniteError, Limits};

/// Fields up to this size are always counted point by point.
pub const BRUTE_FORCE_LIMIT: u64 = 1000;

/// Integer bounds `[lo, hi]` of the Hasse interval around `p + 1`.
pub fn hasse_interval(p: u64) -> (u64, u64) {
    let w = isqrt_u64(4 * p);
    (p + 1 - w, p + 1 + w)
}

pub fn count_points_brute(e: &CurveFp) -> u64 {
    let p = e.p();
    let affine: i64 = (0..p).map(|x| 1 + legendre(e.rhs(x), p) as i64).sum();
    1 + affine as u64
}

/// `#E(F_p)`.
///
/// Small fields are counted directly. Otherwise random points on the curve
/// and on its quadratic twist are used to build up `lcm` of point orders on
/// both sides until exactly one `n` in the Hasse interval is compatible with
/// both (`#E + #E' = 2p + 2`).
pub fn count_points<R: Rng + ?Sized>(e: &CurveFp, rng: &mut R, limits: &Limits) -> Result<u64, FiniteError> {
    let p = e.p();
    if p <= BRUTE_FORCE_LIMIT {
        return Ok(count_points_brute(e));
    }
    let (lo, hi) = hasse_interval(p);
    let nonresidue = (2..p).find(|&d| legendre(d, p) == -1).expect("odd prime has a non-residue");
    let twist = e.twist(nonresidue);
    let (mut lcm_e, mut lcm_t) = (1u64, 1u64);

    for attempt in 0..limits.order_attempts {
        let on_twist = attempt % 2 == 1;
        let curve = if on_twist { &twist } else { e };
        let pt = curve.random_point(rng);
        let multiple = interval_multiple(curve, &pt, lo, hi).ok_or_else(|| FiniteError::InternalInconsistency {
            p,
            detail: format!("no multiple of the order of {pt} in the Hasse interval"),
        })?;
        let order = point_order(curve, &pt, multiple)?;
        if on_twist {
            lcm_t = lcm_t.lcm(&order);
        } else {
            lcm_e = lcm_e.lcm(&order);
        }
        let mut candidates = candidates(lo, hi, lcm_e, lcm_t, 2 * p + 2);
        match (candidates.next(), candidates.next()) {
            (Some(n), None) => return Ok(n),
            (None, _) => {
                return Err(FiniteError::InternalInconsistency {
                    p,
                    detail: "point orders exclude the whole Hasse interval".into(),
                })
            }
            _ => {}
        }
    }
    Err(FiniteError::AmbiguousOrder { p })
}

fn candidates(lo: u64, hi: u64, lcm_e: u64, lcm_t: u64, total: u64) -> impl Iterator<Item = u64> {
    let first = lo.div_ceil(lcm_e) * lcm_e;
    (first..=hi)
        .step_by(lcm_e as usize)
        .filter(move |n| (total - n).is_multiple_of(lcm_t))
}

/// Some `m` in `[lo, hi]` with `m * pt = O`, by baby-step giant-step over the
/// interval.
fn interval_multiple(e: &CurveFp, pt: &FpPoint, lo: u64, hi: u64) -> Option<u64> {
    let width = hi - lo;
    let step = isqrt_u64(width) + 1;
    let mut table: HashMap<FpPoint, u64> = HashMap::with_capacity(step as usize);
    let mut cur = FpPoint::Infinity;
    for j in 0..step {
        if j > 0 && cur.is_infinity() {
            // the order divides j; any multiple in the interval will do
            let m = lo.div_ceil(j) * j;
            return (m <= hi).then_some(m);
        }
        table.entry(cur).or_insert(j);
        cur = e.add(&cur, pt);
    }
    let giant = e.mul(step, pt);
    let mut q = e.mul(lo, pt);
    let mut k = 0u64;
    while lo + k * step <= hi {
        if let Some(&j) = table.get(&e.neg(&q)) {
            let m = lo + k * step + j;
            if m <= hi {
                return Some(m);
            }
        }
        q = e.add(&q, &giant);
        k += 1;
    }
    None
}

/// Exact order of `pt`, given any `n` with `n * pt = O`.
pub fn point_order(e: &CurveFp, pt: &FpPoint, n: u64) -> Result<u64, FiniteError> {
    debug_assert!(e.mul(n, pt).is_infinity(), "n * P must vanish");
    let mut order = n;
    for (l, k) in factor_small(n)? {
        for _ in 0..k {
            if e.mul(order / l, pt).is_infinity() {
                order /= l;
            } else {
                break;
            }
        }
    }
    Ok(order)
}
