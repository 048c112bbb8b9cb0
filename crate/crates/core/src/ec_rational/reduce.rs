use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{inv_mod, primes_up_to};
use crate::ec_finite::{CurveFp, FiniteError, FpPoint};

use super::{CurveQ, PointQ};

/// Odd primes up to a bound that do not divide the discriminant, in
/// increasing order.
#[derive(Debug, Clone)]
pub struct GoodPrimes {
    inner: std::vec::IntoIter<u64>,
}

impl Iterator for GoodPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.inner.next()
    }
}

pub fn good_primes(e: &CurveQ, bound: u64) -> GoodPrimes {
    let disc = e.discriminant();
    let primes: Vec<u64> = primes_up_to(bound)
        .into_iter()
        .filter(|&p| p > 2 && !(&disc % p).is_zero())
        .collect();
    GoodPrimes {
        inner: primes.into_iter(),
    }
}

impl CurveQ {
    /// The reduction `E mod p`; fails at bad primes.
    pub fn reduce(&self, p: u64) -> Result<CurveFp, FiniteError> {
        let a = self.a.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits");
        let b = self.b.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits");
        CurveFp::from_residues(p, a, b)
    }
}

fn residue(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Image of `pt` in `E(F_p)` for a prime of good reduction.
///
/// On an integral model `x = u / w^2`, `y = v / w^3` with the same `w`; the
/// projective point `(u w : v : w^3)` reduces to infinity exactly when `p`
/// divides `w`, otherwise to the affine residues.
pub fn reduce_point(pt: &PointQ, p: u64) -> FpPoint {
    let PointQ::Affine { x, y } = pt else {
        return FpPoint::Infinity;
    };
    let (xd, yd) = (residue(x.denom(), p), residue(y.denom(), p));
    if xd == 0 || yd == 0 {
        return FpPoint::Infinity;
    }
    let xs = (residue(x.numer(), p) as u128 * inv_mod(xd, p).expect("unit") as u128 % p as u128) as u64;
    let ys = (residue(y.numer(), p) as u128 * inv_mod(yd, p).expect("unit") as u128 % p as u128) as u64;
    FpPoint::Affine { x: xs, y: ys }
}
