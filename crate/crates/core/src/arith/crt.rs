use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrtError {
    #[error("no congruences given")]
    Empty,
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(BigInt),
    #[error("x = {r1} mod {m1} and x = {r2} mod {m2} are incompatible")]
    IncompatibleCongruences {
        r1: BigInt,
        m1: BigInt,
        r2: BigInt,
        m2: BigInt,
    },
}

/// Merges two congruences `x = r1 mod m1`, `x = r2 mod m2` into one modulo
/// `lcm(m1, m2)`, with moduli that need not be coprime.
pub fn crt_pair(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Result<(BigInt, BigInt), CrtError> {
    for m in [m1, m2] {
        if !m.is_positive() {
            return Err(CrtError::NonPositiveModulus(m.clone()));
        }
    }
    let eg = m1.extended_gcd(m2);
    let g = eg.gcd;
    let diff = r2 - r1;
    if !(&diff % &g).is_zero() {
        return Err(CrtError::IncompatibleCongruences {
            r1: r1.mod_floor(m1),
            m1: m1.clone(),
            r2: r2.mod_floor(m2),
            m2: m2.clone(),
        });
    }
    let lcm = m1 / &g * m2;
    // m1 * eg.x = g (mod m2)
    let step = (&diff / &g * &eg.x).mod_floor(&(m2 / &g));
    let r = (r1 + m1 * step).mod_floor(&lcm);
    Ok((r, lcm))
}

/// Solves a list of congruences, returning `(r, m)` with `0 <= r < m` and
/// `m = lcm` of the moduli.
pub fn crt(residues: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt), CrtError> {
    let ((r0, m0), rest) = residues.split_first().ok_or(CrtError::Empty)?;
    if !m0.is_positive() {
        return Err(CrtError::NonPositiveModulus(m0.clone()));
    }
    let mut acc = (r0.mod_floor(m0), m0.clone());
    for (r, m) in rest {
        acc = crt_pair(&acc.0, &acc.1, r, m)?;
    }
    Ok(acc)
}

/// Machine-word convenience wrapper used by the finite-field kernels.
pub fn crt_u64(residues: &[(u64, u64)]) -> Option<(u64, u64)> {
    let big: Vec<(BigInt, BigInt)> = residues
        .iter()
        .map(|&(r, m)| (BigInt::from(r), BigInt::from(m)))
        .collect();
    let (r, m) = crt(&big).ok()?;
    Some((r.try_into().ok()?, m.try_into().ok()?))
}

pub(crate) fn lcm_all<'a>(ms: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    ms.into_iter().fold(BigInt::one(), |acc, m| acc.lcm(m))
}
