use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::arith::{solve_congruence_system, AffineLattice, IntMatrix, SystemError};

use super::curve::{CurveFp, FpPoint};
use super::structure::GroupStructure;
use super::{FiniteError, Limits};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalResult {
    /// The target is not in the subgroup generated by the reduced gens.
    Unsolvable,
    /// Every coefficient vector `c` with `sum c_i Q_i = target`.
    SolutionCoset { coset: AffineLattice, modulus: u64 },
}

/// Outcome of testing `r_p(P) in r_p(Lambda)` at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalMembership {
    pub p: u64,
    pub result: LocalResult,
}

impl LocalMembership {
    pub fn is_unsolvable(&self) -> bool {
        matches!(self.result, LocalResult::Unsolvable)
    }

    pub fn coset(&self) -> Option<&AffineLattice> {
        match &self.result {
            LocalResult::SolutionCoset { coset, .. } => Some(coset),
            LocalResult::Unsolvable => None,
        }
    }
}

/// Writes the target and each generator in `Z/d1 x Z/d2` coordinates and
/// solves the resulting two-row congruence system.
pub fn local_membership(
    e: &CurveFp,
    s: &GroupStructure,
    target: &FpPoint,
    gens: &[FpPoint],
    limits: &Limits,
) -> Result<LocalMembership, FiniteError> {
    let (ti, tj) = s.coordinates(e, target, limits)?;
    let coords = gens
        .iter()
        .map(|g| s.coordinates(e, g, limits))
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(2);
    let mut rhs = Vec::with_capacity(2);
    let mut moduli = Vec::with_capacity(2);
    if s.d1 > 1 {
        rows.push(coords.iter().map(|&(i, _)| BigInt::from(i)).collect());
        rhs.push(BigInt::from(ti));
        moduli.push(BigInt::from(s.d1));
    }
    rows.push(coords.iter().map(|&(_, j)| BigInt::from(j)).collect());
    rhs.push(BigInt::from(tj));
    moduli.push(BigInt::from(s.d2));

    let a = if gens.is_empty() {
        IntMatrix::zeros(rows.len(), 0)
    } else {
        IntMatrix::from_rows(&rows)
    };
    let result = match solve_congruence_system(&a, &rhs, &moduli) {
        Ok(coset) => LocalResult::SolutionCoset {
            coset,
            modulus: s.d2,
        },
        Err(SystemError::Unsolvable) => LocalResult::Unsolvable,
        Err(other) => {
            return Err(FiniteError::InternalInconsistency {
                p: s.p,
                detail: other.to_string(),
            })
        }
    };
    Ok(LocalMembership { p: s.p, result })
}

/// The subgroup generated by `gens`, by closure under addition. Exhaustive;
/// meant for small fields and for checking other routines.
pub fn subgroup_closure(e: &CurveFp, gens: &[FpPoint]) -> BTreeSet<FpPoint> {
    let mut seen = BTreeSet::from([FpPoint::Infinity]);
    let mut frontier = vec![FpPoint::Infinity];
    while let Some(pt) = frontier.pop() {
        for g in gens {
            let next = e.add(&pt, g);
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    seen
}
