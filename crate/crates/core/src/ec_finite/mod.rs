//! The finite groups `E(F_p)`: counting, structure, discrete logarithms and
//! local membership tests.

mod count;
mod curve;
mod dlog;
mod membership;
mod structure;

use thiserror::Error;

use crate::arith::FactorError;

pub use count::{count_points, count_points_brute, hasse_interval, point_order, BRUTE_FORCE_LIMIT};
pub use curve::{legendre, sqrt_mod, CurveFp, FpPoint};
pub use dlog::{bsgs, dlog};
pub use membership::{local_membership, subgroup_closure, LocalMembership, LocalResult};
pub use structure::{group_structure, GroupStructure, SylowBasis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteError {
    #[error("{0} is not an odd prime below 2^62")]
    BadModulus(u64),
    #[error("curve is singular mod {p}")]
    Singular { p: u64 },
    #[error("group order mod {p} not pinned down by point orders")]
    AmbiguousOrder { p: u64 },
    #[error("no generators found for E(F_{p}) within the retry budget")]
    StructureNotFound { p: u64 },
    #[error("inconsistent group data mod {p}: {detail}")]
    InternalInconsistency { p: u64, detail: String },
    #[error("baby-step table mod {p} needs {needed} entries, cap is {cap}")]
    TableTooLarge { p: u64, needed: u64, cap: u64 },
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// Budgets for the randomized kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest baby-step table any discrete log may build.
    pub table_cap: u64,
    /// Random points tried before a group order is declared ambiguous.
    pub order_attempts: u32,
    /// Random points tried per primary component when building generators.
    pub structure_attempts: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            table_cap: 1 << 20,
            order_attempts: 64,
            structure_attempts: 96,
        }
    }
}
