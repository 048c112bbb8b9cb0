//! Accumulates per-prime coefficient cosets and proposes a global relation.

mod reduce;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::arith::AffineLattice;
use crate::ec_finite::LocalMembership;

pub use reduce::{is_isolated, lll_reduce, shortest_representative, symmetric_representative};

/// The primes on either side of an empty intersection.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("coefficient constraints from primes {earlier:?} and {later:?} are incompatible")]
pub struct Contradiction {
    pub earlier: Vec<u64>,
    pub later: Vec<u64>,
}

/// All coefficient vectors still compatible with the primes seen so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetConstraint {
    pub coset: AffineLattice,
    pub source_primes: Vec<u64>,
}

impl CosetConstraint {
    /// No constraint: `0 + Z^r`.
    pub fn initial(r: usize) -> Self {
        CosetConstraint {
            coset: AffineLattice::full(r),
            source_primes: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coset.dim()
    }

    /// Intersects with the coset from one prime.
    ///
    /// # Panics
    /// If `local` is unsolvable; that outcome is a certificate and never
    /// reaches accumulation.
    pub fn absorb(&self, local: &LocalMembership) -> Result<CosetConstraint, Contradiction> {
        let coset = local
            .coset()
            .expect("unsolvable primes are handled before accumulation");
        self.merge(&CosetConstraint {
            coset: coset.clone(),
            source_primes: vec![local.p],
        })
    }

    /// Intersection of two accumulated constraints.
    pub fn merge(&self, other: &CosetConstraint) -> Result<CosetConstraint, Contradiction> {
        match self.coset.intersect(&other.coset) {
            Some(coset) => {
                let mut source_primes = self.source_primes.clone();
                source_primes.extend(&other.source_primes);
                source_primes.sort_unstable();
                source_primes.dedup();
                Ok(CosetConstraint { coset, source_primes })
            }
            None => Err(Contradiction {
                earlier: self.source_primes.clone(),
                later: other.source_primes.clone(),
            }),
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coset.contains(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub coeffs: Vec<BigInt>,
    /// Consecutive primes after which `coeffs` came out unchanged, counting
    /// the current one.
    pub stable_for: usize,
}

/// The shortest vector of the coset when every entry is at most `bound` in
/// absolute value.
pub fn candidate(c: &CosetConstraint, bound: &BigInt) -> Option<Vec<BigInt>> {
    let v = shortest_representative(&c.coset);
    v.iter().all(|x| x.abs() <= *bound).then_some(v)
}

/// True when the last `window` entries exist and agree.
pub fn is_stable(history: &[Option<Vec<BigInt>>], window: usize) -> bool {
    if window == 0 || history.len() < window {
        return false;
    }
    let tail = &history[history.len() - window..];
    tail[0].is_some() && tail.iter().all(|c| *c == tail[0])
}

/// Running candidate with its stability count.
#[derive(Debug, Clone, Default)]
pub struct CandidateTracker {
    current: Option<Candidate>,
}

impl CandidateTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records the candidate after one more prime and returns the count.
    pub fn observe(&mut self, coeffs: Option<Vec<BigInt>>) -> usize {
        self.current = match (self.current.take(), coeffs) {
            (Some(mut c), Some(v)) if c.coeffs == v => {
                c.stable_for += 1;
                Some(c)
            }
            (_, Some(v)) => Some(Candidate {
                coeffs: v,
                stable_for: 1,
            }),
            (_, None) => None,
        };
        self.stable_for()
    }

    pub fn stable_for(&self) -> usize {
        self.current.as_ref().map_or(0, |c| c.stable_for)
    }

    pub fn current(&self) -> Option<&Candidate> {
        self.current.as_ref()
    }
}
