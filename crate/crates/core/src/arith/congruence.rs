//! Integer linear systems and systems of linear congruences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use super::crt::lcm_all;
use super::matrix::{hermite_normal_form, smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("system has no integer solution")]
    Unsolvable,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("moduli must be positive")]
    NonPositiveModulus,
}

/// An affine lattice `offset + L` in `Z^r` where `L` has full rank.
///
/// `basis` is the column Hermite normal form of `L` and the offset is reduced
/// so that `0 <= offset[i] < basis[i][i]`; equal sets have equal fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineLattice {
    pub offset: Vec<BigInt>,
    pub basis: IntMatrix,
}

impl AffineLattice {
    /// All of `Z^r`.
    pub fn full(r: usize) -> Self {
        AffineLattice {
            offset: vec![BigInt::zero(); r],
            basis: IntMatrix::identity(r),
        }
    }

    /// Canonicalizes `offset + span(generators)`; `None` if the generators do
    /// not have full rank.
    pub fn new(offset: Vec<BigInt>, generators: &IntMatrix) -> Option<Self> {
        let basis = hermite_normal_form(generators)?;
        let offset = reduce_offset(offset, &basis);
        Some(AffineLattice { offset, basis })
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.dim()).map(|i| self.basis[(i, i)].clone()).collect()
    }

    /// Index of the lattice in `Z^r`.
    pub fn index(&self) -> BigInt {
        self.diagonal().iter().product()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        if v.len() != self.dim() {
            return false;
        }
        let diff: Vec<BigInt> = v.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        reduce_offset(diff, &self.basis).iter().all(Zero::is_zero)
    }

    /// Is `v` in the underlying (linear) lattice?
    pub fn lattice_contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.dim() && reduce_offset(v.to_vec(), &self.basis).iter().all(Zero::is_zero)
    }

    /// Intersection with another affine lattice of the same dimension.
    pub fn intersect(&self, other: &AffineLattice) -> Option<AffineLattice> {
        assert_eq!(self.dim(), other.dim());
        let r = self.dim();
        // self.offset + H u = other.offset + K w
        let neg_k = {
            let mut k = other.basis.clone();
            for i in 0..r {
                for j in 0..r {
                    k[(i, j)] = -&k[(i, j)];
                }
            }
            k
        };
        let system = self.basis.hcat(&neg_k);
        let rhs: Vec<BigInt> = other.offset.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        let sol = solve_integer_system(&system, &rhs).ok()?;
        let u0: Vec<BigInt> = sol.particular[..r].to_vec();
        let mut point = self.basis.mul_vec(&u0);
        point.iter_mut().zip(&self.offset).for_each(|(p, t)| *p += t);
        let gens: Vec<Vec<BigInt>> = sol
            .kernel
            .iter()
            .map(|k| self.basis.mul_vec(&k[..r]))
            .collect();
        AffineLattice::new(point, &IntMatrix::from_columns(r, &gens))
    }

    /// The coset `k * offset + L`.
    pub fn scaled_offset(&self, k: &BigInt) -> AffineLattice {
        let offset = self.offset.iter().map(|t| t * k).collect();
        AffineLattice {
            offset: reduce_offset(offset, &self.basis),
            basis: self.basis.clone(),
        }
    }
}

/// Reduces `v` modulo the upper-triangular basis so that each coordinate
/// lands in `[0, basis[i][i])`.
pub fn reduce_offset(mut v: Vec<BigInt>, basis: &IntMatrix) -> Vec<BigInt> {
    for i in (0..v.len()).rev() {
        let q = v[i].div_floor(&basis[(i, i)]);
        if q.is_zero() {
            continue;
        }
        for (k, vk) in v.iter_mut().enumerate().take(i + 1) {
            *vk -= &q * &basis[(k, i)];
        }
    }
    v
}

/// Solutions of `M x = b` over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    /// Basis of the kernel of `M`.
    pub kernel: Vec<Vec<BigInt>>,
}

pub fn solve_integer_system(m: &IntMatrix, b: &[BigInt]) -> Result<IntegerSolution, SystemError> {
    if b.len() != m.rows() {
        return Err(SystemError::Dimension(format!(
            "{} rows but right-hand side has {} entries",
            m.rows(),
            b.len()
        )));
    }
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let ub = snf.left.mul_vec(b);
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < rank {
            let d = &snf.diagonal[(i, i)];
            let (q, r) = ubi.div_rem(d);
            if !r.is_zero() {
                return Err(SystemError::Unsolvable);
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return Err(SystemError::Unsolvable);
        }
    }
    let particular = snf.right.mul_vec(&y);
    let kernel = (rank..m.cols()).map(|j| snf.right.column(j)).collect();
    Ok(IntegerSolution { particular, kernel })
}

/// Solves `A c = b (mod m_i)` row by row.
///
/// The system is homogenized as `[A | diag(m)] (c, y) = b`, reduced by one
/// Smith normal form, and the solution set for `c` is returned as a canonical
/// affine lattice. The lattice always contains `lcm(m) Z^r`.
pub fn solve_congruence_system(
    a: &IntMatrix,
    b: &[BigInt],
    moduli: &[BigInt],
) -> Result<AffineLattice, SystemError> {
    let (k, r) = (a.rows(), a.cols());
    if b.len() != k || moduli.len() != k {
        return Err(SystemError::Dimension(format!(
            "{k} rows, {} residues, {} moduli",
            b.len(),
            moduli.len()
        )));
    }
    if moduli.iter().any(|m| !m.is_positive()) {
        return Err(SystemError::NonPositiveModulus);
    }
    if r == 0 {
        return if b.iter().zip(moduli).all(|(bi, mi)| bi.mod_floor(mi).is_zero()) {
            Ok(AffineLattice::full(0))
        } else {
            Err(SystemError::Unsolvable)
        };
    }
    let homogenized = a.hcat(&IntMatrix::diagonal(moduli));
    let sol = solve_integer_system(&homogenized, b)?;
    let mut gens: Vec<Vec<BigInt>> = sol.kernel.iter().map(|v| v[..r].to_vec()).collect();
    let l = lcm_all(moduli);
    for i in 0..r {
        let mut e = vec![BigInt::zero(); r];
        e[i] = l.clone();
        gens.push(e);
    }
    let lattice = AffineLattice::new(sol.particular[..r].to_vec(), &IntMatrix::from_columns(r, &gens))
        .expect("lcm(m) Z^r keeps the lattice full rank");
    Ok(lattice)
}
