use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::AffineLattice;

/// Exhaustive `{-1, 0, 1}` neighbourhood search up to this dimension; above
/// it only moves along at most two basis vectors are tried.
const FULL_SEARCH_DIM: usize = 6;

fn dot(u: &[BigRational], v: &[BigRational]) -> BigRational {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

struct GramSchmidt {
    star: Vec<Vec<BigRational>>,
    norms: Vec<BigRational>,
    mu: Vec<Vec<BigRational>>,
}

fn gram_schmidt(basis: &[Vec<BigInt>]) -> GramSchmidt {
    let n = basis.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let bi = to_rational(&basis[i]);
        let mut v = bi.clone();
        for j in 0..i {
            mu[i][j] = dot(&bi, &star[j]) / &norms[j];
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &mu[i][j] * sk;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    GramSchmidt { star, norms, mu }
}

fn axpy(target: &mut [BigInt], q: &BigInt, v: &[BigInt]) {
    for (t, x) in target.iter_mut().zip(v) {
        *t -= q * x;
    }
}

/// LLL reduction (`delta = 3/4`) of linearly independent integer vectors.
pub fn lll_reduce(vectors: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut b = vectors.to_vec();
    let n = b.len();
    if n < 2 {
        return b;
    }
    let delta = BigRational::new(3.into(), 4.into());
    let mut gs = gram_schmidt(&b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            if BigRational::from_integer(2.into()) * gs.mu[k][j].abs() <= BigRational::one() {
                continue;
            }
            let q = gs.mu[k][j].round().to_integer();
            let bj = b[j].clone();
            axpy(&mut b[k], &q, &bj);
            let qr = BigRational::from_integer(q);
            for l in 0..j {
                let d = &qr * &gs.mu[j][l];
                gs.mu[k][l] -= d;
            }
            gs.mu[k][j] -= qr;
        }
        let mu = &gs.mu[k][k - 1];
        if gs.norms[k] >= (&delta - mu * mu) * &gs.norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            gs = gram_schmidt(&b);
            k = (k - 1).max(1);
        }
    }
    b
}

fn norm_sq(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

/// Shortest element of the coset, ties broken lexicographically.
///
/// Babai's nearest plane on an LLL-reduced basis, followed by a search over
/// small moves along that basis. Exact whenever the shortest vector is
/// markedly shorter than the others, which is the regime that matters once
/// the lattice index is large.
pub fn shortest_representative(c: &AffineLattice) -> Vec<BigInt> {
    let r = c.dim();
    if r == 0 {
        return Vec::new();
    }
    let basis = lll_reduce(&c.basis.columns());
    let gs = gram_schmidt(&basis);
    let mut y = c.offset.clone();
    for i in (0..r).rev() {
        let q = (dot(&to_rational(&y), &gs.star[i]) / &gs.norms[i]).round().to_integer();
        if !q.is_zero() {
            axpy(&mut y, &q, &basis[i]);
        }
    }

    let mut best = (norm_sq(&y), y.clone());
    let mut consider = |v: Vec<BigInt>| {
        let n = norm_sq(&v);
        if (&n, &v) < (&best.0, &best.1) {
            best = (n, v);
        }
    };
    let moves = [BigInt::one(), -BigInt::one()];
    if r <= FULL_SEARCH_DIM {
        let mut digits = vec![0u8; r];
        loop {
            let mut v = y.clone();
            for (i, &d) in digits.iter().enumerate() {
                if d > 0 {
                    axpy(&mut v, &moves[d as usize - 1], &basis[i]);
                }
            }
            consider(v);
            let Some(pos) = digits.iter().position(|&d| d < 2) else {
                break;
            };
            digits[pos] += 1;
            digits[..pos].iter_mut().for_each(|d| *d = 0);
        }
    } else {
        for i in 0..r {
            for qi in &moves {
                let mut v = y.clone();
                axpy(&mut v, qi, &basis[i]);
                consider(v.clone());
                for j in i + 1..r {
                    for qj in &moves {
                        let mut w = v.clone();
                        axpy(&mut w, qj, &basis[j]);
                        consider(w);
                    }
                }
            }
        }
    }
    best.1
}

/// True when the coset has at most one element with every entry in
/// `[-bound, bound]` and [`shortest_representative`] is guaranteed to return
/// it if it exists.
///
/// Holds once every Gram-Schmidt vector of an LLL-reduced basis is longer
/// than `2 bound sqrt(r)`: that exceeds the diameter of the box, and a vector
/// shorter than half of every Gram-Schmidt length is the nearest-plane
/// representative of its coset.
pub fn is_isolated(c: &AffineLattice, bound: &BigInt) -> bool {
    let r = c.dim();
    if r == 0 {
        return true;
    }
    let gs = gram_schmidt(&lll_reduce(&c.basis.columns()));
    let threshold = BigRational::from_integer(BigInt::from(4 * r) * bound * bound);
    gs.norms.iter().all(|n| *n > threshold)
}

/// The coset element with each coordinate in `(-M_i/2, M_i/2]`, where `M_i`
/// is the `i`-th diagonal entry of the Hermite basis.
pub fn symmetric_representative(c: &AffineLattice) -> Vec<BigInt> {
    let mut y = c.offset.clone();
    for i in (0..c.dim()).rev() {
        let m = &c.basis[(i, i)];
        let mut t = y[i].mod_floor(m);
        if BigInt::from(2) * &t > *m {
            t -= m;
        }
        let q = (&y[i] - &t) / m;
        if !q.is_zero() {
            axpy(&mut y, &q, &c.basis.column(i));
        }
    }
    y
}
