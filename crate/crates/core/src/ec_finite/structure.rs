//! Two-generator decomposition `E(F_p) = Z/d1 x Z/d2` and coordinates with
//! respect to it.
//!
//! Each primary component `Z/l^a x Z/l^b` (`a <= b`) is handled on its own.
//! A random point pushed into the component by the cofactor `n / l^e` is
//! kept as `g` whenever its order beats the current best. Once `g` has order
//! `l^b` with `2b >= e`, a further sample `S` is projected off `<g>`: with
//! `k` minimal such that `l^k S = m g`, maximality of `g` forces `l^k | m`,
//! and `h = S - (m / l^k) g` has order exactly `l^k` and meets `<g>` only in
//! `O`. When `k = e - b` the pair `(h, g)` is a basis.

use rand::Rng;

use crate::arith::{crt_u64, factor_small, inv_mod};

use super::curve::{CurveFp, FpPoint};
use super::dlog::{dlog, valuation};
use super::{FiniteError, Limits};

/// Basis of one primary component, already multiplied into the component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylowBasis {
    pub ell: u64,
    /// Exponents of `Z/l^a x Z/l^b`.
    pub a: u32,
    pub b: u32,
    /// `n / l^(a+b)`: multiplying by it projects onto this component.
    pub cofactor: u64,
    /// Order `l^a` (infinity when `a = 0`).
    pub h: FpPoint,
    /// Order `l^b`.
    pub g: FpPoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    pub p: u64,
    pub n: u64,
    pub d1: u64,
    pub d2: u64,
    pub g1: FpPoint,
    pub g2: FpPoint,
    pub factorization_n: Vec<(u64, u32)>,
    pub components: Vec<SylowBasis>,
}

impl GroupStructure {
    pub fn is_cyclic(&self) -> bool {
        self.d1 == 1
    }

    /// `i * g1 + j * g2`.
    pub fn element(&self, e: &CurveFp, i: u64, j: u64) -> FpPoint {
        e.add(&e.mul(i, &self.g1), &e.mul(j, &self.g2))
    }

    /// The unique `(i mod d1, j mod d2)` with `P = i g1 + j g2`.
    pub fn coordinates(&self, e: &CurveFp, pt: &FpPoint, limits: &Limits) -> Result<(u64, u64), FiniteError> {
        let mut is = Vec::with_capacity(self.components.len());
        let mut js = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let local = e.mul(c.cofactor, pt);
            let (i, j) = component_coordinates(e, c, &local, limits)?;
            // the projection multiplied both coordinates by the cofactor
            let (la, lb) = (c.ell.pow(c.a), c.ell.pow(c.b));
            let unscale = |v: u64, m: u64| {
                let inv = inv_mod(c.cofactor % m, m).unwrap_or(0);
                (v as u128 * inv as u128 % m as u128) as u64
            };
            is.push((unscale(i, la), la));
            js.push((unscale(j, lb), lb));
        }
        let (i, _) = crt_u64(&is).unwrap_or((0, 1));
        let (j, _) = crt_u64(&js).unwrap_or((0, 1));
        if self.element(e, i, j) != *pt {
            return Err(FiniteError::InternalInconsistency {
                p: self.p,
                detail: format!("coordinates ({i},{j}) do not reproduce {pt}"),
            });
        }
        Ok((i, j))
    }

    /// Checks every structural invariant; used after construction and in tests.
    pub fn validate(&self, e: &CurveFp) -> Result<(), String> {
        if self.d1 * self.d2 != self.n {
            return Err(format!("d1*d2 = {} != n = {}", self.d1 * self.d2, self.n));
        }
        if !self.d2.is_multiple_of(self.d1) {
            return Err(format!("d1 = {} does not divide d2 = {}", self.d1, self.d2));
        }
        if !(self.p - 1).is_multiple_of(self.d1) {
            return Err(format!("d1 = {} does not divide p - 1", self.d1));
        }
        let exact = |pt: &FpPoint, d: u64| -> bool {
            e.mul(d, pt).is_infinity()
                && factor_small(d)
                    .map(|fs| fs.iter().all(|&(l, _)| !e.mul(d / l, pt).is_infinity()))
                    .unwrap_or(false)
        };
        if !exact(&self.g1, self.d1) {
            return Err(format!("g1 = {} does not have order d1 = {}", self.g1, self.d1));
        }
        if !exact(&self.g2, self.d2) {
            return Err(format!("g2 = {} does not have order d2 = {}", self.g2, self.d2));
        }
        Ok(())
    }
}

/// Builds generators for `E(F_p)` of order `n`.
pub fn group_structure<R: Rng + ?Sized>(
    e: &CurveFp,
    n: u64,
    rng: &mut R,
    limits: &Limits,
) -> Result<GroupStructure, FiniteError> {
    let p = e.p();
    let factorization_n = factor_small(n)?;
    let mut components = Vec::with_capacity(factorization_n.len());
    for &(ell, exp) in &factorization_n {
        components.push(sylow_basis(e, n, ell, exp, rng, limits)?);
    }
    let (mut d1, mut d2) = (1u64, 1u64);
    let (mut g1, mut g2) = (FpPoint::Infinity, FpPoint::Infinity);
    for c in &components {
        d1 *= c.ell.pow(c.a);
        d2 *= c.ell.pow(c.b);
        g1 = e.add(&g1, &c.h);
        g2 = e.add(&g2, &c.g);
    }
    let s = GroupStructure {
        p,
        n,
        d1,
        d2,
        g1,
        g2,
        factorization_n,
        components,
    };
    s.validate(e)
        .map_err(|detail| FiniteError::InternalInconsistency { p, detail })?;
    Ok(s)
}

fn l_order(e: &CurveFp, pt: &FpPoint, ell: u64) -> u32 {
    let mut v = 0;
    let mut cur = *pt;
    while !cur.is_infinity() {
        cur = e.mul(ell, &cur);
        v += 1;
    }
    v
}

fn sylow_basis<R: Rng + ?Sized>(
    e: &CurveFp,
    n: u64,
    ell: u64,
    exp: u32,
    rng: &mut R,
    limits: &Limits,
) -> Result<SylowBasis, FiniteError> {
    let p = e.p();
    let cofactor = n / ell.pow(exp);
    let mut g = FpPoint::Infinity;
    let mut b = 0u32;
    for _ in 0..limits.structure_attempts {
        let s = e.mul(cofactor, &e.random_point(rng));
        let v = l_order(e, &s, ell);
        if v > b {
            g = s;
            b = v;
        }
        if b == exp {
            return Ok(SylowBasis {
                ell,
                a: 0,
                b,
                cofactor,
                h: FpPoint::Infinity,
                g,
            });
        }
        let a = exp - b;
        if a > b || s == g {
            continue;
        }
        // smallest k with l^k s in <g>
        let gb = ell.pow(b);
        let g_factors = [(ell, b)];
        let mut k = 0u32;
        let mut t = s;
        let m = loop {
            if let Some(m) = dlog(e, &g, gb, &t, &g_factors, limits)? {
                break m;
            }
            t = e.mul(ell, &t);
            k += 1;
        };
        if k != a {
            continue;
        }
        let lk = ell.pow(k);
        if m % lk != 0 {
            // cannot happen when g has maximal order; resample
            continue;
        }
        let h = e.sub(&s, &e.mul(m / lk, &g));
        if l_order(e, &h, ell) == a {
            return Ok(SylowBasis {
                ell,
                a,
                b,
                cofactor,
                h,
                g,
            });
        }
    }
    log::debug!("no basis for the {ell}-part of E(F_{p}) after {} samples", limits.structure_attempts);
    Err(FiniteError::StructureNotFound { p })
}

// (i mod l^a, j mod l^b) with pt = i h + j g inside one component
fn component_coordinates(
    e: &CurveFp,
    c: &SylowBasis,
    pt: &FpPoint,
    limits: &Limits,
) -> Result<(u64, u64), FiniteError> {
    let p = e.p();
    let ell = c.ell;
    let inconsistent = |what: &str| FiniteError::InternalInconsistency {
        p,
        detail: format!("{what} in the {ell}-part"),
    };
    if c.a == 0 {
        let j = dlog(e, &c.g, ell.pow(c.b), pt, &[(ell, c.b)], limits)?
            .ok_or_else(|| inconsistent("point outside <g>"))?;
        return Ok((0, j));
    }
    // j mod l^(b-a) from l^a P = j l^a g
    let la = ell.pow(c.a);
    let gap = c.b - c.a;
    let j0 = if gap == 0 {
        0
    } else {
        let scaled_g = e.mul(la, &c.g);
        dlog(e, &scaled_g, ell.pow(gap), &e.mul(la, pt), &[(ell, gap)], limits)?
            .ok_or_else(|| inconsistent("l^a P outside <l^a g>"))?
    };
    // remaining problem lives in <h> + <g'> with g' = l^(b-a) g, both of order l^a
    let g_prime = e.mul(ell.pow(gap), &c.g);
    let rest = e.sub(pt, &e.mul(j0, &c.g));
    let h0 = e.mul(ell.pow(c.a - 1), &c.h);
    let g0 = e.mul(ell.pow(c.a - 1), &g_prime);
    if ell > limits.table_cap {
        return Err(FiniteError::TableTooLarge {
            p,
            needed: ell,
            cap: limits.table_cap,
        });
    }
    // baby steps over x h0, giant steps over y g0
    let mut table = std::collections::HashMap::with_capacity(ell as usize);
    let mut cur = FpPoint::Infinity;
    for x in 0..ell {
        table.insert(cur, x);
        cur = e.add(&cur, &h0);
    }
    let (mut i, mut s) = (0u64, 0u64);
    let mut lt = 1u64;
    for t in 0..c.a {
        let residual = e.sub(&e.sub(&rest, &e.mul(i, &c.h)), &e.mul(s, &g_prime));
        let top = e.mul(ell.pow(c.a - 1 - t), &residual);
        let mut probe = top;
        let mut found = None;
        for y in 0..ell {
            if let Some(&x) = table.get(&probe) {
                found = Some((x, y));
                break;
            }
            probe = e.sub(&probe, &g0);
        }
        let (x, y) = found.ok_or_else(|| inconsistent("no digit pair"))?;
        i += x * lt;
        s += y * lt;
        lt *= ell;
    }
    let lb = ell.pow(c.b);
    let j = (j0 + ell.pow(gap) * s) % lb;
    debug_assert_eq!(valuation(la, ell), c.a);
    Ok((i % la, j))
}
