use std::fmt;

use rand::Rng;

use crate::arith::{inv_mod, is_prime_u64, mul_mod, pow_mod};

use super::FiniteError;

/// `y^2 = x^3 + a x + b` over `F_p`, `p` an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CurveFp {
    p: u64,
    a: u64,
    b: u64,
}

/// A point of `E(F_p)`; affine coordinates are reduced residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FpPoint {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl FpPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, FpPoint::Infinity)
    }
}

impl fmt::Display for FpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FpPoint::Infinity => write!(f, "inf"),
            FpPoint::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

impl CurveFp {
    /// Fails if `p` is not an odd prime below 2^62 or the curve is singular.
    pub fn new(p: u64, a: i64, b: i64) -> Result<Self, FiniteError> {
        let a = (a as i128).rem_euclid(p as i128) as u64;
        let b = (b as i128).rem_euclid(p as i128) as u64;
        Self::from_residues(p, a, b)
    }

    pub fn from_residues(p: u64, a: u64, b: u64) -> Result<Self, FiniteError> {
        if !(3..1 << 62).contains(&p) || !is_prime_u64(p) {
            return Err(FiniteError::BadModulus(p));
        }
        let curve = CurveFp { p, a: a % p, b: b % p };
        let disc = (4 * pow_mod(curve.a, 3, p) as u128 + 27 * mul_mod(curve.b, curve.b, p) as u128)
            % p as u128;
        if disc == 0 {
            return Err(FiniteError::Singular { p });
        }
        Ok(curve)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// `x^3 + a x + b mod p`.
    pub fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        let x3 = mul_mod(mul_mod(x, x, p), x, p);
        ((x3 as u128 + mul_mod(self.a, x, p) as u128 + self.b as u128) % p as u128) as u64
    }

    pub fn contains(&self, pt: &FpPoint) -> bool {
        match *pt {
            FpPoint::Infinity => true,
            FpPoint::Affine { x, y } => {
                x < self.p && y < self.p && mul_mod(y, y, self.p) == self.rhs(x)
            }
        }
    }

    pub fn neg(&self, pt: &FpPoint) -> FpPoint {
        match *pt {
            FpPoint::Infinity => FpPoint::Infinity,
            FpPoint::Affine { x, y } => FpPoint::Affine {
                x,
                y: (self.p - y) % self.p,
            },
        }
    }

    pub fn add(&self, lhs: &FpPoint, rhs: &FpPoint) -> FpPoint {
        let p = self.p;
        let (x1, y1, x2, y2) = match (*lhs, *rhs) {
            (FpPoint::Infinity, q) => return q,
            (q, FpPoint::Infinity) => return q,
            (FpPoint::Affine { x: x1, y: y1 }, FpPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return FpPoint::Infinity;
            }
            // tangent: (3x^2 + a) / 2y
            let num = (3 * mul_mod(x1, x1, p) as u128 + self.a as u128) % p as u128;
            let den = inv_mod((2 * y1 as u128 % p as u128) as u64, p).expect("2y invertible");
            mul_mod(num as u64, den, p)
        } else {
            let num = (y2 + p - y1) % p;
            let den = inv_mod((x2 + p - x1) % p, p).expect("distinct x");
            mul_mod(num, den, p)
        };
        let x3 = ((mul_mod(slope, slope, p) as u128 + 2 * p as u128 - x1 as u128 - x2 as u128)
            % p as u128) as u64;
        let y3 = ((mul_mod(slope, (x1 + p - x3) % p, p) as u128 + p as u128 - y1 as u128)
            % p as u128) as u64;
        FpPoint::Affine { x: x3, y: y3 }
    }

    pub fn sub(&self, lhs: &FpPoint, rhs: &FpPoint) -> FpPoint {
        self.add(lhs, &self.neg(rhs))
    }

    pub fn double(&self, pt: &FpPoint) -> FpPoint {
        self.add(pt, pt)
    }

    /// `n * pt` by double-and-add.
    pub fn mul(&self, mut n: u64, pt: &FpPoint) -> FpPoint {
        let mut acc = FpPoint::Infinity;
        let mut base = *pt;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.double(&base);
            }
        }
        acc
    }

    pub fn mul_signed(&self, n: i64, pt: &FpPoint) -> FpPoint {
        let q = self.mul(n.unsigned_abs(), pt);
        if n < 0 {
            self.neg(&q)
        } else {
            q
        }
    }

    /// Square root of a residue, if one exists (Tonelli–Shanks).
    pub fn sqrt(&self, v: u64) -> Option<u64> {
        sqrt_mod(v, self.p)
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> FpPoint {
        loop {
            let x = rng.gen_range(0..self.p);
            let rhs = self.rhs(x);
            if let Some(y) = sqrt_mod(rhs, self.p) {
                let y = if rng.gen::<bool>() { y } else { (self.p - y) % self.p };
                return FpPoint::Affine { x, y };
            }
        }
    }

    /// Every point of the group, in increasing `(x, y)` order with infinity
    /// first. Only sensible for small `p`.
    pub fn points(&self) -> Vec<FpPoint> {
        let mut out = vec![FpPoint::Infinity];
        for x in 0..self.p {
            let r = self.rhs(x);
            if r == 0 {
                out.push(FpPoint::Affine { x, y: 0 });
            } else if let Some(y) = sqrt_mod(r, self.p) {
                let (lo, hi) = if y < self.p - y { (y, self.p - y) } else { (self.p - y, y) };
                out.push(FpPoint::Affine { x, y: lo });
                out.push(FpPoint::Affine { x, y: hi });
            }
        }
        out
    }

    /// The quadratic twist by a non-residue `d`: `y^2 = x^3 + a d^2 x + b d^3`.
    pub fn twist(&self, d: u64) -> CurveFp {
        let p = self.p;
        let d2 = mul_mod(d, d, p);
        CurveFp {
            p,
            a: mul_mod(self.a, d2, p),
            b: mul_mod(self.b, mul_mod(d2, d, p), p),
        }
    }
}

/// Legendre symbol as -1, 0, 1.
pub fn legendre(v: u64, p: u64) -> i32 {
    let v = v % p;
    if v == 0 {
        return 0;
    }
    if pow_mod(v, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn sqrt_mod(v: u64, p: u64) -> Option<u64> {
    let v = v % p;
    if v == 0 {
        return Some(0);
    }
    if legendre(v, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(v, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p).find(|&z| legendre(z, p) == -1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(v, q, p);
    let mut r = pow_mod(v, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_inverse() {
        let e = CurveFp::new(5, -1, 0).unwrap();
        let p = FpPoint::Affine { x: 2, y: 1 };
        assert!(e.contains(&p));
        assert_eq!(e.add(&p, &FpPoint::Infinity), p);
        assert_eq!(e.add(&p, &e.neg(&p)), FpPoint::Infinity);
    }

    // 2P by brute force: scan slopes m for the line through P that meets
    // the curve doubly at P, then scan x for the third intersection. For a
    // line L, f(x) = rhs(x) - L(x)^2 = (x - x1) g(x) with g quadratic; g(x1)
    // is interpolated from g at x1+1, x1+2, x1+3 (weights 3, -3, 1).
    fn brute_double(e: &CurveFp, pt: &FpPoint) -> FpPoint {
        let FpPoint::Affine { x: x1, y: y1 } = *pt else {
            return FpPoint::Infinity;
        };
        let p = e.p();
        if y1 == 0 {
            return FpPoint::Infinity;
        }
        let line = |m: u64, x: u64| (y1 + mul_mod(m, (x + p - x1) % p, p)) % p;
        let f = |m: u64, x: u64| (e.rhs(x) + p - mul_mod(line(m, x), line(m, x), p)) % p;
        let g = |m: u64, k: u64| mul_mod(f(m, (x1 + k) % p), inv_mod(k % p, p).unwrap(), p);
        for m in 0..p {
            let g_at_x1 = (3 * g(m, 1) + 3 * (p - g(m, 2)) + g(m, 3)) % p;
            if g_at_x1 != 0 {
                continue;
            }
            let x3 = (0..p).find(|&x| x != x1 && f(m, x) == 0).unwrap_or(x1);
            return FpPoint::Affine { x: x3, y: (p - line(m, x3)) % p };
        }
        unreachable!("no tangent line found")
    }

    #[test]
    fn doubling_matches_brute_force() {
        let e = CurveFp::new(5, -1, 0).unwrap();
        assert_eq!(e.points().len(), 8);
        let p = FpPoint::Affine { x: 2, y: 1 };
        assert_eq!(e.double(&p), brute_double(&e, &p));
        assert_eq!(e.double(&p), FpPoint::Affine { x: 0, y: 0 });
        for e in [CurveFp::new(13, 2, 3).unwrap(), CurveFp::new(31, 0, 17).unwrap()] {
            for pt in e.points() {
                assert_eq!(e.double(&pt), brute_double(&e, &pt), "{pt}");
            }
        }
    }

    #[test]
    fn sqrt_all_residues() {
        for p in [3u64, 5, 7, 13, 17, 41, 97, 257, 65537] {
            for v in 0..p.min(500) {
                match sqrt_mod(v, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), v),
                    None => assert_eq!(legendre(v, p), -1),
                }
            }
        }
    }

    #[test]
    fn singular_and_bad_modulus() {
        assert!(matches!(CurveFp::new(5, 0, 0), Err(FiniteError::Singular { .. })));
        assert!(matches!(CurveFp::new(9, 1, 1), Err(FiniteError::BadModulus(9))));
        assert!(matches!(CurveFp::new(2, 1, 1), Err(FiniteError::BadModulus(2))));
    }

    #[test]
    fn random_points_on_curve() {
        let e = CurveFp::new(10_007, 0, 17).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = e.random_point(&mut rng);
            assert!(e.contains(&p));
            let q = e.random_point(&mut rng);
            assert!(e.contains(&e.add(&p, &q)));
            assert_eq!(e.add(&p, &q), e.add(&q, &p));
        }
    }
}
