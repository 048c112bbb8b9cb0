//! Exact arithmetic on `E(Q)` for `y^2 = x^3 + a x + b` with integer `a, b`.

mod reduce;
mod torsion;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use reduce::{good_primes, reduce_point, GoodPrimes};
pub use torsion::{torsion_order, torsion_subgroup, TorsionGroup, MAX_TORSION_ORDER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("y^2 = x^3 + {a}x + {b} is singular")]
    Singular { a: BigInt, b: BigInt },
    #[error("{point} is not on y^2 = x^3 + {a}x + {b}")]
    NotOnCurve { point: String, a: BigInt, b: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveQ {
    a: BigInt,
    b: BigInt,
}

/// A rational point. Coordinates are kept in lowest terms with positive
/// denominators, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointQ {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

impl PointQ {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        PointQ::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        PointQ::Affine {
            x: BigRational::from_integer(x.into()),
            y: BigRational::from_integer(y.into()),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, PointQ::Infinity)
    }

    pub fn x(&self) -> Option<&BigRational> {
        match self {
            PointQ::Affine { x, .. } => Some(x),
            PointQ::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&BigRational> {
        match self {
            PointQ::Affine { y, .. } => Some(y),
            PointQ::Infinity => None,
        }
    }

    /// Both coordinates are integers.
    pub fn is_integral(&self) -> bool {
        match self {
            PointQ::Infinity => true,
            PointQ::Affine { x, y } => x.is_integer() && y.is_integer(),
        }
    }
}

impl fmt::Display for PointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointQ::Infinity => write!(f, "inf"),
            PointQ::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

impl CurveQ {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self, CurveError> {
        let curve = CurveQ {
            a: a.into(),
            b: b.into(),
        };
        if curve.discriminant().is_zero() {
            return Err(CurveError::Singular {
                a: curve.a,
                b: curve.b,
            });
        }
        Ok(curve)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// `-16 (4 a^3 + 27 b^2)`.
    pub fn discriminant(&self) -> BigInt {
        BigInt::from(-16) * self.lutz_nagell_bound()
    }

    /// `4 a^3 + 27 b^2`; the square of the `y` coordinate of any integral
    /// torsion point divides it.
    pub fn lutz_nagell_bound(&self) -> BigInt {
        BigInt::from(4) * &self.a * &self.a * &self.a + BigInt::from(27) * &self.b * &self.b
    }

    fn rhs(&self, x: &BigRational) -> BigRational {
        let a = BigRational::from_integer(self.a.clone());
        let b = BigRational::from_integer(self.b.clone());
        x * x * x + a * x + b
    }

    pub fn contains(&self, pt: &PointQ) -> bool {
        match pt {
            PointQ::Infinity => true,
            PointQ::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    /// Returns the point back if it lies on the curve.
    pub fn check(&self, pt: PointQ) -> Result<PointQ, CurveError> {
        if self.contains(&pt) {
            Ok(pt)
        } else {
            Err(CurveError::NotOnCurve {
                point: pt.to_string(),
                a: self.a.clone(),
                b: self.b.clone(),
            })
        }
    }

    pub fn neg(&self, pt: &PointQ) -> PointQ {
        match pt {
            PointQ::Infinity => PointQ::Infinity,
            PointQ::Affine { x, y } => PointQ::Affine {
                x: x.clone(),
                y: -y,
            },
        }
    }

    /// Chord-and-tangent addition.
    pub fn add(&self, lhs: &PointQ, rhs: &PointQ) -> PointQ {
        let (x1, y1, x2, y2) = match (lhs, rhs) {
            (PointQ::Infinity, q) | (q, PointQ::Infinity) => return q.clone(),
            (PointQ::Affine { x: x1, y: y1 }, PointQ::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return PointQ::Infinity;
            }
            let three = BigRational::from_integer(3.into());
            let two = BigRational::from_integer(2.into());
            (three * x1 * x1 + BigRational::from_integer(self.a.clone())) / (two * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &slope * &slope - x1 - x2;
        let y3 = slope * (x1 - &x3) - y1;
        PointQ::Affine { x: x3, y: y3 }
    }

    pub fn sub(&self, lhs: &PointQ, rhs: &PointQ) -> PointQ {
        self.add(lhs, &self.neg(rhs))
    }

    /// `n * pt` for any integer `n`.
    pub fn scalar_mul(&self, n: &BigInt, pt: &PointQ) -> PointQ {
        let base = if n.is_negative() { self.neg(pt) } else { pt.clone() };
        let k = n.magnitude();
        let mut acc = PointQ::Infinity;
        for i in (0..k.bits()).rev() {
            acc = self.add(&acc, &acc);
            if k.bit(i) {
                acc = self.add(&acc, &base);
            }
        }
        acc
    }

    pub fn mul(&self, n: i64, pt: &PointQ) -> PointQ {
        self.scalar_mul(&BigInt::from(n), pt)
    }

    /// `sum c_i P_i`.
    pub fn linear_combination(&self, coeffs: &[BigInt], points: &[PointQ]) -> PointQ {
        assert_eq!(coeffs.len(), points.len(), "one coefficient per point");
        coeffs
            .iter()
            .zip(points)
            .filter(|(c, _)| !c.is_zero())
            .fold(PointQ::Infinity, |acc, (c, pt)| {
                if c.is_one() {
                    self.add(&acc, pt)
                } else {
                    self.add(&acc, &self.scalar_mul(c, pt))
                }
            })
    }
}

impl fmt::Display for CurveQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + {}x + {}", self.a, self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn e17() -> CurveQ {
        CurveQ::new(0, 17).unwrap()
    }

    #[test]
    fn addition_examples() {
        let e = e17();
        let p = PointQ::from_ints(-2, 3);
        assert_eq!(e.add(&p, &PointQ::Infinity), p);
        let sum = e.add(&p, &PointQ::from_ints(2, 5));
        assert_eq!(sum, PointQ::affine(q(1, 4), q(-33, 8)));
        assert!(e.contains(&sum));

        let e2 = CurveQ::new(0, -2).unwrap();
        let t = PointQ::from_ints(3, 5);
        let d = e2.add(&t, &t);
        assert_eq!(d, PointQ::affine(q(129, 100), q(-383, 1000)));
        assert!(e2.contains(&d));
    }

    #[test]
    fn scalar_examples() {
        let e = e17();
        let p = PointQ::from_ints(-2, 3);
        assert_eq!(e.mul(0, &p), PointQ::Infinity);
        assert_eq!(e.mul(-1, &p), PointQ::from_ints(-2, -3));
        assert_eq!(e.mul(2, &p), e.add(&p, &p));
        assert_eq!(e.mul(5, &p), e.add(&e.mul(2, &p), &e.mul(3, &p)));
    }

    #[test]
    fn linear_combination_examples() {
        let e = e17();
        let pts = [PointQ::from_ints(-2, 3), PointQ::from_ints(2, 5)];
        let zero = [BigInt::zero(), BigInt::zero()];
        assert_eq!(e.linear_combination(&zero, &pts), PointQ::Infinity);
        assert_eq!(e.linear_combination(&[BigInt::one()], &pts[..1]), pts[0]);
        assert_eq!(
            e.linear_combination(&[BigInt::one(), BigInt::one()], &pts),
            PointQ::affine(q(1, 4), q(-33, 8))
        );
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(CurveQ::new(0, 0), Err(CurveError::Singular { .. })));
        assert!(matches!(CurveQ::new(-3, 2), Err(CurveError::Singular { .. })));
        assert_eq!(e17().discriminant(), BigInt::from(-124_848));
    }

    proptest! {
        #[test]
        fn group_axioms(c in proptest::collection::vec(-3i64..=3, 6)) {
            let e = e17();
            let g = [PointQ::from_ints(-2, 3), PointQ::from_ints(2, 5)];
            let mk = |i: usize| e.linear_combination(
                &[BigInt::from(c[2 * i]), BigInt::from(c[2 * i + 1])], &g);
            let (p, r, s) = (mk(0), mk(1), mk(2));
            prop_assert!(e.contains(&p) && e.contains(&r) && e.contains(&s));
            prop_assert_eq!(e.add(&p, &r), e.add(&r, &p));
            prop_assert_eq!(e.add(&e.add(&p, &r), &s), e.add(&p, &e.add(&r, &s)));
            prop_assert_eq!(e.add(&p, &e.neg(&p)), PointQ::Infinity);
            prop_assert_eq!(e.add(&p, &PointQ::Infinity), p.clone());
            let k = c[0] + c[3];
            prop_assert_eq!(e.mul(k, &p), (0..k.abs()).fold(PointQ::Infinity, |acc, _| {
                e.add(&acc, &if k < 0 { e.neg(&p) } else { p.clone() })
            }));
        }
    }
}
