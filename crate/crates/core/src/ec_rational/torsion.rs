use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::arith::{factor, FactorError};

use super::{CurveQ, PointQ};

/// Largest order of a rational torsion point.
pub const MAX_TORSION_ORDER: u32 = 12;

/// The torsion subgroup of `E(Q)`, with points sorted by order and then by
/// coordinates; `Infinity` comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionGroup {
    pub points: Vec<PointQ>,
    pub order: usize,
}

impl TorsionGroup {
    pub fn contains(&self, pt: &PointQ) -> bool {
        self.points.contains(pt)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

/// Order of `pt` if it is at most [`MAX_TORSION_ORDER`], else `None`.
pub fn torsion_order(e: &CurveQ, pt: &PointQ) -> Option<u32> {
    let mut acc = pt.clone();
    for n in 1..=MAX_TORSION_ORDER {
        if acc.is_infinity() {
            return Some(n);
        }
        // a non-integral multiple rules out finite order
        if !acc.is_integral() {
            return None;
        }
        acc = e.add(&acc, pt);
    }
    None
}

/// Lutz–Nagell enumeration: integral points with `y = 0` or
/// `y^2 | 4a^3 + 27b^2`, kept when their order is small.
pub fn torsion_subgroup(e: &CurveQ) -> Result<TorsionGroup, FactorError> {
    let bound = e.lutz_nagell_bound();
    let mut ys = vec![BigInt::zero()];
    ys.extend(square_divisor_roots(&bound)?.into_iter().map(BigInt::from));

    let mut found: Vec<(u32, PointQ)> = vec![(1, PointQ::Infinity)];
    for y in &ys {
        let c = e.b() - y * y;
        for x in integer_cubic_roots(e.a(), &c) {
            let signs: &[i32] = if y.is_zero() { &[1] } else { &[1, -1] };
            for &s in signs {
                let pt = PointQ::affine(x.clone().into(), (y * s).into());
                debug_assert!(e.contains(&pt));
                if let Some(n) = torsion_order(e, &pt) {
                    found.push((n, pt));
                }
            }
        }
    }
    found.sort_by(|(n1, p1), (n2, p2)| n1.cmp(n2).then_with(|| cmp_points(p1, p2)));
    let points: Vec<PointQ> = found.into_iter().map(|(_, p)| p).collect();
    let order = points.len();
    assert!(order <= 16, "torsion subgroup of order {order} exceeds the Mazur bound");
    Ok(TorsionGroup { points, order })
}

fn cmp_points(p: &PointQ, q: &PointQ) -> std::cmp::Ordering {
    match (p, q) {
        (PointQ::Infinity, PointQ::Infinity) => std::cmp::Ordering::Equal,
        (PointQ::Infinity, _) => std::cmp::Ordering::Less,
        (_, PointQ::Infinity) => std::cmp::Ordering::Greater,
        (PointQ::Affine { x: x1, y: y1 }, PointQ::Affine { x: x2, y: y2 }) => {
            x1.cmp(x2).then_with(|| y1.cmp(y2))
        }
    }
}

/// Positive `y` with `y^2 | n`; `n = 0` has none worth listing.
fn square_divisor_roots(n: &BigInt) -> Result<Vec<BigUint>, FactorError> {
    if n.is_zero() {
        return Ok(Vec::new());
    }
    let f = factor(n.magnitude())?;
    let mut roots = vec![BigUint::one()];
    for (p, k) in &f.factors {
        let mut next = Vec::with_capacity(roots.len() * (*k as usize / 2 + 1));
        for r in &roots {
            let mut pow = BigUint::one();
            for _ in 0..=k / 2 {
                next.push(r * &pow);
                pow *= p;
            }
        }
        roots = next;
    }
    roots.sort();
    Ok(roots)
}

fn cubic(a: &BigInt, c: &BigInt, x: &BigInt) -> BigInt {
    x * x * x + a * x + c
}

/// Integer roots of `x^3 + a x + c`, ascending.
///
/// The cubic is monotone on each piece cut out by its critical points
/// `+-sqrt(-a/3)`, so every piece is searched by bisection.
fn integer_cubic_roots(a: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let r = BigInt::one() + a.abs().max(c.abs());
    let mut cuts = vec![-r.clone()];
    if a.is_negative() {
        let s = (-a / 3u32).sqrt();
        cuts.extend([-&s - 1u32, -&s, -&s + 1u32, s.clone() - 1u32, s.clone(), s + 1u32]);
    }
    cuts.push(r);
    cuts.sort();
    cuts.dedup();

    let mut roots = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        for end in [lo, hi] {
            if cubic(a, c, end).is_zero() {
                roots.push(end.clone());
            }
        }
        if let Some(x) = bisect(a, c, lo, hi) {
            roots.push(x);
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// A root strictly inside `(lo, hi)` when the cubic changes sign there.
/// Each window between cut points is monotone, so there is at most one.
fn bisect(a: &BigInt, c: &BigInt, lo: &BigInt, hi: &BigInt) -> Option<BigInt> {
    let (flo, fhi) = (cubic(a, c, lo), cubic(a, c, hi));
    if flo.is_zero() || fhi.is_zero() || flo.sign() == fhi.sign() {
        return None;
    }
    let rising = fhi.is_positive();
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        let f = cubic(a, c, &mid);
        if f.is_zero() {
            return Some(mid);
        }
        if f.is_positive() == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    None
}
