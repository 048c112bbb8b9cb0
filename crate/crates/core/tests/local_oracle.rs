use std::collections::BTreeSet;

use localglobal::ec_finite::{
    count_points, count_points_brute, group_structure, hasse_interval, local_membership, CurveFp, FpPoint, Limits,
};
use localglobal::ec_rational::{good_primes, CurveQ};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CURVES: [(i64, i64); 5] = [(0, 17), (0, -2), (-1, 0), (0, 1), (0, 3)];

fn naive_count(e: &CurveFp) -> u64 {
    let p = e.p();
    let squares: Vec<u64> = (0..p).map(|y| y * y % p).collect();
    let mut n = 1;
    for x in 0..p {
        let rhs = e.rhs(x);
        n += squares.iter().filter(|&&s| s == rhs).count() as u64;
    }
    n
}

#[test]
fn counts_match_enumeration_and_hasse() {
    let limits = Limits::default();
    for (a, b) in CURVES {
        let e = CurveQ::new(a, b).unwrap();
        for p in good_primes(&e, 500) {
            let ep = e.reduce(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            let n = count_points(&ep, &mut rng, &limits).unwrap();
            assert_eq!(n, naive_count(&ep), "y^2 = x^3 + {a}x + {b} mod {p}");
            assert_eq!(n, count_points_brute(&ep));
            let (lo, hi) = hasse_interval(p);
            assert!(lo <= n && n <= hi, "Hasse fails at {p}: {n}");
            // Hasse in its squared form, without the helper
            let t = p as i64 + 1 - n as i64;
            assert!(t * t <= 4 * p as i64);
        }
    }
}

fn lin(e: &CurveFp, c: &[u64], gens: &[FpPoint]) -> FpPoint {
    c.iter()
        .zip(gens)
        .fold(FpPoint::Infinity, |acc, (&k, g)| e.add(&acc, &e.mul(k, g)))
}

/// Compares the solution coset with every `c` in `[0, n)^r` (the solution
/// set is periodic with period `n` in each coordinate).
fn check_against_box(e: &CurveFp, n: u64, target: &FpPoint, gens: &[FpPoint], rng: &mut ChaCha8Rng) {
    let limits = Limits::default();
    let s = group_structure(e, n, rng, &limits).unwrap();
    let local = local_membership(e, &s, target, gens, &limits).unwrap();

    let mut solutions = BTreeSet::new();
    let mut claimed = BTreeSet::new();
    let r = gens.len();
    let total = n.pow(r as u32);
    for k in 0..total {
        let mut c = Vec::with_capacity(r);
        let mut rest = k;
        for _ in 0..r {
            c.push(rest % n);
            rest /= n;
        }
        if lin(e, &c, gens) == *target {
            solutions.insert(c.clone());
        }
        let big: Vec<BigInt> = c.iter().map(|&x| x.into()).collect();
        if local.coset().is_some_and(|coset| coset.contains(&big)) {
            claimed.insert(c);
        }
    }
    assert_eq!(local.is_unsolvable(), solutions.is_empty(), "p = {}", e.p());
    assert_eq!(solutions, claimed, "p = {}", e.p());
}

#[test]
fn membership_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (a, b) in CURVES {
        let e = CurveQ::new(a, b).unwrap();
        for p in good_primes(&e, 50) {
            let ep = e.reduce(p).unwrap();
            let n = naive_count(&ep);
            let points = ep.points();
            for _ in 0..6 {
                let r = rng.gen_range(1..=2);
                let gens: Vec<FpPoint> = (0..r).map(|_| points[rng.gen_range(0..points.len())]).collect();
                let target = if rng.gen_bool(0.5) {
                    let c: Vec<u64> = (0..r).map(|_| rng.gen_range(0..n)).collect();
                    lin(&ep, &c, &gens)
                } else {
                    points[rng.gen_range(0..points.len())]
                };
                check_against_box(&ep, n, &target, &gens, &mut rng);
            }
        }
    }
}
