use std::time::{Duration, Instant};

use localglobal::detector::{detect_mul, Certificate, DetectorConfig, Verdict};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SMALL_PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

fn cfg() -> DetectorConfig {
    DetectorConfig {
        worker_count: 4,
        ..DetectorConfig::default()
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Sign and exponent vector over the primes below 50.
fn factor(v: &BigRational) -> (i32, Vec<i64>) {
    let sign = if v.is_negative() { -1 } else { 1 };
    let mut exps = vec![0i64; SMALL_PRIMES.len()];
    for (k, &p) in SMALL_PRIMES.iter().enumerate() {
        let p = BigInt::from(p);
        let (mut n, mut d) = (v.numer().abs(), v.denom().clone());
        while (&n % &p).is_zero() {
            n /= &p;
            exps[k] += 1;
        }
        while (&d % &p).is_zero() {
            d /= &p;
            exps[k] -= 1;
        }
    }
    (sign, exps)
}

/// Solves `E c = e` over Q by elimination; `None` when inconsistent.
/// The columns of `E` are assumed independent.
fn solve_rational(cols: &[Vec<i64>], rhs: &[i64]) -> Option<Vec<BigRational>> {
    let r = cols.len();
    let rows = rhs.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| int(c[i])).collect();
            row.push(int(rhs[i]));
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..r {
        let Some(pr) = (pivot_row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, pr);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != pivot_row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..=r {
                    let d = &f * &m[pivot_row][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[r].is_zero()) {
        return None;
    }
    let mut c = vec![BigRational::zero(); r];
    for (i, &col) in pivots.iter().enumerate() {
        c[col] = m[i][r].clone();
    }
    Some(c)
}

fn rank(cols: &[Vec<i64>]) -> usize {
    let rows = cols.first().map_or(0, |c| c.len());
    let mut m: Vec<Vec<BigRational>> = (0..rows).map(|i| cols.iter().map(|c| int(c[i])).collect()).collect();
    let mut rank = 0;
    for col in 0..cols.len() {
        let Some(pr) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        for i in rank + 1..rows {
            let f = &m[i][col] / &m[rank][col];
            for j in 0..cols.len() {
                let d = &f * &m[rank][j];
                m[i][j] -= d;
            }
        }
        rank += 1;
    }
    rank
}

/// Coefficients with `x = prod g_i^c_i`, if any.
fn oracle(x: &BigRational, gens: &[BigRational]) -> Option<Vec<BigInt>> {
    let (sx, ex) = factor(x);
    let fg: Vec<(i32, Vec<i64>)> = gens.iter().map(factor).collect();
    let cols: Vec<Vec<i64>> = fg.iter().map(|(_, e)| e.clone()).collect();
    let c = if gens.is_empty() {
        if ex.iter().all(|&e| e == 0) { Vec::new() } else { return None }
    } else {
        solve_rational(&cols, &ex)?
    };
    if !c.iter().all(|v| v.is_integer()) {
        return None;
    }
    let c: Vec<BigInt> = c.into_iter().map(|v| v.to_integer()).collect();
    let sign: i32 = fg
        .iter()
        .zip(&c)
        .map(|((s, _), k)| if *s < 0 && k.is_odd() { -1 } else { 1 })
        .product();
    (sign == sx).then_some(c)
}

fn random_element<R: Rng>(rng: &mut R) -> BigRational {
    let mut v = BigRational::one();
    for _ in 0..rng.gen_range(1..=3) {
        let p = int(SMALL_PRIMES[rng.gen_range(0..SMALL_PRIMES.len())] as i64);
        let e: i32 = rng.gen_range(-10..=10);
        v *= if e >= 0 { p.pow(e) } else { p.recip().pow(-e) };
    }
    if rng.gen_bool(0.3) {
        v = -v;
    }
    v
}

fn random_instance<R: Rng>(rng: &mut R) -> (BigRational, Vec<BigRational>) {
    loop {
        let r = rng.gen_range(1..=3);
        let gens: Vec<BigRational> = (0..r).map(|_| random_element(rng)).collect();
        if gens.iter().any(|g| g.abs().is_one()) {
            continue;
        }
        let cols: Vec<Vec<i64>> = gens.iter().map(|g| factor(g).1).collect();
        if rank(&cols) < r {
            continue;
        }
        let x = match rng.gen_range(0..4) {
            // inside the subgroup
            0 | 1 => gens.iter().fold(BigRational::one(), |acc, g| {
                let k: i32 = rng.gen_range(-3..=3);
                acc * if k >= 0 { g.pow(k) } else { g.recip().pow(-k) }
            }),
            // inside up to sign
            2 => -gens.iter().fold(BigRational::one(), |acc, g| acc * g),
            _ => random_element(rng),
        };
        if x.is_zero() {
            continue;
        }
        return (x, gens);
    }
}

fn check(x: &BigRational, gens: &[BigRational]) {
    let report = detect_mul(x, gens, &cfg()).unwrap();
    assert!(report.alarms.is_empty(), "{x} vs {gens:?}: {:?}", report.alarms);
    match (oracle(x, gens), &report.verdict) {
        (Some(c), Verdict::Dependent { coeffs }) => assert_eq!(&c, coeffs, "{x} vs {gens:?}"),
        (None, Verdict::Independent { .. }) => {}
        (o, v) => panic!("{x} vs {gens:?}: oracle {o:?}, detector {v:?}"),
    }
}

#[test]
fn fixtures() {
    let two_three = [int(2), int(3)];
    let r = detect_mul(&int(6), &two_three, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::Dependent { coeffs: vec![1.into(), 1.into()] });
    let r = detect_mul(&int(8), &two_three, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::Dependent { coeffs: vec![3.into(), 0.into()] });
    let r = detect_mul(&int(5), &two_three, &cfg()).unwrap();
    assert!(r.verdict.witness_prime().is_some());
    // no prime separates -2 from <2>; the sign does
    let r = detect_mul(&int(-2), &[int(2)], &cfg()).unwrap();
    assert_eq!(
        r.verdict,
        Verdict::Independent { certificate: Certificate::SignMismatch { coeffs: vec![1.into()] } }
    );
    for (x, g) in [(6, vec![2, 3]), (8, vec![2, 3]), (5, vec![2, 3]), (-2, vec![2])] {
        let gens: Vec<BigRational> = g.into_iter().map(int).collect();
        check(&int(x), &gens);
    }
}

#[test]
fn units_and_bad_input() {
    let r = detect_mul(&int(1), &[int(2)], &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::Dependent { coeffs: vec![0.into()] });
    let r = detect_mul(&int(-1), &[int(2)], &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::Independent { certificate: Certificate::Torsion { order: 2 } });
    assert!(detect_mul(&int(0), &[int(2)], &cfg()).is_err());
    assert!(detect_mul(&int(3), &[int(-1)], &cfg()).is_err());
    assert!(detect_mul(&int(3), &[int(0)], &cfg()).is_err());
}

#[test]
fn rational_inputs() {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    check(&q(9, 4), &[q(3, 2)]);
    check(&q(-8, 27), &[q(-2, 3)]);
    check(&q(8, 27), &[q(-2, 3)]);
    check(&q(3, 2), &[q(9, 4)]);
}

#[test]
fn random_instances_match_factorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    for _ in 0..100 {
        let (x, gens) = random_instance(&mut rng);
        check(&x, &gens);
    }
    let elapsed = start.elapsed();
    eprintln!("100 instances in {elapsed:?}");
    assert!(elapsed < Duration::from_secs(60));
}
