use localglobal::arith::factor_small;
use localglobal::detector::{find_witness_primes, DetectorConfig, WitnessQuery};
use localglobal::ec_finite::{CurveFp, FpPoint};
use localglobal::ec_rational::{good_primes, reduce_point, CurveQ, PointQ};

fn setup() -> (CurveQ, Vec<PointQ>) {
    let e = CurveQ::new(0, 17).unwrap();
    (e, vec![PointQ::from_ints(-2, 3), PointQ::from_ints(2, 5)])
}

fn cfg() -> DetectorConfig {
    DetectorConfig {
        worker_count: 4,
        ..DetectorConfig::default()
    }
}

/// `o` is the exact order of `pt`: it kills the point and no maximal proper
/// divisor does.
fn is_exact_order(e: &CurveFp, pt: &FpPoint, o: u64) -> bool {
    e.mul(o, pt).is_infinity()
        && factor_small(o)
            .unwrap()
            .iter()
            .all(|&(q, _)| !e.mul(o / q, pt).is_infinity())
}

fn order_by_addition(e: &CurveFp, pt: &FpPoint) -> u64 {
    let mut acc = *pt;
    let mut k = 1;
    while !acc.is_infinity() {
        acc = e.add(&acc, pt);
        k += 1;
    }
    k
}

fn run(i: usize, j: usize) {
    let (e, pts) = setup();
    let q = WitnessQuery {
        i: vec![i],
        j: vec![j],
        ell: 2,
        m: 2,
        prime_bound: 100_000,
    };
    let report = find_witness_primes(&e, &pts, &q, &cfg()).unwrap();
    eprintln!(
        "I = {{{}}}, J = {{{}}}: scanned {}, matched {}, skipped {}, density {:.4}",
        i + 1,
        j + 1,
        report.scanned,
        report.matches.len(),
        report.skipped.len(),
        report.density()
    );
    assert!(report.matches.len() >= 3);
    assert_eq!(report.scanned + report.skipped.len(), good_primes(&e, 100_000).count());
    for m in &report.matches {
        let ep = e.reduce(m.prime).unwrap();
        for (k, pt) in pts.iter().enumerate() {
            let rp = reduce_point(pt, m.prime);
            assert!(is_exact_order(&ep, &rp, m.orders[k]), "p = {}", m.prime);
            if m.prime < 3000 {
                assert_eq!(order_by_addition(&ep, &rp), m.orders[k]);
            }
        }
        assert_eq!(m.orders[i] % 2, 1, "p = {}", m.prime);
        assert_eq!(m.orders[j] % 4, 0, "p = {}", m.prime);
    }
}

#[test]
fn first_point_odd_second_divisible_by_four() {
    run(0, 1);
}

#[test]
fn swapped_query() {
    run(1, 0);
}
