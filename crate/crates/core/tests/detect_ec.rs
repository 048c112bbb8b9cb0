use std::time::{Duration, Instant};

use localglobal::detector::{detect_ec, Certificate, DetectorConfig, Verdict};
use localglobal::ec_finite::subgroup_closure;
use localglobal::ec_rational::{reduce_point, CurveQ, PointQ};
use num_bigint::BigInt;
use num_rational::BigRational;

fn e17() -> CurveQ {
    CurveQ::new(0, 17).unwrap()
}

fn gens() -> Vec<PointQ> {
    vec![PointQ::from_ints(-2, 3), PointQ::from_ints(2, 5)]
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn cfg(threads: usize) -> DetectorConfig {
    DetectorConfig {
        prime_bound: 10_000,
        worker_count: threads,
        ..DetectorConfig::default()
    }
}

// exhaustive search over the box |c_i| <= 5
fn box_oracle(e: &CurveQ, target: &PointQ, gens: &[PointQ]) -> Vec<Vec<i64>> {
    let mut hits = Vec::new();
    for c0 in -5i64..=5 {
        for c1 in -5i64..=5 {
            let sum = e.linear_combination(&[c0.into(), c1.into()], gens);
            if sum == *target {
                hits.push(vec![c0, c1]);
            }
        }
    }
    hits
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| x.into()).collect()
}

#[test]
fn dependent_fixtures_match_box_search() {
    // relations recorded from a separate exact search before this code existed
    let fixtures = [
        (PointQ::from_ints(4, 9), [1, -1]),
        (PointQ::from_ints(8, 23), [-2, 0]),
        (PointQ::affine(q(1, 4), q(-33, 8)), [1, 1]),
        (PointQ::from_ints(-2, -3), [-1, 0]),
    ];
    let e = e17();
    for (target, expected) in fixtures {
        assert_eq!(box_oracle(&e, &target, &gens()), vec![expected.to_vec()]);
        let start = Instant::now();
        let report = detect_ec(&e, &target, &gens(), &cfg(4)).unwrap();
        assert!(start.elapsed() < Duration::from_secs(10));
        assert_eq!(report.verdict, Verdict::Dependent { coeffs: big(&expected) }, "target {target}");
        assert!(report.alarms.is_empty());
    }
}

#[test]
fn independent_with_rechecked_witness() {
    let e = e17();
    let target = PointQ::from_ints(2, 5);
    let g = [PointQ::from_ints(-2, 3)];
    let report = detect_ec(&e, &target, &g, &cfg(4)).unwrap();
    let p = report.verdict.witness_prime().expect("local obstruction");
    assert!(p <= 1000);
    let ep = e.reduce(p).unwrap();
    let closure = subgroup_closure(&ep, &[reduce_point(&g[0], p)]);
    assert!(!closure.contains(&reduce_point(&target, p)));
    // the witness is the smallest obstructing prime
    for &earlier in report.stability_trace.iter().map(|t| &t.prime) {
        let ep = e.reduce(earlier).unwrap();
        let closure = subgroup_closure(&ep, &[reduce_point(&g[0], earlier)]);
        assert!(closure.contains(&reduce_point(&target, earlier)));
    }
}

#[test]
fn trivial_cases() {
    let e = e17();
    let r = detect_ec(&e, &PointQ::Infinity, &[], &cfg(1)).unwrap();
    assert_eq!(r.verdict, Verdict::Dependent { coeffs: vec![] });
    let r = detect_ec(&e, &PointQ::Infinity, &gens(), &cfg(1)).unwrap();
    assert_eq!(r.verdict, Verdict::Dependent { coeffs: big(&[0, 0]) });

    // a nonzero torsion target cannot lie in a torsion-free subgroup
    let e1 = CurveQ::new(0, 1).unwrap();
    let r = detect_ec(&e1, &PointQ::from_ints(2, 3), &[], &cfg(1)).unwrap();
    assert_eq!(
        r.verdict,
        Verdict::Independent { certificate: Certificate::Torsion { order: 6 } }
    );
}

#[test]
fn invalid_inputs() {
    let e = e17();
    assert!(detect_ec(&e, &PointQ::from_ints(4, 8), &gens(), &cfg(1)).is_err());
    let e1 = CurveQ::new(0, 1).unwrap();
    assert!(detect_ec(&e1, &PointQ::Infinity, &[PointQ::from_ints(-1, 0)], &cfg(1)).is_err());
}

#[test]
fn nontorsion_target_without_generators() {
    let r = detect_ec(&e17(), &PointQ::from_ints(-2, 3), &[], &cfg(2)).unwrap();
    assert!(r.verdict.witness_prime().is_some());
}

#[test]
fn thread_count_does_not_change_the_report() {
    let e = e17();
    for target in [PointQ::from_ints(4, 9), PointQ::from_ints(52, 375)] {
        let one = detect_ec(&e, &target, &gens(), &cfg(1)).unwrap();
        let eight = detect_ec(&e, &target, &gens(), &cfg(8)).unwrap();
        assert_eq!(one, eight);
    }
    let g = [PointQ::from_ints(-2, 3)];
    let t = PointQ::from_ints(2, 5);
    assert_eq!(
        detect_ec(&e, &t, &g, &cfg(1)).unwrap(),
        detect_ec(&e, &t, &g, &cfg(8)).unwrap()
    );
}

#[test]
fn larger_bound_keeps_certificates() {
    let e = e17();
    let small = DetectorConfig { prime_bound: 2_000, ..cfg(4) };
    for target in [PointQ::from_ints(43, 282), PointQ::from_ints(-1, 4)] {
        let a = detect_ec(&e, &target, &gens(), &small).unwrap();
        let b = detect_ec(&e, &target, &gens(), &cfg(4)).unwrap();
        assert_eq!(a.verdict.name(), b.verdict.name());
        assert_eq!(a.verdict, b.verdict);
    }
    assert_eq!(
        detect_ec(&e, &PointQ::from_ints(43, 282), &gens(), &small).unwrap().verdict,
        Verdict::Dependent { coeffs: big(&[-1, 2]) }
    );
}
