//! Result documents written to standard output.

use localglobal::detector::{
    Certificate, DetectorConfig, LocalReport, RunReport, Verdict, WitnessQuery, WitnessReport,
};
use localglobal::ec_finite::{FpPoint, LocalMembership, LocalResult};
use localglobal::ec_rational::{torsion_order, CurveQ, TorsionGroup};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::job::{point_value, Mode};

/// JSON integer when it fits in `i64`, decimal string otherwise.
fn int_value(v: &BigInt) -> Value {
    v.to_i64().map_or_else(|| Value::String(v.to_string()), Value::from)
}

fn ints(vs: &[BigInt]) -> Vec<Value> {
    vs.iter().map(int_value).collect()
}

fn fp_point(p: &FpPoint) -> Value {
    match p {
        FpPoint::Infinity => Value::String("inf".into()),
        FpPoint::Affine { x, y } => json!([x, y]),
    }
}

fn membership(m: &LocalMembership) -> Value {
    match &m.result {
        LocalResult::Unsolvable => json!({ "p": m.p, "result": "unsolvable" }),
        LocalResult::SolutionCoset { coset, modulus } => json!({
            "p": m.p,
            "result": "solvable",
            "modulus": modulus,
            "offset": ints(&coset.offset),
            "basis": coset.basis.columns().iter().map(|c| ints(c)).collect::<Vec<_>>(),
        }),
    }
}

fn certificate(c: &Certificate) -> Value {
    match c {
        Certificate::LocalObstruction { witness_prime, local } => json!({
            "kind": "local_obstruction",
            "witness_prime": witness_prime,
            "local": membership(local),
        }),
        Certificate::Torsion { order } => json!({ "kind": "torsion", "order": order }),
        Certificate::SignMismatch { coeffs } => json!({ "kind": "sign_mismatch", "coefficients": ints(coeffs) }),
    }
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    prime_bound: u64,
    stability_window: usize,
    coeff_bound: Value,
    saturation_bound: u64,
    max_skipped_fraction: f64,
}

impl ConfigEcho {
    /// The worker count is left out: it must not change the document.
    fn new(cfg: &DetectorConfig) -> Self {
        ConfigEcho {
            prime_bound: cfg.prime_bound,
            stability_window: cfg.stability_window,
            coeff_bound: int_value(&cfg.coeff_bound),
            saturation_bound: cfg.saturation_bound,
            max_skipped_fraction: cfg.max_skipped_fraction,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DetectDoc {
    pub mode: &'static str,
    pub verdict: &'static str,
    pub coefficients: Option<Vec<Value>>,
    pub witness_prime: Option<u64>,
    pub certificate: Option<Value>,
    pub saturation_a: Option<u64>,
    pub reason: Option<&'static str>,
    pub primes_processed: usize,
    pub primes_skipped: usize,
    pub skipped: Vec<Value>,
    pub stability_trace: Vec<Value>,
    pub warnings: Vec<String>,
    pub alarms: Vec<String>,
    pub config: ConfigEcho,
    pub seed: u64,
    pub timing: Option<Value>,
}

pub fn detect_doc(mode: Mode, r: &RunReport, cfg: &DetectorConfig) -> DetectDoc {
    let (cert, saturation_a, reason) = match &r.verdict {
        Verdict::Independent { certificate: c } => (Some(certificate(c)), None, None),
        Verdict::SaturationNeeded { a, .. } => (None, Some(*a), None),
        Verdict::Inconclusive { reason } => (None, None, Some(reason.as_str())),
        Verdict::Dependent { .. } => (None, None, None),
    };
    DetectDoc {
        mode: mode.as_str(),
        verdict: r.verdict.name(),
        coefficients: r.verdict.coeffs().map(ints),
        witness_prime: r.verdict.witness_prime(),
        certificate: cert,
        saturation_a,
        reason,
        primes_processed: r.primes_processed,
        primes_skipped: r.primes_skipped(),
        skipped: r
            .skipped
            .iter()
            .map(|s| json!({ "prime": s.prime, "reason": s.reason }))
            .collect(),
        stability_trace: r
            .stability_trace
            .iter()
            .map(|t| {
                json!({
                    "prime": t.prime,
                    "candidate": t.candidate.as_deref().map(ints),
                    "stable_for": t.stable_for,
                })
            })
            .collect(),
        warnings: r.warnings.clone(),
        alarms: r.alarms.clone(),
        config: ConfigEcho::new(cfg),
        seed: r.seed,
        timing: None,
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessDoc {
    pub mode: &'static str,
    pub query: Value,
    pub scanned: usize,
    pub matched: usize,
    pub density: f64,
    pub matches: Vec<Value>,
    pub skipped: Vec<Value>,
    pub seed: u64,
    pub timing: Option<Value>,
}

/// Indices in the document are one-based.
pub fn witness_doc(q: &WitnessQuery, r: &WitnessReport, seed: u64) -> WitnessDoc {
    let one_based = |v: &[usize]| v.iter().map(|k| k + 1).collect::<Vec<_>>();
    WitnessDoc {
        mode: Mode::Witness.as_str(),
        query: json!({
            "i": one_based(&q.i),
            "j": one_based(&q.j),
            "ell": q.ell,
            "m": q.m,
            "prime_bound": q.prime_bound,
        }),
        scanned: r.scanned,
        matched: r.matches.len(),
        density: r.density(),
        matches: r
            .matches
            .iter()
            .map(|m| json!({ "prime": m.prime, "orders": m.orders, "ell_valuations": m.ell_valuations }))
            .collect(),
        skipped: r
            .skipped
            .iter()
            .map(|s| json!({ "prime": s.prime, "reason": s.reason }))
            .collect(),
        seed,
        timing: None,
    }
}

#[derive(Debug, Serialize)]
pub struct LocalReportDoc {
    pub mode: &'static str,
    pub p: u64,
    pub n: u64,
    pub structure: [u64; 2],
    pub g1: Value,
    pub g2: Value,
    pub target: Value,
    pub gens: Vec<Value>,
    pub target_coordinates: [u64; 2],
    pub gen_coordinates: Vec<[u64; 2]>,
    pub membership: Value,
    pub seed: u64,
    pub timing: Option<Value>,
}

pub fn local_report_doc(r: &LocalReport, seed: u64) -> LocalReportDoc {
    LocalReportDoc {
        mode: Mode::LocalReport.as_str(),
        p: r.p,
        n: r.n,
        structure: [r.d1, r.d2],
        g1: fp_point(&r.g1),
        g2: fp_point(&r.g2),
        target: fp_point(&r.target),
        gens: r.gens.iter().map(fp_point).collect(),
        target_coordinates: [r.target_coordinates.0, r.target_coordinates.1],
        gen_coordinates: r.gen_coordinates.iter().map(|&(i, j)| [i, j]).collect(),
        membership: membership(&r.membership),
        seed,
        timing: None,
    }
}

#[derive(Debug, Serialize)]
pub struct TorsionDoc {
    pub mode: &'static str,
    pub curve: Value,
    pub order: usize,
    pub points: Vec<Value>,
    pub timing: Option<Value>,
}

pub fn torsion_doc(curve: &CurveQ, t: &TorsionGroup) -> TorsionDoc {
    TorsionDoc {
        mode: Mode::Torsion.as_str(),
        curve: json!({ "a": int_value(curve.a()), "b": int_value(curve.b()) }),
        order: t.order,
        points: t
            .points
            .iter()
            .map(|p| json!({ "point": point_value(p), "order": torsion_order(curve, p) }))
            .collect(),
        timing: None,
    }
}
