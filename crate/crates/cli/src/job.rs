//! Job documents: parsing, validation and emission.

use localglobal::detector::DetectorConfig;
use localglobal::ec_rational::{CurveQ, PointQ};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// Largest accepted `coeff_bound`, so that coefficients fit in JSON integers.
pub const MAX_COEFF_BOUND: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    EcDetect,
    MulDetect,
    Witness,
    LocalReport,
    Torsion,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::EcDetect => "ec-detect",
            Mode::MulDetect => "mul-detect",
            Mode::Witness => "witness",
            Mode::LocalReport => "local-report",
            Mode::Torsion => "torsion",
        }
    }
}

/// Detector settings given in the job or on the command line. Unset fields
/// take the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability_window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturation_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_skipped_fraction: Option<f64>,
}

impl ConfigOverrides {
    fn is_empty(&self) -> bool {
        *self == ConfigOverrides::default()
    }

    /// Fields set in `other` win.
    pub fn merged(&self, other: &ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            prime_bound: other.prime_bound.or(self.prime_bound),
            stability_window: other.stability_window.or(self.stability_window),
            coeff_bound: other.coeff_bound.or(self.coeff_bound),
            saturation_bound: other.saturation_bound.or(self.saturation_bound),
            seed: other.seed.or(self.seed),
            threads: other.threads.or(self.threads),
            max_skipped_fraction: other.max_skipped_fraction.or(self.max_skipped_fraction),
        }
    }

    pub fn to_config(&self) -> Result<DetectorConfig, CliError> {
        let d = DetectorConfig::default();
        let positive = |name: &str, v: u64| {
            if v == 0 {
                Err(CliError::Input(format!("config.{name}: must be positive")))
            } else {
                Ok(v)
            }
        };
        let coeff_bound = positive("coeff_bound", self.coeff_bound.unwrap_or(1 << 20))?;
        if coeff_bound > MAX_COEFF_BOUND {
            return Err(CliError::Input(format!("config.coeff_bound: at most {MAX_COEFF_BOUND}")));
        }
        let fraction = self.max_skipped_fraction.unwrap_or(d.max_skipped_fraction);
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(CliError::Input("config.max_skipped_fraction: must lie in (0, 1]".into()));
        }
        Ok(DetectorConfig {
            prime_bound: positive("prime_bound", self.prime_bound.unwrap_or(d.prime_bound))?,
            stability_window: positive("stability_window", self.stability_window.unwrap_or(d.stability_window) as u64)?
                as usize,
            coeff_bound: BigInt::from(coeff_bound),
            saturation_bound: positive("saturation_bound", self.saturation_bound.unwrap_or(d.saturation_bound))?,
            seed: self.seed.unwrap_or(d.seed),
            max_skipped_fraction: fraction,
            worker_count: positive("threads", self.threads.unwrap_or(d.worker_count) as u64)? as usize,
        })
    }
}

/// What a job asks for. Witness indices are one-based, as on the command
/// line.
#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    EcDetect {
        curve: CurveQ,
        target: PointQ,
        gens: Vec<PointQ>,
    },
    MulDetect {
        target: BigRational,
        gens: Vec<BigRational>,
    },
    Witness {
        curve: CurveQ,
        points: Vec<PointQ>,
        i: Vec<usize>,
        j: Vec<usize>,
        ell: u64,
        m: u32,
    },
    LocalReport {
        curve: CurveQ,
        target: PointQ,
        gens: Vec<PointQ>,
        prime: u64,
    },
    Torsion {
        curve: CurveQ,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub task: Task,
    pub config: ConfigOverrides,
}

impl JobSpec {
    pub fn mode(&self) -> Mode {
        match self.task {
            Task::EcDetect { .. } => Mode::EcDetect,
            Task::MulDetect { .. } => Mode::MulDetect,
            Task::Witness { .. } => Mode::Witness,
            Task::LocalReport { .. } => Mode::LocalReport,
            Task::Torsion { .. } => Mode::Torsion,
        }
    }
}

/// The document as written on disk, before validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobDoc {
    mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    curve: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gens: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    j: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ell: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prime: Option<u64>,
    #[serde(default, skip_serializing_if = "ConfigOverrides::is_empty")]
    config: ConfigOverrides,
}

fn err<T>(path: &str, msg: impl std::fmt::Display) -> Result<T, CliError> {
    Err(CliError::Input(format!("{path}: {msg}")))
}

fn parse_int(path: &str, s: &str) -> Result<BigInt, CliError> {
    s.trim().parse().or_else(|_| err(path, format!("`{s}` is not an integer")))
}

/// `"n"` or `"n/d"` with `d != 0`, reduced to lowest terms.
pub fn parse_rational(path: &str, s: &str) -> Result<BigRational, CliError> {
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(path, s)?)),
        Some((n, d)) => {
            let (n, d) = (parse_int(path, n)?, parse_int(path, d)?);
            if d.is_zero() {
                return err(path, format!("`{s}` has a zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// `"b"` for `y^2 = x^3 + b`, or `"a,b"`.
pub fn parse_curve(path: &str, s: &str) -> Result<CurveQ, CliError> {
    let (a, b) = match s.split_once(',') {
        None => (BigInt::zero(), parse_int(path, s)?),
        Some((a, b)) => (parse_int(path, a)?, parse_int(path, b)?),
    };
    CurveQ::new(a, b).or_else(|e| err(path, e))
}

/// `"x,y"` or `"inf"`.
pub fn parse_point(path: &str, s: &str) -> Result<PointQ, CliError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Ok(PointQ::Infinity);
    }
    let Some((x, y)) = s.split_once(',') else {
        return err(path, format!("`{s}` is not of the form x,y or inf"));
    };
    Ok(PointQ::affine(parse_rational(&format!("{path}.x"), x)?, parse_rational(&format!("{path}.y"), y)?))
}

fn on_curve(path: &str, curve: &CurveQ, pt: PointQ) -> Result<PointQ, CliError> {
    curve.check(pt).or_else(|e| err(path, e))
}

fn rational_from(path: &str, v: &Value) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => parse_rational(path, s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(path, &n.to_string()),
        _ => err(path, "expected an integer or a string \"n/d\""),
    }
}

fn int_from(path: &str, v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::String(s) => parse_int(path, s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_int(path, &n.to_string()),
        _ => err(path, "expected an integer"),
    }
}

fn curve_from(v: &Value) -> Result<CurveQ, CliError> {
    let path = "curve";
    match v {
        Value::String(s) => parse_curve(path, s),
        Value::Number(_) => CurveQ::new(0, int_from(path, v)?).or_else(|e| err(path, e)),
        Value::Object(map) => {
            if let Some(key) = map.keys().find(|k| *k != "a" && *k != "b") {
                return err(path, format!("unknown field `{key}`"));
            }
            let a = map.get("a").map_or(Ok(BigInt::zero()), |a| int_from("curve.a", a))?;
            let b = map.get("b").map_or_else(|| err("curve.b", "missing"), |b| int_from("curve.b", b))?;
            CurveQ::new(a, b).or_else(|e| err(path, e))
        }
        _ => err(path, "expected \"b\", \"a,b\" or {\"a\": .., \"b\": ..}"),
    }
}

fn point_from(path: &str, v: &Value) -> Result<PointQ, CliError> {
    match v {
        Value::String(s) => parse_point(path, s),
        Value::Array(xy) if xy.len() == 2 => Ok(PointQ::affine(
            rational_from(&format!("{path}[0]"), &xy[0])?,
            rational_from(&format!("{path}[1]"), &xy[1])?,
        )),
        _ => err(path, "expected [x, y] or \"inf\""),
    }
}

fn required<'a, T>(field: &str, mode: Mode, v: &'a Option<T>) -> Result<&'a T, CliError> {
    v.as_ref()
        .map_or_else(|| err(field, format!("required for mode {}", mode.as_str())), Ok)
}

fn points_on(curve: &CurveQ, field: &str, vs: &[Value]) -> Result<Vec<PointQ>, CliError> {
    vs.iter()
        .enumerate()
        .map(|(k, v)| {
            let path = format!("{field}[{k}]");
            on_curve(&path, curve, point_from(&path, v)?)
        })
        .collect()
}

impl JobDoc {
    fn into_job(self) -> Result<JobSpec, CliError> {
        let mode = self.mode;
        let allowed: &[&str] = match mode {
            Mode::EcDetect => &["curve", "target", "gens"],
            Mode::MulDetect => &["target", "gens"],
            Mode::Witness => &["curve", "points", "i", "j", "ell", "m"],
            Mode::LocalReport => &["curve", "target", "gens", "prime"],
            Mode::Torsion => &["curve"],
        };
        let present = [
            ("curve", self.curve.is_some()),
            ("target", self.target.is_some()),
            ("gens", self.gens.is_some()),
            ("points", self.points.is_some()),
            ("i", self.i.is_some()),
            ("j", self.j.is_some()),
            ("ell", self.ell.is_some()),
            ("m", self.m.is_some()),
            ("prime", self.prime.is_some()),
        ];
        if let Some((name, _)) = present.iter().find(|(name, set)| *set && !allowed.contains(name)) {
            return err(name, format!("not used by mode {}", mode.as_str()));
        }
        let empty = Vec::new();
        let task = match mode {
            Mode::EcDetect | Mode::LocalReport => {
                let curve = curve_from(required("curve", mode, &self.curve)?)?;
                let target = required("target", mode, &self.target)?;
                let target = on_curve("target", &curve, point_from("target", target)?)?;
                let gens = points_on(&curve, "gens", self.gens.as_ref().unwrap_or(&empty))?;
                if mode == Mode::EcDetect {
                    Task::EcDetect { curve, target, gens }
                } else {
                    let prime = *required("prime", mode, &self.prime)?;
                    Task::LocalReport {
                        curve,
                        target,
                        gens,
                        prime,
                    }
                }
            }
            Mode::MulDetect => {
                let target = rational_from("target", required("target", mode, &self.target)?)?;
                let gens = self
                    .gens
                    .as_ref()
                    .unwrap_or(&empty)
                    .iter()
                    .enumerate()
                    .map(|(k, v)| rational_from(&format!("gens[{k}]"), v))
                    .collect::<Result<_, _>>()?;
                Task::MulDetect { target, gens }
            }
            Mode::Witness => {
                let curve = curve_from(required("curve", mode, &self.curve)?)?;
                let points = points_on(&curve, "points", required("points", mode, &self.points)?)?;
                Task::Witness {
                    curve,
                    points,
                    i: self.i.clone().unwrap_or_default(),
                    j: self.j.clone().unwrap_or_default(),
                    ell: *required("ell", mode, &self.ell)?,
                    m: *required("m", mode, &self.m)?,
                }
            }
            Mode::Torsion => Task::Torsion {
                curve: curve_from(required("curve", mode, &self.curve)?)?,
            },
        };
        Ok(JobSpec {
            task,
            config: self.config,
        })
    }
}

fn curve_value(c: &CurveQ) -> Value {
    serde_json::json!({ "a": c.a().to_string(), "b": c.b().to_string() })
}

pub(crate) fn point_value(p: &PointQ) -> Value {
    match p {
        PointQ::Infinity => Value::String("inf".into()),
        PointQ::Affine { x, y } => serde_json::json!([x.to_string(), y.to_string()]),
    }
}

/// Parses and validates a job document. Every point is checked against the
/// curve with exact arithmetic.
pub fn parse_job(text: &str) -> Result<JobSpec, CliError> {
    let doc: JobDoc = serde_json::from_str(text).map_err(|e| CliError::Input(format!("job document: {e}")))?;
    doc.into_job()
}

/// The canonical document for `job`; [`parse_job`] reads it back unchanged.
pub fn emit_job(job: &JobSpec) -> String {
    let mut doc = JobDoc {
        mode: job.mode(),
        curve: None,
        target: None,
        gens: None,
        points: None,
        i: None,
        j: None,
        ell: None,
        m: None,
        prime: None,
        config: job.config.clone(),
    };
    let points = |ps: &[PointQ]| Some(ps.iter().map(point_value).collect());
    match &job.task {
        Task::EcDetect { curve, target, gens } => {
            doc.curve = Some(curve_value(curve));
            doc.target = Some(point_value(target));
            doc.gens = points(gens);
        }
        Task::MulDetect { target, gens } => {
            doc.target = Some(Value::String(target.to_string()));
            doc.gens = Some(gens.iter().map(|g| Value::String(g.to_string())).collect());
        }
        Task::Witness {
            curve,
            points: pts,
            i,
            j,
            ell,
            m,
        } => {
            doc.curve = Some(curve_value(curve));
            doc.points = points(pts);
            doc.i = Some(i.clone());
            doc.j = Some(j.clone());
            doc.ell = Some(*ell);
            doc.m = Some(*m);
        }
        Task::LocalReport {
            curve,
            target,
            gens,
            prime,
        } => {
            doc.curve = Some(curve_value(curve));
            doc.target = Some(point_value(target));
            doc.gens = points(gens);
            doc.prime = Some(*prime);
        }
        Task::Torsion { curve } => doc.curve = Some(curve_value(curve)),
    }
    serde_json::to_string_pretty(&doc).expect("job documents always serialize")
}
