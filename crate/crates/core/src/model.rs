//! Two-level potential model, coupling profiles, assumption checks and
//! crossing data.

use crate::error::{Error, Result};
use crate::roots::{brent, slope};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A profile evaluated along complex-scaled paths; real on the real axis.
pub type Profile = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

pub const DEFAULT_DOMAIN: (f64, f64) = (-12.0, 18.0);

/// Serializable description: `{family, parameters, domain_box}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    #[serde(default = "default_box")]
    pub domain_box: [f64; 2],
}

fn default_box() -> [f64; 2] {
    [DEFAULT_DOMAIN.0, DEFAULT_DOMAIN.1]
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self {
            family: GAUSSIAN_TANH.into(),
            parameters: BTreeMap::new(),
            domain_box: default_box(),
        }
    }
}

const GAUSSIAN_TANH: &str = "gaussian_tanh";

/// Parameters of the built-in family
///
/// `V1(x) = L - L exp((m^2 - (x-m)^2)/w^2) + v1_offset`,
/// `V2(x) = -s tanh(x/l) + v2_offset`,
/// `a0(x) = a0`, `a1(x) = a1 exp(-x^2/a1_width^2)`.
///
/// With zero offsets `V1(0) = V2(0) = 0`, the well bottom sits at `m`
/// and the outer crossing at `x* = 2m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianTanh {
    pub v1_limit: f64,
    pub v1_width: f64,
    pub v1_center: f64,
    pub v1_offset: f64,
    pub v2_scale: f64,
    pub v2_width: f64,
    pub v2_offset: f64,
    pub a0: f64,
    pub a1: f64,
    pub a1_width: f64,
}

impl Default for GaussianTanh {
    fn default() -> Self {
        Self {
            v1_limit: 1.0,
            v1_width: 1.2,
            v1_center: -1.0,
            v1_offset: 0.0,
            v2_scale: 1.0,
            v2_width: 1.0,
            v2_offset: 0.0,
            a0: 0.5,
            a1: 0.2,
            a1_width: 2.0,
        }
    }
}

impl GaussianTanh {
    fn from_map(params: &BTreeMap<String, f64>) -> Result<Self> {
        let mut p = Self::default();
        for (k, &v) in params {
            if !v.is_finite() {
                return Err(Error::Model(format!("parameter {k} is not finite")));
            }
            let slot = match k.as_str() {
                "v1_limit" => &mut p.v1_limit,
                "v1_width" => &mut p.v1_width,
                "v1_center" => &mut p.v1_center,
                "v1_offset" => &mut p.v1_offset,
                "v2_scale" => &mut p.v2_scale,
                "v2_width" => &mut p.v2_width,
                "v2_offset" => &mut p.v2_offset,
                "a0" => &mut p.a0,
                "a1" => &mut p.a1,
                "a1_width" => &mut p.a1_width,
                other => {
                    return Err(Error::Model(format!(
                        "unknown parameter '{other}' for family {GAUSSIAN_TANH}"
                    )))
                }
            };
            *slot = v;
        }
        if p.v1_width <= 0.0 || p.v2_width <= 0.0 || p.a1_width <= 0.0 {
            return Err(Error::Model("widths must be positive".into()));
        }
        Ok(p)
    }

    fn to_map(self) -> BTreeMap<String, f64> {
        [
            ("v1_limit", self.v1_limit),
            ("v1_width", self.v1_width),
            ("v1_center", self.v1_center),
            ("v1_offset", self.v1_offset),
            ("v2_scale", self.v2_scale),
            ("v2_width", self.v2_width),
            ("v2_offset", self.v2_offset),
            ("a0", self.a0),
            ("a1", self.a1),
            ("a1_width", self.a1_width),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    pub fn model(self, domain_box: (f64, f64)) -> PotentialModel {
        let p = self;
        let one = Complex64::new(1.0, 0.0);
        PotentialModel::from_profiles(
            GAUSSIAN_TANH,
            Arc::new(move |y: Complex64| {
                let d = y - p.v1_center;
                p.v1_limit
                    * (one
                        - ((p.v1_center * p.v1_center - d * d) / (p.v1_width * p.v1_width)).exp())
                    + p.v1_offset
            }),
            Arc::new(move |y: Complex64| -p.v2_scale * (y / p.v2_width).tanh() + p.v2_offset),
            Arc::new(move |_| Complex64::new(p.a0, 0.0)),
            Arc::new(move |y: Complex64| p.a1 * (-(y * y) / (p.a1_width * p.a1_width)).exp()),
            domain_box,
        )
        .with_parameters(p.to_map())
    }
}

#[derive(Clone)]
pub struct PotentialModel {
    family: String,
    parameters: BTreeMap<String, f64>,
    v1: Profile,
    v2: Profile,
    a0: Profile,
    a1: Profile,
    coupling_scale: f64,
    pub domain_box: (f64, f64),
}

impl fmt::Debug for PotentialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialModel")
            .field("family", &self.family)
            .field("parameters", &self.parameters)
            .field("coupling_scale", &self.coupling_scale)
            .field("domain_box", &self.domain_box)
            .finish()
    }
}

pub fn default_model() -> PotentialModel {
    GaussianTanh::default().model(DEFAULT_DOMAIN)
}

impl PotentialModel {
    pub fn from_profiles(
        family: &str,
        v1: Profile,
        v2: Profile,
        a0: Profile,
        a1: Profile,
        domain_box: (f64, f64),
    ) -> Self {
        Self {
            family: family.into(),
            parameters: BTreeMap::new(),
            v1,
            v2,
            a0,
            a1,
            coupling_scale: 1.0,
            domain_box,
        }
    }

    pub fn from_spec(spec: &ModelSpec) -> Result<Self> {
        let [lo, hi] = spec.domain_box;
        if !(lo < 0.0 && hi > 0.0) {
            return Err(Error::Model(format!(
                "domain_box [{lo}, {hi}] must contain 0 in its interior"
            )));
        }
        match spec.family.as_str() {
            GAUSSIAN_TANH => Ok(GaussianTanh::from_map(&spec.parameters)?.model((lo, hi))),
            other => Err(Error::Model(format!("unknown model family '{other}'"))),
        }
    }

    fn with_parameters(mut self, parameters: BTreeMap<String, f64>) -> Self {
        self.parameters = parameters;
        self
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn parameters(&self) -> &BTreeMap<String, f64> {
        &self.parameters
    }

    /// Copy with the coupling `W` replaced by `s W`.
    pub fn with_coupling_scale(&self, s: f64) -> Self {
        let mut m = self.clone();
        m.coupling_scale *= s;
        m
    }

    pub fn decoupled(&self) -> Self {
        self.with_coupling_scale(0.0)
    }

    pub fn coupling_scale(&self) -> f64 {
        self.coupling_scale
    }

    pub fn v1c(&self, y: Complex64) -> Complex64 {
        (self.v1)(y)
    }
    pub fn v2c(&self, y: Complex64) -> Complex64 {
        (self.v2)(y)
    }
    pub fn a0c(&self, y: Complex64) -> Complex64 {
        (self.a0)(y) * self.coupling_scale
    }
    pub fn a1c(&self, y: Complex64) -> Complex64 {
        (self.a1)(y) * self.coupling_scale
    }

    pub fn v1(&self, x: f64) -> f64 {
        self.v1c(Complex64::new(x, 0.0)).re
    }
    pub fn v2(&self, x: f64) -> f64 {
        self.v2c(Complex64::new(x, 0.0)).re
    }
    pub fn a0(&self, x: f64) -> f64 {
        self.a0c(Complex64::new(x, 0.0)).re
    }
    pub fn a1(&self, x: f64) -> f64 {
        self.a1c(Complex64::new(x, 0.0)).re
    }

    /// Potential of level `j` (1 or 2) on the real axis.
    pub fn potential(&self, j: usize, x: f64) -> f64 {
        match j {
            1 => self.v1(x),
            _ => self.v2(x),
        }
    }

    pub fn potential_c(&self, j: usize, y: Complex64) -> Complex64 {
        match j {
            1 => self.v1c(y),
            _ => self.v2c(y),
        }
    }

    pub fn potential_slope(&self, j: usize, x: f64) -> f64 {
        slope(|t| self.potential(j, t), x, SLOPE_STEP)
    }
}

const SLOPE_STEP: f64 = 1e-3;
const ROOT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingData {
    pub x_star: f64,
    pub tau0: f64,
    pub tau1: f64,
    pub tau2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    /// Point where the clause was checked or violated.
    pub witness: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub clauses: Vec<Clause>,
    /// Holomorphy is certified by construction (closed-form entire profiles),
    /// not tested from samples; the sector constant plays no numerical role.
    pub holomorphy: String,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Clause> {
        self.clauses.iter().find(|c| !c.passed)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

pub mod clause {
    pub const V1_ZERO: &str = "V1(0)=0";
    pub const V2_ZERO: &str = "V2(0)=0";
    pub const X_STAR: &str = "x* exists";
    pub const LEFT_POSITIVE: &str = "V1>0 and V2>0 on (x_min,x*)";
    pub const V1_NEG_MIDDLE: &str = "V1<0 on (x*,0)";
    pub const V2_POS_MIDDLE: &str = "V2>0 on (x*,0)";
    pub const RIGHT_SIGNS: &str = "V2<0<V1 on (0,x_max)";
    pub const SLOPES: &str = "tau0,tau1,tau2>0";
    pub const LIMITS: &str = "limits: V1,V2>0 at -inf, V1>0>V2 at +inf";
    pub const FLAT_ENDS: &str = "V1,V2 within 1e-8 of limits at domain ends";
    pub const SMOOTH: &str = "first three derivatives continuous";
}

const SIGN_SAMPLES: usize = 400;

fn sample_points(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |i| a + (b - a) * i as f64 / (n + 1) as f64)
}

fn check_sign(name: &str, a: f64, b: f64, ok: impl Fn(f64) -> bool) -> Clause {
    let bad = sample_points(a, b, SIGN_SAMPLES).find(|&x| !ok(x));
    Clause {
        name: name.into(),
        passed: bad.is_none() && a < b,
        witness: bad,
        detail: match bad {
            Some(x) => format!("violated at x = {x:.6} on ({a:.4}, {b:.4})"),
            None if a < b => format!("{SIGN_SAMPLES} samples on ({a:.4}, {b:.4})"),
            None => format!("empty interval ({a:.4}, {b:.4})"),
        },
    }
}

/// Locates `x*`: the first zero of `V1` left of 0 bounding the negative region.
fn find_x_star(m: &PotentialModel) -> Result<f64> {
    let (lo, _) = m.domain_box;
    let n = 6000;
    let step = -lo / n as f64;
    let start = -step;
    if m.v1(start) >= 0.0 {
        return Err(Error::Bracket {
            what: "V1 (not negative just left of 0)".into(),
            a: start,
            b: 0.0,
        });
    }
    let mut right = start;
    for i in 2..=n {
        let x = -(i as f64) * step;
        if m.v1(x) >= 0.0 {
            return brent(|t| m.v1(t), x, right, ROOT_TOL);
        }
        right = x;
    }
    Err(Error::Bracket {
        what: "V1".into(),
        a: lo,
        b: 0.0,
    })
}

pub fn validate_assumptions(m: &PotentialModel) -> CertificateReport {
    use clause::*;
    let (lo, hi) = m.domain_box;
    let mut clauses = Vec::new();
    let zero_clause = |name: &str, v: f64| Clause {
        name: name.into(),
        passed: v.abs() <= 1e-12,
        witness: Some(0.0),
        detail: format!("value {v:e}"),
    };
    clauses.push(zero_clause(V1_ZERO, m.v1(0.0)));
    clauses.push(zero_clause(V2_ZERO, m.v2(0.0)));

    let x_star = find_x_star(m);
    clauses.push(Clause {
        name: X_STAR.into(),
        passed: x_star.is_ok(),
        witness: x_star.as_ref().ok().copied(),
        detail: match &x_star {
            Ok(x) => format!("V1({x:.12}) = {:e}", m.v1(*x)),
            Err(e) => e.to_string(),
        },
    });
    // Without x* the middle clauses are checked on the whole left half.
    let xs = x_star.clone().unwrap_or(lo);
    let edge = 1e-6 * (hi - lo);
    clauses.push(check_sign(LEFT_POSITIVE, lo, xs - edge, |x| {
        m.v1(x) > 0.0 && m.v2(x) > 0.0
    }));
    clauses.push(check_sign(V1_NEG_MIDDLE, xs + edge, -edge, |x| {
        m.v1(x) < 0.0
    }));
    clauses.push(check_sign(V2_POS_MIDDLE, xs + edge, -edge, |x| {
        m.v2(x) > 0.0
    }));
    clauses.push(check_sign(RIGHT_SIGNS, edge, hi, |x| {
        m.v2(x) < 0.0 && m.v1(x) > 0.0
    }));

    let slopes = x_star.as_ref().ok().map(|&x| crossing_slopes(m, x));
    clauses.push(Clause {
        name: SLOPES.into(),
        passed: slopes
            .map(|c| c.tau0 > 0.0 && c.tau1 > 0.0 && c.tau2 > 0.0)
            .unwrap_or(false),
        witness: None,
        detail: match slopes {
            Some(c) => format!("tau0={:.6} tau1={:.6} tau2={:.6}", c.tau0, c.tau1, c.tau2),
            None => "x* missing".into(),
        },
    });
    clauses.push(Clause {
        name: LIMITS.into(),
        passed: m.v1(lo) > 0.0 && m.v2(lo) > 0.0 && m.v1(hi) > 0.0 && m.v2(hi) < 0.0,
        witness: None,
        detail: format!(
            "V1({lo})={:.4} V2({lo})={:.4} V1({hi})={:.4} V2({hi})={:.4}",
            m.v1(lo),
            m.v2(lo),
            m.v1(hi),
            m.v2(hi)
        ),
    });
    let drift = [lo, hi]
        .iter()
        .flat_map(|&x| {
            let far = x + 5.0 * x.signum();
            [(m.v1(x) - m.v1(far)).abs(), (m.v2(x) - m.v2(far)).abs()]
        })
        .fold(0.0f64, f64::max);
    clauses.push(Clause {
        name: FLAT_ENDS.into(),
        passed: drift <= 1e-8,
        witness: None,
        detail: format!("largest drift beyond the box {drift:e}"),
    });
    clauses.push(smoothness(m));
    CertificateReport {
        clauses,
        holomorphy: format!(
            "family '{}' is built from entire closed-form functions; sector constant recorded, unused",
            m.family
        ),
    }
}

fn smoothness(m: &PotentialModel) -> Clause {
    let (lo, hi) = m.domain_box;
    let n = 3000;
    let dx = (hi - lo) / n as f64;
    let d = 2e-3;
    let third = |f: &dyn Fn(f64) -> f64, x: f64| {
        (f(x + 2.0 * d) - 2.0 * f(x + d) + 2.0 * f(x - d) - f(x - 2.0 * d)) / (2.0 * d * d * d)
    };
    let fs: [(&str, &dyn Fn(f64) -> f64); 4] = [
        ("V1", &|x| m.v1(x)),
        ("V2", &|x| m.v2(x)),
        ("a0", &|x| m.a0(x)),
        ("a1", &|x| m.a1(x)),
    ];
    for (name, f) in fs.iter() {
        let vals: Vec<f64> = (0..=n).map(|i| third(*f, lo + i as f64 * dx)).collect();
        let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        for (i, w) in vals.windows(2).enumerate() {
            if !(w[0].is_finite() && w[1].is_finite()) || (w[1] - w[0]).abs() > 0.1 * scale {
                return Clause {
                    name: clause::SMOOTH.into(),
                    passed: false,
                    witness: Some(lo + i as f64 * dx),
                    detail: format!("{name}: third-derivative jump"),
                };
            }
        }
    }
    Clause {
        name: clause::SMOOTH.into(),
        passed: true,
        witness: None,
        detail: format!("{n} cells"),
    }
}

fn crossing_slopes(m: &PotentialModel, x_star: f64) -> CrossingData {
    let step = 1e-6;
    CrossingData {
        x_star,
        tau0: -slope(|x| m.v1(x), x_star, step),
        tau1: slope(|x| m.v1(x), 0.0, step),
        tau2: -slope(|x| m.v2(x), 0.0, step),
    }
}

pub fn crossing_data(m: &PotentialModel) -> Result<CrossingData> {
    let x_star = find_x_star(m).map_err(|e| Error::Model(format!("x* not found: {e}")))?;
    Ok(crossing_slopes(m, x_star))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_model_is_valid() {
        let m = default_model();
        assert_eq!(m.v2(0.0), 0.0);
        let r = validate_assumptions(&m);
        assert!(r.passed(), "{:?}", r.first_failure());
        let c = crossing_data(&m).unwrap();
        assert!(c.x_star < 0.0 && m.v1(c.x_star).abs() <= 1e-10);
        for x in sample_points(c.x_star, 0.0, 100) {
            assert!(m.v1(x) < 0.0 && 0.0 < m.v2(x));
        }
    }

    #[test]
    fn slopes_match_analytic_family() {
        let p = GaussianTanh::default();
        let c = crossing_data(&default_model()).unwrap();
        let (l, w, mu) = (p.v1_limit, p.v1_width, p.v1_center);
        let dv1 = |x: f64| {
            l * 2.0 * (x - mu) / (w * w) * ((mu * mu - (x - mu) * (x - mu)) / (w * w)).exp()
        };
        assert!((c.x_star - 2.0 * mu).abs() < 1e-10);
        assert!((c.tau0 + dv1(c.x_star)).abs() < 1e-8);
        assert!((c.tau1 - dv1(0.0)).abs() < 1e-8);
        assert!((c.tau2 - p.v2_scale / p.v2_width).abs() < 1e-8);
    }

    #[test]
    fn shifted_v2_fails_crossing_clause() {
        let mut spec = ModelSpec::default();
        spec.parameters.insert("v2_offset".into(), 1.0);
        let r = validate_assumptions(&PotentialModel::from_spec(&spec).unwrap());
        assert!(!r.clause(clause::V2_ZERO).unwrap().passed);
    }

    #[test]
    fn constant_v1_fails_middle_sign_clause() {
        let base = default_model();
        let b = base.clone();
        let m = PotentialModel::from_profiles(
            "test",
            Arc::new(|_| Complex64::new(1.0, 0.0)),
            Arc::new(move |y| b.v2c(y)),
            Arc::new(|_| Complex64::new(0.5, 0.0)),
            Arc::new(|_| Complex64::new(0.0, 0.0)),
            DEFAULT_DOMAIN,
        );
        let r = validate_assumptions(&m);
        assert!(!r.clause(clause::V1_NEG_MIDDLE).unwrap().passed);
        assert!(crossing_data(&m).is_err());
    }

    #[test]
    fn linear_slopes_recovered() {
        let m = PotentialModel::from_profiles(
            "linear",
            Arc::new(|y| 1.7 * y * (y + 2.0) / 2.0),
            Arc::new(|y| -0.8 * y),
            Arc::new(|_| Complex64::new(0.0, 0.0)),
            Arc::new(|_| Complex64::new(0.0, 0.0)),
            (-5.0, 5.0),
        );
        let c = crossing_data(&m).unwrap();
        assert!((c.tau1 - 1.7).abs() < 1e-8);
        assert!((c.tau2 - 0.8).abs() < 1e-8);
        assert!((c.x_star + 2.0).abs() < 1e-12);
    }

    #[test]
    fn spec_round_trip_and_rejections() {
        let json = r#"{"family":"gaussian_tanh","parameters":{"a0":0.25},"domain_box":[-12,18]}"#;
        let spec: ModelSpec = serde_json::from_str(json).unwrap();
        let m = PotentialModel::from_spec(&spec).unwrap();
        assert_eq!(m.a0(3.0), 0.25);
        let mut bad = spec.clone();
        bad.parameters.insert("nope".into(), 1.0);
        assert!(PotentialModel::from_spec(&bad).is_err());
        bad = spec;
        bad.family = "morse".into();
        assert!(PotentialModel::from_spec(&bad).is_err());
    }

    #[test]
    fn coupling_scale() {
        let m = default_model().with_coupling_scale(0.5);
        assert_eq!(m.a0(0.0), 0.25);
        assert_eq!(default_model().decoupled().a1(0.0), 0.0);
    }
}
