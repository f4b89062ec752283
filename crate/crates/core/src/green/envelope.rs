use crate::wkb::Side;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Envelope family: `F1` for the well channel, `F2` for the dissociative one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    F1,
    F2,
}

/// Geometry and scale of the envelope clauses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSpec {
    pub h: f64,
    /// Outer turning point of the well.
    pub x_star: f64,
    /// Width of the layers around the turning points.
    pub delta: f64,
    /// Start of the exponentially decaying zone on the right.
    pub right_cut: f64,
}

impl EnvelopeSpec {
    pub fn m0(&self, x: f64) -> f64 {
        self.h.powf(-1.0 / 6.0).min(x.abs().powf(-0.25))
    }

    pub fn m_star(&self, x: f64) -> f64 {
        self.h
            .powf(-1.0 / 6.0)
            .min((x - self.x_star).abs().powf(-0.25))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Weight {
    One,
    M0,
    MStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Decay {
    /// `exp(-c |x| / h)`
    Linear,
    /// `exp(-c |x - x0|^{3/2} / h)`
    ThreeHalves { center: f64 },
}

impl Decay {
    fn distance(&self, x: f64) -> f64 {
        match *self {
            Decay::Linear => x.abs(),
            Decay::ThreeHalves { center } => (x - center).abs().powf(1.5),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Clause {
    name: &'static str,
    lo: f64,
    hi: f64,
    weight: Weight,
    decay: Option<Decay>,
}

fn clauses(space: Space, side: Side, s: &EnvelopeSpec) -> Vec<Clause> {
    let (xs, d, inf) = (s.x_star, s.delta, f64::INFINITY);
    let c = |name, lo, hi, weight, decay| Clause {
        name,
        lo,
        hi,
        weight,
        decay,
    };
    let near0 = Some(Decay::ThreeHalves { center: 0.0 });
    match (space, side.is_right()) {
        (Space::F1, false) => vec![
            c("far", -inf, xs - d, Weight::One, Some(Decay::Linear)),
            c(
                "below-turning",
                xs - d,
                xs,
                Weight::MStar,
                Some(Decay::ThreeHalves { center: xs }),
            ),
            c("above-turning", xs, xs + d, Weight::MStar, None),
            c("well", xs + d, -d, Weight::One, None),
            c("crossing", -d, 0.0, Weight::M0, None),
        ],
        (Space::F2, false) => vec![
            c("far", -inf, -d, Weight::One, Some(Decay::Linear)),
            c("crossing", -d, 0.0, Weight::M0, near0),
        ],
        (Space::F1, true) => vec![
            c("crossing", 0.0, d, Weight::M0, near0),
            c("far", d, inf, Weight::One, Some(Decay::Linear)),
        ],
        (Space::F2, true) => vec![
            c("crossing", 0.0, d, Weight::M0, None),
            c("middle", d, s.right_cut, Weight::One, None),
            c("far", s.right_cut, inf, Weight::One, Some(Decay::Linear)),
        ],
    }
}

/// Result of one clause. For polynomial clauses `constant = sup |v| / w`;
/// for exponential ones `constant` is that ratio over the layer where the
/// exponent is below one, and `rate` the largest `c` with
/// `|v| <= constant w exp(-c d / h)` on the rest of the region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseReport {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    pub constant: f64,
    pub decay: Option<Decay>,
    pub rate: Option<f64>,
}

impl ClauseReport {
    pub fn passed(&self, bound: f64) -> bool {
        self.constant <= bound && self.rate.map_or(true, |c| c > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub space: Space,
    pub side: Side,
    pub clauses: Vec<ClauseReport>,
}

impl EnvelopeReport {
    /// Every clause has its constant below `bound` and a positive decay rate.
    pub fn passed(&self, bound: f64) -> bool {
        self.clauses.iter().all(|c| c.passed(bound))
    }

    pub fn max_constant(&self) -> f64 {
        self.clauses.iter().map(|c| c.constant).fold(0.0, f64::max)
    }
}

/// Compares samples `v` at real abscissae `xs` with the clauses of `space` on `side`.
pub fn envelope_check(
    xs: &[f64],
    v: &[Complex64],
    space: Space,
    side: Side,
    spec: &EnvelopeSpec,
) -> EnvelopeReport {
    let h = spec.h;
    let reports = clauses(space, side, spec)
        .into_iter()
        .map(|cl| {
            let pts: Vec<(f64, f64, f64)> = xs
                .iter()
                .zip(v)
                .filter(|(&x, _)| x >= cl.lo && x <= cl.hi)
                .map(|(&x, u)| {
                    let w = match cl.weight {
                        Weight::One => 1.0,
                        Weight::M0 => spec.m0(x),
                        Weight::MStar => spec.m_star(x),
                    };
                    (x, u.norm(), w)
                })
                .collect();
            let (constant, rate) = match cl.decay {
                None => (pts.iter().map(|&(_, a, w)| a / w).fold(0.0, f64::max), None),
                Some(decay) => {
                    let layer = |x: f64| decay.distance(x) <= h;
                    let constant = pts
                        .iter()
                        .filter(|p| layer(p.0))
                        .map(|&(_, a, w)| a / w)
                        .fold(1.0, f64::max);
                    let rate = pts
                        .iter()
                        .filter(|p| !layer(p.0))
                        .map(|&(x, a, w)| {
                            if a == 0.0 {
                                f64::INFINITY
                            } else {
                                -h * (a / (constant * w)).ln() / decay.distance(x)
                            }
                        })
                        .fold(f64::INFINITY, f64::min);
                    (constant, Some(rate))
                }
            };
            ClauseReport {
                name: cl.name.into(),
                lo: cl.lo,
                hi: cl.hi,
                samples: pts.len(),
                constant,
                decay: cl.decay,
                rate,
            }
        })
        .collect();
    EnvelopeReport {
        space,
        side,
        clauses: reports,
    }
}
