use super::action::{turning_point, well_bottom};
use super::langer::{LangerMap, LangerPoint};
use super::magnus::{propagate, State};
use crate::error::{Error, Result};
use crate::model::PotentialModel;
use crate::specfun::airy;
use crate::spectral::{Discretization, DistortionProfile};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, SQRT_2};

/// Half-line on which a solution lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// `x <= 0`, real axis.
    Left,
    /// `x >= 0` along the path distorted with `+theta`.
    RightPlus,
    /// `x >= 0` along the path distorted with `-theta`.
    RightMinus,
}

impl Side {
    pub fn is_right(self) -> bool {
        !matches!(self, Side::Left)
    }
}

/// `Minus` is the solution decaying away from the origin (outgoing for
/// channel 2 on the right), `Plus` the complementary one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WkbConfig {
    pub distortion: DistortionProfile,
    /// Output nodes are those of the finite-difference grid with this multiplier.
    pub refine: f64,
    pub substeps: usize,
    /// Decay exponent (in units of `1/h`) at which the grids are cut.
    pub depth: f64,
}

impl Default for WkbConfig {
    fn default() -> Self {
        Self {
            distortion: DistortionProfile::default(),
            refine: 2.0,
            substeps: 2,
            depth: 25.0,
        }
    }
}

/// Largest exponent a solution is allowed to build up before being cut to zero.
const EXPONENT_CAP: f64 = 300.0;

/// Nodes of one half-line; `xs` increase, with `0` as the last (left) or
/// first (right) node.
#[derive(Debug, Clone, PartialEq)]
pub struct SideGrid {
    pub side: Side,
    pub dx: f64,
    pub xs: Vec<f64>,
    pub path: Vec<Complex64>,
    pub jacobian: Vec<Complex64>,
}

impl SideGrid {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Index of the origin.
    pub fn origin(&self) -> usize {
        if self.side.is_right() {
            0
        } else {
            self.xs.len() - 1
        }
    }

    pub fn index_near(&self, x: f64) -> usize {
        let i = ((x - self.xs[0]) / self.dx).round();
        (i.max(0.0) as usize).min(self.xs.len() - 1)
    }
}

fn side_profile(side: Side, cfg: &WkbConfig) -> Option<DistortionProfile> {
    match side {
        Side::Left => None,
        Side::RightPlus => Some(cfg.distortion),
        Side::RightMinus => Some(cfg.distortion.flipped()),
    }
}

#[derive(Debug, Clone)]
pub struct WkbSolution {
    pub channel: usize,
    pub side: Side,
    pub kind: Kind,
    pub z: Complex64,
    pub h: f64,
    pub grid: SideGrid,
    pub values: Vec<Complex64>,
    /// `du/dy` along the path.
    pub slopes: Vec<Complex64>,
    /// Grid node nearest the turning point where the Airy normalization is imposed.
    pub match_index: usize,
    model: PotentialModel,
    config: WkbConfig,
}

impl WkbSolution {
    fn propagator(&self) -> Propagator<'_> {
        Propagator {
            m: &self.model,
            j: self.channel,
            z: self.z,
            h: self.h,
            profile: side_profile(self.side, &self.config),
            substeps: self.config.substeps,
        }
    }

    /// `(u, du/dy)` at an arbitrary real abscissa, zero outside the grid.
    pub fn sample(&self, x: f64) -> State {
        let g = &self.grid;
        let zero = Complex64::new(0.0, 0.0);
        let (lo, hi) = (g.xs[0], g.xs[g.len() - 1]);
        if x < lo - 1e-12 || x > hi + 1e-12 {
            return [zero, zero];
        }
        let i = g.index_near(x);
        let start = [self.values[i], self.slopes[i]];
        if (x - g.xs[i]).abs() < 1e-14 || start == [zero, zero] {
            return start;
        }
        let p = self.propagator();
        propagate(&|t| p.coef(t), g.xs[i], x, start, self.config.substeps)
    }

    /// Values at the given abscissae.
    pub fn sample_values(&self, xs: &[f64]) -> Vec<Complex64> {
        xs.iter().map(|&x| self.sample(x)[0]).collect()
    }

    /// Largest fourth-order finite-difference residual of
    /// `-h^2 u_yy + (V - z) u` over interior nodes, relative to `max |u|`.
    pub fn residual(&self) -> f64 {
        use crate::spectral::{D1_STENCIL, D2_STENCIL};
        let g = &self.grid;
        let n = g.len();
        let scale = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let profile = side_profile(self.side, &self.config);
        let mut worst: f64 = 0.0;
        for i in 2..n.saturating_sub(2) {
            let window = &self.values[i - 2..=i + 2];
            if window.iter().any(|v| *v == Complex64::new(0.0, 0.0)) {
                continue;
            }
            let d2: Complex64 = window
                .iter()
                .zip(D2_STENCIL)
                .map(|(v, w)| v * w)
                .sum::<Complex64>()
                / (g.dx * g.dx);
            let d1: Complex64 = window
                .iter()
                .zip(D1_STENCIL)
                .map(|(v, w)| v * w)
                .sum::<Complex64>()
                / g.dx;
            let (jac, djac) = match &profile {
                None => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
                Some(p) => (p.jacobian(g.xs[i]), p.jacobian_slope(g.xs[i])),
            };
            let uyy = d2 / (jac * jac) - djac * d1 / (jac * jac * jac);
            let v = self.model.potential_c(self.channel, g.path[i]);
            let r = -self.h * self.h * uyy + (v - self.z) * self.values[i];
            worst = worst.max(r.norm());
        }
        worst / scale
    }

    /// `h D_x u = (h/i) du/dy`.
    pub fn h_derivative(&self) -> Vec<Complex64> {
        self.slopes
            .iter()
            .map(|d| d * Complex64::new(0.0, -self.h))
            .collect()
    }
}

/// Path Wronskian `u v_y - u_y v` at every node; both solutions must share a grid.
pub fn wronskian(u: &WkbSolution, v: &WkbSolution) -> Result<Vec<Complex64>> {
    if u.grid.xs.len() != v.grid.xs.len() || u.grid.side != v.grid.side {
        return Err(Error::Shape(
            "wronskian of solutions on different grids".into(),
        ));
    }
    Ok((0..u.values.len())
        .map(|i| u.values[i] * v.slopes[i] - u.slopes[i] * v.values[i])
        .collect())
}

/// Turning point of `V_j = E` closest to the crossing at the origin.
pub fn inner_turning_point(m: &PotentialModel, j: usize, energy: f64) -> Result<f64> {
    let g0 = m.potential(j, 0.0) - energy;
    let rising = m.potential_slope(j, 0.0) > 0.0;
    if g0 == 0.0 {
        return Ok(0.0);
    }
    let dir = if (g0 > 0.0) == rising { -1.0 } else { 1.0 };
    turning_point(m, j, energy, 0.0, dir, g0 < 0.0)
}

/// Left turning point of channel 1 (the inner wall of the well).
pub fn outer_turning_point(m: &PotentialModel, energy: f64) -> Result<f64> {
    let (xb, _) = well_bottom(m);
    turning_point(m, 1, energy, xb, -1.0, true)
}

/// Turning point used to normalize a given solution.
fn anchor(m: &PotentialModel, j: usize, side: Side, energy: f64) -> Result<f64> {
    if j == 1 && side == Side::Left {
        outer_turning_point(m, energy)
    } else {
        inner_turning_point(m, j, energy)
    }
}

/// Local exponential rate `|Re(sqrt(V - z) J)| / h`.
fn rate(m: &PotentialModel, j: usize, z: Complex64, y: Complex64, jac: Complex64, h: f64) -> f64 {
    ((m.potential_c(j, y) - z).sqrt() * jac).re.abs() / h
}

fn point(x: f64, profile: Option<&DistortionProfile>) -> (Complex64, Complex64) {
    match profile {
        None => (Complex64::new(x, 0.0), Complex64::new(1.0, 0.0)),
        Some(p) => (p.path(x), p.jacobian(x)),
    }
}

/// Distance from `start` (moving by `dir`) at which the accumulated rate reaches `depth`.
#[allow(clippy::too_many_arguments)]
fn depth_point(
    m: &PotentialModel,
    j: usize,
    z: Complex64,
    h: f64,
    start: f64,
    dir: f64,
    step: f64,
    depth: f64,
    profile: Option<&DistortionProfile>,
) -> f64 {
    let (lo, hi) = m.domain_box;
    let mut x = start;
    let mut acc = 0.0;
    while acc < depth {
        let next = x + dir * step;
        if next < lo || next > hi {
            return x;
        }
        let (y, jac) = point(0.5 * (x + next), profile);
        acc += rate(m, j, z, y, jac, h) * step;
        x = next;
    }
    x
}

/// Grid shared by all solutions of the given side at `(h, z)`.
pub fn side_grid(
    m: &PotentialModel,
    h: f64,
    z: Complex64,
    side: Side,
    cfg: &WkbConfig,
) -> Result<SideGrid> {
    // same spacing as the finite-difference grid refined by `cfg.refine`,
    // so the nodes of both coincide
    let dx = Discretization::new(m, h, cfg.refine)?.dx;
    let e = z.re;
    let scan = (h / 4.0).min(0.01);
    let profile = side_profile(side, cfg);
    let (lo, hi) = m.domain_box;
    let xs: Vec<f64> = if side == Side::Left {
        let x1 = outer_turning_point(m, e)?;
        let x2 = inner_turning_point(m, 2, e)?.min(0.0);
        let far = depth_point(m, 1, z, h, x1, -1.0, scan, cfg.depth, None)
            .min(depth_point(m, 2, z, h, x2, -1.0, scan, cfg.depth, None))
            .max(lo);
        let n = (-far / dx).ceil() as usize;
        (0..=n).map(|i| -((n - i) as f64) * dx).collect()
    } else {
        let x1 = inner_turning_point(m, 1, e)?.max(0.0);
        let x2 = inner_turning_point(m, 2, e)?.max(0.0);
        let end = depth_point(m, 1, z, h, x1, 1.0, scan, cfg.depth, profile.as_ref())
            .max(depth_point(
                m,
                2,
                z,
                h,
                x2,
                1.0,
                scan,
                cfg.depth,
                profile.as_ref(),
            ))
            .max(0.5)
            .min(hi);
        let n = (end / dx).ceil() as usize;
        (0..=n)
            .map(|i| i as f64 * dx)
            .filter(|&x| x <= hi)
            .collect()
    };
    let (path, jacobian) = xs.iter().map(|&x| point(x, profile.as_ref())).unzip();
    Ok(SideGrid {
        side,
        dx,
        xs,
        path,
        jacobian,
    })
}

/// Airy combination `c_ai Ai + c_bi Bi` and its overall factor for each solution.
fn airy_model(j: usize, side: Side, kind: Kind) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let phase = Complex64::from_polar(1.0, FRAC_PI_4);
    match (j, side.is_right(), kind) {
        (2, true, Kind::Minus) => (phase / SQRT_2, -i * phase / SQRT_2),
        (2, true, Kind::Plus) => (phase * SQRT_2, i * phase * SQRT_2),
        (_, _, Kind::Minus) => (Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)),
        (_, _, Kind::Plus) => (Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)),
    }
}

/// Value and `x`-derivative of the Airy approximation at a Langer point.
pub fn airy_target(j: usize, side: Side, kind: Kind, h: f64, p: &LangerPoint) -> Result<State> {
    let (ca, cb) = airy_model(j, side, kind);
    let scale = h.powf(-2.0 / 3.0);
    let a = airy(scale * p.xi)?;
    let f = ca * a.ai + cb * a.bi;
    let fp = ca * a.ai_prime + cb * a.bi_prime;
    let g = p.slope.abs();
    let amp = g.powf(-0.5);
    let damp = -0.5 * p.slope.signum() * g.powf(-1.5) * p.curvature;
    Ok([f * amp, f * damp + fp * (amp * scale * p.slope)])
}

struct Propagator<'a> {
    m: &'a PotentialModel,
    j: usize,
    z: Complex64,
    h: f64,
    profile: Option<DistortionProfile>,
    substeps: usize,
}

impl Propagator<'_> {
    fn coef(&self, x: f64) -> (Complex64, Complex64) {
        let (y, jac) = point(x, self.profile.as_ref());
        (
            jac,
            (self.m.potential_c(self.j, y) - self.z) / (self.h * self.h),
        )
    }

    /// Fills `out` from node `from` (already set) towards `to`, stopping
    /// once the running exponent exceeds the cap.
    fn sweep(&self, xs: &[f64], out: &mut [State], from: usize, to: usize) {
        let f = |x: f64| self.coef(x);
        let mut i = from;
        let mut acc = 0.0;
        while i != to {
            let k = if to > i { i + 1 } else { i - 1 };
            let (a, b) = (xs[i], xs[k]);
            let (y, jac) = point(0.5 * (a + b), self.profile.as_ref());
            acc += rate(self.m, self.j, self.z, y, jac, self.h) * (b - a).abs();
            if acc > EXPONENT_CAP {
                break;
            }
            out[k] = propagate(&f, a, b, out[i], self.substeps);
            i = k;
        }
    }
}

/// Node index (counting from `start` towards `toward`) where the decay
/// exponent from `anchor` reaches the cap, or the far end.
fn seed_index(p: &Propagator, grid: &SideGrid, anchor_idx: usize) -> usize {
    let far = if grid.side.is_right() {
        grid.len() - 1
    } else {
        0
    };
    let mut i = anchor_idx;
    let mut acc = 0.0;
    while i != far {
        let k = if far > i { i + 1 } else { i - 1 };
        let (y, jac) = (
            0.5 * (grid.path[i] + grid.path[k]),
            0.5 * (grid.jacobian[i] + grid.jacobian[k]),
        );
        acc += rate(p.m, p.j, p.z, y, jac, p.h) * grid.dx;
        if acc > EXPONENT_CAP {
            return i;
        }
        i = k;
    }
    far
}

/// Builds the solution `u^{kind}_{channel, side}` at spectral parameter `z`.
pub fn fundamental_solution(
    m: &PotentialModel,
    h: f64,
    channel: usize,
    side: Side,
    kind: Kind,
    z: Complex64,
    cfg: &WkbConfig,
) -> Result<WkbSolution> {
    if channel != 1 && channel != 2 {
        return Err(Error::InvalidParameter(format!("channel {channel}")));
    }
    let grid = side_grid(m, h, z, side, cfg)?;
    let prop = Propagator {
        m,
        j: channel,
        z,
        h,
        profile: side_profile(side, cfg),
        substeps: cfg.substeps,
    };
    let e = z.re;
    let turning = anchor(m, channel, side, e)?;
    let match_index = grid.index_near(turning);
    let match_x = turning.clamp(grid.xs[0], grid.xs[grid.len() - 1]);
    let langer = LangerMap::new(m, channel, e, turning);
    let lp = langer.eval(m, match_x)?;
    let target = airy_target(channel, side, kind, h, &lp)?;
    let coef = |x: f64| prop.coef(x);
    let node_x = grid.xs[match_index];
    let n = grid.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut states = vec![[zero, zero]; n];

    // Channel-2 solutions on the side where they grow are continued from the
    // origin data of their decaying version on the opposite path.
    let continued = match (channel, side, kind) {
        (2, Side::RightPlus, Kind::Plus) => Some(Side::RightMinus),
        (2, Side::RightMinus, Kind::Minus) => Some(Side::RightPlus),
        _ => None,
    };
    let decaying = match (channel, side, kind) {
        (_, _, Kind::Minus) => continued.is_none(),
        (2, Side::RightMinus, Kind::Plus) => true,
        _ => false,
    };

    if let Some(other) = continued {
        let twin = fundamental_solution(m, h, channel, other, kind, z, cfg)?;
        states[0] = [twin.values[0], twin.slopes[0]];
        prop.sweep(&grid.xs, &mut states, 0, n - 1);
        return Ok(finish(
            &prop,
            cfg,
            side,
            kind,
            grid,
            states,
            match_index,
            Complex64::new(1.0, 0.0),
        ));
    }

    if decaying {
        let seed = seed_index(&prop, &grid, match_index);
        let y = grid.path[seed];
        let mut k = ((m.potential_c(channel, y) - z).sqrt()) / h;
        if k.re < 0.0 {
            k = -k;
        }
        // decaying towards the far end: u_y = -/+ k u along the outward direction
        let outward = if side.is_right() { 1.0 } else { -1.0 };
        if channel == 2 && side.is_right() {
            // outgoing exp(+i s y) on +theta, incoming exp(-i s y) on -theta
            let mut s = (z - m.potential_c(channel, y)).sqrt() / h;
            if s.re < 0.0 {
                s = -s;
            }
            let sign = if side == Side::RightPlus { 1.0 } else { -1.0 };
            k = -Complex64::i() * s * sign;
        }
        states[seed] = [Complex64::new(1.0, 0.0), -k * outward];
        let end = if side.is_right() { 0 } else { n - 1 };
        prop.sweep(&grid.xs, &mut states, seed, end);
        let at_turning = propagate(&coef, node_x, match_x, states[match_index], cfg.substeps);
        let scale = airy_scale(at_turning, target, h);
        return Ok(finish(
            &prop,
            cfg,
            side,
            kind,
            grid,
            states,
            match_index,
            scale,
        ));
    }

    states[match_index] = propagate(&coef, match_x, node_x, target, cfg.substeps);
    prop.sweep(&grid.xs, &mut states, match_index, 0);
    prop.sweep(&grid.xs, &mut states, match_index, n - 1);
    Ok(finish(
        &prop,
        cfg,
        side,
        kind,
        grid,
        states,
        match_index,
        Complex64::new(1.0, 0.0),
    ))
}

/// Least-squares factor taking `(u, u')` onto the Airy data `t`.
fn airy_scale(state: State, t: State, h: f64) -> Complex64 {
    let [u, du] = state;
    let w = h.powf(4.0 / 3.0);
    (u.conj() * t[0] + du.conj() * t[1] * w) / (u.norm_sqr() + w * du.norm_sqr())
}

#[allow(clippy::too_many_arguments)]
fn finish(
    prop: &Propagator,
    cfg: &WkbConfig,
    side: Side,
    kind: Kind,
    grid: SideGrid,
    states: Vec<State>,
    match_index: usize,
    scale: Complex64,
) -> WkbSolution {
    let (values, slopes) = states.iter().map(|s| (s[0] * scale, s[1] * scale)).unzip();
    WkbSolution {
        channel: prop.j,
        side,
        kind,
        z: prop.z,
        h: prop.h,
        grid,
        values,
        slopes,
        match_index,
        model: prop.m.clone(),
        config: *cfg,
    }
}
