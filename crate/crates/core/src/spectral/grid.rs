use crate::error::{Error, Result};
use crate::model::PotentialModel;
use serde::{Deserialize, Serialize};

/// Uniform grid on the model box with `x = 0` as a node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    pub x_min: f64,
    pub dx: f64,
    pub n: usize,
    pub h: f64,
    /// Index of the node at `x = 0`.
    pub zero: usize,
}

/// Fourth-order centred second-difference weights (times `1/dx^2`).
pub const D2_STENCIL: [f64; 5] = [
    -1.0 / 12.0,
    16.0 / 12.0,
    -30.0 / 12.0,
    16.0 / 12.0,
    -1.0 / 12.0,
];
/// Fourth-order centred first-difference weights (times `1/dx`).
pub const D1_STENCIL: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];

fn max_potential(m: &PotentialModel) -> f64 {
    let (lo, hi) = m.domain_box;
    (0..=4000)
        .map(|i| lo + (hi - lo) * i as f64 / 4000.0)
        .map(|x| m.v1(x).abs().max(m.v2(x).abs()))
        .fold(0.0, f64::max)
}

impl Discretization {
    /// Largest spacing that resolves the `h`-oscillations of the model.
    pub fn required_spacing(m: &PotentialModel, h: f64) -> f64 {
        h / 10.0 * (1.0 / max_potential(m).sqrt()).min(1.0)
    }

    /// Grid refined `multiplier` times beyond the required spacing.
    pub fn new(m: &PotentialModel, h: f64, multiplier: f64) -> Result<Self> {
        if !(h > 0.0 && multiplier >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "h={h} multiplier={multiplier}"
            )));
        }
        let (lo, _) = m.domain_box;
        let target = Self::required_spacing(m, h) / multiplier;
        let n_left = (-lo / target).ceil() as usize;
        Self::with_left_cells(m, h, n_left)
    }

    /// Grid with `n_left` cells on `[x_min, 0]`; refuses under-resolved grids.
    pub fn with_left_cells(m: &PotentialModel, h: f64, n_left: usize) -> Result<Self> {
        let (lo, hi) = m.domain_box;
        let dx = -lo / n_left.max(1) as f64;
        let required = Self::required_spacing(m, h);
        if dx > required * (1.0 + 1e-12) {
            let required_n = ((hi - lo) / required).ceil() as usize + 1;
            return Err(Error::Resolution {
                spacing: dx,
                required,
                required_n,
            });
        }
        let n_right = (hi / dx + 1e-9).floor() as usize;
        Ok(Self {
            x_min: lo,
            dx,
            n: n_left + n_right + 1,
            h,
            zero: n_left,
        })
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.zero {
            0.0
        } else {
            self.x_min + i as f64 * self.dx
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    /// Nearest node index, clamped to the grid.
    pub fn index_near(&self, x: f64) -> usize {
        (((x - self.x_min) / self.dx).round().max(0.0) as usize).min(self.n - 1)
    }
}
