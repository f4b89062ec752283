use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Smooth even bump equal to 1 on `[-delta0, delta0]` and 0 outside
/// `(-delta1, delta1)`, with transitions built from `exp(-1/u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateauBump {
    pub delta0: f64,
    pub delta1: f64,
}

fn flat(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

impl PlateauBump {
    pub fn new(delta0: f64, delta1: f64) -> Result<Self> {
        if !(0.0 < delta0 && delta0 < delta1 && delta1.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "plateau needs 0 < delta0 < delta1, got {delta0}, {delta1}"
            )));
        }
        Ok(Self { delta0, delta1 })
    }

    pub fn value(&self, s: f64) -> f64 {
        let a = s.abs();
        if a <= self.delta0 {
            return 1.0;
        }
        if a >= self.delta1 {
            return 0.0;
        }
        let t = (a - self.delta0) / (self.delta1 - self.delta0);
        let (p, q) = (flat(1.0 - t), flat(t));
        p / (p + q)
    }
}
