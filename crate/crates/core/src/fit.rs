use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Minimum coefficient of determination for a fit to count as a pass.
pub const MIN_R_SQUARED: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    /// Slope within `tolerance` of `target`.
    Within { target: f64, tolerance: f64 },
    /// Slope at least `bound`.
    AtLeast { bound: f64 },
}

impl Expectation {
    pub fn accepts(&self, slope: f64) -> bool {
        match *self {
            Expectation::Within { target, tolerance } => (slope - target).abs() <= tolerance,
            Expectation::AtLeast { bound } => slope >= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub quantity: String,
    pub pairs: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub expected: Option<Expectation>,
}

impl SlopeFit {
    pub fn expect(mut self, e: Expectation) -> Self {
        self.expected = Some(e);
        self
    }

    /// Expectation met and `r^2 >= 0.95`; fits without an expectation never pass.
    pub fn passed(&self) -> bool {
        self.r_squared >= MIN_R_SQUARED && self.expected.is_some_and(|e| e.accepts(self.slope))
    }
}

/// Least-squares line through `(ln h, ln v)`.
pub fn fit_slope(quantity: &str, pairs: &[(f64, f64)]) -> Result<SlopeFit> {
    if pairs.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "{quantity}: need at least 3 pairs, got {}",
            pairs.len()
        )));
    }
    if let Some(&(h, v)) = pairs.iter().find(|(h, v)| !(*h > 0.0 && *v > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "{quantity}: nonpositive pair ({h}, {v})"
        )));
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(format!("{quantity}: all h equal")));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(SlopeFit {
        quantity: quantity.into(),
        pairs: pairs.to_vec(),
        slope,
        intercept: my - slope * mx,
        r_squared,
        expected: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        [0.08, 0.04, 0.02, 0.01, 0.005]
            .iter()
            .map(|&h| (h, f(h)))
            .collect()
    }

    #[test]
    fn exact_power_law() {
        let fit = fit_slope("q", &pairs(|h| 3.0 * h * h)).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-10);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-10);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_has_zero_slope() {
        let fit = fit_slope("q", &pairs(|_| 0.7)).unwrap();
        assert!(fit.slope.abs() < 1e-12);
    }

    #[test]
    fn perturbed_power_law() {
        let fit = fit_slope(
            "q",
            &pairs(|h| h.powf(5.0 / 3.0) * (1.0 + 0.1 * (1.0 / h).sin())),
        )
        .unwrap();
        assert!((fit.slope - 5.0 / 3.0).abs() < 0.2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_slope("q", &[(0.1, 1.0), (0.05, 0.0), (0.02, 1.0)]).is_err());
        assert!(fit_slope("q", &[(0.1, 1.0), (0.05, 1.0)]).is_err());
    }

    #[test]
    fn verdicts() {
        let fit = fit_slope("q", &pairs(|h| h * h)).unwrap();
        assert!(!fit.passed());
        assert!(fit
            .clone()
            .expect(Expectation::Within {
                target: 2.0,
                tolerance: 0.1
            })
            .passed());
        assert!(!fit
            .clone()
            .expect(Expectation::AtLeast { bound: 2.5 })
            .passed());
    }
}
