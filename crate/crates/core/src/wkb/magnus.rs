use num_complex::Complex64;

/// State `(u, du/dy)` of `u'' = q(y) u` along a path `y(x)`.
pub type State = [Complex64; 2];

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Fourth-order Magnus step for the first-order system
/// `d/dx (u, u_y) = J(x) [[0, 1], [q, 0]] (u, u_y)` from `x0` to `x1`.
/// `coef(x)` returns `(J(x), q(y(x)))`.
pub fn magnus_step<F>(coef: &F, x0: f64, x1: f64, state: State) -> State
where
    F: Fn(f64) -> (Complex64, Complex64),
{
    let d = x1 - x0;
    let (j1, q1) = coef(x0 + d * (0.5 - SQRT3 / 6.0));
    let (j2, q2) = coef(x0 + d * (0.5 + SQRT3 / 6.0));
    let (b1, c1) = (j1, j1 * q1);
    let (b2, c2) = (j2, j2 * q2);
    let diag = (b2 * c1 - b1 * c2) * (SQRT3 / 12.0 * d * d);
    let upper = (b1 + b2) * (0.5 * d);
    let lower = (c1 + c2) * (0.5 * d);
    let mu2 = diag * diag + upper * lower;
    let (ch, shc) = cosh_sinhc(mu2);
    [
        (ch + shc * diag) * state[0] + shc * upper * state[1],
        shc * lower * state[0] + (ch - shc * diag) * state[1],
    ]
}

/// `(cosh mu, sinh(mu)/mu)` as functions of `mu^2`.
fn cosh_sinhc(mu2: Complex64) -> (Complex64, Complex64) {
    if mu2.norm() < 1e-6 {
        let c = 1.0 + mu2 * (0.5 + mu2 / 24.0);
        let s = 1.0 + mu2 * (1.0 / 6.0 + mu2 / 120.0);
        (c, s)
    } else {
        let mu = mu2.sqrt();
        (mu.cosh(), mu.sinh() / mu)
    }
}

/// Propagates over `[x0, x1]` in `substeps` equal Magnus steps.
pub fn propagate<F>(coef: &F, x0: f64, x1: f64, mut state: State, substeps: usize) -> State
where
    F: Fn(f64) -> (Complex64, Complex64),
{
    let n = substeps.max(1);
    let d = (x1 - x0) / n as f64;
    for k in 0..n {
        let a = x0 + d * k as f64;
        let b = if k + 1 == n { x1 } else { a + d };
        state = magnus_step(coef, a, b, state);
    }
    state
}
