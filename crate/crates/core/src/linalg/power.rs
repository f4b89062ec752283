use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest singular value of a linear map given `apply` and its adjoint
/// (both with respect to the same inner product), by power iteration on
/// `A^* A`. Converged when successive estimates agree to `rel_tol`.
pub fn power_norm<F, G, N>(
    apply: F,
    adjoint: G,
    inner_norm: N,
    n: usize,
    rel_tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<f64>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
    G: Fn(&[Complex64]) -> Vec<Complex64>,
    N: Fn(&[Complex64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let nv = inner_norm(&v);
    if nv == 0.0 {
        return Ok(0.0);
    }
    v.iter_mut().for_each(|x| *x /= nv);
    let mut history = Vec::new();
    let mut est = 0.0;
    for _ in 0..max_iter {
        let av = apply(&v);
        let w = adjoint(&av);
        let nw = inner_norm(&w);
        if nw == 0.0 {
            return Ok(0.0);
        }
        let next = nw.sqrt();
        history.push(next);
        v = w.into_iter().map(|x| x / nw).collect();
        if (next - est).abs() <= rel_tol * next {
            return Ok(next);
        }
        est = next;
    }
    Err(Error::NoConvergence {
        what: "power iteration".into(),
        history,
    })
}

pub fn euclidean_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
