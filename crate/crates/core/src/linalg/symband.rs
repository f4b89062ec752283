//! Real symmetric band matrices: inertia counts and eigenpairs in an interval.

use super::banded::BandMatrix;
use crate::error::{Error, Result};

/// Number of eigenvalues of the symmetric band matrix `a` below `sigma`, from
/// the signs of an `LDL^T` factorization of `a - sigma I` (Sylvester).
pub fn count_below(a: &BandMatrix<f64>, sigma: f64) -> usize {
    let n = a.n();
    let p = a.kl();
    let scale = (0..n).map(|i| a.get(i, i).abs()).fold(1.0f64, f64::max);
    let tiny = f64::EPSILON * scale;
    // l[i][q] = L(i, i-p+q) for q < p
    let mut l = vec![0.0; n * p.max(1)];
    let mut d = vec![0.0; n];
    let mut negatives = 0;
    for k in 0..n {
        let lo = k.saturating_sub(p);
        for i in lo..k {
            // L(k, i) = (a_ki - sum_{j<i} L(k,j) L(i,j) d_j) / d_i
            let mut s = a.get(k, i);
            for j in k.saturating_sub(p).max(i.saturating_sub(p))..i {
                s -= l[k * p + j + p - k] * l[i * p + j + p - i] * d[j];
            }
            l[k * p + i + p - k] = s / d[i];
        }
        let mut dk = a.get(k, k) - sigma;
        for j in lo..k {
            let lkj = l[k * p + j + p - k];
            dk -= lkj * lkj * d[j];
        }
        if dk.abs() < tiny {
            dk = -tiny;
        }
        if dk < 0.0 {
            negatives += 1;
        }
        d[k] = dk;
    }
    negatives
}

/// Eigenvalues in `[lo, hi)` by bisection on inertia counts, each to `tol`.
pub fn eigenvalues_in(a: &BandMatrix<f64>, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
    let c_lo = count_below(a, lo);
    let c_hi = count_below(a, hi);
    let mut out = Vec::with_capacity(c_hi.saturating_sub(c_lo));
    for idx in c_lo..c_hi {
        // smallest x with count_below(x) > idx
        let (mut a_lo, mut a_hi) = (lo, hi);
        while a_hi - a_lo > tol {
            let mid = 0.5 * (a_lo + a_hi);
            if count_below(a, mid) > idx {
                a_hi = mid;
            } else {
                a_lo = mid;
            }
        }
        out.push(0.5 * (a_lo + a_hi));
    }
    out
}

/// Unit eigenvector for an accurate eigenvalue estimate by inverse iteration.
/// `previous` vectors (same cluster) are projected out.
pub fn inverse_iteration(
    a: &BandMatrix<f64>,
    lambda: f64,
    previous: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let n = a.n();
    let scale = (0..n).map(|i| a.get(i, i).abs()).fold(1.0f64, f64::max);
    let mut shift = lambda + 1e-13 * scale;
    let lu = loop {
        match a.shifted(shift).factor() {
            Ok(lu) => break lu,
            Err(_) => shift += 1e-12 * scale,
        }
    };
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.37 * ((i * 7919) % 101) as f64 / 101.0)
        .collect();
    let mut last = f64::INFINITY;
    for _ in 0..50 {
        for p in previous {
            let c: f64 = p.iter().zip(&v).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(p).for_each(|(x, y)| *x -= c * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        let w = lu.solve(&v);
        let av = a.matvec(&v);
        let res = av
            .iter()
            .zip(&v)
            .map(|(x, y)| (x - lambda * y).powi(2))
            .sum::<f64>()
            .sqrt();
        if res < 1e-10 * scale || (res - last).abs() < 1e-3 * res {
            return Ok(v);
        }
        last = res;
        v = w;
    }
    Err(Error::NoConvergence {
        what: format!("inverse iteration at {lambda}"),
        history: vec![last],
    })
}
