//! Row-stored band matrices and an LU factorization with partial pivoting.

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `n x n` matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<T>,
}

impl<T: Scalar> BandMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![T::zero(); n * (kl + ku + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn kl(&self) -> usize {
        self.kl
    }
    pub fn ku(&self) -> usize {
        self.ku
    }

    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if self.in_band(i, j) {
            self.data[i * self.width() + j + self.kl - i]
        } else {
            T::zero()
        }
    }

    /// Adds `v` at `(i, j)`; entries outside the band or the matrix are dropped.
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        if self.in_band(i, j) {
            let w = self.width();
            self.data[i * w + j + self.kl - i] += v;
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let w = self.width();
        self.data[i * w + j + self.kl - i] = v;
    }

    pub fn shifted(&self, shift: T) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.add(i, i, -shift);
        }
        m
    }

    fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut s = T::zero();
                for j in self.row_range(i) {
                    s += self.get(i, j) * x[j];
                }
                s
            })
            .collect()
    }

    pub fn matvec_transpose(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![T::zero(); self.n];
        for i in 0..self.n {
            for j in self.row_range(i) {
                y[j] += self.get(i, j) * x[i];
            }
        }
        y
    }

    pub fn matvec_adjoint(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![T::zero(); self.n];
        for i in 0..self.n {
            for j in self.row_range(i) {
                y[j] += self.get(i, j).conj() * x[i];
            }
        }
        y
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in self.row_range(i) {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).modulus());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> BandMatrix<U> {
        BandMatrix {
            n: self.n,
            kl: self.kl,
            ku: self.ku,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn factor(&self) -> Result<BandedLu<T>> {
        BandedLu::new(self)
    }
}

/// `P A = L U` for a band matrix; `U` gains `kl` extra super-diagonals.
#[derive(Debug, Clone)]
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    // row i stores columns i-kl ..= i+kl+ku
    rows: Vec<T>,
    piv: Vec<usize>,
}

impl<T: Scalar> BandedLu<T> {
    pub fn new(a: &BandMatrix<T>) -> Result<Self> {
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        let w = 2 * kl + ku + 1;
        let mut rows = vec![T::zero(); n * w];
        for i in 0..n {
            for j in a.row_range(i) {
                rows[i * w + j + kl - i] = a.get(i, j);
            }
        }
        let idx = |r: usize, c: usize| r * w + c + kl - r;
        let mut piv = vec![0; n];
        let scale = a.data.iter().fold(0.0f64, |m, v| m.max(v.modulus()));
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + kl + ku).min(n - 1);
            let mut p = k;
            let mut best = rows[idx(k, k)].modulus();
            for r in k + 1..=last_row {
                let m = rows[idx(r, k)].modulus();
                if m > best {
                    best = m;
                    p = r;
                }
            }
            piv[k] = p;
            if best == 0.0 || best <= f64::EPSILON * 1e-6 * scale {
                return Err(Error::Singular(k));
            }
            if p != k {
                for c in k..=last_col {
                    rows.swap(idx(k, c), idx(p, c));
                }
            }
            let pivot = rows[idx(k, k)];
            for r in k + 1..=last_row {
                let l = rows[idx(r, k)] / pivot;
                rows[idx(r, k)] = l;
                if l == T::zero() {
                    continue;
                }
                for c in k + 1..=last_col {
                    let u = rows[idx(k, c)];
                    rows[idx(r, c)] -= l * u;
                }
            }
        }
        Ok(Self {
            n,
            kl,
            ku,
            rows,
            piv,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> T {
        self.rows[r * (2 * self.kl + self.ku + 1) + c + self.kl - r]
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            if xk == T::zero() {
                continue;
            }
            for r in k + 1..=(k + self.kl).min(n - 1) {
                x[r] -= self.at(r, k) * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for c in k + 1..=(k + self.kl + self.ku).min(n - 1) {
                s -= self.at(k, c) * x[c];
            }
            x[k] = s / self.at(k, k);
        }
        x
    }

    fn solve_transposed(&self, b: &[T], conjugate: bool) -> Vec<T> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let cj = |v: T| if conjugate { v.conj() } else { v };
        let mut x = b.to_vec();
        let reach = self.kl + self.ku;
        for k in 0..n {
            let mut s = x[k];
            for j in k.saturating_sub(reach)..k {
                s -= cj(self.at(j, k)) * x[j];
            }
            x[k] = s / cj(self.at(k, k));
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for r in k + 1..=(k + self.kl).min(n - 1) {
                s -= cj(self.at(r, k)) * x[r];
            }
            x[k] = s;
            x.swap(k, self.piv[k]);
        }
        x
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[T]) -> Vec<T> {
        self.solve_transposed(b, false)
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[T]) -> Vec<T> {
        self.solve_transposed(b, true)
    }
}
