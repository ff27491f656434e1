//! Banded LU factorization with partial pivoting, in the classic band
//! storage layout (the factorization of an `n x n` matrix with `kl` sub- and
//! `ku` superdiagonals needs `kl` extra rows of fill-in).

use crate::error::{Error, Result};
use crate::scalar::Real;

/// LU factors of a banded matrix.
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    /// Working array, `(2 kl + ku + 1) x n`, column-major bands:
    /// `A(i, j)` lives at `w[(kl + ku + i - j) * n + j]`.
    w: Vec<T>,
    ipiv: Vec<usize>,
}

/// Builder for a banded matrix prior to factorization.
pub struct BandedMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    w: Vec<T>,
}

impl<T: Real> BandedMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            w: vec![T::zero(); (2 * kl + ku + 1) * n],
        }
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(i + self.ku >= j && j + self.kl >= i, "outside band");
        (self.kl + self.ku + i - j) * self.n + j
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let s = self.slot(i, j);
        self.w[s] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let s = self.slot(i, j);
        self.w[s] = self.w[s] + v;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        if i + self.ku < j || j + self.kl < i {
            T::zero()
        } else {
            self.w[(self.kl + self.ku + i - j) * self.n + j]
        }
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[T], y: &mut [T]) {
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            let mut acc = T::zero();
            for j in lo..=hi {
                acc = acc + self.get(i, j) * x[j];
            }
            y[i] = acc;
        }
    }

    /// Factors the matrix in place (Gaussian elimination with partial
    /// pivoting restricted to the band).
    pub fn factor(self) -> Result<BandedLu<T>> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let ldw = 2 * kl + ku + 1;
        let mut w = self.w;
        let mut ipiv = vec![0usize; n];
        let at = |r: usize, c: usize| r * n + c;
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            // pivot search in column j, rows j..=j+km
            let mut p = 0usize;
            let mut pmax = w[at(kl + ku, j)].abs();
            for i in 1..=km {
                let v = w[at(kl + ku + i, j)].abs();
                if v > pmax {
                    pmax = v;
                    p = i;
                }
            }
            ipiv[j] = j + p;
            if pmax == T::zero() || !pmax.is_finite() {
                return Err(Error::NoConvergence(j));
            }
            ju = ju.max((j + ku + p).min(n - 1));
            if p != 0 {
                // swap rows j and j+p over columns j..=ju; both stay in the
                // working array because ju - j <= kl + ku
                for c in j..=ju {
                    let ra = kl + ku + j - c;
                    let rb = kl + ku + j + p - c;
                    debug_assert!(ra < ldw && rb < ldw);
                    w.swap(at(ra, c), at(rb, c));
                }
            }
            let piv = w[at(kl + ku, j)];
            for i in 1..=km {
                let s = at(kl + ku + i, j);
                w[s] = w[s] / piv;
            }
            for c in (j + 1)..=ju {
                let ujc = w[at(kl + ku + j - c, c)];
                if ujc != T::zero() {
                    for i in 1..=km {
                        let s = at(kl + ku + j + i - c, c);
                        let m = w[at(kl + ku + i, j)];
                        w[s] = w[s] - m * ujc;
                    }
                }
            }
        }
        Ok(BandedLu { n, kl, ku, w, ipiv })
    }
}

impl<T: Real> BandedLu<T> {
    /// Solves `A x = b` in place.
    pub fn solve(&self, b: &mut [T]) {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let at = |r: usize, c: usize| r * n + c;
        // L pass with the recorded row interchanges
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                b.swap(p, j);
            }
            let km = kl.min(n - 1 - j);
            let bj = b[j];
            for i in 1..=km {
                b[j + i] = b[j + i] - self.w[at(kl + ku + i, j)] * bj;
            }
        }
        // U pass: bandwidth of U is kl + ku
        for j in (0..n).rev() {
            let bj = b[j] / self.w[at(kl + ku, j)];
            b[j] = bj;
            let lo = j.saturating_sub(kl + ku);
            for i in lo..j {
                b[i] = b[i] - self.w[at(kl + ku + i - j, j)] * bj;
            }
        }
    }
}
