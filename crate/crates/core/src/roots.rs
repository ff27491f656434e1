//! Scalar and complex root finding: bisection with bracket growth and
//! bracket-safeguarded Newton.

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Bisects `f` on `[lo, hi]` down to an interval of width `tol`.
///
/// Requires a sign change on the initial interval.
pub fn bisect<T: Real>(mut f: impl FnMut(T) -> T, lo: T, hi: T, tol: T) -> Result<T> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if (flo > T::zero()) == (fhi > T::zero()) {
        return Err(Error::BracketFailure("no sign change on initial interval"));
    }
    let neg_lo = flo < T::zero();
    for _ in 0..4096 {
        let mid = (lo + hi) * T::c(0.5);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if (fm < T::zero()) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::c(0.5))
}

/// Grows `hi` by doubling until `pred(hi)` holds, then returns it.
pub fn grow_upper<T: Real>(
    mut pred: impl FnMut(T) -> bool,
    start: T,
    max_doublings: usize,
) -> Result<T> {
    let mut hi = start;
    for _ in 0..max_doublings {
        if pred(hi) {
            return Ok(hi);
        }
        hi = hi * T::c(2.0);
    }
    Err(Error::BracketFailure("upper bracket growth exhausted"))
}

/// Newton iteration kept inside a sign-changing bracket `[lo, hi]`.
///
/// Falls back to bisection whenever the Newton step leaves the bracket or the
/// derivative degenerates. The bracket must satisfy `f(lo) * f(hi) <= 0`.
pub fn newton_bracketed<T: Real>(
    mut f_df: impl FnMut(T) -> (T, T),
    lo: T,
    hi: T,
    x0: T,
    tol: T,
    max_iter: usize,
) -> Result<T> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, _) = f_df(lo);
    let neg_lo = flo < T::zero();
    let mut x = x0.max(lo).min(hi);
    for _ in 0..max_iter {
        let (fx, dfx) = f_df(x);
        if fx == T::zero() {
            return Ok(x);
        }
        if (fx < T::zero()) == neg_lo {
            lo = x;
        } else {
            hi = x;
        }
        let newton_ok = dfx != T::zero();
        let mut next = if newton_ok { x - fx / dfx } else { x };
        if !newton_ok || next <= lo || next >= hi || !next.is_finite() {
            next = (lo + hi) * T::c(0.5);
        }
        if (next - x).abs() <= tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NoConvergence(max_iter))
}

/// Newton iteration in the complex plane with a user-supplied derivative.
pub fn newton_complex<T: Real>(
    mut f_df: impl FnMut(Cplx<T>) -> (Cplx<T>, Cplx<T>),
    z0: Cplx<T>,
    tol: T,
    max_iter: usize,
) -> Result<Cplx<T>> {
    let mut z = z0;
    for _ in 0..max_iter {
        let (f, df) = f_df(z);
        if df.norm() == T::zero() {
            return Err(Error::NoConvergence(max_iter));
        }
        let step = f / df;
        z = z - step;
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NoConvergence(max_iter));
        }
        if step.norm() <= tol * z.norm().max(T::one()) {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence(max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn newton_bracketed_cubic() {
        let r = newton_bracketed(
            |x: f64| (x * x * x - 8.0, 3.0 * x * x),
            0.0,
            5.0,
            1.0,
            1e-14,
            100,
        )
        .unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn newton_complex_square_root_of_minus_one() {
        let r = newton_complex(
            |z: num_complex::Complex<f64>| (z * z + 1.0, 2.0 * z),
            num_complex::Complex::new(0.3, 0.8),
            1e-14,
            100,
        )
        .unwrap();
        assert!((r - num_complex::Complex::new(0.0, 1.0)).norm() < 1e-12);
    }
}
