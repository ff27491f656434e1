//! Essential spectrum via the far-field dispersion determinant, the
//! order-one-regime critical eigenvalue, and the discretized-linearization
//! eigensolver.

pub mod arnoldi;
pub mod banded;
mod discrete;

pub use discrete::{
    discrete_linearization_eigs, refine_steady_state, DiscreteEig, Parity, SteadyState,
};

use crate::error::{Error, Result};
use crate::params::{background_state, ModelParams, TimeScaleRegime};
use crate::scalar::{Cplx, Real};
use num_traits::Float;
use crate::slep::SlepContext;

/// Roots of `a3 x^3 + a2 x^2 + a1 x + a0` (complex, `a3 != 0`).
///
/// Closed form (trigonometric for three real roots, Cardano otherwise) with
/// Newton polish; if a polished root fails its residual check the companion
/// matrix of the normalized cubic is used instead.
pub fn cubic_roots<T: Real + nalgebra::RealField>(a3: T, a2: T, a1: T, a0: T) -> [Cplx<T>; 3] {
    let fabs = |x: T| Float::abs(x);
    let fmax = |a: T, b: T| Float::max(a, b);
    let scale = fmax(fmax(fabs(a3), fabs(a2)), fmax(fabs(a1), fabs(a0)));
    let eval = |z: Cplx<T>| ((Cplx::new(a3, T::zero()) * z + a2) * z + a1) * z + a0;
    let deriv = |z: Cplx<T>| {
        (Cplx::new(T::c(3.0) * a3, T::zero()) * z + T::c(2.0) * a2) * z + a1
    };
    let polish = |mut z: Cplx<T>| {
        for _ in 0..4 {
            let d = deriv(z);
            if d.norm() == T::zero() {
                break;
            }
            z = z - eval(z) / d;
        }
        z
    };

    // depressed cubic t^3 + p t + q with x = t - a2/(3 a3)
    let b = a2 / a3;
    let c = a1 / a3;
    let d = a0 / a3;
    let shift = b / T::c(3.0);
    let p = c - b * b / T::c(3.0);
    let q = T::c(2.0) * b * b * b / T::c(27.0) - b * c / T::c(3.0) + d;
    let disc = -(T::c(4.0) * p * p * p + T::c(27.0) * q * q);

    let mut roots: [Cplx<T>; 3];
    if p == T::zero() && q == T::zero() {
        roots = [Cplx::new(-shift, T::zero()); 3];
    } else if disc > T::zero() {
        // three distinct real roots: trigonometric form
        let r = Float::sqrt(-p / T::c(3.0));
        let arg = Float::min(fmax(T::c(3.0) * q / (T::c(2.0) * p) / r, -T::one()), T::one());
        let phi = Float::acos(arg);
        let two_pi_third = T::c(2.0 * std::f64::consts::FRAC_PI_3);
        roots = [T::zero(), T::one(), T::c(2.0)].map(|k| {
            let t = T::c(2.0) * r * Float::cos((phi / T::c(3.0)) - two_pi_third * k);
            Cplx::new(t - shift, T::zero())
        });
    } else {
        // one real root by Cardano with a cancellation-safe branch
        let half_q = q * T::c(0.5);
        let inner = Float::sqrt(half_q * half_q + p * p * p / T::c(27.0));
        let u3 = if half_q >= T::zero() {
            -half_q - inner
        } else {
            -half_q + inner
        };
        let u = Float::signum(u3) * Float::cbrt(fabs(u3));
        let v = if u == T::zero() { T::zero() } else { -p / (T::c(3.0) * u) };
        let t_real = u + v;
        let x_real = t_real - shift;
        // deflate: remaining quadratic a3 x^2 + (a2 + a3 x_real) x + ...
        let b2 = a2 + a3 * x_real;
        let c2 = a1 + b2 * x_real;
        let disc2 = b2 * b2 - T::c(4.0) * a3 * c2;
        let pair = if disc2 >= T::zero() {
            let s = Float::sqrt(disc2);
            [
                Cplx::new((-b2 + s) / (T::c(2.0) * a3), T::zero()),
                Cplx::new((-b2 - s) / (T::c(2.0) * a3), T::zero()),
            ]
        } else {
            let s = Float::sqrt(-disc2) / (T::c(2.0) * a3);
            [
                Cplx::new(-b2 / (T::c(2.0) * a3), s),
                Cplx::new(-b2 / (T::c(2.0) * a3), -s),
            ]
        };
        roots = [Cplx::new(x_real, T::zero()), pair[0], pair[1]];
    }
    for r in roots.iter_mut() {
        *r = polish(*r);
    }

    // residual guard: fall back to the companion matrix when the closed form
    // lost accuracy
    let bad = roots.iter().any(|z| {
        let zn = fmax(z.norm(), T::one());
        eval(*z).norm() > T::c(1e-7) * scale * zn * zn * zn
    });
    if bad {
        let m = nalgebra::Matrix3::new(
            T::zero(),
            T::zero(),
            -a0 / a3,
            T::one(),
            T::zero(),
            -a1 / a3,
            T::zero(),
            T::one(),
            -a2 / a3,
        );
        let ev = m.complex_eigenvalues();
        roots = [ev[0], ev[1], ev[2]].map(|z| polish(Cplx::new(z.re, z.im)));
    }
    roots
}

/// Far-field dispersion matrix roots: the three branches `lambda(xi)` of
/// `det M(lambda; xi) = 0`, where the diagonal carries
/// `(lambda + eps^2 xi^2 - m, tau lambda + xi^2 + 1, theta lambda + D^2 xi^2 + 1)`
/// with couplings `eps alpha`, `eps beta`, `-1`, `-1`, and
/// `m = f'(u_bar) -> -2`.
pub fn dispersion_roots<T: Real + nalgebra::RealField>(
    xi: T,
    p: &ModelParams<T>,
    regime: &TimeScaleRegime<T>,
) -> Result<[Cplx<T>; 3]> {
    let (tau, theta) = regime.effective(p.epsilon());
    let u_bar = background_state(p)?.u_bar;
    let m = T::one() - T::c(3.0) * u_bar * u_bar;
    let eps = p.epsilon();
    let xi2 = xi * xi;
    let a = eps * eps * xi2 - m;
    let b = xi2 + T::one();
    let c = p.d() * p.d() * xi2 + T::one();
    let a3 = tau * theta;
    let a2 = tau * c + theta * b + a * tau * theta;
    let a1 = b * c + a * (tau * c + theta * b) + eps * (p.alpha() * theta + p.beta() * tau);
    let a0 = a * b * c + eps * (p.alpha() * c + p.beta() * b);
    Ok(cubic_roots(a3, a2, a1, a0))
}

/// Result of an essential-spectrum scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssentialBound<T> {
    /// `max Re lambda` over the sampled wavenumbers (negative for valid
    /// parameters).
    pub bound: T,
    /// Wavenumber attaining the bound.
    pub argmax_xi: T,
    /// `bound / eps^2` in the slow regime, for comparison with the scaled
    /// limit, `None` in the order-one regime.
    pub scaled_bound: Option<T>,
}

/// Scans `xi = 0` plus a log-spaced grid up to `xi_max` and returns the
/// largest real part over all dispersion roots. A nonnegative bound is an
/// error: it signals invalid parameters or a regime mix-up.
pub fn essential_bound<T: Real + nalgebra::RealField>(
    p: &ModelParams<T>,
    regime: &TimeScaleRegime<T>,
    xi_max: T,
    n_samples: usize,
) -> Result<EssentialBound<T>> {
    let mut bound = T::neg_infinity();
    let mut argmax = T::zero();
    let lo = T::c(1e-2);
    let ratio = Float::powf(xi_max / lo, T::one() / T::from_usize(n_samples.max(2) - 1).unwrap());
    let mut xi = T::zero();
    let mut k = 0usize;
    loop {
        for root in dispersion_roots(xi, p, regime)? {
            if root.re > bound {
                bound = root.re;
                argmax = xi;
            }
        }
        if k >= n_samples {
            break;
        }
        xi = lo * Float::powi(ratio, k as i32);
        k += 1;
    }
    if bound >= T::zero() {
        return Err(Error::PositiveBound {
            bound: bound.f64(),
            xi: argmax.f64(),
        });
    }
    let scaled_bound = if regime.is_slow() {
        Some(bound / (p.epsilon() * p.epsilon()))
    } else {
        None
    };
    Ok(EssentialBound {
        bound,
        argmax_xi: argmax,
        scaled_bound,
    })
}

/// Scaled critical eigenvalues in the order-one regime: the even (amplitude)
/// mode `-3 sqrt(2) (alpha e^{-2x*} + (beta/D) e^{-2x*/D})` and the odd
/// (translation) mode, exactly zero.
pub fn o1_critical_eigenvalue<T: Real>(ctx: &SlepContext<T>) -> (T, T) {
    let p = ctx.params();
    let xs = ctx.x_star();
    let even = -T::c(3.0)
        * T::c(2.0).sqrt()
        * (p.alpha() * (-T::c(2.0) * xs).exp()
            + p.beta() / p.d() * (-T::c(2.0) * xs / p.d()).exp());
    (even, T::zero())
}
