//! SLEP (singular limit eigenvalue problem) machinery.
//!
//! In the singular limit the critical eigenvalues `lambda ~ eps^2 lambda^`
//! of the linearization about the standing pulse are roots of explicit
//! scalar equations built from half-line Green functions evaluated at the
//! layer. This module provides those ingredients:
//!
//! * the scalar functions `g_{+-}(y) = (1 +- e^{-y})/y`;
//! * delta inner products of the static and frequency-dependent Green
//!   operators, in closed form;
//! * the SLEP functions `G_od` (odd modes, drift) and `G_ev` (even modes,
//!   Hopf) for real and complex scaled eigenvalues;
//! * the real/imaginary decomposition `R`, `I` of `g_+` along the imaginary
//!   axis used to locate Hopf points;
//! * the adjoint identities certifying the drift bifurcation's algebraic
//!   multiplicity.
//!
//! The squared-norm constant of the layer profile enters everywhere through
//! `kappa*^2 = 3 sqrt(2) / 4`.

use crate::bvp::{self, LeftBc};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::pulse;
use crate::scalar::{Cplx, Real};

/// Parity of the mode on the half line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Neumann condition at `x = 0`.
    Even,
    /// Dirichlet condition at `x = 0`.
    Odd,
}

/// Which inhibitor's Green operator a weight refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// First inhibitor (`v`; unit diffusion, rate `tau`).
    Q,
    /// Second inhibitor (`w`; diffusion length `D`, rate `theta`).
    R,
}

/// `g_+(y) = (1 + e^{-y})/y`. Diverges at `y = 0`; callers keep arguments
/// away from the origin (Green arguments are `2 omega x* != 0`).
pub fn g_plus<T: Real>(y: Cplx<T>) -> Cplx<T> {
    (Cplx::new(T::one(), T::zero()) + (-y).exp()) / y
}

/// `g_-(y) = (1 - e^{-y})/y`, with the Taylor series below `|y| = 1e-4` to
/// avoid the catastrophic cancellation of the direct form.
pub fn g_minus<T: Real>(y: Cplx<T>) -> Cplx<T> {
    if y.norm() < T::c(1e-4) {
        // 1 - y/2 + y^2/6 - y^3/24 + y^4/120 - y^5/720
        let mut acc = Cplx::new(T::c(1.0 / 720.0), T::zero());
        for inv in [120.0, 24.0, 6.0, 2.0, 1.0] {
            acc = Cplx::new(T::c(1.0 / inv), T::zero()) - y * acc;
        }
        acc
    } else {
        (Cplx::new(T::one(), T::zero()) - (-y).exp()) / y
    }
}

/// `g_+'(y) = -(1 + e^{-y})/y^2 - e^{-y}/y`.
pub fn g_plus_prime<T: Real>(y: Cplx<T>) -> Cplx<T> {
    let e = (-y).exp();
    let one = Cplx::new(T::one(), T::zero());
    -(one + e) / (y * y) - e / y
}

/// `g_-'(y)`, with a series guard near the origin.
pub fn g_minus_prime<T: Real>(y: Cplx<T>) -> Cplx<T> {
    if y.norm() < T::c(1e-4) {
        // -1/2 + y/3 - y^2/8 + y^3/30 - y^4/144
        let mut acc = Cplx::new(T::c(1.0 / 144.0), T::zero());
        for inv in [30.0, 8.0, 3.0, 2.0] {
            acc = Cplx::new(T::c(1.0 / inv), T::zero()) - y * acc;
        }
        -acc
    } else {
        let e = (-y).exp();
        (e * (y + Cplx::new(T::one(), T::zero())) - Cplx::new(T::one(), T::zero())) / (y * y)
    }
}

/// Real-argument conveniences.
pub fn g_plus_real<T: Real>(y: T) -> T {
    g_plus(Cplx::new(y, T::zero())).re
}
pub fn g_minus_real<T: Real>(y: T) -> T {
    g_minus(Cplx::new(y, T::zero())).re
}
pub fn g_plus_prime_real<T: Real>(y: T) -> T {
    g_plus_prime(Cplx::new(y, T::zero())).re
}
pub fn g_minus_prime_real<T: Real>(y: T) -> T {
    g_minus_prime(Cplx::new(y, T::zero())).re
}

/// Precomputed spectral constants bound to a validated parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlepContext<T> {
    params: ModelParams<T>,
    x_star: T,
    kappa_star_sq: T,
    zeta0_star: T,
}

impl<T: Real> SlepContext<T> {
    pub fn new(params: &ModelParams<T>) -> Self {
        let x_star = pulse::solve_layer_position(params);
        Self::with_layer_position(params, x_star)
    }

    pub fn with_layer_position(params: &ModelParams<T>, x_star: T) -> Self {
        // kappa*^2 = 3 sqrt(2)/4: inverse squared L2 norm of the layer slope
        let kappa_star_sq = T::c(0.75) * T::c(2.0).sqrt();
        let two = T::c(2.0);
        let zeta0_star = two
            * kappa_star_sq
            * (params.alpha() * (T::one() - (-two * x_star).exp())
                + params.beta() / params.d() * (T::one() - (-two * x_star / params.d()).exp()));
        Self {
            params: *params,
            x_star,
            kappa_star_sq,
            zeta0_star,
        }
    }

    #[inline]
    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }
    #[inline]
    pub fn x_star(&self) -> T {
        self.x_star
    }
    /// `kappa*^2 = 3 sqrt(2)/4`.
    #[inline]
    pub fn kappa_star_sq(&self) -> T {
        self.kappa_star_sq
    }
    /// Scaled principal layer eigenvalue coefficient `zeta0* > 0`.
    #[inline]
    pub fn zeta0_star(&self) -> T {
        self.zeta0_star
    }

    /// Green arguments `2 omega_q x*`, `2 omega_r x*` for a scaled eigenvalue,
    /// on the principal square-root branch. Errors when the argument leaves
    /// the region where the Green functions decay.
    fn green_args(&self, lambda: Cplx<T>, tau_hat: T, theta_hat: T) -> Result<(Cplx<T>, Cplx<T>)> {
        let one = Cplx::new(T::one(), T::zero());
        let zq = one + lambda * tau_hat;
        let zr = one + lambda * theta_hat;
        for z in [zq, zr] {
            if z.re <= T::zero() {
                return Err(Error::BranchViolation { re: z.re.f64() });
            }
        }
        let two_xs = T::c(2.0) * self.x_star;
        Ok((zq.sqrt() * two_xs, zr.sqrt() * two_xs / self.params.d()))
    }
}

/// Static delta inner products `<K delta, delta>` of the Green operators at
/// zero frequency, in closed form: `cosh`/`sinh` at `x*` (or `x*/D`,
/// `D`-scaled) times the decaying exponential.
pub fn green_weight_static<T: Real>(mode: Mode, component: Component, ctx: &SlepContext<T>) -> T {
    let (scale, arg) = match component {
        Component::Q => (T::one(), ctx.x_star),
        Component::R => (ctx.params.d(), ctx.x_star / ctx.params.d()),
    };
    let hyp = match mode {
        Mode::Even => arg.cosh(),
        Mode::Odd => arg.sinh(),
    };
    hyp * (-arg).exp() / scale
}

/// Frequency-dependent delta inner products `<K^ delta, delta>`:
/// `x* g_{+-}(2 omega_q x*)` resp. `(x*/D^2) g_{+-}(2 omega_r x*)`.
pub fn green_weight_dynamic<T: Real>(
    mode: Mode,
    component: Component,
    lambda: Cplx<T>,
    tau_hat: T,
    theta_hat: T,
    ctx: &SlepContext<T>,
) -> Result<Cplx<T>> {
    let (yq, yr) = ctx.green_args(lambda, tau_hat, theta_hat)?;
    let g = match mode {
        Mode::Even => g_plus,
        Mode::Odd => g_minus,
    };
    Ok(match component {
        Component::Q => g(yq) * ctx.x_star,
        Component::R => g(yr) * (ctx.x_star / (ctx.params.d() * ctx.params.d())),
    })
}

/// Odd-mode SLEP function; its roots are the scaled drift-side eigenvalues.
/// `G_od(0) = 0` identically (translation).
pub fn g_od<T: Real>(
    lambda: Cplx<T>,
    tau_hat: T,
    theta_hat: T,
    ctx: &SlepContext<T>,
) -> Result<Cplx<T>> {
    let (yq, yr) = ctx.green_args(lambda, tau_hat, theta_hat)?;
    let p = &ctx.params;
    let coupling = g_minus(yq) * (p.alpha() * ctx.x_star)
        + g_minus(yr) * (p.beta() * ctx.x_star / (p.d() * p.d()));
    Ok(lambda - Cplx::new(ctx.zeta0_star, T::zero()) + coupling * (T::c(4.0) * ctx.kappa_star_sq))
}

/// Even-mode SLEP function; its roots are the scaled Hopf-side eigenvalues.
pub fn g_ev<T: Real>(
    lambda: Cplx<T>,
    tau_hat: T,
    theta_hat: T,
    ctx: &SlepContext<T>,
) -> Result<Cplx<T>> {
    let (yq, yr) = ctx.green_args(lambda, tau_hat, theta_hat)?;
    let p = &ctx.params;
    let coupling = g_plus(yq) * (p.alpha() * ctx.x_star)
        + g_plus(yr) * (p.beta() * ctx.x_star / (p.d() * p.d()));
    Ok(lambda - Cplx::new(ctx.zeta0_star, T::zero()) + coupling * (T::c(4.0) * ctx.kappa_star_sq))
}

/// Analytic derivative of [`g_ev`] in the scaled eigenvalue, for Newton
/// correctors.
pub fn g_ev_dlambda<T: Real>(
    lambda: Cplx<T>,
    tau_hat: T,
    theta_hat: T,
    ctx: &SlepContext<T>,
) -> Result<Cplx<T>> {
    let (yq, yr) = ctx.green_args(lambda, tau_hat, theta_hat)?;
    let p = &ctx.params;
    let one = Cplx::new(T::one(), T::zero());
    let xs3 = ctx.x_star * ctx.x_star * ctx.x_star;
    // d y_q / d lambda = 2 x*^2 tau_hat / y_q, and the D-scaled analogue
    let d4 = p.d() * p.d() * p.d() * p.d();
    let term_q = g_plus_prime(yq) / yq * (p.alpha() * tau_hat * T::c(2.0) * xs3);
    let term_r = g_plus_prime(yr) / yr * (p.beta() * theta_hat * T::c(2.0) * xs3 / d4);
    Ok(one + (term_q + term_r) * (T::c(4.0) * ctx.kappa_star_sq))
}

/// Same derivative for [`g_od`].
pub fn g_od_dlambda<T: Real>(
    lambda: Cplx<T>,
    tau_hat: T,
    theta_hat: T,
    ctx: &SlepContext<T>,
) -> Result<Cplx<T>> {
    let (yq, yr) = ctx.green_args(lambda, tau_hat, theta_hat)?;
    let p = &ctx.params;
    let one = Cplx::new(T::one(), T::zero());
    let xs3 = ctx.x_star * ctx.x_star * ctx.x_star;
    let d4 = p.d() * p.d() * p.d() * p.d();
    let term_q = g_minus_prime(yq) / yq * (p.alpha() * tau_hat * T::c(2.0) * xs3);
    let term_r = g_minus_prime(yr) / yr * (p.beta() * theta_hat * T::c(2.0) * xs3 / d4);
    Ok(one + (term_q + term_r) * (T::c(4.0) * ctx.kappa_star_sq))
}

/// Slope of `G_od` at the origin, `1 - C1 tau_hat - C2 theta_hat` with the
/// drift-line constants `C1`, `C2`.
pub fn g_od_slope_at_zero<T: Real>(tau_hat: T, theta_hat: T, ctx: &SlepContext<T>) -> T {
    let p = &ctx.params;
    let two_xs = T::c(2.0) * ctx.x_star;
    let k = T::c(4.0) * ctx.kappa_star_sq * ctx.x_star * ctx.x_star;
    T::one()
        + k * (p.alpha() * g_minus_prime_real(two_xs) * tau_hat
            + p.beta() / (p.d() * p.d() * p.d()) * g_minus_prime_real(two_xs / p.d()) * theta_hat)
}

/// Second derivative of `G_od` at the origin (central finite difference).
pub fn g_od_curvature_at_zero<T: Real>(tau_hat: T, theta_hat: T, ctx: &SlepContext<T>) -> T {
    let h = T::c(1e-4);
    let at = |l: T| {
        g_od(Cplx::new(l, T::zero()), tau_hat, theta_hat, ctx)
            .expect("real lambda near 0 stays on branch")
            .re
    };
    (at(h) - T::c(2.0) * at(T::zero()) + at(-h)) / (h * h)
}

/// Real/imaginary decomposition `g_+(X + iY) = R + iI` along rays
/// `X + iY = d sqrt(1 + i tan 2z)`:
///
/// ```text
/// X = d cos z / sqrt(cos 2z),   Y = d sin z / sqrt(cos 2z),
/// R =  sqrt(cos 2z)/d [cos z + e^{-X} cos(Y + z)],
/// I = -sqrt(cos 2z)/d [sin z + e^{-X} sin(Y + z)].
/// ```
///
/// Defined for `0 <= z < pi/4`, `d > 0`; returns `(R, I, X, Y)`.
pub fn ri_functions<T: Real>(z: T, d: T) -> Result<(T, T, T, T)> {
    let quarter_pi = T::c(std::f64::consts::FRAC_PI_4);
    if z < T::zero() || z >= quarter_pi || !(d > T::zero()) {
        return Err(Error::DomainError {
            z: z.f64(),
            d: d.f64(),
        });
    }
    let c2 = (T::c(2.0) * z).cos();
    let root = c2.sqrt();
    let x = d * z.cos() / root;
    let y = d * z.sin() / root;
    let e = (-x).exp();
    let r = root / d * (z.cos() + e * (y + z).cos());
    let i = -(root / d) * (z.sin() + e * (y + z).sin());
    Ok((r, i, x, y))
}

/// Weighted sum of `R` over both inhibitor channels at polar angle `psi`,
/// as a function of `eta = s xi`. Strictly decreasing in `eta`; the Hopf
/// condition is `r_hat(eta) = zeta0*`.
pub fn r_hat<T: Real>(eta: T, psi: T, ctx: &SlepContext<T>) -> T {
    let (rq, _, _, _) = ri_functions(
        (eta * psi.cos()).atan() * T::c(0.5),
        T::c(2.0) * ctx.x_star,
    )
    .expect("half arctan stays below pi/4");
    let (rr, _, _, _) = ri_functions(
        (eta * psi.sin()).atan() * T::c(0.5),
        T::c(2.0) * ctx.x_star / ctx.params.d(),
    )
    .expect("half arctan stays below pi/4");
    let p = &ctx.params;
    T::c(4.0)
        * ctx.kappa_star_sq
        * (p.alpha() * ctx.x_star * rq + p.beta() * ctx.x_star / (p.d() * p.d()) * rr)
}

/// Companion imaginary-part sum: the Hopf frequency is `xi = -i_hat(eta*)`.
pub fn i_hat<T: Real>(eta: T, psi: T, ctx: &SlepContext<T>) -> T {
    let (_, iq, _, _) = ri_functions(
        (eta * psi.cos()).atan() * T::c(0.5),
        T::c(2.0) * ctx.x_star,
    )
    .expect("half arctan stays below pi/4");
    let (_, ir, _, _) = ri_functions(
        (eta * psi.sin()).atan() * T::c(0.5),
        T::c(2.0) * ctx.x_star / ctx.params.d(),
    )
    .expect("half arctan stays below pi/4");
    let p = &ctx.params;
    T::c(4.0)
        * ctx.kappa_star_sq
        * (p.alpha() * ctx.x_star * iq + p.beta() * ctx.x_star / (p.d() * p.d()) * ir)
}

/// Residuals of the two adjoint derivative identities at the origin:
///
/// ```text
/// d/dlambda <K^_q^{o} delta, delta> |_0 = -tau_hat0 <(K_q^{o})^2 delta, delta>
/// ```
///
/// and the `r`-analogue. The left side is a centered finite difference of
/// the closed-form weight, the right side applies the finite-difference
/// Green solver twice; both residuals vanish to discretization accuracy.
pub fn adjoint_identity_check<T: Real>(
    tau_hat0: T,
    theta_hat0: T,
    ctx: &SlepContext<T>,
) -> Result<(T, T)> {
    let h = T::c(1e-6);
    let fd = |component: Component| -> Result<T> {
        let at = |l: T| -> Result<T> {
            Ok(green_weight_dynamic(
                Mode::Odd,
                component,
                Cplx::new(l, T::zero()),
                tau_hat0,
                theta_hat0,
                ctx,
            )?
            .re)
        };
        Ok((at(h)? - at(-h)?) / (T::c(2.0) * h))
    };
    let length = T::c(30.0) * ctx.params.d().max(T::one());
    let squared = |a: T| {
        // Richardson-extrapolated double solve
        let coarse = bvp::green_point_value_squared(
            a,
            T::one(),
            ctx.x_star,
            length,
            256,
            LeftBc::Dirichlet,
        );
        let fine = bvp::green_point_value_squared(
            a,
            T::one(),
            ctx.x_star,
            length,
            512,
            LeftBc::Dirichlet,
        );
        (T::c(4.0) * fine - coarse) / T::c(3.0)
    };
    let sq_q = squared(T::one());
    let sq_r = squared(ctx.params.d() * ctx.params.d());
    let res_q = (fd(Component::Q)? + tau_hat0 * sq_q).abs();
    let res_r = (fd(Component::R)? + theta_hat0 * sq_r).abs();
    Ok((res_q, res_r))
}

/// Squared-operator odd weights `<(K_q^{o})^2 delta, delta>` and the
/// `r`-analogue, by the double Green solve. Exposed for the drift-point and
/// multiplicity certificates.
pub fn squared_odd_weights<T: Real>(ctx: &SlepContext<T>) -> (T, T) {
    let d = ctx.params.d();
    let length = T::c(30.0) * d.max(T::one());
    let richardson = |a: T| {
        let coarse =
            bvp::green_point_value_squared(a, T::one(), ctx.x_star, length, 256, LeftBc::Dirichlet);
        let fine =
            bvp::green_point_value_squared(a, T::one(), ctx.x_star, length, 512, LeftBc::Dirichlet);
        (T::c(4.0) * fine - coarse) / T::c(3.0)
    };
    (richardson(T::one()), richardson(d * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;

    fn ctx() -> SlepContext<f64> {
        SlepContext::new(&ModelParams::new(1.0, 2.0, 2.0, 2.0, 0.012).unwrap())
    }

    #[test]
    fn g_minus_series_limit() {
        assert!((g_minus_real(1e-8f64) - 1.0).abs() < 1e-8);
        assert!((g_minus_real(1e-5f64) - (1.0 - 0.5e-5)).abs() < 1e-10);
        // series and direct form agree at the switch point
        let direct = (1.0 - (-2e-4f64).exp()) / 2e-4;
        assert!((g_minus_real(2e-4f64) - direct).abs() < 1e-14);
    }

    #[test]
    fn g_functions_monotone_convex_on_log_grid() {
        let mut y = 1e-2f64;
        while y < 1e2 {
            let h = y * 1e-4;
            for g in [g_plus_real::<f64>, g_minus_real::<f64>] {
                let d1 = (g(y + h) - g(y - h)) / (2.0 * h);
                let d2 = (g(y + h) - 2.0 * g(y) + g(y - h)) / (h * h);
                assert!(d1 < 0.0, "g' at {y}");
                assert!(d2 > 0.0, "g'' at {y}");
            }
            y *= 1.6;
        }
    }

    #[test]
    fn g_prime_matches_finite_difference() {
        for y in [0.3f64, 1.0, 4.0] {
            let h = 1e-6;
            let fd_p = (g_plus_real(y + h) - g_plus_real(y - h)) / (2.0 * h);
            let fd_m = (g_minus_real(y + h) - g_minus_real(y - h)) / (2.0 * h);
            assert!((fd_p - g_plus_prime_real(y)).abs() < 1e-8);
            assert!((fd_m - g_minus_prime_real(y)).abs() < 1e-8);
        }
    }

    #[test]
    fn zeta0_matches_odd_weight_identity() {
        let c = ctx();
        let lhs = c.zeta0_star();
        let rhs = 4.0
            * c.kappa_star_sq()
            * (c.params().alpha() * green_weight_static(Mode::Odd, Component::Q, &c)
                + c.params().beta() * green_weight_static(Mode::Odd, Component::R, &c));
        assert!((lhs - rhs).abs() < 1e-12);
        assert!(lhs > 0.0);
    }

    #[test]
    fn static_weights_special_values() {
        let c = ctx();
        let xs = c.x_star();
        assert!(
            (green_weight_static(Mode::Even, Component::Q, &c) - xs.cosh() * (-xs).exp()).abs()
                < 1e-15
        );
        // g_+ route agrees: x* g_+(2x*) = cosh(x*) e^{-x*}
        assert!(
            (xs * g_plus_real(2.0 * xs) - green_weight_static(Mode::Even, Component::Q, &c)).abs()
                < 1e-14
        );
    }

    #[test]
    fn dynamic_weight_reduces_to_static_at_zero() {
        let c = ctx();
        for (mode, comp) in [
            (Mode::Even, Component::Q),
            (Mode::Even, Component::R),
            (Mode::Odd, Component::Q),
            (Mode::Odd, Component::R),
        ] {
            let dynamic =
                green_weight_dynamic(mode, comp, Cplx::new(0.0, 0.0), 3.0, 2.0, &c).unwrap();
            let static_ = green_weight_static(mode, comp, &c);
            assert!((dynamic.re - static_).abs() < 1e-12, "{mode:?} {comp:?}");
            assert!(dynamic.im.abs() < 1e-15);
        }
    }

    #[test]
    fn branch_violation_detected() {
        let c = ctx();
        let bad = Cplx::new(-2.0, 0.0); // 1 + tau_hat * lambda < 0
        assert!(matches!(
            g_ev(bad, 1.0, 0.1, &c),
            Err(Error::BranchViolation { .. })
        ));
    }

    #[test]
    fn god_vanishes_at_origin_and_slope_formula_agrees() {
        let c = ctx();
        for (t, h) in [(1.0, 1.0), (3.0, 2.0), (0.2, 11.0)] {
            let v = g_od(Cplx::new(0.0, 0.0), t, h, &c).unwrap();
            assert!(v.norm() < 1e-14);
            let slope = g_od_slope_at_zero(t, h, &c);
            let fd = (g_od(Cplx::new(1e-6, 0.0), t, h, &c).unwrap().re
                - g_od(Cplx::new(-1e-6, 0.0), t, h, &c).unwrap().re)
                / 2e-6;
            assert!((slope - fd).abs() < 1e-6 * slope.abs().max(1.0));
        }
    }

    #[test]
    fn god_curvature_positive() {
        let c = ctx();
        assert!(g_od_curvature_at_zero(3.0, 2.0, &c) > 0.0);
        assert!(g_od_curvature_at_zero(0.5, 7.0, &c) > 0.0);
    }

    #[test]
    fn gev_at_origin_positive_closed_form() {
        let c = ctx();
        let p = c.params();
        let expect = 4.0
            * c.kappa_star_sq()
            * (p.alpha() * (-2.0 * c.x_star()).exp()
                + p.beta() / p.d() * (-2.0 * c.x_star() / p.d()).exp());
        let v = g_ev(Cplx::new(0.0, 0.0), 3.0, 2.0, &c).unwrap();
        assert!((v.re - expect).abs() < 1e-13);
        assert!(expect > 0.0);
    }

    #[test]
    fn gev_conjugate_symmetry_and_linear_growth() {
        let c = ctx();
        let z = Cplx::new(0.4, 1.3);
        let a = g_ev(z, 3.0, 2.0, &c).unwrap();
        let b = g_ev(z.conj(), 3.0, 2.0, &c).unwrap();
        assert!((a.conj() - b).norm() < 1e-13);
        let big = g_ev(Cplx::new(1e8, 0.0), 3.0, 2.0, &c).unwrap();
        assert!((big.re / 1e8 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn gev_derivative_matches_finite_difference() {
        let c = ctx();
        let z = Cplx::new(0.1, 0.9);
        let d = g_ev_dlambda(z, 3.0, 2.0, &c).unwrap();
        let h = 1e-6;
        let fd = (g_ev(z + Cplx::new(h, 0.0), 3.0, 2.0, &c).unwrap()
            - g_ev(z - Cplx::new(h, 0.0), 3.0, 2.0, &c).unwrap())
            / (2.0 * h);
        assert!((d - fd).norm() < 1e-7);
    }

    #[test]
    fn ri_at_zero_angle_reduces_to_g_plus() {
        for d in [0.3f64, 0.62381, 2.0] {
            let (r, i, x, y) = ri_functions(0.0, d).unwrap();
            assert!((r - g_plus_real(d)).abs() < 1e-14);
            assert_eq!(i, 0.0);
            assert_eq!((x, y), (d, 0.0));
        }
    }

    #[test]
    fn ri_identity_with_complex_g_plus() {
        for z in [0.1f64, 0.4, 0.7] {
            for d in [0.5f64, 1.0, 3.0] {
                let (r, i, x, y) = ri_functions(z, d).unwrap();
                let g = g_plus(Cplx::new(x, y));
                assert!((g.re - r).abs() < 1e-12, "z={z} d={d}");
                assert!((g.im - i).abs() < 1e-12);
                assert!((x * x - y * y - d * d).abs() < 1e-10 * d * d);
            }
        }
    }

    #[test]
    fn ri_vanishes_at_quarter_pi() {
        let z = std::f64::consts::FRAC_PI_4 - 1e-6;
        let (r, i, _, _) = ri_functions(z, 1.0).unwrap();
        assert!(r.abs() < 1e-2 && i.abs() < 1e-2);
        assert!(ri_functions(std::f64::consts::FRAC_PI_4, 1.0).is_err());
        assert!(ri_functions(-0.1, 1.0).is_err());
        assert!(ri_functions(0.1, 0.0).is_err());
    }

    #[test]
    fn adjoint_identities_hold() {
        let c = ctx();
        let (rq, rr) = adjoint_identity_check(1.0, 1.0, &c).unwrap();
        assert!(rq < 1e-6, "q residual {rq}");
        assert!(rr < 1e-6, "r residual {rr}");
    }

    #[test]
    fn squared_weights_match_derivative_closed_form() {
        let c = ctx();
        let (sq, sr) = squared_odd_weights(&c);
        let xs = c.x_star();
        let d = c.params().d();
        let exact_q = -xs * xs * g_minus_prime_real(2.0 * xs);
        let exact_r = -xs * xs / (d * d * d) * g_minus_prime_real(2.0 * xs / d);
        assert!((sq - exact_q).abs() / exact_q < 1e-6);
        assert!((sr - exact_r).abs() / exact_r < 1e-6);
    }
}
