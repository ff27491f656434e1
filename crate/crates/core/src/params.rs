//! Model parameters, time-scale regimes and the far-field background state.
//!
//! The PDE under study is the one-activator/two-inhibitor system
//!
//! ```text
//! u_t     = eps^2 u_xx + u - u^3 - eps (alpha v + beta w + gamma)
//! tau v_t =       v_xx + u - v
//! theta w_t = D^2 w_xx + u - w
//! ```
//!
//! with `alpha, beta, gamma, D > 0` and `0 < eps << 1`. Everything downstream
//! (pulse construction, SLEP stability, simulation) consumes the validated
//! [`ModelParams`] defined here.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Threshold above which the asymptotic expansions are considered degraded.
/// Values above it are accepted but flagged, only nonpositive `eps` is
/// rejected.
pub const EPS_WARN_THRESHOLD: f64 = 0.1;

/// Validated PDE parameters.
///
/// Invariants: all five values are strictly positive and
/// `gamma < alpha + beta`, which is exactly the condition for a layer
/// position `x* > 0` to exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    alpha: T,
    beta: T,
    gamma: T,
    d: T,
    epsilon: T,
}

impl<T: Real> ModelParams<T> {
    /// Validates a raw parameter record.
    pub fn new(alpha: T, beta: T, gamma: T, d: T, epsilon: T) -> Result<Self> {
        for (name, value) in [
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("D", d),
            ("epsilon", epsilon),
        ] {
            if !(value > T::zero()) || !value.is_finite() {
                return Err(Error::NonPositiveParameter {
                    name,
                    value: value.f64(),
                });
            }
        }
        if gamma >= alpha + beta {
            return Err(Error::ExistenceViolation {
                gamma: gamma.f64(),
                sum: (alpha + beta).f64(),
            });
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            d,
            epsilon,
        })
    }

    /// Bypasses validation. Intended for tests that switch off couplings
    /// (e.g. the pure bistable limit `alpha = beta = gamma = 0`).
    #[doc(hidden)]
    pub fn unchecked(alpha: T, beta: T, gamma: T, d: T, epsilon: T) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            d,
            epsilon,
        }
    }

    #[inline]
    pub fn alpha(&self) -> T {
        self.alpha
    }
    #[inline]
    pub fn beta(&self) -> T {
        self.beta
    }
    #[inline]
    pub fn gamma(&self) -> T {
        self.gamma
    }
    /// Diffusion length of the second inhibitor.
    #[inline]
    pub fn d(&self) -> T {
        self.d
    }
    #[inline]
    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// True when `eps` exceeds [`EPS_WARN_THRESHOLD`]; the parameters stay
    /// usable but the asymptotic error terms are no longer small.
    pub fn asymptotics_degraded(&self) -> bool {
        self.epsilon > T::c(EPS_WARN_THRESHOLD)
    }

    /// Same parameters with a different `eps`.
    pub fn with_epsilon(&self, epsilon: T) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.gamma, self.d, epsilon)
    }
}

/// Relaxation-time regime of the two inhibitors.
///
/// The two regimes obey different scaled eigenvalue equations, so the stored
/// rates are never mixed implicitly; [`TimeScaleRegime::effective`] is the
/// only bridge to the bare `(tau, theta)` pair appearing in the PDE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeScaleRegime<T> {
    /// `tau`, `theta` independent of `eps`.
    Order1 { tau: T, theta: T },
    /// `tau = tau_hat / eps^2`, `theta = theta_hat / eps^2`.
    OrderEpsMinus2 { tau_hat: T, theta_hat: T },
}

impl<T: Real> TimeScaleRegime<T> {
    pub fn order1(tau: T, theta: T) -> Result<Self> {
        Self::check("tau", tau)?;
        Self::check("theta", theta)?;
        Ok(Self::Order1 { tau, theta })
    }

    pub fn order_eps_minus2(tau_hat: T, theta_hat: T) -> Result<Self> {
        Self::check("tau_hat", tau_hat)?;
        Self::check("theta_hat", theta_hat)?;
        Ok(Self::OrderEpsMinus2 { tau_hat, theta_hat })
    }

    fn check(name: &'static str, value: T) -> Result<()> {
        if !(value > T::zero()) || !value.is_finite() {
            return Err(Error::NonPositiveParameter {
                name,
                value: value.f64(),
            });
        }
        Ok(())
    }

    /// Bare `(tau, theta)` entering the PDE at the given `eps`.
    pub fn effective(&self, epsilon: T) -> (T, T) {
        match *self {
            Self::Order1 { tau, theta } => (tau, theta),
            Self::OrderEpsMinus2 { tau_hat, theta_hat } => {
                let e2 = epsilon * epsilon;
                (tau_hat / e2, theta_hat / e2)
            }
        }
    }

    /// Hatted rates `(tau_hat, theta_hat)` at the given `eps`.
    pub fn hatted(&self, epsilon: T) -> (T, T) {
        match *self {
            Self::Order1 { tau, theta } => {
                let e2 = epsilon * epsilon;
                (tau * e2, theta * e2)
            }
            Self::OrderEpsMinus2 { tau_hat, theta_hat } => (tau_hat, theta_hat),
        }
    }

    pub fn is_slow(&self) -> bool {
        matches!(self, Self::OrderEpsMinus2 { .. })
    }
}

/// Spatially constant far-field state `(u, v, w) = (ubar, ubar, ubar)`.
///
/// `ubar` is the root near `-1` of `u - u^3 - eps((alpha + beta) u + gamma)`,
/// i.e. the background the pulse decays to; `ubar = -1 + eps(alpha + beta -
/// gamma)/2 + O(eps^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundState<T> {
    pub u_bar: T,
    pub v_bar: T,
    pub w_bar: T,
}

/// Newton from `u = -1` for the background root; at most 50 iterations.
///
/// Failure to converge signals that `eps` is far too large for the
/// asymptotic regime.
pub fn background_state<T: Real>(p: &ModelParams<T>) -> Result<BackgroundState<T>> {
    let eps = p.epsilon();
    let ab = p.alpha() + p.beta();
    let residual = |u: T| u - u * u * u - eps * (ab * u + p.gamma());
    let slope = |u: T| T::one() - T::c(3.0) * u * u - eps * ab;
    let mut u = -T::one();
    for _ in 0..50 {
        let r = residual(u);
        if r.abs() < T::c(1e-14) {
            return Ok(BackgroundState {
                u_bar: u,
                v_bar: u,
                w_bar: u,
            });
        }
        let s = slope(u);
        if s == T::zero() {
            break;
        }
        u = u - r / s;
    }
    Err(Error::NoConvergence(50))
}
