//! Direct discretization of the linearized operator about the pulse, used as
//! a global numerical cross-check on every SLEP prediction.
//!
//! The full-line problem on `[-L, L]` with Neumann ends splits into an even
//! and an odd half-line problem on `[0, L]` (Neumann resp. Dirichlet at the
//! origin); solving the two halves at `n_grid` intervals each doubles the
//! effective resolution and tags every eigenvalue with its parity, which is
//! what separates the translation mode (odd) from the amplitude mode (even).
//!
//! The composite pulse is first polished to a steady state of the
//! *discretized* stationary system by a damped Newton iteration, so the
//! computed spectrum is that of an exact discrete equilibrium; without the
//! polish the translation eigenvalue would be buried in the asymptotic
//! construction error.

use super::banded::{BandedLu, BandedMatrix};
use super::arnoldi;
use crate::error::{Error, Result};
use crate::params::{ModelParams, TimeScaleRegime};
use crate::pulse::PulseSolution;
use crate::scalar::{Cplx, Real};
use nalgebra::RealField;

/// Parity of a half-line eigenmode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// One computed eigenvalue of the discretized linearization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteEig<T> {
    pub lambda: Cplx<T>,
    pub parity: Parity,
}

/// Steady state of the discrete stationary system on the half grid.
pub struct SteadyState<T> {
    pub l: T,
    pub h: T,
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub w: Vec<T>,
    /// Final max-norm residual of the discrete stationary system.
    pub residual: T,
}

fn laplacian_rows<T: Real>(f: &[T], h: T, coef: T, out: &mut [T]) {
    let n = f.len() - 1;
    let ih2 = coef / (h * h);
    out[0] = (f[1] - f[0]) * T::c(2.0) * ih2;
    for i in 1..n {
        out[i] = (f[i - 1] - T::c(2.0) * f[i] + f[i + 1]) * ih2;
    }
    out[n] = (f[n - 1] - f[n]) * T::c(2.0) * ih2;
}

/// Assembles the banded linearization matrix for one parity.
///
/// Unknowns are interleaved `(p_i, q_i, r_i)` over the half-grid nodes
/// (node 0 dropped for the odd parity), so the bandwidth is 3 on both
/// sides. Returns the matrix and the diagonal of the time-scale weight.
fn assemble<T: Real>(
    u: &[T],
    h: T,
    parity: Parity,
    tau: T,
    theta: T,
    p: &ModelParams<T>,
) -> (BandedMatrix<T>, Vec<T>) {
    let n = u.len() - 1;
    let first = match parity {
        Parity::Even => 0usize,
        Parity::Odd => 1usize,
    };
    let nn = 3 * (n + 1 - first);
    let mut a = BandedMatrix::zeros(nn, 3, 3);
    let mut bdiag = vec![T::zero(); nn];
    let ih2 = T::one() / (h * h);
    let eps = p.epsilon();
    let d2 = p.d() * p.d();
    let idx = |i: usize, c: usize| 3 * (i - first) + c;
    for i in first..=n {
        let fp = T::one() - T::c(3.0) * u[i] * u[i];
        // (component, diffusion coefficient, zeroth-order diagonal, weight)
        for (c, coef, diag0, wgt) in [
            (0usize, eps * eps, fp, T::one()),
            (1, T::one(), -T::one(), tau),
            (2, d2, -T::one(), theta),
        ] {
            let row = idx(i, c);
            let diag = -T::c(2.0) * coef * ih2 + diag0;
            if i == 0 {
                a.set(row, idx(1, c), T::c(2.0) * coef * ih2);
            } else if i == n {
                a.set(row, idx(n - 1, c), T::c(2.0) * coef * ih2);
            } else {
                // for the odd parity the dropped origin node carries the
                // value 0, so its coupling simply vanishes
                if i - 1 >= first {
                    a.set(row, idx(i - 1, c), coef * ih2);
                }
                a.set(row, idx(i + 1, c), coef * ih2);
            }
            a.set(row, idx(i, c), diag);
            bdiag[row] = wgt;
        }
        a.set(idx(i, 0), idx(i, 1), -eps * p.alpha());
        a.set(idx(i, 0), idx(i, 2), -eps * p.beta());
        a.set(idx(i, 1), idx(i, 0), T::one());
        a.set(idx(i, 2), idx(i, 0), T::one());
    }
    (a, bdiag)
}

/// Residual of the discrete stationary system (even half-line grid).
fn stationary_residual<T: Real>(
    u: &[T],
    v: &[T],
    w: &[T],
    h: T,
    p: &ModelParams<T>,
    out: &mut [T],
) {
    let n = u.len() - 1;
    let eps = p.epsilon();
    let mut lap = vec![T::zero(); n + 1];
    laplacian_rows(u, h, eps * eps, &mut lap);
    for i in 0..=n {
        out[3 * i] = lap[i] + u[i] - u[i] * u[i] * u[i]
            - eps * (p.alpha() * v[i] + p.beta() * w[i] + p.gamma());
    }
    laplacian_rows(v, h, T::one(), &mut lap);
    for i in 0..=n {
        out[3 * i + 1] = lap[i] + u[i] - v[i];
    }
    laplacian_rows(w, h, p.d() * p.d(), &mut lap);
    for i in 0..=n {
        out[3 * i + 2] = lap[i] + u[i] - w[i];
    }
}

/// Polishes the composite pulse to a steady state of the discrete system on
/// `[0, L]` with Neumann ends, by damped Newton iteration.
pub fn refine_steady_state<T: Real>(
    pulse: &PulseSolution<T>,
    l: T,
    n_grid: usize,
) -> Result<SteadyState<T>> {
    let p = *pulse.params();
    let n = n_grid;
    let h = l / T::from_usize(n).unwrap();
    let mut u: Vec<T> = (0..=n)
        .map(|i| pulse.u(h * T::from_usize(i).unwrap()))
        .collect();
    let mut v: Vec<T> = (0..=n)
        .map(|i| pulse.v(h * T::from_usize(i).unwrap()))
        .collect();
    let mut w: Vec<T> = (0..=n)
        .map(|i| pulse.w(h * T::from_usize(i).unwrap()))
        .collect();

    let nn = 3 * (n + 1);
    let mut res = vec![T::zero(); nn];
    let mut best = T::infinity();
    for _iter in 0..60 {
        stationary_residual(&u, &v, &w, h, &p, &mut res);
        let rnorm = res.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        if rnorm < T::c(1e-11) || (rnorm >= best * T::c(0.999) && rnorm < T::c(1e-8)) {
            return Ok(SteadyState {
                l,
                h,
                u,
                v,
                w,
                residual: rnorm,
            });
        }
        best = best.min(rnorm);
        // Newton direction: the Jacobian is the even-parity linearization
        let (a, _) = assemble(&u, h, Parity::Even, T::one(), T::one(), &p);
        let lu = a.factor()?;
        let mut delta = res.clone();
        for x in delta.iter_mut() {
            *x = -*x;
        }
        lu.solve(&mut delta);
        // backtracking on the residual norm
        let mut t = T::one();
        let mut accepted = false;
        for _bt in 0..10 {
            let ut: Vec<T> = (0..=n).map(|i| u[i] + t * delta[3 * i]).collect();
            let vt: Vec<T> = (0..=n).map(|i| v[i] + t * delta[3 * i + 1]).collect();
            let wt: Vec<T> = (0..=n).map(|i| w[i] + t * delta[3 * i + 2]).collect();
            stationary_residual(&ut, &vt, &wt, h, &p, &mut res);
            let rt = res.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
            if rt < rnorm * (T::one() - t * T::c(0.25)) || rt < T::c(1e-12) {
                u = ut;
                v = vt;
                w = wt;
                accepted = true;
                break;
            }
            t = t * T::c(0.5);
        }
        if !accepted {
            // take the tiny step anyway; near roundoff floor this terminates
            for i in 0..=n {
                u[i] = u[i] + t * delta[3 * i];
                v[i] = v[i] + t * delta[3 * i + 1];
                w[i] = w[i] + t * delta[3 * i + 2];
            }
        }
    }
    stationary_residual(&u, &v, &w, h, &p, &mut res);
    let rnorm = res.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    if rnorm < T::c(1e-8) {
        Ok(SteadyState {
            l,
            h,
            u,
            v,
            w,
            residual: rnorm,
        })
    } else {
        Err(Error::NoConvergence(60))
    }
}

/// Eigenvalues of smallest magnitude of the discretized generalized problem
/// on `[-L, L]` (assembled as its even/odd halves), shift-inverted about 0.
///
/// `n_grid` is the interval count per half line; spacing above `eps/4` is
/// rejected since the layer would be unresolved.
pub fn discrete_linearization_eigs<T>(
    pulse: &PulseSolution<T>,
    regime: &TimeScaleRegime<T>,
    l: T,
    n_grid: usize,
    n_eigs: usize,
) -> Result<Vec<DiscreteEig<T>>>
where
    T: Real + RealField + Copy,
{
    let p = pulse.params();
    let h = l / T::from_usize(n_grid).unwrap();
    let limit = p.epsilon() / T::c(4.0);
    if h > limit * (T::one() + T::c(1e-12)) {
        return Err(Error::ResolutionError {
            dx: h.f64(),
            limit: limit.f64(),
        });
    }
    let steady = refine_steady_state(pulse, l, n_grid)?;
    let (tau, theta) = regime.effective(p.epsilon());

    let mut out = Vec::with_capacity(2 * n_eigs);
    for parity in [Parity::Even, Parity::Odd] {
        let (a, bdiag) = assemble(&steady.u, h, parity, tau, theta, p);
        let nn = bdiag.len();
        let lu: BandedLu<T> = a.factor()?;
        let mut rhs = vec![T::zero(); nn];
        let krylov = (4 * n_eigs + 40).min(nn);
        let eigs = arnoldi::smallest_eigenvalues(
            |x: &[T], y: &mut [T]| {
                for i in 0..nn {
                    rhs[i] = bdiag[i] * x[i];
                }
                y.copy_from_slice(&rhs);
                lu.solve(y);
            },
            nn,
            krylov,
            n_eigs,
        );
        out.extend(eigs.into_iter().map(|lambda| DiscreteEig { lambda, parity }));
    }
    out.sort_by(|a, b| {
        a.lambda
            .norm()
            .partial_cmp(&b.lambda.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out.truncate(n_eigs);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse;

    #[test]
    fn steady_state_refines_to_small_residual() {
        let p = ModelParams::new(1.0, 2.0, 2.0, 2.0, 0.03).unwrap();
        let layer = pulse::layer_data(&p);
        let grid: Vec<f64> = (0..=2048).map(|i| 7.0 * i as f64 / 2048.0).collect();
        let pl = pulse::composite_profile(&grid, layer, &p).unwrap();
        let st = refine_steady_state(&pl, 7.0, 2048).unwrap();
        assert!(st.residual < 1e-10, "residual {}", st.residual);
        // steady state stays close to the composite ansatz
        let mid = st.u[0];
        assert!((mid - 1.0).abs() < 0.1);
        assert!((st.u[2048] + 1.0).abs() < 0.1);
    }

    #[test]
    fn resolution_guard_triggers() {
        let p = ModelParams::new(1.0, 2.0, 2.0, 2.0, 0.012).unwrap();
        let layer = pulse::layer_data(&p);
        let grid: Vec<f64> = (0..=8192).map(|i| 7.0 * i as f64 / 8192.0).collect();
        let pl = pulse::composite_profile(&grid, layer, &p).unwrap();
        let regime = TimeScaleRegime::order1(1.0, 1.0).unwrap();
        // 512 intervals on [0, 7] gives h = 0.0137 > eps/4 = 0.003
        assert!(matches!(
            discrete_linearization_eigs(&pl, &regime, 7.0, 512, 4),
            Err(Error::ResolutionError { .. })
        ));
    }
}
