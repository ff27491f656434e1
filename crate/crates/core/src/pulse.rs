//! Standing-pulse construction by matched asymptotic expansion.
//!
//! On the half line the pulse has an internal layer at `x = x*` where the
//! activator jumps between the two stable branches `+-1`. The layer position
//! solves
//!
//! ```text
//! alpha e^{-2x*} + beta e^{-2x*/D} = gamma,
//! ```
//!
//! the inhibitors take the values `v* = -e^{-2x*}`, `w* = -e^{-2x*/D}` there,
//! and C1-matching of the first-order outer terms fixes the inner shift `s`
//! and the first-order boundary values `b1`, `c1`. The composite profile
//! glues the outer solutions to the stretched layer profile
//! `-tanh(y / sqrt(2))` with a smooth cutoff.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::scalar::Real;

/// Which side of the layer an outer evaluation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The plateau `0 <= x <= x*` where `u -> +1`.
    Inside,
    /// The tail `x >= x*` where `u -> -1`.
    Outside,
}

/// Layer position, matching constants and the inner shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerData<T> {
    /// Layer position `x* > 0`.
    pub x_star: T,
    /// `v` at the layer, `-e^{-2x*}`.
    pub v_star: T,
    /// `w` at the layer, `-e^{-2x*/D}`.
    pub w_star: T,
    /// Zeroth-order boundary value of `v` (equals `v_star`).
    pub b0: T,
    /// Zeroth-order boundary value of `w` (equals `w_star`).
    pub c0: T,
    /// First-order boundary value of `v`.
    pub b1: T,
    /// First-order boundary value of `w`.
    pub c1: T,
    /// Inner coordinate shift fixing the layer profile phase.
    pub s: T,
    /// Activator value at the layer, `a0 = -tanh(s / sqrt(2))`.
    pub a0: T,
}

/// Unique positive root `x*` of `alpha e^{-2x} + beta e^{-2x/D} = gamma`.
///
/// `g(z) = alpha e^{-z} + beta e^{-z/D}` decreases strictly from
/// `alpha + beta` to `0`, so with `gamma < alpha + beta` a bisection bracket
/// obtained by doubling always exists; the root is refined to `1e-13` in
/// `x*`.
pub fn solve_layer_position<T: Real>(p: &ModelParams<T>) -> T {
    let g = |z: T| p.alpha() * (-z).exp() + p.beta() * (-z / p.d()).exp();
    let gamma = p.gamma();
    let mut hi = T::one();
    while g(hi) > gamma {
        hi = hi * T::c(2.0);
    }
    let mut lo = T::zero();
    for _ in 0..200 {
        let mid = (lo + hi) * T::c(0.5);
        if hi - lo < T::c(2e-13) {
            break;
        }
        if g(mid) > gamma {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // bisection ran on z = 2 x*
    (lo + hi) * T::c(0.25)
}

/// Inhibitor values at the layer and the zeroth-order boundary values.
pub fn layer_values<T: Real>(x_star: T, p: &ModelParams<T>) -> (T, T, T, T) {
    let v_star = -(-T::c(2.0) * x_star).exp();
    let w_star = -(-T::c(2.0) * x_star / p.d()).exp();
    (v_star, w_star, v_star, w_star)
}

/// Zeroth-order outer inhibitors `(V, W, V_x, W_x)` at `x`.
///
/// Inside: `V = (b0 - 1) cosh(x)/cosh(x*) + 1` and the `D`-scaled analogue;
/// outside: `V = (b0 + 1) e^{x* - x} - 1`. Errors when `x` lies on the wrong
/// side of the layer.
pub fn outer_inhibitors<T: Real>(
    x: T,
    side: Side,
    layer: &LayerData<T>,
    p: &ModelParams<T>,
) -> Result<(T, T, T, T)> {
    let xs = layer.x_star;
    let tol = T::c(1e-12) * xs.max(T::one());
    match side {
        Side::Inside => {
            if x < -tol || x > xs + tol {
                return Err(Error::DomainMismatch {
                    x: x.f64(),
                    x_star: xs.f64(),
                    side: "inside",
                });
            }
        }
        Side::Outside => {
            if x < xs - tol {
                return Err(Error::DomainMismatch {
                    x: x.f64(),
                    x_star: xs.f64(),
                    side: "outside",
                });
            }
        }
    }
    Ok(outer_inhibitors_unchecked(x, side, layer, p))
}

pub(crate) fn outer_inhibitors_unchecked<T: Real>(
    x: T,
    side: Side,
    layer: &LayerData<T>,
    p: &ModelParams<T>,
) -> (T, T, T, T) {
    let one = T::one();
    let xs = layer.x_star;
    let d = p.d();
    match side {
        Side::Inside => {
            let v = (layer.b0 - one) * x.cosh() / xs.cosh() + one;
            let vx = (layer.b0 - one) * x.sinh() / xs.cosh();
            let w = (layer.c0 - one) * (x / d).cosh() / (xs / d).cosh() + one;
            let wx = (layer.c0 - one) * (x / d).sinh() / (d * (xs / d).cosh());
            (v, w, vx, wx)
        }
        Side::Outside => {
            let ev = (xs - x).exp();
            let ew = ((xs - x) / d).exp();
            let v = (layer.b0 + one) * ev - one;
            let vx = -(layer.b0 + one) * ev;
            let w = (layer.c0 + one) * ew - one;
            let wx = -(layer.c0 + one) * ew / d;
            (v, w, vx, wx)
        }
    }
}

/// Stretched layer profile `u~(y) = -tanh(y / sqrt(2))` and its derivative.
pub fn inner_profile<T: Real>(y: T) -> (T, T) {
    let u = -(y / T::c(2.0).sqrt()).tanh();
    let uy = -(T::one() - u * u) / T::c(2.0).sqrt();
    (u, uy)
}

/// First-order matching constants `(b1, c1, s)`.
///
/// The three first-order matching relations are linear in `(b1, c1, s)`;
/// eliminating `b1` and `c1` leaves a single equation for `s` whose
/// coefficient `-2(alpha e^{-2x*} + (beta/D) e^{-2x*/D})` is strictly
/// negative. In terms of the zeroth-order boundary values `b0 = -e^{-2x*}`,
/// `c0 = -e^{-2x*/D}`:
///
/// ```text
/// s  = gamma / (2 (alpha b0 + (beta/D) c0))      (negative),
/// b1 = (b0 - 1) s + b0,
/// c1 = (c0 - 1) s / D + c0.
/// ```
pub fn first_order_constants<T: Real>(_x_star: T, b0: T, c0: T, p: &ModelParams<T>) -> (T, T, T) {
    let two = T::c(2.0);
    let s = p.gamma() / (two * (p.alpha() * b0 + p.beta() / p.d() * c0));
    let b1 = (b0 - T::one()) * s + b0;
    let c1 = (c0 - T::one()) * s / p.d() + c0;
    (b1, c1, s)
}

/// Builds the full [`LayerData`] for a validated parameter set.
pub fn layer_data<T: Real>(p: &ModelParams<T>) -> LayerData<T> {
    let x_star = solve_layer_position(p);
    let (v_star, w_star, b0, c0) = layer_values(x_star, p);
    let (b1, c1, s) = first_order_constants(x_star, b0, c0, p);
    let (a0, _) = inner_profile(s);
    LayerData {
        x_star,
        v_star,
        w_star,
        b0,
        c0,
        b1,
        c1,
        s,
        a0,
    }
}

/// Residuals of the five matching relations, in order: layer equation,
/// zeroth-order coupling, first-order elimination equation, `w`-matching,
/// `v`-matching. All vanish (to roundoff) for a consistent [`LayerData`].
pub fn matching_residuals<T: Real>(layer: &LayerData<T>, p: &ModelParams<T>) -> [T; 5] {
    let one = T::one();
    let two = T::c(2.0);
    let xs = layer.x_star;
    let d = p.d();
    let eq = (-two * xs).exp();
    let er = (-two * xs / d).exp();
    let r_layer = p.alpha() * eq + p.beta() * er - p.gamma();
    let r_zero = p.alpha() * layer.b0 + p.beta() * layer.c0 + p.gamma();
    // slopes of the matched zeroth-order outers at the layer
    let vx0 = eq - one;
    let wx0 = (er - one) / d;
    let r_first =
        p.alpha() * layer.b1 + p.beta() * layer.c1 - (p.alpha() * vx0 + p.beta() * wx0) * layer.s;
    let r_w = -(xs / d).exp() / (d * (xs / d).cosh()) * layer.c1 - two / (d * d) * layer.s
        - (-xs / d).exp() / (d * (xs / d).cosh());
    let r_v = -xs.exp() / xs.cosh() * layer.b1 - two * layer.s - (-xs).exp() / xs.cosh();
    [r_layer, r_zero, r_first, r_w, r_v]
}

/// Composite asymptotic pulse on the whole line (even in `x`).
#[derive(Debug, Clone)]
pub struct PulseSolution<T> {
    pub layer: LayerData<T>,
    params: ModelParams<T>,
    /// Cutoff is identically 1 within this distance of the layer...
    cutoff_inner: T,
    /// ...and identically 0 beyond this one.
    cutoff_outer: T,
    grid: Vec<T>,
}

impl<T: Real> PulseSolution<T> {
    /// Builds the evaluable composite profile without grid validation; use
    /// [`composite_profile`] when a sampling grid is to be checked against
    /// the layer width.
    pub fn assemble(layer: LayerData<T>, params: &ModelParams<T>) -> Self {
        Self {
            layer,
            params: *params,
            cutoff_inner: layer.x_star * T::c(0.25),
            cutoff_outer: layer.x_star * T::c(0.5),
            grid: Vec::new(),
        }
    }

    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    /// Grid the profile was validated on.
    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    fn cutoff(&self, r: T) -> T {
        if r <= self.cutoff_inner {
            T::one()
        } else if r >= self.cutoff_outer {
            T::zero()
        } else {
            let t = (r - self.cutoff_inner) / (self.cutoff_outer - self.cutoff_inner);
            let t2 = t * t;
            let t3 = t2 * t;
            // quintic smoothstep, C^2 at both ends
            T::one() - t3 * (T::c(10.0) - T::c(15.0) * t + T::c(6.0) * t2)
        }
    }

    fn side_of(&self, a: T) -> Side {
        if a < self.layer.x_star {
            Side::Inside
        } else {
            Side::Outside
        }
    }

    /// Activator profile; includes the first-order outer correction and the
    /// cutoff inner layer, evenly reflected to `x < 0`.
    pub fn u(&self, x: T) -> T {
        let a = x.abs();
        let side = self.side_of(a);
        let u0 = match side {
            Side::Inside => T::one(),
            Side::Outside => -T::one(),
        };
        let (v0, w0, _, _) = outer_inhibitors_unchecked(a, side, &self.layer, &self.params);
        let u1 = -(self.params.alpha() * v0 + self.params.beta() * w0 + self.params.gamma())
            * T::c(0.5);
        let omega = self.cutoff((a - self.layer.x_star).abs());
        let y = (a - self.layer.x_star) / self.params.epsilon() + self.layer.s;
        let (inner, _) = inner_profile(y);
        u0 + self.params.epsilon() * u1 + omega * (inner - u0)
    }

    /// First inhibitor (zeroth-order outer), evenly reflected.
    pub fn v(&self, x: T) -> T {
        let a = x.abs();
        outer_inhibitors_unchecked(a, self.side_of(a), &self.layer, &self.params).0
    }

    /// Second inhibitor (zeroth-order outer), evenly reflected.
    pub fn w(&self, x: T) -> T {
        let a = x.abs();
        outer_inhibitors_unchecked(a, self.side_of(a), &self.layer, &self.params).1
    }
}

/// Assembles the composite profile and validates the sampling grid.
///
/// The grid must be symmetric about 0 or live on a half line starting at 0,
/// and must resolve the inner layer: spacing greater than `eps/4` anywhere
/// within the cutoff support around `+-x*` is rejected.
pub fn composite_profile<T: Real>(
    grid: &[T],
    layer: LayerData<T>,
    p: &ModelParams<T>,
) -> Result<PulseSolution<T>> {
    let xs = layer.x_star;
    let limit = p.epsilon() / T::c(4.0);
    let near = |x: T| (x.abs() - xs).abs() <= xs * T::c(0.5);
    for pair in grid.windows(2) {
        let dx = pair[1] - pair[0];
        if (near(pair[0]) || near(pair[1])) && dx > limit {
            return Err(Error::GridTooCoarse {
                dx: dx.f64(),
                limit: limit.f64(),
            });
        }
    }
    Ok(PulseSolution {
        layer,
        params: *p,
        cutoff_inner: xs * T::c(0.25),
        cutoff_outer: xs * T::c(0.5),
        grid: grid.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::background_state;

    fn paper() -> ModelParams<f64> {
        ModelParams::new(1.0, 2.0, 2.0, 2.0, 0.012).unwrap()
    }

    #[test]
    fn layer_position_matches_closed_form_for_d2() {
        // with D = 2 the layer equation is quadratic in e^{-x*}:
        // e^{-2x*} + 2 e^{-x*} = 2  =>  e^{-x*} = sqrt(3) - 1
        let xs = solve_layer_position(&paper());
        let exact = -(3f64.sqrt() - 1.0).ln();
        assert!((xs - exact).abs() < 1e-12);
        assert!((xs - 0.311905).abs() < 1e-5);
    }

    #[test]
    fn layer_position_collapses_for_d1() {
        let p = ModelParams::new(1.0, 1.0, 1.0, 1.0, 0.012).unwrap();
        let xs = solve_layer_position(&p);
        assert!((xs - 0.5 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn layer_values_consistency() {
        let p = paper();
        let xs = solve_layer_position(&p);
        let (v, w, b0, c0) = layer_values(xs, &p);
        assert_eq!(v, b0);
        assert_eq!(w, c0);
        assert!((p.alpha() * v + p.beta() * w + p.gamma()).abs() < 1e-12);
        assert!((v - -(3f64.sqrt() - 1.0).powi(2)).abs() < 1e-12);
        assert!((w - -(3f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn layer_values_vanish_for_distant_layer() {
        let p = paper();
        let (v, w, _, _) = layer_values(40.0, &p);
        assert!(v.abs() < 1e-30 && w.abs() < 1e-8);
    }

    #[test]
    fn inner_profile_limits_and_oddness() {
        let (u0, uy0) = inner_profile(0.0f64);
        assert_eq!(u0, 0.0);
        assert!((uy0 + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((inner_profile(40.0f64).0 + 1.0).abs() < 1e-15);
        assert!((inner_profile(-40.0f64).0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matching_residuals_vanish() {
        let p = paper();
        let layer = layer_data(&p);
        for r in matching_residuals(&layer, &p) {
            assert!(r.abs() < 1e-12, "residual {r}");
        }
        assert!(layer.a0 > -1.0 && layer.a0 < 1.0);
    }

    #[test]
    fn first_order_constants_match_linear_solve() {
        // independent oracle: solve the same 3x3 linear system directly
        let p = paper();
        let layer = layer_data(&p);
        let xs = layer.x_star;
        let d = p.d();
        let (eq, er) = ((-2.0 * xs).exp(), (-2.0 * xs / d).exp());
        let vx0 = eq - 1.0;
        let wx0 = (er - 1.0) / d;
        let m = nalgebra::Matrix3::new(
            p.alpha(),
            p.beta(),
            -(p.alpha() * vx0 + p.beta() * wx0),
            0.0,
            -(xs / d).exp() / (d * (xs / d).cosh()),
            -2.0 / (d * d),
            -xs.exp() / xs.cosh(),
            0.0,
            -2.0,
        );
        let rhs = nalgebra::Vector3::new(
            0.0,
            (-xs / d).exp() / (d * (xs / d).cosh()),
            (-xs).exp() / xs.cosh(),
        );
        let sol = m.lu().solve(&rhs).unwrap();
        assert!((sol[0] - layer.b1).abs() < 1e-12);
        assert!((sol[1] - layer.c1).abs() < 1e-12);
        assert!((sol[2] - layer.s).abs() < 1e-12);
    }

    #[test]
    fn outer_boundary_and_neumann_conditions() {
        let p = paper();
        let layer = layer_data(&p);
        let xs = layer.x_star;
        let (v_in, w_in, _, _) = outer_inhibitors(xs, Side::Inside, &layer, &p).unwrap();
        let (v_out, w_out, _, _) = outer_inhibitors(xs, Side::Outside, &layer, &p).unwrap();
        assert!((v_in - layer.b0).abs() < 1e-14);
        assert!((v_out - layer.b0).abs() < 1e-14);
        assert!((w_in - layer.c0).abs() < 1e-14);
        assert!((w_out - layer.c0).abs() < 1e-14);
        let (_, _, vx0, wx0) = outer_inhibitors(0.0, Side::Inside, &layer, &p).unwrap();
        assert_eq!(vx0, 0.0);
        assert_eq!(wx0, 0.0);
        // one-sided slopes agree at the layer and match the closed forms
        let (_, _, vx_in, wx_in) = outer_inhibitors(xs, Side::Inside, &layer, &p).unwrap();
        let (_, _, vx_out, wx_out) = outer_inhibitors(xs, Side::Outside, &layer, &p).unwrap();
        assert!((vx_in - vx_out).abs() < 1e-12);
        assert!((wx_in - wx_out).abs() < 1e-12);
        assert!((vx_out - ((-2.0 * xs).exp() - 1.0)).abs() < 1e-12);
        assert!((wx_out - ((-2.0 * xs / p.d()).exp() - 1.0) / p.d()).abs() < 1e-12);
    }

    #[test]
    fn outer_rejects_wrong_side() {
        let p = paper();
        let layer = layer_data(&p);
        assert!(outer_inhibitors(layer.x_star + 0.5, Side::Inside, &layer, &p).is_err());
        assert!(outer_inhibitors(0.0, Side::Outside, &layer, &p).is_err());
    }

    fn fine_grid(_p: &ModelParams<f64>) -> Vec<f64> {
        let n = 16384usize;
        let l = 7.0;
        (0..=n).map(|i| -l + 2.0 * l * i as f64 / n as f64).collect()
    }

    #[test]
    fn composite_plateau_tail_and_layer_value() {
        let p = paper();
        let layer = layer_data(&p);
        let pulse = composite_profile(&fine_grid(&p), layer, &p).unwrap();
        assert!((pulse.u(0.0) - 1.0).abs() < 2.0 * p.epsilon());
        assert!((pulse.u(6.5) - background_state(&p).unwrap().u_bar).abs() < 2.0 * p.epsilon());
        assert!((pulse.u(layer.x_star) - layer.a0).abs() < 1e-10);
        // tanh tail: within 1e-3 of +-1 outside 10 eps of the layer
        for &x in &[layer.x_star - 10.0 * p.epsilon(), 0.1, 0.0] {
            assert!((pulse.u(x) - 1.0).abs() < 1e-3 + 2.0 * p.epsilon());
        }
        assert!((pulse.u(layer.x_star + 10.0 * p.epsilon()) + 1.0).abs() < 1e-3);
    }

    #[test]
    fn composite_is_even() {
        let p = paper();
        let layer = layer_data(&p);
        let pulse = composite_profile(&fine_grid(&p), layer, &p).unwrap();
        for &x in &[0.1, layer.x_star, 1.0, 3.0] {
            assert_eq!(pulse.u(x), pulse.u(-x));
            assert_eq!(pulse.v(x), pulse.v(-x));
            assert_eq!(pulse.w(x), pulse.w(-x));
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let p = paper();
        let layer = layer_data(&p);
        let coarse: Vec<f64> = (0..=1000).map(|i| -7.0 + 14.0 * i as f64 / 1000.0).collect();
        assert!(matches!(
            composite_profile(&coarse, layer, &p),
            Err(Error::GridTooCoarse { .. })
        ));
    }
}
