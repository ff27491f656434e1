//! Bifurcation structure of the standing pulse in the slow-inhibitor regime.
//!
//! All computations run on the scaled eigenvalue plane: critical eigenvalues
//! of the PDE behave like `eps^2 lambda^` where `lambda^` solves the odd or
//! even SLEP equation. In the `(tau_hat, theta_hat)` quarter-plane this
//! module computes
//!
//! * the drift line `Gamma_d: C1 tau_hat + C2 theta_hat = 1`, where the odd
//!   zero eigenvalue turns multiple and a traveling pulse branches off;
//! * the Hopf curve `Gamma_H`, parametrized by the polar angle `psi`, where
//!   the even complex pair crosses the imaginary axis;
//! * their intersections (codimension-two points);
//! * the landmark radii `s_under < s_over` bracketing the window in which
//!   the even eigenvalues form a complex pair, and the global path of that
//!   pair as the radius `s` sweeps through the window.

use crate::error::{Error, Result};
use crate::roots;
use crate::scalar::{Cplx, Real};
use crate::slep::{self, SlepContext};

/// Drift bifurcation line `C1 tau_hat + C2 theta_hat = 1` with `C1, C2 > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftLine<T> {
    pub c1: T,
    pub c2: T,
}

impl<T: Real> DriftLine<T> {
    /// Signed distance proxy: positive on the unstable side of the line.
    pub fn excess(&self, tau_hat: T, theta_hat: T) -> T {
        self.c1 * tau_hat + self.c2 * theta_hat - T::one()
    }
}

/// Closed-form drift-line constants:
/// `C1 = -4 (kappa* x*)^2 alpha g_-'(2x*)`,
/// `C2 = -4 (kappa* x*)^2 (beta/D^3) g_-'(2x*/D)`.
pub fn drift_line<T: Real>(ctx: &SlepContext<T>) -> DriftLine<T> {
    let p = ctx.params();
    let xs = ctx.x_star();
    let k = T::c(4.0) * ctx.kappa_star_sq() * xs * xs;
    let c1 = -k * p.alpha() * slep::g_minus_prime_real(T::c(2.0) * xs);
    let c2 = -k * p.beta() / (p.d() * p.d() * p.d())
        * slep::g_minus_prime_real(T::c(2.0) * xs / p.d());
    DriftLine { c1, c2 }
}

/// Nonzero real root of the odd SLEP function, when it exists in the domain
/// `lambda > -1/max(tau_hat, theta_hat)`.
///
/// The root is positive exactly on the drift-unstable side of `Gamma_d`
/// (where the slope of `G_od` at the origin is negative). On the stable
/// side a negative root may leave the domain of the principal branch, in
/// which case `None` is returned.
pub fn drift_eigenvalue<T: Real>(
    tau_hat: T,
    theta_hat: T,
    ctx: &SlepContext<T>,
) -> Result<Option<T>> {
    let god = |l: T| -> T {
        slep::g_od(Cplx::new(l, T::zero()), tau_hat, theta_hat, ctx)
            .map(|v| v.re)
            .unwrap_or(T::nan())
    };
    let slope = slep::g_od_slope_at_zero(tau_hat, theta_hat, ctx);
    let tol = T::c(1e-14);
    if slope < T::zero() {
        // convexity pushes G_od back above zero to the right of the origin
        let lo = T::c(1e-9);
        let hi = roots::grow_upper(|l| god(l) > T::zero(), T::one(), 200)?;
        Ok(Some(roots::bisect(god, lo, hi, tol)?))
    } else {
        let edge = -T::one() / tau_hat.max(theta_hat);
        let lo = edge + edge.abs() * T::c(1e-9);
        if !(god(lo) > T::zero()) {
            return Ok(None);
        }
        let hi = -T::c(1e-9) * edge.abs();
        Ok(Some(roots::bisect(god, lo, hi, tol * edge.abs())?))
    }
}

/// One point of the Hopf curve at polar angle `psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfPoint<T> {
    pub psi: T,
    /// Root of `r_hat(eta, psi) = zeta0*`; equals `s* xi*`.
    pub eta_star: T,
    /// Hopf frequency (scaled), always positive.
    pub xi_star: T,
    /// Critical radius in the `(tau_hat, theta_hat)` plane.
    pub s_star: T,
    pub tau_hat: T,
    pub theta_hat: T,
    /// `|G_ev(i xi*)|` at the point; vanishes to solver accuracy.
    pub residual: T,
    /// Radial derivative of the real part of the continued pair; positive
    /// (the pair crosses the axis from left to right).
    pub transversality: T,
}

/// Locates the Hopf point at angle `psi in (0, pi/2)`.
///
/// `r_hat(., psi)` decreases strictly from a value above `zeta0*` to zero,
/// so a doubling bracket plus bisection finds the unique `eta*`; the
/// frequency and radius follow as `xi* = -i_hat(eta*)`, `s* = eta*/xi*`.
pub fn hopf_point<T: Real>(psi: T, ctx: &SlepContext<T>) -> Result<HopfPoint<T>> {
    let zeta0 = ctx.zeta0_star();
    if !(psi > T::zero()) || psi >= T::c(std::f64::consts::FRAC_PI_2) {
        return Err(Error::BracketFailure("psi outside (0, pi/2)"));
    }
    if !(slep::r_hat(T::zero(), psi, ctx) > zeta0) {
        return Err(Error::BracketFailure(
            "r_hat(0, psi) <= zeta0*: internal inconsistency",
        ));
    }
    let f = |eta: T| slep::r_hat(eta, psi, ctx) - zeta0;
    let hi = roots::grow_upper(|eta| f(eta) < T::zero(), T::one(), 200)?;
    let eta_star = roots::bisect(f, T::zero(), hi, T::c(1e-13) * hi.max(T::one()))?;
    let xi_star = -slep::i_hat(eta_star, psi, ctx);
    let s_star = eta_star / xi_star;
    let tau_hat = s_star * psi.cos();
    let theta_hat = s_star * psi.sin();
    let residual = slep::g_ev(Cplx::new(T::zero(), xi_star), tau_hat, theta_hat, ctx)?.norm();

    // transversality by continuing the pair a small radial step either way
    let h = T::c(1e-3);
    let seed = Cplx::new(T::zero(), xi_star);
    let re_at = |s: T| -> Result<T> {
        Ok(complex_root_at(s, psi, seed, ctx)?.re)
    };
    let transversality = (re_at(s_star + h)? - re_at(s_star - h)?) / (T::c(2.0) * h);

    Ok(HopfPoint {
        psi,
        eta_star,
        xi_star,
        s_star,
        tau_hat,
        theta_hat,
        residual,
        transversality,
    })
}

/// Hopf curve over a grid of angles; per-angle failures are kept alongside
/// the angle so a sweep can continue past them.
pub fn hopf_curve<T: Real>(
    psi_grid: &[T],
    ctx: &SlepContext<T>,
) -> Vec<(T, Result<HopfPoint<T>>)> {
    psi_grid
        .iter()
        .map(|&psi| (psi, hopf_point(psi, ctx)))
        .collect()
}

/// Uniform angle grid on `[0.01, pi/2 - 0.01]`, the default for diagrams.
pub fn default_psi_grid<T: Real>(n: usize) -> Vec<T> {
    let lo = T::c(0.01);
    let hi = T::c(std::f64::consts::FRAC_PI_2 - 0.01);
    (0..n)
        .map(|i| lo + (hi - lo) * T::from_usize(i).unwrap() / T::from_usize(n - 1).unwrap())
        .collect()
}

/// Newton root of the even SLEP function at radius `s`, angle `psi`, from
/// the given seed.
pub fn complex_root_at<T: Real>(
    s: T,
    psi: T,
    seed: Cplx<T>,
    ctx: &SlepContext<T>,
) -> Result<Cplx<T>> {
    let (t, h) = (s * psi.cos(), s * psi.sin());
    roots::newton_complex(
        |z| {
            let f = slep::g_ev(z, t, h, ctx).unwrap_or(Cplx::new(T::nan(), T::zero()));
            let d = slep::g_ev_dlambda(z, t, h, ctx).unwrap_or(Cplx::new(T::one(), T::zero()));
            (f, d)
        },
        seed,
        T::c(1e-13),
        80,
    )
}

/// Real-axis landmarks of the even SLEP function at angle `psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Landmarks<T> {
    pub psi: T,
    /// Radius where the minimizer crosses zero.
    pub s_c: T,
    /// First radius where the real pair merges.
    pub s_under: T,
    /// Second radius where the complex pair lands back on the real axis.
    pub s_over: T,
    /// Double root at `s_under` (negative).
    pub lambda_under: T,
    /// Double root at `s_over` (positive).
    pub lambda_over: T,
}

/// Even SLEP function restricted to real `lambda` (radius/angle form).
pub fn g_real<T: Real>(lambda: T, s: T, psi: T, ctx: &SlepContext<T>) -> Result<T> {
    Ok(slep::g_ev(
        Cplx::new(lambda, T::zero()),
        s * psi.cos(),
        s * psi.sin(),
        ctx,
    )?
    .re)
}

fn g_real_dlambda<T: Real>(lambda: T, s: T, psi: T, ctx: &SlepContext<T>) -> Result<T> {
    Ok(slep::g_ev_dlambda(
        Cplx::new(lambda, T::zero()),
        s * psi.cos(),
        s * psi.sin(),
        ctx,
    )?
    .re)
}

/// Left edge of the real domain, `-1/(s max(cos psi, sin psi))`.
fn domain_edge<T: Real>(s: T, psi: T) -> T {
    -T::one() / (s * psi.cos().max(psi.sin()))
}

/// Minimizer `lambda_(s)` of the even SLEP function over its real domain.
///
/// The function is strictly convex with slope `-inf` at the domain edge and
/// slope `1` at `+inf`, so the minimizer is the unique zero of the
/// derivative.
pub fn lambda_floor<T: Real>(s: T, psi: T, ctx: &SlepContext<T>) -> Result<T> {
    let edge = domain_edge(s, psi);
    let width = edge.abs().max(T::one());
    let dg = |l: T| g_real_dlambda(l, s, psi, ctx).unwrap_or(T::nan());
    // walk the lower end toward the edge until the slope is negative
    let mut frac = T::c(1e-3);
    let mut lo = edge + frac * width;
    for _ in 0..60 {
        if dg(lo) < T::zero() {
            break;
        }
        frac = frac * T::c(0.5);
        lo = edge + frac * width;
    }
    if !(dg(lo) < T::zero()) {
        return Err(Error::BracketFailure("slope never negative near edge"));
    }
    let hi = roots::grow_upper(|l| dg(l) > T::zero(), lo.abs().max(T::one()), 200)?;
    roots::bisect(dg, lo, hi, T::c(1e-16) * hi.abs().max(T::one()))
}

/// Minimum value `m(s)` of the even SLEP function at radius `s`.
pub fn m_of_s<T: Real>(s: T, psi: T, ctx: &SlepContext<T>) -> Result<T> {
    g_real(lambda_floor(s, psi, ctx)?, s, psi, ctx)
}

/// Computes the landmark radii. `m` rises from `-inf` to a positive value
/// at `s_c` and falls back to `-zeta0* < 0`, so it has exactly two zeros
/// bracketing `s_c`.
pub fn real_eig_landmarks<T: Real>(psi: T, ctx: &SlepContext<T>) -> Result<Landmarks<T>> {
    let p = ctx.params();
    let xs = ctx.x_star();
    let k = T::c(4.0) * ctx.kappa_star_sq() * xs * xs;
    let denom = k
        * (p.alpha() * slep::g_plus_prime_real(T::c(2.0) * xs) * psi.cos()
            + p.beta() / (p.d() * p.d() * p.d())
                * slep::g_plus_prime_real(T::c(2.0) * xs / p.d())
                * psi.sin());
    let s_c = -T::one() / denom;
    let m_sc = m_of_s(s_c, psi, ctx)?;
    if !(m_sc > T::zero()) {
        return Err(Error::DegenerateBracket { m_sc: m_sc.f64() });
    }

    let m = |s: T| m_of_s(s, psi, ctx).unwrap_or(T::nan());
    let mut lo = s_c;
    for _ in 0..200 {
        lo = lo * T::c(0.5);
        if m(lo) < T::zero() {
            break;
        }
    }
    let s_under = roots::bisect(m, lo, s_c, T::c(1e-12) * s_c)?;
    let hi = roots::grow_upper(|s| m(s) < T::zero(), s_c * T::c(2.0), 200)?;
    let s_over = roots::bisect(m, s_c, hi, T::c(1e-12) * hi)?;

    Ok(Landmarks {
        psi,
        s_c,
        s_under,
        s_over,
        lambda_under: lambda_floor(s_under, psi, ctx)?,
        lambda_over: lambda_floor(s_over, psi, ctx)?,
    })
}

/// The two real roots of the even SLEP function at a radius outside the
/// complex window: one left of the minimizer, one right of it.
pub fn real_pair<T: Real>(s: T, psi: T, ctx: &SlepContext<T>) -> Result<(T, T)> {
    let floor = lambda_floor(s, psi, ctx)?;
    let m = g_real(floor, s, psi, ctx)?;
    if !(m < T::zero()) {
        return Err(Error::BracketFailure("no real roots: minimum nonnegative"));
    }
    let g = |l: T| g_real(l, s, psi, ctx).unwrap_or(T::nan());
    let edge = domain_edge(s, psi);
    // g -> +inf at the edge
    let mut frac = T::c(1e-3);
    let width = floor - edge;
    let mut lo = edge + frac * width;
    for _ in 0..60 {
        if g(lo) > T::zero() {
            break;
        }
        frac = frac * T::c(0.5);
        lo = edge + frac * width;
    }
    let left = roots::bisect(g, lo, floor, T::c(1e-15) * floor.abs().max(T::one()))?;
    let hi = roots::grow_upper(|l| g(l) > T::zero(), floor.abs().max(T::one()), 200)?;
    let right = roots::bisect(g, floor, hi, T::c(1e-15) * hi.abs().max(T::one()))?;
    Ok((left, right))
}

/// Taylor splitting coefficient `c = -2 G_s / G_ll` at a landmark double
/// root, by centered finite differences in `s` and `lambda`.
pub fn splitting_constant<T: Real>(
    lambda0: T,
    s0: T,
    psi: T,
    ctx: &SlepContext<T>,
) -> Result<T> {
    let hs = T::c(1e-6) * s0;
    let hl = T::c(1e-5) * lambda0.abs().max(T::one());
    let gs = (g_real(lambda0, s0 + hs, psi, ctx)? - g_real(lambda0, s0 - hs, psi, ctx)?)
        / (T::c(2.0) * hs);
    let gll = (g_real(lambda0 + hl, s0, psi, ctx)? - T::c(2.0) * g_real(lambda0, s0, psi, ctx)?
        + g_real(lambda0 - hl, s0, psi, ctx)?)
        / (hl * hl);
    Ok(-T::c(2.0) * gs / gll)
}

/// Which branch a path sample belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathBranch {
    /// Two simple real roots (`lambda_b` is the partner root).
    RealPair,
    /// Complex-conjugate pair (`lambda_b = conj(lambda_a)`).
    ComplexPair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample<T> {
    pub s: T,
    pub lambda_a: Cplx<T>,
    pub lambda_b: Cplx<T>,
    pub branch: PathBranch,
}

/// Sampled global path of the even critical eigenvalues over a radius range.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPath<T> {
    pub psi: T,
    pub samples: Vec<PathSample<T>>,
    pub s_under: T,
    pub s_star: T,
    pub s_over: T,
    /// Splitting coefficient at `s_under` (negative).
    pub c_minus: T,
    /// Splitting coefficient at `s_over` (positive).
    pub c_plus: T,
}

/// Traces the even eigenvalue pair across `[s_range.0, s_range.1]`:
/// real pairs outside `[s_under, s_over]`, a predictor-corrector continued
/// complex pair inside, with the square-root local model seeding the
/// continuation at both landmark radii.
pub fn trace_eigen_path<T: Real>(
    psi: T,
    s_range: (T, T),
    ctx: &SlepContext<T>,
) -> Result<EigenPath<T>> {
    let lm = real_eig_landmarks(psi, ctx)?;
    let hopf = hopf_point(psi, ctx)?;
    let c_minus = splitting_constant(lm.lambda_under, lm.s_under, psi, ctx)?;
    let c_plus = splitting_constant(lm.lambda_over, lm.s_over, psi, ctx)?;
    let mut samples = Vec::new();

    let (s_lo, s_hi) = s_range;
    if !(s_lo > T::zero()) || s_hi <= s_lo {
        return Err(Error::BracketFailure("invalid s range"));
    }

    // real segments, 40 samples each side that intersects the range
    let real_segment = |from: T, to: T, samples: &mut Vec<PathSample<T>>| -> Result<()> {
        if to <= from {
            return Ok(());
        }
        let n = 40;
        for i in 0..=n {
            let s = from + (to - from) * T::from_usize(i).unwrap() / T::from_usize(n).unwrap();
            let (a, b) = real_pair(s, psi, ctx)?;
            samples.push(PathSample {
                s,
                lambda_a: Cplx::new(a, T::zero()),
                lambda_b: Cplx::new(b, T::zero()),
                branch: PathBranch::RealPair,
            });
        }
        Ok(())
    };

    let delta = T::c(1e-6);
    real_segment(
        s_lo.min(lm.s_under * (T::one() - delta)),
        s_hi.min(lm.s_under * (T::one() - delta)),
        &mut samples,
    )?;

    // complex window: predictor-corrector continuation in s
    let start = lm.s_under * (T::one() + delta);
    let stop = (lm.s_over * (T::one() - delta)).min(s_hi);
    if stop > start {
        let local = (c_minus.abs() * (start - lm.s_under)).sqrt();
        let mut z = complex_root_at(
            start,
            psi,
            Cplx::new(lm.lambda_under, local),
            ctx,
        )?;
        let mut s = start;
        let base_step = (lm.s_over - lm.s_under) / T::c(200.0);
        let mut step = base_step;
        let floor_step = lm.s_under * T::c(1e-12);
        let mut prev: Option<(T, Cplx<T>)> = None;
        let mut easy_streak = 0u32;
        samples.push(PathSample {
            s,
            lambda_a: z,
            lambda_b: z.conj(),
            branch: PathBranch::ComplexPair,
        });
        while s < stop {
            let s_next = (s + step).min(stop);
            let seed = match prev {
                Some((sp, zp)) if s > sp => z + (z - zp) * ((s_next - s) / (s - sp)),
                _ => z,
            };
            match complex_root_at(s_next, psi, seed, ctx) {
                Ok(znew) if znew.im.abs() > T::zero() => {
                    prev = Some((s, z));
                    s = s_next;
                    z = znew;
                    samples.push(PathSample {
                        s,
                        lambda_a: z,
                        lambda_b: z.conj(),
                        branch: PathBranch::ComplexPair,
                    });
                    easy_streak += 1;
                    if easy_streak >= 3 && step < base_step * T::c(4.0) {
                        step = step * T::c(2.0);
                        easy_streak = 0;
                    }
                }
                _ => {
                    step = step * T::c(0.5);
                    easy_streak = 0;
                    if step < floor_step {
                        return Err(Error::ContinuationStall { s: s.f64() });
                    }
                }
            }
        }
    }

    real_segment(
        s_lo.max(lm.s_over * (T::one() + delta)),
        s_hi.max(lm.s_over * (T::one() + delta)),
        &mut samples,
    )?;

    Ok(EigenPath {
        psi,
        samples,
        s_under: lm.s_under,
        s_star: hopf.s_star,
        s_over: lm.s_over,
        c_minus,
        c_plus,
    })
}

/// A drift/Hopf intersection in the `(tau_hat, theta_hat)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Codim2Point<T> {
    pub psi: T,
    pub tau_hat: T,
    pub theta_hat: T,
    pub xi_star: T,
    /// `|1 - C1 tau_hat - C2 theta_hat|`.
    pub drift_residual: T,
    /// `|G_ev(i xi*)|`.
    pub hopf_residual: T,
}

/// All transversal intersections of the Hopf curve with the drift line,
/// found by a sign scan over the default angle grid refined per crossing.
/// An empty result is legal (the curves need not intersect for every
/// parameter set).
pub fn codim2_points<T: Real>(ctx: &SlepContext<T>) -> Result<Vec<Codim2Point<T>>> {
    let line = drift_line(ctx);
    let grid = default_psi_grid::<T>(181);
    let excess = |psi: T| -> Result<T> {
        let hp = hopf_point(psi, ctx)?;
        Ok(line.excess(hp.tau_hat, hp.theta_hat))
    };
    let mut out = Vec::new();
    let mut prev = excess(grid[0])?;
    for pair in grid.windows(2) {
        let cur = excess(pair[1])?;
        if prev == T::zero() || prev * cur < T::zero() {
            let psi = roots::newton_bracketed(
                |p| {
                    let f = excess(p).unwrap_or(T::nan());
                    let h = T::c(1e-7);
                    let df = (excess(p + h).unwrap_or(T::nan())
                        - excess(p - h).unwrap_or(T::nan()))
                        / (T::c(2.0) * h);
                    (f, df)
                },
                pair[0],
                pair[1],
                (pair[0] + pair[1]) * T::c(0.5),
                T::c(1e-13),
                120,
            )?;
            let hp = hopf_point(psi, ctx)?;
            out.push(Codim2Point {
                psi,
                tau_hat: hp.tau_hat,
                theta_hat: hp.theta_hat,
                xi_star: hp.xi_star,
                drift_residual: line.excess(hp.tau_hat, hp.theta_hat).abs(),
                hopf_residual: hp.residual,
            });
        }
        prev = cur;
    }
    Ok(out)
}

/// Stability classification of a `(tau_hat, theta_hat)` point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionLabel {
    Stable,
    Drift,
    Hopf,
    DriftHopf,
}

impl RegionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Stable => "stable",
            Self::Drift => "drift",
            Self::Hopf => "hopf",
            Self::DriftHopf => "drift+hopf",
        }
    }
}

/// Classifies a point by the two instability flags. Points within `1e-10`
/// of the drift line count as drift-unstable (documented tie-break).
pub fn classify_region<T: Real>(
    tau_hat: T,
    theta_hat: T,
    ctx: &SlepContext<T>,
) -> Result<RegionLabel> {
    if !(tau_hat > T::zero()) || !(theta_hat > T::zero()) {
        return Err(Error::BracketFailure("classification needs positive rates"));
    }
    let line = drift_line(ctx);
    let excess = line.excess(tau_hat, theta_hat);
    let drift = excess > -T::c(1e-10);

    let s = (tau_hat * tau_hat + theta_hat * theta_hat).sqrt();
    let psi = theta_hat.atan2(tau_hat);
    let hp = hopf_point(psi, ctx)?;
    let hopf = if s <= hp.s_star {
        false
    } else {
        let lm = real_eig_landmarks(psi, ctx)?;
        if s < lm.s_over {
            // confirm the continued pair actually sits in the right half plane
            let seed = Cplx::new(T::zero(), hp.xi_star);
            let z = continue_radially(hp.s_star, s, psi, seed, ctx)?;
            z.re > T::zero()
        } else {
            // pair has landed on the positive real axis
            let (a, b) = real_pair(s, psi, ctx)?;
            a > T::zero() && b > T::zero()
        }
    };

    Ok(match (drift, hopf) {
        (false, false) => RegionLabel::Stable,
        (true, false) => RegionLabel::Drift,
        (false, true) => RegionLabel::Hopf,
        (true, true) => RegionLabel::DriftHopf,
    })
}

/// Continues a complex root radially from `s_from` to `s_to` in a fixed
/// number of Newton hops.
fn continue_radially<T: Real>(
    s_from: T,
    s_to: T,
    psi: T,
    seed: Cplx<T>,
    ctx: &SlepContext<T>,
) -> Result<Cplx<T>> {
    let n = 64;
    let mut z = seed;
    for i in 1..=n {
        let s = s_from + (s_to - s_from) * T::from_usize(i).unwrap() / T::from_usize(n).unwrap();
        z = complex_root_at(s, psi, z, ctx)?;
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn ctx() -> SlepContext<f64> {
        SlepContext::new(&ModelParams::new(1.0, 2.0, 2.0, 2.0, 0.012).unwrap())
    }

    #[test]
    fn drift_line_constants_positive_and_match_slope() {
        let c = ctx();
        let line = drift_line(&c);
        assert!(line.c1 > 0.0 && line.c2 > 0.0);
        // regression values for the reference parameters
        assert!((line.c1 - 0.13767629928564).abs() < 1e-10);
        assert!((line.c2 - 0.04202189557085).abs() < 1e-10);
        for (t, h) in [(1.0, 1.0), (5.0, 0.3), (0.1, 20.0)] {
            let s = slep::g_od_slope_at_zero(t, h, &c);
            assert!((s - (1.0 - line.c1 * t - line.c2 * h)).abs() < 1e-12);
        }
    }

    #[test]
    fn drift_line_scales_linearly_in_alpha_beta() {
        // co-scaling (alpha, beta, gamma) holds x* fixed, so C1 and C2 are
        // linear in alpha resp. beta
        let p1 = ModelParams::<f64>::new(1.0, 2.0, 2.0, 2.0, 0.012).unwrap();
        let p3 = ModelParams::<f64>::new(2.0, 4.0, 4.0, 2.0, 0.012).unwrap();
        let l1 = drift_line(&SlepContext::new(&p1));
        let l3 = drift_line(&SlepContext::new(&p3));
        assert!((l3.c1 / l1.c1 - 2.0).abs() < 1e-10);
        assert!((l3.c2 / l1.c2 - 2.0).abs() < 1e-10);
    }

    #[test]
    fn drift_eigenvalue_sign_follows_the_line() {
        let c = ctx();
        let line = drift_line(&c);
        for (t, h) in [(13.0, 0.5), (8.2, 3.7)] {
            assert!(line.excess(t, h) > 0.0);
            let r = drift_eigenvalue(t, h, &c).unwrap().unwrap();
            assert!(r > 0.0, "expected positive drift root at ({t},{h})");
            let res = slep::g_od(Cplx::new(r, 0.0), t, h, &c).unwrap().norm();
            assert!(res < 1e-10);
        }
        for (t, h) in [(3.0, 2.0), (5.0, 4.0)] {
            assert!(line.excess(t, h) < 0.0);
            if let Some(r) = drift_eigenvalue(t, h, &c).unwrap() {
                assert!(r < 0.0, "expected negative drift root at ({t},{h})");
            }
        }
    }

    #[test]
    fn hopf_point_reference_angle() {
        let c = ctx();
        let hp = hopf_point(FRAC_PI_4, &c).unwrap();
        assert!((hp.eta_star - 7.804832).abs() < 1e-4);
        assert!((hp.xi_star - 1.903414).abs() < 1e-4);
        assert!((hp.s_star - 4.100438).abs() < 1e-4);
        assert!(hp.residual < 1e-10);
        assert!(hp.transversality > 0.0);
    }

    #[test]
    fn hopf_point_unique_from_many_brackets() {
        let c = ctx();
        let reference = hopf_point(FRAC_PI_4, &c).unwrap().eta_star;
        // bisection from manually perturbed brackets must land on the same root
        let zeta0 = c.zeta0_star();
        for k in 1..=10 {
            let hi0 = 1.0 + k as f64;
            let f = |eta: f64| slep::r_hat(eta, FRAC_PI_4, &c) - zeta0;
            let hi = crate::roots::grow_upper(|e| f(e) < 0.0, hi0, 100).unwrap();
            let eta = crate::roots::bisect(f, 0.0, hi, 1e-12).unwrap();
            assert!((eta - reference).abs() < 1e-10);
        }
    }

    #[test]
    fn landmarks_reference_angle() {
        let c = ctx();
        let lm = real_eig_landmarks(FRAC_PI_4, &c).unwrap();
        assert!((lm.s_c - 0.34807619479385).abs() < 1e-9);
        assert!((lm.s_under - 0.08345413439205).abs() < 1e-8);
        assert!((lm.s_over - 56.80901091339).abs() < 1e-6);
        assert!(lm.lambda_under < 0.0 && lm.lambda_over > 0.0);
        let hp = hopf_point(FRAC_PI_4, &c).unwrap();
        assert!(lm.s_under < hp.s_star && hp.s_star < lm.s_over);
    }

    #[test]
    fn lambda_floor_sign_pattern() {
        let c = ctx();
        let lm = real_eig_landmarks(FRAC_PI_4, &c).unwrap();
        assert!(lambda_floor(0.5 * lm.s_c, FRAC_PI_4, &c).unwrap() < 0.0);
        assert!(lambda_floor(lm.s_c, FRAC_PI_4, &c).unwrap().abs() < 1e-9);
        assert!(lambda_floor(2.0 * lm.s_c, FRAC_PI_4, &c).unwrap() > 0.0);
    }

    #[test]
    fn splitting_constants_have_documented_signs() {
        let c = ctx();
        let lm = real_eig_landmarks(FRAC_PI_4, &c).unwrap();
        let cm = splitting_constant(lm.lambda_under, lm.s_under, FRAC_PI_4, &c).unwrap();
        let cp = splitting_constant(lm.lambda_over, lm.s_over, FRAC_PI_4, &c).unwrap();
        assert!(cm < 0.0, "c- = {cm}");
        assert!(cp > 0.0, "c+ = {cp}");
        assert!((cm - -1081.3175894).abs() / 1081.0 < 1e-4);
        assert!((cp - 0.0071360076).abs() < 1e-6);
    }

    #[test]
    fn codim2_exactly_two_points_for_reference_params() {
        let c = ctx();
        let pts = codim2_points(&c).unwrap();
        assert_eq!(pts.len(), 2);
        let lower = &pts[0];
        assert!((lower.tau_hat - 6.584106).abs() < 1e-3);
        assert!((lower.theta_hat - 2.225618).abs() < 1e-3);
        for p in &pts {
            assert!(p.drift_residual < 1e-8);
            assert!(p.hopf_residual < 1e-8);
        }
    }

    #[test]
    fn codim2_count_stable_under_small_parameter_change() {
        let p = ModelParams::new(1.05, 2.0, 2.0, 2.0, 0.012).unwrap();
        let pts = codim2_points(&SlepContext::new(&p)).unwrap();
        assert_eq!(pts.len(), 2);
    }

    #[test]
    fn classify_reference_points() {
        let c = ctx();
        assert_eq!(classify_region(3.0, 2.0, &c).unwrap(), RegionLabel::Stable);
        assert_eq!(classify_region(13.0, 0.5, &c).unwrap(), RegionLabel::Drift);
        assert_eq!(classify_region(5.0, 4.0, &c).unwrap(), RegionLabel::Hopf);
        assert_eq!(
            classify_region(8.2, 3.7, &c).unwrap(),
            RegionLabel::DriftHopf
        );
    }

    #[test]
    fn classify_on_the_line_ties_to_drift() {
        let c = ctx();
        let line = drift_line(&c);
        let t = 3.0;
        let h = (1.0 - line.c1 * t) / line.c2;
        let label = classify_region(t, h, &c).unwrap();
        assert!(matches!(label, RegionLabel::Drift | RegionLabel::DriftHopf));
    }

    #[test]
    fn hopf_curve_is_lipschitz_and_finite_at_ends() {
        let c = ctx();
        let grid = default_psi_grid::<f64>(61);
        let pts = hopf_curve(&grid, &c);
        let mut prev: Option<HopfPoint<f64>> = None;
        for (psi, r) in pts {
            let hp = r.unwrap_or_else(|e| panic!("hopf_point failed at {psi}: {e}"));
            assert!(hp.s_star.is_finite() && hp.s_star > 0.0);
            assert!(hp.xi_star > 0.0);
            if let Some(p) = prev {
                let dpsi = hp.psi - p.psi;
                let jump = ((hp.tau_hat - p.tau_hat).powi(2)
                    + (hp.theta_hat - p.theta_hat).powi(2))
                .sqrt();
                assert!(jump < 60.0 * dpsi, "jump {jump} at psi {psi}");
            }
            prev = Some(hp);
        }
    }

    #[test]
    fn eigen_path_structure() {
        let c = ctx();
        let lm = real_eig_landmarks(FRAC_PI_4, &c).unwrap();
        let path = trace_eigen_path(FRAC_PI_4, (lm.s_under / 2.0, 2.0 * lm.s_over), &c).unwrap();
        assert!(path.s_under < path.s_star && path.s_star < path.s_over);
        // conjugacy on the complex window
        for sm in &path.samples {
            if sm.branch == PathBranch::ComplexPair {
                assert_eq!(sm.lambda_b, sm.lambda_a.conj());
                assert!(sm.lambda_a.im != 0.0);
            } else {
                assert_eq!(sm.lambda_a.im, 0.0);
            }
        }
        // before the window: both real negative; after: both positive
        let first = path.samples.first().unwrap();
        assert!(first.branch == PathBranch::RealPair);
        assert!(first.lambda_a.re < 0.0 && first.lambda_b.re < 0.0);
        let last = path.samples.last().unwrap();
        assert!(last.branch == PathBranch::RealPair);
        assert!(last.lambda_a.re > 0.0 && last.lambda_b.re > 0.0);
    }

    #[test]
    fn no_spurious_complex_roots_outside_window() {
        let c = ctx();
        let lm = real_eig_landmarks(FRAC_PI_4, &c).unwrap();
        let zeta0 = c.zeta0_star();
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &s in &[lm.s_under * 0.9, lm.s_over * 1.1] {
            for _ in 0..50 {
                let seed = Cplx::new(
                    rng.gen_range(-2.0 * zeta0..2.0 * zeta0),
                    rng.gen_range(1e-3..2.0 * zeta0),
                );
                if let Ok(z) = complex_root_at(s, FRAC_PI_4, seed, &c) {
                    assert!(
                        z.im.abs() < 1e-9,
                        "complex root {z} found at s = {s} outside the window"
                    );
                }
            }
        }
    }

    #[test]
    fn psi_grid_spans_documented_interval() {
        let g = default_psi_grid::<f64>(181);
        assert_eq!(g.len(), 181);
        assert!((g[0] - 0.01).abs() < 1e-15);
        assert!((g[180] - (FRAC_PI_2 - 0.01)).abs() < 1e-12);
    }
}
