//! Direct time integration of the reaction-diffusion system on `[-L, L]`
//! with homogeneous Neumann boundaries.
//!
//! One step of the first-order IMEX scheme treats diffusion and the linear
//! inhibitor decay implicitly (three constant-coefficient tridiagonal
//! solves, Neumann closure by ghost-point reflection) and evaluates the
//! cubic nonlinearity and the `eps (alpha v + beta w + gamma)` coupling at
//! the old time level. In the slow regime the inhibitor equations advance
//! with the factor `eps^2 / tau_hat` (resp. `eps^2 / theta_hat`).
//!
//! The zero contour of `u` is recorded as the pulse boundary; its center and
//! width time series feed the qualitative dynamics classifier.

use crate::error::{Error, Result};
use crate::params::{ModelParams, TimeScaleRegime};
use crate::pulse::{self, PulseSolution};
use crate::scalar::Real;
use rand::{Rng, SeedableRng};

/// Shape of the deterministic kick applied to `v` for the perturbed initial
/// condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationMode {
    /// Even kick, excites breathing modes.
    Symmetric,
    /// Odd kick, breaks the left/right symmetry and excites drift modes.
    Antisymmetric,
    /// Both kicks at once (useful near codimension-two points).
    Both,
}

/// Initial condition selector.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition<T> {
    /// The composite asymptotic pulse.
    AsymptoticPulse,
    /// The pulse plus a deterministic kick on `v`.
    PerturbedPulse {
        amplitude: T,
        mode: PerturbationMode,
    },
    /// Explicit fields sampled on the simulation grid (e.g. from a snapshot
    /// file).
    Fields { u: Vec<T>, v: Vec<T>, w: Vec<T> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig<T> {
    pub params: ModelParams<T>,
    pub regime: TimeScaleRegime<T>,
    /// Domain half width `L`; the box is `[-L, L]`.
    pub half_width: T,
    pub dx: T,
    pub dt: T,
    pub t_end: T,
    pub ic: InitialCondition<T>,
    /// Optional seeded uniform noise added to `v` on top of the kick.
    pub noise_amplitude: T,
    pub seed: u64,
    /// A contour frame is stored every this many steps.
    pub record_every: usize,
    /// Drift threshold: `|<c'>| > factor * dx / window`.
    pub drift_velocity_factor: T,
    /// Breathing threshold: peak-to-peak width above `factor * dx`.
    pub breathe_amplitude_factor: T,
}

impl<T: Real> SimConfig<T> {
    pub fn new(params: ModelParams<T>, regime: TimeScaleRegime<T>, t_end: T) -> Self {
        Self {
            params,
            regime,
            half_width: T::c(7.0),
            dx: T::c(7.0 / 1024.0),
            dt: T::c(0.012),
            t_end,
            ic: InitialCondition::AsymptoticPulse,
            noise_amplitude: T::zero(),
            seed: 0,
            record_every: 10,
            drift_velocity_factor: T::c(10.0),
            breathe_amplitude_factor: T::c(20.0),
        }
    }

    /// True when the grid is too coarse to resolve the layer; the run is
    /// still performed but the flag is carried on the trajectory.
    pub fn layer_underresolved(&self) -> bool {
        self.dx > self.params.epsilon() / T::c(4.0)
    }
}

/// Fields on the simulation grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState<T> {
    pub x: Vec<T>,
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub w: Vec<T>,
    pub t: T,
}

/// Precomputed constant-coefficient tridiagonal solver (Thomas algorithm
/// with the Neumann double-coupling in the first and last rows).
struct NeumannTridiag<T> {
    cp: Vec<T>,
    inv_den: Vec<T>,
    lower: Vec<T>,
}

impl<T: Real> NeumannTridiag<T> {
    /// Matrix `diag` on the diagonal and `off` on both off-diagonals, with
    /// the first/last off-diagonal doubled (ghost-point reflection).
    fn new(n: usize, diag: T, off: T) -> Self {
        let mut upper = vec![off; n - 1];
        let mut lower = vec![off; n];
        upper[0] = off * T::c(2.0);
        lower[n - 1] = off * T::c(2.0);
        lower[0] = T::zero();
        let mut cp = vec![T::zero(); n - 1];
        let mut inv_den = vec![T::zero(); n];
        let mut den = diag;
        inv_den[0] = T::one() / den;
        cp[0] = upper[0] / den;
        for i in 1..n {
            den = diag - lower[i] * cp[i - 1];
            inv_den[i] = T::one() / den;
            if i < n - 1 {
                cp[i] = upper[i] / den;
            }
        }
        Self { cp, inv_den, lower }
    }

    fn solve(&self, d: &mut [T]) {
        let n = d.len();
        d[0] = d[0] * self.inv_den[0];
        for i in 1..n {
            d[i] = (d[i] - self.lower[i] * d[i - 1]) * self.inv_den[i];
        }
        for i in (0..n - 1).rev() {
            d[i] = d[i] - self.cp[i] * d[i + 1];
        }
    }
}

/// Time stepper bound to a grid and parameter set.
pub struct Stepper<T> {
    params: ModelParams<T>,
    dt: T,
    inv_tau: T,
    inv_theta: T,
    solve_u: NeumannTridiag<T>,
    solve_v: NeumannTridiag<T>,
    solve_w: NeumannTridiag<T>,
    scratch: Vec<T>,
    /// Abort threshold on `max |u|`.
    pub blowup_cap: T,
}

impl<T: Real> Stepper<T> {
    pub fn new(config: &SimConfig<T>, n: usize, dx: T) -> Self {
        let p = config.params;
        let (tau, theta) = config.regime.effective(p.epsilon());
        let dt = config.dt;
        let (inv_tau, inv_theta) = (T::one() / tau, T::one() / theta);
        let ru = dt * p.epsilon() * p.epsilon() / (dx * dx);
        let rv = dt * inv_tau / (dx * dx);
        let rw = dt * inv_theta * p.d() * p.d() / (dx * dx);
        Self {
            params: p,
            dt,
            inv_tau,
            inv_theta,
            solve_u: NeumannTridiag::new(n, T::one() + T::c(2.0) * ru, -ru),
            solve_v: NeumannTridiag::new(n, T::one() + dt * inv_tau + T::c(2.0) * rv, -rv),
            solve_w: NeumannTridiag::new(n, T::one() + dt * inv_theta + T::c(2.0) * rw, -rw),
            scratch: vec![T::zero(); n],
            blowup_cap: T::c(10.0),
        }
    }

    /// Advances the state by one step.
    pub fn step(&mut self, state: &mut SimState<T>) -> Result<()> {
        let p = &self.params;
        let dt = self.dt;
        let n = state.u.len();
        let mut max_u = T::zero();
        for i in 0..n {
            let u = state.u[i];
            max_u = max_u.max(u.abs());
            self.scratch[i] = u
                + dt * (u - u * u * u
                    - p.epsilon()
                        * (p.alpha() * state.v[i] + p.beta() * state.w[i] + p.gamma()));
        }
        if max_u > self.blowup_cap {
            return Err(Error::BlowUp {
                t: state.t.f64(),
                cap: self.blowup_cap.f64(),
            });
        }
        std::mem::swap(&mut self.scratch, &mut state.u);
        self.solve_u.solve(&mut state.u);
        for i in 0..n {
            state.v[i] = state.v[i] + dt * self.inv_tau * self.scratch[i];
        }
        self.solve_v.solve(&mut state.v);
        for i in 0..n {
            state.w[i] = state.w[i] + dt * self.inv_theta * self.scratch[i];
        }
        self.solve_w.solve(&mut state.w);
        state.t = state.t + dt;
        Ok(())
    }
}

/// One implicit diffusion-only step for all three components (no reaction,
/// no decay, no coupling). Test hook for the conservation property of the
/// Neumann solves.
#[doc(hidden)]
pub fn step_diffusion_only<T: Real>(config: &SimConfig<T>, state: &mut SimState<T>, dx: T) {
    let p = config.params;
    let (tau, theta) = config.regime.effective(p.epsilon());
    let n = state.u.len();
    let dt = config.dt;
    let ru = dt * p.epsilon() * p.epsilon() / (dx * dx);
    let rv = dt / tau / (dx * dx);
    let rw = dt / theta * p.d() * p.d() / (dx * dx);
    for (field, r) in [(&mut state.u, ru), (&mut state.v, rv), (&mut state.w, rw)] {
        NeumannTridiag::new(n, T::one() + T::c(2.0) * r, -r).solve(field);
    }
    state.t = state.t + dt;
}

/// All sign-change abscissae of `u` by linear interpolation.
pub fn extract_zero_contour<T: Real>(u: &[T], x: &[T]) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for i in 0..u.len() - 1 {
        let (a, b) = (u[i], u[i + 1]);
        if a == T::zero() {
            out.push(x[i]);
        } else if (a < T::zero()) != (b < T::zero()) && b != T::zero() {
            out.push(x[i] + (x[i + 1] - x[i]) * a / (a - b));
        }
    }
    if *u.last().unwrap() == T::zero() {
        out.push(*x.last().unwrap());
    }
    if out.is_empty() {
        return Err(Error::NoCrossing);
    }
    Ok(out)
}

/// Qualitative pulse dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicsLabel {
    Standing,
    Traveling,
    StandingBreather,
    TravelingBreather,
    Collapsed,
    Indeterminate,
}

impl DynamicsLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Standing => "standing",
            Self::Traveling => "traveling",
            Self::StandingBreather => "standing-breather",
            Self::TravelingBreather => "traveling-breather",
            Self::Collapsed => "collapsed",
            Self::Indeterminate => "indeterminate",
        }
    }
}

/// Classifier diagnostics over the analysis window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics<T> {
    /// Least-squares slope of the center position.
    pub drift_velocity: T,
    /// Peak-to-peak oscillation of the width.
    pub osc_amplitude: T,
    /// Full oscillation periods detected in the width signal.
    pub osc_periods: usize,
    /// Thresholds the flags were compared against.
    pub v_min: T,
    pub a_min: T,
}

/// Classifies a window of contour frames.
///
/// Drift flag: center drifts faster than `v_min`. Breathe flag: width
/// peak-to-peak exceeds `a_min` with at least three full periods; above
/// threshold with fewer periods the window is too short to decide.
pub fn classify_window<T: Real>(
    times: &[T],
    centers: &[T],
    widths: &[T],
    v_min: T,
    a_min: T,
) -> (DynamicsLabel, Diagnostics<T>) {
    let n = times.len();
    let mut diag = Diagnostics {
        drift_velocity: T::zero(),
        osc_amplitude: T::zero(),
        osc_periods: 0,
        v_min,
        a_min,
    };
    if n < 100 {
        return (DynamicsLabel::Indeterminate, diag);
    }
    // least-squares slope of c(t)
    let nf = T::from_usize(n).unwrap();
    let tm = times.iter().fold(T::zero(), |a, &b| a + b) / nf;
    let cm = centers.iter().fold(T::zero(), |a, &b| a + b) / nf;
    let mut stt = T::zero();
    let mut stc = T::zero();
    for i in 0..n {
        let dt = times[i] - tm;
        stt = stt + dt * dt;
        stc = stc + dt * (centers[i] - cm);
    }
    diag.drift_velocity = stc / stt;

    let hmax = widths.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
    let hmin = widths.iter().fold(T::infinity(), |a, &b| a.min(b));
    diag.osc_amplitude = hmax - hmin;
    let hm = widths.iter().fold(T::zero(), |a, &b| a + b) / nf;
    let mut crossings = 0usize;
    for i in 0..n - 1 {
        let (a, b) = (widths[i] - hm, widths[i + 1] - hm);
        if a != T::zero() && (a < T::zero()) != (b < T::zero()) {
            crossings += 1;
        }
    }
    diag.osc_periods = crossings / 2;

    let drift = diag.drift_velocity.abs() > v_min;
    let above = diag.osc_amplitude > a_min;
    let breathe = above && diag.osc_periods >= 3;
    let label = match (drift, breathe) {
        _ if above && diag.osc_periods < 3 => DynamicsLabel::Indeterminate,
        (false, false) => DynamicsLabel::Standing,
        (true, false) => DynamicsLabel::Traveling,
        (false, true) => DynamicsLabel::StandingBreather,
        (true, true) => DynamicsLabel::TravelingBreather,
    };
    (label, diag)
}

/// Recorded trajectory of the `u = 0` contour.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrajectory<T> {
    pub times: Vec<T>,
    pub x_minus: Vec<T>,
    pub x_plus: Vec<T>,
    pub label: DynamicsLabel,
    pub diagnostics: Diagnostics<T>,
    pub layer_underresolved: bool,
    /// Index range of the classification window.
    pub window: (usize, usize),
}

impl<T: Real> SimTrajectory<T> {
    pub fn center(&self, i: usize) -> T {
        (self.x_minus[i] + self.x_plus[i]) * T::c(0.5)
    }
    pub fn width(&self, i: usize) -> T {
        self.x_plus[i] - self.x_minus[i]
    }
}

/// Builds the initial state on the simulation grid.
pub fn initial_state<T: Real>(config: &SimConfig<T>) -> Result<SimState<T>> {
    let l = config.half_width;
    let n = ((T::c(2.0) * l / config.dx).round().f64() as usize).max(8);
    let dx = T::c(2.0) * l / T::from_usize(n).unwrap();
    let x: Vec<T> = (0..=n)
        .map(|i| -l + dx * T::from_usize(i).unwrap())
        .collect();
    let (u, mut v, w);
    match &config.ic {
        InitialCondition::Fields { u: fu, v: fv, w: fw } => {
            if fu.len() != n + 1 || fv.len() != n + 1 || fw.len() != n + 1 {
                return Err(Error::GridTooCoarse {
                    dx: dx.f64(),
                    limit: f64::NAN,
                });
            }
            u = fu.clone();
            v = fv.clone();
            w = fw.clone();
        }
        _ => {
            let layer = pulse::layer_data(&config.params);
            let pl = PulseSolution::assemble(layer, &config.params);
            u = x.iter().map(|&xi| pl.u(xi)).collect();
            v = x.iter().map(|&xi| pl.v(xi)).collect();
            w = x.iter().map(|&xi| pl.w(xi)).collect();
            if let InitialCondition::PerturbedPulse { amplitude, mode } = &config.ic {
                let pi = T::c(std::f64::consts::PI);
                for (i, &xi) in x.iter().enumerate() {
                    // both kick shapes have vanishing slope at the walls
                    let anti = (pi * xi / (T::c(2.0) * l)).sin();
                    let sym = (pi * xi / l).cos();
                    let kick = match mode {
                        PerturbationMode::Symmetric => sym,
                        PerturbationMode::Antisymmetric => anti,
                        PerturbationMode::Both => sym + anti,
                    };
                    v[i] = v[i] + *amplitude * kick;
                }
            }
            if config.noise_amplitude > T::zero() {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
                for vi in v.iter_mut() {
                    *vi = *vi + config.noise_amplitude * T::c(rng.gen_range(-1.0..1.0));
                }
            }
        }
    }
    Ok(SimState {
        x,
        u,
        v,
        w,
        t: T::zero(),
    })
}

/// Integrates to `t_end`, recording the contour every `record_every` steps,
/// and classifies the final half of the usable frames. The usable window
/// ends early if the contour approaches a wall closer than 1 or disappears
/// (label `collapsed`).
pub fn run<T: Real>(config: &SimConfig<T>) -> Result<SimTrajectory<T>> {
    let mut state = initial_state(config)?;
    let n = state.u.len() - 1;
    let dx = state.x[1] - state.x[0];
    let mut stepper = Stepper::new(config, n + 1, dx);
    let steps = (config.t_end / config.dt).ceil().f64() as usize;

    let mut times = Vec::new();
    let mut x_minus = Vec::new();
    let mut x_plus = Vec::new();
    let mut collapsed = false;
    let mut wall_frame: Option<usize> = None;
    let l = config.half_width;

    let record = |state: &SimState<T>,
                      times: &mut Vec<T>,
                      x_minus: &mut Vec<T>,
                      x_plus: &mut Vec<T>|
     -> Result<bool> {
        match extract_zero_contour(&state.u, &state.x) {
            Ok(crossings) => {
                times.push(state.t);
                x_minus.push(crossings[0]);
                x_plus.push(*crossings.last().unwrap());
                Ok(true)
            }
            Err(Error::NoCrossing) => Ok(false),
            Err(e) => Err(e),
        }
    };

    if !record(&state, &mut times, &mut x_minus, &mut x_plus)? {
        collapsed = true;
    }
    if !collapsed {
        'time: for k in 1..=steps {
            stepper.step(&mut state).map_err(|e| match e {
                Error::BlowUp { t, cap } => Error::BlowUp { t, cap },
                other => other,
            })?;
            if k % config.record_every == 0 {
                if !record(&state, &mut times, &mut x_minus, &mut x_plus)? {
                    collapsed = true;
                    break 'time;
                }
                let i = times.len() - 1;
                if wall_frame.is_none()
                    && (x_plus[i] > l - T::one() || x_minus[i] < -(l - T::one()))
                {
                    wall_frame = Some(i);
                }
            }
        }
    }

    let usable = wall_frame.unwrap_or(times.len());
    let start = usable / 2;
    let centers: Vec<T> = (start..usable)
        .map(|i| (x_minus[i] + x_plus[i]) * T::c(0.5))
        .collect();
    let widths: Vec<T> = (start..usable).map(|i| x_plus[i] - x_minus[i]).collect();
    let window_times = &times[start..usable];
    let duration = if window_times.len() > 1 {
        *window_times.last().unwrap() - window_times[0]
    } else {
        T::one()
    };
    let v_min = config.drift_velocity_factor * dx / duration;
    let a_min = config.breathe_amplitude_factor * dx;
    let (mut label, diagnostics) =
        classify_window(window_times, &centers, &widths, v_min, a_min);
    if collapsed {
        label = DynamicsLabel::Collapsed;
    }
    Ok(SimTrajectory {
        times,
        x_minus,
        x_plus,
        label,
        diagnostics,
        layer_underresolved: config.layer_underresolved(),
        window: (start, usable),
    })
}
