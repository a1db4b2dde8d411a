//! Two qubits exchanging excitations through a delay line.
//!
//! dA/dt = -G A(t) - G e^{i theta} B(t - T) H(t - T)
//! dB/dt = -G B(t) - G e^{i theta} A(t - T) H(t - T)
//!
//! with H(0) = 0 and nothing in the line before t = 0.

mod analytic;
mod presets;

use std::collections::VecDeque;

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use analytic::{analytic_segments, AnalyticSegments};
pub use presets::{figure_preset, reconcile_theta, FIGURE_PRESETS, OMEGA10};

use crate::{Error, Result};

type C = Complex64;

/// Largest step as a fraction of the delay.
pub const MAX_STEP_PER_DELAY: f64 = 1.0 / 50.0;
/// Largest step in units of 1/gamma0.
pub const MAX_STEP_PER_DECAY: f64 = 0.01;
/// Tolerance on P_A + P_B <= 1.
pub const POPULATION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DdeProblem {
    /// rad/s
    pub gamma0: f64,
    /// s
    pub delay_t: f64,
    /// rad
    pub theta_t: f64,
    pub alpha_a0: C,
    pub alpha_b0: C,
    /// s
    pub t_max: f64,
    /// s
    pub dt: f64,
}

impl DdeProblem {
    /// Problem with the default horizon max(10 T, 20/G) and the largest allowed step.
    pub fn new(gamma0: f64, delay_t: f64, theta_t: f64, alpha_a0: C, alpha_b0: C) -> Self {
        DdeProblem {
            gamma0,
            delay_t,
            theta_t,
            alpha_a0,
            alpha_b0,
            t_max: default_t_max(gamma0, delay_t),
            dt: default_dt(gamma0, delay_t),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma0 > 0.0) || !self.gamma0.is_finite() {
            return Err(Error::input(format!("gamma0 must be positive, got {}", self.gamma0)));
        }
        if !(self.delay_t >= 0.0) || !self.delay_t.is_finite() {
            return Err(Error::input(format!("delay must be non-negative, got {}", self.delay_t)));
        }
        if !self.theta_t.is_finite() {
            return Err(Error::input("theta must be finite"));
        }
        let norm = self.alpha_a0.norm_sqr() + self.alpha_b0.norm_sqr();
        if !(norm <= 1.0 + 1e-12) {
            return Err(Error::input(format!("initial populations sum to {norm} > 1")));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::input(format!("t_max must be positive, got {}", self.t_max)));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::input(format!("dt must be positive, got {}", self.dt)));
        }
        let limit = max_dt(self.gamma0, self.delay_t);
        if self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::input(format!(
                "dt = {:e} s exceeds the limit {:e} s (T/50, or 0.01/gamma0 without delay)",
                self.dt, limit
            )));
        }
        Ok(())
    }
}

pub fn max_dt(gamma0: f64, delay_t: f64) -> f64 {
    if delay_t > 0.0 {
        delay_t * MAX_STEP_PER_DELAY
    } else {
        MAX_STEP_PER_DECAY / gamma0
    }
}

pub fn default_dt(gamma0: f64, delay_t: f64) -> f64 {
    max_dt(gamma0, delay_t).min(MAX_STEP_PER_DECAY / gamma0)
}

pub fn default_t_max(gamma0: f64, delay_t: f64) -> f64 {
    (10.0 * delay_t).max(20.0 / gamma0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub times: Vec<f64>,
    pub alpha_a: Vec<C>,
    pub alpha_b: Vec<C>,
    pub p_a: Vec<f64>,
    pub p_b: Vec<f64>,
    pub concurrence: Vec<f64>,
}

impl Trace {
    fn with_capacity(n: usize) -> Self {
        Trace {
            times: Vec::with_capacity(n),
            alpha_a: Vec::with_capacity(n),
            alpha_b: Vec::with_capacity(n),
            p_a: Vec::with_capacity(n),
            p_b: Vec::with_capacity(n),
            concurrence: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, t: f64, y: [C; 2]) {
        self.times.push(t);
        self.alpha_a.push(y[0]);
        self.alpha_b.push(y[1]);
        self.p_a.push(y[0].norm_sqr());
        self.p_b.push(y[1].norm_sqr());
        self.concurrence.push(concurrence(y[0], y[1]));
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Single-excitation concurrence 2 |a b*|.
pub fn concurrence(a: C, b: C) -> f64 {
    2.0 * (a * b.conj()).norm()
}

/// One accepted step kept for interpolating delayed values.
#[derive(Debug, Clone, Copy)]
struct Segment {
    y0: [C; 2],
    y1: [C; 2],
    /// derivative just after the start
    f0: [C; 2],
    /// derivative just before the end
    f1: [C; 2],
}

impl Segment {
    /// Cubic Hermite value at fraction s of the step.
    fn at(&self, s: f64, h: f64) -> [C; 2] {
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        [0, 1].map(|i| h00 * self.y0[i] + h10 * h * self.f0[i] + h01 * self.y1[i] + h11 * h * self.f1[i])
    }
}

struct Rhs {
    gamma: f64,
    phase: C,
}

impl Rhs {
    fn eval(&self, y: [C; 2], delayed: [C; 2]) -> [C; 2] {
        let g = self.gamma;
        [
            -g * y[0] - g * self.phase * delayed[1],
            -g * y[1] - g * self.phase * delayed[0],
        ]
    }
}

fn axpy(y: [C; 2], a: f64, k: [C; 2]) -> [C; 2] {
    [y[0] + a * k[0], y[1] + a * k[1]]
}

fn check_state(t: f64, y: [C; 2]) -> Result<()> {
    if !(y[0].re.is_finite() && y[0].im.is_finite() && y[1].re.is_finite() && y[1].im.is_finite()) {
        return Err(Error::numerical(format!("non-finite amplitudes at t = {t:e} s")));
    }
    let total = y[0].norm_sqr() + y[1].norm_sqr();
    if total > 1.0 + POPULATION_SLACK {
        return Err(Error::numerical(format!(
            "P_A + P_B = {total} exceeds 1 at t = {t:e} s"
        )));
    }
    Ok(())
}

/// Method of steps with classical RK4 on a mesh aligned to the delay.
///
/// The step is shrunk so the delay is an integer number of steps; delayed
/// values then fall at fractions 0, 1/2 and 1 of a stored step and come from
/// its cubic Hermite interpolant.
pub fn integrate(p: &DdeProblem) -> Result<Trace> {
    p.validate()?;
    let rhs = Rhs { gamma: p.gamma0, phase: C::from_polar(1.0, p.theta_t) };
    let (h, lag) = if p.delay_t > 0.0 {
        let n = (p.delay_t / p.dt).ceil().max(1.0) as usize;
        (p.delay_t / n as f64, n)
    } else {
        (p.dt, 0)
    };
    let steps = (p.t_max / h - 1e-9).ceil().max(1.0) as usize;
    let mut trace = Trace::with_capacity(steps + 1);
    let mut y = [p.alpha_a0, p.alpha_b0];
    check_state(0.0, y)?;
    trace.push(0.0, y);

    if lag == 0 {
        for i in 0..steps {
            let f = |y: [C; 2]| rhs.eval(y, y);
            let k1 = f(y);
            let k2 = f(axpy(y, 0.5 * h, k1));
            let k3 = f(axpy(y, 0.5 * h, k2));
            let k4 = f(axpy(y, h, k3));
            y = [0, 1].map(|j| y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
            let t = (i + 1) as f64 * h;
            check_state(t, y)?;
            trace.push(t, y);
        }
        return Ok(trace);
    }

    let zero = [C::new(0.0, 0.0); 2];
    let mut history: VecDeque<Segment> = VecDeque::with_capacity(lag + 1);
    for i in 0..steps {
        // step i - lag of the past covers [t_i - T, t_{i+1} - T]
        let past = if i >= lag { history.pop_front() } else { None };
        let delayed = |s: f64| past.map_or(zero, |seg| seg.at(s, h));
        let (d0, dm, d1) = (delayed(0.0), delayed(0.5), delayed(1.0));
        let k1 = rhs.eval(y, d0);
        let k2 = rhs.eval(axpy(y, 0.5 * h, k1), dm);
        let k3 = rhs.eval(axpy(y, 0.5 * h, k2), dm);
        let k4 = rhs.eval(axpy(y, h, k3), d1);
        let y1 = [0, 1].map(|j| y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
        let t = (i + 1) as f64 * h;
        check_state(t, y1)?;
        history.push_back(Segment { y0: y, y1, f0: k1, f1: rhs.eval(y1, d1) });
        y = y1;
        trace.push(t, y);
    }
    Ok(trace)
}

/// Integrates independent problems, in parallel when enabled.
pub fn integrate_many(problems: &[DdeProblem]) -> Vec<Result<Trace>> {
    integrate_many_with(crate::par::Execution::default(), problems)
}

pub fn integrate_many_with(exec: crate::par::Execution, problems: &[DdeProblem]) -> Vec<Result<Trace>> {
    crate::par::map_with(exec, problems, integrate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub alpha_a: C,
    pub alpha_b: C,
    pub c_inf: f64,
}

fn phase_distance(theta: f64, target: f64) -> f64 {
    let d = (theta - target).rem_euclid(crate::constants::TWO_PI);
    d.min(crate::constants::TWO_PI - d)
}

/// Long-time amplitudes from the zero-frequency pole, present only at a node
/// (theta = pi mod 2 pi) where the symmetric combination cannot radiate.
pub fn steady_state(p: &DdeProblem) -> SteadyState {
    if phase_distance(p.theta_t, std::f64::consts::PI) > 1e-12 {
        return SteadyState { alpha_a: C::new(0.0, 0.0), alpha_b: C::new(0.0, 0.0), c_inf: 0.0 };
    }
    let alpha = (p.alpha_a0 + p.alpha_b0) / (2.0 * (1.0 + p.gamma0 * p.delay_t));
    SteadyState { alpha_a: alpha, alpha_b: alpha, c_inf: concurrence(alpha, alpha) }
}

/// Counterpart of [`steady_state`] at theta = 0 mod 2 pi, where the
/// antisymmetric combination is the one that stays trapped.
pub fn antisymmetric_steady_state(p: &DdeProblem) -> SteadyState {
    if phase_distance(p.theta_t, 0.0) > 1e-12 {
        return SteadyState { alpha_a: C::new(0.0, 0.0), alpha_b: C::new(0.0, 0.0), c_inf: 0.0 };
    }
    let alpha = (p.alpha_a0 - p.alpha_b0) / (2.0 * (1.0 + p.gamma0 * p.delay_t));
    SteadyState { alpha_a: alpha, alpha_b: -alpha, c_inf: concurrence(alpha, -alpha) }
}

/// Single-excitation density matrix in the basis |00>, |01>, |10>, |11>
/// (first label qubit A), with the emitted remainder in |00>.
pub fn density_matrix(a: C, b: C) -> Matrix4<C> {
    let psi = [C::new(0.0, 0.0), b, a, C::new(0.0, 0.0)];
    let mut rho = Matrix4::from_fn(|i, j| psi[i] * psi[j].conj());
    rho[(0, 0)] += C::new((1.0 - a.norm_sqr() - b.norm_sqr()).max(0.0), 0.0);
    rho
}

/// Two-qubit concurrence of a general density matrix.
pub fn wootters_concurrence(rho: &Matrix4<C>) -> f64 {
    // sigma_y x sigma_y
    let mut yy = Matrix4::<C>::zeros();
    yy[(0, 3)] = C::new(-1.0, 0.0);
    yy[(1, 2)] = C::new(1.0, 0.0);
    yy[(2, 1)] = C::new(1.0, 0.0);
    yy[(3, 0)] = C::new(-1.0, 0.0);
    let tilde = yy * rho.conjugate() * yy;
    let eig = SymmetricEigen::new(*rho);
    let sqrt_vals = eig.eigenvalues.map(|l| C::new(l.max(0.0).sqrt(), 0.0));
    let v = eig.eigenvectors;
    let sqrt_rho = v * Matrix4::from_diagonal(&sqrt_vals) * v.adjoint();
    let r = sqrt_rho * tilde * sqrt_rho;
    let r = (r + r.adjoint()) * C::new(0.5, 0.0);
    let mut lambdas: Vec<f64> = SymmetricEigen::new(r)
        .eigenvalues
        .iter()
        .map(|m| m.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}
