//! Closed-form amplitudes over the first three delay windows for a start with
//! only qubit A excited.

use num_complex::Complex64;

use super::DdeProblem;
use crate::{Error, Result};

type C = Complex64;

#[derive(Debug, Clone, Copy)]
pub struct AnalyticSegments {
    gamma: f64,
    delay_t: f64,
    phase: C,
    a0: C,
    segments: usize,
}

/// Piecewise solution valid on [0, n T] for n <= 3.
pub fn analytic_segments(p: &DdeProblem, segments: usize) -> Result<AnalyticSegments> {
    if !(1..=3).contains(&segments) {
        return Err(Error::input(format!("analytic segments are available up to 3, asked for {segments}")));
    }
    if p.alpha_b0.norm() != 0.0 {
        return Err(Error::input("analytic segments need qubit B to start in its ground state"));
    }
    if !(p.delay_t > 0.0) {
        return Err(Error::input("analytic segments need a positive delay"));
    }
    if !(p.gamma0 > 0.0) {
        return Err(Error::input("gamma0 must be positive"));
    }
    Ok(AnalyticSegments {
        gamma: p.gamma0,
        delay_t: p.delay_t,
        phase: C::from_polar(1.0, p.theta_t),
        a0: p.alpha_a0,
        segments,
    })
}

impl AnalyticSegments {
    pub fn t_end(&self) -> f64 {
        self.segments as f64 * self.delay_t
    }

    /// (alpha_A, alpha_B) at time t, or None outside [0, n T].
    pub fn evaluate(&self, t: f64) -> Option<(C, C)> {
        if !(t >= 0.0) || t > self.t_end() * (1.0 + 1e-12) {
            return None;
        }
        let (g, d) = (self.gamma, self.delay_t);
        let mut a = self.a0 * (-g * t).exp();
        let mut b = C::new(0.0, 0.0);
        if t > d {
            let s = t - d;
            b = -g * self.phase * self.a0 * s * (-g * s).exp();
        }
        if t > 2.0 * d {
            let s = t - 2.0 * d;
            a += 0.5 * g * g * self.phase * self.phase * self.a0 * s * s * (-g * s).exp();
        }
        Some((a, b))
    }
}
