//! Physical constants (CODATA 2018 exact or recommended values).

use std::f64::consts::PI;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Planck constant, J s.
pub const H_PLANCK: f64 = 6.626_070_15e-34;
/// Vacuum permeability, N/A^2.
pub const MU0: f64 = 4.0e-7 * PI;
/// Magnetic flux quantum h/2e, Wb.
pub const PHI0: f64 = 2.067_833_848e-15;
/// Speed of light, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

pub const TWO_PI: f64 = 2.0 * PI;
