//! Surface conditions: T13 = T33 = 0 and continuity of psi and B3 at z = 0.

use nalgebra::Matrix3;
use num_complex::Complex64;

use super::partial::{decay_roots_with, PartialWave, Reduced};
use super::Coupling;
use crate::materials::RotatedConstants;
use crate::{Error, Result};

type C = Complex64;

/// Rows: T13, T33, B3 jump (vacuum potential eliminated). One column per wave.
pub(crate) fn boundary_matrix(red: &Reduced, waves: &[PartialWave]) -> Result<Matrix3<C>> {
    if waves.len() != 3 {
        return Err(Error::numerical(format!(
            "expected three decaying partial waves, found {}",
            waves.len()
        )));
    }
    let mut b = Matrix3::zeros();
    for (j, w) in waves.iter().enumerate() {
        let [u, wv, p] = w.vector;
        let q = w.q;
        b[(0, j)] = q * u + wv;
        b[(1, j)] = red.c12 * u - red.c11 * q * wv - red.kappa * red.e33 * q * p;
        b[(2, j)] = red.e31 * u - red.e33 * q * wv + (red.mu_ratio + q) * p;
    }
    Ok(b)
}

/// Determinant of the surface conditions over all decaying partial waves.
///
/// Each column is built from a unit amplitude vector and every row is
/// dimensionless, so the magnitude is O(1) away from a root.
pub fn boundary_determinant(rc: &RotatedConstants, v: f64) -> Result<C> {
    boundary_determinant_with(rc, v, Coupling::default())
}

pub fn boundary_determinant_with(rc: &RotatedConstants, v: f64, coupling: Coupling) -> Result<C> {
    let red = Reduced::new(rc, v, coupling);
    let waves = decay_roots_with(rc, v, coupling)?;
    Ok(boundary_matrix(&red, &waves)?.determinant())
}

/// Real function sharing its zeros with the determinant, with |det|.
///
/// With a conjugate pair of waves the determinant is purely imaginary, with
/// real waves it is real. `None` where fewer than three partial waves decay,
/// which happens for anisotropic media below the shear velocity.
pub(crate) fn signed_determinant(
    rc: &RotatedConstants,
    v: f64,
    coupling: Coupling,
) -> Result<Option<(f64, f64)>> {
    let red = Reduced::new(rc, v, coupling);
    let waves = decay_roots_with(rc, v, coupling)?;
    if waves.len() != 3 {
        return Ok(None);
    }
    let det = boundary_matrix(&red, &waves)?.determinant();
    let paired = waves.iter().any(|w| w.q.im != 0.0);
    let f = if paired { det.im } else { det.re };
    Ok(Some((f, det.norm())))
}
