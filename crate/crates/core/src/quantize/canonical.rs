//! Two-stage diagonalization of the per-depth kinetic and potential forms.
//!
//! Coordinates are (u1, u3, psi~) with psi~ = psi sqrt(mu11/c44), and the
//! potential form is divided by c44, so every entry is dimensionless.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use crate::materials::{rotate_to_110, MaterialParams};
use crate::rayleigh::RayleighMode;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalDiagnostics {
    pub z: f64,
    /// Derivative couplings g1..g6 (g5 in reduced potential units).
    pub g: [f64; 6],
    pub g_matrix: Matrix3<f64>,
    pub y_matrix: Matrix3<f64>,
    pub q1: Matrix3<f64>,
    pub q2: Matrix3<f64>,
    pub lambda_1: Vector3<f64>,
    pub lambda_2: Vector3<f64>,
    pub lambda_p: Vector3<f64>,
    pub lambda_k: Vector3<f64>,
    /// max |off-diagonal| / max |diagonal| over both transformed forms
    pub offdiag_residual: f64,
    /// max |Q^T Q - I|
    pub q1_orthogonality_defect: f64,
    pub q2_orthogonality_defect: f64,
    /// A zero eigenvalue of G blocks the second stage.
    pub degenerate: bool,
}

fn offdiag_ratio(m: &Matrix3<f64>) -> f64 {
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                diag = diag.max(m[(i, j)].abs());
            } else {
                off = off.max(m[(i, j)].abs());
            }
        }
    }
    if diag == 0.0 { 0.0 } else { off / diag }
}

fn orthogonality_defect(q: &Matrix3<f64>) -> f64 {
    (q.transpose() * q - Matrix3::identity()).abs().max()
}

fn real_null_vector(m: &Matrix3<f64>) -> Vector3<f64> {
    let rows = [m.row(0).transpose(), m.row(1).transpose(), m.row(2).transpose()];
    let best = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .map(|(a, b)| rows[a].cross(&rows[b]))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("three row pairs");
    let n = best.norm();
    if n == 0.0 { best } else { best / n }
}

/// Builds G and Y at depth `z` and runs both diagonalization stages.
pub fn verify_canonical_form(mode: &RayleighMode, m: &MaterialParams, z: f64) -> Result<CanonicalDiagnostics> {
    let p = mode
        .canonical
        .ok_or_else(|| Error::input("the canonical form needs a complex pair of decay constants"))?;
    if !(z >= 0.0) {
        return Err(Error::input(format!("depth must be non-negative, got {z}")));
    }
    let rc = rotate_to_110(m);
    let k = mode.k;
    let phi = k * p.q_beta * z + p.theta;
    let (cp, c11, c12) = (rc.c11_prime / rc.c44, rc.c11 / rc.c44, rc.c12 / rc.c44);
    let root = (rc.mu11 * rc.c44).sqrt();
    let (e31, e33) = if mode.magnetically_inert { (0.0, 0.0) } else { (rc.q31 / root, rc.q33 / root) };

    // psi / (i psi0) with the displacement envelope divided out
    let lap = (-k * (1.0 - p.q_alpha) * z).exp();
    let f = 2.0 * p.a_coef * (phi + p.tau).cos() + p.a3_coef * lap;
    let df = 2.0 * p.a_coef * (-p.q_alpha * (phi + p.tau).cos() - p.q_beta * (phi + p.tau).sin())
        - p.a3_coef * lap;

    let g1 = -phi.cos() / (p.gamma_abs * (phi + p.xi).cos());
    let g2 = -p.q_alpha - p.q_beta * phi.tan();
    let g3 = p.gamma_abs * (phi + p.xi).cos() / phi.cos();
    let g4 = -p.q_alpha - p.q_beta * (phi + p.xi).tan();
    // g5 = -(q33/mu11) F / (2 cos phi); reduced by sqrt(mu11/c44)
    let g5 = -e33 * f / (2.0 * phi.cos());
    let g6 = if f == 0.0 { 0.0 } else { df / f };

    let g_matrix = Matrix3::new(
        (g2 + g3).powi(2) - g5 * g5,
        0.0,
        0.0,
        0.0,
        cp * g1 * g1 + c11 * g4 * g4 + 2.0 * c12 * g1 * g4,
        (e31 * g1 + e33 * g4) * g6,
        0.0,
        (e31 * g1 + e33 * g4) * g6,
        -g6 * g6,
    );

    let eig = SymmetricEigen::new(g_matrix);
    let q1 = eig.eigenvectors;
    let lambda_1 = eig.eigenvalues;
    let kinetic = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0));
    let y_matrix = q1.transpose() * kinetic * q1;

    let lmax = lambda_1.abs().max();
    let degenerate = lambda_1.iter().any(|l| l.abs() <= 1e-12 * lmax);
    let mut diag = CanonicalDiagnostics {
        z,
        g: [g1, g2, g3, g4, g5, g6],
        g_matrix,
        y_matrix,
        q1,
        q2: Matrix3::identity(),
        lambda_1,
        lambda_2: Vector3::zeros(),
        lambda_p: lambda_1,
        lambda_k: y_matrix.diagonal(),
        offdiag_residual: offdiag_ratio(&y_matrix),
        q1_orthogonality_defect: orthogonality_defect(&q1),
        q2_orthogonality_defect: 0.0,
        degenerate,
    };
    if degenerate {
        return Ok(diag);
    }

    let inv = Matrix3::from_diagonal(&lambda_1.map(|l| 1.0 / l));
    let m2 = inv * y_matrix;
    let mut q2 = Matrix3::zeros();
    let mut lambda_2 = Vector3::zeros();
    for (j, ev) in m2.complex_eigenvalues().iter().enumerate() {
        if ev.im.abs() > 1e-9 * ev.norm().max(1e-300) {
            return Err(Error::numerical(format!("complex eigenvalue {ev} in the second stage at z = {z}")));
        }
        lambda_2[j] = ev.re;
        let v = real_null_vector(&(m2 - Matrix3::identity() * ev.re));
        q2.set_column(j, &v);
    }
    let lambda_k_full = q2.transpose() * y_matrix * q2;
    let lambda_p_full = q2.transpose() * Matrix3::from_diagonal(&lambda_1) * q2;
    diag.q2 = q2;
    diag.lambda_2 = lambda_2;
    diag.lambda_k = lambda_k_full.diagonal();
    diag.lambda_p = lambda_p_full.diagonal();
    diag.offdiag_residual = offdiag_ratio(&lambda_k_full).max(offdiag_ratio(&lambda_p_full));
    diag.q2_orthogonality_defect = orthogonality_defect(&q2);
    Ok(diag)
}
