//! Single partial waves `e^{-kqz} e^{i(kx'-wt)}` and their decay constants.
//!
//! Internally the amplitudes are written as (U, W, P) with u1 = U, u3 = iW and
//! psi = i P sqrt(c44/mu11). With that substitution every coefficient is real
//! and the matrix depends on the material only through a few ratios.

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Coupling;
use crate::constants::MU0;
use crate::materials::RotatedConstants;
use crate::poly::Poly;
use crate::{Error, Result};

type C = Complex64;

/// Material ratios at a given phase velocity.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Reduced {
    pub cp: f64,
    pub c11: f64,
    pub c12: f64,
    pub e31: f64,
    pub e33: f64,
    pub mu_ratio: f64,
    /// rho v^2 / c44
    pub x: f64,
    /// 0 drops the back-action of the magnetic potential on the lattice
    pub kappa: f64,
}

impl Reduced {
    pub fn new(rc: &RotatedConstants, v: f64, coupling: Coupling) -> Self {
        let root = (rc.mu11 * rc.c44).sqrt();
        Reduced {
            cp: rc.c11_prime / rc.c44,
            c11: rc.c11 / rc.c44,
            c12: rc.c12 / rc.c44,
            e31: rc.q31 / root,
            e33: rc.q33 / root,
            mu_ratio: MU0 / rc.mu11,
            x: rc.rho * v * v / rc.c44,
            kappa: match coupling {
                Coupling::OneWay => 0.0,
                Coupling::Full => 1.0,
            },
        }
    }

    pub fn matrix(&self, q: C) -> Matrix3<C> {
        let q2 = q * q;
        let one = C::new(1.0, 0.0);
        Matrix3::new(
            self.cp - self.x - q2,
            -(self.c12 + 1.0) * q,
            -self.kappa * self.e31 * q,
            (self.c12 + 1.0) * q,
            one - self.c11 * q2 - self.x,
            -self.kappa * self.e33 * q2,
            -self.e31 * q,
            self.e33 * q2,
            one - q2,
        )
    }

    /// det(matrix(q)) as a polynomial in s = q^2.
    pub fn determinant_in_s(&self) -> Poly {
        let p = |c: &[f64]| Poly::new(c);
        let a = [
            [
                p(&[self.cp - self.x, 0.0, -1.0]),
                p(&[0.0, -(self.c12 + 1.0)]),
                p(&[0.0, -self.kappa * self.e31]),
            ],
            [
                p(&[0.0, self.c12 + 1.0]),
                p(&[1.0 - self.x, 0.0, -self.c11]),
                p(&[0.0, 0.0, -self.kappa * self.e33]),
            ],
            [
                p(&[0.0, -self.e31]),
                p(&[0.0, 0.0, self.e33]),
                p(&[1.0, 0.0, -1.0]),
            ],
        ];
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
            a[r1][c1].mul(&a[r2][c2]).sub(&a[r1][c2].mul(&a[r2][c1]))
        };
        let det_q = a[0][0]
            .mul(&minor(1, 2, 1, 2))
            .sub(&a[0][1].mul(&minor(1, 2, 0, 2)))
            .add(&a[0][2].mul(&minor(1, 2, 0, 1)));
        // only even powers survive
        Poly(det_q.0.iter().step_by(2).copied().collect())
    }
}

/// One decaying partial wave in the reduced (U, W, P) amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialWave {
    pub q: C,
    pub vector: [C; 3],
}

impl PartialWave {
    /// Physical amplitudes (u1, u3, psi) per unit U; psi in A/m.
    pub fn amplitudes(&self, rc: &RotatedConstants) -> [C; 3] {
        let i = C::i();
        let scale = (rc.c44 / rc.mu11).sqrt();
        [self.vector[0], i * self.vector[1], i * self.vector[2] * scale]
    }
}

/// Coefficient matrix of the wave equations for a single partial wave with
/// physical amplitudes (u1, u3, psi), each row divided by k^2.
///
/// Rows 1-2 are the equations of motion (Pa), row 3 is Gauss's law written so
/// the pure magnetic entry is mu11 (q^2 - 1).
pub fn characteristic_matrix(rc: &RotatedConstants, v: f64, q: C) -> Matrix3<C> {
    characteristic_matrix_with(rc, v, q, Coupling::default())
}

pub fn characteristic_matrix_with(
    rc: &RotatedConstants,
    v: f64,
    q: C,
    coupling: Coupling,
) -> Matrix3<C> {
    let i = C::i();
    let kappa = Reduced::new(rc, v, coupling).kappa;
    let rv2 = rc.rho * v * v;
    let q2 = q * q;
    let c1244 = rc.c12 + rc.c44;
    Matrix3::new(
        rv2 - rc.c11_prime + rc.c44 * q2,
        -i * q * c1244,
        -i * kappa * rc.q31 * q,
        -i * q * c1244,
        rv2 - rc.c44 + rc.c11 * q2,
        kappa * rc.q33 * q2,
        i * rc.q31 * q,
        -rc.q33 * q2,
        rc.mu11 * (q2 - 1.0),
    )
}

/// Null vector of a rank-2 3x3 matrix from the best conditioned pair of rows.
pub(crate) fn null_vector(m: &Matrix3<C>) -> [C; 3] {
    let row = |r: usize| [m[(r, 0)], m[(r, 1)], m[(r, 2)]];
    let cross = |a: [C; 3], b: [C; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let norm = |v: &[C; 3]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let best = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .map(|(a, b)| cross(row(a), row(b)))
        .max_by(|a, b| norm(a).total_cmp(&norm(b)))
        .expect("three row pairs");
    let n = norm(&best);
    if n == 0.0 {
        return [C::new(0.0, 0.0); 3];
    }
    // fixed gauge: first non-negligible component real and positive, so the
    // vector varies continuously with the velocity for real roots
    let lead = best
        .iter()
        .find(|c| c.norm() > 1e-6 * n)
        .copied()
        .unwrap_or(C::new(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    best.map(|c| c * phase / n)
}

fn principal_q(s: C) -> C {
    let q = s.sqrt();
    if q.re < 0.0 { -q } else { q }
}

/// Squared decay constants, complex pairs made exactly conjugate.
fn s_roots(red: &Reduced) -> Vec<C> {
    let cubic = red.determinant_in_s();
    let (mut raw, extra) = if red.kappa == 0.0 {
        // Gauss's law alone admits the Laplace solution q = 1
        (cubic.deflate(1.0).roots(), Some(C::new(1.0, 0.0)))
    } else {
        (cubic.roots(), None)
    };
    let mut out = Vec::with_capacity(3);
    raw.sort_by(|a, b| b.im.total_cmp(&a.im));
    let mut used = vec![false; raw.len()];
    for i in 0..raw.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let s = raw[i];
        if s.im.abs() <= 1e-12 * s.norm().max(1e-300) {
            out.push(C::new(s.re, 0.0));
            continue;
        }
        // partner: the unused root closest to conj(s)
        let partner = (0..raw.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (raw[a] - s.conj()).norm().total_cmp(&(raw[b] - s.conj()).norm()));
        if let Some(j) = partner {
            used[j] = true;
        }
        out.push(s.conj());
        out.push(s);
    }
    out.extend(extra);
    out
}

/// Decaying partial waves at phase velocity `v`, sorted by Re(q) then Im(q).
pub fn decay_roots(rc: &RotatedConstants, v: f64) -> Result<Vec<PartialWave>> {
    decay_roots_with(rc, v, Coupling::default())
}

pub fn decay_roots_with(rc: &RotatedConstants, v: f64, coupling: Coupling) -> Result<Vec<PartialWave>> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::input(format!("phase velocity must be positive, got {v}")));
    }
    let red = Reduced::new(rc, v, coupling);
    let mut waves: Vec<PartialWave> = Vec::with_capacity(3);
    for s in s_roots(&red) {
        if s.im > 0.0 {
            // added as the partner of its conjugate
            continue;
        }
        let q = principal_q(s);
        if !(q.re > 1e-12) {
            continue;
        }
        let m = red.matrix(q);
        let vector = null_vector(&m);
        let residual = (m * nalgebra::Vector3::from(vector)).norm();
        let scale = m.norm().max(1.0);
        if !(residual <= 1e-8 * scale) {
            return Err(Error::numerical(format!(
                "null vector residual {residual:.3e} at q = {q}"
            )));
        }
        waves.push(PartialWave { q, vector });
        if s.im < 0.0 {
            waves.push(PartialWave {
                q: q.conj(),
                vector: vector.map(|c| c.conj()),
            });
        }
    }
    waves.sort_by(|a, b| a.q.re.total_cmp(&b.q.re).then(a.q.im.total_cmp(&b.q.im)));
    Ok(waves)
}
