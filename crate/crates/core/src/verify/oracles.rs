//! Reference computations that share no code with the solvers they check.

use num_complex::Complex64;

use crate::materials::MaterialParams;
use crate::rayleigh::{ModeWave, RayleighMode};
use crate::constants::MU0;

type C = Complex64;

const VOIGT: [[usize; 3]; 3] = [[0, 5, 4], [5, 1, 3], [4, 3, 2]];
const PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

/// Cubic stiffness in Voigt form rotated by 45 degrees about [001] through the
/// full fourth-rank tensor.
pub fn rotated_cubic_stiffness(c11: f64, c12: f64, c44: f64) -> [[f64; 6]; 6] {
    let mut voigt = [[0.0; 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            voigt[i][j] = if i == j { c11 } else { c12 };
        }
        voigt[i + 3][i + 3] = c44;
    }
    let tensor = |i: usize, j: usize, k: usize, l: usize| voigt[VOIGT[i][j]][VOIGT[k][l]];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a = [[s, s, 0.0], [-s, s, 0.0], [0.0, 0.0, 1.0]];
    let rotated = |i: usize, j: usize, k: usize, l: usize| {
        let mut sum = 0.0;
        for p in 0..3 {
            for q in 0..3 {
                for r in 0..3 {
                    for t in 0..3 {
                        sum += a[i][p] * a[j][q] * a[k][r] * a[l][t] * tensor(p, q, r, t);
                    }
                }
            }
        }
        sum
    };
    let mut out = [[0.0; 6]; 6];
    for (m, &(i, j)) in PAIRS.iter().enumerate() {
        for (n, &(k, l)) in PAIRS.iter().enumerate() {
            out[m][n] = rotated(i, j, k, l);
        }
    }
    out
}

/// Rayleigh velocity of an isotropic solid from the classical secular
/// equation, written as a cubic in eta = (v / v_s)^2 after removing eta = 0.
pub fn classical_rayleigh_velocity(rho: f64, c11: f64, c44: f64) -> f64 {
    let k2 = c44 / c11;
    let g = |eta: f64| eta * eta * eta - 8.0 * eta * eta + (24.0 - 16.0 * k2) * eta - 16.0 * (1.0 - k2);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi) * c44 / rho).sqrt()
}

/// Depth-integrated energy terms per unit area at unit amplitude, summed in
/// closed form over pairs of partial waves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEnergy {
    pub kinetic: f64,
    pub elastic: f64,
    pub magnetic: f64,
    pub cross: f64,
    pub vacuum: f64,
}

impl ClosedFormEnergy {
    pub fn total(&self) -> f64 {
        self.kinetic + self.elastic + self.magnetic + self.cross + self.vacuum
    }
}

/// Integral over z >= 0 of |F|^2 for F a sum of e^{-k q z} terms is
/// sum F_n F_m* / (k (q_n + q_m*)); mixed products work the same way.
pub fn closed_form_energy(mode: &RayleighMode, m: &MaterialParams) -> ClosedFormEnergy {
    let k = mode.k;
    let i = C::i();
    let c = rotated_cubic_stiffness(m.c11, m.c12, m.c44);
    let (cp, c11, c12, c44) = (c[0][0], c[2][2], c[0][2], c[4][4]);
    // Re of the depth integral of f g*
    let overlap = |f: &dyn Fn(&ModeWave) -> C, g: &dyn Fn(&ModeWave) -> C| {
        let mut sum = C::new(0.0, 0.0);
        for a in &mode.waves {
            for b in &mode.waves {
                sum += f(a) * g(b).conj() / (k * (a.q + b.q.conj()));
            }
        }
        sum.re
    };
    let u1 = |w: &ModeWave| w.u1;
    let u3 = |w: &ModeWave| w.u3;
    let s11 = |w: &ModeWave| i * k * w.u1;
    let s33 = |w: &ModeWave| -k * w.q * w.u3;
    let shear = |w: &ModeWave| -k * w.q * w.u1 + i * k * w.u3;
    let px = |w: &ModeWave| i * k * w.psi;
    let pz = |w: &ModeWave| -k * w.q * w.psi;

    let kinetic = m.rho * mode.omega * mode.omega * (overlap(&u1, &u1) + overlap(&u3, &u3));
    let elastic = cp * overlap(&s11, &s11)
        + c44 * overlap(&shear, &shear)
        + c11 * overlap(&s33, &s33)
        + 2.0 * c12 * overlap(&s11, &s33);
    if mode.magnetically_inert {
        return ClosedFormEnergy { kinetic, elastic, magnetic: 0.0, cross: 0.0, vacuum: 0.0 };
    }
    let magnetic = -m.mu11 * (overlap(&px, &px) + overlap(&pz, &pz));
    let drive = |w: &ModeWave| m.q31 * s11(w) + m.q33 * s33(w);
    let cross = 2.0 * overlap(&drive, &pz);
    let psi0: C = mode.waves.iter().map(|w| w.psi).sum();
    // |grad psi|^2 = 2 k^2 |psi0|^2 e^{2kz} above the surface
    let vacuum = -MU0 * k * psi0.norm_sqr();
    ClosedFormEnergy { kinetic, elastic, magnetic, cross, vacuum }
}
