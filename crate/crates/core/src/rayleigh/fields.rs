use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Coupling, RayleighMode};
use crate::constants::MU0;
use crate::materials::{rotate_to_110, MaterialParams};

type C = Complex64;

/// Complex fields at one point; the physical field is the real part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x_prime: f64,
    pub z: f64,
    pub t: f64,
    pub u1_prime: C,
    pub u3: C,
    pub psi: C,
    pub b_xprime: C,
    pub b_z: C,
    pub s11_prime: C,
    pub s33: C,
    pub s13: C,
}

/// Fields of the mode with amplitude `u0` at (x', z, t). Negative z is vacuum.
pub fn evaluate_fields(
    mode: &RayleighMode,
    m: &MaterialParams,
    u0: f64,
    x_prime: f64,
    z: f64,
    t: f64,
) -> FieldSample {
    let k = mode.k;
    let i = C::i();
    let carrier = (i * (k * x_prime - mode.omega * t)).exp() * u0;
    let zero = C::new(0.0, 0.0);
    let mut s = FieldSample {
        x_prime,
        z,
        t,
        u1_prime: zero,
        u3: zero,
        psi: zero,
        b_xprime: zero,
        b_z: zero,
        s11_prime: zero,
        s33: zero,
        s13: zero,
    };
    if z < 0.0 {
        let psi_surface: C = mode.waves.iter().map(|w| w.psi).sum();
        s.psi = psi_surface * (k * z).exp() * carrier;
        s.b_xprime = -MU0 * i * k * s.psi;
        s.b_z = -MU0 * k * s.psi;
        return s;
    }
    let mut dpsi_dz = zero;
    for w in &mode.waves {
        let decay = (-k * w.q * z).exp() * carrier;
        s.u1_prime += w.u1 * decay;
        s.u3 += w.u3 * decay;
        s.psi += w.psi * decay;
        dpsi_dz += -k * w.q * w.psi * decay;
        s.s33 += -k * w.q * w.u3 * decay;
        s.s13 += 0.5 * (-k * w.q * w.u1 + i * k * w.u3) * decay;
    }
    s.s11_prime = i * k * s.u1_prime;
    if !mode.magnetically_inert {
        s.b_xprime = -m.mu11 * i * k * s.psi;
        s.b_z = -m.mu11 * dpsi_dz + m.q31 * s.s11_prime + m.q33 * s.s33;
    }
    s
}

/// Surface-normal stresses (T13, T33) in Pa at (x', z, t), z >= 0.
pub fn evaluate_stress(
    mode: &RayleighMode,
    m: &MaterialParams,
    u0: f64,
    x_prime: f64,
    z: f64,
    t: f64,
) -> (C, C) {
    let rc = rotate_to_110(m);
    let f = evaluate_fields(mode, m, u0, x_prime, z, t);
    let t13 = 2.0 * rc.c44 * f.s13;
    let mut t33 = rc.c12 * f.s11_prime + rc.c11 * f.s33;
    if mode.coupling == Coupling::Full {
        let k = mode.k;
        let carrier = (C::i() * (k * x_prime - mode.omega * t)).exp() * u0;
        let dpsi_dz: C = mode
            .waves
            .iter()
            .map(|w| -k * w.q * w.psi * (-k * w.q * z).exp() * carrier)
            .sum();
        t33 += rc.q33 * dpsi_dz;
    }
    (t13, t33)
}
