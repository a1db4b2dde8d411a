//! Energy of the surface mode, single-phonon normalization and zero-point fields.
//!
//! Fields are taken as F + F* with F the complex amplitude held by the mode,
//! so a time average of a product is <fg> = 2 Re(F G*). The energy functional
//! is the kinetic term, the elastic and magnetic terms (the latter negative)
//! and the strain-potential cross term, integrated over an L x L cross
//! section and the full depth, vacuum included.

mod canonical;

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use canonical::{verify_canonical_form, CanonicalDiagnostics};

use crate::constants::{HBAR, MU0, TWO_PI};
use crate::materials::{rotate_to_110, MaterialParams};
use crate::rayleigh::{evaluate_fields, solve_mode_at_frequency, RayleighMode};
use crate::{Error, Result};

type C = Complex64;

/// Operating point fixing the energy convention weight.
pub const CALIBRATION_FREQ_HZ: f64 = 10e9;
pub const CALIBRATION_WIDTH_M: f64 = 1e-6;
pub const CALIBRATION_U0K_M: f64 = 8.71e-16;

/// Depth of the integration window in units of the slowest decay length.
pub const DEPTH_DECAY_LENGTHS: f64 = 40.0;

pub const CONVENTION: &str = "fields F + F*, <fg> = 2 Re(F G*), energy weight w with w (E_kin + E_pot) = hbar omega";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizedMode {
    pub mode: RayleighMode,
    /// m
    pub lateral_width_l: f64,
    /// m
    pub u0k: f64,
    /// T
    pub b_xprime_zp: f64,
    pub b_z_zp: f64,
    /// m
    pub u_zp: f64,
    /// J
    pub energy_per_phonon: f64,
    pub energy_weight: f64,
}

/// Time-averaged energy densities at one depth, J/m^3.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyDensity {
    pub kinetic: f64,
    pub potential: f64,
    pub elastic: f64,
    pub magnetic: f64,
    pub cross: f64,
}

/// Local amplitudes per unit U0 at x' = 0, t = 0.
#[derive(Debug, Clone, Copy)]
struct Local {
    u1: C,
    u3: C,
    s11: C,
    s33: C,
    shear: C,
    psi_x: C,
    psi_z: C,
}

fn local(mode: &RayleighMode, z: f64) -> Local {
    let k = mode.k;
    let i = C::i();
    let zero = C::new(0.0, 0.0);
    if z < 0.0 {
        let psi: C = mode.waves.iter().map(|w| w.psi).sum::<C>() * (k * z).exp();
        return Local {
            u1: zero,
            u3: zero,
            s11: zero,
            s33: zero,
            shear: zero,
            psi_x: i * k * psi,
            psi_z: k * psi,
        };
    }
    let mut l = Local { u1: zero, u3: zero, s11: zero, s33: zero, shear: zero, psi_x: zero, psi_z: zero };
    for w in &mode.waves {
        let e = (-k * w.q * z).exp();
        l.u1 += w.u1 * e;
        l.u3 += w.u3 * e;
        l.s33 += -k * w.q * w.u3 * e;
        l.shear += (-k * w.q * w.u1 + i * k * w.u3) * e;
        l.psi_x += i * k * w.psi * e;
        l.psi_z += -k * w.q * w.psi * e;
    }
    l.s11 = i * k * l.u1;
    l
}

/// Time-averaged kinetic and potential energy densities at depth `z` for
/// amplitude `u0`. Negative z is the vacuum above the surface.
pub fn energy_densities(mode: &RayleighMode, m: &MaterialParams, u0: f64, z: f64) -> EnergyDensity {
    let l = local(mode, z);
    let a2 = u0 * u0;
    if z < 0.0 {
        let magnetic = -MU0 * (l.psi_x.norm_sqr() + l.psi_z.norm_sqr()) * a2;
        return EnergyDensity { potential: magnetic, magnetic, ..Default::default() };
    }
    let rc = rotate_to_110(m);
    let w2 = mode.omega * mode.omega;
    let kinetic = rc.rho * w2 * (l.u1.norm_sqr() + l.u3.norm_sqr());
    let elastic = rc.c11_prime * l.s11.norm_sqr()
        + rc.c44 * l.shear.norm_sqr()
        + rc.c11 * l.s33.norm_sqr()
        + 2.0 * rc.c12 * (l.s11 * l.s33.conj()).re;
    let magnetic = -rc.mu11 * (l.psi_x.norm_sqr() + l.psi_z.norm_sqr());
    let cross = 2.0 * ((rc.q31 * l.s11 + rc.q33 * l.s33) * l.psi_z.conj()).re;
    EnergyDensity {
        kinetic: kinetic * a2,
        potential: (elastic + magnetic + cross) * a2,
        elastic: elastic * a2,
        magnetic: magnetic * a2,
        cross: cross * a2,
    }
}

/// Depth integrals of the energy densities per unit area at unit amplitude, J/m^2 per m^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepthEnergy {
    pub solid: EnergyDensity,
    /// Magnetic energy of the vacuum above the surface.
    pub vacuum: f64,
}

impl DepthEnergy {
    pub fn kinetic(&self) -> f64 {
        self.solid.kinetic
    }

    pub fn potential(&self) -> f64 {
        self.solid.potential + self.vacuum
    }

    pub fn total(&self) -> f64 {
        self.kinetic() + self.potential()
    }

    /// Potential energy stored in the lattice alone.
    pub fn mechanical_potential(&self) -> f64 {
        self.solid.elastic
    }
}

const PANELS: usize = 16;

fn integrate_panels(f: impl Fn(f64) -> f64, a: f64, b: f64, scale: f64) -> Result<f64> {
    let h = (b - a) / PANELS as f64;
    let tol = 1e-15 * scale * (b - a).abs() / PANELS as f64;
    let mut sum = 0.0;
    let mut err = 0.0;
    for p in 0..PANELS {
        let lo = a + h * p as f64;
        let out = quadrature::double_exponential::integrate(&f, lo, lo + h, tol);
        sum += out.integral;
        err += out.error_estimate;
    }
    if !sum.is_finite() || err > 1e-10 * sum.abs().max(scale * (b - a).abs() * 1e-6) {
        return Err(Error::Quadrature(format!("integral {sum:e} with error estimate {err:e}")));
    }
    Ok(sum)
}

/// Adaptive depth quadrature of the energy densities at unit amplitude.
pub fn depth_energy(mode: &RayleighMode, m: &MaterialParams) -> Result<DepthEnergy> {
    let zmax = DEPTH_DECAY_LENGTHS / (mode.k * mode.slowest_decay());
    let at0 = energy_densities(mode, m, 1.0, 0.0);
    let scale = at0.kinetic.abs().max(at0.elastic.abs()).max(f64::MIN_POSITIVE);
    let part = |pick: fn(&EnergyDensity) -> f64| {
        integrate_panels(|z| pick(&energy_densities(mode, m, 1.0, z)), 0.0, zmax, scale)
    };
    let solid = EnergyDensity {
        kinetic: part(|e| e.kinetic)?,
        potential: part(|e| e.potential)?,
        elastic: part(|e| e.elastic)?,
        magnetic: part(|e| e.magnetic)?,
        cross: part(|e| e.cross)?,
    };
    let vacuum = integrate_panels(
        |z| energy_densities(mode, m, 1.0, -z).potential,
        0.0,
        DEPTH_DECAY_LENGTHS / mode.k,
        scale,
    )?;
    Ok(DepthEnergy { solid, vacuum })
}

/// Per-unit-area energy of the mode at unit amplitude summed over both regions.
fn unit_energy(mode: &RayleighMode, m: &MaterialParams) -> Result<f64> {
    let e = depth_energy(mode, m)?.total();
    if !(e > 0.0) {
        return Err(Error::numerical(format!("non-positive mode energy {e:e}")));
    }
    Ok(e)
}

/// Weight w in w (E_kin + E_pot) = hbar omega, fixed once at the calibration point.
pub fn energy_weight() -> f64 {
    static WEIGHT: OnceLock<f64> = OnceLock::new();
    *WEIGHT.get_or_init(|| {
        let m = MaterialParams::terfenol_d();
        let mode = solve_mode_at_frequency(&m, CALIBRATION_FREQ_HZ)
            .expect("built-in material has a surface mode");
        let e = unit_energy(&mode, &m).expect("built-in material has a finite mode energy");
        let l2 = CALIBRATION_WIDTH_M * CALIBRATION_WIDTH_M;
        HBAR * mode.omega / (CALIBRATION_U0K_M * CALIBRATION_U0K_M * l2 * e)
    })
}

/// Amplitude for which the mode in an L x L cross section holds one phonon.
pub fn normalize_single_phonon(mode: &RayleighMode, m: &MaterialParams, l: f64) -> Result<QuantizedMode> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::input(format!("lateral width must be positive, got {l}")));
    }
    let weight = energy_weight();
    let e = unit_energy(mode, m)?;
    let energy_per_phonon = HBAR * mode.omega;
    let u0k = (energy_per_phonon / (weight * e * l * l)).sqrt();
    let (b_xprime_zp, b_z_zp) = zero_point_fields(mode, m, u0k);
    let [u1, u3, _] = quantized_field_coefficients(mode, m, 0.0);
    let u_zp = u0k * u1.norm().max(u3.norm());
    Ok(QuantizedMode {
        mode: mode.clone(),
        lateral_width_l: l,
        u0k,
        b_xprime_zp,
        b_z_zp,
        u_zp,
        energy_per_phonon,
        energy_weight: weight,
    })
}

/// Signed zero-point induction (B_x', B_z) at the surface for amplitude `u0k`.
pub fn zero_point_fields(mode: &RayleighMode, m: &MaterialParams, u0k: f64) -> (f64, f64) {
    if mode.magnetically_inert {
        return (0.0, 0.0);
    }
    match mode.canonical {
        Some(p) => {
            let pre = 2.0 * mode.k * u0k * m.q33;
            let bx = pre * (p.a_coef * (p.theta + p.tau).cos() + 0.5 * p.a3_coef);
            let g = p.gamma_abs;
            let bz = pre
                * (p.q_alpha * g * (p.theta + p.xi).cos()
                    + p.q_beta * g * (p.theta + p.xi).sin()
                    + p.a_coef * p.q_alpha * (p.theta + p.tau).cos()
                    + p.a_coef * p.q_beta * (p.theta + p.tau).sin()
                    + m.q31 / m.q33 * p.theta.cos()
                    + 0.5 * p.a3_coef);
            (bx, bz)
        }
        None => {
            let f = evaluate_fields(mode, m, u0k, 0.0, 0.0, 0.0);
            (f.b_xprime.re, (f.b_z / C::i()).re)
        }
    }
}

/// (U1(z), U3(z), Psi(z)) per unit U0 at x' = 0, t = 0; Psi in A/m.
pub fn quantized_field_coefficients(mode: &RayleighMode, m: &MaterialParams, z: f64) -> [C; 3] {
    let i = C::i();
    match mode.canonical {
        Some(p) => {
            let k = mode.k;
            let env = (-k * p.q_alpha * z).exp();
            let phi = k * p.q_beta * z + p.theta;
            let u1 = C::new(2.0 * env * phi.cos(), 0.0);
            let u3 = -2.0 * i * p.gamma_abs * env * (phi + p.xi).cos();
            let psi = if mode.magnetically_inert {
                C::new(0.0, 0.0)
            } else {
                i * (m.q33 / m.mu11)
                    * (2.0 * p.a_coef * env * (phi + p.tau).cos() + p.a3_coef * (-k * z).exp())
            };
            [u1, u3, psi]
        }
        None => {
            let f = evaluate_fields(mode, m, 1.0, 0.0, z, 0.0);
            [f.u1_prime, f.u3, f.psi]
        }
    }
}

/// Zero-point fields over a grid of widths and frequencies, width-major.
pub fn zero_point_map(
    m: &MaterialParams,
    widths_m: &[f64],
    freqs_hz: &[f64],
) -> Result<Vec<QuantizedMode>> {
    zero_point_map_with(crate::par::Execution::default(), m, widths_m, freqs_hz)
}

pub fn zero_point_map_with(
    exec: crate::par::Execution,
    m: &MaterialParams,
    widths_m: &[f64],
    freqs_hz: &[f64],
) -> Result<Vec<QuantizedMode>> {
    let unit = solve_mode_at_frequency(m, 1.0)?;
    let points: Vec<(f64, f64)> = widths_m
        .iter()
        .flat_map(|&l| freqs_hz.iter().map(move |&f| (l, f)))
        .collect();
    crate::par::try_map_with(exec, &points, |&(l, f)| {
        let mode = unit.with_wavenumber(TWO_PI * f / unit.v);
        normalize_single_phonon(&mode, m, l)
    })
}
