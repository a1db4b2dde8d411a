//! Coupling of one quantized surface phonon to magnetic quantum systems.
//!
//! Energies and gyromagnetic ratios are given as ordinary frequencies (Hz,
//! Hz/T) and converted to angular units here. Couplings come back in rad/s.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{PHI0, TWO_PI};
use crate::materials::MaterialParams;
use crate::quantize::{normalize_single_phonon, QuantizedMode};
use crate::rayleigh::{solve_mode_at_frequency, RayleighMode};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fluxonium {
    pub e_c: f64,
    pub e_j: f64,
    pub e_l: f64,
    /// m^2
    pub loop_area_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transmon {
    pub e_c: f64,
    pub e_j: f64,
    /// m^2
    pub loop_area_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnonFilm {
    /// Hz/T
    pub gamma_f: f64,
    pub spin_s: f64,
    pub n_spins: f64,
    /// m
    pub distance_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectCenter {
    /// Hz/T
    pub gamma_c: f64,
    /// m
    pub distance_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "kebab-case")]
pub enum QubitSpec {
    Fluxonium(Fluxonium),
    Transmon(Transmon),
    MagnonFilm(MagnonFilm),
    DefectCenter(DefectCenter),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Linear,
    Quadratic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingResult {
    /// rad/s
    pub g: Complex64,
    /// rad/s
    pub qubit_freq: f64,
    pub order: Order,
    /// qubit_freq - omega of the surface mode, rad/s
    pub detuning: f64,
    pub warnings: Vec<String>,
}

impl CouplingResult {
    pub fn g_abs_hz(&self) -> f64 {
        self.g.norm() / TWO_PI
    }
}

/// E_J / E_C below which the transmon expansion is questionable.
pub const TRANSMON_MIN_RATIO: f64 = 20.0;

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::input(format!("{name} must be positive, got {x}")))
    }
}

fn non_negative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::input(format!("{name} must be non-negative, got {x}")))
    }
}

impl QubitSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            QubitSpec::Fluxonium(f) => {
                positive("e_c", f.e_c)?;
                positive("e_j", f.e_j)?;
                positive("e_l", f.e_l)?;
                non_negative("loop_area_s", f.loop_area_s)
            }
            QubitSpec::Transmon(t) => {
                positive("e_c", t.e_c)?;
                positive("e_j", t.e_j)?;
                non_negative("loop_area_s", t.loop_area_s)
            }
            QubitSpec::MagnonFilm(mf) => {
                positive("gamma_f", mf.gamma_f)?;
                positive("spin_s", mf.spin_s)?;
                positive("n_spins", mf.n_spins)?;
                non_negative("distance_d", mf.distance_d)
            }
            QubitSpec::DefectCenter(dc) => {
                positive("gamma_c", dc.gamma_c)?;
                non_negative("distance_d", dc.distance_d)
            }
        }
    }

    /// Transition frequency in Hz for the superconducting qubits.
    pub fn intrinsic_frequency_hz(&self) -> Option<f64> {
        match *self {
            QubitSpec::Fluxonium(f) => Some(fluxonium_frequency(f.e_c, f.e_j, f.e_l)),
            QubitSpec::Transmon(t) => Some(transmon_frequency(t.e_c, t.e_j)),
            _ => None,
        }
    }
}

/// Plasma-like frequency with the first-order shift from the quartic term.
pub fn fluxonium_frequency(e_c: f64, e_j: f64, e_l: f64) -> f64 {
    2.0 * (2.0 * e_c * e_j).sqrt() + e_l * (2.0 * e_c / e_j).sqrt() - e_c
}

pub fn transmon_frequency(e_c: f64, e_j: f64) -> f64 {
    4.0 * (e_c * e_j).sqrt() - e_c
}

fn result(qm: &QuantizedMode, g: Complex64, qubit_freq: f64, order: Order, warnings: Vec<String>) -> CouplingResult {
    CouplingResult {
        g,
        qubit_freq,
        order,
        detuning: qubit_freq - qm.mode.omega,
        warnings,
    }
}

pub fn fluxonium_coupling(qm: &QuantizedMode, spec: &Fluxonium) -> CouplingResult {
    let e_l = TWO_PI * spec.e_l;
    let flux = TWO_PI * qm.b_z_zp * spec.loop_area_s / PHI0;
    let g = -(2.0 * spec.e_c / spec.e_j).powf(0.25) * e_l * flux;
    let w10 = TWO_PI * fluxonium_frequency(spec.e_c, spec.e_j, spec.e_l);
    result(qm, Complex64::new(g, 0.0), w10, Order::Linear, vec![])
}

pub fn transmon_coupling(qm: &QuantizedMode, spec: &Transmon) -> CouplingResult {
    let scale = TWO_PI * (spec.e_c * spec.e_j).sqrt();
    let phase = PI * qm.b_z_zp * spec.loop_area_s;
    let g = -scale * phase * phase / (2.0 * PHI0 * PHI0);
    let w10 = TWO_PI * transmon_frequency(spec.e_c, spec.e_j);
    let mut warnings = vec![];
    if spec.e_j / spec.e_c < TRANSMON_MIN_RATIO {
        let msg = format!("E_J/E_C = {:.3} is below the transmon regime ({TRANSMON_MIN_RATIO})", spec.e_j / spec.e_c);
        log::warn!("{msg}");
        warnings.push(msg);
    }
    result(qm, Complex64::new(g, 0.0), w10, Order::Quadratic, warnings)
}

fn one_minus_i() -> Complex64 {
    Complex64::new(1.0, -1.0)
}

pub fn magnon_coupling(qm: &QuantizedMode, spec: &MagnonFilm) -> CouplingResult {
    let gamma = TWO_PI * spec.gamma_f;
    let decay = (-qm.mode.k * spec.distance_d).exp();
    let g = one_minus_i() * ((spec.n_spins * spec.spin_s).sqrt() * gamma * qm.b_xprime_zp * decay / 2.0);
    result(qm, g, qm.mode.omega, Order::Linear, vec![])
}

pub fn defect_coupling(qm: &QuantizedMode, spec: &DefectCenter) -> CouplingResult {
    let gamma = TWO_PI * spec.gamma_c;
    let decay = (-qm.mode.k * spec.distance_d).exp();
    let g = one_minus_i() * (gamma * qm.b_xprime_zp * decay / (2.0 * 2f64.sqrt()));
    result(qm, g, qm.mode.omega, Order::Linear, vec![])
}

pub fn couple(qm: &QuantizedMode, spec: &QubitSpec) -> Result<CouplingResult> {
    spec.validate()?;
    Ok(match spec {
        QubitSpec::Fluxonium(f) => fluxonium_coupling(qm, f),
        QubitSpec::Transmon(t) => transmon_coupling(qm, t),
        QubitSpec::MagnonFilm(mf) => magnon_coupling(qm, mf),
        QubitSpec::DefectCenter(dc) => defect_coupling(qm, dc),
    })
}

/// N s for which the magnon coupling equals `target_hz` (as |g|/2pi).
pub fn calibrated_spin_count(qm: &QuantizedMode, spec: &MagnonFilm, target_hz: f64) -> f64 {
    let unit = MagnonFilm { n_spins: 1.0, spin_s: 1.0, ..*spec };
    let g1 = magnon_coupling(qm, &unit).g_abs_hz();
    (target_hz / g1).powi(2)
}

/// A system together with the surface mode it is driven by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSetup {
    pub spec: QubitSpec,
    /// Hz
    pub saw_freq: f64,
    /// m
    pub lateral_width_l: f64,
}

pub const FIG5_PRESETS: [&str; 4] = ["fig5a", "fig5b", "fig5c", "fig5d"];

/// Parameters of the four coupling panels. The superconducting qubits sit on
/// resonance with the mode; magnon and defect frequencies set the mode.
pub fn figure5_preset(name: &str) -> Result<CouplingSetup> {
    let um = 1e-6;
    let um2 = 1e-12;
    let (spec, saw_freq) = match name {
        "fig5a" => {
            let f = Fluxonium { e_c: 1e9, e_j: 3e9, e_l: 1e9, loop_area_s: 1000.0 * um2 };
            (QubitSpec::Fluxonium(f), fluxonium_frequency(f.e_c, f.e_j, f.e_l))
        }
        "fig5b" => {
            let t = Transmon { e_c: 100e6, e_j: 10e9, loop_area_s: 1000.0 * um2 };
            (QubitSpec::Transmon(t), transmon_frequency(t.e_c, t.e_j))
        }
        "fig5c" => (
            QubitSpec::MagnonFilm(MagnonFilm { gamma_f: 30.59e9, spin_s: 0.5, n_spins: 1.0, distance_d: 0.1 * um }),
            3e9,
        ),
        "fig5d" => (
            QubitSpec::DefectCenter(DefectCenter { gamma_c: 28e9, distance_d: 0.1 * um }),
            2.87e9,
        ),
        other => {
            return Err(Error::input(format!(
                "unknown coupling preset `{other}` (expected one of {})",
                FIG5_PRESETS.join(", ")
            )))
        }
    };
    Ok(CouplingSetup { spec, saw_freq, lateral_width_l: 1.0 * um })
}

/// Solves, quantizes and couples in one go.
pub fn evaluate_setup(m: &MaterialParams, setup: &CouplingSetup) -> Result<(QuantizedMode, CouplingResult)> {
    let mode = solve_mode_at_frequency(m, setup.saw_freq)?;
    let qm = normalize_single_phonon(&mode, m, setup.lateral_width_l)?;
    let r = couple(&qm, &setup.spec)?;
    Ok((qm, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    LoopAreaS,
    DistanceD,
    LateralWidthL,
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "loop_area_s" => Ok(SweepAxis::LoopAreaS),
            "distance_d" => Ok(SweepAxis::DistanceD),
            "lateral_width_l" => Ok(SweepAxis::LateralWidthL),
            other => Err(Error::input(format!(
                "unknown sweep axis `{other}` (expected loop_area_s, distance_d or lateral_width_l)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// SI value of the swept parameter
    pub axis_value: f64,
    pub g_abs_hz: f64,
    pub qubit_freq_ghz: f64,
}

fn with_axis(spec: &QubitSpec, axis: SweepAxis, x: f64) -> Result<QubitSpec> {
    let mut s = *spec;
    match (axis, &mut s) {
        (SweepAxis::LoopAreaS, QubitSpec::Fluxonium(f)) => f.loop_area_s = x,
        (SweepAxis::LoopAreaS, QubitSpec::Transmon(t)) => t.loop_area_s = x,
        (SweepAxis::DistanceD, QubitSpec::MagnonFilm(mf)) => mf.distance_d = x,
        (SweepAxis::DistanceD, QubitSpec::DefectCenter(dc)) => dc.distance_d = x,
        (SweepAxis::LateralWidthL, _) => {}
        (axis, _) => {
            return Err(Error::input(format!("axis {axis:?} does not apply to this system")));
        }
    }
    Ok(s)
}

/// Coupling magnitude along one parameter axis. Changing L re-normalizes the mode.
pub fn sweep_coupling(
    m: &MaterialParams,
    setup: &CouplingSetup,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<SweepRow>> {
    sweep_coupling_with(crate::par::Execution::default(), m, setup, axis, values)
}

pub fn sweep_coupling_with(
    exec: crate::par::Execution,
    m: &MaterialParams,
    setup: &CouplingSetup,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<SweepRow>> {
    let mode: RayleighMode = solve_mode_at_frequency(m, setup.saw_freq)?;
    let base = normalize_single_phonon(&mode, m, setup.lateral_width_l)?;
    crate::par::try_map_with(exec, values, |&x| {
        let spec = with_axis(&setup.spec, axis, x)?;
        let qm = if axis == SweepAxis::LateralWidthL {
            normalize_single_phonon(&mode, m, x)?
        } else {
            base.clone()
        };
        let r = couple(&qm, &spec)?;
        Ok(SweepRow {
            axis_value: x,
            g_abs_hz: r.g_abs_hz(),
            qubit_freq_ghz: r.qubit_freq / TWO_PI / 1e9,
        })
    })
}
