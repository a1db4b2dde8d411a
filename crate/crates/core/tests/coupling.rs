use std::f64::consts::{FRAC_PI_4, TAU};

use piezosaw::coupling::{
    calibrated_spin_count, couple, evaluate_setup, figure5_preset, sweep_coupling, DefectCenter, Fluxonium,
    MagnonFilm, Order, QubitSpec, SweepAxis, Transmon, FIG5_PRESETS,
};
use piezosaw::materials::MaterialParams;
use piezosaw::quantize::{normalize_single_phonon, QuantizedMode};
use piezosaw::rayleigh::solve_mode_at_frequency;

fn quantized(f: f64, l: f64) -> QuantizedMode {
    let m = MaterialParams::terfenol_d();
    normalize_single_phonon(&solve_mode_at_frequency(&m, f).unwrap(), &m, l).unwrap()
}

fn fluxonium(s: f64) -> QubitSpec {
    QubitSpec::Fluxonium(Fluxonium { e_c: 1e9, e_j: 3e9, e_l: 1e9, loop_area_s: s })
}

fn transmon(s: f64) -> QubitSpec {
    QubitSpec::Transmon(Transmon { e_c: 100e6, e_j: 10e9, loop_area_s: s })
}

#[test]
fn zero_loop_area_decouples() {
    let qm = quantized(4.7e9, 1e-6);
    for spec in [fluxonium(0.0), transmon(0.0)] {
        assert_eq!(couple(&qm, &spec).unwrap().g.norm(), 0.0);
    }
}

#[test]
fn fluxonium_is_linear_and_transmon_quadratic_in_flux() {
    let qm = quantized(4.7e9, 1e-6);
    let s = 1e-9;
    let f1 = couple(&qm, &fluxonium(s)).unwrap();
    let f2 = couple(&qm, &fluxonium(2.0 * s)).unwrap();
    assert!((f2.g.norm() / f1.g.norm() - 2.0).abs() < 1e-12);
    assert_eq!(f1.order, Order::Linear);
    let t1 = couple(&qm, &transmon(s)).unwrap();
    let t2 = couple(&qm, &transmon(2.0 * s)).unwrap();
    assert!((t2.g.norm() / t1.g.norm() - 4.0).abs() < 1e-12);
    assert_eq!(t1.order, Order::Quadratic);
}

#[test]
fn spin_couplings_decay_with_distance() {
    let qm = quantized(3e9, 1e-6);
    let k = qm.mode.k;
    let d = 0.2e-6;
    let near = couple(&qm, &QubitSpec::DefectCenter(DefectCenter { gamma_c: 28e9, distance_d: 0.0 })).unwrap();
    let far = couple(&qm, &QubitSpec::DefectCenter(DefectCenter { gamma_c: 28e9, distance_d: d })).unwrap();
    assert!((far.g.norm() / near.g.norm() - (-k * d).exp()).abs() < 1e-12);
    let mf = MagnonFilm { gamma_f: 30.59e9, spin_s: 0.5, n_spins: 1.0, distance_d: 0.0 };
    let g0 = couple(&qm, &QubitSpec::MagnonFilm(mf)).unwrap();
    // distance zero is the surface value
    let expected = (mf.n_spins * mf.spin_s).sqrt() * TAU * mf.gamma_f * qm.b_xprime_zp.abs() / 2.0 * 2f64.sqrt();
    assert!((g0.g.norm() - expected).abs() <= 1e-12 * expected);
}

#[test]
fn spin_couplings_carry_a_quarter_turn_phase() {
    let qm = quantized(2.87e9, 1e-6);
    for spec in [
        QubitSpec::DefectCenter(DefectCenter { gamma_c: 28e9, distance_d: 1e-7 }),
        QubitSpec::MagnonFilm(MagnonFilm { gamma_f: 30.59e9, spin_s: 0.5, n_spins: 1.0, distance_d: 1e-7 }),
    ] {
        let g = couple(&qm, &spec).unwrap().g * qm.b_xprime_zp.signum();
        assert!((g.arg() + FRAC_PI_4).abs() < 1e-12, "{}", g.arg());
    }
}

#[test]
fn presets_are_on_resonance() {
    let m = MaterialParams::terfenol_d();
    for name in FIG5_PRESETS {
        let (qm, r) = evaluate_setup(&m, &figure5_preset(name).unwrap()).unwrap();
        assert!(r.detuning.abs() <= 1e-9 * qm.mode.omega, "{name}: {}", r.detuning);
        assert!(r.g.norm() > 0.0);
        assert!(r.warnings.is_empty());
    }
    assert!(figure5_preset("fig5e").is_err());
}

#[test]
fn calibrated_spin_count_reaches_the_target() {
    let qm = quantized(3e9, 1e-6);
    let spec = MagnonFilm { gamma_f: 30.59e9, spin_s: 0.5, n_spins: 1.0, distance_d: 1e-7 };
    let ns = calibrated_spin_count(&qm, &spec, 1673.0);
    let hit = MagnonFilm { spin_s: 1.0, n_spins: ns, ..spec };
    let g = couple(&qm, &QubitSpec::MagnonFilm(hit)).unwrap();
    assert!((g.g_abs_hz() - 1673.0).abs() < 1e-9 * 1673.0);
}

#[test]
fn fluxonium_sweeps_are_monotone() {
    let m = MaterialParams::terfenol_d();
    let setup = figure5_preset("fig5a").unwrap();
    let areas: Vec<f64> = (1..=20).map(|i| i as f64 * 1e-10).collect();
    let rows = sweep_coupling(&m, &setup, SweepAxis::LoopAreaS, &areas).unwrap();
    assert!(rows.windows(2).all(|w| w[1].g_abs_hz > w[0].g_abs_hz));
    let widths: Vec<f64> = (1..=20).map(|i| i as f64 * 1e-6).collect();
    let rows = sweep_coupling(&m, &setup, SweepAxis::LateralWidthL, &widths).unwrap();
    assert!(rows.windows(2).all(|w| w[1].g_abs_hz < w[0].g_abs_hz));
    for r in &rows {
        assert!((r.g_abs_hz * r.axis_value - rows[0].g_abs_hz * rows[0].axis_value).abs() <= 1e-9 * rows[0].g_abs_hz * 1e-6);
    }
}

#[test]
fn transmon_log_slope_is_two() {
    let m = MaterialParams::terfenol_d();
    let setup = figure5_preset("fig5b").unwrap();
    let areas = [1e-11, 1e-10, 1e-9];
    let rows = sweep_coupling(&m, &setup, SweepAxis::LoopAreaS, &areas).unwrap();
    for w in rows.windows(2) {
        let slope = (w[1].g_abs_hz / w[0].g_abs_hz).ln() / (w[1].axis_value / w[0].axis_value).ln();
        assert!((slope - 2.0).abs() < 1e-10, "{slope}");
    }
}

#[test]
fn magnon_log_decay_slope_is_the_wavenumber() {
    let m = MaterialParams::terfenol_d();
    let setup = figure5_preset("fig5c").unwrap();
    let ds: Vec<f64> = (0..6).map(|i| i as f64 * 1e-7).collect();
    let rows = sweep_coupling(&m, &setup, SweepAxis::DistanceD, &ds).unwrap();
    let k = TAU * setup.saw_freq / solve_mode_at_frequency(&m, setup.saw_freq).unwrap().v;
    for w in rows.windows(2) {
        let slope = (w[1].g_abs_hz / w[0].g_abs_hz).ln() / (w[1].axis_value - w[0].axis_value);
        assert!((slope + k).abs() <= 1e-9 * k);
    }
}

#[test]
fn axis_must_apply_to_the_system() {
    let m = MaterialParams::terfenol_d();
    let setup = figure5_preset("fig5a").unwrap();
    assert!(sweep_coupling(&m, &setup, SweepAxis::DistanceD, &[1e-7]).is_err());
    let nv = figure5_preset("fig5d").unwrap();
    assert!(sweep_coupling(&m, &nv, SweepAxis::LoopAreaS, &[1e-9]).is_err());
    assert!("area".parse::<SweepAxis>().is_err());
}

#[test]
fn invalid_parameters_are_rejected() {
    let qm = quantized(3e9, 1e-6);
    let bad = [
        QubitSpec::Fluxonium(Fluxonium { e_c: 0.0, e_j: 3e9, e_l: 1e9, loop_area_s: 1e-9 }),
        QubitSpec::Transmon(Transmon { e_c: 1e8, e_j: 1e10, loop_area_s: -1.0 }),
        QubitSpec::MagnonFilm(MagnonFilm { gamma_f: 30e9, spin_s: 0.5, n_spins: 0.0, distance_d: 0.0 }),
        QubitSpec::DefectCenter(DefectCenter { gamma_c: 28e9, distance_d: f64::NAN }),
    ];
    for spec in bad {
        assert!(couple(&qm, &spec).is_err(), "{spec:?}");
    }
}

#[test]
fn small_josephson_ratio_warns() {
    let qm = quantized(3e9, 1e-6);
    let r = couple(&qm, &QubitSpec::Transmon(Transmon { e_c: 1e9, e_j: 5e9, loop_area_s: 1e-9 })).unwrap();
    assert_eq!(r.warnings.len(), 1);
}
