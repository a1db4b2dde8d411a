use num_complex::Complex64;
use piezosaw::materials::MaterialParams;
use piezosaw::quantize::{
    depth_energy, energy_weight, normalize_single_phonon, quantized_field_coefficients, verify_canonical_form,
    zero_point_fields, zero_point_map, CALIBRATION_U0K_M,
};
use piezosaw::rayleigh::{evaluate_fields, solve_mode_at_frequency};
use piezosaw::verify::oracles::closed_form_energy;

type C = Complex64;

const HBAR: f64 = 1.054_571_817e-34;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

#[test]
fn zero_point_fields_match_the_full_field_evaluation() {
    let m = MaterialParams::terfenol_d();
    for f in [1e9, 3e9, 10e9] {
        let mode = solve_mode_at_frequency(&m, f).unwrap();
        let (bx, bz) = zero_point_fields(&mode, &m, 1e-15);
        let s = evaluate_fields(&mode, &m, 1e-15, 0.0, 0.0, 0.0);
        assert!(s.b_xprime.im.abs() <= 1e-10 * s.b_xprime.norm());
        assert!(s.b_z.re.abs() <= 1e-10 * s.b_z.norm());
        assert!(close(bx, s.b_xprime.re, 1e-10), "{bx} vs {}", s.b_xprime);
        assert!(close(bz, s.b_z.im, 1e-10), "{bz} vs {}", s.b_z);
    }
}

#[test]
fn canonical_coefficients_match_the_partial_wave_sum() {
    let m = MaterialParams::terfenol_d();
    let mode = solve_mode_at_frequency(&m, 5e9).unwrap();
    for j in 0..10 {
        let z = mode.wavelength() * j as f64 / 4.0;
        let [u1, u3, psi] = quantized_field_coefficients(&mode, &m, z);
        let s = evaluate_fields(&mode, &m, 1.0, 0.0, z, 0.0);
        assert!((u1 - s.u1_prime).norm() <= 1e-10);
        assert!((u3 - s.u3).norm() <= 1e-10);
        assert!((psi - s.psi).norm() <= 1e-10 * (m.q33 / m.mu11));
    }
}

#[test]
fn surface_potential_magnitude() {
    let m = MaterialParams::terfenol_d();
    let mode = solve_mode_at_frequency(&m, 10e9).unwrap();
    let p = mode.canonical.unwrap();
    let [_, _, psi] = quantized_field_coefficients(&mode, &m, 0.0);
    let expected = (m.q33 / m.mu11) * (2.0 * p.a_coef * (p.theta + p.tau).cos() + p.a3_coef).abs();
    assert!(close(psi.norm(), expected, 1e-12));
    assert!(psi.re.abs() <= 1e-12 * psi.norm());
}

#[test]
fn quadrature_agrees_with_closed_form_energy() {
    let m = MaterialParams::terfenol_d();
    for f in [1e9, 10e9] {
        let mode = solve_mode_at_frequency(&m, f).unwrap();
        let q = depth_energy(&mode, &m).unwrap();
        let c = closed_form_energy(&mode, &m);
        for (name, a, b) in [
            ("kinetic", q.solid.kinetic, c.kinetic),
            ("elastic", q.solid.elastic, c.elastic),
            ("magnetic", q.solid.magnetic, c.magnetic),
            ("cross", q.solid.cross, c.cross),
            ("vacuum", q.vacuum, c.vacuum),
        ] {
            assert!(close(a, b, 1e-6), "{name}: {a:e} vs {b:e}");
        }
        assert!(close(q.total(), c.total(), 1e-6));
    }
}

#[test]
fn single_phonon_energy_closes() {
    let m = MaterialParams::terfenol_d();
    let mode = solve_mode_at_frequency(&m, 4e9).unwrap();
    for l in [0.5e-6, 1e-6, 30e-6] {
        let qm = normalize_single_phonon(&mode, &m, l).unwrap();
        let e = closed_form_energy(&mode, &m).total();
        let stored = qm.energy_weight * e * qm.u0k * qm.u0k * l * l;
        assert!(close(stored, HBAR * mode.omega, 1e-6));
        assert_eq!(qm.energy_per_phonon, HBAR * mode.omega);
    }
}

#[test]
fn calibration_point() {
    let m = MaterialParams::terfenol_d();
    let qm = &zero_point_map(&m, &[1e-6], &[10e9]).unwrap()[0];
    assert!(close(qm.u0k, CALIBRATION_U0K_M, 1e-9));
    assert!(energy_weight() > 0.0);
}

#[test]
fn zero_point_amplitude_scales_inversely_with_width() {
    let m = MaterialParams::terfenol_d();
    let map = zero_point_map(&m, &[1e-6, 2e-6, 4e-6], &[3e9]).unwrap();
    for w in map.windows(2) {
        assert!(close(w[0].u0k / w[1].u0k, 2.0, 1e-10));
        assert!(close(w[0].b_xprime_zp / w[1].b_xprime_zp, 2.0, 1e-10));
        assert!(close(w[0].b_z_zp / w[1].b_z_zp, 2.0, 1e-10));
    }
}

#[test]
fn zero_point_field_grows_with_frequency() {
    let m = MaterialParams::terfenol_d();
    let freqs: Vec<f64> = (1..=10).map(|g| g as f64 * 1e9).collect();
    let map = zero_point_map(&m, &[1e-6], &freqs).unwrap();
    for w in map.windows(2) {
        assert!(w[1].b_xprime_zp.abs() > w[0].b_xprime_zp.abs());
        assert!(w[1].b_z_zp.abs() > w[0].b_z_zp.abs());
    }
    // u0k does not depend on frequency at fixed width
    for qm in &map {
        assert!(close(qm.u0k, map[0].u0k, 1e-8));
    }
}

#[test]
fn zero_point_displacement_is_the_largest_surface_component() {
    let m = MaterialParams::terfenol_d();
    let mode = solve_mode_at_frequency(&m, 10e9).unwrap();
    let qm = normalize_single_phonon(&mode, &m, 1e-6).unwrap();
    let s = evaluate_fields(&mode, &m, qm.u0k, 0.0, 0.0, 0.0);
    assert!(close(qm.u_zp, s.u1_prime.norm().max(s.u3.norm()), 1e-12));
}

#[test]
fn bad_widths_are_rejected() {
    let m = MaterialParams::terfenol_d();
    let mode = solve_mode_at_frequency(&m, 1e9).unwrap();
    for l in [0.0, -1e-6, f64::NAN] {
        assert!(normalize_single_phonon(&mode, &m, l).is_err());
    }
    assert!(solve_mode_at_frequency(&m, 0.0).is_err());
}

#[test]
fn first_stage_diagonalizes_the_potential() {
    let m = MaterialParams::terfenol_d();
    let mode = solve_mode_at_frequency(&m, 10e9).unwrap();
    for j in 0..20 {
        let z = 0.1 * mode.wavelength() * j as f64 + 1e-3 * mode.wavelength();
        let d = verify_canonical_form(&mode, &m, z).unwrap();
        assert!(d.q1_orthogonality_defect <= 1e-10);
        let back = d.q1.transpose() * d.g_matrix * d.q1;
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    assert!(back[(a, b)].abs() <= 1e-10 * d.lambda_1.abs().max());
                }
            }
        }
    }
    assert!(verify_canonical_form(&mode, &m, -1.0).is_err());
}

#[test]
fn inert_material_has_a_null_potential_direction() {
    let m = MaterialParams { q33: 0.0, ..MaterialParams::terfenol_d() };
    let mode = solve_mode_at_frequency(&m, 10e9).unwrap();
    let d = verify_canonical_form(&mode, &m, 0.3 * mode.wavelength()).unwrap();
    assert!(d.degenerate);
    let null = (0..3).find(|&j| d.lambda_1[j].abs() <= 1e-12 * d.lambda_1.abs().max()).unwrap();
    let col = d.q1.column(null);
    assert!((col[2].abs() - 1.0).abs() <= 1e-12);
    let (bx, bz) = zero_point_fields(&mode, &m, 1e-15);
    assert_eq!((bx, bz), (0.0, 0.0));
    let [_, _, psi] = quantized_field_coefficients(&mode, &m, 0.0);
    assert_eq!(psi, C::new(0.0, 0.0));
}
