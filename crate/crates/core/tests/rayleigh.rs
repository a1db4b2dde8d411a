use num_complex::Complex64;
use piezosaw::materials::{bulk_velocities, rotate_to_110, MaterialParams};
use piezosaw::rayleigh::{
    boundary_determinant, characteristic_matrix, decay_roots, evaluate_fields, solve_mode, solve_mode_with,
    Coupling,
};
use piezosaw::verify::oracles::classical_rayleigh_velocity;
use proptest::prelude::*;

type C = Complex64;

fn isotropic() -> MaterialParams {
    MaterialParams {
        name: "isotropic".into(),
        rho: 5000.0,
        c11: 90e9,
        c12: 30e9,
        c44: 30e9,
        q31: 0.0,
        q33: 0.0,
        mu11: 1e-6,
    }
}

#[test]
fn uncoupled_matrix_is_block_diagonal() {
    let rc = rotate_to_110(&isotropic());
    let q = C::new(0.7, 0.2);
    let m = characteristic_matrix(&rc, 1500.0, q);
    for (i, j) in [(0, 2), (1, 2), (2, 0), (2, 1)] {
        assert_eq!(m[(i, j)], C::new(0.0, 0.0), "entry {i},{j}");
    }
    let expected = rc.mu11 * (q * q - 1.0);
    assert!((m[(2, 2)] - expected).norm() <= 1e-15 * expected.norm());
}

#[test]
fn characteristic_determinant_vanishes_on_the_pair() {
    let m = MaterialParams::terfenol_d();
    let rc = rotate_to_110(&m);
    let mode = solve_mode(&m, 1.0).unwrap();
    let p = mode.canonical.unwrap();
    for q in [C::new(p.q_alpha, p.q_beta), C::new(p.q_alpha, -p.q_beta)] {
        let mat = characteristic_matrix(&rc, mode.v, q);
        let scale: f64 = (0..3).map(|i| mat.row(i).norm()).product();
        assert!(mat.determinant().norm() <= 1e-10 * scale);
    }
}

#[test]
fn terfenol_roots_include_the_complex_pair() {
    let rc = rotate_to_110(&MaterialParams::terfenol_d());
    let roots = decay_roots(&rc, 1005.0).unwrap();
    assert!(roots.iter().all(|w| w.q.re > 0.0));
    for w in &roots {
        if w.q.im != 0.0 {
            assert!(roots.iter().any(|o| o.q == w.q.conj()), "missing partner of {}", w.q);
        }
    }
    let pair = roots.iter().find(|w| w.q.im > 0.0).unwrap();
    assert!((pair.q.re - 0.4288).abs() < 0.005 * 0.4288);
    assert!((pair.q.im - 0.5378).abs() < 0.005 * 0.5378);
    assert!(roots.windows(2).all(|w| w[0].q.re <= w[1].q.re));
}

#[test]
fn isotropic_roots_have_closed_forms() {
    let m = isotropic();
    let rc = rotate_to_110(&m);
    let v = 1500.0;
    let (vs, vl) = bulk_velocities(&m);
    let mut expected = [(1.0 - (v / vs).powi(2)).sqrt(), (1.0 - (v / vl).powi(2)).sqrt(), 1.0];
    expected.sort_by(f64::total_cmp);
    let roots = decay_roots(&rc, v).unwrap();
    assert_eq!(roots.len(), 3);
    for (w, e) in roots.iter().zip(expected) {
        assert!((w.q - e).norm() < 1e-12, "{} vs {e}", w.q);
    }
}

#[test]
fn isotropic_roots_tend_to_one_in_the_static_limit() {
    let rc = rotate_to_110(&isotropic());
    for w in decay_roots(&rc, 1e-3).unwrap() {
        assert!((w.q - 1.0).norm() < 1e-9, "{}", w.q);
    }
}

#[test]
fn determinant_root_and_nonroot() {
    let m = MaterialParams::terfenol_d();
    let rc = rotate_to_110(&m);
    let mode = solve_mode(&m, 1.0).unwrap();
    let far = boundary_determinant(&rc, 900.0).unwrap().norm();
    assert!(boundary_determinant(&rc, mode.v).unwrap().norm() <= 1e-9 * far);
    assert!(boundary_determinant(&rc, 0.1).unwrap().norm() > 1e-3);
}

#[test]
fn isotropic_velocity_matches_classical_equation() {
    let m = isotropic();
    let mode = solve_mode(&m, 1.0).unwrap();
    let v_ref = classical_rayleigh_velocity(m.rho, m.c11, m.c44);
    assert!((mode.v - v_ref).abs() <= 1e-6 * v_ref);
    let rc = rotate_to_110(&m);
    assert!(boundary_determinant(&rc, v_ref).unwrap().norm() <= 1e-6 * boundary_determinant(&rc, 0.8 * v_ref).unwrap().norm());
}

#[test]
fn mode_invariants() {
    let m = MaterialParams::terfenol_d();
    let (vs, _) = bulk_velocities(&m);
    for k in [1.0, 1e5, 6.25e7] {
        let mode = solve_mode(&m, k).unwrap();
        assert_eq!(mode.omega, k * mode.v);
        assert!(mode.v > 0.0 && mode.v < vs);
        assert!(mode.canonical.unwrap().q_alpha > 0.0);
        assert_eq!(mode.roots_found, 1);
    }
}

#[test]
fn dimensionless_fields_do_not_depend_on_k() {
    let m = MaterialParams::terfenol_d();
    let a = solve_mode(&m, 1.0).unwrap();
    let b = solve_mode(&m, 3.7e7).unwrap();
    assert!((a.v - b.v).abs() <= 1e-10 * a.v);
    let (pa, pb) = (a.canonical.unwrap(), b.canonical.unwrap());
    for (x, y) in [
        (pa.q_alpha, pb.q_alpha),
        (pa.q_beta, pb.q_beta),
        (pa.theta, pb.theta),
        (pa.gamma_abs, pb.gamma_abs),
        (pa.xi, pb.xi),
        (pa.a_coef, pb.a_coef),
        (pa.tau, pb.tau),
        (pa.a3_coef, pb.a3_coef),
    ] {
        assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0));
    }
    // profiles at the same z k
    for s in [0.0, 0.3, 1.7, 4.0] {
        let fa = evaluate_fields(&a, &m, 1.0, 0.0, s / a.k, 0.0);
        let fb = evaluate_fields(&b, &m, 1.0, 0.0, s / b.k, 0.0);
        assert!((fa.u1_prime - fb.u1_prime).norm() <= 1e-10);
        assert!((fa.u3 - fb.u3).norm() <= 1e-10);
        assert!((fa.psi - fb.psi).norm() <= 1e-10 * fa.psi.norm().max(1.0));
    }
}

#[test]
fn surface_values_from_the_canonical_form() {
    let m = MaterialParams::terfenol_d();
    let mode = solve_mode(&m, 2e7).unwrap();
    let p = mode.canonical.unwrap();
    let u0 = 1e-15;
    let f = evaluate_fields(&mode, &m, u0, 0.0, 0.0, 0.0);
    let u1 = C::new(2.0 * u0 * p.theta.cos(), 0.0);
    let u3 = C::new(0.0, -2.0 * u0 * p.gamma_abs * (p.theta + p.xi).cos());
    assert!((f.u1_prime - u1).norm() <= 1e-12 * u0);
    assert!((f.u3 - u3).norm() <= 1e-12 * u0);
    assert!(p.theta.cos() > 0.0);
}

#[test]
fn envelope_after_one_wavelength() {
    let p = solve_mode(&MaterialParams::terfenol_d(), 1.0).unwrap().canonical.unwrap();
    let ratio = (-std::f64::consts::TAU * p.q_alpha).exp();
    assert!((ratio - 0.068).abs() < 0.001, "{ratio}");
}

#[test]
fn displacements_stay_in_quadrature() {
    let m = MaterialParams::terfenol_d();
    let mode = solve_mode(&m, 1e7).unwrap();
    let lambda = mode.wavelength();
    for i in 0..20 {
        for j in 0..20 {
            let (x, z, t) = (lambda * i as f64 / 20.0, 2.0 * lambda * j as f64 / 20.0, 1e-10 * i as f64);
            let f = evaluate_fields(&mode, &m, 1.0, x, z, t);
            let scale = f.u1_prime.norm() * f.u3.norm();
            if scale > 1e-20 {
                assert!((f.u3 * f.u1_prime.conj()).re.abs() <= 1e-10 * scale, "at x={x} z={z}");
            }
        }
    }
}

#[test]
fn displacement_decays_below_a_tenth_past_one_wavelength() {
    let m = MaterialParams::terfenol_d();
    let mode = solve_mode(&m, 1e7).unwrap();
    let lambda = mode.wavelength();
    let mag = |z: f64| {
        let f = evaluate_fields(&mode, &m, 1.0, 0.0, z, 0.0);
        (f.u1_prime.norm_sqr() + f.u3.norm_sqr()).sqrt()
    };
    let surface = mag(0.0);
    for j in 0..=200 {
        let z = lambda * (1.0 + 3.0 * j as f64 / 200.0);
        assert!(mag(z) <= 0.10 * surface, "z/lambda = {}", z / lambda);
    }
}

#[test]
fn magnetic_potential_and_normal_induction_are_continuous() {
    let m = MaterialParams::terfenol_d();
    let mode = solve_mode(&m, 1e7).unwrap();
    let below = evaluate_fields(&mode, &m, 1.0, 1e-8, 0.0, 0.0);
    let above = evaluate_fields(&mode, &m, 1.0, 1e-8, -1e-300, 0.0);
    assert!((below.psi - above.psi).norm() <= 1e-12 * below.psi.norm());
    assert!((below.b_z - above.b_z).norm() <= 1e-10 * below.b_xprime.norm().max(below.b_z.norm()));
    assert_eq!(above.u1_prime, C::new(0.0, 0.0));
}

#[test]
fn zero_q33_is_magnetically_inert() {
    let base = MaterialParams::terfenol_d();
    let m = MaterialParams { q33: 0.0, ..base.clone() };
    let mode = solve_mode(&m, 1e7).unwrap();
    assert!(mode.magnetically_inert);
    let p = mode.canonical.unwrap();
    assert_eq!((p.a_coef, p.tau, p.a3_coef), (0.0, 0.0, 0.0));
    let f = evaluate_fields(&mode, &m, 1e-15, 1e-8, 1e-8, 0.0);
    assert_eq!((f.psi, f.b_xprime, f.b_z), (C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)));
    let elastic = solve_mode(&MaterialParams { q31: 0.0, q33: 0.0, ..base }, 1e7).unwrap();
    assert!((mode.v - elastic.v).abs() <= 1e-10 * elastic.v);
}

#[test]
fn back_action_stiffens_the_mode() {
    let m = MaterialParams::terfenol_d();
    let one_way = solve_mode_with(&m, 1.0, Coupling::OneWay).unwrap();
    let full = solve_mode_with(&m, 1.0, Coupling::Full).unwrap();
    let elastic = solve_mode(&MaterialParams { q31: 0.0, q33: 0.0, ..m }, 1.0).unwrap();
    assert!((one_way.v - elastic.v).abs() <= 1e-10 * elastic.v);
    assert!(full.v != elastic.v);
    eprintln!("full coupling shifts v by {:+.4} m/s", full.v - elastic.v);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn near_isotropic_materials_have_a_mode(
        c44 in 5e9..60e9f64,
        nu in 0.15..0.4f64,
        aniso in 0.9..1.1f64,
        q33 in -200.0..200.0f64,
        k in 1e3..1e8f64,
    ) {
        let c12 = 2.0 * c44 * nu / (1.0 - 2.0 * nu);
        let m = MaterialParams {
            name: "random".into(),
            rho: 5000.0,
            c11: c12 + 2.0 * c44 * aniso,
            c12,
            c44,
            q31: -0.5 * q33,
            q33,
            mu11: 5e-6,
        };
        let mode = solve_mode(&m, k).unwrap();
        let (vs, _) = bulk_velocities(&m);
        prop_assert!(mode.v > 0.0 && mode.v < vs);
        prop_assert_eq!(mode.omega, k * mode.v);
        let rc = rotate_to_110(&m);
        let far = boundary_determinant(&rc, 0.5 * mode.v).unwrap().norm();
        prop_assert!(boundary_determinant(&rc, mode.v).unwrap().norm() <= 1e-9 * far.max(1.0));
    }
}
