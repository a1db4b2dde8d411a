use std::f64::consts::PI;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use piezosaw::constants::TWO_PI;
use piezosaw::coupling::{
    calibrated_spin_count, couple, figure5_preset, fluxonium_frequency, sweep_coupling, transmon_frequency,
    CouplingSetup, QubitSpec, SweepAxis,
};
use piezosaw::dynamics::{figure_preset, integrate, reconcile_theta, DdeProblem, OMEGA10};
use piezosaw::materials::save_materials;
use piezosaw::quantize::{
    normalize_single_phonon, quantized_field_coefficients, zero_point_map, CALIBRATION_FREQ_HZ,
    CALIBRATION_U0K_M, CALIBRATION_WIDTH_M, CONVENTION,
};
use piezosaw::rayleigh::{solve_mode_at_frequency, solve_mode_with, CanonicalParams, ModeWave};
use piezosaw::verify::{self, Level};
use piezosaw::{Coupling, Error, MaterialParams, MaterialSet};
use serde::Serialize;

use crate::output::{emit, provenance, render_record, Format, Table};
use crate::{Cli, Command, DynamicsArgs, MaterialsAction, SystemArgs, VerifyFailed};

/// Magnon coupling quoted for a single magnon; used to report the matching N s.
const MAGNON_ANCHOR_HZ: f64 = 1673.0;

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidInput(msg.into()).into()
}

fn load_materials(cli: &Cli) -> Result<MaterialSet> {
    let mut set = MaterialSet::new();
    if let Some(list) = std::env::var_os("PIEZOMAG_SAW_MATERIALS") {
        for path in std::env::split_paths(&list).filter(|p| !p.as_os_str().is_empty()) {
            set.load_file(&path)?;
        }
    }
    for path in &cli.material_file {
        set.load_file(path)?;
    }
    Ok(set)
}

fn material(cli: &Cli) -> Result<MaterialParams> {
    Ok(load_materials(cli)?.get(&cli.material)?.clone())
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(usage(format!("{name} must be positive, got {x}")))
    }
}

/// `start:stop:count`, linear or logarithmic.
pub fn parse_range(s: &str, log: bool) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(usage(format!("range `{s}` is not start:stop:count")));
    };
    let a: f64 = a.trim().parse().map_err(|_| usage(format!("bad range start `{a}`")))?;
    let b: f64 = b.trim().parse().map_err(|_| usage(format!("bad range stop `{b}`")))?;
    let n: usize = n.trim().parse().map_err(|_| usage(format!("bad range count `{n}`")))?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(usage(format!("range `{s}` needs finite ends and a positive count")));
    }
    if log && !(a > 0.0 && b > 0.0) {
        return Err(usage(format!("logarithmic range `{s}` needs positive ends")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            if log { a * (b / a).powf(f) } else { a + (b - a) * f }
        })
        .collect())
}

pub fn run(cli: &Cli) -> Result<()> {
    let out = cli.output.as_deref();
    let text = match &cli.command {
        Command::Mode(a) => {
            let m = material(cli)?;
            let coupling = if a.coupling == "full" { Coupling::Full } else { Coupling::OneWay };
            let f = positive("freq-ghz", a.freq_ghz)? * 1e9;
            let unit = solve_mode_with(&m, 1.0, coupling)?;
            let mode = unit.with_wavenumber(TWO_PI * f / unit.v);
            let record = ModeRecord {
                material: &m.name,
                coupling,
                freq_ghz: a.freq_ghz,
                v_m_s: mode.v,
                k_rad_m: mode.k,
                wavelength_m: mode.wavelength(),
                roots_found: mode.roots_found,
                residual: mode.residual,
                magnetically_inert: mode.magnetically_inert,
                canonical: mode.canonical,
                waves: &mode.waves,
            };
            let prov = provenance(&[("material", m.name.clone()), ("freq_ghz", a.freq_ghz.to_string())]);
            render_record(&record, &prov, cli.format.unwrap_or(Format::Json))?
        }
        Command::Profile(a) => {
            let m = material(cli)?;
            let mode = solve_mode_at_frequency(&m, positive("freq-ghz", a.freq_ghz)? * 1e9)?;
            positive("zmax-wavelengths", a.zmax_wavelengths)?;
            if a.samples < 2 {
                return Err(usage("samples must be at least 2"));
            }
            let lambda = mode.wavelength();
            let rows = (0..a.samples)
                .map(|i| {
                    let zl = a.zmax_wavelengths * i as f64 / (a.samples - 1) as f64;
                    let [u1, u3, psi] = quantized_field_coefficients(&mode, &m, zl * lambda);
                    vec![zl, u1.re, u1.im, u3.re, u3.im, psi.re, psi.im]
                })
                .collect();
            Table {
                provenance: provenance(&[
                    ("material", m.name.clone()),
                    ("freq_ghz", a.freq_ghz.to_string()),
                    ("zmax_wavelengths", a.zmax_wavelengths.to_string()),
                    ("samples", a.samples.to_string()),
                ]),
                columns: &["z_over_lambda", "u1_re", "u1_im", "u3_re", "u3_im", "psi_re", "psi_im"],
                rows,
            }
            .render(cli.format.unwrap_or(Format::Csv))?
        }
        Command::Zeropoint(a) => {
            let m = material(cli)?;
            let l = positive("width-um", a.width_um)? * 1e-6;
            let mode = solve_mode_at_frequency(&m, positive("freq-ghz", a.freq_ghz)? * 1e9)?;
            let qm = normalize_single_phonon(&mode, &m, l)?;
            let record = ZeropointRecord {
                material: &m.name,
                freq_ghz: a.freq_ghz,
                width_um: a.width_um,
                u0k_m: qm.u0k,
                b_xprime_zp_t: qm.b_xprime_zp,
                b_z_zp_t: qm.b_z_zp,
                u_zp_m: qm.u_zp,
                energy_per_phonon_j: qm.energy_per_phonon,
                energy_weight: qm.energy_weight,
                convention: CONVENTION,
                calibration_freq_ghz: CALIBRATION_FREQ_HZ / 1e9,
                calibration_width_um: CALIBRATION_WIDTH_M * 1e6,
                calibration_u0k_m: CALIBRATION_U0K_M,
            };
            let prov = provenance(&[
                ("material", m.name.clone()),
                ("freq_ghz", a.freq_ghz.to_string()),
                ("width_um", a.width_um.to_string()),
            ]);
            render_record(&record, &prov, cli.format.unwrap_or(Format::Json))?
        }
        Command::ZeropointMap(a) => {
            let m = material(cli)?;
            let freqs = parse_range(&a.freq_ghz_range, false)?;
            let widths = parse_range(&a.width_um_range, false)?;
            for &x in freqs.iter().chain(&widths) {
                positive("range value", x)?;
            }
            let freqs_hz: Vec<f64> = freqs.iter().map(|f| f * 1e9).collect();
            let widths_m: Vec<f64> = widths.iter().map(|l| l * 1e-6).collect();
            let grid = zero_point_map(&m, &widths_m, &freqs_hz)?;
            let rows = grid
                .iter()
                .map(|q| {
                    vec![q.lateral_width_l * 1e6, q.mode.frequency_hz() / 1e9, q.b_xprime_zp * 1e6, q.b_z_zp * 1e6]
                })
                .collect();
            Table {
                provenance: provenance(&[
                    ("material", m.name.clone()),
                    ("freq_ghz_range", a.freq_ghz_range.clone()),
                    ("width_um_range", a.width_um_range.clone()),
                ]),
                columns: &["l_um", "freq_ghz", "b_xprime_zp_ut", "b_z_zp_ut"],
                rows,
            }
            .render(cli.format.unwrap_or(Format::Csv))?
        }
        Command::Couple(a) => {
            let m = material(cli)?;
            let (name, setup) = coupling_setup(&a.system)?;
            let mode = solve_mode_at_frequency(&m, setup.saw_freq)?;
            let qm = normalize_single_phonon(&mode, &m, setup.lateral_width_l)?;
            let r = couple(&qm, &setup.spec)?;
            let calibrated_n_s = match setup.spec {
                QubitSpec::MagnonFilm(mf) => Some(calibrated_spin_count(&qm, &mf, MAGNON_ANCHOR_HZ)),
                _ => None,
            };
            let record = CoupleRecord {
                system: name,
                material: &m.name,
                spec: setup.spec,
                saw_freq_ghz: setup.saw_freq / 1e9,
                width_um: setup.lateral_width_l * 1e6,
                g_re_rad_s: r.g.re,
                g_im_rad_s: r.g.im,
                g_abs_hz: r.g_abs_hz(),
                qubit_freq_ghz: r.qubit_freq / TWO_PI / 1e9,
                order: format!("{:?}", r.order).to_lowercase(),
                detuning_rad_s: r.detuning,
                b_xprime_zp_t: qm.b_xprime_zp,
                b_z_zp_t: qm.b_z_zp,
                u0k_m: qm.u0k,
                calibrated_n_s,
                calibration_target_hz: calibrated_n_s.map(|_| MAGNON_ANCHOR_HZ),
                warnings: r.warnings.clone(),
            };
            let prov = provenance(&[("material", m.name.clone()), ("system", name.to_string())]);
            render_record(&record, &prov, cli.format.unwrap_or(Format::Json))?
        }
        Command::Sweep(a) => {
            let m = material(cli)?;
            let (name, setup) = coupling_setup(&a.system)?;
            let axis: SweepAxis = a.axis.parse()?;
            let values = parse_range(&a.range, a.log)?;
            let rows = sweep_coupling(&m, &setup, axis, &values)?
                .into_iter()
                .map(|r| vec![r.axis_value, r.g_abs_hz, r.qubit_freq_ghz])
                .collect();
            Table {
                provenance: provenance(&[
                    ("material", m.name.clone()),
                    ("system", name.to_string()),
                    ("axis", a.axis.clone()),
                    ("range", a.range.clone()),
                    ("log", a.log.to_string()),
                    ("width_um", sig(setup.lateral_width_l * 1e6)),
                    ("saw_freq_ghz", sig(setup.saw_freq / 1e9)),
                ]),
                columns: &["axis_value", "g_abs_hz", "qubit_freq_ghz"],
                rows,
            }
            .render(cli.format.unwrap_or(Format::Csv))?
        }
        Command::Dynamics(a) => dynamics(a, cli.format.unwrap_or(Format::Csv))?,
        Command::Materials { action } => {
            let set = load_materials(cli)?;
            match action {
                MaterialsAction::List => set.names().map(|n| format!("{n}\n")).collect(),
                MaterialsAction::Show { name } => {
                    let m = set.get(name)?;
                    match cli.format {
                        Some(Format::Json) => serde_json::to_string_pretty(m)? + "\n",
                        _ => save_materials(std::slice::from_ref(m)),
                    }
                }
            }
        }
        Command::Verify { level } => {
            let level: Level = level.parse()?;
            let m = material(cli)?;
            let report = verify::run_for_material(&m, level, cli.seed);
            let text = match cli.format {
                Some(Format::Json) => serde_json::to_string_pretty(&report)? + "\n",
                _ => report.render(),
            };
            emit(&text, out)?;
            if !report.passed() {
                return Err(VerifyFailed { failed: report.failed_ids(), table: report.failing_table() }.into());
            }
            return Ok(());
        }
    };
    emit(&text, out)
}

fn sig(x: f64) -> String {
    piezosaw::numfmt::sig12(x)
}

fn system_preset(system: &str) -> &'static str {
    match system {
        "fluxonium" => "fig5a",
        "transmon" => "fig5b",
        "magnon" => "fig5c",
        _ => "fig5d",
    }
}

fn system_name(spec: &QubitSpec) -> &'static str {
    match spec {
        QubitSpec::Fluxonium(_) => "fluxonium",
        QubitSpec::Transmon(_) => "transmon",
        QubitSpec::MagnonFilm(_) => "magnon",
        QubitSpec::DefectCenter(_) => "nv",
    }
}

/// Preset or system defaults with the explicit flags applied on top.
fn coupling_setup(a: &SystemArgs) -> Result<(&'static str, CouplingSetup)> {
    let mut setup = match (&a.preset, &a.system) {
        (Some(p), _) => figure5_preset(p)?,
        (None, Some(s)) => figure5_preset(system_preset(s))?,
        (None, None) => return Err(usage("give --preset or --system")),
    };
    let name = system_name(&setup.spec);
    if let Some(s) = &a.system {
        if s != name {
            return Err(usage(format!("preset is a {name} setup but --system {s} was given")));
        }
    }
    let not_for = |flag: &str| usage(format!("--{flag} does not apply to {name}"));
    let ghz = |x: Option<f64>| x.map(|v| v * 1e9);
    match &mut setup.spec {
        QubitSpec::Fluxonium(f) => {
            f.e_c = ghz(a.ec_ghz).unwrap_or(f.e_c);
            f.e_j = ghz(a.ej_ghz).unwrap_or(f.e_j);
            f.e_l = ghz(a.el_ghz).unwrap_or(f.e_l);
            f.loop_area_s = a.loop_area_um2.map_or(f.loop_area_s, |s| s * 1e-12);
            setup.saw_freq = fluxonium_frequency(f.e_c, f.e_j, f.e_l);
        }
        QubitSpec::Transmon(t) => {
            if a.el_ghz.is_some() {
                return Err(not_for("el-ghz"));
            }
            t.e_c = ghz(a.ec_ghz).unwrap_or(t.e_c);
            t.e_j = ghz(a.ej_ghz).unwrap_or(t.e_j);
            t.loop_area_s = a.loop_area_um2.map_or(t.loop_area_s, |s| s * 1e-12);
            setup.saw_freq = transmon_frequency(t.e_c, t.e_j);
        }
        QubitSpec::MagnonFilm(mf) => {
            mf.gamma_f = ghz(a.gamma_ghz_per_t).unwrap_or(mf.gamma_f);
            mf.spin_s = a.spin_s.unwrap_or(mf.spin_s);
            mf.n_spins = a.n_spins.unwrap_or(mf.n_spins);
            mf.distance_d = a.distance_um.map_or(mf.distance_d, |d| d * 1e-6);
        }
        QubitSpec::DefectCenter(dc) => {
            if a.spin_s.is_some() || a.n_spins.is_some() {
                return Err(not_for("spin-s/--n-spins"));
            }
            dc.gamma_c = ghz(a.gamma_ghz_per_t).unwrap_or(dc.gamma_c);
            dc.distance_d = a.distance_um.map_or(dc.distance_d, |d| d * 1e-6);
        }
    }
    let superconducting = matches!(setup.spec, QubitSpec::Fluxonium(_) | QubitSpec::Transmon(_));
    if superconducting && (a.gamma_ghz_per_t.is_some() || a.spin_s.is_some() || a.n_spins.is_some() || a.distance_um.is_some()) {
        return Err(not_for("gamma-ghz-per-t/--spin-s/--n-spins/--distance-um"));
    }
    if !superconducting && (a.ec_ghz.is_some() || a.ej_ghz.is_some() || a.el_ghz.is_some() || a.loop_area_um2.is_some()) {
        return Err(not_for("ec-ghz/--ej-ghz/--el-ghz/--loop-area-um2"));
    }
    if let Some(f) = a.freq_ghz {
        setup.saw_freq = positive("freq-ghz", f)? * 1e9;
    }
    if let Some(l) = a.width_um {
        setup.lateral_width_l = positive("width-um", l)? * 1e-6;
    }
    setup.spec.validate()?;
    Ok((name, setup))
}

fn dynamics(a: &DynamicsArgs, format: Format) -> Result<String> {
    let mut prov: Vec<(&str, String)> = Vec::new();
    let mut p: DdeProblem = match &a.preset {
        Some(name) => {
            prov.push(("preset", name.clone()));
            figure_preset(name)?
        }
        None => {
            let (Some(g), Some(t)) = (a.gamma0_mhz, a.delay_us) else {
                bail!(usage("give --preset, or --gamma0-mhz and --delay-us"));
            };
            let gamma0 = TWO_PI * positive("gamma0-mhz", g)? * 1e6;
            if !(t >= 0.0 && t.is_finite()) {
                return Err(usage(format!("delay-us must be non-negative, got {t}")));
            }
            let delay = t * 1e-6;
            let theta = a.theta_pi.map_or_else(|| reconcile_theta(OMEGA10, delay), |x| x * PI);
            prov.push(("gamma0_mhz", g.to_string()));
            prov.push(("delay_us", t.to_string()));
            DdeProblem::new(gamma0, delay, theta, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        }
    };
    p.alpha_a0 = Complex64::new(a.alpha_a0, 0.0);
    p.alpha_b0 = Complex64::new(a.alpha_b0, 0.0);
    if let Some(t) = a.tmax_us {
        p.t_max = t * 1e-6;
    }
    if let Some(d) = a.dt_ns {
        p.dt = d * 1e-9;
    }
    if a.every == 0 {
        return Err(usage("every must be at least 1"));
    }
    prov.push(("theta_pi", sig(p.theta_t / PI)));
    prov.push(("alpha_a0", a.alpha_a0.to_string()));
    prov.push(("alpha_b0", a.alpha_b0.to_string()));
    prov.push(("tmax_us", sig(p.t_max * 1e6)));
    prov.push(("dt_ns", sig(p.dt * 1e9)));
    let trace = integrate(&p).context("delay equation integration")?;
    let last = trace.len() - 1;
    let rows = (0..trace.len())
        .filter(|i| i % a.every == 0 || *i == last)
        .map(|i| {
            let (aa, bb) = (trace.alpha_a[i], trace.alpha_b[i]);
            vec![trace.times[i] * 1e6, trace.p_a[i], trace.p_b[i], trace.concurrence[i], aa.re, aa.im, bb.re, bb.im]
        })
        .collect();
    Table {
        provenance: provenance(&prov),
        columns: &["t_us", "p_a", "p_b", "concurrence", "alpha_a_re", "alpha_a_im", "alpha_b_re", "alpha_b_im"],
        rows,
    }
    .render(format)
}

#[derive(Serialize)]
struct ModeRecord<'a> {
    material: &'a str,
    coupling: Coupling,
    freq_ghz: f64,
    v_m_s: f64,
    k_rad_m: f64,
    wavelength_m: f64,
    roots_found: usize,
    residual: f64,
    magnetically_inert: bool,
    canonical: Option<CanonicalParams>,
    waves: &'a [ModeWave],
}

#[derive(Serialize)]
struct ZeropointRecord<'a> {
    material: &'a str,
    freq_ghz: f64,
    width_um: f64,
    u0k_m: f64,
    b_xprime_zp_t: f64,
    b_z_zp_t: f64,
    u_zp_m: f64,
    energy_per_phonon_j: f64,
    energy_weight: f64,
    convention: &'static str,
    calibration_freq_ghz: f64,
    calibration_width_um: f64,
    calibration_u0k_m: f64,
}

#[derive(Serialize)]
struct CoupleRecord<'a> {
    system: &'static str,
    material: &'a str,
    spec: QubitSpec,
    saw_freq_ghz: f64,
    width_um: f64,
    g_re_rad_s: f64,
    g_im_rad_s: f64,
    g_abs_hz: f64,
    qubit_freq_ghz: f64,
    order: String,
    detuning_rad_s: f64,
    b_xprime_zp_t: f64,
    b_z_zp_t: f64,
    u0k_m: f64,
    calibrated_n_s: Option<f64>,
    calibration_target_hz: Option<f64>,
    warnings: Vec<String>,
}
