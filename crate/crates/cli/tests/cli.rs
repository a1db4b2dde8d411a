use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_piezosaw"));
    c.env_remove("PIEZOMAG_SAW_MATERIALS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn last_csv_row(text: &str) -> Vec<String> {
    text.lines().last().unwrap().split(',').map(str::to_owned).collect()
}

fn write_material(dir: &Path, name: &str, q33: &str) -> std::path::PathBuf {
    let path = dir.join(format!("{name}.toml"));
    std::fs::write(
        &path,
        format!(
            "[{name}]\nrho_g_cm3 = 9.06\nc11_gpa = 55\nc12_gpa = 43\nc44_gpa = 12\nq31_n_am = -45\nq33_n_am = {q33}\nmu11_un_a2 = 6.283\n"
        ),
    )
    .unwrap();
    path
}

#[test]
fn mode_reports_the_surface_velocity() {
    let o = run(&["mode", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o)["v_m_s"].as_f64().unwrap();
    assert!((v - 1005.0).abs() < 1.0, "{v}");
}

#[test]
fn dynamics_preset_ends_near_the_trapped_value() {
    let o = run(&["dynamics", "--preset", "fig10c"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# piezosaw"));
    assert_eq!(text.lines().nth(1).unwrap(), "t_us,p_a,p_b,concurrence,alpha_a_re,alpha_a_im,alpha_b_re,alpha_b_im");
    let c: f64 = last_csv_row(&text)[3].parse().unwrap();
    assert!((c - 0.19).abs() < 0.01, "{c}");
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn help_lists_csv_columns() {
    for (sub, col) in [("dynamics", "concurrence"), ("sweep", "axis_value"), ("profile", "z_over_lambda"), ("zeropoint-map", "b_z_zp_ut")] {
        let o = run(&[sub, "--help"]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(text.contains("CSV columns") && text.contains(col), "{sub}: {text}");
    }
}

#[test]
fn output_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&["zeropoint-map", "--freq-ghz-range", "1:10:4", "--width-um-range", "1:100:3", "-o", p.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert_eq!(String::from_utf8(ta).unwrap().lines().count(), 2 + 12);
}

#[test]
fn materials_from_files_and_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_material(dir.path(), "twin", "90");
    let o = run(&["--material-file", path.to_str().unwrap(), "--material", "twin", "mode", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let from_file = json(&o)["v_m_s"].as_f64().unwrap();
    let builtin = json(&run(&["mode", "--format", "json"]))["v_m_s"].as_f64().unwrap();
    assert_eq!(from_file, builtin);

    let o = bin()
        .env("PIEZOMAG_SAW_MATERIALS", &path)
        .args(["materials", "list"])
        .output()
        .unwrap();
    assert!(stdout(&o).contains("twin"));
    let o = run(&["materials", "show", "terfenol-D"]);
    assert!(stdout(&o).contains("q33_n_am = 90"));
}

#[test]
fn bad_material_exits_with_a_structured_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[bad]\nrho_g_cm3 = 0\nc11_gpa = 55\nc12_gpa = 43\nc44_gpa = 12\nq31_n_am = -45\nq33_n_am = 90\nmu11_un_a2 = 6.283\n").unwrap();
    let o = run(&["--material-file", path.to_str().unwrap(), "--material", "bad", "mode"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    let line = err.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    assert_eq!(v["exit_code"], 2);
    assert!(v["message"].as_str().unwrap().contains("rho"));
}

#[test]
fn oversized_step_is_rejected() {
    let o = run(&["dynamics", "--preset", "fig7a", "--dt-ns", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn couple_reports_a_coupling() {
    let o = run(&["couple", "--preset", "fig5d", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("g_abs_hz"), "{text}");
    let o = run(&["couple", "--system", "nv", "--loop-area-um2", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_and_reports_failures() {
    let a = run(&["verify", "full"]);
    let b = run(&["verify", "full"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("criteria passed"));
    let code = if text.contains("FAIL") { 1 } else { 0 };
    assert_eq!(a.status.code(), Some(code));
}

#[test]
fn verify_catches_a_flipped_coupling_constant() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_material(dir.path(), "flipped", "-90");
    let o = run(&["--material-file", path.to_str().unwrap(), "--material", "flipped", "verify"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.contains("FAIL tau")), "{text}");
}
