//! Command-line front end: mode solving, zero-point fields, couplings,
//! delay dynamics and the acceptance suite. Tables go out as CSV with a
//! `#` provenance line, scalar reports as JSON.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "piezosaw", version, about = "Piezomagnetic Rayleigh surface waves, zero-point fields, couplings and delay-coupled qubits")]
pub struct Cli {
    /// Material name; built-in: terfenol-D.
    #[arg(long, global = true, default_value = piezosaw::materials::TERFENOL_D)]
    pub material: String,

    /// Extra material file (repeatable). Files listed in PIEZOMAG_SAW_MATERIALS load first.
    #[arg(long = "material-file", global = true, value_name = "PATH")]
    pub material_file: Vec<PathBuf>,

    /// Write to this file (atomically) instead of stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Output format; tables default to csv, scalar reports to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the surface mode and print it as JSON (v_m_s, decay constants, canonical parameters, partial waves).
    Mode(ModeArgs),
    /// Depth profile of the mode per unit amplitude at x' = 0, t = 0.
    ///
    /// CSV columns: z_over_lambda,u1_re,u1_im,u3_re,u3_im,psi_re,psi_im
    /// (displacements dimensionless, psi in A/m, both per unit U0).
    Profile(ProfileArgs),
    /// Single-phonon amplitude and zero-point fields as JSON (u0k_m, b_xprime_zp_t, b_z_zp_t, u_zp_m).
    Zeropoint(ZeropointArgs),
    /// Zero-point fields over a grid of widths and frequencies.
    ///
    /// CSV columns: l_um,freq_ghz,b_xprime_zp_ut,b_z_zp_ut
    #[command(name = "zeropoint-map")]
    ZeropointMap(ZeropointMapArgs),
    /// Coupling of one phonon to a qubit, magnon film or defect center, as JSON.
    Couple(CoupleArgs),
    /// Coupling magnitude along one parameter axis.
    ///
    /// CSV columns: axis_value,g_abs_hz,qubit_freq_ghz
    /// (axis_value in SI: m^2 for loop_area_s, m for distance_d and lateral_width_l).
    Sweep(SweepArgs),
    /// Populations and concurrence of two qubits coupled through the delay line.
    ///
    /// CSV columns: t_us,p_a,p_b,concurrence,alpha_a_re,alpha_a_im,alpha_b_re,alpha_b_im
    Dynamics(DynamicsArgs),
    /// List or show materials.
    Materials {
        #[command(subcommand)]
        action: MaterialsAction,
    },
    /// Run the acceptance suite; exits 1 when any criterion fails.
    Verify {
        #[arg(value_parser = ["fast", "full"], default_value = "fast")]
        level: String,
    },
}

#[derive(Args, Debug)]
pub struct ModeArgs {
    /// Mode frequency, GHz.
    #[arg(long, default_value_t = 3.0)]
    pub freq_ghz: f64,
    /// Magnetic back-action on the lattice.
    #[arg(long, value_parser = ["one-way", "full"], default_value = "one-way")]
    pub coupling: String,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[arg(long, default_value_t = 10.0)]
    pub freq_ghz: f64,
    /// Depth range in wavelengths.
    #[arg(long, default_value_t = 2.0)]
    pub zmax_wavelengths: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct ZeropointArgs {
    #[arg(long, default_value_t = 10.0)]
    pub freq_ghz: f64,
    /// Lateral width L, um.
    #[arg(long, default_value_t = 1.0)]
    pub width_um: f64,
}

#[derive(Args, Debug)]
pub struct ZeropointMapArgs {
    /// start:stop:count, linear.
    #[arg(long, default_value = "1:10:10")]
    pub freq_ghz_range: String,
    /// start:stop:count, linear.
    #[arg(long, default_value = "1:100:12")]
    pub width_um_range: String,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Start from a figure preset: fig5a (fluxonium), fig5b (transmon), fig5c (magnon), fig5d (nv).
    #[arg(long)]
    pub preset: Option<String>,
    /// System; without a preset its figure defaults are used.
    #[arg(long, value_parser = ["fluxonium", "transmon", "magnon", "nv"])]
    pub system: Option<String>,
    /// Lateral width L, um.
    #[arg(long)]
    pub width_um: Option<f64>,
    /// Mode frequency, GHz; superconducting qubits default to resonance.
    #[arg(long)]
    pub freq_ghz: Option<f64>,
    /// Charging energy E_C/h, GHz.
    #[arg(long)]
    pub ec_ghz: Option<f64>,
    /// Josephson energy E_J/h, GHz.
    #[arg(long)]
    pub ej_ghz: Option<f64>,
    /// Inductive energy E_L/h, GHz.
    #[arg(long)]
    pub el_ghz: Option<f64>,
    /// Loop area S, um^2.
    #[arg(long)]
    pub loop_area_um2: Option<f64>,
    /// Gyromagnetic ratio, GHz/T.
    #[arg(long)]
    pub gamma_ghz_per_t: Option<f64>,
    /// Spin per site s.
    #[arg(long)]
    pub spin_s: Option<f64>,
    /// Number of spins N.
    #[arg(long)]
    pub n_spins: Option<f64>,
    /// Distance from the surface d, um.
    #[arg(long)]
    pub distance_um: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CoupleArgs {
    #[command(flatten)]
    pub system: SystemArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// loop_area_s, distance_d or lateral_width_l.
    #[arg(long)]
    pub axis: String,
    /// start:stop:count in SI units of the axis.
    #[arg(long)]
    pub range: String,
    /// Space the points logarithmically.
    #[arg(long)]
    pub log: bool,
}

#[derive(Args, Debug)]
pub struct DynamicsArgs {
    /// fig7a..c, fig8a..c, fig9a..c, fig10a..c.
    #[arg(long, conflicts_with_all = ["gamma0_mhz", "delay_us", "theta_pi"])]
    pub preset: Option<String>,
    /// Decay rate gamma0/2pi, MHz.
    #[arg(long)]
    pub gamma0_mhz: Option<f64>,
    /// Delay T, us.
    #[arg(long)]
    pub delay_us: Option<f64>,
    /// Phase theta_T in units of pi; defaults to omega10 T with omega10/2pi = 4.72 GHz.
    #[arg(long)]
    pub theta_pi: Option<f64>,
    /// End time, us; defaults to max(10 T, 20/gamma0).
    #[arg(long)]
    pub tmax_us: Option<f64>,
    /// Step, ns; defaults to min(T/50, 0.01/gamma0).
    #[arg(long)]
    pub dt_ns: Option<f64>,
    /// Initial amplitude of qubit A (real).
    #[arg(long, default_value_t = 1.0)]
    pub alpha_a0: f64,
    /// Initial amplitude of qubit B (real).
    #[arg(long, default_value_t = 0.0)]
    pub alpha_b0: f64,
    /// Keep every n-th step (the last step is always kept).
    #[arg(long, default_value_t = 1)]
    pub every: usize,
}

#[derive(Subcommand, Debug)]
pub enum MaterialsAction {
    /// Names of all known materials.
    List,
    /// Parameters of one material in the material-file format.
    Show { name: String },
}

/// The acceptance suite ran and something failed.
#[derive(Debug)]
pub struct VerifyFailed {
    pub failed: Vec<u8>,
    pub table: String,
}

impl std::fmt::Display for VerifyFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "criteria {:?} failed", self.failed)
    }
}

impl std::error::Error for VerifyFailed {}

/// 2 for bad input, 1 for numerical failures.
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<piezosaw::Error>() {
            return if err.is_usage() { 2 } else { 1 };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
        if cause.downcast_ref::<VerifyFailed>().is_some() {
            return 1;
        }
    }
    1
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code.clamp(0, 255) as u8);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            if let Some(v) = e.downcast_ref::<VerifyFailed>() {
                eprint!("{}", v.table);
            }
            let kind = if code == 2 { "usage" } else { "numerical" };
            let msg = format!("{e:#}");
            eprintln!("{}", serde_json::json!({ "error": kind, "message": msg, "exit_code": code }));
            ExitCode::from(code)
        }
    }
}
