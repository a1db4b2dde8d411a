//! Parameter sets behind the published dynamics figures.

use num_complex::Complex64;

use super::DdeProblem;
use crate::constants::TWO_PI;
use crate::{Error, Result};

/// Qubit transition, rad/s.
pub const OMEGA10: f64 = TWO_PI * 4.72e9;

pub const FIGURE_PRESETS: [&str; 12] = [
    "fig7a", "fig7b", "fig7c", "fig8a", "fig8b", "fig8c", "fig9a", "fig9b", "fig9c", "fig10a", "fig10b",
    "fig10c",
];

/// Propagation phase omega10 T reduced to [0, 2 pi).
pub fn reconcile_theta(omega10: f64, delay_t: f64) -> f64 {
    let cycles = omega10 / TWO_PI * delay_t;
    let frac = cycles - cycles.round();
    (TWO_PI * frac).rem_euclid(TWO_PI)
}

fn delayed_problem(gamma0: f64, delay_t: f64, theta_t: f64) -> DdeProblem {
    DdeProblem::new(gamma0, delay_t, theta_t, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
}

/// Qubit A excited, B in its ground state, default step and horizon.
pub fn figure_preset(name: &str) -> Result<DdeProblem> {
    let idx = |c: char| match c {
        'a' => Some(0),
        'b' => Some(1),
        'c' => Some(2),
        _ => None,
    };
    let unknown = || Error::input(format!("unknown preset '{name}', expected one of {}", FIGURE_PRESETS.join(", ")));
    let (fig, panel) = name.split_at(name.len().saturating_sub(1));
    let i = panel.chars().next().and_then(idx).ok_or_else(unknown)?;
    let mhz = |f: f64| TWO_PI * f * 1e6;
    match fig {
        "fig7" => {
            let t = [0.1e-6, 0.2e-6, 0.3e-6][i];
            Ok(delayed_problem(mhz(100.0), t, reconcile_theta(OMEGA10, t)))
        }
        "fig8" => {
            let t = 0.1e-6;
            Ok(delayed_problem(mhz([100.0, 10.0, 1.0][i]), t, reconcile_theta(OMEGA10, t)))
        }
        "fig9" | "fig10" => {
            let pi = std::f64::consts::PI;
            let theta = [pi / 2.0, 3.0 * pi / 4.0, pi][i];
            let t = 0.1e-6 + theta.rem_euclid(pi) / OMEGA10;
            Ok(delayed_problem(mhz(1.0), t, theta))
        }
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_cycle_delay_has_zero_phase() {
        let th = reconcile_theta(OMEGA10, 0.1e-6);
        assert!(th < 1e-9 || TWO_PI - th < 1e-9);
    }

    #[test]
    fn all_presets_resolve() {
        for name in FIGURE_PRESETS {
            let p = figure_preset(name).unwrap();
            p.validate().unwrap();
        }
        assert!(figure_preset("fig11a").is_err());
        assert!(figure_preset("").is_err());
    }
}
