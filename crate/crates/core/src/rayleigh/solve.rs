use num_complex::Complex64;

use super::boundary::{boundary_matrix, signed_determinant};
use super::partial::{decay_roots_with, null_vector, Reduced};
use super::{CanonicalParams, Coupling, ModeWave, RayleighMode};
use crate::constants::TWO_PI;
use crate::materials::{bulk_velocities, rotate_to_110, MaterialParams, RotatedConstants};
use crate::{Error, Result};

type C = Complex64;

/// Samples of the velocity scan below the shear velocity.
pub const SCAN_SAMPLES: usize = 200;
const SCAN_LO: f64 = 0.3;
const SCAN_HI: f64 = 0.999;

/// Surface mode at wavenumber `k` with the default coupling.
pub fn solve_mode(m: &MaterialParams, k: f64) -> Result<RayleighMode> {
    solve_mode_with(m, k, Coupling::default())
}

/// Surface mode oscillating at `freq_hz`.
pub fn solve_mode_at_frequency(m: &MaterialParams, freq_hz: f64) -> Result<RayleighMode> {
    if !(freq_hz > 0.0) || !freq_hz.is_finite() {
        return Err(Error::input(format!("frequency must be positive, got {freq_hz}")));
    }
    let unit = solve_mode(m, 1.0)?;
    Ok(unit.with_wavenumber(TWO_PI * freq_hz / unit.v))
}

pub fn solve_mode_with(m: &MaterialParams, k: f64, coupling: Coupling) -> Result<RayleighMode> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::input(format!("wavenumber must be positive, got {k}")));
    }
    m.validate()?;
    let rc = rotate_to_110(m);
    let (vs, _) = bulk_velocities(m);
    let (v, roots_found, residual) = find_velocity(&rc, vs, coupling)?;
    extract(m, &rc, k, v, coupling, roots_found, residual)
}

fn find_velocity(rc: &RotatedConstants, vs: f64, coupling: Coupling) -> Result<(f64, usize, f64)> {
    let lo = SCAN_LO * vs;
    let hi = SCAN_HI * vs;
    let f = |v: f64| signed_determinant(rc, v, coupling);
    let mut samples = Vec::with_capacity(SCAN_SAMPLES);
    for i in 0..SCAN_SAMPLES {
        let v = lo + (hi - lo) * i as f64 / (SCAN_SAMPLES - 1) as f64;
        samples.push((v, f(v)?));
    }

    let mut roots = Vec::new();
    for pair in samples.windows(2) {
        let (va, Some((fa, na))) = pair[0] else { continue };
        let (vb, Some((fb, nb))) = pair[1] else { continue };
        if fa == 0.0 {
            roots.push((va, 0.0));
            continue;
        }
        if fa * fb >= 0.0 {
            continue;
        }
        let Some((v, res)) = bisect_secant(&f, va, fa, vb, fb)? else { continue };
        // a gauge or root-regime switch also flips the sign; a true root
        // brings the magnitude down with it
        if res <= 1e-8 * na.max(nb) {
            roots.push((v, res));
        }
    }
    let count = roots.len();
    let (v, residual) = roots
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or(Error::NoSurfaceRoot { lo, hi })?;
    Ok((v, count, residual))
}

fn bisect_secant(
    f: &impl Fn(f64) -> Result<Option<(f64, f64)>>,
    mut a: f64,
    mut fa: f64,
    mut b: f64,
    mut fb: f64,
) -> Result<Option<(f64, f64)>> {
    for _ in 0..200 {
        if (b - a) <= 1e-13 * b {
            break;
        }
        let mid = 0.5 * (a + b);
        let Some((fm, norm)) = f(mid)? else { return Ok(None) };
        if fm == 0.0 {
            return Ok(Some((mid, norm)));
        }
        if fa * fm < 0.0 {
            b = mid;
            fb = fm;
        } else {
            a = mid;
            fa = fm;
        }
    }
    // one secant step inside the final bracket
    let mut v = if fb != fa { a - fa * (b - a) / (fb - fa) } else { 0.5 * (a + b) };
    if !(v >= a && v <= b) {
        v = 0.5 * (a + b);
    }
    Ok(f(v)?.map(|(_, norm)| (v, norm)))
}

fn wrap_pi(x: f64) -> f64 {
    let y = x.rem_euclid(TWO_PI);
    if y > std::f64::consts::PI { y - TWO_PI } else { y }
}

fn extract(
    m: &MaterialParams,
    rc: &RotatedConstants,
    k: f64,
    v: f64,
    coupling: Coupling,
    roots_found: usize,
    residual: f64,
) -> Result<RayleighMode> {
    let red = Reduced::new(rc, v, coupling);
    let partial = decay_roots_with(rc, v, coupling)?;
    let b = boundary_matrix(&red, &partial)?;
    let c = null_vector(&b);

    let mut waves: Vec<ModeWave> = partial
        .iter()
        .zip(c)
        .map(|(w, cn)| {
            let [u1, u3, psi] = w.amplitudes(rc);
            ModeWave { q: w.q, u1: u1 * cn, u3: u3 * cn, psi: psi * cn }
        })
        .collect();

    let inert = m.q33 == 0.0;
    if inert {
        for w in &mut waves {
            w.psi = C::new(0.0, 0.0);
        }
    }

    let pair = (0..waves.len()).find(|&i| waves[i].q.im < 0.0);
    let scale = match pair {
        Some(i) => {
            let (a1, a2) = (waves[i].u1, waves[i + 1].u1);
            let sum = a1 + a2;
            let phase = if sum.norm() > 1e-12 * (a1.norm() + a2.norm()) {
                sum / sum.norm()
            } else {
                a1 / a1.norm()
            };
            phase * ((a1.norm_sqr() + a2.norm_sqr()) / 2.0).sqrt()
        }
        None => {
            let sum: C = waves.iter().map(|w| w.u1).sum();
            if sum.norm() > 0.0 {
                sum / 2.0
            } else {
                waves.iter().map(|w| w.u3).sum::<C>() / C::new(0.0, -2.0)
            }
        }
    };
    if !(scale.norm() > 0.0) || !scale.re.is_finite() {
        return Err(Error::numerical("surface mode has no displacement"));
    }
    for w in &mut waves {
        w.u1 /= scale;
        w.u3 /= scale;
        w.psi /= scale;
    }

    let canonical = match (pair, coupling) {
        (Some(i), Coupling::OneWay) => {
            let w1 = waves[i];
            let psi0 = m.q33 / m.mu11;
            let gamma = C::i() * w1.u3 / w1.u1;
            let (a, a3) = if inert {
                (C::new(0.0, 0.0), 0.0)
            } else {
                let lap = waves
                    .iter()
                    .find(|w| w.q == C::new(1.0, 0.0))
                    .map(|w| (w.psi / (C::i() * psi0)).re)
                    .unwrap_or(0.0);
                (w1.psi / (C::i() * psi0 * w1.u1), lap)
            };
            Some(CanonicalParams {
                q_alpha: w1.q.re,
                q_beta: -w1.q.im,
                theta: w1.u1.arg(),
                gamma_abs: gamma.norm(),
                xi: wrap_pi(gamma.arg()),
                a_coef: a.norm(),
                tau: if inert { 0.0 } else { wrap_pi(a.arg()) },
                a3_coef: a3,
            })
        }
        _ => None,
    };

    Ok(RayleighMode {
        material: m.name.clone(),
        coupling,
        k,
        omega: k * v,
        v,
        canonical,
        waves,
        roots_found,
        residual,
        magnetically_inert: inert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap() {
        assert!((wrap_pi(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!((wrap_pi(-0.5) + 0.5).abs() < 1e-15);
    }
}
