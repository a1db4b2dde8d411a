//! Material constants, the [110] rotation and material files.
//!
//! A material file holds one table per material:
//!
//! ```toml
//! [terfenol-D]
//! rho_g_cm3 = 9.06
//! c11_gpa = 55
//! c12_gpa = 43
//! c44_gpa = 12
//! q31_n_am = -45
//! q33_n_am = 90
//! mu11_un_a2 = 6.283
//! ```
//!
//! Values are converted to SI by shifting the decimal point of the literal as
//! written, so `save` followed by `load` reproduces every field bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const TERFENOL_D: &str = "terfenol-D";

/// Constants of a cubic piezomagnetic crystal in its crystal axes, SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub name: String,
    /// kg/m^3
    pub rho: f64,
    /// Pa
    pub c11: f64,
    pub c12: f64,
    pub c44: f64,
    /// N/(A m)
    pub q31: f64,
    pub q33: f64,
    /// N/A^2
    pub mu11: f64,
}

/// Constants seen by a wave travelling along [110].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotatedConstants {
    pub rho: f64,
    pub c11_prime: f64,
    pub c11: f64,
    pub c12: f64,
    pub c44: f64,
    pub q31: f64,
    pub q33: f64,
    pub mu11: f64,
}

impl MaterialParams {
    pub fn terfenol_d() -> Self {
        MaterialParams {
            name: TERFENOL_D.to_string(),
            rho: 9060.0,
            c11: 55e9,
            c12: 43e9,
            c44: 12e9,
            q31: -45.0,
            q33: 90.0,
            mu11: 6.283e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, reason: &str| Error::InvalidMaterial {
            name: self.name.clone(),
            reason: format!("{field}: {reason}"),
        };
        for (field, value) in self.fields() {
            if !value.is_finite() {
                return Err(bad(field, "must be finite"));
            }
        }
        if self.rho <= 0.0 {
            return Err(bad("rho", "must be > 0"));
        }
        if self.mu11 <= 0.0 {
            return Err(bad("mu11", "must be > 0"));
        }
        if self.c44 <= 0.0 {
            return Err(bad("c44", "must be > 0"));
        }
        if self.c11 - self.c12 <= 0.0 {
            return Err(bad("c11", "elastic stability requires c11 - c12 > 0"));
        }
        if self.c11 + 2.0 * self.c12 <= 0.0 {
            return Err(bad("c12", "elastic stability requires c11 + 2 c12 > 0"));
        }
        Ok(())
    }

    fn fields(&self) -> [(&'static str, f64); 7] {
        [
            ("rho", self.rho),
            ("c11", self.c11),
            ("c12", self.c12),
            ("c44", self.c44),
            ("q31", self.q31),
            ("q33", self.q33),
            ("mu11", self.mu11),
        ]
    }

    /// True when the piezomagnetic tensor vanishes.
    pub fn is_elastic(&self) -> bool {
        self.q31 == 0.0 && self.q33 == 0.0
    }
}

/// Effective constants for propagation along [110] (45 degree turn about z).
pub fn rotate_to_110(m: &MaterialParams) -> RotatedConstants {
    RotatedConstants {
        rho: m.rho,
        c11_prime: 0.5 * (m.c11 + m.c12 + 2.0 * m.c44),
        c11: m.c11,
        c12: m.c12,
        c44: m.c44,
        q31: m.q31,
        q33: m.q33,
        mu11: m.mu11,
    }
}

/// (v_shear, v_long) in the [110] frame, m/s.
pub fn bulk_velocities(m: &MaterialParams) -> (f64, f64) {
    let rc = rotate_to_110(m);
    ((rc.c44 / rc.rho).sqrt(), (rc.c11_prime / rc.rho).sqrt())
}

// File keys, their SI field and the power of ten taking file units to SI.
const KEYS: [(&str, &str, i32); 7] = [
    ("rho_g_cm3", "rho", 3),
    ("c11_gpa", "c11", 9),
    ("c12_gpa", "c12", 9),
    ("c44_gpa", "c44", 9),
    ("q31_n_am", "q31", 0),
    ("q33_n_am", "q33", 0),
    ("mu11_un_a2", "mu11", -6),
];

/// Rewrites a decimal literal multiplied by 10^shift without rounding.
fn shift_decimal(literal: &str, shift: i32) -> Option<String> {
    let cleaned: String = literal.chars().filter(|&c| c != '_').collect();
    let (mantissa, exp) = match cleaned.find(['e', 'E']) {
        Some(pos) => (
            cleaned[..pos].to_string(),
            cleaned[pos + 1..].parse::<i32>().ok()?,
        ),
        None => (cleaned, 0),
    };
    if mantissa.is_empty() {
        return None;
    }
    Some(format!("{mantissa}e{}", exp + shift))
}

fn parse_scaled(literal: &str, shift: i32) -> Option<f64> {
    let value: f64 = shift_decimal(literal, shift)?.parse().ok()?;
    value.is_finite().then_some(value)
}

fn format_scaled(value: f64, shift: i32) -> String {
    // `{:e}` is the shortest representation that parses back to `value`
    let literal = shift_decimal(&format!("{value:e}"), -shift).expect("float formatting is a valid literal");
    positional(&literal).unwrap_or(literal)
}

/// `d.ddde±x` written without an exponent when that stays short. Only the
/// decimal point moves, so the digits are unchanged.
fn positional(literal: &str) -> Option<String> {
    let (mantissa, exp) = literal.split_once('e')?;
    let exp: i32 = exp.parse().ok()?;
    if !(-6..=15).contains(&exp) {
        return None;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int}{frac}");
    let point = int.len() as i32 + exp;
    let body = if point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        format!("{}.{}", &digits[..point as usize], &digits[point as usize..])
    };
    let body = body.trim_start_matches('0');
    let body = if body.is_empty() || body.starts_with('.') { format!("0{body}") } else { body.to_string() };
    Some(format!("{sign}{body}"))
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

fn is_identifier(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

/// Parses material tables from the text of a material file.
pub fn parse_materials(src: &str, source_name: &str) -> Result<Vec<MaterialParams>> {
    let schema = |line: usize, message: String| Error::Schema {
        source_name: source_name.to_string(),
        line,
        message,
    };
    let doc = toml_edit::ImDocument::parse(src.to_string()).map_err(|e| {
        let line = e.span().map(|s| line_of(src, s.start)).unwrap_or(0);
        schema(line, e.message().to_string())
    })?;

    let mut out = Vec::new();
    for (name, item) in doc.as_table().iter() {
        let table_line = item.span().map(|s| line_of(src, s.start)).unwrap_or(0);
        let table = item
            .as_table()
            .ok_or_else(|| schema(table_line, format!("`{name}` must be a table")))?;
        if !is_identifier(name) {
            return Err(schema(table_line, format!("`{name}` is not a valid material name")));
        }
        for (key, value) in table.iter() {
            if !KEYS.iter().any(|(k, _, _)| *k == key) {
                let line = value.span().map(|s| line_of(src, s.start)).unwrap_or(table_line);
                return Err(schema(line, format!("unknown key `{key}` in [{name}]")));
            }
        }
        let mut values = [0.0; 7];
        for (slot, (key, _, shift)) in values.iter_mut().zip(KEYS) {
            let item = table
                .get(key)
                .ok_or_else(|| schema(table_line, format!("[{name}] is missing `{key}`")))?;
            let line = item.span().map(|s| line_of(src, s.start)).unwrap_or(table_line);
            let number = item
                .as_value()
                .filter(|v| v.is_float() || v.is_integer())
                .ok_or_else(|| schema(line, format!("[{name}] `{key}` must be a number")))?;
            let literal = number
                .span()
                .and_then(|s| src.get(s))
                .ok_or_else(|| schema(line, format!("[{name}] `{key}` has no source text")))?;
            *slot = parse_scaled(literal.trim(), shift)
                .ok_or_else(|| schema(line, format!("[{name}] `{key}` = {literal} is not finite")))?;
        }
        let m = MaterialParams {
            name: name.to_string(),
            rho: values[0],
            c11: values[1],
            c12: values[2],
            c44: values[3],
            q31: values[4],
            q33: values[5],
            mu11: values[6],
        };
        m.validate()?;
        out.push(m);
    }
    Ok(out)
}

/// Reads all materials in a file.
pub fn load_materials(path: &Path) -> Result<Vec<MaterialParams>> {
    let src = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_materials(&src, &path.display().to_string())
}

/// Renders materials in the file format.
pub fn save_materials(materials: &[MaterialParams]) -> String {
    let mut out = String::new();
    for (i, m) in materials.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "[{}]", m.name);
        for ((key, _, shift), (_, value)) in KEYS.iter().zip(m.fields()) {
            let _ = writeln!(out, "{key} = {}", format_scaled(value, *shift));
        }
    }
    out
}

/// Name-indexed collection with the built-in terfenol-D always present.
#[derive(Debug, Clone)]
pub struct MaterialSet {
    by_name: BTreeMap<String, MaterialParams>,
}

impl Default for MaterialSet {
    fn default() -> Self {
        let mut by_name = BTreeMap::new();
        by_name.insert(TERFENOL_D.to_string(), MaterialParams::terfenol_d());
        MaterialSet { by_name }
    }
}

impl MaterialSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds materials, later entries shadowing earlier ones of the same name.
    pub fn extend(&mut self, materials: impl IntoIterator<Item = MaterialParams>) {
        for m in materials {
            if let Some(old) = self.by_name.get(&m.name) {
                if *old == m {
                    log::warn!("material `{}` redefined with identical values", m.name);
                } else {
                    log::warn!("material `{}` shadowed by a new definition", m.name);
                }
            }
            self.by_name.insert(m.name.clone(), m);
        }
    }

    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let materials = load_materials(path)?;
        self.extend(materials);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&MaterialParams> {
        self.by_name
            .get(name)
            .ok_or_else(|| Error::UnknownMaterial(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.by_name.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &MaterialParams> {
        self.by_name.values()
    }
}
