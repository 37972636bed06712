//! Number formatting and CSV output.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statespace::{FrequencyGrid, Polynomial, RationalFunction};

pub const BODE_HEADER: &str = "omega_rad_s,magnitude_db,phase_deg,imag_part";

/// `x` with `digits` significant digits, `%g` style.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let e = format!("{:.*e}", digits - 1, x);
    let (mant, exp) = e.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mant = trim_zeros(mant);
        return format!("{mant}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Six significant digits, for human-readable reports.
pub fn h(x: f64) -> String {
    sig(x, 6)
}

/// Seventeen significant digits, round-trippable.
pub fn csv(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn hc(z: Complex64) -> String {
    if z.im == 0.0 {
        return h(z.re);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{}{}j", h(z.re), sign, h(z.im.abs()))
}

pub fn list(zs: &[Complex64]) -> String {
    zs.iter().map(|z| hc(*z)).collect::<Vec<_>>().join(", ")
}

pub fn row(xs: impl IntoIterator<Item = f64>) -> String {
    format!("[{}]", xs.into_iter().map(h).collect::<Vec<_>>().join(", "))
}

pub fn poly(p: &Polynomial) -> String {
    let d = p.degree();
    let mut out = String::new();
    for (i, &c) in p.coeffs().iter().enumerate() {
        if c == 0.0 && d > 0 {
            continue;
        }
        let k = d - i;
        if out.is_empty() {
            if c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0.0 { " - " } else { " + " });
        }
        let a = h(c.abs());
        match k {
            0 => out.push_str(&a),
            1 => write!(out, "{a} s").unwrap(),
            _ => write!(out, "{a} s^{k}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn rational(r: &RationalFunction) -> String {
    format!("({}) / ({})", poly(r.num()), poly(r.den()))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Bode rows `(ω, |G| dB, ∠G deg, Im G)` and frequencies skipped near poles.
pub fn bode_rows(rf: &RationalFunction, grid: &FrequencyGrid) -> Result<(Vec<[f64; 4]>, Vec<f64>)> {
    let r = rf.reduce()?;
    let poles = r.den().roots()?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut skipped = Vec::new();
    for &w in grid.points() {
        match r.eval_freq_with(w, &poles, grid.exclusion_radius) {
            Ok(g) => rows.push([
                w,
                20.0 * g.norm().log10(),
                g.im.atan2(g.re).to_degrees(),
                g.im,
            ]),
            Err(Error::NearPole { .. }) => skipped.push(w),
            Err(e) => return Err(e),
        }
    }
    Ok((rows, skipped))
}

pub fn bode_csv(rows: &[[f64; 4]]) -> String {
    let mut s = String::with_capacity(80 * (rows.len() + 1));
    s.push_str(BODE_HEADER);
    s.push('\n');
    for r in rows {
        writeln!(s, "{},{},{},{}", csv(r[0]), csv(r[1]), csv(r[2]), csv(r[3])).unwrap();
    }
    s
}
