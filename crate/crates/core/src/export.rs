//! Plain-text exports: CSV with a header row, comma separator and LF line
//! endings; reals in 17-significant-digit scientific notation so that a
//! parse of the written text restores every value bit for bit.

use std::io::Write;

use crate::error::{Error, Result};
use crate::model::State;
use crate::trajectory::{Orbit, OrbitPoint};

/// Lossless text form of a double.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_orbit_csv<W: Write>(mut w: W, orbit: &Orbit) -> Result<()> {
    writeln!(w, "n,x,y")?;
    for pt in &orbit.states {
        writeln!(w, "{},{},{}", pt.n, fmt_real(pt.state.x), fmt_real(pt.state.y))?;
    }
    Ok(())
}

pub fn write_ode_csv<W: Write>(mut w: W, traj: &[(f64, State)]) -> Result<()> {
    writeln!(w, "t,x,y")?;
    for (t, s) in traj {
        writeln!(w, "{},{},{}", fmt_real(*t), fmt_real(s.x), fmt_real(s.y))?;
    }
    Ok(())
}

fn parse_real(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad number {field:?}")))
}

fn parse_rows(text: &str, header: &str) -> Result<Vec<[String; 3]>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == header => {}
        other => {
            return Err(Error::Parse(format!("expected header {header:?}, got {other:?}")));
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 fields", i + 2)));
            }
            Ok([f[0].to_string(), f[1].to_string(), f[2].to_string()])
        })
        .collect()
}

/// Parses the output of [`write_orbit_csv`].
pub fn parse_orbit_csv(text: &str) -> Result<Vec<OrbitPoint>> {
    parse_rows(text, "n,x,y")?
        .iter()
        .enumerate()
        .map(|(i, [n, x, y])| {
            let n = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad index {n:?}", i + 2)))?;
            Ok(OrbitPoint { n, state: State::new(parse_real(x, i + 2)?, parse_real(y, i + 2)?) })
        })
        .collect()
}

/// Parses the output of [`write_ode_csv`].
pub fn parse_ode_csv(text: &str) -> Result<Vec<(f64, State)>> {
    parse_rows(text, "t,x,y")?
        .iter()
        .enumerate()
        .map(|(i, [t, x, y])| {
            Ok((parse_real(t, i + 2)?, State::new(parse_real(x, i + 2)?, parse_real(y, i + 2)?)))
        })
        .collect()
}
