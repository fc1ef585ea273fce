//! Text formats.
//!
//! Fiducial file: first line `d`, then `d` lines `re im`.
//! Vector-set file: first line `set d`, then `d^2` lines of `2d` numbers
//! (`re im` pairs for each component).
//!
//! Numbers are written with 17 significant digits so a save/load cycle is
//! exact. Blank lines are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::{Fiducial, SicSet, FIDUCIAL_NORM_TOL};
use crate::error::{Error, Result};
use crate::{CVector, C64};

/// Largest dimension accepted from a file.
pub const MAX_FILE_DIM: usize = 4096;

/// Default norm tolerance for file-ingested fiducials.
pub const FILE_NORM_TOL: f64 = 1e-10;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidFile(msg.into())
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_dim(tok: &str, line: usize) -> Result<usize> {
    let d: usize = tok
        .parse()
        .map_err(|_| bad(format!("line {line}: bad dimension {tok:?}")))?;
    if !(2..=MAX_FILE_DIM).contains(&d) {
        return Err(bad(format!("line {line}: dimension {d} out of range")));
    }
    Ok(d)
}

fn parse_number(tok: &str, line: usize) -> Result<f64> {
    let x: f64 = tok
        .parse()
        .map_err(|_| bad(format!("line {line}: bad number {tok:?}")))?;
    if !x.is_finite() {
        return Err(bad(format!("line {line}: non-finite value")));
    }
    Ok(x)
}

fn parse_row(line: &str, lineno: usize, d: usize) -> Result<Vec<C64>> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 2 * d {
        return Err(bad(format!(
            "line {lineno}: expected {} numbers, found {}",
            2 * d,
            toks.len()
        )));
    }
    toks.chunks(2)
        .map(|p| {
            Ok(C64::new(
                parse_number(p[0], lineno)?,
                parse_number(p[1], lineno)?,
            ))
        })
        .collect()
}

pub fn parse_fiducial(text: &str) -> Result<Fiducial> {
    parse_fiducial_with_tol(text, FILE_NORM_TOL)
}

/// Parse a fiducial, accepting a norm within `norm_tol` of 1. Vectors off by
/// more than rounding are renormalized; exact ones are kept bit for bit.
pub fn parse_fiducial_with_tol(text: &str, norm_tol: f64) -> Result<Fiducial> {
    let mut lines = content_lines(text);
    let (n0, head) = lines.next().ok_or_else(|| bad("empty file"))?;
    let d = parse_dim(head, n0)?;
    let mut comps = Vec::with_capacity(d);
    for (lineno, line) in lines {
        if comps.len() == d {
            return Err(bad(format!("line {lineno}: more than {d} component rows")));
        }
        comps.extend(parse_row(line, lineno, 1)?);
    }
    if comps.len() != d {
        return Err(bad(format!(
            "header says d={d} but found {} rows",
            comps.len()
        )));
    }
    let v = CVector::from_vec(comps);
    let n = v.norm();
    if !n.is_finite() || (n - 1.0).abs() > norm_tol {
        return Err(bad(format!(
            "norm deviates from 1 by {:e}",
            (n - 1.0).abs()
        )));
    }
    if (n - 1.0).abs() > FIDUCIAL_NORM_TOL {
        Ok(Fiducial::new_unchecked(
            (v / C64::new(n, 0.0)).iter().copied().collect(),
        ))
    } else {
        Ok(Fiducial::new_unchecked(v.iter().copied().collect()))
    }
}

pub fn format_fiducial(fid: &Fiducial) -> String {
    let mut s = format!("{}\n", fid.d());
    for z in fid.components().iter() {
        let _ = writeln!(s, "{:.16e} {:.16e}", z.re, z.im);
    }
    s
}

pub fn load_fiducial(path: impl AsRef<Path>) -> Result<Fiducial> {
    load_fiducial_with_tol(path, FILE_NORM_TOL)
}

pub fn load_fiducial_with_tol(path: impl AsRef<Path>, norm_tol: f64) -> Result<Fiducial> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
        if e.kind() == std::io::ErrorKind::InvalidData {
            bad("file is not UTF-8 text")
        } else {
            Error::Io(e)
        }
    })?;
    parse_fiducial_with_tol(&text, norm_tol)
}

pub fn save_fiducial(fid: &Fiducial, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_fiducial(fid))?;
    Ok(())
}

/// Parse a vector-set file. Only the shape is checked.
pub fn parse_vector_set(text: &str) -> Result<SicSet> {
    let mut lines = content_lines(text);
    let (n0, head) = lines.next().ok_or_else(|| bad("empty file"))?;
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.len() != 2 || toks[0] != "set" {
        return Err(bad(format!("line {n0}: expected header \"set d\"")));
    }
    let d = parse_dim(toks[1], n0)?;
    let mut vectors = Vec::new();
    for (lineno, line) in lines {
        if vectors.len() == d * d {
            return Err(bad(format!(
                "line {lineno}: more than {} vector rows",
                d * d
            )));
        }
        vectors.push(CVector::from_vec(parse_row(line, lineno, d)?));
    }
    if vectors.len() != d * d {
        return Err(bad(format!(
            "header says d={d} but found {} of {} rows",
            vectors.len(),
            d * d
        )));
    }
    SicSet::new(vectors)
}

pub fn format_vector_set(set: &SicSet) -> String {
    let mut s = format!("set {}\n", set.d());
    for v in set.vectors() {
        let row: Vec<String> = v
            .iter()
            .map(|z| format!("{:.16e} {:.16e}", z.re, z.im))
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}
