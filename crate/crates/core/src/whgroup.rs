//! Weyl-Heisenberg displacement operators, parity and the discrete Wigner
//! function.
//!
//! Conventions: `X|a> = |a+1>`, `Z|a> = w^a |a>` with `w = exp(2 pi i/d)`,
//! `tau = exp(i pi (d+1)/d)` and `D_p = tau^(p1 p2) X^p1 Z^p2`. With this
//! phase `D_p D_q = tau^<p,q> D_(p+q)` where `<p,q> = p2 q1 - p1 q2`.

use std::f64::consts::PI;

use crate::error::{check_dim, Error, Result};
use crate::{CMatrix, CVector, C64};

/// Period of `p -> D_p` in each coordinate: `2d` for even `d`, `d` for odd.
pub fn period(d: usize) -> i64 {
    if d.is_multiple_of(2) {
        2 * d as i64
    } else {
        d as i64
    }
}

/// Phase-space label `p = (p1, p2)`, reduced modulo the period of `D_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DisplacementIndex {
    p1: i64,
    p2: i64,
}

impl DisplacementIndex {
    pub fn new(d: usize, p1: i64, p2: i64) -> Self {
        let m = period(d);
        DisplacementIndex {
            p1: p1.rem_euclid(m),
            p2: p2.rem_euclid(m),
        }
    }

    pub fn p1(&self) -> i64 {
        self.p1
    }

    pub fn p2(&self) -> i64 {
        self.p2
    }

    pub fn neg(&self, d: usize) -> Self {
        Self::new(d, -self.p1, -self.p2)
    }

    pub fn add(&self, d: usize, q: &Self) -> Self {
        Self::new(d, self.p1 + q.p1, self.p2 + q.p2)
    }

    pub fn scale(&self, d: usize, n: i64) -> Self {
        Self::new(d, n * self.p1, n * self.p2)
    }

    /// Symplectic form `<p,q> = p2 q1 - p1 q2`.
    pub fn symplectic(&self, q: &Self) -> i64 {
        self.p2 * q.p1 - self.p1 * q.p2
    }
}

/// The `d^2` labels `(p1, p2)` with `0 <= p1, p2 < d`, row-major.
pub fn phase_space(d: usize) -> Vec<DisplacementIndex> {
    let n = d as i64;
    (0..n)
        .flat_map(|p1| (0..n).map(move |p2| DisplacementIndex::new(d, p1, p2)))
        .collect()
}

/// `tau^k`, with `k` reduced mod `2d` before exponentiating.
pub fn tau_pow(d: usize, k: i64) -> C64 {
    let m = 2 * d as i64;
    let k = k.rem_euclid(m) as f64;
    C64::from_polar(1.0, PI * (d as f64 + 1.0) * k / d as f64)
}

/// `w^k` with `w = exp(2 pi i/d)`.
pub fn omega_pow(d: usize, k: i64) -> C64 {
    let k = k.rem_euclid(d as i64) as f64;
    C64::from_polar(1.0, 2.0 * PI * k / d as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WhOperator {
    pub d: usize,
    pub matrix: CMatrix,
}

impl WhOperator {
    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }
}

pub fn displacement(d: usize, p: DisplacementIndex) -> Result<WhOperator> {
    check_dim(d)?;
    let mut m = CMatrix::zeros(d, d);
    let t = tau_pow(d, p.p1 * p.p2);
    for a in 0..d {
        let row = (a as i64 + p.p1).rem_euclid(d as i64) as usize;
        m[(row, a)] = t * omega_pow(d, p.p2 * a as i64);
    }
    Ok(WhOperator { d, matrix: m })
}

/// `D_p v` without building the matrix.
pub fn displace(v: &CVector, p: DisplacementIndex) -> CVector {
    let d = v.len();
    let t = tau_pow(d, p.p1 * p.p2);
    let mut out = CVector::zeros(d);
    for a in 0..d {
        let row = (a as i64 + p.p1).rem_euclid(d as i64) as usize;
        out[row] = t * omega_pow(d, p.p2 * a as i64) * v[a];
    }
    out
}

/// Parity `U_P |a> = |-a>`.
pub fn parity(d: usize) -> Result<WhOperator> {
    check_dim(d)?;
    let mut m = CMatrix::zeros(d, d);
    for a in 0..d {
        m[((d - a) % d, a)] = C64::new(1.0, 0.0);
    }
    Ok(WhOperator { d, matrix: m })
}

pub(crate) fn check_unit(psi: &CVector, tol: f64) -> Result<()> {
    let n = psi.norm();
    if !n.is_finite() || (n - 1.0).abs() > tol {
        return Err(Error::InvalidState(format!("vector norm {n} is not 1")));
    }
    Ok(())
}

/// `W(p) = (1/d) <psi| D_2p U_P |psi>` for odd `d`.
pub fn wigner(psi: &CVector, p: DisplacementIndex) -> Result<f64> {
    let d = psi.len();
    check_dim(d)?;
    if d.is_multiple_of(2) {
        return Err(Error::UnsupportedParity(d));
    }
    check_unit(psi, 1e-10)?;
    let mut reflected = CVector::zeros(d);
    for a in 0..d {
        reflected[(d - a) % d] = psi[a];
    }
    let w = psi.dotc(&displace(&reflected, p.scale(d, 2))) / d as f64;
    if w.im.abs() > 1e-9 {
        return Err(Error::InternalInconsistency(format!(
            "Wigner value has imaginary part {:e}",
            w.im
        )));
    }
    Ok(w.re)
}
