//! From a Hermitian basis whose adjoint matrices have the Q-Q^T form back to
//! a SIC.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_defect, hermitian_eigen, max_abs, max_abs_diff, nan_max, singular_values, trace,
};
use crate::sicpovm::{validate_sic, SicSet};
use crate::tensors::{dim_from_index_size, Tensor3};
use crate::{CMatrix, CVector, C64};

use super::qqt::is_qqt;

/// `[L_r, L_s] = sum_t C_rst L_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    pub c: Tensor3<C64>,
    /// Largest entrywise residual of the commutator expansion.
    pub residual: f64,
}

impl StructureConstants {
    /// `(C_r)_st = C_rst`
    pub fn c_matrix(&self, r: usize) -> CMatrix {
        let n = self.c.n();
        CMatrix::from_fn(n, n, |s, t| self.c.get(r, s, t))
    }
}

fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_iterator(m.len(), m.iter().copied())
}

fn basis_dim(basis: &[CMatrix]) -> Result<usize> {
    let d = dim_from_index_size(basis.len()).map_err(|_| {
        Error::NotABasis(format!(
            "{} matrices cannot span d x d matrices",
            basis.len()
        ))
    })?;
    if basis.iter().any(|m| m.nrows() != d || m.ncols() != d) {
        return Err(Error::NotABasis(format!(
            "basis elements must be {d} x {d}"
        )));
    }
    Ok(d)
}

pub fn structure_constants(basis: &[CMatrix]) -> Result<StructureConstants> {
    let d = basis_dim(basis)?;
    let n = d * d;
    let mut m = CMatrix::zeros(n, n);
    for (t, l) in basis.iter().enumerate() {
        m.set_column(t, &vectorize(l));
    }
    let sv = singular_values(&m);
    let cond = sv.last().copied().unwrap_or(0.0) / sv.first().copied().unwrap_or(1.0);
    if !(cond > 1e-10) {
        return Err(Error::NotABasis(format!(
            "matrices are linearly dependent (singular value ratio {cond:.2e})"
        )));
    }
    let inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotABasis("vectorized basis is singular".into()))?;
    let mut c = Tensor3::zeros(n);
    let mut residual: f64 = 0.0;
    for r in 0..n {
        for s in 0..n {
            let comm = &basis[r] * &basis[s] - &basis[s] * &basis[r];
            let coeffs = &inv * vectorize(&comm);
            let mut back = CMatrix::zeros(d, d);
            for t in 0..n {
                c.set(r, s, t, coeffs[t]);
                back += &basis[t] * coeffs[t];
            }
            residual = nan_max(residual, max_abs_diff(&back, &comm));
        }
    }
    Ok(StructureConstants { c, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricCheckResult {
    pub beta: f64,
    pub gamma: f64,
    /// `sum_r l_r^2 / d`
    pub kappa: f64,
    /// `l_r = Tr L_r`
    pub l: Vec<f64>,
    /// Largest deviation of `Tr(L_r L_s)` from `beta delta_rs + gamma l_r l_s`.
    pub fit_residual: f64,
}

/// Least-squares fit of `Tr(L_r L_s) = beta delta_rs + gamma l_r l_s`.
pub fn metric_check(basis: &[CMatrix]) -> MetricCheckResult {
    let n = basis.len();
    let d = (n as f64).sqrt();
    let l: Vec<f64> = basis.iter().map(|m| trace(m).re).collect();
    let mut gram = vec![vec![0.0; n]; n];
    for r in 0..n {
        for s in 0..n {
            gram[r][s] = trace(&(&basis[r] * &basis[s])).re;
        }
    }
    // normal equations for the two columns delta_rs and l_r l_s
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for r in 0..n {
        for s in 0..n {
            let x1 = if r == s { 1.0 } else { 0.0 };
            let x2 = l[r] * l[s];
            a11 += x1 * x1;
            a12 += x1 * x2;
            a22 += x2 * x2;
            b1 += x1 * gram[r][s];
            b2 += x2 * gram[r][s];
        }
    }
    let det = a11 * a22 - a12 * a12;
    let (beta, gamma) = if det.abs() > 1e-14 * (a11 * a22).max(1.0) {
        ((b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det)
    } else {
        (b1 / a11, 0.0)
    };
    let mut fit_residual: f64 = 0.0;
    for r in 0..n {
        for s in 0..n {
            let model = if r == s { beta } else { 0.0 } + gamma * l[r] * l[s];
            fit_residual = nan_max(fit_residual, (gram[r][s] - model).abs());
        }
    }
    MetricCheckResult {
        beta,
        gamma,
        kappa: l.iter().map(|x| x * x).sum::<f64>() / d,
        l,
        fit_residual,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QqtRecovery {
    pub set: SicSet,
    /// `eps_r` with `L_r = eps_r (Pi_r + alpha I)`.
    pub signs: Vec<i8>,
    pub alpha: f64,
    /// Global sign `eps` that produced projectors.
    pub epsilon: i8,
    /// Mean of `|Tr L_r|`.
    pub l: f64,
    /// Largest deviation of `|Tr L_r|` from `l`.
    pub l_spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QqtOutcome {
    Recovered(Box<QqtRecovery>),
    /// Some adjoint matrix `C_r` is not of the Q-Q^T form with rank `d-1`.
    Rejected {
        reason: String,
        failing: Vec<usize>,
    },
}

/// Recover the SIC behind a Hermitian basis whose adjoint matrices all have
/// the Q-Q^T form with rank `d-1`, via `Pi_r = eps eps'_r L_r - alpha I`,
/// `alpha = (eps l - 1)/d`.
pub fn sic_from_qqt_basis(basis: &[CMatrix], tol: f64) -> Result<QqtOutcome> {
    let sc = structure_constants(basis)?;
    let d = basis_dim(basis)?;
    let n = d * d;
    let mut failing = Vec::new();
    for r in 0..n {
        let c = sc.c_matrix(r);
        let ok = hermitian_defect(&c) <= tol && is_qqt(&c, Some(d - 1), tol)?;
        if !ok {
            failing.push(r);
        }
    }
    if !failing.is_empty() {
        return Ok(QqtOutcome::Rejected {
            reason: format!("{} adjoint matrices lack the Q-Q^T form", failing.len()),
            failing,
        });
    }
    let traces: Vec<f64> = basis.iter().map(|m| trace(m).re).collect();
    let l = traces.iter().map(|x| x.abs()).sum::<f64>() / n as f64;
    let l_spread = traces
        .iter()
        .fold(0.0f64, |m, x| nan_max(m, (x.abs() - l).abs()));
    let primes: Vec<i8> = traces
        .iter()
        .map(|&x| if x < 0.0 { -1 } else { 1 })
        .collect();
    let df = d as f64;
    for eps in [1i8, -1] {
        let alpha = (eps as f64 * l - 1.0) / df;
        let mut vectors = Vec::with_capacity(n);
        let mut ok = true;
        for r in 0..n {
            let mut pi = &basis[r] * C64::new((eps * primes[r]) as f64, 0.0);
            for i in 0..d {
                pi[(i, i)] -= C64::new(alpha, 0.0);
            }
            let idem = max_abs_diff(&(&pi * &pi), &pi);
            let tr = (trace(&pi) - 1.0).norm();
            if !(idem <= tol && tr <= tol && hermitian_defect(&pi) <= tol) {
                ok = false;
                break;
            }
            let (_, vecs) = hermitian_eigen(&pi);
            let mut v: CVector = vecs.column(0).into_owned();
            crate::linalg::fix_first_phase(&mut v);
            vectors.push(v);
        }
        if !ok {
            continue;
        }
        let set = SicSet::new(vectors)?;
        if validate_sic(&set, tol).passed() {
            return Ok(QqtOutcome::Recovered(Box::new(QqtRecovery {
                set,
                signs: primes.iter().map(|p| eps * p).collect(),
                alpha,
                epsilon: eps,
                l,
                l_spread,
            })));
        }
    }
    Err(Error::InternalInconsistency(format!(
        "all adjoint matrices pass but neither sign gives rank-1 projectors (trace spread {:.2e}, max |L| {:.2e})",
        l_spread,
        basis.iter().map(max_abs).fold(0.0, nan_max)
    )))
}

/// Generalized Gell-Mann basis with the identity first; for `d = 2` this is
/// `{I, sigma_x, sigma_y, sigma_z}` up to ordering.
pub fn gell_mann_basis(d: usize) -> Vec<CMatrix> {
    let mut out = vec![CMatrix::identity(d, d)];
    for j in 0..d {
        for k in (j + 1)..d {
            let mut s = CMatrix::zeros(d, d);
            s[(j, k)] = C64::new(1.0, 0.0);
            s[(k, j)] = C64::new(1.0, 0.0);
            out.push(s);
            let mut a = CMatrix::zeros(d, d);
            a[(j, k)] = C64::new(0.0, -1.0);
            a[(k, j)] = C64::new(0.0, 1.0);
            out.push(a);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..l {
            m[(i, i)] = C64::new(norm, 0.0);
        }
        m[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        out.push(m);
    }
    out
}
