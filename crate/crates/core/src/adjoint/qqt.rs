//! Matrices of the form `P - P^T` with `P P^T = 0`.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_defect, max_abs_diff, max_real_part, numerical_rank, real_span_frame,
    unit_eigenspace_frame,
};
use crate::{CMatrix, RMatrix, RVector, C64};

/// Default tolerance for [`is_qqt`].
pub const QQT_TOL: f64 = 1e-8;

/// True iff `A` is pure imaginary and `A^2` is a projector (optionally of
/// rank `2 * rank_target`). Non-Hermitian input is an error.
pub fn is_qqt(a: &CMatrix, rank_target: Option<usize>, tol: f64) -> Result<bool> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidMatrix("matrix is not square".into()));
    }
    let herm = hermitian_defect(a);
    if !(herm <= tol) {
        return Err(Error::InvalidMatrix(format!(
            "matrix is not Hermitian ({herm:.2e})"
        )));
    }
    if !(max_real_part(a) <= tol) {
        return Ok(false);
    }
    let a2 = a * a;
    if !(max_abs_diff(&(&a2 * &a2), &a2) <= tol) {
        return Ok(false);
    }
    if let Some(k) = rank_target {
        if numerical_rank(&a2) != 2 * k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A = S D S^T` with `S` real orthogonal and `D` holding `n` copies of
/// `sigma_y` on the leading diagonal blocks, zeros elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct QqtCanonicalForm {
    pub s: RMatrix,
    pub n: usize,
}

impl QqtCanonicalForm {
    pub fn block_matrix(&self) -> CMatrix {
        let dim = self.s.nrows();
        let mut d = CMatrix::zeros(dim, dim);
        for k in 0..self.n {
            d[(2 * k, 2 * k + 1)] = C64::new(0.0, -1.0);
            d[(2 * k + 1, 2 * k)] = C64::new(0.0, 1.0);
        }
        d
    }

    pub fn reconstruct(&self) -> CMatrix {
        let s = crate::linalg::to_complex(&self.s);
        &s * self.block_matrix() * s.transpose()
    }
}

/// Each unit vector `a_k` of the +1 eigenspace gives the orthonormal real
/// pair `sqrt(2) Re a_k`, `sqrt(2) Im a_k`; the remaining columns of `S`
/// complete these to a real orthonormal basis.
pub fn qqt_canonical_form(a: &CMatrix, tol: f64) -> Result<QqtCanonicalForm> {
    match is_qqt(a, None, tol) {
        Ok(true) => {}
        Ok(false) => {
            return Err(Error::NotDecomposable(
                "matrix fails the P - P^T test".into(),
            ))
        }
        Err(e) => return Err(Error::NotDecomposable(e.to_string())),
    }
    let dim = a.nrows();
    let plus = (a * a + a) * C64::new(0.5, 0.0);
    let frame = unit_eigenspace_frame(&plus);
    let n = frame.ncols();
    let sq2 = std::f64::consts::SQRT_2;
    let mut cols: Vec<RVector> = Vec::with_capacity(dim + 2 * n);
    for k in 0..n {
        let col = frame.column(k);
        cols.push(RVector::from_fn(dim, |i, _| sq2 * col[i].re));
        cols.push(RVector::from_fn(dim, |i, _| sq2 * col[i].im));
    }
    for i in 0..dim {
        let mut e = RVector::zeros(dim);
        e[i] = 1.0;
        cols.push(e);
    }
    let s = real_span_frame(&cols, dim);
    if s.ncols() != dim {
        return Err(Error::InternalInconsistency(
            "could not complete a real basis".into(),
        ));
    }
    Ok(QqtCanonicalForm { s, n })
}
