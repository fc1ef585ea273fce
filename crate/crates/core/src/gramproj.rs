//! Gram projectors of Weyl-Heisenberg orbits and their `P P^T = h h^dag`
//! factorization.

use crate::error::{Error, Result};
use crate::linalg::{
    max_abs, max_abs_diff, max_imag_part, max_real_part, nan_max, numerical_rank, to_complex, trace,
};
use crate::report::VerificationReport;
use crate::sicpovm::Fiducial;
use crate::whgroup::{
    check_unit, displace, omega_pow, phase_space, tau_pow, wigner, DisplacementIndex,
};
use crate::{CMatrix, CVector, RVector, C64};

/// Tolerance for the internal cross-check between the closed form of `h`
/// and the factorization of `P P^T`.
pub const H_CROSSCHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct WhGramBundle {
    pub d: usize,
    /// `P_pq = <psi_p|psi_q>/d`, rows and columns in row-major `(p1,p2)`.
    pub p: CMatrix,
    pub h: RVector,
    /// `P - h h^T`
    pub pbar: CMatrix,
    /// `P - P^T`
    pub jp: CMatrix,
}

/// `<p|h> = (1/sqrt d) sum_a tau^{p1 p2} w^{p2 a} <psi|-a-p1> <a|psi>`,
/// returned with its imaginary parts.
pub fn h_components(psi: &CVector) -> CVector {
    let d = psi.len();
    let pts = phase_space(d);
    let sd = (d as f64).sqrt();
    CVector::from_iterator(
        pts.len(),
        pts.iter().map(|p| {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..d {
                let idx = (-(a as i64) - p.p1()).rem_euclid(d as i64) as usize;
                acc += omega_pow(d, p.p2() * a as i64) * psi[idx].conj() * psi[a];
            }
            acc * tau_pow(d, p.p1() * p.p2()) / sd
        }),
    )
}

fn build(psi: &CVector) -> (CMatrix, CVector) {
    let d = psi.len();
    let orbit: Vec<CVector> = phase_space(d)
        .into_iter()
        .map(|p| displace(psi, p))
        .collect();
    let n = orbit.len();
    let p = CMatrix::from_fn(n, n, |a, b| orbit[a].dotc(&orbit[b]) / d as f64);
    (p, h_components(psi))
}

fn assemble(d: usize, p: CMatrix, h: RVector) -> WhGramBundle {
    let hh = to_complex(&(&h * h.transpose()));
    let pbar = &p - hh;
    let jp = &p - p.transpose();
    WhGramBundle { d, p, h, pbar, jp }
}

pub fn wh_gram_bundle(fid: &Fiducial) -> Result<WhGramBundle> {
    let psi = fid.components();
    check_unit(psi, 1e-10)?;
    let (p, hc) = build(psi);
    let im = max_imag_part(&CMatrix::from_column_slice(hc.len(), 1, hc.as_slice()));
    if im > H_CROSSCHECK_TOL {
        return Err(Error::InternalInconsistency(format!(
            "h has imaginary part {im:.2e}"
        )));
    }
    let h = hc.map(|z| z.re);
    let gap = max_abs_diff(&(&p * p.transpose()), &to_complex(&(&h * h.transpose())));
    if gap > H_CROSSCHECK_TOL {
        return Err(Error::InternalInconsistency(format!(
            "closed-form h disagrees with P P^T by {gap:.2e}"
        )));
    }
    Ok(assemble(fid.d(), p, h))
}

/// Same construction without the normalization check or the cross-check;
/// for probing invalid inputs.
pub fn wh_gram_bundle_unchecked(fid: &Fiducial) -> WhGramBundle {
    let (p, hc) = build(fid.components());
    assemble(fid.d(), p, hc.map(|z| z.re))
}

pub fn check_ppt(b: &WhGramBundle, tol: f64) -> VerificationReport {
    let d = b.d as f64;
    let mut rep = VerificationReport::new();
    let p = &b.p;
    let pt = p.transpose();
    let hh = to_complex(&(&b.h * b.h.transpose()));
    let pbar = &b.pbar;
    let jp2 = &b.jp * &b.jp;
    let anti = pbar - pbar.transpose();
    let anti2 = &anti * &anti;
    rep.record("gramproj.p_idempotent", max_abs_diff(&(p * p), p), tol);
    rep.record("gramproj.p_trace", (trace(p) - d).norm(), tol);
    rep.record(
        "gramproj.ppt_factorization",
        max_abs_diff(&(p * &pt), &hh),
        tol,
    );
    rep.record("gramproj.h_unit", (b.h.norm() - 1.0).abs(), tol);
    rep.record(
        "gramproj.pbar_idempotent",
        max_abs_diff(&(pbar * pbar), pbar),
        tol,
    );
    rep.record(
        "gramproj.pbar_rank",
        (numerical_rank(pbar) as f64 - (d - 1.0)).abs(),
        0.0,
    );
    rep.record(
        "gramproj.pbar_pbart_orthogonal",
        (pbar * pbar.transpose()).norm(),
        tol,
    );
    rep.record("gramproj.jp_imaginary", max_real_part(&b.jp), tol);
    rep.record(
        "gramproj.jp_squared_projector",
        max_abs_diff(&(&jp2 * &jp2), &jp2).max(max_imag_part(&jp2)),
        tol,
    );
    rep.record(
        "gramproj.jp_squared_rank",
        (numerical_rank(&jp2) as f64 - (2.0 * d - 2.0)).abs(),
        0.0,
    );
    rep.record(
        "gramproj.pbar_antisymmetric_part_qqt",
        max_real_part(&anti).max(max_abs_diff(&(&anti2 * &anti2), &anti2)),
        tol,
    );
    rep.record(
        "gramproj.jp_equals_pbar_part",
        max_abs(&(&b.jp - &anti)),
        tol,
    );
    rep
}

/// `<p|h> = sqrt(d) W(-2^{-1} p)` with `2^{-1} = (d+1)/2`, for odd `d`.
pub fn wigner_h_relation(fid: &Fiducial, tol: f64) -> Result<VerificationReport> {
    let d = fid.d();
    if d.is_multiple_of(2) {
        return Err(Error::UnsupportedParity(d));
    }
    let b = wh_gram_bundle(fid)?;
    let half = (d as i64 + 1) / 2;
    let sd = (d as f64).sqrt();
    let mut worst: f64 = 0.0;
    for (k, p) in phase_space(d).iter().enumerate() {
        let q = DisplacementIndex::new(d, -half * p.p1(), -half * p.p2());
        let w = wigner(fid.components(), q)?;
        worst = nan_max(worst, (b.h[k] - sd * w).abs());
    }
    let mut rep = VerificationReport::new();
    rep.record("gramproj.wigner_relation", worst, tol);
    Ok(rep)
}
