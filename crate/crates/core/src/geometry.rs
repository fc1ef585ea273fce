//! Subspace geometry of the projectors `Q_r`, `Q_r^T` and `Rbar_r`.
//!
//! For `r != s`: `f_rs = i sqrt(d+1) Q_r|s>`, `f*_rs = -i sqrt(d+1) Q_r^T|s>`,
//! `g_rs = (f*_rs + f_rs)/sqrt(2)`, `gbar_rs = i (f*_rs - f_rs)/sqrt(2)`, and
//! per `r`: `ebar_r = sqrt(2d/(d-1)) e_r - sqrt((d+1)/(d-1)) v0`.
//! Pieces: `Q_rs = Q_r - f_rs f_rs^dag`, `Qbar_rs = Q_r^T - f*_rs f*_rs^dag`,
//! `R_rs = Rbar_r - g_rs g_rs^T - gbar_rs gbar_rs^T`.

use crate::adjoint::AdjointBundle;
use crate::error::{Error, Result};
use crate::linalg::{
    canonical_frame, hermitian_defect, hermitian_eigen, max_abs, max_abs_diff, outer,
    singular_values, to_complex, vec_to_complex, UNIT_EIGEN_THRESHOLD,
};
use crate::report::{VerificationReport, DEGENERATE};
use crate::tensors::Sampling;
use crate::{CMatrix, CVector, RVector, C64};

/// Projector tolerance accepted by [`SubspaceFrame::from_projector`].
pub const PROJECTOR_TOL: f64 = 1e-8;

/// Principal cosines above `1 - INTERSECTION_TOL` count as shared directions.
pub const INTERSECTION_TOL: f64 = 1e-8;

/// Pairs sampled per dimension once `d` exceeds the exhaustive limit.
pub const PAIR_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceFrame {
    /// Orthonormal columns.
    pub frame: CMatrix,
    /// `frame frame^dag`
    pub projector: CMatrix,
}

impl SubspaceFrame {
    pub fn from_projector(p: &CMatrix) -> Result<Self> {
        if p.nrows() != p.ncols() {
            return Err(Error::Invalid("projector is not square".into()));
        }
        let defect = hermitian_defect(p).max(max_abs_diff(&(p * p), p));
        if !(defect <= PROJECTOR_TOL) {
            return Err(Error::Invalid(format!(
                "not a projector (defect {defect:.2e})"
            )));
        }
        let (vals, vecs) = hermitian_eigen(p);
        let k = vals.iter().filter(|&&l| l > UNIT_EIGEN_THRESHOLD).count();
        let v = vecs.columns(0, k).into_owned();
        let frame = canonical_frame(&(&v * v.adjoint()), k);
        let projector = &frame * frame.adjoint();
        Ok(SubspaceFrame { frame, projector })
    }

    pub fn from_vectors(vs: &[CVector]) -> Self {
        let n = vs.first().map_or(0, |v| v.len());
        let mut cols: Vec<CVector> = Vec::new();
        for v in vs {
            let mut w = v.clone();
            for _ in 0..2 {
                for q in &cols {
                    let a = q.dotc(&w);
                    w -= q * a;
                }
            }
            let nw = w.norm();
            if nw > 1e-8 {
                cols.push(w / C64::new(nw, 0.0));
            }
        }
        let mut frame = CMatrix::zeros(n, cols.len());
        for (j, q) in cols.iter().enumerate() {
            frame.set_column(j, q);
        }
        let projector = &frame * frame.adjoint();
        SubspaceFrame { frame, projector }
    }

    pub fn rank(&self) -> usize {
        self.frame.ncols()
    }
}

/// Cosines of the principal angles between the ranges of two projectors,
/// descending; `min(rank P, rank P')` values.
pub fn principal_cosines(p: &CMatrix, pp: &CMatrix) -> Result<Vec<f64>> {
    let a = SubspaceFrame::from_projector(p)?;
    let b = SubspaceFrame::from_projector(pp)?;
    Ok(frame_cosines(&a, &b))
}

fn frame_cosines(a: &SubspaceFrame, b: &SubspaceFrame) -> Vec<f64> {
    let k = a.rank().min(b.rank());
    let mut s = singular_values(&(a.frame.adjoint() * &b.frame));
    s.truncate(k);
    s.iter().map(|x| x.min(1.0)).collect()
}

/// `(residual, c)` with `c^2 = Tr(P P' P)/rank P` and
/// `residual = max |P P' P - c^2 P|`.
pub fn inclination(p: &CMatrix, pp: &CMatrix) -> Result<(f64, f64)> {
    let a = SubspaceFrame::from_projector(p)?;
    let b = SubspaceFrame::from_projector(pp)?;
    if a.rank() != b.rank() {
        return Err(Error::Invalid(format!(
            "ranks differ ({} vs {})",
            a.rank(),
            b.rank()
        )));
    }
    if a.rank() == 0 {
        return Err(Error::Invalid("subspaces are zero-dimensional".into()));
    }
    let (p, pp) = (&a.projector, &b.projector);
    let ppp = p * pp * p;
    let c2 = crate::linalg::trace(&ppp).re / a.rank() as f64;
    let residual = max_abs_diff(&ppp, &(p * C64::new(c2, 0.0)));
    Ok((residual, c2.max(0.0).sqrt()))
}

/// Whether `P P' P = c^2 P` within `tol`; returns `c` as well.
pub fn check_uniform_inclination(p: &CMatrix, pp: &CMatrix, tol: f64) -> Result<(bool, f64)> {
    let (res, c) = inclination(p, pp)?;
    Ok((res <= tol, c))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeomVectors {
    pub d: usize,
    /// `f[r][s]`; the diagonal entries are zero vectors and unused.
    pub f: Vec<Vec<CVector>>,
    pub fstar: Vec<Vec<CVector>>,
    pub g: Vec<Vec<RVector>>,
    pub gbar: Vec<Vec<RVector>>,
    pub ebar: Vec<RVector>,
}

pub fn geom_vectors(b: &AdjointBundle) -> GeomVectors {
    let d = b.d;
    let n = b.n();
    let df = d as f64;
    let sq = (df + 1.0).sqrt();
    let sq2 = std::f64::consts::SQRT_2;
    let mut f = vec![vec![CVector::zeros(n); n]; n];
    let mut fstar = vec![vec![CVector::zeros(n); n]; n];
    let mut g = vec![vec![RVector::zeros(n); n]; n];
    let mut gbar = vec![vec![RVector::zeros(n); n]; n];
    for r in 0..n {
        let q = &b.q[r];
        for s in 0..n {
            if r == s {
                continue;
            }
            let frs: CVector = q.column(s).into_owned() * C64::new(0.0, sq);
            let fsrs: CVector = q.row(s).transpose() * C64::new(0.0, -sq);
            let gp = (&fsrs + &frs) / C64::new(sq2, 0.0);
            let gm = (&fsrs - &frs) * C64::new(0.0, 1.0 / sq2);
            g[r][s] = gp.map(|z| z.re);
            gbar[r][s] = gm.map(|z| z.re);
            f[r][s] = frs;
            fstar[r][s] = fsrs;
        }
    }
    let a = (2.0 * df / (df - 1.0)).sqrt();
    let c = ((df + 1.0) / (df - 1.0)).sqrt();
    let ebar = b.e.iter().map(|e| e * a - &b.v0 * c).collect();
    GeomVectors {
        d,
        f,
        fstar,
        g,
        gbar,
        ebar,
    }
}

fn rproj(v: &RVector) -> CMatrix {
    to_complex(&(v * v.transpose()))
}

fn rvec(v: &RVector) -> CVector {
    vec_to_complex(v)
}

struct Pieces {
    q: CMatrix,
    qbar: CMatrix,
    r: CMatrix,
}

fn pieces(b: &AdjointBundle, gv: &GeomVectors, r: usize, s: usize) -> Pieces {
    let f = &gv.f[r][s];
    let fs = &gv.fstar[r][s];
    Pieces {
        q: &b.q[r] - outer(f, f),
        qbar: b.q[r].transpose() - outer(fs, fs),
        r: &b.rbar[r] - rproj(&gv.g[r][s]) - rproj(&gv.gbar[r][s]),
    }
}

fn inclination_error(p: &CMatrix, pp: &CMatrix, want: f64) -> f64 {
    match inclination(p, pp) {
        Ok((res, c)) => res.max((c - want).abs()),
        Err(_) => f64::NAN,
    }
}

fn rank_of(p: &CMatrix) -> usize {
    SubspaceFrame::from_projector(p).map_or(usize::MAX, |f| f.rank())
}

/// Relations between the decompositions of `Q_r`, `Q_r^T`, `Q_s`, `Q_s^T`
/// and the `f` identities, for one ordered pair `r != s`.
pub fn verify_q_geometry(
    b: &AdjointBundle,
    gv: &GeomVectors,
    r: usize,
    s: usize,
    tol: f64,
) -> VerificationReport {
    let d = b.d;
    let df = d as f64;
    let mut rep = VerificationReport::new();
    let (frs, fsr) = (&gv.f[r][s], &gv.f[s][r]);
    let (fsrs, fssr) = (&gv.fstar[r][s], &gv.fstar[s][r]);
    let one = 1.0 / (df + 1.0);
    let dd = df / (df + 1.0);

    rep.record(
        "geometry.f_unit",
        (frs.norm() - 1.0).abs().max((fsrs.norm() - 1.0).abs()),
        tol,
    );
    rep.record("geometry.f_fstar_orthogonal", frs.dotc(fsrs).norm(), tol);
    rep.record(
        "geometry.f_in_q",
        (&b.q[r] * frs - frs)
            .norm()
            .max((b.q[r].transpose() * fsrs - fsrs).norm()),
        tol,
    );
    rep.record(
        "geometry.f_overlaps",
        (frs.dotc(fsr) + one)
            .norm()
            .max((frs.dotc(fssr) + dd).norm()),
        tol,
    );
    rep.record(
        "geometry.f_q_action",
        (&b.q[s] * frs + fsr * C64::new(one, 0.0))
            .norm()
            .max((b.q[s].transpose() * frs + fssr * C64::new(dd, 0.0)).norm()),
        tol,
    );
    let es = rvec(&b.e[s]);
    let er = rvec(&b.e[r]);
    rep.record(
        "geometry.f_decomposition",
        (frs + fssr - (es - er) * C64::new(0.0, (2.0 / df).sqrt())).norm(),
        tol,
    );
    rep.record(
        "geometry.q_line_cosine",
        (frs.dotc(fsr).norm() - one).abs(),
        tol,
    );
    rep.record(
        "geometry.qt_line_cosine",
        (fsrs.dotc(fssr).norm() - one).abs(),
        tol,
    );
    rep.record(
        "geometry.q_qt_line_cosine",
        (frs.dotc(fssr).norm() - dd).abs(),
        tol,
    );

    let names = [
        "geometry.q_piece_rank",
        "geometry.q_pieces_orthogonal",
        "geometry.q_uniform_inclination",
        "geometry.qt_pieces_orthogonal",
        "geometry.qt_uniform_inclination",
        "geometry.q_qt_pieces_orthogonal",
    ];
    if d == 2 {
        for n in names {
            rep.skip(n, DEGENERATE);
        }
        return rep;
    }
    let prs = pieces(b, gv, r, s);
    let psr = pieces(b, gv, s, r);
    let want_rank = (d - 2) as f64;
    rep.record(
        "geometry.q_piece_rank",
        (rank_of(&prs.q) as f64 - want_rank)
            .abs()
            .max((rank_of(&prs.qbar) as f64 - want_rank).abs()),
        0.0,
    );
    rep.record(
        "geometry.q_pieces_orthogonal",
        (&psr.q * frs).norm().max((&prs.q * fsr).norm()),
        tol,
    );
    let c = 1.0 / (df + 1.0).sqrt();
    rep.record(
        "geometry.q_uniform_inclination",
        inclination_error(&prs.q, &psr.q, c),
        tol,
    );
    rep.record(
        "geometry.qt_pieces_orthogonal",
        (&psr.qbar * fsrs).norm().max((&prs.qbar * fssr).norm()),
        tol,
    );
    rep.record(
        "geometry.qt_uniform_inclination",
        inclination_error(&prs.qbar, &psr.qbar, c),
        tol,
    );
    rep.record(
        "geometry.q_qt_pieces_orthogonal",
        (&psr.qbar * frs)
            .norm()
            .max((&prs.q * fssr).norm())
            .max(max_abs(&(&prs.q * &psr.qbar))),
        tol,
    );
    rep
}

/// Relations between the decompositions of `Rbar_r` and `Rbar_s`, for one
/// ordered pair `r != s`.
pub fn verify_r_geometry(
    b: &AdjointBundle,
    gv: &GeomVectors,
    r: usize,
    s: usize,
    tol: f64,
) -> VerificationReport {
    let d = b.d;
    let df = d as f64;
    let mut rep = VerificationReport::new();
    let (g, gs) = (&gv.g[r][s], &gv.g[s][r]);
    let (gb, gbs) = (&gv.gbar[r][s], &gv.gbar[s][r]);
    rep.record(
        "geometry.g_orthonormal",
        (g.norm() - 1.0)
            .abs()
            .max((gb.norm() - 1.0).abs())
            .max(g.dot(gb).abs()),
        tol,
    );
    rep.record(
        "geometry.g_in_r",
        (&b.rbar[r] * rvec(g) - rvec(g))
            .norm()
            .max((&b.rbar[r] * rvec(gb) - rvec(gb)).norm()),
        tol,
    );
    rep.record("geometry.g_antisymmetric", (g + gs).norm(), tol);
    rep.record("geometry.r_common_line", (g.dot(gs).abs() - 1.0).abs(), tol);
    rep.record(
        "geometry.r_line_cosine",
        (gb.dot(gbs).abs() - (df - 1.0) / (df + 1.0)).abs(),
        tol,
    );
    let fr = SubspaceFrame::from_projector(&b.rbar[r]);
    let fs = SubspaceFrame::from_projector(&b.rbar[s]);
    let shared = match (fr, fs) {
        (Ok(a), Ok(c)) => frame_cosines(&a, &c)
            .iter()
            .filter(|&&x| x > 1.0 - INTERSECTION_TOL)
            .count() as f64,
        _ => f64::NAN,
    };
    rep.record("geometry.r_intersection_line", (shared - 1.0).abs(), 0.0);

    let names = [
        "geometry.r_piece_rank",
        "geometry.r_pieces_orthogonal",
        "geometry.r_uniform_inclination",
    ];
    if d == 2 {
        for n in names {
            rep.skip(n, DEGENERATE);
        }
        return rep;
    }
    let prs = pieces(b, gv, r, s);
    let psr = pieces(b, gv, s, r);
    rep.record(
        "geometry.r_piece_rank",
        (rank_of(&prs.r) as f64 - (2 * d - 4) as f64).abs(),
        0.0,
    );
    rep.record(
        "geometry.r_pieces_orthogonal",
        (&psr.r * rvec(gb)).norm().max((&prs.r * rvec(gbs)).norm()),
        tol,
    );
    rep.record(
        "geometry.r_uniform_inclination",
        inclination_error(&prs.r, &psr.r, 1.0 / (df + 1.0).sqrt()),
        tol,
    );
    rep
}

/// `ebar_r` is a unit vector orthogonal to `v0` and annihilated by `Q_r`,
/// `Q_r^T`, `Rbar_r`.
pub fn verify_ebar(b: &AdjointBundle, gv: &GeomVectors, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new();
    for r in 0..b.n() {
        let e = &gv.ebar[r];
        let ec = rvec(e);
        rep.record("geometry.ebar_unit", (e.norm() - 1.0).abs(), tol);
        rep.record("geometry.ebar_orthogonal_v0", e.dot(&b.v0).abs(), tol);
        rep.record(
            "geometry.ebar_annihilated",
            (&b.q[r] * &ec)
                .norm()
                .max((b.q[r].transpose() * &ec).norm())
                .max((&b.rbar[r] * &ec).norm()),
            tol,
        );
    }
    rep
}

/// The eight outer-product sum identities and the vanishing cross sum
/// `sum_s f_rs f*_rs^dag = 0`.
pub fn f_sum_identities(b: &AdjointBundle, gv: &GeomVectors, tol: f64) -> VerificationReport {
    let d = b.d;
    let df = d as f64;
    let n = b.n();
    let comp = b.v0_complement();
    let mut rep = VerificationReport::new();
    let k = |x: f64| C64::new(x, 0.0);
    for r in 0..n {
        let mut sums: [CMatrix; 9] = std::array::from_fn(|_| CMatrix::zeros(n, n));
        for s in 0..n {
            if s == r {
                continue;
            }
            sums[0] += outer(&gv.f[r][s], &gv.f[r][s]);
            sums[1] += outer(&gv.fstar[r][s], &gv.fstar[r][s]);
            sums[2] += rproj(&gv.g[r][s]);
            sums[3] += rproj(&gv.gbar[r][s]);
            sums[4] += outer(&gv.f[s][r], &gv.f[s][r]);
            sums[5] += outer(&gv.fstar[s][r], &gv.fstar[s][r]);
            sums[6] += rproj(&gv.g[s][r]);
            sums[7] += rproj(&gv.gbar[s][r]);
            sums[8] += outer(&gv.f[r][s], &gv.fstar[r][s]);
        }
        let q = &b.q[r];
        let qt = q.transpose();
        let rb = &b.rbar[r];
        let ee = rproj(&gv.ebar[r]);
        let tail = &comp * k(1.0 / (df * df - 1.0));
        rep.record(
            "geometry.fsum_f",
            max_abs_diff(&(&sums[0] * k(1.0 / (df + 1.0))), q),
            tol,
        );
        rep.record(
            "geometry.fsum_fstar",
            max_abs_diff(&(&sums[1] * k(1.0 / (df + 1.0))), &qt),
            tol,
        );
        rep.record(
            "geometry.fsum_g",
            max_abs_diff(&(&sums[2] * k(2.0 / (df + 1.0))), rb),
            tol,
        );
        rep.record(
            "geometry.fsum_gbar",
            max_abs_diff(&(&sums[3] * k(2.0 / (df + 1.0))), rb),
            tol,
        );
        rep.record(
            "geometry.fsum_f_reversed",
            max_abs_diff(&(&sums[4] * k(1.0 / (df - 1.0))), &(&qt + &ee + &tail)),
            tol,
        );
        rep.record(
            "geometry.fsum_fstar_reversed",
            max_abs_diff(&(&sums[5] * k(1.0 / (df - 1.0))), &(q + &ee + &tail)),
            tol,
        );
        rep.record(
            "geometry.fsum_g_reversed",
            max_abs_diff(&(&sums[6] * k(2.0 / (df + 1.0))), rb),
            tol,
        );
        if d >= 4 {
            let want = rb
                + &ee * k(4.0 * (df - 1.0) / (df - 3.0))
                + &comp * k(4.0 / ((df + 1.0) * (df - 3.0)));
            rep.record(
                "geometry.fsum_gbar_reversed",
                max_abs_diff(&(&sums[7] * k(2.0 / (df - 3.0))), &want),
                tol,
            );
        } else {
            rep.skip("geometry.fsum_gbar_reversed", DEGENERATE);
        }
        rep.record("geometry.fsum_f_fstar_cross", max_abs(&sums[8]), tol);
    }
    rep
}

/// Pairwise checks over all ordered pairs (small `d`) or seeded samples.
pub fn verify_geometry(
    b: &AdjointBundle,
    gv: &GeomVectors,
    tol: f64,
    sampling: &Sampling,
) -> VerificationReport {
    let mut rep = VerificationReport::new();
    sampling.for_each_pair(b.d, PAIR_SAMPLES, |r, s| {
        rep.extend(verify_q_geometry(b, gv, r, s, tol));
        rep.extend(verify_r_geometry(b, gv, r, s, tol));
    });
    rep.extend(verify_ebar(b, gv, tol));
    rep
}
