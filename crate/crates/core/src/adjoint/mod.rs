//! Adjoint matrices of SIC projectors and the identities they satisfy.
//!
//! For each `r` the bundle holds `(T_r)_st = T_rst`, `J_r`, `R_r`,
//! `Rbar_r = R_r - 4 e_r e_r^T`, the unit vector
//! `e_r = sqrt((d+1)/(2d)) sum_s K_rs^2 |s>` and the projector
//! `Q_r = ((d+1)/d) T_r - 2 e_r e_r^T`.

mod converse;
mod qqt;

pub use converse::{
    gell_mann_basis, metric_check, sic_from_qqt_basis, structure_constants, MetricCheckResult,
    QqtOutcome, QqtRecovery, StructureConstants,
};
pub use qqt::{is_qqt, qqt_canonical_form, QqtCanonicalForm, QQT_TOL};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{
    hermitian_defect, hermitian_eigen, identity, max_abs, max_abs_diff, max_real_part, nan_max,
    numerical_rank, random_hermitian, to_complex, trace,
};
use crate::report::VerificationReport;
use crate::sicpovm::SicSet;
use crate::tensors::{k_value, TripleTensors};
use crate::{CMatrix, RVector, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct AdjointBundle {
    pub d: usize,
    pub t: Vec<CMatrix>,
    pub j: Vec<CMatrix>,
    pub r: Vec<CMatrix>,
    pub rbar: Vec<CMatrix>,
    pub q: Vec<CMatrix>,
    pub e: Vec<RVector>,
    pub v0: RVector,
}

impl AdjointBundle {
    pub fn n(&self) -> usize {
        self.d * self.d
    }

    /// `e_r e_r^T` as a complex matrix.
    pub fn e_proj(&self, r: usize) -> CMatrix {
        to_complex(&(&self.e[r] * self.e[r].transpose()))
    }

    /// `I - v0 v0^T`
    pub fn v0_complement(&self) -> CMatrix {
        identity(self.n()) - to_complex(&(&self.v0 * self.v0.transpose()))
    }
}

pub fn adjoint_bundle(trip: &TripleTensors) -> AdjointBundle {
    let d = trip.d;
    let n = d * d;
    let df = d as f64;
    let mut bundle = AdjointBundle {
        d,
        t: Vec::with_capacity(n),
        j: Vec::with_capacity(n),
        r: Vec::with_capacity(n),
        rbar: Vec::with_capacity(n),
        q: Vec::with_capacity(n),
        e: Vec::with_capacity(n),
        v0: RVector::from_element(n, 1.0 / df),
    };
    let norm = ((df + 1.0) / (2.0 * df)).sqrt();
    for r in 0..n {
        let t = CMatrix::from_fn(n, n, |s, u| trip.t.get(r, s, u));
        let j = CMatrix::from_fn(n, n, |s, u| trip.j.get(r, s, u));
        let rr = CMatrix::from_fn(n, n, |s, u| C64::new(trip.r.get(r, s, u), 0.0));
        let e = RVector::from_fn(n, |s, _| norm * k_value(d, r == s).powi(2));
        let ee = to_complex(&(&e * e.transpose()));
        let q = &t * C64::new((df + 1.0) / df, 0.0) - &ee * C64::new(2.0, 0.0);
        bundle.rbar.push(&rr - &ee * C64::new(4.0, 0.0));
        bundle.t.push(t);
        bundle.j.push(j);
        bundle.r.push(rr);
        bundle.q.push(q);
        bundle.e.push(e);
    }
    bundle
}

/// Per-`r` spectral structure of `T_r`, `Q_r`, `J_r`, `R_r`.
pub fn check_spectral(b: &AdjointBundle, tol: f64) -> VerificationReport {
    let d = b.d;
    let df = d as f64;
    let n = b.n();
    let mut rep = VerificationReport::new();
    let expected: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                2.0 * df / (df + 1.0)
            } else if k < d {
                df / (df + 1.0)
            } else {
                0.0
            }
        })
        .collect();
    for r in 0..n {
        let (t, q, j) = (&b.t[r], &b.q[r], &b.j[r]);
        let qt = q.transpose();
        let ee = b.e_proj(r);
        let ec = crate::linalg::vec_to_complex(&b.e[r]);
        rep.record("adjoint.e_norm", (b.e[r].norm() - 1.0).abs(), tol);
        rep.record("adjoint.t_trace", (trace(t) - df).norm(), tol);
        rep.record("adjoint.q_trace", (trace(q) - (df - 1.0)).norm(), tol);
        rep.record("adjoint.q_hermitian", hermitian_defect(q), tol);
        rep.record("adjoint.q_idempotent", max_abs_diff(&(q * q), q), tol);
        rep.record("adjoint.q_qt_orthogonal", (q * &qt).norm(), tol);
        rep.record(
            "adjoint.q_rank",
            (numerical_rank(q) as f64 - (df - 1.0)).abs(),
            0.0,
        );
        rep.record("adjoint.j_decomposition", max_abs_diff(j, &(q - &qt)), tol);
        rep.record(
            "adjoint.j_imaginary_hermitian",
            max_real_part(j).max(hermitian_defect(j)),
            tol,
        );
        rep.record(
            "adjoint.r_decomposition",
            max_abs_diff(&b.r[r], &(q + &qt + &ee * C64::new(4.0, 0.0))),
            tol,
        );
        rep.record(
            "adjoint.rbar_is_j_squared",
            max_abs_diff(&b.rbar[r], &(j * j)),
            tol,
        );
        let (vals, _) = hermitian_eigen(t);
        let spec = vals
            .iter()
            .zip(&expected)
            .fold(0.0f64, |m, (a, e)| nan_max(m, (a - e).abs()));
        rep.record("adjoint.t_spectrum", spec, tol);
        rep.record(
            "adjoint.t_square_relation",
            max_abs_diff(
                &(t * t),
                &(t * C64::new(df / (df + 1.0), 0.0)
                    + &ee * C64::new(2.0 * df * df / ((df + 1.0) * (df + 1.0)), 0.0)),
            ),
            tol,
        );
        rep.record(
            "adjoint.e_eigenvector",
            (t * &ec - &ec * C64::new(2.0 * df / (df + 1.0), 0.0)).norm(),
            tol,
        );
        rep.record(
            "adjoint.t_from_q",
            max_abs_diff(
                t,
                &(q * C64::new(df / (df + 1.0), 0.0) + &ee * C64::new(2.0 * df / (df + 1.0), 0.0)),
            ),
            tol,
        );
        rep.record(
            "adjoint.q_from_j",
            max_abs_diff(q, &((j + j * j) * C64::new(0.5, 0.0))),
            tol,
        );
    }
    rep
}

fn tr_prod(a: &CMatrix, b: &CMatrix) -> C64 {
    // Tr(AB) without forming AB
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Hilbert-Schmidt inner products among `Q_r`, `Q_s^T`, `J_r`, `Rbar_r`.
pub fn hs_identities(b: &AdjointBundle, tol: f64) -> VerificationReport {
    let df = b.d as f64;
    let n = b.n();
    let dp = df + 1.0;
    let qt: Vec<CMatrix> = b.q.iter().map(|q| q.transpose()).collect();
    let (mut qq, mut qqt, mut jj, mut rr, mut jr) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for r in 0..n {
        for s in 0..n {
            let del = if r == s { 1.0 } else { 0.0 };
            let want_qq = (df.powi(3) * del + df * df - df - 1.0) / (dp * dp);
            let want_qqt = df * df * (1.0 - del) / (dp * dp);
            let want_jj = 2.0 * (df * df * del - 1.0) / dp;
            let want_rr = 2.0 * (df - 1.0) * (df * df * del + 2.0 * df + 1.0) / (dp * dp);
            qq = nan_max(qq, (tr_prod(&b.q[r], &b.q[s]) - want_qq).norm());
            qqt = nan_max(qqt, (tr_prod(&b.q[r], &qt[s]) - want_qqt).norm());
            jj = nan_max(jj, (tr_prod(&b.j[r], &b.j[s]) - want_jj).norm());
            rr = nan_max(rr, (tr_prod(&b.rbar[r], &b.rbar[s]) - want_rr).norm());
            jr = nan_max(jr, tr_prod(&b.j[r], &b.rbar[s]).norm());
        }
    }
    let mut rep = VerificationReport::new();
    rep.record("adjoint.hs_q_q", qq, tol);
    rep.record("adjoint.hs_q_qt", qqt, tol);
    rep.record("adjoint.hs_j_j", jj, tol);
    rep.record("adjoint.hs_rbar_rbar", rr, tol);
    rep.record("adjoint.hs_j_rbar", jr, tol);
    rep
}

/// Annihilation of `v0` and the sums over `r` of `Q_r`, `Q_r^T`, `J_r`, `Rbar_r`.
pub fn sum_identities(b: &AdjointBundle, tol: f64) -> VerificationReport {
    let df = b.d as f64;
    let n = b.n();
    let v0 = crate::linalg::vec_to_complex(&b.v0);
    let comp = b.v0_complement();
    let mut sq = CMatrix::zeros(n, n);
    let mut sj = CMatrix::zeros(n, n);
    let mut sr = CMatrix::zeros(n, n);
    let (mut qv, mut jv, mut rv) = (0.0f64, 0.0f64, 0.0f64);
    for r in 0..n {
        sq += &b.q[r];
        sj += &b.j[r];
        sr += &b.rbar[r];
        qv = nan_max(qv, (&b.q[r] * &v0).norm());
        jv = nan_max(jv, (&b.j[r] * &v0).norm());
        rv = nan_max(rv, (&b.rbar[r] * &v0).norm());
    }
    let want_q = &comp * C64::new(df * df / (df + 1.0), 0.0);
    let want_r = &comp * C64::new(2.0 * df * df / (df + 1.0), 0.0);
    let mut rep = VerificationReport::new();
    rep.record("adjoint.q_annihilates_v0", qv, tol);
    rep.record("adjoint.j_annihilates_v0", jv, tol);
    rep.record("adjoint.rbar_annihilates_v0", rv, tol);
    rep.record("adjoint.sum_q", max_abs_diff(&sq, &want_q), tol);
    rep.record(
        "adjoint.sum_qt",
        max_abs_diff(&sq.transpose(), &want_q),
        tol,
    );
    rep.record("adjoint.sum_j", sj.norm(), tol);
    rep.record("adjoint.sum_rbar", max_abs_diff(&sr, &want_r), tol);
    rep
}

/// `B_r = sqrt((d+1)/(2(d^2-1))) (Pi_r - I/d)`, a regular simplex in
/// `sl(d)` under `<A,B> = 2d Tr(AB)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialBasis {
    pub d: usize,
    pub b: Vec<CMatrix>,
}

impl SimplicialBasis {
    /// `<A,B> = 2d Tr(AB)`, the Killing form restricted to trace-zero matrices.
    pub fn inner(&self, a: &CMatrix, b: &CMatrix) -> C64 {
        tr_prod(a, b) * (2.0 * self.d as f64)
    }

    /// `a_r = ((d^2-1)/d^2) <A, B_r>` for trace-zero `A`.
    pub fn coefficients(&self, a: &CMatrix) -> Vec<C64> {
        let d2 = (self.d * self.d) as f64;
        self.b
            .iter()
            .map(|br| self.inner(a, br) * ((d2 - 1.0) / d2))
            .collect()
    }

    pub fn reassemble(&self, coeffs: &[C64]) -> CMatrix {
        let mut m = CMatrix::zeros(self.d, self.d);
        for (a, br) in coeffs.iter().zip(&self.b) {
            m += br * *a;
        }
        m
    }
}

pub fn simplicial_basis(set: &SicSet) -> SimplicialBasis {
    let d = set.d();
    let df = d as f64;
    let c = ((df + 1.0) / (2.0 * (df * df - 1.0))).sqrt();
    let shift = identity(d) / C64::new(df, 0.0);
    let b = set
        .projectors()
        .into_iter()
        .map(|p| (p - &shift) * C64::new(c, 0.0))
        .collect();
    SimplicialBasis { d, b }
}

/// Trace, inner products, vanishing sum and coefficient round trip on a
/// seeded random trace-zero Hermitian matrix.
pub fn check_simplicial(set: &SicSet, tol: f64, seed: u64) -> VerificationReport {
    let basis = simplicial_basis(set);
    let d = set.d();
    let df = d as f64;
    let n = set.n();
    let mut rep = VerificationReport::new();
    let mut tr0: f64 = 0.0;
    let mut ip: f64 = 0.0;
    let mut sum = CMatrix::zeros(d, d);
    for r in 0..n {
        tr0 = nan_max(tr0, trace(&basis.b[r]).norm());
        sum += &basis.b[r];
        for s in 0..n {
            let want = if r == s { 1.0 } else { -1.0 / (df * df - 1.0) };
            ip = nan_max(ip, (basis.inner(&basis.b[r], &basis.b[s]) - want).norm());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = random_hermitian(d, &mut rng);
    let shift = trace(&a) / df;
    for i in 0..d {
        a[(i, i)] -= shift;
    }
    let coeffs = basis.coefficients(&a);
    let total: C64 = coeffs.iter().sum();
    let back = basis.reassemble(&coeffs);
    rep.record("adjoint.simplicial_trace_zero", tr0, tol);
    rep.record("adjoint.simplicial_inner_products", ip, tol);
    rep.record("adjoint.simplicial_sum", max_abs(&sum), tol);
    rep.record(
        "adjoint.simplicial_expansion",
        max_abs_diff(&back, &a).max(total.norm()),
        tol,
    );
    rep
}
