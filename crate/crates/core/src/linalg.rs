//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{CMatrix, CVector, RMatrix, C64};

/// Relative singular-value threshold used for every rank decision.
pub const RANK_RTOL: f64 = 1e-8;

/// Eigenvalues above this count as 1 when splitting a near-projector.
pub const UNIT_EIGEN_THRESHOLD: f64 = 0.5;

/// Components below this magnitude are ignored when fixing phases.
pub const PHASE_EPS: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

pub fn vec_to_complex(v: &DVector<f64>) -> CVector {
    v.map(|x| C64::new(x, 0.0))
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Like `f64::max` but a NaN on either side wins.
pub fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| nan_max(acc, z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| nan_max(acc, (x - y).norm()))
}

pub fn max_abs_real(m: &RMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| nan_max(acc, x.abs()))
}

/// Largest |Re| over the entries.
pub fn max_real_part(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| nan_max(acc, z.re.abs()))
}

/// Largest |Im| over the entries.
pub fn max_imag_part(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| nan_max(acc, z.im.abs()))
}

/// `u v†`
pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in descending
/// order. Eigenvectors are the matching columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Count of singular values above `RANK_RTOL` times the largest.
pub fn numerical_rank(m: &CMatrix) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 1e-300 => s.iter().filter(|&&x| x > RANK_RTOL * top).count(),
        _ => 0,
    }
}

pub fn numerical_rank_real(m: &RMatrix) -> usize {
    numerical_rank(&to_complex(m))
}

/// Rotate `v` so that its first component of magnitude above `PHASE_EPS`
/// is real and positive.
pub fn fix_first_phase(v: &mut CVector) {
    if let Some(z) = v.iter().find(|z| z.norm() > PHASE_EPS).copied() {
        let ph = z.conj() / z.norm();
        *v *= ph;
    }
}

/// Orthonormal basis (as columns) of the eigenvalue-1 eigenspace of a
/// Hermitian near-projector, in a reproducible gauge: eigenvalues above
/// `UNIT_EIGEN_THRESHOLD` pick the subspace, the basis comes from
/// Gram-Schmidt on the projected standard-basis vectors in index order, and
/// each basis vector has its first non-negligible component real positive.
pub fn unit_eigenspace_frame(p: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(p);
    let k = vals.iter().filter(|&&l| l > UNIT_EIGEN_THRESHOLD).count();
    let v = vecs.columns(0, k).into_owned();
    let proj = &v * v.adjoint();
    canonical_frame(&proj, k)
}

/// Deterministic orthonormal frame for the range of the exact projector
/// `proj` of known rank `k`.
pub fn canonical_frame(proj: &CMatrix, k: usize) -> CMatrix {
    let n = proj.nrows();
    let mut cols: Vec<CVector> = Vec::with_capacity(k);
    for j in 0..n {
        if cols.len() == k {
            break;
        }
        let mut w: CVector = proj.column(j).into_owned();
        // two passes keep orthogonality at rounding level
        for _ in 0..2 {
            for q in &cols {
                let a = q.dotc(&w);
                w -= q * a;
            }
        }
        let nw = w.norm();
        if nw > 1e-4 {
            w /= C64::new(nw, 0.0);
            fix_first_phase(&mut w);
            cols.push(w);
        }
    }
    let mut frame = CMatrix::zeros(n, cols.len());
    for (j, q) in cols.iter().enumerate() {
        frame.set_column(j, q);
    }
    frame
}

/// Orthonormal real frame for the span of real vectors, by Gram-Schmidt in
/// order; vectors that add nothing are dropped.
pub fn real_span_frame(vs: &[DVector<f64>], n: usize) -> RMatrix {
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &cols {
                let a = q.dot(&w);
                w -= q * a;
            }
        }
        let nw = w.norm();
        if nw > 1e-8 {
            cols.push(w / nw);
        }
    }
    let mut m = RMatrix::zeros(n, cols.len());
    for (j, q) in cols.iter().enumerate() {
        m.set_column(j, q);
    }
    m
}

pub fn random_complex_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    CVector::from_fn(n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    let v = random_complex_vector(n, rng);
    let nv = v.norm();
    v / C64::new(nv, 0.0)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let z = r[(j, j)];
        let ph = if z.norm() > 0.0 {
            z / z.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= ph;
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&g + g.adjoint()).scale(0.5)
}

pub fn identity(n: usize) -> CMatrix {
    DMatrix::identity(n, n)
}
