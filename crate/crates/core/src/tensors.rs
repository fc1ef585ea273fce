//! Gram data, angle tensors, triple products and the identities they obey.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, nan_max, outer};
use crate::report::VerificationReport;
use crate::sicpovm::SicSet;
use crate::{CMatrix, RMatrix, C64};

/// Dense rank-3 array over an `n`-element index set, row-major in `(r,s,t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Copy + Default> Tensor3<T> {
    pub fn zeros(n: usize) -> Self {
        Tensor3 {
            n,
            data: vec![T::default(); n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for r in 0..n {
            for s in 0..n {
                for t in 0..n {
                    data.push(f(r, s, t));
                }
            }
        }
        Tensor3 { n, data }
    }

    pub fn from_vec(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n * n {
            return Err(Error::InvalidTensor(format!(
                "{} entries for index size {n}",
                data.len()
            )));
        }
        Ok(Tensor3 { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, s: usize, t: usize) -> T {
        self.data[(r * self.n + s) * self.n + t]
    }

    #[inline]
    pub fn set(&mut self, r: usize, s: usize, t: usize, v: T) {
        self.data[(r * self.n + s) * self.n + t] = v;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Copy + Default>(&self, f: impl Fn(T) -> U) -> Tensor3<U> {
        Tensor3 {
            n: self.n,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

/// `d` such that `n = d^2`, if any.
pub fn dim_from_index_size(n: usize) -> Result<usize> {
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n || d < 2 {
        return Err(Error::InvalidTensor(format!(
            "index size {n} is not d^2 with d >= 2"
        )));
    }
    Ok(d)
}

/// Wrap to `(-pi, pi]`; values within 1e-12 of `-pi` map to `pi`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    if (y + PI).abs() < 1e-12 || (y - PI).abs() < 1e-12 {
        PI
    } else {
        y
    }
}

/// `|e^{ia} - e^{ib}|`, the distance used for every angle comparison.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    (C64::from_polar(1.0, a) - C64::from_polar(1.0, b)).norm()
}

/// `K_rs = sqrt((d delta_rs + 1)/(d+1))`
pub fn k_value(d: usize, same: bool) -> f64 {
    let d = d as f64;
    if same {
        1.0
    } else {
        (1.0 / (d + 1.0)).sqrt()
    }
}

pub fn k_matrix(d: usize) -> RMatrix {
    let n = d * d;
    RMatrix::from_fn(n, n, |r, s| k_value(d, r == s))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramData {
    pub d: usize,
    pub g: CMatrix,
    pub k: RMatrix,
    pub theta2: RMatrix,
}

/// Allowed deviation of `|G_rs|` from `K_rs` in [`gram`].
pub const GRAM_TOL: f64 = 1e-8;

/// Raw Gram matrix `G_rs = <psi_r|psi_s>`.
pub fn gram_matrix(set: &SicSet) -> CMatrix {
    let v = set.vectors();
    CMatrix::from_fn(v.len(), v.len(), |r, s| v[r].dotc(&v[s]))
}

pub fn gram(set: &SicSet) -> Result<GramData> {
    let d = set.d();
    let g = gram_matrix(set);
    let k = k_matrix(d);
    let n = set.n();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for s in 0..n {
            worst = nan_max(worst, (g[(r, s)].norm() - k[(r, s)]).abs());
        }
    }
    if !(worst <= GRAM_TOL) {
        return Err(Error::NotASic(format!(
            "|G_rs| deviates from K_rs by {worst:e}"
        )));
    }
    let theta2 = RMatrix::from_fn(n, n, |r, s| {
        if r == s {
            0.0
        } else {
            wrap_angle(g[(r, s)].arg())
        }
    });
    Ok(GramData { d, g, k, theta2 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripleTensors {
    pub d: usize,
    pub t: Tensor3<C64>,
    pub j: Tensor3<C64>,
    pub r: Tensor3<f64>,
    pub theta3: Tensor3<f64>,
}

impl TripleTensors {
    pub fn n(&self) -> usize {
        self.d * self.d
    }
}

/// `T_rst = G_rs G_st G_tr`, `J = ((d+1)/d)(T - T*)`, `R = ((d+1)/d)(T + T*)`,
/// `theta3 = wrap(theta_rs + theta_st + theta_tr)`.
pub fn triple_products(set: &SicSet) -> TripleTensors {
    let d = set.d();
    let g = gram_matrix(set);
    let th = RMatrix::from_fn(g.nrows(), g.ncols(), |r, s| {
        if r == s {
            0.0
        } else {
            g[(r, s)].arg()
        }
    });
    from_gram_parts(d, &g, &th)
}

fn from_gram_parts(d: usize, g: &CMatrix, th: &RMatrix) -> TripleTensors {
    let n = d * d;
    let f = (d as f64 + 1.0) / d as f64;
    let t = Tensor3::from_fn(n, |r, s, u| g[(r, s)] * g[(s, u)] * g[(u, r)]);
    let j = t.map(|z| C64::new(0.0, 2.0 * f * z.im));
    let rr = t.map(|z| 2.0 * f * z.re);
    let theta3 = Tensor3::from_fn(n, |r, s, u| {
        wrap_angle(th[(r, s)] + th[(s, u)] + th[(u, r)])
    });
    TripleTensors {
        d,
        t,
        j,
        r: rr,
        theta3,
    }
}

/// Triple tensors of a SIC family rebuilt from its order-3 angle tensor,
/// `T_rst = K_rs K_st K_tr e^{i theta_rst}`.
pub fn triple_from_theta3(theta3: &Tensor3<f64>) -> Result<TripleTensors> {
    let n = theta3.n();
    let d = dim_from_index_size(n)?;
    let f = (d as f64 + 1.0) / d as f64;
    let t = Tensor3::from_fn(n, |r, s, u| {
        let kkk = k_value(d, r == s) * k_value(d, s == u) * k_value(d, u == r);
        C64::from_polar(kkk, theta3.get(r, s, u))
    });
    let j = t.map(|z| C64::new(0.0, 2.0 * f * z.im));
    let rr = t.map(|z| 2.0 * f * z.re);
    Ok(TripleTensors {
        d,
        t,
        j,
        r: rr,
        theta3: theta3.clone(),
    })
}

/// `a_r = ((d+1)/d) Tr(Pi_r A) - Tr(A)/d`
pub fn expand(a: &CMatrix, set: &SicSet) -> Vec<C64> {
    let d = set.d() as f64;
    let tr: C64 = a.diagonal().iter().sum();
    set.vectors()
        .iter()
        .map(|v| v.dotc(&(a * v)) * ((d + 1.0) / d) - tr / d)
        .collect()
}

/// `sum_r a_r Pi_r`
pub fn reassemble(coeffs: &[C64], set: &SicSet) -> CMatrix {
    let d = set.d();
    let mut m = CMatrix::zeros(d, d);
    for (a, v) in coeffs.iter().zip(set.vectors()) {
        m += outer(v, v) * *a;
    }
    m
}

/// How index-space identity loops are evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampling {
    pub seed: u64,
    /// Loops run over every index tuple when `d` is at most this.
    pub exhaustive_up_to: usize,
    /// Tuple count otherwise.
    pub samples: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            seed: 0,
            exhaustive_up_to: 4,
            samples: 100_000,
        }
    }
}

impl Sampling {
    pub fn with_seed(seed: u64) -> Self {
        Sampling {
            seed,
            ..Self::default()
        }
    }

    /// Call `f` on every 4-tuple in `0..n` (exhaustive) or on seeded samples.
    pub fn for_each_quad(&self, d: usize, mut f: impl FnMut(usize, usize, usize, usize)) {
        let n = d * d;
        if d <= self.exhaustive_up_to {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for e in 0..n {
                            f(a, b, c, e);
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            for _ in 0..self.samples {
                f(
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                );
            }
        }
    }

    /// Call `f` on every ordered pair `r != s` (exhaustive) or on
    /// `pair_samples` seeded random pairs.
    pub fn for_each_pair(&self, d: usize, pair_samples: usize, mut f: impl FnMut(usize, usize)) {
        let n = d * d;
        if d <= self.exhaustive_up_to {
            for r in 0..n {
                for s in 0..n {
                    if r != s {
                        f(r, s);
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x9e37_79b9_7f4a_7c15);
            let mut done = 0;
            while done < pair_samples {
                let r = rng.random_range(0..n);
                let s = rng.random_range(0..n);
                if r != s {
                    f(r, s);
                    done += 1;
                }
            }
        }
    }
}

/// Largest violation of
/// `sum_r G_{s1 r} G_{s2 r} G_{r t1} G_{r t2} = (d/(d+1))(G_{s1 t1} G_{s2 t2} + G_{s1 t2} G_{s2 t1})`.
pub fn two_design_residual(set: &SicSet, sampling: &Sampling) -> f64 {
    let d = set.d();
    let g = gram_matrix(set);
    let n = set.n();
    let c = d as f64 / (d as f64 + 1.0);
    let mut worst: f64 = 0.0;
    sampling.for_each_quad(d, |s1, s2, t1, t2| {
        let mut lhs = C64::new(0.0, 0.0);
        for r in 0..n {
            lhs += g[(s1, r)] * g[(s2, r)] * g[(r, t1)] * g[(r, t2)];
        }
        let rhs = (g[(s1, t1)] * g[(s2, t2)] + g[(s1, t2)] * g[(s2, t1)]) * c;
        let e = (lhs - rhs).norm();
        worst = if e.is_nan() { f64::NAN } else { worst.max(e) };
    });
    worst
}

pub fn check_two_design(set: &SicSet, tol: f64, sampling: &Sampling) -> VerificationReport {
    let mut rep = VerificationReport::new();
    rep.record(
        "tensors.two_design",
        two_design_residual(set, sampling),
        tol,
    );
    rep
}

/// Largest `|sum_b (J_rsb J_tba + J_stb J_rba + J_trb J_sba)|`.
pub fn jacobi_residual(j: &Tensor3<C64>, sampling: &Sampling) -> f64 {
    let n = j.n();
    let d = dim_from_index_size(n).unwrap_or(usize::MAX);
    let mut worst: f64 = 0.0;
    sampling.for_each_quad(d, |r, s, t, a| {
        let mut acc = C64::new(0.0, 0.0);
        for b in 0..n {
            acc += j.get(r, s, b) * j.get(t, b, a)
                + j.get(s, t, b) * j.get(r, b, a)
                + j.get(t, r, b) * j.get(s, b, a);
        }
        worst = nan_max(worst, acc.norm());
    });
    worst
}

pub fn jacobi_check(trip: &TripleTensors, tol: f64, sampling: &Sampling) -> VerificationReport {
    let mut rep = VerificationReport::new();
    rep.record("tensors.jacobi", jacobi_residual(&trip.j, sampling), tol);
    rep
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureStateVerdict {
    pub pure: bool,
    /// `sum p_r^2 - 2/(d(d+1))`
    pub quadratic_residual: f64,
    /// `sum R_rst p_r p_s p_t - 2(d+7)/(d(d+1)^2)`
    pub cubic_residual: f64,
}

/// Probabilities `p_r = Tr(Pi_r rho)/d`.
pub fn probabilities(rho: &CMatrix, set: &SicSet) -> Vec<f64> {
    let d = set.d() as f64;
    set.vectors()
        .iter()
        .map(|v| v.dotc(&(rho * v)).re / d)
        .collect()
}

pub fn pure_state_check(p: &[f64], trip: &TripleTensors, tol: f64) -> PureStateVerdict {
    let d = trip.d as f64;
    let n = trip.n();
    let quad: f64 = p.iter().map(|x| x * x).sum();
    let mut cubic = 0.0;
    for r in 0..n {
        for s in 0..n {
            let prs = p[r] * p[s];
            for t in 0..n {
                cubic += trip.r.get(r, s, t) * prs * p[t];
            }
        }
    }
    let qr = quad - 2.0 / (d * (d + 1.0));
    let cr = cubic - 2.0 * (d + 7.0) / (d * (d + 1.0) * (d + 1.0));
    PureStateVerdict {
        pure: qr.abs() <= tol && cr.abs() <= tol,
        quadratic_residual: qr,
        cubic_residual: cr,
    }
}

/// Entrywise residuals of `[Pi_r,Pi_s] = sum_t J_rst Pi_t` and
/// `{Pi_r,Pi_s} = sum_t R_rst Pi_t - 2(d delta_rs + 1)/(d+1) I` over all `r,s`.
pub fn commutator_expansion_check(
    set: &SicSet,
    trip: &TripleTensors,
    tol: f64,
) -> VerificationReport {
    let d = set.d();
    let n = set.n();
    let pis = set.projectors();
    let mut comm: f64 = 0.0;
    let mut anti: f64 = 0.0;
    for r in 0..n {
        for s in 0..n {
            let ab = &pis[r] * &pis[s];
            let ba = &pis[s] * &pis[r];
            let mut sum_j = CMatrix::zeros(d, d);
            let mut sum_r = CMatrix::zeros(d, d);
            for t in 0..n {
                sum_j += &pis[t] * trip.j.get(r, s, t);
                sum_r += &pis[t] * C64::new(trip.r.get(r, s, t), 0.0);
            }
            let shift = 2.0 * (if r == s { d as f64 + 1.0 } else { 1.0 }) / (d as f64 + 1.0);
            for i in 0..d {
                sum_r[(i, i)] -= C64::new(shift, 0.0);
            }
            comm = nan_max(comm, max_abs(&(&ab - &ba - sum_j)));
            anti = nan_max(anti, max_abs(&(&ab + &ba - sum_r)));
        }
    }
    let mut rep = VerificationReport::new();
    rep.record("tensors.commutator_expansion", comm, tol);
    rep.record("tensors.anticommutator_expansion", anti, tol);
    rep
}

/// Relative errors of `sum T_rst = d^4`, `sum_t T_rst = d K_rs^2` and
/// `sum_{s,u} Tr(T_s T_u) = 2 d^5/(d+1)`.
pub fn triple_sum_checks(trip: &TripleTensors, tol: f64) -> VerificationReport {
    let d = trip.d;
    let df = d as f64;
    let n = trip.n();
    let t = &trip.t;
    let total: C64 = t.as_slice().iter().sum();
    let d4 = df.powi(4);
    let mut row_err: f64 = 0.0;
    for r in 0..n {
        for s in 0..n {
            let sum: C64 = (0..n).map(|u| t.get(r, s, u)).sum();
            let want = df * k_value(d, r == s).powi(2);
            row_err = nan_max(row_err, (sum - want).norm() / want);
        }
    }
    let mut tr_sum = C64::new(0.0, 0.0);
    for s in 0..n {
        for u in 0..n {
            for a in 0..n {
                for b in 0..n {
                    tr_sum += t.get(s, a, b) * t.get(u, b, a);
                }
            }
        }
    }
    let want_tr = 2.0 * df.powi(5) / (df + 1.0);
    let mut rep = VerificationReport::new();
    rep.record("tensors.sum_all", (total - d4).norm() / d4, tol);
    rep.record("tensors.sum_last_index", row_err, tol);
    rep.record(
        "tensors.trace_product_sum",
        (tr_sum - want_tr).norm() / want_tr,
        tol,
    );
    rep
}

/// `J_rst = 2i((d+1)/d) K K K sin(theta_rst)` and
/// `R_rst = 2((d+1)/d) K K K cos(theta_rst)`, plus the index symmetries.
pub fn angle_formula_check(trip: &TripleTensors, tol: f64) -> VerificationReport {
    let d = trip.d;
    let n = trip.n();
    let f = 2.0 * (d as f64 + 1.0) / d as f64;
    let mut je: f64 = 0.0;
    let mut re: f64 = 0.0;
    let mut sym: f64 = 0.0;
    for r in 0..n {
        for s in 0..n {
            for u in 0..n {
                let kkk = k_value(d, r == s) * k_value(d, s == u) * k_value(d, u == r);
                let th = trip.theta3.get(r, s, u);
                je = nan_max(
                    je,
                    (trip.j.get(r, s, u) - C64::new(0.0, f * kkk * th.sin())).norm(),
                );
                re = nan_max(re, (trip.r.get(r, s, u) - f * kkk * th.cos()).abs());
                let t0 = trip.t.get(r, s, u);
                sym = sym
                    .max((t0 - trip.t.get(u, r, s)).norm())
                    .max((t0 - trip.t.get(s, u, r)).norm())
                    .max((t0 - trip.t.get(r, u, s).conj()).norm())
                    .max((trip.j.get(r, s, u) + trip.j.get(s, r, u)).norm())
                    .max(trip.j.get(r, s, u).re.abs())
                    .max((trip.r.get(r, s, u) - trip.r.get(s, r, u)).abs())
                    .max(angle_distance(th, -trip.theta3.get(s, r, u)));
            }
        }
    }
    let mut rep = VerificationReport::new();
    rep.record("tensors.j_from_angles", je, tol);
    rep.record("tensors.r_from_angles", re, tol);
    rep.record("tensors.index_symmetry", sym, tol);
    rep
}

pub const THETA3_MAGIC: [u8; 8] = *b"SICTH3\0\x01";

/// Largest `d` accepted by [`decode_theta3`].
pub const THETA3_MAX_DIM: usize = 16;

/// Binary dump: 8-byte magic, `d` as u32 LE, then `d^6` f64 LE in row-major
/// `(r,s,t)` order.
pub fn encode_theta3(theta3: &Tensor3<f64>) -> Vec<u8> {
    let n = theta3.n();
    let d = (n as f64).sqrt().round() as u32;
    let mut out = Vec::with_capacity(12 + 8 * n * n * n);
    out.extend_from_slice(&THETA3_MAGIC);
    out.extend_from_slice(&d.to_le_bytes());
    for x in theta3.as_slice() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

pub fn decode_theta3(bytes: &[u8]) -> Result<Tensor3<f64>> {
    let bad = |m: String| Error::InvalidFile(m);
    if bytes.len() < 12 {
        return Err(bad("theta3 dump shorter than its header".into()));
    }
    if bytes[..8] != THETA3_MAGIC {
        return Err(bad("bad theta3 magic".into()));
    }
    let d = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes")) as usize;
    if !(2..=THETA3_MAX_DIM).contains(&d) {
        return Err(bad(format!("theta3 dimension {d} out of range")));
    }
    let n = d * d;
    let count = n * n * n;
    let payload = &bytes[12..];
    if payload.len() != 8 * count {
        return Err(bad(format!(
            "theta3 payload has {} bytes, expected {}",
            payload.len(),
            8 * count
        )));
    }
    let mut data = Vec::with_capacity(count);
    for chunk in payload.chunks_exact(8) {
        let x = f64::from_le_bytes(chunk.try_into().expect("8 bytes"));
        if !x.is_finite() {
            return Err(bad("non-finite angle in theta3 payload".into()));
        }
        data.push(x);
    }
    Tensor3::from_vec(n, data)
}
