//! Deciding whether angle tensors come from a SIC family, and rebuilding the
//! vectors from them.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_defect, identity, max_abs_diff, nan_max, trace, unit_eigenspace_frame,
};
use crate::sicpovm::SicSet;
use crate::tensors::{angle_distance, dim_from_index_size, k_value, triple_products, Tensor3};
use crate::{CMatrix, CVector, RMatrix, C64};

/// Antisymmetry tolerance for angle-tensor inputs.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

/// `P_rs = G_rs/d`, a rank-`d` projector exactly when the `G_rs` are the
/// Gram entries of a POVM-generating vector set.
#[derive(Debug, Clone, PartialEq)]
pub struct GramProjector {
    pub d: usize,
    pub p: CMatrix,
}

impl GramProjector {
    pub fn from_set(set: &SicSet) -> Self {
        let g = crate::tensors::gram_matrix(set);
        GramProjector {
            d: set.d(),
            p: g / C64::new(set.d() as f64, 0.0),
        }
    }
}

fn check_antisymmetric2(theta2: &RMatrix) -> Result<usize> {
    if theta2.nrows() != theta2.ncols() {
        return Err(Error::InvalidTensor("theta2 is not square".into()));
    }
    let d = dim_from_index_size(theta2.nrows())?;
    let n = d * d;
    for r in 0..n {
        for s in 0..n {
            if angle_distance(theta2[(r, s)], -theta2[(s, r)]) > ANTISYMMETRY_TOL {
                return Err(Error::InvalidTensor(format!(
                    "theta2 not antisymmetric at ({r},{s})"
                )));
            }
        }
        if angle_distance(theta2[(r, r)], 0.0) > ANTISYMMETRY_TOL {
            return Err(Error::InvalidTensor(format!(
                "theta2 diagonal entry {r} is not 0"
            )));
        }
    }
    Ok(d)
}

fn gram_from_angle2(d: usize, theta2: &RMatrix) -> CMatrix {
    let n = d * d;
    CMatrix::from_fn(n, n, |r, s| {
        C64::from_polar(k_value(d, r == s), theta2[(r, s)])
    })
}

/// `P_rs = (1/d) K_rs e^{i theta_rs}`
pub fn gram_projector_from_angle2(theta2: &RMatrix) -> Result<GramProjector> {
    let d = check_antisymmetric2(theta2)?;
    Ok(GramProjector {
        d,
        p: gram_from_angle2(d, theta2) / C64::new(d as f64, 0.0),
    })
}

/// `Tr P, Tr P^2, Tr P^3, Tr P^4`
pub fn trace_powers(p: &CMatrix) -> [C64; 4] {
    let p2 = p * p;
    let p3 = &p2 * p;
    [trace(p), trace(&p2), trace(&p3), trace(&(&p2 * &p2))]
}

/// True iff all four trace powers lie within `tol` of `d`.
pub fn check_rank_d_projector(gp: &GramProjector, tol: f64) -> bool {
    let d = gp.d as f64;
    hermitian_defect(&gp.p) <= tol
        && trace_powers(&gp.p)
            .iter()
            .all(|t| (t - C64::new(d, 0.0)).norm() <= tol)
}

/// Vectors `|xi_r> = sum_a conj(xi_{a r}) |a>` from the canonical orthonormal
/// basis `xi_a` of the unit eigenspace of `P`, so that `<xi_r|xi_s> = P_rs`.
pub fn povm_from_gram_projector(gp: &GramProjector, tol: f64) -> Result<Vec<CVector>> {
    if !check_rank_d_projector(gp, tol) {
        return Err(Error::NotReconstructible(
            "input is not a Hermitian rank-d projector".into(),
        ));
    }
    let frame = unit_eigenspace_frame(&gp.p);
    if frame.ncols() != gp.d {
        return Err(Error::NotReconstructible(format!(
            "unit eigenspace has dimension {} instead of {}",
            frame.ncols(),
            gp.d
        )));
    }
    Ok(povm_from_frame(&frame))
}

/// Rows of `frame`, conjugated, as vectors.
pub fn povm_from_frame(frame: &CMatrix) -> Vec<CVector> {
    (0..frame.nrows())
        .map(|r| CVector::from_fn(frame.ncols(), |a, _| frame[(r, a)].conj()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Angle2Verdict {
    /// Whether `sum_t G_rt G_ts = d G_rs` holds within tolerance.
    pub holds: bool,
    pub condition2_residual: f64,
    /// `Tr G^3`, equal to `d^4` for a SIC family.
    pub cubic_sum: C64,
    /// `Tr G^4`, equal to `d^5` for a SIC family.
    pub quartic_sum: C64,
    /// Larger relative error of the two trace sums.
    pub condition3_residual: f64,
}

/// Evaluate the order-2 conditions on `G = K e^{i theta}`.
pub fn check_angle2_conditions(theta2: &RMatrix, tol: f64) -> Result<Angle2Verdict> {
    let d = check_antisymmetric2(theta2)?;
    let g = gram_from_angle2(d, theta2);
    let g2 = &g * &g;
    let c2 = max_abs_diff(&g2, &(&g * C64::new(d as f64, 0.0)));
    let cubic = trace(&(&g2 * &g));
    let quartic = trace(&(&g2 * &g2));
    let df = d as f64;
    let c3 =
        ((cubic - df.powi(4)).norm() / df.powi(4)).max((quartic - df.powi(5)).norm() / df.powi(5));
    Ok(Angle2Verdict {
        holds: c2 <= tol,
        condition2_residual: c2,
        cubic_sum: cubic,
        quartic_sum: quartic,
        condition3_residual: c3,
    })
}

/// Largest violation of complete antisymmetry and of the cocycle relation
/// `theta_ars + theta_ast + theta_atr = theta_rst` for the given anchor.
pub fn angle3_consistency(theta3: &Tensor3<f64>, anchor: usize) -> f64 {
    let n = theta3.n();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for s in 0..n {
            for t in 0..n {
                let v = theta3.get(r, s, t);
                worst = worst
                    .max(angle_distance(v, -theta3.get(s, r, t)))
                    .max(angle_distance(v, theta3.get(s, t, r)))
                    .max(angle_distance(
                        theta3.get(anchor, r, s)
                            + theta3.get(anchor, s, t)
                            + theta3.get(anchor, t, r),
                        v,
                    ));
            }
        }
    }
    worst
}

/// `theta_rs = theta_{a r s}` after checking the order-3 conditions.
pub fn angle2_from_angle3(theta3: &Tensor3<f64>, anchor: usize, tol: f64) -> Result<RMatrix> {
    let n = theta3.n();
    dim_from_index_size(n)?;
    if anchor >= n {
        return Err(Error::Invalid(format!(
            "anchor {anchor} out of range 0..{n}"
        )));
    }
    let worst = angle3_consistency(theta3, anchor);
    if !(worst <= tol) {
        return Err(Error::NotAnAngleTensor(format!(
            "consistency condition failed (residual {worst:.3e})"
        )));
    }
    Ok(RMatrix::from_fn(n, n, |r, s| {
        if r == s {
            0.0
        } else {
            theta3.get(anchor, r, s)
        }
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeVerdict {
    pub equivalent: bool,
    /// `phi` with `theta_b[r][s] = theta_a[r][s] - phi_r + phi_s`, `phi_0 = 0`.
    pub phases: Vec<f64>,
    pub residual: f64,
}

pub fn gauge_equivalent(a: &RMatrix, b: &RMatrix, tol: f64) -> Result<GaugeVerdict> {
    if a.shape() != b.shape() {
        return Err(Error::InvalidTensor("angle tensors differ in shape".into()));
    }
    check_antisymmetric2(a)?;
    check_antisymmetric2(b)?;
    let n = a.nrows();
    let phases: Vec<f64> = (0..n)
        .map(|s| if s == 0 { 0.0 } else { b[(0, s)] - a[(0, s)] })
        .collect();
    let mut residual: f64 = 0.0;
    for r in 0..n {
        for s in 0..n {
            residual = nan_max(
                residual,
                angle_distance(b[(r, s)], a[(r, s)] - phases[r] + phases[s]),
            );
        }
    }
    Ok(GaugeVerdict {
        equivalent: residual <= tol,
        phases,
        residual,
    })
}

/// Unitary `U` with `U psi1_r` proportional to `psi2_r` for all `r`, or
/// `None` when the order-3 angle tensors differ by more than `tol`.
pub fn recover_unitary(set1: &SicSet, set2: &SicSet, tol: f64) -> Result<Option<CMatrix>> {
    if set1.d() != set2.d() {
        return Err(Error::Invalid("sets have different dimensions".into()));
    }
    let d = set1.d();
    let n = set1.n();
    let t1 = triple_products(set1);
    let t2 = triple_products(set2);
    let mismatch = t1
        .theta3
        .as_slice()
        .iter()
        .zip(t2.theta3.as_slice())
        .fold(0.0f64, |m, (a, b)| nan_max(m, angle_distance(*a, *b)));
    if !(mismatch <= tol) {
        return Ok(None);
    }
    let v1 = set1.vectors();
    let v2 = set2.vectors();
    // re-gauge set1 so that its Gram row 0 matches set2's
    let aligned: Vec<CVector> = (0..n)
        .map(|s| {
            let ph = v2[0].dotc(&v2[s]).arg() - v1[0].dotc(&v1[s]).arg();
            &v1[s] * C64::from_polar(1.0, ph)
        })
        .collect();
    let mut u = CMatrix::zeros(d, d);
    for r in 0..n {
        u += &v2[r] * aligned[r].adjoint();
    }
    u /= C64::new(d as f64, 0.0);
    let unitarity = max_abs_diff(&(u.adjoint() * &u), &identity(d));
    let fit = (0..n).fold(0.0f64, |m, r| {
        nan_max(m, (&u * &aligned[r] - &v2[r]).norm())
    });
    const INCONSISTENT: f64 = 1e-6;
    if unitarity > INCONSISTENT || fit > INCONSISTENT {
        return Err(Error::InternalInconsistency(format!(
            "angle tensors agree but basis change fails (unitarity {unitarity:.2e}, fit {fit:.2e})"
        )));
    }
    Ok(Some(u))
}

/// Full pipeline from an order-3 angle tensor to a vector set `sqrt(d) xi_r`.
pub fn sic_from_theta3(theta3: &Tensor3<f64>, anchor: usize, tol: f64) -> Result<SicSet> {
    let theta2 = angle2_from_angle3(theta3, anchor, tol)?;
    let verdict = check_angle2_conditions(&theta2, tol)?;
    if !verdict.holds {
        return Err(Error::NotReconstructible(format!(
            "order-2 condition fails (residual {:.3e})",
            verdict.condition2_residual
        )));
    }
    let gp = gram_projector_from_angle2(&theta2)?;
    let xi = povm_from_gram_projector(&gp, tol)?;
    let scale = C64::new((gp.d as f64).sqrt(), 0.0);
    SicSet::new(xi.into_iter().map(|v| v * scale).collect())
}
