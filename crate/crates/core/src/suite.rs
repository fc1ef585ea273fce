//! The full verification run for one fiducial, grouped so callers can pick
//! subsets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adjoint::{
    adjoint_bundle, check_simplicial, check_spectral, gell_mann_basis, hs_identities, metric_check,
    sic_from_qqt_basis, structure_constants, sum_identities, QqtOutcome, QQT_TOL,
};
use crate::error::{Error, Result};
use crate::geometry::{f_sum_identities, geom_vectors, verify_geometry};
use crate::gramproj::{check_ppt, wh_gram_bundle, wigner_h_relation};
use crate::linalg::{identity, max_abs_diff, nan_max, random_unitary};
use crate::reconstruct::{
    angle2_from_angle3, check_angle2_conditions, check_rank_d_projector, gauge_equivalent,
    recover_unitary, sic_from_theta3, trace_powers, GramProjector,
};
use crate::report::VerificationReport;
use crate::sicpovm::{sic_from_fiducial, validate_sic, Fiducial, SicSet};
use crate::tensors::{
    angle_distance, angle_formula_check, check_two_design, commutator_expansion_check,
    jacobi_check, triple_products, triple_sum_checks, Sampling, Tensor3,
};
use crate::{CMatrix, C64};

/// Check groups in execution order.
pub const GROUPS: &[&str] = &[
    "sic",
    "two_design",
    "triple_sums",
    "jacobi",
    "commutators",
    "angles",
    "spectral",
    "hs",
    "sums",
    "geometry",
    "fsums",
    "simplicial",
    "gramproj",
    "converse",
    "reconstruct",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub tol: f64,
    pub seed: u64,
    /// `None` runs every group.
    pub groups: Option<Vec<String>>,
    /// Random `(eps_r, alpha)` draws in the converse round trip.
    pub converse_trials: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            tol: 1e-9,
            seed: 0,
            groups: None,
            converse_trials: 3,
        }
    }
}

impl SuiteOptions {
    fn wants(&self, group: &str) -> bool {
        self.groups
            .as_ref()
            .is_none_or(|gs| gs.iter().any(|g| g == group))
    }
}

/// Largest elementwise distance between two order-3 angle tensors.
pub fn theta3_distance(a: &Tensor3<f64>, b: &Tensor3<f64>) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .fold(0.0, |m, (x, y)| nan_max(m, angle_distance(*x, *y)))
}

/// `L_r = eps_r (Pi_r + alpha I)`
pub fn planted_basis(set: &SicSet, signs: &[i8], alpha: f64) -> Vec<CMatrix> {
    let d = set.d();
    set.projectors()
        .into_iter()
        .zip(signs)
        .map(|(p, &e)| (p + identity(d) * C64::new(alpha, 0.0)) * C64::new(e as f64, 0.0))
        .collect()
}

/// Random signs and an `alpha` kept away from the excluded value `-1/d`.
pub fn random_plant<R: Rng + ?Sized>(d: usize, rng: &mut R) -> (Vec<i8>, f64) {
    let signs = (0..d * d)
        .map(|_| if rng.random_bool(0.5) { 1 } else { -1 })
        .collect();
    let bad = -1.0 / d as f64;
    let alpha = loop {
        let a: f64 = rng.random_range(-1.0..1.0);
        if (a - bad).abs() > 0.05 {
            break a;
        }
    };
    (signs, alpha)
}

pub fn run_suite(fid: &Fiducial, opts: &SuiteOptions) -> Result<VerificationReport> {
    if let Some(gs) = &opts.groups {
        if let Some(bad) = gs.iter().find(|g| !GROUPS.contains(&g.as_str())) {
            return Err(Error::Invalid(format!("unknown check group {bad:?}")));
        }
    }
    let tol = opts.tol;
    let d = fid.d();
    let sampling = Sampling::with_seed(opts.seed);
    let set = sic_from_fiducial(fid)?;
    let trip = triple_products(&set);
    let mut rep = VerificationReport::new();

    if opts.wants("sic") {
        rep.extend(validate_sic(&set, tol));
    }
    if opts.wants("two_design") {
        rep.extend(check_two_design(&set, tol, &sampling));
    }
    if opts.wants("triple_sums") {
        rep.extend(triple_sum_checks(&trip, tol));
    }
    if opts.wants("jacobi") {
        rep.extend(jacobi_check(&trip, tol, &sampling));
    }
    if opts.wants("commutators") {
        rep.extend(commutator_expansion_check(&set, &trip, tol));
    }
    if opts.wants("angles") {
        rep.extend(angle_formula_check(&trip, tol));
    }
    let needs_bundle = ["spectral", "hs", "sums", "geometry", "fsums"]
        .iter()
        .any(|g| opts.wants(g));
    if needs_bundle {
        let bundle = adjoint_bundle(&trip);
        if opts.wants("spectral") {
            rep.extend(check_spectral(&bundle, tol));
        }
        if opts.wants("hs") {
            rep.extend(hs_identities(&bundle, tol));
        }
        if opts.wants("sums") {
            rep.extend(sum_identities(&bundle, tol));
        }
        if opts.wants("geometry") || opts.wants("fsums") {
            let gv = geom_vectors(&bundle);
            if opts.wants("geometry") {
                rep.extend(verify_geometry(&bundle, &gv, tol, &sampling));
            }
            if opts.wants("fsums") {
                rep.extend(f_sum_identities(&bundle, &gv, tol));
            }
        }
    }
    if opts.wants("simplicial") {
        rep.extend(check_simplicial(&set, tol, opts.seed));
    }
    if opts.wants("gramproj") {
        rep.extend(check_ppt(&wh_gram_bundle(fid)?, tol));
        if d % 2 == 1 {
            rep.extend(wigner_h_relation(fid, tol)?);
        }
    }
    if opts.wants("converse") {
        rep.extend(converse_checks(
            &set,
            &trip.theta3,
            tol,
            opts.seed,
            opts.converse_trials,
        )?);
    }
    if opts.wants("reconstruct") {
        rep.extend(reconstruct_checks(&set, &trip.theta3, tol, opts.seed)?);
    }
    rep.sort_by_name();
    Ok(rep)
}

/// Planted `L_r = eps_r (Pi_r + alpha I)` bases recovered through their
/// structure constants, plus the Gell-Mann negative control.
pub fn converse_checks(
    set: &SicSet,
    theta3: &Tensor3<f64>,
    tol: f64,
    seed: u64,
    trials: usize,
) -> Result<VerificationReport> {
    let d = set.d();
    let mut rep = VerificationReport::new();
    let projectors = set.projectors();
    let sc = structure_constants(&projectors)?;
    let trip = triple_products(set);
    let mut cj: f64 = 0.0;
    for r in 0..set.n() {
        for s in 0..set.n() {
            for t in 0..set.n() {
                cj = nan_max(cj, (sc.c.get(r, s, t) - trip.j.get(r, s, t)).norm());
            }
        }
    }
    rep.record("converse.structure_constants_are_j", cj, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let (signs, alpha) = random_plant(d, &mut rng);
        let basis = planted_basis(set, &signs, alpha);
        let m = metric_check(&basis);
        rep.record(
            "converse.metric_beta",
            (m.beta - d as f64 / (d as f64 + 1.0))
                .abs()
                .max(m.fit_residual),
            tol,
        );
        match sic_from_qqt_basis(&basis, QQT_TOL)? {
            QqtOutcome::Recovered(rec) => {
                let back = triple_products(&rec.set);
                // In d = 2 the complements I - Pi_r are also rank one, so the
                // recovered set may be the conjugate one with all signs flipped.
                let flipped = d == 2 && rec.signs.iter().zip(&signs).all(|(a, b)| *a == -*b);
                let (target, want_alpha) = if flipped {
                    (theta3.map(|x| -x), -alpha - 2.0 / d as f64)
                } else {
                    (theta3.clone(), alpha)
                };
                rep.record(
                    "converse.roundtrip_theta3",
                    theta3_distance(&target, &back.theta3),
                    tol,
                );
                rep.record("converse.alpha", (rec.alpha - want_alpha).abs(), tol);
                let wrong = if flipped {
                    0
                } else {
                    rec.signs.iter().zip(&signs).filter(|(a, b)| a != b).count()
                };
                rep.record("converse.signs", wrong as f64, 0.0);
            }
            QqtOutcome::Rejected { .. } => {
                rep.record("converse.roundtrip_theta3", f64::INFINITY, tol);
            }
        }
    }
    let control = match sic_from_qqt_basis(&gell_mann_basis(d), QQT_TOL)? {
        QqtOutcome::Rejected { .. } => 0.0,
        QqtOutcome::Recovered(_) => 1.0,
    };
    rep.record("converse.gell_mann_rejected", control, 0.0);
    Ok(rep)
}

/// Order-3 tensor to vectors and back, anchor independence, order-2
/// conditions, and recovery of a planted unitary.
pub fn reconstruct_checks(
    set: &SicSet,
    theta3: &Tensor3<f64>,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let d = set.d();
    let mut rep = VerificationReport::new();
    let gp = GramProjector::from_set(set);
    let traces = trace_powers(&gp.p);
    let terr = traces.iter().fold(0.0f64, |m, t| {
        nan_max(m, (t - C64::new(d as f64, 0.0)).norm())
    });
    rep.record("reconstruct.projector_traces", terr, tol);
    rep.record(
        "reconstruct.projector_accepted",
        if check_rank_d_projector(&gp, tol) {
            0.0
        } else {
            1.0
        },
        0.0,
    );
    let theta2 = angle2_from_angle3(theta3, 0, tol)?;
    let verdict = check_angle2_conditions(&theta2, tol)?;
    rep.record(
        "reconstruct.angle2_condition2",
        verdict.condition2_residual,
        tol,
    );
    rep.record(
        "reconstruct.angle2_condition3",
        verdict.condition3_residual,
        tol,
    );
    let other = angle2_from_angle3(theta3, set.n() - 1, tol)?;
    rep.record(
        "reconstruct.anchor_gauge_equivalence",
        gauge_equivalent(&theta2, &other, tol)?.residual,
        tol,
    );
    let rebuilt = sic_from_theta3(theta3, 0, tol)?;
    rep.extend(prefixed(
        validate_sic(&rebuilt, tol),
        "reconstruct.rebuilt_",
    ));
    rep.record(
        "reconstruct.roundtrip_theta3",
        theta3_distance(theta3, &triple_products(&rebuilt).theta3),
        tol,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = random_unitary(d, &mut rng);
    let moved = set.transformed(&v);
    let deficit = match recover_unitary(set, &moved, tol)? {
        Some(u) => set
            .vectors()
            .iter()
            .zip(moved.vectors())
            .fold(0.0f64, |m, (a, b)| {
                nan_max(m, 1.0 - (&u * a).dotc(b).norm())
            })
            .max(max_abs_diff(&(u.adjoint() * &u), &identity(d))),
        None => f64::INFINITY,
    };
    rep.record("reconstruct.unitary_recovery", deficit, tol);
    Ok(rep)
}

fn prefixed(rep: VerificationReport, prefix: &str) -> VerificationReport {
    let mut out = VerificationReport::new();
    for mut c in rep.checks {
        c.name = format!("{prefix}{}", c.name.replace('.', "_"));
        out.push(c);
    }
    out
}
