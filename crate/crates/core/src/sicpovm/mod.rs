//! SIC sets: construction from fiducials, validation, search and file I/O.

mod io;
mod search;

pub use io::{
    format_fiducial, format_vector_set, load_fiducial, load_fiducial_with_tol, parse_fiducial,
    parse_fiducial_with_tol, parse_vector_set, save_fiducial, FILE_NORM_TOL, MAX_FILE_DIM,
};
pub use search::{fiducial_search, overlap_residual, penalty, penalty_gradient, SearchOptions};

use crate::error::{check_dim, Error, Result};
use crate::linalg::outer;
use crate::report::VerificationReport;
use crate::whgroup::{displace, phase_space, DisplacementIndex};
use crate::{CMatrix, CVector, C64};

/// Unit vector whose Weyl-Heisenberg orbit is meant to form a SIC.
#[derive(Debug, Clone, PartialEq)]
pub struct Fiducial {
    d: usize,
    components: CVector,
}

/// Norm tolerance enforced by [`Fiducial::new`].
pub const FIDUCIAL_NORM_TOL: f64 = 1e-12;

impl Fiducial {
    /// Wrap an already-normalized vector.
    pub fn new(components: Vec<C64>) -> Result<Self> {
        let v = CVector::from_vec(components);
        check_dim(v.len())?;
        let n = v.norm();
        if !n.is_finite() || (n - 1.0).abs() > FIDUCIAL_NORM_TOL {
            return Err(Error::InvalidState(format!("fiducial norm {n} is not 1")));
        }
        Ok(Fiducial {
            d: v.len(),
            components: v,
        })
    }

    /// Normalize `v` and rotate it so its largest-magnitude component is real
    /// and positive.
    pub fn from_unnormalized(v: CVector) -> Result<Self> {
        check_dim(v.len())?;
        let n = v.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidState("zero or non-finite vector".into()));
        }
        let mut v = v / C64::new(n, 0.0);
        let mut big = 0;
        for (i, z) in v.iter().enumerate() {
            if z.norm() > v[big].norm() {
                big = i;
            }
        }
        let z = v[big];
        v *= z.conj() / z.norm();
        v[big] = C64::new(v[big].re, 0.0);
        Ok(Fiducial {
            d: v.len(),
            components: v,
        })
    }

    /// Wrap a vector without any normalization check. Meant for building
    /// deliberately invalid inputs in tests.
    pub fn new_unchecked(components: Vec<C64>) -> Self {
        let v = CVector::from_vec(components);
        Fiducial {
            d: v.len(),
            components: v,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn components(&self) -> &CVector {
        &self.components
    }
}

/// `d^2` vectors in dimension `d`, optionally labeled by phase-space points.
#[derive(Debug, Clone, PartialEq)]
pub struct SicSet {
    d: usize,
    vectors: Vec<CVector>,
    labels: Option<Vec<DisplacementIndex>>,
}

impl SicSet {
    /// Shape-checked constructor; SIC-ness is not asserted.
    pub fn new(vectors: Vec<CVector>) -> Result<Self> {
        let n = vectors.len();
        let d = (n as f64).sqrt().round() as usize;
        if d * d != n {
            return Err(Error::Invalid(format!("{n} vectors is not a square count")));
        }
        check_dim(d)?;
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::Invalid(format!(
                "vector of length {} in a set of dimension {d}",
                v.len()
            )));
        }
        Ok(SicSet {
            d,
            vectors,
            labels: None,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of elements, `d^2`.
    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn labels(&self) -> Option<&[DisplacementIndex]> {
        self.labels.as_deref()
    }

    pub fn projectors(&self) -> Vec<CMatrix> {
        self.vectors.iter().map(|v| outer(v, v)).collect()
    }

    /// Apply `U` to every vector.
    pub fn transformed(&self, u: &CMatrix) -> SicSet {
        SicSet {
            d: self.d,
            vectors: self.vectors.iter().map(|v| u * v).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Multiply vector `r` by `exp(i phases[r])`.
    pub fn rephased(&self, phases: &[f64]) -> SicSet {
        SicSet {
            d: self.d,
            vectors: self
                .vectors
                .iter()
                .zip(phases)
                .map(|(v, &ph)| v * C64::from_polar(1.0, ph))
                .collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Orbit `D_p |psi>` over `p` in row-major order.
pub fn sic_from_fiducial(fid: &Fiducial) -> Result<SicSet> {
    crate::whgroup::check_unit(&fid.components, 1e-10)?;
    let d = fid.d;
    let labels = phase_space(d);
    let vectors = labels
        .iter()
        .map(|&p| displace(&fid.components, p))
        .collect();
    Ok(SicSet {
        d,
        vectors,
        labels: Some(labels),
    })
}

/// Target value of `|<psi_r|psi_s>|^2`.
pub fn sic_overlap(d: usize, same: bool) -> f64 {
    if same {
        1.0
    } else {
        1.0 / (d as f64 + 1.0)
    }
}

/// Checks `sic.overlap` (squared overlaps against their SIC values) and
/// `sic.identity_resolution` (`sum_r Pi_r = d I`, tolerance scaled by `d`).
pub fn validate_sic(set: &SicSet, tol: f64) -> VerificationReport {
    let d = set.d;
    let n = set.n();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for s in r..n {
            let o = set.vectors[r].dotc(&set.vectors[s]).norm_sqr();
            let err = (o - sic_overlap(d, r == s)).abs();
            worst = if err.is_nan() {
                f64::NAN
            } else {
                worst.max(err)
            };
        }
    }
    let mut sum = CMatrix::zeros(d, d);
    for v in &set.vectors {
        sum += outer(v, v);
    }
    for i in 0..d {
        sum[(i, i)] -= C64::new(d as f64, 0.0);
    }
    let mut rep = VerificationReport::new();
    rep.record("sic.overlap", worst, tol);
    rep.record(
        "sic.identity_resolution",
        crate::linalg::max_abs(&sum),
        tol * d as f64,
    );
    rep
}

const EMBEDDED: [(usize, &str); 6] = [
    (2, include_str!("../../data/fid_d2.txt")),
    (3, include_str!("../../data/fid_d3.txt")),
    (4, include_str!("../../data/fid_d4.txt")),
    (5, include_str!("../../data/fid_d5.txt")),
    (6, include_str!("../../data/fid_d6.txt")),
    (7, include_str!("../../data/fid_d7.txt")),
];

/// Environment variable naming a directory of `fid_d<d>.txt` files that
/// take precedence over the embedded ones.
pub const DATA_DIR_ENV: &str = "SIC_DATA_DIR";

/// Tolerance used when re-validating bundled fiducials.
pub const BUNDLED_TOL: f64 = 1e-10;

/// Shipped fiducial for `d` in 2..=7, re-validated on every load.
pub fn bundled_fiducial(d: usize) -> Result<Fiducial> {
    check_dim(d)?;
    let fid = match std::env::var_os(DATA_DIR_ENV) {
        Some(dir)
            if std::path::Path::new(&dir)
                .join(format!("fid_d{d}.txt"))
                .exists() =>
        {
            load_fiducial(std::path::Path::new(&dir).join(format!("fid_d{d}.txt")))?
        }
        _ => {
            let text = EMBEDDED
                .iter()
                .find(|(k, _)| *k == d)
                .map(|(_, t)| *t)
                .ok_or_else(|| Error::Invalid(format!("no bundled fiducial for d={d}")))?;
            parse_fiducial(text)?
        }
    };
    if fid.d() != d {
        return Err(Error::InvalidFile(format!(
            "bundled file for d={d} holds a d={} fiducial",
            fid.d()
        )));
    }
    let rep = validate_sic(&sic_from_fiducial(&fid)?, BUNDLED_TOL);
    if !rep.passed() {
        return Err(Error::NotASic(format!(
            "bundled d={d} fiducial fails validation (overlap error {:e})",
            rep.error_of("sic.overlap")
        )));
    }
    Ok(fid)
}

/// Dimensions with a shipped fiducial.
pub fn bundled_dimensions() -> Vec<usize> {
    EMBEDDED.iter().map(|(d, _)| *d).collect()
}
