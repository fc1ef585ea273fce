//! Numerical fiducial search by penalty minimization.
//!
//! The penalty `F = sum_{p != 0} (|<psi|D_p psi>|^2 - 1/(d+1))^2` is written
//! for an unnormalized vector `phi` (overlaps divided by `|phi|^4`), so the
//! optimizer works on plain `R^(2d)`. Each restart runs L-BFGS from a
//! Gaussian start and then a few Gauss-Newton steps on the residual vector.

use std::cell::Cell;

use argmin::core::{CostFunction, Executor, Gradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::LBFGS;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Fiducial;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{nan_max, random_complex_vector};
use crate::whgroup::omega_pow;
use crate::{CVector, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    /// Required bound on `max_p | |<psi|D_p psi>|^2 - 1/(d+1) |`.
    pub target: f64,
    pub restarts: usize,
    /// L-BFGS iterations per restart.
    pub max_iters: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            target: 1e-9,
            restarts: 50,
            max_iters: 2000,
        }
    }
}

struct Penalty {
    d: usize,
    omega: Vec<C64>,
    // evaluation budget; the line search has no iteration cap of its own
    evals_left: Cell<u64>,
}

/// Per-point overlap data: `c_p = <phi|X^p1 Z^p2 phi>` and `d u_p / d phi*`.
struct Overlaps {
    u: Vec<f64>,
    grad: Vec<CVector>,
}

impl Penalty {
    fn new(d: usize) -> Self {
        Penalty {
            d,
            omega: (0..d as i64).map(|k| omega_pow(d, k)).collect(),
            evals_left: Cell::new(u64::MAX),
        }
    }

    fn spend(&self) -> std::result::Result<(), argmin::core::Error> {
        let left = self.evals_left.get();
        if left == 0 {
            return Err(argmin::core::Error::msg("evaluation budget exhausted"));
        }
        self.evals_left.set(left - 1);
        Ok(())
    }

    fn target(&self) -> f64 {
        1.0 / (self.d as f64 + 1.0)
    }

    fn unpack(&self, x: &[f64]) -> CVector {
        CVector::from_fn(self.d, |a, _| C64::new(x[2 * a], x[2 * a + 1]))
    }

    // The tau phase of D_p drops out of |c_p|, so plain X^p1 Z^p2 is used.
    fn overlaps(&self, phi: &CVector, with_grad: bool) -> Overlaps {
        let d = self.d;
        let n = phi.norm_squared();
        let mut u = Vec::with_capacity(d * d - 1);
        let mut grad = Vec::new();
        for p1 in 0..d {
            for p2 in 0..d {
                if p1 == 0 && p2 == 0 {
                    continue;
                }
                // m_phi = M phi, mt_phi = M^dagger phi
                let mut m_phi = CVector::zeros(d);
                let mut mt_phi = CVector::zeros(d);
                for a in 0..d {
                    let w = self.omega[(p2 * a) % d];
                    m_phi[(a + p1) % d] = w * phi[a];
                    mt_phi[a] = w.conj() * phi[(a + p1) % d];
                }
                let c = phi.dotc(&m_phi);
                let csq = c.norm_sqr();
                u.push(csq / (n * n));
                if with_grad {
                    let g = (m_phi * c.conj() + mt_phi * c) / C64::new(n * n, 0.0)
                        - phi * C64::new(2.0 * csq / (n * n * n), 0.0);
                    grad.push(g);
                }
            }
        }
        Overlaps { u, grad }
    }

    fn value(&self, phi: &CVector) -> f64 {
        let k = self.target();
        self.overlaps(phi, false)
            .u
            .iter()
            .map(|u| (u - k).powi(2))
            .sum()
    }

    fn real_gradient(&self, phi: &CVector) -> Vec<f64> {
        let k = self.target();
        let ov = self.overlaps(phi, true);
        let mut g = CVector::zeros(self.d);
        for (u, gp) in ov.u.iter().zip(&ov.grad) {
            g += gp * C64::new(2.0 * (u - k), 0.0);
        }
        g.iter().flat_map(|z| [2.0 * z.re, 2.0 * z.im]).collect()
    }

    fn residual(&self, phi: &CVector) -> f64 {
        let k = self.target();
        self.overlaps(phi, false)
            .u
            .iter()
            .fold(0.0, |m, u| nan_max(m, (u - k).abs()))
    }

    /// Gauss-Newton on the residuals `u_p - k`; returns the best point seen.
    fn polish(&self, mut phi: CVector, steps: usize) -> CVector {
        let k = self.target();
        let mut best = self.residual(&phi);
        for _ in 0..steps {
            let ov = self.overlaps(&phi, true);
            let m = ov.u.len();
            let jac = DMatrix::from_fn(m, 2 * self.d, |i, j| {
                let z = ov.grad[i][j / 2];
                if j % 2 == 0 {
                    2.0 * z.re
                } else {
                    2.0 * z.im
                }
            });
            let r = DVector::from_iterator(m, ov.u.iter().map(|u| k - u));
            if !jac.iter().all(|x| x.is_finite()) {
                break;
            }
            let Some(svd) = jac.try_svd(true, true, f64::EPSILON, 500) else {
                break;
            };
            let Ok(step) = svd.solve(&r, 1e-10) else {
                break;
            };
            let cand =
                &phi + CVector::from_fn(self.d, |a, _| C64::new(step[2 * a], step[2 * a + 1]));
            let res = self.residual(&cand);
            if !(res < best) {
                break;
            }
            best = res;
            phi = cand;
        }
        phi
    }
}

impl CostFunction for Penalty {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        self.spend()?;
        Ok(self.value(&self.unpack(x)))
    }
}

impl Gradient for Penalty {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    fn gradient(&self, x: &Vec<f64>) -> std::result::Result<Vec<f64>, argmin::core::Error> {
        self.spend()?;
        Ok(self.real_gradient(&self.unpack(x)))
    }
}

/// The search penalty at `psi` (any nonzero vector).
pub fn penalty(psi: &CVector) -> f64 {
    Penalty::new(psi.len()).value(psi)
}

/// Gradient of [`penalty`] with respect to `(Re psi_0, Im psi_0, ...)`.
pub fn penalty_gradient(psi: &CVector) -> Vec<f64> {
    Penalty::new(psi.len()).real_gradient(psi)
}

/// `max_{p != 0} | |<psi|D_p psi>|^2 / |psi|^4 - 1/(d+1) |`
pub fn overlap_residual(psi: &CVector) -> f64 {
    Penalty::new(psi.len()).residual(psi)
}

fn run_lbfgs(problem: &Penalty, x0: Vec<f64>, max_iters: u64) -> Vec<f64> {
    let solver = LBFGS::new(MoreThuenteLineSearch::new(), 7)
        .with_tolerance_grad(1e-15)
        .and_then(|s| s.with_tolerance_cost(0.0));
    let Ok(solver) = solver else {
        return x0;
    };
    let penalty = Penalty::new(problem.d);
    penalty.evals_left.set(20 * max_iters);
    match Executor::new(penalty, solver)
        .configure(|s| s.param(x0.clone()).max_iters(max_iters))
        .run()
    {
        Ok(res) => res.state().get_best_param().cloned().unwrap_or(x0),
        // a line search can give up once the cost reaches rounding level;
        // the polish step takes over from the start point in that case
        Err(_) => x0,
    }
}

/// Search for a SIC fiducial in dimension `d`.
///
/// Restart `i` draws its start point from a ChaCha stream keyed by `seed`
/// and `i`, and restarts run in order until one meets `opts.target`, so the
/// result depends only on `(d, seed, opts)`.
pub fn fiducial_search(d: usize, seed: u64, opts: &SearchOptions) -> Result<Fiducial> {
    check_dim(d)?;
    let problem = Penalty::new(d);
    let mut best = f64::INFINITY;
    for restart in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart as u64);
        let start = random_complex_vector(d, &mut rng);
        let x0: Vec<f64> = start.iter().flat_map(|z| [z.re, z.im]).collect();
        let x = run_lbfgs(&problem, x0, opts.max_iters);
        let phi = problem.unpack(&x);
        if phi.norm() == 0.0 || !phi.norm().is_finite() {
            continue;
        }
        let phi = phi.normalize();
        let phi = if problem.residual(&phi) < 1e-3 {
            problem.polish(phi, 20).normalize()
        } else {
            phi
        };
        let fid = Fiducial::from_unnormalized(phi)?;
        let res = problem.residual(fid.components());
        if res <= opts.target {
            return Ok(fid);
        }
        if res < best || best.is_nan() {
            best = res;
        }
    }
    Err(Error::SearchFailed {
        best_residual: best,
        restarts: opts.restarts,
    })
}
