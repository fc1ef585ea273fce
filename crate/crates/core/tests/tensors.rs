mod common;

use common::{close, sic, trip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sic_core::linalg::{max_abs_diff, outer, random_hermitian, random_unit_vector};
use sic_core::sicpovm::SicSet;
use sic_core::tensors::{
    angle_formula_check, check_two_design, commutator_expansion_check, expand, gram,
    jacobi_residual, probabilities, pure_state_check, reassemble, triple_products,
    two_design_residual, Sampling, Tensor3,
};
use sic_core::{CMatrix, CVector, C64};

#[test]
fn gram_moduli_for_qubit() {
    let g = gram(&sic(2)).unwrap();
    for r in 0..4 {
        close(g.g[(r, r)].re, 1.0, 1e-12);
        for s in 0..4 {
            if r != s {
                close(g.g[(r, s)].norm(), 1.0 / 3f64.sqrt(), 1e-9);
            }
        }
    }
}

#[test]
fn rephasing_shifts_theta2() {
    let set = sic(3);
    let phases: Vec<f64> = (0..9).map(|r| 0.3 * r as f64 - 1.0).collect();
    let a = gram(&set).unwrap().theta2;
    let b = gram(&set.rephased(&phases)).unwrap().theta2;
    for r in 0..9 {
        for s in 0..9 {
            let want = a[(r, s)] - phases[r] + phases[s];
            let diff = C64::from_polar(1.0, b[(r, s)]) - C64::from_polar(1.0, want);
            assert!(diff.norm() < 1e-10);
        }
    }
}

#[test]
fn non_sic_gram_is_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let vs: Vec<CVector> = (0..4).map(|_| random_unit_vector(2, &mut rng)).collect();
    assert!(gram(&SicSet::new(vs).unwrap()).is_err());
}

#[test]
fn triple_product_values() {
    let t2 = trip(2);
    for r in 0..4 {
        close(t2.t.get(r, r, r).re, 1.0, 1e-12);
    }
    let total: C64 = t2.t.as_slice().iter().sum();
    close(total.re, 16.0, 1e-7);
    let t3 = trip(3);
    let row: C64 = (0..9).map(|t| t3.t.get(0, 4, t)).sum();
    close(row.re, 0.75, 1e-9);
}

#[test]
fn triple_product_symmetries() {
    let t = trip(3);
    let n = 9;
    for r in 0..n {
        for s in 0..n {
            for u in 0..n {
                let x = t.t.get(r, s, u);
                assert!((x - t.t.get(u, r, s)).norm() < 1e-12);
                assert!((x - t.t.get(u, s, r).conj()).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn trace_product_sum_qubit() {
    let t = trip(2);
    let mut total = C64::new(0.0, 0.0);
    for s in 0..4 {
        for u in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    total += t.t.get(s, a, b) * t.t.get(u, b, a);
                }
            }
        }
    }
    close(total.re, 64.0 / 3.0, 1e-9);
}

#[test]
fn expansion_coefficients() {
    for d in [2, 3] {
        let set = sic(d);
        let a = expand(&CMatrix::identity(d, d), &set);
        for x in &a {
            close(x.re, 1.0 / d as f64, 1e-12);
        }
        let a = expand(&set.projectors()[0], &set);
        close(a[0].re, 1.0, 1e-12);
        for x in &a[1..] {
            assert!(x.norm() < 1e-12);
        }
    }
    let set = sic(4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = CMatrix::from_fn(4, 4, |_, _| C64::new(rng.random(), rng.random()));
    let back = reassemble(&expand(&m, &set), &set);
    assert!(max_abs_diff(&back, &m) < 1e-8);
}

#[test]
fn two_design_holds_for_sics_only() {
    let sampling = Sampling::default();
    assert!(check_two_design(&sic(2), 1e-9, &sampling).passed());
    assert!(check_two_design(&sic(3), 1e-9, &sampling).passed());
    let basis: Vec<CVector> = (0..4)
        .map(|r| {
            let mut v = CVector::zeros(2);
            v[r % 2] = C64::new(1.0, 0.0);
            v
        })
        .collect();
    assert!(two_design_residual(&SicSet::new(basis).unwrap(), &sampling) > 0.1);
}

#[test]
fn jacobi_is_special() {
    let sampling = Sampling::default();
    assert!(jacobi_residual(&trip(2).j, &sampling) < 1e-9);
    assert!(jacobi_residual(&trip(3).j, &sampling) < 1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 9;
    let mut j = Tensor3::<C64>::zeros(n);
    for r in 0..n {
        for s in 0..n {
            for t in 0..n {
                if r < s && s < t {
                    let x: f64 = rng.random_range(-1.0..1.0);
                    for (a, b, c, sign) in [
                        (r, s, t, 1.0),
                        (s, t, r, 1.0),
                        (t, r, s, 1.0),
                        (s, r, t, -1.0),
                        (r, t, s, -1.0),
                        (t, s, r, -1.0),
                    ] {
                        j.set(a, b, c, C64::new(0.0, sign * x));
                    }
                }
            }
        }
    }
    assert!(jacobi_residual(&j, &sampling) > 1e-3);
}

#[test]
fn pure_state_conditions() {
    let set = sic(2);
    let t = trip(2);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let psi = random_unit_vector(2, &mut rng);
    let p = probabilities(&outer(&psi, &psi), &set);
    let sq: f64 = p.iter().map(|x| x * x).sum();
    close(sq, 1.0 / 3.0, 1e-12);
    assert!(pure_state_check(&p, &t, 1e-9).pure);

    let uniform = vec![0.25; 4];
    let v = pure_state_check(&uniform, &t, 1e-9);
    assert!(!v.pure);
    close(v.quadratic_residual.abs(), 1.0 / 3.0 - 0.25, 1e-12);

    let set3 = sic(3);
    let a = random_unit_vector(3, &mut rng);
    let b = random_unit_vector(3, &mut rng);
    let rho = (outer(&a, &a) + outer(&b, &b)) * C64::new(0.5, 0.0);
    assert!(!pure_state_check(&probabilities(&rho, &set3), &trip(3), 1e-9).pure);
}

#[test]
fn commutator_expansions() {
    for d in [2, 3] {
        let set = sic(d);
        let t = triple_products(&set);
        assert!(commutator_expansion_check(&set, &t, 1e-9).passed());
        for r in 0..d * d {
            for u in 0..d * d {
                assert!(t.j.get(r, r, u).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn angle_formulas_reproduce_tensors() {
    for d in 2..=4 {
        assert!(angle_formula_check(&trip(d), 1e-10).passed());
    }
}

#[test]
fn hermitian_mixtures_are_not_pure() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = random_hermitian(2, &mut rng);
    let rho = &h * h.adjoint();
    let rho = &rho / rho.trace();
    let v = pure_state_check(&probabilities(&rho, &sic(2)), &trip(2), 1e-9);
    assert!(!v.pure);
}
