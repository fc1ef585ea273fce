mod common;

use common::{bundle, close, sic, trip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sic_core::adjoint::{
    adjoint_bundle, check_simplicial, check_spectral, gell_mann_basis, hs_identities, is_qqt,
    metric_check, qqt_canonical_form, sic_from_qqt_basis, simplicial_basis, structure_constants,
    sum_identities, QqtOutcome,
};
use sic_core::linalg::{hermitian_eigen, identity, max_abs_diff, random_hermitian};
use sic_core::suite::{planted_basis, theta3_distance};
use sic_core::tensors::triple_products;
use sic_core::{CMatrix, Error, RMatrix, C64};

fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    )
}

#[test]
fn bundle_basics() {
    for d in 2..=4 {
        let b = bundle(d);
        for r in 0..d * d {
            close(b.e[r].norm(), 1.0, 1e-12);
            close(b.q[r].trace().re, d as f64 - 1.0, 1e-10);
            close(b.t[r].trace().re, d as f64, 1e-10);
        }
    }
}

#[test]
fn spectral_structure() {
    let b = bundle(2);
    for r in 0..4 {
        let (vals, _) = hermitian_eigen(&b.t[r]);
        for (v, want) in vals.iter().zip([4.0 / 3.0, 2.0 / 3.0, 0.0, 0.0]) {
            close(*v, want, 1e-9);
        }
        assert!((&b.q[r] * b.q[r].transpose()).norm() < 1e-9);
    }
    let b = bundle(3);
    let e = sic_core::linalg::vec_to_complex(&b.e[0]);
    assert!((&b.t[0] * &e - &e * C64::new(1.5, 0.0)).norm() < 1e-10);
    for d in 2..=5 {
        assert!(check_spectral(&bundle(d), 1e-9).passed());
    }
}

#[test]
fn qqt_recognition() {
    assert!(is_qqt(&bundle(3).j[0], Some(2), 1e-8).unwrap());
    assert!(is_qqt(&sigma_y(), Some(1), 1e-8).unwrap());
    let diag = CMatrix::from_diagonal(&sic_core::CVector::from_vec(vec![
        C64::new(1.0, 0.0),
        C64::new(-1.0, 0.0),
    ]));
    assert!(!is_qqt(&diag, None, 1e-8).unwrap());
    let mut skew = CMatrix::zeros(2, 2);
    skew[(0, 1)] = C64::new(1.0, 0.0);
    assert!(matches!(
        is_qqt(&skew, None, 1e-8),
        Err(Error::InvalidMatrix(_))
    ));
}

#[test]
fn canonical_forms() {
    let c = qqt_canonical_form(&sigma_y(), 1e-8).unwrap();
    assert_eq!(c.n, 1);
    assert!((&c.s - RMatrix::identity(2, 2)).norm() < 1e-12);

    let j = bundle(3).j[0].clone();
    let c = qqt_canonical_form(&j, 1e-8).unwrap();
    assert_eq!(c.n, 2);
    assert!((&c.s.transpose() * &c.s - RMatrix::identity(9, 9)).norm() < 1e-9);
    assert!(max_abs_diff(&c.reconstruct(), &j) < 1e-9);
    assert!(matches!(
        qqt_canonical_form(&identity(2), 1e-8),
        Err(Error::NotDecomposable(_))
    ));
}

#[test]
fn structure_constants_of_known_bases() {
    let set = sic(2);
    let t = triple_products(&set);
    let sc = structure_constants(&set.projectors()).unwrap();
    for r in 0..4 {
        for s in 0..4 {
            for u in 0..4 {
                assert!((sc.c.get(r, s, u) - t.j.get(r, s, u)).norm() < 1e-9);
            }
        }
    }
    let pauli = structure_constants(&gell_mann_basis(2)).unwrap();
    assert!(pauli.c_matrix(0).norm() < 1e-12);

    let set = sic(3);
    let t = triple_products(&set);
    let signs: Vec<i8> = (0..9).map(|r| if r % 3 == 0 { -1 } else { 1 }).collect();
    let sc = structure_constants(&planted_basis(&set, &signs, 0.3)).unwrap();
    for r in 0..9 {
        for s in 0..9 {
            for u in 0..9 {
                let e = (signs[r] * signs[s] * signs[u]) as f64;
                assert!((sc.c.get(r, s, u) - t.j.get(r, s, u) * e).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn converse_recovers_planted_sets() {
    let set = sic(3);
    let theta3 = triple_products(&set).theta3;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let signs: Vec<i8> = (0..9)
        .map(|_| if rng.random_bool(0.5) { 1 } else { -1 })
        .collect();
    match sic_from_qqt_basis(&planted_basis(&set, &signs, 0.3), 1e-8).unwrap() {
        QqtOutcome::Recovered(rec) => {
            assert!(theta3_distance(&theta3, &triple_products(&rec.set).theta3) < 1e-8);
            close(rec.alpha, 0.3, 1e-9);
            close(rec.alpha, (rec.epsilon as f64 * rec.l - 1.0) / 3.0, 1e-12);
            assert_eq!(rec.signs, signs);
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        sic_from_qqt_basis(&gell_mann_basis(2), 1e-8).unwrap(),
        QqtOutcome::Rejected { .. }
    ));
    let degenerate = planted_basis(&set, &signs, -1.0 / 3.0);
    assert!(matches!(
        sic_from_qqt_basis(&degenerate, 1e-8),
        Err(Error::NotABasis(_))
    ));
}

#[test]
fn metric_fit() {
    let m = metric_check(&sic(2).projectors());
    close(m.beta, 2.0 / 3.0, 1e-9);
    close(m.gamma, 1.0 / 3.0, 1e-9);
    assert!(m.fit_residual < 1e-9);

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let random: Vec<CMatrix> = (0..9).map(|_| random_hermitian(3, &mut rng)).collect();
    assert!(metric_check(&random).fit_residual > 1e-2);

    let set = sic(3);
    let signs: Vec<i8> = (0..9).map(|r| if r < 4 { 1 } else { -1 }).collect();
    let basis = planted_basis(&set, &signs, 0.3);
    let m = metric_check(&basis);
    let l = m.l.iter().map(|x| x.abs()).sum::<f64>() / 9.0;
    let mut total = CMatrix::zeros(3, 3);
    for (lr, b) in m.l.iter().zip(&basis) {
        total += b * C64::new(lr.signum(), 0.0);
    }
    assert!(max_abs_diff(&total, &(identity(3) * C64::new(3.0 * l, 0.0))) < 1e-9);
}

#[test]
fn hilbert_schmidt_values() {
    let b = bundle(3);
    close(
        b.j[0].component_mul(&b.j[0].transpose()).sum().re,
        4.0,
        1e-9,
    );
    close((&b.j[0] * &b.j[1]).trace().re, -0.5, 1e-9);
    let b2 = bundle(2);
    close((&b2.q[0] * b2.q[1].transpose()).trace().re, 4.0 / 9.0, 1e-9);
    for d in 2..=5 {
        assert!(hs_identities(&bundle(d), 1e-9).passed());
    }
}

#[test]
fn sums_over_r() {
    let b = bundle(2);
    let total: C64 = b.q.iter().map(|q| q.trace()).sum();
    close(total.re, 4.0, 1e-9);
    for d in 2..=5 {
        let b = bundle(d);
        assert!(sum_identities(&b, 1e-9).passed());
        let v0 = sic_core::linalg::vec_to_complex(&b.v0);
        for j in &b.j {
            assert!((j * &v0).norm() < 1e-10);
        }
    }
}

#[test]
fn simplicial() {
    let sb = simplicial_basis(&sic(2));
    close(sb.inner(&sb.b[0], &sb.b[1]).re, -1.0 / 3.0, 1e-12);
    let total = sb.b.iter().fold(CMatrix::zeros(2, 2), |a, m| a + m);
    assert!(total.norm() < 1e-10);

    let sb = simplicial_basis(&sic(3));
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut a = random_hermitian(3, &mut rng);
    let tr = a.trace() / C64::new(3.0, 0.0);
    a -= identity(3) * tr;
    let coeffs = sb.coefficients(&a);
    assert!(coeffs.iter().sum::<C64>().norm() < 1e-10);
    assert!(max_abs_diff(&sb.reassemble(&coeffs), &a) < 1e-8);
    for d in 2..=4 {
        assert!(check_simplicial(&sic(d), 1e-9, 1).passed());
    }
}

#[test]
fn every_j_is_qqt() {
    for d in 2..=5 {
        let b = adjoint_bundle(&trip(d));
        for (j, q) in b.j.iter().zip(&b.q) {
            assert!(is_qqt(j, Some(d - 1), 1e-8).unwrap());
            let from_j = (j + j * j) * C64::new(0.5, 0.0);
            assert!(max_abs_diff(&from_j, q) < 1e-10);
        }
    }
}
