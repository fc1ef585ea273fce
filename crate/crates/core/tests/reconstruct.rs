mod common;

use common::{close, sic, trip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sic_core::linalg::{hermitian_eigen, identity, random_unitary};
use sic_core::reconstruct::{
    angle2_from_angle3, check_angle2_conditions, check_rank_d_projector, gauge_equivalent,
    gram_projector_from_angle2, povm_from_gram_projector, recover_unitary, sic_from_theta3,
    GramProjector,
};
use sic_core::sicpovm::{validate_sic, SicSet};
use sic_core::suite::theta3_distance;
use sic_core::tensors::{gram, triple_products, Tensor3};
use sic_core::{CMatrix, Error, RMatrix, C64};

fn random_antisymmetric(n: usize, seed: u64) -> RMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = RMatrix::zeros(n, n);
    for r in 0..n {
        for s in (r + 1)..n {
            let x: f64 = rng.random_range(-3.0..3.0);
            m[(r, s)] = x;
            m[(s, r)] = -x;
        }
    }
    m
}

#[test]
fn gram_projector_spectra() {
    let theta2 = gram(&sic(2)).unwrap().theta2;
    let gp = gram_projector_from_angle2(&theta2).unwrap();
    let (vals, _) = hermitian_eigen(&gp.p);
    for (v, want) in vals.iter().zip([1.0, 1.0, 0.0, 0.0]) {
        close(*v, want, 1e-9);
    }
    let zero = gram_projector_from_angle2(&RMatrix::zeros(4, 4)).unwrap();
    assert!(!check_rank_d_projector(&zero, 1e-8));
    let random = gram_projector_from_angle2(&random_antisymmetric(9, 2)).unwrap();
    assert!(!check_rank_d_projector(&random, 1e-8));
    let mut asym = RMatrix::zeros(4, 4);
    asym[(0, 1)] = 0.5;
    assert!(matches!(
        gram_projector_from_angle2(&asym),
        Err(Error::InvalidTensor(_))
    ));
}

#[test]
fn rank_d_projector_test() {
    let gp = GramProjector::from_set(&sic(3));
    assert!(check_rank_d_projector(&gp, 1e-8));
    let id = GramProjector {
        d: 3,
        p: CMatrix::identity(9, 9),
    };
    assert!(!check_rank_d_projector(&id, 1e-8));
    let scaled = GramProjector {
        d: 3,
        p: &gp.p * C64::new(1.01, 0.0),
    };
    assert!(!check_rank_d_projector(&scaled, 1e-8));
}

#[test]
fn povm_vectors_from_projector() {
    let gp = GramProjector::from_set(&sic(2));
    let xi = povm_from_gram_projector(&gp, 1e-9).unwrap();
    let mut frame_sum = CMatrix::zeros(2, 2);
    for (r, a) in xi.iter().enumerate() {
        close(a.norm_squared(), 0.5, 1e-12);
        frame_sum += a * a.adjoint();
        for (s, b) in xi.iter().enumerate() {
            assert!((a.dotc(b) - gp.p[(r, s)]).norm() < 1e-9);
        }
    }
    assert!((frame_sum - identity(2)).norm() < 1e-9);
    let scaled = SicSet::new(xi.iter().map(|v| v * C64::new(2f64.sqrt(), 0.0)).collect()).unwrap();
    assert!(validate_sic(&scaled, 1e-9).passed());

    let bad = GramProjector {
        d: 2,
        p: CMatrix::identity(4, 4),
    };
    assert!(matches!(
        povm_from_gram_projector(&bad, 1e-9),
        Err(Error::NotReconstructible(_))
    ));
}

#[test]
fn eigenbasis_choice_changes_vectors_by_a_unitary() {
    let set = sic(3);
    let xi = povm_from_gram_projector(&GramProjector::from_set(&set), 1e-9).unwrap();
    let rebuilt = SicSet::new(xi.iter().map(|v| v * C64::new(3f64.sqrt(), 0.0)).collect()).unwrap();
    assert!(recover_unitary(&set, &rebuilt, 1e-8).unwrap().is_some());
}

#[test]
fn order2_conditions() {
    let theta2 = gram(&sic(2)).unwrap().theta2;
    let v = check_angle2_conditions(&theta2, 1e-9).unwrap();
    assert!(v.holds);
    close(v.cubic_sum.re, 16.0, 1e-9);
    close(v.quartic_sum.re, 32.0, 1e-9);
    assert!(
        !check_angle2_conditions(&RMatrix::zeros(4, 4), 1e-9)
            .unwrap()
            .holds
    );

    let mut bumped = gram(&sic(3)).unwrap().theta2;
    bumped[(0, 1)] += 1e-3;
    bumped[(1, 0)] -= 1e-3;
    let r = check_angle2_conditions(&bumped, 1e-9)
        .unwrap()
        .condition2_residual;
    assert!(r > 1e-5 && r < 1e-2, "{r}");
}

#[test]
fn order2_condition_implies_order3() {
    for d in 2..=5 {
        let v = check_angle2_conditions(&gram(&sic(d)).unwrap().theta2, 1e-9).unwrap();
        assert!(v.holds && v.condition3_residual < 1e-9);
    }
}

#[test]
fn anchors_give_gauge_equivalent_tensors() {
    let t = trip(3);
    let a = angle2_from_angle3(&t.theta3, 0, 1e-9).unwrap();
    let b = angle2_from_angle3(&t.theta3, 1, 1e-9).unwrap();
    assert!(check_angle2_conditions(&a, 1e-9).unwrap().holds);
    assert!(gauge_equivalent(&a, &b, 1e-9).unwrap().equivalent);
}

#[test]
fn random_theta3_is_not_an_angle_tensor() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 9;
    let mut t = Tensor3::<f64>::zeros(n);
    for r in 0..n {
        for s in (r + 1)..n {
            for u in (s + 1)..n {
                let x: f64 = rng.random_range(-3.0..3.0);
                for (a, b, c, sign) in [
                    (r, s, u, 1.0),
                    (s, u, r, 1.0),
                    (u, r, s, 1.0),
                    (s, r, u, -1.0),
                    (r, u, s, -1.0),
                    (u, s, r, -1.0),
                ] {
                    t.set(a, b, c, sign * x);
                }
            }
        }
    }
    let err = angle2_from_angle3(&t, 0, 1e-9).unwrap_err();
    assert!(matches!(err, Error::NotAnAngleTensor(_)));
    assert!(err.to_string().contains("consistency condition failed"));
}

#[test]
fn gauge_equivalence() {
    let a = gram(&sic(3)).unwrap().theta2;
    let same = gauge_equivalent(&a, &a, 1e-12).unwrap();
    assert!(same.equivalent && same.phases.iter().all(|p| p.abs() < 1e-15));

    let phi: Vec<f64> = (0..9).map(|r| 0.7 * r as f64).collect();
    let b = RMatrix::from_fn(9, 9, |r, s| a[(r, s)] - phi[r] + phi[s]);
    let v = gauge_equivalent(&a, &b, 1e-9).unwrap();
    assert!(v.equivalent);
    for r in 0..9 {
        let shift = C64::from_polar(1.0, v.phases[r] - (phi[r] - phi[0]));
        assert!((shift - 1.0).norm() < 1e-9);
    }
    let other = random_antisymmetric(9, 8);
    assert!(!gauge_equivalent(&a, &other, 1e-6).unwrap().equivalent);
}

#[test]
fn unitary_recovery() {
    let set = sic(3);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let v = random_unitary(3, &mut rng);
    let moved = set.transformed(&v);
    let u = recover_unitary(&set, &moved, 1e-8).unwrap().unwrap();
    for (a, b) in set.vectors().iter().zip(moved.vectors()) {
        assert!(1.0 - (&u * a).dotc(b).norm() < 1e-8);
    }
    let u = recover_unitary(&set, &set, 1e-8).unwrap().unwrap();
    let phase = u[(0, 0)];
    assert!((u - identity(3) * phase).norm() < 1e-8);

    let conj = SicSet::new(set.vectors().iter().map(|v| v.conjugate()).collect()).unwrap();
    assert!(recover_unitary(&set, &conj, 1e-8).unwrap().is_none());
}

#[test]
fn full_round_trip() {
    for d in 2..=5 {
        let t = trip(d);
        let rebuilt = sic_from_theta3(&t.theta3, 0, 1e-9).unwrap();
        assert!(validate_sic(&rebuilt, 1e-9).passed());
        assert!(theta3_distance(&t.theta3, &triple_products(&rebuilt).theta3) < 1e-8);
    }
}
