use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sic_core::geometry::{principal_cosines, SubspaceFrame};
use sic_core::linalg::{identity, max_abs_diff, random_complex_vector, random_unit_vector};
use sic_core::sicpovm::{bundled_fiducial, parse_fiducial, parse_vector_set, sic_from_fiducial};
use sic_core::suite::theta3_distance;
use sic_core::tensors::{decode_theta3, triple_products};
use sic_core::whgroup::{displacement, phase_space, wigner, DisplacementIndex};
use sic_core::CVector;

fn index(d: usize) -> impl Strategy<Value = (usize, i64, i64)> {
    let m = 2 * d as i64;
    (Just(d), 0..m, 0..m)
}

fn dim_and_index() -> impl Strategy<Value = (usize, i64, i64)> {
    (2usize..=8).prop_flat_map(index)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn displacements_are_unitary((d, a, b) in dim_and_index()) {
        let m = displacement(d, DisplacementIndex::new(d, a, b)).unwrap().matrix;
        prop_assert!(max_abs_diff(&(&m * m.adjoint()), &identity(d)) < 1e-12);
    }

    #[test]
    fn adjoint_is_negated_index((d, a, b) in dim_and_index()) {
        let p = DisplacementIndex::new(d, a, b);
        let m = displacement(d, p).unwrap().matrix;
        let neg = displacement(d, p.neg(d)).unwrap().matrix;
        prop_assert!(max_abs_diff(&m.adjoint(), &neg) < 1e-12);
    }

    #[test]
    fn powers_scale_the_index((d, a, b) in dim_and_index(), n in 1i64..=16) {
        let n = n.min(2 * d as i64);
        let p = DisplacementIndex::new(d, a, b);
        let m = displacement(d, p).unwrap().matrix;
        let mut power = identity(d);
        for _ in 0..n {
            power = &power * &m;
        }
        let want = displacement(d, p.scale(d, n)).unwrap().matrix;
        prop_assert!(max_abs_diff(&power, &want) < 1e-10);
    }

    #[test]
    fn even_dimension_sign_rule(half in 1usize..=4, a in 0i64..8, b in 0i64..8, u1 in 0i64..2, u2 in 0i64..2) {
        let d = 2 * half;
        let di = d as i64;
        let base = displacement(d, DisplacementIndex::new(d, a, b)).unwrap().matrix;
        let shifted = displacement(d, DisplacementIndex::new(d, a + di * u1, b + di * u2)).unwrap().matrix;
        let sign = if (u1 * b + u2 * a) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(max_abs_diff(&shifted, &(base * sic_core::C64::new(sign, 0.0))) < 1e-12);
    }

    #[test]
    fn orbit_reaches_every_pair(d in 2usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_complex_vector(d, &mut rng);
        let chi = random_complex_vector(d, &mut rng);
        let best = phase_space(d)
            .into_iter()
            .map(|p| phi.dotc(&(displacement(d, p).unwrap().matrix * &chi)).norm())
            .fold(0.0, f64::max);
        prop_assert!(best > 1e-8);
    }

    #[test]
    fn wigner_sums_to_one(k in 1usize..=3, seed in any::<u64>()) {
        let d = 2 * k + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_unit_vector(d, &mut rng);
        let total: f64 = phase_space(d).into_iter().map(|p| wigner(&psi, p).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn theta3_is_gauge_invariant(d in 2usize..=4, phases in prop::collection::vec(-10.0f64..10.0, 16)) {
        let set = sic_from_fiducial(&bundled_fiducial(d).unwrap()).unwrap();
        let before = triple_products(&set).theta3;
        let after = triple_products(&set.rephased(&phases[..d * d])).theta3;
        prop_assert!(theta3_distance(&before, &after) < 1e-10);
    }

    #[test]
    fn principal_cosines_are_symmetric(seed in any::<u64>(), k in 1usize..=3, kk in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |m: usize| -> Vec<CVector> { (0..m).map(|_| random_complex_vector(6, &mut rng)).collect() };
        let p = SubspaceFrame::from_vectors(&draw(k)).projector;
        let q = SubspaceFrame::from_vectors(&draw(kk)).projector;
        let a = principal_cosines(&p, &q).unwrap();
        let b = principal_cosines(&q, &p).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn fiducial_parser_never_panics(text in ".{0,200}") {
        let _ = parse_fiducial(&text);
        let _ = parse_vector_set(&text);
    }

    #[test]
    fn theta3_decoder_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..256)) {
        let _ = decode_theta3(&bytes);
    }
}
