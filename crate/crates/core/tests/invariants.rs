use hermface_core::albert::{chart_point, idempotency_residual};
use hermface_core::cone_faces::{face_join, face_meet, face_of, modular_law_check, rank_identity_check};
use hermface_core::lattice::{face_lattice_of_polytope, PolytopeV};
use hermface_core::rational::qr;
use hermface_core::rp5::{factor_condition, Rp5Error};
use hermface_core::sample;
use hermface_core::{Element, Field};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::R), Just(Field::C), Just(Field::H)]
}

fn any_field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::R), Just(Field::C), Just(Field::H), Just(Field::O)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_multiplicative(f in any_field(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (sample::element(&mut rng, f), sample::element(&mut rng, f));
        let xy = x.checked_mul(&y).unwrap();
        prop_assert!((xy.norm() - x.norm() * y.norm()).abs() < 1e-12 * (1.0 + x.norm() * y.norm()));
    }

    #[test]
    fn conjugation_reverses_products(f in any_field(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (sample::element(&mut rng, f), sample::element(&mut rng, f));
        let lhs = x.checked_mul(&y).unwrap().conj();
        let rhs = y.conj().checked_mul(&x.conj()).unwrap();
        let diff: Element = Element::new(f, &lhs.coeffs().iter().zip(rhs.coeffs()).map(|(a, b)| a - b).collect::<Vec<_>>()).unwrap();
        prop_assert!(diff.max_abs() < 1e-12);
    }

    #[test]
    fn octonions_are_alternative(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (sample::element(&mut rng, Field::O), sample::element(&mut rng, Field::O));
        let lhs = x.checked_mul(&x).unwrap().checked_mul(&y).unwrap();
        let rhs = x.checked_mul(&x.checked_mul(&y).unwrap()).unwrap();
        let gap = lhs.coeffs().iter().zip(rhs.coeffs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(gap < 1e-12);
    }

    #[test]
    fn face_ranks_are_modular(f in field(), n in 1usize..=5, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ra, rb) = (rng.random_range(0..=n), rng.random_range(0..=n));
        let a = face_of(&sample::psd_of_rank(&mut rng, f, n, ra)).unwrap();
        let b = face_of(&sample::psd_of_rank(&mut rng, f, n, rb)).unwrap();
        prop_assert!(rank_identity_check(&a, &b).unwrap());
        let (j, m) = (face_join(&a, &b).unwrap(), face_meet(&a, &b).unwrap());
        prop_assert!(m.is_below(&a) && m.is_below(&b) && a.is_below(&j) && b.is_below(&j));
    }

    #[test]
    fn modular_law_holds_below(f in field(), n in 1usize..=4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rh = rng.random_range(0..=n);
        let h = face_of(&sample::psd_of_rank(&mut rng, f, n, rh)).unwrap();
        let rg = rng.random_range(0..=n);
        let g = face_of(&sample::psd_of_rank(&mut rng, f, n, rg)).unwrap();
        let lower = face_meet(&h, &g).unwrap();
        prop_assert!(modular_law_check(&lower, &g, &h).unwrap().holds);
    }

    #[test]
    fn chart_points_are_idempotent(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (sample::element(&mut rng, Field::O), sample::element(&mut rng, Field::O));
        let p = chart_point(&x, &y).unwrap();
        prop_assert!((p.trace() - 1.0).abs() < 1e-12);
        prop_assert!(idempotency_residual(&p) < 1e-10);
    }

    #[test]
    fn combined_condition_splits(cn in -40i64..40, cd in 1i64..15, dn in -40i64..40, dd in 1i64..15) {
        let (c, d) = (qr(cn, cd), qr(dn, dd));
        match factor_condition(&c, &d) {
            Ok(fac) => prop_assert_eq!(fac.linear.mul(&fac.quadratic), fac.cubic),
            Err(Rp5Error::DegenerateCubic { .. }) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn face_counts_of_cubes_and_simplices() {
    for (name, faces) in [("simplex2", 8), ("simplex3", 16), ("simplex4", 32), ("square", 10), ("cube", 28)] {
        let fl = face_lattice_of_polytope(&PolytopeV::named(name).unwrap()).unwrap();
        assert_eq!(fl.lattice.len(), faces, "{name}");
    }
}
