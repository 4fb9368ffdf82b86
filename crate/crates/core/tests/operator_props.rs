use std::sync::Arc;

use ncdiff::ce::CeCalculus;
use ncdiff::derivations::algebra_derivations;
use ncdiff::diffops::{grothendieck_diff, lunts_filtration, two_sided_filtration, Side};
use ncdiff::linalg::vector;
use ncdiff::universal::UniversalCalculus;
use ncdiff::{catalog, Bimodule, Field, FiniteAlgebra, HomSpace, Scalar};
use proptest::prelude::*;

const NAMES: &[&str] = &["trunc_poly(3)", "xy_sq", "matrix(2)", "quaternions", "upper_triangular(2)"];

fn alg(name: &str) -> Arc<FiniteAlgebra> {
    Arc::new(catalog(name, Field::Rational).unwrap())
}

fn coords(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(-3i64..=3, n).prop_map(|xs| vector::from_i64(Field::Rational, &xs))
}

fn algebra_and(k: usize) -> impl Strategy<Value = (Arc<FiniteAlgebra>, Vec<Vec<Scalar>>)> {
    prop::sample::select(NAMES).prop_flat_map(move |name| {
        let a = alg(name);
        let n = a.dim();
        (Just(a), prop::collection::vec(coords(n), k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derivations_satisfy_leibniz((a, xs) in algebra_and(3)) {
        let ders = algebra_derivations(&a, false).unwrap();
        let c: Vec<Scalar> = (0..ders.dim()).map(|i| xs[2][i % xs[2].len()].clone()).collect();
        let u = ders.from_coords(&c);
        let (x, y) = (&xs[0], &xs[1]);
        let lhs = u.mul_vec(&a.mul(x, y));
        let rhs = vector::add(&a.mul(&u.mul_vec(x), y), &a.mul(x, &u.mul_vec(y)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn left_and_right_deltas_commute((a, xs) in algebra_and(3)) {
        let reg = Bimodule::regular(&a);
        let hom = HomSpace::endomorphisms(&reg).unwrap();
        let n = a.dim();
        let phi = hom.unflatten(&(0..n * n).map(|i| xs[i % 3][i / 3 % n].clone()).collect::<Vec<_>>());
        let one = hom.bar_delta(&xs[1], &hom.delta(&xs[0], &phi).unwrap()).unwrap();
        let two = hom.delta(&xs[0], &hom.bar_delta(&xs[1], &phi).unwrap()).unwrap();
        prop_assert_eq!(one, two);
    }

    #[test]
    fn universal_d_is_a_derivation((a, xs) in algebra_and(2)) {
        let u = UniversalCalculus::new(&a).unwrap();
        let (x, y) = (&xs[0], &xs[1]);
        let lhs = u.d_tensor(&a.mul(x, y));
        let t = u.tensor_module();
        let rhs = vector::add(&t.act_right(&u.d_tensor(x), y).unwrap(), &t.act_left(x, &u.d_tensor(y)).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ce_d_is_a_derivation_into_forms((a, xs) in algebra_and(2)) {
        let ce = CeCalculus::new(&a, 1).unwrap();
        let (x, y) = (&xs[0], &xs[1]);
        let lhs = ce.exact(&a.mul(x, y)).unwrap();
        let rhs = vector::add(
            &ce.right_mult(1, y).mul_vec(&ce.exact(x).unwrap()),
            &ce.left_mult(1, x).mul_vec(&ce.exact(y).unwrap()),
        );
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn filtrations_are_monotone_and_contain_grothendieck() {
    for name in NAMES {
        let hom = HomSpace::endomorphisms(&Bimodule::regular(&alg(name))).unwrap();
        let left = lunts_filtration(&hom, 2, Side::Left).unwrap();
        let right = lunts_filtration(&hom, 2, Side::Right).unwrap();
        let two = two_sided_filtration(&hom, 2).unwrap();
        for f in [&left, &right, &two] {
            assert!(f.is_monotone(), "{name}");
        }
        for k in 0..=2 {
            let g = grothendieck_diff(&hom, k).unwrap().subspace;
            assert!(g.is_subset(left.term(k)).unwrap(), "{name} {k}");
            assert!(g.is_subset(right.term(k)).unwrap(), "{name} {k}");
        }
    }
}
