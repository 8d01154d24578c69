//! Property tests over random polynomials, index sequences and exponent vectors.

use std::sync::OnceLock;

use g2gt::algebra_g2::{build_split_octonions, derivation_algebra, e_unit, G2Algebra};
use g2gt::indexsets::{canonicalize, IndexSet, INDICES};
use g2gt::lattice::{Flavor, GtLattice, USign};
use g2gt::linalg::q;
use g2gt::polyengine::{pairing, ExponentVector, SparsePolynomial};
use g2gt::representation::{act_g2, act_matrix, act_matrix_unit, maximize};
use proptest::prelude::*;

fn alg() -> &'static G2Algebra {
    static A: OnceLock<G2Algebra> = OnceLock::new();
    A.get_or_init(|| derivation_algebra(&build_split_octonions().unwrap()).unwrap())
}

fn o8_lattice() -> &'static GtLattice {
    static L: OnceLock<GtLattice> = OnceLock::new();
    L.get_or_init(|| GtLattice::build(Flavor::O8, None, USign::Jacobi).unwrap())
}

/// Sums of up to three monomials of degree <= 2 with small integer coefficients.
fn poly() -> impl Strategy<Value = SparsePolynomial> {
    prop::collection::vec((0usize..254, 0usize..254, any::<bool>(), -3i64..=3), 1..4).prop_map(|terms| {
        let mut f = SparsePolynomial::zero();
        for (a, b, two, c) in terms {
            let mut m = ExponentVector::unit(IndexSet::from_id(a));
            if two {
                m = &m + &ExponentVector::unit(IndexSet::from_id(b));
            }
            f.add_term(m, q(c));
        }
        f
    })
}

fn index() -> impl Strategy<Value = i8> {
    (0usize..8).prop_map(|k| INDICES[k])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matrix_units_act_as_a_lie_algebra(f in poly(), i in index(), j in index(), k in index(), l in index()) {
        let lhs = &act_matrix_unit(i, j, &act_matrix_unit(k, l, &f)) - &act_matrix_unit(k, l, &act_matrix_unit(i, j, &f));
        let bracket = e_unit(i, j).commutator(&e_unit(k, l));
        prop_assert_eq!(lhs, act_matrix(&bracket, &f));
    }

    #[test]
    fn matrix_unit_matches_matrix_action(f in poly(), i in index(), j in index()) {
        prop_assert_eq!(act_matrix_unit(i, j, &f), act_matrix(&e_unit(i, j), &f));
    }

    #[test]
    fn transposed_units_are_adjoint(f in poly(), g in poly(), i in index(), j in index()) {
        prop_assert_eq!(pairing(&act_matrix_unit(i, j, &f), &g), pairing(&f, &act_matrix_unit(j, i, &g)));
    }

    #[test]
    fn g2_action_is_a_representation(f in poly(), a in 0usize..14, b in 0usize..14) {
        let (x, y) = (&alg().basis[a], &alg().basis[b]);
        let lhs = &act_g2(alg(), x, &act_g2(alg(), y, &f).unwrap()).unwrap() - &act_g2(alg(), y, &act_g2(alg(), x, &f).unwrap()).unwrap();
        prop_assert_eq!(lhs, act_g2(alg(), &x.commutator(y), &f).unwrap());
    }

    #[test]
    fn maximization_is_additive(a in prop::collection::vec(0i64..3, 254), b in prop::collection::vec(0i64..3, 254)) {
        let (va, vb) = (ExponentVector::from_dense(&a), ExponentVector::from_dense(&b));
        let sum = maximize(alg(), &(&va + &vb)).unwrap();
        prop_assert_eq!(sum, &maximize(alg(), &va).unwrap() + &maximize(alg(), &vb).unwrap());
    }

    #[test]
    fn transposition_flips_the_sign(perm in Just(INDICES.to_vec()).prop_shuffle(), k in 2usize..8, t in 0usize..7) {
        let seq = &perm[..k];
        let t = t % (k - 1);
        let mut swapped = seq.to_vec();
        swapped.swap(t, t + 1);
        let (a, b) = (canonicalize(seq).unwrap(), canonicalize(&swapped).unwrap());
        prop_assert_eq!(a.set, b.set);
        prop_assert_eq!(a.sign, -b.sign);
    }

    #[test]
    fn class_keys_are_invariant_under_generators(v in prop::collection::vec(-2i64..3, 254), g in 0usize..2000, k in -2i64..3) {
        let lat = o8_lattice();
        let gens: Vec<_> = lat.all_generators().collect();
        let w = ExponentVector::from_dense(&v);
        let shifted = w.combine(&gens[g % gens.len()].vec, k);
        prop_assert_eq!(lat.class_key(&w), lat.class_key(&shifted));
        prop_assert_eq!(lat.class_key(&lat.class_key(&w)), lat.class_key(&w));
    }
}
