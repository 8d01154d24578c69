use g2gt::algebra_g2::build_split_octonions;
use g2gt::indexsets::IndexSet;
use g2gt::lattice::{v_generator, Flavor, GtLattice, USign};
use g2gt::polyengine::ExponentVector;
use g2gt::series::{differentiate, operators, residual_failures, Convention, SeriesEngine, SeriesOptions, System};

fn ev(pairs: &[(&[i8], i64)]) -> ExponentVector {
    ExponentVector::from_pairs(pairs.iter().map(|(x, e)| (IndexSet::new(x).unwrap(), *e)))
}

#[test]
fn g2_lattice_invariants() {
    let model = build_split_octonions().unwrap();
    let lat = GtLattice::build(Flavor::G2, Some(&model), USign::Jacobi).unwrap();
    assert_eq!(lat.gens_u.len(), 119);
    assert_eq!(lat.rank(), 248);
    assert_eq!(lat.torsion(), vec![3, 2, 2, 2]);
    assert!(lat.all_generators().all(|g| lat.contains(&g.vec)));
    // the omega vectors move degree between grades {1,7}, {3,5} and {4}
    assert!(!lat.is_conserving());
}

#[test]
fn gl8_lattice_conserves_every_grade() {
    let lat = GtLattice::build(Flavor::Gl8, None, USign::Jacobi).unwrap();
    assert!(lat.is_conserving());
    assert_eq!(lat.enumerate_diagrams(1, 0).unwrap().len(), 8);
}

#[test]
fn gl8_shift_rule() {
    let lat = GtLattice::build(Flavor::Gl8, None, USign::Jacobi).unwrap();
    let eng = SeriesEngine::new(&lat, SeriesOptions::default());
    for gamma in [
        ev(&[(&[-3], 1), (&[-4, -2], 1)]),
        ev(&[(&[-4, -3], 1), (&[2], 1)]),
        ev(&[(&[-3, -2], 2), (&[-4], 1)]),
        ev(&[(&[-4, -3, -2], 1), (&[-1], 1)]),
    ] {
        let f = eng.gamma_series(&gamma).unwrap();
        assert!(!f.truncated, "{gamma}");
        assert!(residual_failures(&f.poly, &operators(&lat, System::Gkz)).is_empty(), "{gamma}");
        for (x, _) in gamma.iter() {
            let lower = eng.gamma_series(&gamma.combine(&ExponentVector::unit(x), -1)).unwrap();
            assert_eq!(differentiate(&f.poly, x), lower.poly, "{gamma} d/dA{x}");
        }
    }
}

#[test]
fn printed_and_binomial_conventions_agree_on_small_gl8_series() {
    let lat = GtLattice::build(Flavor::Gl8, None, USign::Jacobi).unwrap();
    let a = SeriesEngine::new(&lat, SeriesOptions { convention: Convention::Printed, ..SeriesOptions::default() });
    let b = SeriesEngine::new(&lat, SeriesOptions::default());
    let gamma = ev(&[(&[-3], 1), (&[-4, -2], 1)]);
    assert_eq!(a.gamma_series(&gamma).unwrap().poly, b.gamma_series(&gamma).unwrap().poly);
}

#[test]
fn v_generator_example() {
    let g = v_generator(-4, -3, -2, &[]);
    assert_eq!(g.vec, ev(&[(&[-4], 1), (&[-3], -1), (&[-4, -2], -1), (&[-3, -2], 1)]));
}
