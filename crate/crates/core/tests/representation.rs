use std::sync::OnceLock;

use g2gt::algebra_g2::{f_unit, CasimirKind};
use g2gt::indexsets::IndexSet;
use g2gt::lattice::{v_generator, Flavor, GtLattice, USign};
use g2gt::linalg::{q, qf};
use g2gt::polyengine::{ExponentVector, SparsePolynomial};
use g2gt::representation::*;

fn ctx() -> &'static G2Context {
    static C: OnceLock<G2Context> = OnceLock::new();
    C.get_or_init(|| G2Context::new().unwrap())
}

fn ev(pairs: &[(&[i8], i64)]) -> ExponentVector {
    ExponentVector::from_pairs(pairs.iter().map(|(x, e)| (IndexSet::new(x).unwrap(), *e)))
}

#[test]
fn trivial_representation() {
    let b = build_irrep(ctx(), 0, 0).unwrap();
    assert_eq!(b.diagrams.len(), 1);
    assert_eq!(b.basis, vec![SparsePolynomial::one()]);
}

#[test]
fn act_g2_rejects_elements_outside_g2() {
    let f = SparsePolynomial::var(IndexSet::new(&[-3]).unwrap());
    assert!(matches!(act_g2(&ctx().alg, &f_unit(-4, -3), &f), Err(RepError::NotInG2)));
    assert!(act_g2(&ctx().alg, &f_unit(-3, -2), &f).is_ok());
    assert!(checked_o8_unit(&ctx().alg, -4, -3).is_err());
}

#[test]
fn standard_representation_end_to_end() {
    let mut b = build_irrep(ctx(), 1, 0).unwrap();
    assert_eq!(b.basis.len(), 7);
    assert!(invariance_failures(ctx(), &b.basis).is_empty());
    let space = RepSpace::new(b.basis.clone()).unwrap();
    assert_eq!(space_weights(&ctx().alg, &space).unwrap(), weight_multiset(1, 0));
    let mats = gt_basis(ctx(), &mut b).unwrap();
    assert_eq!(eigen_blocks(&b.eigen_table), Some(sl3_branching(1, 0)));
    assert!(block_orthogonal(&b));
    assert_eq!(sl3_blocks_from_kernels(&ctx().alg, &space).unwrap(), sl3_branching(1, 0));
    // the trace-form normalization of D_{i,j} gives 2/3 of the quadratic-form value
    let c2 = scalar_of(&mats.casimir(CasimirKind::C2G2)).unwrap();
    assert_eq!(c2, q(casimir_oracle(1, 0)) * qf(2, 3));
}

#[test]
fn cyclic_modules_match_weyl_and_casimir_oracles() {
    for (a, b) in [(1u32, 0u32), (0, 1), (2, 0)] {
        let m = cyclic_module(&ctx().alg, &highest_vector(a, b)).unwrap();
        assert_eq!(m.dim() as u64, weyl_dimension(a, b), "({a},{b})");
        assert_eq!(space_weights(&ctx().alg, &m).unwrap(), weight_multiset(a, b));
        assert_eq!(sl3_blocks_from_kernels(&ctx().alg, &m).unwrap(), sl3_branching(a, b));
        let mats = GeneratorMatrices::new(&ctx().alg, &m).unwrap();
        let c2 = scalar_of(&mats.casimir(CasimirKind::C2G2)).unwrap();
        assert_eq!(c2, q(casimir_oracle(a, b)) * qf(2, 3), "({a},{b})");
    }
}

#[test]
fn order_on_the_standard_representation() {
    let b = assemble(ctx(), 1, 0).unwrap();
    let oracle = OrderOracle::new(&ctx().lattice, 1);
    let n = b.diagrams.len();
    let rel = |x: usize, y: usize| oracle.compare(&b.diagrams[x].gamma, &b.diagrams[y].gamma);
    for x in 0..n {
        assert_eq!(rel(x, x), GtRelation::Equal);
        for y in 0..n {
            for z in 0..n {
                if rel(x, y) == GtRelation::Precedes && rel(y, z) == GtRelation::Precedes {
                    assert_ne!(rel(z, x), GtRelation::Precedes);
                }
            }
        }
    }
    // the basis is already orthogonal, so every linear extension yields the same GT basis
    for x in 0..n {
        for y in 0..n {
            assert_eq!(b.gram.get(x, y) == &q(0), x != y);
        }
    }
    let ext = oracle.linear_extension(&b.diagrams);
    let mut sorted = ext.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, (0..n).collect::<Vec<_>>());
}

#[test]
fn maximization_of_a_v_vector_can_leave_the_gl8_lattice() {
    // e_[-4] - e_[-3] - e_[-4,-2] + e_[-3,-2] maximizes to a vector that is neither zero,
    // the same, another v-vector, nor in the gl8 lattice
    let v = v_generator(-4, -3, -2, &[]).vec;
    let m = maximize(&ctx().alg, &v).unwrap();
    assert_eq!(m, ev(&[(&[-4], 1), (&[-3], -1), (&[-4, -3], -1), (&[-3, -2], 1)]));
    let gl8 = GtLattice::build(Flavor::Gl8, None, USign::Jacobi).unwrap();
    assert!(!gl8.contains(&m));
}

#[test]
fn every_wedge_maximizes_to_a_single_wedge() {
    for &x in IndexSet::all() {
        let (y, c) = maximize_set(&ctx().alg, x).unwrap();
        assert_eq!(y.len(), x.len());
        assert!(c != q(0));
    }
}
