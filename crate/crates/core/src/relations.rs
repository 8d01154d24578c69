//! Relations among the minors a_X of a G2 group element, exact minor evaluation, and
//! certification on sampled group elements.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra_g2::{f_unit, invariant_tensor, random_g2_element, sample_group_element, G2Algebra, OctonionModel};
use crate::indexsets::{canonicalize, jacobi_sign, pos, IndexSet, INDICES, NUM_SETS};
use crate::linalg::{q, QMatrix, Q};
use crate::polyengine::{ExponentVector, SparsePolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelationKind {
    Pluecker { p: usize, q: usize },
    Jacobi,
    Specific(usize),
    Unit,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationKind::Pluecker { p, q } => write!(f, "pluecker({p},{q})"),
            RelationKind::Jacobi => write!(f, "jacobi"),
            RelationKind::Specific(k) => write!(f, "specific_{k}"),
            RelationKind::Unit => write!(f, "unit"),
        }
    }
}

/// poly(A) + affine = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub kind: RelationKind,
    pub poly: SparsePolynomial,
    pub affine: Q,
}

impl Relation {
    pub fn eval(&self, minors: &[Q]) -> Q {
        substitute(&self.poly, minors) + &self.affine
    }
}

/// Product A_{seq1} A_{seq2} with the antisymmetry signs resolved; None if a minor repeats a column.
fn product(a: &[i8], b: &[i8]) -> Option<(ExponentVector, i64)> {
    let sa = canonicalize(a).ok()?;
    let sb = canonicalize(b).ok()?;
    if sa.sign == 0 || sb.sign == 0 {
        return None;
    }
    let m = &ExponentVector::unit(sa.set) + &ExponentVector::unit(sb.set);
    Some((m, (sa.sign * sb.sign) as i64))
}

/// The exchange relation a_I a_J - sum_s a_{j_s, I minus i_1} a_{J with j_s replaced by i_1}.
pub fn exchange_relation(i: &[i8], j: &[i8]) -> SparsePolynomial {
    let mut poly = SparsePolynomial::zero();
    if let Some((m, s)) = product(i, j) {
        poly.add_term(m, q(s));
    }
    for t in 0..j.len() {
        let mut i2 = vec![j[t]];
        i2.extend_from_slice(&i[1..]);
        let mut j2 = j.to_vec();
        j2[t] = i[0];
        if let Some((m, s)) = product(&i2, &j2) {
            poly.add_term(m, q(-s));
        }
    }
    poly
}

/// Scales so the first term has a positive coefficient.
fn normalize_sign(p: SparsePolynomial) -> SparsePolynomial {
    let negative = p.terms().next().is_some_and(|(_, c)| *c < Q::zero());
    if negative {
        -&p
    } else {
        p
    }
}

fn sets_of_size(k: usize) -> impl Iterator<Item = &'static IndexSet> {
    IndexSet::all().iter().filter(move |x| x.len() == k)
}

/// Exchange relations for |I| = p <= |J| = q, each distinguished element i_1 of I,
/// deduplicated up to sign. Empty for p > q, where the identity does not hold.
pub fn pluecker_relations(p: usize, qq: usize) -> Vec<Relation> {
    if p > qq || p == 0 || qq > 7 {
        return Vec::new();
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for iset in sets_of_size(p) {
        let els = iset.elements();
        for lead in 0..els.len() {
            let mut ii = vec![els[lead]];
            ii.extend(els.iter().enumerate().filter(|(n, _)| *n != lead).map(|(_, x)| *x));
            for jset in sets_of_size(qq) {
                let poly = normalize_sign(exchange_relation(&ii, &jset.elements()));
                if poly.is_zero() {
                    continue;
                }
                if seen.insert(poly.serialize()) {
                    out.push(Relation {
                        kind: RelationKind::Pluecker { p, q: qq },
                        poly,
                        affine: Q::zero(),
                    });
                }
            }
        }
    }
    out
}

pub fn all_pluecker_relations() -> Vec<Relation> {
    let pairs: Vec<(usize, usize)> = (1..=7).flat_map(|p| (p..=7).map(move |qq| (p, qq))).collect();
    pairs.into_par_iter().flat_map_iter(|(p, qq)| pluecker_relations(p, qq)).collect()
}

/// The three-term relation behind a v-generator: I = (i, X), J = (j, y, X).
pub fn triple_relation(i: i8, j: i8, y: i8, x: &[i8]) -> SparsePolynomial {
    let ii: Vec<i8> = std::iter::once(i).chain(x.iter().copied()).collect();
    let jj: Vec<i8> = [j, y].iter().chain(x.iter()).copied().collect();
    exchange_relation(&ii, &jj)
}

/// A_X - sign A_{complement_negate(X)} per pair of distinct sets, and A_X alone for the
/// self-paired sets whose sign is -1 (there the relation reads 2 A_X = 0).
pub fn jacobi_relations() -> Vec<Relation> {
    let mut out = Vec::new();
    for x in IndexSet::all() {
        let p = x.complement_negate();
        if p < *x {
            continue;
        }
        let mut poly = SparsePolynomial::var(*x);
        if p == *x {
            if jacobi_sign(*x) == 1 {
                continue;
            }
        } else {
            poly.add_term(ExponentVector::unit(p), q(-jacobi_sign(*x) as i64));
        }
        out.push(Relation {
            kind: RelationKind::Jacobi,
            poly,
            affine: Q::zero(),
        });
    }
    out
}

/// Unit relation sum_i c_i A_i = c_{-4}, and for each nonzero omega_k:
/// sum_X omega_X A_{-X} = value of the left side at the identity.
pub fn specific_relations(model: &OctonionModel) -> Vec<Relation> {
    let ident = minors_of(&QMatrix::identity(8));
    let mut out = Vec::new();
    let mut unit = SparsePolynomial::zero();
    for i in INDICES {
        let c = model.unit_coords.coord(i);
        if !c.is_zero() {
            unit.add_term(ExponentVector::unit(IndexSet::new(&[i]).unwrap()), c.clone());
        }
    }
    let affine = -model.unit_coords.coord(INDICES[0]).clone();
    out.push(Relation {
        kind: RelationKind::Unit,
        poly: unit,
        affine,
    });
    for k in 3..=7 {
        let w = invariant_tensor(model, k);
        if w.is_zero() {
            continue;
        }
        let mut poly = SparsePolynomial::zero();
        for (x, v) in &w.entries {
            let neg: Vec<i8> = x.iter().map(|i| -i).collect();
            let s = canonicalize(&neg).unwrap();
            poly.add_term(ExponentVector::unit(s.set), Q::from_integer(v * s.sign));
        }
        let affine = -substitute(&poly, &ident);
        out.push(Relation {
            kind: RelationKind::Specific(k),
            poly,
            affine,
        });
    }
    out
}

/// All relations of the generating set: exchange, Jacobi, unit and omega relations.
pub fn all_relations(model: &OctonionModel) -> Vec<Relation> {
    let mut out = all_pluecker_relations();
    out.extend(jacobi_relations());
    out.extend(specific_relations(model));
    out
}

fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

/// a_X = det of rows -4..-4+k-1 and columns X, indexed by set id.
pub fn minors_of(m: &QMatrix) -> Vec<Q> {
    IndexSet::all()
        .iter()
        .map(|x| {
            let cols: Vec<usize> = x.iter().map(pos).collect();
            let sub: Vec<Vec<Q>> = (0..cols.len()).map(|r| cols.iter().map(|&c| m.get(r, c).clone()).collect()).collect();
            det(sub)
        })
        .collect()
}

/// Minor with columns in the given order (sign from reordering; 0 on a repeated column).
pub fn minor_seq(minors: &[Q], seq: &[i8]) -> Q {
    match canonicalize(seq) {
        Ok(s) if s.sign != 0 => &minors[s.set.id()] * q(s.sign as i64),
        _ => Q::zero(),
    }
}

pub fn substitute(f: &SparsePolynomial, minors: &[Q]) -> Q {
    assert_eq!(minors.len(), NUM_SETS);
    let mut acc = Q::zero();
    for (m, c) in f.terms() {
        let mut t = c.clone();
        for (x, e) in m.iter() {
            let a = &minors[x.id()];
            if a.is_zero() {
                t = Q::zero();
                break;
            }
            for _ in 0..e {
                t *= a;
            }
        }
        acc += t;
    }
    acc
}

/// Seeded exact G2 group elements.
pub fn sample_g2_elements(alg: &G2Algebra, n: usize, seed: u64) -> Vec<QMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_g2_element(alg, &mut rng)).collect()
}

/// Rank of the k-minor functions (k = 1..7) evaluated on seeded G2 samples,
/// i.e. the dimension of the span of the a_X with |X| = k restricted to G2.
pub fn minor_span_ranks(alg: &G2Algebra, samples: usize, seed: u64) -> Vec<(usize, usize, usize)> {
    let mins: Vec<Vec<Q>> = sample_g2_elements(alg, samples, seed).iter().map(minors_of).collect();
    (1..=7)
        .map(|k| {
            let ids: Vec<usize> = IndexSet::all().iter().filter(|x| x.len() == k).map(|x| x.id()).collect();
            let rows: Vec<Vec<Q>> = mins.iter().map(|m| ids.iter().map(|&i| m[i].clone()).collect()).collect();
            (k, ids.len(), QMatrix::from_rows(&rows).rank())
        })
        .collect()
}

/// A g2 sample times exp of the first o8 root element F_{i,j} (i < j, i != -j) outside g2.
pub fn o8_control_element(alg: &G2Algebra, seed: u64) -> (String, QMatrix) {
    for (a, &i) in INDICES.iter().enumerate() {
        for &j in &INDICES[a + 1..] {
            if i == -j {
                continue;
            }
            let f = f_unit(i, j);
            if !alg.contains(&f) {
                let g = sample_g2_elements(alg, 1, seed).pop().unwrap();
                let e = sample_group_element(&[(f, q(1))]).expect("nilpotent");
                return (format!("g2 sample * exp(F[{i},{j}])"), &g * &e);
            }
        }
    }
    unreachable!("o8 is larger than g2")
}

#[derive(Clone, Debug)]
pub struct Certification {
    pub counts: Vec<(String, usize)>,
    /// (relation kind, relation index within the list, element index)
    pub failures: Vec<(String, usize, usize)>,
    pub control_violations: Vec<String>,
    pub control_label: String,
}

impl Certification {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && !self.control_violations.is_empty()
    }
}

pub fn certify(relations: &[Relation], elements: &[QMatrix], control: &(String, QMatrix)) -> Certification {
    let minors: Vec<Vec<Q>> = elements.par_iter().map(minors_of).collect();
    let failures: Vec<(String, usize, usize)> = relations
        .par_iter()
        .enumerate()
        .flat_map_iter(|(n, r)| {
            minors
                .iter()
                .enumerate()
                .filter(|(_, m)| !r.eval(m).is_zero())
                .map(move |(e, _)| (r.kind.to_string(), n, e))
                .collect::<Vec<_>>()
        })
        .collect();
    let cm = minors_of(&control.1);
    let control_violations = relations
        .iter()
        .filter(|r| matches!(r.kind, RelationKind::Specific(_) | RelationKind::Unit))
        .filter(|r| !r.eval(&cm).is_zero())
        .map(|r| r.kind.to_string())
        .collect();
    let mut counts: Vec<(String, usize)> = Vec::new();
    for r in relations {
        let label = match r.kind {
            RelationKind::Pluecker { .. } => "pluecker".to_string(),
            k => k.to_string(),
        };
        match counts.iter_mut().find(|(l, _)| *l == label) {
            Some(e) => e.1 += 1,
            None => counts.push((label, 1)),
        }
    }
    Certification {
        counts,
        failures,
        control_violations,
        control_label: control.0.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_g2::{build_split_octonions, derivation_algebra};

    fn s(v: &[i8]) -> IndexSet {
        IndexSet::new(v).unwrap()
    }

    #[test]
    fn triple_example() {
        let p = triple_relation(-4, 2, 3, &[]);
        let mut expect = SparsePolynomial::zero();
        expect.add_term(&ExponentVector::unit(s(&[-4])) + &ExponentVector::unit(s(&[2, 3])), q(1));
        expect.add_term(&ExponentVector::unit(s(&[2])) + &ExponentVector::unit(s(&[-4, 3])), q(-1));
        expect.add_term(&ExponentVector::unit(s(&[3])) + &ExponentVector::unit(s(&[-4, 2])), q(1));
        assert_eq!(p, expect);
    }

    #[test]
    fn identity_minors() {
        let m = minors_of(&QMatrix::identity(8));
        for x in IndexSet::all() {
            let lead: Vec<i8> = INDICES[..x.len()].to_vec();
            assert_eq!(m[x.id()] == q(1), x.elements() == lead, "{x}");
        }
        assert_eq!(minor_seq(&m, &[-3, -4]), q(-1));
        assert_eq!(minor_seq(&m, &[-4, -4]), q(0));
    }

    #[test]
    fn jacobi_count_and_example() {
        let j = jacobi_relations();
        assert_eq!(j.len(), 127);
        let mut first = SparsePolynomial::var(s(&[-4]));
        first.add_term(ExponentVector::unit(s(&[-4, -3, -2, -1, 1, 2, 3])), q(-1));
        assert_eq!(j[0].poly, first);
    }

    #[test]
    fn relations_vanish_on_samples() {
        let model = build_split_octonions().unwrap();
        let alg = derivation_algebra(&model).unwrap();
        let mut rels = jacobi_relations();
        rels.extend(specific_relations(&model));
        rels.extend(pluecker_relations(1, 2));
        rels.extend(pluecker_relations(2, 3));
        let els = sample_g2_elements(&alg, 3, 7);
        let ctl = o8_control_element(&alg, 7);
        let c = certify(&rels, &els, &ctl);
        assert!(c.failures.is_empty(), "{:?}", &c.failures[..c.failures.len().min(5)]);
        assert!(!c.control_violations.is_empty());
    }
}
