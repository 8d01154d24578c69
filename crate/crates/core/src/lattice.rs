//! Gelfand-Tsetlin lattices in Z^254: generators, integer bases, classes, diagrams.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Integer;
use thiserror::Error;

use crate::algebra_g2::{invariant_tensor, OctonionModel};
use crate::indexsets::{canonicalize, jacobi_sign, IndexSet, GT_ORDER, INDICES, NUM_SETS};
use crate::polyengine::ExponentVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("integer overflow in row reduction")]
    Overflow,
    #[error("selected basis does not generate the full lattice")]
    BasisMismatch,
    #[error("unbounded search: grade groups {0:?} are not conserved by the generators")]
    Unbounded(Vec<String>),
    #[error("search box too large ({0} points)")]
    SearchLimit(u128),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// v-generators only.
    Gl8,
    /// v and u.
    O8,
    /// v, u and d.
    G2,
}

impl Flavor {
    /// Grade groups whose total degree a diagram box fixes.
    pub fn grade_groups(&self) -> Vec<Vec<usize>> {
        match self {
            Flavor::Gl8 => (1..=7).map(|k| vec![k]).collect(),
            Flavor::O8 | Flavor::G2 => vec![vec![1, 7], vec![2, 6], vec![3, 5], vec![4]],
        }
    }
}

/// Which sign rule tags the u-generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum USign {
    /// The sign verified on group elements.
    Jacobi,
    /// The index-sum formula.
    IndexSum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// e_{iX} - e_{jX} - e_{iyX} + e_{jyX}; c1, c2, c3 are the canonicalization signs of the
    /// products A_{iX}A_{jyX}, A_{jX}A_{iyX}, A_{yX}A_{ijX}.
    V {
        i: i8,
        j: i8,
        y: i8,
        x: Vec<i8>,
        c: [i8; 3],
    },
    /// e_X - e_{complement_negate(X)}
    U { x: IndexSet },
    /// sum c_i e_i for the octonion unit
    Unit,
    /// sum_X omega_X e_{-X}
    Omega(usize),
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub kind: GenKind,
    pub vec: ExponentVector,
    /// Character value carried by the series: c1*c2 for v, the Jacobi sign for u, +1 for d.
    pub tag: i8,
}

impl Generator {
    pub fn label(&self) -> String {
        match &self.kind {
            GenKind::V { i, j, y, x, .. } => format!("v({i},{j},{y};{x:?})"),
            GenKind::U { x } => format!("u{x}"),
            GenKind::Unit => "d(unit)".into(),
            GenKind::Omega(k) => format!("d(omega{k})"),
        }
    }
}

fn seq_sign(seq: &[i8]) -> (IndexSet, i8) {
    let s = canonicalize(seq).expect("valid sequence");
    (s.set, s.sign)
}

fn with(head: &[i8], x: &[i8]) -> Vec<i8> {
    head.iter().chain(x.iter()).copied().collect()
}

fn e(seq: &[i8]) -> ExponentVector {
    ExponentVector::unit(seq_sign(seq).0)
}

fn comb(terms: &[(i64, &ExponentVector)]) -> ExponentVector {
    terms.iter().fold(ExponentVector::zero(), |acc, (k, v)| acc.combine(v, *k))
}

fn subsets(rest: &[i8]) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << rest.len()) {
        out.push((0..rest.len()).filter(|b| mask >> b & 1 == 1).map(|b| rest[b]).collect());
    }
    out.sort_by(|a: &Vec<i8>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// All v-generators for i < j < y in the chain order, X disjoint from {i, j, y}.
pub fn v_generators() -> Vec<Generator> {
    let mut out = Vec::new();
    for a in 0..8 {
        for b in a + 1..8 {
            for c in b + 1..8 {
                let (i, j, y) = (GT_ORDER[a], GT_ORDER[b], GT_ORDER[c]);
                let rest: Vec<i8> = INDICES.iter().copied().filter(|t| ![i, j, y].contains(t)).collect();
                for x in subsets(&rest) {
                    out.push(v_generator(i, j, y, &x));
                }
            }
        }
    }
    out
}

pub fn v_generator(i: i8, j: i8, y: i8, x: &[i8]) -> Generator {
    let (_, s_ix) = seq_sign(&with(&[i], x));
    let (_, s_jyx) = seq_sign(&with(&[j, y], x));
    let (_, s_jx) = seq_sign(&with(&[j], x));
    let (_, s_iyx) = seq_sign(&with(&[i, y], x));
    let (_, s_yx) = seq_sign(&with(&[y], x));
    let (_, s_ijx) = seq_sign(&with(&[i, j], x));
    let c = [s_ix * s_jyx, s_jx * s_iyx, s_yx * s_ijx];
    let vec = comb(&[
        (1, &e(&with(&[i], x))),
        (-1, &e(&with(&[j], x))),
        (-1, &e(&with(&[i, y], x))),
        (1, &e(&with(&[j, y], x))),
    ]);
    Generator {
        kind: GenKind::V {
            i,
            j,
            y,
            x: x.to_vec(),
            c,
        },
        vec,
        tag: c[0] * c[1],
    }
}

/// r = e_{yX} - e_{jX} - e_{iyX} + e_{ijX} for a v-generator.
pub fn r_of(g: &Generator) -> Option<ExponentVector> {
    match &g.kind {
        GenKind::V { i, j, y, x, .. } => Some(comb(&[
            (1, &e(&with(&[*y], x))),
            (-1, &e(&with(&[*j], x))),
            (-1, &e(&with(&[*i, *y], x))),
            (1, &e(&with(&[*i, *j], x))),
        ])),
        _ => None,
    }
}

/// One u per complement_negate pair of distinct sets, keeping the member that comes first in
/// enumeration order.
pub fn u_generators(rule: USign) -> Vec<Generator> {
    let mut out = Vec::new();
    for x in IndexSet::all() {
        let p = x.complement_negate();
        // the 16 self-paired sets give the zero vector
        if p <= *x {
            continue;
        }
        let tag = match rule {
            USign::Jacobi => jacobi_sign(*x),
            USign::IndexSum => crate::indexsets::index_sum_sign(*x),
        };
        out.push(Generator {
            kind: GenKind::U { x: *x },
            vec: comb(&[(1, &ExponentVector::unit(*x)), (-1, &ExponentVector::unit(p))]),
            tag,
        });
    }
    out
}

/// The octonion-unit vector and one vector per nonzero invariant tensor, k = 3..7.
pub fn d_generators(model: &OctonionModel) -> Vec<Generator> {
    let mut out = Vec::new();
    let mut unit = Vec::new();
    for i in INDICES {
        let c = model.unit_coords.coord(i);
        assert!(c.is_integer(), "unit coordinates are integral");
        let c: i64 = c.to_integer().try_into().unwrap();
        if c != 0 {
            unit.push((IndexSet::new(&[i]).unwrap(), c));
        }
    }
    out.push(Generator {
        kind: GenKind::Unit,
        vec: ExponentVector::from_pairs(unit),
        tag: 1,
    });
    for k in 3..=7 {
        let w = invariant_tensor(model, k);
        if w.is_zero() {
            continue;
        }
        out.push(Generator {
            kind: GenKind::Omega(k),
            vec: omega_vector(&w),
            tag: 1,
        });
    }
    out
}

/// sum_X omega_X e_{-X}, with the sign of sorting -X folded into the coefficient.
pub fn omega_vector(w: &crate::algebra_g2::InvariantTensor) -> ExponentVector {
    let mut pairs = Vec::new();
    for (x, v) in &w.entries {
        let neg: Vec<i8> = x.iter().map(|i| -i).collect();
        let (set, sign) = seq_sign(&neg);
        let v: i64 = v.try_into().expect("small tensor entry");
        pairs.push((set, v * sign as i64));
    }
    ExponentVector::from_pairs(pairs)
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

fn axpy(dst: &mut [i64], k: i64, src: &[i64]) -> Result<(), LatticeError> {
    if k == 0 {
        return Ok(());
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if *s != 0 {
            *d = s.checked_mul(k).and_then(|p| d.checked_add(p)).ok_or(LatticeError::Overflow)?;
        }
    }
    Ok(())
}

fn lin2(a: i64, x: &[i64], b: i64, y: &[i64]) -> Result<Vec<i64>, LatticeError> {
    x.iter()
        .zip(y)
        .map(|(p, q)| {
            let u = p.checked_mul(a).ok_or(LatticeError::Overflow)?;
            let v = q.checked_mul(b).ok_or(LatticeError::Overflow)?;
            u.checked_add(v).ok_or(LatticeError::Overflow)
        })
        .collect()
}

/// Incremental Hermite normal form over Z with optional tracking of combinations.
#[derive(Clone, Debug)]
pub struct Hnf {
    n: usize,
    track: usize,
    /// pivot column -> (row, combination of inserted vectors)
    rows: BTreeMap<usize, (Vec<i64>, Vec<i64>)>,
    inserted: usize,
}

impl Hnf {
    pub fn new(n: usize, track: usize) -> Hnf {
        Hnf {
            n,
            track,
            rows: BTreeMap::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a vector; true if the rank grew.
    pub fn insert(&mut self, v: &[i64]) -> Result<bool, LatticeError> {
        assert_eq!(v.len(), self.n);
        let mut x = v.to_vec();
        let mut cx = vec![0i64; self.track];
        if self.inserted < self.track {
            cx[self.inserted] = 1;
        }
        self.inserted += 1;
        let mut c = 0;
        while c < self.n {
            if x[c] == 0 {
                c += 1;
                continue;
            }
            let Some((prow, pc)) = self.rows.get(&c).cloned() else {
                if x[c] < 0 {
                    x.iter_mut().for_each(|t| *t = -*t);
                    cx.iter_mut().for_each(|t| *t = -*t);
                }
                self.rows.insert(c, (x, cx));
                return Ok(true);
            };
            let (p, q) = (prow[c], x[c]);
            if q % p == 0 {
                let k = q / p;
                axpy(&mut x, -k, &prow)?;
                axpy(&mut cx, -k, &pc)?;
            } else {
                let (g, a, b) = egcd(p, q);
                let new_row = lin2(a, &prow, b, &x)?;
                let new_c = lin2(a, &pc, b, &cx)?;
                let other = lin2(q / g, &prow, -(p / g), &x)?;
                let other_c = lin2(q / g, &pc, -(p / g), &cx)?;
                self.rows.insert(c, (new_row, new_c));
                x = other;
                cx = other_c;
            }
            c += 1;
        }
        Ok(false)
    }

    /// Reduces entries above each pivot into [0, pivot).
    pub fn full_reduce(&mut self) -> Result<(), LatticeError> {
        let cols: Vec<usize> = self.rows.keys().copied().collect();
        for (n, &c) in cols.iter().enumerate() {
            let (prow, pc) = self.rows[&c].clone();
            let p = prow[c];
            for &c2 in &cols[..n] {
                let row = self.rows.get_mut(&c2).unwrap();
                let k = Integer::div_floor(&row.0[c], &p);
                if k != 0 {
                    axpy(&mut row.0, -k, &prow)?;
                    axpy(&mut row.1, -k, &pc)?;
                }
            }
        }
        Ok(())
    }

    pub fn pivots(&self) -> Vec<(usize, i64)> {
        self.rows.iter().map(|(c, r)| (*c, r.0[*c])).collect()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.rows.values().map(|r| r.0.clone()).collect()
    }

    /// Canonical class representative and the combination subtracted to reach it.
    pub fn reduce(&self, v: &[i64]) -> Result<(Vec<i64>, Vec<i64>), LatticeError> {
        let mut x = v.to_vec();
        let mut used = vec![0i64; self.track];
        for (c, (row, rc)) in &self.rows {
            if x[*c] == 0 {
                continue;
            }
            let k = Integer::div_floor(&x[*c], &row[*c]);
            if k != 0 {
                axpy(&mut x, -k, row)?;
                axpy(&mut used, k, rc)?;
            }
        }
        Ok((x, used))
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool, LatticeError> {
        Ok(self.reduce(v)?.0.iter().all(|&t| t == 0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conservation {
    pub group: Vec<usize>,
    /// Generators with nonzero net degree on the group.
    pub violators: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct GtLattice {
    pub flavor: Flavor,
    pub gens_v: Vec<Generator>,
    pub gens_u: Vec<Generator>,
    pub gens_d: Vec<Generator>,
    /// Selected basis in block order v, u, d.
    pub basis: Vec<Generator>,
    /// r-vectors paired with the selected v's (same order, first k1 of the basis).
    pub r_basis: Vec<ExponentVector>,
    pub k1: usize,
    pub k2: usize,
    pub k3: usize,
    /// HNF of the full generator list.
    pub hnf: Hnf,
    /// HNF of the selected basis, tracking combinations of it.
    pub basis_hnf: Hnf,
    pub conservation: Vec<Conservation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtDiagram {
    pub gamma: ExponentVector,
    pub witness: ExponentVector,
}

impl GtLattice {
    pub fn build(flavor: Flavor, model: Option<&OctonionModel>, rule: USign) -> Result<GtLattice, LatticeError> {
        let gens_v = v_generators();
        let gens_u = if flavor == Flavor::Gl8 { Vec::new() } else { u_generators(rule) };
        let gens_d = match (flavor, model) {
            (Flavor::G2, Some(m)) => d_generators(m),
            (Flavor::G2, None) => panic!("g2 lattice needs the octonion model"),
            _ => Vec::new(),
        };
        GtLattice::from_generators(flavor, gens_v, gens_u, gens_d)
    }

    pub fn from_generators(
        flavor: Flavor,
        gens_v: Vec<Generator>,
        gens_u: Vec<Generator>,
        gens_d: Vec<Generator>,
    ) -> Result<GtLattice, LatticeError> {
        let mut hnf = Hnf::new(NUM_SETS, 0);
        let mut sel: [Vec<Generator>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (b, block) in [&gens_v, &gens_u, &gens_d].iter().enumerate() {
            for g in block.iter() {
                if hnf.insert(&g.vec.to_dense())? {
                    sel[b].push(g.clone());
                }
            }
        }
        hnf.full_reduce()?;
        let [sv, su, sd] = sel;
        let (k1, k2, k3) = (sv.len(), su.len(), sd.len());
        let basis: Vec<Generator> = sv.into_iter().chain(su).chain(sd).collect();
        let mut basis_hnf = Hnf::new(NUM_SETS, basis.len());
        for g in &basis {
            basis_hnf.insert(&g.vec.to_dense())?;
        }
        basis_hnf.full_reduce()?;
        if basis_hnf.rows() != hnf.rows() {
            return Err(LatticeError::BasisMismatch);
        }
        let r_basis = basis[..k1].iter().map(|g| r_of(g).unwrap()).collect();
        let mut conservation = Vec::new();
        for group in flavor.grade_groups() {
            let violators = gens_v
                .iter()
                .chain(&gens_u)
                .chain(&gens_d)
                .filter(|g| g.vec.grade_degree(&group) != 0)
                .map(|g| g.label())
                .collect();
            conservation.push(Conservation { group, violators });
        }
        Ok(GtLattice {
            flavor,
            gens_v,
            gens_u,
            gens_d,
            basis,
            r_basis,
            k1,
            k2,
            k3,
            hnf,
            basis_hnf,
            conservation,
        })
    }

    pub fn rank(&self) -> usize {
        self.hnf.rank()
    }

    pub fn all_generators(&self) -> impl Iterator<Item = &Generator> {
        self.gens_v.iter().chain(&self.gens_u).chain(&self.gens_d)
    }

    pub fn is_conserving(&self) -> bool {
        self.conservation.iter().all(|c| c.violators.is_empty())
    }

    pub fn non_conserved_groups(&self) -> Vec<String> {
        self.conservation
            .iter()
            .filter(|c| !c.violators.is_empty())
            .map(|c| format!("{:?}", c.group))
            .collect()
    }

    pub fn contains(&self, v: &ExponentVector) -> bool {
        self.hnf.contains(&v.to_dense()).expect("reduction overflow")
    }

    pub fn class_key(&self, v: &ExponentVector) -> ExponentVector {
        ExponentVector::from_dense(&self.hnf.reduce(&v.to_dense()).expect("reduction overflow").0)
    }

    pub fn same_class(&self, a: &ExponentVector, b: &ExponentVector) -> bool {
        self.contains(&(a - b))
    }

    /// Integer coordinates of a lattice vector in the selected basis.
    pub fn coords(&self, v: &ExponentVector) -> Option<Vec<i64>> {
        let (rest, used) = self.basis_hnf.reduce(&v.to_dense()).ok()?;
        if rest.iter().any(|&t| t != 0) {
            return None;
        }
        Some(used)
    }

    /// Torsion of Z^254 / B: pivots greater than one.
    pub fn torsion(&self) -> Vec<i64> {
        self.hnf.pivots().into_iter().map(|p| p.1).filter(|&p| p > 1).collect()
    }

    pub fn free_rank(&self) -> usize {
        NUM_SETS - self.rank()
    }

    /// Nonnegative vectors with the same group degrees as gamma.
    pub fn support_box(&self, gamma: &ExponentVector, limit: u128) -> Result<Vec<ExponentVector>, LatticeError> {
        let groups = self.flavor.grade_groups();
        let spec: Vec<(Vec<usize>, i64)> = groups.iter().map(|g| (g.clone(), gamma.grade_degree(g))).collect();
        box_vectors(&spec, limit)
    }

    /// Nonnegative vectors in the grade box of gamma. Conserved groups keep gamma's degree;
    /// a non-conserved group ranges over 0..=deg+slack, and the result is flagged as truncated.
    pub fn search_box(&self, gamma: &ExponentVector, slack: i64, limit: u128) -> Result<(Vec<ExponentVector>, bool), LatticeError> {
        let mut specs: Vec<Vec<(Vec<usize>, i64)>> = vec![Vec::new()];
        let mut truncated = false;
        for c in &self.conservation {
            let d = gamma.grade_degree(&c.group);
            let range: Vec<i64> = if c.violators.is_empty() {
                vec![d]
            } else {
                truncated = true;
                (0..=d.max(0) + slack).collect()
            };
            specs = specs
                .into_iter()
                .flat_map(|s| {
                    range.iter().map(move |&k| {
                        let mut s2 = s.clone();
                        s2.push((c.group.clone(), k));
                        s2
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for s in specs {
            out.extend(box_vectors(&s, limit)?);
            if out.len() as u128 > limit {
                return Err(LatticeError::SearchLimit(out.len() as u128));
            }
        }
        Ok((out, truncated))
    }

    /// Nonnegative members of gamma + B inside the search box, with their basis coordinates
    /// relative to gamma.
    pub fn class_members(&self, gamma: &ExponentVector, slack: i64) -> Result<(Vec<(ExponentVector, Vec<i64>)>, bool), LatticeError> {
        let (cands, truncated) = self.search_box(gamma, slack, 20_000_000)?;
        let key = self.class_key(gamma);
        let mut out = Vec::new();
        for x in cands {
            if self.class_key(&x) == key {
                let t = self.coords(&(&x - gamma)).ok_or(LatticeError::BasisMismatch)?;
                out.push((x, t));
            }
        }
        Ok((out, truncated))
    }

    /// A nonnegative member of gamma + B, searched over the box fixed by conserved degrees.
    pub fn is_diagram(&self, gamma: &ExponentVector) -> Result<Option<ExponentVector>, LatticeError> {
        if !self.is_conserving() {
            return Err(LatticeError::Unbounded(self.non_conserved_groups()));
        }
        if gamma.is_nonneg() {
            return Ok(Some(gamma.clone()));
        }
        let key = self.class_key(gamma);
        for x in self.support_box(gamma, 5_000_000)? {
            if self.class_key(&x) == key {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// Classes with a nonnegative witness supported as a highest weight (alpha, beta) requires:
    /// degree alpha on sets of size 1 (and 7 where sizes pair), beta on size 2 (and 6), zero elsewhere.
    pub fn enumerate_diagrams(&self, alpha: u32, beta: u32) -> Result<Vec<GtDiagram>, LatticeError> {
        let spec = highest_weight_box(self.flavor, alpha, beta);
        let mut classes: BTreeMap<ExponentVector, Vec<i64>> = BTreeMap::new();
        for x in box_vectors(&spec, 50_000_000)? {
            let key = self.class_key(&x);
            let d = x.to_dense();
            match classes.get_mut(&key) {
                Some(best) if *best <= d => {}
                Some(best) => *best = d,
                None => {
                    classes.insert(key, d);
                }
            }
        }
        let mut out: Vec<GtDiagram> = classes
            .into_values()
            .map(|d| {
                let w = ExponentVector::from_dense(&d);
                GtDiagram {
                    gamma: w.clone(),
                    witness: w,
                }
            })
            .collect();
        out.sort_by(|a, b| a.gamma.to_dense().cmp(&b.gamma.to_dense()));
        Ok(out)
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "flavor: {:?}", self.flavor);
        let _ = writeln!(s, "generators: v={} u={} d={}", self.gens_v.len(), self.gens_u.len(), self.gens_d.len());
        let _ = writeln!(s, "k1: {}\nk2: {}\nk3: {}", self.k1, self.k2, self.k3);
        let _ = writeln!(s, "rank: {}", self.rank());
        let _ = writeln!(s, "torsion: {:?}", self.torsion());
        let _ = writeln!(s, "hnf_equal: true");
        for c in &self.conservation {
            let _ = writeln!(s, "conserved {:?}: {}", c.group, if c.violators.is_empty() { "yes".to_string() } else { format!("no ({})", c.violators.join(" ")) });
        }
        let _ = writeln!(s, "[basis]");
        for (n, g) in self.basis.iter().enumerate() {
            let _ = writeln!(s, "{n} {} tag={} vec={}", g.label(), g.tag, g.vec);
        }
        let _ = writeln!(s, "[r_basis]");
        for (n, r) in self.r_basis.iter().enumerate() {
            let _ = writeln!(s, "{n} {r}");
        }
        let _ = writeln!(s, "[hnf_pivots]");
        for (c, p) in self.hnf.pivots() {
            let _ = writeln!(s, "{} {}", IndexSet::from_id(c), p);
        }
        let _ = writeln!(s, "[generators]");
        for g in self.all_generators() {
            let _ = writeln!(s, "{} tag={} vec={}", g.label(), g.tag, g.vec);
        }
        s
    }
}

/// Box spec for a highest weight (alpha, beta) in the grade groups of a flavor.
pub fn highest_weight_box(flavor: Flavor, alpha: u32, beta: u32) -> Vec<(Vec<usize>, i64)> {
    flavor
        .grade_groups()
        .into_iter()
        .map(|g| {
            let d = if g.contains(&1) {
                alpha as i64
            } else if g.contains(&2) {
                beta as i64
            } else {
                0
            };
            (g, d)
        })
        .collect()
}

fn binom(n: u128, k: u128) -> u128 {
    let mut r: u128 = 1;
    for t in 0..k {
        r = r.saturating_mul(n - t) / (t + 1);
    }
    r
}

/// Nonnegative vectors whose degree on each group of set sizes is prescribed.
pub fn box_vectors(spec: &[(Vec<usize>, i64)], limit: u128) -> Result<Vec<ExponentVector>, LatticeError> {
    if spec.iter().any(|(_, d)| *d < 0) {
        return Ok(Vec::new());
    }
    let mut total: u128 = 1;
    let mut parts: Vec<Vec<Vec<(IndexSet, i64)>>> = Vec::new();
    for (sizes, d) in spec {
        let sets: Vec<IndexSet> = IndexSet::all().iter().copied().filter(|x| sizes.contains(&x.len())).collect();
        total = total.saturating_mul(binom(sets.len() as u128 + *d as u128 - 1, *d as u128));
        if total > limit {
            return Err(LatticeError::SearchLimit(total));
        }
        parts.push(multisets(&sets, *d as usize));
    }
    let mut out = vec![ExponentVector::zero()];
    for p in parts {
        let mut next = Vec::with_capacity(out.len() * p.len());
        for base in &out {
            for m in &p {
                next.push(base + &ExponentVector::from_pairs(m.iter().copied()));
            }
        }
        out = next;
    }
    Ok(out)
}

fn multisets(sets: &[IndexSet], d: usize) -> Vec<Vec<(IndexSet, i64)>> {
    fn rec(sets: &[IndexSet], start: usize, left: usize, cur: &mut Vec<(IndexSet, i64)>, out: &mut Vec<Vec<(IndexSet, i64)>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for n in start..sets.len() {
            for k in (1..=left).rev() {
                cur.push((sets[n], k as i64));
                rec(sets, n + 1, left - k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(sets, 0, d, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i8]) -> IndexSet {
        IndexSet::new(v).unwrap()
    }

    #[test]
    fn v_and_r_examples() {
        let g = v_generator(-4, 2, 3, &[]);
        let expect = ExponentVector::from_pairs([(s(&[-4]), 1), (s(&[2]), -1), (s(&[-4, 3]), -1), (s(&[2, 3]), 1)]);
        assert_eq!(g.vec, expect);
        let r = r_of(&g).unwrap();
        let expect_r = ExponentVector::from_pairs([(s(&[3]), 1), (s(&[2]), -1), (s(&[-4, 3]), -1), (s(&[-4, 2]), 1)]);
        assert_eq!(r, expect_r);
        assert_eq!(v_generators().len(), 56 * 32);
        for g in v_generators() {
            let GenKind::V { x, .. } = &g.kind else { unreachable!() };
            let k = x.len();
            assert_eq!(g.vec.grade_degree(&[k + 1]), 0);
            assert_eq!(g.vec.grade_degree(&[k + 2]), 0);
            let r = r_of(&g).unwrap();
            assert_eq!(r.grade_degree(&[k + 1]), 0);
            assert_eq!(r.grade_degree(&[k + 2]), 0);
        }
    }

    #[test]
    fn u_examples() {
        let us = u_generators(USign::Jacobi);
        assert_eq!(us.len(), 119);
        let u = &us[0];
        assert_eq!(u.vec, ExponentVector::from_pairs([(s(&[-4]), 1), (s(&[-4, -3, -2, -1, 1, 2, 3]), -1)]));
        assert_eq!(u.tag, 1);
    }

    #[test]
    fn hnf_small() {
        let mut h = Hnf::new(3, 2);
        assert!(h.insert(&[2, 0, 1]).unwrap());
        assert!(h.insert(&[3, 1, 0]).unwrap());
        assert!(!h.insert(&[5, 1, 1]).unwrap());
        h.full_reduce().unwrap();
        assert!(h.contains(&[1, 1, -1]).unwrap());
        assert!(!h.contains(&[1, 0, 0]).unwrap());
        let (rest, used) = h.reduce(&[-1, -1, 1]).unwrap();
        assert!(rest.iter().all(|&t| t == 0));
        assert_eq!(used, vec![1, -1]);
    }

    #[test]
    fn box_counts() {
        let b = box_vectors(&[(vec![1], 2), (vec![2], 1)], 1 << 30).unwrap();
        assert_eq!(b.len(), 36 * 28);
        assert!(box_vectors(&[(vec![1], -1)], 10).unwrap().is_empty());
    }
}
