//! Gamma-series and A-GKZ series over a Gelfand-Tsetlin lattice, and the operator systems
//! they are meant to solve.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::indexsets::{jacobi_sign, IndexSet, GT_ORDER};
use crate::lattice::{r_of, Flavor, GenKind, Generator, GtLattice, Hnf, LatticeError};
use crate::linalg::Q;
use crate::polyengine::{apply, DiffOperator, ExponentVector, SparsePolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("outer sum does not terminate: r-combination {0:?} lies in the lattice")]
    NonTerminating(Vec<(usize, i64)>),
    #[error("no bounding functional vanishes on the lattice; outer sum not certified finite")]
    NoBound,
}

/// Weight of the shift index s in the outer sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// (-1)^s / s! * (t+1)(t+2)...(t+s) / s!, as printed.
    Printed,
    /// (-1)^s * binom(t+1, s), the solution of the three-term recursion.
    Binomial,
}

#[derive(Clone, Copy, Debug)]
pub struct SeriesOptions {
    pub convention: Convention,
    /// Extra degree allowed in non-conserved grade groups.
    pub slack: i64,
    /// Return a flagged partial sum instead of failing when finiteness cannot be certified.
    pub allow_truncation: bool,
    /// Bound on |s| when no bounding functional certifies the outer sum.
    pub max_shift: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            convention: Convention::Binomial,
            slack: 0,
            allow_truncation: true,
            max_shift: 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeriesOutput {
    pub poly: SparsePolynomial,
    /// The class was not certified finite, so the sum is a box-restricted partial sum.
    pub truncated: bool,
    /// Surviving terms with a nonzero d-coordinate.
    pub t3_terms: usize,
    /// Shift vectors s that contributed (sparse: index into the v-block, value).
    pub shifts: Vec<Vec<(usize, i64)>>,
    pub certificate: String,
}

/// Functionals mu_m(e_X) = binom(|X cap S_m|, 2) with S_m the first m indices of the chain
/// order. They vanish on every v-generator.
pub fn bounding_functionals() -> Vec<Vec<i64>> {
    (2..=8)
        .map(|m| {
            let prefix = &GT_ORDER[..m];
            IndexSet::all()
                .iter()
                .map(|x| {
                    let c = x.iter().filter(|i| prefix.contains(i)).count() as i64;
                    c * (c - 1) / 2
                })
                .collect()
        })
        .collect()
}

fn eval_fn(mu: &[i64], v: &ExponentVector) -> i64 {
    v.iter().map(|(x, c)| mu[x.id()] * c).sum()
}

fn r_mu_of(mu: &[Vec<i64>], r: &ExponentVector) -> Vec<i64> {
    mu.iter().map(|m| eval_fn(m, r)).collect()
}

pub struct SeriesEngine<'a> {
    pub lattice: &'a GtLattice,
    pub opts: SeriesOptions,
    mu: Vec<Vec<i64>>,
    /// mu values of each selected r
    r_mu: Vec<Vec<i64>>,
    /// Some functional fails to vanish on the u/d blocks.
    mu_broken: bool,
    /// r-vectors grouped by lattice class: (class key, member indices, mu values).
    groups: Vec<(ExponentVector, Vec<usize>, Vec<i64>)>,
    /// The lattice enlarged by all r-vectors; shift targets outside it are unreachable.
    ext: Hnf,
    /// Search boxes keyed by grade degrees, each split into lattice classes.
    boxes: Mutex<HashMap<Vec<i64>, Arc<BoxIndex>>>,
    /// Class key of s.r for every s >= 0 with |s| <= max_shift avoiding r's inside the lattice.
    shift_index: OnceLock<HashMap<ExponentVector, Vec<Vec<(usize, i64)>>>>,
}

struct BoxIndex {
    truncated: bool,
    by_class: HashMap<ExponentVector, Vec<ExponentVector>>,
}

fn binom_rising(t: i64, s: i64) -> Q {
    // (t+1)...(t+s)/s!
    let mut num = BigInt::one();
    for k in 1..=s {
        num *= BigInt::from(t + k);
    }
    Q::new(num, crate::polyengine::factorial(s as u64))
}

fn binom_falling(t: i64, s: i64) -> Q {
    // (t+1) t ... (t-s+2)/s!
    let mut num = BigInt::one();
    for k in 0..s {
        num *= BigInt::from(t + 1 - k);
    }
    Q::new(num, crate::polyengine::factorial(s as u64))
}

impl<'a> SeriesEngine<'a> {
    pub fn new(lattice: &'a GtLattice, opts: SeriesOptions) -> SeriesEngine<'a> {
        let mu = bounding_functionals();
        let r_mu = lattice
            .r_basis
            .iter()
            .map(|r| r_mu_of(&mu, r))
            .collect();
        let mu_broken = lattice
            .basis
            .iter()
            .any(|g| mu.iter().any(|m| eval_fn(m, &g.vec) != 0));
        let mut by_key: BTreeMap<ExponentVector, Vec<usize>> = BTreeMap::new();
        for (i, r) in lattice.r_basis.iter().enumerate() {
            by_key.entry(lattice.class_key(r)).or_default().push(i);
        }
        let groups = by_key
            .into_iter()
            .map(|(k, idx)| {
                let w = r_mu_of(&mu, &lattice.r_basis[idx[0]]);
                (k, idx, w)
            })
            .filter(|(_, _, w)| w.iter().any(|&v| v > 0))
            .collect();
        let mut ext = lattice.hnf.clone();
        for r in &lattice.r_basis {
            ext.insert(&r.to_dense()).expect("r-vectors have small entries");
        }
        SeriesEngine {
            lattice,
            opts,
            mu,
            r_mu,
            mu_broken,
            groups,
            ext,
            shift_index: OnceLock::new(),
            boxes: Mutex::new(HashMap::new()),
        }
    }

    fn box_index(&self, gamma: &ExponentVector) -> Result<Arc<BoxIndex>, SeriesError> {
        let key: Vec<i64> = self.lattice.conservation.iter().map(|c| gamma.grade_degree(&c.group)).collect();
        if let Some(b) = self.boxes.lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let (cands, truncated) = self.lattice.search_box(gamma, self.opts.slack, 20_000_000)?;
        let mut by_class: HashMap<ExponentVector, Vec<ExponentVector>> = HashMap::new();
        for x in cands {
            by_class.entry(self.lattice.class_key(&x)).or_default().push(x);
        }
        let b = Arc::new(BoxIndex { truncated, by_class });
        self.boxes.lock().unwrap().insert(key, b.clone());
        Ok(b)
    }

    /// Nonnegative class members of gamma in the search box with coordinates relative to gamma.
    pub fn class_members(&self, gamma: &ExponentVector) -> Result<(Vec<(ExponentVector, Vec<i64>)>, bool), SeriesError> {
        let b = self.box_index(gamma)?;
        let mut out = Vec::new();
        if let Some(xs) = b.by_class.get(&self.lattice.class_key(gamma)) {
            for x in xs {
                let t = self.lattice.coords(&(x - gamma)).ok_or(LatticeError::BasisMismatch)?;
                out.push((x.clone(), t));
            }
        }
        Ok((out, b.truncated))
    }

    fn sign_of(&self, t: &[i64]) -> i64 {
        let mut s = 1i64;
        for (g, &k) in self.lattice.basis.iter().zip(t) {
            if g.tag < 0 && k.rem_euclid(2) == 1 {
                s = -s;
            }
        }
        s
    }

    fn d_start(&self) -> usize {
        self.lattice.k1 + self.lattice.k2
    }

    /// Gamma-series: sum over nonnegative class members x of sign(t) / x!.
    pub fn gamma_series(&self, gamma: &ExponentVector) -> Result<SeriesOutput, SeriesError> {
        self.j_series(gamma, &[])
    }

    /// J-series: the Gamma-series with each term weighted by prod_i P(s_i, t_i).
    pub fn j_series(&self, gamma: &ExponentVector, s: &[(usize, i64)]) -> Result<SeriesOutput, SeriesError> {
        let (members, truncated) = self.class_members(gamma)?;
        if truncated && !self.opts.allow_truncation {
            return Err(LatticeError::Unbounded(self.lattice.non_conserved_groups()).into());
        }
        let mut poly = SparsePolynomial::zero();
        let mut t3_terms = 0;
        for (x, t) in members {
            let mut c = Q::from_integer(BigInt::from(self.sign_of(&t)));
            for &(i, si) in s {
                c *= match self.opts.convention {
                    Convention::Printed => binom_rising(t[i], si),
                    Convention::Binomial => binom_falling(t[i], si),
                };
            }
            if c.is_zero() {
                continue;
            }
            if t[self.d_start()..].iter().any(|&k| k != 0) {
                t3_terms += 1;
            }
            c /= Q::from_integer(x.factorial());
            poly.add_term(x, c);
        }
        Ok(SeriesOutput {
            poly,
            truncated,
            t3_terms,
            shifts: vec![s.to_vec()],
            certificate: String::new(),
        })
    }

    /// Shift vectors s with sum_i s_i mu(r_i) = budget exactly and s.r in the class `target`.
    /// The search runs over groups of r's sharing a class, consuming the first nonzero budget
    /// coordinate at each step, then spreads each group multiplicity over its members.
    fn exact_shifts(&self, target: &ExponentVector, budget: &[i64]) -> Vec<Vec<(usize, i64)>> {
        if budget.iter().any(|&b| b < 0) || !self.ext.contains(&target.to_dense()).unwrap_or(false) {
            return Vec::new();
        }
        let mut found: Vec<BTreeMap<usize, i64>> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut cur: BTreeMap<usize, i64> = BTreeMap::new();
        let mut memo = HashMap::new();
        let zero = self.lattice.class_key(&ExponentVector::zero());
        if !self.feasible(budget, &zero, target, &mut memo) {
            return Vec::new();
        }
        self.group_dfs(budget.to_vec(), zero, &mut cur, &mut seen, &mut memo, target, &mut found);
        let mut out = Vec::new();
        for m in found {
            let mut partial: Vec<Vec<(usize, i64)>> = vec![Vec::new()];
            for (g, k) in m {
                let members = &self.groups[g].1;
                let spreads = spreads(members, k);
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        spreads.iter().map(move |sp| {
                            let mut q = p.clone();
                            q.extend(sp.iter().copied());
                            q
                        })
                    })
                    .collect();
            }
            for mut p in partial {
                p.sort();
                out.push(p);
            }
        }
        out.sort();
        out
    }

    /// Whether some multiset of groups spends `rem` exactly and lands in `target`, starting
    /// from the partial class `key`. Memoized on (rem, key).
    fn feasible(
        &self,
        rem: &[i64],
        key: &ExponentVector,
        target: &ExponentVector,
        memo: &mut HashMap<(Vec<i64>, ExponentVector), bool>,
    ) -> bool {
        let Some(lead) = rem.iter().position(|&v| v != 0) else {
            return key == target;
        };
        let k = (rem.to_vec(), key.clone());
        if let Some(&v) = memo.get(&k) {
            return v;
        }
        let mut ok = false;
        for (_, idx, w) in &self.groups {
            if w[lead] > 0 && rem.iter().zip(w).all(|(a, b)| a >= b) {
                let next: Vec<i64> = rem.iter().zip(w).map(|(a, b)| a - b).collect();
                let nk = self.lattice.class_key(&(key + &self.lattice.r_basis[idx[0]]));
                if self.feasible(&next, &nk, target, memo) {
                    ok = true;
                    break;
                }
            }
        }
        memo.insert(k, ok);
        ok
    }

    #[allow(clippy::too_many_arguments)]
    fn group_dfs(
        &self,
        rem: Vec<i64>,
        key: ExponentVector,
        cur: &mut BTreeMap<usize, i64>,
        seen: &mut std::collections::HashSet<(Vec<i64>, Vec<(usize, i64)>)>,
        memo: &mut HashMap<(Vec<i64>, ExponentVector), bool>,
        target: &ExponentVector,
        found: &mut Vec<BTreeMap<usize, i64>>,
    ) {
        let state = (rem.clone(), cur.iter().map(|(a, b)| (*a, *b)).collect());
        if !seen.insert(state) {
            return;
        }
        let Some(lead) = rem.iter().position(|&v| v != 0) else {
            if key == *target {
                found.push(cur.clone());
            }
            return;
        };
        for (g, (_, idx, w)) in self.groups.iter().enumerate() {
            if w[lead] > 0 && rem.iter().zip(w).all(|(a, b)| a >= b) {
                let next: Vec<i64> = rem.iter().zip(w).map(|(a, b)| a - b).collect();
                let nk = self.lattice.class_key(&(&key + &self.lattice.r_basis[idx[0]]));
                if !self.feasible(&next, &nk, target, memo) {
                    continue;
                }
                *cur.entry(g).or_default() += 1;
                self.group_dfs(next, nk, cur, seen, memo, target, found);
                let e = cur.get_mut(&g).unwrap();
                *e -= 1;
                if *e == 0 {
                    cur.remove(&g);
                }
            }
        }
    }

    fn shift_index(&self) -> &HashMap<ExponentVector, Vec<Vec<(usize, i64)>>> {
        self.shift_index.get_or_init(|| {
            let usable: Vec<usize> =
                (0..self.lattice.r_basis.len()).filter(|&i| !self.lattice.contains(&self.lattice.r_basis[i])).collect();
            let mut all: Vec<Vec<(usize, i64)>> = Vec::new();
            let mut frontier: Vec<Vec<(usize, i64)>> = vec![Vec::new()];
            for _ in 0..self.opts.max_shift {
                let mut next = Vec::new();
                for s in &frontier {
                    let start = s.last().map(|&(i, _)| i).unwrap_or(0);
                    for &i in usable.iter().filter(|&&i| i >= start) {
                        let mut t = s.clone();
                        match t.last_mut() {
                            Some(last) if last.0 == i => last.1 += 1,
                            _ => t.push((i, 1)),
                        }
                        next.push(t);
                    }
                }
                all.extend(next.iter().cloned());
                frontier = next;
            }
            let keyed: Vec<(ExponentVector, Vec<(usize, i64)>)> = all
                .into_par_iter()
                .map(|s| {
                    let v = s.iter().fold(ExponentVector::zero(), |acc, &(i, k)| acc.combine(&self.lattice.r_basis[i], k));
                    (self.lattice.class_key(&v), s)
                })
                .collect();
            let mut map: HashMap<ExponentVector, Vec<Vec<(usize, i64)>>> = HashMap::new();
            for (k, s) in keyed {
                map.entry(k).or_default().push(s);
            }
            // shifts that return to the starting class only reparametrize the s = 0 term
            map.remove(&self.lattice.class_key(&ExponentVector::zero()));
            map
        })
    }

    /// Indices of r-vectors on which every bounding functional vanishes.
    pub fn unbounded_r(&self) -> Vec<usize> {
        (0..self.r_mu.len()).filter(|&i| self.r_mu[i].iter().all(|&v| v == 0)).collect()
    }

    /// Shift vectors to sum over, with a truncation flag and certificate lines.
    fn shift_plan(&self, gamma: &ExponentVector, cert: &mut String) -> Result<(Vec<Vec<(usize, i64)>>, bool), SeriesError> {
        let mut truncated = false;
        for i in self.unbounded_r() {
            if !self.opts.allow_truncation {
                return Err(SeriesError::NonTerminating(vec![(i, 1)]));
            }
            let in_b = self.lattice.contains(&self.lattice.r_basis[i]);
            let _ = writeln!(cert, "r[{i}] has zero bounding values (in lattice: {in_b}); s_{i} cut at 0");
            truncated = true;
        }
        if self.mu_broken {
            if self.lattice.r_basis.iter().any(|r| self.lattice.contains(r)) {
                let i = self.lattice.r_basis.iter().position(|r| self.lattice.contains(r)).unwrap();
                if !self.opts.allow_truncation {
                    return Err(SeriesError::NonTerminating(vec![(i, 1)]));
                }
                let _ = writeln!(cert, "r[{i}] lies in the lattice; the outer sum is infinite");
            } else if !self.opts.allow_truncation {
                return Err(SeriesError::NoBound);
            }
            let _ = writeln!(
                cert,
                "bounding functionals do not vanish on u/d generators; shifts cut at |s| <= {}",
                self.opts.max_shift
            );
            let b = self.box_index(gamma)?;
            let gk = self.lattice.class_key(gamma);
            let index = self.shift_index();
            let mut keys: Vec<&ExponentVector> = b.by_class.keys().collect();
            keys.sort();
            let mut plan = vec![Vec::new()];
            for key in keys {
                if *key == gk {
                    continue;
                }
                if let Some(ss) = index.get(&self.lattice.class_key(&(&gk - key))) {
                    plan.extend(ss.iter().cloned());
                }
            }
            plan.sort();
            plan.dedup();
            return Ok((plan, true));
        }
        // mu is a class function here, so mu(gamma - s.r) = mu(x) for every member x.
        let b = self.box_index(gamma)?;
        let gk = self.lattice.class_key(gamma);
        let mut plan = Vec::new();
        let mut targets: Vec<&ExponentVector> = b.by_class.keys().collect();
        targets.sort();
        for key in targets {
            let x0 = &b.by_class[key][0];
            let diff = gamma - x0;
            let budget: Vec<i64> = self.mu.iter().map(|m| eval_fn(m, &diff)).collect();
            let target = self.lattice.class_key(&(&gk - key));
            plan.extend(self.exact_shifts(&target, &budget));
        }
        plan.sort();
        plan.dedup();
        Ok((plan, truncated || b.truncated))
    }

    /// A-GKZ series: sum over s of (outer weight) * J^s at gamma - s.r.
    pub fn agkz_series(&self, gamma: &ExponentVector) -> Result<SeriesOutput, SeriesError> {
        let mut cert = String::new();
        let (plan, mut truncated) = self.shift_plan(gamma, &mut cert)?;
        let mut poly = SparsePolynomial::zero();
        let mut shifts = Vec::new();
        let mut t3_terms = 0;
        for s in plan {
            let mut g = gamma.clone();
            let mut outer = Q::one();
            for &(i, k) in &s {
                g = g.combine(&self.lattice.r_basis[i], -k);
                if k % 2 == 1 {
                    outer = -outer;
                }
                if self.opts.convention == Convention::Printed {
                    outer /= Q::from_integer(crate::polyengine::factorial(k as u64));
                }
            }
            let j = self.j_series(&g, &s)?;
            truncated |= j.truncated;
            if j.poly.is_zero() {
                continue;
            }
            t3_terms += j.t3_terms;
            poly = &poly + &j.poly.scale(&outer);
            shifts.push(s);
        }
        let _ = writeln!(cert, "shift vectors contributing: {}", shifts.len());
        Ok(SeriesOutput {
            poly,
            truncated,
            t3_terms,
            shifts,
            certificate: cert,
        })
    }
}

/// All ways to write k as an ordered-by-index multiset over `members`.
fn spreads(members: &[usize], k: i64) -> Vec<Vec<(usize, i64)>> {
    if members.len() == 1 {
        return vec![vec![(members[0], k)]];
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in spreads(&members[1..], k - first) {
            if first > 0 {
                rest.insert(0, (members[0], first));
            }
            out.push(rest);
        }
    }
    out
}

/// Which operator system to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum System {
    /// Box operators c1 D^{v+} - c2 D^{v-}, Jacobi, unit and omega operators.
    Gkz,
    /// As Gkz with the v-operators extended by + c3 D^{r+}.
    Agkz,
}

fn mono(v: &[&ExponentVector]) -> ExponentVector {
    v.iter().fold(ExponentVector::zero(), |a, b| &a + b)
}

fn e_of(seq: &[i8]) -> ExponentVector {
    ExponentVector::unit(crate::indexsets::canonicalize(seq).unwrap().set)
}

/// Differential operator attached to a v-generator.
pub fn v_operator(g: &Generator, system: System) -> DiffOperator {
    let GenKind::V { i, j, y, x, c } = &g.kind else { panic!("not a v-generator") };
    let w = |h: &[i8]| e_of(&h.iter().chain(x.iter()).copied().collect::<Vec<_>>());
    let mut op = SparsePolynomial::zero();
    op.add_term(mono(&[&w(&[*i]), &w(&[*j, *y])]), Q::from_integer(c[0].into()));
    op.add_term(mono(&[&w(&[*j]), &w(&[*i, *y])]), -Q::from_integer(c[1].into()));
    if system == System::Agkz {
        op.add_term(mono(&[&w(&[*y]), &w(&[*i, *j])]), Q::from_integer(c[2].into()));
    }
    op
}

/// Operators for a lattice: one per v-generator, and for the larger flavors one per
/// complement pair (including the self-paired sets), the unit and each omega.
pub fn operators(lattice: &GtLattice, system: System) -> Vec<(String, DiffOperator)> {
    let mut out = Vec::new();
    for g in &lattice.gens_v {
        out.push((g.label(), v_operator(g, system)));
    }
    if lattice.flavor != Flavor::Gl8 {
        for x in IndexSet::all() {
            let p = x.complement_negate();
            if p < *x {
                continue;
            }
            let mut op = SparsePolynomial::zero();
            op.add_term(ExponentVector::unit(*x), Q::one());
            op.add_term(ExponentVector::unit(p), -Q::from_integer(jacobi_sign(*x).into()));
            if !op.is_zero() {
                out.push((format!("jacobi{x}"), op));
            }
        }
    }
    for g in &lattice.gens_d {
        let mut op = SparsePolynomial::zero();
        for (x, c) in g.vec.iter() {
            op.add_term(ExponentVector::unit(x), Q::from_integer(c.into()));
        }
        out.push((g.label(), op));
    }
    out
}

/// Labels of the operators that do not annihilate f.
pub fn residual_failures(f: &SparsePolynomial, ops: &[(String, DiffOperator)]) -> Vec<String> {
    ops.iter().filter(|(_, op)| !apply(op, f).is_zero()).map(|(l, _)| l.clone()).collect()
}

/// d/dA_X of f.
pub fn differentiate(f: &SparsePolynomial, x: IndexSet) -> SparsePolynomial {
    apply(&SparsePolynomial::var(x), f)
}

/// The u/d part w of each term's lattice coordinates, with its sign, for a series of the
/// larger flavor. Used to rebuild the series from gl8-flavor pieces.
pub fn ud_decomposition(
    engine: &SeriesEngine,
    gamma: &ExponentVector,
) -> Result<BTreeMap<ExponentVector, i64>, SeriesError> {
    let lat = engine.lattice;
    let (members, _) = engine.class_members(gamma)?;
    let mut out = BTreeMap::new();
    for (_, t) in members {
        let mut w = ExponentVector::zero();
        let mut sign = 1i64;
        for (n, g) in lat.basis.iter().enumerate().skip(lat.k1) {
            w = w.combine(&g.vec, t[n]);
            if g.tag < 0 && t[n].rem_euclid(2) == 1 {
                sign = -sign;
            }
        }
        out.insert(w, sign);
    }
    Ok(out)
}

/// r paired with each selected v, recomputed from construction indices.
pub fn r_vectors(lattice: &GtLattice) -> Vec<ExponentVector> {
    lattice.basis[..lattice.k1].iter().map(|g| r_of(g).unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{v_generators, USign};

    #[test]
    fn functionals_vanish_on_v() {
        let mu = bounding_functionals();
        for g in v_generators() {
            for m in &mu {
                assert_eq!(eval_fn(m, &g.vec), 0, "{}", g.label());
            }
        }
    }

    #[test]
    fn pochhammer_conventions_agree_below_two() {
        for t in -3..4 {
            for s in 0..2 {
                assert_eq!(binom_rising(t, s), binom_falling(t, s));
            }
            assert_eq!(binom_rising(-1, 2), Q::zero());
            assert_eq!(binom_falling(-1, 2), Q::zero());
            assert_eq!(binom_falling(0, 2), Q::zero());
        }
    }

    #[test]
    fn gl8_gamma_series_small() {
        let lat = GtLattice::build(Flavor::Gl8, None, USign::Jacobi).unwrap();
        let eng = SeriesEngine::new(&lat, SeriesOptions::default());
        let x = IndexSet::new(&[-4]).unwrap();
        let f = eng.gamma_series(&ExponentVector::unit(x)).unwrap();
        assert!(!f.truncated);
        assert_eq!(f.poly, SparsePolynomial::var(x));
    }
}
