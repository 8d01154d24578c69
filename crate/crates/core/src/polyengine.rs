//! Sparse polynomials in the 254 variables A_X with exact rational coefficients,
//! constant-coefficient differential operators, and the pairing f(d/dA) g(A) at A = 0.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::indexsets::{IndexSet, NUM_SETS};
use crate::linalg::{fmt_q, q, QMatrix, Q};

#[derive(Debug, Error, Clone)]
pub enum PolyError {
    #[error("linearly dependent input: prefix of length {0} has a singular Gram matrix")]
    Dependent(usize),
    #[error("polynomial not in span; residual has {} terms", .0.len())]
    NotInSpan(SparsePolynomial),
}

/// Integer vector on the 254 index sets; only nonzero coordinates are stored, sorted by set id.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExponentVector {
    coords: Vec<(u8, i64)>,
}

impl ExponentVector {
    pub fn zero() -> ExponentVector {
        ExponentVector::default()
    }

    pub fn unit(x: IndexSet) -> ExponentVector {
        ExponentVector {
            coords: vec![(x.id() as u8, 1)],
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (IndexSet, i64)>) -> ExponentVector {
        let mut m: BTreeMap<u8, i64> = BTreeMap::new();
        for (x, c) in pairs {
            *m.entry(x.id() as u8).or_default() += c;
        }
        ExponentVector {
            coords: m.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }

    pub fn from_dense(d: &[i64]) -> ExponentVector {
        ExponentVector {
            coords: d
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(n, c)| (n as u8, *c))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<i64> {
        let mut d = vec![0; NUM_SETS];
        for &(n, c) in &self.coords {
            d[n as usize] = c;
        }
        d
    }

    pub fn get(&self, x: IndexSet) -> i64 {
        self.get_id(x.id())
    }

    pub fn get_id(&self, id: usize) -> i64 {
        match self.coords.binary_search_by_key(&(id as u8), |e| e.0) {
            Ok(p) => self.coords[p].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (IndexSet, i64)> + '_ {
        self.coords.iter().map(|&(n, c)| (IndexSet::from_id(n as usize), c))
    }

    pub fn raw(&self) -> &[(u8, i64)] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_nonneg(&self) -> bool {
        self.coords.iter().all(|e| e.1 >= 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.coords.iter().map(|e| e.1).sum()
    }

    /// Sum of coordinates over sets of the given sizes.
    pub fn grade_degree(&self, sizes: &[usize]) -> i64 {
        self.iter().filter(|(x, _)| sizes.contains(&x.len())).map(|(_, c)| c).sum()
    }

    pub fn combine(&self, other: &ExponentVector, k: i64) -> ExponentVector {
        let mut out = Vec::with_capacity(self.coords.len() + other.coords.len());
        let (mut a, mut b) = (0, 0);
        while a < self.coords.len() || b < other.coords.len() {
            let ka = self.coords.get(a).map(|e| e.0);
            let kb = other.coords.get(b).map(|e| e.0);
            match (ka, kb) {
                (Some(x), Some(y)) if x == y => {
                    let c = self.coords[a].1 + k * other.coords[b].1;
                    if c != 0 {
                        out.push((x, c));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(self.coords[a]);
                    a += 1;
                }
                (Some(_), None) => {
                    out.push(self.coords[a]);
                    a += 1;
                }
                _ => {
                    let c = k * other.coords[b].1;
                    if c != 0 {
                        out.push((other.coords[b].0, c));
                    }
                    b += 1;
                }
            }
        }
        ExponentVector { coords: out }
    }

    pub fn scale(&self, k: i64) -> ExponentVector {
        if k == 0 {
            return ExponentVector::zero();
        }
        ExponentVector {
            coords: self.coords.iter().map(|&(n, c)| (n, c * k)).collect(),
        }
    }

    /// Product of factorials of the coordinates (nonnegative vectors only).
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &(_, c) in &self.coords {
            acc *= factorial(c as u64);
        }
        acc
    }

    /// Whether self >= other coordinatewise.
    pub fn dominates(&self, other: &ExponentVector) -> bool {
        other.coords.iter().all(|&(n, c)| self.get_id(n as usize) >= c)
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;
    fn add(self, o: &ExponentVector) -> ExponentVector {
        self.combine(o, 1)
    }
}

impl Sub for &ExponentVector {
    type Output = ExponentVector;
    fn sub(self, o: &ExponentVector) -> ExponentVector {
        self.combine(o, -1)
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;
    fn neg(self) -> ExponentVector {
        self.scale(-1)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (x, c)) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}:{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn factorial(n: u64) -> BigInt {
    thread_local! {
        static MEMO: std::cell::RefCell<Vec<BigInt>> = std::cell::RefCell::new(vec![BigInt::one()]);
    }
    MEMO.with(|m| {
        let mut m = m.borrow_mut();
        while m.len() <= n as usize {
            let k = m.len();
            let next = &m[k - 1] * BigInt::from(k);
            m.push(next);
        }
        m[n as usize].clone()
    })
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct SparsePolynomial {
    terms: BTreeMap<ExponentVector, Q>,
}

/// A polynomial in the symbols d/dA_X.
pub type DiffOperator = SparsePolynomial;

impl SparsePolynomial {
    pub fn zero() -> SparsePolynomial {
        SparsePolynomial::default()
    }

    pub fn constant(c: Q) -> SparsePolynomial {
        SparsePolynomial::monomial(ExponentVector::zero(), c)
    }

    pub fn one() -> SparsePolynomial {
        SparsePolynomial::constant(Q::one())
    }

    pub fn monomial(m: ExponentVector, c: Q) -> SparsePolynomial {
        assert!(m.is_nonneg(), "negative exponent");
        let mut p = SparsePolynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(x: IndexSet) -> SparsePolynomial {
        SparsePolynomial::monomial(ExponentVector::unit(x), Q::one())
    }

    pub fn add_term(&mut self, m: ExponentVector, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &ExponentVector) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Q) -> SparsePolynomial {
        if s.is_zero() {
            return SparsePolynomial::zero();
        }
        SparsePolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> SparsePolynomial {
        let mut acc = SparsePolynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.contains_key(&ExponentVector::zero())
    }

    /// Canonical serialization: one line per term, `{exps: {[-4]:1}, coeff: "p/q"}`.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for (m, c) in &self.terms {
            let exps: Vec<String> = m.iter().map(|(x, e)| format!("{x}:{e}")).collect();
            s.push_str(&format!("{{exps: {{{}}}, coeff: \"{}\"}}\n", exps.join(", "), fmt_q(c)));
        }
        s
    }

    /// Variables that occur.
    pub fn support_sets(&self) -> Vec<IndexSet> {
        let mut v: Vec<IndexSet> = self.terms.keys().flat_map(|m| m.iter().map(|(x, _)| x)).collect();
        v.sort();
        v.dedup();
        v
    }
}

impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, o: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, o: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        self.scale(&-Q::one())
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, o: &SparsePolynomial) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1 + m2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Debug for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{}*A{}", fmt_q(c), m)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Falling factorial x (x-1) ... (x-m+1).
fn falling(x: i64, m: i64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 0..m {
        acc *= BigInt::from(x - k);
    }
    acc
}

/// Formal differentiation: op(d/dA) applied to f.
pub fn apply(op: &DiffOperator, f: &SparsePolynomial) -> SparsePolynomial {
    let mut out = SparsePolynomial::zero();
    for (m, c) in &op.terms {
        for (x, d) in &f.terms {
            if !x.dominates(m) {
                continue;
            }
            let mut w = BigInt::one();
            for (s, e) in m.iter() {
                w *= falling(x.get(s), e);
            }
            out.add_term(x - m, c * d * Q::from_integer(w));
        }
    }
    out
}

/// f(d/dA) g(A) at A = 0, i.e. sum over common monomials of f_m g_m m!.
pub fn pairing(f: &SparsePolynomial, g: &SparsePolynomial) -> Q {
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    let mut acc = Q::zero();
    for (m, c) in &small.terms {
        if let Some(d) = large.terms.get(m) {
            acc += c * d * Q::from_integer(m.factorial());
        }
    }
    acc
}

pub fn gram_matrix(vs: &[SparsePolynomial]) -> QMatrix {
    let n = vs.len();
    let mut g = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let p = pairing(&vs[i], &vs[j]);
            g.set(i, j, p.clone());
            g.set(j, i, p);
        }
    }
    g
}

/// Orthogonalization without normalization; output i = input i minus earlier outputs.
pub fn gram_schmidt(vectors: &[SparsePolynomial]) -> Result<Vec<SparsePolynomial>, PolyError> {
    let mut out: Vec<SparsePolynomial> = Vec::with_capacity(vectors.len());
    let mut norms: Vec<Q> = Vec::with_capacity(vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (u, nu) in out.iter().zip(&norms) {
            let c = pairing(v, u) / nu;
            if !c.is_zero() {
                w = &w - &u.scale(&c);
            }
        }
        let n = pairing(&w, &w);
        if n.is_zero() {
            return Err(PolyError::Dependent(i + 1));
        }
        out.push(w);
        norms.push(n);
    }
    Ok(out)
}

/// Coordinates in a fixed independent list, via the inverse Gram matrix.
#[derive(Clone, Debug)]
pub struct BasisExpander {
    pub basis: Vec<SparsePolynomial>,
    gram_inv: QMatrix,
}

impl BasisExpander {
    pub fn new(basis: Vec<SparsePolynomial>) -> Result<BasisExpander, PolyError> {
        let g = gram_matrix(&basis);
        let gram_inv = if basis.is_empty() {
            QMatrix::zeros(0, 0)
        } else {
            match g.inverse() {
                Some(inv) => inv,
                None => {
                    let k = (1..=basis.len())
                        .find(|&k| gram_matrix(&basis[..k]).inverse().is_none())
                        .unwrap_or(basis.len());
                    return Err(PolyError::Dependent(k));
                }
            }
        };
        Ok(BasisExpander { basis, gram_inv })
    }

    pub fn express(&self, f: &SparsePolynomial) -> Result<Vec<Q>, PolyError> {
        let rhs: Vec<Q> = self.basis.iter().map(|b| pairing(b, f)).collect();
        let c = if self.basis.is_empty() { Vec::new() } else { self.gram_inv.mul_vec(&rhs) };
        let mut resid = f.clone();
        for (ci, b) in c.iter().zip(&self.basis) {
            if !ci.is_zero() {
                resid = &resid - &b.scale(ci);
            }
        }
        if resid.is_zero() {
            Ok(c)
        } else {
            Err(PolyError::NotInSpan(resid))
        }
    }
}

pub fn express_in_basis(f: &SparsePolynomial, basis: &[SparsePolynomial]) -> Result<Vec<Q>, PolyError> {
    BasisExpander::new(basis.to_vec())?.express(f)
}

pub fn linear_combination(coeffs: &[Q], basis: &[SparsePolynomial]) -> SparsePolynomial {
    let mut out = SparsePolynomial::zero();
    for (c, b) in coeffs.iter().zip(basis) {
        out = &out + &b.scale(c);
    }
    out
}

/// Rank of a list of polynomials over the rationals (coefficient matrix rank).
pub fn rank(vs: &[SparsePolynomial]) -> usize {
    let mut monos: BTreeMap<&ExponentVector, usize> = BTreeMap::new();
    for v in vs {
        for m in v.terms.keys() {
            let n = monos.len();
            monos.entry(m).or_insert(n);
        }
    }
    let mut mat = QMatrix::zeros(vs.len(), monos.len());
    for (i, v) in vs.iter().enumerate() {
        for (m, c) in &v.terms {
            mat.set(i, monos[m], c.clone());
        }
    }
    mat.rank()
}

pub fn qint(n: i64) -> Q {
    q(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(els: &[i8]) -> SparsePolynomial {
        SparsePolynomial::var(IndexSet::new(els).unwrap())
    }

    #[test]
    fn apply_examples() {
        let x = a(&[-4]);
        let op = x.clone();
        assert_eq!(apply(&op, &x.pow(2)), x.scale(&q(2)));
        assert!(apply(&op, &SparsePolynomial::constant(q(5))).is_zero());
    }

    #[test]
    fn pairing_examples() {
        let x = a(&[-4]);
        assert_eq!(pairing(&x, &x), q(1));
        assert_eq!(pairing(&x.pow(2), &x.pow(2)), q(2));
        // literal differentiation agrees with the closed form
        let lit = apply(&x.pow(2), &x.pow(2));
        assert_eq!(lit, SparsePolynomial::constant(q(2)));
        assert_eq!(pairing(&x, &a(&[-3])), q(0));
    }

    #[test]
    fn gram_schmidt_examples() {
        let x = a(&[-4]);
        let y = a(&[-3]);
        let out = gram_schmidt(&[x.clone(), &x + &y]).unwrap();
        assert_eq!(out, vec![x.clone(), y.clone()]);
        let same = gram_schmidt(&[x.clone(), y.clone()]).unwrap();
        assert_eq!(same, vec![x.clone(), y.clone()]);
        assert!(matches!(gram_schmidt(&[x.clone(), x.scale(&q(2))]), Err(PolyError::Dependent(2))));
    }

    #[test]
    fn express_examples() {
        let basis = vec![a(&[-4]), &a(&[-4]) + &a(&[-3])];
        assert_eq!(express_in_basis(&basis[0], &basis).unwrap(), vec![q(1), q(0)]);
        assert_eq!(express_in_basis(&SparsePolynomial::zero(), &basis).unwrap(), vec![q(0), q(0)]);
        assert!(matches!(express_in_basis(&a(&[2]), &basis), Err(PolyError::NotInSpan(_))));
    }

    #[test]
    fn exponent_vector_arith() {
        let e = |v: &[i8]| ExponentVector::unit(IndexSet::new(v).unwrap());
        let x = &e(&[-4]) + &e(&[2]);
        let y = &x - &e(&[-4]);
        assert_eq!(y, e(&[2]));
        assert!((&y - &y).is_zero());
        assert_eq!(ExponentVector::from_dense(&x.to_dense()), x);
        assert!(x.dominates(&e(&[2])));
    }
}
