//! The g2 action on polynomials in the A_X, irreducible representations assembled from
//! A-GKZ basis solutions, Casimir matrices, maximization and the Gelfand-Tsetlin basis.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra_g2::{
    build_split_octonions, casimir_word, derivation_algebra, f_unit, AlgebraError, CasimirKind, G2Algebra,
    Generator as Word, LieMatrix, OctonionModel,
};
use crate::indexsets::{canonicalize, pos, IndexSet, INDICES};
use crate::lattice::{Flavor, GtDiagram, GtLattice, LatticeError, USign};
use crate::linalg::{fmt_q, q, QMatrix, Q};
use crate::polyengine::{gram_matrix, gram_schmidt, pairing, BasisExpander, DiffOperator, ExponentVector, PolyError, SparsePolynomial};
use crate::series::{operators, residual_failures, SeriesEngine, SeriesError, SeriesOptions, System};

#[derive(Debug, Error)]
pub enum RepError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("matrix is not in the g2 span")]
    NotInG2,
    #[error("{0}")]
    DimensionMismatch(Box<DimensionReport>),
    #[error("image of basis vector {index} under {generator} leaves the span")]
    ImageOutsideSpan { generator: String, index: usize },
    #[error("highest vector check failed: {0}")]
    HighestVector(String),
    #[error("basis vector {0} is not a weight vector")]
    NotWeightVector(usize),
    #[error("maximal tensor of {0} is not a single wedge")]
    NotDecomposable(IndexSet),
    #[error("integer overflow in the literal contraction")]
    Overflow,
}

// ---------------------------------------------------------------- action

/// Image of A_X under E_{i,j}: the set with j replaced by i and the sorting sign.
fn unit_image(i: i8, j: i8, x: IndexSet) -> Option<(IndexSet, i8)> {
    static T: OnceLock<Vec<Option<(IndexSet, i8)>>> = OnceLock::new();
    let table = T.get_or_init(|| {
        let mut t = Vec::with_capacity(64 * 254);
        for a in INDICES {
            for b in INDICES {
                for x in IndexSet::all() {
                    t.push(if !x.contains(b) || (a != b && x.contains(a)) {
                        None
                    } else {
                        let seq: Vec<i8> = x.iter().map(|e| if e == b { a } else { e }).collect();
                        let s = canonicalize(&seq).expect("same size");
                        Some((s.set, s.sign))
                    });
                }
            }
        }
        t
    });
    table[(pos(i) * 8 + pos(j)) * 254 + x.id()]
}

/// E_{i,j} acting by substitution on variables, extended as a derivation.
pub fn act_matrix_unit(i: i8, j: i8, f: &SparsePolynomial) -> SparsePolynomial {
    let mut out = SparsePolynomial::zero();
    for (m, c) in f.terms() {
        for (x, e) in m.iter() {
            if let Some((y, s)) = unit_image(i, j, x) {
                let mono = m.combine(&ExponentVector::unit(x), -1).combine(&ExponentVector::unit(y), 1);
                out.add_term(mono, c * Q::from_integer(BigInt::from(e * s as i64)));
            }
        }
    }
    out
}

/// Any 8x8 matrix Z = sum z_ij E_ij acting through [`act_matrix_unit`].
pub fn act_matrix(z: &LieMatrix, f: &SparsePolynomial) -> SparsePolynomial {
    let entries: Vec<(i8, i8, Q)> = INDICES
        .iter()
        .flat_map(|&i| INDICES.iter().map(move |&j| (i, j)))
        .filter_map(|(i, j)| {
            let v = z.get(pos(i), pos(j));
            (!v.is_zero()).then(|| (i, j, v.clone()))
        })
        .collect();
    let mut out = SparsePolynomial::zero();
    for (m, c) in f.terms() {
        for (x, e) in m.iter() {
            let base = m.combine(&ExponentVector::unit(x), -1);
            for (i, j, z) in &entries {
                if let Some((y, s)) = unit_image(*i, *j, x) {
                    out.add_term(base.combine(&ExponentVector::unit(y), 1), c * z * Q::from_integer(BigInt::from(e * s as i64)));
                }
            }
        }
    }
    out
}

/// Action of a g2 element; anything outside the g2 span is rejected.
pub fn act_g2(alg: &G2Algebra, z: &LieMatrix, f: &SparsePolynomial) -> Result<SparsePolynomial, RepError> {
    if !alg.contains(z) {
        return Err(RepError::NotInG2);
    }
    Ok(act_matrix(z, f))
}

/// Weight (a, b) of f under the two coroots, if f is a weight vector.
pub fn weight_of(alg: &G2Algebra, f: &SparsePolynomial) -> Option<(Q, Q)> {
    let mut w = Vec::new();
    for h in &alg.coroots {
        let hf = act_matrix(h, f);
        let (m, c) = f.terms().next()?;
        let lam = hf.coeff(m) / c;
        if &hf - &f.scale(&lam) != SparsePolynomial::zero() {
            return None;
        }
        w.push(lam);
    }
    Some((w[0].clone(), w[1].clone()))
}

// ---------------------------------------------------------------- highest vector

/// (A_{-4} + A_{c(-4)})^alpha (A_{-4,-3} + A_{c(-4,-3)})^beta, with c the complement of the
/// negated set.
pub fn highest_vector(alpha: u32, beta: u32) -> SparsePolynomial {
    let x1 = IndexSet::new(&[-4]).unwrap();
    let x2 = IndexSet::new(&[-4, -3]).unwrap();
    let f1 = &SparsePolynomial::var(x1) + &SparsePolynomial::var(x1.complement_negate());
    let f2 = &SparsePolynomial::var(x2) + &SparsePolynomial::var(x2.complement_negate());
    &f1.pow(alpha) * &f2.pow(beta)
}

#[derive(Clone, Debug)]
pub struct HighestVectorReport {
    pub alpha: u32,
    pub beta: u32,
    pub terms: usize,
    /// Positive root vectors (by weight) that do not annihilate the vector.
    pub not_annihilated: Vec<(i64, i64)>,
    pub weight: Option<(Q, Q)>,
    /// Operators of the A-GKZ system with nonzero residual.
    pub residual_failures: Vec<String>,
}

impl HighestVectorReport {
    pub fn passed(&self) -> bool {
        self.not_annihilated.is_empty()
            && self.weight == Some((q(self.alpha as i64), q(self.beta as i64)))
            && self.residual_failures.is_empty()
    }
}

pub fn check_highest_vector(ctx: &G2Context, alpha: u32, beta: u32) -> HighestVectorReport {
    let f = highest_vector(alpha, beta);
    let not_annihilated = ctx
        .alg
        .positive_roots()
        .filter(|r| !act_matrix(&r.vector, &f).is_zero())
        .map(|r| r.weight)
        .collect();
    HighestVectorReport {
        alpha,
        beta,
        terms: f.len(),
        not_annihilated,
        weight: weight_of(&ctx.alg, &f),
        residual_failures: residual_failures(&f, &ctx.ops_agkz),
    }
}

// ---------------------------------------------------------------- root-data oracles

/// Simple roots alpha_1 (short) and alpha_2 (long): Gram matrix in root coordinates.
const GRAM: [[i64; 2]; 2] = [[2, -3], [-3, 6]];
/// Positive roots m alpha_1 + n alpha_2.
pub const POSITIVE_ROOTS: [(i64, i64); 6] = [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)];

fn ip(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.0 * GRAM[0][0] + a.0 * b.1 * GRAM[0][1] + a.1 * b.0 * GRAM[1][0] + a.1 * b.1 * GRAM[1][1]
}

/// Root coordinates of a omega_1 + b omega_2 (omega_1 = 2a1 + a2, omega_2 = 3a1 + 2a2).
pub fn weight_to_roots(a: i64, b: i64) -> (i64, i64) {
    (2 * a + 3 * b, a + 2 * b)
}

/// Fundamental-weight coordinates of m alpha_1 + n alpha_2.
pub fn roots_to_weight(m: i64, n: i64) -> (i64, i64) {
    let v = (m, n);
    (ip(v, (1, 0)) * 2 / ip((1, 0), (1, 0)), ip(v, (0, 1)) * 2 / ip((0, 1), (0, 1)))
}

/// Weyl dimension formula over the six positive roots.
pub fn weyl_dimension(a: u32, b: u32) -> u64 {
    let lam = weight_to_roots(a as i64, b as i64);
    let rho = (5, 3);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for r in POSITIVE_ROOTS {
        num *= ip((lam.0 + rho.0, lam.1 + rho.1), r);
        den *= ip(rho, r);
    }
    (num / den).to_u64().expect("small")
}

/// Freudenthal multiplicities for a rank-2 root system embedded in the g2 root coordinates.
fn freudenthal(simple: [(i64, i64); 2], positive: &[(i64, i64)], rho: (i64, i64), lam: (i64, i64)) -> BTreeMap<(i64, i64), u64> {
    let norm = |v: (i64, i64)| ip(v, v);
    let top = norm((lam.0 + rho.0, lam.1 + rho.1));
    // depth bound: the lowest weight is at most twice the height of lam in either direction
    let bound = 2 * (lam.0.abs() + lam.1.abs()) + 2;
    let mut mult: HashMap<(i64, i64), i64> = HashMap::new();
    let mut order: Vec<(i64, i64)> = Vec::new();
    for depth in 0..=2 * bound {
        for n1 in 0..=depth {
            let n2 = depth - n1;
            if n1 > bound || n2 > bound {
                continue;
            }
            let mu = (lam.0 - n1 * simple[0].0 - n2 * simple[1].0, lam.1 - n1 * simple[0].1 - n2 * simple[1].1);
            if depth == 0 {
                mult.insert(mu, 1);
                order.push(mu);
                continue;
            }
            let mut acc = 0i64;
            for &r in positive {
                let mut k = 1;
                loop {
                    let w = (mu.0 + k * r.0, mu.1 + k * r.1);
                    match mult.get(&w) {
                        Some(&m) if m > 0 => acc += 2 * m * ip(w, r),
                        _ => {
                            if !is_above(w, lam, simple) {
                                break;
                            }
                        }
                    }
                    k += 1;
                }
            }
            let den = top - norm((mu.0 + rho.0, mu.1 + rho.1));
            let m = if den == 0 {
                assert_eq!(acc, 0, "Freudenthal denominator vanished");
                0
            } else {
                assert_eq!(acc % den, 0, "Freudenthal quotient not integral");
                acc / den
            };
            if m > 0 {
                mult.insert(mu, m);
                order.push(mu);
            }
        }
    }
    order.into_iter().map(|w| (w, mult[&w] as u64)).collect()
}

fn is_above(w: (i64, i64), lam: (i64, i64), simple: [(i64, i64); 2]) -> bool {
    // lam - w as a nonnegative integer combination of the simple roots
    let d = (lam.0 - w.0, lam.1 - w.1);
    let det = simple[0].0 * simple[1].1 - simple[0].1 * simple[1].0;
    let c0 = d.0 * simple[1].1 - d.1 * simple[1].0;
    let c1 = simple[0].0 * d.1 - simple[0].1 * d.0;
    c0 * det.signum() >= 0 && c1 * det.signum() >= 0
}

/// Weight multiset of V(a omega_1 + b omega_2), keyed by fundamental-weight coordinates.
pub fn weight_multiset(a: u32, b: u32) -> BTreeMap<(i64, i64), u64> {
    let lam = weight_to_roots(a as i64, b as i64);
    freudenthal([(1, 0), (0, 1)], &POSITIVE_ROOTS, (5, 3), lam)
        .into_iter()
        .map(|((m, n), k)| (roots_to_weight(m, n), k))
        .collect()
}

/// Long simple roots of the sl3 inside g2, and its positive roots.
const SL3_SIMPLE: [(i64, i64); 2] = [(0, 1), (3, 1)];
const SL3_POSITIVE: [(i64, i64); 3] = [(0, 1), (3, 1), (3, 2)];
const SL3_RHO: (i64, i64) = (3, 2);

/// Dimensions of the sl3 constituents of V(a, b), by peeling characters.
pub fn sl3_branching(a: u32, b: u32) -> Vec<u64> {
    let lam = weight_to_roots(a as i64, b as i64);
    let mut rest: BTreeMap<(i64, i64), i64> = freudenthal([(1, 0), (0, 1)], &POSITIVE_ROOTS, (5, 3), lam)
        .into_iter()
        .map(|(w, k)| (w, k as i64))
        .collect();
    let mut dims = Vec::new();
    while let Some(&top) = rest
        .iter()
        .filter(|(_, &k)| k > 0)
        .map(|(w, _)| w)
        .max_by_key(|w| (ip(**w, SL3_RHO), **w))
    {
        let sub = freudenthal(SL3_SIMPLE, &SL3_POSITIVE, SL3_RHO, top);
        let mut d = 0;
        for (w, k) in sub {
            *rest.entry(w).or_insert(0) -= k as i64;
            d += k;
        }
        dims.push(d);
    }
    assert!(rest.values().all(|&k| k == 0), "sl3 branching left a remainder");
    dims.sort_unstable_by(|x, y| y.cmp(x));
    dims
}

/// <lambda, lambda + 2 rho> in the form with (alpha_1, alpha_1) = 2.
pub fn casimir_oracle(a: u32, b: u32) -> i64 {
    let l = weight_to_roots(a as i64, b as i64);
    ip(l, (l.0 + 10, l.1 + 6))
}

// ---------------------------------------------------------------- context

/// The g2 data every build needs: octonions, the algebra, its lattice and operator systems.
pub struct G2Context {
    pub model: OctonionModel,
    pub alg: G2Algebra,
    pub lattice: GtLattice,
    pub ops_agkz: Vec<(String, DiffOperator)>,
    pub ops_gkz: Vec<(String, DiffOperator)>,
}

impl G2Context {
    pub fn new() -> Result<G2Context, RepError> {
        let model = build_split_octonions()?;
        let alg = derivation_algebra(&model)?;
        let lattice = GtLattice::build(Flavor::G2, Some(&model), USign::Jacobi)?;
        let ops_agkz = operators(&lattice, System::Agkz);
        let ops_gkz = operators(&lattice, System::Gkz);
        Ok(G2Context { model, alg, lattice, ops_agkz, ops_gkz })
    }

    /// Named g2 elements used for matrices: Cartan, root vectors, and the D_{i,j}.
    pub fn named_elements(&self) -> Vec<(String, LieMatrix)> {
        let mut out = vec![
            ("H1".to_string(), self.alg.cartan[0].clone()),
            ("H2".to_string(), self.alg.cartan[1].clone()),
        ];
        for r in &self.alg.roots {
            out.push((format!("X{:?}", r.weight), r.vector.clone()));
        }
        out
    }
}

// ---------------------------------------------------------------- spaces

/// A finite list of independent polynomials with coordinates through the pairing.
#[derive(Clone, Debug)]
pub struct RepSpace {
    pub basis: Vec<SparsePolynomial>,
    expander: BasisExpander,
}

impl RepSpace {
    pub fn new(basis: Vec<SparsePolynomial>) -> Result<RepSpace, RepError> {
        let expander = BasisExpander::new(basis.clone())?;
        Ok(RepSpace { basis, expander })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, f: &SparsePolynomial) -> Result<Vec<Q>, PolyError> {
        self.expander.express(f)
    }

    pub fn contains(&self, f: &SparsePolynomial) -> bool {
        self.coords(f).is_ok()
    }

    /// Matrix of a linear map on the space; column j holds the image of basis vector j.
    pub fn matrix_of(&self, label: &str, map: impl Fn(&SparsePolynomial) -> SparsePolynomial + Sync) -> Result<QMatrix, RepError> {
        let cols: Vec<Result<Vec<Q>, RepError>> = self
            .basis
            .par_iter()
            .enumerate()
            .map(|(j, b)| {
                self.coords(&map(b)).map_err(|_| RepError::ImageOutsideSpan { generator: label.to_string(), index: j })
            })
            .collect();
        let n = self.dim();
        let mut m = QMatrix::zeros(n, n);
        for (j, c) in cols.into_iter().enumerate() {
            for (i, v) in c?.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn element(&self, coeffs: &[Q]) -> SparsePolynomial {
        crate::polyengine::linear_combination(coeffs, &self.basis)
    }
}

/// Incremental row echelon over monomial coordinates, for span membership of possibly
/// dependent lists.
#[derive(Clone, Default)]
pub struct Span {
    rows: BTreeMap<ExponentVector, SparsePolynomial>,
}

impl Span {
    pub fn of(polys: &[SparsePolynomial]) -> Span {
        let mut s = Span::default();
        for p in polys {
            s.insert(p);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, f: &SparsePolynomial) -> bool {
        self.reduce(f).is_zero()
    }

    fn reduce(&self, f: &SparsePolynomial) -> SparsePolynomial {
        let mut r = f.clone();
        loop {
            let Some(lead) = r.terms().map(|(m, _)| m).filter(|m| self.rows.contains_key(*m)).last().cloned() else {
                return r;
            };
            let c = r.coeff(&lead);
            r = &r - &self.rows[&lead].scale(&c);
        }
    }

    /// Adds f to the span; false if it was already there.
    pub fn insert(&mut self, f: &SparsePolynomial) -> bool {
        let r = self.reduce(f);
        let Some((lead, c)) = r.terms().last().map(|(m, c)| (m.clone(), c.clone())) else {
            return false;
        };
        let row = r.scale(&c.recip());
        self.rows.insert(lead, row);
        true
    }
}

/// The g2-module generated by f: span of iterated negative-root-vector images.
pub fn cyclic_module(alg: &G2Algebra, f: &SparsePolynomial) -> Result<RepSpace, RepError> {
    let lowering: Vec<&LieMatrix> = alg.roots.iter().filter(|r| !r.positive).map(|r| &r.vector).collect();
    let mut ech = Span::default();
    let mut basis = Vec::new();
    let mut queue = VecDeque::new();
    if ech.insert(f) {
        basis.push(f.clone());
        queue.push_back(f.clone());
    }
    while let Some(g) = queue.pop_front() {
        for l in &lowering {
            let h = act_matrix(l, &g);
            if ech.insert(&h) {
                basis.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    RepSpace::new(basis)
}

// ---------------------------------------------------------------- builds

#[derive(Clone, Debug)]
pub struct EigenRow {
    pub diagram: String,
    pub c2_sl3: Option<Q>,
    pub c3_sl3: Option<Q>,
    pub c2_g2: Option<Q>,
}

#[derive(Clone, Debug)]
pub struct IrrepBuild {
    pub alpha: u32,
    pub beta: u32,
    pub weyl_dim: u64,
    pub diagrams: Vec<GtDiagram>,
    /// F_gamma per diagram, in diagram order.
    pub basis: Vec<SparsePolynomial>,
    /// Gamma-series per diagram.
    pub gamma_series: Vec<SparsePolynomial>,
    /// Some series was cut to a finite box because its class is infinite.
    pub truncated: bool,
    /// Surviving series terms with a nonzero d-coordinate, summed over the basis.
    pub t3_terms: usize,
    pub gram: QMatrix,
    /// Diagram indices in the chosen linear extension of the order.
    pub gt_order: Vec<usize>,
    pub gt_basis: Vec<SparsePolynomial>,
    pub eigen_table: Vec<EigenRow>,
}

impl IrrepBuild {
    pub fn label(&self, n: usize) -> String {
        format!("{}", self.diagrams[n].witness)
    }
}

#[derive(Clone, Debug)]
pub struct DimensionReport {
    pub alpha: u32,
    pub beta: u32,
    pub expected: u64,
    pub found: usize,
    /// Rank of the constructed polynomials.
    pub rank: usize,
    /// Dimension of the module generated by the highest vector.
    pub module_dim: usize,
    /// Dimension of span(F) intersected with that module.
    pub common_dim: usize,
    /// Diagrams whose F_gamma is not in the module.
    pub extra: Vec<String>,
}

impl std::fmt::Display for DimensionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "V({},{}): {} diagrams, Weyl dimension {}; rank {}, module dimension {}, common {}; missing {}; diagrams outside the module: {}",
            self.alpha,
            self.beta,
            self.found,
            self.expected,
            self.rank,
            self.module_dim,
            self.common_dim,
            self.module_dim - self.common_dim,
            if self.extra.is_empty() { "none".to_string() } else { self.extra.join(" ") }
        )
    }
}

/// Diagrams and their series, with no verification.
pub fn assemble(ctx: &G2Context, alpha: u32, beta: u32) -> Result<IrrepBuild, RepError> {
    let weyl_dim = weyl_dimension(alpha, beta);
    let diagrams = ctx.lattice.enumerate_diagrams(alpha, beta)?;
    let engine = SeriesEngine::new(&ctx.lattice, SeriesOptions::default());
    let outs: Vec<Result<_, SeriesError>> = diagrams
        .par_iter()
        .map(|d| Ok((engine.agkz_series(&d.gamma)?, engine.gamma_series(&d.gamma)?)))
        .collect();
    let mut basis = Vec::new();
    let mut gamma_series = Vec::new();
    let mut truncated = false;
    let mut t3_terms = 0;
    for o in outs {
        let (f, g) = o?;
        truncated |= f.truncated || g.truncated;
        t3_terms += f.t3_terms;
        basis.push(f.poly);
        gamma_series.push(g.poly);
    }
    let gram = gram_matrix(&basis);
    Ok(IrrepBuild {
        alpha,
        beta,
        weyl_dim,
        diagrams,
        basis,
        gamma_series,
        truncated,
        t3_terms,
        gram,
        gt_order: Vec::new(),
        gt_basis: Vec::new(),
        eigen_table: Vec::new(),
    })
}

pub fn dimension_report(ctx: &G2Context, build: &IrrepBuild) -> Result<DimensionReport, RepError> {
    let module = cyclic_module(&ctx.alg, &highest_vector(build.alpha, build.beta))?;
    let rank = crate::polyengine::rank(&build.basis);
    let mut all = build.basis.clone();
    all.extend(module.basis.iter().cloned());
    let joint = crate::polyengine::rank(&all);
    let extra = build
        .basis
        .iter()
        .enumerate()
        .filter(|(_, f)| !module.contains(f))
        .map(|(n, _)| build.label(n))
        .collect();
    Ok(DimensionReport {
        alpha: build.alpha,
        beta: build.beta,
        expected: build.weyl_dim,
        found: build.diagrams.len(),
        rank,
        module_dim: module.dim(),
        common_dim: rank + module.dim() - joint,
        extra,
    })
}

/// Assembles a build and checks the diagram count and that the highest vector lies in the span.
pub fn build_irrep(ctx: &G2Context, alpha: u32, beta: u32) -> Result<IrrepBuild, RepError> {
    let build = assemble(ctx, alpha, beta)?;
    if build.diagrams.len() as u64 != build.weyl_dim {
        return Err(RepError::DimensionMismatch(Box::new(dimension_report(ctx, &build)?)));
    }
    let space = RepSpace::new(build.basis.clone())?;
    if let Err(e) = space.coords(&highest_vector(alpha, beta)) {
        return Err(RepError::HighestVector(format!("not in the span of the basis: {e}")));
    }
    Ok(build)
}

// ---------------------------------------------------------------- matrices and Casimirs

/// Matrices of all D_{i,j} and of the sl3 units on a space.
pub struct GeneratorMatrices {
    pub d: BTreeMap<(i8, i8), QMatrix>,
    pub sl3: BTreeMap<(u8, u8), QMatrix>,
}

impl GeneratorMatrices {
    pub fn new(alg: &G2Algebra, space: &RepSpace) -> Result<GeneratorMatrices, RepError> {
        let mut d = BTreeMap::new();
        for i in INDICES {
            for j in INDICES {
                let z = alg.d(i, j);
                d.insert((i, j), space.matrix_of(&format!("D({i},{j})"), |f| act_matrix(&z, f))?);
            }
        }
        let mut sl3 = BTreeMap::new();
        for a in 1..=3u8 {
            for b in 1..=3u8 {
                let z = &alg.sl3.e[a as usize - 1][b as usize - 1];
                sl3.insert((a, b), space.matrix_of(&format!("E{a}{b}"), |f| act_matrix(z, f))?);
            }
        }
        Ok(GeneratorMatrices { d, sl3 })
    }

    fn get(&self, w: &Word) -> &QMatrix {
        match w {
            Word::D(i, j) => &self.d[&(*i, *j)],
            Word::Sl3(a, b) => &self.sl3[&(*a, *b)],
        }
    }

    /// Direct contraction of a Casimir word.
    pub fn casimir(&self, kind: CasimirKind) -> QMatrix {
        let n = self.d[&(-4, -4)].rows;
        let mut acc = QMatrix::zeros(n, n);
        for word in casimir_word(kind) {
            let mut p = QMatrix::identity(n);
            for w in &word {
                p = &p * self.get(w);
            }
            acc = &acc + &p;
        }
        acc
    }

    /// C6 through the block matrix with (i,j) block D_{i,j}: block trace of its sixth power.
    pub fn c6_block_trace(&self) -> QMatrix {
        let n = self.d[&(-4, -4)].rows;
        let mut big = QMatrix::zeros(8 * n, 8 * n);
        for (bi, i) in INDICES.iter().enumerate() {
            for (bj, j) in INDICES.iter().enumerate() {
                let m = &self.d[&(*i, *j)];
                for r in 0..n {
                    for c in 0..n {
                        big.set(bi * n + r, bj * n + c, m.get(r, c).clone());
                    }
                }
            }
        }
        let p = big.pow(6);
        let mut out = QMatrix::zeros(n, n);
        for b in 0..8 {
            for r in 0..n {
                for c in 0..n {
                    let v = out.get(r, c) + p.get(b * n + r, b * n + c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// C6 as the literal sum over all 8^6 index words, in scaled integer arithmetic.
    pub fn c6_literal(&self) -> Result<QMatrix, RepError> {
        let n = self.d[&(-4, -4)].rows;
        let den = crate::linalg::lcm_of_denominators(self.d.values().flat_map(|m| m.data.iter()));
        let to_int = |m: &QMatrix| -> Result<Vec<i128>, RepError> {
            m.data
                .iter()
                .map(|x| (x * Q::from_integer(den.clone())).to_integer().to_i128().ok_or(RepError::Overflow))
                .collect()
        };
        let mats: Vec<Vec<i128>> = INDICES
            .iter()
            .flat_map(|&i| INDICES.iter().map(move |&j| (i, j)))
            .map(|k| to_int(&self.d[&k]))
            .collect::<Result<_, _>>()?;
        let mul = |a: &[i128], b: &[i128]| -> Option<Vec<i128>> {
            let mut o = vec![0i128; n * n];
            for i in 0..n {
                for k in 0..n {
                    let x = a[i * n + k];
                    if x == 0 {
                        continue;
                    }
                    for j in 0..n {
                        o[i * n + j] = o[i * n + j].checked_add(x.checked_mul(b[k * n + j])?)?;
                    }
                }
            }
            Some(o)
        };
        let total: Result<Vec<Vec<i128>>, RepError> = (0..8usize)
            .into_par_iter()
            .map(|i0| {
                let mut acc = vec![0i128; n * n];
                // words i0 -> i1 -> ... -> i5 -> i0, prefix products shared
                let mut stack: Vec<(usize, usize, Vec<i128>)> = (0..8).map(|i1| (1, i1, mats[i0 * 8 + i1].clone())).collect();
                while let Some((depth, last, p)) = stack.pop() {
                    if depth == 5 {
                        let t = mul(&p, &mats[last * 8 + i0]).ok_or(RepError::Overflow)?;
                        for (a, b) in acc.iter_mut().zip(t) {
                            *a = a.checked_add(b).ok_or(RepError::Overflow)?;
                        }
                        continue;
                    }
                    if p.iter().all(|&x| x == 0) {
                        continue;
                    }
                    for nx in 0..8 {
                        stack.push((depth + 1, nx, mul(&p, &mats[last * 8 + nx]).ok_or(RepError::Overflow)?));
                    }
                }
                Ok(acc)
            })
            .collect();
        let scale = Q::from_integer(den.pow(6));
        let mut out = QMatrix::zeros(n, n);
        for part in total? {
            for (k, v) in part.into_iter().enumerate() {
                let x = &out.data[k] + Q::from_integer(BigInt::from(v)) / &scale;
                out.data[k] = x;
            }
        }
        Ok(out)
    }
}

/// Scalar c with m = c * identity, if m is scalar.
pub fn scalar_of(m: &QMatrix) -> Option<Q> {
    if m.rows == 0 {
        return Some(Q::zero());
    }
    let c = m.get(0, 0).clone();
    (0..m.rows).all(|i| (0..m.cols).all(|j| if i == j { *m.get(i, j) == c } else { m.get(i, j).is_zero() })).then_some(c)
}

/// lambda with m v = lambda v, if v is an eigenvector.
pub fn eigenvalue(m: &QMatrix, v: &[Q]) -> Option<Q> {
    let mv = m.mul_vec(v);
    let k = v.iter().position(|x| !x.is_zero())?;
    let lam = &mv[k] / &v[k];
    mv.iter().zip(v).all(|(a, b)| *a == &lam * b).then_some(lam)
}

// ---------------------------------------------------------------- sl3 branching inside a build

/// Dimensions of sl3 constituents, read off from highest vectors: the joint kernel of the
/// raising units E12, E23 in each weight space.
pub fn sl3_blocks_from_kernels(alg: &G2Algebra, space: &RepSpace) -> Result<Vec<u64>, RepError> {
    let h = [
        &alg.sl3.e[0][0] - &alg.sl3.e[1][1],
        &alg.sl3.e[1][1] - &alg.sl3.e[2][2],
    ];
    let mut by_weight: BTreeMap<(Q, Q), Vec<usize>> = BTreeMap::new();
    for (n, f) in space.basis.iter().enumerate() {
        let mut w = Vec::new();
        for hh in &h {
            let hf = act_matrix(hh, f);
            let (m, c) = f.terms().next().ok_or(RepError::NotWeightVector(n))?;
            let lam = hf.coeff(m) / c;
            if !(&hf - &f.scale(&lam)).is_zero() {
                return Err(RepError::NotWeightVector(n));
            }
            w.push(lam);
        }
        by_weight.entry((w[0].clone(), w[1].clone())).or_default().push(n);
    }
    let e12 = space.matrix_of("E12", |f| act_matrix(&alg.sl3.e[0][1], f))?;
    let e23 = space.matrix_of("E23", |f| act_matrix(&alg.sl3.e[1][2], f))?;
    let mut dims = Vec::new();
    for ((p, qq), idx) in by_weight {
        let rows: Vec<Vec<Q>> = (0..space.dim())
            .flat_map(|r| {
                let a: Vec<Q> = idx.iter().map(|&c| e12.get(r, c).clone()).collect();
                let b: Vec<Q> = idx.iter().map(|&c| e23.get(r, c).clone()).collect();
                [a, b]
            })
            .collect();
        let k = QMatrix::from_rows(&rows).nullspace().len();
        if k > 0 {
            let (p, qq) = (p.to_integer().to_i64().unwrap(), qq.to_integer().to_i64().unwrap());
            let d = ((p + 1) * (qq + 1) * (p + qq + 2) / 2) as u64;
            dims.extend(std::iter::repeat(d).take(k));
        }
    }
    dims.sort_unstable_by(|x, y| y.cmp(x));
    Ok(dims)
}

// ---------------------------------------------------------------- maximization

/// Raises the wedge e_X by the sl3 raising units until all of them annihilate it.
pub fn maximize_set(alg: &G2Algebra, x: IndexSet) -> Result<(IndexSet, Q), RepError> {
    let raising = [&alg.sl3.e[0][1], &alg.sl3.e[1][2], &alg.sl3.e[0][2]];
    let mut t = SparsePolynomial::var(x);
    loop {
        let mut moved = false;
        for r in raising {
            let u = act_matrix(r, &t);
            if !u.is_zero() {
                t = u;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let mut it = t.terms();
    let (m, c) = it.next().expect("raising never produces zero");
    if it.next().is_some() {
        return Err(RepError::NotDecomposable(x));
    }
    let y = m.iter().next().expect("degree one").0;
    Ok((y, c.clone()))
}

/// gamma_max: each A_X replaced by its sl3-maximal wedge, linearly.
pub fn maximize(alg: &G2Algebra, gamma: &ExponentVector) -> Result<ExponentVector, RepError> {
    let mut out = ExponentVector::zero();
    for (x, e) in gamma.iter() {
        let (y, _) = maximize_set(alg, x)?;
        out = out.combine(&ExponentVector::unit(y), e);
    }
    Ok(out)
}

// ---------------------------------------------------------------- order and GT basis

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GtRelation {
    Precedes,
    Succeeds,
    Incomparable,
    Equal,
    /// Reachable in both directions from distinct classes.
    Cyclic,
}

/// Class keys of all s.r with s >= 0 and |s| <= budget, for the order gamma + s.r = delta.
pub struct OrderOracle<'a> {
    lattice: &'a GtLattice,
    reach: HashSet<ExponentVector>,
    pub budget: usize,
}

impl<'a> OrderOracle<'a> {
    pub fn new(lattice: &'a GtLattice, budget: usize) -> OrderOracle<'a> {
        let r = &lattice.r_basis;
        let mut combos: Vec<ExponentVector> = vec![ExponentVector::zero()];
        let mut frontier: Vec<(usize, ExponentVector)> = vec![(0, ExponentVector::zero())];
        for _ in 0..budget {
            let mut next = Vec::new();
            for (start, v) in &frontier {
                for (i, ri) in r.iter().enumerate().skip(*start) {
                    next.push((i, v + ri));
                }
            }
            combos.extend(next.iter().map(|(_, v)| v.clone()));
            frontier = next;
        }
        let reach = combos.par_iter().map(|v| lattice.class_key(v)).collect::<Vec<_>>().into_iter().collect();
        OrderOracle { lattice, reach, budget }
    }

    fn reaches(&self, from: &ExponentVector, to: &ExponentVector) -> bool {
        self.reach.contains(&self.lattice.class_key(&(to - from)))
    }

    pub fn compare(&self, gamma: &ExponentVector, delta: &ExponentVector) -> GtRelation {
        if self.lattice.same_class(gamma, delta) {
            return GtRelation::Equal;
        }
        match (self.reaches(gamma, delta), self.reaches(delta, gamma)) {
            (true, true) => GtRelation::Cyclic,
            (true, false) => GtRelation::Precedes,
            (false, true) => GtRelation::Succeeds,
            (false, false) => GtRelation::Incomparable,
        }
    }

    /// Linear extension: repeatedly take the lexicographically least witness with no
    /// unplaced predecessor. Cycles are broken the same way.
    pub fn linear_extension(&self, diagrams: &[GtDiagram]) -> Vec<usize> {
        let n = diagrams.len();
        let before: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| self.compare(&diagrams[a].gamma, &diagrams[b].gamma) == GtRelation::Precedes).collect())
            .collect();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let free: Vec<usize> = (0..n).filter(|&b| !placed[b] && (0..n).all(|a| placed[a] || !before[a][b])).collect();
            let pool = if free.is_empty() { (0..n).filter(|&b| !placed[b]).collect() } else { free };
            let pick = *pool.iter().min_by(|&&a, &&b| diagrams[a].witness.cmp(&diagrams[b].witness)).unwrap();
            placed[pick] = true;
            out.push(pick);
        }
        out
    }
}

/// Orthogonalizes the build in the order and tabulates Casimir eigenvalues per vector.
pub fn gt_basis(ctx: &G2Context, build: &mut IrrepBuild) -> Result<GeneratorMatrices, RepError> {
    let budget = (build.alpha + build.beta).max(1) as usize;
    let oracle = OrderOracle::new(&ctx.lattice, budget);
    build.gt_order = oracle.linear_extension(&build.diagrams);
    let ordered: Vec<SparsePolynomial> = build.gt_order.iter().map(|&n| build.basis[n].clone()).collect();
    build.gt_basis = gram_schmidt(&ordered)?;
    let space = RepSpace::new(build.basis.clone())?;
    let mats = GeneratorMatrices::new(&ctx.alg, &space)?;
    let c2s = mats.casimir(CasimirKind::C2Sl3);
    let c3s = mats.casimir(CasimirKind::C3Sl3);
    let c2g = mats.casimir(CasimirKind::C2G2);
    build.eigen_table = build
        .gt_order
        .iter()
        .zip(&build.gt_basis)
        .map(|(&n, v)| {
            let c = space.coords(v)?;
            Ok(EigenRow {
                diagram: build.label(n),
                c2_sl3: eigenvalue(&c2s, &c),
                c3_sl3: eigenvalue(&c3s, &c),
                c2_g2: eigenvalue(&c2g, &c),
            })
        })
        .collect::<Result<_, PolyError>>()?;
    Ok(mats)
}

/// Sizes of the groups of GT vectors sharing both sl3 Casimir eigenvalues.
pub fn eigen_blocks(table: &[EigenRow]) -> Option<Vec<u64>> {
    let mut groups: BTreeMap<(Q, Q), u64> = BTreeMap::new();
    for row in table {
        *groups.entry((row.c2_sl3.clone()?, row.c3_sl3.clone()?)).or_default() += 1;
    }
    let mut v: Vec<u64> = groups.into_values().collect();
    v.sort_unstable_by(|x, y| y.cmp(x));
    Some(v)
}

// ---------------------------------------------------------------- checks used by reports

/// Labels of (generator, basis index) pairs whose image has a nonzero residual.
pub fn invariance_failures(ctx: &G2Context, basis: &[SparsePolynomial]) -> Vec<String> {
    let elems = ctx.named_elements();
    elems
        .par_iter()
        .flat_map(|(name, z)| {
            basis
                .iter()
                .enumerate()
                .filter_map(|(n, f)| {
                    let g = act_matrix(z, f);
                    let bad = residual_failures(&g, &ctx.ops_agkz);
                    (!bad.is_empty()).then(|| format!("{name} on #{n}: {} operators", bad.len()))
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Pairs (i, j, a, b) where pairing(E_ij f_a, f_b) != pairing(f_a, E_ji f_b).
pub fn adjointness_failures(basis: &[SparsePolynomial]) -> Vec<(i8, i8, usize, usize)> {
    let pairs: Vec<(i8, i8)> = INDICES.iter().flat_map(|&i| INDICES.iter().map(move |&j| (i, j))).collect();
    pairs
        .par_iter()
        .flat_map(|&(i, j)| {
            let left: Vec<SparsePolynomial> = basis.iter().map(|f| act_matrix_unit(i, j, f)).collect();
            let right: Vec<SparsePolynomial> = basis.iter().map(|f| act_matrix_unit(j, i, f)).collect();
            let mut bad = Vec::new();
            for a in 0..basis.len() {
                for b in 0..basis.len() {
                    if pairing(&left[a], &basis[b]) != pairing(&basis[a], &right[b]) {
                        bad.push((i, j, a, b));
                    }
                }
            }
            bad
        })
        .collect()
}

/// Casimir-eigenvalue groups are mutually orthogonal under the pairing.
pub fn block_orthogonal(build: &IrrepBuild) -> bool {
    let n = build.gt_basis.len();
    for a in 0..n {
        for b in a + 1..n {
            let (ra, rb) = (&build.eigen_table[a], &build.eigen_table[b]);
            if (&ra.c2_sl3, &ra.c3_sl3) != (&rb.c2_sl3, &rb.c3_sl3) && !pairing(&build.gt_basis[a], &build.gt_basis[b]).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Weight multiset of a space spanned by weight vectors.
pub fn space_weights(alg: &G2Algebra, space: &RepSpace) -> Result<BTreeMap<(i64, i64), u64>, RepError> {
    let mut out = BTreeMap::new();
    for (n, f) in space.basis.iter().enumerate() {
        let (a, b) = weight_of(alg, f).ok_or(RepError::NotWeightVector(n))?;
        *out.entry((a.to_integer().to_i64().unwrap(), b.to_integer().to_i64().unwrap())).or_insert(0) += 1;
    }
    Ok(out)
}

pub fn format_build(build: &IrrepBuild) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "rep V({},{}) weyl_dim {} diagrams {} truncated {} t3_terms {}",
        build.alpha,
        build.beta,
        build.weyl_dim,
        build.diagrams.len(),
        build.truncated,
        build.t3_terms
    );
    for (n, (d, f)) in build.diagrams.iter().zip(&build.basis).enumerate() {
        let _ = writeln!(s, "diagram {n} {} terms {}", d.witness, f.len());
        let _ = writeln!(s, "  F = {}", f.serialize());
    }
    let _ = writeln!(s, "gram");
    s.push_str(&crate::algebra_g2::format_matrix(&build.gram));
    if !build.gt_order.is_empty() {
        let order: Vec<String> = build.gt_order.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(s, "gt_order {}", order.join(" "));
        for row in &build.eigen_table {
            let f = |x: &Option<Q>| x.as_ref().map(fmt_q).unwrap_or_else(|| "none".into());
            let _ = writeln!(s, "eigen {} c2_sl3 {} c3_sl3 {} c2_g2 {}", row.diagram, f(&row.c2_sl3), f(&row.c3_sl3), f(&row.c2_g2));
        }
    }
    s
}

/// Rejects matrices outside g2, for callers holding raw o8 elements.
pub fn checked_o8_unit(alg: &G2Algebra, i: i8, j: i8) -> Result<LieMatrix, RepError> {
    let f = f_unit(i, j);
    if alg.contains(&f) {
        Ok(f)
    } else {
        Err(RepError::NotInG2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i8]) -> IndexSet {
        IndexSet::new(v).unwrap()
    }

    #[test]
    fn matrix_unit_examples() {
        let a3 = SparsePolynomial::var(s(&[-3]));
        assert_eq!(act_matrix_unit(-4, -3, &a3), SparsePolynomial::var(s(&[-4])));
        assert!(act_matrix_unit(-4, -3, &SparsePolynomial::var(s(&[-4, -3]))).is_zero());
        let sq = &a3 * &a3;
        let expect = (&SparsePolynomial::var(s(&[-4])) * &a3).scale(&q(2));
        assert_eq!(act_matrix_unit(-4, -3, &sq), expect);
    }

    #[test]
    fn weyl_oracle_values() {
        assert_eq!(weyl_dimension(0, 0), 1);
        assert_eq!(weyl_dimension(1, 0), 7);
        assert_eq!(weyl_dimension(0, 1), 14);
        assert_eq!(weyl_dimension(2, 0), 27);
        assert_eq!(weyl_dimension(1, 1), 64);
        for a in 0..4 {
            for b in 0..4 {
                let total: u64 = weight_multiset(a, b).values().sum();
                assert_eq!(total, weyl_dimension(a, b), "({a},{b})");
            }
        }
    }

    #[test]
    fn branching_oracle() {
        assert_eq!(sl3_branching(1, 0), vec![3, 3, 1]);
        assert_eq!(sl3_branching(0, 1), vec![8, 3, 3]);
        assert_eq!(sl3_branching(0, 0), vec![1]);
    }

    #[test]
    fn weight_system_of_standard_rep() {
        let w = weight_multiset(1, 0);
        assert_eq!(w.len(), 7);
        assert_eq!(w[&(0, 0)], 1);
        // nonzero weights are exactly the short roots
        for (m, n) in POSITIVE_ROOTS {
            let short = ip((m, n), (m, n)) == 2;
            assert_eq!(w.contains_key(&roots_to_weight(m, n)), short);
            assert_eq!(w.contains_key(&roots_to_weight(-m, -n)), short);
        }
    }
}
