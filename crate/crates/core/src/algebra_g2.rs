//! Split octonions, g2 = Der(O) inside o8, root data, invariant tensors and Casimir words.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::indexsets::{canonicalize, pos, IndexSet, INDICES};
use crate::linalg::{fmt_q, primitive_integer, q, qf, QMatrix, Q};

pub type LieMatrix = QMatrix;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("octonion model self-check failed: {0}")]
    Model(String),
    #[error("derivation algebra has dimension {0}, expected 14")]
    Dimension(usize),
    #[error("element not in g2: {0}")]
    NotInG2(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
}

/// Matrix unit E_{i,j}.
pub fn e_unit(i: i8, j: i8) -> LieMatrix {
    let mut m = QMatrix::zeros(8, 8);
    m.set(pos(i), pos(j), Q::one());
    m
}

/// F_{i,j} = E_{i,j} - E_{-j,-i}.
pub fn f_unit(i: i8, j: i8) -> LieMatrix {
    &e_unit(i, j) - &e_unit(-j, -i)
}

/// Ones on the antidiagonal.
pub fn omega_form() -> QMatrix {
    let mut m = QMatrix::zeros(8, 8);
    for i in INDICES {
        m.set(pos(i), pos(-i), Q::one());
    }
    m
}

pub fn in_o8(m: &LieMatrix) -> bool {
    let om = omega_form();
    (&(&m.transpose() * &om) + &(&om * m)).is_zero()
}

pub fn entry(m: &LieMatrix, i: i8, j: i8) -> &Q {
    m.get(pos(i), pos(j))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Octonion(pub Vec<Q>);

impl Octonion {
    pub fn zero() -> Octonion {
        Octonion(vec![Q::zero(); 8])
    }

    pub fn basis(i: i8) -> Octonion {
        let mut x = Octonion::zero();
        x.0[pos(i)] = Q::one();
        x
    }

    pub fn coord(&self, i: i8) -> &Q {
        &self.0[pos(i)]
    }

    pub fn add(&self, o: &Octonion) -> Octonion {
        Octonion(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: &Q) -> Octonion {
        Octonion(self.0.iter().map(|a| a * s).collect())
    }
}

/// Zorn vector-matrix model: (a, u, v, b) with u, v in Q^3.
struct Zorn {
    a: Q,
    u: [Q; 3],
    v: [Q; 3],
    b: Q,
}

fn dot(p: &[Q; 3], r: &[Q; 3]) -> Q {
    &p[0] * &r[0] + &p[1] * &r[1] + &p[2] * &r[2]
}

fn cross(p: &[Q; 3], r: &[Q; 3]) -> [Q; 3] {
    [
        &p[1] * &r[2] - &p[2] * &r[1],
        &p[2] * &r[0] - &p[0] * &r[2],
        &p[0] * &r[1] - &p[1] * &r[0],
    ]
}

fn zorn_mul(x: &Zorn, y: &Zorn) -> Zorn {
    let cv = cross(&x.v, &y.v);
    let cu = cross(&x.u, &y.u);
    let u = std::array::from_fn(|k| &x.a * &y.u[k] + &y.b * &x.u[k] - &cv[k]);
    let v = std::array::from_fn(|k| &y.a * &x.v[k] + &x.b * &y.v[k] + &cu[k]);
    Zorn {
        a: &x.a * &y.a + dot(&x.u, &y.v),
        u,
        v,
        b: &x.b * &y.b + dot(&x.v, &y.u),
    }
}

// coordinate change taking the Zorn norm ab - u.v to -sum x_{-i} x_i
fn to_zorn(x: &Octonion) -> Zorn {
    let c = |i: i8| x.coord(i).clone();
    Zorn {
        a: c(-1),
        u: [c(-4), c(3), c(2)],
        v: [c(4), c(-3), c(-2)],
        b: -c(1),
    }
}

fn from_zorn(z: &Zorn) -> Octonion {
    let mut x = Octonion::zero();
    x.0[pos(-1)] = z.a.clone();
    x.0[pos(-4)] = z.u[0].clone();
    x.0[pos(3)] = z.u[1].clone();
    x.0[pos(2)] = z.u[2].clone();
    x.0[pos(4)] = z.v[0].clone();
    x.0[pos(-3)] = z.v[1].clone();
    x.0[pos(-2)] = z.v[2].clone();
    x.0[pos(1)] = -z.b.clone();
    x
}

#[derive(Clone, Debug)]
pub struct OctonionModel {
    /// table[8*pos(i)+pos(j)] = e_i e_j
    pub mult: Vec<Octonion>,
    pub unit_coords: Octonion,
    pub quad_form: QMatrix,
}

impl OctonionModel {
    pub fn product(&self, i: i8, j: i8) -> &Octonion {
        &self.mult[8 * pos(i) + pos(j)]
    }

    pub fn mul(&self, x: &Octonion, y: &Octonion) -> Octonion {
        let mut out = Octonion::zero();
        for a in 0..8 {
            if x.0[a].is_zero() {
                continue;
            }
            for b in 0..8 {
                if y.0[b].is_zero() {
                    continue;
                }
                let c = &x.0[a] * &y.0[b];
                for (k, t) in self.mult[8 * a + b].0.iter().enumerate() {
                    if !t.is_zero() {
                        out.0[k] += &c * t;
                    }
                }
            }
        }
        out
    }

    /// N(x) = -(1/2) x^T Omega x.
    pub fn norm(&self, x: &Octonion) -> Q {
        let ox = self.quad_form.mul_vec(&x.0);
        let s: Q = x.0.iter().zip(&ox).map(|(a, b)| a * b).sum();
        -s / q(2)
    }

    pub fn bilinear(&self, x: &Octonion, y: &Octonion) -> Q {
        self.norm(&x.add(y)) - self.norm(x) - self.norm(y)
    }

    /// Coefficient along the identity.
    pub fn re(&self, x: &Octonion) -> Q {
        self.bilinear(x, &self.unit_coords) / q(2)
    }

    pub fn self_check(&self) -> Result<(), AlgebraError> {
        let one = &self.unit_coords;
        if self.norm(one) != Q::one() {
            return Err(AlgebraError::Model("N(1) != 1".into()));
        }
        for i in INDICES {
            let e = Octonion::basis(i);
            if self.mul(one, &e) != e || self.mul(&e, one) != e {
                return Err(AlgebraError::Model(format!("identity fails on e_{i}")));
            }
            for j in INDICES {
                let f = Octonion::basis(j);
                let xy = self.mul(&e, &f);
                if self.norm(&xy) != self.norm(&e) * self.norm(&f) {
                    return Err(AlgebraError::Model(format!("composition fails on ({i},{j})")));
                }
                let xx = self.mul(&e, &e);
                if self.mul(&e, &xy) != self.mul(&xx, &f) {
                    return Err(AlgebraError::Model(format!("left alternativity fails on ({i},{j})")));
                }
                let yx = self.mul(&f, &e);
                if self.mul(&yx, &e) != self.mul(&f, &xx) {
                    return Err(AlgebraError::Model(format!("right alternativity fails on ({i},{j})")));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x0c7);
        for _ in 0..100 {
            let x = random_octonion(&mut rng);
            let y = random_octonion(&mut rng);
            if self.norm(&self.mul(&x, &y)) != self.norm(&x) * self.norm(&y) {
                return Err(AlgebraError::Model("composition fails on a random pair".into()));
            }
        }
        Ok(())
    }
}

pub fn random_octonion(rng: &mut impl Rng) -> Octonion {
    Octonion((0..8).map(|_| qf(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect())
}

pub fn build_split_octonions() -> Result<OctonionModel, AlgebraError> {
    let mut mult = Vec::with_capacity(64);
    for i in INDICES {
        for j in INDICES {
            let p = zorn_mul(&to_zorn(&Octonion::basis(i)), &to_zorn(&Octonion::basis(j)));
            mult.push(from_zorn(&p));
        }
    }
    let mut unit = Octonion::zero();
    unit.0[pos(-1)] = Q::one();
    unit.0[pos(1)] = -Q::one();
    let model = OctonionModel {
        mult,
        unit_coords: unit,
        quad_form: omega_form(),
    };
    model.self_check()?;
    Ok(model)
}

#[derive(Clone, Debug)]
pub struct Root {
    /// Coordinates on the fundamental weights (omega_1, omega_2).
    pub weight: (i64, i64),
    pub positive: bool,
    pub vector: LieMatrix,
}

#[derive(Clone, Debug)]
pub struct Sl3 {
    /// e[a][b] plays E_{a+1,b+1}; diagonal entries are traceless.
    pub e: Vec<Vec<LieMatrix>>,
}

#[derive(Clone, Debug)]
pub struct G2Algebra {
    /// H_{a1}, H_{a2}, then the positive root vectors, then the negative ones.
    pub basis: Vec<LieMatrix>,
    pub cartan: [LieMatrix; 2],
    /// Coroots of the short and long simple roots.
    pub coroots: [LieMatrix; 2],
    pub roots: Vec<Root>,
    pub sl3: Sl3,
    flat: Vec<Vec<Q>>,
    gram_inv: QMatrix,
}

fn unknown(i: usize, j: usize) -> usize {
    8 * i + j
}

pub fn derivation_algebra(model: &OctonionModel) -> Result<G2Algebra, AlgebraError> {
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for a in 0..8 {
        for b in 0..8 {
            let p = &model.mult[8 * a + b];
            for k in 0..8 {
                let mut row = vec![Q::zero(); 64];
                for s in 0..8 {
                    if !p.0[s].is_zero() {
                        row[unknown(k, s)] += &p.0[s];
                    }
                }
                for i in 0..8 {
                    let c = &model.mult[8 * i + b].0[k];
                    if !c.is_zero() {
                        row[unknown(i, a)] -= c;
                    }
                    let c = &model.mult[8 * a + i].0[k];
                    if !c.is_zero() {
                        row[unknown(i, b)] -= c;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    // D^T Omega + Omega D = 0: D[s][r] with s = 7-r's partner
    for r in 0..8 {
        for c in 0..8 {
            let mut row = vec![Q::zero(); 64];
            row[unknown(7 - c, r)] += Q::one();
            row[unknown(7 - r, c)] += Q::one();
            rows.push(row);
        }
    }
    let sys = QMatrix::from_rows(&rows);
    let ns = sys.nullspace();
    if ns.len() != 14 {
        return Err(AlgebraError::Dimension(ns.len()));
    }
    let raw: Vec<LieMatrix> = ns
        .iter()
        .map(|v| QMatrix {
            rows: 8,
            cols: 8,
            data: v.clone(),
        })
        .collect();
    assemble(raw)
}

fn cartan_elements() -> [LieMatrix; 2] {
    let h1 = (&(&f_unit(-2, -2).scale(&q(2)) - &f_unit(-3, -3)) + &f_unit(-4, -4)).scale(&qf(1, 3));
    let h2 = &f_unit(-3, -3) - &f_unit(-2, -2);
    [h1, h2]
}

fn diag(m: &LieMatrix) -> Vec<Q> {
    (0..8).map(|i| m.get(i, i).clone()).collect()
}

fn span_coords(flat: &[Vec<Q>], m: &LieMatrix) -> Option<Vec<Q>> {
    crate::linalg::express(flat, &m.data)
}

fn normalize_primitive(m: &LieMatrix) -> LieMatrix {
    let p = primitive_integer(&m.data);
    QMatrix {
        rows: 8,
        cols: 8,
        data: p.into_iter().map(Q::from_integer).collect(),
    }
}

fn assemble(raw: Vec<LieMatrix>) -> Result<G2Algebra, AlgebraError> {
    let flat: Vec<Vec<Q>> = raw.iter().map(|m| m.data.clone()).collect();
    let cartan = cartan_elements();
    for h in &cartan {
        if span_coords(&flat, h).is_none() {
            return Err(AlgebraError::NotInG2("Cartan element".into()));
        }
    }
    let d1 = diag(&cartan[0]);
    let d2 = diag(&cartan[1]);
    // split every basis element by the (H1, H2)-eigenvalue of its matrix positions
    let mut classes: BTreeMap<(Q, Q), Vec<LieMatrix>> = BTreeMap::new();
    for m in &raw {
        let mut parts: BTreeMap<(Q, Q), LieMatrix> = BTreeMap::new();
        for r in 0..8 {
            for c in 0..8 {
                let x = m.get(r, c);
                if x.is_zero() {
                    continue;
                }
                let key = (&d1[r] - &d1[c], &d2[r] - &d2[c]);
                parts.entry(key).or_insert_with(|| QMatrix::zeros(8, 8)).set(r, c, x.clone());
            }
        }
        for (k, p) in parts {
            classes.entry(k).or_default().push(p);
        }
    }
    let mut root_vecs: Vec<(LieMatrix, bool)> = Vec::new();
    for ((a, b), ms) in &classes {
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let v = normalize_primitive(&ms[0]);
        let upper = (0..8).all(|r| (0..8).all(|c| v.get(r, c).is_zero() || r < c));
        root_vecs.push((v, upper));
    }
    if root_vecs.len() != 12 {
        return Err(AlgebraError::Model(format!("{} root spaces", root_vecs.len())));
    }
    // simple roots are positive roots that are not sums of two positive roots
    let weight_of = |m: &LieMatrix| -> (Q, Q) {
        let (r, c) = (0..64).map(|n| (n / 8, n % 8)).find(|&(r, c)| !m.get(r, c).is_zero()).unwrap();
        (&d1[r] - &d1[c], &d2[r] - &d2[c])
    };
    let pos_w: Vec<(Q, Q)> = root_vecs.iter().filter(|r| r.1).map(|r| weight_of(&r.0)).collect();
    let simple: Vec<(Q, Q)> = pos_w
        .iter()
        .filter(|w| {
            !pos_w.iter().any(|a| pos_w.iter().any(|b| &a.0 + &b.0 == w.0 && &a.1 + &b.1 == w.1))
        })
        .cloned()
        .collect();
    if simple.len() != 2 {
        return Err(AlgebraError::Model("simple roots".into()));
    }
    let find = |w: &(Q, Q), positive: bool| -> LieMatrix {
        let target = if positive {
            w.clone()
        } else {
            (-w.0.clone(), -w.1.clone())
        };
        root_vecs.iter().find(|r| weight_of(&r.0) == target).unwrap().0.clone()
    };
    let eval = |w: &(Q, Q), h: &LieMatrix| -> Q {
        // root value on a diagonal h, via the matrix position of its root vector
        let m = find(w, true);
        let (r, c) = (0..64).map(|n| (n / 8, n % 8)).find(|&(r, c)| !m.get(r, c).is_zero()).unwrap();
        h.get(r, r) - h.get(c, c)
    };
    let mut coroots = Vec::new();
    for w in &simple {
        let h = find(w, true).commutator(&find(w, false));
        let v = eval(w, &h);
        coroots.push(h.scale(&(q(2) / v)));
    }
    // short simple root s has s(h_long) = -1
    let (short, long) = if eval(&simple[0], &coroots[1]) == q(-1) { (0, 1) } else { (1, 0) };
    let coroots = [coroots[short].clone(), coroots[long].clone()];
    let omega_coords = |w: &(Q, Q)| -> (i64, i64) {
        let m = find(w, true);
        let (r, c) = (0..64).map(|n| (n / 8, n % 8)).find(|&(r, c)| !m.get(r, c).is_zero()).unwrap();
        let a = coroots[0].get(r, r) - coroots[0].get(c, c);
        let b = coroots[1].get(r, r) - coroots[1].get(c, c);
        (a.to_integer().try_into().unwrap(), b.to_integer().try_into().unwrap())
    };
    let mut roots: Vec<Root> = Vec::new();
    for w in &pos_w {
        let wt = omega_coords(w);
        roots.push(Root {
            weight: wt,
            positive: true,
            vector: find(w, true),
        });
        roots.push(Root {
            weight: (-wt.0, -wt.1),
            positive: false,
            vector: find(w, false),
        });
    }
    roots.sort_by_key(|r| (!r.positive, r.weight.0 + r.weight.1, r.weight.0));
    let mut basis = vec![cartan[0].clone(), cartan[1].clone()];
    basis.extend(roots.iter().filter(|r| r.positive).map(|r| r.vector.clone()));
    basis.extend(roots.iter().filter(|r| !r.positive).map(|r| r.vector.clone()));
    let flat: Vec<Vec<Q>> = basis.iter().map(|m| m.data.clone()).collect();
    let mut gram = QMatrix::zeros(14, 14);
    for i in 0..14 {
        for j in 0..14 {
            gram.set(i, j, (&basis[i] * &basis[j]).trace());
        }
    }
    let gram_inv = gram.inverse().ok_or_else(|| AlgebraError::Model("degenerate trace form".into()))?;
    let sl3 = build_sl3();
    let alg = G2Algebra {
        basis,
        cartan,
        coroots,
        roots,
        sl3,
        flat,
        gram_inv,
    };
    for m in [f_unit(-3, -2), f_unit(-4, 2)] {
        if !alg.contains(&m) {
            return Err(AlgebraError::NotInG2("sl3 raising element".into()));
        }
    }
    Ok(alg)
}

fn build_sl3() -> Sl3 {
    let e12 = f_unit(-3, -2);
    let e23 = f_unit(-4, 2);
    let e13 = e12.commutator(&e23);
    let (e21, e32, e31) = (e12.transpose(), e23.transpose(), e13.transpose());
    let h1 = e12.commutator(&e21);
    let h2 = e23.commutator(&e32);
    let third = qf(1, 3);
    let e11 = (&h1.scale(&q(2)) + &h2).scale(&third);
    let e22 = (&h2 - &h1).scale(&third);
    let e33 = (&(-&h1) - &h2.scale(&q(2))).scale(&third);
    Sl3 {
        e: vec![vec![e11, e12, e13], vec![e21, e22, e23], vec![e31, e32, e33]],
    }
}

impl G2Algebra {
    pub fn contains(&self, m: &LieMatrix) -> bool {
        self.coords(m).is_some()
    }

    pub fn coords(&self, m: &LieMatrix) -> Option<Vec<Q>> {
        span_coords(&self.flat, m)
    }

    /// Trace-form orthogonal projection of an o8 element onto g2.
    pub fn project_h(&self, f: &LieMatrix) -> LieMatrix {
        let rhs: Vec<Q> = self.basis.iter().map(|b| (f * b).trace()).collect();
        let c = self.gram_inv.mul_vec(&rhs);
        let mut out = QMatrix::zeros(8, 8);
        for (ci, b) in c.iter().zip(&self.basis) {
            if !ci.is_zero() {
                out = &out + &b.scale(ci);
            }
        }
        out
    }

    /// D_{i,j} = h(F_{i,j}).
    pub fn d(&self, i: i8, j: i8) -> LieMatrix {
        self.project_h(&f_unit(i, j))
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.positive)
    }

    /// Fundamental-weight coordinates of the diagonal weight sum_x eps_x over a multiset of indices.
    pub fn weight_of_indices(&self, idx: &[i8]) -> (Q, Q) {
        let mut a = Q::zero();
        let mut b = Q::zero();
        for &i in idx {
            a += entry(&self.coroots[0], i, i);
            b += entry(&self.coroots[1], i, i);
        }
        (a, b)
    }

    pub fn derivation_annihilates(&self, model: &OctonionModel, d: &LieMatrix) -> bool {
        let act = |x: &Octonion| Octonion(d.mul_vec(&x.0));
        for i in INDICES {
            for j in INDICES {
                let (x, y) = (Octonion::basis(i), Octonion::basis(j));
                let lhs = act(&model.mul(&x, &y));
                let rhs = model.mul(&act(&x), &y).add(&model.mul(&x, &act(&y)));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Totally antisymmetric k-tensor on the 8 indices, stored on sorted index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTensor {
    pub k: usize,
    pub entries: BTreeMap<IndexSet, BigInt>,
}

impl InvariantTensor {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, x: &IndexSet) -> BigInt {
        self.entries.get(x).cloned().unwrap_or_default()
    }

    /// Value on an arbitrary index sequence.
    pub fn eval(&self, seq: &[i8]) -> BigInt {
        if seq.len() == 8 {
            // sets of size 8 are not index sets; only k = 8 could use them
            return BigInt::zero();
        }
        match canonicalize(seq) {
            Ok(s) if s.sign != 0 => self.get(&s.set) * BigInt::from(s.sign),
            _ => BigInt::zero(),
        }
    }

    /// (D.w)(x_1..x_k) summed over slots, for D acting on column vectors.
    pub fn derivation_defect(&self, d: &LieMatrix) -> bool {
        for x in IndexSet::all().iter().filter(|x| x.len() == self.k) {
            let els = x.elements();
            let mut tot = Q::zero();
            for m in 0..els.len() {
                for i in INDICES {
                    let c = entry(d, i, els[m]);
                    if c.is_zero() {
                        continue;
                    }
                    let mut s = els.clone();
                    s[m] = i;
                    tot += c * Q::from_integer(self.eval(&s));
                }
            }
            if !tot.is_zero() {
                return true;
            }
        }
        false
    }
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p[a] > p[b] {
                s = -s;
            }
        }
    }
    s
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, k - 1);
            out.push(q);
        }
    }
    out
}

/// Antisymmetrization of Re(((x_1 x_2) x_3) ... x_k), scaled to a primitive integer tensor.
pub fn invariant_tensor(model: &OctonionModel, k: usize) -> InvariantTensor {
    assert!((2..=7).contains(&k), "k in 2..=7");
    let mut chain: BTreeMap<Vec<i8>, Octonion> = BTreeMap::new();
    let mut prod = |t: &[i8]| -> Octonion {
        let mut cur = Octonion::basis(t[0]);
        for l in 1..t.len() {
            let key = t[..=l].to_vec();
            cur = match chain.get(&key) {
                Some(c) => c.clone(),
                None => {
                    let c = model.mul(&cur, &Octonion::basis(t[l]));
                    chain.insert(key, c.clone());
                    c
                }
            };
        }
        cur
    };
    let perms = permutations(k);
    let mut raw: Vec<(IndexSet, Q)> = Vec::new();
    for x in IndexSet::all().iter().filter(|x| x.len() == k) {
        let els = x.elements();
        let mut tot = Q::zero();
        for p in &perms {
            let t: Vec<i8> = p.iter().map(|&n| els[n]).collect();
            let r = model.re(&prod(&t));
            if !r.is_zero() {
                tot += r * q(perm_sign(p));
            }
        }
        raw.push((*x, tot));
    }
    let vals: Vec<Q> = raw.iter().map(|(_, v)| v.clone()).collect();
    let prim = primitive_integer(&vals);
    let entries = raw
        .iter()
        .zip(prim)
        .filter(|(_, v)| !v.is_zero())
        .map(|((x, _), v)| (*x, v))
        .collect();
    InvariantTensor { k, entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CasimirKind {
    C2G2,
    C6G2,
    C2Sl3,
    C3Sl3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Generator {
    /// D_{i,j} = h(F_{i,j})
    D(i8, i8),
    /// sl3 matrix unit E_{a,b}, a, b in 1..=3
    Sl3(u8, u8),
}

/// Cyclic contraction pattern: one entry per summand, each a product of generators.
pub fn casimir_word(which: CasimirKind) -> Vec<Vec<Generator>> {
    fn cyclic<T: Copy>(vals: &[T], order: usize, make: impl Fn(T, T) -> Generator) -> Vec<Vec<Generator>> {
        let mut out = Vec::new();
        let n = vals.len();
        let total = n.pow(order as u32);
        for mut code in 0..total {
            let mut idx = Vec::with_capacity(order);
            for _ in 0..order {
                idx.push(vals[code % n]);
                code /= n;
            }
            idx.reverse();
            out.push((0..order).map(|m| make(idx[m], idx[(m + 1) % order])).collect());
        }
        out
    }
    match which {
        CasimirKind::C2G2 => cyclic(&INDICES, 2, Generator::D),
        CasimirKind::C6G2 => cyclic(&INDICES, 6, Generator::D),
        CasimirKind::C2Sl3 => cyclic(&[1u8, 2, 3], 2, Generator::Sl3),
        CasimirKind::C3Sl3 => cyclic(&[1u8, 2, 3], 3, Generator::Sl3),
    }
}

pub fn is_nilpotent(x: &LieMatrix) -> bool {
    x.pow(8).is_zero()
}

/// exp(t X) for nilpotent X, as a finite sum.
pub fn exp_nilpotent(x: &LieMatrix, t: &Q) -> Result<QMatrix, AlgebraError> {
    if !is_nilpotent(x) {
        return Err(AlgebraError::NotNilpotent);
    }
    let tx = x.scale(t);
    let mut term = QMatrix::identity(8);
    let mut sum = QMatrix::identity(8);
    for n in 1..8 {
        term = (&term * &tx).scale(&qf(1, n));
        if term.is_zero() {
            break;
        }
        sum = &sum + &term;
    }
    Ok(sum)
}

pub fn sample_group_element(steps: &[(LieMatrix, Q)]) -> Result<QMatrix, AlgebraError> {
    let mut m = QMatrix::identity(8);
    for (x, t) in steps {
        m = &m * &exp_nilpotent(x, t)?;
    }
    Ok(m)
}

/// Seeded product of root-element exponentials over all 12 roots.
pub fn random_g2_element(alg: &G2Algebra, rng: &mut impl Rng) -> QMatrix {
    let steps: Vec<(LieMatrix, Q)> = alg
        .roots
        .iter()
        .map(|r| {
            let mut num = 0;
            while num == 0 {
                num = rng.gen_range(-3..=3);
            }
            (r.vector.clone(), qf(num, rng.gen_range(1..=3)))
        })
        .collect();
    sample_group_element(&steps).expect("root vectors are nilpotent")
}

pub fn format_matrix(m: &QMatrix) -> String {
    let mut s = String::new();
    for r in 0..m.rows {
        let row: Vec<String> = m.row(r).iter().map(fmt_q).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn is_abs_one(x: &BigInt) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (OctonionModel, G2Algebra) {
        let m = build_split_octonions().unwrap();
        let a = derivation_algebra(&m).unwrap();
        (m, a)
    }

    #[test]
    fn unit_norm_and_identity() {
        let m = build_split_octonions().unwrap();
        assert_eq!(m.norm(&m.unit_coords), Q::one());
        for i in INDICES {
            let e = Octonion::basis(i);
            assert_eq!(m.mul(&m.unit_coords, &e), e);
        }
        assert_eq!(m.unit_coords.coord(-1), &Q::one());
        assert_eq!(m.unit_coords.coord(1), &-Q::one());
    }

    #[test]
    fn g2_dimension_and_named_elements() {
        let (_, a) = setup();
        assert_eq!(a.basis.len(), 14);
        assert!(a.contains(&a.cartan[0]));
        assert!(a.contains(&f_unit(-3, -2)));
        assert!(a.contains(&f_unit(-4, 2)));
        for b in &a.basis {
            assert!(in_o8(b));
            assert!(a.contains(&b.transpose()));
        }
    }

    #[test]
    fn bracket_closure() {
        let (_, a) = setup();
        for x in &a.basis {
            for y in &a.basis {
                assert!(a.contains(&x.commutator(y)));
            }
        }
    }

    #[test]
    fn coroots_relate_to_cartan_elements() {
        let (_, a) = setup();
        assert_eq!(a.coroots[0], a.cartan[0].scale(&q(3)));
        assert_eq!(a.coroots[1], a.cartan[1]);
        let mut w: Vec<(i64, i64)> = a.positive_roots().map(|r| r.weight).collect();
        w.sort();
        let mut expect = vec![(2, -1), (-3, 2), (-1, 1), (1, 0), (3, -1), (0, 1)];
        expect.sort();
        assert_eq!(w, expect);
    }

    #[test]
    fn projection_properties() {
        let (_, a) = setup();
        assert_eq!(a.project_h(&f_unit(-3, -2)), f_unit(-3, -2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut f = QMatrix::zeros(8, 8);
            for i in INDICES {
                for j in INDICES {
                    if rng.gen_bool(0.3) {
                        f = &f + &f_unit(i, j).scale(&qf(rng.gen_range(-3..=3), rng.gen_range(1..=2)));
                    }
                }
            }
            let p = a.project_h(&f);
            assert_eq!(a.project_h(&p), p);
            let diff = &p - &f;
            for b in &a.basis {
                assert!((&diff * b).trace().is_zero());
            }
        }
    }

    #[test]
    fn omega_three_properties() {
        let (m, a) = setup();
        let w = invariant_tensor(&m, 3);
        assert!(!w.is_zero());
        for b in &a.basis {
            assert!(!w.derivation_defect(b));
            assert!(a.derivation_annihilates(&m, b));
        }
        for x in IndexSet::all().iter().filter(|x| x.len() == 3) {
            let e = x.elements();
            assert_eq!(w.eval(&[e[1], e[0], e[2]]), -w.eval(&e));
            assert_eq!(w.eval(&[e[0], e[2], e[1]]), -w.eval(&e));
        }
        // restricted to the complement of the identity it stays nonzero
        let nonzero_off_unit = w.entries.keys().any(|x| !x.contains(-1) && !x.contains(1));
        assert!(nonzero_off_unit);
    }

    #[test]
    fn tensor_zero_pattern() {
        let m = build_split_octonions().unwrap();
        assert!(invariant_tensor(&m, 2).is_zero());
        assert!(invariant_tensor(&m, 6).is_zero());
        for k in [3, 4, 5, 7] {
            assert!(!invariant_tensor(&m, k).is_zero(), "k = {k}");
        }
    }

    #[test]
    fn casimir_word_sizes() {
        assert_eq!(casimir_word(CasimirKind::C2G2).len(), 64);
        assert_eq!(casimir_word(CasimirKind::C2Sl3).len(), 9);
        assert_eq!(casimir_word(CasimirKind::C3Sl3).len(), 27);
        assert_eq!(casimir_word(CasimirKind::C6G2).len(), 262144);
        let w = casimir_word(CasimirKind::C2G2);
        assert_eq!(w[1], vec![Generator::D(-4, -3), Generator::D(-3, -4)]);
    }

    #[test]
    fn group_samples() {
        let (m, a) = setup();
        assert_eq!(sample_group_element(&[]).unwrap(), QMatrix::identity(8));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = random_g2_element(&a, &mut rng);
        let om = omega_form();
        assert_eq!(&(&g.transpose() * &om) * &g, om);
        // automorphism: g(xy) = g(x) g(y)
        let act = |x: &Octonion| Octonion(g.mul_vec(&x.0));
        for i in INDICES {
            for j in INDICES {
                let (x, y) = (Octonion::basis(i), Octonion::basis(j));
                assert_eq!(act(&m.mul(&x, &y)), m.mul(&act(&x), &act(&y)));
            }
        }
        assert_eq!(act(&m.unit_coords), m.unit_coords);
        assert!(exp_nilpotent(&QMatrix::identity(8), &q(1)).is_err());
    }

    #[test]
    fn sl3_relations() {
        let (_, a) = setup();
        let e = &a.sl3.e;
        for x in 0..3 {
            for y in 0..3 {
                assert!(a.contains(&e[x][y]));
                for z in 0..3 {
                    for w in 0..3 {
                        // [E_xy, E_zw] = d_yz E_xw - d_wx E_zy (traceless part on the diagonal)
                        let lhs = e[x][y].commutator(&e[z][w]);
                        let mut rhs = QMatrix::zeros(8, 8);
                        if y == z {
                            rhs = &rhs + &e[x][w];
                        }
                        if w == x {
                            rhs = &rhs - &e[z][y];
                        }
                        assert_eq!(lhs, rhs, "{x}{y} {z}{w}");
                    }
                }
            }
        }
    }
}
