//! The 254 variable indices: proper nonempty subsets of {-4..-1, 1..4}.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

pub const INDICES: [i8; 8] = [-4, -3, -2, -1, 1, 2, 3, 4];
pub const NUM_SETS: usize = 254;

/// The chain order -4 < 2 < 3 < -3 < -2 < 4 < -1 < 1 used by the lattice generators.
pub const GT_ORDER: [i8; 8] = [-4, 2, 3, -3, -2, 4, -1, 1];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("invalid index {0}")]
    InvalidIndex(i64),
    #[error("index sequence does not form a proper nonempty subset")]
    NotProper,
}

/// Position of an index in integer order, 0..8.
pub fn pos(i: i8) -> usize {
    match i {
        -4..=-1 => (i + 4) as usize,
        1..=4 => (i + 3) as usize,
        _ => panic!("invalid index {i}"),
    }
}

pub fn check_index(i: i64) -> Result<i8, IndexError> {
    if (1..=4).contains(&i.abs()) {
        Ok(i as i8)
    } else {
        Err(IndexError::InvalidIndex(i))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSet {
    mask: u8,
}

struct Tables {
    sets: Vec<IndexSet>,
    id_of: [u16; 256],
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut by_size: Vec<Vec<u8>> = Vec::new();
        for mask in 1u16..255 {
            let m = mask as u8;
            let els: Vec<u8> = (0..8).filter(|b| m >> b & 1 == 1).collect();
            by_size.push(els);
        }
        // size first, then lexicographic on the ascending element list
        by_size.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut sets = Vec::with_capacity(NUM_SETS);
        let mut id_of = [u16::MAX; 256];
        for (n, els) in by_size.iter().enumerate() {
            let mask = els.iter().fold(0u8, |m, b| m | 1 << b);
            sets.push(IndexSet { mask });
            id_of[mask as usize] = n as u16;
        }
        Tables { sets, id_of }
    })
}

impl IndexSet {
    pub fn from_mask(mask: u8) -> Option<IndexSet> {
        if mask == 0 || mask == 0xff {
            None
        } else {
            Some(IndexSet { mask })
        }
    }

    /// Builds a set from already-distinct indices in any order.
    pub fn new(elems: &[i8]) -> Result<IndexSet, IndexError> {
        let s = canonicalize(elems)?;
        if s.sign == 0 {
            return Err(IndexError::NotProper);
        }
        Ok(s.set)
    }

    pub fn from_id(id: usize) -> IndexSet {
        tables().sets[id]
    }

    pub fn all() -> &'static [IndexSet] {
        &tables().sets
    }

    pub fn id(&self) -> usize {
        tables().id_of[self.mask as usize] as usize
    }

    pub fn mask(&self) -> u8 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: i8) -> bool {
        self.mask >> pos(i) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = i8> + '_ {
        (0..8).filter(move |b| self.mask >> b & 1 == 1).map(|b| INDICES[b])
    }

    pub fn elements(&self) -> Vec<i8> {
        self.iter().collect()
    }

    pub fn negate(&self) -> IndexSet {
        let mut m = 0u8;
        for i in self.iter() {
            m |= 1 << pos(-i);
        }
        IndexSet { mask: m }
    }

    pub fn complement_negate(&self) -> IndexSet {
        IndexSet {
            mask: !self.negate().mask,
        }
    }

    pub fn sum(&self) -> i64 {
        self.iter().map(|i| i as i64).sum()
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id().cmp(&other.id())
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedIndexSet {
    pub set: IndexSet,
    /// +1/-1 for the sorting permutation parity, 0 when an index repeats.
    pub sign: i8,
}

/// Sorts an index sequence, tracking the permutation sign.
pub fn canonicalize(seq: &[i8]) -> Result<SignedIndexSet, IndexError> {
    let mut mask = 0u8;
    let mut repeated = false;
    for &i in seq {
        check_index(i as i64)?;
        let b = 1u8 << pos(i);
        if mask & b != 0 {
            repeated = true;
        }
        mask |= b;
    }
    let set = IndexSet::from_mask(mask).ok_or(IndexError::NotProper)?;
    if repeated {
        return Ok(SignedIndexSet { set, sign: 0 });
    }
    let mut inversions = 0usize;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                inversions += 1;
            }
        }
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Ok(SignedIndexSet { set, sign })
}

/// Like [`canonicalize`] but also accepts the empty and the full sequence,
/// returning `None` for them.
pub fn try_canonicalize(seq: &[i8]) -> Option<SignedIndexSet> {
    canonicalize(seq).ok()
}

pub fn complement_negate(x: IndexSet) -> IndexSet {
    x.complement_negate()
}

fn parity_sign(e: i64) -> i8 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign in a_X = sign * a_{complement_negate(X)} on the group preserving the
/// antidiagonal form: (-1)^(k(k+1)/2 + sum of 1-based positions of X).
pub fn jacobi_sign(x: IndexSet) -> i8 {
    let k = x.len() as i64;
    let p: i64 = x.iter().map(|i| pos(i) as i64 + 1).sum();
    parity_sign(k * (k + 1) / 2 + p)
}

/// The index-sum form (-1)^(i_1+..+i_k) * (-1)^((k-9)k/2). Agrees with
/// [`jacobi_sign`] only on part of the sets; kept for comparison.
pub fn index_sum_sign(x: IndexSet) -> i8 {
    let k = x.len() as i64;
    parity_sign(x.sum() + (k - 9) * k / 2)
}

pub fn gt_rank(i: i8) -> usize {
    GT_ORDER.iter().position(|&g| g == i).expect("valid index")
}

pub fn gt_precedes(i: i8, j: i8) -> bool {
    gt_rank(i) < gt_rank(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_size_then_lex() {
        let all = IndexSet::all();
        assert_eq!(all.len(), NUM_SETS);
        assert_eq!(all[0].elements(), vec![-4]);
        assert_eq!(all[8].elements(), vec![-4, -3]);
        for w in all.windows(2) {
            let (a, b) = (w[0].elements(), w[1].elements());
            assert!(a.len() < b.len() || (a.len() == b.len() && a < b));
        }
        for (n, s) in all.iter().enumerate() {
            assert_eq!(s.id(), n);
        }
    }

    #[test]
    fn canonicalize_examples() {
        let s = canonicalize(&[-4]).unwrap();
        assert_eq!((s.set.elements(), s.sign), (vec![-4], 1));
        let s = canonicalize(&[-3, -4]).unwrap();
        assert_eq!((s.set.elements(), s.sign), (vec![-4, -3], -1));
        assert_eq!(canonicalize(&[2, 2, 3]).unwrap().sign, 0);
        assert_eq!(canonicalize(&[5]), Err(IndexError::InvalidIndex(5)));
        assert_eq!(canonicalize(&[0]), Err(IndexError::InvalidIndex(0)));
    }

    #[test]
    fn complement_negate_examples() {
        let x = IndexSet::new(&[-4]).unwrap();
        assert_eq!(x.complement_negate().elements(), vec![-4, -3, -2, -1, 1, 2, 3]);
        // -{-4,-3} = {3,4}
        let x = IndexSet::new(&[-4, -3]).unwrap();
        assert_eq!(x.complement_negate().elements(), vec![-4, -3, -2, -1, 1, 2]);
        for x in IndexSet::all() {
            assert_eq!(x.complement_negate().complement_negate(), *x);
            assert_eq!(x.complement_negate().len(), 8 - x.len());
        }
    }

    #[test]
    fn sign_examples() {
        let s = |v: &[i8]| IndexSet::new(v).unwrap();
        assert_eq!(jacobi_sign(s(&[-4])), 1);
        assert_eq!(jacobi_sign(s(&[-4, -3])), 1);
        assert_eq!(index_sum_sign(s(&[-4])), 1);
        assert_eq!(index_sum_sign(s(&[-4, -3])), 1);
        // (-1)^6 * (-1)^(-9)
        assert_eq!(index_sum_sign(s(&[1, 2, 3])), -1);
        assert_eq!(jacobi_sign(s(&[1, 2, 3])), 1);
    }

    #[test]
    fn jacobi_sign_pair_product_constant_per_size() {
        for k in 1..=7 {
            let prods: Vec<i8> = IndexSet::all()
                .iter()
                .filter(|x| x.len() == k)
                .map(|x| jacobi_sign(*x) * jacobi_sign(x.complement_negate()))
                .collect();
            assert!(prods.iter().all(|&p| p == prods[0]), "size {k}");
        }
    }

    #[test]
    fn self_paired_sets() {
        let fixed: Vec<&IndexSet> = IndexSet::all().iter().filter(|x| x.complement_negate() == **x).collect();
        assert_eq!(fixed.len(), 16);
        assert!(fixed.iter().all(|x| x.len() == 4));
        // sign +1 exactly when X has an even number of positive indices
        for x in &fixed {
            let pos_count = x.iter().filter(|&i| i > 0).count();
            assert_eq!(jacobi_sign(**x) == 1, pos_count % 2 == 0, "{x}");
        }
        assert_eq!(fixed.iter().filter(|x| jacobi_sign(***x) == -1).count(), 8);
    }

    #[test]
    fn gt_order_examples() {
        assert!(gt_precedes(-4, 2));
        assert!(!gt_precedes(1, -4));
        for i in INDICES {
            assert!(!gt_precedes(i, i));
            for j in INDICES {
                if i != j {
                    assert!(gt_precedes(i, j) ^ gt_precedes(j, i));
                }
                for k in INDICES {
                    if gt_precedes(i, j) && gt_precedes(j, k) {
                        assert!(gt_precedes(i, k));
                    }
                }
            }
        }
    }
}
