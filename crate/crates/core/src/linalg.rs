//! Exact linear algebra over ℚ: incremental echelon spans for membership and
//! coordinate queries, fraction-free rank, and symbolic determinants.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Polynomial;
use crate::rational::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

/// `y += c * x`, dropping entries that cancel.
pub fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, c: &Rational, x: &SparseVec<K>) {
    if c.is_zero() {
        return;
    }
    for (k, v) in x {
        let entry = y.entry(k.clone()).or_insert_with(Rational::zero);
        *entry += c * v;
        if entry.is_zero() {
            y.remove(k);
        }
    }
}

fn axpy_dense(y: &mut Vec<Rational>, c: &Rational, x: &[Rational]) {
    if y.len() < x.len() {
        y.resize(x.len(), Rational::zero());
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}

#[derive(Clone, Debug)]
struct EchelonRow<K> {
    pivot: K,
    vec: SparseVec<K>,
    /// `vec` expressed in the inserted (original) vectors.
    combo: Vec<Rational>,
}

/// Reduced row-echelon basis of a growing subspace of a sparse vector space.
///
/// Each accepted vector is remembered by insertion index so that
/// [`coordinates`](Self::coordinates) can express members in terms of the
/// originally inserted vectors. Rows are kept fully reduced: every row is
/// zero at every other row's pivot.
#[derive(Clone, Debug)]
pub struct EchelonSpan<K: Ord + Clone> {
    rows: Vec<EchelonRow<K>>,
    count: usize,
}

impl<K: Ord + Clone> Default for EchelonSpan<K> {
    fn default() -> Self {
        EchelonSpan { rows: Vec::new(), count: 0 }
    }
}

impl<K: Ord + Clone> EchelonSpan<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Dimension of the span (number of accepted originals).
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Returns `(remainder, combo)` with `v = remainder + Σ combo_i orig_i`
    /// and `remainder` zero at every pivot.
    fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, Vec<Rational>) {
        let mut rem = v.clone();
        let mut combo = vec![Rational::zero(); self.count];
        for row in &self.rows {
            if let Some(c) = rem.get(&row.pivot).cloned() {
                axpy(&mut rem, &-&c, &row.vec);
                axpy_dense(&mut combo, &c, &row.combo);
            }
        }
        (rem, combo)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Coordinates of `v` in the accepted originals, `None` if outside the span.
    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<Vec<Rational>> {
        let (rem, combo) = self.reduce(v);
        rem.is_empty().then_some(combo)
    }

    /// Inserts `v`; returns its original index when it enlarges the span.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Option<usize> {
        let (rem, combo) = self.reduce(v);
        let (pivot, lead) = match rem.iter().next() {
            Some((k, c)) => (k.clone(), c.clone()),
            None => return None,
        };
        let index = self.count;
        self.count += 1;
        let inv = lead.recip();
        let mut new_combo: Vec<Rational> = combo.iter().map(|c| -c * &inv).collect();
        new_combo.push(inv.clone());
        let new_vec: SparseVec<K> = rem.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        for row in &mut self.rows {
            if let Some(c) = row.vec.get(&pivot).cloned() {
                axpy(&mut row.vec, &-&c, &new_vec);
                axpy_dense(&mut row.combo, &-&c, &new_combo);
            }
        }
        self.rows.push(EchelonRow { pivot, vec: new_vec, combo: new_combo });
        Some(index)
    }
}

/// Rank of a matrix over ℚ by fraction-free (Bareiss) elimination.
/// The pivot in each column is the first nonzero entry at or below the
/// current row.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    bareiss(rows).0
}

/// Determinant of a square rational matrix.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "square matrix required");
    let (rank, det) = bareiss(rows);
    if rank < n {
        Rational::zero()
    } else {
        det
    }
}

fn bareiss(rows: &[Vec<Rational>]) -> (usize, Rational) {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    // Clear denominators row by row; remember the scale for the determinant.
    let mut scale = Rational::one();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= Rational::from_integer(lcm.clone());
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = true;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            sign = !sign;
        }
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let v = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                m[i][j] = v / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    let det = Rational::from_integer(if sign { prev } else { -prev }) / scale;
    (rank, det)
}

/// Determinant of a square polynomial matrix `m[row][col]`, by Laplace
/// expansion along columns with memoised minors (O(n·2ⁿ) products).
pub fn polynomial_determinant(m: &[Vec<Polynomial>], dim: usize) -> Polynomial {
    let n = m.len();
    assert!(n < 64, "matrix too large for subset memoisation");
    assert!(m.iter().all(|r| r.len() == n), "square matrix required");
    let mut memo: HashMap<u64, Polynomial> = HashMap::new();
    minor(m, 0, if n == 0 { 0 } else { u64::MAX >> (64 - n) }, dim, &mut memo)
}

fn minor(
    m: &[Vec<Polynomial>],
    col: usize,
    rows: u64,
    dim: usize,
    memo: &mut HashMap<u64, Polynomial>,
) -> Polynomial {
    if col == m.len() {
        return Polynomial::one(dim);
    }
    if let Some(p) = memo.get(&rows) {
        return p.clone();
    }
    let mut acc = Polynomial::zero(dim);
    let mut position = 0;
    for i in 0..m.len() {
        if rows & (1 << i) == 0 {
            continue;
        }
        if !m[i][col].is_zero() {
            let sub = minor(m, col + 1, rows & !(1 << i), dim, memo);
            let term = &m[i][col] * &sub;
            acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        position += 1;
    }
    memo.insert(rows, acc.clone());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(entries: &[(usize, Rational)]) -> SparseVec<usize> {
        entries.iter().cloned().collect()
    }

    #[test]
    fn span_membership_and_coordinates() {
        let mut s = EchelonSpan::new();
        let a = v(&[(0, int(1)), (1, int(2))]);
        let b = v(&[(1, int(1)), (2, int(-1))]);
        assert_eq!(s.insert(&a), Some(0));
        assert_eq!(s.insert(&b), Some(1));
        let c = v(&[(0, int(2)), (1, int(7)), (2, int(-3))]);
        assert_eq!(s.insert(&c), None);
        assert_eq!(s.coordinates(&c), Some(vec![int(2), int(3)]));
        assert!(!s.contains(&v(&[(2, int(1))])));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn rank_and_det() {
        let m = vec![
            vec![int(1), frac(1, 2), int(0)],
            vec![int(2), int(1), int(0)],
            vec![int(0), int(0), int(3)],
        ];
        assert_eq!(rank(&m), 2);
        assert_eq!(determinant(&m), int(0));
        let m = vec![vec![int(0), int(2)], vec![frac(1, 3), int(5)]];
        assert_eq!(determinant(&m), frac(-2, 3));
        assert_eq!(rank(&[vec![int(0), int(0)]]), 0);
    }

    #[test]
    fn symbolic_det_2x2() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let m = vec![
            vec![Polynomial::one(2), Polynomial::zero(2)],
            vec![y.clone(), x.clone()],
        ];
        assert_eq!(polynomial_determinant(&m, 2), x);
        let m = vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]];
        assert_eq!(polynomial_determinant(&m, 2), &x.pow(2) - &y.pow(2));
    }
}
