//! Weighted grading: weights of privileged coordinates, the growth vector of
//! the bracket flag, nonholonomic orders and weighted-homogeneous parts.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::field::{lie_bracket, FieldKey, Frame, VectorField};
use crate::linalg::{EchelonSpan, SparseVec};
use crate::poly::{Monomial, Polynomial};
use crate::rational::Rational;

/// Nonholonomic order or weighted valuation; `Infinity` is the order of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(i64),
    Infinity,
}

impl Order {
    pub fn finite(self) -> Option<i64> {
        match self {
            Order::Finite(v) => Some(v),
            Order::Infinity => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinity => f.write_str("inf"),
        }
    }
}

/// Positive integer weights `w_1..w_n` of the coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|&&w| w == 0) {
            return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
        }
        Ok(WeightVector(weights))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    /// The step `r`, i.e. the largest weight.
    pub fn step(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn weighted_degree(&self, m: &Monomial) -> u32 {
        m.weighted_degree(&self.0)
    }

    /// Anisotropic dilation `x_j -> λ^{w_j} x_j`.
    pub fn dilate(&self, lambda: &Rational, p: &[Rational]) -> Vec<Rational> {
        p.iter()
            .zip(&self.0)
            .map(|(x, &w)| x * num_traits::pow(lambda.clone(), w as usize))
            .collect()
    }
}

impl TryFrom<Vec<u32>> for WeightVector {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<u32> {
    fn from(w: WeightVector) -> Vec<u32> {
        w.0
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Dimensions of the flag `Δ¹_p ⊂ Δ²_p ⊂ …` at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthVector {
    pub dims: Vec<usize>,
    pub step: usize,
}

/// Minimum weighted degree of the monomials of `f`.
pub fn weighted_valuation(f: &Polynomial, w: &WeightVector) -> Order {
    f.terms()
        .map(|(m, _)| w.weighted_degree(m))
        .min()
        .map_or(Order::Infinity, |d| Order::Finite(d as i64))
}

/// `min_j (valuation(X_j) - w_j)`.
pub fn nonholonomic_order_vf(x: &VectorField, w: &WeightVector) -> Order {
    x.components()
        .iter()
        .enumerate()
        .filter_map(|(j, c)| weighted_valuation(c, w).finite().map(|v| v - w.get(j) as i64))
        .min()
        .map_or(Order::Infinity, Order::Finite)
}

/// Largest order among the terms of `X`: `max_j (max weighted degree of X_j - w_j)`.
pub fn top_order(x: &VectorField, w: &WeightVector) -> Order {
    x.components()
        .iter()
        .enumerate()
        .flat_map(|(j, c)| c.terms().map(move |(m, _)| w.weighted_degree(m) as i64 - w.get(j) as i64))
        .max()
        .map_or(Order::Infinity, Order::Finite)
}

/// Keeps in component `j` exactly the monomials of weighted degree `w_j + s`.
pub fn homogeneous_component(x: &VectorField, s: i64, w: &WeightVector) -> VectorField {
    x.map_components(|j, c| {
        let target = w.get(j) as i64 + s;
        c.filter_terms(|m| w.weighted_degree(m) as i64 == target)
    })
}

/// All nonzero homogeneous components, keyed by order.
pub fn homogeneous_decomposition(x: &VectorField, w: &WeightVector) -> BTreeMap<i64, VectorField> {
    let mut orders: Vec<i64> = x
        .components()
        .iter()
        .enumerate()
        .flat_map(|(j, c)| c.terms().map(move |(m, _)| w.weighted_degree(m) as i64 - w.get(j) as i64))
        .collect();
    orders.sort_unstable();
    orders.dedup();
    orders
        .into_iter()
        .map(|s| (s, homogeneous_component(x, s, w)))
        .collect()
}

/// `Some(order)` when `X` is weighted-homogeneous (the zero field is
/// homogeneous of order `Infinity`), `None` otherwise.
pub fn homogeneous_order(x: &VectorField, w: &WeightVector) -> Option<Order> {
    let low = nonholonomic_order_vf(x, w);
    (low == top_order(x, w)).then_some(low)
}

pub fn default_max_depth(frame: &Frame) -> usize {
    (2 * frame.dim() * frame.max_degree() as usize).max(1)
}

/// Growth vector of the bracket flag at `p` and weights assigned to the
/// coordinates.
///
/// The flag is built level by level: level `s` holds brackets `[X_i, b]` of
/// frame fields with representatives `b` of level `s-1` that were new
/// modulo all lower levels. The weight multiset comes from the jumps of the
/// flag; coordinates receive those weights in increasing order of their own
/// nonholonomic order at `p` (ties by index), so privileged coordinates get
/// exactly their orders.
pub fn growth_vector(
    frame: &Frame,
    p: &[Rational],
    max_depth: Option<usize>,
) -> Result<(GrowthVector, WeightVector)> {
    let n = frame.dim();
    check_dim(n, p.len())?;
    let bound = max_depth.unwrap_or_else(|| default_max_depth(frame));
    let fields = frame.fields();

    let mut span: EchelonSpan<FieldKey> = EchelonSpan::new();
    let mut at_point: EchelonSpan<usize> = EchelonSpan::new();
    let mut level = Vec::new();
    for f in fields {
        if span.insert(&f.to_sparse()).is_some() {
            at_point.insert(&dense_to_sparse(&f.eval(p)?));
            level.push(f.clone());
        }
    }
    let mut dims = vec![at_point.len()];
    let mut depth = 1;
    while at_point.len() < n {
        if depth >= bound || level.is_empty() {
            return Err(Error::RankConditionFailure { reached: at_point.len(), dim: n, depth });
        }
        let mut next = Vec::new();
        for x in fields {
            for b in &level {
                let c = lie_bracket(x, b)?;
                if span.insert(&c.to_sparse()).is_some() {
                    at_point.insert(&dense_to_sparse(&c.eval(p)?));
                    next.push(c);
                }
            }
        }
        level = next;
        depth += 1;
        dims.push(at_point.len());
    }
    let step = dims.len();

    let mut multiset = Vec::with_capacity(n);
    let mut prev = 0;
    for (s, &d) in dims.iter().enumerate() {
        multiset.extend(std::iter::repeat_n((s + 1) as u32, d - prev));
        prev = d;
    }
    let orders = coordinate_orders(frame, p, step as u32)?;
    let mut by_order: Vec<usize> = (0..n).collect();
    by_order.sort_by_key(|&j| (orders[j].unwrap_or(u32::MAX), j));
    let mut weights = vec![0; n];
    for (rank, &j) in by_order.iter().enumerate() {
        weights[j] = multiset[rank];
    }
    Ok((GrowthVector { dims, step }, WeightVector::new(weights)?))
}

fn dense_to_sparse(v: &[Rational]) -> SparseVec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Nonholonomic order at `p` of each coordinate function `x_j - p_j`: the
/// least `s ≤ max_len` such that some `X_{i_1}…X_{i_s}(x_j)` is nonzero at
/// `p`, or `None` if there is none up to `max_len`.
///
/// Words are explored breadth-first, but only through a basis of the span
/// of all length-`s` derivatives, which is what the question depends on.
pub fn coordinate_orders(frame: &Frame, p: &[Rational], max_len: u32) -> Result<Vec<Option<u32>>> {
    let n = frame.dim();
    check_dim(n, p.len())?;
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut current = vec![&Polynomial::var(n, j) - &Polynomial::constant(n, p[j].clone())];
        let mut order = None;
        for s in 1..=max_len {
            let mut span: EchelonSpan<Monomial> = EchelonSpan::new();
            let mut next = Vec::new();
            for x in frame.fields() {
                for f in &current {
                    let g = x.apply(f)?;
                    let sparse: SparseVec<Monomial> =
                        g.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
                    if span.insert(&sparse).is_some() {
                        next.push(g);
                    }
                }
            }
            let mut hit = false;
            for g in &next {
                if !num_traits::Zero::is_zero(&g.eval(p)?) {
                    hit = true;
                    break;
                }
            }
            if hit {
                order = Some(s);
                break;
            }
            if next.is_empty() {
                break;
            }
            current = next;
        }
        out.push(order);
    }
    Ok(out)
}

/// True iff every coordinate `x_j` has nonholonomic order exactly `w_j` at `p`.
pub fn check_privileged(frame: &Frame, p: &[Rational], w: &WeightVector) -> Result<bool> {
    Ok(privileged_orders(frame, p, w)?.1)
}

/// Coordinate orders (explored up to `max(w)`) and whether they match `w`.
pub fn privileged_orders(
    frame: &Frame,
    p: &[Rational],
    w: &WeightVector,
) -> Result<(Vec<Option<u32>>, bool)> {
    check_dim(frame.dim(), w.len())?;
    let orders = coordinate_orders(frame, p, w.step())?;
    let ok = orders.iter().zip(w.as_slice()).all(|(o, &wj)| *o == Some(wj));
    Ok((orders, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, int};

    fn w(v: &[u32]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    fn var(n: usize, j: usize) -> Polynomial {
        Polynomial::var(n, j)
    }

    #[test]
    fn valuation_examples() {
        let xy = &var(3, 0) * &var(3, 1);
        assert_eq!(weighted_valuation(&xy, &w(&[1, 2, 5])), Order::Finite(3));
        assert_eq!(weighted_valuation(&Polynomial::zero(3), &w(&[1, 2, 5])), Order::Infinity);
        let f = &var(2, 1) - &var(2, 0).pow(2);
        assert_eq!(weighted_valuation(&f, &w(&[1, 3])), Order::Finite(2));
    }

    #[test]
    fn field_order_examples() {
        let w125 = w(&[1, 2, 5]);
        let xy_dz = VectorField::along(2, &var(3, 0) * &var(3, 1));
        let x2_dz = VectorField::along(2, var(3, 0).pow(2));
        assert_eq!(nonholonomic_order_vf(&xy_dz, &w125), Order::Finite(-2));
        assert_eq!(nonholonomic_order_vf(&x2_dz, &w125), Order::Finite(-3));
        assert_eq!(nonholonomic_order_vf(&VectorField::partial(3, 0), &w125), Order::Finite(-1));
        assert_eq!(nonholonomic_order_vf(&VectorField::zero(3), &w125), Order::Infinity);
    }

    #[test]
    fn homogeneous_component_examples() {
        let w1122 = w(&[1, 1, 2, 2]);
        let x4 = &VectorField::along(2, var(4, 0)) + &VectorField::along(3, var(4, 1).pow(2).scale(&frac(1, 2)));
        let expected = VectorField::along(3, var(4, 1).pow(2).scale(&frac(1, 2)));
        assert_eq!(homogeneous_component(&x4, 0, &w1122), expected);
        assert_eq!(homogeneous_component(&x4, -1, &w1122), VectorField::along(2, var(4, 0)));
        assert_eq!(homogeneous_order(&x4, &w1122), None);

        let w125 = w(&[1, 2, 5]);
        let dx = VectorField::partial(3, 0);
        assert_eq!(homogeneous_component(&dx, -1, &w125), dx);
        assert!(homogeneous_component(&dx, 0, &w125).is_zero());
    }

    #[test]
    fn decomposition_reconstructs() {
        let w1122 = w(&[1, 1, 2, 2]);
        let x = &(&VectorField::along(2, var(4, 0)) + &VectorField::along(3, var(4, 1).pow(2)))
            + &VectorField::along(0, var(4, 3));
        let parts = homogeneous_decomposition(&x, &w1122);
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![-1, 0, 1]);
        let sum = parts.values().fold(VectorField::zero(4), |a, b| &a + b);
        assert_eq!(sum, x);
    }

    #[test]
    fn growth_vectors_of_fixtures() {
        let origin = |n| vec![int(0); n];
        let e1 = fixtures::e1();
        let (g, wv) = growth_vector(&e1, &origin(3), None).unwrap();
        assert_eq!(g.dims, vec![1, 2, 2, 2, 3]);
        assert_eq!(g.step, 5);
        assert_eq!(wv, w(&[1, 2, 5]));

        let (g, wv) = growth_vector(&fixtures::e2(), &origin(4), None).unwrap();
        assert_eq!(g.dims, vec![2, 4]);
        assert_eq!(wv, w(&[1, 1, 2, 2]));

        let (_, wv) = growth_vector(&fixtures::e3(), &origin(5), None).unwrap();
        assert_eq!(wv, w(&[1, 1, 2, 1, 2]));
    }

    #[test]
    fn rank_condition_failure_detected() {
        // d/dx and x d/dx never reach d/dy.
        let f = Frame::from_fields(vec![VectorField::partial(2, 0), VectorField::along(0, var(2, 0))]).unwrap();
        let err = growth_vector(&f, &[int(0), int(0)], None).unwrap_err();
        assert!(matches!(err, Error::RankConditionFailure { reached: 1, dim: 2, .. }));
    }

    #[test]
    fn depth_bound_is_enforced() {
        let e1 = fixtures::e1();
        let err = growth_vector(&e1, &[int(0), int(0), int(0)], Some(4)).unwrap_err();
        assert!(matches!(err, Error::RankConditionFailure { reached: 2, .. }));
    }

    #[test]
    fn privileged_examples() {
        let o3 = vec![int(0); 3];
        let e1 = fixtures::e1();
        assert!(check_privileged(&e1, &o3, &w(&[1, 2, 5])).unwrap());
        assert!(!check_privileged(&e1, &o3, &w(&[1, 1, 1])).unwrap());
        assert!(check_privileged(&fixtures::e3(), &vec![int(0); 5], &w(&[1, 1, 2, 1, 2])).unwrap());
        let (orders, _) = privileged_orders(&e1, &o3, &w(&[1, 2, 5])).unwrap();
        assert_eq!(orders, vec![Some(1), Some(2), Some(5)]);
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(WeightVector::new(vec![1, 0]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
    }

    #[test]
    fn dilation() {
        let d = w(&[1, 2]).dilate(&int(2), &[int(1), int(1)]);
        assert_eq!(d, vec![int(2), int(4)]);
    }
}
