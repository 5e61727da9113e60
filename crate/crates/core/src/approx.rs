//! The approximating frame.
//!
//! Given a frame in privileged coordinates at the origin:
//!
//! 1. keep, in input order, the fields whose values at 0 raise the rank;
//!    there are `k` of them;
//! 2. subtract from every other field the constant combination of the kept
//!    fields that cancels its value at 0, then keep, in input order, those
//!    whose order `-1` parts are independent of the parts kept so far; this
//!    brings the count to `m`;
//! 3. subtract from each remaining field the constant combination of kept
//!    fields that removes its order `-1` part, and replace it by its order `0`
//!    part.
//!
//! Every linear combination is recorded in [`ApproximationSet::transform`].

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::field::{FieldKey, Frame, VectorField};
use crate::grading::{homogeneous_component, WeightVector};
use crate::linalg::{self, EchelonSpan, SparseVec};
use crate::poly::Polynomial;
use crate::rational::Rational;

/// Order `-1` part of `X`.
pub fn nilpotent_approx(x: &VectorField, w: &WeightVector) -> VectorField {
    homogeneous_component(x, -1, w)
}

/// Order `0` part of `X`.
pub fn order_zero_component(x: &VectorField, w: &WeightVector) -> VectorField {
    homogeneous_component(x, 0, w)
}

/// True iff each monomial in component `j` has weighted degree at most `w_j`.
///
/// Such a field is linear in the top-weight coordinates of each level with
/// coefficients depending on lower levels only, so its flow is global.
pub fn check_triangular_complete(x: &VectorField, w: &WeightVector) -> bool {
    x.dim() == w.len()
        && x.components()
            .iter()
            .enumerate()
            .all(|(j, c)| c.terms().all(|(m, _)| w.weighted_degree(m) <= w.get(j)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Nonzero at the base point.
    Anchor,
    /// Vanishes at the base point, nonzero order `-1` part.
    Hat,
    /// Order `0` part of a field whose order `-1` part is dependent.
    Tilde,
}

#[derive(Clone, Debug)]
pub struct ApproximationSet {
    /// `X̂_1..X̂_m`.
    pub hat_fields: Vec<VectorField>,
    /// `X̃_{m+1}..X̃_n`.
    pub tilde_fields: Vec<VectorField>,
    pub k: usize,
    pub m: usize,
    /// Row `i` gives the coefficients on the original fields of the field
    /// whose approximation is the `i`-th output field.
    pub transform: Vec<Vec<Rational>>,
    /// Original index of each output field.
    pub source: Vec<usize>,
    /// Coefficients on the `k` anchor fields subtracted from each output
    /// field before taking its homogeneous part (all zero for anchors).
    pub offsets: Vec<Vec<Rational>>,
    /// True when the approximating fields are dependent (determinant ≡ 0).
    pub degenerate: bool,
    pub weights: WeightVector,
}

impl ApproximationSet {
    pub fn n(&self) -> usize {
        self.hat_fields.len() + self.tilde_fields.len()
    }

    /// All `n` approximating fields, hats first.
    pub fn fields(&self) -> Vec<VectorField> {
        self.hat_fields.iter().chain(&self.tilde_fields).cloned().collect()
    }

    pub fn anchors(&self) -> &[VectorField] {
        &self.hat_fields[..self.k]
    }

    pub fn role(&self, i: usize) -> Role {
        if i < self.k {
            Role::Anchor
        } else if i < self.m {
            Role::Hat
        } else {
            Role::Tilde
        }
    }

    pub fn transform_determinant(&self) -> Rational {
        linalg::determinant(&self.transform)
    }

    /// Applies the recorded transform to `fields`.
    pub fn transformed(&self, fields: &[VectorField]) -> Vec<VectorField> {
        self.transform
            .iter()
            .map(|row| {
                row.iter()
                    .zip(fields)
                    .filter(|(c, _)| !c.is_zero())
                    .fold(VectorField::zero(fields[0].dim()), |acc, (c, f)| &acc + &f.scale(c))
            })
            .collect()
    }
}

fn value_vector(v: &[Rational]) -> SparseVec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

fn unit_row(n: usize, i: usize) -> Vec<Rational> {
    let mut r = vec![Rational::zero(); n];
    r[i] = Rational::one();
    r
}

/// Determinant of the matrix whose columns are `fields`.
pub fn fields_determinant(fields: &[VectorField]) -> Polynomial {
    let n = fields.len();
    let m: Vec<Vec<Polynomial>> = (0..n)
        .map(|j| fields.iter().map(|f| f.component(j).clone()).collect())
        .collect();
    linalg::polynomial_determinant(&m, n)
}

/// Builds the approximating frame of `frame` at its base point: anchors,
/// then order `-1` parts, then order `0` parts.
///
/// The frame is first translated so the base point is the origin. The
/// returned set is flagged `degenerate` when its fields are dependent;
/// callers decide whether that is fatal.
pub fn build_approximation(frame: &Frame, w: &WeightVector) -> Result<ApproximationSet> {
    let n = frame.dim();
    check_dim(n, w.len())?;
    let frame = frame.centered()?;
    let fields = frame.fields();
    let origin = vec![Rational::zero(); n];

    // Anchors.
    let mut values: EchelonSpan<usize> = EchelonSpan::new();
    let mut anchors = Vec::new();
    for (i, f) in fields.iter().enumerate() {
        if values.insert(&value_vector(&f.eval(&origin)?)).is_some() {
            anchors.push(i);
        }
    }
    let k = anchors.len();
    if k == 0 {
        return Err(Error::InvalidFrame("every field vanishes at the base point".into()));
    }

    // Order -1 parts: cancel values at 0 with constant combinations of the anchors.
    let rest: Vec<usize> = (0..n).filter(|i| !anchors.contains(i)).collect();
    let mut adjusted: Vec<(usize, VectorField, Vec<Rational>)> = Vec::new();
    for &i in &rest {
        let coords = values
            .coordinates(&value_vector(&fields[i].eval(&origin)?))
            .expect("values at 0 lie in the span of the anchors");
        let mut y = fields[i].clone();
        for (c, &a) in coords.iter().zip(&anchors) {
            if !c.is_zero() {
                y = &y - &fields[a].scale(c);
            }
        }
        adjusted.push((i, y, coords));
    }

    let mut hats: EchelonSpan<FieldKey> = EchelonSpan::new();
    let mut hat_fields = Vec::new();
    let mut source = Vec::new();
    let mut offsets = Vec::new();
    // Pre-approximation field behind each accepted hat, as a row on originals.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for &a in &anchors {
        let h = nilpotent_approx(&fields[a], w);
        hats.insert(&h.to_sparse());
        hat_fields.push(h);
        source.push(a);
        offsets.push(vec![Rational::zero(); k]);
        rows.push(unit_row(n, a));
    }

    let mut leftovers = Vec::new();
    for (i, y, coords) in adjusted {
        let h = nilpotent_approx(&y, w);
        if !h.is_zero() && hats.insert(&h.to_sparse()).is_some() {
            let mut row = unit_row(n, i);
            for (c, &a) in coords.iter().zip(&anchors) {
                row[a] -= c;
            }
            hat_fields.push(h);
            source.push(i);
            offsets.push(coords);
            rows.push(row);
        } else {
            leftovers.push((i, y, coords));
        }
    }
    let m = hat_fields.len();

    // Order 0 parts: strip the order -1 part, keep the order 0 part.
    let mut tilde_fields = Vec::new();
    let hat_rows = rows.clone();
    for (i, y, mut coords) in leftovers {
        let h = nilpotent_approx(&y, w);
        let combo = hats
            .coordinates(&h.to_sparse())
            .expect("rejected order -1 parts lie in the accepted span");
        let mut row = unit_row(n, i);
        for (c, &a) in coords.iter().zip(&anchors) {
            row[a] -= c;
        }
        let mut z = y;
        for (l, c) in combo.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pre = combine(fields, &hat_rows[l]);
            z = &z - &pre.scale(c);
            for (r, h) in row.iter_mut().zip(&hat_rows[l]) {
                *r -= c * h;
            }
            for (o, off) in coords.iter_mut().zip(&offsets[l]) {
                *o -= c * off;
            }
            if l < k {
                coords[l] += c;
            }
        }
        tilde_fields.push(order_zero_component(&z, w));
        source.push(i);
        offsets.push(coords);
        rows.push(row);
    }

    let all: Vec<VectorField> = hat_fields.iter().chain(&tilde_fields).cloned().collect();
    let degenerate = fields_determinant(&all).is_zero();
    Ok(ApproximationSet {
        hat_fields,
        tilde_fields,
        k,
        m,
        transform: rows,
        source,
        offsets,
        degenerate,
        weights: w.clone(),
    })
}

fn combine(fields: &[VectorField], row: &[Rational]) -> VectorField {
    row.iter()
        .zip(fields)
        .filter(|(c, _)| !c.is_zero())
        .fold(VectorField::zero(fields[0].dim()), |acc, (c, f)| &acc + &f.scale(c))
}
