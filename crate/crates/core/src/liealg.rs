//! Finite-dimensional Lie algebras of polynomial vector fields.
//!
//! A [`LieBasis`] stores a basis together with its structure constants, so
//! series computations (lower central, derived) run on coordinate vectors
//! rather than on fields.

use num_traits::Zero;
use serde::Serialize;

use crate::approx::ApproximationSet;
use crate::error::{Error, Result};
use crate::field::{frame_rank_at, lie_bracket, FieldKey, VectorField};
use crate::grading::{homogeneous_component, WeightVector};
use crate::linalg::{EchelonSpan, SparseVec};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct LieBasis {
    dim: usize,
    basis: Vec<VectorField>,
    /// `structure[i][j][k] = c^k_{ij}` with `[b_i, b_j] = Σ_k c^k_{ij} b_k`.
    structure: Vec<Vec<Vec<Rational>>>,
    span: EchelonSpan<FieldKey>,
}

impl LieBasis {
    /// Builds a basis from independent fields whose span is closed under
    /// brackets; `None` if some bracket leaves the span.
    pub fn from_closed(dim: usize, basis: Vec<VectorField>) -> Result<Option<LieBasis>> {
        let mut span = EchelonSpan::new();
        for b in &basis {
            if span.insert(&b.to_sparse()).is_none() {
                return Err(Error::InvalidFrame("basis elements are dependent".into()));
            }
        }
        let d = basis.len();
        let mut structure = vec![vec![vec![Rational::zero(); d]; d]; d];
        for i in 0..d {
            for j in i + 1..d {
                let c = lie_bracket(&basis[i], &basis[j])?;
                let Some(coords) = span.coordinates(&c.to_sparse()) else {
                    return Ok(None);
                };
                structure[j][i] = coords.iter().map(|x| -x).collect();
                structure[i][j] = coords;
            }
        }
        Ok(Some(LieBasis { dim, basis, structure, span }))
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[VectorField] {
        &self.basis
    }

    pub fn structure_constants(&self, i: usize, j: usize) -> &[Rational] {
        &self.structure[i][j]
    }

    pub fn contains(&self, x: &VectorField) -> bool {
        self.span.contains(&x.to_sparse())
    }

    pub fn coordinates(&self, x: &VectorField) -> Option<Vec<Rational>> {
        self.span.coordinates(&x.to_sparse())
    }

    /// `Σ u_i b_i`.
    pub fn element(&self, u: &[Rational]) -> VectorField {
        u.iter()
            .zip(&self.basis)
            .filter(|(c, _)| !c.is_zero())
            .fold(VectorField::zero(self.dim), |acc, (c, b)| &acc + &b.scale(c))
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket_coords(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let d = self.len();
        let mut out = vec![Rational::zero(); d];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() || i == j {
                    continue;
                }
                let s = ui * vj;
                for (o, c) in out.iter_mut().zip(&self.structure[i][j]) {
                    if !c.is_zero() {
                        *o += &s * c;
                    }
                }
            }
        }
        out
    }

    /// Basis of `[A, B]` for subspaces given by coordinate bases.
    fn commutator(&self, a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let mut span: EchelonSpan<usize> = EchelonSpan::new();
        let mut out = Vec::new();
        for u in a {
            for v in b {
                let c = self.bracket_coords(u, v);
                if span.insert(&dense(&c)).is_some() {
                    out.push(c);
                }
            }
        }
        out
    }

    fn unit_basis(&self) -> Vec<Vec<Rational>> {
        (0..self.len())
            .map(|i| {
                let mut e = vec![Rational::zero(); self.len()];
                e[i] = num_traits::One::one();
                e
            })
            .collect()
    }
}

fn dense(v: &[Rational]) -> SparseVec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

fn check_degree(x: &VectorField, bound: Option<u32>) -> Result<()> {
    if let (Some(bound), Some(degree)) = (bound, x.degree()) {
        if degree > bound {
            return Err(Error::DegreeBoundExceeded { degree, bound });
        }
    }
    Ok(())
}

/// Lie algebra generated by `generators`.
///
/// Brackets are taken breadth-first: each new element is bracketed with all
/// earlier ones, in index order. With `degree_bound = Some(r)` any bracket of
/// polynomial degree above `r` aborts the closure.
pub fn lie_closure(generators: &[VectorField], degree_bound: Option<u32>) -> Result<LieBasis> {
    let dim = generators
        .first()
        .map(VectorField::dim)
        .ok_or_else(|| Error::InvalidFrame("no generators".into()))?;
    let mut span = EchelonSpan::new();
    let mut basis: Vec<VectorField> = Vec::new();
    for g in generators {
        check_degree(g, degree_bound)?;
        if span.insert(&g.to_sparse()).is_some() {
            basis.push(g.clone());
        }
    }
    let mut a = 1;
    while a < basis.len() {
        for b in 0..a {
            let c = lie_bracket(&basis[b], &basis[a])?;
            if c.is_zero() {
                continue;
            }
            check_degree(&c, degree_bound)?;
            if span.insert(&c.to_sparse()).is_some() {
                basis.push(c);
            }
        }
        a += 1;
    }
    Ok(LieBasis::from_closed(dim, basis)?.expect("closure is closed"))
}

/// Smallest ideal of `l` containing `generators`.
pub fn ideal_closure(l: &LieBasis, generators: &[VectorField]) -> Result<LieBasis> {
    let mut span = EchelonSpan::new();
    let mut basis: Vec<VectorField> = Vec::new();
    for g in generators {
        if !l.contains(g) {
            return Err(Error::InvalidFrame("ideal generator outside the algebra".into()));
        }
        if span.insert(&g.to_sparse()).is_some() {
            basis.push(g.clone());
        }
    }
    let mut next = 0;
    while next < basis.len() {
        for x in l.basis() {
            let c = lie_bracket(x, &basis[next])?;
            if !c.is_zero() && span.insert(&c.to_sparse()).is_some() {
                basis.push(c);
            }
        }
        next += 1;
    }
    Ok(LieBasis::from_closed(l.ambient_dim(), basis)?.expect("an ideal is a subalgebra"))
}

/// Length of the lower central series: the least `s` with `L^{s+1} = 0`
/// (`1` for abelian, `0` for the zero algebra), `None` if not nilpotent.
pub fn nilpotent_step(l: &LieBasis) -> Option<usize> {
    let all = l.unit_basis();
    let mut term = all.clone();
    let mut step = 0;
    while !term.is_empty() {
        let next = l.commutator(&all, &term);
        if next.len() == term.len() {
            return None;
        }
        term = next;
        step += 1;
    }
    Some(step)
}

/// True iff the derived series reaches zero.
pub fn is_solvable(l: &LieBasis) -> bool {
    derived_length(l).is_some()
}

/// Number of nonzero terms in the derived series, `None` if it stalls.
pub fn derived_length(l: &LieBasis) -> Option<usize> {
    let mut term = l.unit_basis();
    let mut len = 0;
    while !term.is_empty() {
        let next = l.commutator(&term, &term);
        if next.len() == term.len() {
            return None;
        }
        term = next;
        len += 1;
    }
    Some(len)
}

/// Matrix `D` of `ad X` on `g`: `[X, b_j] = Σ_i D[i][j] b_i`.
pub fn adjoint_matrix(x: &VectorField, g: &LieBasis) -> Result<Vec<Vec<Rational>>> {
    let d = g.len();
    let mut m = vec![vec![Rational::zero(); d]; d];
    for (j, b) in g.basis().iter().enumerate() {
        let c = lie_bracket(x, b)?;
        let coords = g.coordinates(&c).ok_or(Error::NotInvariant)?;
        for (i, v) in coords.into_iter().enumerate() {
            m[i][j] = v;
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Invariant,
    Linear,
    Affine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// One label per approximating field, in the approximation's order.
    pub labels: Vec<FieldKind>,
    /// Approximating fields reordered so that invariant fields come first.
    pub order: Vec<usize>,
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub lie_dim: usize,
    pub ideal_dim: usize,
    pub ideal_nilpotent_step: Option<usize>,
    pub lie_solvable: bool,
}

/// Labels each approximating field.
///
/// Fields of the ideal are invariant. Any other field must normalize the
/// ideal; it is affine when its construction subtracted a nonzero
/// combination of the anchor fields and linear otherwise. Order `0` fields
/// are linear.
pub fn classify_fields(a: &ApproximationSet, l: &LieBasis, g: &LieBasis) -> Result<Classification> {
    if a.degenerate {
        return Err(Error::DegenerateApproximation);
    }
    let fields = a.fields();
    let mut labels = Vec::with_capacity(fields.len());
    for (i, f) in fields.iter().enumerate() {
        let kind = if i < a.k || (i < a.m && g.contains(f)) {
            FieldKind::Invariant
        } else {
            adjoint_matrix(f, g)?;
            if i < a.m && a.offsets[i].iter().any(|c| !c.is_zero()) {
                FieldKind::Affine
            } else {
                FieldKind::Linear
            }
        };
        labels.push(kind);
    }
    let mut order: Vec<usize> = (0..fields.len()).collect();
    order.sort_by_key(|&i| (labels[i] != FieldKind::Invariant, i));
    let l_index = labels.iter().filter(|&&k| k == FieldKind::Invariant).count();
    Ok(Classification {
        labels,
        order,
        k: a.k,
        l: l_index,
        m: a.m,
        lie_dim: l.len(),
        ideal_dim: g.len(),
        ideal_nilpotent_step: nilpotent_step(g),
        lie_solvable: is_solvable(l),
    })
}

/// True iff the values of `g`'s basis at `p` span ℝⁿ.
pub fn rank_condition_at_zero(g: &LieBasis, p: &[Rational]) -> Result<bool> {
    Ok(frame_rank_at(g.basis(), p)? == g.ambient_dim())
}

/// Fields `Y_1..Y_n` of `g`, `Y_i` homogeneous of order `-w_i` and of the
/// form `∂/∂x_i + Σ_{w_j > w_i} y_j ∂/∂x_j`.
pub fn graded_frame(g: &LieBasis, w: &WeightVector) -> Result<Vec<VectorField>> {
    let n = g.ambient_dim();
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: w.len() });
    }
    let origin = vec![Rational::zero(); n];
    let mut out: Vec<Option<VectorField>> = vec![None; n];
    let mut levels: Vec<u32> = w.as_slice().to_vec();
    levels.sort_unstable();
    levels.dedup();
    for v in levels {
        let coords: Vec<usize> = (0..n).filter(|&j| w.get(j) == v).collect();
        let mut span: EchelonSpan<usize> = EchelonSpan::new();
        let mut candidates = Vec::new();
        for b in g.basis() {
            let c = homogeneous_component(b, -(v as i64), w);
            if c.is_zero() {
                continue;
            }
            let val = c.eval(&origin)?;
            if span.insert(&dense(&val)).is_some() {
                candidates.push(c);
            }
        }
        for &i in &coords {
            let mut e = SparseVec::new();
            e.insert(i, num_traits::One::one());
            let combo = span.coordinates(&e).ok_or_else(|| {
                Error::GradedFrameUnavailable(format!("no element of order -{v} reaches coordinate {}", i + 1))
            })?;
            let y = combo
                .iter()
                .zip(&candidates)
                .filter(|(c, _)| !c.is_zero())
                .fold(VectorField::zero(n), |acc, (c, f)| &acc + &f.scale(c));
            if !g.contains(&y) {
                return Err(Error::GradedFrameUnavailable(
                    "the algebra is not spanned by homogeneous elements".into(),
                ));
            }
            out[i] = Some(y);
        }
    }
    Ok(out.into_iter().map(|y| y.expect("every coordinate has a level")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::build_approximation;
    use crate::fixtures;
    use crate::poly::Polynomial;
    use crate::rational::int;

    fn var(n: usize, j: usize) -> Polynomial {
        Polynomial::var(n, j)
    }

    fn w(v: &[u32]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_generator() {
        let l = lie_closure(&[VectorField::partial(2, 0)], None).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(nilpotent_step(&l), Some(1));
        assert!(is_solvable(&l));
    }

    #[test]
    fn e1_algebra() {
        let e1 = fixtures::e1();
        let l = lie_closure(e1.fields(), Some(5)).unwrap();
        assert_eq!(l.len(), 9);
        let g = ideal_closure(&l, &e1.fields()[..1]).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(nilpotent_step(&g), Some(2));
        assert!(rank_condition_at_zero(&g, &[int(0), int(0), int(0)]).unwrap());
        let frame = graded_frame(&g, &w(&[1, 2, 5])).unwrap();
        for (j, y) in frame.iter().enumerate() {
            assert_eq!(y, &VectorField::partial(3, j));
        }
        let d = adjoint_matrix(&e1.fields()[1], &g).unwrap();
        assert_eq!(d.len(), 5);
    }

    #[test]
    fn degree_bound() {
        let e1 = fixtures::e1();
        assert!(matches!(
            lie_closure(e1.fields(), Some(1)),
            Err(Error::DegreeBoundExceeded { degree: 2, bound: 1 })
        ));
    }

    #[test]
    fn sl2_is_not_solvable() {
        let e3 = fixtures::e3();
        let x4 = e3.fields()[3].clone();
        let x5 = e3.fields()[4].clone();
        let l = lie_closure(&[x4, x5], None).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(nilpotent_step(&l), None);
        assert!(!is_solvable(&l));
    }

    #[test]
    fn classification_e1() {
        let e1 = fixtures::e1();
        let a = build_approximation(&e1, &w(&[1, 2, 5])).unwrap();
        let l = lie_closure(&a.fields(), Some(5)).unwrap();
        let g = ideal_closure(&l, a.anchors()).unwrap();
        let c = classify_fields(&a, &l, &g).unwrap();
        assert_eq!(c.labels, vec![FieldKind::Invariant, FieldKind::Linear, FieldKind::Linear]);
        assert_eq!((c.k, c.l, c.m), (1, 1, 3));
    }

    #[test]
    fn affine_label() {
        let f = crate::field::Frame::from_fields(vec![
            VectorField::partial(2, 0),
            &VectorField::partial(2, 0) + &VectorField::along(1, var(2, 0)),
        ])
        .unwrap();
        let a = build_approximation(&f, &w(&[1, 2])).unwrap();
        let l = lie_closure(&a.fields(), Some(2)).unwrap();
        let g = ideal_closure(&l, a.anchors()).unwrap();
        let c = classify_fields(&a, &l, &g).unwrap();
        assert_eq!(c.labels, vec![FieldKind::Invariant, FieldKind::Affine]);
    }

    #[test]
    fn missing_level_is_reported() {
        let g = lie_closure(&[VectorField::partial(3, 0), VectorField::partial(3, 1)], None).unwrap();
        assert!(matches!(graded_frame(&g, &w(&[1, 2, 5])), Err(Error::GradedFrameUnavailable(_))));
        let g = lie_closure(&[VectorField::along(1, var(2, 0))], None).unwrap();
        assert!(!rank_condition_at_zero(&g, &[int(0), int(0)]).unwrap());
    }

    #[test]
    fn adjoint_outside_is_not_invariant() {
        let g = lie_closure(&[VectorField::partial(2, 0)], None).unwrap();
        let x = VectorField::along(1, var(2, 0));
        assert_eq!(adjoint_matrix(&x, &g), Err(Error::NotInvariant));
        let zero = adjoint_matrix(&VectorField::partial(2, 1), &g).unwrap();
        assert_eq!(zero, vec![vec![int(0)]]);
    }
}
