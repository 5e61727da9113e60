//! Polynomial vector fields, their Lie brackets, and frames.

use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, SparseVec};
use crate::poly::{default_names, Monomial, Polynomial};
use crate::rational::Rational;

/// Key of a vector field's coordinate in the ℚ-vector space of polynomial
/// vector fields: (component index, monomial).
pub type FieldKey = (usize, Monomial);

/// `Σ_j components[j] ∂/∂x_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    components: Vec<Polynomial>,
}

impl VectorField {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let n = components.len();
        for c in &components {
            check_dim(n, c.dim())?;
        }
        Ok(VectorField { components })
    }

    pub fn zero(dim: usize) -> Self {
        VectorField { components: vec![Polynomial::zero(dim); dim] }
    }

    /// `coefficient · ∂/∂x_j`.
    pub fn along(j: usize, coefficient: Polynomial) -> Self {
        let dim = coefficient.dim();
        let mut f = Self::zero(dim);
        f.components[j] = coefficient;
        f
    }

    /// The constant field `∂/∂x_j`.
    pub fn partial(dim: usize, j: usize) -> Self {
        Self::along(j, Polynomial::one(dim))
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &Polynomial {
        &self.components[j]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Largest total degree among components, `None` for the zero field.
    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Polynomial::degree).max()
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        VectorField { components: self.components.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn map_components(&self, mut f: impl FnMut(usize, &Polynomial) -> Polynomial) -> VectorField {
        VectorField {
            components: self.components.iter().enumerate().map(|(j, p)| f(j, p)).collect(),
        }
    }

    /// Directional derivative `X f = Σ_j X_j ∂f/∂x_j`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        check_dim(self.dim(), f.dim())?;
        let mut out = Polynomial::zero(f.dim());
        for (j, xj) in self.components.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            let d = f.derivative(j);
            if !d.is_zero() {
                out = &out + &(xj * &d);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.dim(), point.len())?;
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    pub fn eval_f64(&self, point: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval_f64(point)).collect()
    }

    pub fn translate(&self, shift: &[Rational]) -> Result<VectorField> {
        Ok(VectorField {
            components: self.components.iter().map(|c| c.translate(shift)).collect::<Result<_>>()?,
        })
    }

    /// Coordinates in the monomial basis of polynomial vector fields.
    pub fn to_sparse(&self) -> SparseVec<FieldKey> {
        let mut v = SparseVec::new();
        for (j, c) in self.components.iter().enumerate() {
            for (m, a) in c.terms() {
                v.insert((j, m.clone()), a.clone());
            }
        }
        v
    }

    pub fn from_sparse(dim: usize, v: &SparseVec<FieldKey>) -> VectorField {
        let mut comps = vec![Vec::new(); dim];
        for ((j, m), c) in v {
            comps[*j].push((c.clone(), m.exponents().to_vec()));
        }
        VectorField {
            components: comps.into_iter().map(|t| Polynomial::from_terms(dim, t)).collect(),
        }
    }

    /// Frame-file syntax with one term per monomial, e.g.
    /// `x d/dy + 1/2 x^2 d/dz`; `0` for the zero field.
    pub fn to_text(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (j, c) in self.components.iter().enumerate() {
            for (m, a) in c.terms().rev() {
                let term = Polynomial::monomial(c.dim(), m.clone(), a.abs()).to_text(names);
                let neg = a.is_negative();
                match (out.is_empty(), neg) {
                    (true, true) => out.push('-'),
                    (true, false) => {}
                    (false, true) => out.push_str(" - "),
                    (false, false) => out.push_str(" + "),
                }
                if term != "1" {
                    out.push_str(&term);
                    out.push(' ');
                }
                out.push_str("d/d");
                out.push_str(&names[j]);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl std::fmt::Display for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text(&default_names(self.dim())))
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.dim(), rhs.dim(), "vector field dimension mismatch");
        self.map_components(|j, p| p + &rhs.components[j])
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.dim(), rhs.dim(), "vector field dimension mismatch");
        self.map_components(|j, p| p - &rhs.components[j])
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        self.map_components(|_, p| -p)
    }
}

/// Lie bracket `[X, Y]_j = X(Y_j) - Y(X_j)`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    check_dim(x.dim(), y.dim())?;
    let components = (0..x.dim())
        .map(|j| Ok(&x.apply(&y.components[j])? - &y.apply(&x.components[j])?))
        .collect::<Result<Vec<_>>>()?;
    Ok(VectorField { components })
}

/// Rank over ℚ of the vectors `X_i(p)`.
pub fn frame_rank_at(fields: &[VectorField], point: &[Rational]) -> Result<usize> {
    let rows = fields.iter().map(|f| f.eval(point)).collect::<Result<Vec<_>>>()?;
    Ok(linalg::rank(&rows))
}

/// `n` polynomial vector fields on ℝⁿ with coordinate names and a base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    var_names: Vec<String>,
    fields: Vec<VectorField>,
    base_point: Vec<Rational>,
}

impl Frame {
    pub fn new(var_names: Vec<String>, fields: Vec<VectorField>) -> Result<Self> {
        let n = var_names.len();
        Self::with_base_point(var_names, fields, vec![Rational::zero(); n])
    }

    pub fn with_base_point(
        var_names: Vec<String>,
        fields: Vec<VectorField>,
        base_point: Vec<Rational>,
    ) -> Result<Self> {
        let n = var_names.len();
        if n == 0 {
            return Err(Error::InvalidFrame("a frame needs at least one coordinate".into()));
        }
        for (i, a) in var_names.iter().enumerate() {
            if var_names[..i].contains(a) {
                return Err(Error::InvalidFrame(format!("duplicate coordinate name `{a}`")));
            }
        }
        if fields.len() != n {
            return Err(Error::InvalidFrame(format!(
                "an almost-Riemannian frame on R^{n} needs exactly {n} fields, got {}",
                fields.len()
            )));
        }
        for f in &fields {
            check_dim(n, f.dim())?;
        }
        check_dim(n, base_point.len())?;
        Ok(Frame { var_names, fields, base_point })
    }

    /// Frame with default names `x1..xn` at the origin.
    pub fn from_fields(fields: Vec<VectorField>) -> Result<Self> {
        let n = fields.first().map_or(0, VectorField::dim);
        Self::new(default_names(n), fields)
    }

    pub fn dim(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn base_point(&self) -> &[Rational] {
        &self.base_point
    }

    pub fn max_degree(&self) -> u32 {
        self.fields.iter().filter_map(VectorField::degree).max().unwrap_or(0)
    }

    /// The same frame in coordinates centred at the base point.
    pub fn centered(&self) -> Result<Frame> {
        if self.base_point.iter().all(Zero::is_zero) {
            return Ok(self.clone());
        }
        let fields = self
            .fields
            .iter()
            .map(|f| f.translate(&self.base_point))
            .collect::<Result<Vec<_>>>()?;
        Frame::new(self.var_names.clone(), fields)
    }
}
