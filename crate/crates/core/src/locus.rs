//! The singular locus `Z = {det = 0}` and its corank strata `Z_r`.

pub mod roots;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::approx::fields_determinant;
use crate::error::{check_dim, Error, Result};
use crate::field::{frame_rank_at, Frame};
use crate::poly::Polynomial;
use crate::rational::Rational;

use roots::{RealRoot, UniPoly};

/// Determinant of the matrix whose columns are the frame fields.
pub fn frame_determinant(frame: &Frame) -> Polynomial {
    fields_determinant(frame.fields())
}

pub fn corank_at(frame: &Frame, p: &[Rational]) -> Result<usize> {
    Ok(frame.dim() - frame_rank_at(frame.fields(), p)?)
}

pub fn gradient(f: &Polynomial) -> Vec<Polynomial> {
    (0..f.dim()).map(|j| f.derivative(j)).collect()
}

fn gradient_at(frame: &Frame, p: &[Rational]) -> Result<Vec<Rational>> {
    gradient(&frame_determinant(frame)).iter().map(|g| g.eval(p)).collect()
}

fn require_z1(frame: &Frame, p: &[Rational]) -> Result<()> {
    let corank = corank_at(frame, p)?;
    if corank == 1 {
        Ok(())
    } else {
        Err(Error::NotOnZ1 { corank })
    }
}

/// True iff `det` has nonzero gradient at a corank-one point.
pub fn det_submersion_check(frame: &Frame, p: &[Rational]) -> Result<bool> {
    require_z1(frame, p)?;
    Ok(gradient_at(frame, p)?.iter().any(|g| !g.is_zero()))
}

/// True iff every frame vector at `p` is tangent to `Z_1`, i.e. lies in the
/// kernel of `d(det)_p`.
pub fn tangency_check(frame: &Frame, p: &[Rational]) -> Result<bool> {
    require_z1(frame, p)?;
    let grad = gradient_at(frame, p)?;
    if grad.iter().all(Zero::is_zero) {
        return Err(Error::DegenerateZ1);
    }
    for f in frame.fields() {
        let v = f.eval(p)?;
        let dot = v.iter().zip(&grad).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
        if !dot.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Seeded generator of rational points `a/b`, `|a| ≤ numerator_bound`,
/// `1 ≤ b ≤ denominator_bound`, with optional fixed coordinates.
#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub seed: u64,
    pub fixed: Vec<Option<Rational>>,
    pub numerator_bound: i64,
    pub denominator_bound: i64,
    /// Random lines on which `det = 0` is solved.
    pub lines: usize,
}

impl SamplerConfig {
    pub fn new(dim: usize, seed: u64) -> Self {
        SamplerConfig { seed, fixed: vec![None; dim], numerator_bound: 16, denominator_bound: 8, lines: 32 }
    }

    pub fn fix(mut self, j: usize, value: Rational) -> Self {
        self.fixed[j] = Some(value);
        self
    }

    fn coordinate(&self, rng: &mut ChaCha8Rng) -> Rational {
        let a = rng.gen_range(-self.numerator_bound..=self.numerator_bound);
        let b = rng.gen_range(1..=self.denominator_bound.max(1));
        Rational::new(a.into(), b.into())
    }

    fn point(&self, rng: &mut ChaCha8Rng) -> Vec<Rational> {
        self.fixed
            .iter()
            .map(|f| f.clone().unwrap_or_else(|| self.coordinate(rng)))
            .collect()
    }

    /// Integer direction, zero on fixed coordinates, never the zero vector
    /// unless every coordinate is fixed.
    fn direction(&self, rng: &mut ChaCha8Rng) -> Vec<Rational> {
        let free: Vec<usize> = (0..self.fixed.len()).filter(|&j| self.fixed[j].is_none()).collect();
        let mut v = vec![Rational::zero(); self.fixed.len()];
        if free.is_empty() {
            return v;
        }
        for &j in &free {
            v[j] = Rational::from_integer(rng.gen_range(-3i64..=3).into());
        }
        if v.iter().all(Zero::is_zero) {
            v[free[rng.gen_range(0..free.len())]] = Rational::one();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratumReport {
    pub r: usize,
    pub sample_count: usize,
    /// Points of corank `r` among the random samples and exact line roots.
    pub hits: Vec<Vec<Rational>>,
    /// How many of the hits came from line sections.
    pub line_hits: usize,
    /// `Some(1)` when random lines meet the stratum, otherwise unknown.
    pub estimated_codim: Option<usize>,
    pub predicted_codim: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stratification {
    pub samples: usize,
    /// Number of random samples of each corank `0..=n`.
    pub histogram: Vec<usize>,
    pub strata: Vec<StratumReport>,
    /// Exact rational roots found on lines.
    pub line_roots: usize,
    /// Irrational roots found on lines (not classified by corank).
    pub approximate_roots: usize,
}

/// `det` restricted to the line `p + t v`.
fn restrict_to_line(det: &Polynomial, p: &[Rational], v: &[Rational]) -> Result<UniPoly> {
    let t = Polynomial::var(1, 0);
    let images: Vec<Polynomial> = p
        .iter()
        .zip(v)
        .map(|(a, b)| &Polynomial::constant(1, a.clone()) + &t.scale(b))
        .collect();
    let r = det.substitute(&images)?;
    let degree = r.degree().unwrap_or(0) as usize;
    let mut coeffs = vec![Rational::zero(); degree + 1];
    for (m, c) in r.terms() {
        coeffs[m.exponents()[0] as usize] = c.clone();
    }
    Ok(UniPoly::new(coeffs))
}

/// Corank histogram over `budget` seeded random points, plus exact points of
/// `Z` found by solving `det = 0` on seeded random lines.
///
/// Points are drawn sequentially from the seed and evaluated in parallel, so
/// the result depends only on the seed.
pub fn stratify_samples(frame: &Frame, sampler: &SamplerConfig, budget: usize) -> Result<Stratification> {
    let n = frame.dim();
    check_dim(n, sampler.fixed.len())?;
    if budget == 0 {
        return Err(Error::InvalidFrame("sample budget must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let points: Vec<Vec<Rational>> = (0..budget).map(|_| sampler.point(&mut rng)).collect();
    let lines: Vec<(Vec<Rational>, Vec<Rational>)> =
        (0..sampler.lines).map(|_| (sampler.point(&mut rng), sampler.direction(&mut rng))).collect();

    let coranks: Vec<usize> = points
        .par_iter()
        .map(|p| corank_at(frame, p))
        .collect::<Result<_>>()?;

    let det = frame_determinant(frame);
    let mut line_points = Vec::new();
    let mut approximate_roots = 0;
    for (p, v) in &lines {
        if v.iter().all(Zero::is_zero) {
            continue;
        }
        let uni = restrict_to_line(&det, p, v)?;
        if uni.is_zero() {
            continue;
        }
        for root in uni.real_roots() {
            match root {
                RealRoot::Exact(t) => {
                    line_points.push(p.iter().zip(v).map(|(a, b)| a + b * &t).collect::<Vec<_>>())
                }
                RealRoot::Approximate { .. } => approximate_roots += 1,
            }
        }
    }
    let line_coranks: Vec<usize> = line_points
        .par_iter()
        .map(|p| corank_at(frame, p))
        .collect::<Result<_>>()?;

    let mut histogram = vec![0; n + 1];
    for &c in &coranks {
        histogram[c] += 1;
    }
    let strata = (1..=n)
        .map(|r| {
            let mut hits: Vec<Vec<Rational>> = points
                .iter()
                .zip(&coranks)
                .filter(|(_, &c)| c == r)
                .map(|(p, _)| p.clone())
                .collect();
            let from_lines: Vec<Vec<Rational>> = line_points
                .iter()
                .zip(&line_coranks)
                .filter(|(_, &c)| c == r)
                .map(|(p, _)| p.clone())
                .collect();
            let line_hits = from_lines.len();
            hits.extend(from_lines);
            StratumReport {
                r,
                sample_count: budget,
                hits,
                line_hits,
                estimated_codim: (line_hits > 0).then_some(1),
                predicted_codim: r * r,
            }
        })
        .collect();
    Ok(Stratification { samples: budget, histogram, strata, line_roots: line_points.len(), approximate_roots })
}

/// Codimension of corank-`r` matrices among `rows × cols` matrices:
/// `(rows - q + r)(cols - q + r)` with `q = min(rows, cols)`.
pub fn corank_codim(rows: usize, cols: usize, r: usize) -> usize {
    let q = rows.min(cols);
    (rows - q + r) * (cols - q + r)
}

/// Feasibility window in `n` for the set where `T_p Z_r + Δ_p` falls short
/// of its maximal dimension by exactly `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectBound {
    pub s: i64,
    pub lower: i64,
    pub upper: Option<i64>,
    pub feasible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorankRow {
    pub r: i64,
    /// Generic codimension `r²` of `Z_r`.
    pub codim: i64,
    pub dim: i64,
    /// Largest possible dimension of `T_p Z_r + Δ_p`: `min(n, 2n - r² - r)`.
    pub max_tangent_sum: i64,
    /// Defect windows for `s = 1` and every `s ≥ 2` with `s² ≤ r` (r ≥ 2).
    pub defects: Vec<DefectBound>,
    /// Smallest `s` whose defect set is empty (`s² > r`), for `r ≥ 2`.
    pub first_empty_defect: Option<i64>,
    /// For `r = 1`: points where `T_p Z_1 = Δ_p` are isolated.
    pub isolated_tangential_points: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityTable {
    pub n: i64,
    /// Largest `r` with `r² ≤ n`.
    pub max_corank: i64,
    pub rows: Vec<CorankRow>,
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Generic dimensions of the corank strata of an `n`-dimensional frame and
/// the defect windows of `T_p Z_r + Δ_p`.
pub fn genericity_codims(n: i64) -> Result<GenericityTable> {
    if n < 2 {
        return Err(Error::InvalidFrame(format!("dimension must be at least 2, got {n}")));
    }
    let big_r = isqrt(n);
    let rows = (1..=big_r)
        .map(|r| {
            let base = r * r + r;
            let mut defects = Vec::new();
            let mut first_empty_defect = None;
            if r >= 2 {
                let lower = base - (r - 1).div_euclid(2);
                defects.push(DefectBound { s: 1, lower, upper: None, feasible: n >= lower });
                let mut s = 2;
                while s * s <= r {
                    let lower = base - (r - s * s).div_euclid(s - 1);
                    let upper = base + (r - s * s).div_euclid(s + 1);
                    defects.push(DefectBound { s, lower, upper: Some(upper), feasible: lower <= n && n <= upper });
                    s += 1;
                }
                first_empty_defect = Some(s);
            }
            CorankRow {
                r,
                codim: r * r,
                dim: n - r * r,
                max_tangent_sum: n.min(2 * n - r * r - r),
                defects,
                first_empty_defect,
                isolated_tangential_points: r == 1,
            }
        })
        .collect();
    Ok(GenericityTable { n, max_corank: big_r, rows })
}
