//! Flows of polynomial vector fields.
//!
//! For triangular fields the exponential series `Σ tˢ/s! Xˢ(x_j)` evaluated
//! at the start point gives the flow; it terminates when the field lowers
//! weighted degree. A fixed-step RK4 integrator serves as the numeric
//! reference and as the engine of the completeness probe.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::approx::check_triangular_complete;
use crate::error::{check_dim, Error, Result};
use crate::field::VectorField;
use crate::grading::WeightVector;
use crate::poly::Polynomial;
use crate::rational::{to_f64, Rational};

pub const DEFAULT_SERIES_TERMS: usize = 40;
pub const DEFAULT_BLOWUP_THRESHOLD: f64 = 1e12;
pub const DEFAULT_RATE_BOUND: f64 = 1e6;

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesFlow {
    pub point: Vec<Rational>,
    /// Number of series terms used per coordinate.
    pub terms: Vec<usize>,
    /// True when every coordinate series terminated.
    pub exact: bool,
    /// Magnitude of the last retained term where a series was cut.
    pub tail_estimate: f64,
}

/// Flow of a triangular field from `p` for time `t` by the Lie series.
///
/// Each coordinate series stops when `Xˢ(x_j)` vanishes identically, or
/// after `max_terms` terms, in which case the result is flagged inexact.
pub fn lie_series_flow(
    x: &VectorField,
    p: &[Rational],
    t: &Rational,
    w: &WeightVector,
    max_terms: usize,
) -> Result<SeriesFlow> {
    let n = x.dim();
    check_dim(n, p.len())?;
    if !check_triangular_complete(x, w) {
        return Err(Error::NonTriangularField);
    }
    let mut point = Vec::with_capacity(n);
    let mut terms = Vec::with_capacity(n);
    let mut exact = true;
    let mut tail = 0f64;
    for j in 0..n {
        let mut f = Polynomial::var(n, j);
        let mut coeff = Rational::one();
        let mut sum = Rational::zero();
        let mut s = 0;
        loop {
            if f.is_zero() {
                break;
            }
            if s == max_terms {
                exact = false;
                break;
            }
            let term = &coeff * f.eval(p)?;
            if s + 1 == max_terms {
                tail = tail.max(to_f64(&term).abs());
            }
            sum += term;
            s += 1;
            coeff = coeff * t / Rational::from_integer((s as i64).into());
            f = x.apply(&f)?;
        }
        point.push(sum);
        terms.push(s);
    }
    Ok(SeriesFlow { point, terms, exact, tail_estimate: if exact { 0.0 } else { tail } })
}

/// Coefficient and sparse `(variable, power)` factors of one monomial.
type CompiledTerm = (f64, Vec<(usize, i32)>);

/// Polynomial field with `f64` coefficients, for fast evaluation.
#[derive(Clone, Debug)]
pub struct CompiledField {
    components: Vec<Vec<CompiledTerm>>,
}

impl CompiledField {
    pub fn new(x: &VectorField) -> Self {
        let components = x
            .components()
            .iter()
            .map(|c| {
                c.terms()
                    .map(|(m, a)| {
                        let factors = m
                            .exponents()
                            .iter()
                            .enumerate()
                            .filter(|(_, &e)| e > 0)
                            .map(|(i, &e)| (i, e as i32))
                            .collect();
                        (to_f64(a), factors)
                    })
                    .collect()
            })
            .collect();
        CompiledField { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, comp) in out.iter_mut().zip(&self.components) {
            *o = comp
                .iter()
                .map(|(c, fs)| fs.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e)))
                .sum();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowMethod {
    LieSeries,
    Rk4,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowResult {
    pub endpoint: Vec<f64>,
    pub method: FlowMethod,
    pub steps: usize,
    /// Some coordinate exceeded the threshold or became non-finite.
    pub blowup: bool,
    /// Time at which the threshold was crossed.
    pub escape_time: Option<f64>,
    /// `max_j |X_j(x)| / max_j |x_j|` at the crossing; infinite if the state
    /// stopped being finite.
    pub escape_rate: Option<f64>,
}

fn sup(x: &[f64]) -> f64 {
    x.iter().fold(0f64, |a, v| a.max(v.abs()))
}

/// Classical RK4 with `steps` equal steps; stops at the first state whose
/// sup norm exceeds `threshold` or that is not finite.
pub fn rk4_flow(x: &CompiledField, p: &[f64], t: f64, steps: usize, threshold: f64) -> FlowResult {
    let n = x.dim();
    let steps = steps.max(1);
    let h = t / steps as f64;
    let mut y = p.to_vec();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    for step in 0..steps {
        x.eval_into(&y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        x.eval_into(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        x.eval_into(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + h * k3[i];
        }
        x.eval_into(&tmp, &mut k4);
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let norm = sup(&y);
        if !norm.is_finite() || y.iter().any(|v| !v.is_finite()) || norm > threshold {
            let rate = if norm.is_finite() && y.iter().all(|v| v.is_finite()) {
                x.eval_into(&y, &mut k1);
                sup(&k1) / norm
            } else {
                f64::INFINITY
            };
            return FlowResult {
                endpoint: y,
                method: FlowMethod::Rk4,
                steps: step + 1,
                blowup: true,
                escape_time: Some(h * (step + 1) as f64),
                escape_rate: Some(if rate.is_nan() { f64::INFINITY } else { rate }),
            };
        }
    }
    FlowResult { endpoint: y, method: FlowMethod::Rk4, steps, blowup: false, escape_time: None, escape_rate: None }
}

#[derive(Clone, Debug)]
pub struct ProbeOptions {
    pub horizon: f64,
    pub trials: usize,
    pub seed: u64,
    pub steps: usize,
    pub threshold: f64,
    pub rate_bound: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            horizon: 1e3,
            trials: 8,
            seed: 0,
            steps: 2000,
            threshold: DEFAULT_BLOWUP_THRESHOLD,
            rate_bound: DEFAULT_RATE_BOUND,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub triangular: bool,
    /// Integrations performed (two per trial: forward and backward).
    pub runs: usize,
    /// Runs that left every bounded set in finite time.
    pub blowups: usize,
    /// Runs that crossed the threshold at a bounded growth rate.
    pub fast_growth: usize,
    pub horizon: f64,
}

/// Integrates `X` forward and backward over `horizon` from seeded starting
/// points in `[-1, 1]ⁿ`.
///
/// Crossing the magnitude threshold counts as a blowup only when the state
/// is no longer finite or the instantaneous growth rate `|X(x)| / |x|`
/// exceeds `rate_bound`: exponential growth of a complete linear field keeps
/// that rate bounded, while finite-time escape drives it to infinity.
pub fn completeness_probe(x: &VectorField, w: &WeightVector, opts: &ProbeOptions) -> ProbeReport {
    let n = x.dim();
    let compiled = CompiledField::new(x);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Vec<f64>> = (0..opts.trials.max(1))
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .collect();
    let results: Vec<FlowResult> = starts
        .par_iter()
        .flat_map_iter(|p| {
            [opts.horizon, -opts.horizon]
                .into_iter()
                .map(|t| rk4_flow(&compiled, p, t, opts.steps, opts.threshold))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut blowups = 0;
    let mut fast_growth = 0;
    for r in &results {
        if r.blowup {
            if r.escape_rate.is_some_and(|rate| rate > opts.rate_bound) {
                blowups += 1;
            } else {
                fast_growth += 1;
            }
        }
    }
    ProbeReport {
        triangular: check_triangular_complete(x, w),
        runs: results.len(),
        blowups,
        fast_growth,
        horizon: opts.horizon,
    }
}
