//! Brute-force reference implementations used as test oracles.
//!
//! Everything here is written from scratch on plain maps and dense
//! matrices, without the library's polynomial, bracket or echelon code.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use ars_core::Rational;
use itertools::Itertools;
use num_traits::{One, Zero};

pub type Poly = BTreeMap<Vec<u32>, Rational>;
/// Component `j` is the coefficient of `∂/∂x_j`.
pub type Field = Vec<Poly>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn poly(n: usize, terms: &[(i64, i64, &[u32])]) -> Poly {
    let mut p = Poly::new();
    for &(a, b, e) in terms {
        assert_eq!(e.len(), n);
        add_term(&mut p, e.to_vec(), q(a, b));
    }
    p
}

fn add_term(p: &mut Poly, e: Vec<u32>, c: Rational) {
    let v = p.entry(e.clone()).or_insert_with(Rational::zero);
    *v += c;
    if v.is_zero() {
        p.remove(&e);
    }
}

pub fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        add_term(&mut out, e.clone(), c.clone());
    }
    out
}

pub fn scale(a: &Poly, c: &Rational) -> Poly {
    let mut out = Poly::new();
    for (e, v) in a {
        add_term(&mut out, e.clone(), v * c);
    }
    out
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            add_term(&mut out, e, ca * cb);
        }
    }
    out
}

pub fn diff(a: &Poly, j: usize) -> Poly {
    let mut out = Poly::new();
    for (e, c) in a {
        if e[j] > 0 {
            let mut f = e.clone();
            f[j] -= 1;
            add_term(&mut out, f, c * Rational::from_integer(e[j].into()));
        }
    }
    out
}

pub fn apply(x: &Field, f: &Poly) -> Poly {
    x.iter()
        .enumerate()
        .fold(Poly::new(), |acc, (j, xj)| add(&acc, &mul(xj, &diff(f, j))))
}

pub fn bracket(x: &Field, y: &Field) -> Field {
    (0..x.len())
        .map(|j| add(&apply(x, &y[j]), &scale(&apply(y, &x[j]), &-Rational::one())))
        .collect()
}

pub fn field_add(x: &Field, y: &Field) -> Field {
    x.iter().zip(y).map(|(a, b)| add(a, b)).collect()
}

pub fn field_scale(x: &Field, c: &Rational) -> Field {
    x.iter().map(|a| scale(a, c)).collect()
}

pub fn is_zero_field(x: &Field) -> bool {
    x.iter().all(|p| p.is_empty())
}

pub fn eval(p: &Poly, at: &[Rational]) -> Rational {
    p.iter().fold(Rational::zero(), |acc, (e, c)| {
        let mut t = c.clone();
        for (x, &k) in at.iter().zip(e) {
            for _ in 0..k {
                t *= x;
            }
        }
        acc + t
    })
}

pub fn eval_f64(p: &Poly, at: &[f64]) -> f64 {
    use num_traits::ToPrimitive;
    p.iter()
        .map(|(e, c)| {
            let c = c.to_f64().unwrap();
            at.iter().zip(e).fold(c, |t, (x, &k)| t * x.powi(k as i32))
        })
        .sum()
}

/// Rank of a dense rational matrix by textbook Gaussian elimination.
pub fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let v = &f * &m[r][k];
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Dense coefficient rows of `fields` over the union of their supports.
fn coefficient_rows(fields: &[Field]) -> Vec<Vec<Rational>> {
    let mut keys: Vec<(usize, Vec<u32>)> = fields
        .iter()
        .flat_map(|f| f.iter().enumerate().flat_map(|(j, p)| p.keys().map(move |e| (j, e.clone()))))
        .collect();
    keys.sort();
    keys.dedup();
    fields
        .iter()
        .map(|f| {
            keys.iter()
                .map(|(j, e)| f[*j].get(e).cloned().unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect()
}

pub fn span_rank(fields: &[Field]) -> usize {
    if fields.is_empty() {
        return 0;
    }
    rank(coefficient_rows(fields))
}

pub fn in_span(fields: &[Field], x: &Field) -> bool {
    let mut with = fields.to_vec();
    with.push(x.clone());
    span_rank(&with) == span_rank(fields)
}

/// Greedy basis: keeps each field that raises the rank.
pub fn basis_of(fields: &[Field]) -> Vec<Field> {
    let mut out: Vec<Field> = Vec::new();
    for f in fields {
        if !in_span(&out, f) {
            out.push(f.clone());
        }
    }
    out
}

/// Repeats "bracket every pair" until the dimension stops growing.
pub fn brute_closure(generators: &[Field]) -> Vec<Field> {
    let mut basis = basis_of(generators);
    loop {
        let mut all = basis.clone();
        for a in &basis {
            for b in &basis {
                all.push(bracket(a, b));
            }
        }
        let next = basis_of(&all);
        if next.len() == basis.len() {
            return basis;
        }
        basis = next;
    }
}

/// Repeats "bracket with everything in `algebra`" until stable.
pub fn brute_ideal(algebra: &[Field], generators: &[Field]) -> Vec<Field> {
    let mut basis = basis_of(generators);
    loop {
        let mut all = basis.clone();
        for a in algebra {
            for b in &basis {
                all.push(bracket(a, b));
            }
        }
        let next = basis_of(&all);
        if next.len() == basis.len() {
            return basis;
        }
        basis = next;
    }
}

pub fn same_span(a: &[Field], b: &[Field]) -> bool {
    let ra = span_rank(a);
    ra == span_rank(b) && {
        let mut both = a.to_vec();
        both.extend_from_slice(b);
        span_rank(&both) == ra
    }
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Leibniz expansion of `det[X_1 … X_n]` (fields as columns).
pub fn leibniz_det(fields: &[Field]) -> Poly {
    let n = fields.len();
    let one: Poly = [(vec![0; n], Rational::one())].into_iter().collect();
    let mut det = Poly::new();
    for perm in (0..n).permutations(n) {
        let sign = Rational::from_integer(permutation_sign(&perm).into());
        let term = perm
            .iter()
            .enumerate()
            .fold(one.clone(), |acc, (col, &row)| mul(&acc, &fields[col][row]));
        det = add(&det, &scale(&term, &sign));
    }
    det
}

/// `det` of a dense `f64` matrix by partial-pivot elimination.
pub fn numeric_det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap())
            .unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for k in c..n {
                m[i][k] -= f * m[c][k];
            }
        }
    }
    det
}

/// Converts a library field to the oracle representation.
pub fn from_lib(x: &ars_core::VectorField) -> Field {
    x.components()
        .iter()
        .map(poly_from_lib)
        .collect()
}

pub fn poly_from_lib(p: &ars_core::Polynomial) -> Poly {
    p.terms().map(|(m, a)| (m.exponents().to_vec(), a.clone())).collect()
}

/// Converts an oracle polynomial to the library representation.
pub fn poly_to_lib(n: usize, p: &Poly) -> ars_core::Polynomial {
    ars_core::Polynomial::from_terms(n, p.iter().map(|(e, c)| (c.clone(), e.clone())))
}

pub fn to_lib(x: &Field) -> ars_core::VectorField {
    let n = x.len();
    ars_core::VectorField::new(x.iter().map(|p| poly_to_lib(n, p)).collect()).unwrap()
}

/// Exponent vectors in `n` variables with the given weighted degree and
/// total degree at most `max_total`.
pub fn monomials_of_weight(weights: &[u32], degree: u32, max_total: u32) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], left: u32, room: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let j = cur.len();
        if j == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut k = 0;
        while k * weights[j] <= left && k <= room {
            cur.push(k);
            go(weights, left - k * weights[j], room - k, cur, out);
            cur.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    go(weights, degree, max_total, &mut Vec::new(), &mut out);
    out
}

pub struct RandomFrame {
    pub weights: Vec<u32>,
    pub fields: Vec<Field>,
    pub frame: ars_core::Frame,
    pub w: ars_core::WeightVector,
}

fn random_coeff(rng: &mut impl rand::Rng) -> Rational {
    let num: i64 = *[-2, -1, 1, 1, 2, 3].get(rng.gen_range(0..6)).unwrap();
    let den: i64 = if rng.gen_bool(0.2) { 2 } else { 1 };
    q(num, den)
}

/// Adds up to `count` random terms of order `s` to `x`.
fn sprinkle(x: &mut Field, weights: &[u32], s: i64, count: usize, vanish_at_zero: bool, rng: &mut impl rand::Rng) {
    for _ in 0..count {
        let j = rng.gen_range(0..weights.len());
        let d = weights[j] as i64 + s;
        if d < 0 {
            continue;
        }
        let mut ms = monomials_of_weight(weights, d as u32, 3);
        if vanish_at_zero {
            ms.retain(|e| e.iter().any(|&k| k > 0));
        }
        if ms.is_empty() {
            continue;
        }
        let e = ms[rng.gen_range(0..ms.len())].clone();
        add_term(&mut x[j], e, random_coeff(rng));
    }
}

fn weight_profile(n: usize, rng: &mut impl rand::Rng) -> Vec<u32> {
    let mut w = vec![1u32];
    while w.len() < n {
        let last = *w.last().unwrap();
        let bump = last < 3 && rng.gen_bool(0.6);
        w.push(if bump { last + 1 } else { last });
    }
    w
}

/// Draws a privileged frame with non-degenerate approximation at the origin.
///
/// Fields are sums of order `-1` terms (one constant direction per weight-one
/// coordinate), order `0` terms and occasional order `1` perturbations.
/// Candidates are rejected until the growth vector reproduces the drawn
/// weights, the coordinates are privileged and the approximating fields are
/// independent.
pub fn random_privileged_frame(seed: u64) -> RandomFrame {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(2..=4);
        let weights = weight_profile(n, &mut rng);
        let ones = weights.iter().filter(|&&w| w == 1).count();
        if ones == n && rng.gen_bool(0.7) {
            continue;
        }
        let mut fields: Vec<Field> = Vec::with_capacity(n);
        for i in 0..n {
            let mut x: Field = vec![Poly::new(); n];
            if i < ones {
                add_term(&mut x[i], vec![0; n], Rational::one());
                let extra = rng.gen_range(0..=2);
                sprinkle(&mut x, &weights, -1, extra, true, &mut rng);
            } else {
                let hat = rng.gen_range(0..=2);
                sprinkle(&mut x, &weights, -1, hat, true, &mut rng);
                let tilde = rng.gen_range(0..=2);
                sprinkle(&mut x, &weights, 0, tilde, false, &mut rng);
            }
            if rng.gen_bool(0.3) {
                sprinkle(&mut x, &weights, 1, 1, false, &mut rng);
            }
            fields.push(x);
        }
        if fields.iter().any(is_zero_field) {
            continue;
        }
        let lib: Vec<_> = fields.iter().map(to_lib).collect();
        let Ok(frame) = ars_core::Frame::from_fields(lib) else { continue };
        let origin = vec![Rational::zero(); n];
        let Ok((_, w)) = ars_core::growth_vector(&frame, &origin, Some(4)) else { continue };
        if w.as_slice() != weights.as_slice() {
            continue;
        }
        if !ars_core::grading::check_privileged(&frame, &origin, &w).unwrap_or(false) {
            continue;
        }
        match ars_core::build_approximation(&frame, &w) {
            Ok(a) if !a.degenerate => return RandomFrame { weights, fields, frame, w },
            _ => continue,
        }
    }
}

/// A field with up to `terms` random monomials of total degree at most `max_deg`.
pub fn random_field(rng: &mut impl rand::Rng, n: usize, max_deg: u32, terms: usize) -> Field {
    let mut x: Field = vec![Poly::new(); n];
    for _ in 0..terms {
        let j = rng.gen_range(0..n);
        let mut e = vec![0u32; n];
        let d = rng.gen_range(0..=max_deg);
        for _ in 0..d {
            e[rng.gen_range(0..n)] += 1;
        }
        add_term(&mut x[j], e, random_coeff(rng));
    }
    x
}

/// A weighted-homogeneous field of order `s` with up to `terms` monomials.
pub fn random_homogeneous(rng: &mut impl rand::Rng, weights: &[u32], s: i64, terms: usize) -> Field {
    let mut x: Field = vec![Poly::new(); weights.len()];
    sprinkle(&mut x, weights, s, terms, false, rng);
    x
}

pub fn random_weights(rng: &mut impl rand::Rng, n: usize) -> Vec<u32> {
    weight_profile(n, rng)
}

pub fn random_point(rng: &mut impl rand::Rng, n: usize, bound: i64) -> Vec<Rational> {
    (0..n).map(|_| q(rng.gen_range(-bound..=bound), rng.gen_range(1..=3))).collect()
}
