//! The analysis pipeline: weights, privileged check, approximation, Lie
//! algebra, classification, singular locus, and optional probes.

use num_traits::Zero;

use crate::approx::{build_approximation, fields_determinant, ApproximationSet, Role};
use crate::error::{Error, Result};
use crate::field::Frame;
use crate::flows::{completeness_probe, ProbeOptions};
use crate::grading::{growth_vector, privileged_orders, GrowthVector, WeightVector};
use crate::liealg::{
    classify_fields, derived_length, graded_frame, ideal_closure, is_solvable, lie_closure, nilpotent_step,
    rank_condition_at_zero, FieldKind, LieBasis,
};
use crate::locus::{corank_at, frame_determinant, stratify_samples, SamplerConfig};
use crate::rational::Rational;

use super::parse::{FrameDocument, WeightsSetting};
use super::report::*;

pub const DEFAULT_MAX_DEGREE: u32 = 64;
const EXAMPLE_HITS: usize = 5;

#[derive(Clone, Debug)]
pub struct StratifyOptions {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    /// Overrides the document's `weights` line.
    pub weights: Option<WeightsSetting>,
    /// Overrides the document's `point` line.
    pub point: Option<Vec<Rational>>,
    pub max_bracket_depth: Option<usize>,
    pub probe_flows: bool,
    pub stratify: Option<StratifyOptions>,
    /// Largest polynomial degree accepted in the input.
    pub max_degree: u32,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            weights: None,
            point: None,
            max_bracket_depth: None,
            probe_flows: false,
            stratify: None,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

impl AnalyzeOptions {
    /// Defaults with the degree cap read from `ARS_MAX_DEGREE` when set.
    pub fn from_env() -> Self {
        let max_degree = std::env::var("ARS_MAX_DEGREE")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_DEGREE);
        AnalyzeOptions { max_degree, ..Self::default() }
    }
}

/// Failure of the pipeline. A degenerate approximation still carries the
/// report computed so far.
#[derive(Clone, Debug)]
pub struct AnalysisFailure {
    pub error: Error,
    pub partial: Option<Box<Report>>,
}

impl From<Error> for AnalysisFailure {
    fn from(error: Error) -> Self {
        AnalysisFailure { error, partial: None }
    }
}

impl std::fmt::Display for AnalysisFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for AnalysisFailure {}

/// Frame of the document with the point override applied.
pub fn frame_of(doc: &FrameDocument, opts: &AnalyzeOptions) -> Result<Frame> {
    let frame = doc.to_frame()?;
    let degree = frame.max_degree();
    if degree > opts.max_degree {
        return Err(Error::DegreeCapExceeded { degree, cap: opts.max_degree });
    }
    match &opts.point {
        Some(p) => Frame::with_base_point(frame.var_names().to_vec(), frame.fields().to_vec(), p.clone()),
        None => Ok(frame),
    }
}

/// Growth vector at the base point and the weights in force, with whether
/// they were declared.
pub fn resolve_weights(
    frame: &Frame,
    doc: &FrameDocument,
    opts: &AnalyzeOptions,
) -> Result<(GrowthVector, WeightVector, bool)> {
    let centered = frame.centered()?;
    let origin = vec![Rational::zero(); frame.dim()];
    let (growth, auto) = growth_vector(&centered, &origin, opts.max_bracket_depth)?;
    match opts.weights.as_ref().or(doc.weights.as_ref()) {
        Some(WeightsSetting::Explicit(w)) => {
            if w.len() != frame.dim() {
                return Err(Error::InvalidWeights(format!("expected {} weights, found {}", frame.dim(), w.len())));
            }
            Ok((growth, WeightVector::new(w.clone())?, true))
        }
        _ => Ok((growth, auto, false)),
    }
}

/// Privileged check; errors with `NotPrivileged` on failure.
pub fn require_privileged(frame: &Frame, w: &WeightVector) -> Result<Vec<Option<u32>>> {
    let centered = frame.centered()?;
    let origin = vec![Rational::zero(); frame.dim()];
    let (orders, ok) = privileged_orders(&centered, &origin, w)?;
    if ok {
        Ok(orders)
    } else {
        Err(Error::NotPrivileged { orders, weights: w.as_slice().to_vec() })
    }
}

/// Lie algebra generated by the approximating fields and the ideal of its
/// anchors.
pub fn algebras(a: &ApproximationSet) -> Result<(LieBasis, LieBasis)> {
    let l = lie_closure(&a.fields(), Some(a.weights.step()))?;
    let g = ideal_closure(&l, a.anchors())?;
    Ok((l, g))
}

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Anchor => "anchor",
        Role::Hat => "hat",
        Role::Tilde => "tilde",
    }
}

fn kind_name(k: FieldKind) -> &'static str {
    match k {
        FieldKind::Invariant => "invariant",
        FieldKind::Linear => "linear",
        FieldKind::Affine => "affine",
    }
}

pub fn analyze(doc: &FrameDocument, opts: &AnalyzeOptions) -> std::result::Result<Report, AnalysisFailure> {
    let frame = frame_of(doc, opts)?;
    let names = frame.var_names().to_vec();
    let field_names: Vec<String> = doc.fields.iter().map(|f| f.name.clone()).collect();
    let (growth, w, declared) = resolve_weights(&frame, doc, opts)?;
    let orders = require_privileged(&frame, &w)?;
    let a = build_approximation(&frame, &w)?;
    let n = frame.dim();
    let origin = vec![Rational::zero(); n];
    let mut warnings = Vec::new();

    let det = frame_determinant(&frame);
    let approx_det = fields_determinant(&a.fields());
    let base = frame.base_point().to_vec();
    let corank_at_base = corank_at(&frame, &base)?;
    let constant = det.degree().unwrap_or(0) == 0;
    if det.is_zero() {
        warnings.push("the determinant vanishes identically: the singular locus has interior points".into());
    } else if constant {
        warnings.push("the determinant never vanishes: the singular locus is empty".into());
    }
    let singular_locus = LocusReport {
        determinant: PolyReport::new(&det, &names),
        approximation_determinant: PolyReport::new(&approx_det, &names),
        identically_zero: det.is_zero(),
        constant,
        vanishes_at_base: det.eval(&base)?.is_zero(),
        corank_at_base,
    };

    let approximation = ApproximationReport {
        k: a.k,
        m: a.m,
        degenerate: a.degenerate,
        fields: a
            .fields()
            .iter()
            .enumerate()
            .map(|(i, f)| ApproxField {
                source: field_names[a.source[i]].clone(),
                role: role_name(a.role(i)).into(),
                text: f.to_text(&names),
            })
            .collect(),
        transform: a.transform.iter().map(|r| rationals(r)).collect(),
    };

    let mut report = Report {
        schema: SCHEMA.into(),
        variables: names.clone(),
        fields: doc
            .fields
            .iter()
            .zip(frame.fields())
            .map(|(d, f)| NamedField { name: d.name.clone(), text: f.to_text(&names) })
            .collect(),
        base_point: rationals(&base),
        weights: WeightsReport {
            values: w.as_slice().to_vec(),
            source: if declared { "declared" } else { "auto" }.into(),
        },
        growth_vector: GrowthReport { dims: growth.dims.clone(), step: growth.step },
        privileged: PrivilegedReport { ok: true, coordinate_orders: orders },
        approximation,
        lie_algebra: None,
        ideal: None,
        classification: None,
        singular_locus,
        flows: None,
        stratification: None,
        warnings,
    };

    if a.degenerate {
        report.warnings.push("the approximating fields are dependent: the approximation is sub-Riemannian".into());
        return Err(AnalysisFailure { error: Error::DegenerateApproximation, partial: Some(Box::new(report)) });
    }

    let (l, g) = algebras(&a)?;
    let c = classify_fields(&a, &l, &g)?;
    report.lie_algebra = Some(AlgebraReport {
        dim: l.len(),
        solvable: is_solvable(&l),
        derived_length: derived_length(&l),
        nilpotent_step: nilpotent_step(&l),
        basis: l.basis().iter().map(|b| b.to_text(&names)).collect(),
    });
    report.ideal = Some(IdealReport {
        dim: g.len(),
        nilpotent_step: nilpotent_step(&g),
        full_rank_at_base: rank_condition_at_zero(&g, &origin)?,
        basis: g.basis().iter().map(|b| b.to_text(&names)).collect(),
        graded_frame: graded_frame(&g, &w)
            .ok()
            .map(|ys| ys.iter().map(|y| y.to_text(&names)).collect()),
    });
    report.classification = Some(ClassificationReport {
        k: c.k,
        l: c.l,
        m: c.m,
        labels: c
            .labels
            .iter()
            .enumerate()
            .map(|(i, k)| LabelReport { source: field_names[a.source[i]].clone(), kind: kind_name(*k).into() })
            .collect(),
    });

    if opts.probe_flows {
        let probe = ProbeOptions { seed: opts.stratify.as_ref().map_or(0, |s| s.seed), ..ProbeOptions::default() };
        report.flows = Some(
            a.fields()
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    let r = completeness_probe(f, &w, &probe);
                    FlowProbeReport {
                        source: field_names[a.source[i]].clone(),
                        triangular: r.triangular,
                        runs: r.runs,
                        blowups: r.blowups,
                        fast_growth: r.fast_growth,
                    }
                })
                .collect(),
        );
    }

    if let Some(s) = &opts.stratify {
        let strat = stratify_samples(&frame, &SamplerConfig::new(n, s.seed), s.samples.max(1))?;
        report.stratification = Some(StratificationReport {
            samples: strat.samples,
            seed: s.seed,
            histogram: strat.histogram.clone(),
            strata: strat
                .strata
                .iter()
                .map(|st| StratumSummary {
                    r: st.r,
                    hits: st.hits.len(),
                    line_hits: st.line_hits,
                    estimated_codim: st.estimated_codim,
                    predicted_codim: st.predicted_codim,
                    examples: st.hits.iter().take(EXAMPLE_HITS).map(|p| rationals(p)).collect(),
                })
                .collect(),
            line_roots: strat.line_roots,
            approximate_roots: strat.approximate_roots,
        });
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::frontend::parse::parse_frame;

    fn run(text: &str) -> std::result::Result<Report, AnalysisFailure> {
        analyze(&parse_frame(text).unwrap(), &AnalyzeOptions::default())
    }

    #[test]
    fn e1_report() {
        let r = run(fixtures::E1).unwrap();
        assert_eq!(r.weights.values, vec![1, 2, 5]);
        assert_eq!(r.ideal.as_ref().unwrap().dim, 5);
        assert_eq!(r.singular_locus.determinant.text, "x y^2");
        let kinds: Vec<&str> = r.classification.as_ref().unwrap().labels.iter().map(|l| l.kind.as_str()).collect();
        assert_eq!(kinds, ["invariant", "linear", "linear"]);
    }

    #[test]
    fn e3_not_solvable() {
        let r = run(fixtures::E3).unwrap();
        assert!(!r.lie_algebra.unwrap().solvable);
    }

    #[test]
    fn one_dimensional_frame_warns() {
        let r = run("vars x\nfield X1 = d/dx").unwrap();
        assert!(r.singular_locus.constant);
        assert!(r.warnings.iter().any(|w| w.contains("empty")));
    }

    #[test]
    fn failures() {
        assert!(matches!(
            run("vars x y\nfield A = d/dx\nfield B = x d/dx").unwrap_err().error,
            Error::RankConditionFailure { .. }
        ));
        assert!(matches!(
            run("vars x y\nfield A = d/dx\nfield B = x d/dy\nweights 1,1").unwrap_err().error,
            Error::NotPrivileged { .. }
        ));
        let e = run("vars x y z\nfield A = d/dx\nfield B = d/dy + x d/dz\nfield C = x d/dx + z^2 d/dz").unwrap_err();
        assert_eq!(e.error, Error::DegenerateApproximation);
        assert!(e.partial.unwrap().approximation.degenerate);
    }

    #[test]
    fn degree_cap() {
        let doc = parse_frame("vars x\nfield A = d/dx + x^3 d/dx").unwrap();
        let opts = AnalyzeOptions { max_degree: 2, ..AnalyzeOptions::default() };
        assert!(matches!(analyze(&doc, &opts).unwrap_err().error, Error::DegreeCapExceeded { degree: 3, cap: 2 }));
    }

    #[test]
    fn json_round_trip_and_determinism() {
        let a = run(fixtures::E2).unwrap();
        let text = a.to_json();
        assert_eq!(Report::from_json(&text).unwrap(), a);
        assert_eq!(run(fixtures::E2).unwrap().to_json(), text);
    }
}
