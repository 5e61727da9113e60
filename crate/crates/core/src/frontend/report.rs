//! JSON report. Rationals are written as `"n"` or `"n/d"` strings so the
//! document is exact and stable byte for byte.

use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;
use crate::rational::Rational;

pub const SCHEMA: &str = "ars-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub variables: Vec<String>,
    pub fields: Vec<NamedField>,
    pub base_point: Vec<String>,
    pub weights: WeightsReport,
    pub growth_vector: GrowthReport,
    pub privileged: PrivilegedReport,
    pub approximation: ApproximationReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lie_algebra: Option<AlgebraReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ideal: Option<IdealReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classification: Option<ClassificationReport>,
    pub singular_locus: LocusReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flows: Option<Vec<FlowProbeReport>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stratification: Option<StratificationReport>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedField {
    pub name: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightsReport {
    pub values: Vec<u32>,
    /// `"auto"` or `"declared"`.
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub dims: Vec<usize>,
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivilegedReport {
    pub ok: bool,
    pub coordinate_orders: Vec<Option<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxField {
    /// Name of the original field it comes from.
    pub source: String,
    /// `anchor`, `hat` or `tilde`.
    pub role: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationReport {
    pub k: usize,
    pub m: usize,
    pub degenerate: bool,
    pub fields: Vec<ApproxField>,
    pub transform: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub dim: usize,
    pub solvable: bool,
    pub derived_length: Option<usize>,
    pub nilpotent_step: Option<usize>,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealReport {
    pub dim: usize,
    pub nilpotent_step: Option<usize>,
    pub full_rank_at_base: bool,
    pub basis: Vec<String>,
    pub graded_frame: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelReport {
    pub source: String,
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub labels: Vec<LabelReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyReport {
    pub text: String,
    pub terms: Vec<PolyTerm>,
}

impl PolyReport {
    pub fn new(p: &Polynomial, names: &[String]) -> Self {
        PolyReport {
            text: p.to_text(names),
            terms: p
                .terms()
                .rev()
                .map(|(m, c)| PolyTerm { coeff: c.to_string(), exponents: m.exponents().to_vec() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusReport {
    pub determinant: PolyReport,
    pub approximation_determinant: PolyReport,
    pub identically_zero: bool,
    pub constant: bool,
    pub vanishes_at_base: bool,
    pub corank_at_base: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowProbeReport {
    pub source: String,
    pub triangular: bool,
    pub runs: usize,
    pub blowups: usize,
    pub fast_growth: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratumSummary {
    pub r: usize,
    pub hits: usize,
    pub line_hits: usize,
    pub estimated_codim: Option<usize>,
    pub predicted_codim: usize,
    pub examples: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratificationReport {
    pub samples: usize,
    pub seed: u64,
    pub histogram: Vec<usize>,
    pub strata: Vec<StratumSummary>,
    pub line_roots: usize,
    pub approximate_roots: usize,
}

pub fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(Rational::to_string).collect()
}
