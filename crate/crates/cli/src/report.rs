//! Machine-readable analysis reports.
//!
//! Exact rationals are always strings (`"num/den"`); floats are written with
//! the shortest representation that round-trips.

use std::collections::BTreeMap;

use conediag::analysis::{Analysis, Stage};
use conediag::asympt::{CheckStatus, InconclusiveReason, RatMatrix, VerdictStatus};
use conediag::geometry::{CertificateStatus, ConePoint, MultiplicityEvidence, SearchPath};
use conediag::polycore::{rat_to_string, Polynomial, Rat};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// A complex number as `[re, im]`.
pub type Pair = [f64; 2];

/// A report section: either present, or skipped with a reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "section", rename_all = "snake_case")]
pub enum Section<T> {
    Ok(T),
    Skipped { reason: String },
}

impl<T> Section<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Section::Ok(v) => Some(v),
            Section::Skipped { .. } => None,
        }
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        Section::Skipped { reason: reason.into() }
    }

    fn from_stage<S>(stage: &Stage<S>, f: impl FnOnce(&S) -> T) -> Self {
        match stage {
            Ok(v) => Section::Ok(f(v)),
            Err(e) => Section::skipped(e.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub variables: Vec<String>,
    pub polynomial: String,
    /// The input divided by its constant term.
    pub normalized: String,
    pub input_constant: String,
    pub beta: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub exact: Option<Vec<String>>,
    pub approx: Vec<Pair>,
    pub xmin: Vec<f64>,
    pub search: String,
    pub evidence: String,
    /// Number of cone points found in total.
    pub found: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledReport {
    /// `P(Z*_1 Z_1, ..., Z*_d Z_d)`.
    pub polynomial: String,
    pub cone_point: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothReport {
    pub count: usize,
    pub points: Vec<Vec<Pair>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CertificateReport {
    ProvenByPattern { transform_numerator: Option<String> },
    NotFalsified { samples: usize, min_modulus: f64, argmin: Vec<Pair>, transform_numerator: Option<String> },
    Falsified { witness: Vec<Pair> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticReport {
    #[serde(rename = "M")]
    pub m: Vec<Vec<String>>,
    pub inertia: [usize; 3],
    pub det: Option<String>,
    #[serde(rename = "Minv")]
    pub minv: Option<Vec<Vec<String>>>,
    pub qstar_one: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    #[serde(rename = "C_full_decimal")]
    pub c_full_decimal: f64,
    #[serde(rename = "C_full_sign")]
    pub c_full_sign: i8,
    #[serde(rename = "C_exact_square")]
    pub c_exact_square: Option<String>,
    pub ln_abs_c: f64,
    pub rho: Vec<String>,
    pub alpha: String,
    pub qstar_one: String,
    pub gamma_args: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub status: String,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    /// `UltimatelyPositive`, `UltimatelyNegative` or `Inconclusive`.
    pub status: String,
    pub conditional: bool,
    /// `DegenerateGamma` or `HypothesisFailed` when inconclusive.
    pub reason: Option<String>,
    pub detail: Option<String>,
    pub summary: String,
    pub checklist: Vec<CheckReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub n: u64,
    /// Exact value when available.
    pub empirical: String,
    pub empirical_decimal: f64,
    pub ln_abs_predicted: f64,
    pub predicted: f64,
    /// `empirical / predicted`, absent when the prediction is singular at `n = 0`.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub backend: String,
    pub rows: Vec<ValidationRow>,
    /// `|ratio - 1|` is non-increasing along the rows with `n >= 1`.
    pub monotone_tail: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub depth: usize,
    pub first_nonpositive: Option<usize>,
    pub last_nonpositive: Option<usize>,
    pub diagonal: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub command: String,
    pub input: InputEcho,
    pub cone_point: Section<ConeReport>,
    pub scaled: Section<ScaledReport>,
    pub smooth_critical: Section<SmoothReport>,
    pub certificate: Section<CertificateReport>,
    pub quadratic: Section<QuadraticReport>,
    pub estimate: Section<EstimateReport>,
    pub verdict: Section<VerdictReport>,
    pub validation: Section<ValidationReport>,
    pub scan: Section<ScanReport>,
    pub exit_code: i32,
    /// Seconds per stage; the only nondeterministic block.
    pub timings: BTreeMap<String, f64>,
}

fn strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_to_string).collect()
}

fn pair(c: &Complex64) -> Pair {
    [c.re, c.im]
}

pub fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| strings(r)).collect()
}

pub fn input_echo(variables: &[String], input: &Polynomial, a: &Analysis) -> InputEcho {
    InputEcho {
        variables: variables.to_vec(),
        polynomial: input.to_text(variables),
        normalized: a.spec.poly().to_text(variables),
        input_constant: rat_to_string(&a.input_constant),
        beta: a.spec.beta().to_string(),
        dim: a.spec.dim(),
    }
}

fn cone_report(c: &ConePoint, found: usize) -> ConeReport {
    ConeReport {
        exact: c.exact.as_deref().map(strings),
        approx: c.approx.iter().map(pair).collect(),
        xmin: c.xmin.clone(),
        search: match c.search {
            SearchPath::Symmetric => "symmetric",
            SearchPath::Numeric => "numeric",
        }
        .into(),
        evidence: match &c.evidence {
            MultiplicityEvidence::DoubleRoot { p_value, dp_value, multiplicity } => format!(
                "p(t*) = {}, p'(t*) = {}, multiplicity {multiplicity}",
                rat_to_string(p_value),
                rat_to_string(dp_value)
            ),
            MultiplicityEvidence::Gradient { residual, exact } => {
                format!("residual {residual:e}, exact {exact}")
            }
        },
        found,
    }
}

/// Fills every analysis section of a report; validation and scan start skipped.
pub fn from_analysis(command: &str, variables: &[String], input: &Polynomial, a: &Analysis) -> AnalysisReport {
    let found = a.cones.as_ref().map(|v| v.len()).unwrap_or(0);
    let text = |p: &Polynomial| p.to_text(variables);
    let quadratic = match (&a.hessian, &a.inertia) {
        (Ok(m), Ok(i)) => {
            let q = a.quadratic.as_ref().ok();
            Section::Ok(QuadraticReport {
                m: matrix_strings(m),
                inertia: [i.positive, i.negative, i.zero],
                det: Some(rat_to_string(&m.determinant())),
                minv: q.map(|q| matrix_strings(&q.minv)),
                qstar_one: q.map(|q| rat_to_string(&q.qstar_one)),
            })
        }
        (Err(e), _) | (_, Err(e)) => Section::skipped(e.clone()),
    };
    let v = &a.verdict;
    let (status, conditional, reason, detail) = match &v.status {
        VerdictStatus::UltimatelyPositive { conditional } => ("UltimatelyPositive", *conditional, None, None),
        VerdictStatus::UltimatelyNegative { conditional } => ("UltimatelyNegative", *conditional, None, None),
        VerdictStatus::Inconclusive(InconclusiveReason::DegenerateGamma { detail }) => {
            ("Inconclusive", false, Some("DegenerateGamma".to_string()), Some(detail.clone()))
        }
        VerdictStatus::Inconclusive(InconclusiveReason::HypothesisFailed { check, detail }) => {
            ("Inconclusive", false, Some("HypothesisFailed".to_string()), Some(format!("{check}: {detail}")))
        }
    };
    AnalysisReport {
        schema: SCHEMA_VERSION,
        command: command.into(),
        input: input_echo(variables, input, a),
        cone_point: Section::from_stage(&a.cone, |c| cone_report(c, found)),
        scaled: match (&a.scaled, &a.cone) {
            (Ok(p), Ok(_)) => Section::Ok(ScaledReport {
                polynomial: text(p),
                cone_point: vec!["1".into(); a.spec.dim()],
            }),
            (Err(e), _) | (_, Err(e)) => Section::skipped(e.clone()),
        },
        smooth_critical: Section::from_stage(&a.smooth, |s| SmoothReport {
            count: s.len(),
            points: s.iter().map(|p| p.z.iter().map(pair).collect()).collect(),
        }),
        certificate: Section::from_stage(&a.certificate, |c| {
            let num = c.transform_numerator.as_ref().map(|p| p.to_text(&Polynomial::default_variables(p.dim())));
            match &c.status {
                CertificateStatus::ProvenByPattern => CertificateReport::ProvenByPattern { transform_numerator: num },
                CertificateStatus::NotFalsified { samples, min_modulus, argmin } => CertificateReport::NotFalsified {
                    samples: *samples,
                    min_modulus: *min_modulus,
                    argmin: argmin.iter().map(pair).collect(),
                    transform_numerator: num,
                },
                CertificateStatus::Falsified { witness } => CertificateReport::Falsified {
                    witness: witness.iter().map(pair).collect(),
                },
            }
        }),
        quadratic,
        estimate: Section::from_stage(&a.estimate, |e| EstimateReport {
            c_full_decimal: e.c_full,
            c_full_sign: e.c_sign(),
            c_exact_square: e.c_exact_square.as_ref().map(rat_to_string),
            ln_abs_c: e.ln_abs_c,
            rho: strings(&e.rho),
            alpha: e.alpha.to_string(),
            qstar_one: rat_to_string(&e.qstar_one),
            gamma_args: [e.gamma_args.0.to_string(), e.gamma_args.1.to_string()],
        }),
        verdict: Section::Ok(VerdictReport {
            status: status.into(),
            conditional,
            reason,
            detail,
            summary: v.status.to_string(),
            checklist: v
                .checklist
                .iter()
                .map(|c| CheckReport {
                    name: c.name.clone(),
                    status: match c.status {
                        CheckStatus::Pass => "pass",
                        CheckStatus::Fail => "fail",
                        CheckStatus::Conditional => "conditional",
                    }
                    .into(),
                    evidence: c.evidence.clone(),
                })
                .collect(),
        }),
        validation: Section::skipped("not requested"),
        scan: Section::skipped("not requested"),
        exit_code: 0,
        timings: a.timings.iter().map(|(k, d)| (k.to_string(), d.as_secs_f64())).collect(),
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Tab-separated tables: checklist, validation rows and scanned diagonal.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        if let Some(v) = self.verdict.ok() {
            out.push_str(&format!("# verdict\t{}\n", v.summary));
            out.push_str("# check\tstatus\tevidence\n");
            for c in &v.checklist {
                out.push_str(&format!("{}\t{}\t{}\n", c.name, c.status, c.evidence));
            }
        }
        if let Some(v) = self.validation.ok() {
            out.push_str("# n\tempirical\tpredicted\tratio\n");
            for r in &v.rows {
                let ratio = r.ratio.map(|x| format!("{x:?}")).unwrap_or_else(|| "NA".into());
                out.push_str(&format!("{}\t{}\t{:?}\t{ratio}\n", r.n, r.empirical, r.predicted));
            }
        }
        if let Some(s) = self.scan.ok() {
            out.push_str("# n\tdiagonal\n");
            for (n, v) in s.diagonal.iter().enumerate() {
                out.push_str(&format!("{n}\t{v}\n"));
            }
        }
        out
    }
}
