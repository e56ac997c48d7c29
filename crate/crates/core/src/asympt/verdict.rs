use std::fmt;

use num_traits::One;

use super::gamma::ln_gamma_param;
use super::AsymptoticEstimate;
use crate::geometry::{CertificateStatus, MinimalityCertificate};
use crate::polycore::Rat;
use crate::series::Param;

pub mod check_names {
    pub const CONE_UNIQUE: &str = "cone point unique";
    pub const GRADIENT: &str = "gradient vanishes";
    pub const POSITIVE_CONE: &str = "cone point positive";
    pub const NO_SMOOTH: &str = "no smooth minimal critical point";
    pub const MINIMALITY: &str = "minimality";
    pub const LORENTZIAN: &str = "Lorentzian";
    pub const IRREDUCIBLE: &str = "irreducible quadratic";
    pub const DIAGONAL_IN_CONE: &str = "q*(1) > 0";
    pub const GAMMA_FINITE: &str = "Gamma finite";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not refuted, but not proven either.
    Conditional,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Conditional => "conditional",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckItem {
    pub name: String,
    pub status: CheckStatus,
    pub evidence: String,
}

impl CheckItem {
    pub fn new(name: &str, status: CheckStatus, evidence: impl Into<String>) -> Self {
        CheckItem {
            name: name.to_string(),
            status,
            evidence: evidence.into(),
        }
    }

    pub fn from_bool(name: &str, ok: bool, evidence: impl Into<String>) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        CheckItem::new(name, status, evidence)
    }
}

/// Checks that both Gamma factors of the denominator are finite.
pub fn gamma_check(beta: &Param, dim: usize) -> CheckItem {
    let one = Rat::one();
    let shift = &one - Rat::new(dim.into(), 2.into());
    let args = [beta.clone(), beta.affine(&one, &shift)];
    for (label, a) in ["beta", "beta + 1 - d/2"].iter().zip(&args) {
        if let Err(e) = ln_gamma_param(a) {
            return CheckItem::new(
                check_names::GAMMA_FINITE,
                CheckStatus::Fail,
                format!("Gamma({label}) = Gamma({}) has a pole", e.argument),
            );
        }
    }
    CheckItem::new(
        check_names::GAMMA_FINITE,
        CheckStatus::Pass,
        format!("Gamma({}) and Gamma({}) finite", args[0], args[1]),
    )
}

pub fn minimality_check(cert: Option<&MinimalityCertificate>) -> CheckItem {
    let name = check_names::MINIMALITY;
    match cert.map(|c| &c.status) {
        None => CheckItem::new(name, CheckStatus::Fail, "not certified"),
        Some(CertificateStatus::ProvenByPattern) => {
            CheckItem::new(name, CheckStatus::Pass, "proven: transformed numerator has positive linear terms only")
        }
        Some(CertificateStatus::NotFalsified { samples, min_modulus, .. }) => CheckItem::new(
            name,
            CheckStatus::Conditional,
            format!("not falsified by {samples} samples; min |P| = {min_modulus:.3e}"),
        ),
        Some(CertificateStatus::Falsified { witness }) => {
            let w: Vec<String> = witness.iter().map(|c| format!("{:.17e}{:+.17e}i", c.re, c.im)).collect();
            CheckItem::new(name, CheckStatus::Fail, format!("zero inside the polydisk at ({})", w.join(", ")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InconclusiveReason {
    /// A Gamma factor of the denominator is infinite.
    DegenerateGamma { detail: String },
    HypothesisFailed { check: String, detail: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerdictStatus {
    /// `conditional` is set when minimality was only not falsified.
    UltimatelyPositive { conditional: bool },
    UltimatelyNegative { conditional: bool },
    Inconclusive(InconclusiveReason),
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cond = |c: &bool| if *c { " (conditional on minimality)" } else { "" };
        match self {
            VerdictStatus::UltimatelyPositive { conditional } => write!(f, "UltimatelyPositive{}", cond(conditional)),
            VerdictStatus::UltimatelyNegative { conditional } => write!(f, "UltimatelyNegative{}", cond(conditional)),
            VerdictStatus::Inconclusive(InconclusiveReason::DegenerateGamma { detail }) => {
                write!(f, "Inconclusive(DegenerateGamma: {detail})")
            }
            VerdictStatus::Inconclusive(InconclusiveReason::HypothesisFailed { check, detail }) => {
                write!(f, "Inconclusive(HypothesisFailed: {check}: {detail})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub checklist: Vec<CheckItem>,
}

impl Verdict {
    pub fn is_degenerate(&self) -> bool {
        matches!(self.status, VerdictStatus::Inconclusive(InconclusiveReason::DegenerateGamma { .. }))
    }

    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(self.status, VerdictStatus::Inconclusive(InconclusiveReason::HypothesisFailed { .. }))
    }
}

/// Combines the estimate, the minimality certificate and the remaining
/// hypothesis checks.
///
/// A minimality item is derived from `cert` unless `checklist` already has
/// one. The first failing hypothesis other than the Gamma check wins; a
/// failing Gamma check alone yields the degenerate case.
pub fn verdict(est: Option<&AsymptoticEstimate>, cert: Option<&MinimalityCertificate>, checklist: &[CheckItem]) -> Verdict {
    let mut items = checklist.to_vec();
    if !items.iter().any(|c| c.name == check_names::MINIMALITY) {
        items.push(minimality_check(cert));
    }
    if let Some(e) = est {
        if !items.iter().any(|c| c.name == check_names::GAMMA_FINITE) {
            items.push(gamma_check(&e.beta, e.dim));
        }
    }
    let failed = |gamma: bool| {
        items
            .iter()
            .find(|c| c.status == CheckStatus::Fail && (c.name == check_names::GAMMA_FINITE) == gamma)
    };
    let conditional = items.iter().any(|c| c.status == CheckStatus::Conditional);
    let status = if let Some(c) = failed(false) {
        VerdictStatus::Inconclusive(InconclusiveReason::HypothesisFailed {
            check: c.name.clone(),
            detail: c.evidence.clone(),
        })
    } else if let Some(c) = failed(true) {
        VerdictStatus::Inconclusive(InconclusiveReason::DegenerateGamma {
            detail: c.evidence.clone(),
        })
    } else {
        match est {
            None => VerdictStatus::Inconclusive(InconclusiveReason::HypothesisFailed {
                check: "estimate".into(),
                detail: "no estimate available".into(),
            }),
            Some(e) if e.c_sign() > 0 => VerdictStatus::UltimatelyPositive { conditional },
            Some(e) if e.c_sign() < 0 => VerdictStatus::UltimatelyNegative { conditional },
            Some(_) => VerdictStatus::Inconclusive(InconclusiveReason::HypothesisFailed {
                check: "estimate".into(),
                detail: "leading constant underflowed to zero".into(),
            }),
        }
    };
    Verdict { status, checklist: items }
}
