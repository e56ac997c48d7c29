//! Job input files.
//!
//! ```json
//! {
//!   "variables": ["x", "y", "z"],
//!   "expression": "1 - (x+y+z) + 3/4*(x*y+x*z+y*z)",
//!   "beta": "1"
//! }
//! ```
//!
//! `terms: [{"coeff": "3/4", "exps": [1, 1, 0]}, ...]` may replace
//! `expression`; exactly one of the two must be present.

use std::path::Path;

use conediag::polycore::{parse_polynomial, parse_rat, Polynomial, Rat};
use conediag::series::Param;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub coeff: String,
    pub exps: Vec<u32>,
}

/// `beta` may be written as a string (`"7/3"`, `"0.4"`) or a JSON number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSpec {
    Text(String),
    Number(serde_json::Number),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaSpec>,
}

impl InputFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed input: {e}")))
    }

    pub fn polynomial(&self) -> Result<Polynomial, CliError> {
        let d = self.variables.len();
        if d == 0 {
            return Err(CliError::Input("no variables".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(v) = self.variables.iter().find(|v| !seen.insert(v.as_str())) {
            return Err(CliError::Input(format!("duplicate variable {v:?}")));
        }
        match (&self.terms, &self.expression) {
            (Some(terms), None) => {
                let parsed: Result<Vec<(Vec<u32>, Rat)>, CliError> = terms
                    .iter()
                    .map(|t| {
                        let c = parse_rat(&t.coeff).map_err(|e| CliError::Input(e.to_string()))?;
                        Ok((t.exps.clone(), c))
                    })
                    .collect();
                Polynomial::from_terms(d, parsed?).map_err(|e| CliError::Input(e.to_string()))
            }
            (None, Some(text)) => {
                parse_polynomial(text, &self.variables).map_err(|e| CliError::Input(e.to_string()))
            }
            _ => Err(CliError::Input("exactly one of `terms` and `expression` is required".into())),
        }
    }
}

/// Parses `beta` exactly; decimals become the rational they denote.
pub fn parse_beta(text: &str) -> Result<Param, CliError> {
    let t = text.trim();
    match parse_rat(t) {
        Ok(r) => Ok(Param::Exact(r)),
        Err(_) => match t.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Param::Float(x)),
            _ => Err(CliError::Input(format!("invalid beta {text:?}"))),
        },
    }
}

impl BetaSpec {
    pub fn to_param(&self) -> Result<Param, CliError> {
        match self {
            BetaSpec::Text(s) => parse_beta(s),
            BetaSpec::Number(n) => parse_beta(&n.to_string()),
        }
    }
}
