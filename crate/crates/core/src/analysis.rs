//! The full pipeline from a polynomial and `beta` to a verdict.
//!
//! Every stage records either its result or the reason it was skipped, so
//! partial results survive when a hypothesis fails.

use std::time::{Duration, Instant};

use num_traits::Signed;
use thiserror::Error;

use crate::asympt::{
    asymptotic_estimate, check_names as names, dual_form, gamma_check, inertia, log_hessian, verdict,
    AsymptoticEstimate, CheckItem, Inertia, QuadraticData, RatMatrix, Verdict,
};
use crate::geometry::{
    certify_minimality, find_cone_point_with, solve_smooth_critical, ConePoint, FalsifierOptions,
    MinimalityCertificate, MultiplicityEvidence, NewtonOptions, SmoothCriticalPoint,
};
use crate::polycore::{rat_to_string, PolyError, Polynomial, Rat};
use crate::series::{Param, QuasiRationalSpec, SeriesError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InputError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub newton: NewtonOptions,
    pub falsifier: FalsifierOptions,
}

impl AnalysisOptions {
    /// Default options with every sampler seeded from `seed`.
    pub fn seeded(samples: usize, seed: u64) -> Self {
        AnalysisOptions {
            newton: NewtonOptions {
                seed,
                ..NewtonOptions::default()
            },
            falsifier: FalsifierOptions {
                samples,
                seed,
                ..FalsifierOptions::default()
            },
        }
    }
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            newton: NewtonOptions::default(),
            falsifier: FalsifierOptions::default(),
        }
    }
}

/// A stage result, or the reason the stage did not produce one.
pub type Stage<T> = Result<T, String>;

#[derive(Debug, Clone)]
pub struct Analysis {
    /// `P / P(0)`.
    pub spec: QuasiRationalSpec,
    /// The constant term divided out of the input.
    pub input_constant: Rat,
    pub cones: Stage<Vec<ConePoint>>,
    /// The cone point with the smallest moduli.
    pub cone: Stage<ConePoint>,
    /// `P(Z*_1 Z_1, ..., Z*_d Z_d)`, whose cone point is `(1, ..., 1)`.
    pub scaled: Stage<Polynomial>,
    pub smooth: Stage<Vec<SmoothCriticalPoint>>,
    pub certificate: Stage<MinimalityCertificate>,
    pub hessian: Stage<RatMatrix>,
    pub inertia: Stage<Inertia>,
    pub quadratic: Stage<QuadraticData>,
    pub estimate: Stage<AsymptoticEstimate>,
    pub verdict: Verdict,
    pub timings: Vec<(&'static str, Duration)>,
}

fn skipped<T>(why: &str) -> Stage<T> {
    Err(format!("skipped: {why}"))
}

struct Timer(Vec<(&'static str, Duration)>);

impl Timer {
    fn time<T>(&mut self, name: &'static str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.0.push((name, t.elapsed()));
        out
    }
}

fn same_torus(a: &ConePoint, b: &ConePoint) -> bool {
    a.moduli()
        .iter()
        .zip(b.moduli())
        .all(|(x, y)| (x - y).abs() <= 1e-9 * x.max(y).max(1.0))
}

/// Runs the whole pipeline. Only malformed input is an error; hypothesis
/// failures are reported through the verdict.
pub fn analyze(poly: &Polynomial, beta: Param, opts: &AnalysisOptions) -> Result<Analysis, InputError> {
    let mut timer = Timer(Vec::new());
    let (normalized, input_constant) = poly.normalize_constant()?;
    let spec = QuasiRationalSpec::new(normalized, beta)?;
    let p = spec.poly();
    let d = spec.dim();
    let mut checks: Vec<CheckItem> = Vec::new();

    let cones = timer
        .time("find_cone_point", || find_cone_point_with(p, &opts.newton))
        .map_err(|e| e.to_string());
    let cone: Stage<ConePoint> = match &cones {
        Ok(list) => {
            let first = list[0].clone();
            let rivals = list.iter().filter(|c| same_torus(c, &first)).count();
            checks.push(CheckItem::from_bool(
                names::CONE_UNIQUE,
                rivals == 1,
                format!("{} cone point(s) found, {rivals} on the minimal torus", list.len()),
            ));
            Ok(first)
        }
        Err(e) => {
            checks.push(CheckItem::from_bool(names::CONE_UNIQUE, false, e.clone()));
            Err(e.clone())
        }
    };

    if let Ok(c) = &cone {
        let (ok, ev) = match &c.evidence {
            MultiplicityEvidence::DoubleRoot { multiplicity, .. } => {
                (c.exact.is_some(), format!("double root of the diagonal restriction (multiplicity {multiplicity}); gradient zero exactly"))
            }
            MultiplicityEvidence::Gradient { residual, exact } => (
                *exact && c.exact.is_some(),
                format!("Newton residual {residual:.3e}; exact verification {}", if *exact { "passed" } else { "unavailable" }),
            ),
        };
        checks.push(CheckItem::from_bool(names::GRADIENT, ok, ev));
        let positive = c.exact.as_ref().is_some_and(|z| z.iter().all(Signed::is_positive));
        checks.push(CheckItem::from_bool(
            names::POSITIVE_CONE,
            positive,
            if positive { "all coordinates positive rationals" } else { "cone point not a positive rational point" },
        ));
    }

    let scaled: Stage<Polynomial> = match &cone {
        Ok(c) => match &c.exact {
            Some(z) => p.scale_coordinates(z).map_err(|e| e.to_string()),
            None => skipped("cone point not exact"),
        },
        Err(_) => skipped("no cone point"),
    };

    let smooth: Stage<Vec<SmoothCriticalPoint>> = match &cone {
        Ok(c) => timer
            .time("solve_smooth_critical", || solve_smooth_critical(p, &c.moduli(), &opts.newton))
            .map_err(|e| e.to_string()),
        Err(_) => skipped("no cone point"),
    };
    if let Ok(s) = &smooth {
        checks.push(CheckItem::from_bool(
            names::NO_SMOOTH,
            s.is_empty(),
            format!("{} smooth critical point(s) on the cone torus", s.len()),
        ));
    }

    let certificate: Stage<MinimalityCertificate> = match &cone {
        Ok(c) => Ok(timer.time("certify_minimality", || certify_minimality(p, c, &opts.falsifier))),
        Err(_) => skipped("no cone point"),
    };

    let hessian: Stage<RatMatrix> = match &cone {
        Ok(c) => log_hessian(p, c).map_err(|e| e.to_string()),
        Err(_) => skipped("no cone point"),
    };
    let inertia_stage: Stage<Inertia> = match &hessian {
        Ok(m) => Ok(inertia(m)),
        Err(_) => skipped("no quadratic form"),
    };
    if let Ok(i) = &inertia_stage {
        checks.push(CheckItem::from_bool(names::LORENTZIAN, *i == Inertia::lorentzian(d), format!("inertia {i}")));
        checks.push(CheckItem::from_bool(
            names::IRREDUCIBLE,
            i.zero == 0 && i.rank() >= 3,
            format!("rank {}, nullity {}", i.rank(), i.zero),
        ));
    } else if let Err(e) = &hessian {
        checks.push(CheckItem::from_bool(names::LORENTZIAN, false, e.clone()));
    }

    let quadratic: Stage<QuadraticData> = match &hessian {
        Ok(m) => dual_form(m).map_err(|e| e.to_string()),
        Err(_) => skipped("no quadratic form"),
    };
    if let Ok(q) = &quadratic {
        checks.push(CheckItem::from_bool(
            names::DIAGONAL_IN_CONE,
            q.qstar_one.is_positive(),
            format!("q*(1) = {}", rat_to_string(&q.qstar_one)),
        ));
    }
    checks.push(gamma_check(spec.beta(), d));

    let estimate: Stage<AsymptoticEstimate> = match (&cone, &quadratic) {
        (Ok(c), Ok(q)) => asymptotic_estimate(&spec, c, q).map_err(|e| e.to_string()),
        _ => skipped("no quadratic data"),
    };

    let v = verdict(estimate.as_ref().ok(), certificate.as_ref().ok(), &checks);
    Ok(Analysis {
        spec,
        input_constant,
        cones,
        cone,
        scaled,
        smooth,
        certificate,
        hessian,
        inertia: inertia_stage,
        quadratic,
        estimate,
        verdict: v,
        timings: timer.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asympt::{CheckStatus, VerdictStatus};
    use crate::polycore::{parse_polynomial, rat, rat_int};

    const EX1: &str = "1 - (Z1+Z2+Z3) + 3/4*(Z1*Z2+Z1*Z3+Z2*Z3)";
    const EX2: &str = "1 - (Z1+Z2+Z3+Z4) + 64/27*(Z1*Z2*Z3+Z1*Z2*Z4+Z1*Z3*Z4+Z2*Z3*Z4)";

    fn run(text: &str, d: usize, beta: Rat) -> Analysis {
        let p = parse_polynomial(text, &Polynomial::default_variables(d)).unwrap();
        analyze(&p, Param::Exact(beta), &AnalysisOptions::default()).unwrap()
    }

    #[test]
    fn ex1_positive() {
        let a = run(EX1, 3, rat_int(1));
        assert_eq!(a.verdict.status, VerdictStatus::UltimatelyPositive { conditional: false });
        assert_eq!(a.cone.as_ref().unwrap().exact, Some(vec![rat(2, 3); 3]));
        let scaled = a.scaled.as_ref().unwrap();
        assert_eq!(scaled.coeff(&[1, 0, 0]), rat(-2, 3));
        assert_eq!(scaled.coeff(&[1, 1, 0]), rat(1, 3));
        assert!(a.verdict.checklist.iter().all(|c| c.status == CheckStatus::Pass), "{:?}", a.verdict.checklist);
    }

    #[test]
    fn ex2_conditional_and_degenerate() {
        let a = run(EX2, 4, rat(9, 10));
        assert_eq!(a.verdict.status, VerdictStatus::UltimatelyNegative { conditional: true });
        let a = run(EX2, 4, rat_int(1));
        assert!(a.verdict.is_degenerate());
        assert!(a.quadratic.is_ok());
    }

    #[test]
    fn constant_polynomial_is_inapplicable() {
        let a = run("1", 2, rat_int(1));
        assert!(a.verdict.is_hypothesis_failure());
        assert!(a.cone.is_err() && a.estimate.is_err());
        let p = parse_polynomial("2 - 2*Z1", &Polynomial::default_variables(1)).unwrap();
        let a = analyze(&p, Param::Exact(rat_int(1)), &AnalysisOptions::default()).unwrap();
        assert_eq!(a.input_constant, rat_int(2));
        let z = parse_polynomial("Z1", &Polynomial::default_variables(1)).unwrap();
        assert!(analyze(&z, Param::Exact(rat_int(1)), &AnalysisOptions::default()).is_err());
    }
}
