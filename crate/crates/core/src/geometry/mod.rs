//! Critical-point geometry of the singular variety `V_P`.
//!
//! * [`find_cone_point`] locates points where `P` and its whole gradient
//!   vanish. Symmetric polynomials get an exact and complete search through
//!   the diagonal restriction; anything else falls back to a numeric
//!   multistart, which may miss points.
//! * [`solve_smooth_critical`] solves the smooth critical point equations
//!   `P = 0`, `Z_j dP/dZ_j = Z_k dP/dZ_k` and keeps the solutions lying on a
//!   given torus.
//! * [`certify_minimality`] checks that `P` does not vanish on the open
//!   polydisk spanned by the cone point.

mod minimality;
mod newton;
pub mod univariate;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::polycore::{rat_to_f64, rationalize, PolyError, Polynomial, Rat};

pub use minimality::{
    certify_minimality, eliminate_variable, mobius_numerator, pattern_lemma_check,
    CertificateStatus, FalsifierOptions, MinimalityCertificate, PatternResult,
};
pub use newton::ComplexJet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("no cone point found; method inapplicable")]
    NoConePoint,
    #[error("degree in variable {index} is {degree}, expected 1")]
    DegreeNotOne { index: usize, degree: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchPath {
    /// Exact search through `gcd(p, p')` of the diagonal restriction.
    Symmetric,
    /// Newton multistart; not guaranteed to find every point.
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MultiplicityEvidence {
    /// `t*` is a root of multiplicity `multiplicity >= 2` of `p(t) = P(t,...,t)`.
    DoubleRoot {
        p_value: Rat,
        dp_value: Rat,
        multiplicity: usize,
    },
    /// Residual of `(P, grad P)` at the point; `exact` when the rounded
    /// rational point verified exactly.
    Gradient { residual: f64, exact: bool },
}

/// A point of `V_P` where the full gradient vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConePoint {
    pub exact: Option<Vec<Rat>>,
    pub approx: Vec<Complex64>,
    pub tstar: Option<Rat>,
    /// `log |Z*_j|`.
    pub xmin: Vec<f64>,
    pub evidence: MultiplicityEvidence,
    pub search: SearchPath,
}

impl ConePoint {
    /// Wraps a rational point without verifying it.
    pub fn from_exact(z: Vec<Rat>, evidence: MultiplicityEvidence, search: SearchPath) -> Self {
        let approx: Vec<Complex64> = z.iter().map(|v| Complex64::new(rat_to_f64(v), 0.0)).collect();
        ConePoint {
            xmin: approx.iter().map(|c| c.norm().ln()).collect(),
            exact: Some(z),
            approx,
            tstar: None,
            evidence,
            search,
        }
    }

    pub fn dim(&self) -> usize {
        self.approx.len()
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.approx.iter().map(|z| z.norm()).collect()
    }

    /// Exact `|Z*_j|`, available for rational points.
    pub fn exact_moduli(&self) -> Option<Vec<Rat>> {
        self.exact.as_ref().map(|z| z.iter().map(|v| v.abs()).collect())
    }

    fn max_modulus(&self) -> f64 {
        self.moduli().into_iter().fold(0.0, f64::max)
    }
}

/// Settings for the Newton multistart searches.
#[derive(Debug, Clone)]
pub struct NewtonOptions {
    pub starts: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub dedupe_radius: f64,
    pub max_iterations: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            starts: 512,
            seed: 42,
            tolerance: 1e-12,
            dedupe_radius: 1e-8,
            max_iterations: 100,
        }
    }
}

fn gradient_vanishes_exactly(p: &Polynomial, z: &[Rat]) -> bool {
    p.evaluate(z).is_ok_and(|v| v.is_zero())
        && p.gradient().iter().all(|g| g.evaluate(z).is_ok_and(|v| v.is_zero()))
}

fn symmetric_cone_points(p: &Polynomial) -> Vec<ConePoint> {
    let diag = univariate::from_poly(&p.diagonal_restriction());
    if diag.len() < 3 {
        return Vec::new();
    }
    let dp = univariate::derivative(&diag);
    let g = univariate::gcd(&diag, &dp);
    let mut out = Vec::new();
    for t in univariate::rational_roots(&g) {
        let z = vec![t.clone(); p.dim()];
        if !gradient_vanishes_exactly(p, &z) {
            continue;
        }
        let evidence = MultiplicityEvidence::DoubleRoot {
            p_value: univariate::eval(&diag, &t),
            dp_value: univariate::eval(&dp, &t),
            multiplicity: univariate::root_multiplicity(&diag, &t),
        };
        let mut c = ConePoint::from_exact(z, evidence, SearchPath::Symmetric);
        c.tstar = Some(t);
        out.push(c);
    }
    out
}

fn try_rationalize(z: &[Complex64]) -> Option<Vec<Rat>> {
    z.iter()
        .map(|c| {
            if c.im.abs() > 1e-9 {
                return None;
            }
            rationalize(c.re, 10_000, 1e-9)
        })
        .collect()
}

fn numeric_cone_points(p: &Polynomial, opts: &NewtonOptions) -> Vec<ConePoint> {
    let d = p.dim();
    let jet = ComplexJet::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut found: Vec<(Vec<Complex64>, f64)> = Vec::new();
    for _ in 0..opts.starts {
        let mut z: Vec<Complex64> = (0..d)
            .map(|_| {
                let lm: f64 = rng.gen_range((0.1f64).ln()..(10.0f64).ln());
                let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(lm.exp(), th)
            })
            .collect();
        let residual = |z: &[Complex64]| {
            let mut r = vec![jet.value(z)];
            r.extend(jet.gradient(z));
            r
        };
        let mut ok = false;
        for _ in 0..opts.max_iterations {
            let r = residual(&z);
            let mut jac = vec![jet.gradient(&z)];
            jac.extend(jet.hessian(&z));
            let rhs: Vec<Complex64> = r.iter().map(|v| -v).collect();
            let Some(step) = newton::least_squares(&jac, &rhs) else { break };
            for (zi, s) in z.iter_mut().zip(&step) {
                *zi += s;
            }
            if newton::max_norm(&step) <= opts.tolerance * (1.0 + newton::max_norm(&z)) {
                ok = true;
                break;
            }
            if !z.iter().all(|c| c.norm().is_finite() && c.norm() < 1e8) {
                break;
            }
        }
        let res = newton::max_norm(&residual(&z));
        if !ok || res > 1e-9 || z.iter().any(|c| c.norm() <= 1e-8) {
            continue;
        }
        if found
            .iter()
            .all(|(w, _)| w.iter().zip(&z).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) > 1e-6)
        {
            found.push((z, res));
        }
    }
    found
        .into_iter()
        .map(|(z, residual)| match try_rationalize(&z) {
            Some(q) if gradient_vanishes_exactly(p, &q) => ConePoint::from_exact(
                q,
                MultiplicityEvidence::Gradient {
                    residual,
                    exact: true,
                },
                SearchPath::Numeric,
            ),
            _ => ConePoint {
                exact: None,
                xmin: z.iter().map(|c| c.norm().ln()).collect(),
                approx: z,
                tstar: None,
                evidence: MultiplicityEvidence::Gradient {
                    residual,
                    exact: false,
                },
                search: SearchPath::Numeric,
            },
        })
        .collect()
}

fn sort_cone_points(v: &mut [ConePoint]) {
    v.sort_by(|a, b| {
        a.max_modulus().total_cmp(&b.max_modulus()).then_with(|| {
            let ka: Vec<(f64, f64)> = a.approx.iter().map(|c| (c.re, c.im)).collect();
            let kb: Vec<(f64, f64)> = b.approx.iter().map(|c| (c.re, c.im)).collect();
            ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
}

/// Cone points of `V_P` with all coordinates nonzero, sorted by
/// `max_j |Z*_j|` ascending.
pub fn find_cone_point(p: &Polynomial) -> Result<Vec<ConePoint>, GeometryError> {
    find_cone_point_with(p, &NewtonOptions {
        starts: 256,
        ..NewtonOptions::default()
    })
}

pub fn find_cone_point_with(p: &Polynomial, opts: &NewtonOptions) -> Result<Vec<ConePoint>, GeometryError> {
    if p.total_degree().unwrap_or(0) < 2 {
        return Err(GeometryError::NoConePoint);
    }
    let mut out = if p.is_symmetric() {
        symmetric_cone_points(p)
    } else {
        Vec::new()
    };
    if out.is_empty() {
        out = numeric_cone_points(p, opts);
    }
    if out.is_empty() {
        return Err(GeometryError::NoConePoint);
    }
    sort_cone_points(&mut out);
    Ok(out)
}

/// A solution of the smooth critical point equations.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothCriticalPoint {
    pub z: Vec<Complex64>,
    /// `|P(Z)|` followed by `|Z_j P_j - Z_d P_d|` for `j < d`.
    pub residuals: Vec<f64>,
}

fn critical_system(jet: &ComplexJet, z: &[Complex64]) -> (Vec<Complex64>, Vec<Vec<Complex64>>) {
    let d = z.len();
    let g = jet.gradient(z);
    let h = jet.hessian(z);
    let last = d - 1;
    let mut f = vec![jet.value(z)];
    let mut jac = vec![g.clone()];
    for k in 0..last {
        f.push(z[k] * g[k] - z[last] * g[last]);
        let row = (0..d)
            .map(|i| {
                let mut v = z[k] * h[k][i] - z[last] * h[last][i];
                if i == k {
                    v += g[k];
                }
                if i == last {
                    v -= g[last];
                }
                v
            })
            .collect();
        jac.push(row);
    }
    (f, jac)
}

/// Newton multistart on the smooth critical point equations, keeping the
/// solutions whose coordinate moduli equal `torus_modulus` (within 1e-6)
/// and whose gradient does not vanish.
pub fn solve_smooth_critical(
    p: &Polynomial,
    torus_modulus: &[f64],
    opts: &NewtonOptions,
) -> Result<Vec<SmoothCriticalPoint>, GeometryError> {
    let d = p.dim();
    if torus_modulus.len() != d {
        return Err(PolyError::DimensionMismatch {
            expected: d,
            got: torus_modulus.len(),
        }
        .into());
    }
    if d == 0 || p.total_degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let jet = ComplexJet::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out: Vec<SmoothCriticalPoint> = Vec::new();
    for _ in 0..opts.starts {
        let mut z: Vec<Complex64> = torus_modulus
            .iter()
            .map(|&m| {
                let lm: f64 = rng.gen_range((0.25f64).ln()..(4.0f64).ln());
                let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(m * lm.exp(), th)
            })
            .collect();
        let mut converged = false;
        for _ in 0..opts.max_iterations {
            let (f, jac) = critical_system(&jet, &z);
            let rhs: Vec<Complex64> = f.iter().map(|v| -v).collect();
            let Some(step) = newton::solve(jac, rhs) else { break };
            for (zi, s) in z.iter_mut().zip(&step) {
                *zi += s;
            }
            if !z.iter().all(|c| c.norm().is_finite() && c.norm() < 1e8) {
                break;
            }
            if newton::max_norm(&step) <= opts.tolerance * (1.0 + newton::max_norm(&z)) {
                converged = true;
                break;
            }
        }
        if !converged {
            continue;
        }
        let (f, _) = critical_system(&jet, &z);
        let residuals: Vec<f64> = f.iter().map(|v| v.norm()).collect();
        if residuals.iter().any(|&r| r > 1e-10) {
            continue;
        }
        if newton::max_norm(&jet.gradient(&z)) <= 1e-6 {
            continue;
        }
        let on_torus = z
            .iter()
            .zip(torus_modulus)
            .all(|(c, &m)| (c.norm() - m).abs() <= 1e-6 * m.max(1.0));
        if !on_torus {
            continue;
        }
        let dup = out.iter().any(|s| {
            s.z.iter().zip(&z).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) <= opts.dedupe_radius.max(1e-8)
        });
        if !dup {
            out.push(SmoothCriticalPoint { z, residuals });
        }
    }
    out.sort_by(|a, b| {
        let ka: Vec<(f64, f64)> = a.z.iter().map(|c| (c.re, c.im)).collect();
        let kb: Vec<(f64, f64)> = b.z.iter().map(|c| (c.re, c.im)).collect();
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}
