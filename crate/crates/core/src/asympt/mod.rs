//! Log-space quadratic form at a cone point, its dual, the leading-term
//! estimate of the diagonal and the ultimate-positivity verdict.
//!
//! All linear algebra is exact. Floating point enters only through Gamma,
//! `pi` and the final square root, so the sign of the leading constant is
//! decided by the signs of the two Gamma factors alone.

mod gamma;
mod matrix;
mod verdict;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::geometry::ConePoint;
use crate::polycore::{rat_ln_abs, rat_to_string, Polynomial, Rat};
use crate::series::{Param, QuasiRationalSpec};

pub use gamma::{gamma, gamma_param, ln_gamma_param, ln_gamma_signed, GammaPole};
pub use matrix::{congruence_diagonalize, inertia, Inertia, RatMatrix};
pub use verdict::{
    check_names, gamma_check, minimality_check, verdict, CheckItem, CheckStatus, InconclusiveReason, Verdict,
    VerdictStatus,
};

/// Reasons the cone-point formula does not apply.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Inapplicable {
    #[error("P or its gradient does not vanish at the point")]
    NotConePoint,
    #[error("cone point is not known exactly")]
    InexactConePoint,
    #[error("cone point has a non-positive coordinate")]
    NonpositiveConePoint,
    #[error("leading part at the cone point is not quadratic")]
    NotQuadratic,
    #[error("quadratic form is singular")]
    Singular,
    #[error("inertia {0} is not Lorentzian")]
    WrongInertia(Inertia),
    #[error("quadratic form has rank {rank} < 3 and factors")]
    Reducible { rank: usize },
    #[error("diagonal direction is outside the cone: q*(1) = {qstar_one}")]
    DiagonalOutsideCone { qstar_one: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptError {
    /// A Gamma factor in the denominator is infinite.
    #[error("degenerate case: {0}")]
    DegenerateCase(GammaPole),
    #[error("method inapplicable: {0}")]
    MethodInapplicable(#[from] Inapplicable),
}

/// Matrix `M` of `q(w)`, the quadratic part of `w -> P(Z* e^w)`.
pub fn log_hessian(p: &Polynomial, cone: &ConePoint) -> Result<RatMatrix, AsymptError> {
    let z = cone.exact.as_ref().ok_or(Inapplicable::InexactConePoint)?;
    let d = p.dim();
    if z.len() != d {
        return Err(Inapplicable::NotConePoint.into());
    }
    let at = |q: &Polynomial| q.evaluate(z).map_err(|_| Inapplicable::NotConePoint);
    if !at(p)?.is_zero() {
        return Err(Inapplicable::NotConePoint.into());
    }
    let grad = p.gradient();
    for g in &grad {
        if !at(g)?.is_zero() {
            return Err(Inapplicable::NotConePoint.into());
        }
    }
    let half = Rat::new(1.into(), 2.into());
    let mut m = RatMatrix::zeros(d);
    for j in 0..d {
        for k in j..d {
            let h = at(&grad[j].partial_derivative(k).expect("index in range"))?;
            let v = &half * &z[j] * &z[k] * h;
            m.set(j, k, v.clone());
            m.set(k, j, v);
        }
    }
    if m.is_zero() {
        return Err(Inapplicable::NotQuadratic.into());
    }
    Ok(m)
}

/// `q` together with its dual form `q*`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticData {
    pub m: RatMatrix,
    pub inertia: Inertia,
    pub det: Rat,
    pub minv: RatMatrix,
    /// `q*(1, ..., 1)`.
    pub qstar_one: Rat,
}

impl QuadraticData {
    pub fn dim(&self) -> usize {
        self.m.size()
    }

    pub fn q(&self, w: &[Rat]) -> Rat {
        self.m.quadratic_form(w)
    }

    pub fn qstar(&self, r: &[Rat]) -> Rat {
        self.minv.quadratic_form(r)
    }

    /// `(-1)^(d-1) det M`, positive for a Lorentzian form.
    pub fn signed_det(&self) -> Rat {
        if self.dim() % 2 == 0 {
            -self.det.clone()
        } else {
            self.det.clone()
        }
    }

    pub fn is_lorentzian(&self) -> bool {
        self.inertia == Inertia::lorentzian(self.dim())
    }
}

pub fn dual_form(m: &RatMatrix) -> Result<QuadraticData, AsymptError> {
    let minv = m.inverse().ok_or(Inapplicable::Singular)?;
    let ones = vec![Rat::one(); m.size()];
    Ok(QuadraticData {
        inertia: inertia(m),
        det: m.determinant(),
        qstar_one: minv.quadratic_form(&ones),
        minv,
        m: m.clone(),
    })
}

/// Whether the diagonal direction lies in the cone `q* > 0`.
pub fn diagonal_in_cone(qd: &QuadraticData) -> Result<bool, AsymptError> {
    if !qd.is_lorentzian() {
        return Err(Inapplicable::WrongInertia(qd.inertia).into());
    }
    Ok(qd.qstar_one.is_positive())
}

fn pow_int(r: &Rat, e: i64) -> Rat {
    let p = num_traits::pow(r.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// Leading term `C n^alpha prod_j rho_j^n` of the diagonal coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticEstimate {
    pub dim: usize,
    pub beta: Param,
    /// The leading constant `C`, with `qstar_one^(beta - d/2)` folded in.
    pub c_full: f64,
    pub ln_abs_c: f64,
    /// `(C pi^(d/2-1) Gamma(beta) Gamma(beta+1-d/2))^2`, exact when `2 beta`
    /// is an integer.
    pub c_exact_square: Option<Rat>,
    /// `1 / Z*_j`.
    pub rho: Vec<Rat>,
    /// `2 beta - d`.
    pub alpha: Param,
    pub qstar_one: Rat,
    /// `(beta, beta + 1 - d/2)`.
    pub gamma_args: (Param, Param),
}

impl AsymptoticEstimate {
    pub fn c_sign(&self) -> i8 {
        if self.c_full > 0.0 {
            1
        } else if self.c_full < 0.0 {
            -1
        } else {
            0
        }
    }

    /// `ln |predicted(n)|`; finite for `n >= 1`.
    pub fn ln_abs_predicted(&self, n: u64) -> f64 {
        let a = self.alpha.to_f64();
        let power = if a == 0.0 { 0.0 } else { a * (n as f64).ln() };
        let base: f64 = self.rho.iter().map(rat_ln_abs).sum();
        self.ln_abs_c + power + n as f64 * base
    }

    pub fn predicted_sign(&self, n: u64) -> i8 {
        let negatives = self.rho.iter().filter(|r| r.is_negative()).count() as u64;
        if (negatives * n) % 2 == 1 {
            -self.c_sign()
        } else {
            self.c_sign()
        }
    }

    pub fn predicted(&self, n: u64) -> f64 {
        f64::from(self.predicted_sign(n)) * self.ln_abs_predicted(n).exp()
    }

    /// `empirical / predicted(n)`, computed through logarithms so that huge
    /// coefficients do not overflow.
    pub fn ratio(&self, empirical: &Rat, n: u64) -> f64 {
        if empirical.is_zero() {
            return 0.0;
        }
        let sign = if empirical.is_negative() { -1.0 } else { 1.0 } * f64::from(self.predicted_sign(n));
        sign * (rat_ln_abs(empirical) - self.ln_abs_predicted(n)).exp()
    }

    pub fn ratio_f64(&self, empirical: f64, n: u64) -> f64 {
        if empirical == 0.0 {
            return 0.0;
        }
        empirical.signum() * f64::from(self.predicted_sign(n)) * (empirical.abs().ln() - self.ln_abs_predicted(n)).exp()
    }
}

/// Evaluates the cone-point formula for `F = P^(-beta)`.
pub fn asymptotic_estimate(
    spec: &QuasiRationalSpec,
    cone: &ConePoint,
    qd: &QuadraticData,
) -> Result<AsymptoticEstimate, AsymptError> {
    let d = spec.dim();
    if !qd.is_lorentzian() || qd.dim() != d {
        return Err(Inapplicable::WrongInertia(qd.inertia).into());
    }
    if qd.inertia.rank() < 3 {
        return Err(Inapplicable::Reducible { rank: qd.inertia.rank() }.into());
    }
    if !qd.qstar_one.is_positive() {
        return Err(Inapplicable::DiagonalOutsideCone {
            qstar_one: rat_to_string(&qd.qstar_one),
        }
        .into());
    }
    let sdet = qd.signed_det();
    if !sdet.is_positive() {
        return Err(Inapplicable::WrongInertia(qd.inertia).into());
    }
    let z = cone.exact.as_ref().ok_or(Inapplicable::InexactConePoint)?;
    if z.iter().any(|v| !v.is_positive()) {
        return Err(Inapplicable::NonpositiveConePoint.into());
    }
    let beta = spec.beta().clone();
    let one = Rat::one();
    let half_d = Rat::new(d.into(), 2.into());
    let g1 = beta.clone();
    let g2 = beta.affine(&one, &(&one - &half_d));
    let (l1, s1) = ln_gamma_param(&g1).map_err(AsymptError::DegenerateCase)?;
    let (l2, s2) = ln_gamma_param(&g2).map_err(AsymptError::DegenerateCase)?;
    let b = beta.to_f64();
    let df = d as f64;
    let ln_abs_c = -0.5 * rat_ln_abs(&sdet)
        - (2.0 * b - 1.0) * std::f64::consts::LN_2
        - (df / 2.0 - 1.0) * std::f64::consts::PI.ln()
        - l1
        - l2
        + (b - df / 2.0) * rat_ln_abs(&qd.qstar_one);
    let two = Rat::from_integer(2.into());
    let c_exact_square = beta
        .as_exact()
        .map(|bq| bq * &two)
        .filter(|k| k.is_integer())
        .and_then(|k| k.to_integer().try_into().ok())
        .map(|k: i64| {
            pow_int(&qd.qstar_one, k - d as i64) / (&sdet * pow_int(&Rat::from_integer(4.into()), k - 1))
        });
    Ok(AsymptoticEstimate {
        dim: d,
        c_full: s1 * s2 * ln_abs_c.exp(),
        ln_abs_c,
        c_exact_square,
        rho: z.iter().map(|v| v.recip()).collect(),
        alpha: beta.affine(&two, &-Rat::from_integer(d.into())),
        qstar_one: qd.qstar_one.clone(),
        gamma_args: (g1, g2),
        beta,
    })
}
