//! Truncated power series of `F = P^(-beta)`.
//!
//! [`expand_power`] fills a dense coefficient box with the first-order
//! recurrence obtained from `P * (Z_j dF/dZ_j) = -beta * (Z_j dP/dZ_j) * F`.
//! Two independent routes serve as oracles: [`brute_force_oracle`] expands
//! the binomial series of `(1 + (P - 1))^(-beta)` directly, and
//! [`cauchy_coefficient`] integrates numerically over a torus.

mod expand;
mod oracle;

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::polycore::{rat_to_f64, rat_to_string, PolyError, Polynomial, Rat};

pub use expand::{expand_power, ExpandOptions, DEFAULT_MAX_COEFFICIENTS};
pub use oracle::{brute_force_oracle, cauchy_coefficient, DEFAULT_ORACLE_DEGREE_CAP};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("box of {requested} coefficients exceeds the cap of {cap}")]
    MemoryCap { requested: u128, cap: usize },
    #[error("beta = {0} is a nonpositive integer")]
    NonpositiveIntegerBeta(String),
    #[error("constant term of P must be 1 (got {0})")]
    NotNormalized(String),
    #[error("beta is not rational; the exact backend needs a rational exponent")]
    IrrationalBeta,
    #[error("box bounds differ across axes: {0:?}")]
    RaggedBounds(Vec<usize>),
    #[error("total degree {requested} exceeds the oracle cap {cap}")]
    DegreeCap { requested: u32, cap: u32 },
    #[error("P vanishes at a quadrature node (radius {radius:?}) after {retries} retries")]
    NodeCollision { radius: Vec<f64>, retries: u32 },
    #[error("invalid quadrature request: {0}")]
    BadQuadrature(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A real parameter carried exactly when it is rational.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Exact(Rat),
    Float(f64),
}

impl Param {
    pub fn to_f64(&self) -> f64 {
        match self {
            Param::Exact(r) => rat_to_f64(r),
            Param::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            Param::Exact(r) => Some(r),
            Param::Float(_) => None,
        }
    }

    /// True for 0, -1, -2, ... (exactly on the rational path).
    pub fn is_nonpositive_integer(&self) -> bool {
        match self {
            Param::Exact(r) => r.is_integer() && !r.is_positive(),
            Param::Float(x) => *x <= 0.0 && x.fract() == 0.0,
        }
    }

    /// `Some(n)` when the parameter is the integer `n`.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Param::Exact(r) if r.is_integer() => r.to_integer().to_i64(),
            Param::Float(x) if x.fract() == 0.0 && x.abs() < 1e15 => Some(*x as i64),
            _ => None,
        }
    }

    /// `self * k + c` keeping exactness.
    pub fn affine(&self, k: &Rat, c: &Rat) -> Param {
        match self {
            Param::Exact(r) => Param::Exact(r * k + c),
            Param::Float(x) => Param::Float(x * rat_to_f64(k) + rat_to_f64(c)),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Param::Exact(r) => r.is_positive(),
            Param::Float(x) => *x > 0.0,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Exact(r) => f.write_str(&rat_to_string(r)),
            Param::Float(x) => write!(f, "{x:?}"),
        }
    }
}

/// The function `F = P^(-beta)` with `P(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiRationalSpec {
    poly: Polynomial,
    beta: Param,
    scaling: Option<Vec<Rat>>,
}

impl QuasiRationalSpec {
    pub fn new(poly: Polynomial, beta: Param) -> Result<Self, SeriesError> {
        let c = poly.constant_term();
        if !c.is_one() {
            return Err(SeriesError::NotNormalized(rat_to_string(&c)));
        }
        if beta.is_nonpositive_integer() {
            return Err(SeriesError::NonpositiveIntegerBeta(beta.to_string()));
        }
        Ok(QuasiRationalSpec {
            poly,
            beta,
            scaling: None,
        })
    }

    /// Records a coordinate change `Z -> c Z` that was applied to `poly`.
    pub fn with_scaling(mut self, factors: Vec<Rat>) -> Self {
        self.scaling = Some(factors);
        self
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn beta(&self) -> &Param {
        &self.beta
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn scaling(&self) -> Option<&[Rat]> {
        self.scaling.as_deref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coeffs {
    Exact(Vec<Rat>),
    Float(Vec<f64>),
}

impl Coeffs {
    pub fn len(&self) -> usize {
        match self {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn backend(&self) -> Backend {
        match self {
            Coeffs::Exact(_) => Backend::Exact,
            Coeffs::Float(_) => Backend::Float,
        }
    }

    pub fn get_f64(&self, i: usize) -> f64 {
        match self {
            Coeffs::Exact(v) => rat_to_f64(&v[i]),
            Coeffs::Float(v) => v[i],
        }
    }

    pub fn get_exact(&self, i: usize) -> Option<&Rat> {
        match self {
            Coeffs::Exact(v) => Some(&v[i]),
            Coeffs::Float(_) => None,
        }
    }

    fn is_zero_at(&self, i: usize) -> bool {
        match self {
            Coeffs::Exact(v) => v[i].is_zero(),
            Coeffs::Float(v) => v[i] == 0.0,
        }
    }

    /// `"num/den"` on the exact backend, shortest round-trip decimal otherwise.
    pub fn value_string(&self, i: usize) -> String {
        match self {
            Coeffs::Exact(v) => rat_to_string(&v[i]),
            Coeffs::Float(v) => format!("{:?}", v[i]),
        }
    }
}

/// Dense truncated series: coefficient `a_r` for every `r <= bounds`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesBox {
    bounds: Vec<usize>,
    strides: Vec<usize>,
    coeffs: Coeffs,
}

impl SeriesBox {
    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    pub fn coeffs(&self) -> &Coeffs {
        &self.coeffs
    }

    pub fn backend(&self) -> Backend {
        self.coeffs.backend()
    }

    /// Row-major flat index (last axis fastest). Panics outside the box.
    pub fn index(&self, r: &[usize]) -> usize {
        assert_eq!(r.len(), self.bounds.len());
        r.iter()
            .zip(&self.bounds)
            .zip(&self.strides)
            .map(|((&x, &b), &s)| {
                assert!(x <= b, "exponent {x} outside the box bound {b}");
                x * s
            })
            .sum()
    }

    pub fn get_exact(&self, r: &[usize]) -> Option<&Rat> {
        self.coeffs.get_exact(self.index(r))
    }

    pub fn get_f64(&self, r: &[usize]) -> f64 {
        self.coeffs.get_f64(self.index(r))
    }

    /// One tab-separated row `r_1 ... r_d value` per nonzero coefficient.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let mut r = vec![0usize; self.dim()];
        for i in 0..self.coeffs.len() {
            if !self.coeffs.is_zero_at(i) {
                for x in &r {
                    out.push_str(&x.to_string());
                    out.push('\t');
                }
                out.push_str(&self.coeffs.value_string(i));
                out.push('\n');
            }
            for j in (0..r.len()).rev() {
                if r[j] < self.bounds[j] {
                    r[j] += 1;
                    break;
                }
                r[j] = 0;
            }
        }
        out
    }
}

/// Diagonal coefficients `a_{n,...,n}`, `n = 0, 1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSequence {
    values: Coeffs,
}

impl DiagonalSequence {
    pub fn from_exact(values: Vec<Rat>) -> Self {
        DiagonalSequence {
            values: Coeffs::Exact(values),
        }
    }

    pub fn from_f64(values: Vec<f64>) -> Self {
        DiagonalSequence {
            values: Coeffs::Float(values),
        }
    }

    pub fn values(&self) -> &Coeffs {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get_f64(&self, n: usize) -> f64 {
        self.values.get_f64(n)
    }

    pub fn get_exact(&self, n: usize) -> Option<&Rat> {
        self.values.get_exact(n)
    }

    /// Rows `n<TAB>value`.
    pub fn to_tsv(&self) -> String {
        (0..self.len())
            .map(|n| format!("{n}\t{}\n", self.values.value_string(n)))
            .collect()
    }
}

pub fn diagonal_of(series: &SeriesBox) -> Result<DiagonalSequence, SeriesError> {
    let b = series.bounds();
    if b.windows(2).any(|w| w[0] != w[1]) {
        return Err(SeriesError::RaggedBounds(b.to_vec()));
    }
    let n_max = b.first().copied().unwrap_or(0);
    let step: usize = series.strides.iter().sum();
    let values = match &series.coeffs {
        Coeffs::Exact(v) => Coeffs::Exact((0..=n_max).map(|n| v[n * step].clone()).collect()),
        Coeffs::Float(v) => Coeffs::Float((0..=n_max).map(|n| v[n * step]).collect()),
    };
    Ok(DiagonalSequence { values })
}

/// Smallest `n` with `values[n] <= 0`, if any. Exact comparison on the exact
/// backend.
pub fn positivity_scan(seq: &DiagonalSequence) -> Option<usize> {
    match &seq.values {
        Coeffs::Exact(v) => v.iter().position(|x| !x.is_positive()),
        Coeffs::Float(v) => v.iter().position(|&x| x.is_nan() || x <= 0.0),
    }
}
