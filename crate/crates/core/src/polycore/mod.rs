//! Exact sparse multivariate polynomials over the rationals.
//!
//! Everything else in the crate is built on [`Polynomial`]: the input
//! function, its derivatives, the diagonal restriction used to locate cone
//! points and the Möbius-transformed numerator used in minimality proofs.

mod complex;
mod parse;
mod rat;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use complex::ComplexPoly;
pub use parse::parse_polynomial;
pub use rat::{
    parse_rat, rat, rat_int, rat_ln_abs, rat_sign, rat_to_f64, rat_to_string, rationalize, Rat,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("exponent at position {pos} is not a nonnegative integer")]
    BadExponent { pos: usize },
    #[error("cannot parse number `{0}`")]
    BadNumber(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("scaling factor for variable {0} is zero")]
    ZeroFactor(usize),
    #[error("constant term is zero; the function is not analytic at the origin")]
    ZeroConstantTerm,
}

/// Exponent vector of a monomial.
///
/// Ordered graded-lexicographically: lower total degree first, and within a
/// degree `Z1` before `Z2` before `Z3` (so `Z1*Z2` precedes `Z1*Z3`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `dim` variables with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        let mut p = Polynomial::zero(dim);
        p.add_term(Monomial::one(dim), c);
        p
    }

    /// The coordinate function `Z_{index+1}` (indices are zero-based).
    pub fn var(dim: usize, index: usize) -> Self {
        let mut e = vec![0; dim];
        e[index] = 1;
        let mut p = Polynomial::zero(dim);
        p.add_term(Monomial(e), Rat::one());
        p
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut p = Polynomial::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(PolyError::DimensionMismatch {
                    expected: dim,
                    got: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Terms in canonical (graded-lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponents: &[u32]) -> Rat {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.dim])
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|m| m.0[index]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.dim, Rat::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product truncated at total degree `max_degree`.
    pub fn mul_truncated(&self, other: &Polynomial, max_degree: u32) -> Polynomial {
        assert_eq!(self.dim, other.dim, "polynomial dimensions differ");
        let mut out = Polynomial::zero(self.dim);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > max_degree {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() <= max_degree {
                    out.add_term(ma.mul(mb), ca * cb);
                }
            }
        }
        out
    }

    fn check_dim(&self, got: usize) -> Result<(), PolyError> {
        if got != self.dim {
            return Err(PolyError::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, point: &[Rat]) -> Result<Rat, PolyError> {
        self.check_dim(point.len())?;
        let mut sum = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Double-precision evaluation at a complex point.
    pub fn evaluate_complex(&self, point: &[Complex64]) -> Result<Complex64, PolyError> {
        self.check_dim(point.len())?;
        Ok(ComplexPoly::new(self).eval(point))
    }

    /// Formal partial derivative with respect to the zero-based variable
    /// `index`.
    pub fn partial_derivative(&self, index: usize) -> Result<Polynomial, PolyError> {
        if index >= self.dim {
            return Err(PolyError::IndexOutOfRange {
                index,
                dim: self.dim,
            });
        }
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut em = m.0.clone();
            em[index] -= 1;
            out.add_term(Monomial(em), c * Rat::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.dim)
            .map(|j| self.partial_derivative(j).expect("index in range"))
            .collect()
    }

    /// Returns `P(c_1 Z_1, ..., c_d Z_d)`.
    pub fn scale_coordinates(&self, factors: &[Rat]) -> Result<Polynomial, PolyError> {
        self.check_dim(factors.len())?;
        if let Some(j) = factors.iter().position(Zero::is_zero) {
            return Err(PolyError::ZeroFactor(j));
        }
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (f, &e) in factors.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(f.clone(), e as usize);
                }
            }
            out.add_term(m.clone(), t);
        }
        Ok(out)
    }

    /// The univariate polynomial `p(t) = P(t, ..., t)` (dimension one).
    pub fn diagonal_restriction(&self) -> Polynomial {
        let mut out = Polynomial::zero(1);
        for (m, c) in &self.terms {
            out.add_term(Monomial(vec![m.degree()]), c.clone());
        }
        out
    }

    /// Substitutes one polynomial (all of dimension `target_dim`) for each
    /// variable.
    pub fn compose(&self, images: &[Polynomial], target_dim: usize) -> Result<Polynomial, PolyError> {
        self.check_dim(images.len())?;
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|g| vec![Polynomial::constant(target_dim, Rat::one()), g.clone()])
            .collect();
        let mut out = Polynomial::zero(target_dim);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target_dim, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[j].len() <= e {
                    let next = &powers[j][powers[j].len() - 1] * &images[j];
                    powers[j].push(next);
                }
                if e > 0 {
                    t = &t * &powers[j][e];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Invariance under every transposition of adjacent variables.
    pub fn is_symmetric(&self) -> bool {
        (0..self.dim.saturating_sub(1)).all(|j| {
            self.terms.iter().all(|(m, c)| {
                let mut e = m.0.clone();
                e.swap(j, j + 1);
                self.terms.get(&Monomial(e)) == Some(c)
            })
        })
    }

    /// Returns `(P / P(0), P(0))`.
    pub fn normalize_constant(&self) -> Result<(Polynomial, Rat), PolyError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(PolyError::ZeroConstantTerm);
        }
        Ok((self.scale(&c.recip()), c))
    }

    /// Canonical text with the given variable names.
    pub fn to_text<S: AsRef<str>>(&self, vars: &[S]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(rat_to_string(&mag));
            }
            for (j, &e) in m.0.iter().enumerate() {
                let name = vars.get(j).map(|s| s.as_ref().to_string());
                let name = name.unwrap_or_else(|| format!("Z{}", j + 1));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    pub fn default_variables(dim: usize) -> Vec<String> {
        (1..=dim).map(|j| format!("Z{j}")).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&Polynomial::default_variables(self.dim)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimensions differ");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimensions differ");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimensions differ");
        let mut out = Polynomial::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rat::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(n: usize) -> Vec<String> {
        Polynomial::default_variables(n)
    }

    fn ex1_original() -> Polynomial {
        parse_polynomial("1 - (Z1+Z2+Z3) + 3/4*(Z1*Z2+Z1*Z3+Z2*Z3)", &vars(3)).unwrap()
    }

    fn ex1_scaled() -> Polynomial {
        ex1_original()
            .scale_coordinates(&[rat(2, 3), rat(2, 3), rat(2, 3)])
            .unwrap()
    }

    fn ex2_original() -> Polynomial {
        parse_polynomial(
            "1 - (Z1+Z2+Z3+Z4) + 64/27*(Z1*Z2*Z3+Z1*Z2*Z4+Z1*Z3*Z4+Z2*Z3*Z4)",
            &vars(4),
        )
        .unwrap()
    }

    fn ex2_scaled() -> Polynomial {
        ex2_original().scale_coordinates(&vec![rat(3, 8); 4]).unwrap()
    }

    #[test]
    fn example_polynomials_parse() {
        assert_eq!(ex1_original().num_terms(), 7);
        assert_eq!(ex1_original().dim(), 3);
        assert_eq!(ex2_original().num_terms(), 9);
        let z = parse_polynomial("0", &vars(1)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.dim(), 1);
    }

    #[test]
    fn canonical_text_is_graded_lex() {
        assert_eq!(
            ex1_scaled().to_string(),
            "1 - 2/3*Z1 - 2/3*Z2 - 2/3*Z3 + 1/3*Z1*Z2 + 1/3*Z1*Z3 + 1/3*Z2*Z3"
        );
        assert_eq!(
            ex2_scaled().to_string(),
            "1 - 3/8*Z1 - 3/8*Z2 - 3/8*Z3 - 3/8*Z4 + 1/8*Z1*Z2*Z3 + 1/8*Z1*Z2*Z4 \
             + 1/8*Z1*Z3*Z4 + 1/8*Z2*Z3*Z4"
        );
        let p = parse_polynomial("-x^2 + 3*x*y - y", &["x", "y"]).unwrap();
        assert_eq!(p.to_text(&["x", "y"]), "-y - x^2 + 3*x*y");
    }

    #[test]
    fn cone_points_lie_on_the_variety() {
        let ones3 = vec![Rat::one(); 3];
        assert!(ex1_scaled().evaluate(&ones3).unwrap().is_zero());
        let ones4 = vec![Rat::one(); 4];
        assert!(ex2_scaled().evaluate(&ones4).unwrap().is_zero());
        let zeros = vec![Rat::zero(); 3];
        assert_eq!(ex1_original().evaluate(&zeros).unwrap(), Rat::one());
        assert!(matches!(
            ex1_original().evaluate(&ones4),
            Err(PolyError::DimensionMismatch { expected: 3, got: 4 })
        ));
    }

    #[test]
    fn derivative_vanishes_at_cone_point() {
        let d1 = ex1_scaled().partial_derivative(0).unwrap();
        assert!(d1.evaluate(&vec![Rat::one(); 3]).unwrap().is_zero());
        let q1 = ex1_original().partial_derivative(0).unwrap();
        assert!(q1.evaluate(&vec![rat(2, 3); 3]).unwrap().is_zero());
        let c = Polynomial::constant(1, rat(5, 1));
        assert!(c.partial_derivative(0).unwrap().is_zero());
        assert!(matches!(
            c.partial_derivative(1),
            Err(PolyError::IndexOutOfRange { index: 1, dim: 1 })
        ));
    }

    #[test]
    fn scaled_forms_match_expected() {
        let expect1 = parse_polynomial(
            "1 - 2/3*(Z1+Z2+Z3) + 1/3*(Z1*Z2+Z1*Z3+Z2*Z3)",
            &vars(3),
        )
        .unwrap();
        assert_eq!(ex1_scaled(), expect1);
        let expect2 = parse_polynomial(
            "1 - 3/8*(Z1+Z2+Z3+Z4) + 1/8*(Z1*Z2*Z3+Z1*Z2*Z4+Z1*Z3*Z4+Z2*Z3*Z4)",
            &vars(4),
        )
        .unwrap();
        assert_eq!(ex2_scaled(), expect2);
        assert_eq!(ex1_original().scale_coordinates(&vec![Rat::one(); 3]).unwrap(), ex1_original());
        assert_eq!(
            ex1_original().scale_coordinates(&[rat(1, 2), Rat::zero(), rat(1, 1)]),
            Err(PolyError::ZeroFactor(1))
        );
    }

    #[test]
    fn diagonal_restrictions() {
        let t = vec!["t"];
        assert_eq!(ex1_scaled().diagonal_restriction().to_text(&t), "1 - 2*t + t^2");
        assert_eq!(ex1_original().diagonal_restriction().to_text(&t), "1 - 3*t + 9/4*t^2");
        assert_eq!(ex2_scaled().diagonal_restriction().to_text(&t), "1 - 3/2*t + 1/2*t^3");
    }

    #[test]
    fn symmetry() {
        assert!(ex1_scaled().is_symmetric());
        assert!(ex2_scaled().is_symmetric());
        let p = parse_polynomial("Z1 + 2*Z2", &vars(2)).unwrap();
        assert!(!p.is_symmetric());
    }

    #[test]
    fn normalization() {
        let v = vars(1);
        let (p, c) = parse_polynomial("2 - 2*Z1", &v).unwrap().normalize_constant().unwrap();
        assert_eq!(p.to_text(&v), "1 - Z1");
        assert_eq!(c, rat_int(2));
        let (p, c) = parse_polynomial("Z1 - 1", &v).unwrap().normalize_constant().unwrap();
        assert_eq!(p.to_text(&v), "1 - Z1");
        assert_eq!(c, rat_int(-1));
        let (p, c) = ex1_scaled().normalize_constant().unwrap();
        assert_eq!((p, c), (ex1_scaled(), Rat::one()));
        assert_eq!(
            parse_polynomial("Z1", &v).unwrap().normalize_constant(),
            Err(PolyError::ZeroConstantTerm)
        );
    }

    #[test]
    fn truncated_product() {
        let v = vars(2);
        let a = parse_polynomial("1 + Z1 + Z2^2", &v).unwrap();
        let full = &a * &a;
        assert_eq!(a.mul_truncated(&a, 2), full.truncate(2));
    }
}
