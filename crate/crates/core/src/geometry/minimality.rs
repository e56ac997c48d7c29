//! Nonvanishing of `P` on the open polydisk `{|Z_j| < |Z*_j|}`.
//!
//! After rescaling the cone point to modulus one, `Z -> 1 + 1/W` maps the
//! unit disk onto the half-plane `Re W < -1/2`. If the numerator of
//! `P(1 + 1/W)` is a positive combination of the `W_j` alone its real part
//! is negative there, which proves minimality. Otherwise a numeric falsifier
//! searches the polydisk for a zero.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{newton, ComplexJet, ConePoint, GeometryError};
use crate::polycore::{Monomial, Polynomial, Rat};

/// Primitive integer numerator of `P(1 + 1/Z_1, ..., 1 + 1/Z_d)` after
/// clearing `prod Z_j^(deg_j P)`, signed so its first canonical term is
/// positive.
pub fn mobius_numerator(p: &Polynomial) -> Polynomial {
    let d = p.dim();
    let degs: Vec<u32> = (0..d).map(|j| p.degree_in(j)).collect();
    let one = Polynomial::constant(d, Rat::one());
    let shifted: Vec<Polynomial> = (0..d).map(|j| &Polynomial::var(d, j) + &one).collect();
    let mut shifted_pows: Vec<Vec<Polynomial>> = shifted.iter().map(|s| vec![one.clone(), s.clone()]).collect();
    let mut out = Polynomial::zero(d);
    for (m, c) in p.terms() {
        let e = m.exponents();
        let mut mono = vec![0u32; d];
        let mut t = Polynomial::constant(d, c.clone());
        for j in 0..d {
            mono[j] = degs[j] - e[j];
            let k = e[j] as usize;
            while shifted_pows[j].len() <= k {
                let next = &shifted_pows[j][shifted_pows[j].len() - 1] * &shifted[j];
                shifted_pows[j].push(next);
            }
            if k > 0 {
                t = &t * &shifted_pows[j][k];
            }
        }
        let mut shift = Polynomial::zero(d);
        shift.add_term(Monomial::new(mono), Rat::one());
        out = &out + &(&t * &shift);
    }
    primitive(out)
}

fn primitive(p: Polynomial) -> Polynomial {
    if p.is_zero() {
        return p;
    }
    let den = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let num = p.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()));
    let mut k = Rat::new(den, num);
    if p.terms().next().is_some_and(|(_, c)| c.is_negative()) {
        k = -k;
    }
    p.scale(&k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternResult {
    Proven,
    Unknown,
}

/// `Proven` iff the numerator is a positive combination of degree-one
/// monomials only; then its real part is below `-(sum of coefficients)/2`
/// on `Re Z_j < -1/2` and it cannot vanish there.
pub fn pattern_lemma_check(numerator: &Polynomial) -> PatternResult {
    let ok = !numerator.is_zero()
        && numerator
            .terms()
            .all(|(m, c)| m.degree() == 1 && c.is_positive());
    if ok {
        PatternResult::Proven
    } else {
        PatternResult::Unknown
    }
}

/// Solves `numerator = 0` for the zero-based variable `index`, returning
/// `(num, den)` with `Z_index = num / den`. The numerator must have degree
/// exactly one in that variable.
pub fn eliminate_variable(numerator: &Polynomial, index: usize) -> Result<(Polynomial, Polynomial), GeometryError> {
    let d = numerator.dim();
    if index >= d {
        return Err(crate::polycore::PolyError::IndexOutOfRange { index, dim: d }.into());
    }
    let degree = numerator.degree_in(index);
    if degree != 1 {
        return Err(GeometryError::DegreeNotOne { index, degree });
    }
    let mut lead = Polynomial::zero(d);
    let mut rest = Polynomial::zero(d);
    for (m, c) in numerator.terms() {
        let mut e = m.exponents().to_vec();
        if e[index] == 1 {
            e[index] = 0;
            lead.add_term(Monomial::new(e), c.clone());
        } else {
            rest.add_term(Monomial::new(e), -c);
        }
    }
    Ok((rest, lead))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertificateStatus {
    ProvenByPattern,
    NotFalsified {
        samples: usize,
        min_modulus: f64,
        argmin: Vec<Complex64>,
    },
    Falsified {
        witness: Vec<Complex64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalityCertificate {
    pub status: CertificateStatus,
    /// Möbius numerator of the rescaled polynomial (rational cone points only).
    pub transform_numerator: Option<Polynomial>,
}

#[derive(Debug, Clone)]
pub struct FalsifierOptions {
    pub samples: usize,
    pub seed: u64,
    /// Number of best samples refined by local descent.
    pub descents: usize,
}

impl Default for FalsifierOptions {
    fn default() -> Self {
        FalsifierOptions {
            samples: 4096,
            seed: 42,
            descents: 100,
        }
    }
}

const PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

/// Halton point `index` (scrambled by a seed-dependent offset) mapped to the
/// polydisk: area-uniform radius and uniform angle per axis.
fn polydisk_sample(index: u64, seed: u64, moduli: &[f64]) -> Vec<Complex64> {
    let d = moduli.len();
    let shift = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 40;
    moduli
        .iter()
        .enumerate()
        .map(|(j, &m)| {
            let (b1, b2) = if 2 * j + 1 < PRIMES.len() {
                (PRIMES[2 * j], PRIMES[2 * j + 1])
            } else {
                (PRIMES[(2 * j) % PRIMES.len()], PRIMES[(2 * j + 1 + d) % PRIMES.len()])
            };
            let u = radical_inverse(index + shift, b1);
            let v = radical_inverse(index + shift, b2);
            Complex64::from_polar(m * u.sqrt(), TAU * v)
        })
        .collect()
}

fn clip(z: &mut [Complex64], moduli: &[f64]) {
    for (c, &m) in z.iter_mut().zip(moduli) {
        let r = c.norm();
        if r > m {
            *c *= m / r;
        }
    }
}

/// Local search for a zero of `P` from `z`, staying in the closed polydisk.
fn descend(jet: &ComplexJet, mut z: Vec<Complex64>, moduli: &[f64]) -> Vec<Complex64> {
    for _ in 0..60 {
        let v = jet.value(&z);
        if v.norm() < 1e-15 {
            break;
        }
        let g = jet.gradient(&z);
        let gn: f64 = g.iter().map(|x| x.norm_sqr()).sum();
        if gn < 1e-300 {
            break;
        }
        // minimum-norm Newton step for one equation in d unknowns
        for (zi, gi) in z.iter_mut().zip(&g) {
            *zi -= v * gi.conj() / gn;
        }
        clip(&mut z, moduli);
    }
    z
}

/// Accepts `z` as an interior zero only when it sits well inside the
/// polydisk relative to its Newton distance to `V_P`.
fn is_interior_zero(jet: &ComplexJet, z: &[Complex64], moduli: &[f64]) -> bool {
    let v = jet.value(z).norm();
    if v >= 1e-10 {
        return false;
    }
    let margin = z
        .iter()
        .zip(moduli)
        .map(|(c, &m)| m - c.norm())
        .fold(f64::INFINITY, f64::min);
    if margin <= 1e-12 {
        return false;
    }
    let grad = newton::max_norm(&jet.gradient(z));
    grad > 0.0 && v / grad <= 1e-3 * margin
}

/// Three-state minimality check: proven by the Möbius pattern, falsified
/// by an interior zero, or merely not falsified after sampling.
pub fn certify_minimality(p: &Polynomial, cone: &ConePoint, opts: &FalsifierOptions) -> MinimalityCertificate {
    let transform_numerator = cone
        .exact_moduli()
        .and_then(|m| p.scale_coordinates(&m).ok())
        .map(|scaled| mobius_numerator(&scaled));
    if let Some(num) = &transform_numerator {
        if pattern_lemma_check(num) == PatternResult::Proven {
            return MinimalityCertificate {
                status: CertificateStatus::ProvenByPattern,
                transform_numerator,
            };
        }
    }

    let moduli = cone.moduli();
    let jet = ComplexJet::new(p);
    let mut scored: Vec<(f64, u64, Vec<Complex64>)> = (1..=opts.samples as u64)
        .map(|i| {
            let z = polydisk_sample(i, opts.seed, &moduli);
            (jet.value(&z).norm(), i, z)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut best = scored
        .first()
        .map(|(v, _, z)| (*v, z.clone()))
        .unwrap_or((f64::INFINITY, vec![Complex64::zero(); moduli.len()]));
    for (_, _, start) in scored.into_iter().take(opts.descents) {
        let z = descend(&jet, start, &moduli);
        if is_interior_zero(&jet, &z, &moduli) {
            return MinimalityCertificate {
                status: CertificateStatus::Falsified { witness: z },
                transform_numerator,
            };
        }
        let v = jet.value(&z).norm();
        if v < best.0 {
            best = (v, z);
        }
    }
    MinimalityCertificate {
        status: CertificateStatus::NotFalsified {
            samples: opts.samples,
            min_modulus: best.0,
            argmin: best.1,
        },
        transform_numerator,
    }
}
