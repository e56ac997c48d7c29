//! Dense univariate polynomials over Q, used for the diagonal restriction.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::polycore::{rat_to_f64, rationalize, Polynomial, Rat};

/// Coefficients by increasing power, with no trailing zeros.
pub type Dense = Vec<Rat>;

pub fn from_poly(p: &Polynomial) -> Dense {
    assert_eq!(p.dim(), 1, "univariate polynomial expected");
    let n = p.total_degree().map(|d| d as usize + 1).unwrap_or(0);
    let mut c = vec![Rat::zero(); n];
    for (m, v) in p.terms() {
        c[m.exponents()[0] as usize] = v.clone();
    }
    c
}

fn trim(mut c: Dense) -> Dense {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

pub fn derivative(c: &[Rat]) -> Dense {
    trim(
        c.iter()
            .enumerate()
            .skip(1)
            .map(|(k, v)| v * Rat::from_integer(BigInt::from(k)))
            .collect(),
    )
}

pub fn eval(c: &[Rat], t: &Rat) -> Rat {
    c.iter().rev().fold(Rat::zero(), |acc, v| acc * t + v)
}

fn rem(a: &[Rat], b: &[Rat]) -> Dense {
    let mut r = trim(a.to_vec());
    let lb = b.last().expect("nonzero divisor");
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let q = r.last().expect("nonempty") / lb;
        for (i, bv) in b.iter().enumerate() {
            r[shift + i] -= &q * bv;
        }
        r = trim(r);
    }
    r
}

fn monic(c: Dense) -> Dense {
    match c.last().cloned() {
        Some(l) => c.into_iter().map(|v| v / &l).collect(),
        None => c,
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[Rat], b: &[Rat]) -> Dense {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

/// Multiplicity of `t` as a root of `c` (0 if not a root).
pub fn root_multiplicity(c: &[Rat], t: &Rat) -> usize {
    let mut cur = trim(c.to_vec());
    let mut m = 0;
    while !cur.is_empty() && eval(&cur, t).is_zero() {
        m += 1;
        cur = derivative(&cur);
    }
    m
}

fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1 << 40 {
        return None;
    }
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            if k * k != n {
                out.push(n / k);
            }
        }
        k += 1;
    }
    Some(out)
}

fn durand_kerner(c: &[Rat]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = rat_to_f64(&c[n]);
    let a: Vec<f64> = c.iter().map(|v| rat_to_f64(v) / lead).collect();
    let f = |z: Complex64| a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &v| acc * z + v);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(0.4, 0.9).powu(k as u32))
        .collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = f(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots
}

/// All distinct nonzero rational roots.
///
/// Uses the rational root theorem when the extreme integer coefficients are
/// small enough to factor by trial division; otherwise falls back to
/// numeric roots that are rationalized and then verified exactly.
pub fn rational_roots(c: &[Rat]) -> Vec<Rat> {
    let c = trim(c.to_vec());
    if c.len() < 2 {
        return Vec::new();
    }
    // strip the factor t^k
    let start = c.iter().position(|v| !v.is_zero()).expect("nonzero");
    let c: Dense = c[start..].to_vec();
    if c.len() < 2 {
        return Vec::new();
    }
    let den_lcm = c.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = c
        .iter()
        .map(|v| (v * Rat::from_integer(den_lcm.clone())).to_integer())
        .collect();
    let mut roots: Vec<Rat> = Vec::new();
    let push = |t: Rat, roots: &mut Vec<Rat>| {
        if !t.is_zero() && eval(&c, &t).is_zero() && !roots.contains(&t) {
            roots.push(t);
        }
    };
    match (small_divisors(&ints[0]), small_divisors(ints.last().expect("nonempty"))) {
        (Some(ps), Some(qs)) => {
            for p in &ps {
                for q in &qs {
                    let t = Rat::new(BigInt::from(*p), BigInt::from(*q));
                    push(t.clone(), &mut roots);
                    push(-t, &mut roots);
                }
            }
        }
        _ => {
            for z in durand_kerner(&c) {
                if z.im.abs() <= 1e-6 * (1.0 + z.re.abs()) {
                    for tol in [1e-6, 1e-8, 1e-10, 1e-12, 1e-14] {
                        if let Some(t) = rationalize(z.re, 1_000_000, tol) {
                            push(t, &mut roots);
                        }
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}
