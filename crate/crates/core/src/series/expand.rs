use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Backend, Coeffs, Param, QuasiRationalSpec, SeriesBox, SeriesError};
use crate::polycore::{rat_to_f64, Rat};

/// Default cap on the number of stored coefficients (2^27).
pub const DEFAULT_MAX_COEFFICIENTS: usize = 1 << 27;

#[derive(Debug, Clone)]
pub struct ExpandOptions {
    /// Axis `j` whose recurrence is used whenever `r_j > 0`.
    pub axis: usize,
    pub max_coefficients: usize,
    /// Requested backend; a non-rational beta always runs in floating point.
    pub backend: Backend,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions {
            axis: 0,
            max_coefficients: DEFAULT_MAX_COEFFICIENTS,
            backend: Backend::Exact,
        }
    }
}

struct Term<T> {
    exps: Vec<usize>,
    offset: usize,
    coeff: T,
    coeff_beta: T,
}

/// Calls `f(r, flat_index)` for every `r <= bounds` with `|r| = degree`, in
/// lexicographic order.
fn for_each_at_degree(
    bounds: &[usize],
    strides: &[usize],
    degree: usize,
    r: &mut Vec<usize>,
    flat: usize,
    f: &mut impl FnMut(&[usize], usize),
) {
    let j = r.len();
    if j == bounds.len() {
        if degree == 0 {
            f(r, flat);
        }
        return;
    }
    let rest: usize = bounds[j + 1..].iter().sum();
    let lo = degree.saturating_sub(rest);
    let hi = degree.min(bounds[j]);
    if lo > hi {
        return;
    }
    for x in lo..=hi {
        r.push(x);
        for_each_at_degree(bounds, strides, degree - x, r, flat + x * strides[j], f);
        r.pop();
    }
}

/// `-(sum of f * a over parts) / divisor` with a single final reduction.
/// Each part is a small multiplier and the index of an earlier coefficient.
fn sum_over_common_denominator(coeffs: &[Rat], parts: &[(Rat, usize)], divisor: usize) -> Rat {
    let mut big_den = BigInt::one();
    let mut small_den = BigInt::one();
    for (f, i) in parts {
        let a = &coeffs[*i];
        if !a.denom().is_one() && a.denom() != &big_den {
            big_den = big_den.lcm(a.denom());
        }
        if !f.denom().is_one() && f.denom() != &small_den {
            small_den = small_den.lcm(f.denom());
        }
    }
    let mut num = BigInt::zero();
    for (f, i) in parts {
        let a = &coeffs[*i];
        let fnum = f.numer() * (&small_den / f.denom());
        if a.denom() == &big_den {
            num += fnum * a.numer();
        } else {
            num += fnum * a.numer() * (&big_den / a.denom());
        }
    }
    Rat::new(-num, big_den * small_den * BigInt::from(divisor))
}

fn pick_axis(r: &[usize], preferred: usize) -> usize {
    if r[preferred] > 0 {
        preferred
    } else {
        r.iter().position(|&x| x > 0).expect("r is nonzero")
    }
}

/// Expands `P^(-beta)` on the box `0 <= r <= bounds`.
///
/// For any axis `j` with `r_j >= 1`,
/// `r_j a_r = -sum_{0 != s <= r} p_s (r_j - s_j + beta s_j) a_{r-s}`
/// with `a_0 = 1`. Coefficients are filled by increasing total degree, so
/// every dependency is already present.
pub fn expand_power(
    spec: &QuasiRationalSpec,
    bounds: &[usize],
    opts: &ExpandOptions,
) -> Result<SeriesBox, SeriesError> {
    let d = spec.dim();
    if bounds.len() != d {
        return Err(SeriesError::Poly(crate::polycore::PolyError::DimensionMismatch {
            expected: d,
            got: bounds.len(),
        }));
    }
    if opts.axis >= d {
        return Err(SeriesError::Poly(crate::polycore::PolyError::IndexOutOfRange {
            index: opts.axis,
            dim: d,
        }));
    }
    let requested: u128 = bounds.iter().map(|&b| b as u128 + 1).product();
    if requested > opts.max_coefficients as u128 {
        return Err(SeriesError::MemoryCap {
            requested,
            cap: opts.max_coefficients,
        });
    }
    let total = requested as usize;
    let mut strides = vec![1usize; d];
    for j in (0..d.saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * (bounds[j + 1] + 1);
    }

    // Terms of P other than the constant, each with its flat offset.
    let raw: Vec<(Vec<usize>, &Rat)> = spec
        .poly()
        .terms()
        .filter(|(m, _)| !m.is_one())
        .map(|(m, c)| (m.exponents().iter().map(|&e| e as usize).collect(), c))
        .filter(|(e, _): &(Vec<usize>, _)| e.iter().zip(bounds).all(|(x, b)| x <= b))
        .collect();
    let offset = |e: &[usize]| e.iter().zip(&strides).map(|(x, s)| x * s).sum::<usize>();
    let max_degree: usize = bounds.iter().sum();

    let backend = match (spec.beta(), opts.backend) {
        (Param::Exact(_), Backend::Exact) => Backend::Exact,
        _ => Backend::Float,
    };

    let coeffs = match backend {
        Backend::Exact => {
            let beta = spec.beta().as_exact().expect("exact beta").clone();
            let terms: Vec<Term<Rat>> = raw
                .iter()
                .map(|(e, c)| Term {
                    offset: offset(e),
                    coeff: (*c).clone(),
                    coeff_beta: *c * &beta,
                    exps: e.clone(),
                })
                .collect();
            let mut a = vec![Rat::zero(); total];
            a[0] = Rat::from_integer(1.into());
            let mut r = Vec::with_capacity(d);
            let mut parts: Vec<(Rat, usize)> = Vec::with_capacity(terms.len());
            for k in 1..=max_degree {
                for_each_at_degree(bounds, &strides, k, &mut r, 0, &mut |r, idx| {
                    let j = pick_axis(r, opts.axis);
                    let rj = r[j];
                    parts.clear();
                    for t in &terms {
                        if t.exps.iter().zip(r).all(|(s, x)| s <= x) {
                            let prev = idx - t.offset;
                            if a[prev].is_zero() {
                                continue;
                            }
                            let sj = t.exps[j];
                            let mut factor = &t.coeff * Rat::from_integer((rj as i64 - sj as i64).into());
                            if sj > 0 {
                                factor += &t.coeff_beta * Rat::from_integer((sj as i64).into());
                            }
                            parts.push((factor, prev));
                        }
                    }
                    a[idx] = sum_over_common_denominator(&a, &parts, rj);
                });
            }
            Coeffs::Exact(a)
        }
        Backend::Float => {
            let beta = spec.beta().to_f64();
            let terms: Vec<Term<f64>> = raw
                .iter()
                .map(|(e, c)| {
                    let c = rat_to_f64(c);
                    Term {
                        offset: offset(e),
                        coeff: c,
                        coeff_beta: c * beta,
                        exps: e.clone(),
                    }
                })
                .collect();
            let mut a = vec![0.0f64; total];
            a[0] = 1.0;
            let mut r = Vec::with_capacity(d);
            for k in 1..=max_degree {
                for_each_at_degree(bounds, &strides, k, &mut r, 0, &mut |r, idx| {
                    let j = pick_axis(r, opts.axis);
                    let rj = r[j] as f64;
                    let mut sum = 0.0;
                    for t in &terms {
                        if t.exps.iter().zip(r).all(|(s, x)| s <= x) {
                            let sj = t.exps[j] as f64;
                            sum += (t.coeff * (rj - sj) + t.coeff_beta * sj) * a[idx - t.offset];
                        }
                    }
                    a[idx] = -sum / rj;
                });
            }
            Coeffs::Float(a)
        }
    };

    Ok(SeriesBox {
        bounds: bounds.to_vec(),
        strides,
        coeffs,
    })
}
