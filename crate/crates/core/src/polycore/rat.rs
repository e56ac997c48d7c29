//! Exact rational scalars.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"num/den"`, an integer, or a plain decimal such as `-0.55` or
/// `1.5e-3`. Decimals are converted exactly.
pub fn parse_rat(text: &str) -> Result<Rat, PolyError> {
    let s = text.trim();
    let bad = || PolyError::BadNumber(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let mut value = Rat::new(all, BigInt::from(10));
    let shift = exp - frac_part.len() as i32;
    let ten = Rat::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// Canonical text: `num/den`, or `num` when the denominator is one.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let l = rat_ln_abs(r);
        let m = l.exp();
        if r.is_negative() {
            -m
        } else {
            m
        }
    })
}

fn bigint_ln(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map(|v| v.abs().ln()).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap_or(0.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of |r| without overflowing on huge numerators or
/// denominators. Returns `-inf` for zero.
pub fn rat_ln_abs(r: &Rat) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    bigint_ln(r.numer()) - bigint_ln(r.denom())
}

/// Sign of a rational as -1, 0 or 1.
pub fn rat_sign(r: &Rat) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions). Returns `None` when the residual exceeds `tol`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a;
        if (h1 as f64 / k1 as f64 - x).abs() <= tol || frac.abs() < 1e-300 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    let approx = h1 as f64 / k1 as f64;
    if (approx - x).abs() <= tol.max(x.abs() * tol) {
        Some(Rat::new(BigInt::from(h1), BigInt::from(k1)))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rat("64/27").unwrap(), rat(64, 27));
        assert_eq!(parse_rat("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("0.55").unwrap(), rat(11, 20));
        assert_eq!(parse_rat("-.4").unwrap(), rat(-2, 5));
        assert_eq!(parse_rat("2").unwrap(), rat_int(2));
        assert_eq!(parse_rat("1.5e-3").unwrap(), rat(3, 2000));
        assert_eq!(parse_rat("7e2").unwrap(), rat_int(700));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat(".").is_err());
    }

    #[test]
    fn canonical_text() {
        assert_eq!(rat_to_string(&rat(2, 3)), "2/3");
        assert_eq!(rat_to_string(&rat(-4, 2)), "-2");
        assert_eq!(rat_to_string(&rat_int(0)), "0");
    }

    #[test]
    fn ln_of_huge_values() {
        let big = num_traits::pow(rat(3, 2), 3000);
        let expect = 3000.0 * 1.5f64.ln();
        assert!((rat_ln_abs(&big) - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn continued_fraction_rationalization() {
        assert_eq!(rationalize(2.0 / 3.0, 1000, 1e-12), Some(rat(2, 3)));
        assert_eq!(rationalize(-0.375, 1000, 1e-12), Some(rat(-3, 8)));
        assert_eq!(rationalize(std::f64::consts::PI, 100, 1e-12), None);
    }
}
