//! The Gamma function on the real line.

use std::f64::consts::PI;

use thiserror::Error;

use crate::series::Param;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("Gamma has a pole at {argument}")]
pub struct GammaPole {
    pub argument: String,
}

// Lanczos approximation, g = 7, nine terms.
const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(pi x)` with the argument reduced first, so integers give exact zeros.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

/// `ln |Gamma(x)|` for `x >= 1/2`.
fn ln_gamma_right(x: f64) -> f64 {
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// `(ln |Gamma(x)|, sign Gamma(x))`.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64), GammaPole> {
    if x.is_nan() || (x <= 0.0 && x.fract() == 0.0) {
        return Err(GammaPole {
            argument: format!("{x:?}"),
        });
    }
    if x >= 0.5 {
        return Ok((ln_gamma_right(x), 1.0));
    }
    // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    let s = sin_pi(x);
    Ok((PI.ln() - s.abs().ln() - ln_gamma_right(1.0 - x), s.signum()))
}

pub fn gamma(x: f64) -> Result<f64, GammaPole> {
    if x > 0.0 && x.fract() == 0.0 && x <= 21.0 {
        return Ok((1..x as u64).product::<u64>() as f64);
    }
    let (l, s) = ln_gamma_signed(x)?;
    Ok(s * l.exp())
}

/// Gamma of a parameter; rational arguments detect poles exactly.
pub fn gamma_param(x: &Param) -> Result<f64, GammaPole> {
    if x.is_nonpositive_integer() {
        return Err(GammaPole {
            argument: x.to_string(),
        });
    }
    gamma(x.to_f64())
}

pub fn ln_gamma_param(x: &Param) -> Result<(f64, f64), GammaPole> {
    if x.is_nonpositive_integer() {
        return Err(GammaPole {
            argument: x.to_string(),
        });
    }
    ln_gamma_signed(x.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rat;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn classical_values() {
        assert!(close(gamma(0.5).unwrap(), PI.sqrt(), 1e-12));
        assert!(close(gamma(1.0 / 3.0).unwrap(), 2.678_938_534_707_747_6, 1e-12));
        assert!(close(gamma(0.1).unwrap(), 9.513_507_698_668_731_8, 1e-12));
        assert!(close(gamma(1.5).unwrap(), PI.sqrt() / 2.0, 1e-12));
        assert!(close(gamma(-0.5).unwrap(), -2.0 * PI.sqrt(), 1e-12));
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert!(close(gamma(30.5).unwrap(), 4.822_696_933_490_908_6e31, 1e-12));
    }

    #[test]
    fn negative_argument_matches_recurrence() {
        let g = gamma(-0.1).unwrap();
        assert!(close(g, -10.686_287_021_193_2, 1e-12), "{g}");
        assert!(close(g, gamma(0.9).unwrap() / -0.1, 1e-13));
        for &x in &[-2.7, -1.25, -0.75, 0.3, 1.7, 6.2] {
            let lhs = gamma(x + 1.0).unwrap();
            assert!(close(lhs, x * gamma(x).unwrap(), 1e-12), "x = {x}");
        }
    }

    #[test]
    fn poles() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-3.0).is_err());
        assert!(gamma_param(&Param::Exact(rat(-2, 1))).is_err());
        assert!(gamma_param(&Param::Exact(rat(-3, 2))).is_ok());
        let (l, s) = ln_gamma_param(&Param::Exact(rat(-1, 10))).unwrap();
        assert!(s < 0.0 && close(l, 10.686_287_021_193_2f64.ln(), 1e-12));
    }
}
