use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::One;

use super::{Param, QuasiRationalSpec, SeriesError};
use crate::polycore::{ComplexPoly, Polynomial, Rat};

pub const DEFAULT_ORACLE_DEGREE_CAP: u32 = 8;

/// `sum_{k <= D} binom(-beta, k) (P - 1)^k`, truncated at total degree `D`.
///
/// Independent of the recurrence in [`super::expand_power`]; exact, and only
/// practical for small `D`.
pub fn brute_force_oracle(
    spec: &QuasiRationalSpec,
    total_degree: u32,
    degree_cap: u32,
) -> Result<Polynomial, SeriesError> {
    if total_degree > degree_cap {
        return Err(SeriesError::DegreeCap {
            requested: total_degree,
            cap: degree_cap,
        });
    }
    let beta = spec.beta().as_exact().ok_or(SeriesError::IrrationalBeta)?;
    let d = spec.dim();
    let one = Polynomial::constant(d, Rat::one());
    let u = spec.poly() - &one;
    let mut out = one.clone();
    let mut power = one;
    let mut binom = Rat::one();
    for k in 1..=total_degree {
        let kr = Rat::from_integer(k.into());
        binom = binom * (-beta - (&kr - Rat::one())) / &kr;
        power = power.mul_truncated(&u, total_degree);
        out = &out + &power.scale(&binom);
    }
    Ok(out)
}

/// Logarithm of `P(z)` on the branch continuous along `t -> P(t z)`,
/// `t in [0, 1]`, starting from `log P(0) = 0`.
fn continued_log(p: &ComplexPoly, z: &[Complex64]) -> Complex64 {
    let mut steps = 8usize;
    let mut w = vec![Complex64::new(0.0, 0.0); z.len()];
    loop {
        let mut prev = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut smooth = true;
        for i in 1..=steps {
            let t = i as f64 / steps as f64;
            for (wi, zi) in w.iter_mut().zip(z) {
                *wi = zi * t;
            }
            let v = p.eval(&w);
            let step = (v / prev).ln();
            if step.im.abs() > 0.5 {
                smooth = false;
                break;
            }
            acc += step;
            prev = v;
        }
        if smooth || steps >= 1 << 14 {
            return acc;
        }
        steps *= 2;
    }
}

fn quadrature(
    p: &ComplexPoly,
    beta: &Param,
    r: &[u32],
    radius: &[f64],
    grid: usize,
) -> Option<Complex64> {
    let d = r.len();
    let int_power = beta.as_integer();
    let beta_f = beta.to_f64();
    // When |P - 1| < 1 on the whole polydisk the principal logarithm is
    // already the continuous branch.
    let principal = p.majorant(radius) < 1.0;
    let angles: Vec<Vec<Complex64>> = (0..d)
        .map(|_| {
            (0..grid)
                .map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / grid as f64))
                .collect()
        })
        .collect();
    let scale: f64 = radius.iter().zip(r).map(|(rho, &k)| rho.powi(-(k as i32))).product();
    let mut idx = vec![0usize; d];
    let mut z = vec![Complex64::new(0.0, 0.0); d];
    let mut sum = Complex64::new(0.0, 0.0);
    loop {
        let mut phase = Complex64::new(1.0, 0.0);
        for j in 0..d {
            let u = angles[j][idx[j]];
            z[j] = u * radius[j];
            // u^{-r_j} = conj(u)^{r_j} on the unit circle
            phase *= angles[j][(grid - (idx[j] * r[j] as usize) % grid) % grid];
        }
        let v = p.eval(&z);
        if v.norm() < 1e-13 {
            return None;
        }
        let f = match int_power {
            Some(n) => v.powi(-(n as i32)),
            None if principal => (v.ln() * (-beta_f)).exp(),
            None => (continued_log(p, &z) * (-beta_f)).exp(),
        };
        sum += f * phase;
        let mut j = d;
        loop {
            if j == 0 {
                let nodes = (grid as f64).powi(d as i32);
                return Some(sum * (scale / nodes));
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < grid {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Approximates `a_r` by the equal-angle product rule for the Cauchy
/// integral over the torus `|Z_j| = radius_j`.
///
/// The radius must lie inside the domain of convergence. If `P` vanishes at
/// a node, the radius is shrunk by 0.9 and the rule retried (at most 5
/// times).
pub fn cauchy_coefficient(
    spec: &QuasiRationalSpec,
    r: &[u32],
    radius: &[f64],
    grid: usize,
) -> Result<Complex64, SeriesError> {
    let d = spec.dim();
    if r.len() != d || radius.len() != d {
        return Err(SeriesError::BadQuadrature(format!(
            "expected {d} exponents and radii, got {} and {}",
            r.len(),
            radius.len()
        )));
    }
    if grid < 8 {
        return Err(SeriesError::BadQuadrature(format!("grid {grid} < 8")));
    }
    if radius.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(SeriesError::BadQuadrature("radii must be positive".into()));
    }
    let p = ComplexPoly::new(spec.poly());
    let mut rad = radius.to_vec();
    const RETRIES: u32 = 5;
    for attempt in 0..=RETRIES {
        if let Some(v) = quadrature(&p, spec.beta(), r, &rad, grid) {
            return Ok(v);
        }
        if attempt < RETRIES {
            rad.iter_mut().for_each(|x| *x *= 0.9);
        }
    }
    Err(SeriesError::NodeCollision {
        radius: rad,
        retries: RETRIES,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_polynomial, rat, rat_int, rat_to_f64};

    fn spec(text: &str, d: usize, beta: Param) -> QuasiRationalSpec {
        let p = parse_polynomial(text, &Polynomial::default_variables(d)).unwrap();
        QuasiRationalSpec::new(p, beta).unwrap()
    }

    const EX1: &str = "1 - (Z1+Z2+Z3) + 3/4*(Z1*Z2+Z1*Z3+Z2*Z3)";
    const EX2: &str = "1 - (Z1+Z2+Z3+Z4) + 64/27*(Z1*Z2*Z3+Z1*Z2*Z4+Z1*Z3*Z4+Z2*Z3*Z4)";

    #[test]
    fn oracle_small_cases() {
        let s = spec(EX1, 3, Param::Exact(rat_int(1)));
        let o = brute_force_oracle(&s, 3, DEFAULT_ORACLE_DEGREE_CAP).unwrap();
        assert_eq!(o.coeff(&[1, 1, 1]), rat(3, 2));
        let o0 = brute_force_oracle(&s, 0, DEFAULT_ORACLE_DEGREE_CAP).unwrap();
        assert_eq!(o0, Polynomial::constant(3, rat_int(1)));
        let g = spec("1 - Z1", 1, Param::Exact(rat_int(1)));
        let o = brute_force_oracle(&g, 5, DEFAULT_ORACLE_DEGREE_CAP).unwrap();
        assert_eq!(o.num_terms(), 6);
        assert!(o.terms().all(|(_, c)| c == &rat_int(1)));
        assert!(matches!(
            brute_force_oracle(&g, 9, DEFAULT_ORACLE_DEGREE_CAP),
            Err(SeriesError::DegreeCap { requested: 9, cap: 8 })
        ));
        let f = spec("1 - Z1", 1, Param::Float(0.3));
        assert_eq!(brute_force_oracle(&f, 2, 8), Err(SeriesError::IrrationalBeta));
    }

    #[test]
    fn cauchy_matches_known_coefficients() {
        let s = spec(EX1, 3, Param::Exact(rat_int(1)));
        let v = cauchy_coefficient(&s, &[1, 1, 1], &[0.3; 3], 32).unwrap();
        assert!((v.re - 1.5).abs() < 1e-8 && v.im.abs() < 1e-8, "{v}");
        let v0 = cauchy_coefficient(&s, &[0, 0, 0], &[0.3; 3], 32).unwrap();
        assert!((v0.re - 1.0).abs() < 1e-10);
        let s2 = spec(EX2, 4, Param::Exact(rat_int(1)));
        let v = cauchy_coefficient(&s2, &[1, 1, 1, 1], &[0.15; 4], 24).unwrap();
        assert!((v.re - rat_to_f64(&rat(136, 27))).abs() < 1e-6, "{v}");
    }

    #[test]
    fn cauchy_with_fractional_power() {
        // (1 - z)^(-1/2): a_3 = (1/2)(3/2)(5/2)/3! = 5/16
        let s = spec("1 - Z1", 1, Param::Exact(rat(1, 2)));
        let v = cauchy_coefficient(&s, &[3], &[0.5], 64).unwrap();
        assert!((v.re - 5.0 / 16.0).abs() < 1e-12);
        // a branch that wraps: (1 + z^2)^(-1/2) on |z| = 0.9
        let s = spec("1 + Z1^2", 1, Param::Exact(rat(1, 2)));
        let v = cauchy_coefficient(&s, &[2], &[0.9], 256).unwrap();
        assert!((v.re + 0.5).abs() < 1e-10, "{v}");
    }

    #[test]
    fn node_collision_shrinks_radius() {
        // P = 1 - Z1 vanishes at the node z = 1 of the unit circle.
        let s = spec("1 - Z1", 1, Param::Exact(rat_int(1)));
        let v = cauchy_coefficient(&s, &[2], &[1.0], 256).unwrap();
        assert!((v.re - 1.0).abs() < 1e-9, "{v}");
        assert!(matches!(
            cauchy_coefficient(&s, &[2], &[1.0], 4),
            Err(SeriesError::BadQuadrature(_))
        ));
    }
}
