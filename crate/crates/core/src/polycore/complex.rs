use num_complex::Complex64;

use super::{rat_to_f64, Polynomial};

/// Double-precision copy of a [`Polynomial`] for fast complex evaluation
/// (quadrature, Newton iterations, sampling).
#[derive(Debug, Clone)]
pub struct ComplexPoly {
    dim: usize,
    max_exp: Vec<usize>,
    terms: Vec<(Vec<u32>, f64)>,
}

impl ComplexPoly {
    pub fn new(p: &Polynomial) -> Self {
        let terms: Vec<(Vec<u32>, f64)> = p
            .terms()
            .map(|(m, c)| (m.exponents().to_vec(), rat_to_f64(c)))
            .collect();
        let max_exp = (0..p.dim()).map(|j| p.degree_in(j) as usize).collect();
        ComplexPoly {
            dim: p.dim(),
            max_exp,
            terms,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `sum |c_s| radius^s` over the non-constant terms: a bound for
    /// `|P(z) - P(0)|` on the polydisk `|z_j| <= radius_j`.
    pub fn majorant(&self, radius: &[f64]) -> f64 {
        self.terms
            .iter()
            .filter(|(e, _)| e.iter().any(|&k| k > 0))
            .map(|(e, c)| e.iter().zip(radius).fold(c.abs(), |acc, (&k, r)| acc * r.powi(k as i32)))
            .sum()
    }

    /// Evaluates at `z`; the caller guarantees `z.len() == dim`.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.dim);
        let powers: Vec<Vec<Complex64>> = z
            .iter()
            .zip(&self.max_exp)
            .map(|(&x, &m)| {
                let mut v = Vec::with_capacity(m + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                v.push(acc);
                for _ in 0..m {
                    acc *= x;
                    v.push(acc);
                }
                v
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(Complex64::new(*c, 0.0), |acc, (j, &k)| acc * powers[j][k as usize])
            })
            .sum()
    }
}
