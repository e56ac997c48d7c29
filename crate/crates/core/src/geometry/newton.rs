//! Small dense complex linear algebra and polynomial jets for Newton
//! iterations.

use num_complex::Complex64;

use crate::polycore::{ComplexPoly, Polynomial};

/// `P` with its gradient and Hessian compiled for complex evaluation.
#[derive(Debug, Clone)]
pub struct ComplexJet {
    value: ComplexPoly,
    grad: Vec<ComplexPoly>,
    hess: Vec<Vec<ComplexPoly>>,
}

impl ComplexJet {
    pub fn new(p: &Polynomial) -> Self {
        let grad_exact = p.gradient();
        let hess = grad_exact
            .iter()
            .map(|g| g.gradient().iter().map(ComplexPoly::new).collect())
            .collect();
        ComplexJet {
            value: ComplexPoly::new(p),
            grad: grad_exact.iter().map(ComplexPoly::new).collect(),
            hess,
        }
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn value(&self, z: &[Complex64]) -> Complex64 {
        self.value.eval(z)
    }

    pub fn gradient(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.grad.iter().map(|g| g.eval(z)).collect()
    }

    pub fn hessian(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.hess
            .iter()
            .map(|row| row.iter().map(|h| h.eval(z)).collect())
            .collect()
    }
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot is (numerically) zero.
pub fn solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter().map(|v| v.norm()))
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Least-squares solution of the (possibly overdetermined) system
/// `j x = rhs` through the normal equations.
pub fn least_squares(j: &[Vec<Complex64>], rhs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = j.first()?.len();
    let mut ata = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut atb = vec![Complex64::new(0.0, 0.0); n];
    for (row, &r) in j.iter().zip(rhs) {
        for a in 0..n {
            let ca = row[a].conj();
            atb[a] += ca * r;
            for b in 0..n {
                ata[a][b] += ca * row[b];
            }
        }
    }
    solve(ata, atb)
}

pub fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}
