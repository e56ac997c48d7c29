//! Exact rational square matrices and symmetric congruence.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::polycore::{rat_to_string, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(n: usize) -> Self {
        RatMatrix {
            n,
            data: vec![Rat::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix expected");
        RatMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, other.n);
        let mut out = RatMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut s = Rat::zero();
                for k in 0..self.n {
                    s += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        (0..self.n)
            .map(|i| (0..self.n).map(|k| self.get(i, k) * &v[k]).sum())
            .collect()
    }

    /// `v^T M v`.
    pub fn quadratic_form(&self, v: &[Rat]) -> Rat {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Determinant by fraction-free (Bareiss) elimination on the integer
    /// matrix obtained by clearing denominators.
    pub fn determinant(&self) -> Rat {
        let n = self.n;
        if n == 0 {
            return Rat::one();
        }
        let l = self.data.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let lr = Rat::from_integer(l.clone());
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| (self.get(i, j) * &lr).to_integer()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return Rat::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let det_int = sign * &a[n - 1][n - 1];
        Rat::new(det_int, num_traits::pow(l, n))
    }

    /// Gauss-Jordan inverse over the rationals; `None` if singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).recip();
            for j in 0..n {
                let v = a.get(col, j) * &p;
                a.set(col, j, v);
                let w = inv.get(col, j) * &p;
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, v);
                    let w = inv.get(r, j) - &f * inv.get(col, j);
                    inv.set(r, j, w);
                }
            }
        }
        Some(inv)
    }

    fn add_col_row(&mut self, from: usize, into: usize) {
        for k in 0..self.n {
            let v = self.get(k, into) + self.get(k, from);
            self.set(k, into, v);
        }
        for k in 0..self.n {
            let v = self.get(into, k) + self.get(from, k);
            self.set(into, k, v);
        }
    }

    fn swap_col_row(&mut self, a: usize, b: usize) {
        for k in 0..self.n {
            self.data.swap(k * self.n + a, k * self.n + b);
        }
        for k in 0..self.n {
            self.data.swap(a * self.n + k, b * self.n + k);
        }
    }

    fn add_col(&mut self, from: usize, into: usize, c: &Rat) {
        for k in 0..self.n {
            let v = self.get(k, into) + c * self.get(k, from);
            self.set(k, into, v);
        }
    }

    fn swap_col(&mut self, a: usize, b: usize) {
        for k in 0..self.n {
            self.data.swap(k * self.n + a, k * self.n + b);
        }
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(rat_to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Signature `(n_plus, n_minus, n_zero)` of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn lorentzian(d: usize) -> Self {
        Inertia {
            positive: 1,
            negative: d.saturating_sub(1),
            zero: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

/// Lagrange diagonalization by symmetric congruence.
///
/// Returns `(S, D)` with `S^T M S = diag(D)` exactly. A zero pivot is first
/// swapped with a later nonzero diagonal entry; failing that, a row/column
/// with a nonzero off-diagonal entry is added into it.
pub fn congruence_diagonalize(m: &RatMatrix) -> (RatMatrix, Vec<Rat>) {
    assert!(m.is_symmetric(), "symmetric matrix expected");
    let n = m.size();
    let mut a = m.clone();
    let mut s = RatMatrix::identity(n);
    for i in 0..n {
        if a.get(i, i).is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a.get(j, j).is_zero()) {
                a.swap_col_row(i, j);
                s.swap_col(i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !a.get(i, j).is_zero()) {
                a.add_col_row(j, i);
                s.add_col(j, i, &Rat::one());
            } else {
                continue;
            }
        }
        let pivot = a.get(i, i).clone();
        for k in i + 1..n {
            if a.get(k, i).is_zero() {
                continue;
            }
            let c = -(a.get(k, i) / &pivot);
            // column k += c * column i, then row k += c * row i
            for r in 0..n {
                let v = a.get(r, k) + &c * a.get(r, i);
                a.set(r, k, v);
            }
            for r in 0..n {
                let v = a.get(k, r) + &c * a.get(i, r);
                a.set(k, r, v);
            }
            s.add_col(i, k, &c);
        }
    }
    let diag = (0..n).map(|i| a.get(i, i).clone()).collect();
    (s, diag)
}

pub fn inertia(m: &RatMatrix) -> Inertia {
    let (_, diag) = congruence_diagonalize(m);
    let mut out = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for v in diag {
        if v.is_positive() {
            out.positive += 1;
        } else if v.is_negative() {
            out.negative += 1;
        } else {
            out.zero += 1;
        }
    }
    out
}
