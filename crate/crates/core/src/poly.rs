//! Dense univariate polynomials over `Complex64`, lowest degree first.

use std::fmt;

use nalgebra::linalg::balancing::balance_parlett_reinsch;
use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TRIM: f64 = 1e-12;
const SCHUR_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    /// Trailing coefficients with modulus `<= TRIM` are dropped; the zero
    /// polynomial keeps a single zero coefficient.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= TRIM) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn one() -> Self {
        Self::from_real(&[1.0])
    }

    /// `x - root`.
    pub fn linear(root: Complex64) -> Self {
        Self::new(vec![-root, Complex64::new(1.0, 0.0)])
    }

    /// `1 + x + ... + x^{k-1}`.
    pub fn geometric(k: usize) -> Self {
        Self::from_real(&vec![1.0; k.max(1)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn real_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.re).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Zeroes imaginary parts, failing if any exceeds `tol`.
    pub fn realify(&self, tol: f64) -> Result<Self> {
        let worst = self.max_imag();
        if worst > tol {
            return Err(Error::Internal(format!(
                "polynomial expected real, imaginary part {worst:e}"
            )));
        }
        Ok(Self::from_real(&self.real_coeffs()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    /// Coefficientwise sup-norm distance; missing coefficients count as 0.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).unwrap_or(&zero);
                let b = other.coeffs.get(k).unwrap_or(&zero);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Quotient and remainder by `divisor`.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree();
        let lead = divisor.coeffs[d];
        if self.degree() < d {
            return (Self::from_real(&[0.0]), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::new(0.0, 0.0); self.degree() - d + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d] / lead;
            quot[k] = c;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * dc;
            }
        }
        rem.truncate(d.max(1));
        (Self::new(quot), Self::new(rem))
    }

    /// Roots of a real polynomial via eigenvalues of the balanced companion
    /// matrix.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let p = self.realify(1e-10)?;
        let n = p.degree();
        if n == 0 {
            return Ok(Vec::new());
        }
        let c = p.real_coeffs();
        let lead = c[n];
        let mut comp = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            comp[(i, n - 1)] = -c[i] / lead;
        }
        balance_parlett_reinsch(&mut comp);
        if let Some(schur) = Schur::try_new(comp.clone(), f64::EPSILON, SCHUR_MAX_ITER) {
            return Ok(schur.complex_eigenvalues().iter().copied().collect());
        }
        // QR stagnates on orthogonal companions such as that of x^4 + 1;
        // retry on a fixed non-orthogonal similarity.
        let s = DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Less => 0.3 / (1 + j - i) as f64,
            std::cmp::Ordering::Greater => 0.0,
        });
        let s_inv = s
            .clone()
            .solve_upper_triangular(&DMatrix::identity(n, n))
            .ok_or_else(|| Error::Internal("singular similarity".into()))?;
        let conj = &s_inv * comp * s;
        Schur::try_new(conj, f64::EPSILON, SCHUR_MAX_ITER)
            .map(|schur| schur.complex_eigenvalues().iter().copied().collect())
            .ok_or_else(|| {
                Error::Internal(format!("eigenvalue iteration did not converge for {self}"))
            })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| {
                if c.im.abs() <= TRIM {
                    format!("{:.12}", c.re)
                } else {
                    format!("{:.12}{:+.12}i", c.re, c.im)
                }
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trim_and_degree() {
        let p = Poly::from_real(&[1.0, 2.0, 1e-13]);
        assert_eq!(p.degree(), 1);
        assert_eq!(Poly::from_real(&[]).degree(), 0);
    }

    #[test]
    fn mul_eval_consistent() {
        let p = Poly::from_real(&[1.0, -2.0, 3.0]);
        let q = Poly::new(vec![c(0.5, 1.0), c(2.0, -1.0)]);
        let pq = p.mul(&q);
        for x in [c(0.3, 0.7), c(-1.2, 0.0), c(2.0, -3.0)] {
            assert!((pq.eval(x) - p.eval(x) * q.eval(x)).norm() < 1e-12);
        }
    }

    #[test]
    fn divrem_exact() {
        let a = Poly::from_real(&[1.0, 1.0]);
        let b = Poly::from_real(&[1.0, 0.0, 1.0]);
        let ab = a.mul(&b);
        let (q, r) = ab.divrem(&b);
        assert!(q.max_abs_diff(&a) < 1e-14);
        assert!(r.max_abs_diff(&Poly::from_real(&[0.0])) < 1e-14);
        let (_, r) = Poly::from_real(&[2.0, 0.0, 1.0]).divrem(&a);
        assert!((r.coeffs()[0].re - 3.0).abs() < 1e-14);
    }

    #[test]
    fn roots_of_unity() {
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        let mut r = p.roots().unwrap();
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-14);
        for z in Poly::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0]).roots().unwrap() {
            assert!((z.powi(4) + 1.0).norm() < 1e-12);
        }
        let g = Poly::geometric(5);
        for z in g.roots().unwrap() {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!(g.eval(z).norm() < 1e-12);
        }
    }
}
