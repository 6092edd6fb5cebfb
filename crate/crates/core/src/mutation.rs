//! Seed mutation: extended exchange matrices, numeric A-seeds and y-seeds,
//! the acyclic matrix `B_A` built from a Cartan matrix, and the reddening
//! sequence check.
//!
//! Directions are zero-based here: `k` ranges over `0..n`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::instrument::{hit, Op};
use crate::roots::{symmetrizer, CartanSpec};

#[inline]
fn pos(v: i64) -> i64 {
    v.max(0)
}

/// An `(n + m) x n` integer matrix `(B || P)` whose top `n x n` block is
/// skew-symmetrizable. Rows `n..n+m` are frozen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedMatrix {
    n: usize,
    entries: DMatrix<i64>,
}

impl ExtendedMatrix {
    pub fn new(entries: DMatrix<i64>) -> Result<Self> {
        let n = entries.ncols();
        if entries.nrows() < n {
            return Err(Error::Dimension {
                expected: n,
                got: entries.nrows(),
            });
        }
        let m = Self { n, entries };
        if !m.is_skew_symmetrizable() {
            return Err(Error::NotSkewSymmetrizable);
        }
        Ok(m)
    }

    /// Stacks `principal` on top of `frozen`.
    pub fn with_frozen(principal: &DMatrix<i64>, frozen: &DMatrix<i64>) -> Result<Self> {
        let n = principal.ncols();
        if frozen.ncols() != n {
            return Err(Error::Dimension {
                expected: n,
                got: frozen.ncols(),
            });
        }
        let mut e = DMatrix::zeros(principal.nrows() + frozen.nrows(), n);
        e.view_mut((0, 0), (principal.nrows(), n))
            .copy_from(principal);
        e.view_mut((principal.nrows(), 0), (frozen.nrows(), n))
            .copy_from(frozen);
        Self::new(e)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn frozen_rows(&self) -> usize {
        self.entries.nrows() - self.n
    }

    pub fn entries(&self) -> &DMatrix<i64> {
        &self.entries
    }

    pub fn principal(&self) -> DMatrix<i64> {
        self.entries.rows(0, self.n).into_owned()
    }

    pub fn frozen(&self) -> DMatrix<i64> {
        self.entries.rows(self.n, self.frozen_rows()).into_owned()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[(i, j)]
    }

    fn is_skew_symmetrizable(&self) -> bool {
        let n = self.n;
        let b = self.principal();
        for i in 0..n {
            if b[(i, i)] != 0 {
                return false;
            }
            for j in 0..n {
                if (b[(i, j)] == 0) != (b[(j, i)] == 0) {
                    return false;
                }
                if b[(i, j)] != 0 && b[(i, j)].signum() == b[(j, i)].signum() {
                    return false;
                }
            }
        }
        // B is skew-symmetrizable iff its Cartan companion is symmetrizable
        // with the same D, which `symmetrizer` decides.
        let mut companion = DMatrix::<i64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                companion[(i, j)] = if i == j { 2 } else { -b[(i, j)].abs() };
            }
        }
        match symmetrizer(&companion) {
            Some(d) => (0..n).all(|i| (0..n).all(|j| d[i] * b[(i, j)] == -d[j] * b[(j, i)])),
            None => false,
        }
    }

    fn check_direction(&self, k: usize) -> Result<()> {
        if k >= self.n {
            Err(Error::DirectionOutOfRange { k, n: self.n })
        } else {
            Ok(())
        }
    }
}

/// Matrix mutation in direction `k`.
pub fn mutate_matrix(b: &ExtendedMatrix, k: usize) -> Result<ExtendedMatrix> {
    hit(Op::MutateMatrix);
    b.check_direction(k)?;
    let e = &b.entries;
    let mut out = e.clone();
    for i in 0..e.nrows() {
        for j in 0..e.ncols() {
            out[(i, j)] = if i == k || j == k {
                -e[(i, j)]
            } else {
                e[(i, j)] + pos(e[(i, k)]) * pos(e[(k, j)]) - pos(-e[(i, k)]) * pos(-e[(k, j)])
            };
        }
    }
    Ok(ExtendedMatrix {
        n: b.n,
        entries: out,
    })
}

/// A labeled seed with positive real cluster values `x` and frozen values `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSeed {
    pub b: ExtendedMatrix,
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

impl NumericSeed {
    pub fn new(b: ExtendedMatrix, x: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if x.len() != b.rank() {
            return Err(Error::Dimension {
                expected: b.rank(),
                got: x.len(),
            });
        }
        if p.len() != b.frozen_rows() {
            return Err(Error::Dimension {
                expected: b.frozen_rows(),
                got: p.len(),
            });
        }
        for (index, &value) in x.iter().chain(p.iter()).enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NotPositive { index, value });
            }
        }
        Ok(Self { b, x, p })
    }

    fn value(&self, row: usize) -> f64 {
        if row < self.x.len() {
            self.x[row]
        } else {
            self.p[row - self.x.len()]
        }
    }
}

/// Exchange relation `x_k x_k' = prod x_j^[b_jk]+ + prod x_j^[-b_jk]+`,
/// followed by matrix mutation. Subtraction-free, so positivity is kept.
pub fn mutate_x(seed: &NumericSeed, k: usize) -> Result<NumericSeed> {
    hit(Op::MutateX);
    seed.b.check_direction(k)?;
    let rows = seed.b.entries.nrows();
    let mut plus = 1.0;
    let mut minus = 1.0;
    for j in 0..rows {
        let bjk = seed.b.get(j, k);
        if bjk > 0 {
            plus *= seed.value(j).powi(bjk as i32);
        } else if bjk < 0 {
            minus *= seed.value(j).powi((-bjk) as i32);
        }
    }
    let mut x = seed.x.clone();
    x[k] = (plus + minus) / seed.x[k];
    Ok(NumericSeed {
        b: mutate_matrix(&seed.b, k)?,
        x,
        p: seed.p.clone(),
    })
}

/// y-seed mutation: `y_k' = 1/y_k`, `y_i' = y_i y_k^[b_ki]+ (1 + y_k)^(-b_ki)`.
pub fn mutate_y(y: &[f64], b: &ExtendedMatrix, k: usize) -> Result<(Vec<f64>, ExtendedMatrix)> {
    hit(Op::MutateY);
    b.check_direction(k)?;
    if y.len() != b.rank() {
        return Err(Error::Dimension {
            expected: b.rank(),
            got: y.len(),
        });
    }
    let yk = y[k];
    let out = y
        .iter()
        .enumerate()
        .map(|(i, &yi)| {
            if i == k {
                1.0 / yk
            } else {
                let bki = b.get(k, i);
                yi * yk.powi(pos(bki) as i32) * (1.0 + yk).powi(-bki as i32)
            }
        })
        .collect();
    Ok((out, mutate_matrix(b, k)?))
}

/// `b_ij = 0` on the diagonal, `-a_ij` below it and `a_ij` above it.
/// With `principal_coefficients` the identity is appended as frozen rows.
pub fn build_ba(spec: &CartanSpec, principal_coefficients: bool) -> ExtendedMatrix {
    hit(Op::BuildBA);
    let n = spec.rank();
    let rows = if principal_coefficients { 2 * n } else { n };
    let mut e = DMatrix::<i64>::zeros(rows, n);
    for i in 0..n {
        for j in 0..n {
            e[(i, j)] = match i.cmp(&j) {
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Greater => -spec.a(i, j),
                std::cmp::Ordering::Less => spec.a(i, j),
            };
        }
        if principal_coefficients {
            e[(n + i, i)] = 1;
        }
    }
    ExtendedMatrix { n, entries: e }
}

/// Applies `directions` left to right (the first entry acts first).
pub fn mutate_sequence(b: &ExtendedMatrix, directions: &[usize]) -> Result<ExtendedMatrix> {
    directions
        .iter()
        .try_fold(b.clone(), |acc, &k| mutate_matrix(&acc, k))
}

/// `mu_n ... mu_1 (B_A || I) == (B_A || -I)`, exactly.
pub fn verify_reddening(spec: &CartanSpec) -> bool {
    hit(Op::VerifyReddening);
    let n = spec.rank();
    let start = build_ba(spec, true);
    let order: Vec<usize> = (0..n).collect();
    let Ok(end) = mutate_sequence(&start, &order) else {
        return false;
    };
    let mut expected = start.entries.clone();
    for i in 0..n {
        expected[(n + i, i)] = -1;
    }
    end.entries == expected
}
