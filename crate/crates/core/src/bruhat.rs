//! Type `A_n` tridiagonal model: continuants, the twist on the `(q, p)`
//! chart and on the `p = 1` slice `Q`, Vieta fixed points, total
//! nonnegativity and the twist spectrum.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dtmap::{max_rel_diff, trial_rng};
use crate::error::{Error, Result};
use crate::fixpoint::FixedPointData;
use crate::instrument::{hit, Op};
use crate::poly::Poly;
use crate::roots::{cartan_matrix, CartanType, Family};
use crate::spectrum::{char_poly, faddeev_leverrier, p_phi, FD_STEP};

pub const MAX_TNN_RANK: usize = 6;
pub const MAX_SPECTRUM_RANK: usize = 8;
pub const DET_TOL: f64 = 1e-8;

/// `(n+1) x (n+1)` tridiagonal with diagonal `q`, superdiagonal `p` and
/// subdiagonal 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriDiag {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl TriDiag {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.is_empty() || p.len() + 1 != q.len() {
            return Err(Error::Dimension {
                expected: q.len().saturating_sub(1),
                got: p.len(),
            });
        }
        if let Some(index) = p.iter().position(|v| *v == 0.0 || !v.is_finite()) {
            return Err(Error::NotPositive {
                index,
                value: p[index],
            });
        }
        Ok(Self { q, p })
    }

    /// Constant diagonal `q`, `p = 1`.
    pub fn constant(n: usize, q: f64) -> Self {
        Self {
            q: vec![q; n + 1],
            p: vec![1.0; n],
        }
    }

    /// `p = 1` with `q_{n+1}` chosen so that `det = 1`.
    pub fn on_q_slice(q_head: &[f64]) -> Result<Self> {
        let n = q_head.len();
        let mut g = Self {
            q: [q_head, &[0.0]].concat(),
            p: vec![1.0; n],
        };
        g.q[n] = solve_last(&g)?;
        Ok(g)
    }

    pub fn rank(&self) -> usize {
        self.p.len()
    }

    pub fn det(&self) -> f64 {
        *continuants(self).last().expect("nonempty")
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let m = self.q.len();
        DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                self.q[i]
            } else if j == i + 1 {
                self.p[i]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        })
    }
}

/// Leading principal minors `phi_0 .. phi_{n+1}`.
pub fn continuants(g: &TriDiag) -> Vec<f64> {
    hit(Op::Continuants);
    let mut phi = Vec::with_capacity(g.q.len() + 1);
    phi.push(1.0);
    for j in 0..g.q.len() {
        let prev2 = if j >= 1 { g.p[j - 1] * phi[j - 1] } else { 0.0 };
        phi.push(g.q[j] * phi[j] - prev2);
    }
    phi
}

/// `q_{n+1}` making `det = 1`, i.e. `(1 + p_n phi_{n-1}) / phi_n`.
fn solve_last(g: &TriDiag) -> Result<f64> {
    let phi = continuants(g);
    let n = g.rank();
    let phi_n = phi[n];
    if phi_n.abs() < 1e-300 || !phi_n.is_finite() {
        return Err(Error::SingularChart);
    }
    let tail = if n >= 1 { g.p[n - 1] * phi[n - 1] } else { 0.0 };
    Ok((1.0 + tail) / phi_n)
}

/// `|det - 1|` relative to the continuant with all signs positive, which
/// bounds the rounding error of the signed recurrence.
pub fn det_residual(g: &TriDiag) -> f64 {
    let phi = continuants(g);
    let mut abs = (1.0_f64, 0.0_f64);
    for j in 0..g.q.len() {
        let prev2 = if j >= 1 {
            (g.p[j - 1] * abs.1).abs()
        } else {
            0.0
        };
        abs = ((g.q[j] * abs.0).abs() + prev2, abs.0);
    }
    (phi[g.q.len()] - 1.0).abs() / abs.0.max(1.0)
}

/// [`det_residual`] on the `p = 1` slice.
pub fn q_constraint(q: &[f64]) -> f64 {
    det_residual(&TriDiag {
        q: q.to_vec(),
        p: vec![1.0; q.len() - 1],
    })
}

/// The twist on `Q`: `(q_1..q_{n+1}) -> (q_2..q_{n+1}, phi_n(q_1..q_n))`.
pub fn twist_q(q: &[f64]) -> Result<Vec<f64>> {
    hit(Op::TwistQ);
    if q.len() < 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: q.len(),
        });
    }
    let residual = q_constraint(q);
    if residual > DET_TOL {
        return Err(Error::Constraint {
            what: "twist input off the det = 1 slice",
            residual,
        });
    }
    let n = q.len() - 1;
    let phi = continuants(&TriDiag {
        q: q.to_vec(),
        p: vec![1.0; n],
    });
    let mut out = q[1..].to_vec();
    out.push(phi[n]);
    let residual = q_constraint(&out);
    if residual > DET_TOL {
        return Err(Error::Constraint {
            what: "twist output off the det = 1 slice",
            residual,
        });
    }
    Ok(out)
}

/// The twist on the full `(q, p)` chart.
pub fn twist_full(g: &TriDiag) -> Result<TriDiag> {
    hit(Op::TwistFull);
    let n = g.rank();
    let residual = det_residual(g);
    if residual > DET_TOL {
        return Err(Error::Constraint {
            what: "twist input has det != 1",
            residual,
        });
    }
    let mut p: Vec<f64> = g.p[1..].to_vec();
    p.push(1.0 / g.p.iter().product::<f64>());
    let mut q: Vec<f64> = g.q[1..].to_vec();
    q.push(0.0);
    let mut out = TriDiag { q, p };
    out.q[n] = solve_last(&out)?;
    Ok(out)
}

/// `v_0 .. v_k` at `q`.
pub fn vieta(q: f64, k: usize) -> Vec<f64> {
    let mut v = vec![1.0, q];
    for j in 2..=k {
        v.push(q * v[j - 1] - v[j - 2]);
    }
    v.truncate(k + 1);
    v
}

/// Real solutions of `v_{n+1}(q) = 1`, largest first, without repeats.
pub fn vieta_fixed_candidates(n: usize) -> Vec<f64> {
    hit(Op::VietaFixedCandidates);
    let mut out: Vec<f64> = (1..=n / 2)
        .map(|k| 2.0 * (2.0 * k as f64 * PI / (n as f64 + 1.0)).cos())
        .chain((1..=(n + 3) / 2).map(|k| 2.0 * ((2 * k - 1) as f64 * PI / (n as f64 + 3.0)).cos()))
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

/// Every minor of the dense matrix is `>= -1e-10`.
pub fn tnn_check(g: &TriDiag) -> Result<bool> {
    hit(Op::TnnCheck);
    let n = g.rank();
    if n > MAX_TNN_RANK {
        return Err(Error::UnsupportedSize {
            n,
            max: MAX_TNN_RANK,
        });
    }
    let m = g.dense();
    let size = m.nrows();
    let subsets: Vec<Vec<usize>> = (1u32..(1 << size))
        .map(|mask| (0..size).filter(|&i| mask >> i & 1 == 1).collect())
        .collect();
    for rows in &subsets {
        for cols in subsets.iter().filter(|c| c.len() == rows.len()) {
            let sub = DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])]);
            if sub.lu().determinant() < -1e-10 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Log-linear action of the twist on `p`: `l_i -> l_{i+1}`, `l_n -> -sum l`.
pub fn frozen_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == n {
            -1.0
        } else if j == i + 1 {
            1.0
        } else {
            0.0
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistSpectrum {
    pub n: usize,
    pub fixed_q: f64,
    /// Characteristic polynomial of the finite-difference Jacobian.
    pub jacobian_poly: Poly,
    /// `P_{A_n}(x) (x^{n+1} - 1)/(x - 1)`.
    pub target: Poly,
    pub residual: f64,
    /// Same comparison for the twist on `Q` against `P_{A_n}` alone.
    pub q_residual: f64,
    /// `char(E)` against `(x^{n+1} - 1)/(x - 1)`.
    pub frozen_residual: f64,
    /// Largest deviation of the fixed point under one twist.
    pub fixed_point_drift: f64,
}

fn p_an(n: usize) -> Result<Poly> {
    let s = cartan_matrix(CartanType::new(Family::A, n)?)?;
    let fp = FixedPointData::compute(&s)?;
    p_phi(&s, &fp)
}

fn fd_jacobian(at: &[f64], f: impl Fn(&[f64]) -> Result<Vec<f64>>) -> Result<DMatrix<f64>> {
    let dim = at.len();
    let mut j = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut plus = at.to_vec();
        let mut minus = at.to_vec();
        plus[col] += FD_STEP;
        minus[col] -= FD_STEP;
        let (fp, fm) = (f(&plus)?, f(&minus)?);
        for row in 0..dim {
            j[(row, col)] = (fp[row] - fm[row]) / (2.0 * FD_STEP);
        }
    }
    Ok(j)
}

/// Linearization of the twist at `g(q*, .., q*, 1, .., 1)` in the log
/// coordinates `(q_1..q_n, p_1..p_n)`, `q_{n+1}` being fixed by `det = 1`.
pub fn twist_spectrum(n: usize) -> Result<TwistSpectrum> {
    hit(Op::TwistSpectrum);
    if n == 0 || n > MAX_SPECTRUM_RANK {
        return Err(Error::UnsupportedSize {
            n,
            max: MAX_SPECTRUM_RANK,
        });
    }
    let q_star = 2.0 * (PI / (n as f64 + 3.0)).cos();
    let fixed = TriDiag::constant(n, q_star);
    let image = twist_full(&fixed)?;
    let fixed_point_drift = max_rel_diff(&image.q, &fixed.q).max(max_rel_diff(&image.p, &fixed.p));

    let at = vec![q_star.ln(); n]
        .into_iter()
        .chain(std::iter::repeat_n(0.0, n))
        .collect::<Vec<_>>();
    let full = fd_jacobian(&at, |l| {
        let q_head: Vec<f64> = l[..n].iter().map(|v| v.exp()).collect();
        let p: Vec<f64> = l[n..].iter().map(|v| v.exp()).collect();
        let mut g = TriDiag::new([q_head, vec![0.0]].concat(), p)?;
        g.q[n] = solve_last(&g)?;
        let out = twist_full(&g)?;
        Ok(out.q[..n].iter().chain(&out.p).map(|v| v.ln()).collect())
    })?;
    let q_only = fd_jacobian(&at[..n], |l| {
        let q_head: Vec<f64> = l.iter().map(|v| v.exp()).collect();
        let g = TriDiag::on_q_slice(&q_head)?;
        let out = twist_q(&g.q)?;
        Ok(out[..n].iter().map(|v| v.ln()).collect())
    })?;

    let pa = p_an(n)?;
    let pc = Poly::geometric(n + 1);
    let target = pa.mul(&pc);
    let jacobian_poly = char_poly(&full)?;
    let q_poly = char_poly(&q_only)?;
    let frozen = Poly::from_real(&faddeev_leverrier(&frozen_matrix(n)));
    Ok(TwistSpectrum {
        n,
        fixed_q: q_star,
        residual: jacobian_poly.max_abs_diff(&target),
        q_residual: q_poly.max_abs_diff(&pa),
        frozen_residual: frozen.max_abs_diff(&pc),
        fixed_point_drift,
        jacobian_poly,
        target,
    })
}

/// Random positive tridiagonal with `det = 1` and all leading minors
/// positive.
pub fn random_positive_tridiag(rng: &mut impl Rng, n: usize, random_p: bool) -> TriDiag {
    loop {
        let q_head: Vec<f64> = (0..n)
            .map(|_| 2.0 * rng.random_range(-0.3..1.0f64).exp())
            .collect();
        let p: Vec<f64> = (0..n)
            .map(|_| {
                if random_p {
                    rng.random_range(-0.5..0.5f64).exp()
                } else {
                    1.0
                }
            })
            .collect();
        let mut g = TriDiag {
            q: [q_head, vec![0.0]].concat(),
            p,
        };
        let Ok(last) = solve_last(&g) else { continue };
        g.q[n] = last;
        if last > 0.0 && continuants(&g)[1..=n].iter().all(|v| *v > 0.0) {
            return g;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub n: usize,
    pub trials: usize,
    pub rng_seed: u64,
    /// Deviation after `n + 3` twists on the `p = 1` slice.
    pub slice_deviation: f64,
    /// Deviation of the `p`-part after `n + 1` twists with random `p`.
    pub frozen_deviation: f64,
    /// Largest `|det - 1|` seen along any orbit.
    pub det_drift: f64,
}

pub fn period_check_full(n: usize, trials: usize, rng_seed: u64) -> Result<PeriodReport> {
    hit(Op::PeriodCheckFull);
    let mut slice_deviation: f64 = 0.0;
    let mut frozen_deviation: f64 = 0.0;
    let mut det_drift: f64 = 0.0;
    for t in 0..trials.max(1) {
        let mut rng = trial_rng(rng_seed, t as u64);
        let start = random_positive_tridiag(&mut rng, n, false);
        let mut g = start.clone();
        for _ in 0..n + 3 {
            g = twist_full(&g)?;
            det_drift = det_drift.max((g.det() - 1.0).abs());
        }
        slice_deviation = slice_deviation
            .max(max_rel_diff(&g.q, &start.q))
            .max(max_rel_diff(&g.p, &start.p));

        let start = random_positive_tridiag(&mut rng, n, true);
        let mut g = start.clone();
        for _ in 0..n + 1 {
            g = twist_full(&g)?;
            det_drift = det_drift.max((g.det() - 1.0).abs());
        }
        frozen_deviation = frozen_deviation.max(max_rel_diff(&g.p, &start.p));
    }
    Ok(PeriodReport {
        n,
        trials: trials.max(1),
        rng_seed,
        slice_deviation,
        frozen_deviation,
        det_drift,
    })
}

/// Orbit of `twist_q` from `start` of length `steps + 1`.
pub fn twist_q_orbit(start: &[f64], steps: usize) -> Result<Vec<Vec<f64>>> {
    let mut orbit = vec![start.to_vec()];
    for _ in 0..steps {
        let next = twist_q(orbit.last().expect("nonempty"))?;
        orbit.push(next);
    }
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continuant_examples() {
        let g = TriDiag::new(vec![2.0, 5.0], vec![3.0]).unwrap();
        assert_eq!(continuants(&g), vec![1.0, 2.0, 7.0]);
        let q = 1.3;
        let phi = continuants(&TriDiag::constant(5, q));
        let v = vieta(q, 6);
        for (a, b) in phi.iter().zip(&v) {
            assert!((a - b).abs() < 1e-14);
        }
        let mut rng = trial_rng(5, 0);
        for _ in 0..20 {
            let g = random_positive_tridiag(&mut rng, 5, true);
            assert!((g.dense().lu().determinant() - g.det()).abs() < 1e-10);
        }
    }

    #[test]
    fn vieta_is_chebyshev() {
        for q in [-1.7, 0.3, 1.9] {
            let t = (q / 2.0f64).acos();
            for (j, v) in vieta(q, 10).into_iter().enumerate() {
                assert!((v - ((j + 1) as f64 * t).sin() / t.sin()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn twist_q_period_and_fixed_point() {
        for n in 1..=8 {
            let q_star = 2.0 * (PI / (n as f64 + 3.0)).cos();
            let fixed = vec![q_star; n + 1];
            let image = twist_q(&fixed).unwrap();
            assert!(max_rel_diff(&image, &fixed) < 1e-12, "n={n}");
            let start = TriDiag::on_q_slice(&vec![1.5; n]).unwrap().q;
            let orbit = twist_q_orbit(&start, n + 3).unwrap();
            assert!(max_rel_diff(&orbit[n + 3], &start) < 1e-7, "n={n}");
            assert!(max_rel_diff(&orbit[n + 2], &start) > 1e-3, "n={n}");
        }
    }

    #[test]
    fn twist_q_n1_orbit() {
        let orbit = twist_q_orbit(&[1.0, 2.0], 4).unwrap();
        assert_eq!(
            orbit,
            vec![
                vec![1.0, 2.0],
                vec![2.0, 1.0],
                vec![1.0, 2.0],
                vec![2.0, 1.0],
                vec![1.0, 2.0]
            ]
        );
        assert!(twist_q(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn full_twist_restricts_to_q_slice() {
        let mut rng = trial_rng(9, 0);
        for n in 1..=6 {
            let g = random_positive_tridiag(&mut rng, n, false);
            let full = twist_full(&g).unwrap();
            let q = twist_q(&g.q).unwrap();
            assert!(max_rel_diff(&full.q, &q) < 1e-12);
            assert!(full.p.iter().all(|p| (p - 1.0).abs() < 1e-15));
        }
    }

    #[test]
    fn full_twist_preserves_det() {
        let mut rng = trial_rng(11, 0);
        for n in 1..=8 {
            let g = random_positive_tridiag(&mut rng, n, true);
            let out = twist_full(&g).unwrap();
            assert!((out.det() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn vieta_candidates() {
        let c1 = vieta_fixed_candidates(1);
        assert_eq!(c1.len(), 2);
        assert!((c1[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!(!c1.iter().any(|q| (q + 2.0).abs() < 1e-9));
        assert!((vieta(-2.0, 2)[2] - 3.0).abs() < 1e-15);
        let c2 = vieta_fixed_candidates(2);
        assert!(c2.iter().any(|q| (q - 1.618_033_988_749_895).abs() < 1e-12));
        for n in 1..=12 {
            for q in vieta_fixed_candidates(n) {
                assert!((vieta(q, n + 1)[n + 1] - 1.0).abs() < 1e-10, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn unique_tnn_candidate() {
        for n in 1..=MAX_TNN_RANK {
            let tnn: Vec<f64> = vieta_fixed_candidates(n)
                .into_iter()
                .filter(|&q| tnn_check(&TriDiag::constant(n, q)).unwrap())
                .collect();
            assert_eq!(tnn.len(), 1, "n={n}: {tnn:?}");
            assert!((tnn[0] - 2.0 * (PI / (n as f64 + 3.0)).cos()).abs() < 1e-10);
        }
        assert!(!tnn_check(&TriDiag::constant(2, -2.0)).unwrap());
        assert!(tnn_check(&TriDiag::constant(1, 2.0)).unwrap());
        assert!(tnn_check(&TriDiag::constant(7, 2.0)).is_err());
    }

    #[test]
    fn frozen_spectrum() {
        for n in 1..=8 {
            let c = faddeev_leverrier(&frozen_matrix(n));
            assert!(c.iter().all(|v| (v - 1.0).abs() < 1e-9), "n={n}: {c:?}");
        }
    }

    #[test]
    fn twist_spectrum_small() {
        let s = twist_spectrum(1).unwrap();
        assert!(
            s.jacobian_poly
                .max_abs_diff(&Poly::from_real(&[1.0, 2.0, 1.0]))
                < 1e-5
        );
        for n in 1..=MAX_SPECTRUM_RANK {
            let s = twist_spectrum(n).unwrap();
            assert!(s.residual < 1e-5, "n={n}: {}", s.residual);
            assert!(s.q_residual < 1e-5, "n={n}: {}", s.q_residual);
            assert!(s.fixed_point_drift < 1e-12);
        }
    }

    #[test]
    fn periods() {
        for n in 1..=5 {
            let r = period_check_full(n, 5, 3).unwrap();
            assert!(r.slice_deviation < 1e-7, "n={n}: {r:?}");
            assert!(r.frozen_deviation < 1e-12, "n={n}: {r:?}");
            assert!(r.det_drift < 1e-9);
        }
    }
}
