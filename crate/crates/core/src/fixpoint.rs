//! Positive fixed points of `DT_A` and `DT_X`, their closed forms, and the
//! derived `kappa` and `u` data.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dtmap::{random_positive_point, trial_rng};
use crate::error::{Error, Result};
use crate::instrument::{hit, Op};
use crate::roots::{CartanSpec, Family};

pub const DEFAULT_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointData {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub kappa: Vec<f64>,
    pub u: Vec<f64>,
}

impl FixedPointData {
    pub fn compute(spec: &CartanSpec) -> Result<Self> {
        let a = solve_a(spec, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        Self::from_a(spec, a)
    }

    pub fn from_a(spec: &CartanSpec, a: Vec<f64>) -> Result<Self> {
        let b = b_from_a(&a)?;
        let kappa = kappa_from(spec, &a)?;
        let u = u_from_kappa(&kappa);
        Ok(Self { a, b, kappa, u })
    }
}

/// `prod_{j != i} a_j^{-a_ji}`.
fn a_monomial(spec: &CartanSpec, a: &[f64], i: usize) -> f64 {
    (0..spec.rank())
        .filter(|&j| j != i && spec.a(j, i) != 0)
        .map(|j| a[j].powi(-spec.a(j, i) as i32))
        .product()
}

/// Largest relative residual of `a_i^2 = 1 + prod_{j != i} a_j^{-a_ji}`.
pub fn residual_a(spec: &CartanSpec, a: &[f64]) -> f64 {
    (0..spec.rank())
        .map(|i| {
            let rhs = 1.0 + a_monomial(spec, a, i);
            ((a[i] * a[i] - rhs) / rhs).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest relative residual of `b_i^2 = prod_{j != i} (1 + b_j)^{-a_ji}`.
pub fn residual_b(spec: &CartanSpec, b: &[f64]) -> f64 {
    (0..spec.rank())
        .map(|i| {
            let rhs: f64 = (0..spec.rank())
                .filter(|&j| j != i)
                .map(|j| (1.0 + b[j]).powi(-spec.a(j, i) as i32))
                .product();
            ((b[i] * b[i] - rhs) / rhs).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest relative residual of `u_i^2 = prod_j (1 - u_j)^{a_ji}`.
pub fn residual_u(spec: &CartanSpec, u: &[f64]) -> f64 {
    (0..spec.rank())
        .map(|i| {
            let rhs: f64 = (0..spec.rank())
                .map(|j| (1.0 - u[j]).powi(spec.a(j, i) as i32))
                .product();
            ((u[i] * u[i] - rhs) / rhs).abs()
        })
        .fold(0.0, f64::max)
}

/// Gauss-Seidel sweep of `a_i <- sqrt(1 + prod)` from `a = sqrt(2)`, with a
/// damped Newton fallback in log coordinates.
pub fn solve_a(spec: &CartanSpec, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    hit(Op::SolveA);
    let n = spec.rank();
    let mut a = vec![2f64.sqrt(); n];
    for _ in 0..max_iter {
        let mut update: f64 = 0.0;
        for i in 0..n {
            let next = (1.0 + a_monomial(spec, &a, i)).sqrt();
            update = update.max(((next - a[i]) / a[i]).abs());
            a[i] = next;
        }
        if update < tol {
            return Ok(a);
        }
    }
    let start: Vec<f64> = a.iter().map(|v| v.ln()).collect();
    newton_log(spec, &start, tol, 200).map(|l| l.into_iter().map(f64::exp).collect())
}

fn log_residual(spec: &CartanSpec, l: &[f64]) -> DVector<f64> {
    let n = spec.rank();
    DVector::from_fn(n, |i, _| {
        let s: f64 = (0..n)
            .filter(|&j| j != i)
            .map(|j| -(spec.a(j, i) as f64) * l[j])
            .sum();
        2.0 * l[i] - softplus(s)
    })
}

fn softplus(s: f64) -> f64 {
    if s > 0.0 {
        s + (-s).exp().ln_1p()
    } else {
        s.exp().ln_1p()
    }
}

fn sigmoid(s: f64) -> f64 {
    1.0 / (1.0 + (-s).exp())
}

/// Damped Newton on `F_i(l) = 2 l_i - log(1 + exp(sum_{j != i} -a_ji l_j))`.
pub fn newton_log(spec: &CartanSpec, start: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = spec.rank();
    let mut l = start.to_vec();
    let mut f = log_residual(spec, &l);
    for _ in 0..max_iter {
        let norm = f.amax();
        if norm < tol {
            return Ok(l);
        }
        let jac = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                return 2.0;
            }
            let s: f64 = (0..n)
                .filter(|&k| k != i)
                .map(|k| -(spec.a(k, i) as f64) * l[k])
                .sum();
            -sigmoid(s) * -(spec.a(j, i) as f64)
        });
        let Some(step) = jac.lu().solve(&f) else {
            break;
        };
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-12 {
            let trial: Vec<f64> = l.iter().zip(step.iter()).map(|(x, d)| x - t * d).collect();
            let ft = log_residual(spec, &trial);
            if ft.amax() < norm {
                l = trial;
                f = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let residual = f.amax();
    if residual < tol.max(1e-13) {
        return Ok(l);
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual,
        last: l.iter().map(|v| v.exp()).collect(),
    })
}

/// Largest pairwise distance between Newton solutions from `starts` random
/// positive initializations.
pub fn uniqueness_probe(spec: &CartanSpec, starts: usize, rng_seed: u64) -> Result<f64> {
    let n = spec.rank();
    let mut sols = Vec::with_capacity(starts);
    for t in 0..starts {
        let mut rng = trial_rng(rng_seed, t as u64);
        let l0: Vec<f64> = random_positive_point(&mut rng, n)
            .into_iter()
            .map(|v| 2.0 * v.ln())
            .collect();
        let l = newton_log(spec, &l0, 1e-14, 500)?;
        sols.push(l.into_iter().map(f64::exp).collect::<Vec<_>>());
    }
    let mut worst: f64 = 0.0;
    for i in 0..sols.len() {
        for j in i + 1..sols.len() {
            let d = sols[i]
                .iter()
                .zip(&sols[j])
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Root of `e^3 - 2e^2 - e + 1` in `(2, 3)`.
pub fn epsilon() -> f64 {
    let f = |e: f64| ((e - 2.0) * e - 1.0) * e + 1.0;
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn sin_ratios(n: usize, theta: f64) -> Vec<f64> {
    (2..=n + 1)
        .map(|k| (k as f64 * theta).sin() / theta.sin())
        .collect()
}

/// Tabulated closed form of the `DT_A` fixed point.
pub fn closed_form_a(spec: &CartanSpec) -> Vec<f64> {
    hit(Op::ClosedFormA);
    let n = spec.rank();
    let s2 = 2f64.sqrt();
    let s5 = 5f64.sqrt();
    match spec.kind.family {
        Family::A => sin_ratios(n, PI / (n as f64 + 3.0)),
        Family::C => sin_ratios(n, PI / (2.0 * n as f64 + 2.0)),
        Family::B => {
            let mut a: Vec<f64> = (2..=n).map(|k| k as f64).collect();
            a.push(((n + 1) as f64).sqrt());
            a
        }
        Family::D => {
            let mut a: Vec<f64> = (2..n).map(|k| k as f64).collect();
            a.push((n as f64).sqrt());
            a.push((n as f64).sqrt());
            a
        }
        Family::E if n == 6 => {
            let e = epsilon();
            vec![
                e,
                e * e - 1.0,
                2.0 * e * e - e - 1.0,
                e * (e - 1.0),
                e * e - 1.0,
                e,
            ]
        }
        Family::E if n == 7 => {
            let r = (7.0 + 3.0 * s5).sqrt();
            vec![
                (3.0 + s5) / 2.0,
                (5.0 + 3.0 * s5) / 2.0,
                6.0 + 3.0 * s5,
                r,
                2.0 * r,
                2.0 + s5,
                (3.0 + s5).sqrt(),
            ]
        }
        Family::E => vec![
            2.0 + s2,
            5.0 + 4.0 * s2,
            16.0 + 12.0 * s2,
            3.0 + 2.0 * s2,
            9.0 + 6.0 * s2,
            5.0 + 3.0 * s2,
            2.0 + 2.0 * s2,
            1.0 + s2,
        ],
        Family::F => {
            let e = epsilon();
            vec![e, e * e - 1.0, 2.0 * e * e - e - 1.0, e * (e - 1.0)]
        }
        Family::G => vec![3.0, 2.0],
    }
}

pub fn b_from_a(a: &[f64]) -> Result<Vec<f64>> {
    hit(Op::BFromA);
    a.iter()
        .enumerate()
        .map(|(index, &value)| {
            if value > 1.0 {
                Ok(value * value - 1.0)
            } else {
                Err(Error::NotAboveOne { index, value })
            }
        })
        .collect()
}

/// `kappa_i` by `a^2/(a^2-1)`, `(b+1)/b` and `prod_j a_j^{a_ji}`, which must
/// agree to `1e-10`.
pub fn kappa_from(spec: &CartanSpec, a: &[f64]) -> Result<Vec<f64>> {
    hit(Op::KappaFrom);
    let b = b_from_a(a)?;
    let n = spec.rank();
    let k1: Vec<f64> = a.iter().map(|v| v * v / (v * v - 1.0)).collect();
    let k2: Vec<f64> = b.iter().map(|v| (v + 1.0) / v).collect();
    let k3: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| a[j].powi(spec.a(j, i) as i32)).product())
        .collect();
    let agree = |x: &[f64], y: &[f64]| crate::dtmap::max_rel_diff(x, y) <= 1e-10;
    if !agree(&k1, &k2) {
        return Err(Error::CrossCheck {
            what: "kappa from a and from b",
            left: k1,
            right: k2,
        });
    }
    if !agree(&k1, &k3) {
        return Err(Error::CrossCheck {
            what: "kappa from a and monomial form",
            left: k1,
            right: k3,
        });
    }
    Ok(k1)
}

pub fn u_from_kappa(kappa: &[f64]) -> Vec<f64> {
    hit(Op::UFromKappa);
    kappa.iter().map(|k| 1.0 / k).collect()
}

/// `log(a) A` is entrywise positive.
pub fn vinberg_gate(cartan: &DMatrix<i64>, a: &[f64]) -> bool {
    hit(Op::VinbergGate);
    let n = cartan.nrows();
    if cartan.ncols() != n || a.len() != n || a.iter().any(|v| v.is_nan() || *v <= 0.0) {
        return false;
    }
    (0..n).all(|i| {
        (0..n)
            .map(|j| a[j].ln() * cartan[(j, i)] as f64)
            .sum::<f64>()
            > 0.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{spec, supported_types};

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn solve_examples() {
        let a = solve_a(&spec("A1").unwrap(), 1e-14, 1000).unwrap();
        assert!((a[0] - 2f64.sqrt()).abs() < 1e-13);
        let a = solve_a(&spec("A2").unwrap(), 1e-14, 1000).unwrap();
        assert!(a.iter().all(|v| (v - PHI).abs() < 1e-12));
        let a = solve_a(&spec("G2").unwrap(), 1e-14, 1000).unwrap();
        assert!((a[0] - 3.0).abs() < 1e-12 && (a[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let c3 = closed_form_a(&spec("C3").unwrap());
        let t = PI / 8.0;
        for (k, v) in c3.iter().enumerate() {
            assert!((v - ((k + 2) as f64 * t).sin() / t.sin()).abs() < 1e-15);
        }
        assert!((closed_form_a(&spec("E8").unwrap())[0] - 3.414_213_562_373_095).abs() < 1e-14);
        let e = epsilon();
        assert!((e - 2.246_979_603_717_467).abs() < 1e-14);
        assert!((e - (1.0 + 2.0 * (2.0 * PI / 7.0).cos())).abs() < 1e-14);
        assert_eq!(
            closed_form_a(&spec("B4").unwrap()),
            vec![2.0, 3.0, 4.0, 5f64.sqrt()]
        );
    }

    #[test]
    fn solver_matches_table_for_all_types() {
        for kind in supported_types() {
            let s = crate::roots::cartan_matrix(kind).unwrap();
            let a = solve_a(&s, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
            let c = closed_form_a(&s);
            for (x, y) in a.iter().zip(&c) {
                assert!((x - y).abs() <= 1e-9 * y, "{kind}: {a:?} vs {c:?}");
            }
            assert!(residual_a(&s, &c) < 1e-12, "{kind}");
            let d = FixedPointData::from_a(&s, a).unwrap();
            assert!(residual_b(&s, &d.b) < 1e-10, "{kind}");
            assert!(residual_u(&s, &d.u) < 1e-10, "{kind}");
            assert!(d.kappa.iter().all(|k| *k > 1.0));
            assert!(vinberg_gate(&s.cartan, &d.a));
        }
    }

    #[test]
    fn newton_alone_converges() {
        for name in ["A5", "E8", "F4", "C6"] {
            let s = spec(name).unwrap();
            let l = newton_log(&s, &vec![0.1; s.rank()], 1e-14, 500).unwrap();
            let a: Vec<f64> = l.into_iter().map(f64::exp).collect();
            assert!(residual_a(&s, &a) < 1e-12, "{name}");
        }
    }

    #[test]
    fn derived_data_examples() {
        let d = FixedPointData::compute(&spec("A2").unwrap()).unwrap();
        assert!(d.b.iter().all(|v| (v - PHI).abs() < 1e-12));
        let d = FixedPointData::compute(&spec("A1").unwrap()).unwrap();
        assert!((d.kappa[0] - 2.0).abs() < 1e-12 && (d.u[0] - 0.5).abs() < 1e-12);
        let d = FixedPointData::from_a(&spec("G2").unwrap(), vec![3.0, 2.0]).unwrap();
        assert!((d.kappa[0] - 9.0 / 8.0).abs() < 1e-15);
        assert!((d.kappa[1] - 4.0 / 3.0).abs() < 1e-15);
        assert!(matches!(b_from_a(&[1.0]), Err(Error::NotAboveOne { .. })));
    }

    #[test]
    fn vinberg_gate_examples() {
        let a2 = spec("A2").unwrap();
        assert!(vinberg_gate(&a2.cartan, &[PHI, PHI]));
        let affine = DMatrix::from_row_slice(3, 3, &[2, -1, -1, -1, 2, -1, -1, -1, 2]);
        assert!(!vinberg_gate(&affine, &[1.7, 1.7, 1.7]));
        assert!(vinberg_gate(&spec("A1").unwrap().cartan, &[2f64.sqrt()]));
    }

    #[test]
    fn uniqueness_probe_small() {
        let d = uniqueness_probe(&spec("D5").unwrap(), 10, 3).unwrap();
        assert!(d <= 1e-8);
    }
}
