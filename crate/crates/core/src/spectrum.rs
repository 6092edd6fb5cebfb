//! Linearization of the DT maps at their fixed points and the associated
//! polynomials: `P` (characteristic polynomial of `M_kappa`), `D` (the
//! degree polynomial), cluster exponents, the height factorization and the
//! Coxeter spectrum.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::{mul_linear, CDd, Dd};
use crate::dtmap::{x_step, y_step};
use crate::error::{Error, Result};
use crate::fixpoint::FixedPointData;
use crate::instrument::{hit, Op};
use crate::poly::Poly;
use crate::report::Check;
use crate::roots::{cartan_matrix, CartanSpec, CartanType, Family, RootSystem};

pub const MAX_CHAR_POLY_DIM: usize = 16;
pub const CROSS_CHECK_TOL: f64 = 1e-8;
pub const FD_STEP: f64 = 1e-6;

/// `(L, U)`: both carry `lambda` on the diagonal; `U` has the strictly upper
/// and `L` the strictly lower entries of `A`.
pub fn build_lu(lambda: &[f64], cartan: &DMatrix<i64>) -> (DMatrix<f64>, DMatrix<f64>) {
    hit(Op::BuildLU);
    let n = lambda.len();
    let l = DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => lambda[i],
        std::cmp::Ordering::Greater => cartan[(i, j)] as f64,
        std::cmp::Ordering::Less => 0.0,
    });
    let u = DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => lambda[i],
        std::cmp::Ordering::Less => cartan[(i, j)] as f64,
        std::cmp::Ordering::Greater => 0.0,
    });
    (l, u)
}

/// `M_lambda = -L_lambda U_lambda^{-1}`.
pub fn m_matrix(lambda: &[f64], cartan: &DMatrix<i64>) -> Result<DMatrix<f64>> {
    hit(Op::MMatrix);
    if let Some(index) = lambda.iter().position(|v| *v == 0.0 || !v.is_finite()) {
        return Err(Error::NotPositive {
            index,
            value: lambda[index],
        });
    }
    let (l, u) = build_lu(lambda, cartan);
    let n = lambda.len();
    let u_inv = u
        .solve_upper_triangular(&DMatrix::identity(n, n))
        .ok_or(Error::SingularChart)?;
    Ok(-(l * u_inv))
}

/// Coefficients of `det(xI - M)`, lowest degree first, by the trace
/// recursion.
pub fn faddeev_leverrier(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let id = DMatrix::<f64>::identity(n, n);
    let mut mk = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        mk = m * &mk + &id * c[n + 1 - k];
        c[n - k] = -(m * &mk).trace() / k as f64;
    }
    c
}

/// Coefficients of a degree-`n` polynomial from its values at the `(n+1)`-th
/// roots of unity, by inverse DFT.
pub fn interpolate_unit_circle(n: usize, eval: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
    let m = n + 1;
    let nodes: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / m as f64))
        .collect();
    let values: Vec<Complex64> = nodes.iter().map(|&z| eval(z)).collect();
    (0..m)
        .map(|j| {
            values
                .iter()
                .enumerate()
                .map(|(k, v)| v * nodes[(j * k) % m].conj())
                .sum::<Complex64>()
                / m as f64
        })
        .collect()
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_CHAR_POLY_DIM {
        return Err(Error::UnsupportedSize {
            n,
            max: MAX_CHAR_POLY_DIM,
        });
    }
    Ok(())
}

fn cross_checked(what: &'static str, left: Vec<f64>, right: Vec<f64>) -> Result<Poly> {
    let worst = left
        .iter()
        .zip(&right)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if worst > CROSS_CHECK_TOL {
        return Err(Error::CrossCheck { what, left, right });
    }
    Ok(Poly::from_real(&left))
}

fn real_parts(c: Vec<Complex64>) -> Result<Vec<f64>> {
    let worst = c.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if worst > CROSS_CHECK_TOL {
        return Err(Error::Internal(format!(
            "interpolated characteristic polynomial not real: imaginary part {worst:e}"
        )));
    }
    Ok(c.into_iter().map(|z| z.re).collect())
}

/// `det(xI - M)` by the trace recursion, cross-checked against
/// interpolation of LU determinants on the unit circle.
pub fn char_poly(m: &DMatrix<f64>) -> Result<Poly> {
    hit(Op::CharPoly);
    let n = m.nrows();
    check_dim(n)?;
    let fl = faddeev_leverrier(m);
    let mc = m.map(|v| Complex64::new(v, 0.0));
    let ip = real_parts(interpolate_unit_circle(n, |x| {
        (DMatrix::identity(n, n) * x - &mc).lu().determinant()
    }))?;
    cross_checked("characteristic polynomial", fl, ip)
}

/// `det(xI - M_lambda)`, with the second route evaluating
/// `det(x U_lambda + L_lambda) / prod lambda`.
pub fn char_poly_lambda(lambda: &[f64], cartan: &DMatrix<i64>) -> Result<Poly> {
    hit(Op::CharPoly);
    let n = lambda.len();
    check_dim(n)?;
    let fl = faddeev_leverrier(&m_matrix(lambda, cartan)?);
    let (l, u) = build_lu(lambda, cartan);
    let (l, u) = (
        l.map(|v| Complex64::new(v, 0.0)),
        u.map(|v| Complex64::new(v, 0.0)),
    );
    let scale: f64 = lambda.iter().product();
    let ip = real_parts(interpolate_unit_circle(n, |x| {
        (&u * x + &l).lu().determinant() / scale
    }))?;
    cross_checked("characteristic polynomial of M_lambda", fl, ip)
}

/// `prod_j (x - zeta^{d_j})` with `zeta = exp(2 pi i / (h + 2))`.
pub fn d_product(spec: &CartanSpec) -> Poly {
    let q = spec.coxeter_number as f64 + 2.0;
    spec.degrees.iter().fold(Poly::one(), |acc, &d| {
        acc.mul(&Poly::linear(Complex64::from_polar(
            1.0,
            TAU * d as f64 / q,
        )))
    })
}

/// Tabulated closed form of `D` for the family.
pub fn d_closed_form(spec: &CartanSpec) -> Vec<f64> {
    let n = spec.rank();
    let w = |k: i32| 2.0 * (PI * k as f64 / 7.0).cos();
    match spec.kind.family {
        Family::A => {
            let t = PI / (n as f64 + 3.0);
            (0..=n)
                .map(|j| {
                    ((j + 1) as f64 * t).sin() * ((j + 2) as f64 * t).sin()
                        / (t.sin() * (2.0 * t).sin())
                })
                .collect()
        }
        Family::B | Family::C => vec![1.0; n + 1],
        Family::D => {
            let mut c = vec![2.0; n + 1];
            c[0] = 1.0;
            c[n] = 1.0;
            c
        }
        Family::G => vec![1.0, 0.0, 1.0],
        Family::F => {
            let a1 = -(w(2) + w(6));
            let a2 = 2.0 + w(4) + w(6);
            vec![1.0, a1, a2, a1, 1.0]
        }
        Family::E if n == 6 => {
            let b1 = w(1);
            let b2 = 1.0 + w(3);
            let b3 = w(2) + w(4);
            vec![1.0, b1, b2, b3, b2, b1, 1.0]
        }
        Family::E if n == 7 => {
            let tau = (1.0 + 5f64.sqrt()) / 2.0;
            vec![1.0, tau, 1.0, 0.0, 0.0, 1.0, tau, 1.0]
        }
        Family::E => {
            let s = 2f64.sqrt();
            let (g1, g2, g3, g4) = (s, 2.0 - s, s - 2.0, 2.0 - 2.0 * s);
            vec![1.0, g1, g2, g3, g4, g3, g2, g1, 1.0]
        }
    }
}

/// `D` in product form, after asserting agreement with the closed form to
/// `1e-9` and real coefficients to `1e-10`.
pub fn d_poly(spec: &CartanSpec) -> Result<Poly> {
    hit(Op::DPoly);
    let prod = d_product(spec);
    let closed = d_closed_form(spec);
    let real = prod.realify(1e-10)?;
    if real.max_abs_diff(&Poly::from_real(&closed)) > 1e-9 {
        return Err(Error::CrossCheck {
            what: "D polynomial closed form",
            left: real.real_coeffs(),
            right: closed,
        });
    }
    Ok(real)
}

/// Roots within this distance are treated as one repeated root.
const CLUSTER_RADIUS: f64 = 1e-4;

/// Replaces each group of nearby roots by its centroid, repeated with the
/// group's multiplicity.
fn cluster_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut seen = vec![false; roots.len()];
    let mut out = Vec::with_capacity(roots.len());
    for i in 0..roots.len() {
        if seen[i] {
            continue;
        }
        let group: Vec<usize> = (i..roots.len())
            .filter(|&j| !seen[j] && (roots[j] - roots[i]).norm() < CLUSTER_RADIUS)
            .collect();
        let centroid = group.iter().map(|&j| roots[j]).sum::<Complex64>() / group.len() as f64;
        for &j in &group {
            seen[j] = true;
            out.push(centroid);
        }
    }
    out
}

/// Integers `m` in `[0, q)` with roots `exp(2 pi i m / q)`, sorted.
pub fn exponents(p: &Poly, q: u32) -> Result<Vec<u32>> {
    hit(Op::Exponents);
    let roots = cluster_roots(&p.roots()?);
    let mut out = Vec::with_capacity(roots.len());
    for root in roots {
        let deviation = (root.norm() - 1.0).abs();
        if deviation > 1e-7 {
            return Err(Error::RootOffCircle { root, deviation });
        }
        let turns = root.arg() / TAU * q as f64;
        let m = turns.round();
        let error = (turns - m).abs() * TAU / q as f64;
        if error > 1e-6 {
            return Err(Error::AngularMismatch {
                root,
                error,
                modulus: q,
            });
        }
        out.push((m as i64).rem_euclid(q as i64) as u32);
    }
    out.sort_unstable();
    Ok(out)
}

/// `P` for `spec`, from the fixed-point `kappa`.
pub fn p_phi(spec: &CartanSpec, fp: &FixedPointData) -> Result<Poly> {
    char_poly_lambda(&fp.kappa, &spec.cartan)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub m_kappa: DMatrix<f64>,
    pub p_phi: Poly,
    pub d_phi: Poly,
    pub exponents: Vec<u32>,
    pub jacobian_log: DMatrix<f64>,
}

impl SpectralData {
    pub fn compute(spec: &CartanSpec, fp: &FixedPointData) -> Result<Self> {
        let p_phi = p_phi(spec, fp)?;
        Ok(Self {
            m_kappa: m_matrix(&fp.kappa, &spec.cartan)?,
            exponents: exponents(&p_phi, spec.coxeter_number + 2)?,
            d_phi: d_poly(spec)?,
            p_phi,
            jacobian_log: jacobian_a(spec, &fp.a, FD_STEP),
        })
    }
}

fn central_difference(at: &[f64], step: f64, f: impl Fn(&[f64]) -> Vec<f64>) -> DMatrix<f64> {
    let n = at.len();
    let mut j = DMatrix::zeros(n, n);
    for col in 0..n {
        let mut plus = at.to_vec();
        let mut minus = at.to_vec();
        plus[col] += step;
        minus[col] -= step;
        let (fp, fm) = (f(&plus), f(&minus));
        for row in 0..n {
            j[(row, col)] = (fp[row] - fm[row]) / (2.0 * step);
        }
    }
    j
}

/// Jacobian of `l -> log dt_A(exp l)` at `log a`.
pub fn jacobian_a(spec: &CartanSpec, a: &[f64], step: f64) -> DMatrix<f64> {
    let at: Vec<f64> = a.iter().map(|v| v.ln()).collect();
    central_difference(&at, step, |l| {
        let x: Vec<f64> = l.iter().map(|v| v.exp()).collect();
        x_step(spec, &x).into_iter().map(f64::ln).collect()
    })
}

/// Jacobian of `dt_X` at `b` in the coordinates `z = log(1 + Y)`.
pub fn jacobian_x(spec: &CartanSpec, b: &[f64], step: f64) -> DMatrix<f64> {
    let at: Vec<f64> = b.iter().map(|v| v.ln_1p()).collect();
    central_difference(&at, step, |z| {
        let y: Vec<f64> = z.iter().map(|v| v.exp_m1()).collect();
        y_step(spec, &y).into_iter().map(f64::ln_1p).collect()
    })
}

/// `P = D` and exponents equal the degrees, plus the derived spectral
/// invariants. Tolerances are multiplied by `scale`.
pub fn verify_theorem_b(spec: &CartanSpec, fp: &FixedPointData, scale: f64) -> Vec<Check> {
    hit(Op::VerifyTheoremB);
    let mut checks = Vec::new();
    let p = match p_phi(spec, fp) {
        Ok(p) => p,
        Err(e) => return vec![Check::failed("char_poly", &e)],
    };
    checks.push(Check::exact("char_poly cross-check", true));
    match d_poly(spec) {
        Ok(d) => checks.push(Check::within("P = D", p.max_abs_diff(&d), 1e-8 * scale)),
        Err(e) => checks.push(Check::failed("D closed form", &e)),
    }
    checks.push(Check::above("|P(1)|", p.eval_real(1.0).norm(), 0.1));
    match exponents(&p, spec.coxeter_number + 2) {
        Ok(m) => {
            checks.push(Check::exact("exponents = degrees", m == spec.degrees));
            let q = spec.coxeter_number + 2;
            let sym = (0..m.len()).all(|i| m[i] + m[m.len() - 1 - i] == q);
            checks.push(Check::exact("exponent symmetry", sym));
            let sum: u32 = m.iter().sum();
            checks.push(Check::exact(
                "exponent sum",
                2 * sum as usize == spec.rank() * q as usize,
            ));
        }
        Err(e) => checks.push(Check::failed("exponents", &e)),
    }
    match p.roots() {
        Ok(roots) => {
            let pairing = roots
                .iter()
                .map(|r| {
                    roots
                        .iter()
                        .map(|s| (r.conj() - s).norm())
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max);
            checks.push(Check::within("conjugate pairing", pairing, 1e-8 * scale));
        }
        Err(e) => checks.push(Check::failed("roots", &e)),
    }
    checks
}

/// Finite-difference Jacobians of `dt_A` and `dt_X` against `M_kappa^T` and
/// `P`.
pub fn jacobian_check(spec: &CartanSpec, fp: &FixedPointData, scale: f64) -> Vec<Check> {
    hit(Op::JacobianCheck);
    let inner = || -> Result<Vec<Check>> {
        let m = m_matrix(&fp.kappa, &spec.cartan)?;
        let ja = jacobian_a(spec, &fp.a, FD_STEP);
        let jx = jacobian_x(spec, &fp.b, FD_STEP);
        let p = p_phi(spec, fp)?;
        let pa = char_poly(&ja)?;
        let px = char_poly(&jx)?;
        Ok(vec![
            Check::within(
                "J_A = M_kappa^T",
                (&ja - m.transpose()).amax(),
                1e-5 * scale,
            ),
            Check::within("char(J_A) = P", pa.max_abs_diff(&p), 1e-6 * scale),
            Check::within("char(J_X) = P", px.max_abs_diff(&p), 1e-6 * scale),
            Check::within("char(J_A) = char(J_X)", pa.max_abs_diff(&px), 1e-6 * scale),
        ])
    };
    inner().unwrap_or_else(|e| vec![Check::failed("jacobian", &e)])
}

/// Largest coefficient error of
/// `((x^{h+2} - 1)/(x - 1))^n = D(x) prod_beta (x - zeta^{ht beta})`,
/// with the left side exact and the right side in double-double.
pub fn height_identity(spec: &CartanSpec, roots: &RootSystem) -> f64 {
    hit(Op::HeightIdentity);
    let q = spec.coxeter_number + 2;
    let n = spec.rank();

    let mut lhs: Vec<i128> = vec![1];
    for _ in 0..n {
        let mut next = vec![0i128; lhs.len() + q as usize - 1];
        for (i, c) in lhs.iter().enumerate() {
            for slot in &mut next[i..i + q as usize] {
                *slot += c;
            }
        }
        lhs = next;
    }

    let zeta = CDd::root_of_unity(q);
    let mut powers = vec![CDd::ONE];
    for k in 1..q {
        powers.push(powers[k as usize - 1] * zeta);
    }
    // Multiplicity of each residue among the right-hand roots.
    let mut counts = vec![0usize; q as usize];
    for &d in &spec.degrees {
        counts[(d % q) as usize] += 1;
    }
    for &ht in &roots.heights {
        counts[(ht % q) as usize] += 1;
        counts[((q - ht % q) % q) as usize] += 1;
    }
    // Factors sharing a residue are split into layers of distinct residues,
    // each multiplied in Leja order; clustered roots would otherwise inflate
    // intermediate coefficients far beyond the final ones.
    let mut rhs = vec![CDd::ONE];
    while counts.iter().any(|&c| c > 0) {
        let layer: Vec<usize> = (0..q as usize).filter(|&r| counts[r] > 0).collect();
        for &r in &layer {
            counts[r] -= 1;
        }
        let mut part = vec![CDd::ONE];
        for r in leja_order(&layer, q) {
            mul_linear(&mut part, powers[r]);
        }
        rhs = mul_poly(&rhs, &part);
    }

    if rhs.len() != lhs.len() {
        return f64::INFINITY;
    }
    lhs.iter()
        .zip(&rhs)
        .map(|(l, r)| {
            let re = (r.re - Dd::from_i128(*l)).to_f64().abs();
            let im = r.im.to_f64().abs();
            re.max(im)
        })
        .fold(0.0, f64::max)
}

/// Reorders residues `r` (roots `exp(2 pi i r / q)`) so each next root
/// maximizes the product of distances to those already chosen.
fn leja_order(residues: &[usize], q: u32) -> Vec<usize> {
    let point = |r: usize| Complex64::from_polar(1.0, TAU * r as f64 / q as f64);
    let mut left: Vec<usize> = residues.to_vec();
    let mut out = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let score = |r: usize| -> f64 {
            out.iter()
                .map(|&s| (point(r) - point(s)).norm().max(1e-300).ln())
                .sum()
        };
        let best = (0..left.len())
            .max_by(|&a, &b| score(left[a]).total_cmp(&score(left[b])))
            .unwrap_or(0);
        out.push(left.swap_remove(best));
    }
    out
}

fn mul_poly(a: &[CDd], b: &[CDd]) -> Vec<CDd> {
    let mut out = vec![CDd::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + *x * *y;
        }
    }
    out
}

/// Exponents of `M_1` with respect to `h`.
pub fn coxeter_spectrum(spec: &CartanSpec) -> Result<Vec<u32>> {
    hit(Op::CoxeterSpectrum);
    let ones = vec![1.0; spec.rank()];
    let p = char_poly_lambda(&ones, &spec.cartan)?;
    exponents(&p, spec.coxeter_number)
}

fn p_of(kind: CartanType) -> Result<Poly> {
    let s = cartan_matrix(kind)?;
    let fp = FixedPointData::compute(&s)?;
    p_phi(&s, &fp)
}

/// `|| P_{D_n} - (x + 1) P_{B_{n-1}} ||`.
pub fn d_b_factorization(n: usize) -> Result<f64> {
    let pd = p_of(CartanType::new(Family::D, n)?)?;
    let pb = p_of(CartanType::new(Family::B, n - 1)?)?;
    Ok(pd.max_abs_diff(&Poly::from_real(&[1.0, 1.0]).mul(&pb)))
}

/// Remainder of `P_{A_{2n-1}}` divided by `P_{C_n}`.
pub fn c_divides_a(n: usize) -> Result<f64> {
    let pc = p_of(CartanType::new(Family::C, n)?)?;
    let pa = p_of(CartanType::new(Family::A, 2 * n - 1)?)?;
    let (_, rem) = pa.divrem(&pc);
    Ok(rem.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{enumerate_positive_roots, spec, supported_types};

    fn fixed(name: &str) -> (CartanSpec, FixedPointData) {
        let s = spec(name).unwrap();
        let fp = FixedPointData::compute(&s).unwrap();
        (s, fp)
    }

    #[test]
    fn lu_examples() {
        let g2 = spec("G2").unwrap();
        let (l, u) = build_lu(&[9.0 / 8.0, 4.0 / 3.0], &g2.cartan);
        assert_eq!(
            u,
            DMatrix::from_row_slice(2, 2, &[9.0 / 8.0, -1.0, 0.0, 4.0 / 3.0])
        );
        assert_eq!(
            l,
            DMatrix::from_row_slice(2, 2, &[9.0 / 8.0, 0.0, -3.0, 4.0 / 3.0])
        );
        let e8 = spec("E8").unwrap();
        let (l, u) = build_lu(&[1.0; 8], &e8.cartan);
        assert_eq!(&l + &u, e8.cartan_f64());
        let ba = crate::mutation::build_ba(&e8, false)
            .principal()
            .map(|v| v as f64);
        assert_eq!(&u - &l, ba);
    }

    #[test]
    fn m_matrix_examples() {
        let a1 = spec("A1").unwrap();
        assert_eq!(m_matrix(&[2.0], &a1.cartan).unwrap()[(0, 0)], -1.0);
        assert!(m_matrix(&[0.0], &a1.cartan).is_err());
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let c = [1.0, -2.0, 0.5, 3.0];
        let got = interpolate_unit_circle(3, |x| {
            c.iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, k| acc * x + k)
        });
        for (a, b) in got.iter().zip(&c) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn char_poly_examples() {
        let (g2, fp) = fixed("G2");
        assert!(
            p_phi(&g2, &fp)
                .unwrap()
                .max_abs_diff(&Poly::from_real(&[1.0, 0.0, 1.0]))
                < 1e-12
        );
        let (a1, fp) = fixed("A1");
        assert!(
            p_phi(&a1, &fp)
                .unwrap()
                .max_abs_diff(&Poly::from_real(&[1.0, 1.0]))
                < 1e-12
        );
        let (b2, fp) = fixed("B2");
        assert!(p_phi(&b2, &fp).unwrap().max_abs_diff(&Poly::geometric(3)) < 1e-12);
    }

    #[test]
    fn d_poly_closed_forms_all_types() {
        for kind in supported_types() {
            let s = cartan_matrix(kind).unwrap();
            d_poly(&s).unwrap_or_else(|e| panic!("{kind}: {e}"));
        }
    }

    #[test]
    fn exponent_examples() {
        let (a2, fp) = fixed("A2");
        assert_eq!(exponents(&p_phi(&a2, &fp).unwrap(), 5).unwrap(), vec![2, 3]);
        assert_eq!(
            exponents(&Poly::from_real(&[1.0, 0.0, 1.0]), 8).unwrap(),
            vec![2, 6]
        );
        assert_eq!(exponents(&Poly::geometric(3), 3).unwrap(), vec![1, 2]);
        assert!(matches!(
            exponents(&Poly::from_real(&[2.0, 1.0]), 4),
            Err(Error::RootOffCircle { .. })
        ));
        assert!(matches!(
            exponents(&Poly::geometric(3), 4),
            Err(Error::AngularMismatch { .. })
        ));
    }

    #[test]
    fn exponent_checks_and_jacobian_all_types() {
        for kind in supported_types() {
            let s = cartan_matrix(kind).unwrap();
            let fp = FixedPointData::compute(&s).unwrap();
            for c in verify_theorem_b(&s, &fp, 1.0)
                .into_iter()
                .chain(jacobian_check(&s, &fp, 1.0))
            {
                assert!(c.pass, "{kind}: {} residual {}", c.name, c.residual);
            }
        }
    }

    #[test]
    fn jacobian_small_examples() {
        let (a1, fp) = fixed("A1");
        let j = jacobian_a(&a1, &fp.a, FD_STEP);
        assert!((j[(0, 0)] + 1.0).abs() < 1e-9);
        let (a2, fp) = fixed("A2");
        let j = jacobian_a(&a2, &fp.a, FD_STEP);
        assert_eq!(exponents(&char_poly(&j).unwrap(), 5).unwrap(), vec![2, 3]);
    }

    #[test]
    fn height_identity_examples() {
        for name in ["A1", "A2", "G2", "E8"] {
            let s = spec(name).unwrap();
            let r = enumerate_positive_roots(&s);
            let res = height_identity(&s, &r);
            assert!(res <= 1e-7, "{name}: {res}");
        }
    }

    #[test]
    fn coxeter_examples() {
        assert_eq!(coxeter_spectrum(&spec("A2").unwrap()).unwrap(), vec![1, 2]);
        assert_eq!(coxeter_spectrum(&spec("G2").unwrap()).unwrap(), vec![1, 5]);
        assert_eq!(coxeter_spectrum(&spec("A1").unwrap()).unwrap(), vec![1]);
    }

    #[test]
    fn d_b_and_c_a_factorizations() {
        assert!(d_b_factorization(5).unwrap() <= 1e-8);
        assert!(c_divides_a(3).unwrap() <= 1e-7);
    }
}
