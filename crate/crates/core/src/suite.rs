//! The per-type verification suite and its aggregation over all supported
//! types.

use std::time::Instant;

use rayon::prelude::*;

use crate::bruhat::{self, TriDiag};
use crate::dtmap::{
    self, max_rel_diff, random_positive_point, trial_rng, DtMap, FriezeKind, PositivePoint,
};
use crate::error::Result;
use crate::fixpoint::{self, FixedPointData};
use crate::mutation::{self, NumericSeed};
use crate::report::{Check, Report};
use crate::roots::{self, supported_types, CartanSpec, CartanType, Family};
use crate::spectrum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    /// Multiplies every default tolerance.
    pub tol_scale: f64,
    /// Random points per periodicity test.
    pub trials: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            tol_scale: 1.0,
            trials: 100,
            seed: 0,
        }
    }
}

impl SuiteOptions {
    fn tol(&self, base: f64) -> f64 {
        base * self.tol_scale
    }
}

/// Runs `f`, stamping every returned check with the elapsed wall time.
fn timed(f: impl FnOnce() -> Vec<Check>) -> Vec<Check> {
    let start = Instant::now();
    let checks = f();
    let elapsed = start.elapsed();
    checks.into_iter().map(|c| c.timed(elapsed)).collect()
}

fn attempt(name: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> Vec<Check> {
    f().unwrap_or_else(|e| vec![Check::failed(name, &e)])
}

pub fn root_checks(spec: &CartanSpec) -> Vec<Check> {
    let n = spec.rank();
    let h = spec.coxeter_number as usize;
    let rs = roots::enumerate_positive_roots(spec);
    let kostant = roots::kostant_counts(spec, &rs);
    let mut checks = vec![
        Check::exact("symmetrizable", spec.symmetrizer().is_some()),
        Check::exact(
            "positive roots = nh/2",
            2 * rs.positive_roots.len() == n * h,
        ),
        Check::exact("kostant counts", kostant.iter().all(|r| r.lhs == r.rhs)),
    ];
    match roots::count_formulas(spec) {
        Ok(c) => {
            checks.push(Check::exact(
                "sum of degrees = n(h+2)/2",
                2 * c.cluster_variables as usize == n * (h + 2),
            ));
            checks.push(Check::exact("cluster count integral", c.clusters > 0));
        }
        Err(e) => checks.push(Check::failed("cluster count", &e)),
    }
    checks
}

pub fn mutation_checks(spec: &CartanSpec, opts: &SuiteOptions) -> Vec<Check> {
    attempt("mutation", || {
        let n = spec.rank();
        let b = mutation::build_ba(spec, false);
        let mut chart: f64 = 0.0;
        let mut compat: f64 = 0.0;
        for t in 0..10 {
            let mut rng = trial_rng(opts.seed ^ 0x5eed, t);
            let x = random_positive_point(&mut rng, n);
            let mut seed = NumericSeed::new(b.clone(), x.clone(), Vec::new())?;
            for k in 0..n {
                seed = mutation::mutate_x(&seed, k)?;
            }
            let via_frieze = dtmap::dt_a(spec, &PositivePoint::x(x.clone())?)?;
            chart = chart.max(max_rel_diff(&seed.x, via_frieze.coords()));

            let k = t as usize % n;
            let hat_y = |bm: &mutation::ExtendedMatrix, x: &[f64]| -> Vec<f64> {
                (0..n)
                    .map(|j| (0..n).map(|i| x[i].powi(bm.get(i, j) as i32)).product())
                    .collect()
            };
            let start = NumericSeed::new(b.clone(), x.clone(), Vec::new())?;
            let next = mutation::mutate_x(&start, k)?;
            let (y_next, _) = mutation::mutate_y(&hat_y(&b, &x), &b, k)?;
            compat = compat.max(max_rel_diff(&y_next, &hat_y(&next.b, &next.x)));
        }
        Ok(vec![
            Check::exact("reddening", mutation::verify_reddening(spec)),
            Check::within("dt_A = mu_n..mu_1", chart, opts.tol(1e-10)),
            Check::within("y-mutation matches x-mutation", compat, opts.tol(1e-10)),
        ])
    })
}

pub fn fixpoint_checks(spec: &CartanSpec, fp: &FixedPointData, opts: &SuiteOptions) -> Vec<Check> {
    attempt("fixpoint", || {
        let closed = fixpoint::closed_form_a(spec);
        let a_pt = PositivePoint::x(fp.a.clone())?;
        let b_pt = PositivePoint::y(fp.b.clone())?;
        let dta = dtmap::dt_a(spec, &a_pt)?;
        let dtx = dtmap::dt_x(spec, &b_pt)?;
        let p = dtmap::ensemble_p(spec, &a_pt)?;
        let spread = fixpoint::uniqueness_probe(spec, 50, opts.seed)?;
        Ok(vec![
            Check::within(
                "solve_a = closed form",
                max_rel_diff(&fp.a, &closed),
                opts.tol(1e-9),
            ),
            Check::within(
                "A-equation residual",
                fixpoint::residual_a(spec, &fp.a),
                opts.tol(1e-10),
            ),
            Check::within(
                "X-equation residual",
                fixpoint::residual_b(spec, &fp.b),
                opts.tol(1e-10),
            ),
            Check::within(
                "u-equation residual",
                fixpoint::residual_u(spec, &fp.u),
                opts.tol(1e-10),
            ),
            Check::exact("kappa > 1", fp.kappa.iter().all(|k| *k > 1.0)),
            Check::exact("vinberg gate", fixpoint::vinberg_gate(&spec.cartan, &fp.a)),
            Check::within(
                "dt_A(a) = a",
                max_rel_diff(dta.coords(), &fp.a),
                opts.tol(1e-10),
            ),
            Check::within(
                "dt_X(b) = b",
                max_rel_diff(dtx.coords(), &fp.b),
                opts.tol(1e-10),
            ),
            Check::within("p(a) = b", max_rel_diff(p.coords(), &fp.b), opts.tol(1e-10)),
            Check::within("uniqueness probe spread", spread, opts.tol(1e-8)),
        ])
    })
}

/// Types for which the distinct-value count of the frieze is checked.
fn counts_frieze_values(kind: CartanType) -> bool {
    matches!(
        (kind.family, kind.rank),
        (Family::A, 1..=4) | (Family::B, 2) | (Family::G, 2)
    )
}

pub fn frieze_checks(spec: &CartanSpec, fp: &FixedPointData, opts: &SuiteOptions) -> Vec<Check> {
    attempt("frieze", || {
        let n = spec.rank();
        let period = spec.coxeter_number as i64 + 2;
        let mut rng = trial_rng(opts.seed ^ 0xf1e2e, 0);
        let seed = random_positive_point(&mut rng, n);
        let xf = dtmap::frieze(spec, FriezeKind::X, &seed, -period..=period)?;
        let y_seed = dtmap::ensemble_p(spec, &PositivePoint::x(seed.clone())?)?;
        let yf = dtmap::frieze(spec, FriezeKind::Y, y_seed.coords(), -period..=period)?;
        let mut p_vs_y: f64 = 0.0;
        for m in -period..period {
            let x_m = PositivePoint::x(xf.row(m).expect("in window").to_vec())?;
            let y_m = dtmap::ensemble_p(spec, &x_m)?;
            p_vs_y = p_vs_y.max(max_rel_diff(y_m.coords(), yf.row(m).expect("in window")));
        }
        let mut natural: f64 = 0.0;
        for t in 0..10 {
            let mut rng = trial_rng(opts.seed ^ 0xa7, t);
            let x = PositivePoint::x(random_positive_point(&mut rng, n))?;
            let lhs = dtmap::ensemble_p(spec, &dtmap::dt_a(spec, &x)?)?;
            let rhs = dtmap::dt_x(spec, &dtmap::ensemble_p(spec, &x)?)?;
            natural = natural.max(max_rel_diff(lhs.coords(), rhs.coords()));
        }
        let at_fixed = dtmap::frieze(spec, FriezeKind::X, &fp.a, 0..=period)?;
        let sup = dtmap::superunitary_check(spec, &fp.a, 1e-6)?;
        let mut checks = vec![
            Check::within(
                "x-frieze recurrence",
                xf.recurrence_residual(spec),
                opts.tol(1e-10),
            ),
            Check::within(
                "Y-frieze recurrence",
                yf.recurrence_residual(spec),
                opts.tol(1e-10),
            ),
            Check::within(
                "x-frieze translation by h+2",
                xf.translation_residual(period as usize)
                    .unwrap_or(f64::INFINITY),
                opts.tol(1e-8),
            ),
            Check::within(
                "Y-frieze translation by h+2",
                yf.translation_residual(period as usize)
                    .unwrap_or(f64::INFINITY),
                opts.tol(1e-8),
            ),
            Check::exact("Y-frieze positive", yf.min_entry() > 0.0),
            Check::within("p(x-frieze) = Y-frieze", p_vs_y, opts.tol(1e-10)),
            Check::within("p dt_A = dt_X p", natural, opts.tol(1e-9)),
            Check::within(
                "frieze at fixed point is constant",
                at_fixed.translation_residual(1).unwrap_or(f64::INFINITY),
                opts.tol(1e-10),
            ),
            Check::above(
                "superunitary min entry - 1",
                sup.min_entry - 1.0,
                sup.margin,
            ),
        ];
        if counts_frieze_values(spec.kind) {
            let p = period as usize;
            let window = dtmap::FriezeTable {
                kind: FriezeKind::X,
                m_start: 0,
                rows: xf.rows[p..2 * p].to_vec(),
            };
            let sum_d: u32 = spec.degrees.iter().sum();
            checks.push(Check::exact(
                "distinct frieze values = sum of degrees",
                window.distinct_values(p, 1e-6) == sum_d as usize,
            ));
        }
        Ok(checks)
    })
}

pub fn periodicity_checks(spec: &CartanSpec, opts: &SuiteOptions) -> Vec<Check> {
    let mut checks = Vec::new();
    for (map, label) in [(DtMap::A, "dt_A"), (DtMap::X, "dt_X")] {
        let r = dtmap::check_periodicity(spec, map, opts.trials, opts.seed);
        checks.push(Check::within(
            format!("{label} period h+2 = {}", r.period),
            r.max_deviation,
            opts.tol(1e-8),
        ));
        if let Some((half, dev)) = r.half {
            checks.push(Check::within(
                format!("{label} period (h+2)/2 = {half}"),
                dev,
                opts.tol(1e-8),
            ));
        }
    }
    checks
}

pub fn spectrum_checks(spec: &CartanSpec, fp: &FixedPointData, opts: &SuiteOptions) -> Vec<Check> {
    let mut checks = spectrum::verify_theorem_b(spec, fp, opts.tol_scale);
    checks.extend(spectrum::jacobian_check(spec, fp, opts.tol_scale));
    let rs = roots::enumerate_positive_roots(spec);
    checks.push(Check::within(
        "height identity",
        spectrum::height_identity(spec, &rs),
        opts.tol(1e-7),
    ));
    match spectrum::coxeter_spectrum(spec) {
        Ok(m) => {
            let expected: Vec<u32> = spec.degrees.iter().map(|d| d - 1).collect();
            checks.push(Check::exact(
                "coxeter exponents = degrees - 1",
                m == expected,
            ));
        }
        Err(e) => checks.push(Check::failed("coxeter spectrum", &e)),
    }
    let n = spec.rank();
    match spec.kind.family {
        Family::D => checks.push(match spectrum::d_b_factorization(n) {
            Ok(r) => Check::within("P_D = (x+1) P_B", r, opts.tol(1e-8)),
            Err(e) => Check::failed("P_D = (x+1) P_B", &e),
        }),
        Family::C if n <= 6 => checks.push(match spectrum::c_divides_a(n) {
            Ok(r) => Check::within("P_C divides P_A", r, opts.tol(1e-7)),
            Err(e) => Check::failed("P_C divides P_A", &e),
        }),
        _ => {}
    }
    checks
}

/// Checks of the tridiagonal model of rank `n`.
pub fn bruhat_checks(n: usize, opts: &SuiteOptions) -> Vec<Check> {
    attempt("bruhat", || {
        let q_star = 2.0 * (std::f64::consts::PI / (n as f64 + 3.0)).cos();
        let mut rng = trial_rng(opts.seed ^ 0xb7, 0);
        let start = bruhat::random_positive_tridiag(&mut rng, n, false);
        let orbit = bruhat::twist_q_orbit(&start.q, n + 3)?;
        let fixed = vec![q_star; n + 1];
        let image = bruhat::twist_q(&fixed)?;

        let mut coherence: f64 = 0.0;
        let mut det: f64 = 0.0;
        for t in 0..10 {
            let mut rng = trial_rng(opts.seed ^ 0xb8, t);
            let g = bruhat::random_positive_tridiag(&mut rng, n, false);
            let full = bruhat::twist_full(&g)?;
            coherence = coherence.max(max_rel_diff(&full.q, &bruhat::twist_q(&g.q)?));
            let g = bruhat::random_positive_tridiag(&mut rng, n, true);
            det = det.max((bruhat::twist_full(&g)?.det() - 1.0).abs());
        }

        let spec = bruhat::twist_spectrum(n)?;
        let period = bruhat::period_check_full(n, opts.trials.min(20), opts.seed)?;
        let mut checks = vec![
            Check::within(
                "twist_Q period n+3",
                max_rel_diff(&orbit[n + 3], &start.q),
                opts.tol(1e-7),
            ),
            Check::within(
                "twist_Q fixes q*",
                max_rel_diff(&image, &fixed),
                opts.tol(1e-10),
            ),
            Check::within(
                "twist_full fixes (q*, 1)",
                spec.fixed_point_drift,
                opts.tol(1e-10),
            ),
            Check::within("twist_full = twist_Q on p = 1", coherence, opts.tol(1e-10)),
            Check::within("twist_full preserves det", det, opts.tol(1e-9)),
            Check::within("twist spectrum = P_A P_c", spec.residual, opts.tol(1e-5)),
            Check::within("twist_Q spectrum = P_A", spec.q_residual, opts.tol(1e-5)),
            Check::within("char(E) = P_c", spec.frozen_residual, opts.tol(1e-9)),
            Check::within(
                "full twist period n+3 on p = 1",
                period.slice_deviation,
                opts.tol(1e-7),
            ),
            Check::within(
                "frozen part period n+1",
                period.frozen_deviation,
                opts.tol(1e-9),
            ),
        ];
        if n <= bruhat::MAX_TNN_RANK {
            let tnn: Vec<f64> = bruhat::vieta_fixed_candidates(n)
                .into_iter()
                .map(|q| bruhat::tnn_check(&TriDiag::constant(n, q)).map(|ok| (q, ok)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter_map(|(q, ok)| ok.then_some(q))
                .collect();
            checks.push(Check::exact(
                "unique TNN Vieta candidate is q*",
                tnn.len() == 1 && (tnn[0] - q_star).abs() <= 1e-10,
            ));
        }
        Ok(checks)
    })
}

/// Full suite for one type.
pub fn verify_type(kind: CartanType, opts: &SuiteOptions) -> Report {
    let mut report = Report::new("verify", kind.to_string(), opts.seed);
    let spec = match roots::cartan_matrix(kind) {
        Ok(s) => s,
        Err(e) => {
            report.push(Check::failed("cartan matrix", &e));
            return report;
        }
    };
    report.extend(timed(|| root_checks(&spec)));
    report.extend(timed(|| mutation_checks(&spec, opts)));
    let fp = match FixedPointData::compute(&spec) {
        Ok(fp) => fp,
        Err(e) => {
            report.push(Check::failed("fixed point", &e));
            return report;
        }
    };
    report.extend(timed(|| fixpoint_checks(&spec, &fp, opts)));
    report.extend(timed(|| frieze_checks(&spec, &fp, opts)));
    report.extend(timed(|| periodicity_checks(&spec, opts)));
    report.extend(timed(|| spectrum_checks(&spec, &fp, opts)));
    if kind.family == Family::A && kind.rank <= bruhat::MAX_SPECTRUM_RANK {
        report.extend(timed(|| bruhat_checks(kind.rank, opts)));
    }
    report
}

/// Suites for every supported type, run in parallel and merged in type
/// order.
pub fn verify_all(opts: &SuiteOptions) -> Report {
    let types = supported_types();
    let reports: Vec<Report> = types.par_iter().map(|&k| verify_type(k, opts)).collect();
    let mut all = Report::new("verify", "all", opts.seed);
    for r in reports {
        let prefix = r.spec.clone();
        all.absorb(&prefix, r);
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g2_suite_passes() {
        let r = verify_type(
            CartanType::new(Family::G, 2).unwrap(),
            &SuiteOptions::default(),
        );
        let failures: Vec<_> = r.failures().collect();
        assert!(failures.is_empty(), "{failures:?}");
    }

    #[test]
    fn a3_suite_includes_bruhat() {
        let opts = SuiteOptions {
            trials: 5,
            ..SuiteOptions::default()
        };
        let r = verify_type(CartanType::new(Family::A, 3).unwrap(), &opts);
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r
            .checks
            .iter()
            .any(|c| c.name == "twist spectrum = P_A P_c"));
        assert!(r
            .checks
            .iter()
            .any(|c| c.name.starts_with("distinct frieze values")));
    }

    #[test]
    fn tight_tolerance_fails() {
        let opts = SuiteOptions {
            tol_scale: 0.0,
            trials: 3,
            seed: 1,
        };
        let r = verify_type(CartanType::new(Family::B, 3).unwrap(), &opts);
        assert!(!r.pass);
    }
}
