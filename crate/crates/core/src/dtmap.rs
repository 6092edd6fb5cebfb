//! The DT transformations on positive points, realized by the frieze
//! recurrences, together with the ensemble map and periodicity checks.
//!
//! Both maps send the seed row `m = 0` of a frieze to the row `m = 1`:
//!
//! ```text
//! x_{i,m} x_{i,m+1} = 1 + prod_{j>i} x_{j,m}^{-a_ji} prod_{j<i} x_{j,m+1}^{-a_ji}
//! Y_{i,m} Y_{i,m+1} =     prod_{j>i} (1+Y_{j,m})^{-a_ji} prod_{j<i} (1+Y_{j,m+1})^{-a_ji}
//! ```

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instrument::{hit, Op};
use crate::roots::CartanSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    /// Cluster x-chart on the A-variety.
    XChartA,
    /// Global Y-variables on the X-variety.
    YChartX,
    /// `(q, p)` coordinates of the type-A tridiagonal model.
    QPChartBruhat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivePoint {
    chart: Chart,
    coords: Vec<f64>,
}

impl PositivePoint {
    pub fn new(chart: Chart, coords: Vec<f64>) -> Result<Self> {
        for (index, &value) in coords.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NotPositive { index, value });
            }
        }
        Ok(Self { chart, coords })
    }

    pub fn x(coords: Vec<f64>) -> Result<Self> {
        Self::new(Chart::XChartA, coords)
    }

    pub fn y(coords: Vec<f64>) -> Result<Self> {
        Self::new(Chart::YChartX, coords)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    fn expect(&self, chart: Chart, dim: usize) -> Result<()> {
        if self.chart != chart {
            return Err(Error::WrongChart {
                expected: chart,
                got: self.chart,
            });
        }
        if self.coords.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: self.coords.len(),
            });
        }
        Ok(())
    }
}

/// `prod_{j>i} prev[j]^{-a_ji} prod_{j<i} next[j]^{-a_ji}`, with `f` applied
/// to every base.
#[inline]
fn coxeter_monomial(
    spec: &CartanSpec,
    i: usize,
    prev: &[f64],
    next: &[f64],
    f: impl Fn(f64) -> f64,
) -> f64 {
    let n = spec.rank();
    let mut acc = 1.0;
    for j in 0..n {
        if j == i {
            continue;
        }
        let e = -spec.a(j, i);
        if e == 0 {
            continue;
        }
        let base = if j > i { prev[j] } else { next[j] };
        acc *= f(base).powi(e as i32);
    }
    acc
}

/// One forward step of the x-frieze.
pub(crate) fn x_step(spec: &CartanSpec, x: &[f64]) -> Vec<f64> {
    let n = spec.rank();
    let mut next = vec![0.0; n];
    for i in 0..n {
        next[i] = (1.0 + coxeter_monomial(spec, i, x, &next, |v| v)) / x[i];
    }
    next
}

/// One backward step of the x-frieze: recovers row `m` from row `m + 1`.
pub(crate) fn x_step_back(spec: &CartanSpec, x_next: &[f64]) -> Vec<f64> {
    let n = spec.rank();
    let mut prev = vec![0.0; n];
    for i in (0..n).rev() {
        prev[i] = (1.0 + coxeter_monomial(spec, i, &prev, x_next, |v| v)) / x_next[i];
    }
    prev
}

pub(crate) fn y_step(spec: &CartanSpec, y: &[f64]) -> Vec<f64> {
    let n = spec.rank();
    let mut next = vec![0.0; n];
    for i in 0..n {
        next[i] = coxeter_monomial(spec, i, y, &next, |v| 1.0 + v) / y[i];
    }
    next
}

pub(crate) fn y_step_back(spec: &CartanSpec, y_next: &[f64]) -> Vec<f64> {
    let n = spec.rank();
    let mut prev = vec![0.0; n];
    for i in (0..n).rev() {
        prev[i] = coxeter_monomial(spec, i, &prev, y_next, |v| 1.0 + v) / y_next[i];
    }
    prev
}

/// `DT_A` on the x-chart: `(x_1..x_n) -> (x_{n+1}..x_{2n})`.
pub fn dt_a(spec: &CartanSpec, pt: &PositivePoint) -> Result<PositivePoint> {
    hit(Op::DtA);
    pt.expect(Chart::XChartA, spec.rank())?;
    PositivePoint::x(x_step(spec, &pt.coords))
}

/// `DT_X` on the global Y-chart.
pub fn dt_x(spec: &CartanSpec, pt: &PositivePoint) -> Result<PositivePoint> {
    hit(Op::DtX);
    pt.expect(Chart::YChartX, spec.rank())?;
    PositivePoint::y(y_step(spec, &pt.coords))
}

/// Ensemble map `p` from the x-chart to the Y-chart. Evaluates both
/// `x_i x_{n+i} - 1` and the monomial form and requires them to agree.
pub fn ensemble_p(spec: &CartanSpec, pt: &PositivePoint) -> Result<PositivePoint> {
    hit(Op::EnsembleP);
    pt.expect(Chart::XChartA, spec.rank())?;
    let x = &pt.coords;
    let next = x_step(spec, x);
    let n = spec.rank();
    let mut y = Vec::with_capacity(n);
    let mut mono = Vec::with_capacity(n);
    for i in 0..n {
        y.push(x[i] * next[i] - 1.0);
        mono.push(coxeter_monomial(spec, i, x, &next, |v| v));
    }
    let worst = y
        .iter()
        .zip(&mono)
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max);
    if worst > 1e-10 {
        return Err(Error::CrossCheck {
            what: "ensemble map",
            left: y,
            right: mono,
        });
    }
    // The monomial form is the subtraction-free one; it is the value we keep.
    PositivePoint::y(mono)
}

/// Parses a comma-separated list of finite positive reals.
pub fn parse_point_list(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (index, part) in s.split(',').enumerate() {
        let part = part.trim();
        let value: f64 = part
            .parse()
            .map_err(|_| Error::Parse(format!("entry {} is not a number: {part:?}", index + 1)))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NotPositive { index, value });
        }
        out.push(value);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FriezeKind {
    X,
    Y,
}

/// Rows `m_start..=m_end` of a frieze; `rows[k][i]` is the value at
/// `(i, m_start + k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FriezeTable {
    pub kind: FriezeKind,
    pub m_start: i64,
    pub rows: Vec<Vec<f64>>,
}

impl FriezeTable {
    pub fn m_end(&self) -> i64 {
        self.m_start + self.rows.len() as i64 - 1
    }

    pub fn get(&self, i: usize, m: i64) -> Option<f64> {
        let k = usize::try_from(m - self.m_start).ok()?;
        self.rows.get(k).and_then(|r| r.get(i)).copied()
    }

    pub fn row(&self, m: i64) -> Option<&[f64]> {
        let k = usize::try_from(m - self.m_start).ok()?;
        self.rows.get(k).map(Vec::as_slice)
    }

    /// Largest relative residual of the defining recurrence over the window.
    pub fn recurrence_residual(&self, spec: &CartanSpec) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.rows.windows(2) {
            let (prev, next) = (&w[0], &w[1]);
            for i in 0..spec.rank() {
                let lhs = prev[i] * next[i];
                let rhs = match self.kind {
                    FriezeKind::X => 1.0 + coxeter_monomial(spec, i, prev, next, |v| v),
                    FriezeKind::Y => coxeter_monomial(spec, i, prev, next, |v| 1.0 + v),
                };
                worst = worst.max(((lhs - rhs) / rhs).abs());
            }
        }
        worst
    }

    /// Largest relative difference between rows `m` and `m + shift` over the
    /// window, or `None` if the window is narrower than `shift`.
    pub fn translation_residual(&self, shift: usize) -> Option<f64> {
        if self.rows.len() <= shift {
            return None;
        }
        let mut worst: f64 = 0.0;
        for k in 0..self.rows.len() - shift {
            worst = worst.max(max_rel_diff(&self.rows[k], &self.rows[k + shift]));
        }
        Some(worst)
    }

    pub fn min_entry(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Number of values in rows `m_start..m_start + rows` that differ pairwise
    /// by more than `threshold` (relative).
    pub fn distinct_values(&self, rows: usize, threshold: f64) -> usize {
        let mut vals: Vec<f64> = self.rows.iter().take(rows).flatten().copied().collect();
        vals.sort_by(f64::total_cmp);
        let mut count = 0;
        let mut last: Option<f64> = None;
        for v in vals {
            match last {
                Some(l) if (v - l).abs() <= threshold * l.abs().max(v.abs()) => {}
                _ => {
                    count += 1;
                    last = Some(v);
                }
            }
        }
        count
    }
}

/// Largest coordinatewise relative difference.
pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| ((x - y) / x.abs().max(y.abs())).abs())
        .fold(0.0, f64::max)
}

type Step = fn(&CartanSpec, &[f64]) -> Vec<f64>;

/// Fills a frieze window from the seed row at `m = 0`, running the
/// recurrence forward for `m > 0` and backward for `m < 0`.
pub fn frieze(
    spec: &CartanSpec,
    kind: FriezeKind,
    seed: &[f64],
    m_range: RangeInclusive<i64>,
) -> Result<FriezeTable> {
    hit(Op::Frieze);
    let n = spec.rank();
    if seed.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: seed.len(),
        });
    }
    for (index, &value) in seed.iter().enumerate() {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NotPositive { index, value });
        }
    }
    let (lo, hi) = (*m_range.start(), *m_range.end());
    if lo > hi {
        return Err(Error::Internal(format!("empty frieze window {lo}..={hi}")));
    }
    let (fwd, back): (Step, Step) = match kind {
        FriezeKind::X => (x_step, x_step_back),
        FriezeKind::Y => (y_step, y_step_back),
    };

    let mut rows: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
    rows.insert(0, seed.to_vec());
    let mut cur = seed.to_vec();
    for m in 1..=hi {
        cur = fwd(spec, &cur);
        rows.insert(m, cur.clone());
    }
    let mut cur = seed.to_vec();
    for m in (lo..0).rev() {
        cur = back(spec, &cur);
        rows.insert(m, cur.clone());
    }
    let rows: Vec<Vec<f64>> = rows.range(lo..=hi).map(|(_, r)| r.clone()).collect();
    for (k, r) in rows.iter().enumerate() {
        for (index, &value) in r.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Internal(format!(
                    "non-positive frieze entry {value} at (i={index}, m={})",
                    lo + k as i64
                )));
            }
        }
    }
    Ok(FriezeTable {
        kind,
        m_start: lo,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DtMap {
    A,
    X,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityReport {
    pub map: DtMap,
    pub trials: usize,
    pub rng_seed: u64,
    pub period: u32,
    pub max_deviation: f64,
    /// `(h + 2) / 2` and its deviation, checked only when `w_0 = -1`.
    pub half: Option<(u32, f64)>,
}

/// Coordinates log-uniform on `[1/e, e]`.
pub fn random_positive_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(-1.0..=1.0f64).exp())
        .collect()
}

/// Independent RNG stream for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn check_periodicity(
    spec: &CartanSpec,
    map: DtMap,
    trials: usize,
    rng_seed: u64,
) -> PeriodicityReport {
    hit(Op::CheckPeriodicity);
    let n = spec.rank();
    let period = spec.coxeter_number + 2;
    let step: fn(&CartanSpec, &[f64]) -> Vec<f64> = match map {
        DtMap::A => x_step,
        DtMap::X => y_step,
    };
    let mut worst: f64 = 0.0;
    let mut worst_half: f64 = 0.0;
    for t in 0..trials.max(1) {
        let mut rng = trial_rng(rng_seed, t as u64);
        let start = random_positive_point(&mut rng, n);
        let mut cur = start.clone();
        for k in 1..=period {
            cur = step(spec, &cur);
            if spec.minus_one && k == period / 2 {
                worst_half = worst_half.max(max_rel_diff(&start, &cur));
            }
        }
        worst = worst.max(max_rel_diff(&start, &cur));
    }
    PeriodicityReport {
        map,
        trials: trials.max(1),
        rng_seed,
        period,
        max_deviation: worst,
        half: spec.minus_one.then_some((period / 2, worst_half)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperunitaryReport {
    pub min_entry: f64,
    pub margin: f64,
    pub pass: bool,
}

/// Every x-frieze value at the fixed point `a` over `m in [0, h+2]` exceeds
/// `1 + margin`.
pub fn superunitary_check(spec: &CartanSpec, a: &[f64], margin: f64) -> Result<SuperunitaryReport> {
    hit(Op::SuperunitaryCheck);
    let table = frieze(spec, FriezeKind::X, a, 0..=(spec.coxeter_number as i64 + 2))?;
    let min_entry = table.min_entry();
    Ok(SuperunitaryReport {
        min_entry,
        margin,
        pass: min_entry - 1.0 >= margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::spec;

    #[test]
    fn dt_a_examples() {
        let a2 = spec("A2").unwrap();
        let mut p = PositivePoint::x(vec![1.0, 1.0]).unwrap();
        let orbit = [[2.0, 3.0], [2.0, 1.0], [1.0, 2.0], [3.0, 2.0], [1.0, 1.0]];
        for expected in orbit {
            p = dt_a(&a2, &p).unwrap();
            assert_eq!(p.coords(), &expected);
        }
        let a1 = spec("A1").unwrap();
        let p = dt_a(&a1, &PositivePoint::x(vec![0.5]).unwrap()).unwrap();
        assert_eq!(p.coords(), &[4.0]);
    }

    #[test]
    fn dt_x_examples() {
        let a1 = spec("A1").unwrap();
        let p = dt_x(&a1, &PositivePoint::y(vec![0.25]).unwrap()).unwrap();
        assert_eq!(p.coords(), &[4.0]);
        let a2 = spec("A2").unwrap();
        let p = dt_x(&a2, &PositivePoint::y(vec![1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(p.coords(), &[2.0, 3.0]);
    }

    #[test]
    fn chart_and_dimension_errors() {
        let a2 = spec("A2").unwrap();
        let y = PositivePoint::y(vec![1.0, 1.0]).unwrap();
        assert!(matches!(dt_a(&a2, &y), Err(Error::WrongChart { .. })));
        let x = PositivePoint::x(vec![1.0]).unwrap();
        assert!(matches!(dt_a(&a2, &x), Err(Error::Dimension { .. })));
        assert!(PositivePoint::x(vec![1.0, 0.0]).is_err());
        assert!(PositivePoint::x(vec![f64::NAN]).is_err());
    }

    #[test]
    fn ensemble_examples() {
        let a2 = spec("A2").unwrap();
        let y = ensemble_p(&a2, &PositivePoint::x(vec![1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(y.coords(), &[1.0, 2.0]);
        let a1 = spec("A1").unwrap();
        let y = ensemble_p(&a1, &PositivePoint::x(vec![2f64.sqrt()]).unwrap()).unwrap();
        assert!((y.coords()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn point_lists() {
        assert_eq!(
            parse_point_list("1, 2.5,3e-1").unwrap(),
            vec![1.0, 2.5, 0.3]
        );
        assert!(parse_point_list("").is_err());
        assert!(parse_point_list("1,,2").is_err());
        assert!(matches!(
            parse_point_list("1,-2"),
            Err(Error::NotPositive { index: 1, .. })
        ));
        assert!(parse_point_list("inf").is_err());
        assert!(parse_point_list("NaN").is_err());
    }

    #[test]
    fn frieze_window_backward_matches_forward() {
        let a2 = spec("A2").unwrap();
        let t = frieze(&a2, FriezeKind::X, &[1.0, 1.0], -5..=5).unwrap();
        assert_eq!(t.row(0).unwrap(), &[1.0, 1.0]);
        assert_eq!(t.row(1).unwrap(), &[2.0, 3.0]);
        for m in -5..=0 {
            let a = t.row(m).unwrap();
            let b = t.row(m + 5).unwrap();
            assert!(max_rel_diff(a, b) < 1e-12);
        }
        assert!(t.recurrence_residual(&a2) < 1e-12);
    }

    #[test]
    fn a2_distinct_values() {
        let a2 = spec("A2").unwrap();
        let t = frieze(&a2, FriezeKind::X, &[0.83, 1.57], 0..=4).unwrap();
        assert_eq!(t.distinct_values(5, 1e-6), 5);
    }

    #[test]
    fn periodicity_small() {
        let a2 = spec("A2").unwrap();
        let r = check_periodicity(&a2, DtMap::A, 10, 7);
        assert_eq!(r.period, 5);
        assert!(r.max_deviation < 1e-9);
        assert!(r.half.is_none());
        let g2 = spec("G2").unwrap();
        let r = check_periodicity(&g2, DtMap::X, 10, 7);
        let (half, dev) = r.half.unwrap();
        assert_eq!(half, 4);
        assert!(dev < 1e-9);
        let a1 = spec("A1").unwrap();
        let r = check_periodicity(&a1, DtMap::A, 3, 1);
        assert_eq!(r.half.unwrap().0, 2);
    }

    #[test]
    fn superunitary_a1() {
        let a1 = spec("A1").unwrap();
        let r = superunitary_check(&a1, &[2f64.sqrt()], 1e-6).unwrap();
        assert!(r.pass);
        assert!((r.min_entry - 2f64.sqrt()).abs() < 1e-14);
    }
}
