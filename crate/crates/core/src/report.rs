//! Verification reports: named checks with residuals and tolerances, and
//! their JSON and CSV renderings.

use std::io::Write;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A single named check. For bound checks (`Check::above`) `residual` holds
/// the measured value and `tolerance` the strict lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing)]
    pub seconds: f64,
}

impl Check {
    /// Passes iff `residual <= tolerance`; non-finite residuals fail and are
    /// recorded as `f64::MAX`.
    pub fn within(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let ok = residual.is_finite() && residual <= tolerance;
        Self {
            name: name.into(),
            residual: if residual.is_finite() {
                residual
            } else {
                f64::MAX
            },
            tolerance,
            pass: ok,
            seconds: 0.0,
        }
    }

    /// Passes iff `value > bound`.
    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        let ok = value.is_finite() && value > bound;
        Self {
            name: name.into(),
            residual: if value.is_finite() { value } else { f64::MAX },
            tolerance: bound,
            pass: ok,
            seconds: 0.0,
        }
    }

    /// Exact predicate; residual is 0 on success and 1 on failure.
    pub fn exact(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            residual: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: ok,
            seconds: 0.0,
        }
    }

    /// A check that could not be evaluated because a computation failed.
    pub fn failed(name: impl Into<String>, err: &crate::Error) -> Self {
        let mut c = Self::exact(format!("{}: {err}", name.into()), false);
        c.residual = f64::MAX;
        c
    }

    pub fn timed(mut self, elapsed: Duration) -> Self {
        self.seconds = elapsed.as_secs_f64();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub spec: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub rng_seed: u64,
    pub tool_version: String,
}

impl Report {
    pub fn new(command: impl Into<String>, spec: impl Into<String>, rng_seed: u64) -> Self {
        Self {
            command: command.into(),
            spec: spec.into(),
            pass: true,
            checks: Vec::new(),
            rng_seed,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    /// Prefixes every check name with `prefix/` and appends them.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.push(c);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Rows `type,check,residual,tolerance,pass`. Check names of the form
    /// `T/rest` are split so the type column carries `T`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["type", "check", "residual", "tolerance", "pass"])?;
        for c in &self.checks {
            let (ty, name) = match c.name.split_once('/') {
                Some((t, rest)) if self.spec == "all" => (t.to_string(), rest.to_string()),
                _ => (self.spec.clone(), c.name.clone()),
            };
            out.write_record([
                ty,
                name,
                sig12(c.residual),
                sig12(c.tolerance),
                c.pass.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn render_table(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let mut s = format!(
            "{} {}  seed={}  version={}\n",
            self.command, self.spec, self.rng_seed, self.tool_version
        );
        s.push_str(&format!(
            "{:<width$}  {:>18}  {:>18}  {}\n",
            "check", "residual", "tolerance", "result"
        ));
        for c in &self.checks {
            s.push_str(&format!(
                "{:<width$}  {:>18}  {:>18}  {}\n",
                c.name,
                sig12(c.residual),
                sig12(c.tolerance),
                if c.pass { "pass" } else { "FAIL" }
            ));
        }
        s.push_str(if self.pass {
            "overall: pass\n"
        } else {
            "overall: FAIL\n"
        });
        s
    }
}

/// Twelve significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_conjunction() {
        let mut r = Report::new("verify", "A2", 1);
        r.push(Check::within("a", 1e-12, 1e-10));
        assert!(r.pass);
        r.push(Check::within("b", f64::NAN, 1e-10));
        assert!(!r.pass);
        assert_eq!(r.checks[1].residual, f64::MAX);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn json_roundtrip_drops_timings() {
        let mut r = Report::new("verify", "G2", 7);
        r.push(Check::above("lefschetz", 2.0, 0.1).timed(Duration::from_millis(3)));
        let back = Report::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back.checks[0].seconds, 0.0);
        r.checks[0].seconds = 0.0;
        assert_eq!(back, r);
    }

    #[test]
    fn csv_columns() {
        let mut r = Report::new("verify", "all", 0);
        r.push(Check::exact("A1/reddening", true));
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "type,check,residual,tolerance,pass\nA1,reddening,0,0,true\n"
        );
    }

    #[test]
    fn sig12_format() {
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(2f64.sqrt() * 100.0), "141.421356237");
        assert_eq!(sig12(1.5e-12), "1.50000000000e-12");
    }
}
