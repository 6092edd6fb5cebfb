use num_complex::Complex64;
use thiserror::Error;

use crate::roots::Family;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Cartan type `{0}`")]
    InvalidType(String),

    #[error("type {family:?}{rank} is outside the supported range (max rank {max})")]
    UnsupportedRank {
        family: Family,
        rank: usize,
        max: usize,
    },

    #[error("mutation direction {k} out of range for rank {n}")]
    DirectionOutOfRange { k: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("coordinate {index} is not a finite positive real ({value})")]
    NotPositive { index: usize, value: f64 },

    #[error("point is in chart {got:?}, expected {expected:?}")]
    WrongChart {
        expected: crate::dtmap::Chart,
        got: crate::dtmap::Chart,
    },

    #[error("principal part is not skew-symmetrizable")]
    NotSkewSymmetrizable,

    #[error(
        "fixed-point solver did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NonConvergence {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    #[error("coordinate {index} of the fixed point is {value}, must exceed 1")]
    NotAboveOne { index: usize, value: f64 },

    #[error("{what}: constraint residual {residual:e} exceeds tolerance")]
    Constraint { what: &'static str, residual: f64 },

    #[error("root {root} lies off the unit circle (| |z| - 1 | = {deviation:e})")]
    RootOffCircle { root: Complex64, deviation: f64 },

    #[error("root {root} is {error:e} rad away from the nearest {modulus}-th root of unity")]
    AngularMismatch {
        root: Complex64,
        error: f64,
        modulus: u32,
    },

    #[error("cross-check failed for {what}: {left:?} vs {right:?}")]
    CrossCheck {
        what: &'static str,
        left: Vec<f64>,
        right: Vec<f64>,
    },

    #[error("singular chart: continuant vanishes")]
    SingularChart,

    #[error("size {n} exceeds the supported maximum {max}")]
    UnsupportedSize { n: usize, max: usize },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
