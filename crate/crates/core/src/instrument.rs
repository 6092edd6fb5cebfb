//! Per-operation call counters.
//!
//! Every public operation bumps its counter on entry, so a harness can check
//! which operations a verification run actually exercised.

use std::sync::atomic::{AtomicU64, Ordering};

macro_rules! ops {
    ($($name:ident => $label:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Op { $($name),* }

        impl Op {
            pub const ALL: &'static [Op] = &[$(Op::$name),*];

            pub fn label(self) -> &'static str {
                match self { $(Op::$name => $label),* }
            }
        }
    };
}

ops! {
    CartanMatrix => "cartan_matrix",
    EnumeratePositiveRoots => "enumerate_positive_roots",
    KostantCounts => "kostant_counts",
    CountFormulas => "count_formulas",
    MutateMatrix => "mutate_matrix",
    MutateX => "mutate_x",
    MutateY => "mutate_y",
    BuildBA => "build_BA",
    VerifyReddening => "verify_reddening",
    DtA => "dt_A",
    DtX => "dt_X",
    EnsembleP => "ensemble_p",
    Frieze => "frieze",
    CheckPeriodicity => "check_periodicity",
    SuperunitaryCheck => "superunitary_check",
    SolveA => "solve_a",
    ClosedFormA => "closed_form_a",
    BFromA => "b_from_a",
    KappaFrom => "kappa_from",
    UFromKappa => "u_from_kappa",
    VinbergGate => "vinberg_gate",
    BuildLU => "build_LU",
    MMatrix => "M_matrix",
    CharPoly => "char_poly",
    DPoly => "D_poly",
    Exponents => "exponents",
    VerifyTheoremB => "verify_theorem_B",
    JacobianCheck => "jacobian_check",
    HeightIdentity => "height_identity",
    CoxeterSpectrum => "coxeter_spectrum",
    Continuants => "continuants",
    TwistQ => "twist_Q",
    TwistFull => "twist_full",
    VietaFixedCandidates => "vieta_fixed_candidates",
    TnnCheck => "tnn_check",
    TwistSpectrum => "twist_spectrum",
    PeriodCheckFull => "period_check_full",
}

static COUNTERS: [AtomicU64; 64] = [const { AtomicU64::new(0) }; 64];

#[inline]
pub(crate) fn hit(op: Op) {
    COUNTERS[op as usize].fetch_add(1, Ordering::Relaxed);
}

pub fn count(op: Op) -> u64 {
    COUNTERS[op as usize].load(Ordering::Relaxed)
}

/// Snapshot of all counters, in `Op::ALL` order.
pub fn snapshot() -> Vec<(Op, u64)> {
    Op::ALL.iter().map(|&op| (op, count(op))).collect()
}
