//! Exact cosmetic-surgery obstructions for knots, computed from UV=0 knot
//! Floer complexes.
//!
//! The flow is: parse a [`UVZeroComplex`], [`reduce`] it, [`decompose`] it
//! into one staircase plus acyclic summands, read off [`KnotInvariants`] and
//! the [`CurveProfile`], then let [`check_knot`] run the gates and, for
//! surviving slope pairs, compare graded surgery groups with
//! [`graded_surgery`].

pub mod cfk;
pub mod curve;
pub mod gf2;
pub mod lens;
pub mod pipeline;
pub mod reduction;
pub mod render;
pub mod report;
pub mod surgery;

pub use cfk::{parse_complex, validate, Arrow, CfkError, Generator, Kind, UVZeroComplex, Violation};
pub use curve::{candidate_q, curve_profile, hook_homology_rank, CurveProfile, ProfileError, Rational};
pub use lens::{d_invariant, d_invariants, d_sum, first_q_sum, hj_expansion, DSum, LensError};
pub use pipeline::synth::{synthesize_box_complex, synthesize_unobstructed, SynthError};
pub use pipeline::{
    analyze, batch_funnel, check_knot, Analysis, BatchError, Funnel, Gate, GateName, PipelineError, Verdict,
    VerdictKind,
};
pub use reduction::{decompose, knot_invariants, reduce, Decomposition, KnotInvariants, ReductionError, Summand, Variant};
pub use render::{render_curves, DiagramSpec, Overlay, RenderError};
pub use surgery::{
    graded_surgery, slope_one_balance, spin_c_crossings, total_rank, triangle_count, GradedSurgeryComparison,
    SlopePair, SurgeryError,
};

/// Process exit status for an error: 1 for bad usage or unsupported input,
/// 2 for a corrupt complex, 3 for a broken internal invariant.
pub trait ExitCode {
    fn exit_code(&self) -> i32;
}

impl ExitCode for PipelineError {
    fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Invalid(_) | PipelineError::Decompose(_) => 2,
            PipelineError::Internal(_) => 3,
        }
    }
}

impl ExitCode for ProfileError {
    fn exit_code(&self) -> i32 {
        match self {
            ProfileError::EpsilonNonzero | ProfileError::GenusTooSmall(_) | ProfileError::ZeroDenominator => 1,
            ProfileError::HookRank { .. } | ProfileError::Asymmetric { .. } => 3,
        }
    }
}

impl ExitCode for SurgeryError {
    fn exit_code(&self) -> i32 {
        1
    }
}

impl ExitCode for CfkError {
    fn exit_code(&self) -> i32 {
        match self {
            CfkError::Malformed(_) => 1,
            _ => 2,
        }
    }
}

impl ExitCode for LensError {
    fn exit_code(&self) -> i32 {
        1
    }
}

impl ExitCode for RenderError {
    fn exit_code(&self) -> i32 {
        1
    }
}
