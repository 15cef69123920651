//! Linear SVM inference as performed by a three-block FPGA classifier IP,
//! its precomputed-weight variant and a two-stage cascade, together with a
//! calibrated latency model of the accelerator and the surrounding SoC.
//!
//! The classifier evaluates `sign(sum_i alpha_i y_i (x . x_i) - b)` as
//!
//! 1. SVs summation: `z = sum_i alpha_i y_i x_i`
//! 2. distance calculation: `D = x . z`
//! 3. classification decision: `+1` iff `D - b >= th`
//!
//! in single precision with a fixed accumulation order.

pub mod cascade;
pub mod engine;
pub mod error;
pub mod harness;
pub mod io;
pub mod model;
pub mod report;
pub mod timing;

pub use cascade::{
    build_cascade, cascade_classify, evaluate_cascade, CascadeMetrics, CascadeModel, CascadeResult,
};
pub use engine::{
    accumulate_z, classify_full, classify_precomputed, decide, dot_distance, reference_classify,
    BlockTrace, ReferenceDecision,
};
pub use error::{Location, ParseError, ParseErrorKind, Result, SvmError};
pub use harness::{
    load_banks, run_cascade_soc, run_soc, BankSet, BramBank, DeviceBudget, RunOutcome, RunRecord,
};
pub use model::{
    gen_synthetic_instance, gen_synthetic_model, validate_model, Decision, Label, PrecomputedModel,
    SvmModel, TestInstance,
};
pub use timing::{
    estimate_cascade_cycles, estimate_cycles, fit_profile, speedup, CalibrationProfile,
    LatencyEstimate, Target,
};
