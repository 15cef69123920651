//! Affine cycle-count model for the accelerator targets.
//!
//! Every target predicts `cycles = c_nf*N*F + c_n*N + c_f*F + c_0` for a model
//! with `N` support vectors and `F` features. The default profiles are
//! calibrated to the published Zynq-7000 measurements at 250 MHz:
//!
//! | target               | c_nf     | c_n       | c_f | c_0                |
//! |----------------------|----------|-----------|-----|--------------------|
//! | `PipelinedPl`        | 1        | 177/187   | 0   | 1218 - 61*177/187  |
//! | `SequentialPl`       | 10       | 0         | 0   | 334                |
//! | `EmbeddedProcessor`  | 232660/5049 | 0      | 0   | 77340 - 1647*c_nf  |
//! | `SimplifiedStage`    | 0        | 0         | 1   | 198                |
//! | `EmbeddedCascade`    | 0        | 0         | 40  | 45                 |

mod config;
mod fit;
pub mod reference;

pub use fit::{fit_profile, FitResult, FixedCoefficients, Observation};

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SvmError};

pub const DEFAULT_CLOCK_HZ: f64 = 2.5e8;

/// Execution target a profile describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    /// Full IP in programmable logic with loop pipelining (II = 1).
    PipelinedPl,
    /// Full IP in programmable logic without pipelining.
    SequentialPl,
    /// Software classification on the embedded ARM core.
    EmbeddedProcessor,
    /// One simplified (precomputed-z) IP stage in programmable logic.
    SimplifiedStage,
    /// One cascade stage evaluated in software on the ARM core.
    EmbeddedCascade,
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::PipelinedPl,
        Target::SequentialPl,
        Target::EmbeddedProcessor,
        Target::SimplifiedStage,
        Target::EmbeddedCascade,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::PipelinedPl => "pipelined_pl",
            Target::SequentialPl => "sequential_pl",
            Target::EmbeddedProcessor => "embedded_processor",
            Target::SimplifiedStage => "simplified_stage",
            Target::EmbeddedCascade => "embedded_cascade",
        }
    }

    /// Whether the target costs a cascade stage rather than a full model.
    pub fn is_stage(self) -> bool {
        matches!(self, Target::SimplifiedStage | Target::EmbeddedCascade)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = SvmError;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| SvmError::InvalidProfile(format!("unknown target `{s}`")))
    }
}

/// Coefficients of the affine latency model for one target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationProfile {
    pub target: Target,
    pub c_nf: f64,
    pub c_n: f64,
    pub c_f: f64,
    pub c_0: f64,
    pub clock_hz: f64,
}

impl CalibrationProfile {
    pub fn default_for(target: Target) -> Self {
        let (c_nf, c_n, c_f, c_0) = match target {
            Target::PipelinedPl => {
                let c_n = 177.0 / 187.0;
                (1.0, c_n, 0.0, 1218.0 - 61.0 * c_n)
            }
            Target::SequentialPl => (10.0, 0.0, 0.0, 334.0),
            Target::EmbeddedProcessor => {
                let c_nf = 232_660.0 / 5049.0;
                (c_nf, 0.0, 0.0, 77_340.0 - 1647.0 * c_nf)
            }
            Target::SimplifiedStage => (0.0, 0.0, 1.0, 198.0),
            Target::EmbeddedCascade => (0.0, 0.0, 40.0, 45.0),
        };
        CalibrationProfile {
            target,
            c_nf,
            c_n,
            c_f,
            c_0,
            clock_hz: DEFAULT_CLOCK_HZ,
        }
    }

    /// Checks finiteness, a positive clock, and that predictions stay positive
    /// for every `N, F >= 1`.
    ///
    /// With `N = 1 + p` and `F = 1 + q` the prediction is
    /// `g(1,1) + c_nf*p*q + (c_nf + c_n)*p + (c_nf + c_f)*q`, so positivity on
    /// the whole quadrant is equivalent to `g(1,1) > 0`, `c_nf >= 0`,
    /// `c_nf + c_n >= 0` and `c_nf + c_f >= 0`.
    pub fn validate(&self) -> Result<()> {
        let coeffs = [self.c_nf, self.c_n, self.c_f, self.c_0, self.clock_hz];
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(SvmError::InvalidProfile("non-finite coefficient".into()));
        }
        if self.clock_hz <= 0.0 {
            return Err(SvmError::InvalidProfile("clock_hz must be positive".into()));
        }
        let at_origin = self.c_nf + self.c_n + self.c_f + self.c_0;
        if !(at_origin > 0.0
            && self.c_nf >= 0.0
            && self.c_nf + self.c_n >= 0.0
            && self.c_nf + self.c_f >= 0.0)
        {
            return Err(SvmError::InvalidProfile(
                "coefficients predict non-positive cycles for some N, F >= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn raw_cycles(&self, n_sv: usize, n_features: usize) -> f64 {
        let (n, f) = (n_sv as f64, n_features as f64);
        self.c_nf * n * f + self.c_n * n + self.c_f * f + self.c_0
    }
}

/// A cycle count and its wall time at the profile clock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyEstimate {
    pub cycles: u64,
    pub seconds: f64,
}

impl LatencyEstimate {
    pub fn from_cycles(cycles: u64, clock_hz: f64) -> Self {
        LatencyEstimate {
            cycles,
            seconds: cycles as f64 / clock_hz,
        }
    }

    pub fn micros(&self) -> f64 {
        self.seconds * 1e6
    }
}

fn round_cycles(raw: f64) -> u64 {
    raw.max(0.0).round() as u64
}

/// Predicted latency of one classification for an `n_sv x n_features` model.
pub fn estimate_cycles(
    profile: &CalibrationProfile,
    n_sv: usize,
    n_features: usize,
) -> LatencyEstimate {
    LatencyEstimate::from_cycles(
        round_cycles(profile.raw_cycles(n_sv, n_features)),
        profile.clock_hz,
    )
}

/// Latency of a cascade run that executed its first `executed` stages, each
/// costing `c_f*F + c_0` cycles.
pub fn estimate_cascade_cycles(
    profile: &CalibrationProfile,
    stage_features: &[usize],
    executed: usize,
) -> Result<LatencyEstimate> {
    if executed > stage_features.len() {
        return Err(SvmError::mismatch(
            "executed cascade stages",
            stage_features.len(),
            executed,
        ));
    }
    let raw: f64 = stage_features[..executed]
        .iter()
        .map(|&f| profile.c_f * f as f64 + profile.c_0)
        .sum();
    Ok(LatencyEstimate::from_cycles(
        round_cycles(raw),
        profile.clock_hz,
    ))
}

/// Ratio of baseline time to accelerated time.
pub fn speedup(baseline: &LatencyEstimate, accelerated: &LatencyEstimate) -> f64 {
    baseline.seconds / accelerated.seconds
}
