//! Calibrating profile coefficients against measured cycle counts.

use nalgebra::{DMatrix, DVector};

use super::{CalibrationProfile, Target, DEFAULT_CLOCK_HZ};
use crate::error::{Result, SvmError};

/// One measured `(N, F) -> cycles` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub n_sv: usize,
    pub n_features: usize,
    pub cycles: f64,
}

impl Observation {
    pub fn new(n_sv: usize, n_features: usize, cycles: f64) -> Self {
        Observation {
            n_sv,
            n_features,
            cycles,
        }
    }
}

/// Coefficients pinned before fitting; `None` leaves a coefficient free.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FixedCoefficients {
    pub c_nf: Option<f64>,
    pub c_n: Option<f64>,
    pub c_f: Option<f64>,
    pub c_0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub profile: CalibrationProfile,
    /// Largest absolute residual in cycles, before rounding.
    pub max_residual: f64,
}

fn basis(o: &Observation) -> [f64; 4] {
    let (n, f) = (o.n_sv as f64, o.n_features as f64);
    [n * f, n, f, 1.0]
}

/// Solves for the free coefficients of the affine model.
///
/// A square system is solved exactly by LU; an overdetermined one in the
/// least-squares sense by SVD. Fewer observations than free coefficients is
/// [`SvmError::UnderdeterminedFit`]; a rank-deficient design matrix (for
/// example every observation sharing one `F` while both `c_f` and `c_0` are
/// free) is [`SvmError::SingularSystem`].
pub fn fit_profile(
    target: Target,
    observations: &[Observation],
    fixed: FixedCoefficients,
    clock_hz: Option<f64>,
) -> Result<FitResult> {
    let pinned = [fixed.c_nf, fixed.c_n, fixed.c_f, fixed.c_0];
    let free: Vec<usize> = (0..4).filter(|&k| pinned[k].is_none()).collect();
    if observations.len() < free.len() {
        return Err(SvmError::UnderdeterminedFit {
            observations: observations.len(),
            free: free.len(),
        });
    }
    if observations.iter().any(|o| !o.cycles.is_finite()) {
        return Err(SvmError::InvalidProfile("non-finite observation".into()));
    }

    let m = observations.len();
    let design = DMatrix::from_fn(m, free.len(), |r, c| basis(&observations[r])[free[c]]);
    let rhs = DVector::from_fn(m, |r, _| {
        let b = basis(&observations[r]);
        observations[r].cycles
            - (0..4)
                .filter_map(|k| pinned[k].map(|v| v * b[k]))
                .sum::<f64>()
    });

    let mut coeffs = [0.0; 4];
    for k in 0..4 {
        if let Some(v) = pinned[k] {
            coeffs[k] = v;
        }
    }
    if !free.is_empty() {
        let svd = design.clone().svd(true, true);
        let sigma_max = svd.singular_values.max();
        let tol = sigma_max * f64::EPSILON * (m.max(free.len()) as f64) * 16.0;
        if svd.rank(tol) < free.len() {
            return Err(SvmError::SingularSystem);
        }
        let solution = if m == free.len() {
            design.lu().solve(&rhs).ok_or(SvmError::SingularSystem)?
        } else {
            svd.solve(&rhs, tol).map_err(|_| SvmError::SingularSystem)?
        };
        for (c, &k) in free.iter().enumerate() {
            coeffs[k] = solution[c];
        }
    }

    let profile = CalibrationProfile {
        target,
        c_nf: coeffs[0],
        c_n: coeffs[1],
        c_f: coeffs[2],
        c_0: coeffs[3],
        clock_hz: clock_hz.unwrap_or(DEFAULT_CLOCK_HZ),
    };
    profile.validate()?;
    let max_residual = observations
        .iter()
        .map(|o| (profile.raw_cycles(o.n_sv, o.n_features) - o.cycles).abs())
        .fold(0.0, f64::max);
    Ok(FitResult {
        profile,
        max_residual,
    })
}
