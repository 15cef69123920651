//! Model, instance and decision types shared by every stage of the pipeline.
//!
//! All numeric storage is `f32`, matching the single-precision datapath of the
//! accelerator. Only the product `alpha_i * y_i` is kept per support vector.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SvmError};

/// Output class of the binary classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Melanoma,
    Benign,
}

impl Label {
    pub fn sign(self) -> i8 {
        match self {
            Label::Melanoma => 1,
            Label::Benign => -1,
        }
    }

    pub fn from_sign(sign: i8) -> Option<Self> {
        match sign {
            1 => Some(Label::Melanoma),
            -1 => Some(Label::Benign),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::Melanoma => "melanoma",
            Label::Benign => "benign",
        }
    }

    /// The thresholded sign rule: `+1` iff `margin >= threshold`.
    pub fn from_margin(margin: f32, threshold: f32) -> Self {
        if margin >= threshold {
            Label::Melanoma
        } else {
            Label::Benign
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Melanoma => "+1",
            Label::Benign => "-1",
        })
    }
}

/// Result of classifying one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub label: Label,
    /// Decision distance `D = x . z`.
    pub distance: f32,
    /// `D - b`, compared against the threshold.
    pub margin: f32,
}

/// A trained linear SVM as consumed by the full three-block IP.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub num_sv: usize,
    pub num_features: usize,
    /// Row-major `num_sv x num_features` matrix; row `i` is support vector `i`.
    pub support_vectors: Vec<f32>,
    pub alpha_y: Vec<f32>,
    pub bias: f32,
    pub threshold: f32,
}

impl SvmModel {
    /// Builds a model from rows and validates it.
    pub fn from_rows(
        rows: &[Vec<f32>],
        alpha_y: Vec<f32>,
        bias: f32,
        threshold: f32,
    ) -> Result<Self> {
        let num_features = rows.first().map_or(0, Vec::len);
        if let Some(row) = rows.iter().find(|r| r.len() != num_features) {
            return Err(SvmError::mismatch(
                "support vector row",
                num_features,
                row.len(),
            ));
        }
        let model = SvmModel {
            num_sv: rows.len(),
            num_features,
            support_vectors: rows.concat(),
            alpha_y,
            bias,
            threshold,
        };
        validate_model(&model)?;
        Ok(model)
    }

    pub fn row(&self, i: usize) -> &[f32] {
        let f = self.num_features;
        &self.support_vectors[i * f..(i + 1) * f]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f32]> {
        self.support_vectors.chunks_exact(self.num_features.max(1))
    }

    /// Bitwise equality of every stored value (distinguishes `-0.0` from `0.0`).
    pub fn bit_eq(&self, other: &SvmModel) -> bool {
        self.num_sv == other.num_sv
            && self.num_features == other.num_features
            && self.bias.to_bits() == other.bias.to_bits()
            && self.threshold.to_bits() == other.threshold.to_bits()
            && bits_eq(&self.support_vectors, &other.support_vectors)
            && bits_eq(&self.alpha_y, &other.alpha_y)
    }
}

pub(crate) fn bits_eq(a: &[f32], b: &[f32]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

/// Checks every [`SvmModel`] invariant.
pub fn validate_model(model: &SvmModel) -> Result<()> {
    if model.num_sv == 0 {
        return Err(SvmError::EmptyModel("no support vectors"));
    }
    if model.num_features == 0 {
        return Err(SvmError::EmptyModel("no features"));
    }
    let cells = model
        .num_sv
        .checked_mul(model.num_features)
        .ok_or(SvmError::mismatch(
            "support vector matrix",
            usize::MAX,
            model.support_vectors.len(),
        ))?;
    if model.support_vectors.len() != cells {
        return Err(SvmError::mismatch(
            "support vector matrix",
            cells,
            model.support_vectors.len(),
        ));
    }
    if model.alpha_y.len() != model.num_sv {
        return Err(SvmError::mismatch(
            "alpha_y",
            model.num_sv,
            model.alpha_y.len(),
        ));
    }
    if let Some(k) = model.support_vectors.iter().position(|v| !v.is_finite()) {
        let f = model.num_features;
        return Err(SvmError::non_finite("support vectors", vec![k / f, k % f]));
    }
    if let Some(i) = model.alpha_y.iter().position(|v| !v.is_finite()) {
        return Err(SvmError::non_finite("alpha_y", vec![i]));
    }
    if !model.bias.is_finite() {
        return Err(SvmError::non_finite("bias", vec![]));
    }
    if !model.threshold.is_finite() {
        return Err(SvmError::non_finite("threshold", vec![]));
    }
    Ok(())
}

/// Weights of the simplified IP: the accumulated vector `z` is stored instead
/// of the support vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecomputedModel {
    z: Vec<f32>,
    bias: f32,
    threshold: f32,
}

impl PrecomputedModel {
    pub fn new(z: Vec<f32>, bias: f32, threshold: f32) -> Result<Self> {
        if z.is_empty() {
            return Err(SvmError::EmptyModel("empty z vector"));
        }
        if let Some(i) = z.iter().position(|v| !v.is_finite()) {
            return Err(SvmError::non_finite("z", vec![i]));
        }
        if !bias.is_finite() {
            return Err(SvmError::non_finite("bias", vec![]));
        }
        if !threshold.is_finite() {
            return Err(SvmError::non_finite("threshold", vec![]));
        }
        Ok(Self { z, bias, threshold })
    }

    pub fn z(&self) -> &[f32] {
        &self.z
    }

    pub fn bias(&self) -> f32 {
        self.bias
    }

    pub fn threshold(&self) -> f32 {
        self.threshold
    }

    pub fn num_features(&self) -> usize {
        self.z.len()
    }

    pub fn with_threshold(mut self, threshold: f32) -> Result<Self> {
        if !threshold.is_finite() {
            return Err(SvmError::non_finite("threshold", vec![]));
        }
        self.threshold = threshold;
        Ok(self)
    }
}

/// A dense feature vector to be classified.
#[derive(Debug, Clone, PartialEq)]
pub struct TestInstance {
    features: Vec<f32>,
}

impl TestInstance {
    pub fn new(features: Vec<f32>) -> Result<Self> {
        if features.is_empty() {
            return Err(SvmError::mismatch("test instance", 1, 0));
        }
        if let Some(i) = features.iter().position(|v| !v.is_finite()) {
            return Err(SvmError::non_finite("test instance", vec![i]));
        }
        Ok(Self { features })
    }

    pub fn features(&self) -> &[f32] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn into_features(self) -> Vec<f32> {
        self.features
    }
}

/// Deterministic synthetic model for tests and demos.
///
/// A `ChaCha8Rng` seeded with `seed` draws, in this order, the support-vector
/// matrix row by row, then `alpha_y`, then the bias; every draw is uniform in
/// `[-1, 1]`. The threshold is 0.
pub fn gen_synthetic_model(n_sv: usize, n_features: usize, seed: u64) -> Result<SvmModel> {
    if n_sv == 0 {
        return Err(SvmError::EmptyModel("no support vectors"));
    }
    if n_features == 0 {
        return Err(SvmError::EmptyModel("no features"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support_vectors = (0..n_sv * n_features)
        .map(|_| rng.random_range(-1.0f32..=1.0))
        .collect();
    let alpha_y = (0..n_sv).map(|_| rng.random_range(-1.0f32..=1.0)).collect();
    let bias = rng.random_range(-1.0f32..=1.0);
    Ok(SvmModel {
        num_sv: n_sv,
        num_features: n_features,
        support_vectors,
        alpha_y,
        bias,
        threshold: 0.0,
    })
}

/// Deterministic instance with features uniform in `[-1, 1]`.
pub fn gen_synthetic_instance(n_features: usize, seed: u64) -> Result<TestInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    TestInstance::new(
        (0..n_features)
            .map(|_| rng.random_range(-1.0f32..=1.0))
            .collect(),
    )
}
