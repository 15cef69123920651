//! Multi-stage cascade of simplified IPs.
//!
//! Stages run in order. A positive (melanoma) decision finalizes immediately
//! and is flagged for specialist review; a negative decision forwards the
//! instance to the next stage for verification. A negative at the last stage
//! is final.

use crate::engine::{accumulate_z, classify_precomputed};
use crate::error::{Result, SvmError};
use crate::model::{Decision, Label, PrecomputedModel, SvmModel, TestInstance};

/// Anything that can act as one cascade stage.
pub trait Stage {
    fn num_features(&self) -> usize;
    fn classify(&self, x: &TestInstance) -> Result<Decision>;
}

impl Stage for PrecomputedModel {
    fn num_features(&self) -> usize {
        PrecomputedModel::num_features(self)
    }

    fn classify(&self, x: &TestInstance) -> Result<Decision> {
        classify_precomputed(self, x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeModel {
    stages: Vec<PrecomputedModel>,
    stage_roles: Vec<String>,
}

impl CascadeModel {
    pub fn new(stages: Vec<PrecomputedModel>, stage_roles: Vec<String>) -> Result<Self> {
        let first = stages
            .first()
            .ok_or(SvmError::EmptyModel("cascade without stages"))?;
        let width = first.num_features();
        if let Some(s) = stages.iter().find(|s| s.num_features() != width) {
            return Err(SvmError::mismatch(
                "cascade stage features",
                width,
                s.num_features(),
            ));
        }
        if stage_roles.len() != stages.len() {
            return Err(SvmError::mismatch(
                "cascade stage roles",
                stages.len(),
                stage_roles.len(),
            ));
        }
        Ok(CascadeModel {
            stages,
            stage_roles,
        })
    }

    pub fn stages(&self) -> &[PrecomputedModel] {
        &self.stages
    }

    pub fn stage_roles(&self) -> &[String] {
        &self.stage_roles
    }

    pub fn num_features(&self) -> usize {
        self.stages[0].num_features()
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn with_roles(mut self, roles: Vec<String>) -> Result<Self> {
        if roles.len() != self.stages.len() {
            return Err(SvmError::mismatch(
                "cascade stage roles",
                self.stages.len(),
                roles.len(),
            ));
        }
        self.stage_roles = roles;
        Ok(self)
    }

    /// Overrides each stage's decision threshold.
    pub fn with_thresholds(self, thresholds: &[f32]) -> Result<Self> {
        if thresholds.len() != self.stages.len() {
            return Err(SvmError::mismatch(
                "cascade thresholds",
                self.stages.len(),
                thresholds.len(),
            ));
        }
        let stages = self
            .stages
            .into_iter()
            .zip(thresholds)
            .map(|(s, &t)| s.with_threshold(t))
            .collect::<Result<_>>()?;
        Ok(CascadeModel {
            stages,
            stage_roles: self.stage_roles,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeResult {
    pub final_label: Label,
    /// 1-based index of the stage that finalized the decision.
    pub exit_stage: usize,
    pub stage_decisions: Vec<Decision>,
    pub needs_specialist_review: bool,
}

/// Precomputes `z` for every model, preserving order, bias and threshold.
pub fn build_cascade(full_models: &[SvmModel]) -> Result<CascadeModel> {
    let first = full_models
        .first()
        .ok_or(SvmError::EmptyModel("cascade without stages"))?;
    if let Some(m) = full_models
        .iter()
        .find(|m| m.num_features != first.num_features)
    {
        return Err(SvmError::mismatch(
            "cascade stage features",
            first.num_features,
            m.num_features,
        ));
    }
    let stages = full_models
        .iter()
        .map(|m| PrecomputedModel::new(accumulate_z(m)?, m.bias, m.threshold))
        .collect::<Result<Vec<_>>>()?;
    let roles = (1..=stages.len()).map(|k| format!("stage-{k}")).collect();
    CascadeModel::new(stages, roles)
}

/// Runs the positive-finalize routing over arbitrary stages.
pub fn route<S: Stage>(stages: &[S], x: &TestInstance) -> Result<CascadeResult> {
    if stages.is_empty() {
        return Err(SvmError::EmptyModel("cascade without stages"));
    }
    let width = stages[0].num_features();
    if x.len() != width {
        return Err(SvmError::mismatch("cascade input", width, x.len()));
    }
    let mut stage_decisions = Vec::with_capacity(stages.len());
    for stage in stages {
        let decision = stage.classify(x)?;
        stage_decisions.push(decision);
        if decision.label == Label::Melanoma {
            break;
        }
    }
    let final_label = stage_decisions
        .last()
        .map(|d| d.label)
        .unwrap_or(Label::Benign);
    Ok(CascadeResult {
        final_label,
        exit_stage: stage_decisions.len(),
        needs_specialist_review: final_label == Label::Melanoma,
        stage_decisions,
    })
}

pub fn cascade_classify(cm: &CascadeModel, x: &TestInstance) -> Result<CascadeResult> {
    route(&cm.stages, x)
}

/// Accuracy, sensitivity and specificity with melanoma as the positive class.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeMetrics {
    pub total: usize,
    pub true_positive: usize,
    pub false_positive: usize,
    pub true_negative: usize,
    pub false_negative: usize,
    pub accuracy: f64,
    /// `None` when the dataset has no positives.
    pub sensitivity: Option<f64>,
    /// `None` when the dataset has no negatives.
    pub specificity: Option<f64>,
    /// `exit_counts[k]` instances finalized at stage `k + 1`.
    pub exit_counts: Vec<usize>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn evaluate_stages<S: Stage>(
    stages: &[S],
    data: &[(TestInstance, Label)],
) -> Result<CascadeMetrics> {
    if data.is_empty() {
        return Err(SvmError::EmptyDataset);
    }
    let mut m = CascadeMetrics {
        total: data.len(),
        true_positive: 0,
        false_positive: 0,
        true_negative: 0,
        false_negative: 0,
        accuracy: 0.0,
        sensitivity: None,
        specificity: None,
        exit_counts: vec![0; stages.len()],
    };
    for (x, truth) in data {
        let r = route(stages, x)?;
        m.exit_counts[r.exit_stage - 1] += 1;
        match (r.final_label, truth) {
            (Label::Melanoma, Label::Melanoma) => m.true_positive += 1,
            (Label::Melanoma, Label::Benign) => m.false_positive += 1,
            (Label::Benign, Label::Benign) => m.true_negative += 1,
            (Label::Benign, Label::Melanoma) => m.false_negative += 1,
        }
    }
    m.accuracy = (m.true_positive + m.true_negative) as f64 / m.total as f64;
    m.sensitivity = ratio(m.true_positive, m.true_positive + m.false_negative);
    m.specificity = ratio(m.true_negative, m.true_negative + m.false_positive);
    Ok(m)
}

pub fn evaluate_cascade(
    cm: &CascadeModel,
    data: &[(TestInstance, Label)],
) -> Result<CascadeMetrics> {
    evaluate_stages(&cm.stages, data)
}
