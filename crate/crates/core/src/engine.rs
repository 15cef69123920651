//! The classifier dataflow: SVs summation, distance calculation and
//! classification decision, plus a double-precision reference path.
//!
//! Block arithmetic is `f32` with a fixed accumulation order so that results
//! are bit-reproducible: the summation block iterates support vectors in the
//! outer loop and features in the inner loop, and the distance block sums
//! features in ascending order.

use crate::error::{Result, SvmError};
use crate::model::{validate_model, Decision, Label, PrecomputedModel, SvmModel, TestInstance};

/// Intermediate outputs of the three blocks for one classification.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTrace {
    pub z: Vec<f32>,
    pub distance: f32,
    pub margin: f32,
    pub label: Label,
}

/// SVs summation block: `z[j] = sum_i alpha_y[i] * sv[i][j]`.
///
/// The returned vector may contain infinities if the sum overflows;
/// [`classify_full`] turns that into an error.
pub fn accumulate_z(model: &SvmModel) -> Result<Vec<f32>> {
    validate_model(model)?;
    let mut z = vec![0.0f32; model.num_features];
    for (row, &ay) in model.rows().zip(&model.alpha_y) {
        for (acc, &v) in z.iter_mut().zip(row) {
            *acc += ay * v;
        }
    }
    Ok(z)
}

/// Distance calculation block: `D = sum_j x[j] * z[j]`.
pub fn dot_distance(z: &[f32], x: &TestInstance) -> Result<f32> {
    if z.len() != x.len() {
        return Err(SvmError::mismatch("distance calculation", z.len(), x.len()));
    }
    let mut d = 0.0f32;
    for (&xj, &zj) in x.features().iter().zip(z) {
        d += xj * zj;
    }
    Ok(d)
}

/// Classification decision block.
pub fn decide(distance: f32, bias: f32, threshold: f32) -> Result<Decision> {
    if !distance.is_finite() {
        return Err(SvmError::non_finite("distance", vec![]));
    }
    if !bias.is_finite() {
        return Err(SvmError::non_finite("bias", vec![]));
    }
    if !threshold.is_finite() {
        return Err(SvmError::non_finite("threshold", vec![]));
    }
    let margin = distance - bias;
    if !margin.is_finite() {
        return Err(SvmError::non_finite("margin", vec![]));
    }
    Ok(Decision {
        label: Label::from_margin(margin, threshold),
        distance,
        margin,
    })
}

/// Full IP: all three blocks in sequence.
pub fn classify_full(model: &SvmModel, x: &TestInstance) -> Result<(Decision, BlockTrace)> {
    if x.len() != model.num_features {
        return Err(SvmError::mismatch(
            "test instance",
            model.num_features,
            x.len(),
        ));
    }
    let z = accumulate_z(model)?;
    if let Some(j) = z.iter().position(|v| !v.is_finite()) {
        return Err(SvmError::non_finite("accumulated z", vec![j]));
    }
    let distance = dot_distance(&z, x)?;
    let decision = decide(distance, model.bias, model.threshold)?;
    let trace = BlockTrace {
        z,
        distance: decision.distance,
        margin: decision.margin,
        label: decision.label,
    };
    Ok((decision, trace))
}

/// Simplified IP: `z` is stored, so only the distance and decision blocks run.
pub fn classify_precomputed(pm: &PrecomputedModel, x: &TestInstance) -> Result<Decision> {
    let distance = dot_distance(pm.z(), x)?;
    decide(distance, pm.bias(), pm.threshold())
}

/// Output of [`reference_classify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceDecision {
    pub label: Label,
    pub distance: f64,
    pub margin: f64,
}

/// Independent double-precision evaluation of the decision function.
///
/// Computes `sum_i alpha_y[i] * (x . sv_i)`, i.e. per-support-vector kernel
/// values first, without ever forming `z`.
pub fn reference_classify(model: &SvmModel, x: &TestInstance) -> Result<ReferenceDecision> {
    validate_model(model)?;
    if x.len() != model.num_features {
        return Err(SvmError::mismatch(
            "test instance",
            model.num_features,
            x.len(),
        ));
    }
    let distance: f64 = model
        .rows()
        .zip(&model.alpha_y)
        .map(|(row, &ay)| {
            let kernel: f64 = row
                .iter()
                .zip(x.features())
                .map(|(&s, &v)| f64::from(s) * f64::from(v))
                .sum();
            f64::from(ay) * kernel
        })
        .sum();
    let margin = distance - f64::from(model.bias);
    let label = if margin >= f64::from(model.threshold) {
        Label::Melanoma
    } else {
        Label::Benign
    };
    Ok(ReferenceDecision {
        label,
        distance,
        margin,
    })
}

/// Condition-aware tolerance for comparing the `f32` dataflow distance with
/// the `f64` reference: `1e-3 * (sum_i |ay_i| * sum_j |x_j * sv_ij| + 1)`.
pub fn equivalence_bound(model: &SvmModel, x: &TestInstance) -> f64 {
    let magnitude: f64 = model
        .rows()
        .zip(&model.alpha_y)
        .map(|(row, &ay)| {
            let s: f64 = row
                .iter()
                .zip(x.features())
                .map(|(&a, &b)| (f64::from(a) * f64::from(b)).abs())
                .sum();
            f64::from(ay).abs() * s
        })
        .sum();
    1e-3 * (magnitude + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gen_synthetic_instance, gen_synthetic_model};

    fn inst(v: &[f32]) -> TestInstance {
        TestInstance::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_weights_give_zero_z() {
        let mut m = gen_synthetic_model(5, 4, 3).unwrap();
        m.alpha_y = vec![0.0; 5];
        assert_eq!(accumulate_z(&m).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn single_term_z() {
        let m = SvmModel::from_rows(&[vec![1.0, -3.0]], vec![2.0], 0.0, 0.0).unwrap();
        assert_eq!(accumulate_z(&m).unwrap(), vec![2.0, -6.0]);
    }

    #[test]
    fn dot_distance_examples() {
        assert_eq!(
            dot_distance(&[1.0, 1.0, 1.0], &inst(&[1.0, 1.0, 1.0])).unwrap(),
            3.0
        );
        assert_eq!(dot_distance(&[1.0, 0.0], &inst(&[0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(dot_distance(&[0.5], &inst(&[0.5])).unwrap(), 0.25);
        assert!(matches!(
            dot_distance(&[0.5, 1.0], &inst(&[0.5])),
            Err(SvmError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn decide_examples() {
        let d = decide(1.0, 0.5, 0.0).unwrap();
        assert_eq!((d.margin, d.label), (0.5, Label::Melanoma));
        let d = decide(0.5, 0.5, 0.0).unwrap();
        assert_eq!((d.margin, d.label), (0.0, Label::Melanoma));
        let d = decide(0.0, 0.5, 0.0).unwrap();
        assert_eq!((d.margin, d.label), (-0.5, Label::Benign));
        assert!(matches!(
            decide(f32::NAN, 0.0, 0.0),
            Err(SvmError::NonFiniteValue { .. })
        ));
        assert!(matches!(
            decide(f32::MAX, -f32::MAX, 0.0),
            Err(SvmError::NonFiniteValue { .. })
        ));
    }

    #[test]
    fn classify_full_examples() {
        let m = SvmModel::from_rows(&[vec![1.0, 0.0]], vec![1.0], 0.0, 0.0).unwrap();
        let (d, trace) = classify_full(&m, &inst(&[1.0, 0.0])).unwrap();
        assert_eq!((d.distance, d.label), (1.0, Label::Melanoma));
        assert_eq!(trace.z, vec![1.0, 0.0]);

        let m = SvmModel::from_rows(&[vec![1.0, 0.0]], vec![1.0], 2.0, 0.0).unwrap();
        let (d, _) = classify_full(&m, &inst(&[1.0, 0.0])).unwrap();
        assert_eq!((d.margin, d.label), (-1.0, Label::Benign));
    }

    #[test]
    fn classify_full_rejects_overflow() {
        let m = SvmModel::from_rows(&[vec![f32::MAX], vec![f32::MAX]], vec![1.0, 1.0], 0.0, 0.0)
            .unwrap();
        assert!(matches!(
            classify_full(&m, &inst(&[1.0])),
            Err(SvmError::NonFiniteValue {
                context: "accumulated z",
                ..
            })
        ));
        let m = SvmModel::from_rows(&[vec![f32::MAX, f32::MAX]], vec![1.0], 0.0, 0.0).unwrap();
        assert!(matches!(
            classify_full(&m, &inst(&[1.0, 1.0])),
            Err(SvmError::NonFiniteValue {
                context: "distance",
                ..
            })
        ));
    }

    #[test]
    fn classify_full_rejects_width() {
        let m = gen_synthetic_model(3, 27, 0).unwrap();
        assert!(matches!(
            classify_full(&m, &gen_synthetic_instance(26, 0).unwrap()),
            Err(SvmError::DimensionMismatch {
                expected: 27,
                found: 26,
                ..
            })
        ));
    }

    #[test]
    fn precomputed_examples() {
        let pm = PrecomputedModel::new(vec![0.0; 4], 0.0, 0.0).unwrap();
        let d = classify_precomputed(&pm, &inst(&[3.0, -1.0, 2.0, 9.0])).unwrap();
        assert_eq!((d.margin, d.label), (0.0, Label::Melanoma));

        let pm = PrecomputedModel::new(vec![1.0; 27], 0.0, 0.0).unwrap();
        assert!(matches!(
            classify_precomputed(&pm, &gen_synthetic_instance(26, 1).unwrap()),
            Err(SvmError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn precomputed_matches_full_bitwise() {
        for seed in 0..50 {
            let m = gen_synthetic_model(61, 27, seed).unwrap();
            let x = gen_synthetic_instance(27, seed).unwrap();
            let pm = PrecomputedModel::new(accumulate_z(&m).unwrap(), m.bias, m.threshold).unwrap();
            let full = classify_full(&m, &x).unwrap().0;
            let pre = classify_precomputed(&pm, &x).unwrap();
            assert_eq!(full.distance.to_bits(), pre.distance.to_bits());
            assert_eq!(full.label, pre.label);
        }
    }

    #[test]
    fn reference_hand_computed() {
        let m = SvmModel::from_rows(&[vec![3.0]], vec![2.0], 0.0, 0.0).unwrap();
        let r = reference_classify(&m, &inst(&[5.0])).unwrap();
        assert_eq!(r.distance, 30.0);
        assert_eq!(r.label, Label::Melanoma);
    }

    #[test]
    fn reference_exact_for_small_integers() {
        let rows = vec![
            vec![1.0, -2.0, 3.0],
            vec![0.0, 4.0, -1.0],
            vec![2.0, 2.0, 2.0],
        ];
        let m = SvmModel::from_rows(&rows, vec![1.0, -3.0, 2.0], 1.0, 0.0).unwrap();
        let x = inst(&[2.0, 1.0, -1.0]);
        let full = classify_full(&m, &x).unwrap().0;
        let reference = reference_classify(&m, &x).unwrap();
        assert_eq!(f64::from(full.distance), reference.distance);
    }

    #[test]
    fn repeated_runs_are_bit_identical() {
        let m = gen_synthetic_model(248, 27, 11).unwrap();
        let x = gen_synthetic_instance(27, 11).unwrap();
        let (_, a) = classify_full(&m, &x).unwrap();
        let (_, b) = classify_full(&m, &x).unwrap();
        assert_eq!(a.distance.to_bits(), b.distance.to_bits());
        assert!(crate::model::bits_eq(&a.z, &b.z));
    }

    #[test]
    fn model_2_size_within_bound() {
        let m = gen_synthetic_model(248, 27, 5).unwrap();
        let x = gen_synthetic_instance(27, 5).unwrap();
        let full = classify_full(&m, &x).unwrap().0;
        let reference = reference_classify(&m, &x).unwrap();
        assert!((f64::from(full.distance) - reference.distance).abs() <= equivalence_bound(&m, &x));
    }
}
