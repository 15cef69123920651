use proptest::prelude::*;

use svmchip_core::engine::equivalence_bound;
use svmchip_core::io::{
    export_soc_files, import_soc_files, parse_instance_line, parse_model_file, write_model_file,
};
use svmchip_core::{
    accumulate_z, classify_full, classify_precomputed, reference_classify, validate_model,
    PrecomputedModel, SvmModel, TestInstance,
};

fn model_and_instance(
    max_n: usize,
    max_f: usize,
) -> impl Strategy<Value = (SvmModel, TestInstance)> {
    (1..=max_n, 1..=max_f).prop_flat_map(|(n, f)| {
        (
            prop::collection::vec(-1.0f32..=1.0, n * f),
            prop::collection::vec(-1.0f32..=1.0, n),
            -1.0f32..=1.0,
            -0.5f32..=0.5,
            prop::collection::vec(-1.0f32..=1.0, f),
        )
            .prop_map(move |(sv, ay, b, th, x)| {
                (
                    SvmModel {
                        num_sv: n,
                        num_features: f,
                        support_vectors: sv,
                        alpha_y: ay,
                        bias: b,
                        threshold: th,
                    },
                    TestInstance::new(x).unwrap(),
                )
            })
    })
}

/// Small dyadic values so that every product and sum is exact in f64.
fn dyadic_model(max_n: usize, max_f: usize) -> impl Strategy<Value = (SvmModel, Vec<f32>)> {
    let dy = (-16i32..=16).prop_map(|k| k as f32 / 8.0);
    (1..=max_n, 1..=max_f).prop_flat_map(move |(n, f)| {
        (
            prop::collection::vec(dy.clone(), n * f),
            prop::collection::vec(dy.clone(), n),
            prop::collection::vec(dy.clone(), f),
        )
            .prop_map(move |(sv, ay, x)| {
                (
                    SvmModel {
                        num_sv: n,
                        num_features: f,
                        support_vectors: sv,
                        alpha_y: ay,
                        bias: 0.0,
                        threshold: 0.0,
                    },
                    x,
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dataflow_matches_reference_oracle((m, x) in model_and_instance(300, 64)) {
        let (full, _) = classify_full(&m, &x).unwrap();
        let r = reference_classify(&m, &x).unwrap();
        prop_assert!((f64::from(full.distance) - r.distance).abs() <= equivalence_bound(&m, &x));
        if (f64::from(full.margin) - f64::from(m.threshold)).abs() > 1e-4 {
            prop_assert_eq!(full.label, r.label);
        }
    }

    #[test]
    fn precomputed_path_is_bitwise_identical((m, x) in model_and_instance(100, 32)) {
        let (full, _) = classify_full(&m, &x).unwrap();
        let pm = PrecomputedModel::new(accumulate_z(&m).unwrap(), m.bias, m.threshold).unwrap();
        let pre = classify_precomputed(&pm, &x).unwrap();
        prop_assert_eq!(full.distance.to_bits(), pre.distance.to_bits());
    }

    #[test]
    fn reference_distance_is_linear_in_x((m, x) in dyadic_model(20, 12), scale in -4i32..=4) {
        let a = f64::from(scale) / 2.0;
        let base = reference_classify(&m, &TestInstance::new(x.clone()).unwrap()).unwrap().distance;
        let scaled: Vec<f32> = x.iter().map(|v| v * a as f32).collect();
        let d = reference_classify(&m, &TestInstance::new(scaled).unwrap()).unwrap().distance;
        prop_assert_eq!(d, a * base);
    }

    #[test]
    fn dyadic_inputs_agree_exactly((m, x) in dyadic_model(8, 8)) {
        let x = TestInstance::new(x).unwrap();
        let (full, _) = classify_full(&m, &x).unwrap();
        prop_assert_eq!(f64::from(full.distance), reference_classify(&m, &x).unwrap().distance);
    }

    #[test]
    fn text_and_binary_round_trips((m, x) in model_and_instance(40, 30)) {
        let mut m = m;
        m.threshold = 0.0;
        let back = parse_model_file(&write_model_file(&m)).unwrap();
        prop_assert!(back.bit_eq(&m));
        let files = export_soc_files(&m, &x).unwrap();
        let (bm, bx) = import_soc_files(&files.svs, &files.parameters, &files.x).unwrap();
        prop_assert!(bm.bit_eq(&m));
        prop_assert_eq!(
            bx.features().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            x.features().iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn round_trip_preserves_extreme_values(
        vals in prop::collection::vec(any::<f32>().prop_filter("finite", |v| v.is_finite()), 6),
    ) {
        let m = SvmModel {
            num_sv: 2,
            num_features: 2,
            support_vectors: vals[..4].to_vec(),
            alpha_y: vals[4..].to_vec(),
            bias: vals[0],
            threshold: 0.0,
        };
        let back = parse_model_file(&write_model_file(&m)).unwrap();
        prop_assert!(back.bit_eq(&m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn model_parser_is_total(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
        if let Ok(m) = parse_model_file(&bytes) {
            prop_assert!(validate_model(&m).is_ok());
        }
    }

    #[test]
    fn model_parser_is_total_on_near_valid_text(
        body in prop::collection::vec(
            prop::sample::select(vec![
                "1", "0", "-1", "2", "1:0.5", "2:1e39", "3:-0", "0:1", "27:1", "nan", "#", " ", "\n", "\r\n",
                "x", ":", "1:", "62", "empty",
            ]),
            0..60,
        ),
    ) {
        let header = "SVM-light Version V6.20\n0\n3\n1\n1\n1\nempty\n3\n5\n3\n0.5\n";
        let text = format!("{header}{}", body.join(" "));
        if let Ok(m) = parse_model_file(text.as_bytes()) {
            prop_assert!(validate_model(&m).is_ok());
            prop_assert_eq!(m.num_features, 3);
        }
    }

    #[test]
    fn soc_import_is_total(
        a in prop::collection::vec(any::<u8>(), 0..64),
        b in prop::collection::vec(any::<u8>(), 0..64),
        c in prop::collection::vec(any::<u8>(), 0..64),
    ) {
        if let Ok((m, x)) = import_soc_files(&a, &b, &c) {
            prop_assert!(validate_model(&m).is_ok());
            prop_assert_eq!(x.len(), m.num_features);
        }
    }

    #[test]
    fn instance_parser_is_total(line in ".{0,80}", width in 0usize..10) {
        if let Ok((_, x)) = parse_instance_line(&line, width) {
            prop_assert_eq!(x.len(), width);
        }
    }
}
