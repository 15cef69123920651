//! Browser bindings for the interactive demo in `www/`.
//!
//! Each export is a thin wrapper over a plain function so the numerics can be
//! tested natively.

use svmchip_core::report::{bench_report, render_table, ProfileSet};
use svmchip_core::{
    build_cascade, cascade_classify, classify_full, estimate_cycles, gen_synthetic_model,
    CalibrationProfile, Label, Result, SvmModel, Target, TestInstance,
};
use wasm_bindgen::prelude::*;

/// Targets plotted by [`latency_curves`], in output order.
pub const CURVE_TARGETS: [Target; 3] = [
    Target::PipelinedPl,
    Target::SequentialPl,
    Target::EmbeddedProcessor,
];

/// Predicted microseconds for `n = 1..=n_max` support vectors, one block of
/// `n_max` values per entry of [`CURVE_TARGETS`].
pub fn curves(n_max: usize, n_features: usize, clock_mhz: f64) -> Vec<f64> {
    CURVE_TARGETS
        .iter()
        .flat_map(|&t| {
            let mut p = CalibrationProfile::default_for(t);
            if clock_mhz > 0.0 {
                p.clock_hz = clock_mhz * 1e6;
            }
            (1..=n_max).map(move |n| estimate_cycles(&p, n, n_features).micros())
        })
        .collect()
}

fn grid_point(i: usize, j: usize, resolution: usize) -> TestInstance {
    let step = 2.0 / (resolution.max(2) - 1) as f32;
    TestInstance::new(vec![-1.0 + j as f32 * step, 1.0 - i as f32 * step]).unwrap()
}

fn plane_model(n_sv: usize, seed: u64, threshold: f32) -> Result<SvmModel> {
    let mut m = gen_synthetic_model(n_sv, 2, seed)?;
    m.threshold = threshold;
    Ok(m)
}

/// Row-major margins `D - b` of a synthetic two-feature model over
/// `[-1, 1]^2`, top row first.
pub fn margins(n_sv: usize, seed: u64, resolution: usize) -> Result<Vec<f32>> {
    let m = plane_model(n_sv, seed, 0.0)?;
    let mut out = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            out.push(classify_full(&m, &grid_point(i, j, resolution))?.0.margin);
        }
    }
    Ok(out)
}

/// Cascade outcome per grid cell: `k` if stage `k` reported a positive,
/// `0` if every stage said negative.
pub fn cascade_exits(
    seeds: &[u64],
    thresholds: &[f32],
    n_sv: usize,
    resolution: usize,
) -> Result<Vec<u8>> {
    let models = seeds
        .iter()
        .zip(thresholds)
        .map(|(&s, &th)| plane_model(n_sv, s, th))
        .collect::<Result<Vec<_>>>()?;
    let cm = build_cascade(&models)?;
    let mut out = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let r = cascade_classify(&cm, &grid_point(i, j, resolution))?;
            out.push(match r.final_label {
                Label::Melanoma => r.exit_stage as u8,
                Label::Benign => 0,
            });
        }
    }
    Ok(out)
}

fn js(e: svmchip_core::SvmError) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn latency_curves(n_max: usize, n_features: usize, clock_mhz: f64) -> Vec<f64> {
    curves(n_max, n_features, clock_mhz)
}

#[wasm_bindgen]
pub fn decision_margins(n_sv: usize, seed: u64, resolution: usize) -> Result<Vec<f32>, JsError> {
    margins(n_sv, seed, resolution).map_err(js)
}

#[wasm_bindgen]
pub fn cascade_grid(
    seed_1: u64,
    threshold_1: f32,
    seed_2: u64,
    threshold_2: f32,
    n_sv: usize,
    resolution: usize,
) -> Result<Vec<u8>, JsError> {
    cascade_exits(
        &[seed_1, seed_2],
        &[threshold_1, threshold_2],
        n_sv,
        resolution,
    )
    .map_err(js)
}

#[wasm_bindgen]
pub fn bench_text(n_sv: usize, n_features: usize, stages: usize) -> Result<String, JsError> {
    bench_report(&ProfileSet::default(), n_sv, n_features, stages)
        .map(|r| render_table(&r))
        .map_err(js)
}
