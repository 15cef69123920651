//! Latency benchmark report: per-target predictions, speedups, and the
//! published reference figures side by side.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::Result;
use crate::timing::reference::{
    published_resource_table, Usage, DEVICE_BRAM, DEVICE_DSP, DEVICE_LUT, DEVICE_LUT_RAM,
    DEVICE_SLICES, HLS_PIPELINED_CYCLES_248X27, HLS_SEQUENTIAL_CYCLES_248X27, PUBLISHED_CLOCK_HZ,
    PUBLISHED_TIMINGS,
};
use crate::timing::{
    estimate_cascade_cycles, estimate_cycles, speedup, CalibrationProfile, LatencyEstimate, Target,
};

/// One profile per target, starting from the calibrated defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSet {
    profiles: HashMap<Target, CalibrationProfile>,
}

impl Default for ProfileSet {
    fn default() -> Self {
        ProfileSet {
            profiles: Target::ALL
                .into_iter()
                .map(|t| (t, CalibrationProfile::default_for(t)))
                .collect(),
        }
    }
}

impl ProfileSet {
    pub fn get(&self, target: Target) -> &CalibrationProfile {
        &self.profiles[&target]
    }

    /// Replaces the profile for `profile.target`.
    pub fn set(&mut self, profile: CalibrationProfile) {
        self.profiles.insert(profile.target, profile);
    }
}

/// Rows of the report, in output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchTarget {
    PipelinedPl,
    SequentialPl,
    EmbeddedProcessor,
    CascadePl,
    CascadeProcessor,
}

impl BenchTarget {
    pub const ALL: [BenchTarget; 5] = [
        BenchTarget::PipelinedPl,
        BenchTarget::SequentialPl,
        BenchTarget::EmbeddedProcessor,
        BenchTarget::CascadePl,
        BenchTarget::CascadeProcessor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchTarget::PipelinedPl => "pipelined_pl",
            BenchTarget::SequentialPl => "sequential_pl",
            BenchTarget::EmbeddedProcessor => "embedded_processor",
            BenchTarget::CascadePl => "cascade_pl",
            BenchTarget::CascadeProcessor => "cascade_processor",
        }
    }

    fn profile_target(self) -> Target {
        match self {
            BenchTarget::PipelinedPl => Target::PipelinedPl,
            BenchTarget::SequentialPl => Target::SequentialPl,
            BenchTarget::EmbeddedProcessor => Target::EmbeddedProcessor,
            BenchTarget::CascadePl => Target::SimplifiedStage,
            BenchTarget::CascadeProcessor => Target::EmbeddedCascade,
        }
    }

    /// The slower target this one is compared against, if any.
    pub fn baseline(self) -> Option<BenchTarget> {
        match self {
            BenchTarget::PipelinedPl => Some(BenchTarget::EmbeddedProcessor),
            BenchTarget::SequentialPl => None,
            BenchTarget::EmbeddedProcessor => None,
            BenchTarget::CascadePl => Some(BenchTarget::CascadeProcessor),
            BenchTarget::CascadeProcessor => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub target: BenchTarget,
    pub clock_hz: f64,
    pub estimate: LatencyEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupRow {
    pub accelerated: BenchTarget,
    pub baseline: BenchTarget,
    pub ratio: f64,
    /// Rounded factor as published for these exact dimensions.
    pub published: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub n_sv: usize,
    pub n_features: usize,
    pub cascade_stages: usize,
    pub rows: Vec<BenchRow>,
    pub speedups: Vec<SpeedupRow>,
    /// Prediction of the pipelined profile for the 248 x 27 model, shown next
    /// to the published model 2 figures.
    pub model2_prediction: LatencyEstimate,
}

impl BenchReport {
    pub fn row(&self, target: BenchTarget) -> &BenchRow {
        self.rows
            .iter()
            .find(|r| r.target == target)
            .expect("every target has a row")
    }
}

fn published_speedup(
    accelerated: BenchTarget,
    n_sv: usize,
    n_features: usize,
    stages: usize,
) -> Option<u32> {
    match accelerated {
        BenchTarget::PipelinedPl => PUBLISHED_TIMINGS[..2]
            .iter()
            .find(|p| p.n_sv == [n_sv] && p.n_features == n_features)
            .map(|p| p.speedup),
        BenchTarget::SequentialPl => (n_sv == 248 && n_features == 27).then_some(8),
        BenchTarget::CascadePl => {
            let c = &PUBLISHED_TIMINGS[2];
            (stages == c.n_sv.len() && n_features == c.n_features).then_some(c.speedup)
        }
        _ => None,
    }
}

/// Builds the report for an `n_sv x n_features` model and a cascade of
/// `cascade_stages` stages of `n_features` each, all stages executed.
pub fn bench_report(
    profiles: &ProfileSet,
    n_sv: usize,
    n_features: usize,
    cascade_stages: usize,
) -> Result<BenchReport> {
    let stage_features = vec![n_features; cascade_stages];
    let rows = BenchTarget::ALL
        .into_iter()
        .map(|t| {
            let p = profiles.get(t.profile_target());
            let estimate = if t.profile_target().is_stage() {
                estimate_cascade_cycles(p, &stage_features, cascade_stages)?
            } else {
                estimate_cycles(p, n_sv, n_features)
            };
            Ok(BenchRow {
                target: t,
                clock_hz: p.clock_hz,
                estimate,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let find = |t: BenchTarget| rows.iter().find(|r| r.target == t).unwrap().estimate;
    let mut speedups: Vec<SpeedupRow> = BenchTarget::ALL
        .into_iter()
        .filter_map(|t| t.baseline().map(|b| (t, b)))
        .map(|(t, b)| SpeedupRow {
            accelerated: t,
            baseline: b,
            ratio: speedup(&find(b), &find(t)),
            published: published_speedup(t, n_sv, n_features, cascade_stages),
        })
        .collect();
    // pipelining gain of the full IP
    speedups.insert(
        1,
        SpeedupRow {
            accelerated: BenchTarget::PipelinedPl,
            baseline: BenchTarget::SequentialPl,
            ratio: speedup(
                &find(BenchTarget::SequentialPl),
                &find(BenchTarget::PipelinedPl),
            ),
            published: published_speedup(
                BenchTarget::SequentialPl,
                n_sv,
                n_features,
                cascade_stages,
            ),
        },
    );

    Ok(BenchReport {
        n_sv,
        n_features,
        cascade_stages,
        rows,
        speedups,
        model2_prediction: estimate_cycles(profiles.get(Target::PipelinedPl), 248, 27),
    })
}

fn usage(u: Usage) -> String {
    format!("{} ({}%)", u.count, u.percent)
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// Aligned plain-text rendering. Cycles are integers, times are microseconds
/// with two decimals, ratios have two decimals.
pub fn render_table(report: &BenchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "svm accelerator latency report");
    let _ = writeln!(
        out,
        "model: {} support vectors x {} features; cascade: {} stages x {} features, all executed",
        report.n_sv, report.n_features, report.cascade_stages, report.n_features
    );
    out.push('\n');

    let _ = writeln!(
        out,
        "{:<20} {:>9} {:>10} {:>10}",
        "target", "clock_mhz", "cycles", "time_us"
    );
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{:<20} {:>9.2} {:>10} {:>10.2}",
            r.target.name(),
            r.clock_hz / 1e6,
            r.estimate.cycles,
            r.estimate.micros()
        );
    }
    out.push('\n');

    let _ = writeln!(out, "{:<40} {:>8} {:>9}", "speedup", "ratio", "published");
    for s in &report.speedups {
        let label = format!("{} vs {}", s.accelerated.name(), s.baseline.name());
        let _ = writeln!(
            out,
            "{:<40} {:>8.2} {:>9}",
            label,
            s.ratio,
            opt(s.published)
        );
    }
    out.push('\n');

    let clock_mhz = PUBLISHED_CLOCK_HZ / 1e6;
    let _ = writeln!(out, "published timing ({clock_mhz:.0} MHz)");
    let _ = writeln!(
        out,
        "{:<16} {:>8} {:>8} {:>9} {:>12} {:>9} {:>10} {:>9} {:>7}",
        "model",
        "svs",
        "features",
        "accel_us",
        "accel_cycles",
        "cpu_us",
        "cpu_cycles",
        "published",
        "ratio"
    );
    for p in PUBLISHED_TIMINGS {
        let svs = p
            .n_sv
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join("+");
        let ratio = p
            .processor_us
            .map(|cpu| format!("{:.2}", cpu / p.accelerator_us));
        let _ = writeln!(
            out,
            "{:<16} {:>8} {:>8} {:>9.2} {:>12} {:>9} {:>10} {:>9} {:>7}",
            p.model,
            svs,
            p.n_features,
            p.accelerator_us,
            opt(p.accelerator_cycles),
            opt(p.processor_us.map(|v| format!("{v:.2}"))),
            opt(p.processor_cycles),
            p.speedup,
            opt(ratio),
        );
    }
    let m2 = &PUBLISHED_TIMINGS[1];
    let m2_cycles = (m2.accelerator_us * 1e-6 * PUBLISHED_CLOCK_HZ).round() as u64;
    let _ = writeln!(
        out,
        "DISCREPANCY model 2: published {:.2} us ({} cycles at {:.0} MHz) vs HLS latency {} cycles; \
         profile prediction {} cycles ({:.2} us); published speedup {} vs {:.2}/{:.2} = {:.2}",
        m2.accelerator_us,
        m2_cycles,
        clock_mhz,
        HLS_PIPELINED_CYCLES_248X27,
        report.model2_prediction.cycles,
        report.model2_prediction.micros(),
        m2.speedup,
        m2.processor_us.unwrap_or(f64::NAN),
        m2.accelerator_us,
        m2.processor_us.unwrap_or(f64::NAN) / m2.accelerator_us,
    );
    let _ = writeln!(
        out,
        "HLS latency 248 x 27: {} cycles sequential, {} cycles pipelined",
        HLS_SEQUENTIAL_CYCLES_248X27, HLS_PIPELINED_CYCLES_248X27
    );
    out.push('\n');

    let _ = writeln!(out, "implementation results (XC7Z020)");
    let _ = writeln!(
        out,
        "{:<16} {:>15} {:>12} {:>15} {:>10} {:>9} {:>8}",
        format!("model"),
        format!("slices({DEVICE_SLICES})"),
        format!("lut({DEVICE_LUT})"),
        format!("lut_ram({DEVICE_LUT_RAM})"),
        format!("bram({DEVICE_BRAM})"),
        format!("dsp({DEVICE_DSP})"),
        "power_w"
    );
    for row in published_resource_table() {
        let _ = writeln!(
            out,
            "{:<16} {:>15} {:>12} {:>15} {:>10} {:>9} {:>8.2}",
            row.model,
            usage(row.slices),
            usage(row.lut),
            usage(row.lut_ram),
            usage(row.bram),
            usage(row.dsp),
            row.power_w
        );
    }
    out
}
