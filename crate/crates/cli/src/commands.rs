use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use svmchip_core::io::{
    export_soc_files, parse_examples, parse_model_file, write_instance_line, write_model_file,
    ExampleLine,
};
use svmchip_core::report::{bench_report, render_table, BenchReport, ProfileSet};
use svmchip_core::{
    accumulate_z, build_cascade, cascade_classify, classify_full, classify_precomputed,
    evaluate_cascade, gen_synthetic_instance, gen_synthetic_model, CalibrationProfile,
    CascadeModel, Label, PrecomputedModel, SvmError, SvmModel,
};

use crate::{Engine, Format};

#[derive(Debug)]
pub enum CliError {
    /// Bad or inconsistent input data.
    Data(String),
    /// Bad invocation: missing or unwritable files, bad profiles.
    Usage(String),
    Internal(String),
    /// Stdout was closed by the reader; not reported.
    Closed,
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Data(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
            CliError::Closed => 0,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Data(m) | CliError::Usage(m) | CliError::Internal(m) => f.write_str(m),
            CliError::Closed => f.write_str("output closed"),
        }
    }
}

impl From<SvmError> for CliError {
    fn from(e: SvmError) -> Self {
        match e {
            SvmError::InvalidProfile(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return CliError::Closed;
        }
        CliError::Internal(format!("output: {e}"))
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> CliResult<String> {
    String::from_utf8(read_bytes(path)?)
        .map_err(|_| CliError::Data(format!("{}: not valid UTF-8", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> CliResult<SvmModel> {
    parse_model_file(&read_bytes(path)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_examples(path: &Path, width: usize) -> CliResult<Vec<ExampleLine>> {
    parse_examples(&read_text(path)?, width)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Expands 0, 1 or one-per-stage threshold flags to one value per stage.
fn stage_thresholds(given: &[f32], stages: usize) -> CliResult<Vec<f32>> {
    match given.len() {
        0 => Ok(vec![0.0; stages]),
        1 => Ok(vec![given[0]; stages]),
        n if n == stages => Ok(given.to_vec()),
        n => Err(CliError::Usage(format!(
            "{n} thresholds given for {stages} stages"
        ))),
    }
}

fn load_cascade(paths: &[PathBuf], thresholds: &[f32]) -> CliResult<CascadeModel> {
    let models = paths
        .iter()
        .map(|p| load_model(p))
        .collect::<CliResult<Vec<_>>>()?;
    let th = stage_thresholds(thresholds, models.len())?;
    Ok(build_cascade(&models)?.with_thresholds(&th)?)
}

pub fn classify(model: &Path, instances: &Path, threshold: f32, engine: Engine) -> CliResult {
    let mut m = load_model(model)?;
    m.threshold = threshold;
    let rows = load_examples(instances, m.num_features)?;
    let pre = match engine {
        Engine::Full => None,
        Engine::Precomputed => Some(PrecomputedModel::new(
            accumulate_z(&m)?,
            m.bias,
            m.threshold,
        )?),
    };
    let mut out = io::stdout().lock();
    writeln!(out, "line\tlabel\tclass\tdistance\tmargin")?;
    for row in &rows {
        let d = match &pre {
            None => classify_full(&m, &row.instance)?.0,
            Some(p) => classify_precomputed(p, &row.instance)?,
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{:.6}\t{:.6}",
            row.line,
            d.label,
            d.label.name(),
            d.distance,
            d.margin
        )?;
    }
    Ok(())
}

fn histogram(counts: &[usize]) -> String {
    counts
        .iter()
        .enumerate()
        .map(|(k, c)| format!("{}:{c}", k + 1))
        .collect::<Vec<_>>()
        .join("\t")
}

pub fn cascade(stages: &[PathBuf], instances: &Path, thresholds: &[f32]) -> CliResult {
    let cm = load_cascade(stages, thresholds)?;
    let rows = load_examples(instances, cm.num_features())?;
    let mut counts = vec![0usize; cm.len()];
    let mut out = io::stdout().lock();
    writeln!(out, "line\tlabel\texit_stage\treview")?;
    for row in &rows {
        let r = cascade_classify(&cm, &row.instance)?;
        counts[r.exit_stage - 1] += 1;
        let review = if r.needs_specialist_review {
            "yes"
        } else {
            "no"
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{review}",
            row.line, r.final_label, r.exit_stage
        )?;
    }
    writeln!(out, "exit_stage_histogram\t{}", histogram(&counts))?;
    Ok(())
}

fn write_csv(report: &BenchReport) -> CliResult {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    let internal = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::from(io),
        other => CliError::Internal(format!("output: {other:?}")),
    };
    w.write_record([
        "target",
        "n_sv",
        "n_features",
        "stages",
        "clock_mhz",
        "cycles",
        "time_us",
        "baseline",
        "speedup",
    ])
    .map_err(internal)?;
    for row in &report.rows {
        let vs = report.speedups.iter().find(|s| s.accelerated == row.target);
        w.write_record([
            row.target.name().to_string(),
            report.n_sv.to_string(),
            report.n_features.to_string(),
            report.cascade_stages.to_string(),
            format!("{:.1}", row.clock_hz / 1e6),
            row.estimate.cycles.to_string(),
            format!("{:.3}", row.estimate.micros()),
            vs.map_or(String::new(), |s| s.baseline.name().to_string()),
            vs.map_or(String::new(), |s| format!("{:.2}", s.ratio)),
        ])
        .map_err(internal)?;
    }
    w.flush()?;
    Ok(())
}

pub fn bench(
    dims: Option<&[usize]>,
    model: Option<&Path>,
    profiles: &[PathBuf],
    stages: usize,
    format: Format,
) -> CliResult {
    let (n, f) = match (dims, model) {
        (Some(d), _) => (d[0], d[1]),
        (None, Some(p)) => {
            let m = load_model(p)?;
            (m.num_sv, m.num_features)
        }
        (None, None) => {
            return Err(CliError::Usage(
                "either --dims or --model is required".into(),
            ))
        }
    };
    if n == 0 || f == 0 {
        return Err(CliError::Usage("dimensions must be positive".into()));
    }
    let mut set = ProfileSet::default();
    for p in profiles {
        let text = String::from_utf8(read_bytes(p)?)
            .map_err(|_| CliError::Usage(format!("{}: not valid UTF-8", p.display())))?;
        let profile = CalibrationProfile::from_config_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
        set.set(profile);
    }
    let report = bench_report(&set, n, f, stages)?;
    match format {
        Format::Table => {
            io::stdout()
                .lock()
                .write_all(render_table(&report).as_bytes())?;
            Ok(())
        }
        Format::Csv => write_csv(&report),
    }
}

pub fn convert(model: &Path, instance: &Path, out: &Path) -> CliResult {
    let m = load_model(model)?;
    let rows = load_examples(instance, m.num_features)?;
    let x = &rows
        .first()
        .ok_or_else(|| CliError::Data(format!("{}: no instance", instance.display())))?
        .instance;
    let files = export_soc_files(&m, x)?;
    let mut stdout = io::stdout().lock();
    for (ext, bytes) in [
        ("svs", &files.svs),
        ("par", &files.parameters),
        ("x", &files.x),
    ] {
        let mut name = out.as_os_str().to_owned();
        name.push(format!(".{ext}.bin"));
        let path = PathBuf::from(name);
        write_file(&path, bytes)?;
        writeln!(stdout, "{}\t{}", path.display(), bytes.len())?;
    }
    Ok(())
}

fn ratio(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |v| format!("{v:.4}"))
}

pub fn evaluate(stages: &[PathBuf], data: &Path, thresholds: &[f32]) -> CliResult {
    let cm = load_cascade(stages, thresholds)?;
    let rows = load_examples(data, cm.num_features())?;
    if rows.is_empty() {
        return Err(CliError::Data(format!("{}: no examples", data.display())));
    }
    let unlabeled: Vec<String> = rows
        .iter()
        .filter(|r| r.label.is_none())
        .map(|r| r.line.to_string())
        .collect();
    if !unlabeled.is_empty() {
        return Err(CliError::Data(format!(
            "{}: unlabeled examples at lines {}",
            data.display(),
            unlabeled.join(", ")
        )));
    }
    let labeled: Vec<_> = rows
        .into_iter()
        .map(|r| (r.instance, r.label.unwrap_or(Label::Benign)))
        .collect();
    let m = evaluate_cascade(&cm, &labeled)?;
    let mut out = io::stdout().lock();
    writeln!(out, "instances\t{}", m.total)?;
    writeln!(out, "accuracy\t{:.4}", m.accuracy)?;
    writeln!(out, "sensitivity\t{}", ratio(m.sensitivity))?;
    writeln!(out, "specificity\t{}", ratio(m.specificity))?;
    writeln!(out, "true_positive\t{}", m.true_positive)?;
    writeln!(out, "false_positive\t{}", m.false_positive)?;
    writeln!(out, "true_negative\t{}", m.true_negative)?;
    writeln!(out, "false_negative\t{}", m.false_negative)?;
    writeln!(out, "exit_stage_histogram\t{}", histogram(&m.exit_counts))?;
    Ok(())
}

pub fn gen(
    n_sv: usize,
    n_features: usize,
    seed: u64,
    out: &Path,
    examples: Option<(usize, PathBuf)>,
) -> CliResult {
    let m = gen_synthetic_model(n_sv, n_features, seed)?;
    write_file(out, &write_model_file(&m))?;
    if let Some((count, path)) = examples {
        let mut text = String::new();
        for k in 0..count as u64 {
            let x = gen_synthetic_instance(n_features, seed.wrapping_add(k + 1))?;
            let (d, _) = classify_full(&m, &x)?;
            text.push_str(&write_instance_line(Some(d.label), &x));
            text.push('\n');
        }
        write_file(&path, text.as_bytes())?;
    }
    Ok(())
}
