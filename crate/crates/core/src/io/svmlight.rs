//! SVM-Light text formats: V6 model files and sparse example lines.
//!
//! Model layout, one value per line with an optional `# comment`:
//!
//! ```text
//! SVM-light Version V6.20
//! 0 # kernel type
//! 3 # kernel parameter -d
//! 1 # kernel parameter -g
//! 1 # kernel parameter -s
//! 1 # kernel parameter -r
//! empty# kernel parameter -u
//! 27 # highest feature index
//! 61 # number of training documents
//! 62 # number of support vectors plus 1
//! 0.25 # threshold b, each following line is a SV (starting with alpha*y)
//! 0.5 1:0.125 4:-1 #
//! ```

use std::fmt::Write as _;

use crate::error::{ParseError, ParseErrorKind, Result};
use crate::model::{validate_model, Label, SvmModel, TestInstance};

/// Upper bound on dense cells materialised from a sparse file.
pub const MAX_DENSE_CELLS: usize = 1 << 26;

const VERSION_PREFIX: &str = "SVM-light Version";
const HEADER_LINES: usize = 11;

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head).trim()
}

fn parse_f32(token: &str) -> Result<f32, ParseErrorKind> {
    let v: f32 = token
        .parse()
        .map_err(|_| ParseErrorKind::BadNumber(token.to_string()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ParseErrorKind::NonFinite(token.to_string()))
    }
}

fn parse_usize(token: &str) -> Result<usize, ParseErrorKind> {
    token
        .parse()
        .map_err(|_| ParseErrorKind::BadNumber(token.to_string()))
}

fn first_token(line: &str) -> &str {
    strip_comment(line).split_whitespace().next().unwrap_or("")
}

/// Parses `idx:val` pairs into `(index, value)`, checking order and range.
fn parse_pairs<'a>(
    tokens: impl Iterator<Item = &'a str>,
    limit: usize,
) -> Result<Vec<(usize, f32)>, ParseErrorKind> {
    let mut previous = 0usize;
    let mut pairs = Vec::new();
    for token in tokens {
        let (idx, val) = token
            .split_once(':')
            .ok_or_else(|| ParseErrorKind::BadPair(token.to_string()))?;
        let index: usize = idx
            .parse()
            .map_err(|_| ParseErrorKind::BadPair(token.to_string()))?;
        let value = parse_f32(val)?;
        if index == 0 || index > limit {
            return Err(ParseErrorKind::IndexRange { index, limit });
        }
        if index <= previous {
            return Err(ParseErrorKind::IndexOrder { index, previous });
        }
        previous = index;
        pairs.push((index, value));
    }
    Ok(pairs)
}

/// Parses an SVM-Light linear model into a dense [`SvmModel`].
///
/// Absent sparse indices become `0.0`; the threshold is set to 0 because the
/// format does not carry one.
pub fn parse_model_file(bytes: &[u8]) -> Result<SvmModel> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| ParseError::offset(e.valid_up_to(), ParseErrorKind::NotUtf8))?;
    let mut lines = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l));

    let mut header = Vec::with_capacity(HEADER_LINES);
    for expected in [
        "version line",
        "kernel type",
        "kernel parameter -d",
        "kernel parameter -g",
        "kernel parameter -s",
        "kernel parameter -r",
        "kernel parameter -u",
        "highest feature index",
        "number of training documents",
        "number of support vectors plus 1",
        "threshold b",
    ] {
        match lines.next() {
            Some(entry) => header.push(entry),
            None => {
                let at = header.len() + 1;
                return Err(ParseError::line(at, ParseErrorKind::UnexpectedEof(expected)).into());
            }
        }
    }
    let err = |line: usize, kind: ParseErrorKind| ParseError::line(line, kind);

    let (ln, version) = header[0];
    if !version.trim_start().starts_with(VERSION_PREFIX) {
        return Err(err(
            ln,
            ParseErrorKind::Malformed(format!("expected `{VERSION_PREFIX} ...`")),
        )
        .into());
    }

    let (ln, line) = header[1];
    let tok = first_token(line);
    let kernel: i64 = tok
        .parse()
        .map_err(|_| err(ln, ParseErrorKind::BadNumber(tok.to_string())))?;
    if kernel != 0 {
        return Err(err(ln, ParseErrorKind::UnsupportedKernel(kernel)).into());
    }

    let (ln, line) = header[2];
    let tok = first_token(line);
    tok.parse::<i64>()
        .map_err(|_| err(ln, ParseErrorKind::BadNumber(tok.to_string())))?;
    for &(ln, line) in &header[3..6] {
        let tok = first_token(line);
        tok.parse::<f64>()
            .map_err(|_| err(ln, ParseErrorKind::BadNumber(tok.to_string())))?;
    }
    // header[6] is the free-form -u string.

    let (ln, line) = header[7];
    let num_features = parse_usize(first_token(line)).map_err(|k| err(ln, k))?;
    if num_features == 0 || num_features > MAX_DENSE_CELLS {
        return Err(err(
            ln,
            ParseErrorKind::Malformed(format!("highest feature index {num_features} out of range")),
        )
        .into());
    }

    let (ln, line) = header[8];
    parse_usize(first_token(line)).map_err(|k| err(ln, k))?;

    let (ln, line) = header[9];
    let declared_plus_one = parse_usize(first_token(line)).map_err(|k| err(ln, k))?;
    if declared_plus_one < 2 {
        return Err(err(
            ln,
            ParseErrorKind::Malformed(format!(
                "support vector count plus 1 must be at least 2, got {declared_plus_one}"
            )),
        )
        .into());
    }
    let declared = declared_plus_one - 1;

    let (ln, line) = header[10];
    let bias = parse_f32(first_token(line)).map_err(|k| err(ln, k))?;

    let mut support_vectors = Vec::new();
    let mut alpha_y = Vec::new();
    let mut last_line = header[10].0;
    for (ln, line) in lines {
        let body = strip_comment(line);
        if body.is_empty() {
            continue;
        }
        last_line = ln;
        if alpha_y.len() == declared {
            return Err(err(
                ln,
                ParseErrorKind::SvCount {
                    declared,
                    found: declared + 1,
                },
            )
            .into());
        }
        if (alpha_y.len() + 1) * num_features > MAX_DENSE_CELLS {
            return Err(err(
                ln,
                ParseErrorKind::Malformed("model too large to densify".into()),
            )
            .into());
        }
        let mut tokens = body.split_whitespace();
        let ay = parse_f32(tokens.next().unwrap_or("")).map_err(|k| err(ln, k))?;
        let pairs = parse_pairs(tokens, num_features).map_err(|k| err(ln, k))?;
        let start = support_vectors.len();
        support_vectors.resize(start + num_features, 0.0f32);
        for (index, value) in pairs {
            support_vectors[start + index - 1] = value;
        }
        alpha_y.push(ay);
    }
    if alpha_y.len() != declared {
        return Err(err(
            last_line,
            ParseErrorKind::SvCount {
                declared,
                found: alpha_y.len(),
            },
        )
        .into());
    }

    let model = SvmModel {
        num_sv: declared,
        num_features,
        support_vectors,
        alpha_y,
        bias,
        threshold: 0.0,
    };
    validate_model(&model)?;
    Ok(model)
}

/// Renders a model in the layout accepted by [`parse_model_file`].
///
/// Positive-zero features are omitted from the sparse lines; every value is
/// printed with the shortest decimal form that parses back to the same `f32`.
/// The threshold is not written.
pub fn write_model_file(model: &SvmModel) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("SVM-light Version V6.20\n");
    out.push_str("0 # kernel type\n");
    out.push_str("3 # kernel parameter -d\n");
    out.push_str("1 # kernel parameter -g\n");
    out.push_str("1 # kernel parameter -s\n");
    out.push_str("1 # kernel parameter -r\n");
    out.push_str("empty# kernel parameter -u\n");
    let _ = writeln!(out, "{} # highest feature index", model.num_features);
    let _ = writeln!(out, "{} # number of training documents", model.num_sv);
    let _ = writeln!(
        out,
        "{} # number of support vectors plus 1",
        model.num_sv + 1
    );
    let _ = writeln!(
        out,
        "{} # threshold b, each following line is a SV (starting with alpha*y)",
        model.bias
    );
    for (row, ay) in model.rows().zip(&model.alpha_y) {
        let _ = write!(out, "{ay}");
        for (j, v) in row.iter().enumerate() {
            if v.to_bits() != 0 {
                let _ = write!(out, " {}:{}", j + 1, v);
            }
        }
        out.push_str(" #\n");
    }
    out.into_bytes()
}

/// Parses one example line `<label> idx:val ... [# comment]` densified to
/// `width` features. Label `0` means unlabeled.
pub fn parse_instance_line(line: &str, width: usize) -> Result<(Option<Label>, TestInstance)> {
    parse_instance_at(line, width, 1)
}

fn parse_instance_at(
    line: &str,
    width: usize,
    line_no: usize,
) -> Result<(Option<Label>, TestInstance)> {
    let err = |kind| ParseError::line(line_no, kind);
    if width == 0 {
        return Err(err(ParseErrorKind::Malformed(
            "densification width must be positive".into(),
        ))
        .into());
    }
    let body = strip_comment(line.strip_suffix('\r').unwrap_or(line));
    let mut tokens = body.split_whitespace();
    let label_tok = tokens
        .next()
        .ok_or_else(|| err(ParseErrorKind::UnexpectedEof("label")))?;
    let label_val: f64 = label_tok
        .parse()
        .map_err(|_| err(ParseErrorKind::BadLabel(label_tok.to_string())))?;
    let label = if label_val == 1.0 {
        Some(Label::Melanoma)
    } else if label_val == -1.0 {
        Some(Label::Benign)
    } else if label_val == 0.0 {
        None
    } else {
        return Err(err(ParseErrorKind::BadLabel(label_tok.to_string())).into());
    };
    let pairs = parse_pairs(tokens, width).map_err(err)?;
    let mut features = vec![0.0f32; width];
    for (index, value) in pairs {
        features[index - 1] = value;
    }
    Ok((label, TestInstance::new(features)?))
}

/// One parsed line of a dataset file.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleLine {
    /// 1-based line number in the source text.
    pub line: usize,
    pub label: Option<Label>,
    pub instance: TestInstance,
}

/// Parses every non-blank, non-comment line of an example file.
pub fn parse_examples(text: &str, width: usize) -> Result<Vec<ExampleLine>> {
    text.split('\n')
        .enumerate()
        .filter(|(_, l)| !strip_comment(l).is_empty())
        .map(|(i, l)| {
            let (label, instance) = parse_instance_at(l, width, i + 1)?;
            Ok(ExampleLine {
                line: i + 1,
                label,
                instance,
            })
        })
        .collect()
}

/// Renders an instance as an example line with the given label (`0` if none).
pub fn write_instance_line(label: Option<Label>, x: &TestInstance) -> String {
    let mut out = match label {
        Some(l) => l.sign().to_string(),
        None => "0".to_string(),
    };
    for (j, v) in x.features().iter().enumerate() {
        if v.to_bits() != 0 {
            let _ = write!(out, " {}:{}", j + 1, v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::{Location, SvmError};
    use crate::model::gen_synthetic_model;

    fn parse_err(bytes: &[u8]) -> ParseError {
        match parse_model_file(bytes) {
            Err(SvmError::Parse(e)) => e,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    fn header(kernel: &str, highest: usize, plus_one: usize, b: &str) -> String {
        format!(
            "SVM-light Version V6.20\n{kernel} # kernel type\n3 # kernel parameter -d\n1 # kernel parameter -g\n\
             1 # kernel parameter -s\n1 # kernel parameter -r\nempty# kernel parameter -u\n{highest} # highest feature index\n\
             10 # number of training documents\n{plus_one} # number of support vectors plus 1\n{b} # threshold b\n"
        )
    }

    #[test]
    fn minimal_file() {
        let text = header("0", 1, 2, "0") + "1.0 1:1.0\n";
        let m = parse_model_file(text.as_bytes()).unwrap();
        assert_eq!((m.num_sv, m.num_features), (1, 1));
        assert_eq!(m.support_vectors, vec![1.0]);
        assert_eq!(m.alpha_y, vec![1.0]);
        assert_eq!(m.threshold, 0.0);
    }

    #[test]
    fn densifies_and_handles_crlf() {
        let text = (header("0", 4, 3, "-0.5") + "0.5 2:3 4:1 # sv\n-2 #\n").replace('\n', "\r\n");
        let m = parse_model_file(text.as_bytes()).unwrap();
        assert_eq!(
            m.support_vectors,
            vec![0.0, 3.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(m.alpha_y, vec![0.5, -2.0]);
        assert_eq!(m.bias, -0.5);
    }

    #[test]
    fn rejects_nonlinear_kernel() {
        let text = header("2", 1, 2, "0") + "1 1:1\n";
        let e = parse_err(text.as_bytes());
        assert_eq!(e.location, Location::Line(2));
        assert_eq!(e.kind, ParseErrorKind::UnsupportedKernel(2));
    }

    #[test]
    fn rejects_sv_count_mismatch() {
        let text = header("0", 2, 4, "0") + "1 1:1\n1 2:1\n";
        assert!(matches!(
            parse_err(text.as_bytes()).kind,
            ParseErrorKind::SvCount {
                declared: 3,
                found: 2
            }
        ));
        let text = header("0", 2, 2, "0") + "1 1:1\n1 2:1\n";
        let e = parse_err(text.as_bytes());
        assert_eq!(e.location, Location::Line(13));
        assert!(matches!(
            e.kind,
            ParseErrorKind::SvCount { declared: 1, .. }
        ));
    }

    #[test]
    fn rejects_bad_pairs() {
        let e = parse_err((header("0", 2, 2, "0") + "1 3:1\n").as_bytes());
        assert!(matches!(
            e.kind,
            ParseErrorKind::IndexRange { index: 3, limit: 2 }
        ));
        let e = parse_err((header("0", 2, 2, "0") + "1 2:1 1:1\n").as_bytes());
        assert!(matches!(e.kind, ParseErrorKind::IndexOrder { .. }));
        let e = parse_err((header("0", 2, 2, "0") + "1 2:x\n").as_bytes());
        assert!(matches!(e.kind, ParseErrorKind::BadNumber(_)));
        let e = parse_err((header("0", 2, 2, "0") + "1 2:inf\n").as_bytes());
        assert!(matches!(e.kind, ParseErrorKind::NonFinite(_)));
        let e = parse_err((header("0", 2, 2, "nan")).as_bytes());
        assert_eq!(e.location, Location::Line(11));
    }

    #[test]
    fn rejects_truncated_header() {
        let e = parse_err(b"SVM-light Version V6.20\n0\n");
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEof(_)));
        let e = parse_err(b"");
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEof(_)));
        let text = header("0", 1, 2, "0").replace("SVM-light Version V6.20", "libsvm");
        assert!(matches!(
            parse_err(text.as_bytes()).kind,
            ParseErrorKind::Malformed(_)
        ));
    }

    #[test]
    fn write_omits_zero_features() {
        let m = SvmModel::from_rows(&[vec![0.0]], vec![1.0], 0.0, 0.0).unwrap();
        let text = String::from_utf8(write_model_file(&m)).unwrap();
        assert_eq!(text.lines().last().unwrap(), "1 #");
    }

    #[test]
    fn write_declares_count_plus_one() {
        let m = gen_synthetic_model(248, 27, 3).unwrap();
        let text = String::from_utf8(write_model_file(&m)).unwrap();
        assert_eq!(
            text.lines().nth(9).unwrap(),
            "249 # number of support vectors plus 1"
        );
        assert_eq!(text.lines().nth(7).unwrap(), "27 # highest feature index");
        let back = parse_model_file(text.as_bytes()).unwrap();
        assert!(back.bit_eq(&m));
    }

    #[test]
    fn model_1_size_round_trip() {
        let m = gen_synthetic_model(61, 27, 1).unwrap();
        let back = parse_model_file(&write_model_file(&m)).unwrap();
        assert_eq!((back.num_sv, back.num_features), (61, 27));
        assert!(back.bit_eq(&m));
    }

    #[test]
    fn negative_zero_survives() {
        let m = SvmModel::from_rows(&[vec![-0.0, 0.0]], vec![-0.0], -0.0, 0.0).unwrap();
        let back = parse_model_file(&write_model_file(&m)).unwrap();
        assert!(back.bit_eq(&m));
    }

    #[test]
    fn instance_lines() {
        let (label, x) = parse_instance_line("1 1:0.5 3:0.25", 3).unwrap();
        assert_eq!(label, Some(Label::Melanoma));
        assert_eq!(x.features(), &[0.5, 0.0, 0.25]);

        let (label, x) = parse_instance_line("0 2:1.0", 2).unwrap();
        assert_eq!(label, None);
        assert_eq!(x.features(), &[0.0, 1.0]);

        let (label, _) = parse_instance_line("-1 1:2 # lesion 17", 2).unwrap();
        assert_eq!(label, Some(Label::Benign));

        assert!(parse_instance_line("1 3:1.0", 2).is_err());
        assert!(parse_instance_line("1 2:1 2:1", 2).is_err());
        assert!(parse_instance_line("1 2-1", 2).is_err());
        assert!(parse_instance_line("2 1:1", 2).is_err());
        assert!(parse_instance_line("", 2).is_err());
    }

    #[test]
    fn examples_skip_blank_lines_and_keep_numbers() {
        let rows = parse_examples("# header\n1 1:1\n\n-1 2:1\n", 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].line, 2);
        assert_eq!(rows[1].line, 4);
        let e = parse_examples("1 1:1\n1 5:1\n", 2).unwrap_err();
        assert!(matches!(
            e,
            SvmError::Parse(ParseError {
                location: Location::Line(2),
                ..
            })
        ));
    }

    #[test]
    fn instance_line_round_trip() {
        let x = TestInstance::new(vec![0.0, -1.5, 0.1, 0.0]).unwrap();
        let line = write_instance_line(Some(Label::Benign), &x);
        assert_eq!(line, "-1 2:-1.5 3:0.1");
        let (label, back) = parse_instance_line(&line, 4).unwrap();
        assert_eq!(label, Some(Label::Benign));
        assert_eq!(back, x);
    }
}
