//! Binary data files loaded into the accelerator's BRAM banks.
//!
//! Each stream is two little-endian `u32` words (rows, columns) followed by
//! `rows * columns` little-endian IEEE-754 `f32` words in row-major order.
//! Vectors use a column count of 1.
//!
//! | stream       | rows  | cols | payload                         |
//! |--------------|-------|------|---------------------------------|
//! | `*.svs.bin`  | N     | F    | support vectors, row-major      |
//! | `*.par.bin`  | N + 1 | 1    | `b, alpha_y[0], .., alpha_y[N-1]` |
//! | `*.x.bin`    | F     | 1    | test instance features          |

use crate::error::{ParseError, ParseErrorKind, Result, SvmError};
use crate::model::{validate_model, SvmModel, TestInstance};

pub const HEADER_BYTES: usize = 8;

/// The three byte streams consumed by the SoC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocFiles {
    pub svs: Vec<u8>,
    pub parameters: Vec<u8>,
    pub x: Vec<u8>,
}

/// A decoded stream: its declared geometry and payload words.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamImage {
    pub rows: usize,
    pub cols: usize,
    pub words: Vec<f32>,
}

fn encode(rows: usize, cols: usize, words: impl Iterator<Item = f32>) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_BYTES + rows * cols * 4);
    out.extend_from_slice(&(rows as u32).to_le_bytes());
    out.extend_from_slice(&(cols as u32).to_le_bytes());
    for w in words {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out
}

/// Serialises a model and one instance into the SoC file triple.
pub fn export_soc_files(model: &SvmModel, instance: &TestInstance) -> Result<SocFiles> {
    validate_model(model)?;
    if instance.len() != model.num_features {
        return Err(SvmError::mismatch(
            "test instance",
            model.num_features,
            instance.len(),
        ));
    }
    let svs = encode(
        model.num_sv,
        model.num_features,
        model.support_vectors.iter().copied(),
    );
    let parameters = encode(
        model.num_sv + 1,
        1,
        std::iter::once(model.bias).chain(model.alpha_y.iter().copied()),
    );
    let x = encode(instance.len(), 1, instance.features().iter().copied());
    Ok(SocFiles { svs, parameters, x })
}

/// Decodes one stream, consuming it a byte at a time the way the processor
/// reads the SD-card files before writing each assembled word to BRAM.
pub fn read_stream(bytes: &[u8]) -> Result<StreamImage, ParseError> {
    let mut header = [0u32; 2];
    let mut word = [0u8; 4];
    let mut words = Vec::new();
    let mut expected_words = 0usize;

    for (offset, &byte) in bytes.iter().enumerate() {
        word[offset % 4] = byte;
        if offset % 4 != 3 {
            continue;
        }
        let index = offset / 4;
        match index {
            0 | 1 => {
                header[index] = u32::from_le_bytes(word);
                if index == 1 {
                    let (rows, cols) = (header[0] as usize, header[1] as usize);
                    if rows == 0 || cols == 0 {
                        return Err(ParseError::offset(
                            0,
                            ParseErrorKind::Malformed(format!("empty geometry {rows}x{cols}")),
                        ));
                    }
                    let cells = (rows as u128) * (cols as u128);
                    let payload = (bytes.len() - HEADER_BYTES) as u128;
                    if cells * 4 != payload {
                        return Err(ParseError::offset(
                            HEADER_BYTES,
                            ParseErrorKind::Malformed(format!(
                                "header declares {rows}x{cols} words ({} bytes) but payload has {payload} bytes",
                                cells * 4
                            )),
                        ));
                    }
                    expected_words = cells as usize;
                    words.reserve_exact(expected_words);
                }
            }
            _ => {
                let v = f32::from_le_bytes(word);
                if !v.is_finite() {
                    return Err(ParseError::offset(
                        offset - 3,
                        ParseErrorKind::NonFinite(format!("{v}")),
                    ));
                }
                words.push(v);
            }
        }
    }
    if bytes.len() < HEADER_BYTES {
        return Err(ParseError::offset(
            bytes.len(),
            ParseErrorKind::UnexpectedEof("8-byte dimension header"),
        ));
    }
    debug_assert_eq!(words.len(), expected_words);
    Ok(StreamImage {
        rows: header[0] as usize,
        cols: header[1] as usize,
        words,
    })
}

/// Checks that three decoded streams describe one consistent model and
/// instance, returning `(N, F)`.
pub fn check_geometry(
    svs: &StreamImage,
    parameters: &StreamImage,
    x: &StreamImage,
) -> Result<(usize, usize), ParseErrorKind> {
    let (n, f) = (svs.rows, svs.cols);
    if parameters.cols != 1 || parameters.rows != n + 1 {
        return Err(ParseErrorKind::Malformed(format!(
            "parameters stream is {}x{}, expected {}x1 for {n} support vectors",
            parameters.rows,
            parameters.cols,
            n + 1
        )));
    }
    if x.cols != 1 || x.rows != f {
        return Err(ParseErrorKind::Malformed(format!(
            "x stream is {}x{}, expected {f}x1",
            x.rows, x.cols
        )));
    }
    Ok((n, f))
}

/// Assembles a model and instance from decoded, geometry-checked streams.
pub(crate) fn assemble(
    svs: &StreamImage,
    parameters: &StreamImage,
    x: &StreamImage,
    threshold: f32,
) -> Result<(SvmModel, TestInstance)> {
    let model = SvmModel {
        num_sv: svs.rows,
        num_features: svs.cols,
        support_vectors: svs.words.clone(),
        alpha_y: parameters.words[1..].to_vec(),
        bias: parameters.words[0],
        threshold,
    };
    validate_model(&model)?;
    Ok((model, TestInstance::new(x.words.clone())?))
}

/// Inverse of [`export_soc_files`]; the threshold is set to 0.
pub fn import_soc_files(
    svs: &[u8],
    parameters: &[u8],
    x: &[u8],
) -> Result<(SvmModel, TestInstance)> {
    let svs = read_stream(svs)?;
    let parameters = read_stream(parameters)?;
    let x = read_stream(x)?;
    check_geometry(&svs, &parameters, &x).map_err(|k| ParseError::offset(0, k))?;
    assemble(&svs, &parameters, &x, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gen_synthetic_instance, gen_synthetic_model};

    fn payload(bytes: &[u8]) -> Vec<f32> {
        bytes[HEADER_BYTES..]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect()
    }

    #[test]
    fn model_1_svs_stream_length() {
        let m = gen_synthetic_model(61, 27, 1).unwrap();
        let files = export_soc_files(&m, &gen_synthetic_instance(27, 1).unwrap()).unwrap();
        assert_eq!(files.svs.len(), 6596);
        assert_eq!(files.parameters.len(), 8 + 62 * 4);
        assert_eq!(files.x.len(), 8 + 27 * 4);
        assert_eq!(payload(&files.parameters)[0].to_bits(), m.bias.to_bits());
        assert_eq!(&files.svs[..8], &[61, 0, 0, 0, 27, 0, 0, 0]);
    }

    #[test]
    fn minimal_parameter_layout() {
        let m = SvmModel::from_rows(&[vec![2.0]], vec![1.0], 0.0, 0.0).unwrap();
        let files = export_soc_files(&m, &TestInstance::new(vec![1.0]).unwrap()).unwrap();
        assert_eq!(payload(&files.parameters), vec![0.0, 1.0]);
        assert_eq!(&files.parameters[..8], &[2, 0, 0, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn export_rejects_width_mismatch() {
        let m = gen_synthetic_model(2, 3, 0).unwrap();
        assert!(matches!(
            export_soc_files(&m, &gen_synthetic_instance(4, 0).unwrap()),
            Err(SvmError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn round_trip_resets_threshold() {
        let mut m = gen_synthetic_model(7, 5, 9).unwrap();
        m.threshold = 0.75;
        let x = gen_synthetic_instance(5, 9).unwrap();
        let files = export_soc_files(&m, &x).unwrap();
        let (back, bx) = import_soc_files(&files.svs, &files.parameters, &files.x).unwrap();
        m.threshold = 0.0;
        assert!(back.bit_eq(&m));
        assert_eq!(bx, x);
    }

    #[test]
    fn import_rejects_inconsistent_parameters() {
        let m = gen_synthetic_model(3, 2, 0).unwrap();
        let x = gen_synthetic_instance(2, 0).unwrap();
        let files = export_soc_files(&m, &x).unwrap();
        let other = export_soc_files(&gen_synthetic_model(4, 2, 0).unwrap(), &x).unwrap();
        assert!(matches!(
            import_soc_files(&files.svs, &other.parameters, &files.x),
            Err(SvmError::Parse(_))
        ));
    }

    #[test]
    fn import_rejects_degenerate_streams() {
        let files = export_soc_files(
            &gen_synthetic_model(2, 2, 0).unwrap(),
            &gen_synthetic_instance(2, 0).unwrap(),
        )
        .unwrap();
        assert!(import_soc_files(&[], &files.parameters, &files.x).is_err());
        let truncated = &files.svs[..files.svs.len() - 1];
        assert!(import_soc_files(truncated, &files.parameters, &files.x).is_err());
        let mut nan = files.x.clone();
        nan[8..12].copy_from_slice(&f32::NAN.to_le_bytes());
        let e = import_soc_files(&files.svs, &files.parameters, &nan).unwrap_err();
        assert!(matches!(
            e,
            SvmError::Parse(ParseError {
                kind: ParseErrorKind::NonFinite(_),
                ..
            })
        ));
        let zero_rows = [0u8, 0, 0, 0, 1, 0, 0, 0];
        assert!(read_stream(&zero_rows).is_err());
    }
}
