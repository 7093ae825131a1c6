//! JSON frame files: `{"label": str, "dim": d, "vectors": [[[re, im], ...], ...]}`.

use std::fmt::Write as _;
use std::path::Path;

use incompat_core::{Frame, Tolerance, C64, CVector};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameFile {
    label: String,
    dim: usize,
    vectors: Vec<Vec<[f64; 2]>>,
}

pub fn parse_frame(text: &str, path: &Path, tol: &Tolerance) -> CliResult<Frame> {
    let file: FrameFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let invalid = |index: usize, message: String| CliError::InvalidVector { path: path.to_owned(), index, message };
    if file.dim == 0 {
        return Err(CliError::Usage(format!("{}: dim must be positive", path.display())));
    }
    if file.vectors.is_empty() {
        return Err(CliError::Usage(format!("{}: no vectors", path.display())));
    }
    let mut vectors = Vec::with_capacity(file.vectors.len());
    for (k, v) in file.vectors.iter().enumerate() {
        if v.len() != file.dim {
            return Err(invalid(k, format!("expected {} entries, found {}", file.dim, v.len())));
        }
        if v.iter().flatten().any(|x| !x.is_finite()) {
            return Err(invalid(k, "non-finite entry".into()));
        }
        let x = CVector::new(v.iter().map(|&[re, im]| C64::new(re, im)).collect())
            .map_err(|e| invalid(k, e.to_string()))?;
        if x.norm() <= tol.support_tol {
            return Err(invalid(k, "zero vector".into()));
        }
        vectors.push(x);
    }
    Frame::new(file.label, vectors, tol).map_err(CliError::core(path.display().to_string()))
}

pub fn read_frame(path: &Path, tol: &Tolerance) -> CliResult<Frame> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    parse_frame(&text, path, tol)
}

fn significant_digits(short: &str) -> usize {
    let mantissa = short.split(['e', 'E']).next().unwrap_or(short);
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let trimmed = digits.trim_start_matches('0');
    let trimmed = if mantissa.contains('.') { trimmed } else { trimmed.trim_end_matches('0') };
    trimmed.len().max(1)
}

/// Short form when it has at most 6 significant digits, else 17 significant
/// digits in scientific notation. Both parse back to the same double.
pub fn format_real(x: f64) -> String {
    let short = format!("{x}");
    if significant_digits(&short) <= 6 && short.len() <= 12 {
        short
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_frame(frame: &Frame) -> String {
    let mut out = String::new();
    let label = serde_json::to_string(frame.label()).expect("strings serialize");
    let _ = writeln!(out, "{{\n  \"label\": {label},\n  \"dim\": {},\n  \"vectors\": [", frame.dim());
    for (k, v) in frame.vectors().iter().enumerate() {
        let entries: Vec<String> =
            v.entries().iter().map(|z| format!("[{}, {}]", format_real(z.re), format_real(z.im))).collect();
        let sep = if k + 1 == frame.len() { "" } else { "," };
        let _ = writeln!(out, "    [{}]{sep}", entries.join(", "));
    }
    out.push_str("  ]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_and_long_forms() {
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(-2.0), "-2");
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(1.25), "1.25");
        assert_eq!(format_real(3f64.sqrt()), "1.7320508075688772e0");
        assert_eq!(format_real(1e-20), "9.9999999999999995e-21");
        for x in [3f64.sqrt(), 2.0 * 3f64.powf(0.25), -(2.0 * 3f64.sqrt() - 1.25).sqrt(), 2f64.sqrt() / 2.0, 1e300] {
            assert_eq!(format_real(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_frame("{\"label\": \"x\",\n \"dim\": 2,\n \"vectors\": [[[1, 0], [0 0]]]}", Path::new("f.json"), &Tolerance::default())
            .unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (3, 26)),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn invalid_vectors() {
        let tol = Tolerance::default();
        let zero = r#"{"label": "z", "dim": 2, "vectors": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}"#;
        assert!(matches!(parse_frame(zero, Path::new("z"), &tol), Err(CliError::InvalidVector { index: 1, .. })));
        let short = r#"{"label": "s", "dim": 2, "vectors": [[[1, 0]]]}"#;
        assert!(matches!(parse_frame(short, Path::new("s"), &tol), Err(CliError::InvalidVector { index: 0, .. })));
    }

    #[test]
    fn round_trip() {
        let tol = Tolerance::default();
        let f = incompat_core::frames::random_parseval_frame(3, 5, 11, &tol).unwrap();
        let g = parse_frame(&write_frame(&f), Path::new("g"), &tol).unwrap();
        assert_eq!(f, g);
    }
}
