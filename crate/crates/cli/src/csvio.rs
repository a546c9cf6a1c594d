//! Plain-text table output and the rate-sample CSV schema.
//!
//! Floats are written with 17 significant digits so that parsing them back
//! yields the identical `f64`.

use std::fmt::Write as _;
use std::path::Path;

use repliq_core::RateSample;
use serde::Deserialize;

use crate::error::{CliError, Result};

/// Header of the rate-sample CSV, in column order.
pub const RATE_SAMPLE_HEADER: [&str; 3] = ["a", "observed_rate", "sigma_rel"];

/// Formats `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.0000000000000000".to_owned();
    }
    let sci = format!("{:.16e}", x);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = 16 - exp;
    if (0..=24).contains(&decimals) {
        format!("{:.*}", decimals as usize, x)
    } else {
        sci
    }
}

/// Simple CSV table builder; cells must not contain commas or quotes.
#[derive(Debug, Default)]
pub struct Table {
    out: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut t = Self::default();
        t.row(header.iter().map(|s| (*s).to_owned()));
        t
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = String>) -> &mut Self {
        let line = cells.into_iter().collect::<Vec<_>>().join(",");
        let _ = writeln!(self.out, "{line}");
        self
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub fn write_rate_samples(samples: &[RateSample]) -> String {
    let mut t = Table::new(&RATE_SAMPLE_HEADER);
    for s in samples {
        t.row([s.a.to_string(), fmt_f64(s.observed_rate), fmt_f64(s.sigma_rel)]);
    }
    t.finish()
}

#[derive(Debug, Deserialize)]
struct RawSample {
    a: usize,
    observed_rate: f64,
    sigma_rel: f64,
}

/// Parses rate samples; errors name the offending 1-based line.
pub fn parse_rate_samples(text: &str, path: &Path) -> Result<Vec<RateSample>> {
    let parse_err = |line: u64, message: String| CliError::Parse { path: path.to_owned(), line, message };
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    if header.iter().ne(RATE_SAMPLE_HEADER) {
        return Err(parse_err(
            1,
            format!("expected header `{}`, found `{}`", RATE_SAMPLE_HEADER.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let raw: RawSample = record
            .deserialize(Some(&header))
            .map_err(|e| parse_err(line, format!("malformed row `{}`: {e}", record.iter().collect::<Vec<_>>().join(","))))?;
        let sample = RateSample::new(raw.a, raw.observed_rate, raw.sigma_rel).map_err(|e| parse_err(line, e.to_string()))?;
        samples.push(sample);
    }
    if samples.is_empty() {
        return Err(parse_err(1, "no data rows".to_owned()));
    }
    Ok(samples)
}

pub fn read_rate_samples(path: &Path) -> Result<Vec<RateSample>> {
    let text = std::fs::read_to_string(path)?;
    parse_rate_samples(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [2.885_390_081_777_926_8, 0.25, 300.0, 1e-12, 6.02e23, -3.5, 1.0 / 3.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(0.25), "0.25000000000000000");
        assert_eq!(fmt_f64(2.885_390_081_777_926_8), "2.8853900817779268");
    }

    #[test]
    fn rate_csv_round_trip() {
        let samples = vec![RateSample::new(1, 1.0, 0.05).unwrap(), RateSample::new(3, 1.0 / 3.0, 0.05).unwrap()];
        let text = write_rate_samples(&samples);
        assert!(text.starts_with("a,observed_rate,sigma_rel\n"));
        assert!(text.ends_with('\n'));
        assert_eq!(parse_rate_samples(&text, Path::new("x.csv")).unwrap(), samples);
    }

    #[test]
    fn malformed_row_names_its_line() {
        let text = "a,observed_rate,sigma_rel\n1,1.0,0.05\n2,abc,0.05\n";
        let err = parse_rate_samples(text, Path::new("in.csv")).unwrap_err();
        match &err {
            CliError::Parse { line, message, .. } => {
                assert_eq!(*line, 3);
                assert!(message.contains("2,abc,0.05"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn header_and_value_errors() {
        let err = parse_rate_samples("a,rate\n1,1\n", Path::new("h.csv")).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 1, .. }));
        let err = parse_rate_samples("a,observed_rate,sigma_rel\n9,1.0,0.1\n", Path::new("v.csv")).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }));
        let err = parse_rate_samples("a,observed_rate,sigma_rel\n", Path::new("e.csv")).unwrap_err();
        assert!(matches!(err, CliError::Parse { .. }));
    }
}
