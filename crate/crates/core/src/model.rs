//! Shared domain types, the information measure and the alphabet-size
//! optimum of unsorted classical assembly.
//!
//! The number of distinct chains `N = a^n` is never formed; everything works
//! with `ln N = n ln a`.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};
use crate::rng::{replicate_rng, Stream};

/// The repertoire of building-block types.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetSpec {
    a: usize,
    labels: Vec<String>,
}

impl AlphabetSpec {
    pub fn size(&self) -> usize {
        self.a
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).map(String::as_str)
    }
}

fn preset_labels(a: usize) -> Vec<String> {
    let preset: &[&str] = match a {
        1 => &["A"],
        2 => &["A", "T"],
        3 => &["A", "C", "G"],
        4 => &["A", "C", "G", "T"],
        _ => &[],
    };
    if preset.is_empty() {
        (1..=a).map(|i| format!("B{i}")).collect()
    } else {
        preset.iter().map(|s| (*s).to_owned()).collect()
    }
}

/// Builds a validated alphabet of `a` symbols.
///
/// Without explicit labels the nucleotide presets are used for `a <= 4`
/// (`A`, `AT`, `ACG`, `ACGT`) and `B1..Ba` otherwise.
pub fn make_alphabet(a: usize, labels: Option<Vec<String>>) -> Result<AlphabetSpec> {
    if a == 0 {
        return Err(Error::EmptyAlphabet(0));
    }
    let labels = match labels {
        None => preset_labels(a),
        Some(labels) => {
            if labels.len() != a {
                return Err(Error::LabelCount { expected: a, got: labels.len() });
            }
            let mut seen = HashSet::with_capacity(a);
            for label in &labels {
                if !seen.insert(label.as_str()) {
                    return Err(Error::DuplicateLabel(label.clone()));
                }
            }
            labels
        }
    };
    Ok(AlphabetSpec { a, labels })
}

/// A chain to assemble: `n` target positions over an alphabet of size `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainTask {
    a: usize,
    target: Vec<usize>,
    ln_information: f64,
}

impl ChainTask {
    pub fn new(alphabet: &AlphabetSpec, target: Vec<usize>) -> Result<Self> {
        if target.is_empty() {
            return Err(Error::EmptyChain);
        }
        let a = alphabet.size();
        if let Some(&index) = target.iter().find(|&&t| t >= a) {
            return Err(Error::TargetOutOfRange { index, a });
        }
        let ln_information = ln_information(a, target.len())?;
        Ok(Self { a, target, ln_information })
    }

    /// Target sequence cycling through the alphabet: 0, 1, .., a-1, 0, ..
    pub fn cyclic(alphabet: &AlphabetSpec, n: usize) -> Result<Self> {
        let a = alphabet.size();
        Self::new(alphabet, (0..n).map(|i| i % a).collect())
    }

    /// Uniformly random target sequence.
    pub fn random(alphabet: &AlphabetSpec, n: usize, seed: u64) -> Result<Self> {
        let a = alphabet.size();
        let mut rng = replicate_rng(seed, Stream::Classical, u64::MAX);
        Self::new(alphabet, (0..n).map(|_| rng.random_range(0..a)).collect())
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.a
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    /// `ln N` for this task.
    pub fn ln_information(&self) -> f64 {
        self.ln_information
    }
}

/// Time scales of the two assembly mechanisms, in abstract units.
///
/// The classical per-base time `t_a = a * t_d` is derived, not stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingParams {
    t_d: f64,
    t_r: f64,
    time_unit: String,
}

impl TimingParams {
    pub fn new(t_d: f64, t_r: f64) -> Result<Self> {
        Ok(Self {
            t_d: positive("t_d", t_d)?,
            t_r: positive("t_r", t_r)?,
            time_unit: "arb".to_owned(),
        })
    }

    pub fn with_unit(mut self, unit: impl Into<String>) -> Self {
        self.time_unit = unit.into();
        self
    }

    pub fn t_d(&self) -> f64 {
        self.t_d
    }

    pub fn t_r(&self) -> f64 {
        self.t_r
    }

    pub fn time_unit(&self) -> &str {
        &self.time_unit
    }

    /// Expected classical time per assembled base, `a * t_d`.
    pub fn t_a(&self, a: usize) -> f64 {
        a as f64 * self.t_d
    }
}

/// `ln N = n ln a`, the information content of a length-`n` chain.
pub fn ln_information(a: usize, n: usize) -> Result<f64> {
    if a == 0 {
        return Err(Error::EmptyAlphabet(0));
    }
    if n == 0 {
        return Err(Error::EmptyChain);
    }
    Ok(n as f64 * (a as f64).ln())
}

/// `a / ln a`: classical assembly time in units of `t_d ln N`.
pub fn classical_coefficient(a: f64) -> Result<f64> {
    if a.is_nan() || a <= 1.0 || !a.is_finite() {
        return Err(Error::CoefficientDomain(a));
    }
    Ok(a / a.ln())
}

fn coefficient_unchecked(a: f64) -> f64 {
    a / a.ln()
}

/// Golden-section minimisation of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Real alphabet size minimising `a / ln a`, found numerically on `(1, 10)`.
pub fn optimal_alphabet_real() -> f64 {
    golden_section_min(coefficient_unchecked, 1.0 + 1e-6, 10.0, 1e-9)
}

/// Integer alphabet size in `2..=a_max` minimising `a / ln a`.
///
/// Ties go to the smaller alphabet.
pub fn optimal_alphabet_integer(a_max: usize) -> Result<usize> {
    if a_max < 2 {
        return Err(Error::AlphabetOutOfRange { a: a_max, min: 2, max: usize::MAX });
    }
    let mut best = (2usize, coefficient_unchecked(2.0));
    for a in 3..=a_max {
        let c = coefficient_unchecked(a as f64);
        if c < best.1 {
            best = (a, c);
        }
    }
    Ok(best.0)
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let four = make_alphabet(4, None).unwrap();
        assert_eq!(four.labels(), ["A", "C", "G", "T"]);
        assert_eq!(make_alphabet(1, None).unwrap().labels(), ["A"]);
        assert_eq!(make_alphabet(6, None).unwrap().labels()[5], "B6");
    }

    #[test]
    fn explicit_labels_pass_through() {
        let labels: Vec<String> = ["X", "Y", "Z"].iter().map(|s| s.to_string()).collect();
        let alpha = make_alphabet(3, Some(labels.clone())).unwrap();
        assert_eq!(alpha.size(), 3);
        assert_eq!(alpha.labels(), labels.as_slice());
    }

    #[test]
    fn alphabet_errors() {
        assert_eq!(make_alphabet(0, None), Err(Error::EmptyAlphabet(0)));
        let dup = vec!["A".to_string(), "A".to_string()];
        assert_eq!(make_alphabet(2, Some(dup)), Err(Error::DuplicateLabel("A".into())));
        assert!(matches!(
            make_alphabet(3, Some(vec!["A".into()])),
            Err(Error::LabelCount { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn information_values() {
        // 10 ln 4 and ln 2, evaluated to 30 digits with mpmath.
        assert!((ln_information(4, 10).unwrap() - 13.862_943_611_198_906).abs() < 1e-12);
        assert_eq!(ln_information(1, 100).unwrap(), 0.0);
        assert!((ln_information(2, 1).unwrap() - 0.693_147_180_559_945_3).abs() < 1e-15);
        assert_eq!(ln_information(0, 1), Err(Error::EmptyAlphabet(0)));
        assert_eq!(ln_information(2, 0), Err(Error::EmptyChain));
    }

    #[test]
    fn chain_task_checks_targets() {
        let alpha = make_alphabet(3, None).unwrap();
        assert!(matches!(
            ChainTask::new(&alpha, vec![0, 3]),
            Err(Error::TargetOutOfRange { index: 3, a: 3 })
        ));
        let task = ChainTask::cyclic(&alpha, 7).unwrap();
        assert_eq!(task.target(), [0, 1, 2, 0, 1, 2, 0]);
        assert!((task.ln_information() - 7.0 * 3f64.ln()).abs() < 1e-12);
        let random = ChainTask::random(&alpha, 50, 9).unwrap();
        assert_eq!(random, ChainTask::random(&alpha, 50, 9).unwrap());
        assert!(random.target().iter().all(|&t| t < 3));
    }

    #[test]
    fn timing_rejects_non_positive() {
        assert!(TimingParams::new(0.0, 1.0).is_err());
        assert!(TimingParams::new(1.0, -2.0).is_err());
        assert!(TimingParams::new(1.0, f64::NAN).is_err());
        let t = TimingParams::new(0.5, 2.0).unwrap();
        assert_eq!(t.t_a(4), 2.0);
        assert_eq!(t.time_unit(), "arb");
    }

    #[test]
    fn coefficient_table() {
        assert!((classical_coefficient(2.0).unwrap() - 2.8854).abs() < 1e-4);
        assert!((classical_coefficient(3.0).unwrap() - 2.7307).abs() < 1e-4);
        assert!((classical_coefficient(4.0).unwrap() - 2.8854).abs() < 1e-4);
        assert!(matches!(classical_coefficient(1.0), Err(Error::CoefficientDomain(_))));
        assert!(classical_coefficient(0.5).is_err());
    }

    #[test]
    fn real_optimum_is_e() {
        let a = optimal_alphabet_real();
        assert!((a - std::f64::consts::E).abs() < 1e-6, "{a}");
        let c = |x| classical_coefficient(x).unwrap();
        assert!(c(a) <= c(a + 0.01) && c(a) <= c(a - 0.01));
        assert!((c(2.71828) - 2.71828).abs() < 1e-5);
    }

    #[test]
    fn integer_optimum_is_three() {
        assert_eq!(optimal_alphabet_integer(10), Ok(3));
        assert_eq!(optimal_alphabet_integer(2), Ok(2));
        assert_eq!(optimal_alphabet_integer(100), Ok(3));
        assert!(optimal_alphabet_integer(1).is_err());
    }
}
