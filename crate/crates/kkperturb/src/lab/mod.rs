//! Sweep engine, trend classification, report persistence, and the CLI
//! suites binding the other modules into reproducible verification runs.

pub mod cli;
pub mod suites;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

use crate::error::{Error, Result};
use crate::opcore::{least_squares_slope, ToleranceConfig};

/// Slope at or below which a sweep counts as evidence of boundedness.
pub const PLATEAU_SLOPE: f64 = 0.05;
/// Slope at or above which a sweep counts as divergent.
pub const DIVERGENT_SLOPE: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrendClass {
    BoundedPlateau,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for TrendClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TrendClass::BoundedPlateau => write!(f, "bounded-plateau"),
            TrendClass::Divergent => write!(f, "divergent"),
            TrendClass::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Per-truncation-size records of one named scalar observable.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepReport {
    pub suite: String,
    pub observable: String,
    pub parameter: String,
    pub parameters: Vec<f64>,
    pub values: Vec<f64>,
    pub classification: TrendClass,
    pub slope: f64,
    pub seed: u64,
    pub config_hash: String,
    /// Set when the observable failed partway; the report then carries the
    /// values collected so far.
    pub failure: Option<String>,
}

/// Fitted log-log slope over the top half of the sweep, and its class.
///
/// A sweep that is identically (numerically) zero counts as a plateau: the
/// observable vanished, which is the strongest form of boundedness seen at
/// truncation.
pub fn classify(parameters: &[f64], values: &[f64]) -> (f64, TrendClass) {
    let n = parameters.len();
    let start = n / 2;
    let pts: Vec<(f64, f64)> = parameters[start..]
        .iter()
        .zip(values[start..].iter())
        .map(|(&p, &v)| (p.ln(), v.max(1e-300).ln()))
        .collect();
    if values.iter().all(|&v| v.abs() <= 1e-300) {
        return (0.0, TrendClass::BoundedPlateau);
    }
    let slope = least_squares_slope(&pts);
    let class = if slope.is_nan() {
        TrendClass::Inconclusive
    } else if slope <= PLATEAU_SLOPE {
        TrendClass::BoundedPlateau
    } else if slope >= DIVERGENT_SLOPE {
        TrendClass::Divergent
    } else {
        TrendClass::Inconclusive
    };
    (slope, class)
}

/// Evaluate `observable` at every parameter value and classify the trend.
///
/// Parameters must be strictly increasing with at least three entries. An
/// observable failure produces a partial report carrying the failure text
/// rather than an error.
pub fn run_sweep(
    suite: &str,
    observable: &str,
    parameter: &str,
    parameters: &[f64],
    seed: u64,
    config_hash: &str,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<SweepReport> {
    if parameters.len() < 3 {
        return Err(Error::Parameter(format!(
            "sweep needs at least 3 parameter values, got {}",
            parameters.len()
        )));
    }
    if !parameters.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Parameter("sweep parameters must be strictly increasing".into()));
    }
    let mut values = Vec::with_capacity(parameters.len());
    let mut failure = None;
    let mut used = Vec::new();
    for &p in parameters {
        match f(p) {
            Ok(v) => {
                values.push(v);
                used.push(p);
            }
            Err(e) => {
                failure = Some(format!("at {parameter} = {p}: {e}"));
                break;
            }
        }
    }
    let (slope, classification) = if failure.is_none() && !values.is_empty() {
        classify(&used, &values)
    } else {
        (f64::NAN, TrendClass::Inconclusive)
    };
    Ok(SweepReport {
        suite: suite.to_string(),
        observable: observable.to_string(),
        parameter: parameter.to_string(),
        parameters: used,
        values,
        classification,
        slope,
        seed,
        config_hash: config_hash.to_string(),
        failure,
    })
}

/// Configuration of one verification run; hashed into every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub suite: String,
    pub seed: u64,
    /// Identity of the pseudo-random generator.
    pub rng: String,
    pub tolerances: ToleranceConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_max_doubled: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_monomials: Option<Vec<(i64, i64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl RunConfig {
    pub fn new(suite: &str, seed: u64) -> Self {
        RunConfig {
            suite: suite.to_string(),
            seed,
            rng: crate::randmat::RNG_ALGORITHM.to_string(),
            tolerances: ToleranceConfig::default(),
            draws: None,
            theta: None,
            tau: None,
            q: None,
            l_max_doubled: None,
            n_list: None,
            radii: None,
            beta: None,
            kappa: None,
            k_monomials: None,
            output: None,
        }
    }

    /// SHA-256 of the canonical serialized config.
    pub fn config_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// CSV rendering with the fixed column set; one row per parameter value.
pub fn reports_to_csv(reports: &[SweepReport]) -> String {
    let mut out = String::from("suite,observable,parameter,value,seed,config_hash\n");
    for r in reports {
        for (p, v) in r.parameters.iter().zip(r.values.iter()) {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.suite, r.observable, p, v, r.seed, r.config_hash
            ));
        }
    }
    out
}

/// Write one JSON document plus a companion CSV next to it.
///
/// Re-emitting reports for a config hash already present with different
/// values is a determinism violation and is rejected.
pub fn emit_report(reports: &[SweepReport], path: &Path) -> Result<()> {
    for (i, r) in reports.iter().enumerate() {
        for other in &reports[i + 1..] {
            if r.config_hash == other.config_hash
                && r.observable == other.observable
                && r.parameters == other.parameters
                && r.values != other.values
            {
                return Err(Error::Determinism { config_hash: r.config_hash.clone() });
            }
        }
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let json = serde_json::to_string_pretty(reports)?;
    std::fs::write(path, json)?;
    std::fs::write(path.with_extension("csv"), reports_to_csv(reports))?;
    Ok(())
}

pub fn read_reports(path: &Path) -> Result<Vec<SweepReport>> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sequence_is_plateau() {
        let r = run_sweep(
            "t",
            "const",
            "n",
            &[1.0, 2.0, 3.0, 4.0],
            0,
            "h",
            |_| Ok(5.0),
        )
        .unwrap();
        assert_eq!(r.classification, TrendClass::BoundedPlateau);
        assert!(r.slope.abs() < 1e-12);
    }

    #[test]
    fn linear_growth_is_divergent() {
        let r = run_sweep("t", "lin", "n", &[8.0, 16.0, 32.0, 64.0], 0, "h", Ok).unwrap();
        assert_eq!(r.classification, TrendClass::Divergent);
        assert!((r.slope - 1.0).abs() < 1e-10);
    }

    #[test]
    fn saturating_observable_is_plateau() {
        // 3 + 1/n: slope of the top half tends to zero.
        let r = run_sweep(
            "t",
            "sat",
            "n",
            &[8.0, 16.0, 32.0, 64.0],
            0,
            "h",
            |n| Ok(3.0 + 1.0 / n),
        )
        .unwrap();
        assert_eq!(r.classification, TrendClass::BoundedPlateau);
        // independent closed-form fit over the top half {32, 64}
        let expect = ((3.0 + 1.0 / 64.0f64).ln() - (3.0 + 1.0 / 32.0f64).ln())
            / (64.0f64.ln() - 32.0f64.ln());
        assert!((r.slope - expect).abs() < 1e-12);
    }

    #[test]
    fn zero_sweep_is_plateau() {
        let r = run_sweep("t", "zero", "n", &[1.0, 2.0, 3.0], 0, "h", |_| Ok(0.0)).unwrap();
        assert_eq!(r.classification, TrendClass::BoundedPlateau);
    }

    #[test]
    fn failure_yields_partial_report() {
        let r = run_sweep("t", "fail", "n", &[1.0, 2.0, 3.0], 0, "h", |p| {
            if p > 1.5 {
                Err(Error::Parameter("boom".into()))
            } else {
                Ok(1.0)
            }
        })
        .unwrap();
        assert!(r.failure.is_some());
        assert_eq!(r.values.len(), 1);
        assert_eq!(r.classification, TrendClass::Inconclusive);
    }

    #[test]
    fn sweep_preconditions() {
        assert!(run_sweep("t", "o", "n", &[1.0, 2.0], 0, "h", Ok).is_err());
        assert!(run_sweep("t", "o", "n", &[2.0, 1.0, 3.0], 0, "h", Ok).is_err());
    }

    #[test]
    fn emit_and_read_back_roundtrip() {
        let dir = std::env::temp_dir().join("kkperturb_lab_test");
        let path = dir.join("single.json");
        let report = run_sweep("suite", "obs", "n", &[1.0, 2.0, 4.0], 7, "hash", |p| Ok(2.0 * p))
            .unwrap();
        emit_report(std::slice::from_ref(&report), &path).unwrap();
        let back = read_reports(&path).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0], report);
        let csv = std::fs::read_to_string(path.with_extension("csv")).unwrap();
        assert!(csv.starts_with("suite,observable,parameter,value,seed,config_hash\n"));
        assert_eq!(csv.lines().count(), 4);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn emit_empty_list_is_valid() {
        let dir = std::env::temp_dir().join("kkperturb_lab_empty");
        let path = dir.join("empty.json");
        emit_report(&[], &path).unwrap();
        assert_eq!(read_reports(&path).unwrap().len(), 0);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn duplicate_hash_different_values_rejected() {
        let a = run_sweep("s", "o", "n", &[1.0, 2.0, 3.0], 0, "same", |p| Ok(p)).unwrap();
        let b = run_sweep("s", "o", "n", &[1.0, 2.0, 3.0], 0, "same", |p| Ok(p + 1.0)).unwrap();
        let dir = std::env::temp_dir().join("kkperturb_lab_dup");
        let err = emit_report(&[a, b], &dir.join("dup.json"));
        assert!(matches!(err, Err(Error::Determinism { .. })));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn config_hash_is_stable_and_sensitive() {
        let c1 = RunConfig::new("stampfli", 7);
        let c2 = RunConfig::new("stampfli", 7);
        assert_eq!(c1.config_hash(), c2.config_hash());
        let mut c3 = RunConfig::new("stampfli", 8);
        assert_ne!(c1.config_hash(), c3.config_hash());
        c3.seed = 7;
        assert_eq!(c1.config_hash(), c3.config_hash());
    }
}
