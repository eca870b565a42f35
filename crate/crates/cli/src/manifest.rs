//! Run configuration assembled from a TOML manifest and command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use pbspm_core::evaluation::{ExperimentConfig, Method, ScoreAveraging};
use pbspm_core::spectral::{DEFAULT_GAP_THRESHOLD, DEFAULT_P_H};
use pbspm_core::EdgeFormat;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Csv,
    Json,
}

impl FromStr for Emit {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Emit::Csv),
            "json" => Ok(Emit::Json),
            other => Err(CliError::Usage(format!("unknown emit format `{other}`"))),
        }
    }
}

/// Everything a subcommand needs to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunManifest {
    pub input: PathBuf,
    pub format: EdgeFormat,
    /// Label used in file names and CSV rows; defaults to the input file stem.
    pub dataset: Option<String>,
    pub methods: Vec<Method>,
    pub alphas: Vec<f64>,
    pub p_freshers: Vec<f64>,
    /// Truncation sizes for the m-sweep: `"all"`, `"a:b[:step]"` or a comma list.
    pub m_grid: Option<String>,
    pub p_h: f64,
    pub realizations: usize,
    pub m: Option<usize>,
    pub seed: u64,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    pub probe_fraction: f64,
    pub unfiltered_l: bool,
    pub katz_damping: Option<f64>,
    pub katz_max_path_length: Option<usize>,
    pub srw_steps: usize,
    pub gap_threshold: f64,
    pub score_averaging: ScoreAveraging,
    pub out_dir: PathBuf,
    pub emit: Vec<Emit>,
}

impl Default for RunManifest {
    fn default() -> Self {
        let exp = ExperimentConfig::default();
        RunManifest {
            input: PathBuf::new(),
            format: EdgeFormat::Tsv,
            dataset: None,
            methods: vec![Method::Pbspm],
            alphas: vec![exp.alpha],
            p_freshers: vec![exp.p_fresher],
            m_grid: None,
            p_h: DEFAULT_P_H,
            realizations: exp.realizations,
            m: None,
            seed: 0,
            l: None,
            probe_fraction: exp.probe_fraction,
            unfiltered_l: false,
            katz_damping: None,
            katz_max_path_length: None,
            srw_steps: exp.srw_steps,
            gap_threshold: DEFAULT_GAP_THRESHOLD,
            score_averaging: ScoreAveraging::Precision,
            out_dir: PathBuf::from("results"),
            emit: vec![Emit::Csv, Emit::Json],
        }
    }
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.input.as_os_str().is_empty() {
            return Err(CliError::Usage("no input file given (--input)".into()));
        }
        if !self.input.is_file() {
            let missing = std::io::Error::new(std::io::ErrorKind::NotFound, "input file does not exist");
            return Err(CliError::io(&self.input, missing));
        }
        if self.methods.is_empty() {
            return Err(CliError::Usage("at least one method is required".into()));
        }
        if self.alphas.is_empty() || self.p_freshers.is_empty() {
            return Err(CliError::Usage("alpha and p_fresher grids must be non-empty".into()));
        }
        Ok(())
    }

    pub fn dataset_name(&self) -> String {
        self.dataset.clone().unwrap_or_else(|| {
            self.input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".into())
        })
    }

    pub fn emits(&self, kind: Emit) -> bool {
        self.emit.contains(&kind)
    }

    /// Experiment settings for `method` at the first grid point.
    pub fn experiment(&self, method: Method) -> ExperimentConfig {
        ExperimentConfig {
            method,
            alpha: self.alphas[0],
            p_fresher: self.p_freshers[0],
            p_h: self.p_h,
            realizations: self.realizations,
            m: self.m,
            seed: self.seed,
            l: self.l,
            probe_fraction: self.probe_fraction,
            unfiltered_l: self.unfiltered_l,
            katz_damping: self.katz_damping,
            katz_max_path_length: self.katz_max_path_length,
            srw_steps: self.srw_steps,
            gap_threshold: self.gap_threshold,
            score_averaging: self.score_averaging,
        }
    }
}

/// Parses `"a:b:step"`, `"a:b"` (step 1) or a comma separated list.
pub fn parse_float_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("invalid grid `{text}`"));
    if text.contains(':') {
        let parts: Vec<f64> = text
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let (start, stop, step) = match parts.as_slice() {
            [a, b] => (*a, *b, 1.0),
            [a, b, s] => (*a, *b, *s),
            _ => return Err(bad()),
        };
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        // Index-based stepping avoids accumulated rounding in the grid values.
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + i as f64 * step).collect());
    }
    let values: Vec<f64> = text
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(bad());
    }
    Ok(values)
}

/// Parses an m grid against `n` nodes.
pub fn parse_m_grid(text: &str, n: usize) -> Result<Vec<usize>, CliError> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok((1..=n).collect());
    }
    let values = parse_float_grid(text)?;
    values
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 && v as usize <= n {
                Ok(v as usize)
            } else {
                Err(CliError::Usage(format!("m = {v} must be an integer in 1..={n}")))
            }
        })
        .collect()
}

pub fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<T>().map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_float_grid("0:10:1").unwrap().len(), 11);
        assert_eq!(parse_float_grid("0:1:0.1").unwrap().len(), 11);
        assert_eq!(parse_float_grid("0:1:0.1").unwrap()[3], 0.30000000000000004);
        assert_eq!(parse_float_grid("0.05, 0.1,0.15").unwrap(), vec![0.05, 0.1, 0.15]);
        assert_eq!(parse_float_grid("2:4").unwrap(), vec![2.0, 3.0, 4.0]);
        assert!(parse_float_grid("1:0").is_err());
        assert!(parse_float_grid("a,b").is_err());
        assert!(parse_float_grid("").is_err());
    }

    #[test]
    fn m_grids() {
        assert_eq!(parse_m_grid("all", 4).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_m_grid("1,3", 4).unwrap(), vec![1, 3]);
        assert!(parse_m_grid("5", 4).is_err());
        assert!(parse_m_grid("1.5", 4).is_err());
    }

    #[test]
    fn manifest_from_toml() {
        let m: RunManifest = toml::from_str(
            r#"
            input = "data/hypertext.tsv"
            methods = ["CN", "PBSPM"]
            alphas = [7.0]
            p_freshers = [0.05]
            L = 50
            emit = ["csv"]
            "#,
        )
        .unwrap();
        assert_eq!(m.methods, vec![Method::Cn, Method::Pbspm]);
        assert_eq!(m.l, Some(50));
        assert_eq!(m.realizations, 10);
        assert_eq!(m.dataset_name(), "hypertext");
        assert!(!m.emits(Emit::Json));
        assert!(toml::from_str::<RunManifest>("bogus = 1").is_err());
    }
}
