//! Candidate ranking, Precision@L, correlation diagnostics and the
//! multi-realization experiment runner.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{self, KatzConfig, WalkConfig};
use crate::error::{Error, Result};
use crate::graph::{AdjacencyView, TemporalGraph};
use crate::spectral::{self, ScoreMatrix, SpectralModel, DEFAULT_GAP_THRESHOLD, DEFAULT_P_H};
use crate::split::{self, PopularityVector, TrainProbeSplit};

/// Prediction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "CN")]
    Cn,
    #[serde(rename = "AA")]
    Aa,
    #[serde(rename = "RA")]
    Ra,
    Katz,
    #[serde(rename = "SRW")]
    Srw,
    #[serde(rename = "SPM")]
    Spm,
    #[serde(rename = "PBSPM")]
    Pbspm,
    #[serde(rename = "FastPBSPM")]
    FastPbspm,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Cn,
        Method::Aa,
        Method::Ra,
        Method::Katz,
        Method::Srw,
        Method::Spm,
        Method::FastPbspm,
        Method::Pbspm,
    ];

    /// Whether the method is built on random perturbations.
    pub fn is_spectral(self) -> bool {
        matches!(self, Method::Spm | Method::Pbspm | Method::FastPbspm)
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Cn => "CN",
            Method::Aa => "AA",
            Method::Ra => "RA",
            Method::Katz => "Katz",
            Method::Srw => "SRW",
            Method::Spm => "SPM",
            Method::Pbspm => "PBSPM",
            Method::FastPbspm => "FastPBSPM",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        match key.to_ascii_lowercase().as_str() {
            "cn" => Ok(Method::Cn),
            "aa" => Ok(Method::Aa),
            "ra" => Ok(Method::Ra),
            "katz" => Ok(Method::Katz),
            "srw" => Ok(Method::Srw),
            "spm" => Ok(Method::Spm),
            "pbspm" => Ok(Method::Pbspm),
            "fastpbspm" | "fast" => Ok(Method::FastPbspm),
            _ => Err(Error::InvalidParameter(format!("unknown method `{s}`"))),
        }
    }
}

/// How the realizations of a spectral method are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreAveraging {
    /// Mean of per-realization precisions.
    #[default]
    Precision,
    /// Additionally rank the mean score matrix once and report its precision.
    Matrix,
}

impl FromStr for ScoreAveraging {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "precision" => Ok(ScoreAveraging::Precision),
            "matrix" => Ok(ScoreAveraging::Matrix),
            _ => Err(Error::InvalidParameter(format!("unknown score averaging `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub method: Method,
    /// Popularity boost strength.
    pub alpha: f64,
    pub p_fresher: f64,
    pub p_h: f64,
    pub realizations: usize,
    /// Number of eigenpairs for the fast variant; `None` selects it from the
    /// eigengaps of the training adjacency.
    pub m: Option<usize>,
    pub seed: u64,
    /// Ranking cutoff; `None` means the probe size.
    pub l: Option<usize>,
    pub probe_fraction: f64,
    /// Use the probe size before unseen-endpoint filtering as default `L`.
    pub unfiltered_l: bool,
    pub katz_damping: Option<f64>,
    pub katz_max_path_length: Option<usize>,
    pub srw_steps: usize,
    pub gap_threshold: f64,
    pub score_averaging: ScoreAveraging,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            method: Method::Pbspm,
            alpha: 0.0,
            p_fresher: 0.10,
            p_h: DEFAULT_P_H,
            realizations: 10,
            m: None,
            seed: 0,
            l: None,
            probe_fraction: 0.10,
            unfiltered_l: false,
            katz_damping: None,
            katz_max_path_length: None,
            srw_steps: WalkConfig::default().steps,
            gap_threshold: DEFAULT_GAP_THRESHOLD,
            score_averaging: ScoreAveraging::Precision,
        }
    }
}

impl ExperimentConfig {
    pub fn with_method(&self, method: Method) -> Self {
        ExperimentConfig { method, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidParameter("realizations must be >= 1".into()));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be >= 0, got {}",
                self.alpha
            )));
        }
        split::check_open_unit("p_fresher", self.p_fresher)?;
        split::check_open_unit("p_h", self.p_h)?;
        split::check_open_unit("probe_fraction", self.probe_fraction)?;
        if self.l == Some(0) {
            return Err(Error::InvalidParameter("L must be >= 1".into()));
        }
        if self.m == Some(0) {
            return Err(Error::InvalidParameter("m must be >= 1".into()));
        }
        Ok(())
    }
}

/// Non-edges of the training view ranked by score, highest first. Ties are
/// ordered by `(i, j)` ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedCandidates {
    entries: Vec<((usize, usize), f64)>,
}

impl RankedCandidates {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[((usize, usize), f64)] {
        &self.entries
    }

    pub fn top(&self, l: usize) -> &[((usize, usize), f64)] {
        &self.entries[..l.min(self.entries.len())]
    }
}

pub fn rank_candidates(scores: &ScoreMatrix, train_view: &AdjacencyView) -> Result<RankedCandidates> {
    let n = train_view.n();
    if scores.n() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            found: scores.n(),
        });
    }
    let mut entries = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            if !train_view.contains(i, j) {
                entries.push(((i, j), scores.get(i, j)));
            }
        }
    }
    // Pairs are generated in (i, j) order, so a stable sort keeps the tie order.
    entries.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(RankedCandidates { entries })
}

/// Fraction of the top `l` candidates that are probe pairs.
pub fn precision_at(ranked: &RankedCandidates, probe: &HashSet<(usize, usize)>, l: usize) -> Result<f64> {
    if probe.is_empty() {
        return Err(Error::UndefinedMetric("probe set is empty".into()));
    }
    if l == 0 || l > ranked.len() {
        return Err(Error::InvalidParameter(format!(
            "L = {l} must lie in 1..={} (number of candidates)",
            ranked.len()
        )));
    }
    let hits = ranked
        .top(l)
        .iter()
        .filter(|((i, j), _)| probe.contains(&(*i, *j)))
        .count();
    Ok(hits as f64 / l as f64)
}

/// Pearson correlation with population standard deviations.
pub fn pearson_cc(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidParameter("correlation needs at least two samples".into()));
    }
    let n = x.len() as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n;
    let (mx, my) = (mean(x), mean(y));
    let sd = |v: &[f64], m: f64| (v.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / n).sqrt();
    let (sx, sy) = (sd(x, mx), sd(y, my));
    if sx == 0.0 || sy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(x.iter()
        .zip(y)
        .map(|(a, b)| ((a - mx) / sx) * ((b - my) / sy))
        .sum::<f64>()
        / n)
}

/// `CC(x'_1, k_probe) - CC(x_1, k_probe)`.
pub fn delta_cc(principal: &[f64], boosted_principal: &[f64], probe_degree_increment: &[f64]) -> Result<f64> {
    Ok(pearson_cc(boosted_principal, probe_degree_increment)? - pearson_cc(principal, probe_degree_increment)?)
}

/// Outcome of one perturbation realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationResult {
    pub seed: u64,
    pub precision: f64,
    pub delta_lambda1: Option<f64>,
    pub delta_cc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationFailure {
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionReport {
    pub method: Method,
    pub config: ExperimentConfig,
    pub n_nodes: usize,
    pub train_edges: usize,
    pub probe_size: usize,
    pub probe_dropped: usize,
    pub l: usize,
    /// Eigenpairs kept by the fast variant.
    pub m: Option<usize>,
    pub realizations: Vec<RealizationResult>,
    pub failures: Vec<RealizationFailure>,
    pub mean_precision: f64,
    pub std_precision: f64,
    pub mean_delta_lambda1: Option<f64>,
    pub delta_cc: Option<f64>,
    pub matrix_averaged_precision: Option<f64>,
}

/// A report plus, when requested, the realization-averaged score matrix.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub report: PrecisionReport,
    pub mean_scores: Option<ScoreMatrix>,
}

type RealizationRun = (RealizationResult, Option<ScoreMatrix>);

fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.into_iter().fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Shared state of one temporal split: training view, probe set and lazily
/// computed spectra. Sweeps reuse one context for every grid point.
pub struct ExperimentContext {
    pub split: TrainProbeSplit,
    pub train_view: AdjacencyView,
    probe_set: HashSet<(usize, usize)>,
    probe_degrees: Vec<f64>,
    train_pairs: Vec<(usize, usize)>,
    training_spectrum: OnceLock<SpectralModel>,
}

impl ExperimentContext {
    pub fn new(graph: &TemporalGraph, probe_fraction: f64) -> Result<Self> {
        let split = split::split_train_probe(graph, probe_fraction)?;
        let train_view = split.train.adjacency(None)?;
        let probe_set = split.probe_set();
        let probe_degrees = split.probe_degrees();
        let train_pairs = split.train.edges().iter().map(|e| e.pair()).collect();
        Ok(ExperimentContext {
            split,
            train_view,
            probe_set,
            probe_degrees,
            train_pairs,
            training_spectrum: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.train_view.n()
    }

    pub fn probe_set(&self) -> &HashSet<(usize, usize)> {
        &self.probe_set
    }

    /// Probe edges incident to each training node.
    pub fn probe_degrees(&self) -> &[f64] {
        &self.probe_degrees
    }

    /// Eigendecomposition of the unperturbed training adjacency.
    pub fn training_spectrum(&self) -> Result<&SpectralModel> {
        if let Some(model) = self.training_spectrum.get() {
            return Ok(model);
        }
        let model = spectral::eigendecompose(&self.train_view)?;
        Ok(self.training_spectrum.get_or_init(|| model))
    }

    pub fn popularity(&self, p_fresher: f64) -> Result<PopularityVector> {
        let all: Vec<usize> = (0..self.split.train.edge_count()).collect();
        split::popularity(&self.split.train, &all, p_fresher)
    }

    /// Corrected spectral model of one perturbation of the training set.
    pub fn perturbed_model(&self, p_h: f64, seed: u64) -> Result<SpectralModel> {
        let sample = spectral::sample_perturbation(self.n(), &self.train_pairs, p_h, seed)?;
        let model = spectral::eigendecompose(&sample.retained)?;
        spectral::eigenvalue_correction(model, &sample.removed)
    }

    /// Perturbed models for seeds `seed..seed + realizations`, computed in parallel.
    pub fn perturbed_models(&self, p_h: f64, seed: u64, realizations: usize) -> Vec<(u64, Result<SpectralModel>)> {
        (0..realizations as u64)
            .into_par_iter()
            .map(|r| {
                let s = seed.wrapping_add(r);
                (s, self.perturbed_model(p_h, s))
            })
            .collect()
    }

    fn probe_length(&self, cfg: &ExperimentConfig) -> usize {
        cfg.l.unwrap_or(if cfg.unfiltered_l {
            self.split.probe_unfiltered()
        } else {
            self.split.probe.len()
        })
    }

    /// Eigenpair count used by the fast variant.
    pub fn fast_m(&self, cfg: &ExperimentConfig) -> Result<usize> {
        let m = match cfg.m {
            Some(m) => m,
            None => spectral::select_m(self.training_spectrum()?.eigenvalues(), cfg.gap_threshold)?,
        };
        Ok(m.clamp(1, self.n()))
    }

    fn baseline_scores(&self, cfg: &ExperimentConfig) -> Result<ScoreMatrix> {
        let view = &self.train_view;
        match cfg.method {
            Method::Cn => baselines::cn_scores(view),
            Method::Aa => baselines::aa_scores(view),
            Method::Ra => baselines::ra_scores(view),
            Method::Katz => {
                let damping = match cfg.katz_damping {
                    Some(d) => d,
                    None => KatzConfig::default_for(view)?.damping,
                };
                baselines::katz_scores(
                    view,
                    &KatzConfig {
                        damping,
                        max_path_length: cfg.katz_max_path_length,
                    },
                )
            }
            Method::Srw => baselines::srw_scores(view, &WalkConfig { steps: cfg.srw_steps }),
            _ => unreachable!("spectral method routed to baselines"),
        }
    }

    fn spectral_scores(
        &self,
        cfg: &ExperimentConfig,
        model: &SpectralModel,
        s: &PopularityVector,
        m: Option<usize>,
    ) -> Result<ScoreMatrix> {
        match cfg.method {
            Method::Spm => spectral::spm_scores(model),
            Method::Pbspm => spectral::pbspm_scores(model, s, cfg.alpha),
            Method::FastPbspm => spectral::truncated_scores(model, s, cfg.alpha, m.unwrap_or(1)),
            _ => unreachable!("baseline routed to spectral scoring"),
        }
    }

    fn precision_of(&self, scores: &ScoreMatrix, l: usize) -> Result<f64> {
        let ranked = rank_candidates(scores, &self.train_view)?;
        precision_at(&ranked, &self.probe_set, l)
    }

    fn realization_delta_cc(&self, cfg: &ExperimentConfig, model: &SpectralModel, s: &PopularityVector) -> Option<f64> {
        let alpha = if cfg.method == Method::Spm { 0.0 } else { cfg.alpha };
        let x1 = model.eigenvector(0);
        let boosted: Vec<f64> = x1
            .iter()
            .enumerate()
            .map(|(i, x)| x * (1.0 + alpha * s.get(i)))
            .collect();
        delta_cc(&x1, &boosted, &self.probe_degrees).ok()
    }

    /// Runs `cfg` on this split. Spectral methods reuse `models` when given
    /// (they must come from [`Self::perturbed_models`] with the same `p_h`,
    /// seed and count).
    pub fn evaluate(
        &self,
        cfg: &ExperimentConfig,
        models: Option<&[(u64, Result<SpectralModel>)]>,
        retain_scores: bool,
    ) -> Result<ExperimentOutcome> {
        cfg.validate()?;
        let l = self.probe_length(cfg);
        let mut report = PrecisionReport {
            method: cfg.method,
            config: cfg.clone(),
            n_nodes: self.n(),
            train_edges: self.split.train.edge_count(),
            probe_size: self.split.probe.len(),
            probe_dropped: self.split.probe_dropped,
            l,
            m: None,
            realizations: Vec::new(),
            failures: Vec::new(),
            mean_precision: 0.0,
            std_precision: 0.0,
            mean_delta_lambda1: None,
            delta_cc: None,
            matrix_averaged_precision: None,
        };

        if !cfg.method.is_spectral() {
            let scores = self.baseline_scores(cfg)?;
            let precision = self.precision_of(&scores, l)?;
            report.realizations.push(RealizationResult {
                seed: cfg.seed,
                precision,
                delta_lambda1: None,
                delta_cc: None,
            });
            report.mean_precision = precision;
            if cfg.score_averaging == ScoreAveraging::Matrix {
                report.matrix_averaged_precision = Some(precision);
            }
            return Ok(ExperimentOutcome {
                report,
                mean_scores: retain_scores.then_some(scores),
            });
        }

        let s = self.popularity(cfg.p_fresher)?;
        let m = match cfg.method {
            Method::FastPbspm => Some(self.fast_m(cfg)?),
            _ => None,
        };
        report.m = m;

        let owned;
        let models = match models {
            Some(models) => models,
            None => {
                owned = self.perturbed_models(cfg.p_h, cfg.seed, cfg.realizations);
                &owned
            }
        };
        if models.len() != cfg.realizations {
            return Err(Error::InvalidParameter(format!(
                "expected {} cached models, got {}",
                cfg.realizations,
                models.len()
            )));
        }
        let keep = retain_scores || cfg.score_averaging == ScoreAveraging::Matrix;
        let per_realization: Vec<(u64, Result<RealizationRun>)> = models
            .par_iter()
            .map(|(seed, model)| {
                let run = || -> Result<RealizationRun> {
                    let model = model.as_ref().map_err(|e| Error::Numerical(e.to_string()))?;
                    let scores = self.spectral_scores(cfg, model, &s, m)?;
                    let precision = self.precision_of(&scores, l)?;
                    let result = RealizationResult {
                        seed: *seed,
                        precision,
                        delta_lambda1: model.corrections().first().copied(),
                        delta_cc: self.realization_delta_cc(cfg, model, &s),
                    };
                    Ok((result, keep.then_some(scores)))
                };
                (*seed, run())
            })
            .collect();

        let mut matrices = Vec::new();
        let mut first_error = None;
        for (seed, outcome) in per_realization {
            match outcome {
                Ok((result, scores)) => {
                    report.realizations.push(result);
                    matrices.extend(scores);
                }
                Err(e) => {
                    report.failures.push(RealizationFailure {
                        seed,
                        error: e.to_string(),
                    });
                    first_error.get_or_insert(e);
                }
            }
        }
        if report.realizations.is_empty() {
            return Err(first_error.unwrap_or_else(|| Error::Numerical("no realizations ran".into())));
        }
        let precisions: Vec<f64> = report.realizations.iter().map(|r| r.precision).collect();
        report.mean_precision = mean(precisions.iter().copied()).unwrap_or(0.0);
        report.std_precision = (precisions
            .iter()
            .map(|p| (p - report.mean_precision).powi(2))
            .sum::<f64>()
            / precisions.len() as f64)
            .sqrt();
        report.mean_delta_lambda1 = mean(report.realizations.iter().filter_map(|r| r.delta_lambda1));
        report.delta_cc = mean(report.realizations.iter().filter_map(|r| r.delta_cc));

        let mean_scores = if matrices.is_empty() {
            None
        } else {
            Some(ScoreMatrix::mean(&matrices)?)
        };
        if cfg.score_averaging == ScoreAveraging::Matrix {
            if let Some(avg) = &mean_scores {
                report.matrix_averaged_precision = Some(self.precision_of(avg, l)?);
            }
        }
        Ok(ExperimentOutcome {
            report,
            mean_scores: if retain_scores { mean_scores } else { None },
        })
    }
}

/// Splits `graph` once by time and evaluates `cfg` on it.
pub fn run_experiment(graph: &TemporalGraph, cfg: &ExperimentConfig) -> Result<PrecisionReport> {
    cfg.validate()?;
    let ctx = ExperimentContext::new(graph, cfg.probe_fraction)?;
    Ok(ctx.evaluate(cfg, None, false)?.report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub p_fresher: f64,
    pub report: PrecisionReport,
}

/// Evaluates every `(p_fresher, alpha)` grid point on one shared split and
/// one shared set of perturbations. Rows are ordered by `p_fresher`, then `alpha`.
pub fn sweep(
    graph: &TemporalGraph,
    base: &ExperimentConfig,
    alphas: &[f64],
    p_freshers: &[f64],
) -> Result<Vec<SweepPoint>> {
    let ctx = ExperimentContext::new(graph, base.probe_fraction)?;
    sweep_in(&ctx, base, alphas, p_freshers)
}

pub fn sweep_in(
    ctx: &ExperimentContext,
    base: &ExperimentConfig,
    alphas: &[f64],
    p_freshers: &[f64],
) -> Result<Vec<SweepPoint>> {
    if alphas.is_empty() || p_freshers.is_empty() {
        return Err(Error::InvalidParameter("sweep grids must be non-empty".into()));
    }
    base.validate()?;
    let models = base
        .method
        .is_spectral()
        .then(|| ctx.perturbed_models(base.p_h, base.seed, base.realizations));
    let mut rows = Vec::with_capacity(alphas.len() * p_freshers.len());
    for &p_fresher in p_freshers {
        for &alpha in alphas {
            let cfg = ExperimentConfig {
                alpha,
                p_fresher,
                ..base.clone()
            };
            let report = ctx.evaluate(&cfg, models.as_deref(), false)?.report;
            rows.push(SweepPoint {
                alpha,
                p_fresher,
                report,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MSweepPoint {
    pub m: usize,
    pub m_over_n: f64,
    pub report: PrecisionReport,
}

/// Fast-variant precision for each truncation size in `ms`.
pub fn m_sweep_in(ctx: &ExperimentContext, base: &ExperimentConfig, ms: &[usize]) -> Result<Vec<MSweepPoint>> {
    if ms.is_empty() {
        return Err(Error::InvalidParameter("m grid must be non-empty".into()));
    }
    if let Some(&bad) = ms.iter().find(|&&m| m == 0 || m > ctx.n()) {
        return Err(Error::InvalidParameter(format!("m = {bad} outside 1..={}", ctx.n())));
    }
    let base = base.with_method(Method::FastPbspm);
    base.validate()?;
    let models = ctx.perturbed_models(base.p_h, base.seed, base.realizations);
    ms.iter()
        .map(|&m| {
            let cfg = ExperimentConfig {
                m: Some(m),
                ..base.clone()
            };
            let report = ctx.evaluate(&cfg, Some(&models), false)?.report;
            Ok(MSweepPoint {
                m,
                m_over_n: m as f64 / ctx.n() as f64,
                report,
            })
        })
        .collect()
}

/// Per-node numbers behind the SPM vs popularity-boosted comparison on one
/// perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDiagnostic {
    pub node: usize,
    pub label: String,
    pub train_degree: usize,
    pub popularity: f64,
    pub probe_degree: usize,
    /// Component of the principal eigenvector `x_1`.
    pub importance: f64,
    /// Component of the boosted principal eigenvector `x'_1`.
    pub boosted_importance: f64,
    /// Top-L SPM predictions incident to the node.
    pub spm_predicted_degree: usize,
    /// Top-L boosted predictions incident to the node.
    pub pbspm_predicted_degree: usize,
}

/// Node-level diagnostics for the first realization seed of `cfg`.
pub fn node_diagnostics(ctx: &ExperimentContext, cfg: &ExperimentConfig) -> Result<Vec<NodeDiagnostic>> {
    cfg.validate()?;
    let model = ctx.perturbed_model(cfg.p_h, cfg.seed)?;
    let s = ctx.popularity(cfg.p_fresher)?;
    let l = ctx.probe_length(cfg);
    let predicted = |scores: ScoreMatrix| -> Result<Vec<usize>> {
        let ranked = rank_candidates(&scores, &ctx.train_view)?;
        let mut deg = vec![0usize; ctx.n()];
        for ((i, j), _) in ranked.top(l) {
            deg[*i] += 1;
            deg[*j] += 1;
        }
        Ok(deg)
    };
    let spm_deg = predicted(spectral::spm_scores(&model)?)?;
    let pbspm_deg = predicted(spectral::pbspm_scores(&model, &s, cfg.alpha)?)?;
    let x1 = model.eigenvector(0);
    let train_deg = ctx.train_view.degrees();
    Ok((0..ctx.n())
        .map(|i| NodeDiagnostic {
            node: i,
            label: ctx.split.train.label(i).unwrap_or_default().to_string(),
            train_degree: train_deg[i],
            popularity: s.get(i),
            probe_degree: ctx.probe_degrees()[i] as usize,
            importance: x1[i],
            boosted_importance: x1[i] * (1.0 + cfg.alpha * s.get(i)),
            spm_predicted_degree: spm_deg[i],
            pbspm_predicted_degree: pbspm_deg[i],
        })
        .collect())
}
