use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use log::info;
use pbspm_core::evaluation::{
    m_sweep_in, node_diagnostics, sweep_in, ExperimentContext, Method, NodeDiagnostic, PrecisionReport,
};
use pbspm_core::graph::{parse_edge_stream, simplify};
use pbspm_core::spectral::{self, SpectralModel};
use pbspm_core::TemporalGraph;
use serde::Serialize;

use crate::error::CliError;
use crate::manifest::{parse_m_grid, Emit, RunManifest};
use crate::output::{ensure_dir, opt_int, opt_sig6, sig6, tag, write_csv, write_json, write_lines};

pub const PREDICT_HEADER: [&str; 18] = [
    "dataset",
    "method",
    "alpha",
    "p_fresher",
    "p_h",
    "m",
    "realizations",
    "seed",
    "L",
    "probe_size",
    "probe_dropped",
    "train_edges",
    "n_nodes",
    "mean_precision",
    "std_precision",
    "mean_delta_lambda1",
    "delta_cc",
    "matrix_averaged_precision",
];

pub fn load_graph(manifest: &RunManifest) -> Result<TemporalGraph, CliError> {
    let file = File::open(&manifest.input).map_err(|e| CliError::io(&manifest.input, e))?;
    let stream = parse_edge_stream(BufReader::new(file), manifest.format)?;
    let graph = simplify(&stream)?;
    info!(
        "{}: {} events -> {} nodes, {} edges",
        manifest.input.display(),
        stream.len(),
        graph.n(),
        graph.edge_count()
    );
    Ok(graph)
}

fn context(manifest: &RunManifest) -> Result<(TemporalGraph, ExperimentContext), CliError> {
    let graph = load_graph(manifest)?;
    let ctx = ExperimentContext::new(&graph, manifest.probe_fraction)?;
    info!(
        "split: {} training nodes, {} training edges, {} probe pairs ({} dropped)",
        ctx.n(),
        ctx.split.train.edge_count(),
        ctx.split.probe.len(),
        ctx.split.probe_dropped
    );
    Ok((graph, ctx))
}

fn report_row(dataset: &str, r: &PrecisionReport) -> Vec<String> {
    let c = &r.config;
    let spectral = r.method.is_spectral();
    let popularity = matches!(r.method, Method::Pbspm | Method::FastPbspm);
    vec![
        dataset.to_string(),
        r.method.to_string(),
        if popularity { sig6(c.alpha) } else { String::new() },
        if popularity { sig6(c.p_fresher) } else { String::new() },
        if spectral { sig6(c.p_h) } else { String::new() },
        opt_int(r.m),
        r.realizations.len().to_string(),
        c.seed.to_string(),
        r.l.to_string(),
        r.probe_size.to_string(),
        r.probe_dropped.to_string(),
        r.train_edges.to_string(),
        r.n_nodes.to_string(),
        sig6(r.mean_precision),
        sig6(r.std_precision),
        opt_sig6(r.mean_delta_lambda1),
        opt_sig6(r.delta_cc),
        opt_sig6(r.matrix_averaged_precision),
    ]
}

#[derive(Serialize)]
struct PredictJson<'a> {
    dataset: &'a str,
    input: String,
    reports: &'a [PrecisionReport],
}

/// Evaluates every requested method and writes the report table, the JSON
/// reports and one top-L prediction list per method.
pub fn cmd_predict(manifest: &RunManifest) -> Result<Vec<PathBuf>, CliError> {
    manifest.validate()?;
    let dataset = manifest.dataset_name();
    let (_, ctx) = context(manifest)?;
    ensure_dir(&manifest.out_dir)?;

    let base = manifest.experiment(Method::Pbspm);
    let models: Option<Vec<(u64, pbspm_core::Result<SpectralModel>)>> = manifest
        .methods
        .iter()
        .any(|m| m.is_spectral())
        .then(|| ctx.perturbed_models(base.p_h, base.seed, base.realizations));

    let mut written = Vec::new();
    let mut reports = Vec::new();
    for &method in &manifest.methods {
        let cfg = manifest.experiment(method);
        let cached = if method.is_spectral() { models.as_deref() } else { None };
        let outcome = ctx.evaluate(&cfg, cached, true)?;
        let report = outcome.report;
        info!("{dataset} {method}: precision {:.4}", report.mean_precision);
        for failure in &report.failures {
            log::warn!("{method} realization seed {} failed: {}", failure.seed, failure.error);
        }
        if let Some(scores) = outcome.mean_scores {
            let ranked = pbspm_core::evaluation::rank_candidates(&scores, &ctx.train_view)?;
            let probe = ctx.probe_set();
            let train = &ctx.split.train;
            let lines: Vec<String> = ranked
                .top(report.l)
                .iter()
                .enumerate()
                .map(|(rank, ((i, j), score))| {
                    format!(
                        "{}\t{}\t{}\t{}\t{}",
                        rank + 1,
                        train.label(*i).unwrap_or_default(),
                        train.label(*j).unwrap_or_default(),
                        sig6(*score),
                        u8::from(probe.contains(&(*i, *j)))
                    )
                })
                .collect();
            let path = manifest.out_dir.join(format!("top_{}.txt", method.name()));
            written.push(write_lines(&path, &lines)?);
        }
        reports.push(report);
    }

    if manifest.emits(Emit::Csv) {
        let rows: Vec<Vec<String>> = reports.iter().map(|r| report_row(&dataset, r)).collect();
        written.push(write_csv(
            &manifest.out_dir.join("predict.csv"),
            &PREDICT_HEADER,
            &rows,
        )?);
    }
    if manifest.emits(Emit::Json) {
        let doc = PredictJson {
            dataset: &dataset,
            input: manifest.input.display().to_string(),
            reports: &reports,
        };
        written.push(write_json(&manifest.out_dir.join("predict.json"), &doc)?);
    }
    Ok(written)
}

#[derive(Serialize)]
struct SweepJson<'a> {
    dataset: &'a str,
    method: Method,
    alpha_sweep: Vec<pbspm_core::evaluation::SweepPoint>,
    m_sweep: Vec<pbspm_core::evaluation::MSweepPoint>,
}

/// Precision-vs-alpha curves, one file per `p_fresher`, and optionally a
/// precision-vs-m/n curve evaluated at the best alpha of the first curve.
pub fn cmd_sweep(manifest: &RunManifest) -> Result<Vec<PathBuf>, CliError> {
    manifest.validate()?;
    let method = match manifest.methods.as_slice() {
        [m] => *m,
        _ => return Err(CliError::Usage("sweep takes exactly one --method".into())),
    };
    let dataset = manifest.dataset_name();
    let (_, ctx) = context(manifest)?;
    ensure_dir(&manifest.out_dir)?;
    let base = manifest.experiment(method);
    let rows = sweep_in(&ctx, &base, &manifest.alphas, &manifest.p_freshers)?;

    let mut written = Vec::new();
    if manifest.emits(Emit::Csv) {
        for &pf in &manifest.p_freshers {
            let table: Vec<Vec<String>> = rows
                .iter()
                .filter(|r| r.p_fresher == pf)
                .map(|r| {
                    vec![
                        sig6(r.alpha),
                        sig6(r.report.mean_precision),
                        sig6(r.report.std_precision),
                    ]
                })
                .collect();
            let path = manifest.out_dir.join(format!("sweep_{dataset}_pf{}.csv", tag(pf)));
            written.push(write_csv(&path, &["alpha", "mean_precision", "std_precision"], &table)?);
        }
    }

    let mut m_rows = Vec::new();
    if let Some(grid) = &manifest.m_grid {
        let ms = parse_m_grid(grid, ctx.n())?;
        let first_pf = manifest.p_freshers[0];
        let best = rows
            .iter()
            .filter(|r| r.p_fresher == first_pf)
            .fold(None::<&pbspm_core::evaluation::SweepPoint>, |best, r| match best {
                Some(b) if b.report.mean_precision >= r.report.mean_precision => Some(b),
                _ => Some(r),
            })
            .expect("non-empty alpha grid");
        info!("m-sweep at alpha = {}, p_fresher = {first_pf}", best.alpha);
        let m_base = pbspm_core::ExperimentConfig {
            alpha: best.alpha,
            p_fresher: first_pf,
            ..base.clone()
        };
        m_rows = m_sweep_in(&ctx, &m_base, &ms)?;
        if manifest.emits(Emit::Csv) {
            let table: Vec<Vec<String>> = m_rows
                .iter()
                .map(|r| vec![sig6(r.m_over_n), sig6(r.report.mean_precision)])
                .collect();
            let path = manifest.out_dir.join(format!("msweep_{dataset}.csv"));
            written.push(write_csv(&path, &["m_over_n", "mean_precision"], &table)?);
        }
    }

    if manifest.emits(Emit::Json) {
        let doc = SweepJson {
            dataset: &dataset,
            method,
            alpha_sweep: rows,
            m_sweep: m_rows,
        };
        written.push(write_json(
            &manifest.out_dir.join(format!("sweep_{dataset}.json")),
            &doc,
        )?);
    }
    Ok(written)
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    dataset: &'a str,
    n: usize,
    gap_threshold: f64,
    m: usize,
    eigenvalues: &'a [f64],
}

/// Eigenvalues and eigengaps of the training adjacency plus the selected m.
pub fn cmd_spectrum(manifest: &RunManifest) -> Result<(usize, Vec<PathBuf>), CliError> {
    manifest.validate()?;
    let dataset = manifest.dataset_name();
    let (_, ctx) = context(manifest)?;
    ensure_dir(&manifest.out_dir)?;
    let model = ctx.training_spectrum()?;
    let eigenvalues = model.eigenvalues();
    let gaps = spectral::eigengaps(eigenvalues);
    let m = spectral::select_m(eigenvalues, manifest.gap_threshold)?;

    let mut written = Vec::new();
    if manifest.emits(Emit::Csv) {
        let rows: Vec<Vec<String>> = eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                vec![
                    (i + 1).to_string(),
                    sig6(l),
                    sig6(l.abs()),
                    opt_sig6(gaps.get(i).copied()),
                ]
            })
            .collect();
        let path = manifest.out_dir.join(format!("spectrum_{dataset}.csv"));
        written.push(write_csv(&path, &["i", "lambda_i", "abs_lambda_i", "gap_i"], &rows)?);
    }
    if manifest.emits(Emit::Json) {
        let doc = SpectrumJson {
            dataset: &dataset,
            n: eigenvalues.len(),
            gap_threshold: manifest.gap_threshold,
            m,
            eigenvalues,
        };
        written.push(write_json(
            &manifest.out_dir.join(format!("spectrum_{dataset}.json")),
            &doc,
        )?);
    }
    Ok((m, written))
}

#[derive(Serialize)]
struct DiagnoseJson<'a> {
    dataset: &'a str,
    report: &'a PrecisionReport,
    nodes: &'a [NodeDiagnostic],
}

/// Mean first-order correction of the leading eigenvalue and the change in
/// correlation between the principal eigenvector and probe degree, plus
/// per-node importance and predicted degree.
pub fn cmd_diagnose(manifest: &RunManifest) -> Result<Vec<PathBuf>, CliError> {
    manifest.validate()?;
    let method = manifest
        .methods
        .iter()
        .copied()
        .find(|m| m.is_spectral())
        .ok_or_else(|| CliError::Usage("diagnose needs a spectral method (SPM, PBSPM, FastPBSPM)".into()))?;
    let dataset = manifest.dataset_name();
    let (_, ctx) = context(manifest)?;
    ensure_dir(&manifest.out_dir)?;
    let cfg = manifest.experiment(method);
    let report = ctx.evaluate(&cfg, None, false)?.report;
    let nodes = node_diagnostics(&ctx, &cfg)?;

    let mut written = Vec::new();
    if manifest.emits(Emit::Csv) {
        let row = vec![
            dataset.clone(),
            opt_sig6(report.mean_delta_lambda1),
            opt_sig6(report.delta_cc),
            report.realizations.len().to_string(),
        ];
        written.push(write_csv(
            &manifest.out_dir.join("diagnose.csv"),
            &["dataset", "mean_delta_lambda1", "delta_cc", "realizations"],
            &[row],
        )?);
        let node_rows: Vec<Vec<String>> = nodes
            .iter()
            .map(|n| {
                vec![
                    n.node.to_string(),
                    n.label.clone(),
                    n.train_degree.to_string(),
                    sig6(n.popularity),
                    n.probe_degree.to_string(),
                    sig6(n.importance),
                    sig6(n.boosted_importance),
                    n.spm_predicted_degree.to_string(),
                    n.pbspm_predicted_degree.to_string(),
                ]
            })
            .collect();
        written.push(write_csv(
            &manifest.out_dir.join(format!("nodes_{dataset}.csv")),
            &[
                "node",
                "label",
                "train_degree",
                "popularity",
                "probe_degree",
                "importance",
                "boosted_importance",
                "spm_predicted_degree",
                "pbspm_predicted_degree",
            ],
            &node_rows,
        )?);
    }
    if manifest.emits(Emit::Json) {
        let doc = DiagnoseJson {
            dataset: &dataset,
            report: &report,
            nodes: &nodes,
        };
        written.push(write_json(&manifest.out_dir.join("diagnose.json"), &doc)?);
    }
    Ok(written)
}
