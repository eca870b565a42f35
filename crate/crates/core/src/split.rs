//! Temporal train/probe splitting and node popularity.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::TemporalGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    /// Fraction of the latest edges held out as the probe set.
    pub probe_fraction: f64,
    /// Fraction of the latest training edges that counts as fresh.
    pub p_fresher: f64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            probe_fraction: 0.10,
            p_fresher: 0.10,
        }
    }
}

impl SplitConfig {
    pub fn p_older(&self) -> f64 {
        1.0 - self.p_fresher
    }

    pub fn validate(&self) -> Result<()> {
        check_open_unit("probe_fraction", self.probe_fraction)?;
        check_open_unit("p_fresher", self.p_fresher)
    }
}

pub(crate) fn check_open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {x}")))
    }
}

/// Result of the time-ordered 90/10 style split.
///
/// `train` is renumbered over the nodes touched by training edges; `probe`
/// pairs use those training ids. Probe pairs with an endpoint that never
/// appears in training cannot be scored and are only counted.
#[derive(Debug, Clone)]
pub struct TrainProbeSplit {
    /// Indices of training edges in the source graph.
    pub train_edges: Vec<usize>,
    pub train: TemporalGraph,
    /// Probe pairs `(u, v)`, `u < v`, in training ids, ordered by time.
    pub probe: Vec<(usize, usize)>,
    pub probe_dropped: usize,
}

impl TrainProbeSplit {
    /// Size of the probe set before unseen-endpoint filtering.
    pub fn probe_unfiltered(&self) -> usize {
        self.probe.len() + self.probe_dropped
    }

    pub fn probe_set(&self) -> HashSet<(usize, usize)> {
        self.probe.iter().copied().collect()
    }

    /// Number of probe edges incident to each training node.
    pub fn probe_degrees(&self) -> Vec<f64> {
        let mut k = vec![0.0; self.train.n()];
        for &(u, v) in &self.probe {
            k[u] += 1.0;
            k[v] += 1.0;
        }
        k
    }
}

/// Splits the time-sorted edges into the earliest training portion and the
/// latest probe portion.
pub fn split_train_probe(graph: &TemporalGraph, probe_fraction: f64) -> Result<TrainProbeSplit> {
    check_open_unit("probe_fraction", probe_fraction)?;
    let m = graph.edge_count();
    if m < 10 {
        return Err(Error::DegenerateSplit(format!("need at least 10 edges, graph has {m}")));
    }
    let n_train = ((1.0 - probe_fraction) * m as f64).round() as usize;
    if n_train == 0 || n_train >= m {
        return Err(Error::DegenerateSplit(format!(
            "probe fraction {probe_fraction} leaves {n_train} of {m} edges for training"
        )));
    }
    // Edges are already ordered by (t, u, v).
    let train_edges: Vec<usize> = (0..n_train).collect();
    let train = graph.subgraph(&train_edges)?;
    let mut probe = Vec::new();
    let mut probe_dropped = 0;
    for e in &graph.edges()[n_train..] {
        let a = graph.label(e.u).and_then(|l| train.id(l));
        let b = graph.label(e.v).and_then(|l| train.id(l));
        match (a, b) {
            (Some(a), Some(b)) => probe.push((a.min(b), a.max(b))),
            _ => probe_dropped += 1,
        }
    }
    if probe.is_empty() {
        return Err(Error::DegenerateSplit(format!(
            "all {probe_dropped} probe edges touch nodes absent from training"
        )));
    }
    Ok(TrainProbeSplit {
        train_edges,
        train,
        probe,
        probe_dropped,
    })
}

/// `k_i(t + span) - k_i(t)`: edges incident to `node` entering in `(t, t + span]`.
pub fn degree_increment(graph: &TemporalGraph, node: usize, t: i64, span: i64) -> Result<usize> {
    if span <= 0 {
        return Err(Error::InvalidParameter(format!(
            "time span must be positive, got {span}"
        )));
    }
    if node >= graph.n() {
        return Err(Error::IndexOutOfRange {
            index: node,
            len: graph.n(),
        });
    }
    let end = t.saturating_add(span);
    Ok(graph
        .edges()
        .iter()
        .filter(|e| e.touches(node) && e.t > t && e.t <= end)
        .count())
}

/// Per-node popularity `s_i = k_fresh / k_all` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopularityVector(Vec<f64>);

impl PopularityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::InvalidParameter(format!("popularity {bad} outside [0, 1]")));
        }
        Ok(PopularityVector(values))
    }

    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, node: usize) -> f64 {
        self.0[node]
    }
}

/// Popularity over `edges` (indices into `graph`).
///
/// The last `round(p_fresher * |edges|)` edges in time order form the fresh
/// segment. Nodes without any of these edges get 0.
pub fn popularity(graph: &TemporalGraph, edges: &[usize], p_fresher: f64) -> Result<PopularityVector> {
    check_open_unit("p_fresher", p_fresher)?;
    let mut order = edges.to_vec();
    order.sort_unstable();
    order.dedup();
    if let Some(&bad) = order.iter().find(|&&i| i >= graph.edge_count()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: graph.edge_count(),
        });
    }
    let fresh = (p_fresher * order.len() as f64).round() as usize;
    let boundary = order.len() - fresh.min(order.len());
    let mut all = vec![0usize; graph.n()];
    let mut recent = vec![0usize; graph.n()];
    for (pos, &i) in order.iter().enumerate() {
        let e = graph.edges()[i];
        all[e.u] += 1;
        all[e.v] += 1;
        if pos >= boundary {
            recent[e.u] += 1;
            recent[e.v] += 1;
        }
    }
    let s = all
        .iter()
        .zip(&recent)
        .map(|(&a, &r)| if a == 0 { 0.0 } else { r as f64 / a as f64 })
        .collect();
    Ok(PopularityVector(s))
}
