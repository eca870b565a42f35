//! Timestamped edge streams and the simple undirected graph built from them.
//!
//! Raw contact data repeats pairs and may contain self-loops. [`simplify`]
//! keeps the earliest contact of every unordered pair, so each surviving edge
//! carries the time it entered the network.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field separator of an edge-list file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EdgeFormat {
    /// Whitespace separated (tabs or spaces).
    #[default]
    Tsv,
    /// Comma separated.
    Csv,
}

impl FromStr for EdgeFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" | "txt" | "ssv" => Ok(EdgeFormat::Tsv),
            "csv" => Ok(EdgeFormat::Csv),
            other => Err(Error::InvalidParameter(format!("unknown edge format `{other}`"))),
        }
    }
}

/// One contact as read from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RawEvent {
    pub source: String,
    pub target: String,
    pub weight: Option<f64>,
    pub timestamp: i64,
}

/// Contacts in file order, duplicates and self-loops included.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TemporalEventStream {
    pub events: Vec<RawEvent>,
}

impl TemporalEventStream {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

fn parse_timestamp(field: &str) -> Option<i64> {
    if let Ok(t) = field.parse::<i64>() {
        return Some(t);
    }
    // Some exports write integral times as floats ("1.24636e+09").
    let x = field.parse::<f64>().ok()?;
    if x.is_finite() && x.fract() == 0.0 && x.abs() < 9.0e15 {
        Some(x as i64)
    } else {
        None
    }
}

/// Reads an edge list of `source target [weight] timestamp` lines.
///
/// Lines starting with `%` or `#` and blank lines are skipped. Three-field
/// lines carry the timestamp in the third column, longer lines in the fourth.
pub fn parse_edge_stream<R: BufRead>(reader: R, format: EdgeFormat) -> Result<TemporalEventStream> {
    let mut events = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = match format {
            EdgeFormat::Tsv => trimmed.split_whitespace().collect(),
            EdgeFormat::Csv => trimmed.split(',').map(str::trim).collect(),
        };
        if fields.len() < 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected at least 3 fields, found {}", fields.len()),
            });
        }
        let (source, target) = (fields[0], fields[1]);
        if source.is_empty() || target.is_empty() {
            return Err(Error::Parse {
                line: lineno,
                message: "empty node label".into(),
            });
        }
        let (weight, ts_field) = if fields.len() == 3 {
            (None, fields[2])
        } else {
            let w = fields[2].parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid weight `{}`", fields[2]),
            })?;
            (Some(w), fields[3])
        };
        let timestamp = parse_timestamp(ts_field).ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("invalid timestamp `{ts_field}`"),
        })?;
        events.push(RawEvent {
            source: source.to_string(),
            target: target.to_string(),
            weight,
            timestamp,
        });
    }
    if events.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(TemporalEventStream { events })
}

/// An undirected edge with `u < v` and its entering time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimedEdge {
    pub u: usize,
    pub v: usize,
    pub t: i64,
}

impl TimedEdge {
    pub fn pair(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    pub fn touches(&self, node: usize) -> bool {
        self.u == node || self.v == node
    }
}

/// Simple undirected graph with one timestamp per edge.
///
/// Node ids are dense and follow first appearance in the surviving contacts.
/// Edges are sorted by `(t, u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<TimedEdge>,
    // Surviving contacts in discovery order: (edge index, source was `v`).
    // Serializing in this order reproduces the node numbering.
    discovery: Vec<(usize, bool)>,
}

impl TemporalGraph {
    fn from_survivors<'a, I>(survivors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, i64)>,
    {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut intern = |label: &str| -> usize {
            if let Some(&id) = index.get(label) {
                return id;
            }
            let id = labels.len();
            labels.push(label.to_string());
            index.insert(label.to_string(), id);
            id
        };
        let mut raw: Vec<(TimedEdge, bool)> = Vec::new();
        for (s, d, t) in survivors {
            let a = intern(s);
            let b = intern(d);
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            raw.push((TimedEdge { u, v, t }, a > b));
        }
        if raw.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by_key(|&i| {
            let e = raw[i].0;
            (e.t, e.u, e.v)
        });
        let mut position = vec![0usize; raw.len()];
        for (pos, &i) in order.iter().enumerate() {
            position[i] = pos;
        }
        let edges = order.iter().map(|&i| raw[i].0).collect();
        let discovery = raw
            .iter()
            .enumerate()
            .map(|(i, (_, flip))| (position[i], *flip))
            .collect();
        Ok(TemporalGraph {
            labels,
            index,
            edges,
            discovery,
        })
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[TimedEdge] {
        &self.edges
    }

    pub fn label(&self, id: usize) -> Option<&str> {
        self.labels.get(id).map(String::as_str)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Symmetric 0/1 adjacency over all nodes. `None` selects every edge.
    pub fn adjacency(&self, edge_subset: Option<&[usize]>) -> Result<AdjacencyView> {
        match edge_subset {
            None => Ok(AdjacencyView::from_pairs(
                self.n(),
                self.edges.iter().map(TimedEdge::pair),
            )),
            Some(subset) => {
                let mut pairs = Vec::with_capacity(subset.len());
                for &i in subset {
                    let e = self.edges.get(i).ok_or(Error::IndexOutOfRange {
                        index: i,
                        len: self.edges.len(),
                    })?;
                    pairs.push(e.pair());
                }
                Ok(AdjacencyView::from_pairs(self.n(), pairs))
            }
        }
    }

    /// The graph induced by a subset of edges, renumbered over the nodes those
    /// edges touch. Numbering follows the same first-appearance rule.
    pub fn subgraph(&self, edge_subset: &[usize]) -> Result<TemporalGraph> {
        let mut keep = vec![false; self.edges.len()];
        for &i in edge_subset {
            *keep.get_mut(i).ok_or(Error::IndexOutOfRange {
                index: i,
                len: self.edges.len(),
            })? = true;
        }
        let survivors = self.discovery.iter().filter(|(i, _)| keep[*i]).map(|&(i, flip)| {
            let e = self.edges[i];
            let (s, d) = if flip { (e.v, e.u) } else { (e.u, e.v) };
            (self.labels[s].as_str(), self.labels[d].as_str(), e.t)
        });
        TemporalGraph::from_survivors(survivors)
    }

    /// Writes `source<TAB>target<TAB>timestamp` lines that [`simplify`] maps
    /// back onto this exact graph.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for &(i, flip) in &self.discovery {
            let e = self.edges[i];
            let (s, d) = if flip { (e.v, e.u) } else { (e.u, e.v) };
            writeln!(out, "{}\t{}\t{}", self.labels[s], self.labels[d], e.t)?;
        }
        Ok(())
    }
}

/// Reduces a contact stream to a simple graph.
///
/// Self-loops are dropped. Each unordered pair keeps its earliest contact
/// (ties resolved by file order).
pub fn simplify(stream: &TemporalEventStream) -> Result<TemporalGraph> {
    if stream.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut first: HashMap<(&str, &str), usize> = HashMap::new();
    for (i, ev) in stream.events.iter().enumerate() {
        if ev.source == ev.target {
            continue;
        }
        let key = if ev.source <= ev.target {
            (ev.source.as_str(), ev.target.as_str())
        } else {
            (ev.target.as_str(), ev.source.as_str())
        };
        first
            .entry(key)
            .and_modify(|j| {
                if ev.timestamp < stream.events[*j].timestamp {
                    *j = i;
                }
            })
            .or_insert(i);
    }
    let mut survivors: Vec<usize> = first.into_values().collect();
    survivors.sort_unstable();
    TemporalGraph::from_survivors(survivors.into_iter().map(|i| {
        let ev = &stream.events[i];
        (ev.source.as_str(), ev.target.as_str(), ev.timestamp)
    }))
}

/// Symmetric binary adjacency stored as sorted neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyView {
    neighbors: Vec<Vec<usize>>,
    edge_count: usize,
}

impl AdjacencyView {
    /// Builds a view from unordered pairs. Self-loops and repeats are ignored.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut neighbors = vec![Vec::new(); n];
        for (a, b) in pairs {
            if a == b {
                continue;
            }
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        let mut edge_count = 0;
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        AdjacencyView {
            neighbors,
            edge_count: edge_count / 2,
        }
    }

    pub fn empty(n: usize) -> Self {
        AdjacencyView {
            neighbors: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn degree(&self, node: usize) -> Result<usize> {
        self.neighbors.get(node).map(Vec::len).ok_or(Error::IndexOutOfRange {
            index: node,
            len: self.n(),
        })
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.neighbors.get(i).is_some_and(|list| list.binary_search(&j).is_ok())
    }

    /// Edges as `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for (u, list) in self.neighbors.iter().enumerate() {
            for &v in list {
                m[(u, v)] = 1.0;
            }
        }
        m
    }

    /// Quadratic form `x^T A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (u, v) in self.edges() {
            acc += 2.0 * x[u] * x[v];
        }
        acc
    }
}

/// Row sum of `view` at `node`.
pub fn degree(view: &AdjacencyView, node: usize) -> Result<usize> {
    view.degree(node)
}
