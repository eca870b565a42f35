//! Seeded random temporal graphs for tests, benchmarks and demos.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{simplify, RawEvent, TemporalEventStream, TemporalGraph};

fn build(events: Vec<(usize, usize, i64)>) -> Result<TemporalGraph> {
    simplify(&TemporalEventStream {
        events: events
            .into_iter()
            .map(|(a, b, t)| RawEvent {
                source: a.to_string(),
                target: b.to_string(),
                weight: None,
                timestamp: t,
            })
            .collect(),
    })
}

/// G(n, p) with edges stamped in a random order. Isolated nodes are absent
/// from the result, so it may have fewer than `n` nodes.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<TemporalGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut events = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                events.push((i, j, rng.random_range(0..1_000_000i64)));
            }
        }
    }
    if events.is_empty() {
        return Err(Error::EmptyGraph);
    }
    build(events)
}

/// Growing network whose nodes lose their appeal with age.
///
/// Each arriving node links to `links_per_step` earlier nodes chosen with
/// weight `(degree + 1) * exp(-age / lifetime)`, and one extra edge joins two
/// recently active nodes. After the last arrival a densification phase of
/// `n * links_per_step / 4` edges closes triangles around nodes drawn with the
/// same recency weight, so late edges connect nodes that already exist. Early
/// hubs keep their degree but stop attracting edges.
pub fn active_growth(n: usize, links_per_step: usize, seed: u64) -> Result<TemporalGraph> {
    if links_per_step == 0 || n <= links_per_step + 1 {
        return Err(Error::InvalidParameter(format!(
            "need n > links_per_step + 1 >= 2, got n = {n}, links_per_step = {links_per_step}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lifetime = (n as f64 / 6.0).max(2.0);
    let mut degree = vec![0usize; n];
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut events = Vec::new();
    let mut clock = 0i64;
    let mut link = |a: usize, b: usize, degree: &mut Vec<usize>, events: &mut Vec<(usize, usize, i64)>| {
        if a != b && seen.insert((a.min(b), a.max(b))) {
            degree[a] += 1;
            degree[b] += 1;
            events.push((a, b, clock));
            clock += 1;
        }
    };
    let seed_size = links_per_step + 1;
    for i in 0..seed_size {
        for j in (i + 1)..seed_size {
            link(i, j, &mut degree, &mut events);
        }
    }
    for node in seed_size..n {
        let weights: Vec<f64> = (0..node)
            .map(|v| (degree[v] + 1) as f64 * (-((node - v) as f64) / lifetime).exp())
            .collect();
        let pick = |rng: &mut ChaCha8Rng| -> usize {
            let total: f64 = weights.iter().sum();
            let mut r = rng.random::<f64>() * total;
            for (v, w) in weights.iter().enumerate() {
                r -= w;
                if r <= 0.0 {
                    return v;
                }
            }
            node - 1
        };
        let mut attempts = 0;
        let mut added = 0;
        while added < links_per_step && attempts < 20 * links_per_step {
            attempts += 1;
            let target = pick(&mut rng);
            let before = events.len();
            link(node, target, &mut degree, &mut events);
            added += events.len() - before;
        }
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        link(a, b, &mut degree, &mut events);
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in &events {
        adj[a].push(b);
        adj[b].push(a);
    }
    let weights: Vec<f64> = (0..n)
        .map(|v| (degree[v] + 1) as f64 * (-((n - v) as f64) / lifetime).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    let target = n * links_per_step / 4;
    let mut added = 0;
    let mut attempts = 0;
    while added < target && attempts < 50 * target {
        attempts += 1;
        let mut r = rng.random::<f64>() * total;
        let a = weights.iter().position(|w| {
            r -= w;
            r <= 0.0
        });
        let a = a.unwrap_or(n - 1);
        let b = adj[a][rng.random_range(0..adj[a].len())];
        let c = adj[b][rng.random_range(0..adj[b].len())];
        let before = events.len();
        link(a, c, &mut degree, &mut events);
        if events.len() > before {
            adj[a].push(c);
            adj[c].push(a);
            added += 1;
        }
    }
    build(events)
}
