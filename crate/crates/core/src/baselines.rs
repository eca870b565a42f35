//! Classical similarity indices used as comparison predictors.
//!
//! The three local indices (CN, AA, RA) are accumulated from each node's
//! neighbour pairs and leave the diagonal at zero. Katz and SRW are built from
//! matrix products over the whole graph.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::AdjacencyView;
use crate::spectral::ScoreMatrix;

/// Katz index settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KatzConfig {
    /// Path damping; must stay below `1 / λ_max`.
    pub damping: f64,
    /// `Some(l)` sums paths up to length `l`; `None` uses the closed form.
    pub max_path_length: Option<usize>,
}

impl KatzConfig {
    /// Half of the convergence radius of `view`.
    pub fn default_for(view: &AdjacencyView) -> Result<Self> {
        let lambda_max = largest_eigenvalue(view)?;
        let damping = if lambda_max > 0.0 { 0.5 / lambda_max } else { 0.5 };
        Ok(KatzConfig {
            damping,
            max_path_length: None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub steps: usize,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { steps: 3 }
    }
}

fn accumulate_common<F>(view: &AdjacencyView, weight: F) -> Result<ScoreMatrix>
where
    F: Fn(usize) -> f64,
{
    let n = view.n();
    let mut s = DMatrix::zeros(n, n);
    for z in 0..n {
        let nbrs = view.neighbors(z);
        if nbrs.len() < 2 {
            continue;
        }
        let w = weight(nbrs.len());
        for (a, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[a + 1..] {
                s[(x, y)] += w;
                s[(y, x)] += w;
            }
        }
    }
    ScoreMatrix::new(s)
}

/// Common neighbours `|Γ(x) ∩ Γ(y)|`.
pub fn cn_scores(view: &AdjacencyView) -> Result<ScoreMatrix> {
    accumulate_common(view, |_| 1.0)
}

/// Adamic–Adar `Σ_z 1 / ln k_z` over common neighbours.
pub fn aa_scores(view: &AdjacencyView) -> Result<ScoreMatrix> {
    // A common neighbour always has degree >= 2, so ln k_z > 0.
    accumulate_common(view, |k| 1.0 / (k as f64).ln())
}

/// Resource allocation `Σ_z 1 / k_z` over common neighbours.
pub fn ra_scores(view: &AdjacencyView) -> Result<ScoreMatrix> {
    accumulate_common(view, |k| 1.0 / k as f64)
}

/// Largest eigenvalue of the adjacency (0 for an edgeless view).
pub fn largest_eigenvalue(view: &AdjacencyView) -> Result<f64> {
    if view.edge_count() == 0 {
        return Ok(0.0);
    }
    let eig = view
        .to_dense()
        .try_symmetric_eigen(f64::EPSILON, 1000 * view.n().max(10))
        .ok_or_else(|| Error::Numerical("eigensolver did not converge".into()))?;
    Ok(eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// `B ← A·B` using the neighbour lists of `view`, with each row of `A`
/// scaled by `row_scale`.
fn sparse_left_mul(view: &AdjacencyView, row_scale: &[f64], b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = view.n();
    let mut out = DMatrix::zeros(n, b.ncols());
    for x in 0..n {
        let scale = row_scale[x];
        if scale == 0.0 {
            continue;
        }
        for &z in view.neighbors(x) {
            for c in 0..b.ncols() {
                out[(x, c)] += scale * b[(z, c)];
            }
        }
    }
    out
}

/// Katz index `Σ_l β^l (A^l)_{xy}`, in closed form `(I - βA)^{-1} - I` or as
/// a finite series.
pub fn katz_scores(view: &AdjacencyView, cfg: &KatzConfig) -> Result<ScoreMatrix> {
    let beta = cfg.damping;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("Katz damping must be > 0, got {beta}")));
    }
    let lambda_max = largest_eigenvalue(view)?;
    if lambda_max > 0.0 && beta * lambda_max >= 1.0 {
        return Err(Error::Divergence {
            damping: beta,
            limit: 1.0 / lambda_max,
        });
    }
    let n = view.n();
    match cfg.max_path_length {
        Some(max_len) => {
            let unit = vec![1.0; n];
            let mut power = DMatrix::identity(n, n);
            let mut acc = DMatrix::zeros(n, n);
            let mut coeff = 1.0;
            for _ in 0..max_len {
                power = sparse_left_mul(view, &unit, &power);
                coeff *= beta;
                acc += &power * coeff;
            }
            ScoreMatrix::symmetrized(acc)
        }
        None => {
            let system = DMatrix::identity(n, n) - view.to_dense() * beta;
            // Positive definite whenever β < 1/λ_max; LU covers the rounding edge.
            let inverse = match system.clone().cholesky() {
                Some(c) => c.inverse(),
                None => system
                    .try_inverse()
                    .ok_or_else(|| Error::Numerical("I - βA is singular".into()))?,
            };
            ScoreMatrix::symmetrized(inverse - DMatrix::identity(n, n))
        }
    }
}

/// Superposed random walk
/// `s_xy = Σ_{τ=1..t} [q_x π_xy(τ) + q_y π_yx(τ)]`, `q_x = k_x / 2|E|`.
///
/// Nodes without neighbours have all-zero transition rows.
pub fn srw_scores(view: &AdjacencyView, cfg: &WalkConfig) -> Result<ScoreMatrix> {
    if cfg.steps == 0 {
        return Err(Error::InvalidParameter("SRW needs at least one step".into()));
    }
    let n = view.n();
    let m = view.edge_count();
    if m == 0 {
        return Ok(ScoreMatrix::zeros(n));
    }
    let degrees = view.degrees();
    let inv_degree: Vec<f64> = degrees
        .iter()
        .map(|&k| if k == 0 { 0.0 } else { 1.0 / k as f64 })
        .collect();
    let q: Vec<f64> = degrees.iter().map(|&k| k as f64 / (2.0 * m as f64)).collect();

    // π(τ) = P^τ with P = D^{-1} A, built as P · π(τ-1).
    let mut pi = DMatrix::identity(n, n);
    let mut cumulative = DMatrix::zeros(n, n);
    for _ in 0..cfg.steps {
        pi = sparse_left_mul(view, &inv_degree, &pi);
        cumulative += &pi;
    }
    let scores = DMatrix::from_fn(n, n, |x, y| q[x] * cumulative[(x, y)] + q[y] * cumulative[(y, x)]);
    ScoreMatrix::symmetrized(scores)
}
