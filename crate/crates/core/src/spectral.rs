//! Structural perturbation: random edge removal, eigendecomposition of the
//! remaining adjacency, first-order eigenvalue corrections and the family of
//! score reconstructions built from them.
//!
//! With eigenpairs `(λ_k, x_k)` of the retained adjacency and corrections
//! `Δλ_k = x_kᵀ ΔA x_k`, every reconstruction here has the form
//!
//! ```text
//! S = Σ_{k ≤ m} (λ_k + Δλ_k) x'_k x'_kᵀ,   x'_{k,i} = x_{k,i} (1 + α s_i)
//! ```
//!
//! Plain SPM is `α = 0, m = n`; the popularity-boosted variant uses `α > 0`;
//! the fast variant additionally keeps only the `m` largest `|λ|`.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::AdjacencyView;
use crate::split::{check_open_unit, PopularityVector};

/// Default fraction of training edges removed per perturbation.
pub const DEFAULT_P_H: f64 = 0.10;

/// Default relative eigengap threshold for [`select_m`].
pub const DEFAULT_GAP_THRESHOLD: f64 = 0.05;

/// `A^T` split into the retained part `A^R` and the removed part `ΔA`.
#[derive(Debug, Clone)]
pub struct PerturbationSample {
    pub retained: AdjacencyView,
    pub removed: AdjacencyView,
    /// Indices into the edge list the sample was drawn from, ascending.
    pub removed_edges: Vec<usize>,
    pub p_h: f64,
}

/// Removes `round(p_h * |edges|)` edges uniformly at random without replacement.
pub fn sample_perturbation(n: usize, edges: &[(usize, usize)], p_h: f64, seed: u64) -> Result<PerturbationSample> {
    check_open_unit("p_h", p_h)?;
    let count = (p_h * edges.len() as f64).round() as usize;
    if count == 0 {
        return Err(Error::DegeneratePerturbation {
            p_h,
            train_edges: edges.len(),
        });
    }
    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(Error::IndexOutOfRange {
            index: a.max(b),
            len: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut removed_edges = rand::seq::index::sample(&mut rng, edges.len(), count).into_vec();
    removed_edges.sort_unstable();
    let mut is_removed = vec![false; edges.len()];
    for &i in &removed_edges {
        is_removed[i] = true;
    }
    let retained = AdjacencyView::from_pairs(n, edges.iter().zip(&is_removed).filter(|(_, &r)| !r).map(|(&e, _)| e));
    let removed = AdjacencyView::from_pairs(n, removed_edges.iter().map(|&i| edges[i]));
    Ok(PerturbationSample {
        retained,
        removed,
        removed_edges,
        p_h,
    })
}

/// Eigenpairs of a symmetric matrix ordered by `|λ|` descending, together
/// with first-order corrections (zero until [`eigenvalue_correction`]).
#[derive(Debug, Clone)]
pub struct SpectralModel {
    eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector of `eigenvalues[k]`.
    eigenvectors: DMatrix<f64>,
    corrections: Vec<f64>,
}

impl SpectralModel {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k).iter().copied().collect()
    }

    pub fn corrections(&self) -> &[f64] {
        &self.corrections
    }

    /// `λ_k + Δλ_k`.
    pub fn corrected_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.corrections)
            .map(|(l, d)| l + d)
            .collect()
    }
}

/// Full symmetric eigendecomposition of an adjacency view.
pub fn eigendecompose(view: &AdjacencyView) -> Result<SpectralModel> {
    eigendecompose_matrix(view.to_dense())
}

/// Full symmetric eigendecomposition of a dense symmetric matrix.
///
/// Pairs are sorted by `|λ|` descending, ties by signed `λ` descending and
/// then solver order. Each eigenvector is signed so that its largest
/// magnitude component is positive.
pub fn eigendecompose_matrix(matrix: DMatrix<f64>) -> Result<SpectralModel> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            found: matrix.ncols(),
        });
    }
    if n == 0 {
        return Ok(SpectralModel {
            eigenvalues: Vec::new(),
            eigenvectors: DMatrix::zeros(0, 0),
            corrections: Vec::new(),
        });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if matrix[(i, j)] != matrix[(j, i)] {
                return Err(Error::InvalidParameter(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    let eig = matrix
        .try_symmetric_eigen(f64::EPSILON, 1000 * n.max(10))
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    if eig.eigenvalues.iter().any(|x| !x.is_finite()) || eig.eigenvectors.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("eigensolver produced non-finite values".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (la, lb) = (eig.eigenvalues[a], eig.eigenvalues[b]);
        lb.abs()
            .total_cmp(&la.abs())
            .then_with(|| lb.total_cmp(&la))
            .then(Ordering::Equal)
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let mut pivot = 0;
        for i in 1..n {
            if col[i].abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            eigenvectors[(i, dst)] = sign * col[i];
        }
    }
    Ok(SpectralModel {
        eigenvalues,
        eigenvectors,
        corrections: vec![0.0; n],
    })
}

/// Sets `Δλ_k = x_kᵀ ΔA x_k` for every eigenpair (eigenvectors are unit norm).
pub fn eigenvalue_correction(mut model: SpectralModel, delta: &AdjacencyView) -> Result<SpectralModel> {
    if delta.n() != model.n() {
        return Err(Error::ShapeMismatch {
            expected: model.n(),
            found: delta.n(),
        });
    }
    let n = model.n();
    let pairs: Vec<(usize, usize)> = delta.edges().collect();
    for k in 0..n {
        let col = model.eigenvectors.column(k);
        model.corrections[k] = pairs.iter().map(|&(u, v)| 2.0 * col[u] * col[v]).sum();
    }
    Ok(model)
}

/// Symmetric pair scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    values: DMatrix<f64>,
}

impl ScoreMatrix {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() != values.ncols() {
            return Err(Error::ShapeMismatch {
                expected: values.nrows(),
                found: values.ncols(),
            });
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical("score matrix contains non-finite values".into()));
        }
        Ok(ScoreMatrix { values })
    }

    pub fn zeros(n: usize) -> Self {
        ScoreMatrix {
            values: DMatrix::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.values
    }

    /// Entrywise mean, summed in slice order.
    pub fn mean(matrices: &[ScoreMatrix]) -> Result<ScoreMatrix> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidParameter("cannot average zero score matrices".into()))?;
        let mut acc = DMatrix::zeros(first.n(), first.n());
        for m in matrices {
            if m.n() != first.n() {
                return Err(Error::ShapeMismatch {
                    expected: first.n(),
                    found: m.n(),
                });
            }
            acc += &m.values;
        }
        acc /= matrices.len() as f64;
        ScoreMatrix::new(acc)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &ScoreMatrix) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn symmetrized(mut values: DMatrix<f64>) -> Result<Self> {
        let n = values.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (values[(i, j)] + values[(j, i)]);
                values[(i, j)] = avg;
                values[(j, i)] = avg;
            }
        }
        ScoreMatrix::new(values)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must be a finite value >= 0, got {alpha}"
        )))
    }
}

fn boost_factors(model: &SpectralModel, s: &PopularityVector, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if s.len() != model.n() {
        return Err(Error::ShapeMismatch {
            expected: model.n(),
            found: s.len(),
        });
    }
    Ok(s.as_slice().iter().map(|&si| 1.0 + alpha * si).collect())
}

/// `x'_{k,i} = x_{k,i} (1 + α s_i)` for all eigenvectors. Not renormalized.
pub fn boost_eigenvectors(model: &SpectralModel, s: &PopularityVector, alpha: f64) -> Result<DMatrix<f64>> {
    let factors = boost_factors(model, s, alpha)?;
    let mut boosted = model.eigenvectors.clone();
    for (i, mut row) in boosted.row_iter_mut().enumerate() {
        row *= factors[i];
    }
    Ok(boosted)
}

fn reconstruct(model: &SpectralModel, factors: Option<&[f64]>, m: usize) -> Result<ScoreMatrix> {
    let n = model.n();
    let mut basis = model.eigenvectors.columns(0, m).into_owned();
    if let Some(factors) = factors {
        for (i, mut row) in basis.row_iter_mut().enumerate() {
            row *= factors[i];
        }
    }
    let mut weighted = basis.clone();
    for (k, mut col) in weighted.column_iter_mut().enumerate() {
        col *= model.eigenvalues[k] + model.corrections[k];
    }
    let mut out = DMatrix::zeros(n, n);
    out.gemm(1.0, &weighted, &basis.transpose(), 0.0);
    ScoreMatrix::symmetrized(out)
}

/// `Σ_k (λ_k + Δλ_k) x_k x_kᵀ` over all eigenpairs.
pub fn spm_scores(model: &SpectralModel) -> Result<ScoreMatrix> {
    reconstruct(model, None, model.n())
}

/// SPM with popularity-boosted eigenvectors over all eigenpairs.
pub fn pbspm_scores(model: &SpectralModel, s: &PopularityVector, alpha: f64) -> Result<ScoreMatrix> {
    truncated_scores(model, s, alpha, model.n())
}

/// Boosted reconstruction over the `m` eigenpairs of largest `|λ|`.
pub fn truncated_scores(model: &SpectralModel, s: &PopularityVector, alpha: f64, m: usize) -> Result<ScoreMatrix> {
    if m == 0 || m > model.n() {
        return Err(Error::InvalidParameter(format!(
            "m must lie in 1..={}, got {m}",
            model.n()
        )));
    }
    let factors = boost_factors(model, s, alpha)?;
    reconstruct(model, Some(&factors), m)
}

/// Eigengaps `|λ_i| - |λ_{i+1}|` for `i = 1..len-1`.
pub fn eigengaps(eigenvalues: &[f64]) -> Vec<f64> {
    eigenvalues.windows(2).map(|w| w[0].abs() - w[1].abs()).collect()
}

/// Number of leading eigenpairs to keep: the largest (1-based) `i` whose gap
/// `|λ_i| - |λ_{i+1}|` exceeds `threshold * |λ_1|`. Falls back to 1 when no
/// gap qualifies.
pub fn select_m(eigenvalues: &[f64], threshold: f64) -> Result<usize> {
    if eigenvalues.is_empty() {
        return Err(Error::InvalidParameter("select_m needs at least one eigenvalue".into()));
    }
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gap threshold must be >= 0, got {threshold}"
        )));
    }
    if eigenvalues.windows(2).any(|w| w[0].abs() < w[1].abs()) {
        return Err(Error::InvalidParameter(
            "eigenvalues must be sorted by |λ| descending".into(),
        ));
    }
    let cutoff = threshold * eigenvalues[0].abs();
    Ok(eigengaps(eigenvalues)
        .iter()
        .enumerate()
        .filter(|(_, &g)| g > cutoff)
        .map(|(i, _)| i + 1)
        .next_back()
        .unwrap_or(1))
}
