use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pbspm_core::baselines::{katz_scores, ra_scores, srw_scores, KatzConfig, WalkConfig};
use pbspm_core::evaluation::{rank_candidates, ExperimentContext};
use pbspm_core::spectral::{eigendecompose, pbspm_scores, sample_perturbation, truncated_scores};
use pbspm_core::synthetic::active_growth;
use pbspm_core::{AdjacencyView, PopularityVector};

const SIZES: [usize; 3] = [100, 200, 400];

fn training_view(n: usize) -> AdjacencyView {
    active_growth(n, 3, 7).unwrap().adjacency(None).unwrap()
}

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral");
    group.sample_size(10);
    for n in SIZES {
        let view = training_view(n);
        let edges: Vec<_> = view.edges().collect();
        let sample = sample_perturbation(view.n(), &edges, 0.1, 1).unwrap();
        let model = eigendecompose(&sample.retained).unwrap();
        let s = PopularityVector::uniform(view.n(), 0.5).unwrap();
        group.bench_with_input(BenchmarkId::new("eigendecompose", n), &sample.retained, |b, v| {
            b.iter(|| eigendecompose(black_box(v)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pbspm_scores", n), &model, |b, m| {
            b.iter(|| pbspm_scores(black_box(m), &s, 3.0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("truncated_scores_m5", n), &model, |b, m| {
            b.iter(|| truncated_scores(black_box(m), &s, 3.0, 5).unwrap())
        });
    }
    group.finish();
}

fn baselines(c: &mut Criterion) {
    let mut group = c.benchmark_group("baselines");
    group.sample_size(10);
    for n in SIZES {
        let view = training_view(n);
        let katz = KatzConfig::default_for(&view).unwrap();
        group.bench_with_input(BenchmarkId::new("ra", n), &view, |b, v| {
            b.iter(|| ra_scores(black_box(v)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("katz", n), &view, |b, v| {
            b.iter(|| katz_scores(black_box(v), &katz).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("srw", n), &view, |b, v| {
            b.iter(|| srw_scores(black_box(v), &WalkConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluation");
    group.sample_size(10);
    let graph = active_growth(200, 3, 7).unwrap();
    let ctx = ExperimentContext::new(&graph, 0.1).unwrap();
    let scores = ra_scores(&ctx.train_view).unwrap();
    group.bench_function("rank_candidates_200", |b| {
        b.iter(|| rank_candidates(black_box(&scores), &ctx.train_view).unwrap())
    });
    group.bench_function("perturbed_models_200_x10", |b| {
        b.iter(|| ctx.perturbed_models(0.1, 0, 10))
    });
    group.finish();
}

criterion_group!(benches, spectral, baselines, evaluation);
criterion_main!(benches);
