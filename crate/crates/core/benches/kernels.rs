//! Benchmarks for the heavy kernels, parameterized by the `parallel`
//! feature so the rayon and sequential code paths can be compared:
//!
//! ```text
//! cargo bench -p meshsna-core                          # parallel (default)
//! cargo bench -p meshsna-core --no-default-features    # sequential
//! ```

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use meshsna_core::attack::{run_attack_experiment, AttackConfig};
use meshsna_core::centrality::{self, CentralityMetric};
use meshsna_core::generate::random_geometric_graph;
use meshsna_core::stdma::{ElectionEngine, ElectionParams, SchedulingMode, SlotId, DEFAULT_FRAME_SIZE, DEFAULT_TICKET_SCALE};

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

fn bench_all_pairs(c: &mut Criterion) {
    let g = random_geometric_graph(200, 8.0, 1).unwrap();
    c.bench_with_input(BenchmarkId::new("all_pairs_distances", MODE), &g, |b, g| {
        b.iter(|| g.all_pairs_distances())
    });
}

fn bench_betweenness(c: &mut Criterion) {
    let g = random_geometric_graph(200, 8.0, 1).unwrap();
    c.bench_with_input(BenchmarkId::new("betweenness", MODE), &g, |b, g| {
        b.iter(|| centrality::betweenness_centrality(g).unwrap())
    });
}

fn bench_attack(c: &mut Criterion) {
    let g = random_geometric_graph(100, 8.0, 2).unwrap();
    let cfg = AttackConfig::new(
        g,
        [CentralityMetric::Betweenness, CentralityMetric::Closeness].into(),
        20,
        7,
    );
    c.bench_with_input(BenchmarkId::new("attack_experiment", MODE), &cfg, |b, cfg| {
        b.iter(|| run_attack_experiment(cfg).unwrap())
    });
}

fn bench_elections(c: &mut Criterion) {
    let g = random_geometric_graph(30, 6.0, 3).unwrap();
    let scores = centrality::closeness_centrality(&g).unwrap();
    let params = ElectionParams {
        frame_size: DEFAULT_FRAME_SIZE,
        ticket_scale: DEFAULT_TICKET_SCALE,
        mode: SchedulingMode::SociallyAware,
        seed: 0,
    };
    let engine = ElectionEngine::new(&g, Some(&scores), params).unwrap();
    c.bench_with_input(BenchmarkId::new("elections_2000_slots", MODE), &engine, |b, engine| {
        b.iter(|| {
            let mut wins = 0usize;
            for slot in 0..2000 {
                wins += engine.winners(SlotId(slot)).len();
            }
            wins
        })
    });
}

criterion_group!(benches, bench_all_pairs, bench_betweenness, bench_attack, bench_elections);
criterion_main!(benches);
