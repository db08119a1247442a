//! Parallel vs sequential sweep benchmarks on the real per-frequency
//! workload: the near-field polarization kernel (full 25-order Mie sum)
//! over the default frequency grid.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lspsim::config::parse_config;
use lspsim::exec::{map_grid, map_grid_seq};
use lspsim::spectra::polarization_at;

fn bench_near_field_sweep(c: &mut Criterion) {
    let cfg = parse_config("", &[]).unwrap();
    let system = cfg.system().unwrap();
    let emitter = cfg.emitter().unwrap();
    let energies = cfg.omega_grid().unwrap().values();

    let kernel = |e: &f64| polarization_at(&emitter, &system, *e, None, cfg.n_modes, cfg.backend);

    let mut group = c.benchmark_group("near_field_sweep");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("map_grid", energies.len()), &energies, |b, es| {
        b.iter(|| map_grid(es, kernel).unwrap())
    });
    group.bench_with_input(
        BenchmarkId::new("sequential", energies.len()),
        &energies,
        |b, es| b.iter(|| map_grid_seq(es, kernel).unwrap()),
    );
    group.finish();
}

criterion_group!(benches, bench_near_field_sweep);
criterion_main!(benches);
