use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use piezosaw::coupling::{figure5_preset, sweep_coupling_with, SweepAxis};
use piezosaw::dynamics::{figure_preset, integrate_many_with, FIGURE_PRESETS};
use piezosaw::par::Execution;
use piezosaw::quantize::zero_point_map_with;
use piezosaw::MaterialParams;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn zero_point_grid(c: &mut Criterion) {
    let m = MaterialParams::terfenol_d();
    let widths: Vec<f64> = (0..12).map(|i| 1e-6 * 100f64.powf(i as f64 / 11.0)).collect();
    let freqs: Vec<f64> = (0..10).map(|i| 1e9 + 1e9 * i as f64).collect();
    let mut group = c.benchmark_group("zero_point_map");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| zero_point_map_with(exec, &m, &widths, &freqs).unwrap())
        });
    }
    group.finish();
}

fn width_sweep(c: &mut Criterion) {
    let m = MaterialParams::terfenol_d();
    let setup = figure5_preset("fig5a").unwrap();
    let widths: Vec<f64> = (0..64).map(|i| 1e-6 * 100f64.powf(i as f64 / 63.0)).collect();
    let mut group = c.benchmark_group("sweep_lateral_width");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep_coupling_with(exec, &m, &setup, SweepAxis::LateralWidthL, &widths).unwrap())
        });
    }
    group.finish();
}

fn preset_scan(c: &mut Criterion) {
    let problems: Vec<_> = FIGURE_PRESETS.iter().map(|n| figure_preset(n).unwrap()).collect();
    let mut group = c.benchmark_group("dynamics_presets");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| integrate_many_with(exec, &problems))
        });
    }
    group.finish();
}

criterion_group!(benches, zero_point_grid, width_sweep, preset_scan);
criterion_main!(benches);
