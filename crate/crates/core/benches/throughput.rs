//! Sequential vs. data-parallel execution of the three batch workloads:
//! FER frames, node census and latency sweeps.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polarlab::construction::{self, Channel};
use polarlab::latency::{self, OptFlags};
use polarlab::nodes::{self, CensusParams};
use polarlab::sim::{self, DecoderKind, SimSpec};
use polarlab::{DecoderParams, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn fer_frames(c: &mut Criterion) {
    let cfg = construction::resolve_config(Channel::Downlink, 140, 432).unwrap();
    let mut spec = SimSpec::new(cfg, DecoderKind::SrList, DecoderParams::sr_list(8), vec![2.0]);
    spec.min_errors = u64::MAX;
    spec.max_frames = 512;
    let mut group = c.benchmark_group("fer_512_frames_dl_432_140");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(sim::run_fer(&spec, exec).unwrap()))
        });
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let sample = nodes::config_space(Channel::Downlink, 64);
    let mut group = c.benchmark_group("census_pdcch_stride_64");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(nodes::node_distribution(Channel::Downlink, &sample, &CensusParams::default(), exec).unwrap()))
        });
    }
    group.finish();
}

fn latency_sweep(c: &mut Criterion) {
    let configs = latency::sweep(Channel::Downlink, 432);
    let params = OptFlags::ALL.params(8, 4);
    let mut group = c.benchmark_group("latency_sweep_dl_432");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(latency::worst_case(&configs, &params, exec).unwrap().max_cycles))
        });
    }
    group.finish();
}

criterion_group!(benches, fer_frames, census, latency_sweep);
criterion_main!(benches);
