use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use locq::codes::{SquareComplex, StabilizerCode, SubdividedCode};
use locq::sim::{run_trials, NoiseModel, SubdividedTrial};
use locq::subdivided::{decode_subdivided, BruteForceOuter, PatchMode};

fn toric(l: usize) -> (SubdividedCode, BruteForceOuter) {
    let code = SubdividedCode::new(SquareComplex::toric(3, 3).unwrap(), l).unwrap();
    let outer = BruteForceOuter::new(code.outer_css()).unwrap();
    (code, outer)
}

fn trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_trials");
    group.sample_size(10);
    let noise = NoiseModel::new(0.01, 0.0, 1).unwrap();
    for l in [5, 9] {
        let (code, outer) = toric(l);
        let decoder = SubdividedTrial { code: &code, outer: &outer, mode: PatchMode::Serial };
        for (name, parallel) in [("serial", false), ("parallel", true)] {
            group.bench_with_input(BenchmarkId::new(name, l), &parallel, |b, &parallel| {
                b.iter(|| run_trials(&decoder, &noise, 2_000, parallel).unwrap())
            });
        }
    }
    group.finish();
}

fn patches(c: &mut Criterion) {
    let mut group = c.benchmark_group("decode_subdivided");
    let noise = NoiseModel::new(0.02, 0.0, 2).unwrap();
    for l in [9, 17] {
        let (code, outer) = toric(l);
        let g = code.graph();
        let syndromes: Vec<_> = (0..64).map(|t| g.syndrome_of(&noise.sample(g.num_edges(), t).0)).collect();
        for (name, mode) in [("serial", PatchMode::Serial), ("parallel_patches", PatchMode::ParallelPatches)] {
            group.bench_with_input(BenchmarkId::new(name, l), &mode, |b, &mode| {
                b.iter(|| {
                    for s in &syndromes {
                        decode_subdivided(&code, s, None, &outer, mode).unwrap();
                    }
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, trials, patches);
criterion_main!(benches);
