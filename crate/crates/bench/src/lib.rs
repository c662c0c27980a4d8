use std::hint::black_box;

use criterion::{BenchmarkId, Criterion, Throughput};

use onebit_core::infoprinciple::{state_from_propositions, PropositionSet};
use onebit_core::localrealism::{run_chsh_trials, ChshSettings};
use onebit_core::measurement::{measure, random_qubit, Direction};
use onebit_core::protocols::{e91_run, qrng_bits, teleport, BellState, Channel};
use onebit_core::{Operator, OperatorKind, RandomSource, StateVector, C64};

fn hadamard() -> Operator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Operator::new(
        vec![C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)],
        OperatorKind::Unitary,
    )
    .unwrap()
}

fn apply_operator(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_operator");
    let h = hadamard();
    let cz = Operator::pauli_z().kron(&Operator::pauli_z());
    for n in [2usize, 6, 10, 12] {
        let s = StateVector::basis(n, 0).unwrap();
        group.throughput(Throughput::Elements(1 << n));
        group.bench_with_input(BenchmarkId::new("single_site", n), &s, |b, s| {
            b.iter(|| s.apply(black_box(&h), &[n / 2]).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("two_site", n), &s, |b, s| {
            b.iter(|| s.apply(black_box(&cz), &[0, n - 1]).unwrap())
        });
    }
    group.finish();
}

fn measurement(c: &mut Criterion) {
    let s = BellState::PsiPlus.state();
    let d = Direction::planar(0.3);
    let mut rng = RandomSource::new(1, 0);
    c.bench_function("measure_two_system", |b| b.iter(|| measure(&s, 0, d, &mut rng).unwrap()));
    c.bench_function("qrng_1024_bits", |b| b.iter(|| qrng_bits(1024, &mut rng).unwrap()));
}

fn chsh(c: &mut Criterion) {
    let s = BellState::PsiPlus.state();
    let (settings, _) = ChshSettings::optimal_planar(&s).unwrap();
    let rng = RandomSource::new(2, 0);
    let mut group = c.benchmark_group("chsh");
    group.throughput(Throughput::Elements(10_000));
    group.bench_function("trials_10k", |b| {
        b.iter(|| run_chsh_trials(&s, &settings, 10_000, &rng).unwrap())
    });
    group.finish();
    c.bench_function("optimal_planar_search", |b| b.iter(|| ChshSettings::optimal_planar(black_box(&s)).unwrap()));
}

fn protocols(c: &mut Criterion) {
    let mut rng = RandomSource::new(3, 0);
    let phi = random_qubit(&mut rng);
    c.bench_function("teleport", |b| b.iter(|| teleport(black_box(&phi), &mut rng).unwrap()));
    let root = RandomSource::new(4, 0);
    c.bench_function("e91_1000_pairs", |b| b.iter(|| e91_run(1000, Channel::Ideal, &root).unwrap()));
}

fn propositions(c: &mut Criterion) {
    let mut group = c.benchmark_group("state_from_propositions");
    for text in [
        "ZZ=-1, YY=+1",
        "XZZ=+1, ZXZ=+1, ZZX=+1",
        "ZZIIII=+1, IZZIII=+1, IIZZII=+1, IIIZZI=+1, IIIIZZ=+1, XXXXXX=+1",
    ] {
        let ps = PropositionSet::parse(text).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(ps.num_systems()), &ps, |b, ps| {
            b.iter(|| state_from_propositions(ps).unwrap())
        });
    }
    group.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    apply_operator(c);
    measurement(c);
    chsh(c);
    protocols(c);
    propositions(c);
}
