use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use sumprod::energy::{e_plus, energy_k_set, tk_set, Op};
use sumprod::incidence::{collinear_quadruples_sym, collinear_triples};
use sumprod::sets::rng;
use sumprod::sl2::{cf_count, group_conv, random_sl2, GroupFn};
use sumprod::transform::{add_conv, dft, dft_naive, mul_conv};
use sumprod::{make_field, IntFn, SetFp, ZeroPolicy};

fn transforms(c: &mut Criterion) {
    let mut g = c.benchmark_group("dft");
    for p in [101u64, 1009, 4099] {
        let field = make_field(p).unwrap();
        let a = SetFp::random(&field, (p / 4) as usize, &mut rng(p)).unwrap();
        let f = IntFn::balanced(&a);
        g.bench_with_input(BenchmarkId::new("chirp", p), &f, |b, f| b.iter(|| dft(black_box(f))));
        if p <= 1009 {
            g.bench_with_input(BenchmarkId::new("naive", p), &f, |b, f| b.iter(|| dft_naive(black_box(f))));
        }
    }
    g.finish();
}

fn convolutions(c: &mut Criterion) {
    let mut g = c.benchmark_group("convolution");
    for p in [1009u64, 4099] {
        let field = make_field(p).unwrap();
        let mut r = rng(p ^ 1);
        let a = IntFn::indicator(&SetFp::random(&field, 300, &mut r).unwrap());
        let b = IntFn::indicator(&SetFp::random(&field, 300, &mut r).unwrap());
        g.bench_function(BenchmarkId::new("additive", p), |bn| bn.iter(|| add_conv(black_box(&a), black_box(&b))));
        g.bench_function(BenchmarkId::new("multiplicative", p), |bn| {
            bn.iter(|| mul_conv(black_box(&a), black_box(&b), ZeroPolicy::Track))
        });
    }
    g.finish();
}

fn energies(c: &mut Criterion) {
    let field = make_field(1009).unwrap();
    let a = SetFp::random(&field, 200, &mut rng(7)).unwrap();
    let mut g = c.benchmark_group("energy");
    g.bench_function("additive", |b| b.iter(|| e_plus(black_box(&a))));
    g.bench_function("multiplicative", |b| b.iter(|| sumprod::energy::energy(Op::Mul, black_box(&a), &a)));
    g.bench_function("energy-k/k=4", |b| b.iter(|| energy_k_set(black_box(&a), 4).unwrap()));
    g.bench_function("tk/k=3", |b| b.iter(|| tk_set(black_box(&a), 3).unwrap()));
    g.finish();
}

fn collinear(c: &mut Criterion) {
    let field = make_field(1009).unwrap();
    let mut g = c.benchmark_group("collinear");
    g.sample_size(10);
    for n in [50usize, 100] {
        let a = SetFp::random(&field, n, &mut rng(n as u64)).unwrap();
        g.bench_with_input(BenchmarkId::new("triples", n), &a, |b, a| b.iter(|| collinear_triples(black_box(a))));
        g.bench_with_input(BenchmarkId::new("quadruples", n), &a, |b, a| {
            b.iter(|| collinear_quadruples_sym(black_box(a)))
        });
    }
    g.finish();
}

fn continued_fractions(c: &mut Criterion) {
    let field = make_field(1009).unwrap();
    let a = SetFp::random(&field, 200, &mut rng(11)).unwrap();
    let mut g = c.benchmark_group("continued-fraction");
    g.sample_size(10);
    for k in [3u32, 6] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| b.iter(|| cf_count(black_box(&a), k).unwrap()));
    }
    g.finish();
}

fn group_convolution(c: &mut Criterion) {
    let mut g = c.benchmark_group("group-convolution");
    for p in [5u64, 7, 11] {
        let field = make_field(p).unwrap();
        let mut r = rng(p);
        let s: Vec<_> = (0..6).map(|_| random_sl2(&field, &mut r)).collect();
        let mu = GroupFn::uniform(&field, &s);
        let nu = group_conv(&mu, &mu).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(p), &nu, |b, nu| b.iter(|| group_conv(black_box(nu), nu).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, transforms, convolutions, energies, collinear, continued_fractions, group_convolution);
criterion_main!(benches);
