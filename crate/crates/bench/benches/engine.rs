use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use padic_hl::exactnum::{rat, RationalFunction};
use padic_hl::heckecoeff::{defining_product, lr_table};
use padic_hl::hlpoly::{expand_in_hl, hl_p_sym, p_poly};
use padic_hl::lawbook::{exact_distribution, LawCase, LawSpec};
use padic_hl::padicring::RingCfg;
use padic_hl::randmat::{haar_alt, haar_her, sn_elim, sn_minors};
use padic_hl::veristat::run_experiment;
use padic_hl_bench::{lr_inputs, sampled_laws, sig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hall_littlewood(c: &mut Criterion) {
    let t = RationalFunction::t();
    let mut g = c.benchmark_group("hl_polynomial");
    for lam in [sig(&[2, 1, 0]), sig(&[3, 2, 1]), sig(&[2, 1, 1, 0])] {
        g.bench_with_input(BenchmarkId::new("branching", &lam), &lam, |b, l| b.iter(|| p_poly(black_box(l), &t).unwrap()));
        g.bench_with_input(BenchmarkId::new("symmetrization", &lam), &lam, |b, l| {
            b.iter(|| hl_p_sym(black_box(l), l.len(), &t).unwrap())
        });
    }
    g.finish();
}

fn coefficients(c: &mut Criterion) {
    let mut g = c.benchmark_group("lr_table");
    g.sample_size(20);
    for (name, case, mu, nu) in lr_inputs() {
        // lr_table memoizes, so time the uncached route it takes.
        let param = lr_table(case, &mu, &nu).unwrap().param();
        g.bench_function(name, |b| {
            b.iter(|| expand_in_hl(&defining_product(case, black_box(&mu), black_box(&nu)).unwrap(), &param).unwrap())
        });
    }
    g.finish();
}

fn exact_tables(c: &mut Criterion) {
    let t = rat(1, 3);
    let mut g = c.benchmark_group("exact_distribution");
    for (name, spec) in sampled_laws() {
        g.bench_function(name, |b| b.iter(|| exact_distribution(black_box(&spec), &t, 4).unwrap()));
    }
    g.finish();
}

fn singular_numbers(c: &mut Criterion) {
    let cfg = RingCfg::new(3, 8).unwrap();
    let mut g = c.benchmark_group("singular_numbers");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let her: Vec<_> = (0..64).map(|_| haar_her(&cfg, 3, &mut rng)).collect();
    let alt: Vec<_> = (0..64).map(|_| haar_alt(&cfg, 4, &mut rng)).collect();
    g.bench_function("elim_her3", |b| b.iter(|| her.iter().map(|m| sn_elim(m).unwrap()).count()));
    g.bench_function("minors_her3", |b| b.iter(|| her.iter().map(|m| sn_minors(m).unwrap()).count()));
    g.bench_function("elim_alt4", |b| b.iter(|| alt.iter().map(|m| sn_elim(m).unwrap()).count()));
    g.bench_function("minors_alt4", |b| b.iter(|| alt.iter().map(|m| sn_minors(m).unwrap()).count()));
    g.finish();
}

fn experiments(c: &mut Criterion) {
    let cfg = RingCfg::new(3, 8).unwrap();
    let mut g = c.benchmark_group("run_experiment_10k");
    g.sample_size(10);
    for (name, spec) in sampled_laws() {
        g.bench_function(name, |b| b.iter(|| run_experiment(&spec, &cfg, 10_000, 7, 1, 4).unwrap()));
    }
    let spec = LawSpec::Haar { case: LawCase::Her, n: 2 };
    for w in [1usize, 4] {
        g.bench_with_input(BenchmarkId::new("haar_her_2_workers", w), &w, |b, &w| {
            b.iter(|| run_experiment(&spec, &cfg, 10_000, 7, w, 4).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, hall_littlewood, coefficients, exact_tables, singular_numbers, experiments);
criterion_main!(benches);
