use criterion::{black_box, criterion_group, criterion_main, Criterion};

use qcf_core::eigen::eigh;
use qcf_core::spin_star::{
    bath_spectrum_combinatorial, spin_star_kraus, FFunctions, LayerConfig,
};
use qcf_core::OperatorMatrix;

fn random_hermitian(dim: usize, seed: u64) -> OperatorMatrix {
    // xorshift is plenty for benchmark fixtures
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state as f64 / u64::MAX as f64) - 0.5
    };
    let mut m = OperatorMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m.set(i, j, num_complex::Complex64::new(next(), next()));
        }
    }
    (&m + &m.dagger()).scale_re(0.5)
}

fn bench_eigh(c: &mut Criterion) {
    for dim in [4, 16, 64] {
        let m = random_hermitian(dim, 42);
        c.bench_function(&format!("eigh_dim_{dim}"), |b| {
            b.iter(|| eigh(black_box(&m), 1e-8).unwrap())
        });
    }
}

fn bench_f_eval(c: &mut Criterion) {
    let cfg = LayerConfig::new(&[(4, 0.3), (3, 0.6), (2, 1.0)]);
    let f = FFunctions::new(&bath_spectrum_combinatorial(&cfg));
    c.bench_function("f_functions_eval_200_points", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 0..200 {
                let v = f.eval(black_box(3.0 * i as f64 / 199.0));
                acc += v.f12 + v.f3;
            }
            acc
        })
    });
}

fn bench_kraus(c: &mut Criterion) {
    let cfg = LayerConfig::new(&[(3, 0.5), (2, 1.0)]);
    let f = FFunctions::new(&bath_spectrum_combinatorial(&cfg));
    c.bench_function("spin_star_kraus_extraction", |b| {
        b.iter(|| spin_star_kraus(black_box(&f), 0.7, 1e-12).unwrap())
    });
}

criterion_group!(benches, bench_eigh, bench_f_eval, bench_kraus);
criterion_main!(benches);
