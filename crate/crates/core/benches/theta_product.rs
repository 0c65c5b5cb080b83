use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use modpar_core::curve::{torsion_bound, WeierstrassCurve};
use modpar_core::ff_base::{P1Point, Poly, PrimeField};
use modpar_core::matrix::Mat2;
use modpar_core::par::Exec;
use modpar_core::theta::{default_base_point, Theta, ThetaOptions};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn theta_products(c: &mut Criterion) {
    let mut group = c.benchmark_group("theta_product");
    group.sample_size(10);
    let cases = [
        (2, "T^3", "[[T^2+T+1, 1], [T^3, T+1]]", "0", 5),
        (3, "T^3-T^2", "[[T^2+T+2, 2], [T^3+2*T^2, 2*T+2]]", "1/T^2", 2),
    ];
    for (p, n, alpha, s, eps) in cases {
        let f = PrimeField::new(p).unwrap();
        let n = Poly::parse(f, n).unwrap();
        let th = Theta::new(&n, &Mat2::parse(f, alpha).unwrap(), &default_base_point(f)).unwrap();
        let s = P1Point::parse(f, s).unwrap();
        for (name, exec) in MODES {
            let opts = ThetaOptions { eps_exp: eps, exec, ..Default::default() };
            group.bench_with_input(BenchmarkId::new(name, format!("q={p} s={s}")), &opts, |b, o| {
                b.iter(|| th.evaluate(&s, o).unwrap())
            });
        }
    }
    group.finish();
}

fn point_counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("torsion_bound");
    group.sample_size(10);
    let cases = [(2, "a1=T;a6=T^2", "T^3", 12), (3, "a2=T^2+T;a4=T^2", "T^3-T^2", 8)];
    for (p, curve, n, depth) in cases {
        let f = PrimeField::new(p).unwrap();
        let e = WeierstrassCurve::parse(f, curve).unwrap();
        let n = Poly::parse(f, n).unwrap();
        for (name, exec) in MODES {
            group.bench_function(BenchmarkId::new(name, format!("q={p} depth={depth}")), |b| {
                b.iter(|| torsion_bound(&e, &n, depth, exec, None).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, theta_products, point_counts);
criterion_main!(benches);
