use criterion::{criterion_group, criterion_main, Criterion};

use willmore_dpw::dpw::{build_surface, BuildOptions, ZLattice};
use willmore_dpw::exec::Execution;
use willmore_dpw::potentials::{builtin_potential, Builtin};
use willmore_dpw::C64;

fn build_modes(c: &mut Criterion) {
    let p = builtin_potential(&Builtin::S6).expect("builtin");
    let z = ZLattice::new(C64::new(0.0, 0.0), 1.5, 9, 9).expect("lattice").samples();
    let lambdas = [C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
    let mut group = c.benchmark_group("build_surface_s6_9x9");
    group.sample_size(10);
    for (name, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let opts = BuildOptions {
            execution,
            ..BuildOptions::default()
        };
        group.bench_function(name, |b| b.iter(|| build_surface(&p, &z, &lambdas, &opts).expect("build")));
    }
    group.finish();
}

criterion_group!(benches, build_modes);
criterion_main!(benches);
