use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use odecirc_core::circuit::random::{random_circuit, RandomSpec};
use odecirc_core::circuit::{simulate, Prepared, Variant};
use odecirc_core::compiler::{compile, plan_unsigned};
use odecirc_core::eval::{eval_term, step_oracle};
use odecirc_core::nonuniform::{all_inputs, roundtrip_check};
use odecirc_core::{stdlib, Oracles, Value};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn eval(c: &mut Criterion) {
    let o = Oracles::standard();
    let mut group = c.benchmark_group("eval");
    for name in ["smash", "BIT", "bcount", "min_ge"] {
        let nt = stdlib::lookup(name).unwrap();
        let args: Vec<Value> = (0..nt.arity()).map(|i| Value::from(1000 + 37 * i as u64)).collect();
        group.bench_function(name, |b| b.iter(|| eval_term(nt.raw(), black_box(&args), &o).unwrap()));
    }
    let nt = stdlib::lookup("shift").unwrap();
    for x in [64u64, 1024, 4096] {
        group.bench_with_input(BenchmarkId::new("step_oracle/shift", x), &x, |b, x| {
            b.iter(|| step_oracle(&nt.term, &Value::from(*x), &[Value::from(3u64)], &o, 1 << 13).unwrap())
        });
    }
    group.finish();
}

fn compile_and_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("compile");
    group.sample_size(10);
    for (name, w) in [("BIT", 8u32), ("BIT", 16), ("min_ge", 8), ("bcount", 8)] {
        let nt = stdlib::lookup(name).unwrap();
        let plan = plan_unsigned(&nt.term, &vec![w; nt.arity()]).unwrap();
        group.bench_function(format!("{name}/W={w}"), |b| b.iter(|| compile(&nt.term, &plan).unwrap()));
    }
    group.finish();

    let nt = stdlib::lookup("BIT").unwrap();
    let plan = plan_unsigned(&nt.term, &[8, 8]).unwrap();
    let compiled = compile(&nt.term, &plan).unwrap();
    let cases: Vec<Vec<Value>> = (0..256u64).map(|i| vec![Value::from(i), Value::from(i % 9)]).collect();
    c.bench_function("run_many/BIT W=8 x256", |b| b.iter(|| compiled.run_many(black_box(&cases)).unwrap()));
}

fn circuits(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut spec = RandomSpec::new(Variant::Ac, 10, 6, 100);
    spec.connected = true;
    let circuit = random_circuit(&mut rng, &spec);
    let inputs = all_inputs(10);
    c.bench_function("simulate/AC n=10 all inputs", |b| {
        b.iter(|| {
            for x in &inputs {
                black_box(simulate(&circuit, x).unwrap());
            }
        })
    });
    let prepared = Prepared::new(&circuit).unwrap();
    let words: Vec<u64> = (0..10).map(|i| 0x9e37_79b9_7f4a_7c15u64.rotate_left(7 * i)).collect();
    c.bench_function("prepared/AC n=10 64 lanes", |b| b.iter(|| prepared.run_words(black_box(&words))));

    let mut group = c.benchmark_group("roundtrip");
    group.sample_size(10);
    for (variant, d) in [(Variant::Ac, 4), (Variant::Tc, 3)] {
        let mut spec = RandomSpec::new(variant, 5, d, 125);
        spec.connected = true;
        let circuit = random_circuit(&mut rng, &spec);
        let inputs = all_inputs(5);
        group.bench_function(variant.as_str(), |b| b.iter(|| roundtrip_check(&circuit, &inputs).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, eval, compile_and_run, circuits);
criterion_main!(benches);
