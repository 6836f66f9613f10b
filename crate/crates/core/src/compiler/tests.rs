use super::*;
use crate::algebra::{build::*, validate, Dir, ModePreset, PresetName, Term};
use crate::circuit::validate_normal_form;
use crate::eval::{eval_term, Oracles};
use crate::stdlib;
use rand::{Rng, SeedableRng};

fn checked(t: Term, p: PresetName) -> CheckedTerm {
    validate(&t, ModePreset::new(p)).unwrap_or_else(|e| panic!("{t}: {e:?}"))
}

fn agree(t: &CheckedTerm, specs: &[InputSpec], samples: usize, seed: u64) {
    let plan = infer_widths(t, specs).unwrap();
    let c = compile(t, &plan).unwrap();
    validate_normal_form(&c.circuit).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let args: Vec<Value> = specs
            .iter()
            .map(|s| {
                let m = rng.gen_range(0..=(1u64 << s.width) - 1) as i64;
                Value::small(if s.signed && rng.gen_bool(0.5) { -m } else { m })
            })
            .collect();
        let want = match eval_term(t.term(), &args, &Oracles::standard()) {
            Err(crate::EvalError::SchemaViolation(_)) => continue,
            r => r.unwrap(),
        };
        assert!(plan.output().contains(&want), "{}: {want} outside {:?}", t.term(), plan.output());
        assert_eq!(c.run(&args).unwrap(), want, "{} at {args:?}", t.term());
    }
}

#[test]
fn primitives_match_eval() {
    let x = p(1, 2);
    let y = p(2, 2);
    for t in [add(&x, &y), sub(&x, &y), len(&x), sg(&sub(&x, &y)), div2(&sub(&x, &y)), c1(2)] {
        let ct = checked(t, PresetName::Acdl);
        agree(&ct, &[InputSpec::signed(5), InputSpec::signed(5)], 200, 1);
        agree(&ct, &[InputSpec::unsigned(3), InputSpec::unsigned(6)], 100, 2);
    }
    let ct = checked(times(&x, &y), PresetName::Tcdl);
    agree(&ct, &[InputSpec::signed(5), InputSpec::signed(6)], 200, 3);
}

#[test]
fn schemas_match_eval() {
    let g1 = add(&p(1, 1), &c1(1));
    let neg = sub(&c0(1), &p(1, 1));
    let h = sg(&sub(&p(1, 2), &p(2, 2)));
    let k = p(1, 1);
    let cases = [
        (ode1(&g1, &h), PresetName::Acdl),
        (ode1(&neg, &h), PresetName::Acdl),
        (ode2(&neg, &h, &k), PresetName::Acdl),
        (ode2_star(&g1, &h, &k), PresetName::TcdlStar),
        (ode3(&neg), PresetName::Acdl),
        (ode3(&g1), PresetName::Acdl),
        (ode4(&neg, &k, Dir::Left), PresetName::AcdlOde4),
        (ode4(&neg, &k, Dir::Right), PresetName::AcdlOde4),
        (ode1_star(&neg, &h, &sg(&p(2, 2))), PresetName::TcdlSmash),
    ];
    for (i, (t, mode)) in cases.into_iter().enumerate() {
        let ct = checked(t, mode);
        agree(&ct, &[InputSpec::unsigned(6), InputSpec::signed(4)], 150, i as u64);
    }
}

#[test]
fn shortcut_signs_match_eval() {
    let (x, y) = (p(1, 2), p(2, 2));
    let h = sg(&sub(&p(1, 2), &p(2, 2)));
    let cases = [
        sg(&sub(&x, &succ(&y))),
        sg(&sub(&len(&x), &y)),
        sg(&sub(&sub(&c0(2), &x), &y)),
        sg(&ode1(&p(1, 1), &h)),
        sg(&ode1(&sub(&c0(1), &p(1, 1)), &h)),
        cosg(&ode1(&c0(1), &sg(&p(2, 2)))),
    ];
    for (i, t) in cases.into_iter().enumerate() {
        let ct = checked(t, PresetName::Acdl);
        agree(&ct, &[InputSpec::unsigned(6), InputSpec::signed(4)], 200, 20 + i as u64);
        agree(&ct, &[InputSpec::signed(3), InputSpec::signed(3)], 100, 40 + i as u64);
    }
}

#[test]
fn registry_matches_eval_at_small_widths() {
    for nt in stdlib::registry() {
        let specs = vec![InputSpec::unsigned(4); nt.arity()];
        agree(&nt.term, &specs, 60, 7);
    }
}

#[test]
fn depth_is_width_independent() {
    for name in ["smash", "BIT", "exists_eq", "bcount"] {
        let nt = stdlib::lookup(name).unwrap();
        let prof = depth_profile(&nt.term, &[3, 6]).unwrap();
        assert_eq!(prof[0].depth, prof[1].depth, "{name}");
        assert!(prof[0].size < prof[1].size, "{name}");
    }
}

#[test]
fn errors() {
    let mode = ModePreset::new(PresetName::Acdl).with_oracles([crate::algebra::OracleDecl::new("f", 1, false)]);
    let orc = validate(&Term::oracle("f", 1), mode).unwrap();
    let plan = plan_unsigned(&orc, &[4]);
    assert!(matches!(plan, Err(CompileError::UnboundOracle(_))));

    let bc = stdlib::lookup("bcount").unwrap();
    let plan = plan_unsigned(&bc.term, &[4]).unwrap();
    assert!(matches!(compile_as(&bc.term, &plan, Variant::Ac), Err(CompileError::TcOnly(_))));

    let sm = stdlib::lookup("smash").unwrap();
    let narrow = plan_unsigned(&sm.term, &[4, 4]).unwrap().capped(3);
    assert!(matches!(compile(&sm.term, &narrow), Err(CompileError::PlanTooNarrow { .. })));
    assert!(matches!(plan_unsigned(&sm.term, &[4]), Err(CompileError::Arity { .. })));

    let c = compile(&sm.term, &plan_unsigned(&sm.term, &[2, 2]).unwrap()).unwrap();
    assert!(matches!(
        c.encode_inputs(&[Value::small(4), Value::ZERO]),
        Err(CompileError::InputRange { index: 0, .. })
    ));
}

#[test]
fn batched_runs_match_single_runs() {
    let nt = stdlib::lookup("smash").unwrap();
    let c = compile(&nt.term, &plan_unsigned(&nt.term, &[4, 4]).unwrap()).unwrap();
    let args: Vec<Vec<Value>> = (0..100).map(|i| vec![Value::small(i % 16), Value::small(i / 7)]).collect();
    let many = c.run_many(&args).unwrap();
    for (a, v) in args.iter().zip(&many) {
        assert_eq!(c.run(a).unwrap(), *v);
    }
}
