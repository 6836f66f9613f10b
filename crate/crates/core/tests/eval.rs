use odecirc_core::algebra::build::*;
use odecirc_core::algebra::{Dir, PolyExpr};
use odecirc_core::eval::{
    eval_term, solve_linear_length_ode, solve_ode1, solve_ode3, step_oracle_term, step_trace, LinearOde,
};
use odecirc_core::stdlib::terms;
use odecirc_core::{EvalError, Oracles, Value};
use proptest::prelude::*;

fn v(x: u64) -> Value {
    Value::from(x)
}

fn len(x: u64) -> u32 {
    64 - x.leading_zeros()
}

fn at(t: &odecirc_core::Term, args: &[u64]) -> Result<Value, EvalError> {
    let args: Vec<Value> = args.iter().map(|a| v(*a)).collect();
    eval_term(t, &args, &Oracles::standard())
}

/// Schema-rooted terms with boolean jumps, one per schema kind.
fn schemas() -> Vec<(&'static str, odecirc_core::Term)> {
    let h = sg(&sub(&p(1, 2), &p(2, 2)));
    let y = p(1, 1);
    vec![
        ("ode1", ode1(&y, &h)),
        ("ode2", ode2(&y, &h, &succ(&y))),
        ("ode2*", ode2_star(&y, &h, &y)),
        ("ode3", ode3(&y)),
        ("ode4+", ode4(&y, &y, Dir::Left)),
        ("ode4-", ode4(&y, &y, Dir::Right)),
        ("ode1*", ode1_star(&y, &h, &sg(&p(2, 2)))),
    ]
}

#[test]
fn closed_forms_of_the_basic_schemas() {
    // frozen from the direct definitions
    assert_eq!(at(&terms::shift(), &[5, 3]).unwrap(), v(24));
    assert_eq!(at(&terms::pow2len(), &[5]).unwrap(), v(8));
    assert_eq!(at(&terms::smash(), &[3, 5]).unwrap(), v(64));
    assert_eq!(at(&terms::msp(), &[2, 13]).unwrap(), v(3));
    assert_eq!(at(&terms::bcount(), &[0b1011_0110]).unwrap(), v(5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_smash_msp_match_arithmetic(x in 0u64..4096, y in 0u64..4096) {
        prop_assert_eq!(at(&terms::shift(), &[x, y]).unwrap(), v(y << len(x)));
        prop_assert_eq!(at(&terms::msp(), &[x, y]).unwrap(), v(y >> len(x)));
        let e = len(x) * len(y);
        if e < 64 {
            prop_assert_eq!(at(&terms::smash(), &[x, y]).unwrap(), v(1 << e));
        }
    }

    #[test]
    fn closed_form_matches_unit_steps(x in 0u64..1500, y in 0u64..64) {
        let o = Oracles::standard();
        for (name, t) in schemas() {
            let closed = eval_term(&t, &[v(x), v(y)], &o);
            let stepped = step_oracle_term(&t, &v(x), &[v(y)], &o, 1 << 12);
            match (&closed, &stepped) {
                (Err(a), Err(b)) => prop_assert!(a.is_schema_violation() && b.is_schema_violation(), "{name}: {a} / {b}"),
                _ => prop_assert_eq!(closed, stepped, "{} at x = {}, y = {}", name, x, y),
            }
        }
    }

    #[test]
    fn trace_agrees_with_pointwise_eval(y in 0u64..32) {
        let o = Oracles::standard();
        let t = ode1(&p(1, 1), &sg(&sub(&p(1, 2), &p(2, 2))));
        let trace = step_trace(&t, &[v(y)], 300, &o).unwrap();
        for (x, got) in trace.iter().enumerate() {
            prop_assert_eq!(got, &eval_term(&t, &[v(x as u64), v(y)], &o).unwrap());
        }
    }

    #[test]
    fn linear_solver_reproduces_ode1(x in 0u64..4096, y in 0u64..16) {
        let o = Oracles::standard();
        let (g, h) = (p(1, 1), sg(&sub(&p(1, 2), &p(2, 2))));
        let lin = LinearOde::new(PolyExpr::int(1u64), PolyExpr::var("h"), g.clone()).with_term("h", h.clone());
        let want = solve_ode1(&g, &h, &v(x), &[v(y)], &o).unwrap();
        prop_assert_eq!(solve_linear_length_ode(&lin, &v(x), &[v(y)], &o).unwrap(), want);
    }

    #[test]
    fn linear_solver_reproduces_ode1_star(x in 0u64..4096, y in 0u64..16) {
        let o = Oracles::standard();
        let (g, h, k) = (p(1, 1), sg(&sub(&p(1, 2), &p(2, 2))), sg(&p(2, 2)));
        let lin = LinearOde::new(PolyExpr::var("k"), PolyExpr::var("h"), g.clone())
            .with_term("h", h.clone())
            .with_term("k", k.clone());
        let want = eval_term(&ode1_star(&g, &h, &k), &[v(x), v(y)], &o).unwrap();
        prop_assert_eq!(solve_linear_length_ode(&lin, &v(x), &[v(y)], &o).unwrap(), want);
    }
}

#[test]
fn linear_solver_rejects_f_outside_sg() {
    let lin = LinearOde::new(PolyExpr::var("f"), PolyExpr::int(0u64), p(1, 1));
    let err = solve_linear_length_ode(&lin, &v(5), &[v(1)], &Oracles::standard()).unwrap_err();
    assert_eq!(err, EvalError::NotEssentiallyConstant("A"));
    let lin = LinearOde::new(PolyExpr::var("f").sg(), PolyExpr::int(0u64), p(1, 1));
    assert!(solve_linear_length_ode(&lin, &v(5), &[v(1)], &Oracles::standard()).is_ok());
}

#[test]
fn step_oracle_errors() {
    let o = Oracles::standard();
    let t = ode3(&p(1, 1));
    assert!(matches!(
        step_oracle_term(&t, &v(5000), &[v(1)], &o, 4096),
        Err(EvalError::BoundExceeded { bound: 4096, .. })
    ));
    assert!(matches!(
        step_oracle_term(&t, &Value::small(-3), &[v(1)], &o, 4096),
        Err(EvalError::NegativeStep(_))
    ));
    assert!(matches!(
        step_oracle_term(&t, &v(3), &[], &o, 4096),
        Err(EvalError::ArityMismatch { expected: 2, found: 1 })
    ));
    assert_eq!(solve_ode3(&p(1, 1), &v(7), &[v(100)], &o).unwrap(), v(12));
}

#[test]
fn zero_k_is_a_violation_only_once_a_jump_fires() {
    let core = terms::bcount_core(false);
    let o = Oracles::standard();
    assert_eq!(eval_term(&core, &[v(1), v(1)], &o).unwrap(), v(1));
    assert!(eval_term(&core, &[v(6), v(6)], &o).unwrap_err().is_schema_violation());
}
