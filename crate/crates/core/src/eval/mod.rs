//! Closed-form evaluation of checked terms, plus two independent oracles:
//! literal step iteration and the general linear length-ODE formula.

mod linear;
mod machine;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{CheckedTerm, Term, SMASH_ORACLE};
use crate::value::Value;

pub use linear::{solve_linear_length_ode, LinearOde};
use machine::{Machine, Strategy};

/// Default bound on the derivation variable accepted by [`step_oracle`].
pub const DEFAULT_STEP_BOUND: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A step function or factor left {0, 1} at a queried jump point.
    BooleanRange {
        role: &'static str,
        u: u64,
        value: Value,
    },
    /// A non-star `Ode2` with k = 0 whose step function reached 1.
    KZeroWithHOne { u: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BooleanRange { role, u, value } => {
                write!(f, "BooleanRange: {role} is {value} at jump point alpha({u})")
            }
            Violation::KZeroWithHOne { u } => {
                write!(f, "KZeroWithHOne: k = 0 while h(alpha({u})) = 1")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("schema violation: {0}")]
    SchemaViolation(Violation),
    #[error("no binding for oracle `{0}`")]
    MissingOracle(String),
    #[error("x = {x} exceeds the step bound {bound}")]
    BoundExceeded { x: Value, bound: u64 },
    #[error("expected {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("{0} is not essentially constant in f")]
    NotEssentiallyConstant(&'static str),
    #[error("step oracle needs a nonnegative derivation variable, got {0}")]
    NegativeStep(Value),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

impl EvalError {
    pub fn is_schema_violation(&self) -> bool {
        matches!(self, EvalError::SchemaViolation(_))
    }
}

pub type OracleFn = Arc<dyn Fn(&[Value]) -> Value + Send + Sync>;

/// Host-provided bindings for oracle basic functions.
#[derive(Clone, Default)]
pub struct Oracles {
    map: HashMap<String, OracleFn>,
}

impl Oracles {
    pub fn new() -> Oracles {
        Oracles::default()
    }

    /// Bindings for the oracle basics that the presets themselves declare.
    pub fn standard() -> Oracles {
        let mut o = Oracles::new();
        o.bind(SMASH_ORACLE, |a: &[Value]| Value::pow2(a[0].len() * a[1].len()));
        o
    }

    pub fn bind(&mut self, name: &str, f: impl Fn(&[Value]) -> Value + Send + Sync + 'static) {
        self.map.insert(name.to_string(), Arc::new(f));
    }

    pub fn bind_arc(&mut self, name: &str, f: OracleFn) {
        self.map.insert(name.to_string(), f);
    }

    pub fn get(&self, name: &str) -> Option<&OracleFn> {
        self.map.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }
}

impl fmt::Debug for Oracles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<_> = self.names().collect();
        names.sort();
        f.debug_struct("Oracles").field("bound", &names).finish()
    }
}

/// Arguments for one evaluation plus oracle bindings.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub args: Vec<Value>,
    pub oracles: Oracles,
}

impl Env {
    pub fn new(args: impl IntoIterator<Item = Value>) -> Env {
        Env {
            args: args.into_iter().collect(),
            oracles: Oracles::standard(),
        }
    }

    pub fn with_oracles(mut self, oracles: Oracles) -> Env {
        self.oracles = oracles;
        self
    }
}

fn check_arity(t: &Term, n: usize) -> Result<(), EvalError> {
    if t.arity() == n {
        Ok(())
    } else {
        Err(EvalError::ArityMismatch {
            expected: t.arity(),
            found: n,
        })
    }
}

/// Evaluates `t` on `env` using the closed-form solution of every schema node.
pub fn eval(t: &CheckedTerm, env: &Env) -> Result<Value, EvalError> {
    eval_term(t.term(), &env.args, &env.oracles)
}

/// [`eval`] on a raw term; the caller vouches for its validity.
pub fn eval_term(t: &Term, args: &[Value], oracles: &Oracles) -> Result<Value, EvalError> {
    check_arity(t, args.len())?;
    Machine::new(oracles, Strategy::Closed).eval(t, args)
}

/// Convenience wrapper over [`eval`] with standard oracles and small arguments.
pub fn eval_i64(t: &CheckedTerm, args: &[i64]) -> Result<Value, EvalError> {
    let args: Vec<Value> = args.iter().map(|a| Value::small(*a)).collect();
    eval_term(t.term(), &args, &Oracles::standard())
}

/// Iterates the defining difference equation of `t` from x = 0 up to `x`,
/// applying the right-hand side only where ℓ increases.
pub fn step_oracle(
    t: &CheckedTerm,
    x: &Value,
    ys: &[Value],
    oracles: &Oracles,
    bound: u64,
) -> Result<Value, EvalError> {
    step_oracle_term(t.term(), x, ys, oracles, bound)
}

pub fn step_oracle_term(
    t: &Term,
    x: &Value,
    ys: &[Value],
    oracles: &Oracles,
    bound: u64,
) -> Result<Value, EvalError> {
    check_arity(t, ys.len() + 1)?;
    if x.is_negative() {
        return Err(EvalError::NegativeStep(x.clone()));
    }
    let n = x
        .to_u64()
        .filter(|n| *n <= bound)
        .ok_or_else(|| EvalError::BoundExceeded {
            x: x.clone(),
            bound,
        })?;
    let mut m = Machine::new(oracles, Strategy::Step);
    if t.is_schema() {
        let mut last = Value::ZERO;
        m.unit_steps(t, n, ys, &mut |_, v| last = v.clone())?;
        Ok(last)
    } else {
        let mut args = vec![x.clone()];
        args.extend_from_slice(ys);
        m.eval(t, &args)
    }
}

/// Values f(0), f(1), …, f(upto) of a schema-rooted term from one literal sweep.
pub fn step_trace(
    t: &Term,
    ys: &[Value],
    upto: u64,
    oracles: &Oracles,
) -> Result<Vec<Value>, EvalError> {
    check_arity(t, ys.len() + 1)?;
    let mut m = Machine::new(oracles, Strategy::Step);
    let mut out = Vec::with_capacity(upto as usize + 1);
    if t.is_schema() {
        m.unit_steps(t, upto, ys, &mut |_, v| out.push(v.clone()))?;
    } else {
        for x in 0..=upto {
            let mut args = vec![Value::from(x)];
            args.extend_from_slice(ys);
            out.push(m.eval(t, &args)?);
        }
    }
    Ok(out)
}

fn solve_with(t: Term, x: &Value, ys: &[Value], oracles: &Oracles) -> Result<Value, EvalError> {
    let mut args = vec![x.clone()];
    args.extend_from_slice(ys);
    eval_term(&t, &args, oracles)
}

/// Σ_{u=−1}^{ℓ(x)−1} 2^{ℓ(x)−u−1}·h(α(u), ȳ), with h(α(−1), ȳ) := g(ȳ).
pub fn solve_ode1(g: &Term, h: &Term, x: &Value, ys: &[Value], oracles: &Oracles) -> Result<Value, EvalError> {
    solve_with(Term::ode1(g, h)?, x, ys, oracles)
}

/// Σ 2^{ℓ(k(ȳ))·(ℓ(x)−u−1)}·h(α(u), ȳ); `star` lifts the k ≠ 0 side condition.
pub fn solve_ode2(
    g: &Term,
    h: &Term,
    k: &Term,
    x: &Value,
    ys: &[Value],
    star: bool,
    oracles: &Oracles,
) -> Result<Value, EvalError> {
    let t = if star {
        Term::ode2_star(g, h, k)
    } else {
        Term::ode2(g, h, k)
    };
    solve_with(t?, x, ys, oracles)
}

/// ⌊g(ȳ) / 2^{ℓ(x)}⌋.
pub fn solve_ode3(g: &Term, x: &Value, ys: &[Value], oracles: &Oracles) -> Result<Value, EvalError> {
    solve_with(Term::ode3(g), x, ys, oracles)
}

/// g(ȳ)·2^{±ℓ(k(ȳ))·ℓ(x)}, flooring on right shifts.
pub fn solve_ode4(
    g: &Term,
    k: &Term,
    dir: crate::algebra::Dir,
    x: &Value,
    ys: &[Value],
    oracles: &Oracles,
) -> Result<Value, EvalError> {
    solve_with(Term::ode4(g, k, dir)?, x, ys, oracles)
}

/// Σ ∏_{t=u+1}^{ℓ(x)−1}(1 + k(α(t), ȳ))·h(α(u), ȳ).
pub fn solve_ode1_star(
    g: &Term,
    h: &Term,
    k: &Term,
    x: &Value,
    ys: &[Value],
    oracles: &Oracles,
) -> Result<Value, EvalError> {
    solve_with(Term::ode1_star(g, h, k)?, x, ys, oracles)
}
