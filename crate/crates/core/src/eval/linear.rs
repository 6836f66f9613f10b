use super::{eval_term, EvalError, Oracles};
use crate::algebra::{degree, PolyExpr, Term};
use crate::value::Value;

/// A linear length-ODE ∂f/∂ℓ = A·f + B with f(0, ȳ) = g(ȳ).
///
/// `A` and `B` range over the variables `f`, `x`, `y1`…`yp` and the names in
/// `terms`, each bound to a term evaluated at (x, ȳ).
#[derive(Clone, Debug)]
pub struct LinearOde {
    pub a: PolyExpr,
    pub b: PolyExpr,
    pub g: Term,
    pub terms: Vec<(String, Term)>,
}

impl LinearOde {
    pub fn new(a: PolyExpr, b: PolyExpr, g: Term) -> LinearOde {
        LinearOde {
            a,
            b,
            g,
            terms: Vec::new(),
        }
    }

    pub fn with_term(mut self, name: &str, t: Term) -> LinearOde {
        self.terms.push((name.to_string(), t));
        self
    }
}

struct Point<'a> {
    ode: &'a LinearOde,
    x: Value,
    f: Value,
    ys: &'a [Value],
    oracles: &'a Oracles,
}

impl Point<'_> {
    fn lookup(&self, name: &str) -> Result<Value, EvalError> {
        match name {
            "f" => return Ok(self.f.clone()),
            "x" => return Ok(self.x.clone()),
            _ => {}
        }
        if let Some(i) = name.strip_prefix('y').and_then(|i| i.parse::<usize>().ok()) {
            if i >= 1 && i <= self.ys.len() {
                return Ok(self.ys[i - 1].clone());
            }
        }
        let (_, t) = self
            .ode
            .terms
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| EvalError::MissingOracle(name.to_string()))?;
        let mut args = vec![self.x.clone()];
        args.extend_from_slice(self.ys);
        eval_term(t, &args, self.oracles)
    }

    fn eval(&self, p: &PolyExpr) -> Result<Value, EvalError> {
        p.eval(&mut |n| self.lookup(n))
    }
}

/// Evaluates Σ_{u=−1}^{ℓ(x)−1} ∏_{t=u+1}^{ℓ(x)−1} (1 + A(α(t))) · B(α(u)) with B(α(−1)) := g(ȳ).
///
/// A and B may mention `f` only under sg; the value of f they see at α(t)
/// is the same sum truncated at ℓ = t.
pub fn solve_linear_length_ode(
    ode: &LinearOde,
    x: &Value,
    ys: &[Value],
    oracles: &Oracles,
) -> Result<Value, EvalError> {
    if degree(&ode.a, &["f"]) != 0 {
        return Err(EvalError::NotEssentiallyConstant("A"));
    }
    if degree(&ode.b, &["f"]) != 0 {
        return Err(EvalError::NotEssentiallyConstant("B"));
    }
    let l = x.len() as usize;
    let g = eval_term(&ode.g, ys, oracles)?;
    // coefficients at α(0), …, α(l − 1); f(α(t)) is the sum truncated at t
    let mut a = Vec::with_capacity(l);
    let mut b = Vec::with_capacity(l);
    for t in 0..l {
        let f = truncated(&g, &a, &b, t);
        let p = Point {
            ode,
            x: Value::alpha(t as u64),
            f,
            ys,
            oracles,
        };
        a.push(p.eval(&ode.a)?);
        b.push(p.eval(&ode.b)?);
    }
    Ok(truncated(&g, &a, &b, l))
}

fn truncated(g: &Value, a: &[Value], b: &[Value], top: usize) -> Value {
    let mut total = Value::ZERO;
    for u in -1..top as i64 {
        let mut prod = if u < 0 { g.clone() } else { b[u as usize].clone() };
        for t in (u + 1) as usize..top {
            prod = &prod * &(Value::ONE + &a[t]);
        }
        total = total + prod;
    }
    total
}
