use rustc_hash::FxHashMap;

use super::{EvalError, Oracles, Violation};
use crate::algebra::{Dir, Node, Term};
use crate::value::Value;

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Strategy {
    /// Closed-form sums over the jump points.
    Closed,
    /// The defining recurrence, applied one jump at a time.
    Step,
}

pub(crate) struct Machine<'o> {
    oracles: &'o Oracles,
    strategy: Strategy,
    memo: FxHashMap<(usize, Vec<Value>), Value>,
}

fn boolean(role: &'static str, u: u64, v: Value) -> Result<bool, EvalError> {
    v.as_bool().ok_or(EvalError::SchemaViolation(Violation::BooleanRange {
        role,
        u,
        value: v,
    }))
}

impl<'o> Machine<'o> {
    pub(crate) fn new(oracles: &'o Oracles, strategy: Strategy) -> Machine<'o> {
        Machine {
            oracles,
            strategy,
            memo: FxHashMap::default(),
        }
    }

    pub(crate) fn eval(&mut self, t: &Term, args: &[Value]) -> Result<Value, EvalError> {
        match t.node() {
            Node::Const0 { .. } => Ok(Value::ZERO),
            Node::Const1 { .. } => Ok(Value::ONE),
            Node::Length => Ok(Value::from(args[0].len())),
            Node::Sign => Ok(args[0].sg()),
            Node::Add => Ok(&args[0] + &args[1]),
            Node::Sub => Ok(&args[0] - &args[1]),
            Node::Div2 => Ok(args[0].div2()),
            Node::Times => Ok(&args[0] * &args[1]),
            Node::Proj { i, .. } => Ok(args[i - 1].clone()),
            Node::Compose { f, args: gs } => {
                let mut vals = Vec::with_capacity(gs.len());
                for g in gs {
                    vals.push(self.eval(g, args)?);
                }
                self.eval(f, &vals)
            }
            Node::Oracle { name, .. } => {
                let key = (t.id(), args.to_vec());
                if let Some(v) = self.memo.get(&key) {
                    return Ok(v.clone());
                }
                let f = self
                    .oracles
                    .get(name)
                    .ok_or_else(|| EvalError::MissingOracle(name.to_string()))?;
                let v = f(args);
                self.memo.insert(key, v.clone());
                Ok(v)
            }
            _ => {
                let key = (t.id(), args.to_vec());
                if let Some(v) = self.memo.get(&key) {
                    return Ok(v.clone());
                }
                let v = match self.strategy {
                    Strategy::Closed => self.closed(t, &args[0], &args[1..])?,
                    Strategy::Step => self.jumps(t, &args[0], &args[1..])?,
                };
                self.memo.insert(key, v.clone());
                Ok(v)
            }
        }
    }

    fn at(&mut self, f: &Term, u: u64, ys: &[Value]) -> Result<Value, EvalError> {
        self.at_point(f, Value::alpha(u), ys)
    }

    fn at_point(&mut self, f: &Term, x: Value, ys: &[Value]) -> Result<Value, EvalError> {
        let mut args = Vec::with_capacity(ys.len() + 1);
        args.push(x);
        args.extend_from_slice(ys);
        self.eval(f, &args)
    }

    fn closed(&mut self, t: &Term, x: &Value, ys: &[Value]) -> Result<Value, EvalError> {
        let l = x.len();
        match t.node() {
            Node::Ode1 { g, h } => {
                let g = self.eval(g, ys)?;
                let mut bits = vec![false; l as usize];
                for u in 0..l {
                    bits[(l - u - 1) as usize] = boolean("h", u, self.at(h, u, ys)?)?;
                }
                Ok(g.shl(l) + Value::from_bits_lsb(&bits))
            }
            Node::Ode2 { g, h, k } | Node::Ode2Star { g, h, k } => {
                let star = matches!(t.node(), Node::Ode2Star { .. });
                let g = self.eval(g, ys)?;
                let s = self.eval(k, ys)?.len();
                let mut hs = Vec::with_capacity(l as usize);
                for u in 0..l {
                    hs.push(boolean("h", u, self.at(h, u, ys)?)?);
                }
                if s == 0 {
                    if !star {
                        if let Some(u) = hs.iter().position(|b| *b) {
                            return Err(EvalError::SchemaViolation(Violation::KZeroWithHOne {
                                u: u as u64,
                            }));
                        }
                    }
                    let count = hs.iter().filter(|b| **b).count();
                    return Ok(g + Value::from(count));
                }
                let mut bits = vec![false; (s * l) as usize];
                for (u, b) in hs.iter().enumerate() {
                    bits[(s * (l - u as u64 - 1)) as usize] = *b;
                }
                Ok(g.shl(s * l) + Value::from_bits_lsb(&bits))
            }
            Node::Ode3 { g } => Ok(self.eval(g, ys)?.shr_floor(l)),
            Node::Ode4 { g, k, dir } => {
                let g = self.eval(g, ys)?;
                let s = self.eval(k, ys)?.len();
                Ok(match dir {
                    Dir::Left => g.shl(s * l),
                    Dir::Right => g.shr_floor(s * l),
                })
            }
            Node::Ode1Star { g, h, k } => {
                let g = self.eval(g, ys)?;
                let mut ks = Vec::with_capacity(l as usize);
                let mut hs = Vec::with_capacity(l as usize);
                for u in 0..l {
                    hs.push(boolean("h", u, self.at(h, u, ys)?)?);
                    ks.push(boolean("k", u, self.at(k, u, ys)?)?);
                }
                // exponent of the suffix product ∏_{t>u}(1 + k_t)
                let mut e = 0u64;
                let mut sum = Value::ZERO;
                for u in (0..l as usize).rev() {
                    if hs[u] {
                        sum = sum + Value::pow2(e);
                    }
                    e += ks[u] as u64;
                }
                Ok(g.shl(e) + sum)
            }
            _ => unreachable!("closed form requested for a non-schema node"),
        }
    }

    /// Right-hand side increment at one jump point `xp` with ℓ(xp) = u.
    fn increment(
        &mut self,
        t: &Term,
        f: &Value,
        xp: Value,
        u: u64,
        ys: &[Value],
        shift: Option<&Value>,
    ) -> Result<Value, EvalError> {
        match t.node() {
            Node::Ode1 { h, .. } => {
                let h = boolean("h", u, self.at_point(h, xp, ys)?)?;
                Ok(f + &Value::from_bool(h))
            }
            Node::Ode2 { h, .. } | Node::Ode2Star { h, .. } => {
                let k = shift.expect("shift evaluated");
                let h = boolean("h", u, self.at_point(h, xp, ys)?)?;
                if h && k.is_zero() && matches!(t.node(), Node::Ode2 { .. }) {
                    return Err(EvalError::SchemaViolation(Violation::KZeroWithHOne { u }));
                }
                let factor = Value::pow2(k.len()) - Value::ONE;
                Ok(&factor * f + Value::from_bool(h))
            }
            Node::Ode3 { .. } => Ok(-(f - &f.div2())),
            Node::Ode4 { dir, .. } => {
                let s = shift.expect("shift evaluated").len();
                let scaled = &(Value::pow2(s) - Value::ONE) * f;
                Ok(match dir {
                    Dir::Left => scaled,
                    Dir::Right => -scaled.shr_ceil(s),
                })
            }
            Node::Ode1Star { h, k, .. } => {
                let kv = boolean("k", u, self.at_point(k, xp.clone(), ys)?)?;
                let hv = boolean("h", u, self.at_point(h, xp, ys)?)?;
                Ok(&Value::from_bool(kv) * f + Value::from_bool(hv))
            }
            _ => unreachable!("increment requested for a non-schema node"),
        }
    }

    fn start(&mut self, t: &Term, ys: &[Value]) -> Result<(Value, Option<Value>), EvalError> {
        let (g, k) = match t.node() {
            Node::Ode1 { g, .. } | Node::Ode3 { g } | Node::Ode1Star { g, .. } => (g, None),
            Node::Ode2 { g, k, .. } | Node::Ode2Star { g, k, .. } | Node::Ode4 { g, k, .. } => {
                (g, Some(k))
            }
            _ => unreachable!("not a schema node"),
        };
        let g = self.eval(g, ys)?;
        let k = match k {
            Some(k) => Some(self.eval(k, ys)?),
            None => None,
        };
        Ok((g, k))
    }

    /// The recurrence applied at each jump point α(0), …, α(ℓ(x)−1).
    fn jumps(&mut self, t: &Term, x: &Value, ys: &[Value]) -> Result<Value, EvalError> {
        let (mut f, k) = self.start(t, ys)?;
        for u in 0..x.len() {
            let d = self.increment(t, &f, Value::alpha(u), u, ys, k.as_ref())?;
            f = f + d;
        }
        Ok(f)
    }

    /// Literal unit steps x → x + 1 from 0 to `n`, reporting every f(x).
    pub(crate) fn unit_steps(
        &mut self,
        t: &Term,
        n: u64,
        ys: &[Value],
        visit: &mut dyn FnMut(u64, &Value),
    ) -> Result<(), EvalError> {
        let (mut f, k) = self.start(t, ys)?;
        visit(0, &f);
        for x in 0..n {
            let xv = Value::from(x);
            let u = xv.len();
            let dl = Value::from(x + 1).len() - u;
            if dl > 0 {
                let d = self.increment(t, &f, xv, u, ys, k.as_ref())?;
                f = f + Value::from(dl) * d;
            }
            visit(x + 1, &f);
        }
        Ok(())
    }
}
