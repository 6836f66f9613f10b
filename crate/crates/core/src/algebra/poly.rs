use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::value::Value;

/// An sg-polynomial expression over named variables.
#[derive(Clone, Debug, PartialEq)]
pub enum PolyExpr {
    Int(Value),
    Var(Arc<str>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Sg(Box<PolyExpr>),
}

impl PolyExpr {
    pub fn int(v: impl Into<Value>) -> PolyExpr {
        PolyExpr::Int(v.into())
    }

    pub fn var(name: &str) -> PolyExpr {
        PolyExpr::Var(name.into())
    }

    pub fn sg(self) -> PolyExpr {
        PolyExpr::Sg(Box::new(self))
    }

    pub fn pow(self, e: u32) -> PolyExpr {
        (1..e).fold(self.clone(), |acc, _| acc * self.clone())
    }

    /// Every variable name that occurs in the expression.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            PolyExpr::Int(_) => {}
            PolyExpr::Var(v) => {
                out.insert(v.to_string());
            }
            PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) | PolyExpr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            PolyExpr::Sg(a) => a.collect_vars(out),
        }
    }

    /// Paths of `Sg` nodes that sit below another `Sg`.
    pub fn nested_sg(&self) -> Vec<Vec<usize>> {
        fn walk(p: &PolyExpr, under: bool, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            match p {
                PolyExpr::Int(_) | PolyExpr::Var(_) => {}
                PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) | PolyExpr::Mul(a, b) => {
                    path.push(0);
                    walk(a, under, path, out);
                    path.pop();
                    path.push(1);
                    walk(b, under, path, out);
                    path.pop();
                }
                PolyExpr::Sg(a) => {
                    if under {
                        out.push(path.clone());
                    }
                    path.push(0);
                    walk(a, true, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, false, &mut Vec::new(), &mut out);
        out
    }

    /// Evaluates the expression, looking variables up through `env`.
    pub fn eval<E>(&self, env: &mut impl FnMut(&str) -> Result<Value, E>) -> Result<Value, E> {
        Ok(match self {
            PolyExpr::Int(v) => v.clone(),
            PolyExpr::Var(name) => env(name)?,
            PolyExpr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            PolyExpr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            PolyExpr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            PolyExpr::Sg(a) => a.eval(env)?.sg(),
        })
    }
}

/// Degree of `p` in the variable set `vars`.
pub fn degree<S: AsRef<str>>(p: &PolyExpr, vars: &[S]) -> u32 {
    match p {
        PolyExpr::Int(_) => 0,
        PolyExpr::Var(v) => vars.iter().any(|w| w.as_ref() == &**v) as u32,
        PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) => degree(a, vars).max(degree(b, vars)),
        PolyExpr::Mul(a, b) => degree(a, vars) + degree(b, vars),
        PolyExpr::Sg(_) => 0,
    }
}

pub fn is_essentially_constant<S: AsRef<str>>(p: &PolyExpr, vars: &[S]) -> bool {
    degree(p, vars) == 0
}

pub fn is_essentially_linear<S: AsRef<str>>(p: &PolyExpr, vars: &[S]) -> bool {
    degree(p, vars) == 1
}

macro_rules! poly_op {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl std::ops::$trait for PolyExpr {
            type Output = PolyExpr;
            fn $method(self, rhs: PolyExpr) -> PolyExpr {
                PolyExpr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

poly_op!(Add, add, Add);
poly_op!(Sub, sub, Sub);
poly_op!(Mul, mul, Mul);

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyExpr::Int(v) => write!(f, "{v}"),
            PolyExpr::Var(v) => write!(f, "{v}"),
            PolyExpr::Add(a, b) => write!(f, "({a} + {b})"),
            PolyExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            PolyExpr::Mul(a, b) => write!(f, "{a}*{b}"),
            PolyExpr::Sg(a) => write!(f, "sg({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(n: &str) -> PolyExpr {
        PolyExpr::var(n)
    }

    #[test]
    fn sg_forces_degree_zero() {
        let p = (v("x1") - PolyExpr::int(5)).sg();
        assert!(is_essentially_constant(&p, &["x1"]));
    }

    #[test]
    fn nested_sg_is_reported_not_rejected() {
        let p = (v("x") + v("y").sg()).sg() * v("x");
        assert_eq!(p.nested_sg(), vec![vec![0, 0, 1]]);
        assert_eq!(degree(&p, &["x"]), 1);
    }

    #[test]
    fn evaluation_uses_floor_free_integer_ops() {
        let p = PolyExpr::int(3) * v("a") - (v("a") - PolyExpr::int(10)).sg();
        let r: Result<Value, ()> = p.eval(&mut |_| Ok(Value::small(4)));
        assert_eq!(r.unwrap(), 12);
    }

    const NAMES: [&str; 4] = ["a", "b", "c", "d"];

    fn arb_poly() -> impl Strategy<Value = PolyExpr> {
        let leaf = prop_oneof![
            (-5i64..5).prop_map(PolyExpr::int),
            (0usize..4).prop_map(|i| PolyExpr::var(NAMES[i])),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
                inner.prop_map(PolyExpr::sg),
            ]
        })
    }

    fn arb_vars() -> impl Strategy<Value = Vec<&'static str>> {
        proptest::sample::subsequence(NAMES.to_vec(), 0..=4)
    }

    proptest! {
        #[test]
        fn empty_set_has_degree_zero(p in arb_poly()) {
            prop_assert_eq!(degree::<&str>(&p, &[]), 0);
        }

        #[test]
        fn degree_is_monotone(p in arb_poly(), vs in arb_vars(), extra in 0usize..4) {
            let mut bigger = vs.clone();
            if !bigger.contains(&NAMES[extra]) {
                bigger.push(NAMES[extra]);
            }
            prop_assert!(degree(&p, &vs) <= degree(&p, &bigger));
        }

        #[test]
        fn product_degree_is_additive(p in arb_poly(), q in arb_poly(), vs in arb_vars()) {
            let d = degree(&(p.clone() * q.clone()), &vs);
            prop_assert_eq!(d, degree(&p, &vs) + degree(&q, &vs));
        }
    }
}
