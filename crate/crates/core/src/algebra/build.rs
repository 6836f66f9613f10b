//! Terse constructors for hand-written terms.
//!
//! These panic on arity mismatches, which in hand-written terms are
//! programming errors rather than input errors.

use super::term::Term;

fn ok(t: Result<Term, super::AlgebraError>) -> Term {
    t.unwrap_or_else(|e| panic!("ill-formed term: {e}"))
}

pub fn p(i: usize, n: usize) -> Term {
    ok(Term::proj(i, n))
}

/// All projections of an n-ary context, in order.
pub fn projs(n: usize) -> Vec<Term> {
    (1..=n).map(|i| p(i, n)).collect()
}

pub fn c0(n: usize) -> Term {
    Term::zero(n)
}

pub fn c1(n: usize) -> Term {
    Term::one(n)
}

pub fn app(f: &Term, args: &[Term]) -> Term {
    ok(Term::compose(f, args))
}

pub fn add(a: &Term, b: &Term) -> Term {
    ok(Term::apply2(Term::add_fn(), a, b))
}

pub fn sub(a: &Term, b: &Term) -> Term {
    ok(Term::apply2(Term::sub_fn(), a, b))
}

pub fn times(a: &Term, b: &Term) -> Term {
    ok(Term::apply2(Term::times_fn(), a, b))
}

pub fn len(a: &Term) -> Term {
    Term::apply1(Term::length(), a)
}

pub fn sg(a: &Term) -> Term {
    Term::apply1(Term::sign(), a)
}

pub fn div2(a: &Term) -> Term {
    Term::apply1(Term::div2_fn(), a)
}

/// 1 − sg(a).
pub fn cosg(a: &Term) -> Term {
    sub(&c1(a.arity()), &sg(a))
}

/// a + 1.
pub fn succ(a: &Term) -> Term {
    add(a, &c1(a.arity()))
}

/// Conjunction of 0/1-valued terms: sg(a + b − 1).
pub fn and(a: &Term, b: &Term) -> Term {
    sg(&sub(&add(a, b), &c1(a.arity())))
}

/// Disjunction of 0/1-valued terms: sg(a + b).
pub fn or(a: &Term, b: &Term) -> Term {
    sg(&add(a, b))
}

pub fn ode1(g: &Term, h: &Term) -> Term {
    ok(Term::ode1(g, h))
}

pub fn ode2(g: &Term, h: &Term, k: &Term) -> Term {
    ok(Term::ode2(g, h, k))
}

pub fn ode2_star(g: &Term, h: &Term, k: &Term) -> Term {
    ok(Term::ode2_star(g, h, k))
}

pub fn ode3(g: &Term) -> Term {
    Term::ode3(g)
}

pub fn ode4(g: &Term, k: &Term, dir: super::Dir) -> Term {
    ok(Term::ode4(g, k, dir))
}

pub fn ode1_star(g: &Term, h: &Term, k: &Term) -> Term {
    ok(Term::ode1_star(g, h, k))
}

/// Reads a term of arity n in a context of arity m ≥ n through the first n projections.
pub fn lift(t: &Term, m: usize) -> Term {
    if t.arity() == m {
        return t.clone();
    }
    assert!(t.arity() <= m, "cannot lift arity {} to {m}", t.arity());
    if t.arity() == 0 {
        return match t.node() {
            super::Node::Const0 { .. } => c0(m),
            super::Node::Const1 { .. } => c1(m),
            _ => panic!("lifting a nullary non-constant"),
        };
    }
    app(t, &(1..=t.arity()).map(|i| p(i, m)).collect::<Vec<_>>())
}
