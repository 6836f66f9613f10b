//! Derived functions and combinators, each paired with an arithmetic oracle.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebra::build::*;
use crate::algebra::{accepting_presets, is_statically_boolean, validate, CheckedTerm, ModePreset, PresetName, Term};
use crate::value::Value;

/// Reference semantics of a named term; `None` outside its declared regime.
pub type HostFn = Arc<dyn Fn(&[Value]) -> Option<Value> + Send + Sync>;

#[derive(Clone)]
pub struct NamedTerm {
    pub name: String,
    pub term: CheckedTerm,
    pub oracle: HostFn,
    pub modes: Vec<PresetName>,
}

impl NamedTerm {
    /// Validates `term` under every preset and keeps the first that accepts it.
    pub fn new(name: &str, term: Term, oracle: impl Fn(&[Value]) -> Option<Value> + Send + Sync + 'static) -> NamedTerm {
        let modes = accepting_presets(&term);
        let home = modes.first().copied().unwrap_or_else(|| panic!("{name} validates under no preset"));
        NamedTerm {
            name: name.to_string(),
            term: validate(&term, home).expect("accepted preset"),
            oracle: Arc::new(oracle),
            modes,
        }
    }

    pub fn arity(&self) -> usize {
        self.term.arity()
    }

    pub fn raw(&self) -> &Term {
        self.term.term()
    }

    pub fn expected(&self, args: &[Value]) -> Option<Value> {
        (self.oracle)(args)
    }

    /// The same term checked under another preset.
    pub fn checked_under(&self, mode: impl Into<ModePreset>) -> Option<CheckedTerm> {
        validate(self.raw(), mode).ok()
    }
}

impl fmt::Debug for NamedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NamedTerm")
            .field("name", &self.name)
            .field("arity", &self.arity())
            .field("modes", &self.modes)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StdlibError {
    #[error("step function `{0}` is not boolean-valued")]
    NonBooleanStep(String),
    #[error("unknown stdlib name `{0}`")]
    UnknownName(String),
    #[error("`{name}` has arity {found}, expected {expected}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
}

macro_rules! cached {
    ($name:ident, $body:expr) => {
        pub fn $name() -> Term {
            static CELL: OnceLock<Term> = OnceLock::new();
            CELL.get_or_init(|| $body).clone()
        }
    };
}

/// Raw term constructors. Sharing one instance per function keeps
/// memoization keys stable across compositions.
pub mod terms {
    use super::*;

    cached!(shift, ode1(&p(1, 1), &c0(2)));
    cached!(pow2len, ode1(&c1(0), &c0(1)));
    cached!(smash, ode2(&c1(1), &c0(2), &p(1, 1)));
    cached!(msp, ode3(&p(1, 1)));
    cached!(cosg, super::cosg(&p(1, 1)));
    cached!(mod2, {
        let x = p(1, 1);
        sub(&sub(&x, &div2(&x)), &div2(&x))
    });
    cached!(s0, add(&p(1, 1), &p(1, 1)));
    cached!(s1, succ(&s0()));
    cached!(if_, {
        let [x, y, z] = [p(1, 3), p(2, 3), p(3, 3)];
        let a = app(&shift(), &[super::cosg(&x), y.clone()]);
        let b = app(&shift(), &[sg(&x), z.clone()]);
        add(&sub(&a, &y), &sub(&b, &z))
    });
    cached!(cond, {
        let [x, v, y, z] = [p(1, 4), p(2, 4), p(3, 4), p(4, 4)];
        app(&if_(), &[sg(&sub(&v, &x)), z, y])
    });
    cached!(bit, {
        let [x, y] = [p(1, 2), p(2, 2)];
        let hi = app(&msp(), &[app(&s1(), std::slice::from_ref(&y)), x.clone()]);
        sub(&app(&msp(), &[y, x]), &app(&s0(), &[hi]))
    });
    cached!(f_aux, {
        let g = app(&if_(), &[p(2, 2), c1(2), c0(2)]);
        let h = super::eq(&len(&succ(&p(1, 3))), &p(3, 3));
        ode1(&g, &h)
    });
    cached!(bexp, {
        let [x, i] = [p(1, 2), p(2, 2)];
        let aux = app(&f_aux(), &[x.clone(), x.clone(), i]);
        app(&msp(), &[sub(&aux, &c1(2)), app(&pow2len(), &[x])])
    });
    cached!(bit_at, {
        let [x, y] = [p(1, 2), p(2, 2)];
        let lit = app(&bit(), &[x.clone(), sub(&app(&bexp(), &[x.clone(), y.clone()]), &c1(2))]);
        app(&cond(), &[y, len(&x), lit, c0(2)])
    });
    cached!(bcount, app(&bcount_core(true), &[p(1, 1), p(1, 1)]));

    /// The two-argument system whose diagonal is the bit count.
    pub fn bcount_core(star: bool) -> Term {
        let g = app(&mod2(), &[p(1, 1)]);
        let h = app(&bit_at(), &[p(2, 2), len(&succ(&p(1, 2)))]);
        if star {
            ode2_star(&g, &h, &c0(1))
        } else {
            ode2(&g, &h, &c0(1))
        }
    }
}

pub use terms::{bcount_core, bexp, bit, bit_at, cond, f_aux, if_, msp, pow2len, shift, smash};

/// 1 − sg(a) built from the shared cosg function.
pub fn cosg(a: &Term) -> Term {
    crate::algebra::build::cosg(a)
}

/// 0/1 equality test: 1 − sg(a − b) − sg(b − a).
pub fn eq(a: &Term, b: &Term) -> Term {
    sub(&sub(&c1(a.arity()), &sg(&sub(a, b))), &sg(&sub(b, a)))
}

fn pow2(e: u64) -> Value {
    Value::pow2(e)
}

fn nonneg(args: &[Value]) -> bool {
    args.iter().all(|a| !a.is_negative())
}

fn floor_mod2(v: &Value) -> Value {
    v - &(v.div2() + v.div2())
}

fn bit_of(x: &Value, i: u64) -> Value {
    floor_mod2(&x.shr_floor(i))
}

fn small_index(v: &Value) -> Option<u64> {
    v.to_u64()
}

/// f(x, ȳ) = ∃ z ≤ ℓ(x): R(z, ȳ), given the characteristic term of R.
pub fn bounded_exists_term(h_r: &Term) -> Term {
    let (g, h) = quantifier_parts(h_r);
    sg(&ode1(&g, &h))
}

/// f(x, ȳ) = ∀ z ≤ ℓ(x): R(z, ȳ).
pub fn bounded_forall_term(h_r: &Term) -> Term {
    let (g, h) = quantifier_parts(h_r);
    crate::algebra::build::cosg(&ode1(&crate::algebra::build::cosg(&g), &crate::algebra::build::cosg(&h)))
}

fn quantifier_parts(h_r: &Term) -> (Term, Term) {
    assert!(h_r.arity() >= 1, "a relation needs its bound variable");
    let q = h_r.arity() - 1;
    let mut gargs = vec![c0(q)];
    gargs.extend(projs(q));
    let g = app(h_r, &gargs);
    let mut hargs = vec![len(&succ(&p(1, q + 1)))];
    hargs.extend((2..=q + 1).map(|i| p(i, q + 1)));
    let h = app(h_r, &hargs);
    (g, h)
}

/// ∃ z ≤ ℓ(x): R(z, ȳ) as a named term; the oracle loops over z.
pub fn mk_bounded_exists(r: &NamedTerm) -> NamedTerm {
    quantifier(r, true)
}

/// ∀ z ≤ ℓ(x): R(z, ȳ).
pub fn mk_bounded_forall(r: &NamedTerm) -> NamedTerm {
    quantifier(r, false)
}

fn quantifier(r: &NamedTerm, exists: bool) -> NamedTerm {
    let term = if exists {
        bounded_exists_term(r.raw())
    } else {
        bounded_forall_term(r.raw())
    };
    let ro = r.oracle.clone();
    let name = format!("{}_{}", if exists { "exists" } else { "forall" }, r.name);
    NamedTerm::new(&name, term, move |a| {
        let l = a[0].len();
        let mut args = a.to_vec();
        for z in 0..=l {
            args[0] = Value::from(z);
            let v = ro(&args)?.as_bool()?;
            if v == exists {
                return Some(Value::from_bool(exists));
            }
        }
        Some(Value::from_bool(!exists))
    })
}

/// A term of arity q whose length is ℓ(x₁)^k.
pub fn bound_witness(q: usize, k: u32) -> Term {
    assert!(k >= 1);
    let x1 = p(1, q);
    let mut pk = app(&pow2len(), std::slice::from_ref(&x1));
    for _ in 1..k {
        pk = app(&smash(), &[sub(&pk, &c1(q)), x1.clone()]);
    }
    sub(&pk, &c1(q))
}

/// min_{i ≤ ℓ(x₁)^k} { g(i, x⃗) : h(i, x⃗) = 1 }, or 1 when no i qualifies.
///
/// The first minimizing index is pinned by a bounded ∀, recovered in unary
/// through an ODE₁ accumulation and a length, then fed back into g.
pub fn min_term(g: &Term, h: &Term, k: u32) -> Term {
    assert_eq!(g.arity(), h.arity());
    assert!(g.arity() >= 2, "min needs at least one parameter");
    let q = g.arity() - 1;
    let xs = |offset: usize, n: usize| (offset + 1..=offset + q).map(|i| p(i, n)).collect::<Vec<_>>();
    let w = bound_witness(q, k);
    let at = |f: &Term, first: Term, n: usize, offset: usize| {
        let mut a = vec![first];
        a.extend(xs(offset, n));
        app(f, &a)
    };

    // R∀(j, i, x⃗): h(j) → i precedes j in (g, index) order
    let n = q + 2;
    let gi = at(g, p(2, n), n, 2);
    let gj = at(g, p(1, n), n, 2);
    let hj = at(h, p(1, n), n, 2);
    let precedes = or(&sg(&sub(&gj, &gi)), &and(&eq(&gi, &gj), &crate::algebra::build::cosg(&sub(&p(2, n), &p(1, n)))));
    let r_all = or(&crate::algebra::build::cosg(&hj), &precedes);
    let fa = bounded_forall_term(&r_all);

    // Q(i, x⃗): i is the first minimizer
    let n = q + 1;
    let w_in = |n: usize, offset: usize| app(&w, &xs(offset, n));
    let mut fa_args = vec![w_in(n, 1), p(1, n)];
    fa_args.extend(xs(1, n));
    let first_min = and(&app(h, &projs(n)), &app(&fa, &fa_args));

    // R∃(j, t, x⃗): Q(j) ∧ j + ℓ(t) > ℓ(W)
    let n = q + 2;
    let qj = at(&first_min, p(1, n), n, 2);
    let reach = sg(&sub(&add(&p(1, n), &len(&p(2, n))), &len(&w_in(n, 2))));
    let ex = bounded_exists_term(&and(&qj, &reach));

    // F(z, x⃗) with ℓ(z) = ℓ(W) + 1 accumulates 2^{i*} − 1
    let n = q + 1;
    let mut ex_args = vec![w_in(n, 1), p(1, n)];
    ex_args.extend(xs(1, n));
    let unary = ode1(&c0(q), &app(&ex, &ex_args));
    let wq = w_in(q, 0);
    let top = succ(&add(&wq, &wq));
    let mut f_args = vec![top];
    f_args.extend(projs(q));
    let istar = len(&app(&unary, &f_args));

    let any = app(&bounded_exists_term(h), &{
        let mut a = vec![wq];
        a.extend(projs(q));
        a
    });
    let mut g_args = vec![istar];
    g_args.extend(projs(q));
    app(&if_(), &[any, c1(q), app(g, &g_args)])
}

/// Named wrapper around [`min_term`] with a looping oracle.
pub fn mk_min(g: &NamedTerm, h: &NamedTerm, k: u32) -> NamedTerm {
    let term = min_term(g.raw(), h.raw(), k);
    let (go, ho) = (g.oracle.clone(), h.oracle.clone());
    let name = format!("min_{}_{}", g.name, h.name);
    NamedTerm::new(&name, term, move |a| {
        let bound = a[0].len().checked_pow(k)?;
        let mut best: Option<Value> = None;
        let mut args = vec![Value::ZERO];
        args.extend_from_slice(a);
        for i in 0..=bound {
            args[0] = Value::from(i);
            if ho(&args)?.as_bool()? {
                let v = go(&args)?;
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        Some(best.unwrap_or(Value::ONE))
    })
}

/// Concatenation recursion on notation:
/// f(0, ȳ) = g(ȳ), f(2x + i, ȳ) = 2·f(x, ȳ) + h_i(x, ȳ).
pub fn mk_crn(g: &NamedTerm, h0: &NamedTerm, h1: &NamedTerm) -> Result<NamedTerm, StdlibError> {
    let q = g.arity();
    for h in [h0, h1] {
        if h.arity() != q + 1 {
            return Err(StdlibError::Arity {
                name: h.name.clone(),
                expected: q + 1,
                found: h.arity(),
            });
        }
        if !is_statically_boolean(h.raw(), h.term.mode()) {
            return Err(StdlibError::NonBooleanStep(h.name.clone()));
        }
    }
    let term = crn_term(g.raw(), h0.raw(), h1.raw());
    let (go, h0o, h1o) = (g.oracle.clone(), h0.oracle.clone(), h1.oracle.clone());
    let name = format!("crn_{}_{}_{}", g.name, h0.name, h1.name);
    Ok(NamedTerm::new(&name, term, move |a| {
        if !nonneg(&a[..1]) {
            return None;
        }
        let ys = &a[1..];
        let mut f = go(ys)?;
        let x = &a[0];
        for pos in (0..x.len()).rev() {
            let mut args = vec![x.shr_floor(pos + 1)];
            args.extend_from_slice(ys);
            let h = if x.magnitude_bit(pos) { h1o(&args)? } else { h0o(&args)? };
            f = f.shl(1) + h;
        }
        Some(f)
    }))
}

/// The CRN term itself: F(x, x, ȳ) where F is an ODE₁ over t reading bit
/// ℓ(x) − ℓ(t + 1) of x, most significant first.
pub fn crn_term(g: &Term, h0: &Term, h1: &Term) -> Term {
    let q = g.arity();
    let n = q + 2; // (t, x, ȳ)
    let x = p(2, n);
    let ys: Vec<Term> = (3..=n).map(|i| p(i, n)).collect();
    let pos = app(&bexp(), &[x.clone(), sub(&len(&x), &len(&succ(&p(1, n))))]);
    let current = app(&bit(), &[x.clone(), sub(&pos, &c1(n))]);
    let prefix = app(&msp(), &[pos, x]);
    let mut hargs = vec![prefix];
    hargs.extend(ys);
    let step = app(&if_(), &[current, app(h0, &hargs), app(h1, &hargs)]);
    let init = lift_tail(g, q + 1);
    let f = ode1(&init, &step);
    let mut args = vec![p(1, q + 1), p(1, q + 1)];
    args.extend((2..=q + 1).map(|i| p(i, q + 1)));
    app(&f, &args)
}

/// g(ȳ) read in the context (x, ȳ).
fn lift_tail(g: &Term, n: usize) -> Term {
    if g.arity() == 0 {
        return lift(g, n);
    }
    app(g, &(2..=n).map(|i| p(i, n)).collect::<Vec<_>>())
}

fn named(name: &str, term: Term, oracle: impl Fn(&[Value]) -> Option<Value> + Send + Sync + 'static) -> NamedTerm {
    NamedTerm::new(name, term, oracle)
}

pub fn mk_shift() -> NamedTerm {
    named("shift", shift(), |a| Some(a[1].shl(a[0].len())))
}

pub fn mk_pow2len() -> NamedTerm {
    named("pow2len", pow2len(), |a| Some(pow2(a[0].len())))
}

pub fn mk_smash() -> NamedTerm {
    named("smash", smash(), |a| Some(pow2(a[0].len() * a[1].len())))
}

pub fn mk_msp() -> NamedTerm {
    named("msp", msp(), |a| Some(a[1].shr_floor(a[0].len())))
}

pub fn mk_if() -> NamedTerm {
    named("if", if_(), |a| Some(if a[0].is_zero() { a[1].clone() } else { a[2].clone() }))
}

pub fn mk_cond() -> NamedTerm {
    named("cond", cond(), |a| Some(if a[0] < a[1] { a[2].clone() } else { a[3].clone() }))
}

pub fn mk_cosg() -> NamedTerm {
    named("cosg", terms::cosg(), |a| Some(Value::from_bool(!a[0].is_positive())))
}

pub fn mk_mod2() -> NamedTerm {
    named("mod2", terms::mod2(), |a| Some(floor_mod2(&a[0])))
}

pub fn mk_s0() -> NamedTerm {
    named("s0", terms::s0(), |a| Some(&a[0] + &a[0]))
}

pub fn mk_s1() -> NamedTerm {
    named("s1", terms::s1(), |a| Some(&a[0] + &a[0] + 1))
}

pub fn mk_bit() -> NamedTerm {
    named("bit", bit(), |a| Some(bit_of(&a[0], a[1].len())))
}

pub fn mk_f_aux() -> NamedTerm {
    named("f_aux", f_aux(), |a| {
        let l = a[0].len();
        let i = &a[2];
        Some(if i.is_negative() {
            return None;
        } else if i.is_zero() {
            pow2(l)
        } else if i.is_positive() && small_index(i)? <= l {
            pow2(l - small_index(i)?)
        } else {
            Value::ZERO
        })
    })
}

pub fn mk_bexp() -> NamedTerm {
    named("bexp", bexp(), |a| {
        let i = small_index(&a[1])?;
        (nonneg(a) && i <= a[0].len()).then(|| pow2(i))
    })
}

#[allow(non_snake_case)]
pub fn mk_BIT() -> NamedTerm {
    named("BIT", bit_at(), |a| {
        if !nonneg(a) {
            return None;
        }
        Some(match a[1].to_u64() {
            Some(y) => bit_of(&a[0], y),
            None => Value::ZERO,
        })
    })
}

pub fn mk_bcount() -> NamedTerm {
    named("bcount", terms::bcount(), |a| {
        if a[0].is_negative() {
            return None;
        }
        Some(Value::from((0..a[0].len()).filter(|i| a[0].magnitude_bit(*i)).count()))
    })
}

/// R(z, y) = [z = y].
fn rel_eq() -> NamedTerm {
    named("eq", eq(&p(1, 2), &p(2, 2)), |a| Some(Value::from_bool(a[0] == a[1])))
}

/// R(z, y) = [z ≤ y].
fn rel_le() -> NamedTerm {
    named("le", crate::algebra::build::cosg(&sub(&p(1, 2), &p(2, 2))), |a| {
        Some(Value::from_bool(a[0] <= a[1]))
    })
}

/// R(z, x) = BIT(x, z) ∧ BIT(x, z + 1), read on the diagonal.
fn exists_adjacent() -> NamedTerm {
    let r = and(
        &app(&bit_at(), &[p(2, 2), p(1, 2)]),
        &app(&bit_at(), &[p(2, 2), succ(&p(1, 2))]),
    );
    let q = bounded_exists_term(&r);
    named("exists_adjacent", app(&q, &[p(1, 1), p(1, 1)]), |a| {
        (!a[0].is_negative()).then(|| {
            let x = a[0].to_bigint();
            Value::from_bool(x.clone() & (x >> 1u32) != num_bigint::BigInt::from(0))
        })
    })
}

/// ∀ z ≤ ℓ(x): BIT(x, z) ∨ z ≥ ℓ(x), i.e. x = 2^{ℓ(x)} − 1.
fn forall_ones() -> NamedTerm {
    let r = or(
        &app(&bit_at(), &[p(2, 2), p(1, 2)]),
        &sg(&sub(&succ(&p(1, 2)), &len(&p(2, 2)))),
    );
    let q = bounded_forall_term(&r);
    named("forall_ones", app(&q, &[p(1, 1), p(1, 1)]), |a| {
        (!a[0].is_negative()).then(|| Value::from_bool(a[0] == Value::alpha(a[0].len())))
    })
}

/// Least i ≤ ℓ(x) with i ≥ y; 1 if none.
fn min_ge() -> NamedTerm {
    let g = named("index", p(1, 3), |a| Some(a[0].clone()));
    let h = named("at_least", sg(&sub(&succ(&p(1, 3)), &p(3, 3))), |a| {
        Some(Value::from_bool(a[0] >= a[2]))
    });
    let mut m = mk_min(&g, &h, 1);
    m.name = "min_ge".into();
    m
}

/// Position of the lowest set bit of x; 1 for x = 0.
fn lowbit() -> NamedTerm {
    let g = named("index", p(1, 2), |a| Some(a[0].clone()));
    let h = named("bit_set", app(&bit_at(), &[p(2, 2), p(1, 2)]), |a| {
        Some(bit_of(&a[1], a[0].to_u64()?))
    });
    let mut m = mk_min(&g, &h, 1);
    m.name = "lowbit".into();
    m
}

/// CRN copying the input under a leading 1: f(x) = 2^{ℓ(x)} + x.
fn crn_copy() -> NamedTerm {
    let g = named("one", c1(0), |_| Some(Value::ONE));
    let h0 = named("zero", c0(1), |_| Some(Value::ZERO));
    let h1 = named("one", c1(1), |_| Some(Value::ONE));
    let mut m = mk_crn(&g, &h0, &h1).expect("constant steps are boolean");
    m.name = "crn_copy".into();
    m
}

/// Every registered named term, in a fixed order.
pub fn registry() -> Vec<NamedTerm> {
    static CELL: OnceLock<Vec<NamedTerm>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut exists_eq = mk_bounded_exists(&rel_eq());
        exists_eq.name = "exists_eq".into();
        let mut forall_le = mk_bounded_forall(&rel_le());
        forall_le.name = "forall_le".into();
        vec![
            mk_shift(),
            mk_pow2len(),
            mk_smash(),
            mk_msp(),
            mk_if(),
            mk_cond(),
            mk_cosg(),
            mk_mod2(),
            mk_s0(),
            mk_s1(),
            mk_bit(),
            mk_f_aux(),
            mk_bexp(),
            mk_BIT(),
            exists_eq,
            forall_le,
            exists_adjacent(),
            forall_ones(),
            min_ge(),
            lowbit(),
            crn_copy(),
            mk_bcount(),
        ]
    })
    .clone()
}

pub fn lookup(name: &str) -> Result<NamedTerm, StdlibError> {
    registry()
        .into_iter()
        .find(|n| n.name == name)
        .ok_or_else(|| StdlibError::UnknownName(name.to_string()))
}

/// Boolean-valued registry entries usable as CRN step functions, by arity.
pub fn boolean_pool(arity: usize) -> Vec<NamedTerm> {
    let n = arity;
    let mut out = vec![
        named("zero", c0(n), |_| Some(Value::ZERO)),
        named("one", c1(n), |_| Some(Value::ONE)),
    ];
    if n >= 1 {
        out.push(named("sg", sg(&p(1, n)), |a| Some(a[0].sg())));
        out.push(named("cosg", crate::algebra::build::cosg(&p(1, n)), |a| {
            Some(Value::from_bool(!a[0].is_positive()))
        }));
        out.push(named("odd", sg(&app(&terms::mod2(), &[p(1, n)])), |a| {
            Some(floor_mod2(&a[0]).sg())
        }));
        out.push(named("bit1", sg(&app(&bit(), &[p(1, n), c1(n)])), |a| {
            Some(bit_of(&a[0], 1).sg())
        }));
    }
    if n >= 2 {
        out.push(named("gt", sg(&sub(&p(1, n), &p(2, n))), |a| Some((&a[0] - &a[1]).sg())));
        out.push(named("small", crate::algebra::build::cosg(&sub(&len(&p(1, n)), &p(2, n))), |a| {
            Some(Value::from_bool(Value::from(a[0].len()) <= a[1]))
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_i64;

    fn ev(t: &NamedTerm, args: &[i64]) -> Value {
        eval_i64(&t.term, args).unwrap()
    }

    #[test]
    fn spot_values() {
        assert_eq!(ev(&mk_shift(), &[6, 5]), 40);
        assert_eq!(ev(&mk_smash(), &[3, 5]), 64);
        assert_eq!(ev(&mk_msp(), &[3, 20]), 5);
        assert_eq!(ev(&mk_if(), &[3, 4, 9]), 9);
        assert_eq!(ev(&mk_cond(), &[2, 5, 1, 0]), 1);
        assert_eq!(ev(&mk_bit(), &[6, 1]), 1);
        assert_eq!(ev(&mk_f_aux(), &[5, 5, 1]), 4);
        assert_eq!(ev(&mk_bexp(), &[5, 3]), 8);
        assert_eq!(ev(&mk_BIT(), &[6, 2]), 1);
        assert_eq!(ev(&mk_bcount(), &[255]), 8);
        assert_eq!(ev(&crn_copy(), &[5]), 13);
        assert_eq!(ev(&lowbit(), &[0]), 1);
        assert_eq!(ev(&lowbit(), &[12]), 2);
        assert_eq!(ev(&min_ge(), &[8, 2]), 2);
    }

    #[test]
    fn registry_oracles_agree_on_small_inputs() {
        for nt in registry() {
            let n = nt.arity();
            let limit: i64 = match n {
                1 => 64,
                2 => 16,
                _ => 6,
            };
            let total = (limit as usize).pow(n as u32);
            for code in 0..total {
                let args: Vec<i64> = (0..n).map(|j| ((code / (limit as usize).pow(j as u32)) % limit as usize) as i64).collect();
                let vals: Vec<Value> = args.iter().map(|a| Value::small(*a)).collect();
                if let Some(want) = nt.expected(&vals) {
                    assert_eq!(ev(&nt, &args), want, "{} at {:?}", nt.name, args);
                }
            }
        }
    }

    #[test]
    fn bcount_is_threshold_only() {
        let b = mk_bcount();
        assert!(!b.modes.contains(&PresetName::Acdl));
        assert!(b.modes.contains(&PresetName::TcdlStar));
        for nt in registry().iter().filter(|n| n.name != "bcount") {
            assert!(nt.modes.contains(&PresetName::Acdl), "{}", nt.name);
        }
    }

    #[test]
    fn crn_rejects_non_boolean_steps() {
        let g = named("one", c1(0), |_| Some(Value::ONE));
        let h = named("id", p(1, 1), |a| Some(a[0].clone()));
        assert_eq!(
            mk_crn(&g, &h, &h).unwrap_err(),
            StdlibError::NonBooleanStep("id".into())
        );
    }
}
