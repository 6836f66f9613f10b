//! Circuit families as oracle predicates, and the term that evaluates them.
//!
//! A family is seen through the predicates `C(x, a, b)` (gate `a` feeds gate
//! `b`), `L0in(a, x)` (input gate `a` carries a one), `L0neg(a, x)` (`a` is a
//! negated input), `Le(a, x)` (`a` sits at level `e`) and the output count
//! `m(n)`. Gate indices follow the usual layout: inputs `0..n`, negations
//! `n..2n`, outputs `n^k − m .. n^k`.

use std::fmt;
use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::algebra::build::*;
use crate::algebra::{validate, CheckedTerm, ModePreset, OracleDecl, PresetName, Term};
use crate::circuit::{simulate, validate_normal_form, BitVector, Circuit, GateId, GateKind, Variant};
use crate::eval::{eval_term, EvalError, OracleFn, Oracles};
use crate::stdlib::{bit_at, bound_witness, bounded_exists_term, bounded_forall_term, if_};
use crate::value::Value;

pub const C_NAME: &str = "C";
pub const L0IN_NAME: &str = "L0in";
pub const L0NEG_NAME: &str = "L0neg";
pub const M_NAME: &str = "m";

/// Name of the level-`e` predicate.
pub fn level_name(e: u32) -> String {
    format!("L{e}")
}

#[derive(Debug, Error)]
pub enum NonuniformError {
    #[error("circuit fails validation: {0}")]
    InvalidCircuit(String),
    #[error("gate indices do not fit the n^k index space")]
    IndexSpaceTooSmall,
    #[error("expected a {expected} adapter, got {found}")]
    VariantMismatch { expected: Variant, found: Variant },
    #[error("gate {gate} lists predecessor {pred} more than once")]
    DuplicateEdge { gate: GateId, pred: GateId },
    #[error("built term does not validate: {0}")]
    Invalid(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A circuit family given by host predicates.
#[derive(Clone)]
pub struct CircuitFamilyAdapter {
    pub variant: Variant,
    pub k: u32,
    pub d: u32,
    m: OracleFn,
    c: OracleFn,
    l0in: OracleFn,
    l0neg: OracleFn,
    levels: Vec<OracleFn>,
}

impl fmt::Debug for CircuitFamilyAdapter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircuitFamilyAdapter")
            .field("variant", &self.variant)
            .field("k", &self.k)
            .field("d", &self.d)
            .finish_non_exhaustive()
    }
}

fn pred2(f: impl Fn(u64, &Value) -> bool + Send + Sync + 'static) -> OracleFn {
    Arc::new(move |a: &[Value]| {
        let hit = match a[0].to_u64() {
            Some(i) if !a[1].is_negative() => f(i, &a[1]),
            _ => false,
        };
        Value::from_bool(hit)
    })
}

impl CircuitFamilyAdapter {
    /// An adapter from closed-form predicates. `c(x, a, b)`, `l0in(a, x)`,
    /// `l0neg(a, x)` and `levels[e − 1](a, x)` take nonnegative indices;
    /// other arguments answer 0.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fns(
        variant: Variant,
        k: u32,
        d: u32,
        m: impl Fn(u64) -> u64 + Send + Sync + 'static,
        c: impl Fn(&Value, u64, u64) -> bool + Send + Sync + 'static,
        l0in: impl Fn(u64, &Value) -> bool + Send + Sync + 'static,
        l0neg: impl Fn(u64, &Value) -> bool + Send + Sync + 'static,
        level: impl Fn(u32, u64, &Value) -> bool + Send + Sync + 'static,
    ) -> CircuitFamilyAdapter {
        let level = Arc::new(level);
        let levels = (1..=d)
            .map(|e| {
                let level = level.clone();
                pred2(move |a, x| level(e, a, x))
            })
            .collect();
        CircuitFamilyAdapter {
            variant,
            k,
            d,
            m: Arc::new(move |a: &[Value]| Value::from(a[0].to_u64().map_or(1, &m).max(1))),
            c: Arc::new(move |a: &[Value]| {
                let hit = match (a[1].to_u64(), a[2].to_u64()) {
                    (Some(i), Some(j)) if !a[0].is_negative() => c(&a[0], i, j),
                    _ => false,
                };
                Value::from_bool(hit)
            }),
            l0in: pred2(l0in),
            l0neg: pred2(l0neg),
            levels,
        }
    }

    pub fn m(&self, n: u64) -> u64 {
        (self.m)(&[Value::from(n)]).to_u64().unwrap_or(1)
    }

    pub fn c(&self, x: &Value, a: u64, b: u64) -> bool {
        (self.c)(&[x.clone(), Value::from(a), Value::from(b)]) == Value::ONE
    }

    pub fn l0in(&self, a: u64, x: &Value) -> bool {
        (self.l0in)(&[Value::from(a), x.clone()]) == Value::ONE
    }

    pub fn l0neg(&self, a: u64, x: &Value) -> bool {
        (self.l0neg)(&[Value::from(a), x.clone()]) == Value::ONE
    }

    /// `Le(a, x)` for `1 ≤ e ≤ d`.
    pub fn level(&self, e: u32, a: u64, x: &Value) -> bool {
        (self.levels[e as usize - 1])(&[Value::from(a), x.clone()]) == Value::ONE
    }

    /// Declarations of the family predicates, all boolean except `m`.
    pub fn decls(&self) -> Vec<OracleDecl> {
        let mut v = vec![
            OracleDecl::new(C_NAME, 3, true),
            OracleDecl::new(L0IN_NAME, 2, true),
            OracleDecl::new(L0NEG_NAME, 2, true),
            OracleDecl::new(M_NAME, 1, false),
        ];
        v.extend((1..=self.d).map(|e| OracleDecl::new(&level_name(e), 2, true)));
        v
    }

    /// Bindings for the family predicates plus the standard ones.
    pub fn oracles(&self) -> Oracles {
        let mut o = Oracles::standard();
        o.bind_arc(C_NAME, self.c.clone());
        o.bind_arc(L0IN_NAME, self.l0in.clone());
        o.bind_arc(L0NEG_NAME, self.l0neg.clone());
        o.bind_arc(M_NAME, self.m.clone());
        for (e, f) in self.levels.iter().enumerate() {
            o.bind_arc(&level_name(e as u32 + 1), f.clone());
        }
        o
    }
}

/// One member C_n of a family, by explicit gate tables.
#[derive(Clone, Debug)]
struct Member {
    n: u64,
    levels: FxHashMap<u64, u32>,
    /// (predecessor, gate)
    edges: FxHashSet<(u64, u64)>,
}

impl Member {
    fn of(c: &Circuit) -> Result<Member, NonuniformError> {
        let mut levels = FxHashMap::default();
        let mut edges = FxHashSet::default();
        for g in c.gates() {
            if g.kind.is_input() {
                continue;
            }
            levels.insert(g.id, g.level);
            for p in &g.preds {
                if !edges.insert((*p, g.id)) {
                    return Err(NonuniformError::DuplicateEdge { gate: g.id, pred: *p });
                }
            }
        }
        Ok(Member {
            n: c.n_inputs() as u64,
            levels,
            edges,
        })
    }

    /// The member one length up: input `n` is an extra, always-one input
    /// that nothing reads, and every other gate keeps its role.
    fn widened(&self, k: u32, m: u64) -> Result<Member, NonuniformError> {
        if (self.n + 1).pow(k) - self.n.pow(k) < 2 {
            return Err(NonuniformError::IndexSpaceTooSmall);
        }
        let map = widen_index(self.n, k, m);
        Ok(Member {
            n: self.n + 1,
            levels: self.levels.iter().map(|(id, l)| (map(*id), *l)).collect(),
            edges: self.edges.iter().map(|(a, b)| (map(*a), map(*b))).collect(),
        })
    }
}

/// Gate index at length n + 1 of gate `id` at length n.
fn widen_index(n: u64, k: u32, m: u64) -> impl Fn(u64) -> u64 {
    let (old, new) = (n.pow(k), (n + 1).pow(k));
    move |id| {
        if id < n {
            id
        } else if id < 2 * n {
            id + 1
        } else if id >= old - m {
            id + new - old
        } else {
            id + 2
        }
    }
}

/// Derives the family predicates from one circuit on `n` inputs.
///
/// The family has two members: the circuit itself at length `n`, and at
/// length `n + 1` the same circuit with an unread top input. Feeding
/// `2^n + input` (see [`encode_input`]) therefore covers inputs whose
/// leading bits are zero. Other lengths have no gates.
pub fn adapter_from_circuit(c: &Circuit) -> Result<CircuitFamilyAdapter, NonuniformError> {
    adapter_with_fault(c, None)
}

/// As [`adapter_from_circuit`], with the edge `from → to` removed from the
/// family. The circuit itself is untouched; this is a fault-injection control.
pub fn adapter_dropping_edge(c: &Circuit, to: GateId, from: GateId) -> Result<CircuitFamilyAdapter, NonuniformError> {
    adapter_with_fault(c, Some((from, to)))
}

fn adapter_with_fault(c: &Circuit, drop: Option<(u64, u64)>) -> Result<CircuitFamilyAdapter, NonuniformError> {
    validate_normal_form(c).map_err(|es| {
        NonuniformError::InvalidCircuit(es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))
    })?;
    let (k, m, n) = (c.k(), c.m() as u64, c.n_inputs() as u64);
    let base = Member::of(c)?;
    let wide = base.widened(k, m)?;
    let mut members = [base, wide];
    if let Some((a, b)) = drop {
        let map = widen_index(n, k, m);
        members[0].edges.remove(&(a, b));
        members[1].edges.remove(&(map(a), map(b)));
    }
    let members = Arc::new(members);
    let (m1, m2, m3, m4) = (members.clone(), members.clone(), members.clone(), members.clone());
    let find = |ms: &[Member; 2], x: &Value| -> Option<usize> { ms.iter().position(|mm| mm.n == x.len()) };
    Ok(CircuitFamilyAdapter::from_fns(
        c.variant(),
        k,
        c.depth(),
        move |_| m,
        move |x, a, b| find(&m1, x).is_some_and(|i| m1[i].edges.contains(&(a, b))),
        move |a, x| find(&m2, x).is_some() && a < x.len() && x.magnitude_bit(a),
        move |a, x| find(&m3, x).is_some() && (x.len()..2 * x.len()).contains(&a),
        move |e, a, x| find(&m4, x).is_some_and(|i| m4[i].levels.get(&a) == Some(&e)),
    ))
}

/// The family input for a circuit input: its bits under a leading one.
pub fn encode_input(bits: &BitVector) -> Value {
    Value::pow2(bits.width() as u64) + bits.to_value()
}

/// Family predicates as terms: `c` has arity 3, `m` arity 1, the rest arity 2.
#[derive(Clone, Debug)]
pub struct Predicates {
    pub c: Term,
    pub l0in: Term,
    pub l0neg: Term,
    pub levels: Vec<Term>,
    pub m: Term,
}

impl Predicates {
    /// Oracle placeholders for a depth-`d` family.
    pub fn oracles(d: u32) -> Predicates {
        Predicates {
            c: Term::oracle(C_NAME, 3),
            l0in: Term::oracle(L0IN_NAME, 2),
            l0neg: Term::oracle(L0NEG_NAME, 2),
            levels: (1..=d).map(|e| Term::oracle(&level_name(e), 2)).collect(),
            m: Term::oracle(M_NAME, 1),
        }
    }

    pub fn depth(&self) -> u32 {
        self.levels.len() as u32
    }
}

/// Σ_{i ≤ ℓ(z)} v(i, t, x) as an ODE₂* instance with k ≡ 0.
fn bcount_over(v: &Term) -> Term {
    let g = app(v, &[c0(2), p(1, 2), p(2, 2)]);
    let h = app(v, &[len(&succ(&p(1, 3))), p(2, 3), p(3, 3)]);
    ode2_star(&g, &h, &c0(2))
}

/// Eval₀ … Eval_d over `(t, x)` and the output term over `(y, x)`.
pub fn eval_hierarchy(preds: &Predicates, variant: Variant, k: u32) -> (Vec<Term>, Term) {
    let (t, x) = (p(1, 2), p(2, 2));
    let n = len(&x);
    let w = app(&bound_witness(1, k), std::slice::from_ref(&x));
    let bit = |i: Term| app(&bit_at(), &[x.clone(), i]);

    let on = and(&app(&preds.l0in, &[t.clone(), x.clone()]), &bit(t.clone()));
    let off = and(&app(&preds.l0neg, &[t.clone(), x.clone()]), &cosg(&bit(sub(&t, &n))));
    let mut levels = vec![or(&on, &off)];

    for e in 1..=preds.depth() {
        let prev = levels[e as usize - 1].clone();
        // relation over (i, t, x)
        let ci = app(&preds.c, &[p(3, 3), p(1, 3), p(2, 3)]);
        let ev = app(&prev, &[p(1, 3), p(3, 3)]);
        let gate = match variant.kind_at(e) {
            GateKind::And => bounded_forall_term(&or(&cosg(&ci), &ev)),
            GateKind::Or => bounded_exists_term(&and(&ci, &ev)),
            GateKind::Maj => {
                let all = bcount_over(&sg(&ci));
                let ones = bcount_over(&and(&ci, &ev));
                sg(&sub(&add(&ones, &ones), &all))
            }
            _ => unreachable!("inputs sit at level 0"),
        };
        let here = app(&preds.levels[e as usize - 1], &[t.clone(), x.clone()]);
        // only gates of this level scan the whole index range
        let z = app(&if_(), &[here.clone(), c0(2), w.clone()]);
        levels.push(and(&here, &app(&gate, &[z, t.clone(), x.clone()])));
    }

    // f(y, x): bit u of the accumulation reads output gate n^k − m − 1 + u
    let top = levels.last().unwrap().clone();
    let (y, x) = (p(1, 2), p(2, 2));
    let m = app(&preds.m, &[len(&x)]);
    let nk = len(&app(&bound_witness(1, k), std::slice::from_ref(&x)));
    let idx = sub(&add(&nk, &len(&y)), &add(&m, &c1(2)));
    let h = and(&sg(&len(&y)), &app(&top, &[idx, x]));
    let output = ode1(&c0(1), &h);
    (levels, output)
}

/// The evaluation term of a family with its oracle bindings.
#[derive(Clone)]
pub struct EvalProgram {
    /// f(y, x); f(2^m, x) spells the outputs, first output most significant.
    pub term: CheckedTerm,
    /// Eval₀ … Eval_d over (t, x).
    pub levels: Vec<Term>,
    pub adapter: CircuitFamilyAdapter,
}

impl fmt::Debug for EvalProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvalProgram").field("term", &self.term.term().to_string()).finish_non_exhaustive()
    }
}

impl EvalProgram {
    pub fn eval_level(&self, e: u32, t: u64, x: &Value) -> Result<Value, EvalError> {
        self.eval_level_with(e, t, x, &self.adapter.oracles())
    }

    pub fn eval_level_with(&self, e: u32, t: u64, x: &Value, oracles: &Oracles) -> Result<Value, EvalError> {
        eval_term(&self.levels[e as usize], &[Value::from(t), x.clone()], oracles)
    }

    /// f(2^m, x) with m = m(ℓ(x)).
    pub fn output(&self, x: &Value) -> Result<Value, EvalError> {
        let m = self.adapter.m(x.len());
        eval_term(self.term.term(), &[Value::pow2(m), x.clone()], &self.adapter.oracles())
    }

    /// The output as `m` bits in circuit output order.
    pub fn output_bits(&self, x: &Value) -> Result<BitVector, EvalError> {
        let m = self.adapter.m(x.len());
        let v = self.output(x)?;
        Ok(BitVector::new((0..m).map(|j| v.magnitude_bit(m - 1 - j)).collect()))
    }
}

fn build(adapter: &CircuitFamilyAdapter, variant: Variant, preset: PresetName) -> Result<EvalProgram, NonuniformError> {
    if adapter.variant != variant {
        return Err(NonuniformError::VariantMismatch {
            expected: variant,
            found: adapter.variant,
        });
    }
    let (levels, output) = eval_hierarchy(&Predicates::oracles(adapter.d), variant, adapter.k);
    let mode = ModePreset::new(preset).with_oracles(adapter.decls());
    let term = validate(&output, mode).map_err(|ds| {
        NonuniformError::Invalid(ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))
    })?;
    Ok(EvalProgram {
        term,
        levels,
        adapter: adapter.clone(),
    })
}

/// The evaluation term of an AC family, checked under ACDL with the family oracles.
pub fn build_eval_term(adapter: &CircuitFamilyAdapter) -> Result<EvalProgram, NonuniformError> {
    build(adapter, Variant::Ac, PresetName::Acdl)
}

/// The evaluation term of a TC family; majority levels count predecessors
/// with the star schema, so it is checked under TCDL-STAR.
pub fn build_eval_term_tc(adapter: &CircuitFamilyAdapter) -> Result<EvalProgram, NonuniformError> {
    build(adapter, Variant::Tc, PresetName::TcdlStar)
}

/// Picks the builder matching the adapter's variant.
pub fn build_for(adapter: &CircuitFamilyAdapter) -> Result<EvalProgram, NonuniformError> {
    match adapter.variant {
        Variant::Ac => build_eval_term(adapter),
        Variant::Tc => build_eval_term_tc(adapter),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub input: BitVector,
    pub expected: BitVector,
    pub got: BitVector,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundtripReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl RoundtripReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for RoundtripReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "checked {} inputs, {} mismatches", self.checked, self.mismatches.len())?;
        for mm in &self.mismatches {
            writeln!(f, "input {} expected {} got {}", mm.input, mm.expected, mm.got)?;
        }
        Ok(())
    }
}

/// Compares direct simulation of `c` with the evaluation term of its family.
pub fn roundtrip_check(c: &Circuit, inputs: &[BitVector]) -> Result<RoundtripReport, NonuniformError> {
    let program = build_for(&adapter_from_circuit(c)?)?;
    roundtrip_with(&program, c, inputs, false)
}

/// Runs `program` against simulation of `c`; with `stop_early` the scan ends
/// at the first mismatch.
pub fn roundtrip_with(
    program: &EvalProgram,
    c: &Circuit,
    inputs: &[BitVector],
    stop_early: bool,
) -> Result<RoundtripReport, NonuniformError> {
    let mut report = RoundtripReport::default();
    for input in inputs {
        let expected = simulate(c, input).map_err(|e| NonuniformError::InvalidCircuit(e.to_string()))?;
        let got = program.output_bits(&encode_input(input))?;
        report.checked += 1;
        if got != expected {
            report.mismatches.push(Mismatch {
                input: input.clone(),
                expected,
                got,
            });
            if stop_early {
                break;
            }
        }
    }
    Ok(report)
}

/// Direct evaluation of `c` with the edge `from → to` removed. A gate left
/// without predecessors reads as the empty conjunction, disjunction or
/// majority: 1, 0 and 0.
pub fn simulate_dropping_edge(c: &Circuit, to: GateId, from: GateId, input: &BitVector) -> BitVector {
    let n = c.n_inputs() as u64;
    let mut order: Vec<_> = c.gates().iter().collect();
    order.sort_by_key(|g| g.level);
    let mut val: FxHashMap<GateId, bool> = FxHashMap::default();
    for g in order {
        let preds = g.preds.iter().filter(|p| !(g.id == to && **p == from)).map(|p| val[p]);
        let v = match g.kind {
            GateKind::InputPos => input.get(g.id as usize),
            GateKind::InputNeg => !input.get((g.id - n) as usize),
            GateKind::And => preds.fold(true, |a, b| a && b),
            GateKind::Or => preds.fold(false, |a, b| a || b),
            GateKind::Maj => {
                let (ones, all) = preds.fold((0, 0), |(o, a), b| (o + b as usize, a + 1));
                2 * ones > all
            }
        };
        val.insert(g.id, v);
    }
    BitVector::new(c.outputs().iter().map(|o| val[o]).collect())
}

/// Edges (gate, predecessor) whose removal changes the function of `c`.
pub fn observable_edges(c: &Circuit) -> Vec<(GateId, GateId)> {
    let inputs = all_inputs(c.n_inputs());
    let base: Vec<BitVector> = inputs.iter().map(|x| simulate(c, x).expect("validated circuit")).collect();
    c.edges()
        .filter(|(to, from)| {
            inputs
                .iter()
                .zip(&base)
                .any(|(x, b)| simulate_dropping_edge(c, *to, *from, x) != *b)
        })
        .collect()
}

/// Every input of an `n`-input circuit.
pub fn all_inputs(n: usize) -> Vec<BitVector> {
    (0..1u64 << n).map(|v| BitVector::from_u64(v, n)).collect()
}

/// A uniform family stand-in: C_n outputs the low ⌊n/2⌋ bits of its input.
///
/// Level 1 buffers input bit `m − 1 − j` in an ∨-gate `2n + j`, level 2
/// buffers that in the ∧-output `n³ − m + j`. Returns the adapter and the same
/// predicates as closed terms.
pub mod low_half {
    use super::*;
    use crate::stdlib::eq;

    pub const K: u32 = 3;

    fn m_of(n: u64) -> u64 {
        (n / 2).max(1)
    }

    pub fn adapter() -> CircuitFamilyAdapter {
        let l1 = |a: u64, n: u64| (2 * n..2 * n + m_of(n)).contains(&a);
        let l2 = |a: u64, n: u64| (n.pow(K) - m_of(n)..n.pow(K)).contains(&a);
        CircuitFamilyAdapter::from_fns(
            Variant::Ac,
            K,
            2,
            m_of,
            move |x, a, b| {
                let n = x.len();
                let m = m_of(n);
                (l1(b, n) && a + b - 2 * n + 1 == m) || (l2(b, n) && a == b + 2 * n + m - n.pow(K))
            },
            |a, x| a < x.len() && x.magnitude_bit(a),
            |a, x| (x.len()..2 * x.len()).contains(&a),
            move |e, a, x| match e {
                1 => l1(a, x.len()),
                2 => l2(a, x.len()),
                _ => false,
            },
        )
    }

    /// a ∈ [lo, hi) for 0/1 use.
    fn within(a: &Term, lo: &Term, hi: &Term) -> Term {
        and(&cosg(&sub(lo, a)), &sg(&sub(hi, a)))
    }

    pub fn predicates() -> Predicates {
        // over (a, x)
        let (a, x) = (p(1, 2), p(2, 2));
        let n = len(&x);
        let m = div2(&n);
        let two_n = add(&n, &n);
        let nk = len(&app(&bound_witness(1, K), std::slice::from_ref(&x)));
        let l1 = within(&a, &two_n, &add(&two_n, &m));
        let l2 = within(&a, &sub(&nk, &m), &nk);
        let l0in = app(&bit_at(), &[x.clone(), a.clone()]);
        let l0neg = within(&a, &n, &two_n);

        // C over (x, a, b)
        let (xc, ac, bc) = (p(1, 3), p(2, 3), p(3, 3));
        let at_b = |f: &Term| app(f, &[bc.clone(), xc.clone()]);
        let nc = len(&xc);
        let mc = div2(&nc);
        let two_nc = add(&nc, &nc);
        let nkc = len(&app(&bound_witness(1, K), std::slice::from_ref(&xc)));
        let first = and(&at_b(&l1), &eq(&add(&add(&ac, &bc), &c1(3)), &add(&mc, &two_nc)));
        let second = and(&at_b(&l2), &eq(&add(&ac, &nkc), &add(&add(&bc, &two_nc), &mc)));
        Predicates {
            c: or(&first, &second),
            l0in,
            l0neg,
            levels: vec![l1, l2],
            m: div2(&p(1, 1)),
        }
    }

    /// The evaluation term with closed predicates, checked under plain ACDL.
    pub fn uniform_term() -> Result<CheckedTerm, NonuniformError> {
        let (_, output) = eval_hierarchy(&predicates(), Variant::Ac, K);
        validate(&output, ModePreset::new(PresetName::Acdl)).map_err(|ds| {
            NonuniformError::Invalid(ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))
        })
    }
}
