//! Term lowering. Every subterm instantiation is cached on its input wires,
//! and each result carries a depth claim that depends only on the term.

use rustc_hash::FxHashMap;

use super::arith::{self, Num, ADD_DEPTH, MULTI_ADD_DEPTH, TIMES_DEPTH};
use super::interval::{guard, Interval};
use super::logic::{Lit, Logic};
use super::CompileError;
use crate::algebra::{Dir, Node, Term};
use crate::circuit::Variant;
use crate::value::Value;

/// Gate budget for one compilation.
pub const MAX_NODES: usize = 40_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Val {
    pub num: Num,
    pub claim: u32,
}

// ---------------------------------------------------------------------------
// ranges shared by width inference and lowering

/// ℓ(x) range of a derivation argument.
fn lens(x: &Interval) -> (u64, u64) {
    x.len_range()
}

/// Range of the jump points α(0) … α(Lhi − 1).
pub fn jump_hull(lhi: u64) -> Interval {
    Interval::new(Value::ZERO, Value::alpha(lhi.saturating_sub(1)))
}

/// Output range of ODE₁/ODE₂(*) given ranges of g, ℓ(x) and ℓ(k).
pub fn ode12_range(g: &Interval, l: (u64, u64), s: (u64, u64), zero: Option<bool>) -> Result<Interval, CompileError> {
    let (llo, lhi) = l;
    let (slo, shi) = s;
    guard(shi.saturating_mul(lhi))?;
    let pos = if shi >= 1 {
        let lead = g.shl_range(slo.max(1) * llo, shi * lhi)?;
        let tail = Interval::new(Value::ZERO, Value::alpha(shi * lhi));
        Some(lead.add(&tail))
    } else {
        None
    };
    let zero = if slo == 0 {
        zero.map(|star| {
            if star {
                g.add(&Interval::new(Value::ZERO, Value::from(lhi)))
            } else {
                g.clone()
            }
        })
    } else {
        None
    };
    Ok(match (pos, zero) {
        (Some(p), Some(z)) => p.hull(&z),
        (Some(p), None) => p,
        (None, Some(z)) => z,
        (None, None) => unreachable!("ℓ(k) range is empty"),
    })
}

pub fn ode1_star_range(g: &Interval, lhi: u64) -> Result<Interval, CompileError> {
    Ok(g.shl_range(0, lhi)?.add(&Interval::new(Value::ZERO, Value::alpha(lhi))))
}

pub fn ode4_range(g: &Interval, l: (u64, u64), s: (u64, u64), dir: Dir) -> Result<Interval, CompileError> {
    let (elo, ehi) = (s.0 * l.0, s.1.saturating_mul(l.1));
    Ok(match dir {
        Dir::Left => g.shl_range(elo, ehi)?,
        Dir::Right => g.shr_range(elo, ehi),
    })
}

/// Symbolic range analysis; records the widest output seen per subterm.
pub struct RangePass {
    memo: FxHashMap<(usize, Vec<Interval>), Interval>,
    pub widths: FxHashMap<usize, u64>,
}

impl RangePass {
    pub fn new() -> RangePass {
        RangePass {
            memo: FxHashMap::default(),
            widths: FxHashMap::default(),
        }
    }

    pub fn range(&mut self, t: &Term, ins: &[Interval]) -> Result<Interval, CompileError> {
        let key = (t.id(), ins.to_vec());
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let r = self.compute(t, ins)?;
        guard(r.width())?;
        let w = self.widths.entry(t.id()).or_insert(0);
        *w = (*w).max(r.width());
        self.memo.insert(key, r.clone());
        Ok(r)
    }

    fn compute(&mut self, t: &Term, ins: &[Interval]) -> Result<Interval, CompileError> {
        let one = || Interval::point(Value::ONE);
        Ok(match t.node() {
            Node::Const0 { .. } => Interval::point(Value::ZERO),
            Node::Const1 { .. } => one(),
            Node::Length => ins[0].len(),
            Node::Sign => ins[0].sg(),
            Node::Add => ins[0].add(&ins[1]),
            Node::Sub => ins[0].sub(&ins[1]),
            Node::Div2 => ins[0].div2(),
            Node::Times => ins[0].mul(&ins[1]),
            Node::Proj { i, .. } => ins[i - 1].clone(),
            Node::Oracle { name, .. } => return Err(CompileError::UnboundOracle(name.to_string())),
            Node::Compose { f, args } => {
                let vals = args.iter().map(|a| self.range(a, ins)).collect::<Result<Vec<_>, _>>()?;
                self.range(f, &vals)?
            }
            _ => {
                let (x, ys) = (&ins[0], &ins[1..]);
                let l = lens(x);
                let with_x = |xi: Interval| {
                    let mut v = vec![xi];
                    v.extend_from_slice(ys);
                    v
                };
                match t.node() {
                    Node::Ode1 { g, h } => {
                        let g = self.range(g, ys)?;
                        if l.1 > 0 {
                            self.range(h, &with_x(jump_hull(l.1)))?;
                        }
                        ode12_range(&g, l, (1, 1), None)?
                    }
                    Node::Ode2 { g, h, k } | Node::Ode2Star { g, h, k } => {
                        let star = matches!(t.node(), Node::Ode2Star { .. });
                        let g = self.range(g, ys)?;
                        let s = lens(&self.range(k, ys)?);
                        if l.1 > 0 {
                            self.range(h, &with_x(jump_hull(l.1)))?;
                        }
                        ode12_range(&g, l, s, Some(star))?
                    }
                    Node::Ode3 { g } => self.range(g, ys)?.shr_range(l.0, l.1),
                    Node::Ode4 { g, k, dir } => {
                        let g = self.range(g, ys)?;
                        let s = lens(&self.range(k, ys)?);
                        ode4_range(&g, l, s, *dir)?
                    }
                    Node::Ode1Star { g, h, k } => {
                        let g = self.range(g, ys)?;
                        if l.1 > 0 {
                            self.range(h, &with_x(jump_hull(l.1)))?;
                            self.range(k, &with_x(jump_hull(l.1)))?;
                        }
                        ode1_star_range(&g, l.1)?
                    }
                    _ => unreachable!(),
                }
            }
        })
    }
}

// ---------------------------------------------------------------------------
// depth claims

/// Width-independent bound on the logical depth of an instantiation.
pub struct Claims {
    memo: FxHashMap<(usize, Vec<u32>), u32>,
}

impl Claims {
    pub fn new() -> Claims {
        Claims { memo: FxHashMap::default() }
    }

    pub fn of(&mut self, t: &Term, ins: &[u32]) -> u32 {
        let key = (t.id(), ins.to_vec());
        if let Some(c) = self.memo.get(&key) {
            return *c;
        }
        let top = || ins.iter().copied().max().unwrap_or(0);
        let c = match t.node() {
            Node::Const0 { .. } | Node::Const1 { .. } | Node::Oracle { .. } => 0,
            Node::Length | Node::Sign => top() + 2,
            Node::Add | Node::Sub => top() + ADD_DEPTH,
            Node::Div2 => top() + 4,
            Node::Times => top() + TIMES_DEPTH,
            Node::Proj { i, .. } => ins[i - 1],
            Node::Compose { f, args } => {
                let cs: Vec<u32> = args.iter().map(|a| self.of(a, ins)).collect();
                self.of(f, &cs)
            }
            _ => {
                let (cx, ys) = (ins[0], &ins[1..]);
                let at_jump = |me: &mut Claims, f: &Term| {
                    let mut v = vec![0];
                    v.extend_from_slice(ys);
                    me.of(f, &v)
                };
                let hot = cx + 1;
                match t.node() {
                    Node::Ode1 { g, h } => {
                        let (cg, cb) = (self.of(g, ys), at_jump(self, h));
                        hot.max(cg).max(cb) + 2 + ADD_DEPTH
                    }
                    Node::Ode2 { g, h, k } | Node::Ode2Star { g, h, k } => {
                        let (cg, cb, ck) = (self.of(g, ys), at_jump(self, h), self.of(k, ys));
                        let pair = hot.max(ck + 1) + 1;
                        let pos = pair.max(cg).max(cb) + 2 + ADD_DEPTH;
                        let counted = cb.max(hot) + 1 + MULTI_ADD_DEPTH;
                        let zero = counted.max(cg) + ADD_DEPTH;
                        pos.max(zero).max(ck + 1) + 2
                    }
                    Node::Ode3 { g } => hot.max(self.of(g, ys) + 1) + 6,
                    Node::Ode4 { g, k, .. } => {
                        let (cg, ck) = (self.of(g, ys), self.of(k, ys));
                        let pair = hot.max(ck + 1) + 1;
                        (pair + 1).max(cg + 1) + 6
                    }
                    Node::Ode1Star { g, h, k } => {
                        let (cg, cb, ck) = (self.of(g, ys), at_jump(self, h), at_jump(self, k));
                        let kd = ck.max(hot) + 1;
                        let bd = cb.max(hot) + 1;
                        let rows = (kd + 2).max(bd) + 1 + MULTI_ADD_DEPTH;
                        let lead = (kd + 2).max(cg) + 2;
                        rows.max(lead) + ADD_DEPTH
                    }
                    _ => unreachable!(),
                }
            }
        };
        self.memo.insert(key, c);
        c
    }
}

// ---------------------------------------------------------------------------
// lowering

/// The operands of sg(a − b), if `f ∘ args` has that shape.
fn sign_of_difference<'t>(f: &Term, args: &'t [Term]) -> Option<(&'t Term, &'t Term)> {
    if !matches!(f.node(), Node::Sign) {
        return None;
    }
    match args[0].node() {
        Node::Compose { f, args } if matches!(f.node(), Node::Sub) => Some((&args[0], &args[1])),
        _ => None,
    }
}

pub struct Lowerer<'p> {
    pub logic: Logic,
    variant: Variant,
    claims: Claims,
    cache: FxHashMap<(usize, Vec<Val>), Val>,
    plan: &'p FxHashMap<usize, u64>,
}

fn alpha_val(u: u64) -> Val {
    Val {
        num: Num::constant(&Value::alpha(u)),
        claim: 0,
    }
}

impl<'p> Lowerer<'p> {
    pub fn new(logic: Logic, variant: Variant, plan: &'p FxHashMap<usize, u64>) -> Lowerer<'p> {
        Lowerer {
            logic,
            variant,
            claims: Claims::new(),
            cache: FxHashMap::default(),
            plan,
        }
    }

    fn need_tc(&self, what: &'static str) -> Result<(), CompileError> {
        match self.variant {
            Variant::Tc => Ok(()),
            Variant::Ac => Err(CompileError::TcOnly(what)),
        }
    }

    pub fn lower(&mut self, t: &Term, ins: &[Val]) -> Result<Val, CompileError> {
        let key = (t.id(), ins.to_vec());
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let in_claims: Vec<u32> = ins.iter().map(|v| v.claim).collect();
        let claim = self.claims.of(t, &in_claims);
        let num = self.compute(t, ins)?;
        if let Some(w) = self.plan.get(&t.id()) {
            if num.width() as u64 > *w {
                return Err(CompileError::PlanTooNarrow {
                    term: t.to_string(),
                    planned: *w,
                    needed: num.width() as u64,
                });
            }
        }
        if self.logic.size() > MAX_NODES {
            return Err(CompileError::TooLarge { nodes: self.logic.size() });
        }
        debug_assert!(
            num.depth(&self.logic) <= claim,
            "depth {} exceeds claim {claim} for {t}",
            num.depth(&self.logic)
        );
        let v = Val { num, claim };
        self.cache.insert(key, v.clone());
        Ok(v)
    }

    fn compute(&mut self, t: &Term, ins: &[Val]) -> Result<Num, CompileError> {
        let l = &mut self.logic;
        let n = |i: usize| &ins[i].num;
        Ok(match t.node() {
            Node::Const0 { .. } => Num::constant(&Value::ZERO),
            Node::Const1 { .. } => Num::constant(&Value::ONE),
            Node::Length => arith::length(l, n(0), n(0).range.len()),
            Node::Sign => arith::sign(l, n(0), n(0).range.sg()),
            Node::Add => arith::add(l, n(0), n(1), n(0).range.add(&n(1).range)),
            Node::Sub => arith::sub(l, n(0), n(1), n(0).range.sub(&n(1).range)),
            Node::Div2 => arith::div2(l, n(0), n(0).range.div2()),
            Node::Times => {
                self.need_tc("multiplication")?;
                let r = n(0).range.mul(&n(1).range);
                guard(r.width())?;
                arith::times(&mut self.logic, n(0), n(1), r)
            }
            Node::Proj { i, .. } => ins[i - 1].num.clone(),
            Node::Oracle { name, .. } => return Err(CompileError::UnboundOracle(name.to_string())),
            Node::Compose { f, args } => {
                if let Some((a, b)) = sign_of_difference(f, args) {
                    // sg(a − b) = [a > b] needs a comparator, not the difference
                    let (a, b) = (self.lower(a, ins)?.num, self.lower(b, ins)?.num);
                    let range = a.range.sub(&b.range).sg();
                    let gt = arith::greater(&mut self.logic, &a, &b);
                    return Ok(Num::from_parts(vec![gt], Lit::FALSE, range));
                }
                if matches!(f.node(), Node::Sign) {
                    if let Node::Ode1 { g, h } = args[0].node() {
                        return self.sign_of_ode1(g, h, ins);
                    }
                }
                let vals = args.iter().map(|a| self.lower(a, ins)).collect::<Result<Vec<_>, _>>()?;
                self.lower(f, &vals)?.num
            }
            Node::Ode1 { g, h } => self.ode12(g, h, None, false, ins)?,
            Node::Ode2 { g, h, k } => self.ode12(g, h, Some(k), false, ins)?,
            Node::Ode2Star { g, h, k } => self.ode12(g, h, Some(k), true, ins)?,
            Node::Ode3 { g } => {
                let one = Num::constant(&Value::ONE);
                self.ode4(g, None, Dir::Right, ins, one)?
            }
            Node::Ode4 { g, k, dir } => {
                let kv = self.lower(k, &ins[1..])?.num;
                self.ode4(g, Some(k), *dir, ins, kv)?
            }
            Node::Ode1Star { g, h, k } => self.ode1_star(g, h, k, ins)?,
        })
    }

    /// Bit 0 of f(α(u), ȳ) for u < count.
    fn jump_bits(&mut self, f: &Term, ins: &[Val], count: u64) -> Result<Vec<Lit>, CompileError> {
        (0..count)
            .map(|u| {
                let mut a = vec![alpha_val(u)];
                a.extend_from_slice(&ins[1..]);
                Ok(self.lower(f, &a)?.num.bit(0))
            })
            .collect()
    }

    /// (ℓ, [ℓ(x) = ℓ]) over the feasible range.
    fn hot(&mut self, x: &Num) -> Vec<(u64, Lit)> {
        let (lo, hi) = x.range.len_range();
        let hot = arith::length_hot(&mut self.logic, x);
        (lo..=hi).map(|i| (i, hot[i as usize])).collect()
    }

    /// [u < ℓ(x)] = [|x| ≥ 2^u].
    fn below_len(&mut self, x: &Num, u: u64) -> Lit {
        let bits: Vec<Lit> = x.mag.iter().skip(u as usize).copied().collect();
        self.logic.or(bits)
    }

    /// sg of an ODE₁ solution, which is positive iff g > 0, or g = 0 and
    /// some jump below ℓ(x) is odd; the solution itself is never built.
    fn sign_of_ode1(&mut self, g: &Term, h: &Term, ins: &[Val]) -> Result<Num, CompileError> {
        let x = ins[0].num.clone();
        let gv = self.lower(g, &ins[1..])?.num;
        let (llo, lhi) = x.range.len_range();
        let range = ode12_range(&gv.range, (llo, lhi), (1, 1), None)?.sg();
        let bs = self.jump_bits(h, ins, lhi)?;
        let mut any = Vec::with_capacity(bs.len());
        for (u, b) in bs.into_iter().enumerate() {
            let lt = self.below_len(&x, u as u64);
            any.push(self.logic.and([b, lt]));
        }
        let any = self.logic.or(any);
        let gz = !arith::nonzero(&mut self.logic, &gv);
        let gpos = self.logic.and([!gz, !gv.sign]);
        let tail = self.logic.and([gz, any]);
        let s = self.logic.or([gpos, tail]);
        Ok(Num::from_parts(vec![s], Lit::FALSE, range))
    }

    fn ode12(&mut self, g: &Term, h: &Term, k: Option<&Term>, star: bool, ins: &[Val]) -> Result<Num, CompileError> {
        let x = ins[0].num.clone();
        let gv = self.lower(g, &ins[1..])?.num;
        let es = self.hot(&x);
        let (llo, lhi) = x.range.len_range();
        let (ss, srange) = match k {
            Some(k) => {
                let kv = self.lower(k, &ins[1..])?.num;
                let r = kv.range.len_range();
                (self.hot(&kv), r)
            }
            None => (vec![(1, Lit::TRUE)], (1, 1)),
        };
        let range = ode12_range(&gv.range, (llo, lhi), srange, k.map(|_| star))?;
        let bs = self.jump_bits(h, ins, lhi)?;

        let pos = if srange.1 >= 1 {
            let shi = srange.1;
            let span = (gv.width() as u64 + shi * lhi) as usize + 1;
            let mut lead: Vec<Vec<Lit>> = vec![Vec::new(); span];
            let mut tail: Vec<Vec<Lit>> = vec![Vec::new(); span];
            for (s, sl) in ss.iter().filter(|(s, _)| *s >= 1) {
                for (len, el) in &es {
                    let p = self.logic.and([*sl, *el]);
                    if p == Lit::FALSE {
                        continue;
                    }
                    let shift = (s * len) as usize;
                    for (i, gb) in gv.mag.iter().enumerate() {
                        let c = self.logic.and([p, *gb]);
                        lead[i + shift].push(c);
                    }
                    for u in 0..*len {
                        let c = self.logic.and([p, bs[u as usize]]);
                        tail[(s * (len - u - 1)) as usize].push(c);
                    }
                }
            }
            let pos_range = ode12_range(&gv.range, (llo, lhi), (srange.0.max(1), shi), None)?;
            if gv.range.nonneg() {
                let mag = lead
                    .into_iter()
                    .zip(tail)
                    .map(|(mut a, b)| {
                        a.extend(b);
                        self.logic.or(a)
                    })
                    .collect();
                Some(Num::from_parts(mag, Lit::FALSE, pos_range))
            } else {
                let lead_mag: Vec<Lit> = lead.into_iter().map(|a| self.logic.or(a)).collect();
                let tail_mag: Vec<Lit> = tail.into_iter().map(|a| self.logic.or(a)).collect();
                let lead_range = gv.range.shl_range(srange.0.max(1) * llo, shi * lhi)?;
                let a = Num::from_parts(lead_mag, gv.sign, lead_range);
                let b = Num::from_parts(tail_mag, Lit::FALSE, Interval::new(Value::ZERO, Value::alpha(shi * lhi)));
                Some(arith::add(&mut self.logic, &a, &b, pos_range))
            }
        } else {
            None
        };

        let zero = if k.is_some() && srange.0 == 0 {
            if star {
                self.need_tc("a star schema with k = 0")?;
                let rows: Vec<Vec<Lit>> = (0..lhi)
                    .map(|u| {
                        let lt = self.below_len(&x, u);
                        vec![self.logic.and([bs[u as usize], lt])]
                    })
                    .collect();
                let cr = Interval::new(Value::ZERO, Value::from(lhi));
                let cnt = arith::multi_add(&mut self.logic, &rows, cr.width() as usize);
                let cnt = Num::from_parts(cnt, Lit::FALSE, cr.clone());
                Some(arith::add(&mut self.logic, &gv, &cnt, gv.range.add(&cr)))
            } else {
                Some(gv.clone())
            }
        } else {
            None
        };

        Ok(match (pos, zero) {
            (Some(p), Some(z)) => {
                let s0 = ss[0].1;
                debug_assert_eq!(ss[0].0, 0);
                mux_num(&mut self.logic, s0, &z, &p, range)
            }
            (Some(p), None) => p,
            (None, Some(z)) => z,
            (None, None) => unreachable!(),
        })
    }

    /// Shift of g by ℓ(k)·ℓ(x) places; ODE₃ is the right shift with k = 1.
    fn ode4(&mut self, g: &Term, _k: Option<&Term>, dir: Dir, ins: &[Val], kv: Num) -> Result<Num, CompileError> {
        let x = ins[0].num.clone();
        let gv = self.lower(g, &ins[1..])?.num;
        let es = self.hot(&x);
        let ss = self.hot(&kv);
        let l = x.range.len_range();
        let s = kv.range.len_range();
        let range = ode4_range(&gv.range, l, s, dir)?;
        // one-hot shift amounts
        let mut amounts: std::collections::BTreeMap<u64, Vec<Lit>> = Default::default();
        for (sv, sl) in &ss {
            for (lv, el) in &es {
                let p = self.logic.and([*sl, *el]);
                amounts.entry(sv * lv).or_default().push(p);
            }
        }
        let amounts: Vec<(u64, Lit)> = amounts.into_iter().map(|(a, ps)| (a, self.logic.or(ps))).collect();
        let gw = gv.width();
        match dir {
            Dir::Left => {
                let span = gw + amounts.last().map(|a| a.0 as usize).unwrap_or(0);
                let mut cols: Vec<Vec<Lit>> = vec![Vec::new(); span];
                for (a, al) in &amounts {
                    for (i, gb) in gv.mag.iter().enumerate() {
                        let c = self.logic.and([*al, *gb]);
                        cols[i + *a as usize].push(c);
                    }
                }
                let mag = cols.into_iter().map(|c| self.logic.or(c)).collect();
                Ok(Num::from_parts(mag, gv.sign, range))
            }
            Dir::Right => {
                let mut cols: Vec<Vec<Lit>> = vec![Vec::new(); gw];
                for (a, al) in &amounts {
                    for j in 0..gw.saturating_sub(*a as usize) {
                        let c = self.logic.and([*al, gv.mag[j + *a as usize]]);
                        cols[j].push(c);
                    }
                }
                let q: Vec<Lit> = cols.into_iter().map(|c| self.logic.or(c)).collect();
                if gv.range.nonneg() {
                    return Ok(Num::from_parts(q, Lit::FALSE, range));
                }
                let mut rest = Vec::new();
                for (a, al) in &amounts {
                    let low: Vec<Lit> = gv.mag.iter().take(*a as usize).copied().collect();
                    let any = self.logic.or(low);
                    rest.push(self.logic.and([*al, any]));
                }
                let r = self.logic.or(rest);
                let inc = self.logic.and([gv.sign, r]);
                let mag = arith::increment(&mut self.logic, &q, inc);
                Ok(Num::from_parts(mag, gv.sign, range))
            }
        }
    }

    fn ode1_star(&mut self, g: &Term, h: &Term, k: &Term, ins: &[Val]) -> Result<Num, CompileError> {
        self.need_tc("the ODE1* schema")?;
        let x = ins[0].num.clone();
        let gv = self.lower(g, &ins[1..])?.num;
        let lhi = x.range.len_range().1;
        let range = ode1_star_range(&gv.range, lhi)?;
        let hb = self.jump_bits(h, ins, lhi)?;
        let kb = self.jump_bits(k, ins, lhi)?;
        let lt: Vec<Lit> = (0..lhi).map(|u| self.below_len(&x, u)).collect();
        let kp: Vec<Lit> = (0..lhi as usize).map(|t| self.logic.and([kb[t], lt[t]])).collect();
        let bp: Vec<Lit> = (0..lhi as usize).map(|u| self.logic.and([hb[u], lt[u]])).collect();
        let exactly = |l: &mut Logic, p: usize, of: &[Lit]| {
            let a = l.th(p, of.iter().copied());
            let b = l.th(p + 1, of.iter().copied());
            l.and([a, !b])
        };
        let mut rows = Vec::new();
        for u in 0..lhi as usize {
            let suffix = &kp[u + 1..];
            let row: Vec<Lit> = (0..=suffix.len())
                .map(|p| {
                    let e = exactly(&mut self.logic, p, suffix);
                    self.logic.and([bp[u], e])
                })
                .collect();
            rows.push(row);
        }
        let sr = Interval::new(Value::ZERO, Value::alpha(lhi));
        let sum = arith::multi_add(&mut self.logic, &rows, sr.width() as usize);
        let sum = Num::from_parts(sum, Lit::FALSE, sr);
        let span = gv.width() + lhi as usize + 1;
        let mut cols: Vec<Vec<Lit>> = vec![Vec::new(); span];
        for kappa in 0..=lhi as usize {
            let hk = exactly(&mut self.logic, kappa, &kp);
            for (i, gb) in gv.mag.iter().enumerate() {
                let c = self.logic.and([hk, *gb]);
                cols[i + kappa].push(c);
            }
        }
        let lead_mag = cols.into_iter().map(|c| self.logic.or(c)).collect();
        let lead = Num::from_parts(lead_mag, gv.sign, gv.range.shl_range(0, lhi)?);
        Ok(arith::add(&mut self.logic, &lead, &sum, range))
    }
}

fn mux_num(l: &mut Logic, s: Lit, a: &Num, b: &Num, range: Interval) -> Num {
    let mag = arith::mux_vec(l, s, &a.mag, &b.mag);
    let sign = l.mux(s, a.sign, b.sign);
    Num::from_parts(mag, sign, range)
}
