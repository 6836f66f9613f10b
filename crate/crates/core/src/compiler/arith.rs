//! Sign-magnitude numbers over a [`Logic`] DAG and constant-depth blocks on them.
//!
//! Each block documents the logical depth it adds on top of its inputs; the
//! lowering pass relies on these bounds being independent of widths.

use super::interval::Interval;
use super::logic::{Lit, Logic};
use crate::value::Value;

/// A bundle of wires carrying an integer in sign-magnitude form.
///
/// `mag` has exactly `range.width()` bits, least significant first. The sign
/// is never set on zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Num {
    pub mag: Vec<Lit>,
    pub sign: Lit,
    pub range: Interval,
}

impl Num {
    pub fn constant(v: &Value) -> Num {
        let w = v.len();
        Num {
            mag: (0..w).map(|i| Lit::constant(v.magnitude_bit(i))).collect(),
            sign: Lit::constant(v.is_negative()),
            range: Interval::point(v.clone()),
        }
    }

    /// Wraps raw wires, folding to a constant when the range is a point.
    pub fn from_parts(mut mag: Vec<Lit>, sign: Lit, range: Interval) -> Num {
        if let Some(v) = range.as_point() {
            return Num::constant(v);
        }
        let w = range.width() as usize;
        mag.resize(w, Lit::FALSE);
        let sign = if range.nonneg() {
            Lit::FALSE
        } else if range.hi.is_negative() {
            Lit::TRUE
        } else {
            sign
        };
        Num { mag, sign, range }
    }

    pub fn width(&self) -> usize {
        self.mag.len()
    }

    pub fn bit(&self, i: usize) -> Lit {
        self.mag.get(i).copied().unwrap_or(Lit::FALSE)
    }

    pub fn depth(&self, l: &Logic) -> u32 {
        self.mag.iter().chain([&self.sign]).map(|b| l.depth(*b)).max().unwrap_or(0)
    }
}

fn pad(v: &[Lit], w: usize) -> Vec<Lit> {
    let mut v = v.to_vec();
    v.resize(w, Lit::FALSE);
    v
}

/// a + b + cin over unsigned vectors; w + 1 output bits. Depth +5.
pub fn add_unsigned(l: &mut Logic, a: &[Lit], b: &[Lit], cin: Lit) -> Vec<Lit> {
    let w = a.len().max(b.len());
    let (a, b) = (pad(a, w), pad(b, w));
    let g: Vec<Lit> = (0..w).map(|i| l.and([a[i], b[i]])).collect();
    let p: Vec<Lit> = (0..w).map(|i| l.or([a[i], b[i]])).collect();
    let carries = carries(l, &g, &p, cin);
    let mut out = Vec::with_capacity(w + 1);
    for i in 0..w {
        let x = l.xor(a[i], b[i]);
        out.push(l.xor(x, carries[i]));
    }
    out.push(carries[w]);
    out
}

/// Lookahead carries c_0 … c_w from generate/propagate signals. Depth +2 over g, p.
fn carries(l: &mut Logic, g: &[Lit], p: &[Lit], cin: Lit) -> Vec<Lit> {
    let w = g.len();
    let mut out = Vec::with_capacity(w + 1);
    out.push(cin);
    for i in 1..=w {
        let mut terms = Vec::with_capacity(i + 1);
        for j in 0..i {
            let t = l.and(std::iter::once(g[j]).chain(p[j + 1..i].iter().copied()));
            terms.push(t);
        }
        let t = l.and(std::iter::once(cin).chain(p[..i].iter().copied()));
        terms.push(t);
        out.push(l.or(terms));
    }
    out
}

/// [a ≥ b] for unsigned vectors: the top carry of a + ¬b + 1 alone. Depth +3.
pub fn ge_unsigned(l: &mut Logic, a: &[Lit], b: &[Lit]) -> Lit {
    let w = a.len().max(b.len());
    let (a, b) = (pad(a, w), pad(b, w));
    let g: Vec<Lit> = (0..w).map(|i| l.and([a[i], !b[i]])).collect();
    let p: Vec<Lit> = (0..w).map(|i| l.or([a[i], !b[i]])).collect();
    let mut terms: Vec<Lit> = (0..w)
        .map(|j| l.and(std::iter::once(g[j]).chain(p[j + 1..].iter().copied())))
        .collect();
    terms.push(l.and(p.iter().copied()));
    l.or(terms)
}

/// [a > b] without forming a − b. Depth +5.
pub fn greater(l: &mut Logic, a: &Num, b: &Num) -> Lit {
    let above = !ge_unsigned(l, &b.mag, &a.mag);
    if a.range.nonneg() && b.range.nonneg() {
        return above;
    }
    let below = !ge_unsigned(l, &a.mag, &b.mag);
    let (za, zb) = (!nonzero(l, a), !nonzero(l, b));
    let a_pos = l.or([!a.sign, za]);
    let b_pos = l.or([!b.sign, zb]);
    let t1 = l.and([a_pos, !b_pos]);
    let t2 = l.and([a_pos, b_pos, above]);
    let t3 = l.and([!a_pos, !b_pos, below]);
    l.or([t1, t2, t3])
}

/// a − b mod 2^w. Depth +5.
pub fn sub_wrapping(l: &mut Logic, a: &[Lit], b: &[Lit]) -> Vec<Lit> {
    let w = a.len().max(b.len());
    let nb: Vec<Lit> = pad(b, w).into_iter().map(|x| !x).collect();
    let mut out = add_unsigned(l, &pad(a, w), &nb, Lit::TRUE);
    out.truncate(w);
    out
}

/// [a = b]. Depth +3.
pub fn eq_unsigned(l: &mut Logic, a: &[Lit], b: &[Lit]) -> Lit {
    let w = a.len().max(b.len());
    let (a, b) = (pad(a, w), pad(b, w));
    let xs: Vec<Lit> = (0..w).map(|i| l.xor(a[i], b[i])).collect();
    !l.or(xs)
}

pub fn mux_vec(l: &mut Logic, s: Lit, a: &[Lit], b: &[Lit]) -> Vec<Lit> {
    let w = a.len().max(b.len());
    let (a, b) = (pad(a, w), pad(b, w));
    (0..w).map(|i| l.mux(s, a[i], b[i])).collect()
}

pub const ADD_DEPTH: u32 = 7;

/// Sign-magnitude addition; tolerates a set sign on a zero input. Depth +7.
pub fn add(l: &mut Logic, a: &Num, b: &Num, range: Interval) -> Num {
    add_signed(l, (&a.mag, a.sign), (&b.mag, b.sign), range)
}

/// a − b. Depth +7.
pub fn sub(l: &mut Logic, a: &Num, b: &Num, range: Interval) -> Num {
    add_signed(l, (&a.mag, a.sign), (&b.mag, !b.sign), range)
}

fn add_signed(l: &mut Logic, (ma, sa): (&[Lit], Lit), (mb, sb): (&[Lit], Lit), range: Interval) -> Num {
    if range.as_point().is_some() {
        return Num::from_parts(vec![], Lit::FALSE, range);
    }
    let w = ma.len().max(mb.len());
    let (ma, mb) = (pad(ma, w), pad(mb, w));
    match (sa.is_const(), sb.is_const(), sa == sb) {
        (true, true, true) => {
            let mag = add_unsigned(l, &ma, &mb, Lit::FALSE);
            let sign = if sa == Lit::TRUE {
                l.or(ma.iter().chain(mb.iter()).copied())
            } else {
                Lit::FALSE
            };
            Num::from_parts(mag, sign, range)
        }
        (true, true, false) => {
            // one operand counts positively, the other negatively
            let (p, n) = if sa == Lit::FALSE { (&ma, &mb) } else { (&mb, &ma) };
            let ge = ge_unsigned(l, p, n);
            let mag = if range.nonneg() {
                sub_wrapping(l, p, n)
            } else if range.nonpos() {
                sub_wrapping(l, n, p)
            } else {
                let d1 = sub_wrapping(l, p, n);
                let d2 = sub_wrapping(l, n, p);
                mux_vec(l, ge, &d1, &d2)
            };
            Num::from_parts(mag, !ge, range)
        }
        _ => {
            let same = !l.xor(sa, sb);
            let ge = ge_unsigned(l, &ma, &mb);
            let s = add_unsigned(l, &ma, &mb, Lit::FALSE);
            let d1 = sub_wrapping(l, &ma, &mb);
            let d2 = sub_wrapping(l, &mb, &ma);
            let mut mag = Vec::with_capacity(w + 1);
            for i in 0..=w {
                let t1 = l.and([same, s[i]]);
                let (a1, a2) = if i < w { (d1[i], d2[i]) } else { (Lit::FALSE, Lit::FALSE) };
                let t2 = l.and([!same, ge, a1]);
                let t3 = l.and([!same, !ge, a2]);
                mag.push(l.or([t1, t2, t3]));
            }
            // a negative zero on both sides must not leak a sign
            let any = l.or(ma.iter().chain(mb.iter()).copied());
            let r1 = l.and([same, sa, any]);
            let r2 = l.and([!same, ge, sa]);
            let r3 = l.and([!same, !ge, sb]);
            let raw = l.or([r1, r2, r3]);
            let eq = eq_unsigned(l, &ma, &mb);
            let cancel = l.and([!same, eq]);
            let sign = l.and([raw, !cancel]);
            Num::from_parts(mag, sign, range)
        }
    }
}

/// ⌊a / 2⌋. Depth +4.
pub fn div2(l: &mut Logic, a: &Num, range: Interval) -> Num {
    let q: Vec<Lit> = a.mag.iter().skip(1).copied().collect();
    if a.range.nonneg() {
        return Num::from_parts(q, Lit::FALSE, range);
    }
    let inc = l.and([a.sign, a.bit(0)]);
    let mag = increment(l, &q, inc);
    Num::from_parts(mag, a.sign, range)
}

/// q + inc for a single bit inc. Depth +3 over max(q, inc).
pub fn increment(l: &mut Logic, q: &[Lit], inc: Lit) -> Vec<Lit> {
    let mut out = Vec::with_capacity(q.len() + 1);
    for i in 0..=q.len() {
        let c = l.and(std::iter::once(inc).chain(q[..i].iter().copied()));
        out.push(if i < q.len() { l.xor(q[i], c) } else { c });
    }
    out
}

/// hot[i] = [ℓ(|a|) = i] for i in 0..=width. Depth +1.
pub fn length_hot(l: &mut Logic, a: &Num) -> Vec<Lit> {
    let w = a.width();
    (0..=w)
        .map(|i| {
            let above = a.mag[i.min(w)..].iter().map(|b| !*b);
            if i == 0 {
                l.and(above)
            } else {
                l.and(std::iter::once(a.mag[i - 1]).chain(above))
            }
        })
        .collect()
}

/// ℓ(a) in binary. Depth +2.
pub fn length(l: &mut Logic, a: &Num, range: Interval) -> Num {
    let hot = length_hot(l, a);
    let w = range.width() as usize;
    let mag = (0..w)
        .map(|b| {
            let terms: Vec<Lit> = (1..hot.len()).filter(|i| i >> b & 1 == 1).map(|i| hot[i]).collect();
            l.or(terms)
        })
        .collect();
    Num::from_parts(mag, Lit::FALSE, range)
}

/// [a ≠ 0]. Depth +1.
pub fn nonzero(l: &mut Logic, a: &Num) -> Lit {
    l.or(a.mag.iter().copied())
}

/// sg(a). Depth +2.
pub fn sign(l: &mut Logic, a: &Num, range: Interval) -> Num {
    let nz = nonzero(l, a);
    let s = l.and([nz, !a.sign]);
    Num::from_parts(vec![s], Lit::FALSE, range)
}

pub const MULTI_ADD_DEPTH: u32 = 11;

/// Sum of nonnegative rows with threshold gates. Depth +11.
pub fn multi_add(l: &mut Logic, rows: &[Vec<Lit>], width: usize) -> Vec<Lit> {
    let rows: Vec<&Vec<Lit>> = rows.iter().filter(|r| r.iter().any(|b| *b != Lit::FALSE)).collect();
    match rows.len() {
        0 => return vec![Lit::FALSE; width],
        1 => return pad(rows[0], width),
        2 => {
            let mut s = add_unsigned(l, rows[0], rows[1], Lit::FALSE);
            s.resize(width, Lit::FALSE);
            return s;
        }
        _ => {}
    }
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    // round 1: binary column counts, one row per count bit
    let mut counted: Vec<Vec<Lit>> = Vec::new();
    for c in 0..cols {
        let col: Vec<Lit> = rows.iter().filter_map(|r| r.get(c).copied()).filter(|b| *b != Lit::FALSE).collect();
        for (b, bit) in count_bits(l, &col).into_iter().enumerate() {
            if counted.len() <= b {
                counted.push(Vec::new());
            }
            let row = &mut counted[b];
            row.resize(c + b + 1, Lit::FALSE);
            row[c + b] = bit;
        }
    }
    // round 2: block sums over β-bit blocks; even and odd blocks do not overlap
    let r = counted.len();
    let beta = (usize::BITS - (r.max(2) - 1).leading_zeros()) as usize;
    let span = counted.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut even = vec![Lit::FALSE; span + 2 * beta];
    let mut odd = vec![Lit::FALSE; span + 2 * beta];
    for (bi, start) in (0..span).step_by(beta).enumerate() {
        let mut weighted = Vec::new();
        for row in &counted {
            for t in 0..beta {
                if let Some(bit) = row.get(start + t) {
                    if *bit != Lit::FALSE {
                        weighted.extend(std::iter::repeat_n(*bit, 1 << t));
                    }
                }
            }
        }
        let sum = count_bits(l, &weighted);
        let target = if bi % 2 == 0 { &mut even } else { &mut odd };
        for (t, bit) in sum.into_iter().enumerate() {
            target[start + t] = bit;
        }
    }
    let mut s = add_unsigned(l, &even, &odd, Lit::FALSE);
    s.resize(width, Lit::FALSE);
    s
}

/// Binary count of true literals (with multiplicity). Depth +3.
pub fn count_bits(l: &mut Logic, lits: &[Lit]) -> Vec<Lit> {
    let n = lits.len();
    if n <= 1 {
        return lits.to_vec();
    }
    let at_least: Vec<Lit> = (0..=n + 1).map(|j| l.th(j, lits.iter().copied())).collect();
    let w = (usize::BITS - n.leading_zeros()) as usize;
    (0..w)
        .map(|b| {
            let terms: Vec<Lit> = (1..=n)
                .filter(|j| j >> b & 1 == 1)
                .map(|j| l.and([at_least[j], !at_least[j + 1]]))
                .collect();
            l.or(terms)
        })
        .collect()
}

pub const TIMES_DEPTH: u32 = 1 + MULTI_ADD_DEPTH;

/// Product via partial products and [`multi_add`]. Depth +12.
pub fn times(l: &mut Logic, a: &Num, b: &Num, range: Interval) -> Num {
    let rows: Vec<Vec<Lit>> = b
        .mag
        .iter()
        .enumerate()
        .map(|(j, bj)| {
            let mut row = vec![Lit::FALSE; j];
            row.extend(a.mag.iter().map(|ai| l.and([*ai, *bj])));
            row
        })
        .collect();
    let w = range.width() as usize;
    let mag = multi_add(l, &rows, w);
    let s = l.xor(a.sign, b.sign);
    let na = nonzero(l, a);
    let nb = nonzero(l, b);
    let sign = l.and([s, na, nb]);
    Num::from_parts(mag, sign, range)
}
