//! A hash-consed AND/OR/threshold DAG with free negation, and its
//! normalization into a layered circuit.

use rustc_hash::FxHashMap;

use crate::circuit::{min_exponent, Circuit, Gate, GateId, GateKind, Variant};

/// A possibly negated reference to a DAG node. Node 0 is the constant false.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub const FALSE: Lit = Lit(0);
    pub const TRUE: Lit = Lit(1);

    fn new(node: u32, neg: bool) -> Lit {
        Lit(node << 1 | neg as u32)
    }

    pub fn node(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn is_const(self) -> bool {
        self.node() == 0
    }

    pub fn constant(b: bool) -> Lit {
        if b {
            Lit::TRUE
        } else {
            Lit::FALSE
        }
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Const,
    Input(u32),
    Or(Box<[Lit]>),
    /// At least θ of the (multiset of) literals are true.
    Th(u32, Box<[Lit]>),
}

#[derive(Default)]
pub struct Logic {
    nodes: Vec<Node>,
    depth: Vec<u32>,
    dedup: FxHashMap<Node, u32>,
}

impl Logic {
    pub fn new(n_inputs: usize) -> Logic {
        let mut l = Logic::default();
        l.push(Node::Const, 0);
        for i in 0..n_inputs {
            l.push(Node::Input(i as u32), 0);
        }
        l
    }

    fn push(&mut self, node: Node, depth: u32) -> u32 {
        let id = self.nodes.len() as u32;
        self.dedup.insert(node.clone(), id);
        self.nodes.push(node);
        self.depth.push(depth);
        id
    }

    fn intern(&mut self, node: Node, preds: &[Lit]) -> Lit {
        if let Some(id) = self.dedup.get(&node) {
            return Lit::new(*id, false);
        }
        let d = 1 + preds.iter().map(|p| self.depth[p.node() as usize]).max().unwrap_or(0);
        Lit::new(self.push(node, d), false)
    }

    pub fn input(&self, i: usize) -> Lit {
        Lit::new(i as u32 + 1, false)
    }

    pub fn depth(&self, l: Lit) -> u32 {
        self.depth[l.node() as usize]
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn and(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        !self.or(lits.into_iter().map(|l| !l))
    }

    pub fn or(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let mut v: Vec<Lit> = Vec::new();
        for l in lits {
            if l == Lit::TRUE {
                return Lit::TRUE;
            }
            if l != Lit::FALSE {
                v.push(l);
            }
        }
        v.sort_unstable();
        v.dedup();
        if v.windows(2).any(|w| w[0] == !w[1]) {
            return Lit::TRUE;
        }
        match v.len() {
            0 => Lit::FALSE,
            1 => v[0],
            _ => {
                let preds = v.clone();
                self.intern(Node::Or(v.into()), &preds)
            }
        }
    }

    /// [at least θ of `lits`]; repeated literals count with multiplicity.
    pub fn th(&mut self, theta: usize, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let mut theta = theta as i64;
        let mut v: Vec<Lit> = Vec::new();
        for l in lits {
            if l == Lit::TRUE {
                theta -= 1;
            } else if l != Lit::FALSE {
                v.push(l);
            }
        }
        if theta <= 0 {
            return Lit::TRUE;
        }
        if theta as usize > v.len() {
            return Lit::FALSE;
        }
        if theta == 1 {
            return self.or(v);
        }
        let mut distinct = v.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if theta as usize == v.len() || distinct.len() == 1 {
            // every copy must hold, or a single repeated literal
            return self.and(distinct);
        }
        v.sort_unstable();
        let preds = v.clone();
        self.intern(Node::Th(theta as u32, v.into()), &preds)
    }

    pub fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        let x = self.and([a, !b]);
        let y = self.and([!a, b]);
        self.or([x, y])
    }

    /// s ? a : b
    pub fn mux(&mut self, s: Lit, a: Lit, b: Lit) -> Lit {
        let x = self.and([s, a]);
        let y = self.and([!s, b]);
        self.or([x, y])
    }

    pub fn has_threshold(&self) -> bool {
        self.nodes.iter().any(|n| matches!(n, Node::Th(..)))
    }

    /// Lays the DAG out as a normal-form circuit of depth `depth` whose
    /// outputs, in order, carry `outputs`.
    pub fn normalize(&self, variant: Variant, n_inputs: usize, depth: u32, outputs: &[Lit]) -> Circuit {
        assert!(n_inputs >= 2, "normal form needs two inputs for constant gadgets");
        Layout::new(self, variant, n_inputs, depth).build(outputs)
    }
}

/// A node under a polarity, after pushing negations to the inputs.
type Phys = (u32, bool);

struct Layout<'a> {
    logic: &'a Logic,
    variant: Variant,
    n: usize,
    depth: u32,
    level: FxHashMap<Phys, u32>,
    /// (literal, level, copy) → gate id
    placed: FxHashMap<(Lit, u32, u32), GateId>,
    gates: Vec<Gate>,
    next: GateId,
}

enum Shape {
    Input(bool, u32),
    Gate(GateKind, Vec<Lit>),
}

impl<'a> Layout<'a> {
    fn new(logic: &'a Logic, variant: Variant, n: usize, depth: u32) -> Layout<'a> {
        Layout {
            logic,
            variant,
            n,
            depth,
            level: FxHashMap::default(),
            placed: FxHashMap::default(),
            gates: crate::circuit::input_gates(n),
            next: 2 * n as GateId,
        }
    }

    fn shape(&self, lit: Lit) -> Shape {
        let neg = lit.is_neg();
        match &self.logic.nodes[lit.node() as usize] {
            Node::Const => unreachable!("constants are placed by gadgets"),
            Node::Input(i) => Shape::Input(neg, *i),
            Node::Or(ps) => {
                let kind = if neg { GateKind::And } else { GateKind::Or };
                Shape::Gate(kind, ps.iter().map(|p| if neg { !*p } else { *p }).collect())
            }
            Node::Th(theta, ps) => {
                let n = ps.len();
                let (theta, lits): (usize, Vec<Lit>) = if neg {
                    (n - *theta as usize + 1, ps.iter().map(|p| !*p).collect())
                } else {
                    (*theta as usize, ps.to_vec())
                };
                // pad to a strict majority: n − p + q = 2θ − 1
                let target = 2 * theta as i64 - 1;
                let (p, q) = if target >= n as i64 {
                    (0, target as usize - n)
                } else {
                    (n - target as usize, 0)
                };
                let mut all = lits;
                all.extend(std::iter::repeat_n(Lit::TRUE, p));
                all.extend(std::iter::repeat_n(Lit::FALSE, q));
                Shape::Gate(GateKind::Maj, all)
            }
        }
    }

    fn level_of(&mut self, lit: Lit) -> u32 {
        if lit.is_const() {
            return 0;
        }
        let key = (lit.node(), lit.is_neg());
        if let Some(l) = self.level.get(&key) {
            return *l;
        }
        let l = match self.shape(lit) {
            Shape::Input(..) => 0,
            Shape::Gate(kind, preds) => {
                let mut lo = 1;
                for p in preds {
                    lo = lo.max(self.level_of(p) + 1);
                }
                // constants enter at level 1 (true) or 2 (false)
                let mut l = lo;
                while self.variant.kind_at(l) != kind {
                    l += 1;
                }
                l
            }
        };
        self.level.insert(key, l);
        l
    }

    fn emit(&mut self, level: u32, kind: GateKind, preds: Vec<GateId>) -> GateId {
        let id = self.next;
        self.next += 1;
        self.gates.push(Gate::new(id, level, kind, preds));
        id
    }

    fn buffer(&mut self, level: u32, pred: GateId) -> GateId {
        let kind = self.variant.kind_at(level);
        self.emit(level, kind, vec![pred])
    }

    /// A gate at exactly `level` computing `lit`; distinct copies get distinct gates.
    fn at(&mut self, lit: Lit, level: u32, copy: u32) -> GateId {
        if let Some(g) = self.placed.get(&(lit, level, copy)) {
            return *g;
        }
        let g = if lit.is_const() {
            self.constant(lit == Lit::TRUE, level, copy)
        } else {
            let own = self.level_of(lit);
            debug_assert!(own <= level);
            if own < level {
                let below = self.at(lit, level - 1, 0);
                self.buffer(level, below)
            } else {
                match self.shape(lit) {
                    Shape::Input(neg, i) => {
                        debug_assert_eq!(copy, 0, "input gates cannot be copied");
                        i as GateId + if neg { self.n as GateId } else { 0 }
                    }
                    Shape::Gate(kind, preds) => {
                        let mut seen: FxHashMap<Lit, u32> = FxHashMap::default();
                        let mut ids = Vec::with_capacity(preds.len());
                        for p in preds {
                            let c = seen.entry(p).or_insert(0);
                            ids.push(self.at(p, level - 1, *c));
                            *c += 1;
                        }
                        self.emit(level, kind, ids)
                    }
                }
            }
        };
        self.placed.insert((lit, level, copy), g);
        g
    }

    fn constant(&mut self, value: bool, level: u32, copy: u32) -> GateId {
        let (x, nx) = (0, self.n as GateId);
        match (value, level) {
            (true, 1) => self.emit(1, GateKind::Or, vec![x, nx]),
            (false, 2) => {
                let a = self.at(Lit::new(1, false), 1, 0);
                let b = self.at(Lit::new(1, true), 1, 0);
                self.emit(2, self.variant.kind_at(2), vec![a, b])
            }
            (false, 0 | 1) | (true, 0) => panic!("no constant gadget at level {level}"),
            _ => {
                let below = self.at(Lit::constant(value), level - 1, 0);
                let _ = copy;
                self.buffer(level, below)
            }
        }
    }

    fn build(mut self, outputs: &[Lit]) -> Circuit {
        let d = self.depth;
        let mut tops = Vec::with_capacity(outputs.len());
        for o in outputs {
            let below = self.at(*o, d - 1, 0);
            tops.push(below);
        }
        let m = outputs.len() as u64;
        let k = min_exponent(self.n, self.next + m);
        let space = (self.n as u64).pow(k);
        let mut out_ids = Vec::with_capacity(outputs.len());
        for (j, below) in tops.into_iter().enumerate() {
            let id = space - m + j as u64;
            self.gates.push(Gate::new(id, d, self.variant.kind_at(d), vec![below]));
            out_ids.push(id);
        }
        Circuit::new(self.variant, self.n, k, d, self.gates, out_ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{validate_normal_form, BitVector, Prepared};

    fn run(c: &Circuit, bits: &[bool]) -> Vec<bool> {
        Prepared::new(c).unwrap().run(&BitVector::new(bits.to_vec())).unwrap().bits().to_vec()
    }

    #[test]
    fn folding() {
        let mut l = Logic::new(2);
        let x = l.input(0);
        assert_eq!(l.and([x, Lit::TRUE]), x);
        assert_eq!(l.and([x, !x]), Lit::FALSE);
        assert_eq!(l.or([x, !x]), Lit::TRUE);
        assert_eq!(l.th(0, [x]), Lit::TRUE);
        assert_eq!(l.th(2, [x]), Lit::FALSE);
        assert_eq!(l.th(2, [x, x]), x);
        let y = l.input(1);
        assert_eq!(l.and([x, y]), l.and([y, x]));
    }

    #[test]
    fn normalized_threshold_and_constants() {
        let mut l = Logic::new(3);
        let xs: Vec<Lit> = (0..3).map(|i| l.input(i)).collect();
        let t2 = l.th(2, xs.clone());
        let t1n = !l.th(2, [xs[0], xs[0], xs[1]]);
        let outs = [t2, t1n, Lit::TRUE, Lit::FALSE, !xs[2]];
        let c = l.normalize(Variant::Tc, 3, 6, &outs);
        validate_normal_form(&c).unwrap();
        for v in 0..8u32 {
            let b: Vec<bool> = (0..3).map(|i| v >> i & 1 == 1).collect();
            let ones = b.iter().filter(|x| **x).count();
            let weighted = 2 * b[0] as usize + b[1] as usize;
            assert_eq!(run(&c, &b), vec![ones >= 2, weighted < 2, true, false, !b[2]]);
        }
    }

    #[test]
    fn alternation_in_ac() {
        let mut l = Logic::new(2);
        let (a, b) = (l.input(0), l.input(1));
        let x = l.xor(a, b);
        let c = l.normalize(Variant::Ac, 2, 4, &[x, !x, a]);
        validate_normal_form(&c).unwrap();
        for v in 0..4u32 {
            let bits = [v & 1 == 1, v & 2 == 2];
            let want = bits[0] != bits[1];
            assert_eq!(run(&c, &bits), vec![want, !want, bits[0]]);
        }
    }
}
