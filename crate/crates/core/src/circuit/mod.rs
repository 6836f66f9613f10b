//! Layered normal-form Boolean circuits with optional majority layers.

mod format;
pub mod random;
mod sim;

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;

pub use format::{decode, encode, to_dot, ParseError};
pub use sim::{simulate, Prepared, SimError};

pub type GateId = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Ac,
    Tc,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Ac => "AC",
            Variant::Tc => "TC",
        }
    }

    /// Gate kind required at a positive level.
    pub fn kind_at(self, level: u32) -> GateKind {
        match self {
            Variant::Ac if level % 2 == 1 => GateKind::Or,
            Variant::Ac => GateKind::And,
            Variant::Tc => match level % 3 {
                0 => GateKind::Maj,
                1 => GateKind::Or,
                _ => GateKind::And,
            },
        }
    }

    /// Whether `d` is an admissible total depth.
    pub fn depth_ok(self, d: u32) -> bool {
        match self {
            Variant::Ac => d.is_multiple_of(2),
            Variant::Tc => d.is_multiple_of(3),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Variant, String> {
        match s.to_ascii_uppercase().as_str() {
            "AC" => Ok(Variant::Ac),
            "TC" => Ok(Variant::Tc),
            _ => Err(format!("unknown variant `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    InputPos,
    InputNeg,
    And,
    Or,
    Maj,
}

impl GateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GateKind::InputPos => "in+",
            GateKind::InputNeg => "in-",
            GateKind::And => "and",
            GateKind::Or => "or",
            GateKind::Maj => "maj",
        }
    }

    pub fn is_input(self) -> bool {
        matches!(self, GateKind::InputPos | GateKind::InputNeg)
    }
}

impl FromStr for GateKind {
    type Err = String;
    fn from_str(s: &str) -> Result<GateKind, String> {
        Ok(match s {
            "in+" => GateKind::InputPos,
            "in-" => GateKind::InputNeg,
            "and" => GateKind::And,
            "or" => GateKind::Or,
            "maj" => GateKind::Maj,
            _ => return Err(format!("unknown gate kind `{s}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub id: GateId,
    pub level: u32,
    pub kind: GateKind,
    pub preds: Vec<GateId>,
}

impl Gate {
    pub fn new(id: GateId, level: u32, kind: GateKind, preds: Vec<GateId>) -> Gate {
        Gate { id, level, kind, preds }
    }
}

/// A circuit over gate ids in {0, …, n^k − 1}. Gates are kept sorted by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    variant: Variant,
    n_inputs: usize,
    k: u32,
    depth: u32,
    gates: Vec<Gate>,
    outputs: Vec<GateId>,
}

impl Circuit {
    /// Assembles a circuit without checking normal form; see [`validate_normal_form`].
    pub fn new(
        variant: Variant,
        n_inputs: usize,
        k: u32,
        depth: u32,
        mut gates: Vec<Gate>,
        outputs: Vec<GateId>,
    ) -> Circuit {
        gates.sort_by_key(|g| g.id);
        Circuit {
            variant,
            n_inputs,
            k,
            depth,
            gates,
            outputs,
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[GateId] {
        &self.outputs
    }

    pub fn m(&self) -> usize {
        self.outputs.len()
    }

    /// n^k, or `None` if it overflows.
    pub fn id_space(&self) -> Option<u64> {
        (self.n_inputs as u64).checked_pow(self.k)
    }

    pub fn gate(&self, id: GateId) -> Option<&Gate> {
        self.gates.binary_search_by_key(&id, |g| g.id).ok().map(|i| &self.gates[i])
    }

    /// Removes one edge; used for fault injection.
    pub fn without_edge(&self, to: GateId, from: GateId) -> Circuit {
        let mut c = self.clone();
        if let Ok(i) = c.gates.binary_search_by_key(&to, |g| g.id) {
            c.gates[i].preds.retain(|p| *p != from);
        }
        c
    }

    /// All (to, from) edges in id order.
    pub fn edges(&self) -> impl Iterator<Item = (GateId, GateId)> + '_ {
        self.gates.iter().flat_map(|g| g.preds.iter().map(move |p| (g.id, *p)))
    }
}

/// Smallest k with n^k ≥ `needed`, for n ≥ 2.
pub fn min_exponent(n: usize, needed: u64) -> u32 {
    assert!(n >= 2);
    let mut k = 1;
    let mut cap = n as u64;
    while cap < needed {
        cap = cap.saturating_mul(n as u64);
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormError {
    pub code: &'static str,
    pub gate: Option<GateId>,
    pub message: String,
}

impl fmt::Display for NormalFormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gate {
            Some(g) => write!(f, "error[{}] at gate {g}: {}", self.code, self.message),
            None => write!(f, "error[{}]: {}", self.code, self.message),
        }
    }
}

/// Checks every normal-form invariant, reporting each violation.
pub fn validate_normal_form(c: &Circuit) -> Result<(), Vec<NormalFormError>> {
    let mut errs = Vec::new();
    let mut err = |code, gate, message: String| errs.push(NormalFormError { code, gate, message });
    let n = c.n_inputs as u64;
    if n == 0 {
        err("NoInputs", None, "a circuit needs at least one input".into());
    }
    let space = c.id_space();
    if space.is_none() {
        err("IdSpace", None, format!("{n}^{} overflows", c.k));
    }
    let space = space.unwrap_or(u64::MAX);
    if !c.variant.depth_ok(c.depth) {
        err("Depth", None, format!("depth {} is not admissible for {}", c.depth, c.variant));
    }

    let mut levels: FxHashMap<GateId, u32> = FxHashMap::default();
    for w in c.gates.windows(2) {
        if w[0].id == w[1].id {
            err("DuplicateId", Some(w[0].id), "gate id used twice".into());
        }
    }
    for g in &c.gates {
        levels.insert(g.id, g.level);
        if g.id >= space {
            err("IdRange", Some(g.id), format!("id outside 0..{space}"));
        }
        if g.level > c.depth {
            err("Level", Some(g.id), format!("level {} exceeds depth {}", g.level, c.depth));
        }
    }
    for i in 0..2 * n {
        let want = if i < n { GateKind::InputPos } else { GateKind::InputNeg };
        match c.gate(i) {
            Some(g) if g.kind == want && g.level == 0 => {}
            _ => err("InputLayout", Some(i), format!("expected a level-0 {} gate", want.as_str())),
        }
    }
    for g in &c.gates {
        if g.kind.is_input() {
            if g.id >= 2 * n {
                err("InputLayout", Some(g.id), "input gate outside 0..2n".into());
            }
            if !g.preds.is_empty() {
                err("InputPreds", Some(g.id), "input gates take no predecessors".into());
            }
            continue;
        }
        if g.level == 0 {
            err("Level", Some(g.id), "only inputs live at level 0".into());
            continue;
        }
        let want = c.variant.kind_at(g.level);
        if g.kind != want {
            err(
                "Alternation",
                Some(g.id),
                format!("{} gate at level {} where {} is required", g.kind.as_str(), g.level, want.as_str()),
            );
        }
        if g.preds.is_empty() {
            err("NoPreds", Some(g.id), "gate has no predecessors".into());
        }
        for p in &g.preds {
            match levels.get(p) {
                None => err("DanglingEdge", Some(g.id), format!("predecessor {p} does not exist")),
                Some(l) if *l + 1 != g.level => err(
                    "LevelSkip",
                    Some(g.id),
                    format!("edge from level {l} to level {}", g.level),
                ),
                _ => {}
            }
        }
    }
    let m = c.outputs.len() as u64;
    if m == 0 {
        err("Outputs", None, "no output gates".into());
    } else if space >= m {
        for (j, o) in c.outputs.iter().enumerate() {
            let want = space - m + j as u64;
            if *o != want {
                err("OutputWindow", Some(*o), format!("output {j} should have id {want}"));
            }
            match levels.get(o) {
                None => err("Outputs", Some(*o), "output gate does not exist".into()),
                Some(l) if *l != c.depth => err("Outputs", Some(*o), format!("output at level {l}, not {}", c.depth)),
                _ => {}
            }
        }
    } else {
        err("OutputWindow", None, format!("{m} outputs exceed the id space {space}"));
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stats {
    pub size: usize,
    pub depth: u32,
}

/// Gate count (inputs included) and depth.
pub fn stats(c: &Circuit) -> Stats {
    Stats {
        size: c.gates.len(),
        depth: c.depth,
    }
}

/// A fixed-width bit string, least significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn new(bits: Vec<bool>) -> BitVector {
        BitVector(bits)
    }

    pub fn zeros(width: usize) -> BitVector {
        BitVector(vec![false; width])
    }

    /// The low `width` bits of `v`.
    pub fn from_u64(v: u64, width: usize) -> BitVector {
        BitVector((0..width).map(|i| i < 64 && (v >> i) & 1 == 1).collect())
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, b: bool) {
        self.0[i] = b;
    }

    /// Unsigned value; `None` past 64 bits of significance.
    pub fn to_u64(&self) -> Option<u64> {
        let mut v = 0u64;
        for (i, b) in self.0.iter().enumerate() {
            if *b {
                if i >= 64 {
                    return None;
                }
                v |= 1 << i;
            }
        }
        Some(v)
    }

    pub fn to_value(&self) -> crate::Value {
        crate::Value::from_bits_lsb(&self.0)
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = String;
    fn from_str(s: &str) -> Result<BitVector, String> {
        s.trim()
            .chars()
            .filter(|c| *c != '_')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(format!("bad bit `{c}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitVector)
    }
}

impl From<Vec<bool>> for BitVector {
    fn from(v: Vec<bool>) -> BitVector {
        BitVector(v)
    }
}

/// Level-0 gates for `n` inputs.
pub fn input_gates(n: usize) -> Vec<Gate> {
    (0..2 * n as u64)
        .map(|i| {
            let kind = if i < n as u64 { GateKind::InputPos } else { GateKind::InputNeg };
            Gate::new(i, 0, kind, vec![])
        })
        .collect()
}

/// Two inputs, an Or buffer per input at level 1, one And at level 2.
pub fn and_buffer_circuit() -> Circuit {
    let mut gates = input_gates(2);
    gates.push(Gate::new(4, 1, GateKind::Or, vec![0]));
    gates.push(Gate::new(5, 1, GateKind::Or, vec![1]));
    gates.push(Gate::new(7, 2, GateKind::And, vec![4, 5]));
    Circuit::new(Variant::Ac, 2, 3, 2, gates, vec![7])
}

/// One strict-majority gate over three inputs, padded by Or and And buffers.
pub fn single_maj_circuit() -> Circuit {
    let mut gates = input_gates(3);
    for i in 0..3 {
        gates.push(Gate::new(6 + i, 1, GateKind::Or, vec![i]));
        gates.push(Gate::new(9 + i, 2, GateKind::And, vec![6 + i]));
    }
    gates.push(Gate::new(26, 3, GateKind::Maj, vec![9, 10, 11]));
    Circuit::new(Variant::Tc, 3, 3, 3, gates, vec![26])
}

/// Depth-0 circuit over two inputs. The output window n^k − m … n^k − 1
/// falls on the negated inputs, so it outputs ¬x₀ ¬x₁.
pub fn identity_circuit() -> Circuit {
    Circuit::new(Variant::Ac, 2, 2, 0, input_gates(2), vec![2, 3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_validate() {
        for c in [and_buffer_circuit(), single_maj_circuit(), identity_circuit()] {
            validate_normal_form(&c).unwrap();
        }
    }

    #[test]
    fn hand_counts() {
        assert_eq!(stats(&and_buffer_circuit()), Stats { size: 7, depth: 2 });
        assert_eq!(stats(&single_maj_circuit()), Stats { size: 13, depth: 3 });
        assert_eq!(stats(&identity_circuit()).depth, 0);
    }

    #[test]
    fn rejects_and_at_odd_level() {
        let mut gates = input_gates(2);
        gates.push(Gate::new(4, 1, GateKind::And, vec![0]));
        gates.push(Gate::new(7, 2, GateKind::And, vec![4]));
        let c = Circuit::new(Variant::Ac, 2, 3, 2, gates, vec![7]);
        let errs = validate_normal_form(&c).unwrap_err();
        assert!(errs.iter().any(|e| e.code == "Alternation"));
    }

    #[test]
    fn rejects_level_skip() {
        let mut gates = input_gates(2);
        gates.push(Gate::new(4, 1, GateKind::Or, vec![0]));
        gates.push(Gate::new(7, 2, GateKind::And, vec![4, 1]));
        let c = Circuit::new(Variant::Ac, 2, 3, 2, gates, vec![7]);
        let errs = validate_normal_form(&c).unwrap_err();
        assert!(errs.iter().any(|e| e.code == "LevelSkip"));
    }

    #[test]
    fn rejects_misplaced_outputs() {
        let mut gates = input_gates(2);
        gates.push(Gate::new(4, 1, GateKind::Or, vec![0]));
        gates.push(Gate::new(6, 2, GateKind::And, vec![4]));
        let c = Circuit::new(Variant::Ac, 2, 3, 2, gates, vec![6]);
        let errs = validate_normal_form(&c).unwrap_err();
        assert!(errs.iter().any(|e| e.code == "OutputWindow"));
    }

    #[test]
    fn bitvector_text() {
        let b: BitVector = "0110".parse().unwrap();
        assert_eq!(b.to_u64(), Some(6));
        assert_eq!(b.to_string(), "0110");
        assert_eq!(BitVector::from_u64(6, 4), b);
    }
}
