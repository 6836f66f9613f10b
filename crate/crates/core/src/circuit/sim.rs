use rustc_hash::FxHashMap;

use super::{validate_normal_form, BitVector, Circuit, GateKind, NormalFormError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("input has {found} bits, circuit expects {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("invalid circuit: {}", .0.first().map(|e| e.to_string()).unwrap_or_default())]
    InvalidCircuit(Vec<NormalFormError>),
}

#[derive(Clone, Debug)]
enum Op {
    Input(usize),
    NegInput(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Maj(Vec<usize>),
}

/// A validated circuit flattened into level order for repeated simulation.
#[derive(Clone, Debug)]
pub struct Prepared {
    n: usize,
    ops: Vec<Op>,
    outputs: Vec<usize>,
}

impl Prepared {
    pub fn new(c: &Circuit) -> Result<Prepared, SimError> {
        validate_normal_form(c).map_err(SimError::InvalidCircuit)?;
        let n = c.n_inputs();
        let mut order: Vec<&super::Gate> = c.gates().iter().collect();
        order.sort_by_key(|g| (g.level, g.id));
        let index: FxHashMap<u64, usize> = order.iter().enumerate().map(|(i, g)| (g.id, i)).collect();
        let ops = order
            .iter()
            .map(|g| {
                let preds = || g.preds.iter().map(|p| index[p]).collect();
                match g.kind {
                    GateKind::InputPos => Op::Input(g.id as usize),
                    GateKind::InputNeg => Op::NegInput(g.id as usize - n),
                    GateKind::And => Op::And(preds()),
                    GateKind::Or => Op::Or(preds()),
                    GateKind::Maj => Op::Maj(preds()),
                }
            })
            .collect();
        let outputs = c.outputs().iter().map(|o| index[o]).collect();
        Ok(Prepared { n, ops, outputs })
    }

    pub fn n_inputs(&self) -> usize {
        self.n
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn run(&self, input: &BitVector) -> Result<BitVector, SimError> {
        if input.width() != self.n {
            return Err(SimError::WidthMismatch {
                expected: self.n,
                found: input.width(),
            });
        }
        let words: Vec<u64> = input.bits().iter().map(|b| if *b { !0 } else { 0 }).collect();
        let out = self.run_words(&words);
        Ok(BitVector::new(out.iter().map(|w| w & 1 == 1).collect()))
    }

    /// Simulates 64 independent inputs at once: bit j of `inputs[i]` is
    /// input i of lane j. Returns one word per output.
    pub fn run_words(&self, inputs: &[u64]) -> Vec<u64> {
        assert_eq!(inputs.len(), self.n);
        let mut val = vec![0u64; self.ops.len()];
        for (i, op) in self.ops.iter().enumerate() {
            val[i] = match op {
                Op::Input(j) => inputs[*j],
                Op::NegInput(j) => !inputs[*j],
                Op::And(ps) => ps.iter().fold(!0, |a, p| a & val[*p]),
                Op::Or(ps) => ps.iter().fold(0, |a, p| a | val[*p]),
                Op::Maj(ps) => majority(ps.iter().map(|p| val[*p]), ps.len()),
            };
        }
        self.outputs.iter().map(|o| val[*o]).collect()
    }
}

/// Lane-wise strict majority: 2·ones > total.
fn majority(words: impl Iterator<Item = u64>, total: usize) -> u64 {
    // bit-sliced counter, least significant slice first
    let mut counter: Vec<u64> = Vec::new();
    for w in words {
        let mut carry = w;
        for c in counter.iter_mut() {
            let next = *c & carry;
            *c ^= carry;
            carry = next;
            if carry == 0 {
                break;
            }
        }
        if carry != 0 {
            counter.push(carry);
        }
    }
    let threshold = total / 2 + 1;
    let width = counter.len().max(usize::BITS as usize - threshold.leading_zeros() as usize);
    counter.resize(width, 0);
    let (mut gt, mut eq) = (0u64, !0u64);
    for i in (0..width).rev() {
        if (threshold >> i) & 1 == 1 {
            eq &= counter[i];
        } else {
            gt |= eq & counter[i];
            eq &= !counter[i];
        }
    }
    gt | eq
}

/// Validates `c` and evaluates it on one input.
pub fn simulate(c: &Circuit, input: &BitVector) -> Result<BitVector, SimError> {
    if input.width() != c.n_inputs() {
        return Err(SimError::WidthMismatch {
            expected: c.n_inputs(),
            found: input.width(),
        });
    }
    Prepared::new(c)?.run(input)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    fn bits(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn and_buffer() {
        let c = and_buffer_circuit();
        assert_eq!(simulate(&c, &bits("11")).unwrap(), bits("1"));
        assert_eq!(simulate(&c, &bits("10")).unwrap(), bits("0"));
        assert!(matches!(simulate(&c, &bits("1")), Err(SimError::WidthMismatch { .. })));
    }

    #[test]
    fn strict_majority() {
        let c = single_maj_circuit();
        assert_eq!(simulate(&c, &bits("110")).unwrap(), bits("1"));
        assert_eq!(simulate(&c, &bits("100")).unwrap(), bits("0"));
    }

    #[test]
    fn majority_lanes_match_count() {
        for total in 1..12usize {
            let words: Vec<u64> = (0..total).map(|i| 0x9E37_79B9_7F4A_7C15u64.rotate_left(7 * i as u32)).collect();
            let got = majority(words.iter().copied(), total);
            for lane in 0..64 {
                let ones = words.iter().filter(|w| (*w >> lane) & 1 == 1).count();
                assert_eq!((got >> lane) & 1 == 1, 2 * ones > total, "total {total} lane {lane}");
            }
        }
    }

    #[test]
    fn invalid_circuit_rejected() {
        let mut gates = input_gates(2);
        gates.push(Gate::new(7, 2, GateKind::And, vec![0]));
        let c = Circuit::new(Variant::Ac, 2, 3, 2, gates, vec![7]);
        assert!(matches!(simulate(&c, &bits("11")), Err(SimError::InvalidCircuit(_))));
    }
}
