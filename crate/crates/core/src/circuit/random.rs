//! Random normal-form circuits for testing.

use rand::seq::index::sample;
use rand::Rng;

use super::{input_gates, min_exponent, Circuit, Gate, GateId, Variant};

#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub variant: Variant,
    pub n_inputs: usize,
    pub depth: u32,
    /// Upper bound on the total gate count, inputs included.
    pub max_size: usize,
    pub m: usize,
    /// Largest fan-in of a non-input gate.
    pub max_fan_in: usize,
    /// Lower bound on the id-space exponent.
    pub min_k: u32,
    /// Every gate above level 0 feeds some gate of the next level, so no
    /// gate is dead. Fan-in may then exceed `max_fan_in`.
    pub connected: bool,
}

impl RandomSpec {
    pub fn new(variant: Variant, n_inputs: usize, depth: u32, max_size: usize) -> RandomSpec {
        RandomSpec {
            variant,
            n_inputs,
            depth,
            max_size,
            m: 1,
            max_fan_in: 3,
            min_k: 1,
            connected: false,
        }
    }
}

/// A uniformly shaped random circuit satisfying every normal-form invariant.
///
/// Panics if the spec leaves no room for one gate per level.
pub fn random_circuit(rng: &mut impl Rng, spec: &RandomSpec) -> Circuit {
    let n = spec.n_inputs;
    let d = spec.depth;
    assert!(n >= 2, "need at least two inputs");
    assert!(d >= 1 && spec.variant.depth_ok(d), "depth {d} not admissible");
    let inner_levels = d as usize - 1;
    let fixed = 2 * n + spec.m + inner_levels;
    assert!(fixed <= spec.max_size, "size budget too small");

    // level sizes: at least one gate per inner level, m at the top
    let mut sizes = vec![1usize; inner_levels];
    let spare = spec.max_size - fixed;
    if inner_levels > 0 {
        let extra = rng.gen_range(0..=spare);
        for _ in 0..extra {
            let l = rng.gen_range(0..inner_levels);
            sizes[l] += 1;
        }
    }
    sizes.push(spec.m);
    let internal: usize = sizes[..inner_levels].iter().sum();
    let k = min_exponent(n, (2 * n + internal + spec.m) as u64).max(spec.min_k);
    let space = (n as u64).pow(k);

    let mut gates = input_gates(n);
    let mut prev: Vec<GateId> = (0..2 * n as u64).collect();
    let mut next_id = 2 * n as u64;
    let mut outputs = Vec::new();
    for (i, size) in sizes.iter().enumerate() {
        let level = i as u32 + 1;
        let top = level == d;
        let mut cur = Vec::with_capacity(*size);
        for j in 0..*size {
            let id = if top {
                space - spec.m as u64 + j as u64
            } else {
                next_id += 1;
                next_id - 1
            };
            let fan = rng.gen_range(1..=spec.max_fan_in.min(prev.len()));
            let preds = sample(rng, prev.len(), fan).into_iter().map(|x| prev[x]).collect();
            gates.push(Gate::new(id, level, spec.variant.kind_at(level), preds));
            cur.push(id);
        }
        if spec.connected && level > 1 {
            let first = gates.len() - cur.len();
            let used: std::collections::HashSet<GateId> =
                gates[first..].iter().flat_map(|g| g.preds.iter().copied()).collect();
            for p in prev.iter().filter(|p| !used.contains(p)) {
                let j = rng.gen_range(first..gates.len());
                gates[j].preds.push(*p);
            }
        }
        if top {
            outputs = cur.clone();
        }
        prev = cur;
    }
    Circuit::new(spec.variant, n, k, d, gates, outputs)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_circuits_validate_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..100 {
            let variant = if i % 2 == 0 { Variant::Ac } else { Variant::Tc };
            let n = rng.gen_range(2..=10);
            let depth = match variant {
                Variant::Ac => 2 * rng.gen_range(1..=3),
                Variant::Tc => 3 * rng.gen_range(1..=2),
            };
            let mut spec = RandomSpec::new(variant, n, depth, (n * n * n).max(2 * n + 8));
            spec.m = rng.gen_range(1..=3);
            let c = random_circuit(&mut rng, &spec);
            validate_normal_form(&c).unwrap();
            assert!(stats(&c).size <= spec.max_size);
            assert_eq!(decode(&encode(&c)).unwrap(), c);
        }
    }

    #[test]
    fn unreachable_inputs_do_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let c = random_circuit(&mut rng, &RandomSpec::new(Variant::Ac, 8, 4, 40));
            let mut used = std::collections::HashSet::new();
            let mut frontier: Vec<u64> = c.outputs().to_vec();
            while let Some(g) = frontier.pop() {
                if used.insert(g) {
                    frontier.extend(c.gate(g).unwrap().preds.iter().copied());
                }
            }
            let prep = Prepared::new(&c).unwrap();
            let x = BitVector::from_u64(rng.gen(), 8);
            let base = prep.run(&x).unwrap();
            for i in 0..8u64 {
                if !used.contains(&i) && !used.contains(&(i + 8)) {
                    let mut y = x.clone();
                    y.set(i as usize, !y.get(i as usize));
                    assert_eq!(prep.run(&y).unwrap(), base);
                }
            }
        }
    }
}
