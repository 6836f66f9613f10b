//! Compilation of checked terms to normal-form circuits at fixed input widths.
//!
//! A term is first analysed with interval arithmetic to size every wire
//! bundle, then lowered into a hash-consed gate DAG and finally laid out in
//! alternating layers. The layer count depends on the term only, never on
//! the chosen widths.

mod arith;
mod interval;
mod logic;
mod lower;

use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

pub use interval::{Interval, MAX_WIDTH};

use crate::algebra::CheckedTerm;
use crate::circuit::{stats, BitVector, Circuit, Variant};
use crate::value::Value;
use arith::Num;
use logic::{Lit, Logic};
use lower::{Claims, Lowerer, RangePass, Val};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("oracle `{0}` has no circuit; bind it to a term before compiling")]
    UnboundOracle(String),
    #[error("{0} needs threshold gates and cannot be compiled to an AC circuit")]
    TcOnly(&'static str),
    #[error("width plan too narrow for `{term}`: planned {planned} bits, needs {needed}")]
    PlanTooNarrow { term: String, planned: u64, needed: u64 },
    #[error("intermediate value needs {bits} bits, over the limit of {MAX_WIDTH}")]
    WidthLimit { bits: u64 },
    #[error("circuit exceeds {nodes} gates")]
    TooLarge { nodes: usize },
    #[error("expected {expected} input widths, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("argument {index} = {value} does not fit the input layout")]
    InputRange { index: usize, value: Value },
}

/// Layout of one circuit argument: `width` magnitude bits, then a sign bit
/// when `signed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InputSpec {
    pub width: u32,
    pub signed: bool,
}

impl InputSpec {
    pub fn unsigned(width: u32) -> InputSpec {
        InputSpec { width, signed: false }
    }

    pub fn signed(width: u32) -> InputSpec {
        InputSpec { width, signed: true }
    }

    pub fn range(&self) -> Interval {
        Interval::of_width(self.width as u64, self.signed)
    }

    fn bits(&self) -> usize {
        self.width as usize + self.signed as usize
    }
}

/// Bit widths for every subterm of a term, derived from its input layout.
#[derive(Clone, Debug)]
pub struct WidthPlan {
    inputs: Vec<InputSpec>,
    output: Interval,
    widths: FxHashMap<usize, u64>,
}

impl WidthPlan {
    pub fn inputs(&self) -> &[InputSpec] {
        &self.inputs
    }

    /// Range guaranteed to contain the output.
    pub fn output(&self) -> &Interval {
        &self.output
    }

    /// Largest width of any instantiation of `t`, if `t` occurs.
    pub fn width_of(&self, t: &crate::Term) -> Option<u64> {
        self.widths.get(&t.id()).copied()
    }

    /// Widest bundle anywhere in the term.
    pub fn max_width(&self) -> u64 {
        self.widths.values().copied().max().unwrap_or(0)
    }

    /// Caps every subterm at `bits`. Compiling against a capped plan fails
    /// with [`CompileError::PlanTooNarrow`] if any bundle needs more.
    pub fn capped(mut self, bits: u64) -> WidthPlan {
        for w in self.widths.values_mut() {
            *w = (*w).min(bits);
        }
        self
    }
}

pub fn infer_widths(t: &CheckedTerm, inputs: &[InputSpec]) -> Result<WidthPlan, CompileError> {
    if inputs.len() != t.arity() {
        return Err(CompileError::Arity {
            expected: t.arity(),
            found: inputs.len(),
        });
    }
    let mut pass = RangePass::new();
    let ranges: Vec<Interval> = inputs.iter().map(InputSpec::range).collect();
    let output = pass.range(t.term(), &ranges)?;
    Ok(WidthPlan {
        inputs: inputs.to_vec(),
        output,
        widths: pass.widths,
    })
}

/// Unsigned inputs of the given widths.
pub fn plan_unsigned(t: &CheckedTerm, widths: &[u32]) -> Result<WidthPlan, CompileError> {
    let specs: Vec<InputSpec> = widths.iter().map(|w| InputSpec::unsigned(*w)).collect();
    infer_widths(t, &specs)
}

/// A compiled term with its input and output encodings.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub circuit: Circuit,
    pub inputs: Vec<InputSpec>,
    /// Range of the output; a sign bit follows the magnitude iff it can be negative.
    pub output: Interval,
    /// Width-independent logical depth bound the layout was sized for.
    pub claim: u32,
}

impl Compiled {
    pub fn output_bits(&self) -> usize {
        self.circuit.m()
    }

    fn output_signed(&self) -> bool {
        !self.output.nonneg()
    }

    /// Circuit input for `args`, or an error if some argument does not fit.
    pub fn encode_inputs(&self, args: &[Value]) -> Result<BitVector, CompileError> {
        if args.len() != self.inputs.len() {
            return Err(CompileError::Arity {
                expected: self.inputs.len(),
                found: args.len(),
            });
        }
        let mut bits = Vec::with_capacity(self.circuit.n_inputs());
        for (index, (v, spec)) in args.iter().zip(&self.inputs).enumerate() {
            if !spec.range().contains(v) {
                return Err(CompileError::InputRange { index, value: v.clone() });
            }
            bits.extend((0..spec.width as u64).map(|i| v.magnitude_bit(i)));
            if spec.signed {
                bits.push(v.is_negative());
            }
        }
        bits.resize(self.circuit.n_inputs(), false);
        Ok(BitVector::new(bits))
    }

    pub fn decode_output(&self, out: &BitVector) -> Value {
        let bits = out.bits();
        let (mag, neg) = if self.output_signed() {
            (&bits[..bits.len() - 1], bits[bits.len() - 1])
        } else {
            (bits, false)
        };
        let v = Value::from_bits_lsb(mag);
        if neg {
            -v
        } else {
            v
        }
    }

    /// Encodes, simulates and decodes in one go.
    pub fn run(&self, args: &[Value]) -> Result<Value, CompileError> {
        let input = self.encode_inputs(args)?;
        let out = crate::circuit::simulate(&self.circuit, &input).expect("compiled circuits are well formed");
        Ok(self.decode_output(&out))
    }

    /// Runs many argument tuples, 64 per simulation pass.
    pub fn run_many(&self, args: &[Vec<Value>]) -> Result<Vec<Value>, CompileError> {
        let prep = crate::circuit::Prepared::new(&self.circuit).expect("compiled circuits are well formed");
        let mut out = Vec::with_capacity(args.len());
        for chunk in args.chunks(64) {
            let mut words = vec![0u64; self.circuit.n_inputs()];
            for (lane, a) in chunk.iter().enumerate() {
                let bits = self.encode_inputs(a)?;
                for (i, b) in bits.bits().iter().enumerate() {
                    words[i] |= (*b as u64) << lane;
                }
            }
            let res = prep.run_words(&words);
            for lane in 0..chunk.len() {
                let bits = BitVector::new(res.iter().map(|w| w >> lane & 1 == 1).collect());
                out.push(self.decode_output(&bits));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Compiled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = stats(&self.circuit);
        write!(
            f,
            "{} circuit: {} inputs, {} outputs, depth {}, size {}",
            self.circuit.variant().as_str(),
            self.circuit.n_inputs(),
            self.circuit.m(),
            s.depth,
            s.size
        )
    }
}

/// The variant a term compiles to by default: TC under threshold presets, AC otherwise.
pub fn default_variant(t: &CheckedTerm) -> Variant {
    if t.mode().is_threshold() {
        Variant::Tc
    } else {
        Variant::Ac
    }
}

pub fn compile(t: &CheckedTerm, plan: &WidthPlan) -> Result<Compiled, CompileError> {
    compile_as(t, plan, default_variant(t))
}

/// Normal-form depth for a logical depth bound.
pub fn layout_depth(variant: Variant, claim: u32) -> u32 {
    match variant {
        Variant::Ac => (2 * claim + 1).max(2).next_multiple_of(2),
        Variant::Tc => (3 * claim + 1).max(3).next_multiple_of(3),
    }
}

pub fn compile_as(t: &CheckedTerm, plan: &WidthPlan, variant: Variant) -> Result<Compiled, CompileError> {
    if plan.inputs.len() != t.arity() {
        return Err(CompileError::Arity {
            expected: t.arity(),
            found: plan.inputs.len(),
        });
    }
    let n_real: usize = plan.inputs.iter().map(InputSpec::bits).sum();
    let n = n_real.max(2);
    let logic = Logic::new(n);
    let mut args = Vec::new();
    let mut next = 0;
    for spec in &plan.inputs {
        let mag: Vec<Lit> = (0..spec.width as usize).map(|i| logic.input(next + i)).collect();
        next += spec.width as usize;
        let sign = if spec.signed {
            next += 1;
            logic.input(next - 1)
        } else {
            Lit::FALSE
        };
        args.push(Val {
            num: Num::from_parts(mag, sign, spec.range()),
            claim: 0,
        });
    }
    let mut lw = Lowerer::new(logic, variant, &plan.widths);
    let out = lw.lower(t.term(), &args)?;
    let claim = out.claim;
    debug_assert!(out.num.depth(&lw.logic) <= claim);
    if variant == Variant::Ac {
        debug_assert!(!lw.logic.has_threshold());
    }
    let mut outputs = out.num.mag.clone();
    if outputs.is_empty() {
        outputs.push(Lit::FALSE);
    }
    let output = out.num.range.clone();
    if !output.nonneg() {
        outputs.push(out.num.sign);
    }
    let depth = layout_depth(variant, claim);
    let circuit = lw.logic.normalize(variant, n, depth, &outputs);
    Ok(Compiled {
        circuit,
        inputs: plan.inputs.clone(),
        output,
        claim,
    })
}

/// Depth bound of `t` without building anything.
pub fn claimed_depth(t: &CheckedTerm) -> u32 {
    Claims::new().of(t.term(), &vec![0; t.arity()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfilePoint {
    pub width: u32,
    pub depth: u32,
    pub size: usize,
}

/// Depth and size of `t` compiled with all inputs unsigned at each width.
pub fn depth_profile(t: &CheckedTerm, widths: &[u32]) -> Result<Vec<ProfilePoint>, CompileError> {
    widths
        .iter()
        .map(|&w| {
            let plan = plan_unsigned(t, &vec![w; t.arity()])?;
            let c = compile(t, &plan)?;
            let s = stats(&c.circuit);
            Ok(ProfilePoint {
                width: w,
                depth: s.depth,
                size: s.size,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
