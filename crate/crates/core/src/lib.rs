//! Function algebras built from length-ODE schemas, their evaluation, and
//! their compilation to constant-depth Boolean circuits.

pub mod algebra;
pub mod circuit;
pub mod compiler;
pub mod eval;
pub mod nonuniform;
pub mod stdlib;
pub mod value;

pub use algebra::{CheckedTerm, ModePreset, PresetName, Term};
pub use eval::{eval, Env, EvalError, Oracles};
pub use value::Value;
