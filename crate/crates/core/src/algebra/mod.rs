//! Terms, mode presets, validation and the degree calculus.

pub mod build;
mod mode;
mod poly;
mod term;
mod validate;

pub use mode::{BasicKind, ModePreset, OracleDecl, PresetName, SchemaKind, SMASH_ORACLE};
pub use poly::{degree, is_essentially_constant, is_essentially_linear, PolyExpr};
pub use term::{Dir, Node, Term};
pub use validate::{
    accepting_presets, is_statically_boolean, validate, CheckedTerm, Diagnostic, Severity,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("inconsistent arity in {context}: expected {expected}, found {found}")]
    InconsistentArity {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("projection ({i} {p}) needs 1 <= i <= p")]
    BadProjection { i: usize, p: usize },
    #[error("composition needs at least one argument")]
    EmptyComposition,
}
