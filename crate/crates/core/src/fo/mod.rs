//! First-order structures, formulas, Stone pairings and type tables.

mod eval;
mod structure;
mod syntax;
mod types;

use thiserror::Error;

use crate::lattice::LatticeError;
use crate::measure::MeasureError;

pub use eval::{
    assignment_count, count_satisfying, count_satisfying_with, stone_pairing_classical, stone_pairing_classical_with,
    stone_pairing_gamma, stone_pairing_gamma_with, Compiled,
};
pub use structure::{FinStructure, StructureFile};
pub use syntax::{parse_formula, parse_formula_with, parse_raw, Formula, FormulaDisplay, FormulaFile, RawFormula, Signature};
pub use types::{fragment_inclusion, semantic_fragment, type_table, Cell, SemanticFragment, TypeClass, TypeTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("line {line}: {inner}")]
    Line { line: usize, inner: Box<FoError> },
    #[error("`{symbol}` takes {expected} arguments, got {got}")]
    Arity { symbol: String, expected: usize, got: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("free variable v{var} is beyond the {n} assigned slots")]
    UnboundVariable { var: usize, n: usize },
    #[error("empty domain")]
    EmptyDomain,
    #[error("empty structure family")]
    EmptyFamily,
    #[error("{size}^{n} assignments do not fit in 64 bits")]
    TooManyAssignments { size: usize, n: usize },
    #[error("bad signature: {0}")]
    Signature(String),
    #[error("bad structure: {0}")]
    Structure(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("fragments do not nest: {0}")]
    FragmentMismatch(String),
    #[error("worker pool: {0}")]
    Workers(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

impl FoError {
    pub(crate) fn at_line(self, line: usize) -> Self {
        FoError::Line {
            line,
            inner: Box::new(self),
        }
    }
}
