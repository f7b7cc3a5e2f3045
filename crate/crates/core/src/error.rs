//! Error types, one enum per subsystem.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum F2Error {
    #[error("duplicate generator id {0}")]
    DuplicateGenerator(u32),
    #[error("matrix shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("differential entry violates the degree shift (from generator {from} to {to})")]
    DegreeViolation { from: u32, to: u32 },
    #[error("differential does not square to zero")]
    SquareNonzero,
}

#[derive(Debug, Error)]
pub enum FrontError {
    #[error("malformed event token '{0}'")]
    MalformedEvent(String),
    #[error("strand count mismatch at event {index}: {detail}")]
    StrandCountMismatch { index: usize, detail: String },
    #[error("front is not plat-closable: {0}")]
    NotPlatClosable(String),
}

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error(transparent)]
    Front(#[from] FrontError),
    #[error("chord action assignment failed: {0}")]
    ActionAssignment(String),
    #[error("grading constraints are inconsistent: {0}")]
    GradingInconsistent(String),
    #[error("stacked diagram census mismatch: expected {expected}, found {found} ({what})")]
    CensusMismatch {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("mixed chord direction is ambiguous for vertex {0}")]
    DirectionClassificationFailure(String),
}

#[derive(Debug, Error)]
pub enum DiscError {
    #[error("polygon search budget exhausted (budget {budget}); results would be incomplete")]
    BudgetExceeded { budget: usize },
}

#[derive(Debug, Error)]
pub enum DgaError {
    #[error("polygon with positive corner at {chord} violates the degree -1 law")]
    DegreeViolation { chord: String },
    #[error(transparent)]
    Discs(#[from] DiscError),
    #[error("map is not an augmentation: {0}")]
    NotAugmentation(String),
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
}

#[derive(Debug, Error)]
pub enum CthError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Discs(#[from] DiscError),
    #[error(transparent)]
    F2(#[from] F2Error),
    #[error("differential does not square to zero on the block complex")]
    SquareNonzero,
    #[error("differential does not respect the action filtration")]
    FiltrationNotRespected,
    #[error("continuation candidate is not a cycle")]
    NotACycle,
    #[error("inputs are not composable: {0}")]
    NonComposableInputs(String),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Error)]
pub enum AinfError {
    #[error("tensor entry has incompatible shape: {0}")]
    ShapeMismatch(String),
}
