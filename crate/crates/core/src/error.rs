//! Error types shared across the engine and verification layers.

use thiserror::Error;

/// Errors produced by tile-set validation, assembly operations, the
/// exploration engine, scripted assembly, and verification checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An assembly references a tile name absent from the tile set.
    #[error("unknown tile name: {0}")]
    UnknownTileName(String),

    /// Two tile types in one tile set share a name.
    #[error("duplicate tile name: {0}")]
    DuplicateTileName(String),

    /// One glue label was declared with two different strengths.
    #[error("glue label {label:?} declared with strengths {first} and {second}")]
    GlueStrengthConflict {
        label: String,
        first: u32,
        second: u32,
    },

    /// A combination or script step names more pieces than the system has hands.
    #[error("step uses {used} pieces but the system has only {hands} hands")]
    HandCountExceeded { used: usize, hands: usize },

    /// Exploration hit its round budget before saturating.
    #[error("exploration budget exceeded after {rounds} rounds (unsaturated)")]
    BudgetExceeded { rounds: usize },

    /// A guided script step produced a union whose min-cut is below tau.
    #[error("step {step} union is unstable: min-cut {cut} < tau {tau}")]
    StepUnstable { step: usize, cut: u64, tau: u32 },

    /// A guided script step placed two tiles on the same lattice point.
    #[error("step {step} operands overlap at ({x},{y})")]
    StepOverlap { step: usize, x: i64, y: i64 },

    /// A script step references an id that no earlier step defined.
    #[error("step {step} references undefined operand {name:?}")]
    UndefinedOperand { step: usize, name: String },

    /// An operation's stated precondition does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// A verification check requires a saturated exploration report.
    #[error("exploration report is not saturated; verdict would be unsound")]
    ReportUnsaturated,
}

pub type Result<T> = std::result::Result<T, Error>;
