//! Error type shared by all engine modules.

use thiserror::Error;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EngineError {
    /// Bad argument to an operation (out-of-range residue, finite set where
    /// an infinite one is required, and so on).
    #[error("argument error: {0}")]
    Argument(String),

    /// Cells handed to a piecewise constructor overlap or fail to cover the
    /// index space.
    #[error("partition error: {0}")]
    Partition(String),

    /// Division by a sequence that vanishes on an infinite cell.
    #[error("division error: divisor is zero on an infinite cell ({0})")]
    Division(String),

    /// The generators of a would-be filter have finite intersection.
    #[error("improper filter: generator intersection is finite ({0})")]
    ImproperFilter(String),

    /// A formula falls outside the fragment the engine can decide.
    #[error("fragment error: {0}")]
    Fragment(String),

    /// Text failed to parse; `pos` is a byte offset into the input line.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// A real function is undefined where it was asked about.
    #[error("domain error: {0}")]
    Domain(String),

    /// A residue chooser disagrees with itself across divisible moduli.
    #[error("incoherent chooser: r_{larger} = {larger_res} but r_{smaller} = {smaller_res} (expected {larger_res} = {smaller_res} mod {smaller})")]
    IncoherentChooser {
        smaller: u64,
        smaller_res: u64,
        larger: u64,
        larger_res: u64,
    },

    /// A saturation chain fails its nesting/nonemptiness precondition.
    #[error("chain precondition fails at k = {k}: {what}")]
    ChainPrecondition { k: usize, what: String },

    /// A requested modulus grew beyond what the engine will materialize.
    #[error("modulus overflow: {0} exceeds the supported bound")]
    ModulusOverflow(u64),

    /// A name used in a formula or command has no binding.
    #[error("unbound name: {0}")]
    Unbound(String),

    /// An internal invariant was violated; indicates an engine bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;
