use std::sync::atomic::{AtomicBool, Ordering};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix does not have full row rank (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("malformed input: {0}")]
    InvalidInput(String),

    #[error("fan axiom violated by maximal cones {first} and {second}: intersection is not a common face")]
    FanAxiomViolation { first: usize, second: usize },

    #[error("operation requires a simplicial fan")]
    NotSimplicial,

    #[error("ray lies outside the support of the fan")]
    RayOutsideSupport,

    #[error("expected a nonempty element set")]
    EmptySet,

    #[error("cannot blow up the minimum element")]
    BlowUpAtBottom,

    #[error("element {0} is not present in the current semilattice")]
    ElementVanished(String),

    #[error("family is not sorted: a later element lies above an earlier one")]
    FamilyNotSorted,

    #[error("not a meet-semilattice: {0}")]
    NotASemilattice(String),

    #[error("size guard exceeded: {what} requires n <= {max}, got {n}")]
    Guard { what: &'static str, n: usize, max: usize },

    #[error("point lies outside the cone {0}")]
    OutsideCone(&'static str),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

static GUARDS_LIFTED: AtomicBool = AtomicBool::new(false);

/// Largest `n` for which pair sets fit the `u64` masks; never lifted.
pub const HARD_MAX_N: usize = 10;

/// Lifts the size guards process-wide, up to [`HARD_MAX_N`].
pub fn lift_size_guards(on: bool) {
    GUARDS_LIFTED.store(on, Ordering::Relaxed);
}

pub fn size_guards_lifted() -> bool {
    GUARDS_LIFTED.load(Ordering::Relaxed)
}

pub(crate) fn guard(what: &'static str, n: usize, max: usize) -> Result<()> {
    let max = if size_guards_lifted() { HARD_MAX_N } else { max };
    if n > max {
        Err(Error::Guard { what, n, max })
    } else {
        Ok(())
    }
}
