//! Torsion of acyclic based complexes and of chain equivalences.
//!
//! Numerical invariants come from characters of cyclic groups; triviality is
//! certified by move scripts that empty a complex.

mod cone;
mod cyclotomic;
mod filtered;
mod homotopy;
mod reduce;
mod scalar;

pub use cone::{mapping_cone, CONE_SOURCE_PREFIX, CONE_TARGET_PREFIX};
pub use filtered::{associated_graded, lift_filtration_certificate, lift_top_levels, unit_triangular_certificate};
pub use homotopy::{homotopy_equal_torsion, torsion_of_composition, CompositionReport, HomotopyEvidence};
pub use reduce::{
    greedy_reduce, is_trivial_torsion, is_trivial_torsion_with_tolerance, pivot_script, Decision,
    ReductionOutcome, DEFAULT_TOLERANCE,
};
pub use scalar::{cyclotomic_factor, torsion_scalar, TorsionVector};

pub(crate) use reduce::Recorder;

use thiserror::Error;

use crate::chain::ChainError;
use crate::group_algebra::AlgebraError;
use crate::moves::{MoveError, ScriptError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorsionError {
    #[error("torsion vectors need a cyclic group")]
    NotCyclic,
    #[error("character {j} out of range for Z/{n}")]
    CharacterOutOfRange { j: usize, n: usize },
    #[error("not acyclic: homology in degree {degree}{}", character.map(|j| format!(" at character {j}")).unwrap_or_default())]
    NotAcyclic { degree: i64, character: Option<usize> },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error("complex carries no filtration")]
    NotFiltered,
    #[error("no script for filtration level {0}")]
    MissingLevel(i64),
    #[error("script for level {level} starts from a different complex than the graded piece")]
    LevelMismatch { level: i64 },
    #[error("level {level}, move {index} ({rendered}): {error}")]
    LevelScript {
        level: i64,
        index: usize,
        rendered: String,
        error: MoveError,
    },
    #[error("script for level {level} leaves {remaining} generators")]
    LevelNotEmptied { level: i64, remaining: usize },
    #[error("level {level} has {sources} source and {targets} target generators, expected one of each")]
    Pairing { level: i64, sources: usize, targets: usize },
    #[error("diagonal entry {source_label} -> {target_label} is {entry}, not a trivial unit")]
    NonUnitDiagonal {
        source_label: String,
        target_label: String,
        entry: String,
    },
    #[error("replayed script does not reach the expected complex: {0}")]
    ResidualMismatch(String),
}

#[cfg(test)]
mod tests;
