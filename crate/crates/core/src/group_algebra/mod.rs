//! Exact arithmetic in Z[G] and matrices over it.

mod character;
mod group;
mod matrix;
mod ring;

pub use character::{character_eval, root_of_unity};
pub use group::{GroupElement, GroupSpec, MultiplicationTable};
pub use matrix::{from_regular_block, regular_block, RingMatrix};
pub use ring::{RingElement, TrivialUnit};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands belong to different groups")]
    GroupMismatch,
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("no group element with index {0}")]
    InvalidElement(usize),
    #[error("character evaluation needs a cyclic group")]
    NotCyclic,
    #[error("character index {j} out of range for Z/{n}")]
    CharacterOutOfRange { j: usize, n: usize },
    #[error("cannot parse ring element {text:?} at byte {position}: {message}")]
    Parse {
        text: String,
        position: usize,
        message: String,
    },
    #[error("{0} is not a trivial unit")]
    NotATrivialUnit(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("matrix shapes do not match")]
    ShapeMismatch,
    #[error("row operation with target = source = {0:?} is not elementary")]
    NotElementary(String),
}
