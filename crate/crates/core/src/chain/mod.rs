//! Based chain complexes over Z[G], chain maps and homotopies, and integral
//! homology through Smith normal form.

mod complex;
mod map;
mod snf;

pub use complex::{BasedComplex, Generator, HomologyGroup, Violation};
pub use map::{ChainHomotopy, ChainMap};
pub use snf::{mat_mul, smith_normal_form, unimodular_inverse, IntMatrix, SmithForm};

use thiserror::Error;

use crate::group_algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid complex: {0}")]
    Invalid(#[from] Violation),
    #[error("complexes belong to different groups")]
    GroupMismatch,
    #[error("map matrix labels do not match source and target bases")]
    MapShape,
    #[error("map entry {from} -> {to} has the wrong degree")]
    MapDegree { from: String, to: String },
    #[error("map entry {from} -> {to} raises the filtration level")]
    MapFiltration { from: String, to: String },
    #[error("not a chain map: (d f - f d)[{from}, {to}] = {value}")]
    NotAChainMap { from: String, to: String, value: String },
    #[error("not a homotopy: (d Phi + Phi d - f + g)[{from}, {to}] = {value}")]
    NotAHomotopy { from: String, to: String, value: String },
    #[error("maps are not composable")]
    NotComposable,
}
