//! Exact computations in simple homotopy theory.
//!
//! Based chain complexes over integral group rings, the elementary moves
//! (very simple expansion, handle slide, simple base change) as replayable
//! certificates, Whitehead and Reidemeister torsion for trivial and cyclic
//! fundamental groups, and the simple-homotopy classification of 3-dimensional
//! lens spaces.

pub mod chain;
pub mod format;
pub mod group_algebra;
pub mod lens;
pub mod moves;
pub mod sample;
pub mod torsion;

pub use chain::{BasedComplex, ChainHomotopy, ChainMap, Generator};
pub use group_algebra::{GroupSpec, RingElement, RingMatrix, TrivialUnit};
pub use moves::{Move, MoveScript};
