//! The elementary moves on based complexes and scripts of them.
//!
//! A [`MoveScript`] that ends in the empty complex certifies that its initial
//! complex has trivial Whitehead torsion.

use std::fmt;

use thiserror::Error;

use crate::chain::{BasedComplex, Generator};
use crate::group_algebra::{RingElement, TrivialUnit};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// Adjoin `a` in `degree` and `b` in `degree + 1` with `d(a) = b`.
    /// `levels` gives the filtration levels of `a` and `b` and is required
    /// exactly when the complex is filtered.
    Expand {
        a: String,
        b: String,
        degree: i64,
        levels: Option<(i64, i64)>,
    },
    /// Remove a pair with `d(a) = b`, the 1 being alone in its row and column.
    Collapse { a: String, b: String },
    /// Replace `target` by `target + c * source`.
    Slide {
        target: String,
        source: String,
        c: RingElement,
    },
    /// Replace `label` by `u * label`.
    BaseChange { label: String, u: TrivialUnit },
}

impl Move {
    pub fn expand(a: impl Into<String>, b: impl Into<String>, degree: i64) -> Move {
        Move::Expand {
            a: a.into(),
            b: b.into(),
            degree,
            levels: None,
        }
    }

    pub fn collapse(a: impl Into<String>, b: impl Into<String>) -> Move {
        Move::Collapse {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn slide(target: impl Into<String>, source: impl Into<String>, c: RingElement) -> Move {
        Move::Slide {
            target: target.into(),
            source: source.into(),
            c,
        }
    }

    pub fn base_change(label: impl Into<String>, u: TrivialUnit) -> Move {
        Move::BaseChange {
            label: label.into(),
            u,
        }
    }

    /// The move undoing `self` when applied to `before`.
    pub fn inverse(&self, before: &BasedComplex) -> Result<Move, MoveError> {
        Ok(match self {
            Move::Expand { a, b, .. } => Move::collapse(a.clone(), b.clone()),
            Move::Collapse { a, b } => {
                let ga = before.generator(a).ok_or_else(|| MoveError::UnknownLabel(a.clone()))?;
                let gb = before.generator(b).ok_or_else(|| MoveError::UnknownLabel(b.clone()))?;
                Move::Expand {
                    a: a.clone(),
                    b: b.clone(),
                    degree: ga.degree,
                    levels: ga.filtration.zip(gb.filtration),
                }
            }
            Move::Slide { target, source, c } => Move::slide(target.clone(), source.clone(), -c),
            Move::BaseChange { label, u } => Move::base_change(label.clone(), u.inverse()),
        })
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Expand { a, b, degree, .. } => write!(f, "expand {a} -> {b} in degree {degree}"),
            Move::Collapse { a, b } => write!(f, "collapse {a} -> {b}"),
            Move::Slide { target, source, c } => write!(f, "slide {target} += ({c}) {source}"),
            Move::BaseChange { label, u } => write!(f, "base change {label} *= {u}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("unknown generator {0:?}")]
    UnknownLabel(String),
    #[error("generator {0:?} already exists")]
    LabelExists(String),
    #[error("expand needs two distinct labels, got {0:?} twice")]
    ExpandSameLabel(String),
    #[error("expand levels must be given exactly when the complex is filtered")]
    ExpandLevels,
    #[error("expand levels ({a_level}, {b_level}) would let d raise the filtration")]
    ExpandLevelOrder { a_level: i64, b_level: i64 },
    #[error("slide target and source are both {0:?}")]
    SlideSameGenerator(String),
    #[error("slide {target} += c * {from} mixes degrees {target_degree} and {source_degree}")]
    SlideDegree {
        target: String,
        from: String,
        target_degree: i64,
        source_degree: i64,
    },
    #[error("slide {target} += c * {from} adds a higher filtration level to {target}")]
    SlideFiltration { target: String, from: String },
    #[error("cannot collapse {a} -> {b}: entry is {entry}, not 1")]
    CollapseEntry { a: String, b: String, entry: String },
    #[error("cannot collapse {a} -> {b}: entry ({row}, {col}) = {entry} is nonzero")]
    CollapseBlocked {
        a: String,
        b: String,
        row: String,
        col: String,
        entry: String,
    },
    #[error("move coefficient belongs to a different group")]
    GroupMismatch,
}

/// Applies one move, returning the new complex.
pub fn apply(c: &BasedComplex, m: &Move) -> Result<BasedComplex, MoveError> {
    let mut out = c.clone();
    apply_in_place(&mut out, m)?;
    Ok(out)
}

fn index(c: &BasedComplex, label: &str) -> Result<usize, MoveError> {
    c.index_of(label).ok_or_else(|| MoveError::UnknownLabel(label.to_string()))
}

pub(crate) fn apply_in_place(c: &mut BasedComplex, m: &Move) -> Result<(), MoveError> {
    match m {
        Move::Expand { a, b, degree, levels } => {
            if a == b {
                return Err(MoveError::ExpandSameLabel(a.clone()));
            }
            for l in [a, b] {
                if c.index_of(l).is_some() {
                    return Err(MoveError::LabelExists(l.clone()));
                }
            }
            // an empty complex takes whatever the move says
            if !c.is_empty() && levels.is_some() != c.is_filtered() {
                return Err(MoveError::ExpandLevels);
            }
            if let Some((la, lb)) = levels {
                if lb > la {
                    return Err(MoveError::ExpandLevelOrder { a_level: *la, b_level: *lb });
                }
            }
            c.generators.push(Generator {
                label: a.clone(),
                degree: *degree,
                filtration: levels.map(|l| l.0),
            });
            c.generators.push(Generator {
                label: b.clone(),
                degree: degree + 1,
                filtration: levels.map(|l| l.1),
            });
            c.d.push_square(a.clone());
            c.d.push_square(b.clone());
            let n = c.generators.len();
            c.d.put(n - 2, n - 1, RingElement::one(&c.group));
        }
        Move::Collapse { a, b } => {
            let (i, j) = (index(c, a)?, index(c, b)?);
            let entry = c.d.get(i, j).cloned().unwrap_or_else(|| RingElement::zero(&c.group));
            if !entry.is_one() {
                return Err(MoveError::CollapseEntry {
                    a: a.clone(),
                    b: b.clone(),
                    entry: entry.to_string(),
                });
            }
            let labels = |k: usize| c.generators[k].label.clone();
            let blocker = c
                .d
                .row(i)
                .find(|(col, _)| *col != j)
                .map(|(col, v)| (i, col, v))
                .or_else(|| c.d.col(j).find(|(row, _)| *row != i).map(|(row, v)| (row, j, v)))
                .or_else(|| c.d.col(i).next().map(|(row, v)| (row, i, v)))
                .or_else(|| c.d.row(j).next().map(|(col, v)| (j, col, v)));
            if let Some((r, k, v)) = blocker {
                return Err(MoveError::CollapseBlocked {
                    a: a.clone(),
                    b: b.clone(),
                    row: labels(r),
                    col: labels(k),
                    entry: v.to_string(),
                });
            }
            let mut drop = [i, j];
            drop.sort_unstable();
            c.generators.remove(drop[1]);
            c.generators.remove(drop[0]);
            c.d.remove_square(&drop);
        }
        Move::Slide { target, source, c: coeff } => {
            if target == source {
                return Err(MoveError::SlideSameGenerator(target.clone()));
            }
            if coeff.group() != &c.group {
                return Err(MoveError::GroupMismatch);
            }
            let (t, s) = (index(c, target)?, index(c, source)?);
            let (gt, gs) = (&c.generators[t], &c.generators[s]);
            if gt.degree != gs.degree {
                return Err(MoveError::SlideDegree {
                    target: target.clone(),
                    from: source.clone(),
                    target_degree: gt.degree,
                    source_degree: gs.degree,
                });
            }
            if gs.filtration > gt.filtration {
                return Err(MoveError::SlideFiltration {
                    target: target.clone(),
                    from: source.clone(),
                });
            }
            // t' = t + c s: row t gains c * row s, column s loses column t * c
            c.d.add_row_multiple(t, s, coeff);
            c.d.add_col_multiple(s, t, &-coeff);
        }
        Move::BaseChange { label, u } => {
            if u.group() != &c.group {
                return Err(MoveError::GroupMismatch);
            }
            let i = index(c, label)?;
            c.d.scale_row_left(i, &u.to_ring());
            c.d.scale_col_right(i, &u.inverse().to_ring());
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("move {index} ({rendered}) failed: {error}")]
pub struct ScriptError {
    pub index: usize,
    pub rendered: String,
    pub error: MoveError,
}

/// An initial complex and a word in the elementary moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveScript {
    pub initial: BasedComplex,
    pub moves: Vec<Move>,
}

impl MoveScript {
    pub fn new(initial: BasedComplex, moves: Vec<Move>) -> Self {
        MoveScript { initial, moves }
    }

    /// Replays the script and returns the final complex.
    pub fn run(&self) -> Result<BasedComplex, ScriptError> {
        let mut c = self.initial.clone();
        for (index, m) in self.moves.iter().enumerate() {
            apply_in_place(&mut c, m).map_err(|error| ScriptError {
                index,
                rendered: m.to_string(),
                error,
            })?;
        }
        Ok(c)
    }

    /// True iff the script empties its initial complex.
    pub fn verify_trivial(&self) -> Result<bool, ScriptError> {
        Ok(self.run()?.is_empty())
    }

    /// A script from `run()` back to `initial`.
    pub fn inverse_script(&self) -> Result<MoveScript, ScriptError> {
        let mut c = self.initial.clone();
        let mut inverses = Vec::with_capacity(self.moves.len());
        for (index, m) in self.moves.iter().enumerate() {
            let wrap = |error| ScriptError {
                index,
                rendered: m.to_string(),
                error,
            };
            inverses.push(m.inverse(&c).map_err(wrap)?);
            apply_in_place(&mut c, m).map_err(wrap)?;
        }
        inverses.reverse();
        Ok(MoveScript::new(c, inverses))
    }

    /// Appends `other`, whose initial complex must be this script's result.
    pub fn then(mut self, other: MoveScript) -> MoveScript {
        self.moves.extend(other.moves);
        self
    }
}
