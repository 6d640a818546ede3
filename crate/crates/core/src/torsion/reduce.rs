use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{TorsionError, TorsionVector};
use crate::chain::{unimodular_inverse, BasedComplex};
use crate::group_algebra::{from_regular_block, GroupSpec, RingElement};
use crate::moves::{apply_in_place, Move, MoveError, MoveScript};

/// Default bound on `|log|tau_j||` below which a character value counts as a
/// unit of modulus one.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

const MAX_STEPS: usize = 100_000;

/// A complex under reduction together with the moves applied so far.
pub(crate) struct Recorder {
    pub work: BasedComplex,
    pub moves: Vec<Move>,
}

impl Recorder {
    pub fn new(c: BasedComplex) -> Self {
        Recorder {
            work: c,
            moves: Vec::new(),
        }
    }

    pub fn apply(&mut self, m: Move) -> Result<(), MoveError> {
        apply_in_place(&mut self.work, &m)?;
        self.moves.push(m);
        Ok(())
    }

    fn entry(&self, x: &str, y: &str) -> Result<RingElement, MoveError> {
        let d = self.work.differential();
        let i = d.row_index(x).ok_or_else(|| MoveError::UnknownLabel(x.into()))?;
        let j = d.col_index(y).ok_or_else(|| MoveError::UnknownLabel(y.into()))?;
        Ok(d.get(i, j).cloned().unwrap_or_else(|| RingElement::zero(self.work.group())))
    }

    /// Cancels `x -> y`, whose entry must be a trivial unit: rescale to 1,
    /// clear the rest of row `x` and column `y` by slides, collapse.
    pub fn eliminate(&mut self, x: &str, y: &str) -> Result<(), MoveError> {
        let e = self.entry(x, y)?;
        let u = e.as_trivial_unit().ok_or_else(|| MoveError::CollapseEntry {
            a: x.into(),
            b: y.into(),
            entry: e.to_string(),
        })?;
        if !u.is_one() {
            self.apply(Move::base_change(x, u.inverse()))?;
        }
        let d = self.work.differential();
        let xi = d.row_index(x).expect("checked");
        let yi = d.col_index(y).expect("checked");
        let row: Vec<(String, RingElement)> = d
            .row(xi)
            .filter(|(j, _)| *j != yi)
            .map(|(j, v)| (d.cols()[j].clone(), v.clone()))
            .collect();
        let col: Vec<(String, RingElement)> = d
            .col(yi)
            .filter(|(i, _)| *i != xi)
            .map(|(i, v)| (d.rows()[i].clone(), v.clone()))
            .collect();
        for (y2, v) in row {
            self.apply(Move::slide(y, y2, v))?;
        }
        for (r, v) in col {
            self.apply(Move::slide(r, x, -v))?;
        }
        self.apply(Move::collapse(x, y))
    }

    pub fn into_script(self, initial: BasedComplex) -> MoveScript {
        MoveScript::new(initial, self.moves)
    }
}

/// Script cancelling the given pairs in order. Each entry must be a trivial
/// unit at the moment its pair is reached.
pub fn pivot_script(c: &BasedComplex, pairs: &[(String, String)]) -> Result<MoveScript, MoveError> {
    let mut rec = Recorder::new(c.clone());
    for (x, y) in pairs {
        rec.eliminate(x, y)?;
    }
    Ok(rec.into_script(c.clone()))
}

/// Result of [`greedy_reduce`]. Every script replays from the (unfiltered)
/// input to the stated residual.
#[derive(Clone, Debug)]
pub enum ReductionOutcome {
    Emptied(MoveScript),
    TwoTerm {
        matrix: crate::group_algebra::RingMatrix,
        script: MoveScript,
    },
    Stuck {
        script: MoveScript,
        residual: BasedComplex,
        diagnostic: String,
    },
}

impl ReductionOutcome {
    pub fn script(&self) -> &MoveScript {
        match self {
            ReductionOutcome::Emptied(s) => s,
            ReductionOutcome::TwoTerm { script, .. } => script,
            ReductionOutcome::Stuck { script, .. } => script,
        }
    }

    pub fn is_emptied(&self) -> bool {
        matches!(self, ReductionOutcome::Emptied(_))
    }
}

/// Eliminates trivial-unit pivots until none is left.
///
/// Pivots in the lowest row degree or highest column degree are preferred,
/// then those with the smallest fill-in `(r - 1)(c - 1)`, then by labels.
/// Over the trivial group integer entries are first reduced by Euclidean
/// slides. A square two-term residual over a finite group is attacked with
/// its inverse matrix: a pair `(x, y)` where sliding row `x` by row `y` of
/// the inverse produces a unit is cancelled next. The filtration of the
/// input, if any, is dropped.
pub fn greedy_reduce(c: &BasedComplex) -> ReductionOutcome {
    let initial = c.without_filtration();
    let mut rec = Recorder::new(initial.clone());
    for _ in 0..MAX_STEPS {
        if rec.work.is_empty() {
            return ReductionOutcome::Emptied(rec.into_script(initial));
        }
        if let Some((x, y)) = best_unit_pivot(&rec.work) {
            rec.eliminate(&x, &y).expect("pivot is a trivial unit");
            continue;
        }
        if *rec.work.group() == GroupSpec::Trivial && euclid_step(&mut rec) {
            continue;
        }
        if inverse_step(&mut rec) {
            continue;
        }
        break;
    }
    let degrees = rec.work.degrees();
    let residual = rec.work.clone();
    if degrees.len() == 2 && degrees[1] == degrees[0] + 1 {
        let matrix = residual.block(degrees[0]);
        return ReductionOutcome::TwoTerm {
            matrix,
            script: rec.into_script(initial),
        };
    }
    let diagnostic = format!(
        "no trivial-unit pivot among {} generators in degrees {:?}",
        residual.len(),
        degrees
    );
    ReductionOutcome::Stuck {
        script: rec.into_script(initial),
        residual,
        diagnostic,
    }
}

fn best_unit_pivot(c: &BasedComplex) -> Option<(String, String)> {
    let d = c.differential();
    let degrees: Vec<i64> = c.generators().iter().map(|g| g.degree).collect();
    let lo = *degrees.iter().min()?;
    let hi = *degrees.iter().max()?;
    let mut row_count = vec![0usize; d.nrows()];
    let mut col_count = vec![0usize; d.ncols()];
    for ((i, j), _) in d.entries() {
        row_count[i] += 1;
        col_count[j] += 1;
    }
    d.entries()
        .filter(|(_, v)| v.is_trivial_unit())
        .map(|((i, j), _)| {
            let extreme = degrees[i] == lo || degrees[j] == hi;
            let fill = (row_count[i] - 1) * (col_count[j] - 1);
            (!extreme, fill, &d.rows()[i], &d.cols()[j])
        })
        .min()
        .map(|(_, _, x, y)| (x.clone(), y.clone()))
}

/// One Euclidean step on the lowest-degree block over Z. Returns false when
/// no progress is possible.
fn euclid_step(rec: &mut Recorder) -> bool {
    let c = &rec.work;
    let Some(lo) = c.degrees().first().copied() else {
        return false;
    };
    let d = c.differential();
    let rows: BTreeSet<usize> = c
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.degree == lo)
        .map(|(i, _)| i)
        .collect();
    let value = |v: &RingElement| v.coeff(0);
    let Some(((x, y), p)) = d
        .entries()
        .filter(|((i, _), _)| rows.contains(i))
        .map(|(ij, v)| (ij, value(v)))
        .min_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(a.0.cmp(&b.0)))
    else {
        return false;
    };
    let group = c.group().clone();
    let xl = d.rows()[x].clone();
    let yl = d.cols()[y].clone();
    let row: Vec<(String, BigInt)> = d
        .row(x)
        .filter(|(j, _)| *j != y)
        .map(|(j, v)| (d.cols()[j].clone(), value(v)))
        .collect();
    let col: Vec<(String, BigInt)> = d
        .col(y)
        .filter(|(i, _)| *i != x)
        .map(|(i, v)| (d.rows()[i].clone(), value(v)))
        .collect();
    let mut progress = false;
    for (y2, w) in row {
        let q = w.div_floor(&p);
        if !q.is_zero() {
            rec.apply(Move::slide(&yl, y2, RingElement::from_int(&group, q)))
                .expect("same-degree slide");
            progress = true;
        }
    }
    for (r, w) in col {
        let q = w.div_floor(&p);
        if !q.is_zero() {
            rec.apply(Move::slide(r, &xl, RingElement::from_int(&group, -q)))
                .expect("same-degree slide");
            progress = true;
        }
    }
    if progress {
        return true;
    }
    // row x and column y are isolated; borrow a non-multiple from elsewhere
    let d = rec.work.differential();
    let other = d
        .entries()
        .find(|((i, _), v)| rows.contains(i) && *i != x && !value(v).is_multiple_of(&p))
        .map(|((i, _), _)| d.rows()[i].clone());
    match other {
        Some(r) => {
            rec.apply(Move::slide(&xl, r, RingElement::one(&group)))
                .expect("same-degree slide");
            true
        }
        None => false,
    }
}

/// Square two-term residual: use the inverse matrix to manufacture a unit.
fn inverse_step(rec: &mut Recorder) -> bool {
    let degrees = rec.work.degrees();
    if degrees.len() != 2 || degrees[1] != degrees[0] + 1 {
        return false;
    }
    let m = rec.work.block(degrees[0]);
    if m.nrows() != m.ncols() {
        return false;
    }
    let Some(inv) = unimodular_inverse(&m.to_integer()) else {
        return false;
    };
    let group = rec.work.group().clone();
    let n = group.order();
    let minv = |yj: usize, xi: usize| -> RingElement {
        let block: Vec<Vec<BigInt>> = inv[yj * n..(yj + 1) * n]
            .iter()
            .map(|row| row[xi * n..(xi + 1) * n].to_vec())
            .collect();
        from_regular_block(&group, &block)
    };
    let size = m.nrows();
    let one = RingElement::one(&group);
    let entry = |i: usize, j: usize| m.get(i, j).cloned().unwrap_or_else(|| RingElement::zero(&group));

    let mut order: Vec<(usize, usize)> = (0..size).flat_map(|i| (0..size).map(move |j| (i, j))).collect();
    order.sort_by(|a, b| (&m.rows()[a.0], &m.cols()[a.1]).cmp(&(&m.rows()[b.0], &m.cols()[b.1])));

    for &(xi, yj) in &order {
        // x += sum_{k != x} inv[y, k] k puts (1 - inv[y, x]) m[x, y] + 1 at (x, y)
        let g = minv(yj, xi);
        let e = &(&(&one - &g) * &entry(xi, yj)) + &one;
        if e.is_trivial_unit() || g.is_trivial_unit() {
            let x = m.rows()[xi].clone();
            let y = m.cols()[yj].clone();
            if let Some(u) = g.as_trivial_unit().filter(|_| !e.is_trivial_unit()) {
                // x -> u x + sum_{k != x} inv[y, k] k is exactly row y of inv * m
                rec.apply(Move::base_change(&x, u)).expect("label exists");
            }
            for k in 0..size {
                if k == xi {
                    continue;
                }
                let c = minv(yj, k);
                if !c.is_zero() {
                    rec.apply(Move::slide(&x, &m.rows()[k], c)).expect("same-degree slide");
                }
            }
            rec.eliminate(&x, &y).expect("entry is a trivial unit");
            return true;
        }
    }
    false
}

/// Verdict of [`is_trivial_torsion`].
#[derive(Clone, Debug)]
pub enum Decision {
    /// Witnessed by a script emptying the (unfiltered) complex.
    Trivial { script: MoveScript },
    /// Some character value has modulus away from 1.
    NonTrivial { character: usize, logabs: f64 },
    Unknown { reason: String },
}

/// Decides triviality of the torsion of an acyclic complex with the default
/// tolerance.
pub fn is_trivial_torsion(c: &BasedComplex) -> Result<Decision, TorsionError> {
    is_trivial_torsion_with_tolerance(c, DEFAULT_TOLERANCE)
}

pub fn is_trivial_torsion_with_tolerance(c: &BasedComplex, tol: f64) -> Result<Decision, TorsionError> {
    if let Some(degree) = c.first_homology_degree() {
        return Err(TorsionError::NotAcyclic {
            degree,
            character: None,
        });
    }
    if let GroupSpec::Cyclic(_) = c.group() {
        let tv = TorsionVector::of(c)?;
        if let Some((j, v)) = tv.worst_character().filter(|(_, v)| v.abs() > tol) {
            return Ok(Decision::NonTrivial {
                character: j,
                logabs: v,
            });
        }
    }
    Ok(match greedy_reduce(c) {
        ReductionOutcome::Emptied(script) => Decision::Trivial { script },
        ReductionOutcome::TwoTerm { matrix, .. } => Decision::Unknown {
            reason: format!(
                "greedy reduction stopped at a {}x{} two-term complex",
                matrix.nrows(),
                matrix.ncols()
            ),
        },
        ReductionOutcome::Stuck { diagnostic, .. } => Decision::Unknown { reason: diagnostic },
    })
}
