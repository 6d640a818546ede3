use std::collections::BTreeMap;

use super::{mapping_cone, Recorder, TorsionError, CONE_SOURCE_PREFIX, CONE_TARGET_PREFIX};
use crate::chain::{BasedComplex, ChainMap};
use crate::moves::{Move, MoveScript};

/// The graded piece of a filtered complex at `level`, without filtration.
pub fn associated_graded(c: &BasedComplex, level: i64) -> BasedComplex {
    c.restrict(|g| g.filtration == Some(level)).without_filtration()
}

/// Empties a filtered complex level by level, from the top down, given a
/// script emptying each graded piece.
///
/// Graded moves are replayed on the whole complex. Before each collapse
/// `a -> b`, the entries of `d(a)` in lower levels are moved onto `b` by
/// slides, so the lower part of the complex is never touched.
pub fn lift_filtration_certificate(
    c: &BasedComplex,
    per_level: &BTreeMap<i64, MoveScript>,
) -> Result<MoveScript, TorsionError> {
    let (script, residual) = lift_top_levels(c, per_level)?;
    if let Some(&top) = residual.levels().last() {
        return Err(TorsionError::MissingLevel(top));
    }
    Ok(script)
}

/// Like [`lift_filtration_certificate`] but stops at the first level without
/// a script and returns what is left below it.
pub fn lift_top_levels(
    c: &BasedComplex,
    per_level: &BTreeMap<i64, MoveScript>,
) -> Result<(MoveScript, BasedComplex), TorsionError> {
    if !c.is_filtered() && !c.is_empty() {
        return Err(TorsionError::NotFiltered);
    }
    c.validate().map_err(crate::chain::ChainError::from)?;
    let mut rec = Recorder::new(c.clone());
    for &level in c.levels().iter().rev() {
        let Some(script) = per_level.get(&level) else {
            break;
        };
        if script.initial != associated_graded(&rec.work, level) {
            return Err(TorsionError::LevelMismatch { level });
        }
        for (index, m) in script.moves.iter().enumerate() {
            let fail = |error| TorsionError::LevelScript {
                level,
                index,
                rendered: m.to_string(),
                error,
            };
            match m {
                Move::Expand { a, b, degree, .. } => {
                    rec.apply(Move::Expand {
                        a: a.clone(),
                        b: b.clone(),
                        degree: *degree,
                        levels: Some((level, level)),
                    })
                    .map_err(fail)?;
                }
                Move::Collapse { a, b } => {
                    for slide in clearing_slides(&rec.work, a, b, level) {
                        rec.apply(slide).map_err(fail)?;
                    }
                    rec.apply(m.clone()).map_err(fail)?;
                }
                _ => rec.apply(m.clone()).map_err(fail)?,
            }
        }
        let remaining = associated_graded(&rec.work, level).len();
        if remaining > 0 {
            return Err(TorsionError::LevelNotEmptied { level, remaining });
        }
    }
    let residual = rec.work.clone();
    Ok((rec.into_script(c.clone()), residual))
}

/// Slides `b += d(a)[s] * s` for every `s` below `level` in `d(a)`.
fn clearing_slides(c: &BasedComplex, a: &str, b: &str, level: i64) -> Vec<Move> {
    let Some(ai) = c.index_of(a) else {
        return Vec::new();
    };
    let gens = c.generators();
    c.differential()
        .row(ai)
        .filter(|(j, _)| gens[*j].filtration.is_some_and(|l| l < level))
        .map(|(j, v)| Move::slide(b, gens[j].label.clone(), v.clone()))
        .collect()
}

/// Certificate that a filtered map which pairs the generators level by level
/// with trivial units on the diagonal has trivial torsion: a script emptying
/// its mapping cone.
pub fn unit_triangular_certificate(f: &ChainMap) -> Result<MoveScript, TorsionError> {
    let (src, tgt) = (f.source(), f.target());
    if !(src.is_filtered() || src.is_empty()) || !(tgt.is_filtered() || tgt.is_empty()) {
        return Err(TorsionError::NotFiltered);
    }
    let cone = mapping_cone(f)?;
    let mut levels = src.levels();
    levels.extend(tgt.levels());
    levels.sort_unstable();
    levels.dedup();
    let mut per_level = BTreeMap::new();
    for level in levels {
        let xs: Vec<_> = src.generators().iter().filter(|g| g.filtration == Some(level)).collect();
        let ys: Vec<_> = tgt.generators().iter().filter(|g| g.filtration == Some(level)).collect();
        if xs.len() != 1 || ys.len() != 1 {
            return Err(TorsionError::Pairing {
                level,
                sources: xs.len(),
                targets: ys.len(),
            });
        }
        let (x, y) = (&xs[0].label, &ys[0].label);
        let entry = f.matrix().entry(x, y)?;
        let u = entry.as_trivial_unit().ok_or_else(|| TorsionError::NonUnitDiagonal {
            source_label: x.clone(),
            target_label: y.clone(),
            entry: entry.to_string(),
        })?;
        let a = format!("{CONE_SOURCE_PREFIX}{x}");
        let b = format!("{CONE_TARGET_PREFIX}{y}");
        let script = MoveScript::new(
            associated_graded(&cone, level),
            vec![Move::base_change(&a, u.inverse()), Move::collapse(a, b)],
        );
        per_level.insert(level, script);
    }
    lift_filtration_certificate(&cone, &per_level)
}
