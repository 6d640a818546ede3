use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    associated_graded, lift_top_levels, mapping_cone, pivot_script, TorsionError, TorsionVector,
    CONE_SOURCE_PREFIX, CONE_TARGET_PREFIX,
};
use crate::chain::{BasedComplex, ChainHomotopy, ChainMap, Generator};
use crate::group_algebra::{GroupSpec, RingElement, TrivialUnit};
use crate::moves::{Move, MoveScript};

const TOP_PREFIX: &str = "c2.";
const SECOND_PREFIX: &str = "cb.";

/// Replayable evidence that homotopic maps have the same torsion.
///
/// `to_cone_f` and `to_cone_g` start from `middle` under its two filtrations
/// and end in `cone(f)` and in `cone(g)` with its source summand relabelled
/// `cb.`. The two quotient certificates empty the top filtration quotients,
/// which are cones of identity maps.
#[derive(Clone, Debug)]
pub struct HomotopyEvidence {
    pub middle: BasedComplex,
    pub to_cone_f: MoveScript,
    pub to_cone_g: MoveScript,
    pub quotient_certificates: [MoveScript; 2],
    pub torsion_f: Option<TorsionVector>,
    pub torsion_g: Option<TorsionVector>,
}

impl HomotopyEvidence {
    /// True when both torsion vectors exist and agree up to trivial units.
    pub fn torsions_agree(&self, tol: f64) -> Option<bool> {
        match (&self.torsion_f, &self.torsion_g) {
            (Some(a), Some(b)) => Some(a.equal_up_to_trivial_units(b, tol)),
            _ => None,
        }
    }

    pub fn max_logabs_diff(&self) -> Option<f64> {
        match (&self.torsion_f, &self.torsion_g) {
            (Some(a), Some(b)) => Some(a.max_logabs_diff(b)),
            _ => None,
        }
    }

    /// Replays every script and compares the endpoints.
    pub fn check(&self, h: &ChainHomotopy) -> Result<(), TorsionError> {
        let cone_f = mapping_cone(h.f())?.without_filtration();
        let cone_g = relabel_source(&mapping_cone(h.g())?.without_filtration())?;
        if self.to_cone_f.run()?.without_filtration() != cone_f {
            return Err(TorsionError::ResidualMismatch("cone(f)".into()));
        }
        if self.to_cone_g.run()?.without_filtration() != cone_g {
            return Err(TorsionError::ResidualMismatch("cone(g)".into()));
        }
        for q in &self.quotient_certificates {
            if !q.verify_trivial()? {
                return Err(TorsionError::ResidualMismatch("top quotient not emptied".into()));
            }
        }
        Ok(())
    }
}

fn relabel_source(c: &BasedComplex) -> Result<BasedComplex, TorsionError> {
    Ok(c.relabel(|l| match l.strip_prefix(CONE_SOURCE_PREFIX) {
        Some(rest) => format!("{SECOND_PREFIX}{rest}"),
        None => l.to_string(),
    })?)
}

/// The complex `C[2] + C[1] + C[1] + D` whose two filtrations have graded
/// pieces `cone(id), cone(f)` and `cone(id), cone(-g)`.
fn middle_complex(h: &ChainHomotopy) -> Result<BasedComplex, TorsionError> {
    let (c, d) = (h.f().source(), h.f().target());
    let group = c.group().clone();
    let mut gens = Vec::new();
    for (prefix, shift) in [(TOP_PREFIX, 2), (CONE_SOURCE_PREFIX, 1), (SECOND_PREFIX, 1)] {
        for g in c.generators() {
            gens.push(Generator::new(format!("{prefix}{}", g.label), g.degree - shift));
        }
    }
    for g in d.generators() {
        gens.push(Generator::new(format!("{CONE_TARGET_PREFIX}{}", g.label), g.degree));
    }
    let mut entries: Vec<(String, String, RingElement)> = Vec::new();
    let a = c.differential();
    for ((i, j), v) in a.entries() {
        let (x, y) = (&a.rows()[i], &a.cols()[j]);
        entries.push((format!("{TOP_PREFIX}{x}"), format!("{TOP_PREFIX}{y}"), v.clone()));
        entries.push((format!("{CONE_SOURCE_PREFIX}{x}"), format!("{CONE_SOURCE_PREFIX}{y}"), -v));
        entries.push((format!("{SECOND_PREFIX}{x}"), format!("{SECOND_PREFIX}{y}"), -v));
    }
    let one = RingElement::one(&group);
    for g in c.generators() {
        let top = format!("{TOP_PREFIX}{}", g.label);
        entries.push((top.clone(), format!("{CONE_SOURCE_PREFIX}{}", g.label), one.clone()));
        entries.push((top, format!("{SECOND_PREFIX}{}", g.label), one.clone()));
    }
    let mut block = |m: &crate::group_algebra::RingMatrix, from: &str, to: &str, negate: bool| {
        for ((i, j), v) in m.entries() {
            let v = if negate { -v } else { v.clone() };
            entries.push((format!("{from}{}", m.rows()[i]), format!("{to}{}", m.cols()[j]), v));
        }
    };
    block(h.phi(), TOP_PREFIX, CONE_TARGET_PREFIX, true);
    block(h.f().matrix(), CONE_SOURCE_PREFIX, CONE_TARGET_PREFIX, false);
    block(h.g().matrix(), SECOND_PREFIX, CONE_TARGET_PREFIX, true);
    block(d.differential(), CONE_TARGET_PREFIX, CONE_TARGET_PREFIX, false);
    Ok(BasedComplex::new(
        &group,
        gens,
        entries.iter().map(|(x, y, v)| (x.as_str(), y.as_str(), v.clone())),
    )?)
}

/// Filters `middle` with `top` prefixes at level 1, lifts the identity-cone
/// certificate of the top quotient and returns it with the lifted script.
fn lift_through(
    middle: &BasedComplex,
    c: &BasedComplex,
    pair_prefix: &str,
) -> Result<(MoveScript, MoveScript, BasedComplex), TorsionError> {
    let filtered = middle.with_filtration(|g| {
        Some(i64::from(g.label.starts_with(TOP_PREFIX) || g.label.starts_with(pair_prefix)))
    });
    let mut order: Vec<&Generator> = c.generators().iter().collect();
    order.sort_by(|a, b| b.degree.cmp(&a.degree).then(a.label.cmp(&b.label)));
    let pairs: Vec<(String, String)> = order
        .iter()
        .map(|g| (format!("{TOP_PREFIX}{}", g.label), format!("{pair_prefix}{}", g.label)))
        .collect();
    let quotient = pivot_script(&associated_graded(&filtered, 1), &pairs)?;
    let per_level = BTreeMap::from([(1, quotient.clone())]);
    let (lifted, residual) = lift_top_levels(&filtered, &per_level)?;
    Ok((quotient, lifted, residual))
}

/// Builds the middle complex of a homotopy `f ~ g` and move scripts from it
/// to `cone(f)` and to `cone(g)`, and compares the torsion vectors of the
/// two cones when the group is cyclic.
pub fn homotopy_equal_torsion(h: &ChainHomotopy) -> Result<HomotopyEvidence, TorsionError> {
    let c = h.f().source();
    let middle = middle_complex(h)?;

    let (quotient_f, to_cone_f, residual_f) = lift_through(&middle, c, SECOND_PREFIX)?;
    let cone_f = mapping_cone(h.f())?.without_filtration();
    if residual_f.without_filtration() != cone_f {
        return Err(TorsionError::ResidualMismatch("cone(f)".into()));
    }

    let (quotient_g, mut to_cone_g, residual_g) = lift_through(&middle, c, CONE_SOURCE_PREFIX)?;
    let minus = TrivialUnit::one(c.group()).negate();
    for g in c.generators() {
        to_cone_g
            .moves
            .push(Move::base_change(format!("{SECOND_PREFIX}{}", g.label), minus.clone()));
    }
    let cone_g = relabel_source(&mapping_cone(h.g())?.without_filtration())?;
    let mut end = residual_g;
    for m in &to_cone_g.moves[to_cone_g.moves.len() - c.len()..] {
        end = crate::moves::apply(&end, m)?;
    }
    if end.without_filtration() != cone_g {
        return Err(TorsionError::ResidualMismatch("cone(g)".into()));
    }

    let (torsion_f, torsion_g) = match c.group() {
        GroupSpec::Cyclic(_) => (Some(TorsionVector::of(&cone_f)?), Some(TorsionVector::of(&cone_g)?)),
        _ => (None, None),
    };
    Ok(HomotopyEvidence {
        middle,
        to_cone_f,
        to_cone_g,
        quotient_certificates: [quotient_f, quotient_g],
        torsion_f,
        torsion_g,
    })
}

/// Torsion vectors of `f`, `g` and `f ∘ g` (apply `g` first).
#[derive(Clone, Debug, Serialize)]
pub struct CompositionReport {
    pub tau_f: TorsionVector,
    pub tau_g: TorsionVector,
    pub tau_composite: TorsionVector,
    pub product: TorsionVector,
    pub max_logabs_defect: f64,
}

impl CompositionReport {
    pub fn additive(&self, tol: f64) -> bool {
        self.max_logabs_defect <= tol
    }
}

pub fn torsion_of_composition(f: &ChainMap, g: &ChainMap) -> Result<CompositionReport, TorsionError> {
    let composite = f.after(g)?;
    let tau_f = TorsionVector::of(&mapping_cone(f)?)?;
    let tau_g = TorsionVector::of(&mapping_cone(g)?)?;
    let tau_composite = TorsionVector::of(&mapping_cone(&composite)?)?;
    let product = tau_f.product(&tau_g);
    let max_logabs_defect = tau_composite.max_logabs_diff(&product);
    Ok(CompositionReport {
        tau_f,
        tau_g,
        tau_composite,
        product,
        max_logabs_defect,
    })
}
