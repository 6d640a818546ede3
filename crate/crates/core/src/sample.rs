//! Seeded random instances: ring elements, units, invertible matrices,
//! acyclic and filtered complexes, chain isomorphisms and homotopies.
//!
//! Every generator takes the RNG by reference so a single seed reproduces a
//! whole run.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::chain::{unimodular_inverse, BasedComplex, ChainHomotopy, ChainMap, Generator};
use crate::group_algebra::{from_regular_block, regular_block, GroupSpec, RingElement, RingMatrix, TrivialUnit};
use crate::moves::{apply, apply_in_place, Move, MoveScript};

/// Random element with up to `max_terms` terms and coefficients in
/// `[-max_coeff, max_coeff]`.
pub fn ring_element<R: Rng + ?Sized>(rng: &mut R, group: &GroupSpec, max_terms: usize, max_coeff: i64) -> RingElement {
    let terms = rng.gen_range(0..=max_terms);
    (0..terms).fold(RingElement::zero(group), |acc, _| {
        let g = rng.gen_range(0..group.order());
        &acc + &RingElement::monomial(group, g, rng.gen_range(-max_coeff..=max_coeff))
    })
}

pub fn trivial_unit<R: Rng + ?Sized>(rng: &mut R, group: &GroupSpec) -> TrivialUnit {
    let g = group.element(rng.gen_range(0..group.order())).expect("index in range");
    TrivialUnit::new(if rng.gen_bool(0.5) { 1 } else { -1 }, g).expect("sign is ±1")
}

/// A unit of Z[Z/n] of infinite order with its inverse, when one exists
/// (n not in {1, 2, 3, 4, 6}).
///
/// `1 - t - t^4` for n = 5, `1 - t + t^2` for n = 7, otherwise
/// `(1 + t + ... + t^{a-1})^k + ((1 - a^k) / n) N` where `a` is the smallest
/// unit mod n other than ±1 and `k` its multiplicative order.
pub fn nontrivial_unit(group: &GroupSpec) -> Option<(RingElement, RingElement)> {
    let GroupSpec::Cyclic(n) = *group else {
        return None;
    };
    let u = match n {
        5 => RingElement::from_coeffs(group, &[1, -1, 0, 0, -1]),
        7 => RingElement::from_coeffs(group, &[1, -1, 1]),
        _ => {
            let a = (2..n.saturating_sub(1)).find(|a| a.gcd(&n) == 1)?;
            let k = (1..=n).find(|&k| BigInt::from(a).modpow(&BigInt::from(k), &BigInt::from(n)) == BigInt::from(1))?;
            let partial = RingElement::from_coeffs(group, &vec![1; a]);
            let power = (0..k).fold(RingElement::one(group), |acc, _| &acc * &partial);
            let correction = (BigInt::from(1) - BigInt::from(a).pow(k as u32)) / BigInt::from(n);
            let norm = RingElement::from_coeffs(group, &vec![1; n]);
            &power + &norm.scale(&correction)
        }
    };
    let inv = unimodular_inverse(&regular_block(&u))?;
    let v = from_regular_block(group, &inv);
    debug_assert!((&u * &v).is_one());
    Some((u, v))
}

/// Nonzero unit: a trivial unit, or with probability `p_nontrivial` a power
/// of [`nontrivial_unit`] times a trivial unit. Returns the unit and its inverse.
pub fn unit<R: Rng + ?Sized>(rng: &mut R, group: &GroupSpec, p_nontrivial: f64) -> (RingElement, RingElement) {
    let t = trivial_unit(rng, group);
    let (mut u, mut v) = (t.to_ring(), t.inverse().to_ring());
    if let Some((a, b)) = nontrivial_unit(group).filter(|_| rng.gen_bool(p_nontrivial)) {
        if rng.gen_bool(0.5) {
            u = &u * &a;
            v = &b * &v;
        } else {
            u = &u * &b;
            v = &a * &v;
        }
    }
    (u, v)
}

/// An invertible square matrix on `labels` and its inverse, built from
/// `steps` elementary row operations and unit rescalings.
///
/// `allowed(i, j)` restricts which row `j` may be added to row `i`.
pub fn invertible_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    group: &GroupSpec,
    labels: &[String],
    steps: usize,
    p_nontrivial: f64,
    allowed: impl Fn(usize, usize) -> bool,
) -> (RingMatrix, RingMatrix) {
    let mut a = RingMatrix::identity(group, labels.to_vec()).expect("unique labels");
    let mut inv = a.clone();
    let n = labels.len();
    if n == 0 {
        return (a, inv);
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && allowed(i, j))
        .collect();
    for _ in 0..steps {
        if pairs.is_empty() || rng.gen_bool(0.3) {
            let i = rng.gen_range(0..n);
            let (u, v) = unit(rng, group, p_nontrivial);
            a.scale_row_left(i, &u);
            inv.scale_col_right(i, &v);
        } else {
            let &(i, j) = pairs.choose(rng).expect("nonempty");
            let c = ring_element(rng, group, 2, 2);
            a.add_row_multiple(i, j, &c);
            inv.add_col_multiple(j, i, &-&c);
        }
    }
    (a, inv)
}

fn labels(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

/// Acyclic complex with at most `max_gens` generators in degrees `-3..=1`:
/// a sum of two-term blocks with invertible matrices, mixed by slides so
/// that neighbouring blocks interact.
pub fn acyclic_complex<R: Rng + ?Sized>(rng: &mut R, group: &GroupSpec, max_gens: usize, p_nontrivial: f64) -> BasedComplex {
    let mut c = BasedComplex::empty(group);
    let mut next = 0usize;
    let mut remaining = (max_gens / 2).max(1);
    while remaining > 0 {
        let size = rng.gen_range(1..=remaining.min(2));
        remaining -= size;
        let lower = rng.gen_range(-3..=0);
        let rows = labels(&format!("g{next}r"), size);
        let cols = labels(&format!("g{next}c"), size);
        next += 1;
        let (a, _) = invertible_matrix(rng, group, &rows, 3, p_nontrivial, |_, _| true);
        let mut gens: Vec<Generator> = c.generators().to_vec();
        gens.extend(rows.iter().map(|l| Generator::new(l.clone(), lower)));
        gens.extend(cols.iter().map(|l| Generator::new(l.clone(), lower + 1)));
        let mut entries: Vec<(String, String, RingElement)> = c
            .differential()
            .entries()
            .map(|((i, j), v)| (c.labels()[i].clone(), c.labels()[j].clone(), v.clone()))
            .collect();
        for ((i, j), v) in a.entries() {
            entries.push((rows[i].clone(), cols[j].clone(), v.clone()));
        }
        c = BasedComplex::new(group, gens, entries.iter().map(|(x, y, v)| (x.as_str(), y.as_str(), v.clone())))
            .expect("block sum is a complex");
    }
    for _ in 0..4 {
        if let Some(m) = slide_move(rng, &c) {
            apply_in_place(&mut c, &m).expect("valid slide");
        }
    }
    c
}

fn slide_move<R: Rng + ?Sized>(rng: &mut R, c: &BasedComplex) -> Option<Move> {
    let gens = c.generators();
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|i| (0..gens.len()).map(move |j| (i, j)))
        .filter(|&(t, s)| {
            t != s
                && gens[t].degree == gens[s].degree
                && match (gens[t].filtration, gens[s].filtration) {
                    (Some(lt), Some(ls)) => ls <= lt,
                    _ => true,
                }
        })
        .collect();
    let &(t, s) = pairs.choose(rng)?;
    let mut coeff = ring_element(rng, c.group(), 2, 2);
    if coeff.is_zero() {
        coeff = RingElement::one(c.group());
    }
    Some(Move::slide(gens[t].label.clone(), gens[s].label.clone(), coeff))
}

/// A random move that applies to `c`. Expansions use fresh labels
/// `x<k>`/`y<k>` drawn from `fresh` and are skipped once `c` has
/// `max_gens` generators.
pub fn valid_move<R: Rng + ?Sized>(rng: &mut R, c: &BasedComplex, fresh: &mut usize, max_gens: usize) -> Move {
    loop {
        let kind = rng.gen_range(0..10);
        let candidate = match kind {
            0..=4 => slide_move(rng, c),
            5 | 6 => c.generators().choose(rng).map(|g| Move::base_change(g.label.clone(), trivial_unit(rng, c.group()))),
            7 if c.len() + 2 <= max_gens => {
                let degree = match (c.degrees().first(), c.degrees().last()) {
                    (Some(&lo), Some(&hi)) => rng.gen_range(lo - 1..=hi),
                    _ => 0,
                };
                let levels = if c.is_filtered() {
                    let levels = c.levels();
                    let la = *levels.choose(rng).expect("filtered complex has levels");
                    let lb = **levels.iter().filter(|&&l| l <= la).collect::<Vec<_>>().choose(rng).expect("la itself");
                    Some((la, lb))
                } else {
                    None
                };
                let k = *fresh;
                *fresh += 1;
                Some(Move::Expand {
                    a: format!("x{k}"),
                    b: format!("y{k}"),
                    degree,
                    levels,
                })
            }
            _ => collapsible_pair(c).map(|(a, b)| Move::collapse(a, b)),
        };
        if let Some(m) = candidate {
            if apply(c, &m).is_ok() {
                return m;
            }
        }
    }
}

fn collapsible_pair(c: &BasedComplex) -> Option<(String, String)> {
    let d = c.differential();
    d.entries()
        .filter(|(_, v)| v.is_one())
        .map(|((i, j), _)| Move::collapse(d.rows()[i].clone(), d.cols()[j].clone()))
        .find(|m| apply(c, m).is_ok())
        .map(|m| match m {
            Move::Collapse { a, b } => (a, b),
            _ => unreachable!(),
        })
}

/// A filtered complex with `levels` levels whose graded pieces have trivial
/// torsion, together with a script emptying each graded piece.
///
/// Each piece is grown from the empty complex by expansions, slides and base
/// changes; the pieces are then coupled by slides from lower to higher
/// levels, which leave the graded pieces unchanged.
pub fn filtered_complex<R: Rng + ?Sized>(
    rng: &mut R,
    group: &GroupSpec,
    levels: usize,
    max_gens_per_level: usize,
) -> (BasedComplex, BTreeMap<i64, MoveScript>) {
    let mut level_values = Vec::new();
    let mut level = 0i64;
    for _ in 0..levels {
        level_values.push(level);
        level += rng.gen_range(1..=2);
    }
    let mut parts = Vec::new();
    for &p in &level_values {
        let mut piece = BasedComplex::empty(group);
        let mut moves = Vec::new();
        let mut fresh = 0;
        let pairs = rng.gen_range(1..=(max_gens_per_level / 2).max(1));
        for _ in 0..pairs {
            let degree = rng.gen_range(-2..=0);
            let m = Move::expand(format!("l{p}x{fresh}"), format!("l{p}y{fresh}"), degree);
            fresh += 1;
            apply_in_place(&mut piece, &m).expect("fresh labels");
            moves.push(m);
        }
        for _ in 0..rng.gen_range(2..6) {
            let m = match rng.gen_range(0..3) {
                0 => piece
                    .generators()
                    .choose(rng)
                    .map(|g| Move::base_change(g.label.clone(), trivial_unit(rng, group))),
                _ => slide_move(rng, &piece),
            };
            if let Some(m) = m {
                apply_in_place(&mut piece, &m).expect("valid move");
                moves.push(m);
            }
        }
        let growth = MoveScript::new(BasedComplex::empty(group), moves);
        let emptying = growth.inverse_script().expect("growth replays");
        parts.push((p, piece, emptying));
    }
    let mut gens = Vec::new();
    let mut entries: Vec<(String, String, RingElement)> = Vec::new();
    for (p, piece, _) in &parts {
        for g in piece.generators() {
            gens.push(Generator::filtered(g.label.clone(), g.degree, *p));
        }
        let d = piece.differential();
        for ((i, j), v) in d.entries() {
            entries.push((d.rows()[i].clone(), d.cols()[j].clone(), v.clone()));
        }
    }
    let mut c = BasedComplex::new(group, gens, entries.iter().map(|(x, y, v)| (x.as_str(), y.as_str(), v.clone())))
        .expect("sum of complexes");
    for _ in 0..rng.gen_range(2..8) {
        let gs = c.generators().to_vec();
        let pairs: Vec<(usize, usize)> = (0..gs.len())
            .flat_map(|i| (0..gs.len()).map(move |j| (i, j)))
            .filter(|&(t, s)| gs[t].degree == gs[s].degree && gs[s].filtration < gs[t].filtration)
            .collect();
        let Some(&(t, s)) = pairs.choose(rng) else {
            break;
        };
        let coeff = ring_element(rng, group, 2, 3);
        apply_in_place(&mut c, &Move::slide(gs[t].label.clone(), gs[s].label.clone(), coeff)).expect("cross slide");
    }
    let per_level = parts.into_iter().map(|(p, _, s)| (p, s)).collect();
    (c, per_level)
}

/// `P^-1 d P` on the basis of `c`, relabelled with `rename`.
fn conjugate(
    c: &BasedComplex,
    p: &RingMatrix,
    p_inv: &RingMatrix,
    rename: impl Fn(&str) -> String,
) -> BasedComplex {
    let d = p_inv.try_mul(c.differential()).and_then(|m| m.try_mul(p)).expect("same labels");
    let gens: Vec<Generator> = c
        .generators()
        .iter()
        .map(|g| Generator {
            label: rename(&g.label),
            ..g.clone()
        })
        .collect();
    let new_labels: Vec<String> = gens.iter().map(|g| g.label.clone()).collect();
    let d = d.relabel(new_labels.clone(), new_labels).expect("unique labels");
    BasedComplex::new(
        c.group(),
        gens,
        d.entries()
            .map(|((i, j), v)| (d.rows()[i].as_str(), d.cols()[j].as_str(), v.clone()))
            .collect::<Vec<_>>(),
    )
    .expect("conjugate of a complex")
}

/// Base-preserving isomorphism data: `P` respecting degrees (and levels,
/// when `c` is filtered, with the diagonal kept as trivial units when
/// `unit_diagonal`).
fn degree_preserving<R: Rng + ?Sized>(
    rng: &mut R,
    c: &BasedComplex,
    steps: usize,
    p_nontrivial: f64,
    triangular: bool,
) -> (RingMatrix, RingMatrix) {
    let gens = c.generators().to_vec();
    let labels = c.labels();
    invertible_matrix(rng, c.group(), &labels, steps, p_nontrivial, |i, j| {
        gens[i].degree == gens[j].degree && (!triangular || gens[j].filtration < gens[i].filtration)
    })
}

/// An isomorphism `f: c -> D` where `D` has the basis of `c` relabelled
/// with `target_prefix` and differential `P^-1 d P`.
pub fn isomorphism_from<R: Rng + ?Sized>(
    rng: &mut R,
    c: &BasedComplex,
    target_prefix: &str,
    p_nontrivial: f64,
) -> ChainMap {
    let (p, p_inv) = degree_preserving(rng, c, 2 * c.len() + 2, p_nontrivial, false);
    let d = conjugate(c, &p, &p_inv, |l| format!("{target_prefix}{l}"));
    let f = p.relabel(c.labels(), d.labels()).expect("same size");
    ChainMap::new(c.clone(), d, f).expect("conjugation gives a chain map")
}

/// An isomorphism `g: B -> c` where `B` has the basis of `c` relabelled with
/// `source_prefix`.
pub fn isomorphism_into<R: Rng + ?Sized>(
    rng: &mut R,
    c: &BasedComplex,
    source_prefix: &str,
    p_nontrivial: f64,
) -> ChainMap {
    let (q, q_inv) = degree_preserving(rng, c, 2 * c.len() + 2, p_nontrivial, false);
    // B has differential Q d Q^-1, and g = Q
    let b = conjugate(c, &q_inv, &q, |l| format!("{source_prefix}{l}"));
    let g = q.relabel(b.labels(), c.labels()).expect("same size");
    ChainMap::new(b, c.clone(), g).expect("conjugation gives a chain map")
}

/// A complex with at most `max_gens` generators in degrees -1 and 0 (so
/// `d^2 = 0` holds trivially), usually with homology.
pub fn two_degree_complex<R: Rng + ?Sized>(rng: &mut R, group: &GroupSpec, max_gens: usize) -> BasedComplex {
    let total = rng.gen_range(1..=max_gens.max(1));
    let gens: Vec<Generator> = (0..total)
        .map(|i| Generator::new(format!("v{i}"), rng.gen_range(-1..=0)))
        .collect();
    let mut entries = Vec::new();
    for x in gens.iter().filter(|g| g.degree == -1) {
        for y in gens.iter().filter(|g| g.degree == 0) {
            if rng.gen_bool(0.5) {
                entries.push((x.label.clone(), y.label.clone(), ring_element(rng, group, 2, 2)));
            }
        }
    }
    BasedComplex::new(group, gens, entries.iter().map(|(a, b, v)| (a.as_str(), b.as_str(), v.clone())))
        .expect("two degrees")
}

/// A chain homotopy `f ~ g` with `f` an isomorphism out of a random complex
/// and `g = f - (d Phi + Phi d)` for a random `Phi` of degree -1.
pub fn homotopy<R: Rng + ?Sized>(rng: &mut R, group: &GroupSpec, max_source_gens: usize, p_nontrivial: f64) -> ChainHomotopy {
    let c = if rng.gen_bool(0.5) {
        two_degree_complex(rng, group, max_source_gens)
    } else {
        acyclic_complex(rng, group, max_source_gens, p_nontrivial)
    };
    let f = isomorphism_from(rng, &c, "y", p_nontrivial);
    let (src, tgt) = (f.source().generators(), f.target().generators());
    let mut phi_entries = Vec::new();
    for x in src {
        for y in tgt.iter().filter(|y| y.degree == x.degree - 1) {
            if rng.gen_bool(0.6) {
                phi_entries.push((x.label.as_str(), y.label.as_str(), ring_element(rng, group, 2, 2)));
            }
        }
    }
    let phi = RingMatrix::from_entries(group, f.source().labels(), f.target().labels(), phi_entries).expect("labels");
    let boundary = ChainHomotopy::boundary(f.source(), f.target(), &phi).expect("shapes");
    let g = f.try_sub_matrix(&boundary).expect("homotopic map is a chain map");
    ChainHomotopy::new(f, g, phi).expect("by construction")
}

/// A filtered chain isomorphism with one generator per level on each side,
/// trivial units on the diagonal and random entries below it.
pub fn unit_triangular_map<R: Rng + ?Sized>(rng: &mut R, group: &GroupSpec, rank: usize) -> ChainMap {
    let rank = rank.max(1);
    let gens: Vec<Generator> = (0..rank)
        .map(|i| Generator::filtered(format!("x{i}"), rng.gen_range(-1..=0), i as i64))
        .collect();
    let mut entries = Vec::new();
    for x in &gens {
        for y in gens.iter().filter(|y| y.degree == x.degree + 1 && y.filtration < x.filtration) {
            if rng.gen_bool(0.6) {
                entries.push((x.label.clone(), y.label.clone(), ring_element(rng, group, 2, 3)));
            }
        }
    }
    let c = BasedComplex::new(group, gens, entries.iter().map(|(a, b, v)| (a.as_str(), b.as_str(), v.clone())))
        .expect("two degrees");
    let (p, p_inv) = degree_preserving(rng, &c, 3 * rank, 0.0, true);
    let d = conjugate(&c, &p, &p_inv, |l| l.replacen('x', "y", 1));
    let f = p.relabel(c.labels(), d.labels()).expect("same size");
    ChainMap::new(c, d, f).expect("triangular conjugation gives a filtered chain map")
}

/// `diag(A, A^-1)` as a two-term complex, `A` an `size x size` product of
/// elementary matrices and trivial units.
pub fn inverse_pair_complex<R: Rng + ?Sized>(rng: &mut R, group: &GroupSpec, size: usize, steps: usize) -> BasedComplex {
    let (a, a_inv) = invertible_matrix(rng, group, &labels("r", size), steps, 0.0, |_, _| true);
    let mut gens = Vec::new();
    for i in 0..2 * size {
        gens.push(Generator::new(format!("x{i}"), -1));
    }
    for i in 0..2 * size {
        gens.push(Generator::new(format!("y{i}"), 0));
    }
    let mut entries = Vec::new();
    for ((i, j), v) in a.entries() {
        entries.push((format!("x{i}"), format!("y{j}"), v.clone()));
    }
    for ((i, j), v) in a_inv.entries() {
        entries.push((format!("x{}", i + size), format!("y{}", j + size), v.clone()));
    }
    BasedComplex::new(group, gens, entries.iter().map(|(x, y, v)| (x.as_str(), y.as_str(), v.clone())))
        .expect("two degrees")
}
