use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use super::cyclotomic::{Cyclotomic, CyclotomicField};
use super::TorsionError;
use crate::chain::BasedComplex;
use crate::group_algebra::root_of_unity;

/// Exponent of a pivot whose row sits in `degree`: pivots leaving odd degrees
/// multiply the torsion, pivots leaving even degrees divide it.
fn pivot_exponent(degree: i64) -> i32 {
    if degree.rem_euclid(2) == 1 {
        1
    } else {
        -1
    }
}

/// Exact torsion of `c` pushed into Q(zeta_m), `m` dividing the group order.
///
/// Pivots are eliminated exactly as a collapse would after a base change, so
/// the value is the image of the based torsion up to sign. `character` only
/// labels the error.
fn exact_torsion(
    c: &BasedComplex,
    field: &CyclotomicField,
    character: usize,
) -> Result<Cyclotomic, TorsionError> {
    let size = c.len();
    let degrees: Vec<i64> = c.generators().iter().map(|g| g.degree).collect();
    let mut m: Vec<Vec<Option<Cyclotomic>>> = vec![vec![None; size]; size];
    for ((i, k), v) in c.differential().entries() {
        let e = field.image(v);
        if !e.is_zero() {
            m[i][k] = Some(e);
        }
    }

    let mut alive = vec![true; size];
    let mut remaining = size;
    let mut tau = field.one();
    while remaining > 0 {
        // smallest entry keeps coefficient growth down
        let mut best: Option<(usize, usize, u64)> = None;
        for x in (0..size).filter(|&x| alive[x]) {
            for y in (0..size).filter(|&y| alive[y]) {
                if let Some(e) = &m[x][y] {
                    let s = e.size();
                    if best.is_none_or(|(_, _, b)| s < b) {
                        best = Some((x, y, s));
                    }
                }
            }
        }
        let Some((x, y, _)) = best else {
            let degree = (0..size).find(|&i| alive[i]).map(|i| degrees[i]).unwrap_or_default();
            return Err(TorsionError::NotAcyclic {
                degree,
                character: Some(character),
            });
        };
        let pivot = m[x][y].take().expect("pivot entry");
        let inverse = field.inv(&pivot);
        tau = if pivot_exponent(degrees[x]) > 0 {
            field.mul(&tau, &pivot)
        } else {
            field.mul(&tau, &inverse)
        };
        // Schur complement: fill-in stays inside the block of the pivot
        let row: Vec<(usize, Cyclotomic)> = (0..size)
            .filter(|&v| alive[v] && v != y)
            .filter_map(|v| m[x][v].as_ref().map(|e| (v, field.mul(e, &inverse))))
            .collect();
        for u in (0..size).filter(|&u| alive[u] && u != x) {
            let Some(factor) = m[u][y].clone() else {
                continue;
            };
            for (v, r) in &row {
                let update = field.mul(&factor, r);
                let next = match &m[u][*v] {
                    Some(old) => field.sub(old, &update),
                    None => field.sub(&Cyclotomic::zero(), &update),
                };
                m[u][*v] = (!next.is_zero()).then_some(next);
            }
        }
        alive[x] = false;
        alive[y] = false;
        remaining = remaining.saturating_sub(2);
    }
    Ok(tau)
}

/// Field and embedding exponent for the character `j` of Z/n.
fn character_field(n: usize, j: usize) -> (usize, usize) {
    let d = j.gcd(&n);
    (n / d, j / d)
}

/// Torsion of the complex after `t -> exp(2 pi i j / n)`.
///
/// The elimination runs exactly in Q(zeta_m), with `m` the order of the
/// character, and only the final value is evaluated numerically. Defined up
/// to sign (and up to `zeta^k` as a class). Fails if the complexified
/// complex is not acyclic.
pub fn torsion_scalar(c: &BasedComplex, j: usize) -> Result<Complex64, TorsionError> {
    let n = c.group().cyclic_order().ok_or(TorsionError::NotCyclic)?;
    if j >= n {
        return Err(TorsionError::CharacterOutOfRange { j, n });
    }
    let (m, r) = character_field(n, j);
    let field = CyclotomicField::new(m);
    Ok(field.embed(&exact_torsion(c, &field, j)?, r))
}

/// Character images of the torsion of an acyclic complex over Z[Z/n]:
/// one value per nontrivial character `j = 1..n-1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionVector {
    pub n: usize,
    #[serde(serialize_with = "serialize_complex")]
    pub entries: Vec<Complex64>,
    pub logabs: Vec<f64>,
}

fn serialize_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl TorsionVector {
    pub fn of(c: &BasedComplex) -> Result<TorsionVector, TorsionError> {
        let n = c.group().cyclic_order().ok_or(TorsionError::NotCyclic)?;
        let mut exact: BTreeMap<usize, (CyclotomicField, Cyclotomic)> = BTreeMap::new();
        let mut entries = Vec::with_capacity(n.saturating_sub(1));
        for j in 1..n {
            let (m, r) = character_field(n, j);
            if let std::collections::btree_map::Entry::Vacant(slot) = exact.entry(m) {
                let field = CyclotomicField::new(m);
                let tau = exact_torsion(c, &field, j)?;
                slot.insert((field, tau));
            }
            let (field, tau) = &exact[&m];
            entries.push(field.embed(tau, r));
        }
        Ok(Self::from_entries(n, entries))
    }

    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> TorsionVector {
        let logabs = entries.iter().map(|z| z.norm().ln()).collect();
        TorsionVector { n, entries, logabs }
    }

    /// `tau_j` for `j >= 1`.
    pub fn get(&self, j: usize) -> Complex64 {
        self.entries[j - 1]
    }

    pub fn logabs_at(&self, j: usize) -> f64 {
        self.logabs[j - 1]
    }

    /// Largest `|log|tau_j||`; zero exactly for classes of modulus one.
    pub fn max_abs_logabs(&self) -> f64 {
        self.logabs.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// The character with the largest `|log|tau_j||`.
    pub fn worst_character(&self) -> Option<(usize, f64)> {
        self.logabs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, v)| (i + 1, *v))
    }

    pub fn max_logabs_diff(&self, other: &TorsionVector) -> f64 {
        assert_eq!(self.n, other.n);
        self.logabs
            .iter()
            .zip(&other.logabs)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn logabs_matches(&self, other: &TorsionVector, tol: f64) -> bool {
        self.n == other.n && self.max_logabs_diff(other) <= tol
    }

    /// Entrywise equality up to factors `±zeta^k`, i.e. the ratio at each
    /// character is a `2n`-th root of unity.
    pub fn equal_up_to_trivial_units(&self, other: &TorsionVector, tol: f64) -> bool {
        if self.n != other.n {
            return false;
        }
        let two_n = 2.0 * self.n as f64;
        self.entries.iter().zip(&other.entries).all(|(a, b)| {
            let r = a / b;
            let turns = r.arg() * two_n / std::f64::consts::TAU;
            (r.norm() - 1.0).abs() <= tol && (turns - turns.round()).abs() * std::f64::consts::TAU / two_n <= tol
        })
    }

    pub fn product(&self, other: &TorsionVector) -> TorsionVector {
        assert_eq!(self.n, other.n);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).collect();
        Self::from_entries(self.n, entries)
    }
}

/// `(zeta^j - 1)` style helper used by closed forms.
pub fn cyclotomic_factor(n: usize, k: usize) -> Complex64 {
    root_of_unity(n, k) - Complex64::new(1.0, 0.0)
}
