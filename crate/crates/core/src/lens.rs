//! Three-dimensional lens spaces: cellular complexes over Z[Z/n],
//! Reidemeister torsion and the simple-homotopy classification, with a
//! number-theoretic oracle to compare against.

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::chain::{BasedComplex, Generator};
use crate::group_algebra::{root_of_unity, GroupSpec, RingElement};
use crate::torsion::{torsion_scalar, TorsionError};

/// Tolerance on `|tau_j|` when matching torsions of two lens spaces.
pub const MATCH_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LensError {
    #[error("invalid lens space L({n},{q}): {reason}")]
    InvalidParameters { n: usize, q: usize, reason: String },
    #[error("lens spaces have different fundamental groups Z/{0} and Z/{1}")]
    OrderMismatch(usize, usize),
    #[error("character 0 is not acyclic on a lens space")]
    TrivialCharacter,
    #[error(transparent)]
    Torsion(#[from] TorsionError),
}

/// `L(n, q)`: the quotient of S^3 by `(z1, z2) -> (zeta z1, zeta^q z2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LensSpace {
    n: usize,
    q: usize,
}

impl LensSpace {
    pub fn new(n: usize, q: usize) -> Result<Self, LensError> {
        let bad = |reason: &str| {
            Err(LensError::InvalidParameters {
                n,
                q,
                reason: reason.into(),
            })
        };
        if n < 2 {
            return bad("n must be at least 2");
        }
        if q == 0 || q >= n {
            return bad("q must satisfy 0 < q < n");
        }
        if q.gcd(&n) != 1 {
            return bad("gcd(q, n) must be 1");
        }
        Ok(LensSpace { n, q })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// The inverse of `q` mod `n`.
    pub fn q_star(&self) -> usize {
        inverse_mod(self.q, self.n).expect("q is a unit")
    }

    pub fn group(&self) -> GroupSpec {
        GroupSpec::Cyclic(self.n)
    }
}

impl std::fmt::Display for LensSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "L({},{})", self.n, self.q)
    }
}

fn inverse_mod(a: usize, n: usize) -> Option<usize> {
    (1..n).find(|&b| (a * b) % n == 1)
}

/// Units of Z/n in increasing order.
pub fn units_mod(n: usize) -> Vec<usize> {
    (1..n).filter(|a| a.gcd(&n) == 1).collect()
}

/// One equivariant cell per dimension, cell `e_k` in degree `-k`:
/// `d e3 = (t^{q*} - 1) e2`, `d e2 = N e1`, `d e1 = (t - 1) e0`.
pub fn lens_complex(l: &LensSpace) -> BasedComplex {
    let g = l.group();
    let one = RingElement::one(&g);
    let norm = (0..l.n).fold(RingElement::zero(&g), |acc, k| &acc + &RingElement::monomial(&g, k, 1));
    let top = &RingElement::monomial(&g, l.q_star(), 1) - &one;
    let bottom = &RingElement::monomial(&g, 1, 1) - &one;
    let gens = (0..4).map(|k| Generator::new(format!("e{k}"), -k)).collect();
    BasedComplex::new(&g, gens, [("e3", "e2", top), ("e2", "e1", norm), ("e1", "e0", bottom)])
        .expect("lens complex is a chain complex")
}

/// Torsion of the lens complex at character `j`, `1 <= j < n`.
pub fn reidemeister_torsion(l: &LensSpace, j: usize) -> Result<Complex64, LensError> {
    if j % l.n == 0 {
        return Err(LensError::TrivialCharacter);
    }
    Ok(torsion_scalar(&lens_complex(l), j)?)
}

/// `(zeta^j - 1)(zeta^{j q*} - 1)`.
pub fn closed_form_torsion(l: &LensSpace, j: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (root_of_unity(l.n, j) - one) * (root_of_unity(l.n, j * l.q_star()) - one)
}

/// How a verdict was reached.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `identification` is the `a` with `|tau(L1, j)| = |tau(L2, a j)|`;
    /// `homotopy_m` the `m` with `q1 q2 = ±m^2` used for the homotopy verdict.
    Torsion {
        identification: Option<usize>,
        max_deviation: f64,
        homotopy_m: Option<usize>,
    },
    /// Congruence data: `m` with `q1 q2 = ±m^2` and `(sign, exponent)` with
    /// `q2 = sign * q1^exponent`.
    Congruence {
        m: Option<usize>,
        sign_exponent: Option<(i8, i8)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationVerdict {
    pub homotopy_equivalent: bool,
    pub simple_equivalent: bool,
    pub witness: Witness,
}

/// `|tau(L, j)|` for `j = 1..n-1`.
pub fn torsion_moduli(l: &LensSpace) -> Result<Vec<f64>, LensError> {
    (1..l.n).map(|j| reidemeister_torsion(l, j).map(|z| z.norm())).collect()
}

/// The first unit `a` with `|tau1(j)| = |tau2(a j)|` for all `j`, and the
/// smallest worst-case deviation over all `a`.
fn match_moduli(n: usize, t1: &[f64], t2: &[f64]) -> (Option<usize>, f64) {
    let mut best = f64::INFINITY;
    for a in units_mod(n) {
        let dev = (1..n).fold(0.0f64, |m, j| m.max((t1[j - 1] - t2[(a * j) % n - 1]).abs()));
        if dev <= MATCH_TOLERANCE {
            return (Some(a), dev);
        }
        best = best.min(dev);
    }
    (None, best)
}

fn check_orders(l1: &LensSpace, l2: &LensSpace) -> Result<usize, LensError> {
    if l1.n != l2.n {
        return Err(LensError::OrderMismatch(l1.n, l2.n));
    }
    Ok(l1.n)
}

fn homotopy_witness(n: usize, q1: usize, q2: usize) -> Option<usize> {
    let p = (q1 * q2) % n;
    (0..n).find(|m| {
        let s = (m * m) % n;
        s == p || (s + p) % n == 0
    })
}

fn simple_witness(n: usize, q1: usize, q2: usize) -> Option<(i8, i8)> {
    let inv = inverse_mod(q1, n)?;
    [(1, 1, q1), (-1, 1, q1), (1, -1, inv), (-1, -1, inv)]
        .into_iter()
        .find(|&(sign, _, r)| if sign == 1 { r % n == q2 % n } else { (r + q2) % n == 0 })
        .map(|(s, e, _)| (s, e))
}

/// Simple-homotopy verdict from Reidemeister torsion; the homotopy verdict
/// comes from the congruence criterion.
pub fn classify(l1: &LensSpace, l2: &LensSpace) -> Result<ClassificationVerdict, LensError> {
    let n = check_orders(l1, l2)?;
    Ok(classify_moduli(n, l1.q, l2.q, &torsion_moduli(l1)?, &torsion_moduli(l2)?))
}

fn classify_moduli(n: usize, q1: usize, q2: usize, t1: &[f64], t2: &[f64]) -> ClassificationVerdict {
    let (identification, max_deviation) = match_moduli(n, t1, t2);
    let homotopy_m = homotopy_witness(n, q1, q2);
    ClassificationVerdict {
        homotopy_equivalent: homotopy_m.is_some(),
        simple_equivalent: identification.is_some(),
        witness: Witness::Torsion {
            identification,
            max_deviation,
            homotopy_m,
        },
    }
}

/// Brute force over residues: homotopy equivalent iff `q1 q2 = ±m^2`,
/// simple iff `q2 = ±q1^{±1}` (mod n).
pub fn oracle_classify(l1: &LensSpace, l2: &LensSpace) -> Result<ClassificationVerdict, LensError> {
    let n = check_orders(l1, l2)?;
    let m = homotopy_witness(n, l1.q, l2.q);
    let se = simple_witness(n, l1.q, l2.q);
    Ok(ClassificationVerdict {
        homotopy_equivalent: m.is_some(),
        simple_equivalent: se.is_some(),
        witness: Witness::Congruence { m, sign_exponent: se },
    })
}

/// One row of [`classification_table`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub q1: usize,
    pub q2: usize,
    pub homotopy_equivalent: bool,
    pub simple_equivalent: bool,
    pub oracle_simple_equivalent: bool,
}

impl TableRow {
    pub fn agrees(&self) -> bool {
        self.simple_equivalent == self.oracle_simple_equivalent
    }
}

/// All ordered pairs `(q1, q2)` of valid parameters for `2 <= n <= n_max`.
pub fn classification_table(n_max: usize) -> Result<Vec<TableRow>, LensError> {
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let spaces: Vec<LensSpace> = units_mod(n).into_iter().map(|q| LensSpace { n, q }).collect();
        let moduli = spaces.iter().map(torsion_moduli).collect::<Result<Vec<_>, _>>()?;
        for (i, l1) in spaces.iter().enumerate() {
            for (k, l2) in spaces.iter().enumerate() {
                let v = classify_moduli(n, l1.q, l2.q, &moduli[i], &moduli[k]);
                let oracle = oracle_classify(l1, l2)?;
                rows.push(TableRow {
                    n,
                    q1: l1.q,
                    q2: l2.q,
                    homotopy_equivalent: v.homotopy_equivalent,
                    simple_equivalent: v.simple_equivalent,
                    oracle_simple_equivalent: oracle.simple_equivalent,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(n: usize, q: usize) -> LensSpace {
        LensSpace::new(n, q).unwrap()
    }

    fn chord(n: usize, k: usize) -> f64 {
        2.0 * (std::f64::consts::PI * k as f64 / n as f64).sin().abs()
    }

    #[test]
    fn parameters() {
        assert!(LensSpace::new(7, 0).is_err());
        assert!(LensSpace::new(6, 2).is_err());
        assert!(LensSpace::new(1, 1).is_err());
        assert!(LensSpace::new(7, 7).is_err());
        assert_eq!(l(7, 2).q_star(), 4);
        assert_eq!(l(2, 1).q_star(), 1);
    }

    #[test]
    fn complexes_are_valid() {
        for n in 2..=30 {
            for q in units_mod(n) {
                let c = lens_complex(&l(n, q));
                assert!(c.validate().is_ok());
                assert_eq!(c.len(), 4);
            }
        }
    }

    #[test]
    fn character_zero_is_not_acyclic() {
        let c = lens_complex(&l(5, 2));
        assert!(torsion_scalar(&c, 0).is_err());
        assert!(!c.is_acyclic());
        assert_eq!(reidemeister_torsion(&l(5, 2), 0), Err(LensError::TrivialCharacter));
        for j in 1..5 {
            assert!(torsion_scalar(&c, j).is_ok());
        }
    }

    #[test]
    fn closed_form_examples() {
        assert!((reidemeister_torsion(&l(2, 1), 1).unwrap().norm() - 4.0).abs() < 1e-12);
        let t = reidemeister_torsion(&l(5, 1), 1).unwrap().norm();
        assert!((t - chord(5, 1) * chord(5, 1)).abs() < 1e-12);
        assert!((t - 1.381966).abs() < 1e-6);
        let t = reidemeister_torsion(&l(7, 2), 1).unwrap().norm();
        assert!((t - chord(7, 1) * chord(7, 4)).abs() < 1e-12);
    }

    #[test]
    fn mirror_symmetry() {
        for n in [5, 7, 12] {
            for q in units_mod(n) {
                let a = torsion_moduli(&l(n, q)).unwrap();
                let b = torsion_moduli(&l(n, n - q)).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let v = oracle_classify(&l(7, 1), &l(7, 2)).unwrap();
        assert!(v.homotopy_equivalent && !v.simple_equivalent);
        let v = oracle_classify(&l(7, 1), &l(7, 6)).unwrap();
        assert!(v.simple_equivalent);
        let v = oracle_classify(&l(11, 3), &l(11, 3)).unwrap();
        assert!(v.homotopy_equivalent && v.simple_equivalent);
        let v = oracle_classify(&l(5, 1), &l(5, 2)).unwrap();
        assert!(!v.homotopy_equivalent);
        assert!(oracle_classify(&l(5, 1), &l(7, 1)).is_err());
    }

    #[test]
    fn classify_examples() {
        assert!(classify(&l(7, 1), &l(7, 1)).unwrap().simple_equivalent);
        let v = classify(&l(7, 1), &l(7, 2)).unwrap();
        assert!(v.homotopy_equivalent && !v.simple_equivalent);
        assert!(classify(&l(7, 1), &l(7, 6)).unwrap().simple_equivalent);
        assert!(!classify(&l(5, 1), &l(5, 2)).unwrap().homotopy_equivalent);
        assert!(classify(&l(5, 1), &l(7, 1)).is_err());
    }

    #[test]
    fn small_table_agrees() {
        let rows = classification_table(12).unwrap();
        assert!(rows.iter().all(TableRow::agrees));
        assert!(rows.iter().all(|r| !r.simple_equivalent || r.homotopy_equivalent));
    }
}
