use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::snf::{smith_normal_form, IntMatrix};
use super::ChainError;
use crate::group_algebra::{GroupSpec, RingElement, RingMatrix};

/// A basis element of a based complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub label: String,
    pub degree: i64,
    pub filtration: Option<i64>,
}

impl Generator {
    pub fn new(label: impl Into<String>, degree: i64) -> Self {
        Generator {
            label: label.into(),
            degree,
            filtration: None,
        }
    }

    pub fn filtered(label: impl Into<String>, degree: i64, level: i64) -> Self {
        Generator {
            label: label.into(),
            degree,
            filtration: Some(level),
        }
    }
}

/// First invariant that a complex violates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    #[error("filtration is set on some generators but not on {label:?}")]
    MixedFiltration { label: String },
    #[error("d({from}) has a {to} term but deg({to}) != deg({from}) + 1")]
    DegreeMismatch { from: String, to: String },
    #[error("d^2 != 0: coefficient of {to} in d(d({from})) is {value}")]
    SquareNonZero { from: String, to: String, value: String },
    #[error("d({from}) has a {to} term at a higher filtration level")]
    FiltrationNotSubcomplex { from: String, to: String },
}

/// A finite Z-graded complex of free Z[G]-modules with an ordered basis.
///
/// The differential raises degree by one. Entry `(x, y)` of `d` is the
/// coefficient of `y` in `d(x)`. When filtered, the generators of level at
/// most `p` span a subcomplex for every `p`.
#[derive(Clone, Debug)]
pub struct BasedComplex {
    pub(crate) group: GroupSpec,
    pub(crate) generators: Vec<Generator>,
    pub(crate) d: RingMatrix,
}

/// Homology of the underlying Z-complex in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: i64,
    pub rank: usize,
    pub torsion: Vec<String>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl BasedComplex {
    pub fn empty(group: &GroupSpec) -> Self {
        BasedComplex {
            group: group.clone(),
            generators: Vec::new(),
            d: RingMatrix::zeros(group, Vec::new(), Vec::new()).expect("empty labels"),
        }
    }

    /// Assembles a complex without checking the chain-complex invariants.
    /// Labels must be unique and every entry must name known labels.
    pub fn from_raw<'a>(
        group: &GroupSpec,
        generators: Vec<Generator>,
        entries: impl IntoIterator<Item = (&'a str, &'a str, RingElement)>,
    ) -> Result<Self, ChainError> {
        let labels: Vec<String> = generators.iter().map(|g| g.label.clone()).collect();
        let d = RingMatrix::from_entries(group, labels.clone(), labels, entries)?;
        Ok(BasedComplex {
            group: group.clone(),
            generators,
            d,
        })
    }

    /// Like [`BasedComplex::from_raw`] and additionally validates.
    pub fn new<'a>(
        group: &GroupSpec,
        generators: Vec<Generator>,
        entries: impl IntoIterator<Item = (&'a str, &'a str, RingElement)>,
    ) -> Result<Self, ChainError> {
        let c = Self::from_raw(group, generators, entries)?;
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn from_matrix(group: &GroupSpec, generators: Vec<Generator>, d: RingMatrix) -> Self {
        debug_assert_eq!(d.nrows(), generators.len());
        BasedComplex {
            group: group.clone(),
            generators,
            d,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn differential(&self) -> &RingMatrix {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn generator(&self, label: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.label == label)
    }

    pub fn is_filtered(&self) -> bool {
        self.generators.first().is_some_and(|g| g.filtration.is_some())
    }

    /// Entry of `d` by labels (zero when absent).
    pub fn d_entry(&self, from: &str, to: &str) -> Result<RingElement, ChainError> {
        Ok(self.d.entry(from, to)?)
    }

    /// Distinct degrees present, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.generators
            .iter()
            .map(|g| g.degree)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Distinct filtration levels, ascending (empty when unfiltered).
    pub fn levels(&self) -> Vec<i64> {
        self.generators
            .iter()
            .filter_map(|g| g.filtration)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn labels_in_degree(&self, k: i64) -> Vec<String> {
        self.generators
            .iter()
            .filter(|g| g.degree == k)
            .map(|g| g.label.clone())
            .collect()
    }

    /// The block of `d` from degree `k` to degree `k + 1`.
    pub fn block(&self, k: i64) -> RingMatrix {
        self.d
            .submatrix(&self.labels_in_degree(k), &self.labels_in_degree(k + 1))
            .expect("labels come from the complex")
    }

    /// Checks every complex invariant, returning the first violation.
    pub fn validate(&self) -> Result<(), Violation> {
        let filtered = self.is_filtered();
        for g in &self.generators {
            if g.filtration.is_some() != filtered {
                return Err(Violation::MixedFiltration {
                    label: g.label.clone(),
                });
            }
        }
        let gens = &self.generators;
        for ((i, j), _) in self.d.entries() {
            if gens[j].degree != gens[i].degree + 1 {
                return Err(Violation::DegreeMismatch {
                    from: gens[i].label.clone(),
                    to: gens[j].label.clone(),
                });
            }
        }
        if filtered {
            for ((i, j), _) in self.d.entries() {
                if gens[j].filtration > gens[i].filtration {
                    return Err(Violation::FiltrationNotSubcomplex {
                        from: gens[i].label.clone(),
                        to: gens[j].label.clone(),
                    });
                }
            }
        }
        let sq = self.d.try_mul(&self.d).expect("square matrix");
        if let Some(((i, j), v)) = sq.entries().next() {
            return Err(Violation::SquareNonZero {
                from: gens[i].label.clone(),
                to: gens[j].label.clone(),
                value: v.to_string(),
            });
        }
        Ok(())
    }

    /// `C[k]`: a generator of degree `m` moves to degree `m - k` and the
    /// differential is multiplied by `(-1)^k`.
    pub fn shift(&self, k: i64) -> BasedComplex {
        let generators = self
            .generators
            .iter()
            .map(|g| Generator {
                degree: g.degree - k,
                ..g.clone()
            })
            .collect();
        let d = if k.rem_euclid(2) == 1 { self.d.neg() } else { self.d.clone() };
        BasedComplex::from_matrix(&self.group, generators, d)
    }

    /// Renames every generator.
    pub fn relabel(&self, rename: impl Fn(&str) -> String) -> Result<BasedComplex, ChainError> {
        let generators: Vec<Generator> = self
            .generators
            .iter()
            .map(|g| Generator {
                label: rename(&g.label),
                ..g.clone()
            })
            .collect();
        let labels: Vec<String> = generators.iter().map(|g| g.label.clone()).collect();
        let d = self.d.relabel(labels.clone(), labels)?;
        Ok(BasedComplex::from_matrix(&self.group, generators, d))
    }

    /// Replaces the filtration levels (`None` removes the filtration).
    pub fn with_filtration(&self, level: impl Fn(&Generator) -> Option<i64>) -> BasedComplex {
        let generators = self
            .generators
            .iter()
            .map(|g| Generator {
                filtration: level(g),
                ..g.clone()
            })
            .collect();
        BasedComplex::from_matrix(&self.group, generators, self.d.clone())
    }

    pub fn without_filtration(&self) -> BasedComplex {
        self.with_filtration(|_| None)
    }

    /// The full subcomplex (or quotient) on the listed labels, in complex order.
    pub fn restrict(&self, keep: impl Fn(&Generator) -> bool) -> BasedComplex {
        let generators: Vec<Generator> = self.generators.iter().filter(|g| keep(g)).cloned().collect();
        let labels: Vec<String> = generators.iter().map(|g| g.label.clone()).collect();
        let d = self.d.submatrix(&labels, &labels).expect("labels come from the complex");
        BasedComplex::from_matrix(&self.group, generators, d)
    }

    /// Direct sum; labels get the given prefixes. `cross` adds entries between
    /// summands, addressed by the prefixed labels.
    pub fn direct_sum<'a>(
        parts: &[(&str, &BasedComplex)],
        cross: impl IntoIterator<Item = (String, String, RingElement)>,
    ) -> Result<BasedComplex, ChainError> {
        let group = parts
            .first()
            .map(|(_, c)| c.group.clone())
            .unwrap_or(GroupSpec::Trivial);
        let mut generators = Vec::new();
        let mut entries: Vec<(String, String, RingElement)> = Vec::new();
        for (prefix, c) in parts {
            if c.group != group {
                return Err(ChainError::GroupMismatch);
            }
            for g in &c.generators {
                generators.push(Generator {
                    label: format!("{prefix}{}", g.label),
                    ..g.clone()
                });
            }
            for ((i, j), v) in c.d.entries() {
                entries.push((
                    format!("{prefix}{}", c.generators[i].label),
                    format!("{prefix}{}", c.generators[j].label),
                    v.clone(),
                ));
            }
        }
        entries.extend(cross);
        BasedComplex::from_raw(
            &group,
            generators,
            entries.iter().map(|(a, b, v)| (a.as_str(), b.as_str(), v.clone())),
        )
    }

    /// Integer matrix of `d` from degree `k` to `k + 1` on the underlying
    /// free Z-module, each Z[G] entry expanded to its `|G| x |G|` regular
    /// representation block.
    pub fn underlying_integer_matrix(&self, from_degree: i64) -> IntMatrix {
        let m = self.block(from_degree);
        let n = self.group.order();
        if m.ncols() == 0 {
            return vec![Vec::new(); m.nrows() * n];
        }
        m.to_integer()
    }

    /// Integral homology of the underlying Z-complex, degree by degree.
    pub fn homology(&self) -> Vec<HomologyGroup> {
        let degrees = self.degrees();
        let order = self.group.order();
        let mut out_rank: HashMap<i64, usize> = HashMap::new();
        let mut in_torsion: HashMap<i64, Vec<BigInt>> = HashMap::new();
        for &k in &degrees {
            if self.labels_in_degree(k + 1).is_empty() {
                continue;
            }
            let snf = smith_normal_form(&self.underlying_integer_matrix(k));
            out_rank.insert(k, snf.rank());
            in_torsion.insert(k + 1, snf.torsion());
        }
        degrees
            .iter()
            .map(|&k| {
                let dim = order * self.labels_in_degree(k).len();
                let r_out = out_rank.get(&k).copied().unwrap_or(0);
                let r_in = out_rank.get(&(k - 1)).copied().unwrap_or(0);
                HomologyGroup {
                    degree: k,
                    rank: dim - r_out - r_in,
                    torsion: in_torsion
                        .get(&k)
                        .map(|t| t.iter().map(|x| x.to_string()).collect())
                        .unwrap_or_default(),
                }
            })
            .collect()
    }

    /// A free Z[G]-complex is acyclic iff its underlying free Z-complex is.
    pub fn is_acyclic(&self) -> bool {
        self.homology().iter().all(HomologyGroup::is_zero)
    }

    /// First degree with nonzero homology.
    pub fn first_homology_degree(&self) -> Option<i64> {
        self.homology().into_iter().find(|h| !h.is_zero()).map(|h| h.degree)
    }
}

/// Equality of based complexes: same group, same labelled generators and
/// the same differential. The listing order of the basis is not compared.
impl PartialEq for BasedComplex {
    fn eq(&self, other: &Self) -> bool {
        if self.group != other.group
            || self.generators.len() != other.generators.len()
            || self.d.num_nonzero() != other.d.num_nonzero()
        {
            return false;
        }
        let pos: HashMap<&str, usize> = other
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.label.as_str(), i))
            .collect();
        let mut map = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            match pos.get(g.label.as_str()) {
                Some(&i) if other.generators[i] == *g => map.push(i),
                _ => return false,
            }
        }
        self.d
            .entries()
            .all(|((i, j), v)| other.d.get(map[i], map[j]) == Some(v))
    }
}

impl Eq for BasedComplex {}

impl fmt::Display for BasedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "complex over Z[{}], {} generators", self.group, self.len())?;
        for g in &self.generators {
            match g.filtration {
                Some(p) => writeln!(f, "  {} (deg {}, level {p})", g.label, g.degree)?,
                None => writeln!(f, "  {} (deg {})", g.label, g.degree)?,
            }
        }
        for ((i, j), v) in self.d.entries() {
            writeln!(f, "  d {} -> {}: {v}", self.generators[i].label, self.generators[j].label)?;
        }
        Ok(())
    }
}
