use super::complex::BasedComplex;
use super::ChainError;
use crate::group_algebra::{RingElement, RingMatrix};

/// A degree-0 map of based complexes, `f(x) = sum_y F[x, y] y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: BasedComplex,
    target: BasedComplex,
    f: RingMatrix,
}

fn first_difference(a: &RingMatrix, b: &RingMatrix) -> Option<(String, String, RingElement)> {
    let diff = a.try_sub(b).ok()?;
    let ((i, j), v) = diff.entries().next()?;
    Some((diff.rows()[i].clone(), diff.cols()[j].clone(), v.clone()))
}

impl ChainMap {
    /// Checks degree, commutation `d_target . f = f . d_source` and, when both
    /// complexes are filtered, that `f` does not raise the filtration level.
    pub fn new(source: BasedComplex, target: BasedComplex, f: RingMatrix) -> Result<Self, ChainError> {
        if source.group() != target.group() || f.group() != source.group() {
            return Err(ChainError::GroupMismatch);
        }
        if f.rows() != source.labels().as_slice() || f.cols() != target.labels().as_slice() {
            return Err(ChainError::MapShape);
        }
        let (sg, tg) = (source.generators(), target.generators());
        for ((i, j), _) in f.entries() {
            if sg[i].degree != tg[j].degree {
                return Err(ChainError::MapDegree {
                    from: sg[i].label.clone(),
                    to: tg[j].label.clone(),
                });
            }
            if source.is_filtered() && target.is_filtered() && tg[j].filtration > sg[i].filtration {
                return Err(ChainError::MapFiltration {
                    from: sg[i].label.clone(),
                    to: tg[j].label.clone(),
                });
            }
        }
        let lhs = source.differential().try_mul(&f)?;
        let rhs = f.try_mul(target.differential())?;
        if let Some((from, to, value)) = first_difference(&lhs, &rhs) {
            return Err(ChainError::NotAChainMap {
                from,
                to,
                value: value.to_string(),
            });
        }
        Ok(ChainMap { source, target, f })
    }

    /// Builds the map from `(source label, target label, coefficient)` triples.
    pub fn from_entries<'a>(
        source: BasedComplex,
        target: BasedComplex,
        entries: impl IntoIterator<Item = (&'a str, &'a str, RingElement)>,
    ) -> Result<Self, ChainError> {
        let f = RingMatrix::from_entries(source.group(), source.labels(), target.labels(), entries)?;
        Self::new(source, target, f)
    }

    pub fn identity(c: &BasedComplex) -> ChainMap {
        let f = RingMatrix::identity(c.group(), c.labels()).expect("labels are unique");
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            f,
        }
    }

    pub fn source(&self) -> &BasedComplex {
        &self.source
    }

    pub fn target(&self) -> &BasedComplex {
        &self.target
    }

    pub fn matrix(&self) -> &RingMatrix {
        &self.f
    }

    /// `self . first`: apply `first`, then `self`.
    pub fn after(&self, first: &ChainMap) -> Result<ChainMap, ChainError> {
        if first.target != self.source {
            return Err(ChainError::NotComposable);
        }
        // rows of self.f are matched to first's columns by label
        let f = first.f.try_mul(&self.f)?;
        ChainMap::new(first.source.clone(), self.target.clone(), f)
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap {
            f: self.f.neg(),
            ..self.clone()
        }
    }

    pub fn try_sub_matrix(&self, m: &RingMatrix) -> Result<ChainMap, ChainError> {
        ChainMap::new(self.source.clone(), self.target.clone(), self.f.try_sub(m)?)
    }
}

/// `Phi` of degree -1 with `d Phi + Phi d = f - g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainHomotopy {
    f: ChainMap,
    g: ChainMap,
    phi: RingMatrix,
}

impl ChainHomotopy {
    pub fn new(f: ChainMap, g: ChainMap, phi: RingMatrix) -> Result<Self, ChainError> {
        if f.source != g.source || f.target != g.target {
            return Err(ChainError::NotComposable);
        }
        if phi.rows() != f.f.rows() || phi.cols() != f.f.cols() || phi.group() != f.f.group() {
            return Err(ChainError::MapShape);
        }
        let (sg, tg) = (f.source.generators(), f.target.generators());
        for ((i, j), _) in phi.entries() {
            if tg[j].degree != sg[i].degree - 1 {
                return Err(ChainError::MapDegree {
                    from: sg[i].label.clone(),
                    to: tg[j].label.clone(),
                });
            }
        }
        let boundary = Self::boundary(&f.source, &f.target, &phi)?;
        let expected = f.f.try_sub(&g.f)?;
        if let Some((from, to, value)) = first_difference(&boundary, &expected) {
            return Err(ChainError::NotAHomotopy {
                from,
                to,
                value: value.to_string(),
            });
        }
        Ok(ChainHomotopy { f, g, phi })
    }

    /// `d Phi + Phi d` as a matrix from source labels to target labels.
    pub fn boundary(source: &BasedComplex, target: &BasedComplex, phi: &RingMatrix) -> Result<RingMatrix, ChainError> {
        let a = source.differential().try_mul(phi)?;
        let b = phi.try_mul(target.differential())?;
        Ok(a.try_add(&b)?)
    }

    pub fn f(&self) -> &ChainMap {
        &self.f
    }

    pub fn g(&self) -> &ChainMap {
        &self.g
    }

    pub fn phi(&self) -> &RingMatrix {
        &self.phi
    }
}
