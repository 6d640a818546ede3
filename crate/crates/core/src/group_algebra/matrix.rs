use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use super::group::GroupSpec;
use super::ring::RingElement;
use super::AlgebraError;

/// A sparse matrix over Z[G] with labelled rows and columns.
///
/// Row `x` holds the coefficients of the image of `x`: entry `(x, y)` is the
/// coefficient of `y`. Products compose left to right, so `A * B` is "first
/// `A`, then `B`" on row vectors of a left module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMatrix {
    group: GroupSpec,
    rows: Vec<String>,
    cols: Vec<String>,
    entries: BTreeMap<(usize, usize), RingElement>,
}

fn label_index(labels: &[String]) -> Result<HashMap<&str, usize>, AlgebraError> {
    let mut map = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if map.insert(l.as_str(), i).is_some() {
            return Err(AlgebraError::DuplicateLabel(l.clone()));
        }
    }
    Ok(map)
}

impl RingMatrix {
    pub fn zeros(group: &GroupSpec, rows: Vec<String>, cols: Vec<String>) -> Result<Self, AlgebraError> {
        label_index(&rows)?;
        label_index(&cols)?;
        Ok(RingMatrix {
            group: group.clone(),
            rows,
            cols,
            entries: BTreeMap::new(),
        })
    }

    pub fn identity(group: &GroupSpec, labels: Vec<String>) -> Result<Self, AlgebraError> {
        let mut m = Self::zeros(group, labels.clone(), labels)?;
        for i in 0..m.rows.len() {
            m.entries.insert((i, i), RingElement::one(group));
        }
        Ok(m)
    }

    pub fn from_entries<'a>(
        group: &GroupSpec,
        rows: Vec<String>,
        cols: Vec<String>,
        entries: impl IntoIterator<Item = (&'a str, &'a str, RingElement)>,
    ) -> Result<Self, AlgebraError> {
        let ri: HashMap<String, usize> = label_index(&rows)?.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let ci: HashMap<String, usize> = label_index(&cols)?.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let mut m = Self::zeros(group, rows, cols)?;
        for (r, c, v) in entries {
            if v.group() != group {
                return Err(AlgebraError::GroupMismatch);
            }
            let i = *ri.get(r).ok_or_else(|| AlgebraError::UnknownLabel(r.to_string()))?;
            let j = *ci.get(c).ok_or_else(|| AlgebraError::UnknownLabel(c.to_string()))?;
            let sum = match m.entries.get(&(i, j)) {
                Some(old) => old + &v,
                None => v,
            };
            m.put(i, j, sum);
        }
        Ok(m)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn cols(&self) -> &[String] {
        &self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.rows.iter().position(|l| l == label)
    }

    pub fn col_index(&self, label: &str) -> Option<usize> {
        self.cols.iter().position(|l| l == label)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&RingElement> {
        self.entries.get(&(i, j))
    }

    /// Entry by labels; zero when absent.
    pub fn entry(&self, row: &str, col: &str) -> Result<RingElement, AlgebraError> {
        let i = self.row_index(row).ok_or_else(|| AlgebraError::UnknownLabel(row.to_string()))?;
        let j = self.col_index(col).ok_or_else(|| AlgebraError::UnknownLabel(col.to_string()))?;
        Ok(self.get(i, j).cloned().unwrap_or_else(|| RingElement::zero(&self.group)))
    }

    /// Stores `v` at `(i, j)`, dropping it when zero.
    pub fn put(&mut self, i: usize, j: usize, v: RingElement) {
        assert!(i < self.rows.len() && j < self.cols.len());
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &RingElement)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn num_nonzero(&self) -> usize {
        self.entries.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &RingElement)> + '_ {
        self.entries.range((i, 0)..(i + 1, 0)).map(|((_, j), v)| (*j, v))
    }

    pub fn col(&self, j: usize) -> impl Iterator<Item = (usize, &RingElement)> + '_ {
        self.entries
            .iter()
            .filter(move |((_, c), _)| *c == j)
            .map(|((i, _), v)| (*i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn same_shape(&self, other: &RingMatrix) -> Result<(), AlgebraError> {
        if self.group != other.group {
            return Err(AlgebraError::GroupMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::ShapeMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &RingMatrix) -> Result<RingMatrix, AlgebraError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            let sum = match out.entries.get(&(i, j)) {
                Some(old) => old + v,
                None => v.clone(),
            };
            out.put(i, j, sum);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &RingMatrix) -> Result<RingMatrix, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> RingMatrix {
        RingMatrix {
            entries: self.entries.iter().map(|(k, v)| (*k, -v)).collect(),
            ..self.clone()
        }
    }

    /// Multiplies every entry on the left by `c`.
    pub fn scale_left(&self, c: &RingElement) -> RingMatrix {
        let mut out = RingMatrix {
            entries: BTreeMap::new(),
            ..self.clone()
        };
        for (&(i, j), v) in &self.entries {
            out.put(i, j, c * v);
        }
        out
    }

    /// Matrix product; the columns of `self` are matched to the rows of
    /// `other` by label.
    pub fn try_mul(&self, other: &RingMatrix) -> Result<RingMatrix, AlgebraError> {
        if self.group != other.group {
            return Err(AlgebraError::GroupMismatch);
        }
        if self.cols.len() != other.rows.len() {
            return Err(AlgebraError::ShapeMismatch);
        }
        let other_rows = label_index(&other.rows)?;
        let mut map = Vec::with_capacity(self.cols.len());
        for c in &self.cols {
            map.push(*other_rows.get(c.as_str()).ok_or(AlgebraError::ShapeMismatch)?);
        }
        let mut acc: BTreeMap<(usize, usize), RingElement> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            let kk = map[k];
            for (j, b) in other.row(kk) {
                let prod = a * b;
                match acc.get_mut(&(i, j)) {
                    Some(old) => *old = &*old + &prod,
                    None => {
                        acc.insert((i, j), prod);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(RingMatrix {
            group: self.group.clone(),
            rows: self.rows.clone(),
            cols: other.cols.clone(),
            entries: acc,
        })
    }

    /// `row(target) += c * row(source)`.
    pub fn elementary_row_op(&self, target: &str, source: &str, c: &RingElement) -> Result<RingMatrix, AlgebraError> {
        if target == source {
            return Err(AlgebraError::NotElementary(target.to_string()));
        }
        if c.group() != &self.group {
            return Err(AlgebraError::GroupMismatch);
        }
        let t = self.row_index(target).ok_or_else(|| AlgebraError::UnknownLabel(target.to_string()))?;
        let s = self.row_index(source).ok_or_else(|| AlgebraError::UnknownLabel(source.to_string()))?;
        let mut out = self.clone();
        out.add_row_multiple(t, s, c);
        Ok(out)
    }

    /// `col(target) += col(source) * c`.
    pub fn elementary_col_op(&self, target: &str, source: &str, c: &RingElement) -> Result<RingMatrix, AlgebraError> {
        if target == source {
            return Err(AlgebraError::NotElementary(target.to_string()));
        }
        if c.group() != &self.group {
            return Err(AlgebraError::GroupMismatch);
        }
        let t = self.col_index(target).ok_or_else(|| AlgebraError::UnknownLabel(target.to_string()))?;
        let s = self.col_index(source).ok_or_else(|| AlgebraError::UnknownLabel(source.to_string()))?;
        let mut out = self.clone();
        out.add_col_multiple(t, s, c);
        Ok(out)
    }

    /// In place `row(t) += c * row(s)`, `t != s`.
    pub(crate) fn add_row_multiple(&mut self, t: usize, s: usize, c: &RingElement) {
        debug_assert_ne!(t, s);
        if c.is_zero() {
            return;
        }
        let src: Vec<(usize, RingElement)> = self.row(s).map(|(j, v)| (j, c * v)).collect();
        for (j, add) in src {
            let sum = match self.entries.get(&(t, j)) {
                Some(old) => old + &add,
                None => add,
            };
            self.put(t, j, sum);
        }
    }

    /// In place `col(t) += col(s) * c`, `t != s`.
    pub(crate) fn add_col_multiple(&mut self, t: usize, s: usize, c: &RingElement) {
        debug_assert_ne!(t, s);
        if c.is_zero() {
            return;
        }
        let src: Vec<(usize, RingElement)> = self.col(s).map(|(i, v)| (i, v * c)).collect();
        for (i, add) in src {
            let sum = match self.entries.get(&(i, t)) {
                Some(old) => old + &add,
                None => add,
            };
            self.put(i, t, sum);
        }
    }

    /// In place `row(i) = u * row(i)`.
    pub(crate) fn scale_row_left(&mut self, i: usize, u: &RingElement) {
        let row: Vec<(usize, RingElement)> = self.row(i).map(|(j, v)| (j, u * v)).collect();
        for (j, v) in row {
            self.put(i, j, v);
        }
    }

    /// In place `col(j) = col(j) * u`.
    pub(crate) fn scale_col_right(&mut self, j: usize, u: &RingElement) {
        let col: Vec<(usize, RingElement)> = self.col(j).map(|(i, v)| (i, v * u)).collect();
        for (i, v) in col {
            self.put(i, j, v);
        }
    }

    /// Restriction to the given row and column labels, in the given order.
    pub fn submatrix(&self, rows: &[String], cols: &[String]) -> Result<RingMatrix, AlgebraError> {
        let mut rmap = Vec::with_capacity(rows.len());
        for r in rows {
            rmap.push(self.row_index(r).ok_or_else(|| AlgebraError::UnknownLabel(r.clone()))?);
        }
        let mut cmap = HashMap::with_capacity(cols.len());
        for (new, c) in cols.iter().enumerate() {
            let old = self.col_index(c).ok_or_else(|| AlgebraError::UnknownLabel(c.clone()))?;
            cmap.insert(old, new);
        }
        let mut out = RingMatrix::zeros(&self.group, rows.to_vec(), cols.to_vec())?;
        for (new_i, &old_i) in rmap.iter().enumerate() {
            for (old_j, v) in self.row(old_i) {
                if let Some(&new_j) = cmap.get(&old_j) {
                    out.entries.insert((new_i, new_j), v.clone());
                }
            }
        }
        Ok(out)
    }

    /// Renames labels without touching entries.
    pub fn relabel(&self, rows: Vec<String>, cols: Vec<String>) -> Result<RingMatrix, AlgebraError> {
        if rows.len() != self.rows.len() || cols.len() != self.cols.len() {
            return Err(AlgebraError::ShapeMismatch);
        }
        label_index(&rows)?;
        label_index(&cols)?;
        Ok(RingMatrix {
            rows,
            cols,
            ..self.clone()
        })
    }

    /// Appends a label to both rows and columns of a square matrix.
    pub(crate) fn push_square(&mut self, label: String) {
        self.rows.push(label.clone());
        self.cols.push(label);
    }

    /// Drops the given indices from both rows and columns of a square matrix.
    pub(crate) fn remove_square(&mut self, drop: &[usize]) {
        let n = self.rows.len();
        let mut map = vec![None; n];
        let mut next = 0;
        for (i, slot) in map.iter_mut().enumerate() {
            if !drop.contains(&i) {
                *slot = Some(next);
                next += 1;
            }
        }
        let keep = |v: &Vec<String>| -> Vec<String> {
            v.iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, l)| l.clone())
                .collect()
        };
        self.rows = keep(&self.rows);
        self.cols = keep(&self.cols);
        self.entries = std::mem::take(&mut self.entries)
            .into_iter()
            .filter_map(|((i, j), v)| Some(((map[i]?, map[j]?), v)))
            .collect();
    }

    /// Dense integer matrix of the left regular representation, with one
    /// `|G| x |G|` block per entry.
    pub fn to_integer(&self) -> Vec<Vec<BigInt>> {
        let n = self.group.order();
        let mut out = vec![vec![BigInt::default(); self.cols.len() * n]; self.rows.len() * n];
        for (&(i, j), v) in &self.entries {
            for (g, row) in regular_block(v).into_iter().enumerate() {
                for (h, x) in row.into_iter().enumerate() {
                    out[i * n + g][j * n + h] = x;
                }
            }
        }
        out
    }
}

/// Matrix of `x -> x * a` on the Z-basis `G` of Z[G], in row-vector form:
/// row `g` is the expansion of `g * a`.
pub fn regular_block(a: &RingElement) -> Vec<Vec<BigInt>> {
    let group = a.group();
    let n = group.order();
    let mut block = vec![vec![BigInt::default(); n]; n];
    for (g, row) in block.iter_mut().enumerate() {
        for (h, c) in a.terms() {
            row[group.mul(g, h)] += c;
        }
    }
    block
}

/// Reads a ring element back from its regular-representation block.
pub fn from_regular_block(group: &GroupSpec, block: &[Vec<BigInt>]) -> RingElement {
    let e = group.identity();
    let mut out = RingElement::zero(group);
    for (h, c) in block[e].iter().enumerate() {
        if *c != BigInt::default() {
            out = &out + &RingElement::monomial(group, h, c.clone());
        }
    }
    out
}
