use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Multiplication table of a finite group, indices `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicationTable {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    identity: usize,
}

impl MultiplicationTable {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    pub fn identity(&self) -> usize {
        self.identity
    }
}

/// A group with a decidable normal form.
///
/// Elements are addressed by a canonical index: the exponent in `[0, n)` for
/// `Cyclic(n)`, the table row for `Table`, and `0` for `Trivial`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Trivial,
    Cyclic(usize),
    Table(Arc<MultiplicationTable>),
}

impl GroupSpec {
    pub fn cyclic(n: usize) -> Result<Self, AlgebraError> {
        match n {
            0 => Err(AlgebraError::InvalidGroup("cyclic order must be positive".into())),
            1 => Ok(GroupSpec::Trivial),
            n => Ok(GroupSpec::Cyclic(n)),
        }
    }

    /// Checks the Latin-square, identity and inverse conditions.
    pub fn table(
        table: Vec<Vec<usize>>,
        inverse: Vec<usize>,
        identity: usize,
    ) -> Result<Self, AlgebraError> {
        let order = table.len();
        let bad = |msg: String| Err(AlgebraError::InvalidGroup(msg));
        if order == 0 {
            return bad("empty multiplication table".into());
        }
        if inverse.len() != order {
            return bad(format!("inverse list has {} entries, expected {order}", inverse.len()));
        }
        if identity >= order {
            return bad(format!("identity index {identity} out of range"));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return bad(format!("row {i} has length {}", row.len()));
            }
            let mut seen = vec![false; order];
            for &x in row {
                if x >= order || std::mem::replace(&mut seen[x], true) {
                    return bad(format!("row {i} is not a permutation"));
                }
            }
        }
        for j in 0..order {
            let mut seen = vec![false; order];
            for row in &table {
                if std::mem::replace(&mut seen[row[j]], true) {
                    return bad(format!("column {j} is not a permutation"));
                }
            }
        }
        for g in 0..order {
            if table[identity][g] != g || table[g][identity] != g {
                return bad(format!("index {identity} is not a two-sided identity"));
            }
            let h = inverse[g];
            if h >= order || table[g][h] != identity || table[h][g] != identity {
                return bad(format!("inverse of {g} is inconsistent"));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!("not associative at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(GroupSpec::Table(Arc::new(MultiplicationTable {
            table,
            inverse,
            identity,
        })))
    }

    pub fn order(&self) -> usize {
        match self {
            GroupSpec::Trivial => 1,
            GroupSpec::Cyclic(n) => *n,
            GroupSpec::Table(t) => t.order(),
        }
    }

    pub fn identity(&self) -> usize {
        match self {
            GroupSpec::Table(t) => t.identity,
            _ => 0,
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self {
            GroupSpec::Trivial => 0,
            GroupSpec::Cyclic(n) => (a + b) % n,
            GroupSpec::Table(t) => t.table[a][b],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        match self {
            GroupSpec::Trivial => 0,
            GroupSpec::Cyclic(n) => (n - a % n) % n,
            GroupSpec::Table(t) => t.inverse[a],
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupSpec::Table(t) => {
                let n = t.order();
                (0..n).all(|a| (0..n).all(|b| t.table[a][b] == t.table[b][a]))
            }
            _ => true,
        }
    }

    /// The cyclic order when the group is trivial or cyclic.
    pub fn cyclic_order(&self) -> Option<usize> {
        match self {
            GroupSpec::Trivial => Some(1),
            GroupSpec::Cyclic(n) => Some(*n),
            GroupSpec::Table(_) => None,
        }
    }

    pub fn element(&self, index: usize) -> Result<GroupElement, AlgebraError> {
        let repr = match self {
            GroupSpec::Cyclic(n) => index % n,
            _ if index < self.order() => index,
            _ => return Err(AlgebraError::InvalidElement(index)),
        };
        Ok(GroupElement {
            group: self.clone(),
            repr,
        })
    }

    pub fn identity_element(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            repr: self.identity(),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Trivial => write!(f, "1"),
            GroupSpec::Cyclic(n) => write!(f, "Z/{n}"),
            GroupSpec::Table(t) => write!(f, "G(order {})", t.order()),
        }
    }
}

/// A group element in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    group: GroupSpec,
    repr: usize,
}

impl GroupElement {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn index(&self) -> usize {
        self.repr
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, AlgebraError> {
        if self.group != other.group {
            return Err(AlgebraError::GroupMismatch);
        }
        Ok(GroupElement {
            group: self.group.clone(),
            repr: self.group.mul(self.repr, other.repr),
        })
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            group: self.group.clone(),
            repr: self.group.inv(self.repr),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum GroupJson {
    Trivial,
    Cyclic {
        n: usize,
    },
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
        inverse: Vec<usize>,
        identity: usize,
    },
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let json = match self {
            GroupSpec::Trivial => GroupJson::Trivial,
            GroupSpec::Cyclic(n) => GroupJson::Cyclic { n: *n },
            GroupSpec::Table(t) => GroupJson::Table {
                order: t.order(),
                table: t.table.clone(),
                inverse: t.inverse.clone(),
                identity: t.identity,
            },
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match GroupJson::deserialize(d)? {
            GroupJson::Trivial => Ok(GroupSpec::Trivial),
            GroupJson::Cyclic { n } => GroupSpec::cyclic(n).map_err(D::Error::custom),
            GroupJson::Table {
                order,
                table,
                inverse,
                identity,
            } => {
                if order != table.len() {
                    return Err(D::Error::custom(format!(
                        "order {order} does not match table size {}",
                        table.len()
                    )));
                }
                GroupSpec::table(table, inverse, identity).map_err(D::Error::custom)
            }
        }
    }
}
