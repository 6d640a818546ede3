use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major.
pub type IntMatrix = Vec<Vec<BigInt>>;

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal `d_1 | d_2 | ...`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect()
    }

    /// Re-multiplies `u * a * v` and checks it against `d`.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        if self.u.len() != rows || self.v.len() != cols {
            return false;
        }
        mat_mul(&mat_mul(&self.u, a, cols), &self.v, cols) == self.d
            && is_diagonal_chain(&self.d)
    }
}

fn is_diagonal_chain(d: &IntMatrix) -> bool {
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j && !x.is_zero() {
                return false;
            }
        }
    }
    let k = d.len().min(d.first().map_or(0, Vec::len));
    (1..k).all(|i| {
        let (prev, cur) = (&d[i - 1][i - 1], &d[i][i]);
        !prev.is_negative()
            && !cur.is_negative()
            && if prev.is_zero() { cur.is_zero() } else { (cur % prev).is_zero() }
    })
}

/// Product of an `m x k` and a `k x n` matrix; `n` is passed for the empty case.
pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, n: usize) -> IntMatrix {
    let n = b.first().map_or(n, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![BigInt::zero(); n];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_axpy(m: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    let (t, s) = if target < source {
        let (lo, hi) = m.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s) {
        if !y.is_zero() {
            *x += q * y;
        }
    }
}

fn col_axpy(m: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[source].is_zero() {
            let add = q * &row[source];
            row[target] += add;
        }
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form with transforms.
///
/// Pivots on the entry of smallest absolute value in the remaining block,
/// ties broken by row then column order.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for (i, row) in d.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if x.is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| x.abs() < d[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return SmithForm { d, u, v };
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let p = d[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = -(d[i][t].div_floor(&p));
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = -(d[t][j].div_floor(&p));
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..rows).find(|&i| d[i].iter().skip(t + 1).any(|x| !(x % &p).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    row_axpy(&mut d, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    SmithForm { d, u, v }
}

/// Inverse of a unimodular integer matrix, `None` if it is not invertible over Z.
pub fn unimodular_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return None;
    }
    let snf = smith_normal_form(a);
    if snf.diagonal().iter().any(|x| !x.is_one()) {
        return None;
    }
    // u a v = 1  =>  a^-1 = v u
    Some(mat_mul(&snf.v, &snf.u, n))
}
