//! Exact dense matrices over `Q(i)`: Gaussian elimination for rank, nullity
//! and determinant. Used for the direct nullity-tower route of the oracle.

use crate::rational::Qi;

#[derive(Debug, Clone, PartialEq)]
pub struct QiMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Qi>,
}

impl QiMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QiMat { rows, cols, data: vec![Qi::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<Qi>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = QiMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Build from Gaussian-integer entries `(re, im)`.
    pub fn from_ints(rows: &[Vec<(i64, i64)>]) -> Self {
        let converted: Vec<Vec<Qi>> = rows
            .iter()
            .map(|row| row.iter().map(|&(re, im)| Qi::from_ints(re, im)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    pub fn get(&self, i: usize, j: usize) -> &Qi {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Qi) {
        self.data[i * self.cols + j] = v;
    }

    /// Exact rank by fraction-full Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0usize;
        let mut col = 0usize;
        while rank < m.rows && col < m.cols {
            // Find a pivot in this column at or below `rank`.
            let pivot = (rank..m.rows).find(|&i| !m.get(i, col).is_zero());
            let Some(p) = pivot else {
                col += 1;
                continue;
            };
            if p != rank {
                for j in 0..m.cols {
                    let a = m.get(rank, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(rank, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(rank, col).inv();
            for i in (rank + 1)..m.rows {
                if m.get(i, col).is_zero() {
                    continue;
                }
                let factor = &(m.get(i, col) * &inv);
                for j in col..m.cols {
                    let val = m.get(i, j) - &(factor * m.get(rank, j));
                    m.set(i, j, val);
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Exact determinant (square matrices).
    pub fn det(&self) -> Qi {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Qi::one();
        for k in 0..n {
            let pivot = (k..n).find(|&i| !m.get(i, k).is_zero());
            let Some(p) = pivot else {
                return Qi::zero();
            };
            if p != k {
                det = -det;
                for j in 0..n {
                    let a = m.get(k, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(k, j, b);
                    m.set(p, j, a);
                }
            }
            det = &det * m.get(k, k);
            let inv = m.get(k, k).inv();
            for i in (k + 1)..n {
                if m.get(i, k).is_zero() {
                    continue;
                }
                let factor = &(m.get(i, k) * &inv);
                for j in k..n {
                    let val = m.get(i, j) - &(factor * m.get(k, j));
                    m.set(i, j, val);
                }
            }
        }
        det
    }
}

/// Exact nullity tower of the pencil `sE - A` at a Gaussian-rational `λ`:
/// nullities of the `kn x kn` block matrices with `A - λE` on the diagonal
/// and `-E` below, for `k = 1..=kmax`. For the structure at infinity call
/// this on the dual pencil `(-A, -E)` at `λ = 0`.
pub fn nullity_tower(e: &QiMat, a: &QiMat, lambda: &Qi, kmax: usize) -> Vec<usize> {
    assert_eq!(e.rows, e.cols);
    assert_eq!(a.rows, a.cols);
    assert_eq!(e.rows, a.rows);
    let n = e.rows;
    let mut d = QiMat::zeros(n, n); // A - λE
    for i in 0..n {
        for j in 0..n {
            d.set(i, j, a.get(i, j) - &(lambda * e.get(i, j)));
        }
    }
    let mut tower = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let mut b = QiMat::zeros(k * n, k * n);
        for blk in 0..k {
            for i in 0..n {
                for j in 0..n {
                    b.set(blk * n + i, blk * n + j, d.get(i, j).clone());
                    if blk > 0 {
                        b.set(blk * n + i, (blk - 1) * n + j, -e.get(i, j));
                    }
                }
            }
        }
        tower.push(b.nullity());
    }
    tower
}
