//! Smith normal form of polynomial matrices over `Q(i)[s]`.
//!
//! The invariant factors `d_1 | d_2 | ... | d_n` of `sE - A` carry the
//! complete finite eigenstructure of a regular pencil: the multiplicity of
//! `(s - λ)` inside `d_{n-j+1}` is the length of the `j`-th longest Jordan
//! chain at `λ`. Everything is computed in exact rational arithmetic.

use crate::poly::QiPoly;
use crate::rational::Qi;

/// Dense polynomial matrix (row major).
#[derive(Debug, Clone)]
pub struct PolyMat {
    pub n: usize,
    data: Vec<QiPoly>,
}

impl PolyMat {
    pub fn zeros(n: usize) -> Self {
        PolyMat { n, data: vec![QiPoly::zero(); n * n] }
    }

    pub fn get(&self, i: usize, j: usize) -> &QiPoly {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: QiPoly) {
        self.data[i * self.n + j] = p;
    }

    /// `sE - A` from Gaussian-integer coefficient matrices.
    pub fn pencil(e: &[Vec<(i64, i64)>], a: &[Vec<(i64, i64)>]) -> Self {
        let n = e.len();
        assert!(e.iter().chain(a.iter()).all(|r| r.len() == n) && a.len() == n);
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let (ere, eim) = e[i][j];
                let (are, aim) = a[i][j];
                m.set(
                    i,
                    j,
                    QiPoly::new(vec![
                        -Qi::from_ints(are, aim),
                        Qi::from_ints(ere, eim),
                    ]),
                );
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n {
            self.data.swap(a * self.n + j, b * self.n + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.n {
            self.data.swap(i * self.n + a, i * self.n + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_op(&mut self, dst: usize, src: usize, q: &QiPoly) {
        for j in 0..self.n {
            let val = self.get(dst, j).sub(&q.mul(self.get(src, j)));
            self.set(dst, j, val);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_op(&mut self, dst: usize, src: usize, q: &QiPoly) {
        for i in 0..self.n {
            let val = self.get(i, dst).sub(&q.mul(self.get(i, src)));
            self.set(i, dst, val);
        }
    }

    /// row[dst] += row[src]
    fn row_add(&mut self, dst: usize, src: usize) {
        for j in 0..self.n {
            let val = self.get(dst, j).add(self.get(src, j));
            self.set(dst, j, val);
        }
    }
}

/// Invariant factors `d_1 | d_2 | ... | d_n`, monic; zero entries (for a
/// singular matrix) come last.
pub fn smith_form(m: &PolyMat) -> Vec<QiPoly> {
    let n = m.n;
    let mut w = m.clone();
    let mut diag = vec![QiPoly::zero(); n];
    for t in 0..n {
        loop {
            // Minimal-degree nonzero entry of the trailing submatrix.
            let mut best: Option<(usize, usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    let p = w.get(i, j);
                    if p.is_zero() {
                        continue;
                    }
                    let d = p.degree();
                    if best.map_or(true, |(_, _, bd)| d < bd) {
                        best = Some((i, j, d));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                // Entire remaining block is zero.
                return diag;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);

            // Clear below and to the right of the pivot; if any remainder
            // survives (degree dropped), loop again with the smaller pivot.
            let mut dirty = false;
            for i in (t + 1)..n {
                if w.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = w.get(i, t).divmod(w.get(t, t));
                w.row_op(i, t, &q);
                if !r.is_zero() {
                    dirty = true;
                }
            }
            for j in (t + 1)..n {
                if w.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = w.get(t, j).divmod(w.get(t, t));
                w.col_op(j, t, &q);
                if !r.is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let cleared = (t + 1..n).all(|i| w.get(i, t).is_zero())
                && (t + 1..n).all(|j| w.get(t, j).is_zero());
            if !cleared {
                continue;
            }
            // Divisibility pass: the pivot must divide the whole trailing
            // block for the chain d_t | d_{t+1} to hold.
            let mut offender = None;
            'scan: for i in (t + 1)..n {
                for j in (t + 1)..n {
                    if !w.get(i, j).divmod(w.get(t, t)).1.is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = offender {
                w.row_add(t, i);
                continue;
            }
            break;
        }
        diag[t] = w.get(t, t).monic();
    }
    diag
}

/// Invariant factors of the pencil `sE - A` built from integer matrices.
pub fn pencil_invariant_factors(
    e: &[Vec<(i64, i64)>],
    a: &[Vec<(i64, i64)>],
) -> Vec<QiPoly> {
    smith_form(&PolyMat::pencil(e, a))
}

/// Segre characteristic (chain lengths, longest first) of an exact
/// eigenvalue `λ` read off the invariant factors.
pub fn segre_at(factors: &[QiPoly], lambda: &Qi) -> Vec<usize> {
    let mut lens: Vec<usize> = factors
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| d.root_multiplicity(lambda))
        .filter(|&m| m > 0)
        .collect();
    lens.sort_unstable_by(|x, y| y.cmp(x));
    lens
}

/// The nullity tower `ν_1..ν_k` implied by a Segre characteristic:
/// `ν_k = Σ_j min(m_j, k)`.
pub fn tower_from_segre(segre: &[usize], kmax: usize) -> Vec<usize> {
    (1..=kmax)
        .map(|k| segre.iter().map(|&m| m.min(k)).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix;

    fn ident(n: usize) -> Vec<Vec<(i64, i64)>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { (1, 0) } else { (0, 0) }).collect())
            .collect()
    }

    #[test]
    fn diagonal_pencil_invariants() {
        // sI - diag(1,2): factors 1, (s-1)(s-2).
        let a = vec![vec![(1, 0), (0, 0)], vec![(0, 0), (2, 0)]];
        let f = pencil_invariant_factors(&ident(2), &a);
        assert_eq!(f[0].degree(), 0);
        assert_eq!(f[1].degree(), 2);
        assert_eq!(f[1].root_multiplicity(&Qi::from_ints(1, 0)), 1);
        assert_eq!(f[1].root_multiplicity(&Qi::from_ints(2, 0)), 1);
    }

    #[test]
    fn jordan_block_invariants() {
        // sI - J2(0): factors 1, s^2 — one chain of length 2 at zero.
        let a = vec![vec![(0, 0), (1, 0)], vec![(0, 0), (0, 0)]];
        let f = pencil_invariant_factors(&ident(2), &a);
        assert_eq!(segre_at(&f, &Qi::zero()), vec![2]);
    }

    #[test]
    fn two_blocks_same_eigenvalue() {
        // A = J2(0) ⊕ J1(0): factors 1, s, s^2 — Segre (2, 1) at zero.
        let a = vec![
            vec![(0, 0), (1, 0), (0, 0)],
            vec![(0, 0), (0, 0), (0, 0)],
            vec![(0, 0), (0, 0), (0, 0)],
        ];
        let f = pencil_invariant_factors(&ident(3), &a);
        assert_eq!(segre_at(&f, &Qi::zero()), vec![2, 1]);
        assert_eq!(tower_from_segre(&[2, 1], 2), vec![2, 3]);
    }

    #[test]
    fn segre_agrees_with_direct_tower() {
        // Nontrivial integer pencil: cross-check the Smith route against
        // exact block-matrix nullities at a known eigenvalue.
        let e = vec![
            vec![(1, 0), (0, 0), (0, 0)],
            vec![(0, 0), (1, 0), (0, 0)],
            vec![(0, 0), (0, 0), (1, 0)],
        ];
        let a = vec![
            vec![(3, 0), (1, 0), (0, 0)],
            vec![(0, 0), (3, 0), (0, 0)],
            vec![(0, 0), (0, 0), (3, 0)],
        ];
        let f = pencil_invariant_factors(&e, &a);
        let segre = segre_at(&f, &Qi::from_ints(3, 0));
        assert_eq!(segre, vec![2, 1]);
        let em = matrix::QiMat::from_ints(&e);
        let am = matrix::QiMat::from_ints(&a);
        let tower = matrix::nullity_tower(&em, &am, &Qi::from_ints(3, 0), 2);
        assert_eq!(tower, tower_from_segre(&segre, 2));
    }

    #[test]
    fn singular_matrix_reports_zero_factor() {
        // Rank-one pencil [[s+1, s+1], [1, 1]] is singular: one zero factor.
        let e = vec![vec![(1, 0), (1, 0)], vec![(0, 0), (0, 0)]];
        let a = vec![vec![(-1, 0), (-1, 0)], vec![(-1, 0), (-1, 0)]];
        let f = pencil_invariant_factors(&e, &a);
        assert!(f.iter().any(|d| d.is_zero()));
    }

    #[test]
    fn complex_eigenvalues_exact() {
        // A = [[0,1],[-1,0]], eigenvalues ±i.
        let a = vec![vec![(0, 0), (1, 0)], vec![(-1, 0), (0, 0)]];
        let f = pencil_invariant_factors(&ident(2), &a);
        assert_eq!(segre_at(&f, &Qi::from_ints(0, 1)), vec![1]);
        assert_eq!(segre_at(&f, &Qi::from_ints(0, -1)), vec![1]);
        assert_eq!(segre_at(&f, &Qi::from_ints(1, 0)), Vec::<usize>::new());
    }

    #[test]
    fn poly_mat_divisibility_chain() {
        use crate::poly::gcd;
        // Random-ish fixed integer pencil; verify d_i | d_{i+1}.
        let e = vec![
            vec![(1, 0), (2, 0), (0, 0)],
            vec![(0, 0), (1, 0), (1, 0)],
            vec![(0, 0), (0, 0), (1, 0)],
        ];
        let a = vec![
            vec![(2, 0), (-1, 0), (3, 0)],
            vec![(1, 0), (0, 0), (-2, 0)],
            vec![(0, 0), (1, 0), (1, 0)],
        ];
        let f = pencil_invariant_factors(&e, &a);
        for w in f.windows(2) {
            if w[1].is_zero() {
                continue;
            }
            assert!(
                w[0].divides(&w[1]),
                "invariant factors must form a divisibility chain"
            );
        }
    }
}
