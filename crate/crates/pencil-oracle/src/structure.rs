//! The oracle proper: exact eigenstructure of an integer pencil, packaged
//! for comparison against floating-point spectral analysis.
//!
//! Finite structure comes from the Smith form of `sE - A`: invariant-factor
//! multiplicities are Segre characteristics. Eigenvalues themselves are
//! generally irrational, so they are never represented exactly; instead the
//! invariant factors are split over an exact gcd-free basis of square-free
//! polynomials, every root of one basis element provably shares the same
//! Segre characteristic, and only the root *positions* are approximated.
//! Matching a float eigenvalue against the oracle is therefore exact in the
//! structure and approximate only in the location — with ambiguity treated
//! as a hard failure rather than a guess.
//!
//! The structure at infinity needs no matching at all: it is the exact
//! `s`-adic valuation pattern of the dual pencil's invariant factors.

use crate::matrix::{self, QiMat};
use crate::poly::{self, QiPoly};
use crate::rational::Qi;
use crate::roots;
use crate::smith;
use num_complex::Complex64;

/// One exact finite eigenvalue class: a position known to float accuracy
/// plus an exactly-known Segre characteristic.
#[derive(Debug, Clone)]
pub struct ExactEig {
    pub approx: Complex64,
    /// Chain lengths, longest first (exact integers).
    pub segre: Vec<usize>,
}

impl ExactEig {
    pub fn root_dim(&self) -> usize {
        self.segre.iter().sum()
    }

    pub fn tower(&self, kmax: usize) -> Vec<usize> {
        smith::tower_from_segre(&self.segre, kmax)
    }
}

/// Exact eigenstructure of an integer pencil.
#[derive(Debug, Clone)]
pub struct ExactStructure {
    pub n: usize,
    pub regular: bool,
    pub finite: Vec<ExactEig>,
    /// Segre characteristic at infinity (empty when E is invertible).
    pub inf_segre: Vec<usize>,
}

impl ExactStructure {
    /// Σ over all eigenvalues of `m_1` — the perturbation capacity.
    pub fn capacity(&self) -> usize {
        let fin: usize = self.finite.iter().map(|e| e.segre[0]).sum();
        fin + self.inf_segre.first().copied().unwrap_or(0)
    }

    pub fn inf_dim(&self) -> usize {
        self.inf_segre.iter().sum()
    }

    /// Locate the unique exact eigenvalue class within `tol` of `z`.
    /// Panics when zero or several classes match — the caller is comparing
    /// structures, and an ambiguous match would silently corrupt exactly the
    /// comparison the oracle exists to certify.
    pub fn match_eig(&self, z: Complex64, tol: f64) -> &ExactEig {
        let scale = 1.0f64.max(z.norm());
        let hits: Vec<&ExactEig> = self
            .finite
            .iter()
            .filter(|e| (e.approx - z).norm() <= tol * scale)
            .collect();
        match hits.len() {
            1 => hits[0],
            0 => panic!("oracle: no exact eigenvalue within {tol:.1e} of {z}"),
            _ => panic!("oracle: ambiguous eigenvalue match at {z}"),
        }
    }

    /// Like [`Self::match_eig`] but returns None instead of panicking on a
    /// miss (ambiguity still panics).
    pub fn try_match_eig(&self, z: Complex64, tol: f64) -> Option<&ExactEig> {
        let scale = 1.0f64.max(z.norm());
        let hits: Vec<&ExactEig> = self
            .finite
            .iter()
            .filter(|e| (e.approx - z).norm() <= tol * scale)
            .collect();
        match hits.len() {
            0 => None,
            1 => Some(hits[0]),
            _ => panic!("oracle: ambiguous eigenvalue match at {z}"),
        }
    }
}

/// Compute the exact eigenstructure of the pencil `sE - A` given by
/// Gaussian-integer matrices (entries as `(re, im)` pairs, row major).
pub fn exact_structure(e: &[Vec<(i64, i64)>], a: &[Vec<(i64, i64)>]) -> ExactStructure {
    let n = e.len();
    let factors = smith::pencil_invariant_factors(e, a);
    let regular = factors.iter().all(|d| !d.is_zero());
    if !regular {
        return ExactStructure { n, regular, finite: vec![], inf_segre: vec![] };
    }

    // Gcd-free basis of all square-free parts of all invariant factors.
    let mut parts: Vec<QiPoly> = Vec::new();
    let mut sf_per_factor: Vec<Vec<(QiPoly, usize)>> = Vec::new();
    for d in &factors {
        let sf = poly::square_free(d);
        for (p, _) in &sf {
            parts.push(p.clone());
        }
        sf_per_factor.push(sf);
    }
    let basis = poly::gcd_free_basis(&parts);

    let mut finite: Vec<ExactEig> = Vec::new();
    for b in &basis {
        // Multiplicity of (every root of) b in each invariant factor.
        let mut mults: Vec<usize> = Vec::with_capacity(factors.len());
        for sf in &sf_per_factor {
            let m = sf
                .iter()
                .find(|(p, _)| b.divides(p))
                .map(|(_, k)| *k)
                .unwrap_or(0);
            mults.push(m);
        }
        let mut segre: Vec<usize> = mults.into_iter().filter(|&m| m > 0).collect();
        segre.sort_unstable_by(|x, y| y.cmp(x));
        if segre.is_empty() {
            continue;
        }
        // Approximate positions of b's (simple) roots.
        let coeffs: Vec<Complex64> = b
            .c
            .iter()
            .map(|q| {
                let (re, im) = q.to_f64();
                Complex64::new(re, im)
            })
            .collect();
        for z in roots::roots(&coeffs) {
            finite.push(ExactEig { approx: z, segre: segre.clone() });
        }
    }
    finite.sort_by(|x, y| {
        (x.approx.re, x.approx.im)
            .partial_cmp(&(y.approx.re, y.approx.im))
            .unwrap()
    });

    // Structure at infinity: s-adic valuations of the dual pencil's
    // invariant factors — fully exact, no root finding involved.
    let minus = |m: &[Vec<(i64, i64)>]| -> Vec<Vec<(i64, i64)>> {
        m.iter()
            .map(|row| row.iter().map(|&(re, im)| (-re, -im)).collect())
            .collect()
    };
    let dual_factors = smith::pencil_invariant_factors(&minus(a), &minus(e));
    let mut inf_segre: Vec<usize> = dual_factors
        .iter()
        .map(|d| d.valuation_at_zero())
        .filter(|&v| v > 0)
        .collect();
    inf_segre.sort_unstable_by(|x, y| y.cmp(x));

    ExactStructure { n, regular, finite, inf_segre }
}

/// Direct exact nullity tower at a Gaussian-rational point — an independent
/// second route (block-matrix nullities, no Smith form) used to cross-check
/// the invariant-factor machinery in tests.
pub fn exact_tower_at(
    e: &[Vec<(i64, i64)>],
    a: &[Vec<(i64, i64)>],
    lambda: Qi,
    kmax: usize,
) -> Vec<usize> {
    let em = QiMat::from_ints(e);
    let am = QiMat::from_ints(a);
    matrix::nullity_tower(&em, &am, &lambda, kmax)
}

/// Exact tower at infinity (dual pencil at zero).
pub fn exact_tower_at_inf(
    e: &[Vec<(i64, i64)>],
    a: &[Vec<(i64, i64)>],
    kmax: usize,
) -> Vec<usize> {
    let neg = |m: &[Vec<(i64, i64)>]| -> Vec<Vec<(i64, i64)>> {
        m.iter()
            .map(|row| row.iter().map(|&(re, im)| (-re, -im)).collect())
            .collect()
    };
    exact_tower_at(&neg(a), &neg(e), Qi::zero(), kmax)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ident(n: usize) -> Vec<Vec<(i64, i64)>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { (1, 0) } else { (0, 0) }).collect())
            .collect()
    }

    #[test]
    fn mixed_structure() {
        // E = diag(1,1,0), A = diag(2,2,1): eigenvalue 2 with Segre (1,1),
        // simple eigenvalue at infinity.
        let e = vec![
            vec![(1, 0), (0, 0), (0, 0)],
            vec![(0, 0), (1, 0), (0, 0)],
            vec![(0, 0), (0, 0), (0, 0)],
        ];
        let a = vec![
            vec![(2, 0), (0, 0), (0, 0)],
            vec![(0, 0), (2, 0), (0, 0)],
            vec![(0, 0), (0, 0), (1, 0)],
        ];
        let st = exact_structure(&e, &a);
        assert!(st.regular);
        assert_eq!(st.finite.len(), 1);
        assert_eq!(st.finite[0].segre, vec![1, 1]);
        assert!((st.finite[0].approx - Complex64::new(2.0, 0.0)).norm() < 1e-9);
        assert_eq!(st.inf_segre, vec![1]);
        assert_eq!(st.capacity(), 2);
        assert_eq!(st.inf_dim(), 1);
    }

    #[test]
    fn irrational_eigenvalues_share_segre() {
        // A = [[0,2],[1,0]]: eigenvalues ±√2, both simple — the oracle knows
        // the structure exactly without ever representing √2.
        let a = vec![vec![(0, 0), (2, 0)], vec![(1, 0), (0, 0)]];
        let st = exact_structure(&ident(2), &a);
        assert_eq!(st.finite.len(), 2);
        let s2 = 2f64.sqrt();
        let hit = st.match_eig(Complex64::new(s2, 0.0), 1e-8);
        assert_eq!(hit.segre, vec![1]);
        let hit2 = st.match_eig(Complex64::new(-s2, 0.0), 1e-8);
        assert_eq!(hit2.segre, vec![1]);
        st.tower_agreement_check();
    }

    impl ExactStructure {
        /// Internal consistency: Σ root dims + inf dim = n.
        fn tower_agreement_check(&self) {
            let total: usize =
                self.finite.iter().map(|e| e.root_dim()).sum::<usize>() + self.inf_dim();
            assert_eq!(total, self.n);
        }
    }

    #[test]
    fn nilpotent_full_infinity() {
        // E = J2(0), A = I2: everything at infinity, one chain of length 2.
        let e = vec![vec![(0, 0), (1, 0)], vec![(0, 0), (0, 0)]];
        let st = exact_structure(&e, &ident(2));
        assert!(st.finite.is_empty());
        assert_eq!(st.inf_segre, vec![2]);
        assert_eq!(exact_tower_at_inf(&e, &ident(2), 2), vec![1, 2]);
    }

    #[test]
    fn repeated_irrational_pair() {
        // A = [[0,2],[1,0]] ⊕ [[0,2],[1,0]]: ±√2 each with Segre (1,1).
        let a = vec![
            vec![(0, 0), (2, 0), (0, 0), (0, 0)],
            vec![(1, 0), (0, 0), (0, 0), (0, 0)],
            vec![(0, 0), (0, 0), (0, 0), (2, 0)],
            vec![(0, 0), (0, 0), (1, 0), (0, 0)],
        ];
        let st = exact_structure(&ident(4), &a);
        let s2 = 2f64.sqrt();
        let hit = st.match_eig(Complex64::new(s2, 0.0), 1e-8);
        assert_eq!(hit.segre, vec![1, 1]);
        assert_eq!(hit.tower(1), vec![2]);
    }

    #[test]
    fn singular_pencil_flagged() {
        let e = vec![vec![(1, 0), (1, 0)], vec![(0, 0), (0, 0)]];
        let a = vec![vec![(-1, 0), (-1, 0)], vec![(-1, 0), (-1, 0)]];
        let st = exact_structure(&e, &a);
        assert!(!st.regular);
    }

    #[test]
    fn smith_route_matches_rational_tower_route() {
        // Eigenvalue 1 on a non-diagonal integer pencil, both routes.
        let e = ident(3);
        let a = vec![
            vec![(1, 0), (1, 0), (2, 0)],
            vec![(0, 0), (1, 0), (-1, 0)],
            vec![(0, 0), (0, 0), (1, 0)],
        ];
        let st = exact_structure(&e, &a);
        let hit = st.match_eig(Complex64::new(1.0, 0.0), 1e-8);
        let kmax = hit.segre[0];
        let direct = exact_tower_at(&e, &a, Qi::from_ints(1, 0), kmax);
        assert_eq!(direct, hit.tower(kmax));
    }
}
