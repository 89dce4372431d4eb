//! Dense univariate polynomials over the complex numbers.
//!
//! Coefficients are stored in ascending order (`coeffs[k]` multiplies `s^k`).
//! This module carries the root-finding and interpolation machinery that the
//! determinant/spectral code is built on: characteristic polynomials are
//! recovered from point evaluations, and roots are computed as eigenvalues of
//! the companion matrix, which reuses the dense eigensolver and behaves
//! robustly for the moderate degrees arising here.

use crate::error::{Error, Result};
use crate::lapack;
use crate::CMat;
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Polynomial with ascending complex coefficients.
///
/// Invariant: `coeffs` is non-empty and its last entry (the leading
/// coefficient) is nonzero unless the polynomial is a constant. Exact zeros
/// are trimmed on construction; *approximate* trailing junk is only removed
/// by [`Polynomial::truncate_small`], which callers invoke deliberately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![ZERO] }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![ONE] }
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial::new(vec![c])
    }

    /// `s - lambda`.
    pub fn linear_root(lambda: Complex64) -> Self {
        Polynomial { coeffs: vec![-lambda, ONE] }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    /// Largest coefficient magnitude.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop leading coefficients smaller than `rel * norm_inf` and exact-zero
    /// imaginary dust smaller than the same threshold.
    pub fn truncate_small(&self, rel: f64) -> Polynomial {
        let thresh = rel * self.norm_inf();
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= thresh {
            coeffs.pop();
        }
        Polynomial::new(coeffs)
    }

    /// Force exactly-real coefficients by dropping imaginary parts; intended
    /// for polynomials known to be real up to rounding. The largest imaginary
    /// part removed is returned for diagnostics.
    pub fn take_real(&self) -> (Polynomial, f64) {
        let worst = self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        let p = Polynomial::new(self.coeffs.iter().map(|c| Complex64::new(c.re, 0.0)).collect());
        (p, worst)
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * Complex64::new((i + 1) as f64, 0.0))
                .collect(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![ZERO; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Polynomial::new(coeffs)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, k: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }

    pub fn monic(&self) -> Polynomial {
        let l = self.leading();
        if l == ZERO {
            self.clone()
        } else {
            self.scale(ONE / l)
        }
    }

    /// Synthetic division by `(s - lambda)`: returns `(quotient, remainder)`
    /// with `self = quotient * (s - lambda) + remainder`.
    pub fn div_linear(&self, lambda: Complex64) -> (Polynomial, Complex64) {
        let n = self.coeffs.len();
        if n == 1 {
            return (Polynomial::zero(), self.coeffs[0]);
        }
        let mut q = vec![ZERO; n - 1];
        let mut carry = ZERO;
        for i in (0..n).rev() {
            let val = self.coeffs[i] + carry * lambda;
            if i == 0 {
                return (Polynomial::new(q), val);
            }
            q[i - 1] = val;
            carry = val;
        }
        unreachable!()
    }

    /// Division by a general linear factor `(alpha s - beta)`, `alpha != 0`:
    /// returns `(quotient, remainder)`.
    pub fn div_affine(&self, alpha: Complex64, beta: Complex64) -> (Polynomial, Complex64) {
        assert!(alpha != ZERO, "div_affine requires alpha != 0");
        let (q, r) = self.div_linear(beta / alpha);
        (q.scale(ONE / alpha), r)
    }

    /// Maximum power of `(s - lambda)` dividing this polynomial, decided by
    /// repeated synthetic division with a relative remainder threshold.
    pub fn vanishing_order(&self, lambda: Complex64, rel_tol: f64) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let thresh = rel_tol * 1.0f64.max(self.norm_inf());
        let mut cur = self.clone();
        let mut order = 0;
        while order < self.coeffs.len() {
            let (q, r) = cur.div_linear(lambda);
            if r.norm() > thresh {
                break;
            }
            order += 1;
            cur = q;
            if cur.is_zero() {
                break;
            }
        }
        order
    }

    /// True when all imaginary parts are below `tol * max(1, norm_inf)`.
    pub fn is_real_within(&self, tol: f64) -> bool {
        let thresh = tol * 1.0f64.max(self.norm_inf());
        self.coeffs.iter().all(|c| c.im.abs() <= thresh)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.norm() == 0.0 && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "({c})")?;
            } else if k == 1 {
                write!(f, "({c})*s")?;
            } else {
                write!(f, "({c})*s^{k}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Roots with multiplicities, as produced by clustering.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootMultiset {
    /// `(cluster centroid, multiplicity)`, sorted by (re, im).
    pub roots: Vec<(Complex64, usize)>,
    /// Clustering tolerance actually used (base value, applied relative to
    /// `max(1, |root|)`).
    pub cluster_tol: f64,
}

impl RootMultiset {
    pub fn total(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }
}

/// Interpolate the unique polynomial of degree `< nodes.len()` through the
/// given data, via Newton divided differences.
pub fn interpolate(nodes: &[Complex64], values: &[Complex64]) -> Result<Polynomial> {
    assert_eq!(nodes.len(), values.len(), "interpolate: node/value length mismatch");
    let n = nodes.len();
    if n == 0 {
        return Ok(Polynomial::zero());
    }
    let scale = nodes.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for i in 0..n {
        for j in (i + 1)..n {
            if (nodes[i] - nodes[j]).norm() <= 1e-14 * scale {
                return Err(Error::DuplicateNodes(i, j));
            }
        }
    }
    // Divided-difference table, in place.
    let mut dd = values.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - k]);
        }
    }
    // Horner assembly of the Newton form.
    let mut p = Polynomial::constant(dd[n - 1]);
    for i in (0..n - 1).rev() {
        p = p.mul(&Polynomial::linear_root(nodes[i]));
        p = p.add(&Polynomial::constant(dd[i]));
    }
    Ok(p)
}

/// Monic polynomial with the prescribed roots and multiplicities. If the
/// multiset is conjugate-symmetric (within rounding), the imaginary dust is
/// removed so real spectra give exactly-real coefficients.
pub fn poly_from_roots(roots: &[(Complex64, usize)]) -> Polynomial {
    let mut p = Polynomial::one();
    for &(r, m) in roots {
        for _ in 0..m {
            p = p.mul(&Polynomial::linear_root(r));
        }
    }
    if conj_symmetric(roots) {
        p.take_real().0
    } else {
        p
    }
}

fn conj_symmetric(roots: &[(Complex64, usize)]) -> bool {
    let tol = 1e-12;
    roots.iter().all(|&(r, m)| {
        if r.im.abs() <= tol * 1.0f64.max(r.norm()) {
            true
        } else {
            roots.iter().any(|&(q, mq)| {
                mq == m && (q - r.conj()).norm() <= tol * 1.0f64.max(r.norm())
            })
        }
    })
}

/// Companion matrix of the monic normalization of `p` (degree >= 1).
pub fn companion(p: &Polynomial) -> CMat {
    let p = p.monic();
    let d = p.degree();
    let mut c: CMat = Array2::zeros((d, d));
    for i in 1..d {
        c[[i, i - 1]] = ONE;
    }
    for i in 0..d {
        c[[i, d - 1]] = -p.coeffs[i];
    }
    c
}

/// All roots of `p` with multiplicities recovered by clustering.
///
/// Roots are computed as eigenvalues of the companion matrix; clusters merge
/// points within `cluster_tol * max(1, |root|)` (single linkage) and report
/// their centroid, which for a true multiple root is far more accurate than
/// any individual member of the cluster.
pub fn roots_with_multiplicity(p: &Polynomial, cluster_tol: f64) -> Result<RootMultiset> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    // Strip float dust on the leading coefficients before forming the
    // companion matrix; a relative 1e-12 cut keeps honest small leading
    // coefficients while removing pure rounding residue.
    let p = p.truncate_small(1e-12);
    if p.degree() == 0 {
        return Ok(RootMultiset { roots: vec![], cluster_tol });
    }
    let eigs = lapack::eigvals(&companion(&p))?;
    Ok(cluster_roots(&eigs, cluster_tol))
}

/// Single-linkage clustering of a point set; exposed for eigenvalue grouping.
pub fn cluster_roots(points: &[Complex64], cluster_tol: f64) -> RootMultiset {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = 1.0f64.max(points[i].norm()).max(points[j].norm());
            if (points[i] - points[j]).norm() <= cluster_tol * scale {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(points[i]);
    }
    let mut roots: Vec<(Complex64, usize)> = groups
        .values()
        .map(|g| {
            let sum: Complex64 = g.iter().sum();
            (sum / Complex64::new(g.len() as f64, 0.0), g.len())
        })
        .collect();
    roots.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    RootMultiset { roots, cluster_tol }
}
