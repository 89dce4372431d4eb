//! Matrix pencils `A(s) = sE - A` and their characteristic polynomials.

use crate::error::{Error, Result};
use crate::lapack;
use crate::poly::{self, Polynomial};
use crate::CMat;
use ndarray::Array2;
use num_complex::Complex64;

/// A square matrix pencil `A(s) = sE - A`.
///
/// Real pencils are stored in the same complex containers and detected by
/// inspecting the entries; the spectral code uses this to restore exact
/// conjugate symmetry of computed spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    pub e: CMat,
    pub a: CMat,
}

impl Pencil {
    pub fn new(e: CMat, a: CMat) -> Result<Pencil> {
        let (m, n) = e.dim();
        if m != n {
            return Err(Error::Dimension(format!("E is {m}x{n}, expected square")));
        }
        if a.dim() != (n, n) {
            return Err(Error::Dimension(format!(
                "A is {}x{}, expected {n}x{n}",
                a.dim().0,
                a.dim().1
            )));
        }
        Ok(Pencil { e, a })
    }

    pub fn from_real(e: &Array2<f64>, a: &Array2<f64>) -> Result<Pencil> {
        let conv = |m: &Array2<f64>| m.mapv(|x| Complex64::new(x, 0.0));
        Pencil::new(conv(e), conv(a))
    }

    /// Identity-`E` pencil for an ordinary matrix eigenvalue problem.
    pub fn from_matrix(a: CMat) -> Result<Pencil> {
        let n = a.dim().0;
        Pencil::new(Array2::eye(n), a)
    }

    pub fn n(&self) -> usize {
        self.e.dim().0
    }

    pub fn is_real(&self) -> bool {
        self.e.iter().chain(self.a.iter()).all(|z| z.im == 0.0)
    }

    /// `1 + max(||E||_inf, ||A||_inf)` — the scale used for node placement
    /// and regularity thresholds.
    pub fn scale(&self) -> f64 {
        1.0 + lapack::norm_inf(&self.e).max(lapack::norm_inf(&self.a))
    }

    /// Evaluate the pencil at a point: `sE - A`.
    pub fn evaluate(&self, s: Complex64) -> CMat {
        let mut m = self.e.mapv(|z| z * s);
        m -= &self.a;
        m
    }

    /// The dual (reciprocal) pencil `A'(s) = -sA + E`, stored as the pencil
    /// with `E' = -A`, `A' = -E`. Its spectrum is the image of this pencil's
    /// spectrum under `s -> 1/s` with `0` and `infinity` exchanged, and its
    /// chains at `0` are exactly this pencil's chains at infinity.
    pub fn dualize(&self) -> Pencil {
        Pencil {
            e: self.a.mapv(|z| -z),
            a: self.e.mapv(|z| -z),
        }
    }

    /// Evaluation nodes for determinant interpolation: `n + 1` roots of unity
    /// scaled to the pencil's magnitude.
    pub fn det_nodes(&self) -> Vec<Complex64> {
        let n = self.n();
        let r = self.scale();
        (0..=n)
            .map(|k| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / (n + 1) as f64))
            .collect()
    }

    fn det_samples(&self) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let nodes = self.det_nodes();
        let mut vals = Vec::with_capacity(nodes.len());
        for &s in &nodes {
            vals.push(lapack::det(&self.evaluate(s))?);
        }
        Ok((nodes, vals))
    }

    /// Regularity test: `det(sE - A)` must exceed `tol` times the Hadamard
    /// row-norm bound `prod_i (|s| ||e_i|| + ||a_i||)` at at least one of the
    /// `n + 1` interpolation nodes. For a degree-`<= n` polynomial this is
    /// equivalent (up to the tolerance) to not vanishing identically; the
    /// Hadamard anchor keeps the threshold meaningful when the determinant is
    /// degree-deficient (eigenvalues at infinity) or the entries are large.
    pub fn is_regular(&self, tol: f64) -> Result<bool> {
        let (nodes, vals) = self.det_samples()?;
        let r = nodes[0].norm();
        let row_norm = |m: &CMat, i: usize| -> f64 {
            m.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
        };
        let mut hadamard = 1.0f64;
        for i in 0..self.n() {
            hadamard *= r * row_norm(&self.e, i) + row_norm(&self.a, i);
        }
        if hadamard == 0.0 {
            // A row vanishing in both matrices makes the pencil singular.
            return Ok(false);
        }
        let bound = tol * hadamard;
        Ok(vals.iter().any(|d| d.norm() > bound))
    }

    /// Characteristic polynomial `det(sE - A)`, recovered by interpolation
    /// through the determinant samples.
    pub fn char_poly(&self) -> Result<CharPoly> {
        let (nodes, vals) = self.det_samples()?;
        let mut p = poly::interpolate(&nodes, &vals)?;
        if self.is_real() {
            p = p.take_real().0;
        }
        // Leading coefficients that are pure rounding residue (for singular E
        // the true top coefficients are exactly zero) are cut at a relative
        // threshold; what survives defines the finite degree.
        let p = p.truncate_small(CharPoly::DEGREE_REL_TOL);
        let finite_degree = if p.is_zero() { 0 } else { p.degree() };
        Ok(CharPoly {
            poly: p,
            finite_degree,
            n: self.n(),
        })
    }
}

/// `det(sE - A)` with degree bookkeeping.
///
/// For a regular pencil the finite degree is `n` minus the algebraic
/// multiplicity of the eigenvalue at infinity.
#[derive(Debug, Clone)]
pub struct CharPoly {
    pub poly: Polynomial,
    /// Numerically supported degree of `poly`.
    pub finite_degree: usize,
    /// Dimension of the underlying pencil.
    pub n: usize,
}

impl CharPoly {
    /// Relative cut below which a leading coefficient of the interpolated
    /// determinant counts as zero.
    pub const DEGREE_REL_TOL: f64 = 1e-9;

    /// Algebraic multiplicity of the eigenvalue at infinity.
    pub fn inf_multiplicity(&self) -> usize {
        self.n - self.finite_degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_pencil() -> Pencil {
        Pencil::from_real(
            &array![[1.0, 0.0], [0.0, 1.0]],
            &array![[1.0, 0.0], [0.0, 2.0]],
        )
        .unwrap()
    }

    #[test]
    fn char_poly_of_diagonal_pencil() {
        // det(sI - diag(1,2)) = (s-1)(s-2) = s^2 - 3s + 2
        let cp = diag_pencil().char_poly().unwrap();
        assert_eq!(cp.finite_degree, 2);
        assert_eq!(cp.inf_multiplicity(), 0);
        let want = [2.0, -3.0, 1.0];
        for (k, w) in want.iter().enumerate() {
            assert!((cp.poly.coeffs[k] - c(*w, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn char_poly_of_nilpotent_e_is_constant() {
        // E = [[0,1],[0,0]], A = I: det(sE - A) = det([[-1,s],[0,-1]]) = 1
        let p = Pencil::from_real(&array![[0.0, 1.0], [0.0, 0.0]], &array![[1.0, 0.0], [0.0, 1.0]])
            .unwrap();
        let cp = p.char_poly().unwrap();
        assert_eq!(cp.finite_degree, 0);
        assert_eq!(cp.inf_multiplicity(), 2);
        assert!((cp.poly.coeffs[0] - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn regularity_flags_the_singular_pencil() {
        let sing = Pencil::from_real(&array![[1.0, 0.0], [0.0, 0.0]], &array![[0.0, 0.0], [0.0, 0.0]])
            .unwrap();
        assert!(!sing.is_regular(1e-10).unwrap());
        assert!(diag_pencil().is_regular(1e-10).unwrap());
    }

    #[test]
    fn dual_pencil_inverts_eigenvalues() {
        // sI - diag(2): eigenvalue 2; dual has det(-sA + E) with root 1/2
        let p = Pencil::from_real(&array![[1.0]], &array![[2.0]]).unwrap();
        let d = p.dualize();
        let cp = d.char_poly().unwrap();
        // -2s + 1 up to sign normalization
        let ratio = cp.poly.coeffs[0] / cp.poly.coeffs[1];
        assert!((ratio - c(-0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn evaluate_matches_hand_computation() {
        let p = diag_pencil();
        let m = p.evaluate(c(3.0, 1.0));
        assert_eq!(m[[0, 0]], c(2.0, 1.0));
        assert_eq!(m[[1, 1]], c(1.0, 1.0));
        assert_eq!(m[[0, 1]], c(0.0, 0.0));
    }

    #[test]
    fn real_detection() {
        assert!(diag_pencil().is_real());
        let mut p = diag_pencil();
        p.a[[0, 0]] = c(1.0, 1e-30);
        assert!(!p.is_real());
    }
}
