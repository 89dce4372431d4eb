//! Structured rank-one pencils and their factorizations.
//!
//! A pencil `P(s) = sF - G` has rank at most one for every `s` (including
//! infinity, i.e. `rank F <= 1`) exactly when it can be written in one of
//! three shapes:
//!
//! * `(su + v) w^*` — shared right factor ([`RankOnePencil::LeftVector`]),
//! * `w (su^* + v^*)` — shared left factor ([`RankOnePencil::RightVector`]),
//! * `(αs - β) u w^*` — a scalar polynomial times a constant rank-one matrix
//!   ([`RankOnePencil::Degenerate`]).
//!
//! [`decompose`] recovers the structure from `(F, G)` and [`materialize`]
//! reverses it; the round trip reproduces the matrices to machine accuracy.

use crate::error::{Error, Result};
use crate::lapack;
use crate::pencil::Pencil;
use crate::scalar::{ExtComplex, Tol};
use crate::spectral;
use crate::{CMat, CVec};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A pencil of rank one in structured form. `n`-vectors `u`, `v`, `w` follow
/// the conventions in the module docs; the degenerate form carries the affine
/// scalar `αs - β` explicitly.
#[derive(Debug, Clone, PartialEq)]
pub enum RankOnePencil {
    /// `P(s) = (su + v) w^*`, i.e. `F = u w^*`, `G = -v w^*`.
    LeftVector { u: CVec, v: CVec, w: CVec },
    /// `P(s) = w (su^* + v^*)`, i.e. `F = w u^*`, `G = -w v^*`.
    RightVector { w: CVec, u: CVec, v: CVec },
    /// `P(s) = (αs - β) u w^*`, i.e. `F = α u w^*`, `G = β u w^*`.
    Degenerate {
        alpha: Complex64,
        beta: Complex64,
        u: CVec,
        w: CVec,
    },
}

fn is_zero_vec(v: &CVec) -> bool {
    v.iter().all(|z| z.norm() == 0.0)
}

impl RankOnePencil {
    /// `(su + v) w^*` with the structural invariants checked: `w != 0` and
    /// not both `u = v = 0`.
    pub fn left(u: CVec, v: CVec, w: CVec) -> Result<Self> {
        if is_zero_vec(&w) {
            return Err(Error::PreconditionViolated("rank-one factor w is zero".into()));
        }
        if is_zero_vec(&u) && is_zero_vec(&v) {
            return Err(Error::PreconditionViolated("rank-one factors u, v both zero".into()));
        }
        Ok(RankOnePencil::LeftVector { u, v, w })
    }

    /// `w (su^* + v^*)` with the structural invariants checked.
    pub fn right(w: CVec, u: CVec, v: CVec) -> Result<Self> {
        if is_zero_vec(&w) {
            return Err(Error::PreconditionViolated("rank-one factor w is zero".into()));
        }
        if is_zero_vec(&u) && is_zero_vec(&v) {
            return Err(Error::PreconditionViolated("rank-one factors u, v both zero".into()));
        }
        Ok(RankOnePencil::RightVector { w, u, v })
    }

    /// `(αs - β) u w^*`; requires `(α, β) != (0, 0)` and nonzero `w`. A zero
    /// `u` is allowed and encodes the zero perturbation, which placement
    /// produces when the requested spectrum already equals the current one.
    pub fn degenerate(alpha: Complex64, beta: Complex64, u: CVec, w: CVec) -> Result<Self> {
        if alpha == ZERO && beta == ZERO {
            return Err(Error::PreconditionViolated("degenerate scalar αs - β is zero".into()));
        }
        if is_zero_vec(&w) {
            return Err(Error::PreconditionViolated("degenerate factor w is zero".into()));
        }
        Ok(RankOnePencil::Degenerate { alpha, beta, u, w })
    }

    pub fn n(&self) -> usize {
        match self {
            RankOnePencil::LeftVector { w, .. }
            | RankOnePencil::RightVector { w, .. }
            | RankOnePencil::Degenerate { w, .. } => w.len(),
        }
    }

    /// True when every stored vector (and scalar) is exactly real.
    pub fn is_real(&self) -> bool {
        let vec_real = |v: &CVec| v.iter().all(|z| z.im == 0.0);
        match self {
            RankOnePencil::LeftVector { u, v, w } | RankOnePencil::RightVector { w, u, v } => {
                vec_real(u) && vec_real(v) && vec_real(w)
            }
            RankOnePencil::Degenerate { alpha, beta, u, w } => {
                alpha.im == 0.0 && beta.im == 0.0 && vec_real(u) && vec_real(w)
            }
        }
    }

    /// The pencil `P(s) = sF - G` in matrix form.
    pub fn materialize(&self) -> Pencil {
        let (f, g) = self.matrices();
        // Regularity plays no role for the perturbation itself.
        Pencil { e: f, a: g }
    }

    /// The coefficient pair `(F, G)` of `P(s) = sF - G`.
    pub fn matrices(&self) -> (CMat, CMat) {
        match self {
            RankOnePencil::LeftVector { u, v, w } => (outer(u, w), outer(&v.mapv(|z| -z), w)),
            RankOnePencil::RightVector { w, u, v } => (outer(w, u), outer(&w.mapv(|z| -z), v)),
            RankOnePencil::Degenerate { alpha, beta, u, w } => {
                (outer(&u.mapv(|z| z * alpha), w), outer(&u.mapv(|z| z * beta), w))
            }
        }
    }

    /// `P(s0)` as a matrix.
    pub fn evaluate(&self, s0: Complex64) -> CMat {
        let (f, g) = self.matrices();
        &f.mapv(|z| z * s0) - &g
    }

    /// The perturbed pencil `s(E + F) - (A + G)`. Panics on a dimension
    /// mismatch; callers pair perturbations with same-sized pencils.
    pub fn add_to(&self, base: &Pencil) -> Pencil {
        assert_eq!(self.n(), base.n(), "perturbation size must match the pencil");
        let (f, g) = self.matrices();
        Pencil {
            e: &base.e + &f,
            a: &base.a + &g,
        }
    }
}

/// `a b^*`.
pub(crate) fn outer(a: &CVec, b: &CVec) -> CMat {
    let n = a.len();
    let mut m = CMat::zeros((n, b.len()));
    for i in 0..n {
        for j in 0..b.len() {
            m[[i, j]] = a[i] * b[j].conj();
        }
    }
    m
}

/// Dominant singular triplet of `m` split as `m ≈ x y^*` with `y` of unit
/// norm and its first significant entry rotated to the positive real axis
/// (all remaining scale and phase live in `x`). Returns None when `m`
/// vanishes relative to `scale`.
fn dominant_factor(m: &CMat, scale: f64) -> Result<Option<(CVec, CVec)>> {
    let d = lapack::svd(m)?;
    let sigma = d.s.first().copied().unwrap_or(0.0);
    if sigma <= 1e-12 * scale {
        return Ok(None);
    }
    let x0 = d.u.column(0).to_owned();
    let y0: CVec = d.vh.row(0).mapv(|z| z.conj());
    // Phase-fix y.
    let lead = y0
        .iter()
        .copied()
        .find(|z| z.norm() > 1e-8)
        .unwrap_or(ONE);
    let phase = lead / Complex64::new(lead.norm(), 0.0);
    // y := y * conj(phase) has positive real leading entry; x y^* must stay
    // put, so x := x * conj(phase) as well (the inner conjugation cancels).
    let y = y0.mapv(|z| z * phase.conj());
    let x = x0.mapv(|z| z * phase.conj() * sigma);
    Ok(Some((x, y)))
}

/// Zero out imaginary dust on a vector that ought to be real.
fn chop_imag(v: &mut CVec, tol_abs: f64) {
    let ok = v.iter().all(|z| z.im.abs() <= tol_abs);
    if ok {
        v.mapv_inplace(|z| Complex64::new(z.re, 0.0));
    }
}

/// Recover the structured form of a rank-one pencil from its coefficients
/// `(F, G)`, `P(s) = sF - G`.
///
/// Mechanics: factor `G = u0 v0^*` and `F - G = w0 z0^*` through dominant
/// singular triplets, so that `P(s) = s w0 z0^* + (s-1) u0 v0^*`. When `u0`
/// and `w0` are linearly independent (sine of the angle at least `1e-10`),
/// rank-oneness forces `z0 ∥ v0`, say `z0^* = α v0^*`, and
/// `P(s) = (s(u0 + α w0) - u0) v0^*` is a left-vector form. When they are
/// dependent, `u0 = β w0` gives the right-vector form
/// `w0 (s(z0 + β̄ v0)^* - (β̄ v0)^*)`. Vanishing `G`, `F`, or `F - G`
/// produce the degenerate form directly. Real inputs give real factors.
///
/// Fails with [`Error::NotRankOne`] when the pencil has rank two somewhere:
/// the second singular value of `P(s)` is tested at the three sample points
/// `s ∈ {0, 1, 2}` (a 2x2 minor of a linear pencil is a quadratic, so
/// vanishing at three points means vanishing identically).
pub fn decompose(f: &CMat, g: &CMat) -> Result<RankOnePencil> {
    let (nf, mf) = f.dim();
    let (ng, mg) = g.dim();
    if nf != mf || ng != mg || nf != ng {
        return Err(Error::Dimension(format!(
            "decompose wants square matrices of equal size, got {nf}x{mf} and {ng}x{mg}"
        )));
    }
    let scale = 1.0f64.max(lapack::norm_inf(f)).max(lapack::norm_inf(g));
    let real = f.iter().chain(g.iter()).all(|z| z.im == 0.0);

    // Pencil-rank test at s = 0, 1, 2.
    for k in 0..3u32 {
        let s0 = Complex64::new(k as f64, 0.0);
        let p = &f.mapv(|z| z * s0) - g;
        let d = lapack::svd(&p)?;
        if d.s.len() >= 2 && d.s[1] > 1e-10 * scale * (1.0 + k as f64) {
            return Err(Error::NotRankOne(format!(
                "second singular value {:.3e} at s={k}",
                d.s[1]
            )));
        }
    }

    let fg = f - g;
    let g_fact = dominant_factor(g, scale)?;
    let fg_fact = dominant_factor(&fg, scale)?;

    let chop = |mut vv: CVec| {
        if real {
            let n = vv.iter().map(|z| z.norm()).fold(0.0, f64::max);
            chop_imag(&mut vv, 1e-12 * n.max(1.0));
        }
        vv
    };

    let out = match (g_fact, fg_fact) {
        (None, None) => {
            if lapack::norm_inf(f) <= 1e-12 * scale {
                return Err(Error::NotRankOne("both F and G vanish".into()));
            }
            // G = 0, F != 0: P(s) = sF.
            let (x, y) = dominant_factor(f, scale)?.unwrap();
            RankOnePencil::degenerate(ONE, ZERO, chop(x), chop(y))?
        }
        (Some((u0, v0)), None) => {
            if lapack::norm_inf(f) <= 1e-12 * scale {
                // F = 0: P(s) = -G = (0s - 1) u0 v0^*.
                RankOnePencil::degenerate(ZERO, ONE, chop(u0), chop(v0))?
            } else {
                // F = G != 0: P(s) = (s - 1) G.
                RankOnePencil::degenerate(ONE, ONE, chop(u0), chop(v0))?
            }
        }
        (None, Some((w0, z0))) => {
            // G = 0 but F - G != 0 means F != 0, same as the sF case.
            RankOnePencil::degenerate(ONE, ZERO, chop(w0), chop(z0))?
        }
        (Some((u0, v0)), Some((w0, z0))) => {
            let nu = norm2(&u0);
            let nw = norm2(&w0);
            let inner = hdot(&u0, &w0); // u0^* w0
            let sin_angle = {
                let proj = w0.mapv(|z| z * (inner / Complex64::new(nu * nu, 0.0)));
                // component of w0 orthogonal to u0, relative size
                let orth = &w0 - &u0.mapv(|z| z * (hdot(&u0, &w0) / Complex64::new(nu * nu, 0.0)));
                let _ = proj;
                norm2(&orth) / nw
            };
            if sin_angle >= 1e-10 {
                // Independent: z0 must be parallel to v0.
                let alpha = hdot(&z0, &v0) / Complex64::new(norm2(&v0).powi(2), 0.0);
                let resid = &z0 - &v0.mapv(|z| z * alpha.conj());
                if norm2(&resid) > 1e-8 * norm2(&z0).max(1.0) {
                    return Err(Error::NotRankOne(
                        "right factors of G and F-G are not parallel".into(),
                    ));
                }
                let u = &u0 + &w0.mapv(|z| z * alpha);
                let v = u0.mapv(|z| -z);
                RankOnePencil::left(chop(u), chop(v), chop(v0))?
            } else {
                // Dependent: u0 = β w0.
                let beta = hdot(&w0, &u0) / Complex64::new(nw * nw, 0.0);
                let u = &z0 + &v0.mapv(|z| z * beta.conj());
                let v = v0.mapv(|z| -z * beta.conj());
                RankOnePencil::right(chop(w0), chop(u), chop(v))?
            }
        }
    };

    // Round-trip guard: the reconstruction must match the inputs.
    let (rf, rg) = out.matrices();
    let err = lapack::norm_inf(&(&rf - f)).max(lapack::norm_inf(&(&rg - g)));
    if err > 1e-10 * scale {
        return Err(Error::NotRankOne(format!(
            "reconstruction residual {err:.3e} exceeds tolerance"
        )));
    }
    Ok(out)
}

fn norm2(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `a^* b`.
fn hdot(a: &CVec, b: &CVec) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Outcome of the degenerate-perturbation regularity test.
#[derive(Debug, Clone, PartialEq)]
pub enum RegularityCheck {
    /// `β/α` (or infinity when `α = 0`) avoids the spectrum, so `A + P` is
    /// guaranteed regular.
    RegularGuaranteed,
    /// The root of `αs - β` is an eigenvalue of `A`; it remains one for
    /// `A + P`, and regularity of the sum is not guaranteed.
    SharedEigenvalue(ExtComplex),
}

/// For a degenerate perturbation `(αs - β) u w^*`: `A + P` stays regular
/// whenever the scalar root `β/α` (infinity for `α = 0`) is not an eigenvalue
/// of `A`; otherwise that root stays in the spectrum of `A + P` no matter
/// what `u`, `w` are.
pub fn degenerate_regularity_check(a: &Pencil, p1: &RankOnePencil, tol: &Tol) -> Result<RegularityCheck> {
    let (alpha, beta) = match p1 {
        RankOnePencil::Degenerate { alpha, beta, .. } => (*alpha, *beta),
        _ => return Err(Error::NotDegenerate),
    };
    let root = if alpha == ZERO {
        ExtComplex::Infinity
    } else {
        ExtComplex::Finite(beta / alpha)
    };
    let sd = spectral::eig_structure(a, tol)?;
    let hit = sd
        .spectrum()
        .iter()
        .any(|l| l.matches(&root, tol.cluster.max(1e-7)));
    Ok(if hit {
        RegularityCheck::SharedEigenvalue(root)
    } else {
        RegularityCheck::RegularGuaranteed
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array1};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rvec(xs: &[f64]) -> CVec {
        Array1::from(xs.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn materialize_left_vector_example() {
        // (s e1 + (1,1)) (1,1)^* = [[s+1, s+1], [1, 1]]
        let p1 = RankOnePencil::left(rvec(&[1.0, 0.0]), rvec(&[1.0, 1.0]), rvec(&[1.0, 1.0]))
            .unwrap();
        let m = p1.evaluate(c(3.0, 0.0));
        let want = array![[c(4.0, 0.0), c(4.0, 0.0)], [c(1.0, 0.0), c(1.0, 0.0)]];
        assert!(lapack::norm_inf(&(&m - &want)) < 1e-14);
    }

    #[test]
    fn materialize_constant_left_vector() {
        let p1 = RankOnePencil::left(rvec(&[0.0]), rvec(&[1.0]), rvec(&[1.0])).unwrap();
        let (f, g) = p1.matrices();
        assert!(lapack::norm_inf(&f) == 0.0);
        assert!((g[[0, 0]] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn materialize_degenerate() {
        let p1 = RankOnePencil::degenerate(ONE, ZERO, rvec(&[1.0, 0.0]), rvec(&[0.0, 1.0]))
            .unwrap();
        let (f, g) = p1.matrices();
        assert!((f[[0, 1]] - ONE).norm() < 1e-15);
        assert!(lapack::norm_inf(&g) == 0.0);
    }

    #[test]
    fn invariants_rejected() {
        assert!(RankOnePencil::left(rvec(&[0.0]), rvec(&[0.0]), rvec(&[1.0])).is_err());
        assert!(RankOnePencil::left(rvec(&[1.0]), rvec(&[0.0]), rvec(&[0.0])).is_err());
        assert!(RankOnePencil::degenerate(ZERO, ZERO, rvec(&[1.0]), rvec(&[1.0])).is_err());
    }

    /// P1(s) = [[s+1, s+1], [1, 1]] must come back as a left-vector form
    /// equivalent to u=(1,0), v=(1,1), w=(1,1).
    #[test]
    fn decompose_shared_right_factor() {
        let f = array![[ONE, ONE], [ZERO, ZERO]];
        let g = array![[c(-1.0, 0.0), c(-1.0, 0.0)], [c(-1.0, 0.0), c(-1.0, 0.0)]];
        let out = decompose(&f, &g).unwrap();
        match &out {
            RankOnePencil::LeftVector { u, v, w } => {
                assert!(out.is_real());
                // w ∥ (1,1), u ∥ (1,0), v ∥ (1,1)
                assert!((u[0] * ZERO).norm() < 1e-12 && u[1].norm() < 1e-10 * u[0].norm());
                assert!((v[0] - v[1]).norm() < 1e-10 * v[0].norm());
                assert!((w[0] - w[1]).norm() < 1e-10 * w[0].norm());
            }
            other => panic!("expected LeftVector, got {other:?}"),
        }
        let (rf, rg) = out.matrices();
        assert!(lapack::norm_inf(&(&rf - &f)) < 1e-12);
        assert!(lapack::norm_inf(&(&rg - &g)) < 1e-12);
    }

    /// P2(s) = [[s+1, 1], [s+1, 1]] is the transposed situation: a shared
    /// left factor.
    #[test]
    fn decompose_shared_left_factor() {
        let f = array![[ONE, ZERO], [ONE, ZERO]];
        let g = array![[c(-1.0, 0.0), c(-1.0, 0.0)], [c(-1.0, 0.0), c(-1.0, 0.0)]];
        let out = decompose(&f, &g).unwrap();
        match &out {
            RankOnePencil::RightVector { w, u, v } => {
                assert!(out.is_real());
                assert!((w[0] - w[1]).norm() < 1e-10 * w[0].norm());
                assert!(u[1].norm() < 1e-10 * u[0].norm());
                assert!((v[0] - v[1]).norm() < 1e-10 * v[0].norm());
            }
            other => panic!("expected RightVector, got {other:?}"),
        }
        let (rf, rg) = out.matrices();
        assert!(lapack::norm_inf(&(&rf - &f)) < 1e-12);
        assert!(lapack::norm_inf(&(&rg - &g)) < 1e-12);
    }

    #[test]
    fn decompose_equal_coefficients_is_degenerate() {
        // F = G = e1 e1^*: P(s) = (s-1) e1 e1^*.
        let f = array![[ONE, ZERO], [ZERO, ZERO]];
        let out = decompose(&f, &f).unwrap();
        match &out {
            RankOnePencil::Degenerate { alpha, beta, .. } => {
                assert!((alpha - beta).norm() < 1e-12);
                assert!(alpha.norm() > 0.5);
            }
            other => panic!("expected Degenerate, got {other:?}"),
        }
        let (rf, rg) = out.matrices();
        assert!(lapack::norm_inf(&(&rf - &f)) < 1e-12);
        assert!(lapack::norm_inf(&(&rg - &f)) < 1e-12);
    }

    #[test]
    fn decompose_pure_s_coefficient() {
        let f = array![[ZERO, c(2.0, 0.0)], [ZERO, ZERO]];
        let g = CMat::zeros((2, 2));
        let out = decompose(&f, &g).unwrap();
        assert!(matches!(out, RankOnePencil::Degenerate { .. }));
        let (rf, rg) = out.matrices();
        assert!(lapack::norm_inf(&(&rf - &f)) < 1e-12);
        assert!(lapack::norm_inf(&rg) < 1e-12);
    }

    #[test]
    fn decompose_rejects_rank_two() {
        let f = array![[ONE, ZERO], [ZERO, ONE]];
        let g = CMat::zeros((2, 2));
        assert!(matches!(decompose(&f, &g), Err(Error::NotRankOne(_))));
        // F, G rank one separately but the pencil has rank two at s=1:
        let f2 = array![[ONE, ZERO], [ZERO, ZERO]];
        let g2 = array![[ZERO, ZERO], [ZERO, ONE]];
        assert!(matches!(decompose(&f2, &g2), Err(Error::NotRankOne(_))));
        assert!(matches!(
            decompose(&CMat::zeros((2, 2)), &CMat::zeros((2, 2))),
            Err(Error::NotRankOne(_))
        ));
    }

    #[test]
    fn decompose_complex_round_trip() {
        let u = Array1::from(vec![c(1.0, 2.0), c(-0.5, 0.25)]);
        let v = Array1::from(vec![c(0.0, 1.0), c(3.0, 0.0)]);
        let w = Array1::from(vec![c(2.0, -1.0), c(1.0, 1.0)]);
        let p1 = RankOnePencil::left(u, v, w).unwrap();
        let (f, g) = p1.matrices();
        let back = decompose(&f, &g).unwrap();
        let (rf, rg) = back.matrices();
        let scale = lapack::norm_inf(&f).max(lapack::norm_inf(&g));
        assert!(lapack::norm_inf(&(&rf - &f)) < 1e-12 * scale);
        assert!(lapack::norm_inf(&(&rg - &g)) < 1e-12 * scale);
    }

    #[test]
    fn regularity_check_examples() {
        let a = Pencil::from_real(
            &array![[1.0, 0.0], [0.0, 1.0]],
            &array![[1.0, 0.0], [0.0, 2.0]],
        )
        .unwrap();
        let tol = Tol::default();
        let mk = |alpha: Complex64, beta: Complex64| {
            RankOnePencil::degenerate(alpha, beta, rvec(&[1.0, 0.0]), rvec(&[0.0, 1.0])).unwrap()
        };
        assert_eq!(
            degenerate_regularity_check(&a, &mk(ONE, c(5.0, 0.0)), &tol).unwrap(),
            RegularityCheck::RegularGuaranteed
        );
        assert_eq!(
            degenerate_regularity_check(&a, &mk(ONE, ONE), &tol).unwrap(),
            RegularityCheck::SharedEigenvalue(ExtComplex::real(1.0))
        );
        // σ = {∞}: E = J2(0), A = I.
        let a_inf =
            Pencil::from_real(&array![[0.0, 1.0], [0.0, 0.0]], &array![[1.0, 0.0], [0.0, 1.0]])
                .unwrap();
        assert_eq!(
            degenerate_regularity_check(&a_inf, &mk(ZERO, ONE), &tol).unwrap(),
            RegularityCheck::SharedEigenvalue(ExtComplex::Infinity)
        );
        // Non-degenerate input is refused.
        let left = RankOnePencil::left(rvec(&[1.0, 0.0]), rvec(&[0.0, 0.0]), rvec(&[1.0, 0.0]))
            .unwrap();
        assert!(matches!(
            degenerate_regularity_check(&a, &left, &tol),
            Err(Error::NotDegenerate)
        ));
    }
}
