//! Single-input descriptor systems `d/dt Ex = Ax + bu` and state-feedback
//! eigenvalue assignment.
//!
//! Feedback `u = f^* x` turns the closed loop into the pencil
//! `sE - (A + bf^*)`, which is precisely the restricted perturbation
//! `P(s) = (s·0 + (-b)) f^*` of `sE - A`. Everything therefore reduces to
//! [`crate::restricted::solve_w`]: the movable budget is `M(A, 0, -b)`, the
//! Hautus condition `rank [λE - A, b] = n` says the budget is maximal, and
//! [`place_feedback`] returns the feedback vector realizing a target
//! multiset of that size.

use crate::pencil::Pencil;
use crate::placement::{PlacementResult, PlacementSpec};
use crate::restricted::{pole_profile, solve_w};
use crate::scalar::{ExtComplex, Tol};
use crate::spectral::eig_structure;
use crate::{lapack, CMat, CVec, Error, Result};
use ndarray::Array1;
use num_complex::Complex64;

/// A single-input descriptor system `d/dt Ex(t) = Ax(t) + b u(t)`.
#[derive(Debug, Clone)]
pub struct DaeSystem {
    pub pencil: Pencil,
    pub b: CVec,
}

impl DaeSystem {
    /// Build a system, insisting that `sE - A` is regular.
    pub fn new(e: CMat, a: CMat, b: CVec, tol: &Tol) -> Result<DaeSystem> {
        let pencil = Pencil::new(e, a)?;
        if b.len() != pencil.n() {
            return Err(Error::Dimension(format!(
                "input vector has length {}, system size is {}",
                b.len(),
                pencil.n()
            )));
        }
        if !pencil.is_regular(tol.regularity)? {
            return Err(Error::NotRegular);
        }
        Ok(DaeSystem { pencil, b })
    }

    pub fn n(&self) -> usize {
        self.pencil.n()
    }

    /// Real coefficients throughout (then a symmetric target multiset yields
    /// a real feedback vector).
    pub fn is_real(&self) -> bool {
        self.pencil.is_real() && self.b.iter().all(|z| z.im == 0.0)
    }
}

/// Rank of the `n × (n+1)` compound `[λE - A, b]`.
fn compound_rank(sys: &DaeSystem, lambda: Complex64, tol: &Tol) -> Result<usize> {
    let n = sys.n();
    let al = sys.pencil.evaluate(lambda);
    let mut m = CMat::zeros((n, n + 1));
    for i in 0..n {
        for j in 0..n {
            m[[i, j]] = al[[i, j]];
        }
        m[[i, n]] = sys.b[i];
    }
    Ok(lapack::rank_svd(&m, tol.rank)?.0)
}

/// Hautus test: `rank [λE - A, b] = n` for every finite `λ`. Away from the
/// spectrum `λE - A` alone has rank `n`, so only the finite eigenvalues need
/// checking. Returns the first failing eigenvalue as witness.
pub fn hautus_controllable(sys: &DaeSystem, tol: &Tol) -> Result<(bool, Option<ExtComplex>)> {
    let sd = eig_structure(&sys.pencil, tol)?;
    for e in sd.finite() {
        let lambda = e.lambda.as_finite().unwrap();
        if compound_rank(sys, lambda, tol)? < sys.n() {
            return Ok((false, Some(e.lambda)));
        }
    }
    Ok((true, None))
}

/// The same predicate through pole orders: controllability at a finite
/// eigenvalue is equivalent to a one-dimensional kernel together with a full
/// pole order `m_{0,-b}(λ) = m_1(λ)`. Kept separate from the rank route so
/// the two can be cross-checked.
pub fn controllable_via_pole_orders(sys: &DaeSystem, tol: &Tol) -> Result<bool> {
    let u: CVec = Array1::zeros(sys.n());
    let v = sys.b.mapv(|z| -z);
    let profile = pole_profile(&sys.pencil, &u, &v, tol)?;
    let ok = profile
        .sd
        .finite()
        .all(|e| e.geo_mult() == 1 && profile.order_of(&e.lambda) == e.m1());
    Ok(ok)
}

/// Place the closed-loop spectrum of `sE - (A + bf^*)`.
///
/// The target multiset must have total size `M(A, 0, -b)`. When `E` is
/// invertible every closed loop keeps `E` invertible, so a target at
/// infinity is rejected up front with [`Error::InfinityForbidden`]. Real
/// systems with conjugate-symmetric targets receive a real `f`.
pub fn place_feedback(
    sys: &DaeSystem,
    spec: &PlacementSpec,
    tol: &Tol,
) -> Result<(CVec, PlacementResult)> {
    if spec.inf_mult() > 0 && lapack::rank_svd(&sys.pencil.e, tol.rank)?.0 == sys.n() {
        return Err(Error::InfinityForbidden(
            "E is invertible; constant feedback cannot move eigenvalues to infinity".into(),
        ));
    }
    let u: CVec = Array1::zeros(sys.n());
    let v = sys.b.mapv(|z| -z);
    let real_mode = sys.is_real() && spec.real_symmetric();
    let result = solve_w(&sys.pencil, &u, &v, spec, real_mode, tol)?;
    let f = match &result.perturbation {
        crate::rank_one::RankOnePencil::LeftVector { w, .. } => w.clone(),
        _ => unreachable!("solve_w always returns the left-vector form"),
    };
    Ok((f, result))
}
