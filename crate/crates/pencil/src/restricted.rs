//! Placement with a prescribed perturbation direction.
//!
//! Here the rank-one update is constrained to `P(s) = (su + v) w^*` with `u`
//! and `v` given; only `w` is free. What can move is then governed by the
//! pole orders `m_{u,v}(λ)` of the vector function `s ↦ (sE - A)^{-1}(su+v)`:
//! an eigenvalue contributes at most its pole order to the movable budget
//! `M(A, u, v) = Σ m_{u,v}(λ)`, and everything beyond that budget is pinned.
//!
//! [`pole_profile`] measures the orders (infinity through the dual pencil at
//! zero), [`spectrum_floor`] lists the unremovable eigenvalues,
//! [`check_restricted_bounds`] validates the dimension inequalities for an
//! arbitrary `w`, and [`solve_w`] solves for `w` achieving a target multiset
//! of size `M(A, u, v)`. [`place_matrix`] specializes everything to
//! `E = I`, `u = 0` — classical single-input pole placement on a matrix.

use crate::bounds::{root_dim_bounds_with_budget, BoundsReport, MatchedSpectra};
use crate::pencil::Pencil;
use crate::placement::{
    det_identity_residual, dotc, expected_spectrum, theta_nodes, PlacementResult,
    PlacementSpec, MATCH_TOL,
};
use crate::poly::{self, Polynomial};
use crate::rank_one::{outer, RankOnePencil};
use crate::scalar::{ExtComplex, Tol};
use crate::spectral::{certify_spectrum, eig_structure, weierstrass, SpectralData};
use crate::{lapack, CMat, CVec, Error, Result};
use ndarray::Array1;
use num_complex::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn is_zero_vec(x: &CVec) -> bool {
    x.iter().all(|z| z.norm() == 0.0)
}

fn is_real_vec(x: &CVec) -> bool {
    x.iter().all(|z| z.im == 0.0)
}

/// Pole orders of `s ↦ (sE - A)^{-1}(su + v)` across the spectrum.
#[derive(Debug, Clone)]
pub struct PoleProfile {
    /// `(λ, m_{u,v}(λ))`, aligned with the eigenvalue list of `sd`.
    pub orders: Vec<(ExtComplex, usize)>,
    /// The restricted capacity `M(A, u, v) = Σ m_{u,v}(λ)`.
    pub total: usize,
    /// `∏_{finite λ} (s - λ)^{m_{u,v}(λ)}` — the denominator actually
    /// needed by the restricted resolvent.
    pub m_tilde: Polynomial,
    /// Spectral analysis of the underlying pencil.
    pub sd: SpectralData,
}

impl PoleProfile {
    pub fn order_of(&self, lambda: &ExtComplex) -> usize {
        self.orders
            .iter()
            .find(|(l, _)| l.matches(lambda, MATCH_TOL))
            .map_or(0, |(_, m)| *m)
    }
}

/// Interpolate the polynomial vector `den(s) · (sE - A)^{-1} (s·x + y)`
/// from `deg + 1` ring samples.
fn resolvent_polynomial(
    p: &Pencil,
    den: &Polynomial,
    x: &CVec,
    y: &CVec,
    deg: usize,
    rho: f64,
) -> Result<Vec<Polynomial>> {
    let nodes = theta_nodes(deg + 1, rho, false, 0.5);
    let n = p.n();
    let mut per_entry: Vec<Vec<Complex64>> = vec![Vec::with_capacity(nodes.len()); n];
    for &t in &nodes {
        let dir: CVec = Array1::from_shape_fn(n, |i| t * x[i] + y[i]);
        let sol = lapack::solve(&p.evaluate(t), &dir)?;
        let scale = den.eval(t);
        for i in 0..n {
            per_entry[i].push(scale * sol[i]);
        }
    }
    per_entry
        .into_iter()
        .map(|vals| poly::interpolate(&nodes, &vals))
        .collect()
}

/// Minimum vanishing order at `lambda` over the entries of a polynomial
/// vector, judged against a single global coefficient scale so that noise
/// entries cannot fake low orders.
fn min_vanishing_order(entries: &[Polynomial], lambda: Complex64) -> usize {
    let global = entries.iter().map(|h| h.norm_inf()).fold(0.0, f64::max);
    if global == 0.0 {
        return usize::MAX;
    }
    let thresh = 1e-8 * global;
    let mut min_ord = usize::MAX;
    for h in entries {
        let norm = h.norm_inf();
        if norm <= thresh {
            continue; // numerically the zero entry: infinite order
        }
        let ord = h.vanishing_order(lambda, thresh / norm.max(1.0));
        min_ord = min_ord.min(ord);
    }
    min_ord
}

/// Measure the pole order of `(sE - A)^{-1}(su + v)` at every eigenvalue:
/// finite orders from the vanishing orders of the polynomial vector
/// `m_A(s)(sE - A)^{-1}(su + v)`, the order at infinity from the dual
/// pencil `-sA + E` at zero with the roles of `u` and `v` swapped.
pub fn pole_profile(a: &Pencil, u: &CVec, v: &CVec, tol: &Tol) -> Result<PoleProfile> {
    let n = a.n();
    if u.len() != n || v.len() != n {
        return Err(Error::Dimension(format!(
            "direction vectors have lengths {} and {}, pencil size is {n}",
            u.len(),
            v.len()
        )));
    }
    let sd = eig_structure(a, tol)?;
    let cap = sd.capacity;
    let rho = 2.0 * (1.0 + sd.max_finite_abs());
    let h = resolvent_polynomial(a, &sd.min_poly, u, v, cap, rho)?;

    let mut orders: Vec<(ExtComplex, usize)> = Vec::with_capacity(sd.eigs.len());
    for e in &sd.eigs {
        match e.lambda {
            ExtComplex::Finite(lam) => {
                let ord = min_vanishing_order(&h, lam);
                let m = e.m1() - ord.min(e.m1());
                orders.push((e.lambda, m));
            }
            ExtComplex::Infinity => {
                // Dual pencil: eigenvalue λ ≠ 0 maps to 1/λ, infinity to 0;
                // chain lengths carry over, so the dual's minimal polynomial
                // is available without re-analyzing.
                let dual = a.dualize();
                let mut dual_roots: Vec<(Complex64, usize)> = sd
                    .finite()
                    .filter(|f| f.lambda.as_finite().map_or(false, |z| z.norm() > 0.0))
                    .map(|f| (ONE / f.lambda.as_finite().unwrap(), f.m1()))
                    .collect();
                dual_roots.push((Complex64::new(0.0, 0.0), e.m1()));
                let m_dual = poly::poly_from_roots(&dual_roots);
                let rho_dual = 2.0
                    * (1.0
                        + dual_roots
                            .iter()
                            .map(|(z, _)| z.norm())
                            .fold(0.0, f64::max));
                let h_dual = resolvent_polynomial(&dual, &m_dual, v, u, cap, rho_dual)?;
                let ord = min_vanishing_order(&h_dual, Complex64::new(0.0, 0.0));
                let m = e.m1() - ord.min(e.m1());
                orders.push((e.lambda, m));
            }
        }
    }

    // For real data the orders are conjugation-symmetric; enforce this
    // exactly by mirroring the representative with positive imaginary part.
    if a.is_real() && is_real_vec(u) && is_real_vec(v) {
        let snapshot = orders.clone();
        for (lam, m) in orders.iter_mut() {
            if let ExtComplex::Finite(z) = lam {
                if z.im < 0.0 {
                    let partner = ExtComplex::Finite(z.conj());
                    if let Some((_, pm)) =
                        snapshot.iter().find(|(l, _)| l.matches(&partner, 1e-9))
                    {
                        *m = *pm;
                    }
                }
            }
        }
    }

    let finite_orders: Vec<(Complex64, usize)> = orders
        .iter()
        .filter_map(|(l, m)| l.as_finite().map(|z| (z, *m)))
        .filter(|(_, m)| *m > 0)
        .collect();
    let m_tilde = poly::poly_from_roots(&finite_orders);
    let total = orders.iter().map(|(_, m)| m).sum();
    Ok(PoleProfile {
        orders,
        total,
        m_tilde,
        sd,
    })
}

/// Eigenvalues that survive `A + (su + v)w^*` for every choice of `w`:
/// those with at least two chains, and those whose pole order falls short
/// of the longest chain.
pub fn spectrum_floor(a: &Pencil, u: &CVec, v: &CVec, tol: &Tol) -> Result<Vec<ExtComplex>> {
    let profile = pole_profile(a, u, v, tol)?;
    Ok(profile
        .sd
        .eigs
        .iter()
        .zip(&profile.orders)
        .filter(|(e, (_, m))| e.geo_mult() >= 2 || *m < e.m1())
        .map(|(e, _)| e.lambda)
        .collect())
}

/// Validate the restricted dimension inequalities for a concrete `w` (which
/// may be zero): per surviving eigenvalue the root dimension moves at most
/// by the pole order downward and at most capacity-minus-order upward; new
/// eigenvalues and the global sums are capped by `M(A, u, v)`.
pub fn check_restricted_bounds(
    a: &Pencil,
    u: &CVec,
    v: &CVec,
    w: &CVec,
    tol: &Tol,
) -> Result<BoundsReport> {
    let profile = pole_profile(a, u, v, tol)?;
    let sum = Pencil::new(&a.e + &outer(u, w), &a.a - &outer(v, w))?;
    if !sum.is_regular(tol.regularity)? {
        return Err(Error::NotRegular);
    }
    let ms = MatchedSpectra::build_from_sum(a, sum, tol)?;
    let budgets: Vec<usize> = ms
        .sd_a
        .eigs
        .iter()
        .map(|e| profile.order_of(&e.lambda))
        .collect();
    Ok(root_dim_bounds_with_budget(
        &ms,
        a.n(),
        &|i| budgets[i],
        profile.total,
    ))
}

/// Solve for `w` such that `A + (su + v) w^*` carries the target multiset.
///
/// The free parameter enters linearly: `w ↦ w^* m̃(s)(sE - A)^{-1}(su + v)`
/// maps into polynomials of degree at most `M(A, u, v)`, and the right-hand
/// side is `q̃_γ - m̃` with `q̃_γ = γ ∏ (s - μ_i)^{m_i}` over the finite
/// targets. The scaling γ differs from one only when `su + v` vanishes at a
/// point `μ ∉ σ(A)` — then every reachable polynomial vanishes at `μ` too,
/// `μ` is excluded from the targets (hypothesis), and γ matches the
/// right-hand side to that constraint. A single sampling code path covers
/// all cases; solvability is decided by the fit residual.
pub fn solve_w(
    a: &Pencil,
    u: &CVec,
    v: &CVec,
    spec: &PlacementSpec,
    real_mode: bool,
    tol: &Tol,
) -> Result<PlacementResult> {
    let n = a.n();
    if u.len() != n || v.len() != n {
        return Err(Error::Dimension(format!(
            "direction vectors have lengths {} and {}, pencil size is {n}",
            u.len(),
            v.len()
        )));
    }
    let u_zero = is_zero_vec(u);
    let v_zero = is_zero_vec(v);
    if u_zero && v_zero {
        return Err(Error::PreconditionViolated(
            "the direction su + v is identically zero; no w can move anything".into(),
        ));
    }
    if real_mode && !(a.is_real() && is_real_vec(u) && is_real_vec(v) && spec.real_symmetric()) {
        return Err(Error::PreconditionViolated(
            "real mode requires real pencil, real directions and symmetric targets".into(),
        ));
    }

    let profile = pole_profile(a, u, v, tol)?;
    let sd = &profile.sd;
    if spec.total() != profile.total {
        return Err(Error::BudgetMismatch {
            got: spec.total(),
            want: profile.total,
        });
    }

    let finite: Vec<(Complex64, usize)> = spec.finite_targets().collect();
    let mut gamma = ONE;
    if u_zero {
        // A constant perturbation leaves E untouched: with E invertible no
        // eigenvalue can reach infinity.
        if sd.infinity().is_none() && spec.inf_mult() > 0 {
            return Err(Error::HypothesisViolated(
                "u = 0 keeps E invertible, so infinity cannot be among the targets".into(),
            ));
        }
    } else {
        // Dependence test: v = -μu makes su + v = (s - μ)u.
        let mu = -(dotc(u, v) / dotc(u, u));
        let residual: f64 = u
            .iter()
            .zip(v.iter())
            .map(|(x, y)| (y + mu * x).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let scale = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
            + v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if residual <= 1e-10 * scale {
            let mux = ExtComplex::Finite(mu);
            if sd.find(&mux, MATCH_TOL).is_none() {
                // Every reachable polynomial vanishes at μ, so μ itself is
                // out of reach as a target.
                if spec.contains(&mux, MATCH_TOL) {
                    return Err(Error::HypothesisViolated(format!(
                        "the direction su + v vanishes at s = {mu} outside the spectrum; \
                         {mu} cannot be placed"
                    )));
                }
                let mut den = ONE;
                for &(muz, mi) in &finite {
                    den *= (mu - muz).powi(mi as i32);
                }
                gamma = profile.m_tilde.eval(mu) / den;
            }
        }
    }

    let q_gamma = poly::poly_from_roots(&finite).scale(gamma);
    let rhs_poly = q_gamma.sub(&profile.m_tilde);
    let rhs_poly = if real_mode {
        if !rhs_poly.is_real_within(1e-9) {
            return Err(Error::StructureInconsistent(
                "symmetric targets produced a non-real interpolation problem".into(),
            ));
        }
        rhs_poly.take_real().0
    } else {
        rhs_poly
    };

    // One code path for all cases: fit w against M(A,u,v) + 1 samples of
    // H(s) = m̃(s)(sE - A)^{-1}(su + v).
    let count = profile.total + 1;
    let rho = 2.0 * (1.0 + sd.max_finite_abs());
    let nodes = theta_nodes(count, rho, real_mode, 0.5);
    let h_at = |t: Complex64| -> Result<CVec> {
        let dir: CVec = Array1::from_shape_fn(n, |i| t * u[i] + v[i]);
        let sol = lapack::solve(&a.evaluate(t), &dir)?;
        let scale = profile.m_tilde.eval(t);
        Ok(sol.mapv(|z| z * scale))
    };
    let mut mmat = CMat::zeros((count, n));
    let mut rhs: CVec = Array1::zeros(count);
    for (j, &t) in nodes.iter().enumerate() {
        let hv = h_at(t)?;
        for i in 0..n {
            mmat[[j, i]] = hv[i];
        }
        rhs[j] = rhs_poly.eval(t);
    }
    let (x, rank) = lapack::lstsq(&mmat, &rhs, tol.rank)?;
    let w = x.mapv(|z| z.conj());

    // Consistency check at fresh nodes: w^* H is a polynomial of degree at
    // most M(A,u,v), so interpolating it there pins it down completely.
    let check_nodes = theta_nodes(count, rho, real_mode, 0.17);
    let mut vals = Vec::with_capacity(count);
    for &t in &check_nodes {
        vals.push(dotc(&w, &h_at(t)?));
    }
    let fit = poly::interpolate(&check_nodes, &vals)?;
    let err = fit.sub(&rhs_poly).norm_inf();
    if err > 1e-8 * rhs_poly.norm_inf().max(1.0) {
        // The target polynomial is outside the reachable space at working
        // tolerance (or the sampling degenerated): surface it loudly.
        return Err(Error::NumericallySingular { rank, want: count });
    }

    // The zero perturbation arises exactly when the targets reproduce the
    // restricted spectrum; it is not a structured rank-one pencil, so the
    // variant is built directly rather than through the checked constructor.
    let perturbation = if is_zero_vec(&w) {
        RankOnePencil::LeftVector {
            u: u.clone(),
            v: v.clone(),
            w,
        }
    } else {
        RankOnePencil::left(u.clone(), v.clone(), w)?
    };
    let sum = perturbation.add_to(a);

    let radius = 1.0 + sd.max_finite_abs().max(spec.max_finite_abs());
    let det_residual = det_identity_residual(a, &sum, &profile.m_tilde, &q_gamma, tol, radius)?;
    let expected = expected_spectrum(sd, spec, &|e| profile.order_of(&e.lambda), MATCH_TOL);
    let (achieved, problems) = certify_spectrum(&sum, &expected, tol)?;
    let spectrum_check: std::result::Result<(), String> = if problems.is_empty() {
        Ok(())
    } else {
        Err(problems.join("; "))
    };
    let verified = det_residual <= 1e-7 && spectrum_check.is_ok();
    let result = PlacementResult {
        perturbation,
        alpha: None,
        beta: None,
        gamma,
        q_gamma,
        achieved,
        verified,
        det_residual,
    };
    if !verified {
        let detail = match spectrum_check {
            Err(e) => format!("achieved spectrum deviates: {e}"),
            Ok(()) => format!("determinant identity residual {det_residual:.3e} exceeds 1e-7"),
        };
        return Err(Error::VerificationFailed {
            detail,
            result: Box::new(result),
        });
    }
    Ok(result)
}

/// A direction `v` with full pole orders `m_{0,v}(λ) = m_1(λ)` at every
/// eigenvalue of `A0`: in transformed coordinates, pick the last column of
/// the longest chain block of every eigenvalue group.
pub fn auto_v(a0: &CMat, tol: &Tol) -> Result<CVec> {
    let p = Pencil::from_matrix(a0.clone())?;
    let real = p.is_real();
    let wf = weierstrass(&p, real, tol)?;
    let mut v: CVec = Array1::zeros(p.n());
    for g in &wf.finite_groups {
        let width = if g.pair { 2 * g.lengths[0] } else { g.lengths[0] };
        let col = wf.t_mat.column(g.offset + width - 1);
        v = &v + &col.to_owned();
    }
    Ok(v)
}

/// Single-input pole placement on a matrix: wraps [`solve_w`] with `E = I`
/// and `u = 0`, so `P(s) = v w^*` and the perturbed pencil is
/// `sI - (A0 - v w^*)`. With `v = None` a direction with the maximal budget
/// `M(A0, 0, v) = deg m_A` is selected automatically via [`auto_v`].
pub fn place_matrix(
    a0: &CMat,
    v: Option<&CVec>,
    spec: &PlacementSpec,
    tol: &Tol,
) -> Result<PlacementResult> {
    let p = Pencil::from_matrix(a0.clone())?;
    let vv = match v {
        Some(x) => x.clone(),
        None => auto_v(a0, tol)?,
    };
    let u: CVec = Array1::zeros(p.n());
    let real_mode = p.is_real() && is_real_vec(&vv) && spec.real_symmetric();
    solve_w(&p, &u, &vv, spec, real_mode, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tol() -> Tol {
        Tol::default()
    }

    fn unit(n: usize, i: usize) -> CVec {
        let mut v: CVec = Array1::zeros(n);
        v[i] = ONE;
        v
    }

    fn j2_pencil() -> Pencil {
        Pencil::from_real(&array![[1.0, 0.0], [0.0, 1.0]], &array![[0.0, 1.0], [0.0, 0.0]])
            .unwrap()
    }

    #[test]
    fn pole_profile_matches_hand_resolvent() {
        // (sI - J2(0))^{-1} e2 = (1/s^2, 1/s): order two.
        let a = j2_pencil();
        let zero: CVec = Array1::zeros(2);
        let p2 = pole_profile(&a, &zero, &unit(2, 1), &tol()).unwrap();
        assert_eq!(p2.order_of(&ExtComplex::real(0.0)), 2);
        assert_eq!(p2.total, 2);

        // (sI - J2(0))^{-1} e1 = (1/s, 0): order one.
        let p1 = pole_profile(&a, &zero, &unit(2, 0), &tol()).unwrap();
        assert_eq!(p1.order_of(&ExtComplex::real(0.0)), 1);
        assert_eq!(p1.total, 1);

        // Zero direction: every order vanishes.
        let p0 = pole_profile(&a, &zero, &zero, &tol()).unwrap();
        assert_eq!(p0.total, 0);
        assert_eq!(p0.m_tilde.degree(), 0);
    }

    #[test]
    fn pole_at_infinity_via_dual() {
        // (E, A) = (J2(0), I2): spectrum {∞} with chain length 2. Only the
        // `su` part of the direction couples to the infinite chain: u = e2
        // reaches order 2, a constant direction v = e2 order 1, and v = e1
        // none at all.
        let a = Pencil::from_real(&array![[0.0, 1.0], [0.0, 0.0]], &array![[1.0, 0.0], [0.0, 1.0]])
            .unwrap();
        let zero: CVec = Array1::zeros(2);
        let full = pole_profile(&a, &unit(2, 1), &zero, &tol()).unwrap();
        assert_eq!(full.order_of(&ExtComplex::Infinity), 2);
        let partial = pole_profile(&a, &zero, &unit(2, 1), &tol()).unwrap();
        assert_eq!(partial.order_of(&ExtComplex::Infinity), 1);
        let none = pole_profile(&a, &zero, &unit(2, 0), &tol()).unwrap();
        assert_eq!(none.order_of(&ExtComplex::Infinity), 0);
        assert_eq!(none.total, 0);
    }

    #[test]
    fn floor_reflects_partial_reach() {
        let a = j2_pencil();
        let zero: CVec = Array1::zeros(2);
        assert!(spectrum_floor(&a, &zero, &unit(2, 1), &tol()).unwrap().is_empty());
        assert_eq!(
            spectrum_floor(&a, &zero, &unit(2, 0), &tol()).unwrap(),
            vec![ExtComplex::real(0.0)]
        );
    }

    #[test]
    fn solve_w_moves_full_budget() {
        let a = j2_pencil();
        let zero: CVec = Array1::zeros(2);
        let spec = PlacementSpec::new(vec![
            (ExtComplex::real(1.0), 1),
            (ExtComplex::real(-1.0), 1),
        ])
        .unwrap();
        let result = solve_w(&a, &zero, &unit(2, 1), &spec, false, &tol()).unwrap();
        assert!(result.verified);
        assert!(result.achieved.find(&ExtComplex::real(1.0), 1e-6).is_some());
        assert!(result.achieved.find(&ExtComplex::real(-1.0), 1e-6).is_some());
        assert!(result.alpha.is_none());
    }

    #[test]
    fn solve_w_partial_budget_keeps_floor() {
        let a = j2_pencil();
        let zero: CVec = Array1::zeros(2);
        let spec = PlacementSpec::new(vec![(ExtComplex::real(5.0), 1)]).unwrap();
        let result = solve_w(&a, &zero, &unit(2, 0), &spec, false, &tol()).unwrap();
        assert!(result.verified);
        assert_eq!(result.achieved.dim_of(&ExtComplex::real(0.0), 1e-6), 1);
        assert_eq!(result.achieved.dim_of(&ExtComplex::real(5.0), 1e-6), 1);
    }

    #[test]
    fn dependent_direction_hypothesis() {
        // u = e1, v = -3 e1: su + v = (s - 3) e1 vanishes at 3 ∉ σ(A).
        let a = j2_pencil();
        let u = unit(2, 0);
        let v = u.mapv(|z| z * c(-3.0));
        let bad = PlacementSpec::new(vec![(ExtComplex::real(3.0), 1)]).unwrap();
        assert!(matches!(
            solve_w(&a, &u, &v, &bad, false, &tol()),
            Err(Error::HypothesisViolated(_))
        ));

        // A permitted target goes through, with γ adjusted.
        let good = PlacementSpec::new(vec![(ExtComplex::real(7.0), 1)]).unwrap();
        let result = solve_w(&a, &u, &v, &good, false, &tol()).unwrap();
        assert!(result.verified);
        assert!((result.gamma - c(3.0) / c(-4.0)).norm() < 1e-9);
        assert_eq!(result.achieved.dim_of(&ExtComplex::real(7.0), 1e-6), 1);
        assert_eq!(result.achieved.dim_of(&ExtComplex::real(0.0), 1e-6), 1);
    }

    #[test]
    fn constant_perturbation_cannot_reach_infinity() {
        let a = Pencil::from_real(&array![[1.0, 0.0], [0.0, 1.0]], &array![[1.0, 0.0], [0.0, 2.0]])
            .unwrap();
        let zero: CVec = Array1::zeros(2);
        let spec = PlacementSpec::new(vec![(ExtComplex::Infinity, 1)]).unwrap();
        assert!(matches!(
            solve_w(&a, &zero, &unit(2, 0), &spec, false, &tol()),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn restricted_bounds_with_zero_w_show_full_slack() {
        let a = j2_pencil();
        let zero: CVec = Array1::zeros(2);
        let report =
            check_restricted_bounds(&a, &zero, &unit(2, 0), &Array1::zeros(2), &tol()).unwrap();
        assert!(report.overall_pass);
        let lower = report
            .records
            .iter()
            .find(|r| r.what.contains("loses"))
            .unwrap();
        // Nothing moved, so the lower bound has slack equal to the order.
        assert_eq!(lower.before, lower.after);
        assert_eq!(lower.slack, 1);
    }

    #[test]
    fn place_matrix_explicit_direction() {
        let a0 = array![
            [c(0.0), c(1.0)],
            [c(0.0), c(0.0)]
        ];
        let spec = PlacementSpec::new(vec![
            (ExtComplex::real(1.0), 1),
            (ExtComplex::real(-1.0), 1),
        ])
        .unwrap();
        let result = place_matrix(&a0, Some(&unit(2, 1)), &spec, &tol()).unwrap();
        assert!(result.verified);
        // The perturbed matrix is A0 + G from P(s) = sF - G.
        let (_, g) = result.perturbation.matrices();
        let perturbed = &a0 + &g;
        let mut eigs = lapack::eigvals(&perturbed).unwrap();
        eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((eigs[0] - c(-1.0)).norm() < 1e-7);
        assert!((eigs[1] - c(1.0)).norm() < 1e-7);
    }

    #[test]
    fn place_matrix_auto_direction_relocates_everything() {
        // Mixed structure: J2(0) ⊕ J1(3). auto_v must reach budget 3.
        let a0 = array![
            [c(0.0), c(1.0), c(0.0)],
            [c(0.0), c(0.0), c(0.0)],
            [c(0.0), c(0.0), c(3.0)]
        ];
        let spec = PlacementSpec::new(vec![
            (ExtComplex::real(1.0), 1),
            (ExtComplex::real(2.0), 1),
            (ExtComplex::real(-2.0), 1),
        ])
        .unwrap();
        let result = place_matrix(&a0, None, &spec, &tol()).unwrap();
        assert!(result.verified);
        for re in [1.0, 2.0, -2.0] {
            assert_eq!(result.achieved.dim_of(&ExtComplex::real(re), 1e-6), 1);
        }
    }

    #[test]
    fn real_mode_produces_real_w() {
        let a = j2_pencil();
        let zero: CVec = Array1::zeros(2);
        let spec = PlacementSpec::new(vec![
            (ExtComplex::finite(1.0, 2.0), 1),
            (ExtComplex::finite(1.0, -2.0), 1),
        ])
        .unwrap();
        let result = solve_w(&a, &zero, &unit(2, 1), &spec, true, &tol()).unwrap();
        assert!(result.verified);
        assert!(result.perturbation.is_real());
    }
}
