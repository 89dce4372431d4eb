//! Eigenvalue placement by rank-one perturbation.
//!
//! Given a regular pencil `A(s) = sE - A` with capacity `M` (the sum of the
//! longest-chain lengths over the spectrum, infinity included), any multiset
//! of `M` extended-complex targets can be realized as the "movable part" of
//! the spectrum of `A + P` for a rank-one pencil `P(s) = (αs - β) u v^*`.
//! Eigenvalues carrying more than one chain persist with their root
//! dimension reduced by the longest chain; everything else is dictated by
//! the targets.
//!
//! The construction runs through a scalar rational identity: writing
//! `Θ(u, v)(s) = v^* m_A(s) (sE - A)^{-1} u` (a polynomial of degree at most
//! `M - 1`), Sylvester's determinant identity gives
//!
//! ```text
//! det(A + P)(s) · m_A(s) = det(sE - A) · (m_A(s) + (αs - β) Θ(u, v)(s)).
//! ```
//!
//! Choosing the right-hand polynomial forces the spectrum. [`solve_theta`]
//! inverts the linear map `u ↦ Θ` in Weierstraß coordinates; [`place`] picks
//! the scalar data `α, β, γ` and verifies the outcome; the single-chain and
//! inverse-problem variants specialize it.

use crate::pencil::Pencil;
use crate::poly::{self, Polynomial};
use crate::rank_one::RankOnePencil;
use crate::scalar::{parse_ext_complex, ExtComplex, Tol};
use crate::spectral::{
    certify_spectrum, eig_structure, weierstrass, EigStructure, SpectralData, Weierstrass,
};
use crate::{lapack, CMat, CVec, Error, Result};
use ndarray::Array1;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A multiset of placement targets: pairwise distinct extended-complex
/// values with positive multiplicities. The budget (total multiplicity) must
/// equal the capacity of whichever placement problem it is fed to.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementSpec {
    targets: Vec<(ExtComplex, usize)>,
    budget: usize,
}

impl PlacementSpec {
    pub fn new(targets: Vec<(ExtComplex, usize)>) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::PreconditionViolated("target multiset is empty".into()));
        }
        for (i, (mu, m)) in targets.iter().enumerate() {
            if *m == 0 {
                return Err(Error::PreconditionViolated(format!(
                    "target {mu} has multiplicity zero"
                )));
            }
            for (nu, _) in targets.iter().skip(i + 1) {
                if mu.matches(nu, 1e-12) {
                    return Err(Error::PreconditionViolated(format!(
                        "duplicate target {mu}; multiplicities must be merged"
                    )));
                }
            }
        }
        let budget = targets.iter().map(|(_, m)| m).sum();
        Ok(PlacementSpec { targets, budget })
    }

    /// Parse `"value:mult"` entries separated by commas, e.g.
    /// `"2:1,-1+3i:2,inf:1"`. A missing `:mult` means multiplicity one.
    pub fn parse(text: &str) -> Result<Self> {
        let mut targets = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(Error::Parse(format!("empty target entry in '{text}'")));
            }
            let (value, mult) = match part.rsplit_once(':') {
                Some((v, m)) => {
                    let mult: usize = m.trim().parse().map_err(|_| {
                        Error::Parse(format!("bad multiplicity '{m}' in target '{part}'"))
                    })?;
                    (v.trim(), mult)
                }
                None => (part, 1),
            };
            let point = parse_ext_complex(value)
                .ok_or_else(|| Error::Parse(format!("bad eigenvalue '{value}' in target '{part}'")))?;
            targets.push((point, mult));
        }
        PlacementSpec::new(targets)
    }

    pub fn targets(&self) -> &[(ExtComplex, usize)] {
        &self.targets
    }

    /// Total multiplicity.
    pub fn total(&self) -> usize {
        self.budget
    }

    pub fn finite_targets(&self) -> impl Iterator<Item = (Complex64, usize)> + '_ {
        self.targets
            .iter()
            .filter_map(|(mu, m)| mu.as_finite().map(|z| (z, *m)))
    }

    pub fn inf_mult(&self) -> usize {
        self.targets
            .iter()
            .find(|(mu, _)| mu.is_infinite())
            .map_or(0, |(_, m)| *m)
    }

    pub fn contains(&self, x: &ExtComplex, tol: f64) -> bool {
        self.targets.iter().any(|(mu, _)| mu.matches(x, tol))
    }

    pub fn max_finite_abs(&self) -> f64 {
        self.finite_targets()
            .map(|(z, _)| z.norm())
            .fold(0.0, f64::max)
    }

    /// True when the multiset is closed under conjugation with matching
    /// multiplicities (infinity and real values count as self-conjugate).
    pub fn real_symmetric(&self) -> bool {
        self.targets.iter().all(|(mu, m)| match mu {
            ExtComplex::Infinity => true,
            ExtComplex::Finite(z) if z.im == 0.0 => true,
            ExtComplex::Finite(z) => {
                let conj = ExtComplex::Finite(z.conj());
                self.targets
                    .iter()
                    .any(|(nu, k)| nu.matches(&conj, 1e-12) && k == m)
            }
        })
    }
}

/// Outcome of a placement: the perturbation, the scalar data of the
/// construction, the spectral analysis of `A + P`, and the verification
/// verdict. `alpha`/`beta` are present for the unrestricted construction
/// `(αs - β) u v^*` and absent for the restricted one `(su + v) w^*`.
#[derive(Debug, Clone)]
pub struct PlacementResult {
    pub perturbation: RankOnePencil,
    pub alpha: Option<Complex64>,
    pub beta: Option<Complex64>,
    pub gamma: Complex64,
    pub q_gamma: Polynomial,
    pub achieved: SpectralData,
    pub verified: bool,
    /// Worst relative deviation of the determinant identity over the random
    /// check points.
    pub det_residual: f64,
}

/// Evaluation nodes for the Θ fit: a ring of radius `rho` strictly outside
/// the spectrum (complex mode) or a ladder of real points in `[rho, 2rho)`
/// (real mode). `offset` shifts the pattern so validation nodes differ from
/// fitting nodes.
pub(crate) fn theta_nodes(count: usize, rho: f64, real_mode: bool, offset: f64) -> Vec<Complex64> {
    (0..count)
        .map(|j| {
            let frac = (j as f64 + offset) / count as f64;
            if real_mode {
                Complex64::new(rho * (1.0 + frac), 0.0)
            } else {
                Complex64::from_polar(rho, std::f64::consts::TAU * frac)
            }
        })
        .collect()
}

fn conj_t(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

pub(crate) fn dotc(a: &CVec, b: &CVec) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Solve `Θ(u, v)(s) = v^* m_A(s) (sE - A)^{-1} u = p(s)` for `u` (and `v`).
///
/// Unless `fixed_v` is given, `v` is chosen in Weierstraß coordinates with a
/// unit entry at the first row of the longest chain of every eigenvalue
/// group (infinity included); this choice makes `u ↦ Θ` surjective onto
/// polynomials of degree `< M`. The map is fit from `M` samples of the
/// canonical resolvent, solved by least squares, and the returned pair is
/// validated against `p` in original coordinates at fresh nodes.
///
/// `real_mode` requires a real pencil (with `wf` in real form) and real `p`,
/// and produces real `u`, `v`.
pub fn solve_theta(
    a: &Pencil,
    sd: &SpectralData,
    wf: &Weierstrass,
    p: &Polynomial,
    fixed_v: Option<&CVec>,
    real_mode: bool,
    tol: &Tol,
) -> Result<(CVec, CVec)> {
    let n = wf.n();
    let m = sd.capacity;
    if !p.is_zero() && p.degree() > m.saturating_sub(1) {
        return Err(Error::DegreeTooHigh {
            got: p.degree(),
            max: m.saturating_sub(1),
        });
    }
    if real_mode {
        if !sd.real || !wf.real_form {
            return Err(Error::PreconditionViolated(
                "real mode requires a real pencil in real Weierstrass form".into(),
            ));
        }
        if !p.is_real_within(1e-10) {
            return Err(Error::PreconditionViolated(
                "real mode requires a real right-hand side".into(),
            ));
        }
    }

    let vhat: CVec = match fixed_v {
        Some(fv) => {
            if fv.len() != n {
                return Err(Error::Dimension(format!(
                    "fixed v has length {}, pencil size is {n}",
                    fv.len()
                )));
            }
            conj_t(&wf.t_mat).dot(fv)
        }
        None => {
            let mut vh: CVec = Array1::zeros(n);
            for g in &wf.finite_groups {
                vh[g.offset] = ONE;
            }
            if !wf.inf_lengths.is_empty() {
                vh[wf.r] = ONE;
            }
            vh
        }
    };

    let rho = 2.0 * (1.0 + sd.max_finite_abs());
    let nodes = theta_nodes(m, rho, real_mode, 0.5);
    let (ew, aw) = wf.canonical();
    let mut cmat = CMat::zeros((m, n));
    let mut rhs: CVec = Array1::zeros(m);
    for (j, &t) in nodes.iter().enumerate() {
        let wmat = &ew.mapv(|z| z * t) - &aw;
        let y = lapack::solve(&conj_t(&wmat), &vhat)?;
        let scale = sd.min_poly.eval(t);
        for i in 0..n {
            cmat[[j, i]] = scale * y[i].conj();
        }
        rhs[j] = p.eval(t);
    }
    let (uhat, rank) = lapack::lstsq(&cmat, &rhs, tol.rank)?;
    if rank < m {
        return Err(Error::NumericallySingular { rank, want: m });
    }

    let u = lapack::solve(&wf.s_mat, &uhat)?;
    let v = match fixed_v {
        Some(fv) => fv.clone(),
        None => lapack::solve(&conj_t(&wf.t_mat), &vhat)?,
    };

    // Validate in original coordinates at fresh nodes: Θ is a polynomial of
    // degree < M, so M interpolated values pin it down completely.
    let check_nodes = theta_nodes(m, rho, real_mode, 0.17);
    let mut vals = Vec::with_capacity(m);
    for &t in &check_nodes {
        let x = lapack::solve(&a.evaluate(t), &u)?;
        vals.push(sd.min_poly.eval(t) * dotc(&v, &x));
    }
    let theta = poly::interpolate(&check_nodes, &vals)?;
    let err = theta.sub(p).norm_inf();
    // Only outright degeneration aborts here: a marginal residual is
    // dominated by resolvent conditioning, and every caller verifies the
    // finished construction anyway (determinant identity plus towers), so a
    // slightly noisy fit is judged by that final gate instead.
    if err > 1e-5 * p.norm_inf().max(1.0) {
        return Err(Error::StructureInconsistent(format!(
            "resolvent fit residual {err:.3e} exceeds tolerance"
        )));
    }
    Ok((u, v))
}

/// Worst relative deviation of `det(A+P)(t) · den(t) = det(A)(t) · num(t)`
/// over seven seeded random points of magnitude in `[radius, 2 radius]`.
pub(crate) fn det_identity_residual(
    a: &Pencil,
    sum: &Pencil,
    den: &Polynomial,
    num: &Polynomial,
    tol: &Tol,
    radius: f64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(tol.seed ^ 0x00de_71d0);
    let mut worst: f64 = 0.0;
    for _ in 0..7 {
        let angle = rng.gen::<f64>() * std::f64::consts::TAU;
        let r = radius * (1.0 + rng.gen::<f64>());
        let t = Complex64::from_polar(r, angle);
        let lhs = lapack::det(&sum.evaluate(t))? * den.eval(t);
        let rhs = lapack::det(&a.evaluate(t))? * num.eval(t);
        let scale = lhs.norm().max(rhs.norm());
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).norm() / scale);
        }
    }
    Ok(worst)
}

/// The spectrum `A + P` must exhibit: every target with its multiplicity on
/// top of whatever survives at that location, plus the persistent part
/// (root dimension minus budget) of old eigenvalues, dropped when zero.
pub(crate) fn expected_spectrum(
    sd: &SpectralData,
    spec: &PlacementSpec,
    budget_of: &dyn Fn(&EigStructure) -> usize,
    match_tol: f64,
) -> Vec<(ExtComplex, usize)> {
    let mut out: Vec<(ExtComplex, usize)> = Vec::new();
    for (mu, m) in spec.targets() {
        let base = sd
            .find(mu, match_tol)
            .map_or(0, |e| e.root_dim - budget_of(e).min(e.root_dim));
        out.push((*mu, base + m));
    }
    for e in &sd.eigs {
        if spec.contains(&e.lambda, match_tol) {
            continue;
        }
        let d = e.root_dim - budget_of(e).min(e.root_dim);
        if d > 0 {
            out.push((e.lambda, d));
        }
    }
    out
}

/// Match an expected spectrum against an achieved spectral analysis: a
/// bijection between expected entries and achieved eigenvalues with equal
/// root dimensions. Returns a human-readable discrepancy on failure.
pub(crate) fn spectrum_matches(
    expected: &[(ExtComplex, usize)],
    achieved: &SpectralData,
    match_tol: f64,
) -> std::result::Result<(), String> {
    let mut used = vec![false; achieved.eigs.len()];
    for (mu, want) in expected {
        let mut best: Option<(f64, usize)> = None;
        for (j, e) in achieved.eigs.iter().enumerate() {
            if used[j] || !e.lambda.matches(mu, match_tol) {
                continue;
            }
            let d = e.lambda.dist(mu);
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, j));
            }
        }
        match best {
            None => {
                return Err(format!(
                    "expected eigenvalue {mu} with root dim {want} is absent"
                ))
            }
            Some((_, j)) => {
                used[j] = true;
                let got = achieved.eigs[j].root_dim;
                if got != *want {
                    return Err(format!(
                        "eigenvalue {mu}: root dim {got}, expected {want}"
                    ));
                }
            }
        }
    }
    for (j, e) in achieved.eigs.iter().enumerate() {
        if !used[j] {
            return Err(format!(
                "unexpected eigenvalue {} with root dim {}",
                e.lambda, e.root_dim
            ));
        }
    }
    Ok(())
}

/// Tolerance for matching requested target locations against computed
/// eigenvalue centroids during verification.
pub(crate) const MATCH_TOL: f64 = 1e-6;

/// Place the full movable spectrum of `A`: construct `P(s) = (s - β) u v^*`
/// such that `σ(A + P)` consists of the targets (with their multiplicities
/// on top of any persistent part) plus exactly the persistent part of the
/// old spectrum. The outcome is always verified — via the determinant
/// identity at random points and a full spectral re-analysis — and an
/// out-of-tolerance result is returned inside [`Error::VerificationFailed`],
/// never silently.
pub fn place(
    a: &Pencil,
    spec: &PlacementSpec,
    real_mode: bool,
    tol: &Tol,
) -> Result<PlacementResult> {
    let sd = eig_structure(a, tol)?;
    if spec.total() != sd.capacity {
        return Err(Error::BudgetMismatch {
            got: spec.total(),
            want: sd.capacity,
        });
    }
    if real_mode && !(a.is_real() && spec.real_symmetric()) {
        return Err(Error::PreconditionViolated(
            "real mode requires a real pencil and a conjugate-symmetric target set".into(),
        ));
    }
    let wf = weierstrass(a, real_mode, tol)?;
    let m_a = if real_mode {
        sd.min_poly.take_real().0
    } else {
        sd.min_poly.clone()
    };
    let finite: Vec<(Complex64, usize)> = spec.finite_targets().collect();

    // Deterministic ladder for the shift point β: start beyond every target
    // and eigenvalue, double until β is separated from all of them and the
    // scaling γ = m_A(β) / Π (β - μ_i)^{m_i} is representable. The proof
    // only needs β outside a finite set; determinism aids reproducibility.
    let mut chosen = None;
    let mut beta_val = 1.0 + spec.max_finite_abs() + sd.max_finite_abs();
    for _ in 0..50 {
        let beta = Complex64::new(beta_val, 0.0);
        let bx = ExtComplex::Finite(beta);
        let clear = !spec.contains(&bx, tol.cluster)
            && sd.eigs.iter().all(|e| !e.lambda.matches(&bx, tol.cluster));
        if clear {
            let mut den = ONE;
            for &(muz, mi) in &finite {
                den *= (beta - muz).powi(mi as i32);
            }
            let gamma = m_a.eval(beta) / den;
            if gamma.norm() >= 1e-12 && gamma.norm() <= 1e12 {
                let q_gamma = poly::poly_from_roots(&finite).scale(gamma);
                let (p_rhs, rem) = q_gamma.sub(&m_a).div_affine(ONE, beta);
                // Exact divisibility is guaranteed; a large remainder flags
                // numerical trouble with this β, so the ladder moves on.
                if rem.norm() <= 1e-9 * q_gamma.norm_inf().max(1.0) {
                    chosen = Some((beta, gamma, q_gamma, p_rhs));
                    break;
                }
            }
        }
        beta_val *= 2.0;
    }
    let (beta, gamma, q_gamma, p_rhs) = chosen.ok_or_else(|| {
        Error::StructureInconsistent("no admissible shift point β on the ladder".into())
    })?;
    let p_rhs = if real_mode {
        if !p_rhs.is_real_within(1e-9) {
            return Err(Error::StructureInconsistent(
                "symmetric targets produced a non-real interpolation problem".into(),
            ));
        }
        p_rhs.take_real().0
    } else {
        p_rhs
    };

    let (u, v) = solve_theta(a, &sd, &wf, &p_rhs, None, real_mode, tol)?;
    let perturbation = RankOnePencil::degenerate(ONE, beta, u, v)?;
    let sum = perturbation.add_to(a);

    let radius = 1.0 + beta.norm().max(sd.max_finite_abs()).max(spec.max_finite_abs());
    let det_residual = det_identity_residual(a, &sum, &sd.min_poly, &q_gamma, tol, radius)?;
    let expected = expected_spectrum(&sd, spec, &|e| e.m1(), MATCH_TOL);
    let (achieved, problems) = certify_spectrum(&sum, &expected, tol)?;
    let spectrum_check: std::result::Result<(), String> = if problems.is_empty() {
        Ok(())
    } else {
        Err(problems.join("; "))
    };
    let verified = det_residual <= 1e-7 && spectrum_check.is_ok();
    let result = PlacementResult {
        perturbation,
        alpha: Some(ONE),
        beta: Some(beta),
        gamma,
        q_gamma,
        achieved,
        verified,
        det_residual,
    };
    if !verified {
        let detail = match spectrum_check {
            Err(e) => format!("achieved spectrum deviates: {e}"),
            Ok(()) => format!(
                "determinant identity residual {det_residual:.3e} exceeds 1e-7"
            ),
        };
        return Err(Error::VerificationFailed {
            detail,
            result: Box::new(result),
        });
    }
    Ok(result)
}

/// Placement specialized to pencils whose eigenvalues all carry a single
/// chain (so the capacity is `n` and the whole spectrum is movable). On top
/// of the usual verification, asserts that every target receives exactly one
/// chain. Real inputs with symmetric targets are solved in real mode
/// automatically.
pub fn place_single_chain(a: &Pencil, spec: &PlacementSpec, tol: &Tol) -> Result<PlacementResult> {
    let sd = eig_structure(a, tol)?;
    if let Some(e) = sd.eigs.iter().find(|e| e.geo_mult() != 1) {
        return Err(Error::PreconditionViolated(format!(
            "eigenvalue {} carries {} chains; single-chain placement needs exactly one",
            e.lambda,
            e.geo_mult()
        )));
    }
    let real_mode = a.is_real() && spec.real_symmetric();
    let result = place(a, spec, real_mode, tol)?;
    let mut bad = None;
    for (mu, _) in spec.targets() {
        let geo = result.achieved.find(mu, MATCH_TOL).map_or(0, |e| e.geo_mult());
        if geo != 1 {
            bad = Some(format!(
                "target {mu} carries {geo} chains instead of a single one"
            ));
            break;
        }
    }
    match bad {
        Some(detail) => Err(Error::VerificationFailed {
            detail,
            result: Box::new(result),
        }),
        None => Ok(result),
    }
}

/// A pencil in canonical coordinates realizing the given spectrum directly:
/// one Jordan block per finite entry and one nilpotent block for infinity.
/// Every eigenvalue then has a single chain and the capacity equals `n`.
pub fn wcf_direct_pencil(entries: &PlacementSpec) -> Result<Pencil> {
    let n = entries.total();
    let mut e = CMat::zeros((n, n));
    let mut a = CMat::zeros((n, n));
    let mut pos = 0;
    for (lam, m) in entries.finite_targets() {
        for i in 0..m {
            e[[pos + i, pos + i]] = ONE;
            a[[pos + i, pos + i]] = lam;
            if i + 1 < m {
                a[[pos + i, pos + i + 1]] = ONE;
            }
        }
        pos += m;
    }
    let m_inf = entries.inf_mult();
    for i in 0..m_inf {
        a[[pos + i, pos + i]] = ONE;
        if i + 1 < m_inf {
            e[[pos + i, pos + i + 1]] = ONE;
        }
    }
    Pencil::new(e, a)
}

/// Inverse problem: realize a transition between two spectra of equal total
/// `n` by a concrete pair `(A, P)` — `A` built canonically from `before`,
/// `P` a rank-one pencil with `σ(A + P)` given by `after`.
pub fn inverse_construct(
    before: &PlacementSpec,
    after: &PlacementSpec,
    tol: &Tol,
) -> Result<(Pencil, RankOnePencil)> {
    if before.total() != after.total() {
        return Err(Error::TotalMismatch {
            before: before.total(),
            after: after.total(),
        });
    }
    let a = wcf_direct_pencil(before)?;
    let result = place_single_chain(&a, after, tol)?;
    Ok((a, result.perturbation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tol {
        Tol::default()
    }

    fn spec_of(entries: &[(ExtComplex, usize)]) -> PlacementSpec {
        PlacementSpec::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn parse_targets_round_trip() {
        let spec = PlacementSpec::parse("2:1,-1+3i:2,inf:1").unwrap();
        assert_eq!(spec.total(), 4);
        assert_eq!(spec.inf_mult(), 1);
        assert!(spec.contains(&ExtComplex::finite(-1.0, 3.0), 1e-12));
        assert!(PlacementSpec::parse("1:1,1:2").is_err());
        assert!(PlacementSpec::parse("1:0").is_err());
    }

    #[test]
    fn symmetric_detection() {
        let sym = spec_of(&[
            (ExtComplex::finite(0.0, 1.0), 2),
            (ExtComplex::finite(0.0, -1.0), 2),
            (ExtComplex::real(3.0), 1),
            (ExtComplex::Infinity, 1),
        ]);
        assert!(sym.real_symmetric());
        let asym = spec_of(&[
            (ExtComplex::finite(0.0, 1.0), 2),
            (ExtComplex::finite(0.0, -1.0), 1),
        ]);
        assert!(!asym.real_symmetric());
    }

    #[test]
    fn solve_theta_scalar_case() {
        // E = 1, A = 0: Θ(u, v) = conj(v) · u, so any constant is reachable.
        let a = Pencil::from_real(&array![[1.0]], &array![[0.0]]).unwrap();
        let t = tol();
        let sd = eig_structure(&a, &t).unwrap();
        let wf = weierstrass(&a, false, &t).unwrap();
        let p = Polynomial::constant(c(3.0, -1.0));
        let (u, v) = solve_theta(&a, &sd, &wf, &p, None, false, &t).unwrap();
        let theta = v[0].conj() * u[0];
        assert!((theta - c(3.0, -1.0)).norm() < 1e-10);
    }

    #[test]
    fn solve_theta_polynomial_resolvent_at_infinity() {
        // (E, A) = (J2(0), I2): the resolvent is the polynomial -(I + sN),
        // m_A = 1, capacity 2; p(s) = s must be representable.
        let a = Pencil::from_real(&array![[0.0, 1.0], [0.0, 0.0]], &array![[1.0, 0.0], [0.0, 1.0]])
            .unwrap();
        let t = tol();
        let sd = eig_structure(&a, &t).unwrap();
        assert_eq!(sd.capacity, 2);
        let wf = weierstrass(&a, false, &t).unwrap();
        let p = Polynomial::from_real(&[0.0, 1.0]);
        let (u, v) = solve_theta(&a, &sd, &wf, &p, None, false, &t).unwrap();
        for s in [c(0.3, 0.7), c(-2.0, 0.1), c(5.0, -3.0)] {
            let x = lapack::solve(&a.evaluate(s), &u).unwrap();
            let theta = dotc(&v, &x);
            assert!((theta - s).norm() < 1e-8, "Θ({s}) = {theta}");
        }
    }

    #[test]
    fn solve_theta_rejects_high_degree() {
        let a = Pencil::from_real(&array![[1.0]], &array![[0.0]]).unwrap();
        let t = tol();
        let sd = eig_structure(&a, &t).unwrap();
        let wf = weierstrass(&a, false, &t).unwrap();
        let p = Polynomial::from_real(&[0.0, 1.0]);
        assert!(matches!(
            solve_theta(&a, &sd, &wf, &p, None, false, &t),
            Err(Error::DegreeTooHigh { got: 1, max: 0 })
        ));
    }

    #[test]
    fn place_jordan_block_to_simple_pair() {
        let a = Pencil::from_real(&array![[1.0, 0.0], [0.0, 1.0]], &array![[0.0, 1.0], [0.0, 0.0]])
            .unwrap();
        let spec = spec_of(&[(ExtComplex::real(1.0), 1), (ExtComplex::real(-1.0), 1)]);
        let result = place(&a, &spec, false, &tol()).unwrap();
        assert!(result.verified);
        assert!(result.det_residual <= 1e-7);
        let lambdas = result.achieved.spectrum();
        assert_eq!(lambdas.len(), 2);
        assert!(result.achieved.find(&ExtComplex::real(1.0), 1e-6).is_some());
        assert!(result.achieved.find(&ExtComplex::real(-1.0), 1e-6).is_some());
    }

    #[test]
    fn place_keeps_persistent_part() {
        // segre(0) = [2, 1] on a 3x3 pencil: capacity 2, the persistent part
        // of 0 has dimension 1. Placing (5, 2) must leave σ = {5, 0} with
        // root dims 2 and 1.
        let a = Pencil::from_real(
            &ndarray::Array2::eye(3),
            &array![[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
        )
        .unwrap();
        let spec = spec_of(&[(ExtComplex::real(5.0), 2)]);
        let result = place(&a, &spec, false, &tol()).unwrap();
        assert!(result.verified);
        let five = result.achieved.find(&ExtComplex::real(5.0), 1e-6).unwrap();
        assert_eq!(five.root_dim, 2);
        let zero = result.achieved.find(&ExtComplex::real(0.0), 1e-6).unwrap();
        assert_eq!(zero.root_dim, 1);
    }

    #[test]
    fn real_mode_places_conjugate_pair_with_real_vectors() {
        let a = Pencil::from_real(&array![[1.0, 0.0], [0.0, 1.0]], &array![[1.0, 0.0], [0.0, 2.0]])
            .unwrap();
        let spec = spec_of(&[
            (ExtComplex::finite(0.0, 1.0), 1),
            (ExtComplex::finite(0.0, -1.0), 1),
        ]);
        let result = place(&a, &spec, true, &tol()).unwrap();
        assert!(result.verified);
        assert!(result.perturbation.is_real(), "real mode must give real vectors");
        assert!(result.achieved.find(&ExtComplex::finite(0.0, 1.0), 1e-6).is_some());
    }

    #[test]
    fn budget_mismatch_is_rejected() {
        let a = Pencil::from_real(&array![[1.0, 0.0], [0.0, 1.0]], &array![[1.0, 0.0], [0.0, 2.0]])
            .unwrap();
        let spec = spec_of(&[(ExtComplex::real(5.0), 3)]);
        assert!(matches!(
            place(&a, &spec, false, &tol()),
            Err(Error::BudgetMismatch { got: 3, want: 2 })
        ));
    }

    #[test]
    fn single_chain_placement_and_precondition() {
        // J3(0): one chain of length 3; move everything to 2.
        let a = Pencil::from_real(
            &ndarray::Array2::eye(3),
            &array![[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]],
        )
        .unwrap();
        let spec = spec_of(&[(ExtComplex::real(2.0), 3)]);
        let result = place_single_chain(&a, &spec, &tol()).unwrap();
        let two = result.achieved.find(&ExtComplex::real(2.0), 1e-6).unwrap();
        assert_eq!(two.root_dim, 3);
        assert_eq!(two.geo_mult(), 1);

        // Two chains at 0 violate the precondition.
        let d = Pencil::from_real(&ndarray::Array2::eye(2), &ndarray::Array2::zeros((2, 2)))
            .unwrap();
        let spec2 = spec_of(&[(ExtComplex::real(1.0), 2)]);
        assert!(matches!(
            place_single_chain(&d, &spec2, &tol()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn place_infinity_target() {
        // (E, A) = (J2(0), I2) has σ = {∞} with one chain of length 2;
        // move one eigenvalue to 0 and keep one at ∞.
        let a = Pencil::from_real(&array![[0.0, 1.0], [0.0, 0.0]], &array![[1.0, 0.0], [0.0, 1.0]])
            .unwrap();
        let spec = spec_of(&[(ExtComplex::Infinity, 1), (ExtComplex::real(0.0), 1)]);
        let result = place_single_chain(&a, &spec, &tol()).unwrap();
        assert!(result.verified);
        assert_eq!(result.achieved.dim_of(&ExtComplex::Infinity, 1e-6), 1);
        assert_eq!(result.achieved.dim_of(&ExtComplex::real(0.0), 1e-6), 1);
    }

    #[test]
    fn inverse_construction_including_fixed_point() {
        let before = spec_of(&[(ExtComplex::real(0.0), 2)]);
        let after = spec_of(&[(ExtComplex::Infinity, 2)]);
        let (a, p1) = inverse_construct(&before, &after, &tol()).unwrap();
        let sum = p1.add_to(&a);
        let sd = eig_structure(&sum, &tol()).unwrap();
        assert_eq!(sd.dim_of(&ExtComplex::Infinity, 1e-6), 2);
        assert_eq!(sd.eigs.len(), 1);

        // before = after: the zero perturbation is the honest answer.
        let (a2, p2) = inverse_construct(&before, &before, &tol()).unwrap();
        let sum2 = p2.add_to(&a2);
        let sd2 = eig_structure(&sum2, &tol()).unwrap();
        assert_eq!(sd2.dim_of(&ExtComplex::real(0.0), 1e-6), 2);

        let bad = spec_of(&[(ExtComplex::real(0.0), 3)]);
        assert!(matches!(
            inverse_construct(&before, &bad, &tol()),
            Err(Error::TotalMismatch { before: 2, after: 3 })
        ));
    }
}
