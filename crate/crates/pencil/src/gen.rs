//! Seeded random instance generators for the verification suites: integer
//! pencils, integer rank-one perturbations, and target multisets. Integer
//! entries keep the exact-arithmetic cross-checks meaningful.

use crate::pencil::Pencil;
use crate::placement::PlacementSpec;
use crate::rank_one::RankOnePencil;
use crate::scalar::{ExtComplex, Tol};
use crate::CVec;
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;

/// Uniform integer entries in `[-bound, bound]`, real.
pub fn integer_matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Array2<Complex64> {
    Array2::from_shape_fn((n, n), |_| {
        Complex64::new(rng.gen_range(-bound..=bound) as f64, 0.0)
    })
}

/// Uniform integer entries in `[-bound, bound]`, real; the zero vector can
/// occur.
pub fn integer_vector<R: Rng>(rng: &mut R, n: usize, bound: i64) -> CVec {
    Array1::from_shape_fn(n, |_| Complex64::new(rng.gen_range(-bound..=bound) as f64, 0.0))
}

/// Like [`integer_vector`] but resampled until nonzero.
pub fn nonzero_integer_vector<R: Rng>(rng: &mut R, n: usize, bound: i64) -> CVec {
    loop {
        let v = integer_vector(rng, n, bound);
        if v.iter().any(|z| z.norm() > 0.0) {
            return v;
        }
    }
}

/// A regular pencil with integer entries in `[-3, 3]` (E may well be
/// singular, so eigenvalues at infinity occur naturally).
pub fn regular_integer_pencil<R: Rng>(rng: &mut R, n: usize) -> Pencil {
    let tol = Tol::default();
    for _ in 0..10_000 {
        let p = Pencil::new(integer_matrix(rng, n, 3), integer_matrix(rng, n, 3)).unwrap();
        if p.is_regular(tol.regularity).unwrap_or(false) {
            return p;
        }
    }
    unreachable!("regular integer pencils have overwhelming density");
}

/// A random structured rank-one pencil with integer data.
pub fn integer_rank_one<R: Rng>(rng: &mut R, n: usize) -> RankOnePencil {
    loop {
        let pick: u8 = rng.gen_range(0..6);
        let attempt = match pick {
            0 | 1 => RankOnePencil::left(
                integer_vector(rng, n, 3),
                integer_vector(rng, n, 3),
                nonzero_integer_vector(rng, n, 3),
            ),
            2 | 3 => RankOnePencil::right(
                nonzero_integer_vector(rng, n, 3),
                integer_vector(rng, n, 3),
                integer_vector(rng, n, 3),
            ),
            _ => RankOnePencil::degenerate(
                Complex64::new(rng.gen_range(-2..=2) as f64, 0.0),
                Complex64::new(rng.gen_range(-2..=2) as f64, 0.0),
                nonzero_integer_vector(rng, n, 3),
                nonzero_integer_vector(rng, n, 3),
            ),
        };
        if let Ok(p) = attempt {
            return p;
        }
    }
}

/// `(A, P)` with both `A` and `A + P` regular — the hypothesis shared by all
/// perturbation inequalities.
pub fn regular_pair<R: Rng>(rng: &mut R, n: usize) -> (Pencil, RankOnePencil) {
    let tol = Tol::default();
    for _ in 0..10_000 {
        let a = regular_integer_pencil(rng, n);
        let p1 = integer_rank_one(rng, n);
        let sum = p1.add_to(&a);
        if sum.is_regular(tol.regularity).unwrap_or(false) {
            return (a, p1);
        }
    }
    unreachable!("regular pairs have overwhelming density");
}

/// Distinct target values drawn from a small integer grid, avoiding
/// collisions with `taken`.
fn fresh_value<R: Rng>(rng: &mut R, taken: &[ExtComplex], real_only: bool) -> Complex64 {
    loop {
        let re = rng.gen_range(-6..=6) as f64;
        let im = if real_only { 0.0 } else { rng.gen_range(-3..=3) as f64 };
        let z = Complex64::new(re, im);
        let candidate = ExtComplex::Finite(z);
        if taken.iter().all(|t| t.dist(&candidate) > 0.4) {
            return z;
        }
    }
}

/// Random multiset of targets totalling `budget`; infinity appears with
/// probability 0.3 when allowed.
pub fn random_targets<R: Rng>(rng: &mut R, budget: usize, allow_inf: bool) -> PlacementSpec {
    assert!(budget > 0);
    let mut taken: Vec<ExtComplex> = Vec::new();
    let mut targets: Vec<(ExtComplex, usize)> = Vec::new();
    let mut remaining = budget;
    if allow_inf && rng.gen_bool(0.3) {
        let m = rng.gen_range(1..=remaining);
        targets.push((ExtComplex::Infinity, m));
        taken.push(ExtComplex::Infinity);
        remaining -= m;
    }
    while remaining > 0 {
        let m = rng.gen_range(1..=remaining);
        let z = fresh_value(rng, &taken, false);
        taken.push(ExtComplex::Finite(z));
        targets.push((ExtComplex::Finite(z), m));
        remaining -= m;
    }
    PlacementSpec::new(targets).expect("generated targets are distinct by construction")
}

/// Random conjugate-symmetric multiset of targets totalling `budget`.
pub fn random_symmetric_targets<R: Rng>(
    rng: &mut R,
    budget: usize,
    allow_inf: bool,
) -> PlacementSpec {
    assert!(budget > 0);
    let mut taken: Vec<ExtComplex> = Vec::new();
    let mut targets: Vec<(ExtComplex, usize)> = Vec::new();
    let mut remaining = budget;
    if allow_inf && rng.gen_bool(0.3) {
        let m = rng.gen_range(1..=remaining);
        targets.push((ExtComplex::Infinity, m));
        taken.push(ExtComplex::Infinity);
        remaining -= m;
    }
    while remaining > 0 {
        if remaining >= 2 && rng.gen_bool(0.5) {
            // Conjugate pair with equal multiplicities.
            let m = rng.gen_range(1..=(remaining / 2));
            let z = loop {
                let re = rng.gen_range(-6..=6) as f64;
                let im = rng.gen_range(1..=3) as f64;
                let z = Complex64::new(re, im);
                if taken.iter().all(|t| {
                    t.dist(&ExtComplex::Finite(z)) > 0.4
                        && t.dist(&ExtComplex::Finite(z.conj())) > 0.4
                }) {
                    break z;
                }
            };
            taken.push(ExtComplex::Finite(z));
            taken.push(ExtComplex::Finite(z.conj()));
            targets.push((ExtComplex::Finite(z), m));
            targets.push((ExtComplex::Finite(z.conj()), m));
            remaining -= 2 * m;
        } else {
            let m = rng.gen_range(1..=remaining);
            let z = fresh_value(rng, &taken, true);
            taken.push(ExtComplex::Finite(z));
            targets.push((ExtComplex::Finite(z), m));
            remaining -= m;
        }
    }
    PlacementSpec::new(targets).expect("generated targets are distinct by construction")
}
