//! Executable validators for the perturbation inequalities: layer-by-layer
//! growth of the root subspace filtration, persistence of multi-chain
//! eigenvalues, and the capacity bounds on root subspace dimensions.
//!
//! Every check compares integer dimensions extracted from nullity towers of
//! `A` and `A + P`; only those tower entries involve toleranced rank
//! decisions. The comparisons themselves are exact integer arithmetic, and a
//! report lists each inequality with its slack so that a violation pinpoints
//! the eigenvalue and layer responsible.

use crate::pencil::Pencil;
use crate::rank_one::RankOnePencil;
use crate::scalar::{ExtComplex, Tol};
use crate::spectral::{eig_structure, nullity_tower, SpectralData};
use crate::{Error, Result};

/// One verified inequality. `lambda` is `None` for the global (summed)
/// bounds. `before`/`after` are the dimensions entering the inequality for
/// `A` and `A + P` respectively; `slack` is how far the bound is from being
/// violated (negative exactly when `satisfied` is false).
#[derive(Debug, Clone)]
pub struct BoundRecord {
    pub lambda: Option<ExtComplex>,
    pub what: String,
    pub before: i64,
    pub after: i64,
    pub satisfied: bool,
    pub slack: i64,
}

impl BoundRecord {
    fn new(lambda: Option<ExtComplex>, what: impl Into<String>, before: i64, after: i64, slack: i64) -> Self {
        BoundRecord {
            lambda,
            what: what.into(),
            before,
            after,
            satisfied: slack >= 0,
            slack,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub records: Vec<BoundRecord>,
    pub overall_pass: bool,
}

impl BoundsReport {
    fn from_records(records: Vec<BoundRecord>) -> Self {
        let overall_pass = records.iter().all(|r| r.satisfied);
        BoundsReport { records, overall_pass }
    }

    /// Concatenate several reports into one verdict.
    pub fn merged(parts: Vec<BoundsReport>) -> Self {
        let records = parts.into_iter().flat_map(|p| p.records).collect();
        BoundsReport::from_records(records)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundRecord> {
        self.records.iter().filter(|r| !r.satisfied)
    }
}

/// The spectra of `A` and `A + P` matched up to a pairing tolerance, plus
/// the union of eigenvalue locations. Indices refer to `sd_a.eigs` /
/// `sd_b.eigs`.
pub(crate) struct MatchedSpectra {
    pub sd_a: SpectralData,
    pub sd_b: SpectralData,
    pub sum: Pencil,
    /// Union points as (location-in-A, location-in-A+P); at least one side
    /// is always present.
    pub pairs: Vec<(Option<usize>, Option<usize>)>,
}

impl MatchedSpectra {
    pub fn build(a: &Pencil, p1: &RankOnePencil, tol: &Tol) -> Result<MatchedSpectra> {
        if p1.n() != a.n() {
            return Err(Error::Dimension(format!(
                "perturbation size {} does not match pencil size {}",
                p1.n(),
                a.n()
            )));
        }
        MatchedSpectra::build_from_sum(a, p1.add_to(a), tol)
    }

    /// Variant taking the perturbed pencil directly; used when the
    /// perturbation is not representable as a structured rank-one pencil
    /// (for example the zero perturbation `w = 0`).
    pub(crate) fn build_from_sum(a: &Pencil, sum: Pencil, tol: &Tol) -> Result<MatchedSpectra> {
        let sd_a = eig_structure(a, tol)?;
        let sd_b = eig_structure(&sum, tol)?;
        let pair_tol = 1e-6f64.max(sd_a.cluster_tol_used).max(sd_b.cluster_tol_used);

        // Greedy closest-first matching; spectra are tiny, so quadratic
        // enumeration is fine.
        let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
        for (i, ea) in sd_a.eigs.iter().enumerate() {
            for (j, eb) in sd_b.eigs.iter().enumerate() {
                if ea.lambda.matches(&eb.lambda, pair_tol) {
                    candidates.push((ea.lambda.dist(&eb.lambda), i, j));
                }
            }
        }
        candidates.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut a_used = vec![false; sd_a.eigs.len()];
        let mut b_used = vec![false; sd_b.eigs.len()];
        let mut pairs: Vec<(Option<usize>, Option<usize>)> = Vec::new();
        for (_, i, j) in candidates {
            if !a_used[i] && !b_used[j] {
                a_used[i] = true;
                b_used[j] = true;
                pairs.push((Some(i), Some(j)));
            }
        }
        for (i, used) in a_used.iter().enumerate() {
            if !used {
                pairs.push((Some(i), None));
            }
        }
        for (j, used) in b_used.iter().enumerate() {
            if !used {
                pairs.push((None, Some(j)));
            }
        }
        pairs.sort_by(|x, y| {
            let key = |p: &(Option<usize>, Option<usize>)| match p {
                (Some(i), _) => sd_a.eigs[*i].lambda.sort_key(),
                (None, Some(j)) => sd_b.eigs[*j].lambda.sort_key(),
                (None, None) => unreachable!(),
            };
            key(x).partial_cmp(&key(y)).unwrap()
        });
        Ok(MatchedSpectra { sd_a, sd_b, sum, pairs })
    }

    /// Representative location of union point `idx`, preferring the
    /// unperturbed centroid.
    pub fn point(&self, idx: usize) -> ExtComplex {
        match self.pairs[idx] {
            (Some(i), _) => self.sd_a.eigs[i].lambda,
            (None, Some(j)) => self.sd_b.eigs[j].lambda,
            (None, None) => unreachable!(),
        }
    }

    fn m1_at(&self, idx: usize) -> (usize, usize) {
        let (i, j) = self.pairs[idx];
        (
            i.map_or(0, |i| self.sd_a.eigs[i].m1()),
            j.map_or(0, |j| self.sd_b.eigs[j].m1()),
        )
    }

    /// Nullity towers of both pencils at union point `idx`, each evaluated
    /// at its own matched centroid when available.
    fn towers_at(
        &self,
        a: &Pencil,
        idx: usize,
        kmax: usize,
        tol_rank: f64,
    ) -> Result<(Vec<usize>, Vec<usize>)> {
        let (i, j) = self.pairs[idx];
        let at_a = i.map(|i| self.sd_a.eigs[i].lambda).unwrap_or_else(|| self.point(idx));
        let at_b = j.map(|j| self.sd_b.eigs[j].lambda).unwrap_or_else(|| self.point(idx));
        Ok((
            nullity_tower(a, at_a, kmax, tol_rank)?,
            nullity_tower(&self.sum, at_b, kmax, tol_rank)?,
        ))
    }
}

/// Layer inequalities: for every eigenvalue of either pencil and every depth
/// `k`, the layer dimensions `dim(L^{k+1}/L^k)` move by at most one, and the
/// truncated root dimensions `dim L^k` by at most `k`.
pub fn check_layer_bounds(a: &Pencil, p1: &RankOnePencil, tol: &Tol) -> Result<BoundsReport> {
    let ms = MatchedSpectra::build(a, p1, tol)?;
    let n = a.n();
    let mut records = Vec::new();
    for idx in 0..ms.pairs.len() {
        let lambda = ms.point(idx);
        let (m1a, m1b) = ms.m1_at(idx);
        let kmax = n.min(m1a.max(m1b) + 1).max(1);
        let (ta, tb) = ms.towers_at(a, idx, kmax, tol.rank)?;
        let nu = |t: &Vec<usize>, k: usize| if k == 0 { 0 } else { t[k - 1] as i64 };
        for k in 1..=kmax {
            let layer_a = nu(&ta, k) - nu(&ta, k - 1);
            let layer_b = nu(&tb, k) - nu(&tb, k - 1);
            records.push(BoundRecord::new(
                Some(lambda),
                format!("layer {k} changes by at most 1"),
                layer_a,
                layer_b,
                1 - (layer_b - layer_a).abs(),
            ));
            records.push(BoundRecord::new(
                Some(lambda),
                format!("dim L^{k} changes by at most {k}"),
                nu(&ta, k),
                nu(&tb, k),
                k as i64 - (nu(&tb, k) - nu(&ta, k)).abs(),
            ));
        }
    }
    Ok(BoundsReport::from_records(records))
}

/// Persistence: eigenvalues of `A` carrying two or more chains survive any
/// rank-one update, and eigenvalues created by the update carry exactly one
/// chain.
pub fn check_persistence(a: &Pencil, p1: &RankOnePencil, tol: &Tol) -> Result<BoundsReport> {
    let ms = MatchedSpectra::build(a, p1, tol)?;
    let mut records = Vec::new();
    for idx in 0..ms.pairs.len() {
        let lambda = ms.point(idx);
        match ms.pairs[idx] {
            (Some(i), j) => {
                let geo_a = ms.sd_a.eigs[i].geo_mult();
                if geo_a >= 2 {
                    let geo_b = j.map_or(0, |j| ms.sd_b.eigs[j].geo_mult());
                    records.push(BoundRecord::new(
                        Some(lambda),
                        "multi-chain eigenvalue persists",
                        geo_a as i64,
                        geo_b as i64,
                        geo_b as i64 - 1,
                    ));
                }
            }
            (None, Some(j)) => {
                let geo_b = ms.sd_b.eigs[j].geo_mult() as i64;
                records.push(BoundRecord::new(
                    Some(lambda),
                    "new eigenvalue has a single chain",
                    0,
                    geo_b,
                    1 - geo_b,
                ));
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(BoundsReport::from_records(records))
}

/// The three capacity displays with a per-eigenvalue budget function. The
/// default budget is the longest-chain length m1; the restricted variant
/// substitutes the pole orders of the constrained perturbation.
pub(crate) fn root_dim_bounds_with_budget(
    ms: &MatchedSpectra,
    n: usize,
    budget_of: &dyn Fn(usize) -> usize,
    total_budget: usize,
) -> BoundsReport {
    let cap = total_budget as i64;
    let mut records = Vec::new();
    let mut old_sum: i64 = 0;
    let mut new_sum: i64 = 0;
    for idx in 0..ms.pairs.len() {
        let lambda = ms.point(idx);
        match ms.pairs[idx] {
            (Some(i), j) => {
                let dim_a = ms.sd_a.eigs[i].root_dim as i64;
                let dim_b = j.map_or(0, |j| ms.sd_b.eigs[j].root_dim) as i64;
                let budget = budget_of(i) as i64;
                old_sum += dim_b;
                records.push(BoundRecord::new(
                    Some(lambda),
                    "root dim loses at most the budget",
                    dim_a,
                    dim_b,
                    dim_b - (dim_a - budget),
                ));
                records.push(BoundRecord::new(
                    Some(lambda),
                    "root dim gains at most capacity minus budget",
                    dim_a,
                    dim_b,
                    (dim_a - budget + cap) - dim_b,
                ));
            }
            (None, Some(j)) => {
                let dim_b = ms.sd_b.eigs[j].root_dim as i64;
                new_sum += dim_b;
                records.push(BoundRecord::new(
                    Some(lambda),
                    "new eigenvalue dim at most capacity",
                    0,
                    dim_b,
                    cap - dim_b,
                ));
            }
            (None, None) => unreachable!(),
        }
    }
    records.push(BoundRecord::new(
        None,
        "surviving dims total at least n minus capacity",
        n as i64,
        old_sum,
        old_sum - (n as i64 - cap),
    ));
    records.push(BoundRecord::new(
        None,
        "new dims total at most capacity",
        0,
        new_sum,
        cap - new_sum,
    ));
    BoundsReport::from_records(records)
}

/// Capacity bounds on root subspace dimensions: per surviving eigenvalue,
/// per new eigenvalue, and the two global sums.
/// Every inequality family at once: layer and truncation bounds,
/// persistence, and the root-dimension budget bounds.
pub fn check_all_bounds(a: &Pencil, p1: &RankOnePencil, tol: &Tol) -> Result<BoundsReport> {
    Ok(BoundsReport::merged(vec![
        check_layer_bounds(a, p1, tol)?,
        check_persistence(a, p1, tol)?,
        check_root_dim_bounds(a, p1, tol)?,
    ]))
}

pub fn check_root_dim_bounds(a: &Pencil, p1: &RankOnePencil, tol: &Tol) -> Result<BoundsReport> {
    let ms = MatchedSpectra::build(a, p1, tol)?;
    let total = ms.sd_a.capacity;
    Ok(root_dim_bounds_with_budget(
        &ms,
        a.n(),
        &|i| ms.sd_a.eigs[i].m1(),
        total,
    ))
}
