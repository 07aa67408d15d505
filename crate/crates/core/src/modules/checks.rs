//! Exact structural checks on truncated modules.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

use super::{tv_add, tv_single, BlockKey, FiniteModule, KeyId, ModuleView, TVec, Tower, ViewKind};
use crate::error::{Error, Result};
use crate::linalg::{reduce_mod, Matrix, ModEliminator, SparseEliminator};
use crate::loop_algebra::{Gen, LoopGen};
use crate::rational::Q;
use crate::root_system::RootSystemData;

/// Loop generators `x ⊗ t^n` with `n_j ∈ window_top` and `|n_i| ≤ lateral`.
pub fn generator_window(
    root: &RootSystemData,
    level: usize,
    lateral: i32,
    top: &[i32],
) -> Vec<Gen> {
    let mut tails: Vec<Vec<i32>> = vec![vec![]];
    for _ in 1..level {
        tails = tails
            .into_iter()
            .flat_map(|t| {
                (-lateral..=lateral).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for x in root.basis() {
        for t in &tails {
            for &n in top {
                let mut idx = t.clone();
                idx.push(n);
                out.push(Gen::Loop(LoopGen::new(x, &idx)));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutantReport {
    pub dimension: usize,
    pub unknowns: usize,
    pub blocks: usize,
    pub equations_used: usize,
    pub skipped: usize,
    /// `"modular"` when the rank mod `2^61 − 1` already meets the lower
    /// bound, `"rational"` otherwise.
    pub method: &'static str,
}

/// Dimension of the grading-preserving endomorphisms commuting with every
/// exactly computable generator action between listed blocks.
pub fn commutant_dimension(m: &dyn FiniteModule, gens: &[Gen]) -> Result<CommutantReport> {
    let labels = m.block_labels();
    let mut offset = BTreeMap::new();
    let mut dims = BTreeMap::new();
    let mut total = 0;
    for b in &labels {
        let d = m.block_dim(b)?;
        offset.insert(b.clone(), total);
        dims.insert(b.clone(), d);
        total += d * d;
    }
    let var = |b: &BlockKey, i: usize, j: usize| offset[b] + i * dims[b] + j;
    let mut rows: Vec<BTreeMap<usize, Q>> = Vec::new();
    let (mut used, mut skipped) = (0, 0);
    let pairs: Vec<(&BlockKey, &Gen)> = labels
        .iter()
        .flat_map(|b| gens.iter().map(move |g| (b, g)))
        .collect();
    let mats: Vec<Option<(BlockKey, Matrix)>> = pairs
        .par_iter()
        .map(|(b, g)| m.action_matrix(g, b))
        .collect::<Result<_>>()?;
    for ((b, _), mat) in pairs.iter().zip(mats) {
        {
            let Some((t, a)) = mat else {
                skipped += 1;
                continue;
            };
            if !offset.contains_key(&t) {
                skipped += 1;
                continue;
            }
            used += 1;
            let (dt, ds) = (dims[&t], dims[*b]);
            // (φ_t A − A φ_b)_{ij} = 0
            for i in 0..dt {
                for j in 0..ds {
                    let mut row: BTreeMap<usize, Q> = BTreeMap::new();
                    for k in 0..dt {
                        let c = &a[(k, j)];
                        if !c.is_zero() {
                            *row.entry(var(&t, i, k)).or_insert_with(Q::zero) += c;
                        }
                    }
                    for k in 0..ds {
                        let c = &a[(i, k)];
                        if !c.is_zero() {
                            *row.entry(var(b, k, j)).or_insert_with(Q::zero) -= c;
                        }
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let report = |dimension, method| CommutantReport {
        dimension,
        unknowns: total,
        blocks: labels.len(),
        equations_used: used,
        skipped,
        method,
    };
    let lower = m.commutant_lower_bound().min(total);
    let reduced: Option<Vec<BTreeMap<usize, u64>>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|(k, v)| reduce_mod(v).map(|x| (*k, x)))
                .collect()
        })
        .collect();
    if let Some(reduced) = reduced {
        let mut el = ModEliminator::new();
        for r in reduced {
            // a partial rank already bounding the dimension by `lower` is final
            if total - el.rank() == lower {
                break;
            }
            el.push(r);
        }
        if total - el.rank() == lower {
            return Ok(report(lower, "modular"));
        }
    }
    let mut el = SparseEliminator::new();
    for r in rows {
        el.push(r);
    }
    Ok(report(total - el.rank(), "rational"))
}

#[derive(Clone, Debug, Serialize)]
pub struct CogenerationBlock {
    pub degrees: Vec<i64>,
    pub weight: Vec<i64>,
    pub dim: usize,
    pub rank: usize,
    pub generators_used: usize,
}

/// For each listed block below the top, the rank of the stacked raising
/// maps into the listed blocks; cogeneration means rank = dim.
pub fn cogeneration_check(view: &ModuleView, raising: &[Gen]) -> Result<Vec<CogenerationBlock>> {
    let mut out = Vec::new();
    for label in view.block_labels() {
        if label.degrees[view.level - 1] >= view.shift[view.level - 1] {
            continue;
        }
        let dim = view.block_dim(&label)?;
        let mut rows: Vec<Vec<Q>> = Vec::new();
        let mut used = 0;
        for g in raising {
            if let Some((_, a)) = view.action_matrix(g, &label)? {
                used += 1;
                for i in 0..a.rows() {
                    rows.push(a.row(i).to_vec());
                }
            }
        }
        let rank = if rows.is_empty() {
            0
        } else {
            Matrix::from_rows(rows).rank()
        };
        out.push(CogenerationBlock {
            degrees: label.degrees,
            weight: label.weight.0,
            dim,
            rank,
            generators_used: used,
        });
    }
    Ok(out)
}

/// Kernel of a block's truncated Gram matrix, as tower vectors.
pub fn radical_vectors(tower: &Tower, b: &BlockKey) -> Result<Vec<TVec>> {
    let qb = tower.quot_block(b)?;
    let reps: BTreeSet<usize> = qb.reps.iter().copied().collect();
    let mut out = Vec::new();
    for c in (0..qb.basis.len()).filter(|c| !reps.contains(c)) {
        let rhs: Vec<Q> = qb.reps.iter().map(|&s| qb.gram[(s, c)].clone()).collect();
        let y = qb.solver.solve(&rhs);
        let mut v = tv_single(qb.basis[c]);
        for (&s, ys) in qb.reps.iter().zip(y) {
            tv_add(&mut v, qb.basis[s], -ys);
        }
        out.push(v);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClosureReport {
    pub radical_vectors: usize,
    pub checked: usize,
    pub skipped_overflow: usize,
    pub failures: usize,
}

/// Generators map radical vectors into the radical of the target block,
/// whenever the action is exact inside the box.
pub fn radical_closure_check(view: &ModuleView, gens: &[Gen]) -> Result<ClosureReport> {
    if view.kind != ViewKind::Quotient {
        return Err(Error::Invalid(
            "radical closure is checked on quotient views".into(),
        ));
    }
    let tower = &view.tower;
    let mut rep = ClosureReport::default();
    for b in view.selection() {
        let rads = radical_vectors(tower, b)?;
        rep.radical_vectors += rads.len();
        if rads.is_empty() {
            continue;
        }
        for g in gens {
            let Some(t) = super::target_block(tower.root(), g, b) else {
                continue;
            };
            if !view.selection().contains(&t) || !view.action_is_exact(g, b)? {
                rep.skipped_overflow += 1;
                continue;
            }
            let targets: Vec<KeyId> = tower.quot_block(&t)?.rep_ids().collect();
            for r in &rads {
                rep.checked += 1;
                let img = tower.act_vec(g, r)?;
                for &s in &targets {
                    if !tower.pairing_vec(&tv_single(s), &img)?.is_zero() {
                        rep.failures += 1;
                        break;
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// `⟨g·u, w⟩ = ⟨u, σ(g)·w⟩` on all listed pairs; returns the number of
/// identities checked.
pub fn contravariance_check(
    tower: &Tower,
    level: usize,
    keys: &[KeyId],
    gens: &[Gen],
) -> Result<usize> {
    let alg = tower.algebra(level);
    let mut n = 0;
    for g in gens {
        let sg = alg.sigma_gen(g);
        for &u in keys {
            let gu = tower.act(g, u)?;
            for &w in keys {
                let lhs = tower.pairing_vec(&gu, &tv_single(w))?;
                let rhs = tower.pairing_vec(&tv_single(u), &tower.act(&sg, w)?)?;
                if lhs != rhs {
                    return Err(Error::Falsified(format!(
                        "contravariance fails for {} on keys {u}, {w}: {lhs} vs {rhs}",
                        alg.label(g)
                    )));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// `c_i` acts by the level scalar on every listed key.
pub fn central_scalar_check(tower: &Tower, level: usize, keys: &[KeyId]) -> Result<usize> {
    let mut n = 0;
    for i in 1..=level {
        let want = tower.level_scalar(i);
        for &k in keys {
            let v = tower.act(&Gen::C(i as u8), k)?;
            if v.len() != 1 || v.get(&k) != Some(&want) {
                return Err(Error::Falsified(format!("c_{i} is not {want} on key {k}")));
            }
            n += 1;
        }
    }
    Ok(n)
}

/// Whether a truncated radical vector of `small` stays orthogonal to the
/// corresponding block of a larger truncation `large`.
pub fn radical_survives(small: &Tower, v: &TVec, large: &Tower) -> Result<bool> {
    let mut lifted = TVec::new();
    for (k, c) in v {
        tv_add(&mut lifted, large.intern(small.key(*k)), c.clone());
    }
    let Some((&k0, _)) = lifted.iter().next() else {
        return Ok(true);
    };
    let qb = large.quot_block(&large.block_of(k0))?;
    for &b in &qb.basis {
        if !large.pairing_vec(&tv_single(b), &lifted)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nonzero vector with unit leading coefficient, for deterministic reports.
pub fn normalized(v: &TVec) -> TVec {
    let Some((_, lead)) = v.iter().next() else {
        return v.clone();
    };
    let inv = Q::one() / lead;
    v.iter().map(|(k, c)| (*k, c * &inv)).collect()
}
