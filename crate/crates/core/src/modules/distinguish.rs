//! Distinguishing submodules of `Ind^k_{k−1}` from shifted irreducible
//! quotients by the growth of `x ⊗ t_{k−1}^r` actions.

use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

use super::checks::{normalized, radical_survives, radical_vectors};
use super::{tv_add, vector_json, BlockKey, Key, ModuleView, TVec, Tower, ViewKind};
use crate::commutator_checker::{analyze, verify};
use crate::enveloping::{Monomial, PbwElement};
use crate::error::{Error, Result};
use crate::loop_algebra::{Gen, LoopElement, LoopGen};
use crate::rational::Q;

/// `v = Σ z_i ⊗ ω_i` with `ω_i` distinct quotient representatives one
/// level down.
pub fn pbw_decomposition(tower: &Tower, v: &TVec) -> Result<Vec<(PbwElement, TVec)>> {
    let mut by_top: BTreeMap<Monomial, TVec> = BTreeMap::new();
    for (k, c) in v {
        let key = tower.key(*k);
        if key.level() == 0 {
            return Err(Error::Invalid(
                "decomposition needs a level ≥ 1 vector".into(),
            ));
        }
        tv_add(
            by_top.entry(key.top().clone()).or_default(),
            tower.intern(key.lower()),
            c.clone(),
        );
    }
    let mut parts: BTreeMap<u32, PbwElement> = BTreeMap::new();
    for (m, lower) in by_top {
        for (r, c) in tower.project(&lower)? {
            parts.entry(r).or_default().add_term(m.clone(), c);
        }
    }
    Ok(parts
        .into_iter()
        .filter(|(_, z)| !z.is_zero())
        .map(|(r, z)| (z, super::tv_single(r)))
        .collect())
}

/// `x ⊗ t_{k−1}^r` as a generator of `ĝ_k`.
fn lateral_gen(k: usize, x: crate::root_system::ChevalleyElement, r: i32) -> Gen {
    let mut n = vec![0; k];
    n[k - 2] = r;
    Gen::Loop(LoopGen::new(x, &n))
}

fn depth(tower: &Tower, id: u32, level: usize) -> i64 {
    -tower.d_eigen(id, level)
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateCheck {
    pub r: i32,
    pub nonzero: bool,
    pub matches_corollary: bool,
    pub terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TargetCheck {
    pub mu: Vec<i64>,
    pub shift: Vec<i64>,
    pub degree0_vectors: usize,
    pub max_depth: i64,
    pub annihilated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistinguishReport {
    pub candidate: Value,
    pub certificate: Value,
    pub window: (i32, i32),
    pub candidate_checks: Vec<CandidateCheck>,
    pub targets: Vec<TargetCheck>,
    pub verdict: String,
}

impl DistinguishReport {
    pub fn not_isomorphic(&self) -> bool {
        self.verdict == "not isomorphic"
    }
}

/// Certifies that `(x ⊗ t_{k−1}^r)·v ≠ 0` on a window of `r` while every
/// degree-0 vector of each target is annihilated there.
pub fn distinguishability_check(
    tower: &Tower,
    v: &TVec,
    targets: &[ModuleView],
    extra: i32,
) -> Result<DistinguishReport> {
    let k = tower.top_level();
    if k < 2 {
        return Err(Error::Invalid("distinguishability needs k ≥ 2".into()));
    }
    if v.keys().any(|&id| tower.level_of(id) != k) {
        return Err(Error::Mismatch(format!("candidate must live at level {k}")));
    }
    let parts = pbw_decomposition(tower, v)?;
    let Some((z, _)) = parts.iter().find(|(z, _)| !z.is_constant()) else {
        return Err(Error::ConstantElement);
    };
    let env = tower.enveloping(k);
    let cert = analyze(env, z)?;
    let cand_support = parts
        .iter()
        .flat_map(|(_, w)| w.keys())
        .map(|&w| depth(tower, w, k - 1))
        .max()
        .unwrap_or(0);

    let mut target_support = 0;
    for t in targets {
        if t.kind != ViewKind::Quotient || t.level != k {
            return Err(Error::Invalid(
                "targets must be level-k quotient views".into(),
            ));
        }
        for b in degree0_blocks(t) {
            for w in t.basis(&b)? {
                target_support = target_support.max(depth(&t.tower, w, k - 1));
            }
        }
    }
    let start = (cert.p0 as i64)
        .max(cand_support + 1)
        .max(target_support + 1) as i32;
    let window = (start, start + extra);
    verify(env, z, &cert, window.0..=window.1)?;

    let mut candidate_checks = Vec::new();
    for r in window.0..=window.1 {
        let g = lateral_gen(k, cert.witness, r);
        let direct = tower.act_vec(&g, v)?;
        let mut cor = TVec::new();
        let Gen::Loop(lg) = &g else { unreachable!() };
        let a = LoopElement::gen(k, Gen::Loop(lg.clone()));
        for (zi, wi) in &parts {
            let comm = env.ad(&a, zi)?;
            for (&w, cw) in wi {
                let lower = tower.key(w);
                for (m, c) in comm.terms() {
                    tv_add(
                        &mut cor,
                        tower.intern(Key(lower.0.clone()).raise(m.clone())),
                        c * cw,
                    );
                }
            }
        }
        let direct_c = pbw_decomposition(tower, &direct)?;
        let cor_c = pbw_decomposition(tower, &cor)?;
        candidate_checks.push(CandidateCheck {
            r,
            nonzero: !direct_c.is_empty(),
            matches_corollary: direct_c == cor_c,
            terms: direct.len(),
        });
    }

    let mut target_checks = Vec::new();
    for t in targets {
        let mut count = 0;
        let mut max_depth = 0;
        let mut annihilated = true;
        for b in degree0_blocks(t) {
            for w in t.basis(&b)? {
                count += 1;
                max_depth = max_depth.max(depth(&t.tower, w, k - 1));
                for r in window.0..=window.1 {
                    let img = t.act(&lateral_gen(k, cert.witness, r), &super::tv_single(w))?;
                    if !img.is_empty() {
                        annihilated = false;
                    }
                }
            }
        }
        target_checks.push(TargetCheck {
            mu: t.tower.lambda.0.clone(),
            shift: t.shift.clone(),
            degree0_vectors: count,
            max_depth,
            annihilated,
        });
    }

    let ok = candidate_checks
        .iter()
        .all(|c| c.nonzero && c.matches_corollary)
        && target_checks
            .iter()
            .all(|t| t.annihilated && t.degree0_vectors > 0);
    Ok(DistinguishReport {
        candidate: vector_json(tower, v),
        certificate: cert.to_json(env),
        window,
        candidate_checks,
        targets: target_checks,
        verdict: if ok { "not isomorphic" } else { "inconclusive" }.to_string(),
    })
}

fn degree0_blocks(view: &ModuleView) -> Vec<BlockKey> {
    view.selection()
        .iter()
        .filter(|b| b.degrees[view.level - 1] == 0)
        .cloned()
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ProperSearchReport {
    pub blocks_scanned: usize,
    pub truncated_radical_dim: usize,
    pub surviving: usize,
    pub witness: Option<Value>,
}

/// Looks for a vector of a proper graded submodule of `Ind^k_{k−1}` among
/// truncated radical vectors of `small` that stay orthogonal to the
/// enlarged truncation `large`.
pub fn proper_submodule_search(
    small: &Tower,
    large: &Tower,
    blocks: &[BlockKey],
) -> Result<(ProperSearchReport, Option<TVec>)> {
    let mut rep = ProperSearchReport {
        blocks_scanned: 0,
        truncated_radical_dim: 0,
        surviving: 0,
        witness: None,
    };
    let mut found = None;
    for b in blocks {
        rep.blocks_scanned += 1;
        let rads = radical_vectors(small, b)?;
        rep.truncated_radical_dim += rads.len();
        for r in rads {
            if radical_survives(small, &r, large)? {
                rep.surviving += 1;
                if found.is_none() {
                    let r = normalized(&r);
                    rep.witness = Some(
                        json!({"block": b.degrees, "weight": b.weight.0, "vector": vector_json(small, &r)}),
                    );
                    found = Some(r);
                }
            }
        }
    }
    Ok((rep, found))
}

/// `c·(z ⊗ ω)` for a single PBW monomial over a base key.
pub fn pure_tensor(tower: &Tower, z: &Monomial, base: u32, c: Q) -> TVec {
    let mut v = TVec::new();
    tv_add(&mut v, tower.intern(tower.key(base).raise(z.clone())), c);
    v
}
