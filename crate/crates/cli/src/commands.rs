use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use loopalg::commutator_checker::corpus::{self, CorpusSpec};
use loopalg::commutator_checker::{analyze, verify};
use loopalg::enveloping::{Enveloping, PbwSpan};
use loopalg::grothendieck::{stabilize, PMatrix, PMatrixJson};
use loopalg::loop_algebra::{AlgebraConfig, LoopAlgebra, LoopGen};
use loopalg::modules::*;
use loopalg::rational::Q;
use loopalg::root_system::{build_root_system, parse_type, RootSystemData, Weight};
use loopalg::sugawara::{sample_vectors, verify_grid, SugawaraContext};

use crate::report::{Case, RunReport};

pub const DEFAULT_SEED: u64 = 20240611;

fn root(alg: &str) -> Result<Arc<RootSystemData>> {
    let (s, n) = parse_type(alg)?;
    Ok(Arc::new(build_root_system(s, n)?))
}

/// Inline JSON, or `@path` to read it from a file.
fn json_arg(s: &str) -> Result<Value> {
    let text = match s.strip_prefix('@') {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {p}"))?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).context("malformed JSON")
}

fn read_json(p: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", p.display()))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

/// Level 1 has no lateral variables; higher levels share `(depth, lateral)`.
fn build_tower(
    alg: &str,
    k: usize,
    p: i64,
    lambda: &[i64],
    depth: u32,
    lateral: u32,
) -> Result<Arc<Tower>> {
    let r = root(alg)?;
    if lambda.len() != r.rank {
        bail!(
            "weight {lambda:?} has {} coordinates, {alg} has rank {}",
            lambda.len(),
            r.rank
        );
    }
    let cfg = AlgebraConfig::new(r, k, p)?;
    let boxes: Vec<TruncationBox> = (1..=k)
        .map(|i| TruncationBox::new(depth, if i == 1 { 0 } else { lateral }))
        .collect();
    Ok(Arc::new(Tower::new(cfg, Weight(lambda.to_vec()), &boxes)?))
}

fn near_blocks(t: &Tower) -> Result<Vec<BlockKey>> {
    let k = t.top_level();
    Ok(t.blocks(k)?
        .into_iter()
        .filter(|b| k < 2 || b.degrees[k - 2].abs() <= 1)
        .collect())
}

#[derive(Args, Debug, Serialize)]
pub struct RootSystemArgs {
    #[arg(long)]
    pub alg: String,
}

pub fn root_system(a: &RootSystemArgs) -> Result<RunReport> {
    let r = root(&a.alg)?;
    let data = to_value(&r.to_json());
    Ok(RunReport::new(
        "root-system",
        to_value(a),
        vec![Case::new(a.alg.clone(), true, data)],
    ))
}

#[derive(Args, Debug, Serialize)]
pub struct BracketArgs {
    #[arg(long)]
    pub alg: String,
    #[arg(long)]
    pub k: usize,
    /// Element JSON, or @file.
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
}

pub fn bracket(a: &BracketArgs) -> Result<RunReport> {
    let alg = LoopAlgebra::new(root(&a.alg)?, a.k);
    let x = alg.element_from_json(&json_arg(&a.a)?)?;
    let y = alg.element_from_json(&json_arg(&a.b)?)?;
    let xy = alg.bracket(&x, &y)?;
    let mut sum = alg.bracket(&y, &x)?;
    sum.add(&xy);
    let data = json!({"bracket": alg.element_to_json(&xy), "antisymmetric": sum.is_zero()});
    Ok(RunReport::new(
        "bracket",
        to_value(a),
        vec![Case::new("bracket", sum.is_zero(), data)],
    ))
}

#[derive(Args, Debug, Serialize)]
pub struct CheckCommutatorArgs {
    /// Corpus file as written by the corpus generator.
    #[arg(long, conflicts_with_all = ["element", "random"])]
    pub corpus: Option<PathBuf>,
    /// A single element of U(ĝ_k⁻) as JSON, or @file.
    #[arg(long, requires_all = ["alg", "k"])]
    pub element: Option<String>,
    /// Draw this many random elements from --seed.
    #[arg(long, requires_all = ["alg", "k"])]
    pub random: Option<usize>,
    #[arg(long)]
    pub alg: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Checks r ∈ [p₀, p₀ + extra].
    #[arg(long, default_value_t = 5)]
    pub extra: i32,
}

pub fn check_commutator(a: &CheckCommutatorArgs, seed: u64) -> Result<RunReport> {
    let mut config = to_value(a);
    let cases = if let Some(path) = &a.corpus {
        corpus_cases(&read_json(path)?, a.extra)?
    } else if let Some(el) = &a.element {
        let (alg, k) = (
            a.alg.as_deref().unwrap_or_default(),
            a.k.unwrap_or_default(),
        );
        let u = Enveloping::new(LoopAlgebra::new(root(alg)?, k), PbwSpan::LoopMinus);
        let z = u.from_json(&json_arg(el)?)?;
        let cert = analyze(&u, &z)?;
        let rep = verify(&u, &z, &cert, cert.p0..=cert.p0 + a.extra)?;
        let data = json!({"element": u.to_json(&z), "certificate": cert.to_json(&u), "verification": rep.to_json()});
        vec![Case::new("element", rep.pass(), data)]
    } else if let Some(n) = a.random {
        config["seed"] = json!(seed);
        let spec = CorpusSpec {
            algebras: vec![a.alg.clone().unwrap_or_default()],
            levels: vec![a.k.unwrap_or_default()],
            count: n,
            seed,
            ..CorpusSpec::default()
        };
        corpus_cases(&corpus::generate(&spec)?, a.extra)?
    } else {
        bail!("one of --corpus, --element, --random is required");
    };
    Ok(RunReport::new("check-commutator", config, cases))
}

fn corpus_cases(c: &Value, extra: i32) -> Result<Vec<Case>> {
    Ok(corpus::check(c, extra)?
        .into_iter()
        .map(|r| Case::new(format!("entry {}", r.index), r.pass, r.to_json()))
        .collect())
}

#[derive(Args, Debug, Serialize)]
pub struct ModuleArgs {
    #[arg(long)]
    pub alg: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub p: i64,
    /// Highest weight in fundamental coordinates, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Vec<i64>,
    /// Depth bound N of the truncation box.
    #[arg(long, default_value_t = 1)]
    pub depth: u32,
    /// Lateral exponent bound B of the truncation box.
    #[arg(long, default_value_t = 1)]
    pub lateral: u32,
    /// Keys per block used for the contravariance and central checks.
    #[arg(long, default_value_t = 2)]
    pub sample: usize,
}

pub fn build_module(a: &ModuleArgs) -> Result<RunReport> {
    let t = build_tower(&a.alg, a.k, a.p, &a.lambda, a.depth, a.lateral)?;
    let k = a.k;
    let view = ModuleView::new(t.clone(), k, ViewKind::Quotient, vec![0; k], t.blocks(k)?)?;
    let mut cases = vec![Case::new("blocks", true, view.dump()?)];
    let mut keys = Vec::new();
    for b in near_blocks(&t)? {
        keys.extend(t.quot_block(&b)?.basis.iter().take(a.sample));
    }
    let gens = generator_window(t.root(), k, a.lateral as i32, &[-1, 0, 1]);
    cases.push(falsifiable(
        "contravariance",
        contravariance_check(&t, k, &keys, &gens),
    )?);
    cases.push(falsifiable(
        "central scalars",
        central_scalar_check(&t, k, &keys),
    )?);
    Ok(RunReport::new("build-module", to_value(a), cases))
}

/// A falsified identity is a failed case; any other error aborts.
fn falsifiable(name: &str, r: loopalg::Result<usize>) -> Result<Case> {
    match r {
        Ok(n) => Ok(Case::new(name, true, json!({"identities": n}))),
        Err(e @ loopalg::Error::Falsified(_)) => {
            Ok(Case::new(name, false, json!({"error": e.to_string()})))
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Args, Debug, Serialize)]
pub struct CommutantArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    /// Direct sum with a copy shifted far in d_k, expecting dimension 2.
    #[arg(long)]
    pub doubled: bool,
}

pub fn commutant(a: &CommutantArgs) -> Result<RunReport> {
    let m = &a.module;
    let t = build_tower(&m.alg, m.k, m.p, &m.lambda, m.depth, m.lateral)?;
    let sel = near_blocks(&t)?;
    let view = ModuleView::new(
        t.clone(),
        m.k,
        ViewKind::Quotient,
        vec![0; m.k],
        sel.clone(),
    )?;
    let gens = generator_window(t.root(), m.k, m.lateral as i32, &[-1, 0, 1]);
    let (rep, expected) = if a.doubled {
        let mut shift = vec![0; m.k];
        shift[m.k - 1] = -7;
        let far = ModuleView::new(t.clone(), m.k, ViewKind::Quotient, shift, sel)?;
        (
            commutant_dimension(
                &DirectSum {
                    left: &view,
                    right: &far,
                },
                &gens,
            )?,
            2,
        )
    } else {
        (commutant_dimension(&view, &gens)?, 1)
    };
    let mut data = to_value(&rep);
    data["expected"] = json!(expected);
    let case = Case::new("commutant", rep.dimension == expected, data);
    Ok(RunReport::new("commutant", to_value(a), vec![case]))
}

#[derive(Args, Debug, Serialize)]
pub struct DistinguishArgs {
    #[arg(long)]
    pub alg: String,
    #[arg(long)]
    pub p: i64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Vec<i64>,
    /// Target highest weights; repeat the flag for several.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1, action = clap::ArgAction::Append)]
    pub mu: Vec<i64>,
    /// Shifts (m, n) range over [−grid, grid]².
    #[arg(long, default_value_t = 2)]
    pub grid: i64,
    /// Candidate z ∈ U(ĝ_2⁻) as JSON or @file; the vector is z ⊗ v₀.
    /// Defaults to f ⊗ t₂⁻¹ for the first simple root.
    #[arg(long)]
    pub candidate: Option<String>,
    /// Window length beyond the starting r.
    #[arg(long, default_value_t = 5)]
    pub extra: i32,
    /// Also search for a proper-submodule vector in boxes of this size,
    /// checked against boxes one larger.
    #[arg(long)]
    pub search: Option<u32>,
}

pub fn distinguish(a: &DistinguishArgs) -> Result<RunReport> {
    let r = root(&a.alg)?;
    let rank = r.rank;
    if a.mu.is_empty() || !a.mu.len().is_multiple_of(rank) {
        bail!("--mu needs weights with {rank} coordinates");
    }
    let t = build_tower(&a.alg, 2, a.p, &a.lambda, 1, 1)?;
    let v0 = t.vacuum(1);
    let v = match &a.candidate {
        Some(c) => {
            let z = t.enveloping(2).from_json(&json_arg(c)?)?;
            let mut v = TVec::new();
            for (m, c) in z.terms() {
                for (id, x) in pure_tensor(&t, m, v0, c.clone()) {
                    tv_add(&mut v, id, x);
                }
            }
            v
        }
        None => {
            let f = loopalg::enveloping::Monomial::single(LoopGen::new(r.f(0), &[0, -1]));
            pure_tensor(&t, &f, v0, Q::from_integer(1.into()))
        }
    };
    let mut targets = Vec::new();
    for mu in a.mu.chunks(rank) {
        let tt = build_tower(&a.alg, 2, a.p, mu, 1, 1)?;
        let sel: Vec<BlockKey> = tt
            .blocks(2)?
            .into_iter()
            .filter(|b| b.degrees[1] == 0)
            .collect();
        for m in -a.grid..=a.grid {
            for n in -a.grid..=a.grid {
                targets.push(ModuleView::new(
                    tt.clone(),
                    2,
                    ViewKind::Quotient,
                    vec![m, n],
                    sel.clone(),
                )?);
            }
        }
    }
    let rep = distinguishability_check(&t, &v, &targets, a.extra)?;
    let mut cases = vec![Case::new(
        "distinguishability",
        rep.not_isomorphic(),
        to_value(&rep),
    )];
    if let Some(s) = a.search {
        let small = build_tower(&a.alg, 2, a.p, &a.lambda, s, s)?;
        let large = build_tower(&a.alg, 2, a.p, &a.lambda, s + 1, s + 1)?;
        let blocks: Vec<BlockKey> = small
            .blocks(2)?
            .into_iter()
            .filter(|b| b.degrees[1] < 0 && b.degrees[0].abs() <= 1)
            .collect();
        let (search, found) = proper_submodule_search(&small, &large, &blocks)?;
        let mut data = to_value(&search);
        if let Some(w) = &found {
            let d = distinguishability_check(&small, w, &targets, a.extra)?;
            data["distinguishability"] = json!(d.verdict);
        }
        cases.push(Case::new("proper submodule vector", found.is_some(), data));
    }
    Ok(RunReport::new("distinguish", to_value(a), cases))
}

#[derive(Args, Debug, Serialize)]
pub struct SugawaraArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    /// Exponents n range over [−nmax, nmax]^k minus the origin.
    #[arg(long, default_value_t = 1)]
    pub nmax: i32,
    /// Test vectors reach this d_k-depth.
    #[arg(long, default_value_t = 2)]
    pub vdepth: i64,
}

pub fn sugawara_verify(a: &SugawaraArgs) -> Result<RunReport> {
    let m = &a.module;
    let t = build_tower(&m.alg, m.k, m.p, &m.lambda, m.depth, m.lateral)?;
    let ctx = SugawaraContext::new(&t);
    let xs: Vec<_> = t.root().basis().collect();
    let mut ns: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..m.k {
        ns = ns
            .into_iter()
            .flat_map(|n| (-a.nmax..=a.nmax).map(move |c| [n.clone(), vec![c]].concat()))
            .collect();
    }
    ns.retain(|n| n.iter().any(|&c| c != 0));
    let vs = sample_vectors(&t, a.vdepth, m.sample)?;
    let cases = verify_grid(&ctx, &xs, &ns, &vs)?
        .into_iter()
        .map(|c| {
            Case::new(
                format!("{} {:?} {}", c.x, c.n, c.vector),
                c.pass,
                to_value(&c),
            )
        })
        .collect();
    Ok(RunReport::new("sugawara-verify", to_value(a), cases))
}

#[derive(Args, Debug, Serialize)]
pub struct EkArgs {
    #[arg(long)]
    pub alg: String,
    #[arg(long)]
    pub p: i64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Vec<i64>,
    /// P-matrix JSON file; the identity matrix if omitted.
    #[arg(long)]
    pub pmatrix: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub kmax: usize,
}

pub fn ek(a: &EkArgs) -> Result<RunReport> {
    let r = root(&a.alg)?;
    let pm = match &a.pmatrix {
        Some(path) => {
            let raw: PMatrixJson =
                serde_json::from_value(read_json(path)?).context("malformed P-matrix")?;
            if raw.alg != a.alg || raw.p != a.p {
                bail!(
                    "P-matrix is for {} p = {}, not {} p = {}",
                    raw.alg,
                    raw.p,
                    a.alg,
                    a.p
                );
            }
            PMatrix::from_json(raw, r.rank)?
        }
        None => PMatrix::identity(&a.alg, r.rank, a.p),
    };
    let st = stabilize(&Weight(a.lambda.clone()), &pm, a.kmax)?;
    let case = Case::new("stabilization", st.k_stable.is_some(), st.to_json());
    Ok(RunReport::new("ek", to_value(a), vec![case]))
}
