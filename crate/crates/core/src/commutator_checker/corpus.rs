//! Seeded random corpora of non-constant `Z ∈ U(ĝ_k⁻)` and batch checking.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::sync::Arc;

use super::{analyze, verify, within_box};
use crate::enveloping::{Enveloping, PbwElement, PbwSpan};
use crate::error::{Error, Result};
use crate::loop_algebra::{Gen, LoopAlgebra, LoopElement, LoopGen};
use crate::rational::{self, Q};
use crate::root_system::{build_root_system, parse_type, ChevalleyElement};

#[derive(Clone, Debug)]
pub struct CorpusSpec {
    pub algebras: Vec<String>,
    pub levels: Vec<usize>,
    pub count: usize,
    pub max_degree: u32,
    pub bound: i32,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            algebras: vec!["A1".into(), "A2".into()],
            levels: vec![2, 3],
            count: 240,
            max_degree: 3,
            bound: 3,
            seed: 20240611,
        }
    }
}

pub fn envelope(alg: &str, k: usize) -> Result<Enveloping> {
    let (s, n) = parse_type(alg)?;
    let root = Arc::new(build_root_system(s, n)?);
    Ok(Enveloping::new(
        LoopAlgebra::new(root, k),
        PbwSpan::LoopMinus,
    ))
}

fn random_gen(u: &Enveloping, rng: &mut ChaCha8Rng, bound: i32, cartan_only: bool) -> LoopGen {
    let root = &u.alg.root;
    let x = if cartan_only {
        root.cartan(rng.gen_range(0..root.rank))
    } else {
        ChevalleyElement(rng.gen_range(0..root.dim() as u16))
    };
    let mut n: Vec<i32> = (0..u.alg.k - 1)
        .map(|_| rng.gen_range(-bound..=bound))
        .collect();
    n.push(rng.gen_range(-bound..=-1));
    LoopGen::new(x, &n)
}

/// One random element: a sum of up to four normal-ordered words. About a
/// third of the draws use Cartan-type generators only, so both cases of the
/// certificate occur.
pub fn random_element(
    u: &Enveloping,
    rng: &mut ChaCha8Rng,
    max_degree: u32,
    bound: i32,
) -> Result<PbwElement> {
    loop {
        let cartan_only = rng.gen_range(0..3) == 0;
        let mut z = PbwElement::zero();
        for _ in 0..rng.gen_range(1..=4) {
            let len = rng.gen_range(1..=max_degree);
            let word: Vec<LoopElement> = (0..len)
                .map(|_| {
                    LoopElement::gen(u.alg.k, Gen::Loop(random_gen(u, rng, bound, cartan_only)))
                })
                .collect();
            let c = loop {
                let c: i64 = rng.gen_range(-3..=3);
                if c != 0 {
                    break c;
                }
            };
            z.add_scaled(&u.normal_order(&word)?, &Q::from_integer(c.into()));
        }
        if !z.is_constant() && within_box(&z, bound, max_degree) {
            return Ok(z);
        }
    }
}

/// Deterministic corpus; entries cycle through the algebra/level grid.
pub fn generate(spec: &CorpusSpec) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut envs = Vec::new();
    for a in &spec.algebras {
        for &k in &spec.levels {
            envs.push((a.clone(), envelope(a, k)?));
        }
    }
    if envs.is_empty() {
        return Err(Error::Invalid("empty corpus grid".into()));
    }
    let mut entries = Vec::new();
    for i in 0..spec.count {
        let (a, u) = &envs[i % envs.len()];
        let z = random_element(u, &mut rng, spec.max_degree, spec.bound)?;
        entries.push(json!({"alg": a, "k": u.alg.k, "z": u.to_json(&z)}));
    }
    Ok(json!({
        "seed": spec.seed,
        "max_degree": spec.max_degree,
        "bound": spec.bound,
        "entries": entries,
    }))
}

#[derive(Clone, Debug)]
pub struct EntryResult {
    pub index: usize,
    pub alg: String,
    pub k: usize,
    pub case: Option<super::Case>,
    pub p0: Option<i32>,
    pub predicted: Option<Q>,
    pub pass: bool,
    pub error: Option<String>,
}

impl EntryResult {
    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index,
            "alg": self.alg,
            "k": self.k,
            "case": self.case.map(|c| match c { super::Case::I => "I", super::Case::II => "II" }),
            "p0": self.p0,
            "predicted": self.predicted.as_ref().map(rational::to_string),
            "pass": self.pass,
            "error": self.error,
        })
    }
}

fn check_entry(index: usize, e: &Value, extra: i32) -> Result<EntryResult> {
    let alg = e
        .get("alg")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("entry without alg".into()))?;
    let k = e
        .get("k")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("entry without k".into()))? as usize;
    let u = envelope(alg, k)?;
    let z = u.from_json(
        e.get("z")
            .ok_or_else(|| Error::Parse("entry without z".into()))?,
    )?;
    let mut res = EntryResult {
        index,
        alg: alg.into(),
        k,
        case: None,
        p0: None,
        predicted: None,
        pass: false,
        error: None,
    };
    match analyze(&u, &z).and_then(|c| verify(&u, &z, &c, c.p0..=c.p0 + extra).map(|r| (c, r))) {
        Ok((c, r)) => {
            res.case = Some(c.case);
            res.p0 = Some(c.p0);
            res.pass = r.pass();
            res.predicted = Some(r.predicted);
        }
        Err(e @ (Error::Parse(_) | Error::Unsupported(_))) => return Err(e),
        Err(e) => res.error = Some(e.to_string()),
    }
    Ok(res)
}

/// Analyzes and verifies every entry on `[p₀, p₀ + extra]`, in parallel.
/// Parse errors abort; analysis failures are recorded per entry.
pub fn check(corpus: &Value, extra: i32) -> Result<Vec<EntryResult>> {
    let entries = corpus
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("corpus without entries".into()))?;
    entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| check_entry(i, e, extra))
        .collect()
}
