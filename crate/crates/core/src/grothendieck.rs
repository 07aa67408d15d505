//! The `E^k_λ` recursion in the Grothendieck group of rational
//! representations, driven by externally supplied `P` matrices.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::root_system::{RootSystemData, Weight};

fn check_dominant(w: &Weight) -> Result<()> {
    if w.is_dominant() {
        Ok(())
    } else {
        Err(Error::NotDominant(w.0.clone()))
    }
}

pub fn is_restricted(lambda: &Weight, p: i64) -> Result<bool> {
    check_dominant(lambda)?;
    Ok(lambda.0.iter().all(|&c| c < p))
}

/// Digits `λ_r` with `λ = Σ p^r λ_r`; `[0]` for `λ = 0`.
pub fn p_adic_expansion(lambda: &Weight, p: i64) -> Result<Vec<Weight>> {
    check_dominant(lambda)?;
    if p < 2 {
        return Err(Error::Invalid(format!("p = {p} must be at least 2")));
    }
    let mut rest = lambda.0.clone();
    let mut digits = Vec::new();
    loop {
        digits.push(Weight(rest.iter().map(|c| c % p).collect()));
        rest.iter_mut().for_each(|c| *c /= p);
        if rest.iter().all(|&c| c == 0) {
            return Ok(digits);
        }
    }
}

/// Finitely supported `ℤ`-combination of weights with no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightCombination(pub BTreeMap<Weight, i64>);

/// Element of the Grothendieck group in a basis indexed by `X₊`.
pub type GrothendieckVector = WeightCombination;

/// A formal character.
pub type CharacterPolynomial = WeightCombination;

impl WeightCombination {
    pub fn single(w: Weight) -> Self {
        let mut m = BTreeMap::new();
        m.insert(w, 1);
        WeightCombination(m)
    }

    pub fn add_term(&mut self, w: Weight, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.0.entry(w.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, o: &WeightCombination, s: i64) {
        for (w, c) in &o.0 {
            self.add_term(w.clone(), c * s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, w: &Weight) -> i64 {
        self.0.get(w).copied().unwrap_or(0)
    }

    fn mul(&self, o: &WeightCombination) -> WeightCombination {
        let mut out = WeightCombination::default();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                out.add_term(a.add(b), x * y);
            }
        }
        out
    }

    /// Exact quotient by `d`, by long division in the lexicographic order.
    fn div_exact(&self, d: &WeightCombination) -> Result<WeightCombination> {
        let (lead, lc) = d.0.iter().next_back().ok_or(Error::ZeroElement)?;
        let mut rem = self.clone();
        let mut quo = WeightCombination::default();
        while let Some((top, c)) = rem.0.iter().next_back().map(|(w, c)| (w.clone(), *c)) {
            if c % lc != 0 {
                return Err(Error::Invalid("inexact character division".into()));
            }
            let t = WeightCombination::single(top.sub(lead));
            let s = c / lc;
            quo.add_term(top.sub(lead), s);
            rem.add_scaled(&t.mul(d), -s);
        }
        Ok(quo)
    }

    /// Value at the identity of the torus.
    pub fn dimension(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.0
                .iter()
                .map(|(w, c)| serde_json::json!({"weight": w.0, "coeff": c}))
                .collect(),
        )
    }
}

/// Character of `V(λ)` as `Σ_w ε(w) e^{w(λ+ρ)} / Σ_w ε(w) e^{wρ}`.
pub fn weyl_character(root: &RootSystemData, lambda: &Weight) -> Result<CharacterPolynomial> {
    check_dominant(lambda)?;
    let lr = lambda.add(&root.rho);
    let mut num = WeightCombination::default();
    let mut den = WeightCombination::default();
    for (word, sign) in root.weyl_group() {
        num.add_term(root.apply_word(&word, &lr), sign);
        den.add_term(root.apply_word(&word, &root.rho), sign);
    }
    num.div_exact(&den)
}

/// `ℤ`-linear extension of the Weyl character over a `E⁰` combination.
pub fn character_of(root: &RootSystemData, v: &GrothendieckVector) -> Result<CharacterPolynomial> {
    let mut out = WeightCombination::default();
    for (w, c) in &v.0 {
        out.add_scaled(&weyl_character(root, w)?, *c);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PEntry {
    pub mu: Vec<i64>,
    pub lambda: Vec<i64>,
    pub value: i64,
}

/// Columns `λ` with `λ_i ≤ max_i` list every nonzero entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompleteOn {
    pub max: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PMatrixJson {
    pub alg: String,
    pub p: i64,
    #[serde(default)]
    pub identity: bool,
    #[serde(default)]
    pub entries: Vec<PEntry>,
    #[serde(default)]
    pub complete_on: Option<CompleteOn>,
}

/// Sparse integer matrix `P_{μ,λ}`, indexed by dominant `λ`.
#[derive(Clone, Debug)]
pub struct PMatrix {
    pub alg: String,
    pub p: i64,
    pub rank: usize,
    identity: bool,
    columns: BTreeMap<Weight, BTreeMap<Weight, i64>>,
    complete_on: Option<Vec<i64>>,
}

impl PMatrix {
    pub fn identity(alg: &str, rank: usize, p: i64) -> Self {
        PMatrix {
            alg: alg.into(),
            p,
            rank,
            identity: true,
            columns: BTreeMap::new(),
            complete_on: None,
        }
    }

    pub fn from_json(v: PMatrixJson, rank: usize) -> Result<Self> {
        let mut columns: BTreeMap<Weight, BTreeMap<Weight, i64>> = BTreeMap::new();
        for e in v.entries {
            if e.mu.len() != rank || e.lambda.len() != rank {
                return Err(Error::Parse(format!(
                    "entry {:?},{:?} has the wrong rank",
                    e.mu, e.lambda
                )));
            }
            let lam = Weight(e.lambda);
            check_dominant(&lam)?;
            if e.value != 0 {
                columns
                    .entry(lam)
                    .or_default()
                    .insert(Weight(e.mu), e.value);
            }
        }
        let complete_on = v.complete_on.map(|c| c.max);
        if complete_on.as_ref().is_some_and(|m| m.len() != rank) {
            return Err(Error::Parse("complete_on has the wrong rank".into()));
        }
        let m = PMatrix {
            alg: v.alg,
            p: v.p,
            rank,
            identity: v.identity,
            columns,
            complete_on,
        };
        for w in m.validate() {
            log::warn!("{w}");
        }
        Ok(m)
    }

    pub fn to_json(&self) -> PMatrixJson {
        let entries = self
            .columns
            .iter()
            .flat_map(|(l, col)| {
                col.iter().map(|(m, v)| PEntry {
                    mu: m.0.clone(),
                    lambda: l.0.clone(),
                    value: *v,
                })
            })
            .collect();
        PMatrixJson {
            alg: self.alg.clone(),
            p: self.p,
            identity: self.identity,
            entries,
            complete_on: self.complete_on.clone().map(|max| CompleteOn { max }),
        }
    }

    fn column_complete(&self, lambda: &Weight) -> bool {
        self.complete_on
            .as_ref()
            .is_some_and(|m| lambda.0.iter().zip(m).all(|(a, b)| a <= b))
    }

    /// Nonzero entries of column `λ`.
    pub fn column(&self, lambda: &Weight) -> Result<Vec<(Weight, i64)>> {
        if self.identity {
            return Ok(vec![(lambda.clone(), 1)]);
        }
        if !self.column_complete(lambda) {
            return Err(Error::DataGap {
                mu: lambda.0.clone(),
                lambda: lambda.0.clone(),
            });
        }
        Ok(self
            .columns
            .get(lambda)
            .map(|c| c.iter().map(|(m, v)| (m.clone(), *v)).collect())
            .unwrap_or_default())
    }

    pub fn get(&self, mu: &Weight, lambda: &Weight) -> Result<i64> {
        if self.identity {
            return Ok((mu == lambda) as i64);
        }
        if let Some(v) = self.columns.get(lambda).and_then(|c| c.get(mu)) {
            return Ok(*v);
        }
        if self.column_complete(lambda) {
            Ok(0)
        } else {
            Err(Error::DataGap {
                mu: mu.0.clone(),
                lambda: lambda.0.clone(),
            })
        }
    }

    /// Warnings for listed columns that are not unitriangular.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (l, col) in &self.columns {
            if col.get(l) != Some(&1) {
                out.push(format!("P[{:?},{:?}] is not 1", l.0, l.0));
            }
        }
        out
    }
}

/// `Σ_{r<k−1} p^r λ_r` for the `k`-th step.
pub fn prefix(lambda: &Weight, p: i64, k: usize) -> Result<Weight> {
    let digits = p_adic_expansion(lambda, p)?;
    let mut s = Weight::zero(lambda.0.len());
    let mut pr = 1;
    for d in digits.iter().take(k.saturating_sub(1)) {
        s = s.add(&d.scale(pr));
        pr *= p;
    }
    Ok(s)
}

/// `E^k_λ = Σ_{μ−σ ∈ p^{k−1}X} P_{(μ−σ)/p^{k−1},(λ−σ)/p^{k−1}} E^{k−1}_μ`,
/// with `E^{k−1}_μ` supplied by `prev`.
pub fn ek_step(
    k: usize,
    lambda: &Weight,
    p_matrix: &PMatrix,
    prev: &mut dyn FnMut(&Weight) -> Result<GrothendieckVector>,
) -> Result<GrothendieckVector> {
    check_dominant(lambda)?;
    if k == 0 {
        return Err(Error::Invalid("ek_step needs k ≥ 1".into()));
    }
    let p = p_matrix.p;
    let sigma = prefix(lambda, p, k)?;
    let scale = p
        .checked_pow((k - 1) as u32)
        .ok_or_else(|| Error::Invalid("p^(k−1) overflows".into()))?;
    let reduced = Weight(lambda.sub(&sigma).0.iter().map(|c| c / scale).collect());
    let mut out = GrothendieckVector::default();
    for (nu, c) in p_matrix.column(&reduced)? {
        let mu = sigma.add(&nu.scale(scale));
        if !mu.is_dominant() {
            continue;
        }
        out.add_scaled(&prev(&mu)?, c);
    }
    Ok(out)
}

/// `E^k_λ` expanded in the `E⁰` basis, memoized over `(k, λ)`.
pub struct EkExpander<'a> {
    pub p_matrix: &'a PMatrix,
    memo: BTreeMap<(usize, Weight), GrothendieckVector>,
}

impl<'a> EkExpander<'a> {
    pub fn new(p_matrix: &'a PMatrix) -> Self {
        EkExpander {
            p_matrix,
            memo: BTreeMap::new(),
        }
    }

    pub fn expand(&mut self, k: usize, lambda: &Weight) -> Result<GrothendieckVector> {
        check_dominant(lambda)?;
        if k == 0 {
            return Ok(GrothendieckVector::single(lambda.clone()));
        }
        if let Some(v) = self.memo.get(&(k, lambda.clone())) {
            return Ok(v.clone());
        }
        let pm = self.p_matrix;
        let v = ek_step(k, lambda, pm, &mut |mu| self.expand(k - 1, mu))?;
        self.memo.insert((k, lambda.clone()), v.clone());
        Ok(v)
    }

    /// Coefficients of the `E^{k−1}_μ` in `E^k_λ`.
    pub fn transition(&mut self, k: usize, lambda: &Weight) -> Result<GrothendieckVector> {
        let pm = self.p_matrix;
        ek_step(k, lambda, pm, &mut |mu| {
            Ok(GrothendieckVector::single(mu.clone()))
        })
    }
}

#[derive(Clone, Debug)]
pub struct Stabilization {
    pub lambda: Vec<i64>,
    /// Smallest `k ≥ 1` with `E^k_λ = E^{k−1}_λ`.
    pub k_stable: Option<usize>,
    pub value: GrothendieckVector,
    pub history: Vec<GrothendieckVector>,
}

impl Stabilization {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lambda": self.lambda,
            "k_stable": self.k_stable,
            "value": self.value.to_json(),
            "history": self.history.iter().map(WeightCombination::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Iterates the recursion until two consecutive terms agree.
pub fn stabilize(lambda: &Weight, p_matrix: &PMatrix, k_max: usize) -> Result<Stabilization> {
    let mut ex = EkExpander::new(p_matrix);
    let mut history = vec![ex.expand(0, lambda)?];
    for k in 1..=k_max {
        let next = ex.expand(k, lambda)?;
        let same = history.last() == Some(&next);
        history.push(next.clone());
        if same {
            return Ok(Stabilization {
                lambda: lambda.0.clone(),
                k_stable: Some(k),
                value: next,
                history,
            });
        }
    }
    let value = history.last().cloned().unwrap_or_default();
    Ok(Stabilization {
        lambda: lambda.0.clone(),
        k_stable: None,
        value,
        history,
    })
}

#[cfg(test)]
mod tests;
