//! Elements and bracket of the multi-loop algebra `g ⊗ ℂ[t_1^±,…,t_k^±]`
//! with central elements `c_i` and derivations `d_i`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::{self, q, Q};
use crate::root_system::{BasisKind, ChevalleyElement, RootSystemData};

/// Exponent vector of `t_1 … t_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(pub SmallVec<[i32; 4]>);

impl MultiIndex {
    pub fn new(v: &[i32]) -> Self {
        MultiIndex(SmallVec::from_slice(v))
    }

    pub fn zero(k: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, k))
    }

    /// `δ_i` (1-based).
    pub fn unit(k: usize, i: usize) -> Self {
        let mut m = Self::zero(k);
        m.0[i - 1] = 1;
        m
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: i32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * s).collect())
    }

    /// Last coordinate `n_k`.
    pub fn last(&self) -> i32 {
        *self.0.last().expect("k >= 1")
    }

    /// `n' = n − n_k δ_k`.
    pub fn prime(&self) -> MultiIndex {
        let mut m = self.clone();
        if let Some(l) = m.0.last_mut() {
            *l = 0;
        }
        m
    }

    /// Drops the last coordinate.
    pub fn truncate_last(&self) -> MultiIndex {
        MultiIndex(self.0[..self.0.len() - 1].iter().copied().collect())
    }

    /// Appends a coordinate.
    pub fn extend(&self, v: i32) -> MultiIndex {
        let mut m = self.clone();
        m.0.push(v);
        m
    }

    pub fn with(&self, i: usize, v: i32) -> MultiIndex {
        let mut m = self.clone();
        m.0[i - 1] = v;
        m
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `x ⊗ t^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LoopGen {
    pub x: ChevalleyElement,
    pub n: MultiIndex,
}

impl LoopGen {
    pub fn new(x: ChevalleyElement, n: &[i32]) -> Self {
        LoopGen {
            x,
            n: MultiIndex::new(n),
        }
    }
}

/// Basis symbols of `ĝ_k`. `C` and `D` carry 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gen {
    Loop(LoopGen),
    C(u8),
    D(u8),
}

/// A finite ℚ-combination of basis symbols.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LoopElement {
    pub k: usize,
    terms: BTreeMap<Gen, Q>,
}

impl LoopElement {
    pub fn zero(k: usize) -> Self {
        LoopElement {
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn gen(k: usize, g: Gen) -> Self {
        Self::term(k, g, Q::one())
    }

    pub fn term(k: usize, g: Gen, c: Q) -> Self {
        let mut e = Self::zero(k);
        e.add_term(g, c);
        e
    }

    pub fn loop_gen(x: ChevalleyElement, n: &[i32]) -> Self {
        Self::gen(n.len(), Gen::Loop(LoopGen::new(x, n)))
    }

    pub fn c(k: usize, i: usize) -> Self {
        Self::gen(k, Gen::C(i as u8))
    }

    pub fn d(k: usize, i: usize) -> Self {
        Self::gen(k, Gen::D(i as u8))
    }

    pub fn add_term(&mut self, g: Gen, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(g.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add(&mut self, o: &LoopElement) {
        for (g, c) in &o.terms {
            self.add_term(g.clone(), c.clone());
        }
    }

    pub fn scaled(&self, s: &Q) -> LoopElement {
        let mut e = LoopElement::zero(self.k);
        for (g, c) in &self.terms {
            e.add_term(g.clone(), c * s);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Gen, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &Gen) -> Q {
        self.terms.get(g).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The part spanned by the central elements.
    pub fn central_part(&self) -> LoopElement {
        let mut e = LoopElement::zero(self.k);
        for (g, c) in &self.terms {
            if matches!(g, Gen::C(_)) {
                e.add_term(g.clone(), c.clone());
            }
        }
        e
    }
}

/// Which subalgebra a membership query refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subalgebra {
    /// `ĝ_k^+`: loop terms with `n_k ≥ 0`, plus all `c_i`, `d_i`.
    Plus,
    /// `ĝ_k^- = g ⊗ A_k^-`: loop terms with `n_k < 0` only.
    Minus,
    /// `g̃_k`: no derivations.
    Tilde,
    /// `ĝ_k^(k) = g̃_k ⊕ ℂ d_k`.
    HatK,
}

pub fn subalgebra_member(a: &LoopElement, which: Subalgebra) -> bool {
    let k = a.k;
    a.terms.keys().all(|g| match (which, g) {
        (Subalgebra::Minus, Gen::Loop(l)) => l.n.last() < 0,
        (Subalgebra::Minus, _) => false,
        (Subalgebra::Plus, Gen::Loop(l)) => l.n.last() >= 0,
        (Subalgebra::Plus, _) => true,
        (Subalgebra::Tilde, Gen::D(_)) => false,
        (Subalgebra::Tilde, _) => true,
        (Subalgebra::HatK, Gen::D(i)) => *i as usize == k,
        (Subalgebra::HatK, _) => true,
    })
}

/// Loop rank, level parameter and root data.
#[derive(Clone, Debug)]
pub struct AlgebraConfig {
    pub k: usize,
    pub p: i64,
    pub root: Arc<RootSystemData>,
}

impl AlgebraConfig {
    pub fn new(root: Arc<RootSystemData>, k: usize, p: i64) -> Result<Self> {
        if p < 2 {
            return Err(Error::Invalid(format!(
                "level parameter p = {p} must be at least 2"
            )));
        }
        if !is_prime(p) {
            log::warn!("p = {p} is not prime; continuing");
        }
        Ok(AlgebraConfig { k, p, root })
    }

    /// The scalar by which `c_i` acts: `−p^i − h∨`.
    pub fn level(&self, i: usize) -> Q {
        q(-self.p.pow(i as u32) - self.root.dual_coxeter)
    }

    pub fn algebra(&self) -> LoopAlgebra {
        LoopAlgebra::new(self.root.clone(), self.k)
    }
}

fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `ĝ_k` for a fixed root system and loop rank.
#[derive(Clone, Debug)]
pub struct LoopAlgebra {
    pub root: Arc<RootSystemData>,
    pub k: usize,
}

impl LoopAlgebra {
    pub fn new(root: Arc<RootSystemData>, k: usize) -> Self {
        LoopAlgebra { root, k }
    }

    /// Bracket of two loop basis symbols, appended into `out` with weight `s`.
    pub fn bracket_loop_into(&self, a: &LoopGen, b: &LoopGen, s: &Q, out: &mut LoopElement) {
        let n = a.n.add(&b.n);
        for &(z, c) in self.root.bracket_int(a.x, b.x) {
            out.add_term(Gen::Loop(LoopGen { x: z, n: n.clone() }), s * q(c));
        }
        if n.is_zero() {
            let f = self.root.form_q(a.x, b.x);
            if !f.is_zero() {
                for (i, &ni) in a.n.0.iter().enumerate() {
                    if ni != 0 {
                        out.add_term(Gen::C(i as u8 + 1), s * f * q(ni as i64));
                    }
                }
            }
        }
    }

    pub fn bracket_gen_into(&self, a: &Gen, b: &Gen, s: &Q, out: &mut LoopElement) {
        match (a, b) {
            (Gen::Loop(x), Gen::Loop(y)) => self.bracket_loop_into(x, y, s, out),
            (Gen::D(i), Gen::Loop(y)) => {
                let ni = y.n.0[*i as usize - 1];
                out.add_term(b.clone(), s * q(ni as i64));
            }
            (Gen::Loop(x), Gen::D(i)) => {
                let ni = x.n.0[*i as usize - 1];
                out.add_term(a.clone(), -(s * q(ni as i64)));
            }
            _ => {}
        }
    }

    pub fn bracket_gens(&self, a: &Gen, b: &Gen) -> LoopElement {
        let mut out = LoopElement::zero(self.k);
        self.bracket_gen_into(a, b, &Q::one(), &mut out);
        out
    }

    fn check(&self, a: &LoopElement) -> Result<()> {
        if a.k != self.k {
            return Err(Error::Mismatch(format!("loop rank {} vs {}", a.k, self.k)));
        }
        for g in a.terms.keys() {
            let ok = match g {
                Gen::Loop(l) => l.n.len() == self.k && (l.x.0 as usize) < self.root.dim(),
                Gen::C(i) | Gen::D(i) => (1..=self.k).contains(&(*i as usize)),
            };
            if !ok {
                return Err(Error::Mismatch(format!("symbol {g:?} not in this algebra")));
            }
        }
        Ok(())
    }

    pub fn bracket(&self, a: &LoopElement, b: &LoopElement) -> Result<LoopElement> {
        self.check(a)?;
        self.check(b)?;
        let mut out = LoopElement::zero(self.k);
        for (ga, ca) in &a.terms {
            for (gb, cb) in &b.terms {
                self.bracket_gen_into(ga, gb, &(ca * cb), &mut out);
            }
        }
        Ok(out)
    }

    /// The anti-involution `σ`: `e_β⊗t^n ↦ e_{−β}⊗t^{−n}`,
    /// `h_i⊗t^n ↦ h_i⊗t^{−n}`, fixing `c_i` and `d_i`.
    pub fn sigma_gen(&self, g: &Gen) -> Gen {
        match g {
            Gen::Loop(l) => Gen::Loop(LoopGen {
                x: self.root.opposite(l.x),
                n: l.n.neg(),
            }),
            other => other.clone(),
        }
    }

    pub fn sigma(&self, a: &LoopElement) -> LoopElement {
        let mut out = LoopElement::zero(a.k);
        for (g, c) in &a.terms {
            out.add_term(self.sigma_gen(g), c.clone());
        }
        out
    }

    pub fn label(&self, g: &Gen) -> String {
        match g {
            Gen::Loop(l) => format!("{}{}", self.root.basis_label(l.x), l.n),
            Gen::C(i) => format!("c{i}"),
            Gen::D(i) => format!("d{i}"),
        }
    }

    pub fn element_to_json(&self, a: &LoopElement) -> Value {
        let terms: Vec<Value> = a
            .terms
            .iter()
            .map(|(g, c)| json!({"coeff": rational::to_string(c), "gen": self.gen_to_json(g)}))
            .collect();
        json!({"k": a.k, "terms": terms})
    }

    pub fn gen_to_json(&self, g: &Gen) -> Value {
        match g {
            Gen::Loop(l) => {
                let rc = match self.root.kind(l.x) {
                    BasisKind::Cartan(i) => json!({"cartan": i + 1}),
                    BasisKind::Root(r) => json!({"root": r}),
                };
                json!({"type": "loop", "root_or_cartan": rc, "power": l.n.0.to_vec()})
            }
            Gen::C(i) => json!({"type": "c", "i": i}),
            Gen::D(i) => json!({"type": "d", "i": i}),
        }
    }

    pub fn gen_from_json(&self, v: &Value) -> Result<Gen> {
        let bad = |m: &str| Error::Parse(format!("{m}: {v}"));
        let ty = v
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing gen type"))?;
        match ty {
            "loop" => {
                let rc = v
                    .get("root_or_cartan")
                    .ok_or_else(|| bad("missing root_or_cartan"))?;
                let x = if let Some(i) = rc.get("cartan").and_then(Value::as_u64) {
                    if i == 0 || i as usize > self.root.rank {
                        return Err(bad("cartan index out of range"));
                    }
                    self.root.cartan(i as usize - 1)
                } else if let Some(r) = rc.get("root").and_then(Value::as_array) {
                    let r: Vec<i64> = r
                        .iter()
                        .map(|c| c.as_i64().ok_or_else(|| bad("bad root")))
                        .collect::<Result<_>>()?;
                    self.root.root_vector(&r).ok_or_else(|| bad("not a root"))?
                } else {
                    return Err(bad("bad root_or_cartan"));
                };
                let p = v
                    .get("power")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing power"))?;
                let n: Vec<i32> = p
                    .iter()
                    .map(|c| c.as_i64().map(|c| c as i32).ok_or_else(|| bad("bad power")))
                    .collect::<Result<_>>()?;
                if n.len() != self.k {
                    return Err(bad("power length differs from k"));
                }
                Ok(Gen::Loop(LoopGen::new(x, &n)))
            }
            "c" | "d" => {
                let i = v
                    .get("i")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad("missing index"))?;
                if i == 0 || i as usize > self.k {
                    return Err(bad("index out of range"));
                }
                Ok(if ty == "c" {
                    Gen::C(i as u8)
                } else {
                    Gen::D(i as u8)
                })
            }
            _ => Err(bad("unknown gen type")),
        }
    }

    pub fn element_from_json(&self, v: &Value) -> Result<LoopElement> {
        let k = v
            .get("k")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing k".into()))?;
        if k as usize != self.k {
            return Err(Error::Mismatch(format!(
                "element has k = {k}, algebra has k = {}",
                self.k
            )));
        }
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing terms".into()))?;
        let mut out = LoopElement::zero(self.k);
        for t in terms {
            let c = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("missing coeff".into()))?;
            let g = t
                .get("gen")
                .ok_or_else(|| Error::Parse("missing gen".into()))?;
            out.add_term(self.gen_from_json(g)?, rational::parse(c)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::{build_root_system, Series};
    use proptest::prelude::*;

    fn alg(n: usize, k: usize) -> LoopAlgebra {
        LoopAlgebra::new(Arc::new(build_root_system(Series::A, n).unwrap()), k)
    }

    #[test]
    fn bracket_examples() {
        let a = alg(1, 2);
        let r = a.root.clone();
        let lhs = a
            .bracket(
                &LoopElement::loop_gen(r.e(0), &[1, 0]),
                &LoopElement::loop_gen(r.f(0), &[-1, 0]),
            )
            .unwrap();
        // h⊗t^0 + c_1 with h = α∨ = 2h_1
        let mut want = LoopElement::term(2, Gen::Loop(LoopGen::new(r.cartan(0), &[0, 0])), q(2));
        want.add(&LoopElement::c(2, 1));
        assert_eq!(lhs, want);

        let x = LoopElement::loop_gen(r.e(0), &[3, -5]);
        assert_eq!(
            a.bracket(&LoopElement::d(2, 2), &x).unwrap(),
            x.scaled(&q(-5))
        );
        let y = LoopElement::loop_gen(r.e(0), &[7, -2]);
        assert!(a.bracket(&LoopElement::c(2, 1), &y).unwrap().is_zero());
    }

    #[test]
    fn membership_examples() {
        let a = alg(1, 2);
        let r = a.root.clone();
        let m = LoopElement::loop_gen(r.e(0), &[5, -1]);
        assert!(subalgebra_member(&m, Subalgebra::Minus));
        let z = LoopElement::loop_gen(r.e(0), &[0, 0]);
        assert!(!subalgebra_member(&z, Subalgebra::Minus));
        assert!(subalgebra_member(&z, Subalgebra::Plus));
        assert!(!subalgebra_member(&LoopElement::d(2, 1), Subalgebra::HatK));
        assert!(subalgebra_member(&LoopElement::d(2, 2), Subalgebra::HatK));
        assert!(!subalgebra_member(&LoopElement::d(2, 2), Subalgebra::Tilde));
        assert!(!subalgebra_member(&LoopElement::c(2, 1), Subalgebra::Minus));
    }

    #[test]
    fn mismatch_errors() {
        let a = alg(1, 2);
        let r = a.root.clone();
        let x = LoopElement::loop_gen(r.e(0), &[1, 0, 0]);
        assert!(matches!(a.bracket(&x, &x), Err(Error::Mismatch(_))));
    }

    #[test]
    fn level_scalars() {
        let r = Arc::new(build_root_system(Series::A, 1).unwrap());
        let cfg = AlgebraConfig::new(r, 2, 2).unwrap();
        assert_eq!(cfg.level(1), q(-4));
        assert_eq!(cfg.level(2), q(-6));
        assert!(AlgebraConfig::new(cfg.root.clone(), 1, 1).is_err());
        assert!(AlgebraConfig::new(cfg.root.clone(), 1, 4).is_ok());
    }

    #[test]
    fn json_roundtrip() {
        let a = alg(2, 2);
        let r = a.root.clone();
        let mut x = LoopElement::term(
            2,
            Gen::Loop(LoopGen::new(r.f(1), &[0, -1])),
            crate::rational::qf(-3, 2),
        );
        x.add(&LoopElement::c(2, 1));
        x.add(&LoopElement::loop_gen(r.cartan(1), &[2, -3]));
        let v = a.element_to_json(&x);
        assert_eq!(a.element_from_json(&v).unwrap(), x);
        assert!(a
            .element_from_json(
                &json!({"k": 2, "terms": [{"coeff": "x", "gen": {"type": "c", "i": 1}}]})
            )
            .is_err());
    }

    fn arb_gen(dim: u16, k: usize) -> impl Strategy<Value = Gen> {
        prop_oneof![
            6 => (0..dim, proptest::collection::vec(-2i32..=2, k))
                .prop_map(|(x, n)| Gen::Loop(LoopGen::new(ChevalleyElement(x), &n))),
            1 => (1..=k as u8).prop_map(Gen::C),
            1 => (1..=k as u8).prop_map(Gen::D),
        ]
    }

    fn arb_triple() -> impl Strategy<Value = (usize, Gen, Gen, Gen)> {
        (1usize..=3).prop_flat_map(|k| (Just(k), arb_gen(8, k), arb_gen(8, k), arb_gen(8, k)))
    }

    proptest! {
        #[test]
        fn jacobi_antisymmetry_a2((k, x, y, z) in arb_triple()) {
            let a = alg(2, k);
            let (x, y, z) = (LoopElement::gen(k, x), LoopElement::gen(k, y), LoopElement::gen(k, z));
            let xy = a.bracket(&x, &y).unwrap();
            let yx = a.bracket(&y, &x).unwrap();
            prop_assert_eq!(xy.clone(), yx.scaled(&q(-1)));
            prop_assert_eq!(xy.central_part(), yx.central_part().scaled(&q(-1)));
            let mut j = a.bracket(&xy, &z).unwrap();
            j.add(&a.bracket(&a.bracket(&y, &z).unwrap(), &x).unwrap());
            j.add(&a.bracket(&a.bracket(&z, &x).unwrap(), &y).unwrap());
            prop_assert!(j.is_zero());
            prop_assert_eq!(a.sigma(&xy), a.bracket(&a.sigma(&y), &a.sigma(&x)).unwrap());
        }

        #[test]
        fn derivations_grade(k in 1usize..=3, x in 0u16..8, n in proptest::collection::vec(-4i32..=4, 3)) {
            let a = alg(2, k);
            let g = LoopElement::loop_gen(ChevalleyElement(x), &n[..k]);
            for i in 1..=k {
                prop_assert_eq!(a.bracket(&LoopElement::d(k, i), &g).unwrap(), g.scaled(&q(n[i - 1] as i64)));
            }
        }
    }
}
