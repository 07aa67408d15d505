//! PBW-ordered arithmetic in the enveloping algebra of a graded loop
//! subalgebra, chiefly `U(ĝ_k^-)`.
//!
//! Generators are ordered by their Chevalley class (Cartan elements, then
//! negative roots, then positive roots) and then lexicographically by
//! exponent; this is the derived `Ord` on [`LoopGen`]. A monomial stores
//! strictly increasing generators with positive exponents.

use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::loop_algebra::{Gen, LoopAlgebra, LoopElement, LoopGen};
use crate::rational::{self, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<(LoopGen, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(g: LoopGen) -> Self {
        Monomial(vec![(g, 1)])
    }

    /// Filtration degree `|d| = Σ d_i`.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// The ordered word `y_1 y_2 …` with repetitions.
    pub fn word(&self) -> Vec<LoopGen> {
        let mut w = Vec::with_capacity(self.degree() as usize);
        for (g, e) in &self.0 {
            for _ in 0..*e {
                w.push(g.clone());
            }
        }
        w
    }

    /// Builds a monomial from a sorted word.
    pub fn from_sorted_word(w: &[LoopGen]) -> Self {
        let mut out: Vec<(LoopGen, u32)> = Vec::new();
        for g in w {
            match out.last_mut() {
                Some((h, e)) if h == g => *e += 1,
                _ => out.push((g.clone(), 1)),
            }
        }
        Monomial(out)
    }

    pub fn exponent(&self, g: &LoopGen) -> u32 {
        self.0.iter().find(|(h, _)| h == g).map_or(0, |(_, e)| *e)
    }

    /// Multiplication in the associated graded (commutative) algebra.
    pub fn commutative_mul(&self, o: &Monomial) -> Monomial {
        let mut m: BTreeMap<LoopGen, u32> = self.0.iter().cloned().collect();
        for (g, e) in &o.0 {
            *m.entry(g.clone()).or_insert(0) += e;
        }
        Monomial(m.into_iter().collect())
    }

    /// Removes one copy of `g`; `None` if absent.
    pub fn without_one(&self, g: &LoopGen) -> Option<Monomial> {
        let mut v = self.0.clone();
        let i = v.iter().position(|(h, _)| h == g)?;
        if v[i].1 == 1 {
            v.remove(i);
        } else {
            v[i].1 -= 1;
        }
        Some(Monomial(v))
    }
}

/// A ℚ-combination of PBW monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PbwElement {
    terms: BTreeMap<Monomial, Q>,
}

impl PbwElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one(), Q::one())
    }

    pub fn scalar(c: Q) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn gen(g: LoopGen) -> Self {
        Self::monomial(Monomial::single(g), Q::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled(&mut self, o: &PbwElement, s: &Q) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn add(&mut self, o: &PbwElement) {
        self.add_scaled(o, &Q::one())
    }

    pub fn scaled(&self, s: &Q) -> PbwElement {
        let mut e = PbwElement::zero();
        e.add_scaled(self, s);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Filtration degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Part of a given filtration degree.
    pub fn component(&self, d: u32) -> PbwElement {
        PbwElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The top homogeneous component `Z⁰`.
    pub fn top_component(&self) -> Result<PbwElement> {
        let d = self.degree().ok_or(Error::ZeroElement)?;
        Ok(self.component(d))
    }

    /// All distinct generators occurring.
    pub fn generators(&self) -> Vec<LoopGen> {
        let mut v: Vec<LoopGen> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(g, _)| g.clone()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Product in the associated graded algebra.
    pub fn commutative_mul(&self, o: &PbwElement) -> PbwElement {
        let mut out = PbwElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                out.add_term(a.commutative_mul(b), ca * cb);
            }
        }
        out
    }
}

/// Choice of subalgebra whose enveloping algebra is being computed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbwSpan {
    /// `ĝ_k^-`: loop generators with `n_k < 0`.
    LoopMinus,
    /// `n^-` of `g` itself (loop rank 0).
    NegativeRoots,
}

/// Rewriting context: the algebra, the chosen span and a memo of
/// generator-times-monomial products.
pub struct Enveloping {
    pub alg: LoopAlgebra,
    pub span: PbwSpan,
    memo: Mutex<HashMap<(LoopGen, Monomial), PbwElement>>,
}

/// Inversion selection for the bubble rewriting routes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Rightmost,
    Leftmost,
}

impl Enveloping {
    pub fn new(alg: LoopAlgebra, span: PbwSpan) -> Self {
        Enveloping {
            alg,
            span,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn contains(&self, g: &LoopGen) -> bool {
        match self.span {
            PbwSpan::LoopMinus => g.n.len() == self.alg.k && !g.n.is_empty() && g.n.last() < 0,
            PbwSpan::NegativeRoots => g.n.is_empty() && self.alg.root.is_negative_root(g.x),
        }
    }

    fn check_gen(&self, g: &LoopGen) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::OutsideSubalgebra(
                self.alg.label(&Gen::Loop(g.clone())),
            ))
        }
    }

    /// `[a, b]` for two generators of the span, as generator terms.
    fn bracket_in_span(&self, a: &LoopGen, b: &LoopGen) -> Result<Vec<(LoopGen, Q)>> {
        let mut out = LoopElement::zero(self.alg.k);
        self.alg.bracket_loop_into(a, b, &Q::one(), &mut out);
        self.loop_terms(&out)
    }

    fn loop_terms(&self, e: &LoopElement) -> Result<Vec<(LoopGen, Q)>> {
        e.terms()
            .map(|(g, c)| match g {
                Gen::Loop(l) => {
                    self.check_gen(l)?;
                    Ok((l.clone(), c.clone()))
                }
                other => Err(Error::OutsideSubalgebra(self.alg.label(other))),
            })
            .collect()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    /// `g · m`, normal ordered.
    pub fn left_mul_gen(&self, g: &LoopGen, m: &Monomial) -> Result<PbwElement> {
        let Some((first, e)) = m.0.first() else {
            return Ok(PbwElement::gen(g.clone()));
        };
        if g < first {
            let mut v = Vec::with_capacity(m.0.len() + 1);
            v.push((g.clone(), 1));
            v.extend(m.0.iter().cloned());
            return Ok(PbwElement::monomial(Monomial(v), Q::one()));
        }
        if g == first {
            let mut v = m.0.clone();
            v[0].1 = e + 1;
            return Ok(PbwElement::monomial(Monomial(v), Q::one()));
        }
        let key = (g.clone(), m.clone());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let rest = m.without_one(first).expect("first factor present");
        // g·first·rest = first·(g·rest) + [g, first]·rest
        let mut out = PbwElement::zero();
        let inner = self.left_mul_gen(g, &rest)?;
        for (mono, c) in inner.terms() {
            out.add_scaled(&self.left_mul_gen(first, mono)?, c);
        }
        for (h, c) in self.bracket_in_span(g, first)? {
            out.add_scaled(&self.left_mul_gen(&h, &rest)?, &c);
        }
        self.memo.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// `g · Z` for a generator `g`.
    pub fn left_mul(&self, g: &LoopGen, z: &PbwElement) -> Result<PbwElement> {
        self.check_gen(g)?;
        let mut out = PbwElement::zero();
        for (m, c) in z.terms() {
            out.add_scaled(&self.left_mul_gen(g, m)?, c);
        }
        Ok(out)
    }

    /// Product `a · b` in `U`.
    pub fn mul(&self, a: &PbwElement, b: &PbwElement) -> Result<PbwElement> {
        let mut out = PbwElement::zero();
        for (m, c) in a.terms() {
            let mut acc = b.clone();
            for g in m.word().iter().rev() {
                acc = self.left_mul(g, &acc)?;
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }

    /// Normal-orders a product of (linear combinations of) generators.
    pub fn normal_order(&self, product: &[LoopElement]) -> Result<PbwElement> {
        let mut acc = PbwElement::one();
        for f in product.iter().rev() {
            let mut next = PbwElement::zero();
            for (g, c) in self.loop_terms(f)? {
                next.add_scaled(&self.left_mul(&g, &acc)?, &c);
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Normal ordering by repeated adjacent swaps `ab = ba + [a,b]`,
    /// always resolving the rightmost (or leftmost) inversion first. No
    /// memo is used; this is an independent route to [`Self::normal_order`].
    pub fn normal_order_bubble(&self, word: &[LoopGen], route: Route) -> Result<PbwElement> {
        for g in word {
            self.check_gen(g)?;
        }
        let mut pending: BTreeMap<Vec<LoopGen>, Q> = BTreeMap::new();
        pending.insert(word.to_vec(), Q::one());
        let mut out = PbwElement::zero();
        while let Some((w, c)) = pending.pop_last() {
            if c.is_zero() {
                continue;
            }
            let inv = match route {
                Route::Rightmost => (0..w.len().saturating_sub(1))
                    .rev()
                    .find(|&i| w[i] > w[i + 1]),
                Route::Leftmost => (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]),
            };
            let Some(i) = inv else {
                out.add_term(Monomial::from_sorted_word(&w), c);
                continue;
            };
            let mut swapped = w.clone();
            swapped.swap(i, i + 1);
            *pending.entry(swapped).or_insert_with(Q::zero) += &c;
            for (h, bc) in self.bracket_in_span(&w[i], &w[i + 1])? {
                let mut nw = Vec::with_capacity(w.len() - 1);
                nw.extend_from_slice(&w[..i]);
                nw.push(h);
                nw.extend_from_slice(&w[i + 2..]);
                *pending.entry(nw).or_insert_with(Q::zero) += &c * bc;
            }
        }
        Ok(out)
    }

    /// `[a, Z]` computed in `U`: each factor is replaced in turn by its
    /// bracket with `a` and the result is normal ordered. The bracket
    /// `[a, y]` must stay inside the span for every factor `y`.
    pub fn ad(&self, a: &LoopElement, z: &PbwElement) -> Result<PbwElement> {
        let mut out = PbwElement::zero();
        for (m, c) in z.terms() {
            let w = m.word();
            for i in 0..w.len() {
                let mut br = LoopElement::zero(self.alg.k);
                for (ga, ca) in a.terms() {
                    self.alg
                        .bracket_gen_into(ga, &Gen::Loop(w[i].clone()), ca, &mut br);
                }
                if br.is_zero() {
                    continue;
                }
                let mut prod: Vec<LoopElement> = w[..i]
                    .iter()
                    .map(|g| LoopElement::gen(self.alg.k, Gen::Loop(g.clone())))
                    .collect();
                prod.push(br);
                prod.extend(
                    w[i + 1..]
                        .iter()
                        .map(|g| LoopElement::gen(self.alg.k, Gen::Loop(g.clone()))),
                );
                out.add_scaled(&self.normal_order(&prod)?, c);
            }
        }
        Ok(out)
    }

    /// Degree-`d` part of `[a, Z⁰]` in the associated graded algebra, where
    /// `Z⁰` is homogeneous of degree `d`: the derivation extending
    /// `y ↦ [a, y]` (bracket terms outside the span are dropped).
    pub fn graded_commutator_component(
        &self,
        a: &LoopElement,
        z0: &PbwElement,
    ) -> Result<PbwElement> {
        if !z0.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let mut out = PbwElement::zero();
        for (m, c) in z0.terms() {
            for (g, e) in &m.0 {
                let mut br = LoopElement::zero(self.alg.k);
                for (ga, ca) in a.terms() {
                    self.alg
                        .bracket_gen_into(ga, &Gen::Loop(g.clone()), ca, &mut br);
                }
                let rest = m.without_one(g).expect("factor present");
                for (h, bc) in br.terms() {
                    if let Gen::Loop(h) = h {
                        if self.contains(h) {
                            let mono = rest.commutative_mul(&Monomial::single(h.clone()));
                            out.add_term(mono, c * bc * Q::from_integer((*e).into()));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self, z: &PbwElement) -> Value {
        let terms: Vec<Value> = z
            .terms()
            .map(|(m, c)| {
                let mono: Vec<Value> =
                    m.0.iter()
                        .map(|(g, e)| json!([self.alg.gen_to_json(&Gen::Loop(g.clone())), e]))
                        .collect();
                json!({"coeff": rational::to_string(c), "monomial": mono})
            })
            .collect();
        json!({"k": self.alg.k, "terms": terms})
    }

    /// Reads an element; monomials need not be ordered (they are normal
    /// ordered on input).
    pub fn from_json(&self, v: &Value) -> Result<PbwElement> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing terms".into()))?;
        let mut out = PbwElement::zero();
        for t in terms {
            let c = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("missing coeff".into()))?;
            let c = rational::parse(c)?;
            let mono = t
                .get("monomial")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("missing monomial".into()))?;
            let mut word = Vec::new();
            for f in mono {
                let pair = f
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::Parse(format!("bad factor {f}")))?;
                let g = match self.alg.gen_from_json(&pair[0])? {
                    Gen::Loop(l) => l,
                    other => return Err(Error::OutsideSubalgebra(self.alg.label(&other))),
                };
                let e = pair[1]
                    .as_u64()
                    .ok_or_else(|| Error::Parse(format!("bad exponent {f}")))?;
                for _ in 0..e {
                    word.push(LoopElement::gen(self.alg.k, Gen::Loop(g.clone())));
                }
            }
            out.add_scaled(&self.normal_order(&word)?, &c);
        }
        Ok(out)
    }

    pub fn display(&self, z: &PbwElement) -> String {
        DisplayPbw(self, z).to_string()
    }
}

struct DisplayPbw<'a>(&'a Enveloping, &'a PbwElement);

impl fmt::Display for DisplayPbw<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.1.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (g, e) in &m.0 {
                write!(f, "·{}", self.0.alg.label(&Gen::Loop(g.clone())))?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
