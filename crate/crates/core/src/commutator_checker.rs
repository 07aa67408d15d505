//! Witnesses for `[g ⊗ t_{k-1}^r, Z] ≠ 0` with `Z ∈ U(ĝ_k⁻)` non-constant.
//!
//! `analyze` reads a certificate off the top component of `Z`: generators
//! occurring in `Z⁰` are listed in PBW order, so Cartan-type generators come
//! first. If a root-type generator occurs (Case I) the witness is a Cartan
//! element `h_o` with `β(h_o) ≠ 0`; otherwise (Case II) it is the simple root
//! vector paired with the pivot Cartan generator. `verify` recomputes the
//! full commutator in `U` and checks the predicted coefficient.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::enveloping::{Enveloping, Monomial, PbwElement, PbwSpan};
use crate::error::{Error, Result};
use crate::loop_algebra::{Gen, LoopElement, LoopGen};
use crate::rational::{self, Q};
use crate::root_system::ChevalleyElement;

pub mod corpus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub case: Case,
    pub witness: ChevalleyElement,
    /// Distinct generators of `Z⁰` in PBW order (`x_1, …, x_n`).
    pub generators: Vec<LoopGen>,
    /// Number of Cartan-type generators among them (`m`).
    pub cartan_count: usize,
    /// Greedy maximal exponents `(d̄_1, …, d̄_n)`.
    pub exponents: Vec<u32>,
    /// 0-based position of the pivot `x_k̄` in `generators`.
    pub pivot: usize,
    /// Coefficient of `x^d̄` in `Z⁰`.
    pub base_coeff: Q,
    /// Predicted coefficient of the target monomial.
    pub predicted: Q,
    pub degree: u32,
    pub p0: i32,
}

impl WitnessCertificate {
    pub fn pivot_gen(&self) -> &LoopGen {
        &self.generators[self.pivot]
    }

    pub fn base_monomial(&self) -> Monomial {
        Monomial(
            self.generators
                .iter()
                .zip(&self.exponents)
                .filter(|(_, e)| **e > 0)
                .map(|(g, e)| (g.clone(), *e))
                .collect(),
        )
    }

    /// The new factor of the target: `e_β ⊗ t^{n + r·ε_{k-1}}` where `n` is
    /// the pivot's exponent and `e_β` the pivot (Case I) or the witness
    /// (Case II).
    pub fn shifted_pivot(&self, r: i32) -> LoopGen {
        let g = shift(self.pivot_gen(), r);
        match self.case {
            Case::I => g,
            Case::II => LoopGen {
                x: self.witness,
                n: g.n,
            },
        }
    }

    /// `A` (Case I) or `A′` (Case II) for the given `r`.
    pub fn target(&self, r: i32) -> Monomial {
        let base = self
            .base_monomial()
            .without_one(self.pivot_gen())
            .expect("pivot exponent positive");
        base.commutative_mul(&Monomial::single(self.shifted_pivot(r)))
    }

    /// `witness ⊗ t_{k-1}^r`.
    pub fn witness_element(&self, k: usize, r: i32) -> LoopElement {
        let mut n = vec![0; k];
        n[k - 2] = r;
        LoopElement::loop_gen(self.witness, &n)
    }

    pub fn to_json(&self, u: &Enveloping) -> Value {
        let alg = &u.alg;
        json!({
            "case": match self.case { Case::I => "I", Case::II => "II" },
            "witness_generator": alg.root.basis_label(self.witness),
            "generators": self.generators.iter().map(|g| alg.gen_to_json(&Gen::Loop(g.clone()))).collect::<Vec<_>>(),
            "cartan_count": self.cartan_count,
            "exponents": self.exponents,
            "pivot_index": self.pivot + 1,
            "target_monomial_at_p0": u.to_json(&PbwElement::monomial(self.target(self.p0), Q::one())),
            "predicted_coefficient": rational::to_string(&self.predicted),
            "p0": self.p0,
        })
    }
}

fn shift(g: &LoopGen, r: i32) -> LoopGen {
    let k = g.n.len();
    let v = g.n.0[k - 2] + r;
    LoopGen {
        x: g.x,
        n: g.n.with(k - 1, v),
    }
}

/// `1 + 2·max |t_{k-1}-exponent|` over every generator of `Z`.
pub fn p0_bound(z: &PbwElement) -> i32 {
    let m = z
        .generators()
        .iter()
        .map(|g| g.n.0[g.n.len() - 2].abs())
        .max()
        .unwrap_or(0);
    1 + 2 * m
}

/// Greedy lexicographic maximum: restricts `rows` position by position to
/// those attaining the largest exponent.
fn greedy(
    mut rows: Vec<&(Vec<u32>, Q)>,
    positions: impl Iterator<Item = usize>,
) -> Vec<&(Vec<u32>, Q)> {
    for j in positions {
        let best = rows.iter().map(|(e, _)| e[j]).max().unwrap_or(0);
        rows.retain(|(e, _)| e[j] == best);
    }
    rows
}

pub fn analyze(u: &Enveloping, z: &PbwElement) -> Result<WitnessCertificate> {
    if u.span != PbwSpan::LoopMinus || u.alg.k < 2 {
        return Err(Error::Invalid("analysis needs U(ĝ_k⁻) with k ≥ 2".into()));
    }
    if z.is_zero() || z.is_constant() {
        return Err(Error::ConstantElement);
    }
    for g in z.generators() {
        if !u.contains(&g) {
            return Err(Error::OutsideSubalgebra(u.alg.label(&Gen::Loop(g))));
        }
    }
    let root = &u.alg.root;
    let top = z.top_component()?;
    let degree = top.degree().expect("nonzero");
    let generators = top.generators();
    let n = generators.len();
    let m = generators.iter().filter(|g| root.is_cartan(g.x)).count();
    let rows: Vec<(Vec<u32>, Q)> = top
        .terms()
        .map(|(mono, c)| {
            (
                generators.iter().map(|g| mono.exponent(g)).collect(),
                c.clone(),
            )
        })
        .collect();
    let all: Vec<&(Vec<u32>, Q)> = rows.iter().collect();
    let (case, chosen) = if m < n {
        // maximize d_{m+1} first, then fix the Cartan part (largest tuple),
        // then continue greedily over the remaining root generators
        let first = greedy(all, std::iter::once(m));
        let cartan = greedy(first, 0..m);
        (Case::I, greedy(cartan, m + 1..n))
    } else {
        (Case::II, greedy(all, 0..n))
    };
    debug_assert_eq!(chosen.len(), 1);
    let (exponents, base_coeff) = chosen[0].clone();
    let pivot = (0..n)
        .rev()
        .find(|&j| exponents[j] > 0)
        .expect("degree ≥ 1");
    let pg = &generators[pivot];
    let mult = Q::from_integer(exponents[pivot].into());
    let (witness, predicted) = match case {
        Case::I => {
            let beta = root.root_of(pg.x);
            let i = beta.iter().position(|c| *c != 0).expect("nonzero root");
            let h = root.cartan(i);
            // β(h_i) is the i-th simple coordinate of β
            (h, &base_coeff * &mult * Q::from_integer(beta[i].into()))
        }
        Case::II => {
            let i = match root.kind(pg.x) {
                crate::root_system::BasisKind::Cartan(i) => i,
                _ => unreachable!("Case II pivots are Cartan-type"),
            };
            (root.e(i), -(&base_coeff * &mult))
        }
    };
    Ok(WitnessCertificate {
        case,
        witness,
        generators,
        cartan_count: m,
        exponents,
        pivot,
        base_coeff,
        predicted,
        degree,
        p0: p0_bound(z),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RCheck {
    pub r: i32,
    pub nonzero: bool,
    pub target_coeff: Q,
    pub graded_coeff: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<RCheck>,
    pub predicted: Q,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| {
            c.nonzero && c.target_coeff == self.predicted && c.graded_coeff == self.predicted
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "predicted": rational::to_string(&self.predicted),
            "per_r": self.checks.iter().map(|c| json!({
                "r": c.r,
                "nonzero": c.nonzero,
                "target_coefficient": rational::to_string(&c.target_coeff),
                "graded_coefficient": rational::to_string(&c.graded_coeff),
            })).collect::<Vec<_>>(),
            "pass": self.pass(),
        })
    }
}

/// Computes `[witness ⊗ t_{k-1}^r, Z]` in `U` for each `r` and compares the
/// target coefficient of its top part (and of the graded commutator) with
/// the prediction. Any vanishing commutator or mismatch is `Falsified`.
pub fn verify(
    u: &Enveloping,
    z: &PbwElement,
    cert: &WitnessCertificate,
    rs: std::ops::RangeInclusive<i32>,
) -> Result<VerifyReport> {
    if *rs.start() < cert.p0 {
        return Err(Error::Invalid(format!(
            "window starts below p0 = {}",
            cert.p0
        )));
    }
    let k = u.alg.k;
    let top = z.top_component()?;
    let mut checks = Vec::new();
    for r in rs {
        let a = cert.witness_element(k, r);
        let full = u.ad(&a, z)?;
        let target = cert.target(r);
        let target_coeff = full.component(cert.degree).coeff(&target);
        let graded_coeff = u.graded_commutator_component(&a, &top)?.coeff(&target);
        let c = RCheck {
            r,
            nonzero: !full.is_zero(),
            target_coeff,
            graded_coeff,
        };
        if !c.nonzero {
            return Err(Error::Falsified(format!("[x⊗t^{r}, Z] = 0")));
        }
        if c.target_coeff != cert.predicted || c.graded_coeff != cert.predicted {
            return Err(Error::Falsified(format!(
                "r = {r}: target coefficient {} (graded {}), predicted {}",
                c.target_coeff, c.graded_coeff, cert.predicted
            )));
        }
        checks.push(c);
    }
    Ok(VerifyReport {
        checks,
        predicted: cert.predicted.clone(),
    })
}

/// Whether `(coefficient, exponent box)` data for a corpus entry is sane.
pub fn within_box(z: &PbwElement, bound: i32, max_degree: u32) -> bool {
    z.degree().is_some_and(|d| d <= max_degree)
        && z.generators()
            .iter()
            .all(|g| g.n.0.iter().all(|v| v.abs() <= bound))
        && !z.terms().any(|(_, c)| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loop_algebra::LoopAlgebra;
    use crate::rational::q;
    use crate::root_system::{build_root_system, Series};
    use proptest::prelude::*;
    use std::sync::Arc;

    type ZSpec = Vec<(i32, Vec<(u16, Vec<i32>)>)>;

    fn env(series: Series, n: usize, k: usize) -> Enveloping {
        let r = Arc::new(build_root_system(series, n).unwrap());
        Enveloping::new(LoopAlgebra::new(r, k), PbwSpan::LoopMinus)
    }

    fn gen_el(g: &LoopGen) -> LoopElement {
        LoopElement::gen(g.n.len(), Gen::Loop(g.clone()))
    }

    #[test]
    fn case_one_single_root() {
        let u = env(Series::A, 1, 2);
        let r = u.alg.root.clone();
        let f = LoopGen::new(r.f(0), &[0, -1]);
        let z = PbwElement::gen(f.clone());
        let cert = analyze(&u, &z).unwrap();
        assert_eq!(cert.case, Case::I);
        assert_eq!(cert.witness, r.cartan(0));
        // β = −α, β(h_1) = −1
        assert_eq!(cert.predicted, q(-1));
        assert_eq!(cert.p0, 1);
        let rep = verify(&u, &z, &cert, 1..=6).unwrap();
        assert!(rep.pass());
        // with h = α∨ = 2h_1 the direct bracket is −2 f⊗t_1^r t_2^{-1}
        for rr in 1..=6 {
            let h = LoopElement::loop_gen(r.cartan(0), &[rr, 0]).scaled(&q(2));
            let got = u.ad(&h, &z).unwrap();
            assert_eq!(
                got,
                PbwElement::gen(LoopGen::new(r.f(0), &[rr, -1])).scaled(&q(-2))
            );
        }
    }

    #[test]
    fn case_two_single_cartan() {
        let u = env(Series::A, 1, 2);
        let r = u.alg.root.clone();
        let h = LoopGen::new(r.cartan(0), &[0, -1]);
        let z = PbwElement::gen(h);
        let cert = analyze(&u, &z).unwrap();
        assert_eq!(cert.case, Case::II);
        assert_eq!(cert.witness, r.e(0));
        assert_eq!(cert.predicted, q(-1));
        assert!(verify(&u, &z, &cert, 1..=6).unwrap().pass());
        // α∨ ⊗ t_2^{-1}: [e⊗t_1^r, α∨⊗t_2^{-1}] = −2 e⊗t_1^r t_2^{-1}
        let zz = z.scaled(&q(2));
        for rr in 1..=6 {
            let a = LoopElement::loop_gen(r.e(0), &[rr, 0]);
            assert_eq!(
                u.ad(&a, &zz).unwrap(),
                PbwElement::gen(LoopGen::new(r.e(0), &[rr, -1])).scaled(&q(-2))
            );
        }
    }

    #[test]
    fn constant_rejected() {
        let u = env(Series::A, 1, 2);
        assert_eq!(
            analyze(&u, &PbwElement::scalar(q(7))),
            Err(Error::ConstantElement)
        );
        assert_eq!(
            analyze(&u, &PbwElement::zero()),
            Err(Error::ConstantElement)
        );
    }

    #[test]
    fn mixed_degree_element() {
        // x1 x2 + x1 with x1 = h⊗t_2^{-1}, x2 = f⊗t_1 t_2^{-1}
        let u = env(Series::A, 1, 2);
        let r = u.alg.root.clone();
        let x1 = LoopGen::new(r.cartan(0), &[0, -1]);
        let x2 = LoopGen::new(r.f(0), &[1, -1]);
        let mut z = u.normal_order(&[gen_el(&x1), gen_el(&x2)]).unwrap();
        z.add(&PbwElement::gen(x1.clone()));
        let cert = analyze(&u, &z).unwrap();
        assert_eq!(cert.case, Case::I);
        assert_eq!(cert.exponents, vec![1, 1]);
        assert_eq!(cert.p0, 3);
        let rep = verify(&u, &z, &cert, 3..=7).unwrap();
        // brute force: [h_1⊗t_1^r, x1 x2 + x1] = x1 [h_1 t_1^r, x2] = −x1·f⊗t_1^{1+r}t_2^{-1}
        for c in &rep.checks {
            let a = LoopElement::loop_gen(r.cartan(0), &[c.r, 0]);
            let want = u
                .normal_order(&[gen_el(&x1), gen_el(&LoopGen::new(r.f(0), &[1 + c.r, -1]))])
                .unwrap()
                .scaled(&q(-1));
            assert_eq!(u.ad(&a, &z).unwrap(), want);
            assert_eq!(c.target_coeff, q(-1));
        }
        assert!(matches!(
            verify(&u, &z, &cert, 1..=3),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn greedy_choice_and_multiplicity() {
        // Z = 3 x1^2 x3 + x2 x3^2 with Cartan x1 < x2 and root x3
        let u = env(Series::A, 2, 2);
        let r = u.alg.root.clone();
        let x1 = LoopGen::new(r.cartan(0), &[0, -1]);
        let x2 = LoopGen::new(r.cartan(1), &[-1, -1]);
        let x3 = LoopGen::new(r.root_vector(&[-1, -1]).unwrap(), &[2, -2]);
        let mut z = u
            .normal_order(&[gen_el(&x1), gen_el(&x1), gen_el(&x3)])
            .unwrap()
            .scaled(&q(3));
        z.add(
            &u.normal_order(&[gen_el(&x2), gen_el(&x3), gen_el(&x3)])
                .unwrap(),
        );
        let cert = analyze(&u, &z).unwrap();
        assert_eq!(cert.case, Case::I);
        assert_eq!(cert.cartan_count, 2);
        assert_eq!(cert.exponents, vec![0, 1, 2]);
        // −(α1+α2)(h_1) = −1, multiplicity 2
        assert_eq!(cert.predicted, q(-2));
        assert!(verify(&u, &z, &cert, cert.p0..=cert.p0 + 5).unwrap().pass());
    }

    #[test]
    fn json_has_fields() {
        let u = env(Series::A, 1, 3);
        let r = u.alg.root.clone();
        let z = PbwElement::gen(LoopGen::new(r.f(0), &[1, -2, -1]));
        let cert = analyze(&u, &z).unwrap();
        assert_eq!(cert.p0, 5);
        let v = cert.to_json(&u);
        assert_eq!(v["case"], "I");
        assert_eq!(v["p0"], 5);
        assert_eq!(v["pivot_index"], 1);
    }

    fn arb_z(n: usize, k: usize) -> impl Strategy<Value = ZSpec> {
        let dim = (n * n + 2 * n) as u16;
        let gen = (
            0..dim,
            proptest::collection::vec(-3i32..=3, k - 1),
            -3i32..=-1,
        )
            .prop_map(|(x, mut v, l)| {
                v.push(l);
                (x, v)
            });
        proptest::collection::vec(
            (
                (-3i32..=3).prop_filter("nonzero", |c| *c != 0),
                proptest::collection::vec(gen, 1..=3),
            ),
            1..=4,
        )
    }

    fn build(u: &Enveloping, spec: &ZSpec) -> PbwElement {
        let mut z = PbwElement::zero();
        for (c, w) in spec {
            let word: Vec<LoopElement> = w
                .iter()
                .map(|(x, v)| gen_el(&LoopGen::new(ChevalleyElement(*x), v)))
                .collect();
            z.add_scaled(&u.normal_order(&word).unwrap(), &q(*c as i64));
        }
        z
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn soundness_and_monotone_stability(n in 1usize..=2, k in 2usize..=3, spec in arb_z(2, 3), delta in 1i32..=5) {
            let u = env(Series::A, n, k);
            let dim = u.alg.root.dim() as u16;
            let spec: Vec<_> = spec
                .into_iter()
                .map(|(c, w)| (c, w.into_iter().map(|(x, v)| (x % dim, v[3 - k..].to_vec())).collect::<Vec<_>>()))
                .collect();
            let z = build(&u, &spec);
            prop_assume!(!z.is_constant());
            let cert = analyze(&u, &z).unwrap();
            let rep = verify(&u, &z, &cert, cert.p0..=cert.p0 + 5).unwrap();
            prop_assert!(rep.pass());
            let later = verify(&u, &z, &cert, cert.p0 + 5 + delta..=cert.p0 + 5 + delta).unwrap();
            prop_assert!(later.pass());
        }
    }
}
