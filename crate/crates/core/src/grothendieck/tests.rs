use super::*;
use crate::modules::weyl_module;
use crate::rational::Q;
use crate::root_system::{build_root_system, Series};
use proptest::prelude::*;
use std::sync::Arc;

fn w(v: &[i64]) -> Weight {
    Weight(v.to_vec())
}

fn a(n: usize) -> Arc<RootSystemData> {
    Arc::new(build_root_system(Series::A, n).unwrap())
}

/// A1, `P_{λ,λ} = 1`, `P_{λ−2,λ} = −1`, complete up to `12ω`.
fn banded(p: i64) -> PMatrix {
    let mut entries = Vec::new();
    for l in 0..=12 {
        entries.push(PEntry {
            mu: vec![l],
            lambda: vec![l],
            value: 1,
        });
        if l >= 2 {
            entries.push(PEntry {
                mu: vec![l - 2],
                lambda: vec![l],
                value: -1,
            });
        }
    }
    PMatrix::from_json(
        PMatrixJson {
            alg: "A1".into(),
            p,
            identity: false,
            entries,
            complete_on: Some(CompleteOn { max: vec![12] }),
        },
        1,
    )
    .unwrap()
}

fn combo(terms: &[(&[i64], i64)]) -> WeightCombination {
    let mut c = WeightCombination::default();
    for (wt, n) in terms {
        c.add_term(w(wt), *n);
    }
    c
}

#[test]
fn restricted_weights() {
    assert!(is_restricted(&w(&[1]), 2).unwrap());
    assert!(!is_restricted(&w(&[2]), 2).unwrap());
    assert!(is_restricted(&w(&[1, 1]), 2).unwrap());
    assert!(matches!(
        is_restricted(&w(&[-1]), 2),
        Err(Error::NotDominant(_))
    ));
}

#[test]
fn expansions() {
    assert_eq!(p_adic_expansion(&w(&[7]), 2).unwrap(), vec![w(&[1]); 3]);
    assert_eq!(p_adic_expansion(&w(&[1, 0]), 5).unwrap(), vec![w(&[1, 0])]);
    assert_eq!(
        p_adic_expansion(&w(&[5, 2]), 3).unwrap(),
        vec![w(&[2, 2]), w(&[1, 0])]
    );
}

proptest! {
    #[test]
    fn expansion_round_trips(c in proptest::collection::vec(0i64..500, 1..4), p in 2i64..8) {
        let lam = Weight(c);
        let digits = p_adic_expansion(&lam, p).unwrap();
        let mut s = Weight::zero(lam.0.len());
        let mut pr = 1;
        for d in &digits {
            prop_assert!(is_restricted(d, p).unwrap());
            s = s.add(&d.scale(pr));
            pr *= p;
        }
        prop_assert_eq!(s, lam);
    }
}

#[test]
fn weyl_characters_match_module_weights() {
    for (r, lams) in [
        (a(1), vec![vec![0], vec![1], vec![2], vec![5]]),
        (a(2), vec![vec![1, 0], vec![1, 1], vec![2, 1]]),
        (a(3), vec![vec![0, 1, 0]]),
    ] {
        for l in lams {
            let lam = Weight(l);
            let ch = weyl_character(&r, &lam).unwrap();
            let m = weyl_module(r.clone(), &lam).unwrap();
            let mut oracle = WeightCombination::default();
            for wt in &m.weights {
                oracle.add_term(wt.clone(), 1);
            }
            assert_eq!(ch, oracle, "{lam:?}");
            assert_eq!(
                Q::from_integer(ch.dimension().into()),
                r.weyl_dimension(&lam).unwrap()
            );
            for (word, _) in r.weyl_group() {
                for (mu, c) in &ch.0 {
                    assert_eq!(ch.get(&r.apply_word(&word, mu)), *c);
                }
            }
        }
    }
    assert_eq!(
        weyl_character(&a(1), &w(&[2])).unwrap(),
        combo(&[(&[2], 1), (&[0], 1), (&[-2], 1)])
    );
    assert_eq!(
        weyl_character(&a(1), &w(&[0])).unwrap(),
        combo(&[(&[0], 1)])
    );
    assert_eq!(weyl_character(&a(2), &w(&[1, 0])).unwrap().0.len(), 3);
}

#[test]
fn characters_extend_linearly() {
    let r = a(1);
    assert!(character_of(&r, &GrothendieckVector::default())
        .unwrap()
        .is_zero());
    let v = combo(&[(&[2], 1), (&[0], -1)]);
    assert_eq!(
        character_of(&r, &v).unwrap(),
        combo(&[(&[2], 1), (&[-2], 1)])
    );
    assert_eq!(
        character_of(&r, &GrothendieckVector::single(w(&[3]))).unwrap(),
        weyl_character(&r, &w(&[3])).unwrap()
    );
}

#[test]
fn identity_matrix_is_identity() {
    let pm = PMatrix::identity("A1", 1, 2);
    let mut ex = EkExpander::new(&pm);
    for k in 0..5 {
        for l in 0..20 {
            assert_eq!(
                ex.expand(k, &w(&[l])).unwrap(),
                GrothendieckVector::single(w(&[l]))
            );
        }
    }
    let s = stabilize(&w(&[6]), &pm, 5).unwrap();
    assert_eq!(s.k_stable, Some(1));
    assert_eq!(stabilize(&w(&[6]), &pm, 0).unwrap().k_stable, None);
}

#[test]
fn first_step_uses_the_column() {
    let json = r#"{"alg":"A1","p":2,"entries":[{"mu":[0],"lambda":[0],"value":1},{"mu":[2],"lambda":[2],"value":1},{"mu":[0],"lambda":[2],"value":3}],"complete_on":{"max":[2]}}"#;
    let pm = PMatrix::from_json(serde_json::from_str(json).unwrap(), 1).unwrap();
    let mut ex = EkExpander::new(&pm);
    assert_eq!(
        ex.expand(1, &w(&[2])).unwrap(),
        combo(&[(&[2], 1), (&[0], 3)])
    );
    assert!(matches!(ex.expand(1, &w(&[3])), Err(Error::DataGap { .. })));
    assert_eq!(pm.get(&w(&[1]), &w(&[2])).unwrap(), 0);
    assert!(matches!(
        pm.get(&w(&[1]), &w(&[5])),
        Err(Error::DataGap { .. })
    ));
}

#[test]
fn recursion_by_hand() {
    let pm = banded(2);
    let mut ex = EkExpander::new(&pm);
    // 3 = 1 + 2·1: E¹ = E⁰_3 − E⁰_1, E² picks column 1 of P only
    assert_eq!(
        ex.expand(1, &w(&[3])).unwrap(),
        combo(&[(&[3], 1), (&[1], -1)])
    );
    assert_eq!(
        ex.expand(2, &w(&[3])).unwrap(),
        combo(&[(&[3], 1), (&[1], -1)])
    );
    assert_eq!(stabilize(&w(&[3]), &pm, 6).unwrap().k_stable, Some(2));
    // λ = 2ω, λ₀ = 0: the sum runs over μ ∈ 2X ∩ X₊
    let t = ex.transition(2, &w(&[2])).unwrap();
    assert!(t.0.keys().all(|mu| mu.0[0] % 2 == 0));
    // 4 = 2·2: column 2 of P gives E¹_4 − E¹_0
    assert_eq!(
        ex.transition(2, &w(&[4])).unwrap(),
        combo(&[(&[4], 1), (&[0], -1)])
    );
    let s = stabilize(&w(&[1]), &pm, 4).unwrap();
    assert_eq!(s.k_stable, Some(1));
}

#[test]
fn transitions_are_unitriangular_with_congruence_support() {
    for p in [2, 3] {
        let pm = banded(p);
        let mut ex = EkExpander::new(&pm);
        for k in 1..4 {
            for l in 0..=12 {
                let lam = w(&[l]);
                let Ok(t) = ex.transition(k, &lam) else {
                    continue;
                };
                let sigma = prefix(&lam, p, k).unwrap();
                let m = p.pow((k - 1) as u32);
                assert_eq!(t.get(&lam), 1, "p={p} k={k} λ={l}");
                for mu in t.0.keys() {
                    assert!(mu.0[0] <= l);
                    assert_eq!((mu.0[0] - sigma.0[0]) % m, 0);
                }
            }
        }
    }
}

#[test]
fn pmatrix_json_round_trip() {
    let pm = banded(3);
    let j = serde_json::to_string(&pm.to_json()).unwrap();
    let back = PMatrix::from_json(serde_json::from_str(&j).unwrap(), 1).unwrap();
    for l in 0..=12 {
        assert_eq!(back.column(&w(&[l])).unwrap(), pm.column(&w(&[l])).unwrap());
    }
    assert!(back.validate().is_empty());
}
