use super::*;
use crate::loop_algebra::AlgebraConfig;
use crate::modules::{tv_single, TruncationBox};
use crate::rational::q;
use crate::root_system::{build_root_system, RootSystemData, Series, Weight};
use std::sync::Arc;

fn tower(root: Arc<RootSystemData>, k: usize, p: i64, lambda: &[i64]) -> Tower {
    let cfg = AlgebraConfig::new(root, k, p).unwrap();
    let boxes = vec![TruncationBox::new(2, 2); k];
    Tower::new(cfg, Weight(lambda.to_vec()), &boxes).unwrap()
}

fn a1() -> Arc<RootSystemData> {
    Arc::new(build_root_system(Series::A, 1).unwrap())
}

fn g(x: ChevalleyElement, n: &[i32]) -> Gen {
    Gen::Loop(LoopGen::new(x, n))
}

/// `g_1 ⋯ g_r · v_0`, applied right to left.
fn word(t: &Tower, gens: &[Gen]) -> TVec {
    let mut v = tv_single(t.vacuum(t.top_level()));
    for g in gens.iter().rev() {
        v = t.act_vec(g, &v).unwrap();
    }
    v
}

fn spanning(t: &Tower) -> Vec<(String, TVec)> {
    let r = t.root().clone();
    let (e, f, h) = (r.e(0), r.f(0), r.cartan(0));
    let z = |d: i32| -> Vec<i32> {
        let mut n = vec![0; t.top_level() - 1];
        n.push(d);
        n
    };
    let lat = |a: i32, d: i32| -> Vec<i32> {
        let mut n = vec![a; t.top_level() - 1];
        n.push(d);
        n
    };
    let words: Vec<(&str, Vec<Gen>)> = vec![
        ("v0", vec![]),
        ("f(0)v0", vec![g(f, &z(0))]),
        ("f(-1)v0", vec![g(f, &z(-1))]),
        ("e(-1)v0", vec![g(e, &z(-1))]),
        ("h(1;-1)v0", vec![g(h, &lat(1, -1))]),
        ("h(-2)v0", vec![g(h, &z(-2))]),
        ("f(-1;-1)e(-1)v0", vec![g(f, &lat(-1, -1)), g(e, &z(-1))]),
        ("e(1;-2)v0", vec![g(e, &lat(1, -2))]),
    ];
    words
        .into_iter()
        .map(|(l, w)| (l.to_string(), word(t, &w)))
        .filter(|(_, v)| !v.is_empty())
        .collect()
}

fn half_casimir(r: &RootSystemData, lam: &Weight) -> Q {
    let rho = Weight(vec![1; r.rank]);
    r.weight_form(lam, &lam.add(&rho.scale(2))) / q(2)
}

#[test]
fn top_vectors_see_the_casimir() {
    for (r, lam) in [
        (a1(), vec![0]),
        (a1(), vec![1]),
        (a1(), vec![2]),
        (a1(), vec![3]),
        (
            Arc::new(build_root_system(Series::A, 2).unwrap()),
            vec![1, 0],
        ),
        (
            Arc::new(build_root_system(Series::A, 2).unwrap()),
            vec![1, 1],
        ),
    ] {
        let t = tower(r.clone(), 1, 2, &lam);
        let ctx = SugawaraContext::new(&t);
        let v0 = tv_single(t.vacuum(1));
        let mut want = TVec::new();
        tv_add_scaled(&mut want, &v0, &half_casimir(&r, &Weight(lam.clone())));
        assert_eq!(ctx.apply_l0(&v0).unwrap(), want, "λ = {lam:?}");
    }
    let t = tower(a1(), 1, 2, &[1]);
    let v0 = tv_single(t.vacuum(1));
    assert_eq!(
        SugawaraContext::new(&t).apply_l0(&v0).unwrap()[&t.vacuum(1)],
        Q::new(3.into(), 4.into())
    );
}

#[test]
fn vacuum_module_degree_minus_one() {
    // on the vacuum module L_0 = −(c + h∨)·d, and c + h∨ = −p
    let t = tower(a1(), 1, 2, &[0]);
    let ctx = SugawaraContext::new(&t);
    let v = word(&t, &[g(t.root().f(0), &[-1])]);
    let mut want = TVec::new();
    tv_add_scaled(&mut want, &v, &q(-2));
    assert_eq!(ctx.apply_l0(&v).unwrap(), want);
    assert!(ctx.apply_l0(&tv_single(t.vacuum(1))).unwrap().is_empty());
}

#[test]
fn l0_preserves_degrees() {
    for k in [1, 2] {
        let t = tower(a1(), k, 2, &[1]);
        let ctx = SugawaraContext::new(&t);
        for (label, v) in spanning(&t) {
            let l0v = ctx.apply_l0(&v).unwrap();
            let dk = Gen::D(k as u8);
            let lhs = t.act_vec(&dk, &l0v).unwrap();
            let rhs = ctx.apply_l0(&t.act_vec(&dk, &v).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "{label}");
        }
    }
}

#[test]
fn cutoff_stabilizes_and_differs_by_a_scalar() {
    let t = tower(a1(), 2, 2, &[0]);
    let ctx = SugawaraContext::new(&t);
    let mut saw_unstable = false;
    for (label, v) in spanning(&t) {
        let full = ctx.apply_l0(&v).unwrap();
        let depth = ctx.depth(&v) as u32;
        for m in 0..depth + 3 {
            let cut = ctx.apply_l0_cutoff(&v, m, Cutoff::NormalOrdered).unwrap();
            if m >= depth {
                assert_eq!(cut, full, "{label} m={m}");
            } else if cut != full {
                saw_unstable = true;
            }
            let mut raw = cut.clone();
            tv_add_scaled(&mut raw, &v, &ctx.cutoff_central_term(m));
            assert_eq!(
                ctx.apply_l0_cutoff(&v, m, Cutoff::Raw).unwrap(),
                raw,
                "{label} m={m}"
            );
        }
    }
    assert!(saw_unstable);
}

#[test]
fn classical_ratio_is_n_times_shifted_level() {
    for p in [2, 3] {
        for lam in [0, 1, 2] {
            let t = tower(a1(), 1, p, &[lam]);
            let ctx = SugawaraContext::new(&t);
            let want = t.level_scalar(1) + q(t.root().dual_coxeter);
            for x in t.root().basis() {
                for n in -2..=2 {
                    for (label, v) in spanning(&t) {
                        let alpha = ctx.classical_ratio(x, &[n], &v).unwrap();
                        if t.act_vec(&g(x, &[n]), &v).unwrap().is_empty() {
                            assert!(ctx.commutator_lhs(x, &[n], &v).unwrap().is_empty());
                            continue;
                        }
                        assert_eq!(
                            alpha,
                            Some(&want * q(n as i64)),
                            "p={p} λ={lam} n={n} {label}"
                        );
                        assert_eq!(
                            ctx.classical_rhs(x, &[n], &v).unwrap(),
                            ctx.commutator_lhs(x, &[n], &v).unwrap()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn theorem_holds_on_grid() {
    let t = tower(a1(), 2, 2, &[1]);
    let ctx = SugawaraContext::new(&t);
    let xs: Vec<_> = t.root().basis().collect();
    let ns = vec![
        vec![1, -1],
        vec![-1, 0],
        vec![1, 0],
        vec![2, 1],
        vec![-1, -2],
        vec![1, 2],
        vec![0, -1],
        vec![0, 1],
    ];
    let vs = spanning(&t);
    let cases = verify_grid(&ctx, &xs, &ns, &vs).unwrap();
    assert!(cases.len() >= 20);
    assert!(cases.iter().any(|c| c.branch == "classical"));
    assert!(cases.iter().filter(|c| c.lhs_terms > 0).count() >= 20);
    for c in &cases {
        assert!(c.pass, "{c:?}");
    }
}

#[test]
fn spec_examples() {
    let t = tower(a1(), 2, 2, &[0]);
    let ctx = SugawaraContext::new(&t);
    let r = t.root().clone();
    let v0 = tv_single(t.vacuum(2));
    let lhs = ctx.commutator_lhs(r.e(0), &[1, -1], &v0).unwrap();
    assert!(!lhs.is_empty());
    assert_eq!(lhs, ctx.commutator_rhs(r.e(0), &[1, -1], &v0).unwrap());
    let v = word(&t, &[g(r.f(0), &[0, -1])]);
    assert_eq!(
        ctx.commutator_lhs(r.cartan(0), &[2, 0], &v).unwrap(),
        ctx.commutator_rhs(r.cartan(0), &[2, 0], &v).unwrap()
    );
    assert_eq!(
        ctx.commutator_lhs(r.e(0), &[1, 0], &v0).unwrap(),
        ctx.commutator_rhs(r.e(0), &[1, 0], &v0).unwrap()
    );
    for x in r.basis() {
        for (_, v) in spanning(&t) {
            assert!(ctx.commutator_lhs(x, &[0, 0], &v).unwrap().is_empty());
        }
    }
    assert!(matches!(
        ctx.commutator_rhs(r.e(0), &[0, 1], &v0),
        Err(Error::Invalid(_))
    ));
    assert!(matches!(
        ctx.classical_rhs(r.e(0), &[1, 1], &v0),
        Err(Error::Invalid(_))
    ));
    assert!(ctx.classical_rhs(r.e(0), &[0, -1], &v0).is_ok());
}

#[test]
fn identity_shift_cancels() {
    let t = tower(a1(), 2, 3, &[1]);
    let ctx = SugawaraContext::new(&t);
    let r = t.root().clone();
    for (_, v) in spanning(&t) {
        for s in [q(1), q(-7), Q::new(5.into(), 3.into())] {
            assert_eq!(
                ctx.commutator_lhs(r.f(0), &[1, -1], &v).unwrap(),
                ctx.commutator_lhs_shifted(r.f(0), &[1, -1], &v, &s)
                    .unwrap()
            );
        }
    }
}

#[test]
fn strict_mode_reports_overflow() {
    let cfg = AlgebraConfig::new(a1(), 1, 2).unwrap();
    let t = Tower::new(cfg, Weight(vec![0]), &[TruncationBox::new(1, 0)]).unwrap();
    let ctx = SugawaraContext::new(&t).strict();
    let v = word(&t, &[g(t.root().f(0), &[-2])]);
    assert!(matches!(ctx.apply_l0(&v), Err(Error::Overflow(_))));
}
