//! Fixed workloads shared by the benches.

use std::sync::Arc;

use loopalg::enveloping::{Enveloping, PbwElement, PbwSpan};
use loopalg::loop_algebra::{Gen, LoopAlgebra, LoopElement, LoopGen};
use loopalg::root_system::{build_root_system, ChevalleyElement, Series};

pub fn enveloping(rank: usize, k: usize) -> Enveloping {
    let root = Arc::new(build_root_system(Series::A, rank).expect("type A builds"));
    Enveloping::new(LoopAlgebra::new(root, k), PbwSpan::LoopMinus)
}

/// A length-`len` word of `ĝ_k⁻` generators in reverse PBW order, the worst
/// case for bubble rewriting.
pub fn reversed_word(u: &Enveloping, len: usize) -> Vec<LoopElement> {
    let k = u.alg.k;
    let dim = u.alg.root.dim() as u16;
    let mut gens: Vec<LoopGen> = (0..len)
        .map(|i| {
            let mut n = vec![(i as i32 % 5) - 2; k - 1];
            n.push(-1 - (i as i32 % 2));
            LoopGen::new(ChevalleyElement((i as u16 * 7 + 3) % dim), &n)
        })
        .collect();
    gens.sort();
    gens.reverse();
    gens.into_iter()
        .map(|g| LoopElement::gen(k, Gen::Loop(g)))
        .collect()
}

pub fn element(u: &Enveloping, len: usize) -> PbwElement {
    u.normal_order(&reversed_word(u, len))
        .expect("word lies in U(ĝ_k⁻)")
}
