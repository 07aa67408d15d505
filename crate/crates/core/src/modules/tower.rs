//! The induction tower `C_λ → M(λ) → Ind¹ → … → Indᵏ`.
//!
//! Level 0 is the Verma module of `g` (minus part `n⁻`), level `j ≥ 1` is
//! induced from level `j − 1` along `ĝ_j⁺`. Vectors are kept unreduced and
//! unboxed; the irreducible quotient at each level is realized by choosing,
//! per block, Gram-independent representatives among the in-box basis
//! vectors. Pairings of unreduced vectors agree with pairings in the
//! quotients because the contravariant form vanishes on the radicals.

use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::enveloping::{Enveloping, Monomial, PbwSpan};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Solver};
use crate::loop_algebra::{AlgebraConfig, Gen, LoopAlgebra, LoopGen, MultiIndex};
use crate::rational::Q;
use crate::root_system::{ChevalleyElement, RootSystemData, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct TruncationBox {
    /// Maximal `t_j`-depth `Σ|n_j|` of a monomial.
    pub depth: u32,
    /// Bound on `|n_i|`, `i < j`, for each factor.
    pub lateral: u32,
}

impl TruncationBox {
    pub fn new(depth: u32, lateral: u32) -> Self {
        TruncationBox { depth, lateral }
    }
}

/// Basis vector of the tower: one PBW monomial per level, level 0 first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key(pub Vec<Monomial>);

impl Key {
    pub fn vacuum(level: usize) -> Self {
        Key(vec![Monomial::one(); level + 1])
    }

    pub fn level(&self) -> usize {
        self.0.len() - 1
    }

    pub fn top(&self) -> &Monomial {
        self.0.last().expect("nonempty key")
    }

    pub fn lower(&self) -> Key {
        Key(self.0[..self.0.len() - 1].to_vec())
    }

    pub fn with_top(&self, m: Monomial) -> Key {
        let mut v = self.0.clone();
        *v.last_mut().expect("nonempty key") = m;
        v.into()
    }

    pub fn raise(&self, m: Monomial) -> Key {
        let mut v = self.0.clone();
        v.push(m);
        Key(v)
    }
}

impl From<Vec<Monomial>> for Key {
    fn from(v: Vec<Monomial>) -> Self {
        Key(v)
    }
}

/// Interned handle of a [`Key`] inside one tower.
pub type KeyId = u32;

pub type TVec = BTreeMap<KeyId, Q>;

pub fn tv_add(out: &mut TVec, k: KeyId, c: Q) {
    if c.is_zero() {
        return;
    }
    match out.get_mut(&k) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                out.remove(&k);
            }
        }
        None => {
            out.insert(k, c);
        }
    }
}

pub fn tv_add_scaled(out: &mut TVec, v: &TVec, s: &Q) {
    for (k, c) in v {
        tv_add(out, *k, c * s);
    }
}

pub fn tv_single(k: KeyId) -> TVec {
    let mut v = TVec::new();
    v.insert(k, Q::one());
    v
}

/// `(d_1, …, d_j)` eigenvalues together with the `g`-weight.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockKey {
    pub degrees: Vec<i64>,
    pub weight: Weight,
}

impl BlockKey {
    pub fn level(&self) -> usize {
        self.degrees.len()
    }
}

/// Gram data of one block: the in-box basis, its Gram matrix and the
/// representatives of the irreducible quotient.
#[derive(Debug)]
pub struct QuotBlock {
    pub key: BlockKey,
    pub basis: Vec<KeyId>,
    pub gram: Matrix,
    /// Positions in `basis` of the representatives.
    pub reps: Vec<usize>,
    /// Solver for the Gram matrix restricted to the representatives.
    pub solver: Solver,
}

impl QuotBlock {
    pub fn rep_ids(&self) -> impl Iterator<Item = KeyId> + '_ {
        self.reps.iter().map(|&i| self.basis[i])
    }

    pub fn radical_dim(&self) -> usize {
        self.basis.len() - self.reps.len()
    }
}

type Groups = BTreeMap<(Vec<i64>, Weight), Vec<Monomial>>;

struct KeyInfo {
    key: Key,
    block: u32,
    in_box: bool,
}

#[derive(Default)]
struct Interner {
    infos: Vec<Arc<KeyInfo>>,
    map: HashMap<Key, KeyId>,
    blocks: Vec<BlockKey>,
    block_map: HashMap<BlockKey, u32>,
}

/// Action matrices keyed by (transpose flag, generator, source block).
type MatrixMemo = HashMap<(bool, Gen, BlockKey), Option<Arc<crate::linalg::Matrix>>>;

pub struct Tower {
    pub config: AlgebraConfig,
    pub lambda: Weight,
    /// `boxes[j]` truncates level `j`; `boxes[0]` is unused.
    pub boxes: Vec<TruncationBox>,
    envs: Vec<Enveloping>,
    interner: Mutex<Interner>,
    act_memo: Mutex<HashMap<(Gen, KeyId), Arc<TVec>>>,
    pair_memo: Mutex<HashMap<(KeyId, KeyId), Q>>,
    quot: Mutex<HashMap<BlockKey, Arc<QuotBlock>>>,
    /// Exact block action matrices per view kind; `None` when not exact.
    pub(crate) matrices: Mutex<MatrixMemo>,
    groups: Vec<OnceLock<Groups>>,
    level0_height: u32,
}

impl Tower {
    /// Builds the tower up to level `config.k` over `V(λ)`; `boxes[j-1]`
    /// truncates level `j`.
    pub fn new(config: AlgebraConfig, lambda: Weight, boxes: &[TruncationBox]) -> Result<Self> {
        let root = config.root.clone();
        if lambda.0.len() != root.rank {
            return Err(Error::Mismatch(format!(
                "weight of rank {} for rank {}",
                lambda.0.len(),
                root.rank
            )));
        }
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        if boxes.len() != config.k {
            return Err(Error::Invalid(format!(
                "need {} truncation boxes, got {}",
                config.k,
                boxes.len()
            )));
        }
        let mut envs = vec![Enveloping::new(
            LoopAlgebra::new(root.clone(), 0),
            PbwSpan::NegativeRoots,
        )];
        for j in 1..=config.k {
            envs.push(Enveloping::new(
                LoopAlgebra::new(root.clone(), j),
                PbwSpan::LoopMinus,
            ));
        }
        let mut all_boxes = vec![TruncationBox::new(0, 0)];
        all_boxes.extend_from_slice(boxes);
        let level0_height = lowest_weight_height(&root, &lambda);
        Ok(Tower {
            groups: (0..=config.k).map(|_| OnceLock::new()).collect(),
            config,
            lambda,
            boxes: all_boxes,
            envs,
            interner: Mutex::new(Interner::default()),
            act_memo: Mutex::new(HashMap::new()),
            pair_memo: Mutex::new(HashMap::new()),
            quot: Mutex::new(HashMap::new()),
            matrices: Mutex::new(HashMap::new()),
            level0_height,
        })
    }

    pub fn root(&self) -> &Arc<RootSystemData> {
        &self.config.root
    }

    pub fn top_level(&self) -> usize {
        self.config.k
    }

    pub fn algebra(&self, level: usize) -> &LoopAlgebra {
        &self.envs[level].alg
    }

    pub fn enveloping(&self, level: usize) -> &Enveloping {
        &self.envs[level]
    }

    pub fn level_scalar(&self, i: usize) -> Q {
        self.config.level(i)
    }

    /// Sizes of the key table, action memo and pairing memo.
    pub fn memo_sizes(&self) -> (usize, usize, usize) {
        (
            self.interner.lock().unwrap().infos.len(),
            self.act_memo.lock().unwrap().len(),
            self.pair_memo.lock().unwrap().len(),
        )
    }

    // ---- keys ----------------------------------------------------------

    pub fn intern(&self, key: Key) -> KeyId {
        if let Some(&id) = self.interner.lock().unwrap().map.get(&key) {
            return id;
        }
        let bk = self.compute_block(&key);
        let in_box = self.compute_in_box(&key);
        let mut int = self.interner.lock().unwrap();
        if let Some(&id) = int.map.get(&key) {
            return id;
        }
        let block = match int.block_map.get(&bk) {
            Some(&b) => b,
            None => {
                let b = int.blocks.len() as u32;
                int.blocks.push(bk.clone());
                int.block_map.insert(bk, b);
                b
            }
        };
        let id = int.infos.len() as KeyId;
        int.infos.push(Arc::new(KeyInfo {
            key: key.clone(),
            block,
            in_box,
        }));
        int.map.insert(key, id);
        id
    }

    fn info(&self, id: KeyId) -> Arc<KeyInfo> {
        self.interner.lock().unwrap().infos[id as usize].clone()
    }

    pub fn key(&self, id: KeyId) -> Key {
        self.info(id).key.clone()
    }

    pub fn vacuum(&self, level: usize) -> KeyId {
        self.intern(Key::vacuum(level))
    }

    pub fn level_of(&self, id: KeyId) -> usize {
        self.info(id).key.level()
    }

    pub fn block_of(&self, id: KeyId) -> BlockKey {
        let b = self.info(id).block;
        self.interner.lock().unwrap().blocks[b as usize].clone()
    }

    fn block_index(&self, id: KeyId) -> u32 {
        self.info(id).block
    }

    /// `d_i` eigenvalue of a basis vector (before any grading shift).
    pub fn d_eigen(&self, id: KeyId, i: usize) -> i64 {
        self.block_of(id).degrees[i - 1]
    }

    /// Whether every level's monomial respects its truncation box.
    pub fn key_in_box(&self, id: KeyId) -> bool {
        self.info(id).in_box
    }

    fn monomial_weight(&self, m: &Monomial) -> Weight {
        let root = self.root();
        let mut w = Weight::zero(root.rank);
        for (g, e) in &m.0 {
            if !root.is_cartan(g.x) {
                w = w.add(&root.root_to_weight(&root.root_of(g.x)).scale(*e as i64));
            }
        }
        w
    }

    fn monomial_degrees(m: &Monomial, len: usize) -> Vec<i64> {
        let mut d = vec![0i64; len];
        for (g, e) in &m.0 {
            for (i, di) in d.iter_mut().enumerate() {
                *di += g.n.0[i] as i64 * *e as i64;
            }
        }
        d
    }

    fn compute_block(&self, key: &Key) -> BlockKey {
        let j = key.level();
        let mut degrees = vec![0i64; j];
        let mut weight = self.lambda.clone();
        for (l, m) in key.0.iter().enumerate() {
            weight = weight.add(&self.monomial_weight(m));
            for (i, d) in Self::monomial_degrees(m, l).into_iter().enumerate() {
                degrees[i] += d;
            }
        }
        BlockKey { degrees, weight }
    }

    fn compute_in_box(&self, key: &Key) -> bool {
        (1..=key.level()).all(|l| {
            let m = &key.0[l];
            let b = &self.boxes[l];
            let depth: i64 =
                m.0.iter()
                    .map(|(g, e)| -(g.n.last() as i64) * *e as i64)
                    .sum();
            depth <= b.depth as i64
                && (l < 2
                    || m.0
                        .iter()
                        .all(|(g, _)| g.n.0[..l - 1].iter().all(|v| v.unsigned_abs() <= b.lateral)))
        })
    }

    // ---- action --------------------------------------------------------

    fn check_gen(&self, g: &Gen, level: usize) -> Result<()> {
        let ok = match g {
            Gen::Loop(l) => l.n.len() == level && (l.x.0 as usize) < self.root().dim(),
            Gen::C(i) | Gen::D(i) => (1..=level).contains(&(*i as usize)),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Mismatch(format!(
                "generator {g:?} does not act at level {level}"
            )))
        }
    }

    /// `g · key` for a generator of `ĝ_j`, `j` the key's level.
    pub fn act(&self, g: &Gen, id: KeyId) -> Result<TVec> {
        Ok((*self.act_shared(g, id)?).clone())
    }

    fn act_shared(&self, g: &Gen, id: KeyId) -> Result<Arc<TVec>> {
        self.check_gen(g, self.level_of(id))?;
        match g {
            Gen::C(i) => Ok(Arc::new(scalar_vec(id, self.level_scalar(*i as usize)))),
            Gen::D(i) => Ok(Arc::new(scalar_vec(
                id,
                Q::from_integer(self.d_eigen(id, *i as usize).into()),
            ))),
            Gen::Loop(lg) => self.act_loop(lg, id),
        }
    }

    pub fn act_vec(&self, g: &Gen, v: &TVec) -> Result<TVec> {
        let mut out = TVec::new();
        for (k, c) in v {
            tv_add_scaled(&mut out, &*self.act_shared(g, *k)?, c);
        }
        Ok(out)
    }

    fn is_minus(&self, lg: &LoopGen) -> bool {
        if lg.n.is_empty() {
            self.root().is_negative_root(lg.x)
        } else {
            lg.n.last() < 0
        }
    }

    fn left_mul(&self, y: &LoopGen, v: &TVec) -> Result<TVec> {
        let j = y.n.len();
        let mut out = TVec::new();
        for (k, c) in v {
            let key = self.key(*k);
            for (m, c2) in self.envs[j].left_mul_gen(y, key.top())?.terms() {
                tv_add(&mut out, self.intern(key.with_top(m.clone())), c * c2);
            }
        }
        Ok(out)
    }

    fn act_loop(&self, lg: &LoopGen, id: KeyId) -> Result<Arc<TVec>> {
        let memo_key = (Gen::Loop(lg.clone()), id);
        if let Some(v) = self.act_memo.lock().unwrap().get(&memo_key) {
            return Ok(v.clone());
        }
        let key = self.key(id);
        let j = key.level();
        let out = if self.is_minus(lg) {
            self.left_mul(lg, &tv_single(id))?
        } else {
            match key.top().0.first() {
                None => self.act_on_base(lg, &key)?,
                Some((y1, _)) => {
                    let y1 = y1.clone();
                    let rest = self
                        .intern(key.with_top(key.top().without_one(&y1).expect("factor present")));
                    let inner = self.act_loop(lg, rest)?;
                    let mut out = self.left_mul(&y1, &inner)?;
                    let br = self.envs[j]
                        .alg
                        .bracket_gens(&Gen::Loop(lg.clone()), &Gen::Loop(y1));
                    for (h, c) in br.terms() {
                        tv_add_scaled(&mut out, &*self.act_shared(h, rest)?, c);
                    }
                    out
                }
            }
        };
        let out = Arc::new(out);
        self.act_memo.lock().unwrap().insert(memo_key, out.clone());
        Ok(out)
    }

    /// A non-lowering generator on `1 ⊗ base`.
    fn act_on_base(&self, lg: &LoopGen, key: &Key) -> Result<TVec> {
        let j = key.level();
        let mut out = TVec::new();
        if j == 0 {
            if let crate::root_system::BasisKind::Cartan(i) = self.root().kind(lg.x) {
                tv_add(
                    &mut out,
                    self.intern(key.clone()),
                    self.root().weight_on_cartan(&self.lambda, i),
                );
            }
            return Ok(out);
        }
        if lg.n.last() > 0 {
            return Ok(out);
        }
        let lower = LoopGen {
            x: lg.x,
            n: lg.n.truncate_last(),
        };
        for (k, c) in self.act_loop(&lower, self.intern(key.lower()))?.iter() {
            tv_add(
                &mut out,
                self.intern(self.key(*k).raise(Monomial::one())),
                c.clone(),
            );
        }
        Ok(out)
    }

    // ---- contravariant form --------------------------------------------

    /// `⟨a, b⟩`, normalized by `⟨v_λ, v_λ⟩ = 1`.
    pub fn pairing(&self, a: KeyId, b: KeyId) -> Result<Q> {
        if self.block_index(a) != self.block_index(b) {
            return Ok(Q::zero());
        }
        if let Some(v) = self.pair_memo.lock().unwrap().get(&(a, b)) {
            return Ok(v.clone());
        }
        let ka = self.key(a);
        let j = ka.level();
        let out = match ka.top().0.first() {
            None => {
                let kb = self.key(b);
                if !kb.top().is_one() {
                    Q::zero()
                } else if j == 0 {
                    Q::one()
                } else {
                    self.pairing(self.intern(ka.lower()), self.intern(kb.lower()))?
                }
            }
            Some((y, _)) => {
                // ⟨y·rest, b⟩ = ⟨rest, σ(y)·b⟩
                let rest =
                    self.intern(ka.with_top(ka.top().without_one(y).expect("factor present")));
                let sy = self.envs[j].alg.sigma_gen(&Gen::Loop(y.clone()));
                let mut s = Q::zero();
                for (k, c) in self.act_shared(&sy, b)?.iter() {
                    let p = self.pairing(rest, *k)?;
                    if !p.is_zero() {
                        s += c * p;
                    }
                }
                s
            }
        };
        self.pair_memo.lock().unwrap().insert((a, b), out.clone());
        Ok(out)
    }

    pub fn pairing_vec(&self, a: &TVec, b: &TVec) -> Result<Q> {
        let mut s = Q::zero();
        for (ka, ca) in a {
            for (kb, cb) in b {
                let p = self.pairing(*ka, *kb)?;
                if !p.is_zero() {
                    s += ca * cb * p;
                }
            }
        }
        Ok(s)
    }

    // ---- block enumeration ----------------------------------------------

    /// In-box monomials of one level grouped by degree and weight
    /// contributions. Level 0 uses all `n⁻` monomials up to the height of
    /// `λ − w₀λ`.
    fn groups(&self, level: usize) -> &Groups {
        self.groups[level].get_or_init(|| {
            let root = self.root().clone();
            let mut gens = Vec::new();
            let mut cost = Vec::new();
            if level == 0 {
                for x in root.basis().filter(|&x| root.is_negative_root(x)) {
                    gens.push(LoopGen::new(x, &[]));
                    cost.push(root.root_of(x).iter().map(|c| -c).sum::<i64>() as u32);
                }
            } else {
                let b = self.boxes[level];
                let lat = b.lateral as i32;
                for x in root.basis() {
                    for tail in lateral_tuples(level - 1, lat) {
                        for d in 1..=b.depth as i32 {
                            let mut n = tail.clone();
                            n.push(-d);
                            gens.push(LoopGen::new(x, &n));
                            cost.push(d as u32);
                        }
                    }
                }
            }
            let mut order: Vec<usize> = (0..gens.len()).collect();
            order.sort_by(|&a, &b| gens[a].cmp(&gens[b]));
            let gens: Vec<LoopGen> = order.iter().map(|&i| gens[i].clone()).collect();
            let cost: Vec<u32> = order.iter().map(|&i| cost[i]).collect();
            let budget = if level == 0 {
                self.level0_height
            } else {
                self.boxes[level].depth
            };
            let mut out = Groups::new();
            let mut cur: Vec<(LoopGen, u32)> = Vec::new();
            enumerate_multisets(&gens, &cost, 0, budget, &mut cur, &mut |m| {
                let mono = Monomial(m.to_vec());
                let key = (
                    Self::monomial_degrees(&mono, level),
                    self.monomial_weight(&mono),
                );
                out.entry(key).or_default().push(mono);
            });
            out
        })
    }

    /// All in-box blocks at a level with a nonzero truncated basis.
    pub fn blocks(&self, level: usize) -> Result<Vec<BlockKey>> {
        let mut out = std::collections::BTreeSet::new();
        if level == 0 {
            for (_, w) in self.groups(0).keys() {
                out.insert(BlockKey {
                    degrees: vec![],
                    weight: self.lambda.add(w),
                });
            }
        } else {
            let base = self.blocks(level - 1)?;
            for (d, w) in self.groups(level).keys() {
                for bb in &base {
                    if self.quot_block(bb)?.reps.is_empty() {
                        continue;
                    }
                    let mut degrees: Vec<i64> =
                        bb.degrees.iter().zip(d).map(|(a, b)| a + b).collect();
                    degrees.push(d[level - 1]);
                    out.insert(BlockKey {
                        degrees,
                        weight: bb.weight.add(w),
                    });
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    fn block_basis(&self, bk: &BlockKey) -> Result<Vec<KeyId>> {
        let j = bk.level();
        let mut basis = Vec::new();
        if j == 0 {
            let diff = bk.weight.sub(&self.lambda);
            for ((_, w), monos) in self.groups(0) {
                if *w == diff {
                    basis.extend(monos.iter().map(|m| Key(vec![m.clone()])));
                }
            }
        } else {
            for ((d, w), monos) in self.groups(j) {
                if d[j - 1] != bk.degrees[j - 1] {
                    continue;
                }
                let base_key = BlockKey {
                    degrees: bk.degrees[..j - 1]
                        .iter()
                        .zip(d)
                        .map(|(a, b)| a - b)
                        .collect(),
                    weight: bk.weight.sub(w),
                };
                if !self.base_block_in_box(&base_key) {
                    continue;
                }
                let qb = self.quot_block(&base_key)?;
                for r in qb.rep_ids() {
                    let rk = self.key(r);
                    for m in monos {
                        basis.push(rk.raise(m.clone()));
                    }
                }
            }
        }
        basis.sort();
        Ok(basis.into_iter().map(|k| self.intern(k)).collect())
    }

    pub fn base_block_in_box(&self, bk: &BlockKey) -> bool {
        let j = bk.level();
        j == 0 || -bk.degrees[j - 1] <= self.boxes[j].depth as i64
    }

    /// Gram data for a block, computed on first use.
    pub fn quot_block(&self, bk: &BlockKey) -> Result<Arc<QuotBlock>> {
        if let Some(b) = self.quot.lock().unwrap().get(bk) {
            return Ok(b.clone());
        }
        if !self.base_block_in_box(bk) {
            return Err(Error::Overflow(format!(
                "block {:?} below the truncation depth",
                bk.degrees
            )));
        }
        let basis = self.block_basis(bk)?;
        let n = basis.len();
        let mut gram = Matrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                gram[(a, b)] = self.pairing(basis[a], basis[b])?;
            }
        }
        let reps = gram.independent_columns();
        let mut sub = Matrix::zeros(reps.len(), reps.len());
        for (a, &ra) in reps.iter().enumerate() {
            for (b, &rb) in reps.iter().enumerate() {
                sub[(a, b)] = gram[(ra, rb)].clone();
            }
        }
        let solver = Solver::new(&sub).ok_or(Error::DegenerateTop)?;
        let qb = Arc::new(QuotBlock {
            key: bk.clone(),
            basis,
            gram,
            reps,
            solver,
        });
        self.quot.lock().unwrap().insert(bk.clone(), qb.clone());
        Ok(qb)
    }

    // ---- coordinates ---------------------------------------------------

    fn check_box(&self, v: &TVec) -> Result<()> {
        match v.keys().find(|&&k| !self.key_in_box(k)) {
            Some(&k) => Err(Error::Overflow(format!(
                "vector leaves the box in block {:?}",
                self.block_of(k).degrees
            ))),
            None => Ok(()),
        }
    }

    /// Coordinates of a vector in the irreducible quotient, in terms of
    /// block representatives.
    pub fn project(&self, v: &TVec) -> Result<TVec> {
        self.check_box(v)?;
        let mut by_block: BTreeMap<BlockKey, TVec> = BTreeMap::new();
        for (k, c) in v {
            by_block
                .entry(self.block_of(*k))
                .or_default()
                .insert(*k, c.clone());
        }
        let mut out = TVec::new();
        for (bk, part) in by_block {
            let qb = self.quot_block(&bk)?;
            let rhs: Vec<Q> = qb
                .rep_ids()
                .map(|r| self.pairing_vec(&tv_single(r), &part))
                .collect::<Result<_>>()?;
            let y = qb.solver.solve(&rhs);
            for (r, c) in qb.rep_ids().zip(y) {
                tv_add(&mut out, r, c);
            }
        }
        Ok(out)
    }

    /// Coordinates of a level-`j` vector in the induced module over the
    /// irreducible quotient at level `j − 1`: the top monomial is kept and
    /// the base part is projected.
    pub fn induced_coords(&self, v: &TVec) -> Result<TVec> {
        self.check_box(v)?;
        let mut by_top: BTreeMap<Monomial, TVec> = BTreeMap::new();
        for (k, c) in v {
            let key = self.key(*k);
            if key.level() == 0 {
                return self.project(v);
            }
            tv_add(
                by_top.entry(key.top().clone()).or_default(),
                self.intern(key.lower()),
                c.clone(),
            );
        }
        let mut out = TVec::new();
        for (m, base) in by_top {
            for (r, c) in self.project(&base)? {
                tv_add(&mut out, self.intern(self.key(r).raise(m.clone())), c);
            }
        }
        Ok(out)
    }
}

fn scalar_vec(id: KeyId, c: Q) -> TVec {
    let mut v = TVec::new();
    tv_add(&mut v, id, c);
    v
}

fn lateral_tuples(len: usize, bound: i32) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (-bound..=bound).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

type Multiset = [(LoopGen, u32)];

fn enumerate_multisets(
    gens: &[LoopGen],
    cost: &[u32],
    start: usize,
    budget: u32,
    cur: &mut Vec<(LoopGen, u32)>,
    f: &mut dyn FnMut(&Multiset),
) {
    f(cur);
    for i in start..gens.len() {
        let c = cost[i];
        if c == 0 || c > budget {
            continue;
        }
        let mut e = 1;
        while e * c <= budget {
            cur.push((gens[i].clone(), e));
            enumerate_multisets(gens, cost, i + 1, budget - e * c, cur, f);
            cur.pop();
            e += 1;
        }
    }
}

/// Height of `λ − w₀λ`: the PBW degree needed to reach every weight of
/// `V(λ)` from the highest one.
fn lowest_weight_height(root: &RootSystemData, lambda: &Weight) -> u32 {
    let low = root
        .weyl_group()
        .into_iter()
        .map(|(w, _)| root.apply_word(&w, lambda))
        .find(|mu| mu.0.iter().all(|&c| c <= 0))
        .expect("antidominant orbit element");
    let diff = lambda.sub(&low);
    let mut h = Q::zero();
    for i in 0..root.rank {
        h += root.weight_on_cartan(&diff, i);
    }
    h.to_integer().try_into().expect("small height")
}

/// `x ⊗ t^n` as a generator.
pub fn loop_gen(x: ChevalleyElement, n: &[i32]) -> Gen {
    Gen::Loop(LoopGen {
        x,
        n: MultiIndex::new(n),
    })
}
