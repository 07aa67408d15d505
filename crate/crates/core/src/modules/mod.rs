//! Weyl modules, induced modules and their irreducible quotients.

mod checks;
mod distinguish;
mod tower;

pub use checks::*;
pub use distinguish::*;
pub use tower::*;

use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::loop_algebra::{AlgebraConfig, Gen};
use crate::rational::{self, Q};
use crate::root_system::{ChevalleyElement, RootSystemData, Weight};

/// `V(λ)` with explicit action matrices on a weight basis, highest weight
/// first.
#[derive(Clone, Debug)]
pub struct WeylModule {
    pub lambda: Weight,
    pub weights: Vec<Weight>,
    pub matrices: BTreeMap<ChevalleyElement, Matrix>,
}

impl WeylModule {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn matrix(&self, x: ChevalleyElement) -> &Matrix {
        &self.matrices[&x]
    }
}

pub fn weyl_module(root: Arc<RootSystemData>, lambda: &Weight) -> Result<WeylModule> {
    let config = AlgebraConfig::new(root.clone(), 0, 2)?;
    let tower = Tower::new(config, lambda.clone(), &[])?;
    let mut blocks = tower.blocks(0)?;
    let height = |w: &Weight| -> Q {
        let d = lambda.sub(w);
        (0..root.rank).map(|i| root.weight_on_cartan(&d, i)).sum()
    };
    blocks.sort_by(|a, b| {
        height(&a.weight)
            .cmp(&height(&b.weight))
            .then(b.weight.cmp(&a.weight))
    });
    let mut basis = Vec::new();
    let mut weights = Vec::new();
    for bk in &blocks {
        for r in tower.quot_block(bk)?.rep_ids() {
            basis.push(r);
            weights.push(bk.weight.clone());
        }
    }
    let pos: BTreeMap<KeyId, usize> = basis.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let n = basis.len();
    let mut matrices = BTreeMap::new();
    for x in root.basis() {
        let mut m = Matrix::zeros(n, n);
        for (j, &b) in basis.iter().enumerate() {
            let v = tower.project(&tower.act(&loop_gen(x, &[]), b)?)?;
            for (k, c) in v {
                m[(pos[&k], j)] = c;
            }
        }
        matrices.insert(x, m);
    }
    let expected = root.weyl_dimension(lambda)?;
    if Q::from_integer(n.into()) != expected {
        return Err(Error::Invalid(format!(
            "V({:?}) has {} basis vectors, expected {}",
            lambda.0, n, expected
        )));
    }
    Ok(WeylModule {
        lambda: lambda.clone(),
        weights,
        matrices,
    })
}

/// A finite collection of graded blocks with in-box generator actions.
pub trait FiniteModule: Sync {
    /// Block labels in the module's own (shifted) grading.
    fn block_labels(&self) -> Vec<BlockKey>;
    fn block_dim(&self, label: &BlockKey) -> Result<usize>;
    /// Matrix of `g` from a block to its target block, or `None` when the
    /// action is not computable exactly inside the box.
    fn action_matrix(&self, g: &Gen, label: &BlockKey) -> Result<Option<(BlockKey, Matrix)>>;
    /// Number of independent commuting maps known in advance (the
    /// identity, or one projection per summand).
    fn commutant_lower_bound(&self) -> usize {
        1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ViewKind {
    /// `Ind^j_{j−1}` of the irreducible quotient at level `j − 1`.
    Induced,
    /// The irreducible quotient at level `j`.
    Quotient,
}

/// Level-`j` module of a tower restricted to selected blocks, with a
/// grading shift `m⃗` stored as metadata.
#[derive(Clone)]
pub struct ModuleView {
    pub tower: Arc<Tower>,
    pub level: usize,
    pub kind: ViewKind,
    pub shift: Vec<i64>,
    selection: Vec<BlockKey>,
}

impl ModuleView {
    pub fn new(
        tower: Arc<Tower>,
        level: usize,
        kind: ViewKind,
        shift: Vec<i64>,
        selection: Vec<BlockKey>,
    ) -> Result<Self> {
        if level > tower.top_level() || level == 0 && kind == ViewKind::Induced {
            return Err(Error::Invalid(format!("no {kind:?} view at level {level}")));
        }
        if shift.len() != level {
            return Err(Error::Mismatch(format!(
                "shift of length {} at level {level}",
                shift.len()
            )));
        }
        if let Some(b) = selection.iter().find(|b| b.level() != level) {
            return Err(Error::Mismatch(format!(
                "block {:?} not at level {level}",
                b.degrees
            )));
        }
        Ok(ModuleView {
            tower,
            level,
            kind,
            shift,
            selection,
        })
    }

    pub fn selection(&self) -> &[BlockKey] {
        &self.selection
    }

    pub fn shifted(&self, b: &BlockKey) -> BlockKey {
        BlockKey {
            degrees: b
                .degrees
                .iter()
                .zip(&self.shift)
                .map(|(d, s)| d + s)
                .collect(),
            weight: b.weight.clone(),
        }
    }

    pub fn unshifted(&self, b: &BlockKey) -> BlockKey {
        BlockKey {
            degrees: b
                .degrees
                .iter()
                .zip(&self.shift)
                .map(|(d, s)| d - s)
                .collect(),
            weight: b.weight.clone(),
        }
    }

    /// Basis keys of a tower block as seen by this view.
    pub fn basis(&self, b: &BlockKey) -> Result<Vec<KeyId>> {
        let qb = self.tower.quot_block(b)?;
        Ok(match self.kind {
            ViewKind::Induced => qb.basis.clone(),
            ViewKind::Quotient => qb.rep_ids().collect(),
        })
    }

    /// Contravariant Gram matrix of a tower block in this view's basis.
    pub fn gram(&self, b: &BlockKey) -> Result<Matrix> {
        let qb = self.tower.quot_block(b)?;
        Ok(match self.kind {
            ViewKind::Induced => qb.gram.clone(),
            ViewKind::Quotient => {
                let n = qb.reps.len();
                let mut m = Matrix::zeros(n, n);
                for (a, &ra) in qb.reps.iter().enumerate() {
                    for (c, &rc) in qb.reps.iter().enumerate() {
                        m[(a, c)] = qb.gram[(ra, rc)].clone();
                    }
                }
                m
            }
        })
    }

    /// Coordinates of a tower vector in this view.
    pub fn coords(&self, v: &TVec) -> Result<TVec> {
        match self.kind {
            ViewKind::Induced => self.tower.induced_coords(v),
            ViewKind::Quotient => self.tower.project(v),
        }
    }

    /// `g·v` in view coordinates; `d_i` picks up the shift.
    pub fn act(&self, g: &Gen, v: &TVec) -> Result<TVec> {
        let mut out = self.coords(&self.tower.act_vec(g, v)?)?;
        if let Gen::D(i) = g {
            tv_add_scaled(
                &mut out,
                v,
                &Q::from_integer(self.shift[*i as usize - 1].into()),
            );
        }
        Ok(out)
    }

    /// Whether `g` acts exactly on block `b`: images stay in the box and,
    /// for quotients, `σ(g)` maps the target representatives into the box.
    pub fn action_is_exact(&self, g: &Gen, b: &BlockKey) -> Result<bool> {
        let tower = &self.tower;
        for k in self.basis(b)? {
            if tower.act(g, k)?.keys().any(|&j| !tower.key_in_box(j)) {
                return Ok(false);
            }
        }
        if self.kind == ViewKind::Quotient {
            let Some(target) = target_block(tower.root(), g, b) else {
                return Ok(true);
            };
            if !tower.base_block_in_box(&target) {
                return Ok(false);
            }
            let sg = tower.algebra(self.level).sigma_gen(g);
            for r in self.basis(&target)? {
                if tower.act(&sg, r)?.keys().any(|&j| !tower.key_in_box(j)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `|v|_k`: the sum of `i` over nonzero components with `d_k = shift − i`.
    pub fn v_norm_k(&self, v: &TVec) -> Result<u64> {
        if v.values().all(|c| c.is_zero()) {
            return Err(Error::ZeroElement);
        }
        let degrees: std::collections::BTreeSet<i64> = v
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| -self.tower.d_eigen(*k, self.level))
            .collect();
        Ok(degrees.into_iter().map(|i| i as u64).sum())
    }

    /// Per-block dimensions for the module dump.
    pub fn dump(&self) -> Result<Value> {
        let root = self.tower.root();
        let mut blocks = Vec::new();
        for b in &self.selection {
            let qb = self.tower.quot_block(b)?;
            let s = self.shifted(b);
            blocks.push(json!({
                "degrees": s.degrees,
                "weight": s.weight.0,
                "dim": qb.basis.len(),
                "radical_dim": qb.radical_dim(),
                "quotient_dim": qb.reps.len(),
            }));
        }
        let boxes: Vec<Value> = self.tower.boxes[1..]
            .iter()
            .map(|b| json!({"depth": b.depth, "lateral": b.lateral}))
            .collect();
        Ok(json!({
            "type": root.label(),
            "k": self.level,
            "p": self.tower.config.p,
            "lambda": self.tower.lambda.0,
            "levels": (1..=self.level).map(|i| rational::to_string(&self.tower.level_scalar(i))).collect::<Vec<_>>(),
            "boxes": boxes,
            "view": format!("{:?}", self.kind),
            "shift": self.shift,
            "blocks": blocks,
        }))
    }
}

impl FiniteModule for ModuleView {
    fn block_labels(&self) -> Vec<BlockKey> {
        self.selection.iter().map(|b| self.shifted(b)).collect()
    }

    fn block_dim(&self, label: &BlockKey) -> Result<usize> {
        Ok(self.basis(&self.unshifted(label))?.len())
    }

    fn action_matrix(&self, g: &Gen, label: &BlockKey) -> Result<Option<(BlockKey, Matrix)>> {
        let b = self.unshifted(label);
        let Some(target) = target_block(self.tower.root(), g, &b) else {
            return Ok(None);
        };
        if !self.selection.contains(&target) {
            return Ok(None);
        }
        let memo_key = (self.kind == ViewKind::Quotient, g.clone(), b.clone());
        if let Some(m) = self.tower.matrices.lock().unwrap().get(&memo_key) {
            return Ok(m.as_ref().map(|m| (self.shifted(&target), (**m).clone())));
        }
        let m = self.block_matrix(g, &b, &target)?.map(Arc::new);
        self.tower
            .matrices
            .lock()
            .unwrap()
            .insert(memo_key, m.clone());
        Ok(m.map(|m| (self.shifted(&target), (*m).clone())))
    }
}

impl ModuleView {
    fn block_matrix(&self, g: &Gen, b: &BlockKey, target: &BlockKey) -> Result<Option<Matrix>> {
        if !self.action_is_exact(g, b)? {
            return Ok(None);
        }
        let src = self.basis(b)?;
        let dst = self.basis(target)?;
        let pos: BTreeMap<KeyId, usize> = dst.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut m = Matrix::zeros(dst.len(), src.len());
        for (j, &k) in src.iter().enumerate() {
            for (t, c) in self.act(g, &tv_single(k))? {
                let Some(&i) = pos.get(&t) else {
                    return Err(Error::Invalid(
                        "action image outside the target block basis".into(),
                    ));
                };
                m[(i, j)] = c;
            }
        }
        Ok(Some(m))
    }
}

/// Block reached by a loop generator; `None` for central and derivation
/// elements, which act diagonally.
pub fn target_block(root: &RootSystemData, g: &Gen, b: &BlockKey) -> Option<BlockKey> {
    let Gen::Loop(l) = g else {
        return None;
    };
    let degrees = b
        .degrees
        .iter()
        .zip(l.n.0.iter())
        .map(|(d, n)| d + *n as i64)
        .collect();
    let weight = if root.is_cartan(l.x) {
        b.weight.clone()
    } else {
        b.weight.add(&root.root_to_weight(&root.root_of(l.x)))
    };
    Some(BlockKey { degrees, weight })
}

/// `M ⊕ N` block by block.
pub struct DirectSum<'a> {
    pub left: &'a dyn FiniteModule,
    pub right: &'a dyn FiniteModule,
}

impl FiniteModule for DirectSum<'_> {
    fn commutant_lower_bound(&self) -> usize {
        self.left.commutant_lower_bound() + self.right.commutant_lower_bound()
    }

    fn block_labels(&self) -> Vec<BlockKey> {
        let mut out: std::collections::BTreeSet<BlockKey> =
            self.left.block_labels().into_iter().collect();
        out.extend(self.right.block_labels());
        out.into_iter().collect()
    }

    fn block_dim(&self, label: &BlockKey) -> Result<usize> {
        let d = |m: &dyn FiniteModule| -> Result<usize> {
            if m.block_labels().contains(label) {
                m.block_dim(label)
            } else {
                Ok(0)
            }
        };
        Ok(d(self.left)? + d(self.right)?)
    }

    fn action_matrix(&self, g: &Gen, label: &BlockKey) -> Result<Option<(BlockKey, Matrix)>> {
        let part = |m: &dyn FiniteModule| -> Result<Option<Option<(BlockKey, Matrix)>>> {
            if m.block_labels().contains(label) {
                Ok(Some(m.action_matrix(g, label)?))
            } else {
                Ok(None)
            }
        };
        let (l, r) = (part(self.left)?, part(self.right)?);
        if matches!(l, Some(None)) || matches!(r, Some(None)) {
            return Ok(None);
        }
        let (l, r) = (l.flatten(), r.flatten());
        let target = match (&l, &r) {
            (Some((t, _)), _) | (None, Some((t, _))) => t.clone(),
            (None, None) => return Ok(None),
        };
        let (sl, sr) = (self.left_dim(label)?, self.right_dim(label)?);
        let (tl, tr) = (self.left_dim(&target)?, self.right_dim(&target)?);
        let mut m = Matrix::zeros(tl + tr, sl + sr);
        if let Some((_, a)) = l {
            copy_into(&mut m, &a, 0, 0);
        }
        if let Some((_, b)) = r {
            copy_into(&mut m, &b, tl, sl);
        }
        Ok(Some((target, m)))
    }
}

impl DirectSum<'_> {
    fn left_dim(&self, label: &BlockKey) -> Result<usize> {
        if self.left.block_labels().contains(label) {
            self.left.block_dim(label)
        } else {
            Ok(0)
        }
    }

    fn right_dim(&self, label: &BlockKey) -> Result<usize> {
        if self.right.block_labels().contains(label) {
            self.right.block_dim(label)
        } else {
            Ok(0)
        }
    }
}

fn copy_into(dst: &mut Matrix, src: &Matrix, r0: usize, c0: usize) {
    for i in 0..src.rows() {
        for j in 0..src.cols() {
            dst[(r0 + i, c0 + j)] = src[(i, j)].clone();
        }
    }
}

/// Human-readable basis key, one factor group per level.
pub fn key_label(tower: &Tower, id: KeyId) -> String {
    let key = tower.key(id);
    let parts: Vec<String> = key
        .0
        .iter()
        .enumerate()
        .rev()
        .map(|(l, m)| {
            if m.is_one() {
                "1".to_string()
            } else {
                m.0.iter()
                    .map(|(g, e)| {
                        let s = tower.algebra(l).label(&Gen::Loop(g.clone()));
                        if *e == 1 {
                            s
                        } else {
                            format!("({s})^{e}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("·")
            }
        })
        .collect();
    format!("{}⊗v", parts.join("⊗"))
}

/// Vector as `(label, coefficient)` pairs for reports.
pub fn vector_json(tower: &Tower, v: &TVec) -> Value {
    Value::Array(
        v.iter()
            .map(|(k, c)| json!({"key": key_label(tower, *k), "coeff": rational::to_string(c)}))
            .collect(),
    )
}

pub use tower::loop_gen;
