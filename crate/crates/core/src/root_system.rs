//! Root data and a Chevalley basis for a simple Lie algebra `g`.
//!
//! Basis layout (this order is also the PBW class order used elsewhere):
//! the Cartan elements `h_1..h_r` come first, then the negative root
//! vectors, then the positive root vectors. Within each sign the roots are
//! sorted by height and then lexicographically in simple-root coordinates.
//! The Cartan basis is dual to the simple roots: `α_j(h_i) = δ_ij`.
//!
//! Sign convention. For simply-laced types we start from the
//! bimultiplicative cocycle `ε` on the root lattice with
//! `ε(α_i, α_j) = -1` when `i == j` or when `i < j` and the nodes are
//! joined, and `+1` otherwise. The auxiliary basis `E_α` satisfies
//! `[E_α, E_β] = ε(α, β) E_{α+β}` and `[E_α, E_{-α}] = -α^∨`. The
//! Chevalley vectors are `e_α = E_α` for positive `α` and `e_α = -E_α` for
//! negative `α`, so that `[e_α, e_{-α}] = α^∨` and `⟨e_α, e_{-α}⟩ = 1`.
//! All structure constants are integers.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// A basis element of `g`, by its position in the basis layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChevalleyElement(pub u16);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisKind<'a> {
    Cartan(usize),
    /// Root in simple-root coordinates.
    Root(&'a [i64]),
}

/// A weight in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * s).collect())
    }
}

#[derive(Clone, Debug)]
pub struct RootSystemData {
    pub series: Series,
    pub rank: usize,
    /// `a_ij = ⟨α_i^∨, α_j⟩`.
    pub cartan_matrix: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by height.
    pub positive_roots: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
    /// `ρ` in fundamental-weight coordinates.
    pub rho: Weight,
    pub dual_coxeter: i64,
    /// `⟨ω_i, ω_j⟩` for the normalized form.
    pub form_matrix: Vec<Vec<Q>>,
    /// `(α_i | α_j)` on the root lattice.
    root_form: Vec<Vec<i64>>,
    roots: Vec<Option<Vec<i64>>>,
    root_index: HashMap<Vec<i64>, ChevalleyElement>,
    brackets: Vec<Vec<Vec<(ChevalleyElement, i64)>>>,
    form: Vec<Vec<Q>>,
    dual: Vec<Vec<(ChevalleyElement, Q)>>,
}

impl PartialEq for RootSystemData {
    fn eq(&self, o: &Self) -> bool {
        self.series == o.series && self.rank == o.rank
    }
}

impl Eq for RootSystemData {}

impl FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => Series::A,
            "B" => Series::B,
            "C" => Series::C,
            "D" => Series::D,
            "E" => Series::E,
            "F" => Series::F,
            "G" => Series::G,
            _ => return Err(Error::Parse(format!("unknown series {s:?}"))),
        })
    }
}

/// Parses labels like `A1`, `A2`, `D4`.
pub fn parse_type(s: &str) -> Result<(Series, usize)> {
    let s = s.trim();
    if s.len() < 2 {
        return Err(Error::Parse(format!("bad algebra label {s:?}")));
    }
    let (a, b) = s.split_at(1);
    let series = a.parse()?;
    let rank = b
        .parse()
        .map_err(|_| Error::Parse(format!("bad rank in {s:?}")))?;
    Ok((series, rank))
}

fn dynkin_edges(series: Series, rank: usize) -> Result<Vec<(usize, usize)>> {
    let invalid = || Error::InvalidType {
        series: series.to_string(),
        rank,
    };
    match series {
        Series::A => {
            if rank == 0 {
                return Err(invalid());
            }
            Ok((1..rank).map(|i| (i - 1, i)).collect())
        }
        Series::D => {
            if rank < 4 {
                return Err(invalid());
            }
            let mut e: Vec<_> = (1..rank - 1).map(|i| (i - 1, i)).collect();
            e.push((rank - 3, rank - 1));
            Ok(e)
        }
        Series::E => {
            if !(6..=8).contains(&rank) {
                return Err(invalid());
            }
            // Bourbaki labelling: 1-3-4-5-6-..., with 2 attached to 4.
            let mut e = vec![(0, 2), (1, 3)];
            e.extend((3..rank).map(|i| (i - 1, i)));
            Ok(e)
        }
        Series::B | Series::C => {
            if rank < 2 {
                return Err(invalid());
            }
            Err(Error::Unsupported(format!("{series}{rank}")))
        }
        Series::F => {
            if rank != 4 {
                return Err(invalid());
            }
            Err(Error::Unsupported(format!("{series}{rank}")))
        }
        Series::G => {
            if rank != 2 {
                return Err(invalid());
            }
            Err(Error::Unsupported(format!("{series}{rank}")))
        }
    }
}

fn dot(a: &[i64], b: &[i64], form: &[Vec<i64>]) -> i64 {
    let mut s = 0;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            s += x * y * form[i][j];
        }
    }
    s
}

pub fn build_root_system(series: Series, rank: usize) -> Result<RootSystemData> {
    let edges = dynkin_edges(series, rank)?;
    let mut cartan = vec![vec![0i64; rank]; rank];
    for (i, row) in cartan.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(a, b) in &edges {
        cartan[a][b] = -1;
        cartan[b][a] = -1;
    }
    // Simply laced: (α_i|α_j) = a_ij, every root has squared length 2.
    let root_form = cartan.clone();

    let mut positive: Vec<Vec<i64>> = Vec::new();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..rank {
        let mut s = vec![0; rank];
        s[i] = 1;
        seen.insert(s.clone());
        queue.push_back(s);
    }
    while let Some(b) = queue.pop_front() {
        positive.push(b.clone());
        for i in 0..rank {
            let mut ai = vec![0; rank];
            ai[i] = 1;
            if dot(&b, &ai, &root_form) == -1 {
                let mut g = b.clone();
                g[i] += 1;
                if seen.insert(g.clone()) {
                    queue.push_back(g);
                }
            }
        }
    }
    positive.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    let highest = positive.last().cloned().expect("nonempty root system");
    let height: i64 = highest.iter().sum();
    // θ is long, so θ^∨ = θ and ⟨ρ, θ^∨⟩ = ht(θ).
    let dual_coxeter = 1 + height;

    let cm = Matrix::from_rows(
        cartan
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect(),
    );
    let inv = cm.inverse().expect("Cartan matrix is invertible");
    let form_matrix: Vec<Vec<Q>> = (0..rank).map(|i| inv.row(i).to_vec()).collect();

    let mut roots: Vec<Option<Vec<i64>>> = vec![None; rank];
    for p in &positive {
        roots.push(Some(p.iter().map(|x| -x).collect()));
    }
    for p in &positive {
        roots.push(Some(p.clone()));
    }
    let dim = roots.len();
    let root_index: HashMap<Vec<i64>, ChevalleyElement> = roots
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.clone().map(|r| (r, ChevalleyElement(i as u16))))
        .collect();

    let eps = |a: &[i64], b: &[i64]| -> i64 {
        let mut parity = 0i64;
        for i in 0..rank {
            parity += a[i] * b[i];
            for j in (i + 1)..rank {
                if cartan[i][j] == -1 {
                    parity += a[i] * b[j];
                }
            }
        }
        if parity.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    };
    let sign = |a: &[i64]| -> i64 {
        if a.iter().any(|&x| x > 0) {
            1
        } else {
            -1
        }
    };
    // α^∨ expanded in the h_i basis: coefficient α_i(α^∨) = (α_i|α).
    let coroot = |a: &[i64]| -> Vec<(ChevalleyElement, i64)> {
        (0..rank)
            .filter_map(|i| {
                let mut ai = vec![0; rank];
                ai[i] = 1;
                let c = dot(&ai, a, &root_form);
                (c != 0).then_some((ChevalleyElement(i as u16), c))
            })
            .collect()
    };

    let mut brackets = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let out = match (&roots[a], &roots[b]) {
                (None, None) => Vec::new(),
                (None, Some(rb)) => {
                    let c = rb[a];
                    if c == 0 {
                        Vec::new()
                    } else {
                        vec![(ChevalleyElement(b as u16), c)]
                    }
                }
                (Some(ra), None) => {
                    let c = ra[b];
                    if c == 0 {
                        Vec::new()
                    } else {
                        vec![(ChevalleyElement(a as u16), -c)]
                    }
                }
                (Some(ra), Some(rb)) => {
                    let s: Vec<i64> = ra.iter().zip(rb).map(|(x, y)| x + y).collect();
                    if s.iter().all(|&x| x == 0) {
                        coroot(ra)
                    } else if let Some(&c) = root_index.get(&s) {
                        let n = sign(ra) * sign(rb) * sign(&s) * eps(ra, rb);
                        vec![(c, n)]
                    } else {
                        Vec::new()
                    }
                }
            };
            brackets[a][b] = out;
        }
    }

    let mut form = vec![vec![Q::zero(); dim]; dim];
    for i in 0..rank {
        for j in 0..rank {
            form[i][j] = form_matrix[i][j].clone();
        }
    }
    for a in rank..dim {
        let ra = roots[a].as_ref().unwrap();
        let neg: Vec<i64> = ra.iter().map(|x| -x).collect();
        let b = root_index[&neg].0 as usize;
        form[a][b] = Q::one();
    }

    let gram = Matrix::from_rows(form.clone());
    let ginv = gram.inverse().expect("invariant form is nondegenerate");
    // e^j = Σ_i (G^{-1})_{ij} e_i gives ⟨e_i, e^j⟩ = δ_ij.
    let dual = (0..dim)
        .map(|j| {
            (0..dim)
                .filter(|&i| !ginv[(i, j)].is_zero())
                .map(|i| (ChevalleyElement(i as u16), ginv[(i, j)].clone()))
                .collect()
        })
        .collect();

    Ok(RootSystemData {
        series,
        rank,
        cartan_matrix: cartan,
        positive_roots: positive,
        highest_root: highest,
        rho: Weight(vec![1; rank]),
        dual_coxeter,
        form_matrix,
        root_form,
        roots,
        root_index,
        brackets,
        form,
        dual,
    })
}

impl RootSystemData {
    pub fn label(&self) -> String {
        format!("{}{}", self.series, self.rank)
    }

    pub fn dim(&self) -> usize {
        self.roots.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = ChevalleyElement> {
        (0..self.dim() as u16).map(ChevalleyElement)
    }

    pub fn kind(&self, x: ChevalleyElement) -> BasisKind<'_> {
        match &self.roots[x.0 as usize] {
            None => BasisKind::Cartan(x.0 as usize),
            Some(r) => BasisKind::Root(r),
        }
    }

    pub fn is_cartan(&self, x: ChevalleyElement) -> bool {
        (x.0 as usize) < self.rank
    }

    /// Root of a root vector in simple-root coordinates; zero for Cartan.
    pub fn root_of(&self, x: ChevalleyElement) -> Vec<i64> {
        self.roots[x.0 as usize]
            .clone()
            .unwrap_or_else(|| vec![0; self.rank])
    }

    pub fn is_negative_root(&self, x: ChevalleyElement) -> bool {
        matches!(&self.roots[x.0 as usize], Some(r) if r.iter().any(|&c| c < 0))
    }

    pub fn is_positive_root(&self, x: ChevalleyElement) -> bool {
        matches!(&self.roots[x.0 as usize], Some(r) if r.iter().any(|&c| c > 0))
    }

    pub fn cartan(&self, i: usize) -> ChevalleyElement {
        assert!(i < self.rank);
        ChevalleyElement(i as u16)
    }

    pub fn root_vector(&self, root: &[i64]) -> Option<ChevalleyElement> {
        self.root_index.get(root).copied()
    }

    /// Positive simple root vector `e_{α_i}`.
    pub fn e(&self, i: usize) -> ChevalleyElement {
        let mut r = vec![0; self.rank];
        r[i] = 1;
        self.root_index[&r]
    }

    /// Negative simple root vector `e_{-α_i}`.
    pub fn f(&self, i: usize) -> ChevalleyElement {
        let mut r = vec![0; self.rank];
        r[i] = -1;
        self.root_index[&r]
    }

    /// The coroot `α_i^∨` as a combination of the `h_j`.
    pub fn simple_coroot(&self, i: usize) -> Vec<(ChevalleyElement, Q)> {
        (0..self.rank)
            .filter(|&j| self.cartan_matrix[i][j] != 0)
            .map(|j| (ChevalleyElement(j as u16), q(self.cartan_matrix[i][j])))
            .collect()
    }

    /// The `σ`-image: `e_β ↦ e_{-β}`, `h_i ↦ h_i`.
    pub fn opposite(&self, x: ChevalleyElement) -> ChevalleyElement {
        match &self.roots[x.0 as usize] {
            None => x,
            Some(r) => {
                let n: Vec<i64> = r.iter().map(|c| -c).collect();
                self.root_index[&n]
            }
        }
    }

    /// `[x, y]` with integer coefficients.
    pub fn bracket_int(
        &self,
        a: ChevalleyElement,
        b: ChevalleyElement,
    ) -> &[(ChevalleyElement, i64)] {
        &self.brackets[a.0 as usize][b.0 as usize]
    }

    pub fn bracket_g(
        &self,
        a: ChevalleyElement,
        b: ChevalleyElement,
    ) -> Result<BTreeMap<ChevalleyElement, Q>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self
            .bracket_int(a, b)
            .iter()
            .map(|(c, n)| (*c, q(*n)))
            .collect())
    }

    fn check(&self, a: ChevalleyElement) -> Result<()> {
        if (a.0 as usize) < self.dim() {
            Ok(())
        } else {
            Err(Error::Mismatch(format!(
                "basis index {} outside {}",
                a.0,
                self.label()
            )))
        }
    }

    pub fn form_q(&self, a: ChevalleyElement, b: ChevalleyElement) -> &Q {
        &self.form[a.0 as usize][b.0 as usize]
    }

    pub fn form(&self, a: ChevalleyElement, b: ChevalleyElement) -> Result<Q> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.form_q(a, b).clone())
    }

    /// The dual element `e^j` of basis element `e_j`.
    pub fn dual_of(&self, x: ChevalleyElement) -> &[(ChevalleyElement, Q)] {
        &self.dual[x.0 as usize]
    }

    /// Pairs `(e_j, e^j)` over the whole basis.
    pub fn dual_basis(&self) -> Vec<(ChevalleyElement, Vec<(ChevalleyElement, Q)>)> {
        self.basis()
            .map(|x| (x, self.dual_of(x).to_vec()))
            .collect()
    }

    /// Root in fundamental-weight coordinates: `β(α_j^∨)`.
    pub fn root_to_weight(&self, root: &[i64]) -> Weight {
        Weight(
            (0..self.rank)
                .map(|j| {
                    (0..self.rank)
                        .map(|i| root[i] * self.cartan_matrix[j][i])
                        .sum()
                })
                .collect(),
        )
    }

    /// `⟨μ, ν⟩` for weights in fundamental coordinates.
    pub fn weight_form(&self, a: &Weight, b: &Weight) -> Q {
        let mut s = Q::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if a.0[i] != 0 && b.0[j] != 0 {
                    s += &self.form_matrix[i][j] * q(a.0[i] * b.0[j]);
                }
            }
        }
        s
    }

    /// `(β|γ)` for roots in simple-root coordinates.
    pub fn root_form(&self, a: &[i64], b: &[i64]) -> i64 {
        dot(a, b, &self.root_form)
    }

    /// `λ(h_i)` for a weight in fundamental coordinates: the `i`-th
    /// coordinate of `λ` in the simple-root basis.
    pub fn weight_on_cartan(&self, w: &Weight, i: usize) -> Q {
        let mut s = Q::zero();
        for j in 0..self.rank {
            if w.0[j] != 0 {
                // ω_j = Σ_i (A^{-1})_{ji} α_i for symmetric A.
                s += &self.form_matrix[j][i] * q(w.0[j]);
            }
        }
        s
    }

    /// Simple reflection `s_i` on a weight in fundamental coordinates.
    pub fn reflect(&self, i: usize, w: &Weight) -> Weight {
        let c = w.0[i];
        let ai = self.root_to_weight(&unit(self.rank, i));
        Weight(w.0.iter().zip(&ai.0).map(|(x, a)| x - c * a).collect())
    }

    /// All Weyl group elements as reduced words with their signs, found by
    /// walking the orbit of `ρ`.
    pub fn weyl_group(&self) -> Vec<(Vec<usize>, i64)> {
        let mut seen: HashMap<Weight, ()> = HashMap::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(self.rho.clone(), ());
        queue.push_back((self.rho.clone(), Vec::<usize>::new()));
        while let Some((w, word)) = queue.pop_front() {
            let s = if word.len() % 2 == 0 { 1 } else { -1 };
            out.push((word.clone(), s));
            for i in 0..self.rank {
                let nw = self.reflect(i, &w);
                if !seen.contains_key(&nw) {
                    seen.insert(nw.clone(), ());
                    let mut nword = vec![i];
                    nword.extend(&word);
                    queue.push_back((nw, nword));
                }
            }
        }
        out
    }

    /// Applies a word (leftmost letter acts last).
    pub fn apply_word(&self, word: &[usize], w: &Weight) -> Weight {
        let mut x = w.clone();
        for &i in word.iter().rev() {
            x = self.reflect(i, &x);
        }
        x
    }

    /// Weyl dimension formula.
    pub fn weyl_dimension(&self, lambda: &Weight) -> Result<Q> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        let lr = lambda.add(&self.rho);
        let mut num = Q::one();
        let mut den = Q::one();
        for a in &self.positive_roots {
            let aw = self.root_to_weight(a);
            num *= self.weight_form(&lr, &aw);
            den *= self.weight_form(&self.rho, &aw);
        }
        Ok(num / den)
    }

    pub fn to_json(&self) -> RootSystemJson {
        let mut table = Vec::new();
        for a in self.basis() {
            for b in self.basis() {
                for &(c, n) in self.bracket_int(a, b) {
                    table.push((
                        self.basis_label(a),
                        self.basis_label(b),
                        self.basis_label(c),
                        n,
                    ));
                }
            }
        }
        RootSystemJson {
            series: self.series,
            rank: self.rank,
            cartan_matrix: self.cartan_matrix.clone(),
            positive_roots: self.positive_roots.clone(),
            highest_root: self.highest_root.clone(),
            rho: self.rho.0.clone(),
            dual_coxeter: self.dual_coxeter,
            form_matrix: self
                .form_matrix
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
            basis: self.basis().map(|x| self.basis_label(x)).collect(),
            structure_constants: table,
        }
    }

    /// `h1`, `e[1,0]`, `f[1,1]`, ...
    pub fn basis_label(&self, x: ChevalleyElement) -> String {
        match self.kind(x) {
            BasisKind::Cartan(i) => format!("h{}", i + 1),
            BasisKind::Root(r) => {
                let neg = r.iter().any(|&c| c < 0);
                let coords: Vec<String> = r.iter().map(|c| c.abs().to_string()).collect();
                format!("{}[{}]", if neg { "f" } else { "e" }, coords.join(","))
            }
        }
    }

    pub fn parse_basis_label(&self, s: &str) -> Result<ChevalleyElement> {
        self.basis()
            .find(|&x| self.basis_label(x) == s)
            .ok_or_else(|| Error::Parse(format!("unknown basis element {s:?} in {}", self.label())))
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RootSystemJson {
    pub series: Series,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
    pub rho: Vec<i64>,
    pub dual_coxeter: i64,
    pub form_matrix: Vec<Vec<String>>,
    pub basis: Vec<String>,
    /// `(a, b, c, n)` meaning `[a, b]` has coefficient `n` on `c`.
    pub structure_constants: Vec<(String, String, String, i64)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn a(n: usize) -> RootSystemData {
        build_root_system(Series::A, n).unwrap()
    }

    fn comb_bracket(
        r: &RootSystemData,
        x: &BTreeMap<ChevalleyElement, Q>,
        y: ChevalleyElement,
    ) -> BTreeMap<ChevalleyElement, Q> {
        let mut out = BTreeMap::new();
        for (b, c) in x {
            for &(z, n) in r.bracket_int(*b, y) {
                *out.entry(z).or_insert_with(Q::zero) += c * q(n);
            }
        }
        out.retain(|_, v: &mut Q| !v.is_zero());
        out
    }

    #[test]
    fn a1_data() {
        let r = a(1);
        assert_eq!(r.dual_coxeter, 2);
        assert_eq!(r.highest_root, vec![1]);
        let th = r.root_to_weight(&r.highest_root);
        assert_eq!(r.weight_form(&th, &th), q(2));
        // h∨ = 1 + ⟨ρ, θ∨⟩ by direct evaluation, θ∨ = θ.
        assert_eq!(q(1) + r.weight_form(&r.rho, &th), q(r.dual_coxeter));
    }

    #[test]
    fn a2_data() {
        let r = a(2);
        assert_eq!(r.dual_coxeter, 3);
        assert_eq!(r.positive_roots.len(), 3);
        // oracle: positive roots of A_n are e_i - e_j (i < j), which in
        // simple-root coordinates are the indicator vectors of [i, j).
        for n in 1..=3 {
            let mut brute: Vec<Vec<i64>> = Vec::new();
            for i in 0..n {
                for j in (i + 1)..=n {
                    brute.push((0..n).map(|t| i64::from(t >= i && t < j)).collect());
                }
            }
            brute.sort();
            let mut got = a(n).positive_roots.clone();
            got.sort();
            assert_eq!(got, brute);
        }
    }

    #[test]
    fn sl2_relations() {
        let r = a(1);
        let (h1, e, f) = (r.cartan(0), r.e(0), r.f(0));
        // [e, f] = α∨ = 2 h_1
        assert_eq!(r.bracket_g(e, f).unwrap(), BTreeMap::from([(h1, q(2))]));
        assert!(r.bracket_g(h1, h1).unwrap().is_empty());
        // with h = α∨ = 2h_1: [h, e] = 2e
        let h = BTreeMap::from([(h1, q(2))]);
        assert_eq!(comb_bracket(&r, &h, e), BTreeMap::from([(e, q(2))]));
        assert_eq!(r.form(e, f).unwrap(), q(1));
        assert_eq!(r.form(e, e).unwrap(), q(0));
        // ⟨α∨, α∨⟩ = 4 ⟨h_1, h_1⟩ = 2
        assert_eq!(q(4) * r.form(h1, h1).unwrap(), q(2));
    }

    #[test]
    fn dual_basis_a1() {
        let r = a(1);
        let (h1, e, f) = (r.cartan(0), r.e(0), r.f(0));
        assert_eq!(r.dual_of(e), &[(f, q(1))]);
        assert_eq!(r.dual_of(f), &[(e, q(1))]);
        // dual of h = 2h_1 is h/2 = h_1, i.e. dual of h_1 is 2 h_1
        assert_eq!(r.dual_of(h1), &[(h1, q(2))]);
        let _ = qf(1, 2);
    }

    fn casimir_identity(r: &RootSystemData) {
        for x in r.basis() {
            let mut acc = BTreeMap::new();
            for ej in r.basis() {
                let xe: BTreeMap<_, _> = r
                    .bracket_int(x, ej)
                    .iter()
                    .map(|(c, n)| (*c, q(*n)))
                    .collect();
                for (d, c) in r.dual_of(ej) {
                    for (z, v) in comb_bracket(r, &xe, *d) {
                        *acc.entry(z).or_insert_with(Q::zero) += v * c;
                    }
                }
            }
            acc.retain(|_, v: &mut Q| !v.is_zero());
            assert_eq!(
                acc,
                BTreeMap::from([(x, q(2 * r.dual_coxeter))]),
                "{}",
                r.basis_label(x)
            );
        }
    }

    fn jacobi_and_invariance(r: &RootSystemData) {
        for x in r.basis() {
            for y in r.basis() {
                let xy: BTreeMap<_, _> = r
                    .bracket_int(x, y)
                    .iter()
                    .map(|(c, n)| (*c, q(*n)))
                    .collect();
                let yx: BTreeMap<_, _> = r
                    .bracket_int(y, x)
                    .iter()
                    .map(|(c, n)| (*c, q(-*n)))
                    .collect();
                assert_eq!(xy, yx);
                for z in r.basis() {
                    let yz: BTreeMap<_, _> = r
                        .bracket_int(y, z)
                        .iter()
                        .map(|(c, n)| (*c, q(*n)))
                        .collect();
                    let zx: BTreeMap<_, _> = r
                        .bracket_int(z, x)
                        .iter()
                        .map(|(c, n)| (*c, q(*n)))
                        .collect();
                    let mut s = comb_bracket(r, &xy, z);
                    for (k, v) in comb_bracket(r, &yz, x)
                        .into_iter()
                        .chain(comb_bracket(r, &zx, y))
                    {
                        *s.entry(k).or_insert_with(Q::zero) += v;
                    }
                    s.retain(|_, v| !v.is_zero());
                    assert!(s.is_empty(), "Jacobi fails");
                    // ⟨[x,y],z⟩ = ⟨x,[y,z]⟩
                    let lhs: Q = xy.iter().map(|(c, v)| v * r.form_q(*c, z)).sum();
                    let rhs: Q = yz.iter().map(|(c, v)| v * r.form_q(x, *c)).sum();
                    assert_eq!(lhs, rhs);
                }
                assert_eq!(r.form_q(x, y), r.form_q(y, x));
                let rx = r.root_of(x);
                let ry = r.root_of(y);
                let opposite = rx.iter().zip(&ry).all(|(a, b)| a + b == 0);
                if !opposite {
                    assert!(r.form_q(x, y).is_zero());
                }
                // σ is an anti-automorphism: σ[x,y] = [σy, σx]
                let s1: BTreeMap<_, _> = xy
                    .iter()
                    .map(|(c, v)| (r.opposite(*c), v.clone()))
                    .collect();
                let s2: BTreeMap<_, _> = r
                    .bracket_int(r.opposite(y), r.opposite(x))
                    .iter()
                    .map(|(c, n)| (*c, q(*n)))
                    .collect();
                assert_eq!(s1, s2);
            }
        }
        for i in r.basis() {
            for j in r.basis() {
                let p: Q = r.dual_of(j).iter().map(|(c, v)| v * r.form_q(i, *c)).sum();
                assert_eq!(p, if i == j { q(1) } else { q(0) });
            }
        }
    }

    #[test]
    fn structure_exhaustive_small_types() {
        for n in 1..=3 {
            let r = a(n);
            jacobi_and_invariance(&r);
            casimir_identity(&r);
            // a_ij = 2⟨α_i,α_j⟩/⟨α_j,α_j⟩
            for i in 0..n {
                for j in 0..n {
                    let ai = r.root_to_weight(&unit(n, i));
                    let aj = r.root_to_weight(&unit(n, j));
                    let v = q(2) * r.weight_form(&ai, &aj) / r.weight_form(&aj, &aj);
                    assert_eq!(v, q(r.cartan_matrix[i][j]));
                }
            }
        }
    }

    #[test]
    fn d4_structure() {
        let r = build_root_system(Series::D, 4).unwrap();
        assert_eq!(r.dim(), 28);
        assert_eq!(r.dual_coxeter, 6);
        casimir_identity(&r);
    }

    #[test]
    fn invalid_and_unsupported() {
        assert!(matches!(
            build_root_system(Series::A, 0),
            Err(Error::InvalidType { .. })
        ));
        assert!(matches!(
            build_root_system(Series::D, 3),
            Err(Error::InvalidType { .. })
        ));
        assert!(matches!(
            build_root_system(Series::B, 2),
            Err(Error::Unsupported(_))
        ));
        assert_eq!(parse_type("A2").unwrap(), (Series::A, 2));
    }

    #[test]
    fn weyl_dimensions_and_group() {
        let r = a(2);
        assert_eq!(r.weyl_group().len(), 6);
        assert_eq!(r.weyl_dimension(&Weight(vec![1, 0])).unwrap(), q(3));
        assert_eq!(r.weyl_dimension(&Weight(vec![1, 1])).unwrap(), q(8));
        assert_eq!(a(3).weyl_group().len(), 24);
        assert_eq!(a(1).weyl_dimension(&Weight(vec![2])).unwrap(), q(3));
    }

    #[test]
    fn cartan_pairing() {
        let r = a(1);
        // ω = α/2 so ω(h_1) = 1/2
        assert_eq!(r.weight_on_cartan(&Weight(vec![1]), 0), qf(1, 2));
    }
}
