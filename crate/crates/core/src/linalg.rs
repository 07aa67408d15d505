//! Exact linear algebra over ℚ: dense row reduction for block-sized
//! matrices and an incremental sparse eliminator for large systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    if self[(r, j)].is_zero() {
                        continue;
                    }
                    let d = &f * &self[(r, j)];
                    self[(i, j)] -= d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : self · x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Q::one();
        }
        let piv = aug.rref();
        if n > 0 && (piv.len() < n || piv[n - 1] != n - 1) {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Indices of a maximal linearly independent subset of the columns,
    /// chosen greedily from the left.
    pub fn independent_columns(&self) -> Vec<usize> {
        let mut a = integer_rows(self);
        bareiss(&mut a, self.cols)
    }
}

fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect()
}

/// Fraction-free elimination in place; returns the pivot columns.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let n = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(i) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, i);
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        let p = prow[c].clone();
        for row in rest.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = (&p * &row[j] - &f * &prow[j]) / &prev;
                row[j] = v;
            }
        }
        prev = p;
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact solver for a nonsingular square system, inverted once by
/// fraction-free Gauss–Jordan elimination.
#[derive(Clone, Debug)]
pub struct Solver {
    /// `det · A⁻¹` for the row-scaled integer matrix `A`.
    adj: Vec<Vec<BigInt>>,
    det: BigInt,
    row_scales: Vec<BigInt>,
}

impl Solver {
    pub fn new(m: &Matrix) -> Option<Solver> {
        assert_eq!(m.rows, m.cols);
        let n = m.rows;
        let row_scales: Vec<BigInt> = (0..n)
            .map(|i| m.row(i).iter().fold(BigInt::one(), |l, v| l.lcm(v.denom())))
            .collect();
        // fraction-free Gauss–Jordan on [A | I]
        let mut a: Vec<Vec<BigInt>> = integer_rows(m)
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| BigInt::from((i == j) as i32)));
                r
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let p = (k..n).find(|&i| !a[i][k].is_zero())?;
            a.swap(k, p);
            let pivot = a[k][k].clone();
            let (head, tail) = a.split_at_mut(k);
            let (row_k, tail) = tail.split_first_mut().unwrap();
            for row in head.iter_mut().chain(tail.iter_mut()) {
                let f = row[k].clone();
                for j in 0..2 * n {
                    if j == k {
                        continue;
                    }
                    let v = &pivot * &row[j] - &f * &row_k[j];
                    row[j] = v / &prev;
                }
                row[k] = BigInt::zero();
            }
            prev = pivot;
        }
        let adj = a.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Solver {
            adj,
            det: prev,
            row_scales,
        })
    }

    pub fn dim(&self) -> usize {
        self.adj.len()
    }

    /// The unique `x` with `M x = b`.
    pub fn solve(&self, b: &[Q]) -> Vec<Q> {
        assert_eq!(b.len(), self.dim());
        let scaled: Vec<Q> = b
            .iter()
            .zip(&self.row_scales)
            .map(|(v, s)| v * Q::from_integer(s.clone()))
            .collect();
        let d = scaled.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let c: Vec<BigInt> = scaled
            .iter()
            .map(|v| v.numer() * (&d / v.denom()))
            .collect();
        let den = &self.det * &d;
        self.adj
            .iter()
            .map(|row| {
                let mut acc = BigInt::zero();
                for (x, y) in row.iter().zip(&c) {
                    if !y.is_zero() && !x.is_zero() {
                        acc += x * y;
                    }
                }
                Q::new(acc, den.clone())
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Incremental rank computation for sparse rows.
///
/// Rows are reduced against the current pivots on insertion; only the
/// rank is tracked, so stored rows are not back-substituted.
#[derive(Default, Debug)]
pub struct SparseEliminator {
    pivots: BTreeMap<usize, BTreeMap<usize, Q>>,
}

impl SparseEliminator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns true if it increased the rank.
    pub fn push(&mut self, mut row: BTreeMap<usize, Q>) -> bool {
        row.retain(|_, v| !v.is_zero());
        // pivot rows start at their pivot, so clearing the lead suffices
        while let Some(prow) = row.keys().next().and_then(|c| self.pivots.get(c)) {
            let f = row.values().next().unwrap().clone();
            for (j, v) in prow {
                let e = row.entry(*j).or_insert_with(Q::zero);
                *e -= &f * v;
                if e.is_zero() {
                    row.remove(j);
                }
            }
        }
        let Some((&lead, lv)) = row.iter().next() else {
            return false;
        };
        let inv = lv.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        self.pivots.insert(lead, row);
        true
    }
}

/// `2^61 − 1`.
pub const MOD_PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

/// Image of a rational in `F_P`, or `None` when `P` divides the denominator.
pub fn reduce_mod(x: &Q) -> Option<u64> {
    let m = BigInt::from(MOD_PRIME);
    let n = x.numer().mod_floor(&m);
    let d = x.denom().mod_floor(&m);
    let (n, d) = (u64::try_from(n).ok()?, u64::try_from(d).ok()?);
    (d != 0).then(|| mul_mod(n, pow_mod(d, MOD_PRIME - 2)))
}

/// Row echelon rank over `F_P` for `P = 2^61 − 1`. Since reduction can only
/// drop rank, this bounds the rational rank from below.
#[derive(Default)]
pub struct ModEliminator {
    pivots: HashMap<usize, Vec<(usize, u64)>>,
}

impl ModEliminator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn push(&mut self, row: BTreeMap<usize, u64>) -> bool {
        let mut row: Vec<(usize, u64)> = row.into_iter().filter(|(_, v)| *v != 0).collect();
        let mut scratch = Vec::new();
        while let Some(prow) = row.first().and_then(|(c, _)| self.pivots.get(c)) {
            let f = MOD_PRIME - row[0].1;
            scratch.clear();
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < prow.len() {
                if j == prow.len() || (i < row.len() && row[i].0 < prow[j].0) {
                    scratch.push(row[i]);
                    i += 1;
                } else if i == row.len() || prow[j].0 < row[i].0 {
                    scratch.push((prow[j].0, mul_mod(f, prow[j].1)));
                    j += 1;
                } else {
                    let v = (row[i].1 + mul_mod(f, prow[j].1)) % MOD_PRIME;
                    if v != 0 {
                        scratch.push((row[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            std::mem::swap(&mut row, &mut scratch);
        }
        let Some(&(lead, lv)) = row.first() else {
            return false;
        };
        let inv = pow_mod(lv, MOD_PRIME - 2);
        for e in row.iter_mut() {
            e.1 = mul_mod(e.1, inv);
        }
        self.pivots.insert(lead, row);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use proptest::prelude::*;

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_rows(vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(inv[(0, 0)], q(1));
        let sing = Matrix::from_rows(vec![vec![q(1), qf(1, 2)], vec![q(2), q(1)]]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let rows = vec![
            vec![q(1), q(2), q(0), q(3)],
            vec![q(0), q(1), q(1), q(0)],
            vec![q(1), q(3), q(1), q(3)],
            vec![q(0), q(0), q(0), q(5)],
        ];
        let dense = Matrix::from_rows(rows.clone()).rank();
        let mut el = SparseEliminator::new();
        for r in rows {
            el.push(r.into_iter().enumerate().collect());
        }
        assert_eq!(el.rank(), dense);
        assert_eq!(dense, 3);
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec((-3i64..=3, 1i64..=3), rows * cols).prop_map(move |v| {
            let data: Vec<Vec<Q>> = v
                .chunks(cols)
                .map(|c| c.iter().map(|&(n, d)| qf(n, d)).collect())
                .collect();
            Matrix::from_rows(data)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn fraction_free_pivots_match_rref(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| small_matrix(r, c))) {
            prop_assert_eq!(m.independent_columns(), m.clone().rref());
        }

        #[test]
        fn modular_rank_bounds_rational_rank(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| small_matrix(r, c))) {
            let mut el = SparseEliminator::new();
            let mut me = ModEliminator::new();
            for i in 0..m.rows() {
                el.push(m.row(i).iter().cloned().enumerate().collect());
                me.push(m.row(i).iter().map(|x| reduce_mod(x).unwrap()).enumerate().collect());
            }
            prop_assert_eq!(el.rank(), m.rank());
            prop_assert!(me.rank() <= el.rank());
        }

        #[test]
        fn solver_matches_inverse(m in (1usize..6).prop_flat_map(|n| small_matrix(n, n)), b in prop::collection::vec(-5i64..=5, 6)) {
            let n = m.rows();
            let b: Vec<Q> = b[..n].iter().map(|&v| q(v)).collect();
            match (m.inverse(), Solver::new(&m)) {
                (Some(inv), Some(s)) => prop_assert_eq!(s.solve(&b), inv.mul_vec(&b)),
                (None, None) => {}
                _ => prop_assert!(false, "solver and inverse disagree on singularity"),
            }
        }
    }
}
