//! Exact sparse operators on tensor products of finite-dimensional spaces.
//!
//! Multi-indices are flattened row-major: leg 0 is the most significant digit.
//! An operator is a matrix with `⟨row|X|col⟩` stored at `(row, col)`; products
//! compose as matrices, `(A ∘ B)|v⟩ = A(B|v⟩)`.

pub mod linalg;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Field;
pub use linalg::DenseMatrix;

/// Sparse vector over a flattened basis.
pub type SparseVec<F> = BTreeMap<usize, F>;

pub fn flatten(index: &[usize], dims: &[usize]) -> usize {
    debug_assert_eq!(index.len(), dims.len());
    index.iter().zip(dims).fold(0, |acc, (&i, &d)| {
        debug_assert!(i < d);
        acc * d + i
    })
}

pub fn unflatten(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = flat % d;
        flat /= d;
    }
    out
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

#[derive(Clone, PartialEq)]
pub struct Operator<F> {
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    entries: BTreeMap<(usize, usize), F>,
}

/// Where a small operator sits inside a larger tensor product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegPlacement {
    pub total_legs: usize,
    pub target_legs: Vec<usize>,
    pub leg_dims: Vec<usize>,
}

impl LegPlacement {
    pub fn new(leg_dims: Vec<usize>, target_legs: Vec<usize>) -> Result<Self> {
        let total_legs = leg_dims.len();
        let mut seen = vec![false; total_legs];
        for &l in &target_legs {
            if l >= total_legs {
                return Err(Error::LegOutOfRange {
                    leg: l,
                    total: total_legs,
                });
            }
            if std::mem::replace(&mut seen[l], true) {
                return Err(Error::LegCollision { leg: l });
            }
        }
        Ok(LegPlacement {
            total_legs,
            target_legs,
            leg_dims,
        })
    }

    /// `n` legs of equal dimension `d`.
    pub fn uniform(d: usize, n: usize, target_legs: &[usize]) -> Result<Self> {
        Self::new(vec![d; n], target_legs.to_vec())
    }

    pub fn space_dim(&self) -> usize {
        self.leg_dims.iter().product()
    }
}

impl<F: Field> Operator<F> {
    pub fn zero(row_dims: Vec<usize>, col_dims: Vec<usize>) -> Self {
        assert!(
            row_dims.iter().chain(&col_dims).all(|&d| d > 0),
            "leg dimensions must be positive"
        );
        Operator {
            row_dims,
            col_dims,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        Self::scalar(dims, F::one())
    }

    /// `c · I` on the given legs.
    pub fn scalar(dims: Vec<usize>, c: F) -> Self {
        let mut op = Self::zero(dims.clone(), dims);
        for i in 0..op.row_size() {
            op.insert(i, i, c.clone());
        }
        op
    }

    /// `P₁₂` on `d ⊗ d`: `|i,j⟩ ↦ |j,i⟩`.
    pub fn swap(d: usize) -> Self {
        Self::swap_blocks(vec![d], vec![d])
    }

    /// Swap of two leg groups: `|a,b⟩ ↦ |b,a⟩` with `a` on `first`, `b` on `second`.
    pub fn swap_blocks(first: Vec<usize>, second: Vec<usize>) -> Self {
        let dims: Vec<usize> = first.iter().chain(&second).copied().collect();
        let n1: usize = first.iter().product();
        let n2: usize = second.iter().product();
        let mut op = Self::zero(dims.clone(), dims);
        for a in 0..n1 {
            for b in 0..n2 {
                op.insert(b * n1 + a, a * n2 + b, F::one());
            }
        }
        op
    }

    pub fn from_dense(m: &DenseMatrix<F>, row_dims: Vec<usize>, col_dims: Vec<usize>) -> Result<Self> {
        let mut op = Self::zero(row_dims, col_dims);
        if m.rows() != op.row_size() || m.cols() != op.col_size() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for legs {:?} -> {:?}",
                m.rows(),
                m.cols(),
                op.row_dims,
                op.col_dims
            )));
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                op.insert(i, j, m[(i, j)].clone());
            }
        }
        Ok(op)
    }

    pub fn to_dense(&self) -> DenseMatrix<F> {
        let mut m = DenseMatrix::zeros(self.row_size(), self.col_size());
        for (&(i, j), v) in &self.entries {
            m[(i, j)] = v.clone();
        }
        m
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    pub fn row_size(&self) -> usize {
        self.row_dims.iter().product()
    }

    pub fn col_size(&self) -> usize {
        self.col_dims.iter().product()
    }

    /// True when row and column legs agree.
    pub fn is_square_legs(&self) -> bool {
        self.row_dims == self.col_dims
    }

    /// Leg dimensions of a square operator.
    pub fn dims(&self) -> &[usize] {
        debug_assert!(self.is_square_legs());
        &self.row_dims
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Stores `value` at `(row, col)`, removing the entry when `value` is zero.
    pub fn insert(&mut self, row: usize, col: usize, value: F) {
        assert!(row < self.row_size() && col < self.col_size(), "index out of bounds");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn insert_multi(&mut self, row: &[usize], col: &[usize], value: F) {
        let r = flatten(row, &self.row_dims);
        let c = flatten(col, &self.col_dims);
        self.insert(r, c, value);
    }

    fn accumulate(&mut self, row: usize, col: usize, value: F) {
        use std::collections::btree_map::Entry;
        match self.entries.entry((row, col)) {
            Entry::Vacant(e) => {
                if !value.is_zero() {
                    e.insert(value);
                }
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + value;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn get(&self, row: usize, col: usize) -> F {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(F::zero)
    }

    pub fn get_multi(&self, row: &[usize], col: &[usize]) -> F {
        self.get(flatten(row, &self.row_dims), flatten(col, &self.col_dims))
    }

    /// Nonzero entries in `(row, col)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Reinterprets the leg structure without moving any entry.
    pub fn with_dims(&self, row_dims: Vec<usize>, col_dims: Vec<usize>) -> Result<Self> {
        let r: usize = row_dims.iter().product();
        let c: usize = col_dims.iter().product();
        if r != self.row_size() || c != self.col_size() {
            return Err(Error::DimensionMismatch(format!(
                "cannot regroup {:?}->{:?} as {:?}->{:?}",
                self.row_dims, self.col_dims, row_dims, col_dims
            )));
        }
        Ok(Operator {
            row_dims,
            col_dims,
            entries: self.entries.clone(),
        })
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.row_dims.clone(), self.col_dims.clone());
        for (&(r, col), v) in &self.entries {
            out.insert(r, col, v.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.row_dims != other.row_dims || self.col_dims != other.col_dims {
            return Err(Error::DimensionMismatch(format!(
                "sum of {:?}->{:?} and {:?}->{:?}",
                self.row_dims, self.col_dims, other.row_dims, other.col_dims
            )));
        }
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.accumulate(r, c, v.clone());
        }
        Ok(out)
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.col_dims != other.row_dims {
            return Err(Error::DimensionMismatch(format!(
                "compose: columns {:?} vs rows {:?}",
                self.col_dims, other.row_dims
            )));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &F)>> = BTreeMap::new();
        for (&(k, j), v) in &other.entries {
            by_row.entry(k).or_default().push((j, v));
        }
        let mut out = Self::zero(self.row_dims.clone(), other.col_dims.clone());
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.accumulate(i, j, a.clone() * b.clone());
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`, legs concatenated.
    pub fn kron(&self, other: &Self) -> Self {
        let row_dims: Vec<usize> = self.row_dims.iter().chain(&other.row_dims).copied().collect();
        let col_dims: Vec<usize> = self.col_dims.iter().chain(&other.col_dims).copied().collect();
        let (r2, c2) = (other.row_size(), other.col_size());
        let mut out = Self::zero(row_dims, col_dims);
        for (&(i1, j1), a) in &self.entries {
            for (&(i2, j2), b) in &other.entries {
                out.insert(i1 * r2 + i2, j1 * c2 + j2, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.col_dims.clone(), self.row_dims.clone());
        for (&(r, c), v) in &self.entries {
            out.insert(c, r, v.clone());
        }
        out
    }

    /// Exchanges row and column index on one leg.
    pub fn partial_transpose(&self, leg: usize) -> Result<Self> {
        if !self.is_square_legs() {
            return Err(Error::DimensionMismatch("partial transpose needs square legs".into()));
        }
        if leg >= self.row_dims.len() {
            return Err(Error::LegOutOfRange {
                leg,
                total: self.row_dims.len(),
            });
        }
        let mut out = Self::zero(self.row_dims.clone(), self.col_dims.clone());
        for (&(r, c), v) in &self.entries {
            let mut ri = unflatten(r, &self.row_dims);
            let mut ci = unflatten(c, &self.col_dims);
            std::mem::swap(&mut ri[leg], &mut ci[leg]);
            out.insert_multi(&ri, &ci, v.clone());
        }
        Ok(out)
    }

    pub fn invert(&self) -> Result<Self> {
        if self.row_size() != self.col_size() {
            return Err(Error::DimensionMismatch("cannot invert a non-square operator".into()));
        }
        let inv = self.to_dense().inverse()?;
        Operator::from_dense(&inv, self.col_dims.clone(), self.row_dims.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square_legs()
            && self.entries.len() == self.row_size()
            && self.entries.iter().all(|(&(r, c), v)| r == c && v.is_one())
    }

    /// Column-major view used for applying the operator to sparse vectors.
    pub fn columns(&self) -> Columns<F> {
        let mut cols = vec![Vec::new(); self.col_size()];
        for (&(r, c), v) in &self.entries {
            cols[c].push((r, v.clone()));
        }
        Columns {
            row_dims: self.row_dims.clone(),
            col_dims: self.col_dims.clone(),
            cols,
        }
    }

    /// Applies the operator to a vector on its own column space.
    pub fn apply(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let cols = self.columns();
        let mut out = SparseVec::new();
        for (&j, x) in v {
            for (i, a) in &cols.cols[j] {
                add_into(&mut out, *i, a.clone() * x.clone());
            }
        }
        out
    }

    /// Materializes the operator acting on `placement.target_legs` (in that
    /// order) of the full space and as identity on every other leg.
    pub fn place_on_legs(&self, placement: &LegPlacement) -> Result<Self> {
        let placed = PlacedOperator::new(self, placement)?;
        let dims = placement.leg_dims.clone();
        let mut out = Self::zero(dims.clone(), dims);
        for j in 0..placement.space_dim() {
            let mut basis = SparseVec::new();
            basis.insert(j, F::one());
            for (i, v) in placed.apply(&basis) {
                out.insert(i, j, v);
            }
        }
        Ok(out)
    }
}

pub(crate) fn add_into<F: Field>(v: &mut SparseVec<F>, idx: usize, x: F) {
    use std::collections::btree_map::Entry;
    match v.entry(idx) {
        Entry::Vacant(e) => {
            if !x.is_zero() {
                e.insert(x);
            }
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().clone() + x;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

#[derive(Clone)]
pub struct Columns<F> {
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    cols: Vec<Vec<(usize, F)>>,
}

/// An operator embedded on some legs of a larger space, applied lazily.
pub struct PlacedOperator<F> {
    cols: Vec<Vec<(usize, F)>>,
    space_strides: Vec<usize>,
    target_legs: Vec<usize>,
    target_dims: Vec<usize>,
    /// Offset in the full space contributed by each flattened row multi-index.
    row_offsets: Vec<usize>,
    space_dim: usize,
}

impl<F: Field> PlacedOperator<F> {
    pub fn new(op: &Operator<F>, placement: &LegPlacement) -> Result<Self> {
        Self::from_columns(&op.columns(), placement)
    }

    pub fn from_columns(cols: &Columns<F>, placement: &LegPlacement) -> Result<Self> {
        let k = placement.target_legs.len();
        if cols.row_dims.len() != k || cols.col_dims.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "operator with {} legs placed on {} legs",
                cols.row_dims.len(),
                k
            )));
        }
        for (i, &leg) in placement.target_legs.iter().enumerate() {
            let d = placement.leg_dims[leg];
            if cols.row_dims[i] != d || cols.col_dims[i] != d {
                return Err(Error::DimensionMismatch(format!(
                    "operator leg {i} has dimension {}x{} but target leg {leg} has {d}",
                    cols.row_dims[i], cols.col_dims[i]
                )));
            }
        }
        let space_strides = strides(&placement.leg_dims);
        let n_rows: usize = cols.row_dims.iter().product();
        let row_offsets = (0..n_rows)
            .map(|r| {
                unflatten(r, &cols.row_dims)
                    .iter()
                    .zip(&placement.target_legs)
                    .map(|(&digit, &leg)| digit * space_strides[leg])
                    .sum()
            })
            .collect();
        Ok(PlacedOperator {
            cols: cols.cols.clone(),
            space_strides,
            target_legs: placement.target_legs.clone(),
            target_dims: placement.target_legs.iter().map(|&l| placement.leg_dims[l]).collect(),
            row_offsets,
            space_dim: placement.space_dim(),
        })
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn apply(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::new();
        for (&idx, x) in v {
            let mut base = idx;
            let mut sub_col = 0;
            for (&leg, &dim) in self.target_legs.iter().zip(&self.target_dims) {
                let stride = self.space_strides[leg];
                let digit = (idx / stride) % dim;
                base -= digit * stride;
                sub_col = sub_col * dim + digit;
            }
            for (r, a) in &self.cols[sub_col] {
                add_into(&mut out, base + self.row_offsets[*r], a.clone() * x.clone());
            }
        }
        out
    }
}

impl<F: Field> fmt::Debug for Operator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator({:?} -> {:?}) {{", self.col_dims, self.row_dims)?;
        for (&(r, c), v) in &self.entries {
            write!(
                f,
                " {:?},{:?}: {v};",
                unflatten(r, &self.row_dims),
                unflatten(c, &self.col_dims)
            )?;
        }
        write!(f, " }}")
    }
}

/// How the four index slots of a two-leg operator are regrouped into a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grouping {
    /// `M[(i₁,j₁),(i₂,j₂)] = S[(i₁,i₂),(j₁,j₂)]`: rows carry the first leg's
    /// (row, col) pair, columns the second leg's. A rank factorization
    /// `M = L·R` then reads `S = Σ_α L_α ⊗ R^α`.
    Bipartition,
    /// `(P₁₂ S)^{t₁}` evaluated with the swap and the partial transpose,
    /// i.e. `T[(i₁,i₂),(j₁,j₂)] = S[(i₂,j₁),(i₁,j₂)]`. This is a row
    /// permutation of the bipartition matrix.
    SwapTranspose,
}

/// Regroups a square two-leg operator into a `d₁² × d₂²` matrix.
pub fn reshuffle<F: Field>(op: &Operator<F>, grouping: Grouping) -> Result<DenseMatrix<F>> {
    if !op.is_square_legs() || op.row_dims.len() != 2 {
        return Err(Error::DimensionMismatch(
            "reshuffle needs an operator on two square legs".into(),
        ));
    }
    let (d1, d2) = (op.row_dims[0], op.row_dims[1]);
    match grouping {
        Grouping::Bipartition => {
            let mut m = DenseMatrix::zeros(d1 * d1, d2 * d2);
            for (&(r, c), v) in &op.entries {
                let (i1, i2) = (r / d2, r % d2);
                let (j1, j2) = (c / d2, c % d2);
                m[(i1 * d1 + j1, i2 * d2 + j2)] = v.clone();
            }
            Ok(m)
        }
        Grouping::SwapTranspose => {
            if d1 != d2 {
                return Err(Error::DimensionMismatch(
                    "the swap regrouping needs equal legs".into(),
                ));
            }
            let swapped = Operator::swap(d1).compose(op)?;
            Ok(swapped.partial_transpose(0)?.to_dense())
        }
    }
}

/// Rank factorization of a matrix given as columns/rows: `mat = Σ_k left[k] ⊗ right[k]ᵗ`.
pub fn rank_factorize<F: Field>(mat: &DenseMatrix<F>) -> (Vec<Vec<F>>, Vec<Vec<F>>, usize) {
    let (l, r, k) = mat.rank_factorize();
    let left = (0..k).map(|c| l.column(c)).collect();
    let right = (0..k).map(|i| r.row(i).to_vec()).collect();
    (left, right, k)
}
