//! Sparse exact linear algebra over a field.
//!
//! Everything here is generic over [`Scalar`]; the crate uses
//! arbitrary-precision rationals, so no result is ever rounded.
//!
//! [`rref`] splits the matrix into blocks that share no column (connected
//! components of the row/column incidence graph) and reduces each block
//! separately. The reduced row echelon form of a matrix is unique for a
//! fixed column order, so the split does not change the result.

use std::collections::HashMap;

use crate::Scalar;

/// A sparse vector: `(index, value)` pairs, strictly increasing indices,
/// no zero values.
pub type SparseVec<T> = Vec<(usize, T)>;

/// `dst + factor * src` on sparse vectors.
pub fn axpy<T: Scalar>(dst: &[(usize, T)], factor: &T, src: &[(usize, T)]) -> SparseVec<T> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let take_dst = j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0);
        let take_src = i >= dst.len() || (j < src.len() && src[j].0 < dst[i].0);
        if take_dst {
            out.push(dst[i].clone());
            i += 1;
        } else if take_src {
            out.push((src[j].0, factor.clone() * src[j].1.clone()));
            j += 1;
        } else {
            let v = dst[i].1.clone() + factor.clone() * src[j].1.clone();
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn sparse_from_entries<T: Scalar>(entries: impl IntoIterator<Item = (usize, T)>) -> SparseVec<T> {
    let mut v: Vec<(usize, T)> = entries.into_iter().collect();
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec<T> = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = last.1.clone() + x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

fn scale<T: Scalar>(v: &mut [(usize, T)], factor: &T) {
    for e in v.iter_mut() {
        e.1 = e.1.clone() * factor.clone();
    }
}

/// Row-major sparse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<T>>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, T::one())]).collect();
        SparseMatrix { rows: n, cols: n, data }
    }

    /// Panics if a row has out-of-range or unsorted indices.
    pub fn from_sparse_rows(cols: usize, rows: Vec<SparseVec<T>>) -> Self {
        for row in &rows {
            assert!(row.windows(2).all(|w| w[0].0 < w[1].0), "row indices must increase");
            assert!(row.last().is_none_or(|e| e.0 < cols), "column index out of range");
        }
        let data: Vec<SparseVec<T>> =
            rows.into_iter().map(|r| r.into_iter().filter(|e| !e.1.is_zero()).collect()).collect();
        SparseMatrix { rows: data.len(), cols, data }
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged dense matrix");
                r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect()
            })
            .collect();
        SparseMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut buckets: Vec<Vec<(usize, T)>> = vec![Vec::new(); rows];
        for (i, j, x) in entries {
            assert!(i < rows && j < cols, "entry ({i}, {j}) outside {rows}x{cols}");
            buckets[i].push((j, x));
        }
        let data = buckets.into_iter().map(sparse_from_entries).collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, T)] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[SparseVec<T>] {
        &self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i].binary_search_by_key(&j, |e| e.0).map(|k| self.data[i][k].1.clone()).unwrap_or_else(|_| T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// `(row, col, value)` for every stored entry, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, x)| (i, *j, x)))
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec<T>> = vec![Vec::new(); self.cols];
        for (i, j, x) in self.entries() {
            data[j].push((i, x.clone()));
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Matrix product `self * rhs`. Panics on dimension mismatch.
    pub fn mul(&self, rhs: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: SparseVec<T> = Vec::new();
                for (k, x) in row {
                    acc = axpy(&acc, x, &rhs.data[*k]);
                }
                acc
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: rhs.cols, data }
    }

    /// `self * v` for a sparse column vector.
    pub fn apply(&self, v: &[(usize, T)]) -> SparseVec<T> {
        let dense: HashMap<usize, &T> = v.iter().map(|(i, x)| (*i, x)).collect();
        let mut out = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            let mut s = T::zero();
            for (j, x) in row {
                if let Some(y) = dense.get(j) {
                    s = s + x.clone() * (*y).clone();
                }
            }
            if !s.is_zero() {
                out.push((i, s));
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        self.data
            .iter()
            .map(|r| {
                let mut d = vec![T::zero(); self.cols];
                for (j, x) in r {
                    d[*j] = x.clone();
                }
                d
            })
            .collect()
    }
}

/// A subspace of `T^ambient` held as a matrix in reduced row echelon form.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<T> {
    ambient: usize,
    rows: Vec<SparseVec<T>>,
    pivots: Vec<usize>,
    pivot_row: HashMap<usize, usize>,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new(), pivot_row: HashMap::new() }
    }

    fn from_rref_rows(ambient: usize, mut rows: Vec<SparseVec<T>>) -> Self {
        rows.sort_by_key(|r| r[0].0);
        let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        let pivot_row = pivots.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Subspace { ambient, rows, pivots, pivot_row }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Strictly increasing pivot columns.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Reduced basis rows.
    pub fn basis_rows(&self) -> &[SparseVec<T>] {
        &self.rows
    }

    pub fn basis_matrix(&self) -> SparseMatrix<T> {
        SparseMatrix { rows: self.rows.len(), cols: self.ambient, data: self.rows.clone() }
    }

    /// The row whose pivot is `col`, if any.
    pub fn pivot_vector(&self, col: usize) -> Option<&[(usize, T)]> {
        self.pivot_row.get(&col).map(|&i| self.rows[i].as_slice())
    }

    /// Representative of `v` modulo the subspace with no pivot entries.
    pub fn reduce(&self, v: &[(usize, T)]) -> SparseVec<T> {
        let mut out: SparseVec<T> = v.to_vec();
        let mut pos = 0;
        while pos < out.len() {
            let (col, x) = (out[pos].0, out[pos].1.clone());
            if let Some(&r) = self.pivot_row.get(&col) {
                out = axpy(&out, &(-x), &self.rows[r]);
                // entries before `pos` are untouched: the pivot row starts at `col`
            } else {
                pos += 1;
            }
        }
        out
    }

    pub fn contains(&self, v: &[(usize, T)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Smallest subspace containing `self` and `vectors`.
    pub fn extend(&self, vectors: impl IntoIterator<Item = SparseVec<T>>) -> Self {
        let mut all = self.rows.clone();
        all.extend(vectors);
        rref(&SparseMatrix::from_sparse_rows(self.ambient, all)).0
    }
}

struct Echelon<T> {
    rows: Vec<SparseVec<T>>,
    pivot_row: HashMap<usize, usize>,
}

impl<T: Scalar> Echelon<T> {
    fn new() -> Self {
        Echelon { rows: Vec::new(), pivot_row: HashMap::new() }
    }

    /// Reduces `v` against every current pivot and, if anything survives,
    /// adds it with leading entry 1.
    fn insert(&mut self, v: SparseVec<T>) {
        let mut v = v;
        let mut pos = 0;
        while pos < v.len() {
            let (col, x) = (v[pos].0, v[pos].1.clone());
            if let Some(&r) = self.pivot_row.get(&col) {
                v = axpy(&v, &(-x), &self.rows[r]);
            } else {
                pos += 1;
            }
        }
        if v.is_empty() {
            return;
        }
        let lead = v[0].1.clone();
        if !lead.is_one() {
            let inv = T::one() / lead;
            scale(&mut v, &inv);
        }
        self.pivot_row.insert(v[0].0, self.rows.len());
        self.rows.push(v);
    }

    /// Clears every non-leading pivot entry. Rows inserted later are free of
    /// earlier pivots, so a reverse sweep finishes the job.
    fn into_reduced(mut self) -> Vec<SparseVec<T>> {
        for i in (0..self.rows.len()).rev() {
            let own = self.rows[i][0].0;
            let mut row = std::mem::take(&mut self.rows[i]);
            let mut pos = 1;
            while pos < row.len() {
                let (col, x) = (row[pos].0, row[pos].1.clone());
                match self.pivot_row.get(&col) {
                    Some(&r) if col != own => row = axpy(&row, &(-x), &self.rows[r]),
                    _ => pos += 1,
                }
            }
            self.rows[i] = row;
        }
        self.rows
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Reduced row echelon form of the row space of `m`, and its rank.
pub fn rref<T: Scalar>(m: &SparseMatrix<T>) -> (Subspace<T>, usize) {
    let mut uf = UnionFind::new(m.cols);
    for row in &m.data {
        for w in row.windows(2) {
            uf.union(w[0].0, w[1].0);
        }
    }
    let mut blocks: HashMap<usize, Echelon<T>> = HashMap::new();
    for row in &m.data {
        if let Some(&(c, _)) = row.first() {
            let root = uf.find(c);
            blocks.entry(root).or_insert_with(Echelon::new).insert(row.clone());
        }
    }
    let rows: Vec<SparseVec<T>> = blocks.into_values().flat_map(Echelon::into_reduced).collect();
    let space = Subspace::from_rref_rows(m.cols, rows);
    let rank = space.dim();
    (space, rank)
}

pub fn rank<T: Scalar>(m: &SparseMatrix<T>) -> usize {
    rref(m).1
}

/// `{v : m v = 0}`.
pub fn kernel<T: Scalar>(m: &SparseMatrix<T>) -> Subspace<T> {
    let (space, _) = rref(m);
    let mut basis = Vec::new();
    for free in quotient_basis(m.cols, &space) {
        // v = e_free − Σ_r row_r[free] e_{pivot_r}
        let mut v: SparseVec<T> = vec![(free, T::one())];
        for row in space.basis_rows() {
            if let Ok(k) = row.binary_search_by_key(&free, |e| e.0) {
                v.push((row[0].0, -row[k].1.clone()));
            }
        }
        basis.push(sparse_from_entries(v));
    }
    rref(&SparseMatrix::from_sparse_rows(m.cols, basis)).0
}

/// Non-pivot coordinates of `space`, which index a basis of the quotient
/// `T^ambient / space`.
pub fn quotient_basis<T: Scalar>(ambient: usize, space: &Subspace<T>) -> Vec<usize> {
    assert_eq!(ambient, space.ambient(), "ambient dimension mismatch");
    (0..ambient).filter(|c| !space.is_pivot(*c)).collect()
}
