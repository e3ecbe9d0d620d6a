use std::collections::BTreeMap;

use super::{Field, LinalgError};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Column-major sparse matrix over an exact field.
#[derive(Clone, Debug)]
pub struct SparseMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> PartialEq for SparseMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.columns == other.columns
    }
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            field: field.clone(),
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, field.one())]).collect();
        SparseMatrix {
            field: field.clone(),
            rows: n,
            cols: n,
            columns,
        }
    }

    /// Builds from `(row, col, value)` triples; zeros are dropped, duplicates and
    /// out-of-range indices are rejected.
    pub fn from_entries<I>(
        field: &F,
        rows: usize,
        cols: usize,
        entries: I,
    ) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, F::Elem)>,
    {
        let mut by_col: Vec<BTreeMap<usize, F::Elem>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(LinalgError::OutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            if by_col[c].insert(r, v).is_some() {
                return Err(LinalgError::DuplicateEntry { row: r, col: c });
            }
        }
        let columns = by_col
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !field.is_zero(v)).collect())
            .collect();
        Ok(SparseMatrix {
            field: field.clone(),
            rows,
            cols,
            columns,
        })
    }

    /// Like `from_entries` but sums repeated keys. Used by assembly code.
    pub fn from_accumulated<I>(field: &F, rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, F::Elem)>,
    {
        let mut by_col: Vec<BTreeMap<usize, F::Elem>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in entries {
            assert!(
                r < rows && c < cols,
                "entry ({r},{c}) outside {rows}x{cols}"
            );
            let slot = by_col[c].entry(r).or_insert_with(|| field.zero());
            *slot = field.add(slot, &v);
        }
        let columns = by_col
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !field.is_zero(v)).collect())
            .collect();
        SparseMatrix {
            field: field.clone(),
            rows,
            cols,
            columns,
        }
    }

    pub fn from_columns(field: &F, rows: usize, columns: Vec<SparseVec<F::Elem>>) -> Self {
        debug_assert!(columns.iter().all(|c| c.windows(2).all(|w| w[0].0 < w[1].0)
            && c.iter().all(|(r, v)| *r < rows && !field.is_zero(v))));
        SparseMatrix {
            field: field.clone(),
            rows,
            cols: columns.len(),
            columns,
        }
    }

    /// Dense integer literal, row by row. Convenient in tests and fixtures.
    pub fn from_i64_rows(field: &F, data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        let entries = data.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols, "ragged literal");
            row.iter()
                .enumerate()
                .map(move |(c, &v)| (r, c, field.from_i64(v)))
        });
        Self::from_entries(field, rows, cols, entries).expect("literal indices are in range")
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
    pub fn column(&self, c: usize) -> &[(usize, F::Elem)] {
        &self.columns[c]
    }
    pub fn columns(&self) -> &[SparseVec<F::Elem>] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.columns[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// Entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    /// Row-major sparse rows.
    pub fn to_rows(&self) -> Vec<SparseVec<F::Elem>> {
        let mut rows: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                rows[*r].push((c, v.clone()));
            }
        }
        rows
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        let mut out = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        SparseMatrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            columns: self.to_rows(),
        }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        if self.field.is_zero(s) {
            return Self::zeros(&self.field, self.rows, self.cols);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(r, v)| (*r, self.field.mul(v, s)))
                    .collect()
            })
            .collect();
        SparseMatrix {
            columns,
            ..self.clone()
        }
    }

    /// `self * v` for a sparse column vector.
    pub fn apply(&self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
        for (c, x) in v {
            for (r, a) in &self.columns[*c] {
                let slot = acc.entry(*r).or_insert_with(|| self.field.zero());
                *slot = self.field.add(slot, &self.field.mul(a, x));
            }
        }
        acc.into_iter()
            .filter(|(_, v)| !self.field.is_zero(v))
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                op: "mul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let columns = other.columns.iter().map(|col| self.apply(col)).collect();
        Ok(SparseMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::ShapeMismatch {
                op: "add",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| axpy(&self.field, a, &self.field.one(), b))
            .collect();
        Ok(SparseMatrix {
            columns,
            ..self.clone()
        })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::ShapeMismatch {
                op: "hcat",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(SparseMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols + other.cols,
            columns,
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let columns = idx.iter().map(|&c| self.columns[c].clone()).collect();
        SparseMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: idx.len(),
            columns,
        }
    }

    /// Places `block` with its top-left corner at `(row0, col0)` of an accumulator.
    pub fn push_block_entries(
        &self,
        row0: usize,
        col0: usize,
        out: &mut Vec<(usize, usize, F::Elem)>,
    ) {
        for (r, c, v) in self.entries() {
            out.push((row0 + r, col0 + c, v.clone()));
        }
    }
}

/// `a + s * b` on sparse vectors.
pub fn axpy<F: Field>(
    field: &F,
    a: &[(usize, F::Elem)],
    s: &F::Elem,
    b: &[(usize, F::Elem)],
) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = field.mul(s, &b[j].1);
            if !field.is_zero(&v) {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = field.add(&a[i].1, &field.mul(s, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
