//! Gaussian elimination. Both backends produce the reduced row echelon form, which is
//! unique, so downstream bases do not depend on which backend ran.

use super::matrix::{axpy, SparseVec};
use super::{Field, SparseMatrix};

/// Below this size (both dimensions) elimination runs on a dense copy.
pub const DENSE_CUTOFF: usize = 64;

/// Reduced row echelon form: pivot rows with leading coefficient one, sorted by pivot column.
#[derive(Clone, Debug)]
pub struct Rref<E> {
    pub cols: usize,
    pub pivot_rows: Vec<(usize, SparseVec<E>)>,
}

impl<E> Rref<E> {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

pub fn rref<F: Field>(m: &SparseMatrix<F>) -> Rref<F::Elem> {
    if m.rows() <= DENSE_CUTOFF && m.cols() <= DENSE_CUTOFF {
        dense_rref(m)
    } else {
        sparse_rref(m)
    }
}

/// Rank only; skips back-substitution.
pub fn rank<F: Field>(m: &SparseMatrix<F>) -> usize {
    if m.rows() == 0 || m.cols() == 0 || m.is_zero() {
        return 0;
    }
    if m.rows() <= DENSE_CUTOFF && m.cols() <= DENSE_CUTOFF {
        return dense_rref(m).rank();
    }
    // Eliminate along the shorter side.
    let rows = if m.rows() <= m.cols() {
        m.to_rows()
    } else {
        m.columns().to_vec()
    };
    forward(m.field(), rows).len()
}

pub fn kernel_basis<F: Field>(m: &SparseMatrix<F>) -> SparseMatrix<F> {
    let field = m.field();
    let r = rref(m);
    let mut is_pivot = vec![false; m.cols()];
    for (c, _) in &r.pivot_rows {
        is_pivot[*c] = true;
    }
    let mut columns: Vec<SparseVec<F::Elem>> = Vec::new();
    for free in (0..m.cols()).filter(|c| !is_pivot[*c]) {
        let mut v: Vec<(usize, F::Elem)> = vec![(free, field.one())];
        for (pc, row) in &r.pivot_rows {
            if let Ok(k) = row.binary_search_by_key(&free, |(i, _)| *i) {
                v.push((*pc, field.neg(&row[k].1)));
            }
        }
        v.sort_by_key(|(i, _)| *i);
        columns.push(v);
    }
    SparseMatrix::from_columns(field, m.cols(), columns)
}

/// Forward elimination: rows are inserted in order, so each column's pivot is the lowest
/// row index that still has a nonzero entry there after reduction.
fn forward<F: Field>(field: &F, rows: Vec<SparseVec<F::Elem>>) -> Vec<(usize, SparseVec<F::Elem>)> {
    let width = rows
        .iter()
        .filter_map(|r| r.last().map(|(c, _)| c + 1))
        .max()
        .unwrap_or(0);
    let mut pivot_of: Vec<Option<usize>> = vec![None; width];
    let mut basis: Vec<(usize, SparseVec<F::Elem>)> = Vec::new();
    for mut v in rows {
        while let Some((lead, coef)) = v.first().cloned() {
            match pivot_of[lead] {
                Some(b) => {
                    let s = field.neg(&coef);
                    v = axpy(field, &v, &s, &basis[b].1);
                }
                None => {
                    let inv = field.inv(&coef);
                    let normalized: SparseVec<F::Elem> =
                        v.iter().map(|(c, x)| (*c, field.mul(x, &inv))).collect();
                    pivot_of[lead] = Some(basis.len());
                    basis.push((lead, normalized));
                    break;
                }
            }
        }
    }
    basis
}

fn sparse_rref<F: Field>(m: &SparseMatrix<F>) -> Rref<F::Elem> {
    let field = m.field();
    let mut basis = forward(field, m.to_rows());
    basis.sort_by_key(|(c, _)| *c);
    // Back-substitution, last pivot first.
    for k in (0..basis.len()).rev() {
        let (pc, prow) = basis[k].clone();
        for row in basis.iter_mut().take(k) {
            if let Ok(pos) = row.1.binary_search_by_key(&pc, |(i, _)| *i) {
                let s = field.neg(&row.1[pos].1);
                row.1 = axpy(field, &row.1, &s, &prow);
            }
        }
    }
    Rref {
        cols: m.cols(),
        pivot_rows: basis,
    }
}

fn dense_rref<F: Field>(m: &SparseMatrix<F>) -> Rref<F::Elem> {
    let field = m.field();
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivot_cols = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        if top == rows {
            break;
        }
        let Some(p) = (top..rows).find(|&r| !field.is_zero(&a[r][c])) else {
            continue;
        };
        a.swap(top, p);
        let inv = field.inv(&a[top][c]);
        for x in a[top].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = a[top].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == top || field.is_zero(&row[c]) {
                continue;
            }
            let s = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(x, &field.mul(&s, y));
            }
        }
        pivot_cols.push(c);
        top += 1;
    }
    let pivot_rows = pivot_cols
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let row = a[k]
                .iter()
                .enumerate()
                .filter(|(_, x)| !field.is_zero(x))
                .map(|(j, x)| (j, x.clone()))
                .collect();
            (c, row)
        })
        .collect();
    Rref { cols, pivot_rows }
}

/// Reduced vector paired with its combination over the inserted vectors.
type PivotRow<E> = (SparseVec<E>, SparseVec<E>);

/// Incrementally built basis of a column span that remembers how each reduced vector was
/// combined from the inserted vectors, so membership tests return coordinates.
#[derive(Clone, Debug)]
pub struct SpanSolver<F: Field> {
    field: F,
    /// keyed by pivot index in ambient coordinates
    pivots: std::collections::BTreeMap<usize, PivotRow<F::Elem>>,
    inserted: usize,
}

impl<F: Field> SpanSolver<F> {
    pub fn new(field: &F) -> Self {
        SpanSolver {
            field: field.clone(),
            pivots: Default::default(),
            inserted: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` against the current basis. Returns the residual and the combination
    /// `c` with `v = residual + sum c_k * inserted_k`.
    fn reduce(&self, v: &[(usize, F::Elem)]) -> (SparseVec<F::Elem>, SparseVec<F::Elem>) {
        let f = &self.field;
        let mut res: SparseVec<F::Elem> = v.to_vec();
        let mut comb: SparseVec<F::Elem> = Vec::new();
        let mut floor = 0usize;
        loop {
            let next = res
                .iter()
                .find(|(i, _)| *i >= floor && self.pivots.contains_key(i))
                .cloned();
            let Some((idx, coef)) = next else { break };
            let (pv, pc) = &self.pivots[&idx];
            // pivot vectors have coefficient one at their pivot index
            let s = f.neg(&coef);
            res = axpy(f, &res, &s, pv);
            comb = axpy(f, &comb, &coef, pc);
            floor = idx + 1;
        }
        (res, comb)
    }

    /// Inserts `v`; returns false (and leaves the span unchanged) if it is dependent.
    pub fn insert(&mut self, v: &[(usize, F::Elem)]) -> bool {
        let f = self.field.clone();
        let (res, comb) = self.reduce(v);
        let Some((lead, coef)) = res
            .iter()
            .find(|(i, _)| !self.pivots.contains_key(i))
            .cloned()
        else {
            return false;
        };
        let inv = f.inv(&coef);
        // new inserted vector gets index self.inserted: v = res + comb.inserted
        // so res = v - comb.inserted
        let mut res_comb = vec![(self.inserted, f.one())];
        res_comb = axpy(&f, &res_comb, &f.neg(&f.one()), &comb);
        let pv: SparseVec<F::Elem> = res.iter().map(|(i, x)| (*i, f.mul(x, &inv))).collect();
        let pc: SparseVec<F::Elem> = res_comb.iter().map(|(i, x)| (*i, f.mul(x, &inv))).collect();
        // keep existing pivots clean at the new pivot index
        let updates: Vec<usize> = self
            .pivots
            .iter()
            .filter(|(_, (vec, _))| vec.binary_search_by_key(&lead, |(i, _)| *i).is_ok())
            .map(|(k, _)| *k)
            .collect();
        for k in updates {
            let (vec, c) = self.pivots.get(&k).cloned().unwrap();
            let pos = vec.binary_search_by_key(&lead, |(i, _)| *i).unwrap();
            let s = f.neg(&vec[pos].1);
            let nv = axpy(&f, &vec, &s, &pv);
            let nc = axpy(&f, &c, &s, &pc);
            self.pivots.insert(k, (nv, nc));
        }
        self.pivots.insert(lead, (pv, pc));
        self.inserted += 1;
        true
    }

    /// Coordinates of `v` over the inserted vectors, or `None` if `v` is outside the span.
    pub fn solve(&self, v: &[(usize, F::Elem)]) -> Option<SparseVec<F::Elem>> {
        let (res, comb) = self.reduce(v);
        if res.is_empty() {
            Some(comb)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.solve(v).is_some()
    }
}
