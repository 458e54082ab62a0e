use std::collections::BTreeMap;

use super::matrix::Matrix;
use super::scalar::{Field, Scalar};

/// Row-wise sparse matrix; each row stores `(column, value)` pairs sorted by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, Scalar)>>,
}

type SparseRow = Vec<(usize, Scalar)>;

impl SparseMatrix {
    pub fn new(field: Field, rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix {
            field,
            rows,
            cols,
            entries: vec![Vec::new(); rows],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn push(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "sparse index out of range");
        if v.is_zero() {
            return;
        }
        let row = &mut self.entries[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => {
                let s = &row[k].1 + &v;
                if s.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = s;
                }
            }
            Err(k) => row.insert(k, (j, v)),
        }
    }

    /// Appends an empty row and returns its index.
    pub fn add_row(&mut self) -> usize {
        self.entries.push(Vec::new());
        self.rows += 1;
        self.rows - 1
    }

    pub fn row_entries(&self, i: usize) -> &[(usize, Scalar)] {
        &self.entries[i]
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    /// Reduced echelon form: nonzero rows sorted by pivot, then zero rows.
    pub fn rref(&self) -> (SparseMatrix, Vec<usize>) {
        let mut basis = self.echelon();
        back_substitute(&mut basis);
        let pivots: Vec<usize> = basis.keys().copied().collect();
        let mut out = SparseMatrix::new(self.field, self.rows, self.cols);
        for (k, (_, row)) in basis.into_iter().enumerate() {
            out.entries[k] = row;
        }
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().len()
    }

    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let free_pos: BTreeMap<usize, usize> =
            free.iter().enumerate().map(|(t, &f)| (f, t)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (t, &f) in free.iter().enumerate() {
            k.set(f, t, self.field.one());
        }
        for (row, &p) in pivots.iter().enumerate() {
            for (c, v) in &r.entries[row] {
                if let Some(&t) = free_pos.get(c) {
                    k.set(p, t, -v);
                }
            }
        }
        k
    }

    /// Online elimination: maps pivot column to a monic row whose entries left of it vanish.
    fn echelon(&self) -> BTreeMap<usize, SparseRow> {
        let mut basis: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for row in &self.entries {
            if let Some(r) = reduce_against(&basis, row.clone()) {
                let inv = r[0].1.inv().expect("nonzero lead");
                let r: SparseRow = r.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
                basis.insert(r[0].0, r);
            }
        }
        basis
    }
}

/// `a + f * b` on sorted sparse rows.
pub(crate) fn axpy(a: &[(usize, Scalar)], f: &Scalar, b: &[(usize, Scalar)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f * &b[j].1));
            j += 1;
        } else {
            let s = &a[i].1 + &(f * &b[j].1);
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Clears every pivot column of `basis` from the leading part of `row`; `None` if it reduces to zero.
fn reduce_against(basis: &BTreeMap<usize, SparseRow>, mut row: SparseRow) -> Option<SparseRow> {
    loop {
        let lead = row.first()?;
        match basis.get(&lead.0) {
            Some(b) => {
                let f = -&lead.1;
                row = axpy(&row, &f, b);
            }
            None => return Some(row),
        }
    }
}

fn back_substitute(basis: &mut BTreeMap<usize, SparseRow>) {
    let pivots: Vec<usize> = basis.keys().rev().copied().collect();
    for (k, &p) in pivots.iter().enumerate() {
        let pivot_row = basis[&p].clone();
        for &q in &pivots[k + 1..] {
            let row = &basis[&q];
            if let Ok(pos) = row.binary_search_by_key(&p, |e| e.0) {
                let f = -&row[pos].1;
                let new = axpy(row, &f, &pivot_row);
                basis.insert(q, new);
            }
        }
    }
}
