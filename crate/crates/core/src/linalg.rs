//! Dense exact linear algebra over F_q: rank, kernel dimension and kernel
//! bases, with deterministic pivoting so results are reproducible across
//! runs and machines.

use crate::gf::{FieldElem, FieldSpec};
use std::sync::Arc;

/// A dense row-major matrix over a fixed finite field.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFq {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElem>,
    spec: Arc<FieldSpec>,
}

impl MatrixFq {
    pub fn new(spec: Arc<FieldSpec>, rows: usize, cols: usize, entries: Vec<FieldElem>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        debug_assert!(entries.iter().all(|e| (e.0 as u64) < spec.q()));
        MatrixFq {
            rows,
            cols,
            entries,
            spec,
        }
    }

    pub fn zeros(spec: Arc<FieldSpec>, rows: usize, cols: usize) -> Self {
        MatrixFq {
            rows,
            cols,
            entries: vec![FieldElem::ZERO; rows * cols],
            spec,
        }
    }

    pub fn identity(spec: Arc<FieldSpec>, n: usize) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m[(i, i)] = FieldElem::ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }
    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Rank over F_q by Gaussian elimination; the pivot in each column is
    /// the first row with a nonzero entry (exact arithmetic needs no
    /// numerical pivoting).
    pub fn rank(&self) -> usize {
        let mut ech = RowEchelon::new(self.spec.clone(), self.cols);
        for i in 0..self.rows {
            ech.insert(self.row(i).to_vec());
            if ech.rank() == self.cols {
                break;
            }
        }
        ech.rank()
    }

    /// Kernel dimension and an echelon-normalized kernel basis.
    ///
    /// The basis has one vector per free column in increasing column order;
    /// the vector for free column j has a 1 in coordinate j, entries
    /// determined by the reduced row echelon form in the pivot coordinates,
    /// and zeros in the other free coordinates.
    pub fn kernel(&self) -> (usize, Vec<Vec<FieldElem>>) {
        let f = &self.spec;
        let mut ech = RowEchelon::new(self.spec.clone(), self.cols);
        for i in 0..self.rows {
            ech.insert(self.row(i).to_vec());
        }
        let rref = ech.into_rref();
        let pivot_cols: Vec<usize> = rref.iter().map(|(c, _)| *c).collect();
        let is_pivot = {
            let mut v = vec![false; self.cols];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if is_pivot[j] {
                continue;
            }
            let mut v = vec![FieldElem::ZERO; self.cols];
            v[j] = FieldElem::ONE;
            for (r, (c, row)) in rref.iter().enumerate() {
                let _ = r;
                v[*c] = f.neg(row[j]);
            }
            basis.push(v);
        }
        (self.cols - pivot_cols.len(), basis)
    }

    pub fn matvec(&self, x: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(x.len(), self.cols);
        let f = &self.spec;
        let mut out = vec![FieldElem::ZERO; self.rows];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = FieldElem::ZERO;
            for (a, b) in self.row(i).iter().zip(x) {
                acc = f.add(acc, f.mul(*a, *b));
            }
            *slot = acc;
        }
        out
    }

    pub fn matmul(&self, other: &MatrixFq) -> MatrixFq {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.spec, other.spec);
        let f = &self.spec;
        let mut out = MatrixFq::zeros(self.spec.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, other[(k, j)]);
                    out[(i, j)] = f.add(out[(i, j)], t);
                }
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<MatrixFq> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = self.spec.clone();
        // augmented [A | I]
        let mut aug = MatrixFq::zeros(f.clone(), n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = FieldElem::ONE;
        }
        let mut row = 0;
        for col in 0..n {
            let pivot = (row..n).find(|&r| !aug[(r, col)].is_zero())?;
            if pivot != row {
                for j in 0..2 * n {
                    let tmp = aug[(row, j)];
                    aug[(row, j)] = aug[(pivot, j)];
                    aug[(pivot, j)] = tmp;
                }
            }
            let inv = f.inv(aug[(row, col)]).ok()?;
            for j in 0..2 * n {
                aug[(row, j)] = f.mul(aug[(row, j)], inv);
            }
            for r in 0..n {
                if r == row || aug[(r, col)].is_zero() {
                    continue;
                }
                let c = aug[(r, col)];
                for j in 0..2 * n {
                    let t = f.mul(c, aug[(row, j)]);
                    aug[(r, j)] = f.sub(aug[(r, j)], t);
                }
            }
            row += 1;
        }
        let mut out = MatrixFq::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl std::ops::Index<(usize, usize)> for MatrixFq {
    type Output = FieldElem;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatrixFq {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        &mut self.entries[i * self.cols + j]
    }
}

/// Incremental row-echelon accumulator: rows are inserted one at a time,
/// reduced against the pivots collected so far, and kept normalized with
/// pivot entry 1. Lets callers stream Macaulay rows and stop as soon as the
/// rank hits the column count.
pub struct RowEchelon {
    spec: Arc<FieldSpec>,
    cols: usize,
    /// (pivot column, normalized row), kept sorted by pivot column.
    pivots: Vec<(usize, Vec<FieldElem>)>,
}

impl RowEchelon {
    pub fn new(spec: Arc<FieldSpec>, cols: usize) -> Self {
        RowEchelon {
            spec,
            cols,
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.cols
    }

    /// Insert a row; returns true when it was independent of the rows seen
    /// so far (rank increased).
    pub fn insert(&mut self, mut row: Vec<FieldElem>) -> bool {
        assert_eq!(row.len(), self.cols);
        let f = self.spec.clone();
        for (c, p) in &self.pivots {
            let coeff = row[*c];
            if coeff.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(p) {
                let t = f.mul(coeff, *y);
                *x = f.sub(*x, t);
            }
        }
        let lead = match row.iter().position(|e| !e.is_zero()) {
            Some(l) => l,
            None => return false,
        };
        let inv = f.inv(row[lead]).expect("leading entry is nonzero");
        for x in row.iter_mut() {
            *x = f.mul(*x, inv);
        }
        let at = self
            .pivots
            .binary_search_by_key(&lead, |(c, _)| *c)
            .unwrap_err();
        self.pivots.insert(at, (lead, row));
        true
    }

    /// Finish reduction to reduced row echelon form and return the pivot
    /// rows as (pivot column, row) sorted by pivot column.
    pub fn into_rref(mut self) -> Vec<(usize, Vec<FieldElem>)> {
        let f = self.spec.clone();
        // clear entries above each pivot
        for i in (0..self.pivots.len()).rev() {
            let (c, prow) = self.pivots[i].clone();
            for (j, item) in self.pivots.iter_mut().enumerate().take(i) {
                let _ = j;
                let coeff = item.1[c];
                if coeff.is_zero() {
                    continue;
                }
                for (x, y) in item.1.iter_mut().zip(&prow) {
                    let t = f.mul(coeff, *y);
                    *x = f.sub(*x, t);
                }
            }
        }
        self.pivots
    }
}

/// Row-echelon accumulator over F_2 with bit-packed rows; used by the
/// smoothness saturation test where the Macaulay matrices over F_2 dominate
/// the census runtime.
pub struct RowEchelonF2 {
    cols: usize,
    words: usize,
    /// (pivot bit index, packed row)
    pivots: Vec<(usize, Vec<u64>)>,
}

impl RowEchelonF2 {
    pub fn new(cols: usize) -> Self {
        RowEchelonF2 {
            cols,
            words: cols.div_ceil(64),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.cols
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        debug_assert_eq!(row.len(), self.words);
        for (lead, p) in &self.pivots {
            if row[lead / 64] >> (lead % 64) & 1 == 1 {
                for (x, y) in row.iter_mut().zip(p) {
                    *x ^= *y;
                }
            }
        }
        let lead = match first_set_bit(&row) {
            Some(l) => l,
            None => return false,
        };
        let at = self
            .pivots
            .binary_search_by_key(&lead, |(c, _)| *c)
            .unwrap_err();
        self.pivots.insert(at, (lead, row));
        true
    }
}

fn first_set_bit(row: &[u64]) -> Option<usize> {
    for (w, &word) in row.iter().enumerate() {
        if word != 0 {
            return Some(w * 64 + word.trailing_zeros() as usize);
        }
    }
    None
}

/// Row-echelon accumulator for small odd q with byte entries and flat
/// lookup tables; the workhorse of the saturation test away from F_2.
pub struct RowEchelonU8 {
    q: usize,
    cols: usize,
    mul: Vec<u8>,
    sub: Vec<u8>,
    inv: Vec<u8>,
    pivots: Vec<(usize, Vec<u8>)>,
}

impl RowEchelonU8 {
    /// `spec.q()` must be at most 256 so entries fit in a byte.
    pub fn new(spec: &FieldSpec, cols: usize) -> Self {
        let q = spec.q() as usize;
        assert!(q <= 256, "byte echelon requires q <= 256");
        let mut mul = vec![0u8; q * q];
        let mut sub = vec![0u8; q * q];
        for a in 0..q as u32 {
            for b in 0..q as u32 {
                mul[a as usize * q + b as usize] =
                    spec.mul(FieldElem(a), FieldElem(b)).0 as u8;
                sub[a as usize * q + b as usize] =
                    spec.sub(FieldElem(a), FieldElem(b)).0 as u8;
            }
        }
        let mut inv = vec![0u8; q];
        for a in 1..q as u32 {
            inv[a as usize] = spec.inv(FieldElem(a)).unwrap().0 as u8;
        }
        RowEchelonU8 {
            q,
            cols,
            mul,
            sub,
            inv,
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.cols
    }

    pub fn reset(&mut self) {
        self.pivots.clear();
    }

    pub fn insert(&mut self, mut row: Vec<u8>) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        let q = self.q;
        for (c, p) in &self.pivots {
            let coeff = row[*c] as usize;
            if coeff == 0 {
                continue;
            }
            let mrow = &self.mul[coeff * q..(coeff + 1) * q];
            // pivot rows are zero left of their pivot column
            for (x, y) in row[*c..].iter_mut().zip(&p[*c..]) {
                *x = self.sub[*x as usize * q + mrow[*y as usize] as usize];
            }
        }
        let lead = match row.iter().position(|&e| e != 0) {
            Some(l) => l,
            None => return false,
        };
        let inv = self.inv[row[lead] as usize] as usize;
        if inv != 1 {
            let mrow = &self.mul[inv * q..(inv + 1) * q];
            for x in row[lead..].iter_mut() {
                *x = mrow[*x as usize];
            }
        }
        let at = self
            .pivots
            .binary_search_by_key(&lead, |(c, _)| *c)
            .unwrap_err();
        self.pivots.insert(at, (lead, row));
        true
    }
}
