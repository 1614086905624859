//! Enumeration of GL_{n+1}(F_q) and of canonical PGL_{n+1}(F_q)
//! representatives, together with exact group orders.
//!
//! A PGL class is represented by the unique scalar multiple of a matrix
//! whose first nonzero entry in row-major order is 1, so canonicalization
//! is O(1) and each class appears exactly once in the enumeration.

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::gf::{prime_power, FieldElem, FieldSpec};
use crate::linalg::MatrixFq;
use num::BigUint;
use std::collections::HashSet;
use std::sync::Arc;

/// An invertible (n+1)x(n+1) matrix over F_q, optionally known to be the
/// canonical representative of its PGL class.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElem {
    n: u32,
    matrix: MatrixFq,
    canonical: bool,
}

impl GroupElem {
    /// Wrap a matrix, checking invertibility.
    pub fn new(matrix: MatrixFq) -> Result<GroupElem> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch(format!(
                "group element must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        let n = matrix.rows() as u32 - 1;
        let canonical = is_canonical(&matrix);
        Ok(GroupElem {
            n,
            matrix,
            canonical,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn matrix(&self) -> &MatrixFq {
        &self.matrix
    }
    pub fn is_canonical_rep(&self) -> bool {
        self.canonical
    }
    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.matrix.spec()
    }

    /// The canonical representative of this element's PGL class.
    pub fn canonicalize(&self) -> GroupElem {
        if self.canonical {
            return self.clone();
        }
        let spec = self.matrix.spec().clone();
        let lead = self
            .matrix
            .entries()
            .iter()
            .find(|e| !e.is_zero())
            .expect("invertible matrix has a nonzero entry");
        let inv = spec.inv(*lead).expect("leading entry is a unit");
        let entries = self
            .matrix
            .entries()
            .iter()
            .map(|&e| spec.mul(e, inv))
            .collect();
        let matrix = MatrixFq::new(spec, self.matrix.rows(), self.matrix.cols(), entries);
        GroupElem {
            n: self.n,
            matrix,
            canonical: true,
        }
    }

    /// Matrix product (self * other), not canonicalized.
    pub fn compose(&self, other: &GroupElem) -> GroupElem {
        let matrix = self.matrix.matmul(&other.matrix);
        GroupElem {
            n: self.n,
            canonical: is_canonical(&matrix),
            matrix,
        }
    }

    pub fn inverse(&self) -> GroupElem {
        let matrix = self.matrix.inverse().expect("group element is invertible");
        GroupElem {
            n: self.n,
            canonical: is_canonical(&matrix),
            matrix,
        }
    }

    pub fn is_identity_class(&self) -> bool {
        let c = self.canonicalize();
        let m = &c.matrix;
        let dim = m.rows();
        (0..dim).all(|i| {
            (0..dim).all(|j| {
                m[(i, j)]
                    == if i == j {
                        FieldElem::ONE
                    } else {
                        FieldElem::ZERO
                    }
            })
        })
    }

    pub fn is_diagonal(&self) -> bool {
        let m = &self.matrix;
        (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m[(i, j)].is_zero()))
    }

    /// The diagonal as field elements; only meaningful when `is_diagonal`.
    pub fn diagonal(&self) -> Vec<FieldElem> {
        (0..self.matrix.rows()).map(|i| self.matrix[(i, i)]).collect()
    }

    /// Entry indices as a flat vector, usable as a hash key for the class
    /// when the element is canonical.
    pub fn entry_key(&self) -> Vec<u32> {
        self.matrix.entries().iter().map(|e| e.0).collect()
    }
}

fn is_canonical(m: &MatrixFq) -> bool {
    m.entries()
        .iter()
        .find(|e| !e.is_zero())
        .map(|e| *e == FieldElem::ONE)
        .unwrap_or(false)
}

/// Which order to compute in [`group_order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Gl,
    Pgl,
}

/// |GL_{n+1}(F_q)| = (q^{n+1}-1)(q^{n+1}-q)...(q^{n+1}-q^n); PGL divides
/// by q-1. Exact big integer; errors when q is not a prime power.
pub fn group_order(n: u32, q: u64, which: Which) -> Result<BigUint> {
    prime_power(q)?;
    let q = BigUint::from(q);
    let dim = n + 1;
    let qd = q.pow(dim);
    let mut acc = BigUint::from(1u32);
    for i in 0..dim {
        acc *= &qd - q.pow(i);
    }
    if which == Which::Pgl {
        acc /= &q - 1u32;
    }
    Ok(acc)
}

/// Streaming enumeration of canonical PGL representatives in ascending
/// row-major lexicographic order of the entry vector.
pub struct PglEnumerator {
    spec: Arc<FieldSpec>,
    dim: usize,
    /// position of the leading 1; counts down from dim*dim-1
    lead: isize,
    /// odometer over the entries after the leading 1
    state: Option<Vec<u32>>,
    done: bool,
}

impl PglEnumerator {
    pub fn new(spec: Arc<FieldSpec>, n: u32, budgets: &Budgets) -> Result<PglEnumerator> {
        let order = group_order(n, spec.q(), Which::Pgl)?;
        if order > BigUint::from(budgets.max_group) {
            return Err(Error::BudgetExceeded {
                what: format!("|PGL_{}(F_{})| enumeration", n + 1, spec.q()),
                needed: order.try_into().unwrap_or(u128::MAX),
                limit: budgets.max_group as u128,
            });
        }
        let dim = (n + 1) as usize;
        Ok(PglEnumerator {
            spec,
            dim,
            lead: (dim * dim - 1) as isize,
            state: None,
            done: false,
        })
    }

    fn advance(&mut self) -> Option<Vec<FieldElem>> {
        let q = self.spec.q() as u32;
        let total = self.dim * self.dim;
        loop {
            if self.done {
                return None;
            }
            let lead = self.lead as usize;
            let free = total - lead - 1;
            match &mut self.state {
                None => {
                    self.state = Some(vec![0u32; free]);
                }
                Some(st) => {
                    // odometer, last entry fastest
                    let mut i = free;
                    loop {
                        if i == 0 {
                            self.state = None;
                            if self.lead == 0 {
                                self.done = true;
                            } else {
                                self.lead -= 1;
                            }
                            break;
                        }
                        i -= 1;
                        st[i] += 1;
                        if st[i] < q {
                            break;
                        }
                        st[i] = 0;
                    }
                    if self.state.is_none() {
                        continue;
                    }
                }
            }
            let st = self.state.as_ref().unwrap();
            let mut entries = vec![FieldElem::ZERO; total];
            entries[lead] = FieldElem::ONE;
            for (i, &v) in st.iter().enumerate() {
                entries[lead + 1 + i] = FieldElem(v);
            }
            return Some(entries);
        }
    }
}

impl Iterator for PglEnumerator {
    type Item = GroupElem;

    fn next(&mut self) -> Option<GroupElem> {
        loop {
            let entries = self.advance()?;
            let m = MatrixFq::new(self.spec.clone(), self.dim, self.dim, entries);
            if m.is_invertible() {
                return Some(GroupElem {
                    n: self.dim as u32 - 1,
                    matrix: m,
                    canonical: true,
                });
            }
        }
    }
}

/// Collect the whole canonical-representative list.
pub fn enumerate_pgl(spec: &Arc<FieldSpec>, n: u32, budgets: &Budgets) -> Result<Vec<GroupElem>> {
    Ok(PglEnumerator::new(spec.clone(), n, budgets)?.collect())
}

/// A small generating set of PGL_{n+1}(F_q): a full-cycle coordinate
/// permutation, the elementary transvection x_1 -> x_1 + x_2, and the
/// dilation diag(g, 1, ..., 1) with g the field generator. Callers that
/// rely on generation verify it with [`generated_class_count`].
pub fn pgl_generators(spec: &Arc<FieldSpec>, n: u32) -> Vec<GroupElem> {
    let dim = (n + 1) as usize;
    let mut out = Vec::new();

    let mut cycle = MatrixFq::zeros(spec.clone(), dim, dim);
    for i in 0..dim {
        cycle[(i, (i + 1) % dim)] = FieldElem::ONE;
    }
    out.push(GroupElem::new(cycle).expect("permutation matrix is invertible"));

    let mut transvection = MatrixFq::identity(spec.clone(), dim);
    transvection[(0, 1)] = FieldElem::ONE;
    out.push(GroupElem::new(transvection).expect("transvection is invertible"));

    if spec.q() > 2 {
        let mut dil = MatrixFq::identity(spec.clone(), dim);
        dil[(0, 0)] = spec.generator();
        out.push(GroupElem::new(dil).expect("dilation is invertible"));
    }
    out
}

/// Size of the subgroup of PGL generated by `gens`, by breadth-first
/// closure over canonical representatives.
pub fn generated_class_count(gens: &[GroupElem], limit: u64) -> Result<u64> {
    assert!(!gens.is_empty());
    let dim = gens[0].matrix().rows();
    let spec = gens[0].spec().clone();
    let identity = GroupElem::new(MatrixFq::identity(spec, dim)).unwrap();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut frontier = vec![identity.canonicalize()];
    seen.insert(frontier[0].entry_key());
    while let Some(elem) = frontier.pop() {
        for g in gens {
            let next = elem.compose(g).canonicalize();
            let key = next.entry_key();
            if seen.insert(key) {
                if seen.len() as u64 > limit {
                    return Err(Error::BudgetExceeded {
                        what: "subgroup closure".into(),
                        needed: seen.len() as u128,
                        limit: limit as u128,
                    });
                }
                frontier.push(next);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// Matrix text form: semicolon-separated rows, comma-separated entries,
/// entries in the field element text form.
pub fn format_matrix(m: &MatrixFq) -> String {
    let spec = m.spec();
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|e| spec.format_elem(*e))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Parse the matrix text form. Commas inside `[...]` element tuples do not
/// split entries.
pub fn parse_matrix(s: &str, spec: &Arc<FieldSpec>) -> Result<MatrixFq> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let rows: Vec<&str> = compact.split(';').collect();
    let mut entries = Vec::new();
    let mut cols = None;
    for row in &rows {
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut start = 0usize;
        for (i, ch) in row.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&row[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&row[start..]);
        match cols {
            None => cols = Some(parts.len()),
            Some(c) if c != parts.len() => return Err(Error::Parse("ragged matrix rows".into())),
            _ => {}
        }
        for p in parts {
            entries.push(spec.parse_elem(p)?);
        }
    }
    let cols = cols.ok_or_else(|| Error::Parse("empty matrix".into()))?;
    Ok(MatrixFq::new(spec.clone(), rows.len(), cols, entries))
}
