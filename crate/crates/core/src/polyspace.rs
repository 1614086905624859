//! The space P_d of homogeneous degree-d polynomials in x_1..x_{n+1} over
//! F_q: monomial indexing, evaluation, formal partial derivatives and the
//! substitution action f -> f(Ax).
//!
//! Monomials are indexed in graded-lexicographic order with
//! x_1 > x_2 > ... > x_{n+1}, largest first, so the coefficient vector of
//! x_1^d always sits at position 0. Variables are 1-indexed in the text
//! grammar.

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldSpec};
use crate::linalg::MatrixFq;
use std::collections::HashMap;
use std::sync::Arc;

/// Exact binomial coefficient as u128; panics on overflow (desk-scale
/// parameters stay far below that).
pub fn binom(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The ordered monomial basis of P_d for fixed (n, d).
#[derive(Debug)]
pub struct MonomialBasis {
    n: u32,
    d: u32,
    tuples: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl PartialEq for MonomialBasis {
    fn eq(&self, other: &Self) -> bool {
        // the tuple order is a deterministic function of (n, d)
        self.n == other.n && self.d == other.d
    }
}
impl Eq for MonomialBasis {}

impl MonomialBasis {
    /// Build the basis; `d = 0` yields the one-element constant basis used
    /// internally for derivative chains.
    pub fn new(n: u32, d: u32, budgets: &Budgets) -> Result<Arc<MonomialBasis>> {
        assert!(n >= 1, "ambient projective dimension must be >= 1");
        let size = binom((d + n) as u64, n as u64);
        if size > budgets.max_basis as u128 {
            return Err(Error::BasisTooLarge {
                size: size.min(u64::MAX as u128) as u64,
                limit: budgets.max_basis,
            });
        }
        let mut tuples = Vec::with_capacity(size as usize);
        let mut current = vec![0u32; (n + 1) as usize];
        gen_tuples(&mut tuples, &mut current, 0, d);
        let index = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(Arc::new(MonomialBasis {
            n,
            d,
            tuples,
            index,
        }))
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn vars(&self) -> usize {
        (self.n + 1) as usize
    }
    pub fn size(&self) -> usize {
        self.tuples.len()
    }
    pub fn tuples(&self) -> &[Vec<u32>] {
        &self.tuples
    }
    pub fn tuple(&self, i: usize) -> &[u32] {
        &self.tuples[i]
    }

    /// Position of an exponent tuple in the graded-lex order.
    pub fn index_of(&self, t: &[u32]) -> usize {
        debug_assert_eq!(t.len(), self.vars());
        debug_assert_eq!(t.iter().sum::<u32>(), self.d);
        self.index[t]
    }

    /// Index lookup without allocating a key; sums two tuples coordinatewise.
    pub fn index_of_sum(&self, a: &[u32], b: &[u32]) -> usize {
        let key: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.index[&key]
    }
}

fn gen_tuples(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == current.len() {
        current[pos] = left;
        out.push(current.clone());
        return;
    }
    // descending exponent on the earlier (larger) variable ranks it higher
    for e in (0..=left).rev() {
        current[pos] = e;
        gen_tuples(out, current, pos + 1, left - e);
    }
}

/// A homogeneous polynomial as a coefficient vector over a monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyVec {
    basis: Arc<MonomialBasis>,
    spec: Arc<FieldSpec>,
    coeffs: Vec<FieldElem>,
}

impl PolyVec {
    pub fn new(basis: Arc<MonomialBasis>, spec: Arc<FieldSpec>, coeffs: Vec<FieldElem>) -> Self {
        assert_eq!(coeffs.len(), basis.size(), "coefficient count must match basis");
        PolyVec {
            basis,
            spec,
            coeffs,
        }
    }

    pub fn zero(basis: Arc<MonomialBasis>, spec: Arc<FieldSpec>) -> Self {
        let len = basis.size();
        PolyVec::new(basis, spec, vec![FieldElem::ZERO; len])
    }

    /// The single monomial with exponent tuple `t` and coefficient `c`.
    pub fn monomial(
        basis: Arc<MonomialBasis>,
        spec: Arc<FieldSpec>,
        t: &[u32],
        c: FieldElem,
    ) -> Self {
        let mut f = PolyVec::zero(basis, spec);
        let i = f.basis.index_of(t);
        f.coeffs[i] = c;
        f
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }
    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }
    pub fn coeffs_mut(&mut self) -> &mut [FieldElem] {
        &mut self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    pub fn degree(&self) -> u32 {
        self.basis.d()
    }

    pub fn add_assign(&mut self, other: &PolyVec) {
        debug_assert_eq!(self.basis.size(), other.basis.size());
        let f = &self.spec;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = f.add(*a, *b);
        }
    }

    pub fn scale(&mut self, c: FieldElem) {
        let f = &self.spec;
        for a in self.coeffs.iter_mut() {
            *a = f.mul(*a, c);
        }
    }

    /// Divide by the first nonzero coefficient so it becomes 1; returns that
    /// coefficient, or `None` for the zero polynomial.
    pub fn canonicalize(&mut self) -> Option<FieldElem> {
        let lead = self.coeffs.iter().position(|c| !c.is_zero())?;
        let v = self.coeffs[lead];
        if v != FieldElem::ONE {
            let inv = self.spec.inv(v).expect("leading coefficient is nonzero");
            self.scale(inv);
        }
        Some(v)
    }

    /// Exact evaluation at an affine point with n+1 coordinates.
    pub fn evaluate(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.basis.vars() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.basis.vars()
            )));
        }
        let f = &self.spec;
        let mut acc = FieldElem::ZERO;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = c;
            for (x, &e) in point.iter().zip(self.basis.tuple(i)) {
                if e > 0 {
                    term = f.mul(term, f.pow(*x, e as i64).expect("nonnegative exponent"));
                }
            }
            acc = f.add(acc, term);
        }
        Ok(acc)
    }

    /// Formal partial derivatives, one per variable, in degree d-1.
    /// Characteristic-p arithmetic applies: exponents divisible by p kill
    /// the term.
    pub fn partials(&self, budgets: &Budgets) -> Result<Vec<PolyVec>> {
        assert!(self.basis.d() >= 1, "derivative needs degree >= 1");
        let lower = MonomialBasis::new(self.basis.n(), self.basis.d() - 1, budgets)?;
        let f = &self.spec;
        let vars = self.basis.vars();
        let mut out: Vec<PolyVec> = (0..vars)
            .map(|_| PolyVec::zero(lower.clone(), self.spec.clone()))
            .collect();
        let mut t_scratch = vec![0u32; vars];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = self.basis.tuple(i);
            for v in 0..vars {
                if t[v] == 0 {
                    continue;
                }
                let scalar = f.from_int(t[v] as u64);
                if scalar.is_zero() {
                    continue;
                }
                t_scratch.copy_from_slice(t);
                t_scratch[v] -= 1;
                let j = lower.index_of(&t_scratch);
                let term = f.mul(c, scalar);
                out[v].coeffs[j] = f.add(out[v].coeffs[j], term);
            }
        }
        Ok(out)
    }

    /// Product of two homogeneous polynomials into the given target basis of
    /// degree deg(a) + deg(b).
    pub fn multiply(a: &PolyVec, b: &PolyVec, target: &Arc<MonomialBasis>) -> PolyVec {
        debug_assert_eq!(a.basis.n(), b.basis.n());
        debug_assert_eq!(target.d(), a.basis.d() + b.basis.d());
        let f = &a.spec;
        let mut out = PolyVec::zero(target.clone(), a.spec.clone());
        for (i, &ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ta = a.basis.tuple(i);
            for (j, &cb) in b.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let idx = target.index_of_sum(ta, b.basis.tuple(j));
                let term = f.mul(ca, cb);
                out.coeffs[idx] = f.add(out.coeffs[idx], term);
            }
        }
        out
    }

    /// Coefficient row of `m * self` inside `target`, where `m` is the
    /// monomial with exponent tuple `t` of complementary degree. Used to
    /// build Macaulay rows without going through full products.
    pub fn shifted_row(&self, t: &[u32], target: &Arc<MonomialBasis>) -> Vec<FieldElem> {
        debug_assert_eq!(
            target.d(),
            self.basis.d() + t.iter().sum::<u32>()
        );
        let mut row = vec![FieldElem::ZERO; target.size()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            row[target.index_of_sum(self.basis.tuple(i), t)] = c;
        }
        row
    }
}

/// Bases of every degree 0..=d, shared by the substitution machinery.
fn basis_tower(n: u32, d: u32, budgets: &Budgets) -> Result<Vec<Arc<MonomialBasis>>> {
    (0..=d).map(|e| MonomialBasis::new(n, e, budgets)).collect()
}

/// The linear forms rows of `a`, i.e. the images of the variables under
/// x -> Ax, as degree-1 polynomials.
fn variable_images(
    a: &MatrixFq,
    deg1: &Arc<MonomialBasis>,
    spec: &Arc<FieldSpec>,
) -> Vec<PolyVec> {
    let vars = deg1.vars();
    assert_eq!(a.rows(), vars);
    assert_eq!(a.cols(), vars);
    (0..vars)
        .map(|i| {
            let mut l = PolyVec::zero(deg1.clone(), spec.clone());
            for j in 0..vars {
                // the monomial x_{j+1} has exponent tuple e_j
                let mut t = vec![0u32; vars];
                t[j] = 1;
                let idx = deg1.index_of(&t);
                l.coeffs_mut()[idx] = a[(i, j)];
            }
            l
        })
        .collect()
}

/// Per-variable powers L_i^e for e = 0..=d, computed by iterated dense
/// multiplication (exact in every characteristic).
struct PowerTable {
    pows: Vec<Vec<PolyVec>>,
}

impl PowerTable {
    fn new(
        a: &MatrixFq,
        tower: &[Arc<MonomialBasis>],
        spec: &Arc<FieldSpec>,
    ) -> PowerTable {
        let d = tower.len() - 1;
        let images = variable_images(a, &tower[1], spec);
        let one = PolyVec::new(tower[0].clone(), spec.clone(), vec![FieldElem::ONE]);
        let pows = images
            .iter()
            .map(|l| {
                let mut col = Vec::with_capacity(d + 1);
                col.push(one.clone());
                for e in 1..=d {
                    let next = PolyVec::multiply(&col[e - 1], l, &tower[e]);
                    col.push(next);
                }
                col
            })
            .collect();
        PowerTable { pows }
    }

    /// Expand the image of the monomial with exponent tuple `t`.
    fn monomial_image(
        &self,
        t: &[u32],
        tower: &[Arc<MonomialBasis>],
        spec: &Arc<FieldSpec>,
    ) -> PolyVec {
        let mut acc = PolyVec::new(tower[0].clone(), spec.clone(), vec![FieldElem::ONE]);
        let mut deg = 0usize;
        for (i, &e) in t.iter().enumerate() {
            if e == 0 {
                continue;
            }
            deg += e as usize;
            acc = PolyVec::multiply(&acc, &self.pows[i][e as usize], &tower[deg]);
        }
        acc
    }
}

/// The polynomial x -> f(Ax). Degree and homogeneity are preserved; `a`
/// must be an invertible (n+1)x(n+1) matrix over the same field.
pub fn substitute(f: &PolyVec, a: &MatrixFq, budgets: &Budgets) -> Result<PolyVec> {
    if a.spec() != f.spec() {
        return Err(Error::FieldMismatch);
    }
    if a.rows() != f.basis().vars() || a.cols() != f.basis().vars() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, polynomial has {} variables",
            a.rows(),
            a.cols(),
            f.basis().vars()
        )));
    }
    let tower = basis_tower(f.basis().n(), f.basis().d(), budgets)?;
    let table = PowerTable::new(a, &tower, f.spec());
    let spec = f.spec();
    let mut out = PolyVec::zero(f.basis().clone(), spec.clone());
    for (i, &c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut img = table.monomial_image(f.basis().tuple(i), &tower, spec);
        img.scale(c);
        out.add_assign(&img);
    }
    Ok(out)
}

/// The matrix M_A of f -> f(Ax) on the monomial basis: M_A * coeffs(f) =
/// coeffs(f(Ax)). Column j is the image of the j-th basis monomial.
pub fn substitution_matrix(
    a: &MatrixFq,
    basis: &Arc<MonomialBasis>,
    budgets: &Budgets,
) -> Result<MatrixFq> {
    if a.rows() != basis.vars() || a.cols() != basis.vars() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, basis has {} variables",
            a.rows(),
            a.cols(),
            basis.vars()
        )));
    }
    let spec = a.spec().clone();
    let tower = basis_tower(basis.n(), basis.d(), budgets)?;
    let table = PowerTable::new(a, &tower, &spec);
    let size = basis.size();
    let mut m = MatrixFq::zeros(spec.clone(), size, size);
    for j in 0..size {
        let img = table.monomial_image(basis.tuple(j), &tower, &spec);
        for i in 0..size {
            m[(i, j)] = img.coeffs()[i];
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Text grammar
//
//   poly  := term ('+' term)*
//   term  := [coeff '*'] factor ('*' factor)*
//   factor:= 'x' index ['^' exponent]
//   coeff := integer           (prime fields, reduced mod p)
//          | '[' int (',' int)* ']'   (extension fields, basis coefficients)
//
// Whitespace is ignored. '+' inside a coefficient tuple does not occur
// since tuple entries are plain integers.
// ---------------------------------------------------------------------------

/// Render a polynomial in the text grammar, terms in basis order.
pub fn format_poly(f: &PolyVec) -> String {
    let spec = f.spec();
    let mut terms = Vec::new();
    for (i, &c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let t = f.basis().tuple(i);
        let mut factors = Vec::new();
        for (v, &e) in t.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(format!("x{}", v + 1)),
                _ => factors.push(format!("x{}^{}", v + 1, e)),
            }
        }
        let mono = factors.join("*");
        let term = if mono.is_empty() {
            spec.format_elem(c)
        } else if c == FieldElem::ONE {
            mono
        } else {
            format!("{}*{}", spec.format_elem(c), mono)
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// Parse the text grammar. The number of variables is inferred from the
/// largest index present unless `force_n` pins the ambient dimension; the
/// degree is the common total degree of the terms.
pub fn parse_poly(
    s: &str,
    spec: &Arc<FieldSpec>,
    force_n: Option<u32>,
    budgets: &Budgets,
) -> Result<PolyVec> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // split on '+' at bracket depth 0
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, ch) in compact.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            '+' if depth == 0 && i > start => {
                parts.push(&compact[start..i]);
                start = i + 1;
            }
            '+' if depth == 0 => {
                return Err(Error::Parse("empty term".into()));
            }
            _ => {}
        }
    }
    parts.push(&compact[start..]);

    struct RawTerm {
        coeff: FieldElem,
        exps: Vec<(u32, u32)>, // (variable index 1-based, exponent)
    }
    let mut raw = Vec::new();
    let mut max_var = 0u32;
    for part in parts {
        if part.is_empty() {
            return Err(Error::Parse("empty term".into()));
        }
        let mut coeff = FieldElem::ONE;
        let mut exps: Vec<(u32, u32)> = Vec::new();
        // split on '*' at depth 0
        let mut fdepth = 0i32;
        let mut fstart = 0usize;
        let mut factors = Vec::new();
        for (i, ch) in part.char_indices() {
            match ch {
                '[' => fdepth += 1,
                ']' => fdepth -= 1,
                '*' if fdepth == 0 => {
                    factors.push(&part[fstart..i]);
                    fstart = i + 1;
                }
                _ => {}
            }
        }
        factors.push(&part[fstart..]);
        for (fi, factor) in factors.iter().enumerate() {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in term {part}")));
            }
            if let Some(rest) = factor.strip_prefix('x') {
                let (var_s, exp_s) = match rest.split_once('^') {
                    Some((v, e)) => (v, Some(e)),
                    None => (rest, None),
                };
                let var: u32 = var_s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable: {factor}")))?;
                if var == 0 {
                    return Err(Error::Parse("variables are 1-indexed".into()));
                }
                let exp: u32 = match exp_s {
                    Some(e) => e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent: {factor}")))?,
                    None => 1,
                };
                max_var = max_var.max(var);
                match exps.iter_mut().find(|(v, _)| *v == var) {
                    Some((_, e)) => *e += exp,
                    None => exps.push((var, exp)),
                }
            } else if fi == 0 {
                coeff = spec.parse_elem(factor)?;
            } else {
                return Err(Error::Parse(format!(
                    "coefficient must be the first factor: {part}"
                )));
            }
        }
        if exps.is_empty() {
            return Err(Error::Parse(format!(
                "term {part} has no variables; homogeneous polynomials of degree >= 1 are required"
            )));
        }
        raw.push(RawTerm { coeff, exps });
    }

    let vars = match force_n {
        Some(n) => {
            if max_var > n + 1 {
                return Err(Error::Parse(format!(
                    "variable x{max_var} exceeds n+1 = {}",
                    n + 1
                )));
            }
            n + 1
        }
        None => max_var.max(2), // a hypersurface needs at least P^1
    };
    let degrees: Vec<u32> = raw
        .iter()
        .map(|t| t.exps.iter().map(|(_, e)| e).sum())
        .collect();
    let d = degrees[0];
    if degrees.iter().any(|&x| x != d) {
        return Err(Error::Parse("polynomial is not homogeneous".into()));
    }
    if d == 0 {
        return Err(Error::Parse("degree must be >= 1".into()));
    }
    let basis = MonomialBasis::new(vars - 1, d, budgets)?;
    let mut f = PolyVec::zero(basis.clone(), spec.clone());
    for t in raw {
        let mut tuple = vec![0u32; vars as usize];
        for (v, e) in t.exps {
            tuple[(v - 1) as usize] += e;
        }
        let idx = basis.index_of(&tuple);
        let cur = f.coeffs()[idx];
        f.coeffs_mut()[idx] = spec.add(cur, t.coeff);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn field(p: u64, k: u32) -> Arc<FieldSpec> {
        FieldSpec::new(p, k, &Budgets::default()).unwrap()
    }

    fn b() -> Budgets {
        Budgets::default()
    }

    fn random_invertible(spec: &Arc<FieldSpec>, n: usize, rng: &mut StdRng) -> MatrixFq {
        loop {
            let entries: Vec<FieldElem> = (0..n * n)
                .map(|_| FieldElem(rng.gen_range(0..spec.q() as u32)))
                .collect();
            let m = MatrixFq::new(spec.clone(), n, n, entries);
            if m.is_invertible() {
                return m;
            }
        }
    }

    fn random_poly(
        basis: &Arc<MonomialBasis>,
        spec: &Arc<FieldSpec>,
        rng: &mut StdRng,
    ) -> PolyVec {
        let coeffs = (0..basis.size())
            .map(|_| FieldElem(rng.gen_range(0..spec.q() as u32)))
            .collect();
        PolyVec::new(basis.clone(), spec.clone(), coeffs)
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(MonomialBasis::new(2, 3, &b()).unwrap().size(), 10);
        assert_eq!(MonomialBasis::new(3, 3, &b()).unwrap().size(), 20);
        assert_eq!(MonomialBasis::new(2, 4, &b()).unwrap().size(), 15);
        for n in 1..=4u32 {
            for d in 1..=12u32 {
                let m = MonomialBasis::new(n, d, &b()).unwrap();
                assert_eq!(m.size() as u128, binom((d + n) as u64, n as u64));
            }
        }
    }

    #[test]
    fn basis_order_is_graded_lex_descending() {
        let m = MonomialBasis::new(2, 2, &b()).unwrap();
        let expected: Vec<Vec<u32>> = vec![
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![1, 0, 1],
            vec![0, 2, 0],
            vec![0, 1, 1],
            vec![0, 0, 2],
        ];
        assert_eq!(m.tuples(), expected.as_slice());
        for (i, t) in m.tuples().iter().enumerate() {
            assert_eq!(m.index_of(t), i);
        }
    }

    #[test]
    fn basis_budget_guard() {
        let tight = Budgets {
            max_basis: 5,
            ..Budgets::default()
        };
        assert!(MonomialBasis::new(2, 3, &tight).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let f3 = field(3, 1);
        let basis = MonomialBasis::new(2, 2, &b()).unwrap();
        // x1*x2 + x3^2 at (1,2,1) over F_3: 2 + 1 = 0
        let mut f = PolyVec::zero(basis.clone(), f3.clone());
        let i = basis.index_of(&[1, 1, 0]);
        let j = basis.index_of(&[0, 0, 2]);
        f.coeffs_mut()[i] = FieldElem::ONE;
        f.coeffs_mut()[j] = FieldElem::ONE;
        let v = f
            .evaluate(&[FieldElem(1), FieldElem(2), FieldElem(1)])
            .unwrap();
        assert_eq!(v, FieldElem::ZERO);

        // x1^d at (1,0,...,0) -> 1; anything at 0 -> 0
        for d in 1..5 {
            let basis = MonomialBasis::new(2, d, &b()).unwrap();
            let f = PolyVec::monomial(basis.clone(), f3.clone(), &[d, 0, 0], FieldElem::ONE);
            assert_eq!(
                f.evaluate(&[FieldElem(1), FieldElem(0), FieldElem(0)])
                    .unwrap(),
                FieldElem::ONE
            );
            assert_eq!(
                f.evaluate(&[FieldElem(0); 3]).unwrap(),
                FieldElem::ZERO
            );
        }
    }

    #[test]
    fn partials_examples() {
        // d(x1^2)/dx1 = 2x1 = 0 over F_2
        let f2 = field(2, 1);
        let basis = MonomialBasis::new(1, 2, &b()).unwrap();
        let f = PolyVec::monomial(basis.clone(), f2.clone(), &[2, 0], FieldElem::ONE);
        let parts = f.partials(&b()).unwrap();
        assert!(parts[0].is_zero());

        // d(x1*x2)/dx1 = x2
        let basis = MonomialBasis::new(1, 2, &b()).unwrap();
        let f = PolyVec::monomial(basis.clone(), f2.clone(), &[1, 1], FieldElem::ONE);
        let parts = f.partials(&b()).unwrap();
        let lower = parts[0].basis().clone();
        assert_eq!(
            parts[0],
            PolyVec::monomial(lower, f2.clone(), &[0, 1], FieldElem::ONE)
        );

        // over F_3, all partials of x1^3+x2^3+x3^3 vanish
        let f3 = field(3, 1);
        let basis = MonomialBasis::new(2, 3, &b()).unwrap();
        let mut f = PolyVec::zero(basis.clone(), f3.clone());
        for t in [[3, 0, 0], [0, 3, 0], [0, 0, 3]] {
            let i = basis.index_of(&t);
            f.coeffs_mut()[i] = FieldElem::ONE;
        }
        for p in f.partials(&b()).unwrap() {
            assert!(p.is_zero());
        }
    }

    #[test]
    fn substitute_examples() {
        let f5 = field(5, 1);
        let basis = MonomialBasis::new(2, 2, &b()).unwrap();

        // f o I = f
        let mut rng = StdRng::seed_from_u64(3);
        let f = random_poly(&basis, &f5, &mut rng);
        let id = MatrixFq::identity(f5.clone(), 3);
        assert_eq!(substitute(&f, &id, &b()).unwrap(), f);

        // x1^2 under swap(x1,x2) -> x2^2
        let sq1 = PolyVec::monomial(basis.clone(), f5.clone(), &[2, 0, 0], FieldElem::ONE);
        let mut swap = MatrixFq::zeros(f5.clone(), 3, 3);
        swap[(0, 1)] = FieldElem::ONE;
        swap[(1, 0)] = FieldElem::ONE;
        swap[(2, 2)] = FieldElem::ONE;
        let img = substitute(&sq1, &swap, &b()).unwrap();
        assert_eq!(
            img,
            PolyVec::monomial(basis.clone(), f5.clone(), &[0, 2, 0], FieldElem::ONE)
        );

        // x1*x2 under diag(2,3,1) over F_5 -> 6*x1x2 = x1x2
        let f = PolyVec::monomial(basis.clone(), f5.clone(), &[1, 1, 0], FieldElem::ONE);
        let mut diag = MatrixFq::zeros(f5.clone(), 3, 3);
        diag[(0, 0)] = FieldElem(2);
        diag[(1, 1)] = FieldElem(3);
        diag[(2, 2)] = FieldElem(1);
        assert_eq!(substitute(&f, &diag, &b()).unwrap(), f);
    }

    #[test]
    fn substitution_matrix_consistency_and_action() {
        let mut rng = StdRng::seed_from_u64(17);
        for (p, k) in [(2u64, 1u32), (3, 1), (5, 1), (2, 2)] {
            let spec = field(p, k);
            for (n, d) in [(1u32, 3u32), (2, 2), (2, 3)] {
                let basis = MonomialBasis::new(n, d, &b()).unwrap();
                let a = random_invertible(&spec, basis.vars(), &mut rng);
                let bm = random_invertible(&spec, basis.vars(), &mut rng);
                let ma = substitution_matrix(&a, &basis, &b()).unwrap();
                let mb = substitution_matrix(&bm, &basis, &b()).unwrap();

                // identity maps to the identity matrix
                let id = MatrixFq::identity(spec.clone(), basis.vars());
                let mid = substitution_matrix(&id, &basis, &b()).unwrap();
                assert_eq!(mid, MatrixFq::identity(spec.clone(), basis.size()));

                // matrix/functional consistency on random f
                let f = random_poly(&basis, &spec, &mut rng);
                let via_matrix = ma.matvec(f.coeffs());
                let direct = substitute(&f, &a, &b()).unwrap();
                assert_eq!(via_matrix, direct.coeffs());

                // anti-homomorphism M_{AB} = M_B * M_A
                let ab = a.matmul(&bm);
                let mab = substitution_matrix(&ab, &basis, &b()).unwrap();
                assert_eq!(mab, mb.matmul(&ma));

                // inverse action M_{A^{-1}} = M_A^{-1}
                let ainv = a.inverse().unwrap();
                let minv = substitution_matrix(&ainv, &basis, &b()).unwrap();
                assert_eq!(
                    minv.matmul(&ma),
                    MatrixFq::identity(spec.clone(), basis.size())
                );
            }
        }
    }

    #[test]
    fn scaling_covariance() {
        // f(cA x) = c^d f(Ax) for units c
        let mut rng = StdRng::seed_from_u64(29);
        for q in [3u64, 5] {
            let spec = field(q, 1);
            let basis = MonomialBasis::new(2, 3, &b()).unwrap();
            for _ in 0..10 {
                let a = random_invertible(&spec, 3, &mut rng);
                let f = random_poly(&basis, &spec, &mut rng);
                for c in spec.units() {
                    let mut ca = MatrixFq::zeros(spec.clone(), 3, 3);
                    for i in 0..3 {
                        for j in 0..3 {
                            ca[(i, j)] = spec.mul(c, a[(i, j)]);
                        }
                    }
                    let mut expected = substitute(&f, &a, &b()).unwrap();
                    let cd = spec.pow(c, basis.d() as i64).unwrap();
                    expected.scale(cd);
                    assert_eq!(substitute(&f, &ca, &b()).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn euler_relation_char_p_form() {
        // sum_i x_i * df/dx_i = (d mod p) * f, coefficientwise
        let mut rng = StdRng::seed_from_u64(41);
        for (p, k) in [(2u64, 1u32), (3, 1), (5, 1)] {
            let spec = field(p, k);
            for (n, d) in [(1u32, 2u32), (2, 3), (2, 4), (2, 6)] {
                let basis = MonomialBasis::new(n, d, &b()).unwrap();
                let f = random_poly(&basis, &spec, &mut rng);
                let parts = f.partials(&b()).unwrap();
                let mut acc = PolyVec::zero(basis.clone(), spec.clone());
                for (v, part) in parts.iter().enumerate() {
                    let mut t = vec![0u32; basis.vars()];
                    t[v] = 1;
                    let row = part.shifted_row(&t, &basis);
                    for (a_ref, b_val) in acc.coeffs_mut().iter_mut().zip(row) {
                        *a_ref = spec.add(*a_ref, b_val);
                    }
                }
                let mut expected = f.clone();
                expected.scale(spec.from_int(d as u64));
                assert_eq!(acc.coeffs(), expected.coeffs());
            }
        }
    }

    #[test]
    fn text_grammar_round_trip() {
        let budgets = b();
        let f3 = field(3, 1);
        let f = parse_poly("x1^2*x2+2*x3^3+x1*x2*x3", &f3, None, &budgets).unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(format_poly(&f), "x1^2*x2+x1*x2*x3+2*x3^3");
        let again = parse_poly(&format_poly(&f), &f3, None, &budgets).unwrap();
        assert_eq!(f, again);

        // extension coefficients
        let f4 = field(2, 2);
        let g = parse_poly("[0,1]*x1^2+x2^2", &f4, None, &budgets).unwrap();
        assert_eq!(format_poly(&g), "[0,1]*x1^2+x2^2");

        // rejects inhomogeneous input
        assert!(parse_poly("x1^2+x2", &f3, None, &budgets).is_err());
        // negative coefficients reduce mod p
        let h = parse_poly("-1*x1^2", &f3, None, &budgets).unwrap();
        assert_eq!(format_poly(&h), "2*x1^2");
        // repeated variables multiply out
        let r = parse_poly("x1*x1", &f3, None, &budgets).unwrap();
        assert_eq!(format_poly(&r), "x1^2");
    }

    #[test]
    fn random_poly_round_trip() {
        let mut rng = StdRng::seed_from_u64(53);
        for (p, k) in [(2u64, 1u32), (5, 1), (3, 2)] {
            let spec = field(p, k);
            for (n, d) in [(1u32, 2u32), (2, 3), (3, 2)] {
                let basis = MonomialBasis::new(n, d, &b()).unwrap();
                for _ in 0..10 {
                    let mut f = random_poly(&basis, &spec, &mut rng);
                    if f.is_zero() {
                        f.coeffs_mut()[0] = FieldElem::ONE;
                    }
                    let s = format_poly(&f);
                    let g = parse_poly(&s, &spec, Some(n), &b()).unwrap();
                    assert_eq!(f, g, "round trip failed for {s}");
                }
            }
        }
    }
}
