//! Exact arithmetic in F_p and F_{p^k}, with unit-group discrete logarithms.
//!
//! Elements are stored as indices in `0..q`: the base-p digits of the index
//! are the polynomial-basis coefficients, least significant digit first, so
//! the index `c0 + c1*p + ... + c_{k-1}*p^{k-1}` represents
//! `c0 + c1*t + ... + c_{k-1}*t^{k-1}` modulo the field's irreducible
//! modulus. For a prime field the index is just the residue.
//!
//! Construction is fully deterministic: the modulus is the lexicographically
//! smallest monic irreducible of degree k (coefficients compared
//! low-degree-first) and the generator is the smallest element in the same
//! coefficient order whose multiplicative order is q-1. Log/antilog tables
//! are precomputed for q up to the table limit; larger fields fall back to
//! on-the-fly polynomial arithmetic.

use crate::config::Budgets;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// An element of a fixed finite field, encoded as an index in `0..q`.
///
/// The element only has meaning together with the [`FieldSpec`] it was
/// produced by; all arithmetic goes through the spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A finite field F_{p^k} with its chosen modulus, generator and tables.
#[derive(Debug)]
pub struct FieldSpec {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus, coefficients low-degree-first, length k+1.
    modulus: Vec<u64>,
    generator: FieldElem,
    /// exp[i] = generator^i for i in 0..2(q-1), doubled so a log-sum needs no reduction.
    exp: Vec<u32>,
    /// log[e] for e in 1..q; log[0] is a sentinel.
    log: Vec<u32>,
    /// Full q*q multiplication table for small q.
    mul_tab: Vec<u32>,
    /// Full q*q addition table for small q.
    add_tab: Vec<u32>,
    neg_tab: Vec<u32>,
    inv_tab: Vec<u32>,
}

/// Largest q for which the full q*q add/mul tables are built.
const DIRECT_TABLE_LIMIT: u64 = 256;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Factor q as p^k with p prime; errors if q is not a prime power.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut m = q;
            let mut k = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            return if m == 1 {
                Ok((p, k))
            } else {
                Err(Error::NotPrimePower(q))
            };
        }
        p += 1;
    }
    Ok((q, 1)) // q itself is prime
}

/// Dense polynomial arithmetic over F_p used for construction and for
/// fields too large for tables. Coefficients are low-degree-first.
mod poly_fp {
    /// Trim trailing zeros (highest-degree coefficients).
    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + ai * bj) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of a modulo the monic polynomial m.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        debug_assert_eq!(*m.last().unwrap(), 1, "modulus must be monic");
        let mut r: Vec<u64> = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            if lead != 0 {
                for (j, &mj) in m.iter().enumerate() {
                    let idx = shift + j;
                    let sub = (lead * mj) % p;
                    r[idx] = (r[idx] + p - sub) % p;
                }
            }
            r.pop();
            trim(&mut r);
            if r.len() <= dm {
                break;
            }
        }
        r
    }

    /// True if m (monic, degree >= 1) has no monic divisor of degree in 1..=deg(m)/2.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let deg = m.len() - 1;
        if deg == 0 {
            return false;
        }
        if deg == 1 {
            return true;
        }
        let half = deg / 2;
        // Odometer over monic candidates of each degree up to half.
        for dd in 1..=half {
            let mut c = vec![0u64; dd + 1];
            c[dd] = 1;
            loop {
                if rem(m, &c, p).is_empty() {
                    return false;
                }
                // increment the non-leading coefficients, low digit first
                let mut i = 0;
                loop {
                    if i == dd {
                        break;
                    }
                    c[i] += 1;
                    if c[i] < p {
                        break;
                    }
                    c[i] = 0;
                    i += 1;
                }
                if i == dd {
                    break;
                }
            }
        }
        true
    }
}

impl FieldSpec {
    /// Build F_{p^k} with the deterministic modulus and generator choices.
    pub fn new(p: u64, k: u32, budgets: &Budgets) -> Result<Arc<FieldSpec>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::BadExtensionDegree(k as i64));
        }
        let q = match p.checked_pow(k) {
            Some(q) if q <= budgets.max_field => q,
            other => {
                return Err(Error::FieldTooLarge {
                    q: other.unwrap_or(u64::MAX),
                    limit: budgets.max_field,
                })
            }
        };

        let modulus = Self::smallest_irreducible(p, k);
        let mut spec = FieldSpec {
            p,
            k,
            q,
            modulus,
            generator: FieldElem(0),
            exp: vec![],
            log: vec![],
            mul_tab: vec![],
            add_tab: vec![],
            neg_tab: vec![],
            inv_tab: vec![],
        };
        spec.generator = spec.find_generator();
        if q <= budgets.table_limit {
            spec.build_log_tables();
        }
        if q <= DIRECT_TABLE_LIMIT.min(budgets.table_limit) {
            spec.build_direct_tables();
        }
        Ok(Arc::new(spec))
    }

    /// Build the field of order q, factoring q = p^k.
    pub fn from_order(q: u64, budgets: &Budgets) -> Result<Arc<FieldSpec>> {
        let (p, k) = prime_power(q)?;
        FieldSpec::new(p, k, budgets)
    }

    /// The lexicographically smallest monic irreducible of degree k over F_p,
    /// coefficients compared low-degree-first.
    fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
        let k = k as usize;
        let mut c = vec![0u64; k + 1];
        c[k] = 1;
        loop {
            if poly_fp::is_irreducible(&c, p) {
                return c;
            }
            // increment (c_{k-1}, ..., c_0) so that c_0 is the most
            // significant position in the comparison order
            let mut i = k;
            loop {
                debug_assert!(i > 0, "some monic degree-k polynomial is irreducible");
                i -= 1;
                c[i] += 1;
                if c[i] < p {
                    break;
                }
                c[i] = 0;
            }
        }
    }

    /// Element whose polynomial-basis coefficients are `coeffs` (low-first).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElem {
        let mut idx = 0u64;
        for (i, &c) in coeffs.iter().enumerate().take(self.k as usize) {
            idx += (c % self.p) * self.p.pow(i as u32);
        }
        FieldElem(idx as u32)
    }

    /// Polynomial-basis coefficients of `e`, low-degree-first, length k.
    pub fn coeffs(&self, e: FieldElem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut v = e.0 as u64;
        for _ in 0..self.k {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    /// The element at position `r` in the lexicographic coefficient order
    /// (c_0 compared first). Used for deterministic smallest-element scans.
    fn lex_element(&self, r: u64) -> FieldElem {
        // digits of r base p, most significant digit = c_0
        let mut digits = Vec::with_capacity(self.k as usize);
        let mut v = r;
        for _ in 0..self.k {
            digits.push(v % self.p);
            v /= self.p;
        }
        digits.reverse(); // now digits[0] = c_0
        self.from_coeffs(&digits)
    }

    fn find_generator(&self) -> FieldElem {
        let unit_order = self.q - 1;
        let factors = distinct_prime_factors(unit_order);
        for r in 0..self.q {
            let e = self.lex_element(r);
            if e.is_zero() {
                continue;
            }
            if self.order_is(e, unit_order, &factors) {
                return e;
            }
        }
        unreachable!("the unit group of a finite field is cyclic");
    }

    fn order_is(&self, e: FieldElem, unit_order: u64, factors: &[u64]) -> bool {
        if self.pow_raw(e, unit_order) != FieldElem::ONE {
            return false;
        }
        factors
            .iter()
            .all(|&f| self.pow_raw(e, unit_order / f) != FieldElem::ONE)
    }

    fn build_log_tables(&mut self) {
        let q = self.q as usize;
        let n = q - 1;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![u32::MAX; q];
        let mut acc = FieldElem::ONE;
        for (i, slot) in exp.iter_mut().enumerate().take(n) {
            *slot = acc.0;
            if log[acc.0 as usize] == u32::MAX {
                log[acc.0 as usize] = i as u32;
            }
            acc = self.mul_raw(acc, self.generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        self.exp = exp;
        self.log = log;
    }

    fn build_direct_tables(&mut self) {
        let q = self.q as usize;
        let mut mul_tab = vec![0u32; q * q];
        let mut add_tab = vec![0u32; q * q];
        for a in 0..q as u32 {
            for b in 0..q as u32 {
                mul_tab[a as usize * q + b as usize] =
                    self.mul_raw(FieldElem(a), FieldElem(b)).0;
                add_tab[a as usize * q + b as usize] =
                    self.add_raw(FieldElem(a), FieldElem(b)).0;
            }
        }
        let mut neg_tab = vec![0u32; q];
        let mut inv_tab = vec![0u32; q];
        for a in 0..q as u32 {
            neg_tab[a as usize] = self.neg_raw(FieldElem(a)).0;
            if a != 0 {
                inv_tab[a as usize] = self.inv_raw(FieldElem(a)).0;
            }
        }
        self.mul_tab = mul_tab;
        self.add_tab = add_tab;
        self.neg_tab = neg_tab;
        self.inv_tab = inv_tab;
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    /// Direct q*q multiplication table, available for small fields.
    pub fn mul_table(&self) -> Option<&[u32]> {
        if self.mul_tab.is_empty() {
            None
        } else {
            Some(&self.mul_tab)
        }
    }

    /// Direct q*q addition table, available for small fields.
    pub fn add_table(&self) -> Option<&[u32]> {
        if self.add_tab.is_empty() {
            None
        } else {
            Some(&self.add_tab)
        }
    }

    fn elem_to_poly(&self, e: FieldElem) -> Vec<u64> {
        let mut v = self.coeffs(e);
        poly_fp::trim(&mut v);
        v
    }

    fn poly_to_elem(&self, v: &[u64]) -> FieldElem {
        self.from_coeffs(v)
    }

    fn add_raw(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.k == 1 {
            return FieldElem(((a.0 as u64 + b.0 as u64) % self.p) as u32);
        }
        let mut idx = 0u64;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut place = 1u64;
        for _ in 0..self.k {
            let s = (x % self.p + y % self.p) % self.p;
            idx += s * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        FieldElem(idx as u32)
    }

    fn neg_raw(&self, a: FieldElem) -> FieldElem {
        if self.k == 1 {
            return FieldElem(((self.p - a.0 as u64) % self.p) as u32);
        }
        let mut idx = 0u64;
        let mut x = a.0 as u64;
        let mut place = 1u64;
        for _ in 0..self.k {
            let s = (self.p - x % self.p) % self.p;
            idx += s * place;
            place *= self.p;
            x /= self.p;
        }
        FieldElem(idx as u32)
    }

    fn mul_raw(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        if self.k == 1 {
            return FieldElem(((a.0 as u64 * b.0 as u64) % self.p) as u32);
        }
        let pa = self.elem_to_poly(a);
        let pb = self.elem_to_poly(b);
        let prod = poly_fp::mul(&pa, &pb, self.p);
        let r = poly_fp::rem(&prod, &self.modulus, self.p);
        self.poly_to_elem(&r)
    }

    fn inv_raw(&self, a: FieldElem) -> FieldElem {
        // a^(q-2), valid since the unit group has order q-1
        self.pow_raw(a, self.q - 2)
    }

    fn pow_raw(&self, a: FieldElem, e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if !self.add_tab.is_empty() {
            return FieldElem(self.add_tab[a.0 as usize * self.q as usize + b.0 as usize]);
        }
        self.add_raw(a, b)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if !self.neg_tab.is_empty() {
            return FieldElem(self.neg_tab[a.0 as usize]);
        }
        self.neg_raw(a)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if !self.mul_tab.is_empty() {
            return FieldElem(self.mul_tab[a.0 as usize * self.q as usize + b.0 as usize]);
        }
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        if !self.exp.is_empty() {
            let idx = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
            return FieldElem(self.exp[idx]);
        }
        self.mul_raw(a, b)
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInversion);
        }
        if !self.inv_tab.is_empty() {
            return Ok(FieldElem(self.inv_tab[a.0 as usize]));
        }
        if !self.exp.is_empty() {
            let n = (self.q - 1) as usize;
            let l = self.log[a.0 as usize] as usize;
            return Ok(FieldElem(self.exp[(n - l) % n]));
        }
        Ok(self.inv_raw(a))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e for any integer exponent; negative exponents require a unit.
    pub fn pow(&self, a: FieldElem, e: i64) -> Result<FieldElem> {
        if e >= 0 {
            return Ok(self.pow_raw(a, e as u64));
        }
        let inv = self.inv(a)?;
        Ok(self.pow_raw(inv, e.unsigned_abs()))
    }

    /// The unique l in 0..q-1 with generator^l = a.
    pub fn discrete_log(&self, a: FieldElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroDiscreteLog);
        }
        if !self.log.is_empty() {
            return Ok(self.log[a.0 as usize] as u64);
        }
        // On-the-fly scan; adequate for the rare above-table-limit fields.
        let mut acc = FieldElem::ONE;
        for l in 0..self.q - 1 {
            if acc == a {
                return Ok(l);
            }
            acc = self.mul_raw(acc, self.generator);
        }
        unreachable!("every unit is a power of the generator");
    }

    /// All field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q as u32).map(FieldElem)
    }

    /// All nonzero field elements in index order.
    pub fn units(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q as u32).map(FieldElem)
    }

    /// The image of an integer in the prime subfield.
    #[inline]
    pub fn from_int(&self, v: u64) -> FieldElem {
        FieldElem((v % self.p) as u32)
    }

    /// Text form of an element: a plain integer for prime fields, a
    /// `[c0,c1,...]` coefficient tuple for extensions.
    pub fn format_elem(&self, e: FieldElem) -> String {
        if self.k == 1 {
            format!("{}", e.0)
        } else {
            let cs: Vec<String> = self.coeffs(e).iter().map(|c| c.to_string()).collect();
            format!("[{}]", cs.join(","))
        }
    }

    /// Parse the element text form produced by [`format_elem`]. Integers are
    /// reduced mod p (negatives allowed); tuples must have at most k entries.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unterminated element tuple: {s}")))?;
            let mut coeffs = Vec::new();
            for part in inner.split(',') {
                coeffs.push(self.parse_residue(part)?);
            }
            if coeffs.len() > self.k as usize {
                return Err(Error::Parse(format!(
                    "element tuple {s} has more than k={} entries",
                    self.k
                )));
            }
            Ok(self.from_coeffs(&coeffs))
        } else {
            let c = self.parse_residue(s)?;
            Ok(self.from_coeffs(&[c]))
        }
    }

    fn parse_residue(&self, s: &str) -> Result<u64> {
        let v: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer: {s}")))?;
        Ok(v.rem_euclid(self.p as i64) as u64)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} (q={})", self.p, self.k, self.q)
        }
    }
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An embedding of a field into an extension with the same characteristic,
/// as a full lookup table. Built by locating the lex-smallest root of the
/// small field's modulus inside the big field, so it is deterministic.
pub struct Embedding {
    map: Vec<u32>,
}

impl Embedding {
    pub fn new(sub: &FieldSpec, sup: &FieldSpec) -> Result<Embedding> {
        if sub.p() != sup.p() || !sup.k().is_multiple_of(sub.k()) {
            return Err(Error::FieldMismatch);
        }
        if sub.k() == 1 {
            // prime subfield: residues map to the constant polynomials
            let map = (0..sub.q() as u32).collect();
            return Ok(Embedding { map });
        }
        // find the lex-smallest root of sub's modulus in sup
        let modulus = sub.modulus().to_vec();
        let mut root = None;
        for r in 0..sup.q() {
            let beta = sup.lex_element(r);
            // Horner evaluation of the modulus at beta; coefficients are
            // prime-field residues, hence constants in sup as well.
            let mut acc = FieldElem::ZERO;
            for &c in modulus.iter().rev() {
                acc = sup.mul(acc, beta);
                acc = sup.add(acc, FieldElem(c as u32));
            }
            if acc.is_zero() {
                root = Some(beta);
                break;
            }
        }
        let beta = root.ok_or(Error::FieldMismatch)?;
        let mut pow = vec![FieldElem::ONE];
        for _ in 1..sub.k() {
            pow.push(sup.mul(*pow.last().unwrap(), beta));
        }
        let mut map = vec![0u32; sub.q() as usize];
        for e in sub.elements() {
            let cs = sub.coeffs(e);
            let mut acc = FieldElem::ZERO;
            for (i, &c) in cs.iter().enumerate() {
                acc = sup.add(acc, sup.mul(FieldElem(c as u32), pow[i]));
            }
            map[e.0 as usize] = acc.0;
        }
        Ok(Embedding { map })
    }

    #[inline]
    pub fn apply(&self, e: FieldElem) -> FieldElem {
        FieldElem(self.map[e.0 as usize])
    }
}
