//! Smoothness of the projective hypersurface V(f) over the algebraic
//! closure, decided by an exact linear-algebra saturation test on the ideal
//! (f, df/dx_1, ..., df/dx_{n+1}), with a point-enumeration oracle over
//! small extensions for cross-validation.
//!
//! The saturation test is authoritative: V(f) is smooth iff the Macaulay
//! matrix of the generators reaches full column rank at some degree
//! e <= e_max. f itself is always kept among the generators: when p | d the
//! Euler relation degenerates and the partials alone do not imply f.
//!
//! When p does not divide d a single rank check suffices. Euler's relation
//! then puts f inside the partials' ideal J, so V(f, df) = V(df); if that
//! locus is empty the n+1 partials form a homogeneous system of parameters,
//! R/J is an artinian complete intersection with socle degree (n+1)(d-2),
//! and J is full in degree e exactly when e > (n+1)(d-2); if it is
//! nonempty, J stays inside the ideal of a point and is never full. Either
//! way the verdict (and the minimal full degree) is read off at
//! e* = max(d, (n+1)(d-2)+1).

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::gf::{Embedding, FieldElem, FieldSpec};
use crate::linalg::{RowEchelon, RowEchelonF2, RowEchelonU8};
use crate::polyspace::{binom, MonomialBasis, PolyVec};
use std::sync::Arc;

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Saturation,
    Points,
}

/// A singular point found by the point oracle, living in P^n(F_{q^k}).
#[derive(Debug, Clone)]
pub struct SingularWitness {
    /// Extension degree k over the base field.
    pub ext_degree: u32,
    /// The field F_{q^k} the coordinates live in.
    pub field: Arc<FieldSpec>,
    /// Normalized projective coordinates (first nonzero entry is 1 in the
    /// scan order used by the oracle).
    pub coords: Vec<FieldElem>,
}

impl SingularWitness {
    pub fn coords_text(&self) -> Vec<String> {
        self.coords
            .iter()
            .map(|&c| self.field.format_elem(c))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SmoothnessVerdict {
    pub smooth: bool,
    pub method: Method,
    pub witness: Option<SingularWitness>,
    /// First degree at which the Macaulay matrix reached full rank
    /// (saturation verdicts on smooth inputs only).
    pub saturation_degree: Option<u32>,
}

impl SmoothnessVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "smooth": self.smooth,
            "method": match self.method {
                Method::Saturation => "saturation",
                Method::Points => "points",
            },
            "saturation_degree": self.saturation_degree,
            "witness": self.witness.as_ref().map(|w| serde_json::json!({
                "ext_degree": w.ext_degree,
                "coords": w.coords_text(),
            })),
        })
    }
}

fn nonzero_partials(f: &PolyVec, budgets: &Budgets) -> Result<Vec<PolyVec>> {
    Ok(f.partials(budgets)?
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect())
}

/// Does the degree-e part of the ideal generated by f and its partials fill
/// all of P_e?
fn full_rank_at(f: &PolyVec, partials: &[PolyVec], e: u32, budgets: &Budgets) -> Result<bool> {
    let spec = f.spec().clone();
    let n = f.basis().n();
    let d = f.basis().d();
    let target = MonomialBasis::new(n, e, budgets)?;
    let cols = target.size();

    let mut gens: Vec<&PolyVec> = vec![f];
    gens.extend(partials.iter());
    let rows: u128 = gens
        .iter()
        .map(|g| binom((e - g.degree() + n) as u64, n as u64))
        .sum();
    if rows < cols as u128 {
        return Ok(false);
    }
    let mult_f = MonomialBasis::new(n, e - d, budgets)?;
    let mult_p = if d >= 1 {
        MonomialBasis::new(n, e - (d - 1), budgets)?
    } else {
        mult_f.clone()
    };

    let q = spec.q();
    if q == 2 {
        let mut ech = RowEchelonF2::new(cols);
        let words = ech.words();
        for g in &gens {
            let mult = if g.degree() == d { &mult_f } else { &mult_p };
            for m in mult.tuples() {
                let mut row = vec![0u64; words];
                for (i, &c) in g.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        let idx = target.index_of_sum(g.basis().tuple(i), m);
                        row[idx / 64] |= 1 << (idx % 64);
                    }
                }
                ech.insert(row);
                if ech.is_full() {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    } else if q <= 256 {
        let mut ech = RowEchelonU8::new(&spec, cols);
        for g in &gens {
            let mult = if g.degree() == d { &mult_f } else { &mult_p };
            for m in mult.tuples() {
                let mut row = vec![0u8; cols];
                for (i, &c) in g.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        row[target.index_of_sum(g.basis().tuple(i), m)] = c.0 as u8;
                    }
                }
                ech.insert(row);
                if ech.is_full() {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    } else {
        let mut ech = RowEchelon::new(spec.clone(), cols);
        for g in &gens {
            let mult = if g.degree() == d { &mult_f } else { &mult_p };
            for m in mult.tuples() {
                ech.insert(g.shifted_row(m, &target));
                if ech.is_full() {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// First degree at which the Macaulay matrix is full, or None (singular).
fn first_full_degree(f: &PolyVec, budgets: &Budgets) -> Result<Option<u32>> {
    let n = f.basis().n();
    let d = f.basis().d();
    let p = f.spec().p();
    let partials = nonzero_partials(f, budgets)?;
    let e_max = budgets.saturation_cap(n, d);
    if !(d as u64).is_multiple_of(p) {
        // single decisive check; see the module comment
        let e_star = d.max((n + 1) * d.saturating_sub(2) + 1).min(e_max);
        return Ok(full_rank_at(f, &partials, e_star, budgets)?.then_some(e_star));
    }
    for e in d..=e_max {
        if full_rank_at(f, &partials, e, budgets)? {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// Decide smoothness of V(f) over the algebraic closure by saturation.
/// The zero polynomial defines no hypersurface and is rejected.
pub fn is_smooth(f: &PolyVec, budgets: &Budgets) -> Result<SmoothnessVerdict> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let full = first_full_degree(f, budgets)?;
    Ok(SmoothnessVerdict {
        smooth: full.is_some(),
        method: Method::Saturation,
        witness: None,
        saturation_degree: full,
    })
}

/// Number of points of P^n(F_q).
fn projective_point_count(q: u128, vars: u32) -> u128 {
    let mut total = 0u128;
    for i in 0..vars {
        total += q.pow(i);
    }
    total
}

/// Visit the points of P^n(F) as normalized coordinate vectors. The scan
/// starts with (0,...,0,1) and walks the leading-one position from the last
/// coordinate to the first, free coordinates in ascending element order.
fn scan_projective_points<Fcb>(ext: &Arc<FieldSpec>, vars: usize, mut cb: Fcb) -> Option<Vec<FieldElem>>
where
    Fcb: FnMut(&[FieldElem]) -> bool,
{
    let q = ext.q() as u32;
    let mut coords = vec![FieldElem::ZERO; vars];
    for lead in (0..vars).rev() {
        for c in coords.iter_mut() {
            *c = FieldElem::ZERO;
        }
        coords[lead] = FieldElem::ONE;
        loop {
            if cb(&coords) {
                return Some(coords);
            }
            // odometer over coords[lead+1..], last coordinate fastest
            let mut advanced = false;
            let mut i = vars;
            while i > lead + 1 {
                i -= 1;
                coords[i].0 += 1;
                if coords[i].0 < q {
                    advanced = true;
                    break;
                }
                coords[i] = FieldElem::ZERO;
            }
            if !advanced {
                break;
            }
        }
    }
    None
}

fn map_poly_coeffs(f: &PolyVec, ext: &Arc<FieldSpec>, emb: &Embedding) -> PolyVec {
    let coeffs = f.coeffs().iter().map(|&c| emb.apply(c)).collect();
    PolyVec::new(f.basis().clone(), ext.clone(), coeffs)
}

/// Search P^n(F_{q^k}) for k = 1..k_max for a common projective zero of f
/// and its partials. A found witness proves singularity; exhausting the
/// budget proves nothing by itself, so the `smooth = true` answer is
/// one-sided and only used for cross-checks.
pub fn is_smooth_points_oracle(
    f: &PolyVec,
    k_max: u32,
    budgets: &Budgets,
) -> Result<SmoothnessVerdict> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let spec = f.spec().clone();
    let vars = f.basis().vars() as u32;
    let mut total: u128 = 0;
    for k in 1..=k_max {
        let qk = (spec.q() as u128).checked_pow(k).ok_or(Error::BudgetExceeded {
            what: "point oracle field size".into(),
            needed: u128::MAX,
            limit: budgets.max_field as u128,
        })?;
        total += projective_point_count(qk, vars);
    }
    if total > budgets.max_points as u128 {
        return Err(Error::BudgetExceeded {
            what: format!("point oracle over P^{}(F_q^k), k <= {k_max}", vars - 1),
            needed: total,
            limit: budgets.max_points as u128,
        });
    }

    let partials = f.partials(budgets)?;
    for k in 1..=k_max {
        let ext = FieldSpec::new(spec.p(), spec.k() * k, budgets)?;
        let emb = Embedding::new(&spec, &ext)?;
        let fe = map_poly_coeffs(f, &ext, &emb);
        let pe: Vec<PolyVec> = partials
            .iter()
            .map(|p| map_poly_coeffs(p, &ext, &emb))
            .collect();
        let hit = scan_projective_points(&ext, vars as usize, |coords| {
            if !fe.evaluate(coords).expect("dimension checked").is_zero() {
                return false;
            }
            pe.iter()
                .all(|p| p.evaluate(coords).expect("dimension checked").is_zero())
        });
        if let Some(coords) = hit {
            return Ok(SmoothnessVerdict {
                smooth: false,
                method: Method::Points,
                witness: Some(SingularWitness {
                    ext_degree: k,
                    field: ext,
                    coords,
                }),
                saturation_degree: None,
            });
        }
    }
    Ok(SmoothnessVerdict {
        smooth: true,
        method: Method::Points,
        witness: None,
        saturation_degree: None,
    })
}

// ---------------------------------------------------------------------------
// Bulk tester
// ---------------------------------------------------------------------------

/// Point filter for the bulk tester: precomputed monomial (and derivative)
/// values at every point of P^n(F_{q^k}) for small k, so that rejecting a
/// polynomial singular at a low-degree point costs a few dot products. A
/// hit is a proof of singularity; a miss decides nothing.
struct PointFilter {
    ext: Arc<FieldSpec>,
    emb: Vec<u32>,
    nslots: usize,
    nbasis: usize,
    npoints: usize,
    /// vals[point * nslots * nbasis + slot * nbasis + i]
    vals: Vec<u32>,
}

impl PointFilter {
    /// slots: one per variable (the derivative values), plus a slot for f
    /// itself when p | d (otherwise Euler makes f redundant at smooth
    /// points of the partials).
    fn new(
        spec: &Arc<FieldSpec>,
        basis: &Arc<MonomialBasis>,
        k: u32,
        include_f_slot: bool,
        budgets: &Budgets,
    ) -> Result<PointFilter> {
        let ext = FieldSpec::new(spec.p(), spec.k() * k, budgets)?;
        let embedding = Embedding::new(spec, &ext)?;
        let emb: Vec<u32> = (0..spec.q() as u32)
            .map(|v| embedding.apply(FieldElem(v)).0)
            .collect();
        let vars = basis.vars();
        let nbasis = basis.size();
        let nslots = vars + include_f_slot as usize;

        let mut points = Vec::new();
        scan_projective_points(&ext, vars, |coords| {
            points.push(coords.to_vec());
            false
        });
        let npoints = points.len();
        let mut vals = vec![0u32; npoints * nslots * nbasis];
        for (pi, coords) in points.iter().enumerate() {
            for (i, t) in basis.tuples().iter().enumerate() {
                // derivative slots
                for v in 0..vars {
                    if t[v] == 0 {
                        continue;
                    }
                    let scalar = ext.from_int(t[v] as u64);
                    if scalar.is_zero() {
                        continue;
                    }
                    let mut acc = scalar;
                    for (j, &e) in t.iter().enumerate() {
                        let e = if j == v { e - 1 } else { e };
                        if e > 0 {
                            acc = ext.mul(acc, ext.pow(coords[j], e as i64).unwrap());
                        }
                    }
                    vals[pi * nslots * nbasis + v * nbasis + i] = acc.0;
                }
                if include_f_slot {
                    let mut acc = FieldElem::ONE;
                    for (j, &e) in t.iter().enumerate() {
                        if e > 0 {
                            acc = ext.mul(acc, ext.pow(coords[j], e as i64).unwrap());
                        }
                    }
                    vals[pi * nslots * nbasis + vars * nbasis + i] = acc.0;
                }
            }
        }
        Ok(PointFilter {
            ext,
            emb,
            nslots,
            nbasis,
            npoints,
            vals,
        })
    }

    fn has_witness(&self, coeffs: &[u8]) -> bool {
        let ext = &self.ext;
        let ec: Vec<u32> = coeffs.iter().map(|&c| self.emb[c as usize]).collect();
        let stride = self.nslots * self.nbasis;
        for pt in 0..self.npoints {
            let base = pt * stride;
            let mut singular = true;
            for s in 0..self.nslots {
                let row = &self.vals[base + s * self.nbasis..base + (s + 1) * self.nbasis];
                let mut acc = FieldElem::ZERO;
                for (&v, &c) in row.iter().zip(&ec) {
                    if v != 0 && c != 0 {
                        acc = ext.add(acc, ext.mul(FieldElem(v), FieldElem(c)));
                    }
                }
                if !acc.is_zero() {
                    singular = false;
                    break;
                }
            }
            if singular {
                return true;
            }
        }
        false
    }
}

/// Precomputed Macaulay-row layout for one saturation degree.
struct DegreePlan {
    cols: usize,
    /// multiplier count and flattened target indices for rows of f:
    /// shift_f[mi * nbasis + gi]
    mult_f: usize,
    shift_f: Vec<u32>,
    /// same for the degree-(d-1) partials over the lower basis
    mult_p: usize,
    shift_p: Vec<u32>,
}

/// Reusable exact smoothness decision procedure for a fixed (n, d, q),
/// optimized for the census inner loop. Point filters give fast singularity
/// proofs; the saturation ranks give the authoritative verdict. The boolean
/// returned always equals `is_smooth(...).smooth`.
pub struct SmoothnessTester {
    spec: Arc<FieldSpec>,
    d: u32,
    q: usize,
    nbasis: usize,
    nlower: usize,
    vars: usize,
    p_divides_d: bool,
    /// per variable, per basis index: (derivative scalar, lower index);
    /// scalar 0 means the term dies
    pshift: Vec<Vec<(u8, u32)>>,
    mul: Vec<u8>,
    plans: Vec<DegreePlan>,
    filters: Vec<PointFilter>,
}

/// Largest point count a bulk prefilter is allowed to precompute.
const FILTER_POINT_CAP: u128 = 2000;

impl SmoothnessTester {
    pub fn new(
        spec: &Arc<FieldSpec>,
        n: u32,
        d: u32,
        budgets: &Budgets,
    ) -> Result<SmoothnessTester> {
        assert!(d >= 1 && n >= 1);
        let q = spec.q() as usize;
        assert!(q <= 256, "bulk tester requires q <= 256");
        let basis = MonomialBasis::new(n, d, budgets)?;
        let lower = MonomialBasis::new(n, d - 1, budgets)?;
        let vars = basis.vars();
        let nbasis = basis.size();
        let nlower = lower.size();
        let p_divides_d = (d as u64).is_multiple_of(spec.p());

        let mut pshift = vec![vec![(0u8, 0u32); nbasis]; vars];
        let mut t_scratch = vec![0u32; vars];
        for (i, t) in basis.tuples().iter().enumerate() {
            for v in 0..vars {
                if t[v] == 0 {
                    continue;
                }
                let scalar = spec.from_int(t[v] as u64);
                if scalar.is_zero() {
                    continue;
                }
                t_scratch.copy_from_slice(t);
                t_scratch[v] -= 1;
                pshift[v][i] = (scalar.0 as u8, lower.index_of(&t_scratch) as u32);
            }
        }
        let mut mul = vec![0u8; q * q];
        for a in 0..q as u32 {
            for b in 0..q as u32 {
                mul[a as usize * q + b as usize] = spec.mul(FieldElem(a), FieldElem(b)).0 as u8;
            }
        }

        let e_max = budgets.saturation_cap(n, d);
        let schedule: Vec<u32> = if p_divides_d {
            (d..=e_max).collect()
        } else {
            vec![d.max((n + 1) * d.saturating_sub(2) + 1).min(e_max)]
        };
        let mut plans = Vec::with_capacity(schedule.len());
        for e in schedule {
            let target = MonomialBasis::new(n, e, budgets)?;
            let mf = MonomialBasis::new(n, e - d, budgets)?;
            let mp = MonomialBasis::new(n, e - (d - 1), budgets)?;
            let mut shift_f = vec![0u32; mf.size() * nbasis];
            for (mi, m) in mf.tuples().iter().enumerate() {
                for (gi, t) in basis.tuples().iter().enumerate() {
                    shift_f[mi * nbasis + gi] = target.index_of_sum(t, m) as u32;
                }
            }
            let mut shift_p = vec![0u32; mp.size() * nlower];
            for (mi, m) in mp.tuples().iter().enumerate() {
                for (gi, t) in lower.tuples().iter().enumerate() {
                    shift_p[mi * nlower + gi] = target.index_of_sum(t, m) as u32;
                }
            }
            plans.push(DegreePlan {
                cols: target.size(),
                mult_f: mf.size(),
                shift_f,
                mult_p: mp.size(),
                shift_p,
            });
        }

        let mut filters = Vec::new();
        for k in 1..=2u32 {
            let qk = (spec.q() as u128).pow(k);
            if qk > budgets.max_field as u128 || qk > 256 {
                break;
            }
            if projective_point_count(qk, vars as u32) > FILTER_POINT_CAP {
                break;
            }
            filters.push(PointFilter::new(spec, &basis, k, p_divides_d, budgets)?);
        }

        Ok(SmoothnessTester {
            spec: spec.clone(),
            d,
            q,
            nbasis,
            nlower,
            vars,
            p_divides_d,
            pshift,
            mul,
            plans,
            filters,
        })
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    /// Exact smoothness of the hypersurface with the given coefficient
    /// vector (encoded field elements as bytes, basis order).
    pub fn decide(&self, coeffs: &[u8]) -> bool {
        debug_assert_eq!(coeffs.len(), self.nbasis);
        debug_assert!(coeffs.iter().any(|&c| c != 0));

        for filter in &self.filters {
            if filter.has_witness(coeffs) {
                return false;
            }
        }

        // partial derivative coefficient vectors
        let mut parts: Vec<Vec<u8>> = vec![vec![0u8; self.nlower]; self.vars];
        let mut any_nonzero = vec![false; self.vars];
        for v in 0..self.vars {
            let shifts = &self.pshift[v];
            let out = &mut parts[v];
            for (i, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let (scalar, idx) = shifts[i];
                if scalar == 0 {
                    continue;
                }
                let val = self.mul[scalar as usize * self.q + c as usize];
                out[idx as usize] = val;
                any_nonzero[v] |= val != 0;
            }
        }
        let live_partials = any_nonzero.iter().filter(|&&b| b).count();

        for plan in &self.plans {
            let rows = plan.mult_f + live_partials * plan.mult_p;
            if rows < plan.cols {
                continue;
            }
            if self.rank_full(plan, coeffs, &parts, &any_nonzero) {
                return true;
            }
        }
        false
    }

    fn rank_full(
        &self,
        plan: &DegreePlan,
        coeffs: &[u8],
        parts: &[Vec<u8>],
        any_nonzero: &[bool],
    ) -> bool {
        if self.q == 2 {
            let words = plan.cols.div_ceil(64);
            let mut ech = RowEchelonF2::new(plan.cols);
            for mi in 0..plan.mult_f {
                let shifts = &plan.shift_f[mi * self.nbasis..(mi + 1) * self.nbasis];
                let mut row = vec![0u64; words];
                for (gi, &c) in coeffs.iter().enumerate() {
                    if c != 0 {
                        let idx = shifts[gi] as usize;
                        row[idx / 64] |= 1 << (idx % 64);
                    }
                }
                if ech.insert(row) && ech.is_full() {
                    return true;
                }
            }
            for v in 0..self.vars {
                if !any_nonzero[v] {
                    continue;
                }
                for mi in 0..plan.mult_p {
                    let shifts = &plan.shift_p[mi * self.nlower..(mi + 1) * self.nlower];
                    let mut row = vec![0u64; words];
                    for (gi, &c) in parts[v].iter().enumerate() {
                        if c != 0 {
                            let idx = shifts[gi] as usize;
                            row[idx / 64] |= 1 << (idx % 64);
                        }
                    }
                    if ech.insert(row) && ech.is_full() {
                        return true;
                    }
                }
            }
            false
        } else {
            let mut ech = RowEchelonU8::new(&self.spec, plan.cols);
            for mi in 0..plan.mult_f {
                let shifts = &plan.shift_f[mi * self.nbasis..(mi + 1) * self.nbasis];
                let mut row = vec![0u8; plan.cols];
                for (gi, &c) in coeffs.iter().enumerate() {
                    if c != 0 {
                        row[shifts[gi] as usize] = c;
                    }
                }
                if ech.insert(row) && ech.is_full() {
                    return true;
                }
            }
            for v in 0..self.vars {
                if !any_nonzero[v] {
                    continue;
                }
                for mi in 0..plan.mult_p {
                    let shifts = &plan.shift_p[mi * self.nlower..(mi + 1) * self.nlower];
                    let mut row = vec![0u8; plan.cols];
                    for (gi, &c) in parts[v].iter().enumerate() {
                        if c != 0 {
                            row[shifts[gi] as usize] = c;
                        }
                    }
                    if ech.insert(row) && ech.is_full() {
                        return true;
                    }
                }
            }
            false
        }
    }

    /// `decide` on a [`PolyVec`].
    pub fn decide_poly(&self, f: &PolyVec) -> bool {
        let coeffs: Vec<u8> = f.coeffs().iter().map(|c| c.0 as u8).collect();
        self.decide(&coeffs)
    }

    pub fn p_divides_d(&self) -> bool {
        self.p_divides_d
    }

    pub fn d(&self) -> u32 {
        self.d
    }
}
