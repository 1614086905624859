//! The measurement engine: enumerate hypersurfaces, compute stabilizers,
//! orbits, automorphism sums, densities and the group-side double counts,
//! in exhaustive, group-side and sampling modes.
//!
//! Hypersurfaces are canonical nonzero coefficient vectors (first nonzero
//! coefficient 1), so counts are counts of hypersurfaces, not polynomials;
//! polynomial-side tallies divide by q-1 explicitly. Codes are base-q
//! integers with the leading coefficient most significant, which makes the
//! canonical set a union of contiguous code ranges and sharding by prefix
//! an interval split.

mod exhaustive;
mod group_side;
mod ids;
mod report;
mod sample;
mod verify;

pub use exhaustive::{census_exhaustive, orbit_census, orbit_decomposition, OrbitData, OrbitInfo};
pub use group_side::census_group_side;
pub use ids::IdSpace;
pub use report::{report_to_csv, report_to_json, CensusReport, SampleMeta, CSV_HEADER};
pub use sample::census_sample;
pub use verify::{verify_paper, CheckRecord, VerificationLog};

use crate::bounds::Ratio;
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::fixedspace::fixed_dim_of_submatrix;
use crate::gf::{FieldElem, FieldSpec};
use crate::group::{enumerate_pgl, group_order, GroupElem, Which};
use crate::linalg::MatrixFq;
use crate::polyspace::{substitute, substitution_matrix, MonomialBasis, PolyVec};
use crate::smooth::SmoothnessTester;
use num::{BigUint, ToPrimitive};
use rayon::prelude::*;
use std::sync::Arc;

/// The (n, d, q) cell a census run measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusParams {
    pub n: u32,
    pub d: u32,
    pub q: u64,
}

/// Execution knobs. Reports are byte-identical for any thread count and
/// any shard processing order.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; 0 means all available cores.
    pub threads: usize,
    /// Lower bound on the shard count (rounded up to a power of q).
    pub shards: Option<u64>,
    /// Explicit shard processing order, for determinism tests and manual
    /// scheduling. Must be a permutation of the pending shards.
    pub shard_order: Option<Vec<u64>>,
    /// Checkpoint file for resumable exhaustive runs.
    pub checkpoint: Option<std::path::PathBuf>,
    /// Process only this shard index (writes the checkpoint and returns a
    /// partial report).
    pub only_shard: Option<u64>,
}

impl RunOptions {
    pub fn effective_threads(&self) -> usize {
        if self.threads == 0 {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        } else {
            self.threads
        }
    }

    pub(crate) fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.effective_threads())
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
    }
}

/// The PGL action data for one cell: canonical representatives with their
/// substitution matrices. This is all the dimension sweeps need, and it
/// stays within budget for cells whose coefficient space is too large to
/// enumerate.
pub struct ActionTables {
    pub params: CensusParams,
    pub spec: Arc<FieldSpec>,
    pub basis: Arc<MonomialBasis>,
    pub reps: Vec<GroupElem>,
    /// Substitution matrix of each representative, row-major bytes.
    pub sub_mats: Vec<Vec<u8>>,
    pub identity_idx: usize,
    pub pgl_order: u64,
    pub budgets: Budgets,
}

impl ActionTables {
    pub fn new(params: CensusParams, budgets: &Budgets) -> Result<ActionTables> {
        let spec = FieldSpec::from_order(params.q, budgets)?;
        if spec.q() > 256 {
            return Err(Error::InvalidConfig(
                "census supports q <= 256 (the space budget binds long before that)".into(),
            ));
        }
        let basis = MonomialBasis::new(params.n, params.d, budgets)?;
        let reps = enumerate_pgl(&spec, params.n, budgets)?;
        let pgl_order = group_order(params.n, params.q, Which::Pgl)?
            .to_u64()
            .expect("within enumeration budget");

        let sub_mats: Vec<Vec<u8>> = reps
            .par_iter()
            .map(|rep| {
                let m = substitution_matrix(rep.matrix(), &basis, budgets)
                    .expect("representative matches the basis");
                m.entries().iter().map(|e| e.0 as u8).collect()
            })
            .collect();
        let identity_idx = reps
            .iter()
            .position(|r| r.is_identity_class())
            .expect("enumeration contains the identity class");

        Ok(ActionTables {
            params,
            spec,
            basis,
            reps,
            sub_mats,
            identity_idx,
            pgl_order,
            budgets: budgets.clone(),
        })
    }
}

/// Everything a census run shares across workers: the action tables plus
/// the coefficient space, the smoothness tester and flat byte tables.
pub struct CensusContext {
    pub tables: ActionTables,
    pub space: IdSpace,
    pub tester: SmoothnessTester,
    mul: Vec<u8>,
    add: Vec<u8>,
    inv: Vec<u8>,
}

impl std::ops::Deref for CensusContext {
    type Target = ActionTables;
    fn deref(&self) -> &ActionTables {
        &self.tables
    }
}

impl CensusContext {
    pub fn new(params: CensusParams, budgets: &Budgets) -> Result<CensusContext> {
        let tables = ActionTables::new(params, budgets)?;
        let space = IdSpace::new(params.q, tables.basis.size(), budgets)?;
        let tester = SmoothnessTester::new(&tables.spec, params.n, params.d, budgets)?;

        let spec = &tables.spec;
        let q = spec.q() as usize;
        let mut mul = vec![0u8; q * q];
        let mut add = vec![0u8; q * q];
        for a in 0..q as u32 {
            for b in 0..q as u32 {
                mul[a as usize * q + b as usize] = spec.mul(FieldElem(a), FieldElem(b)).0 as u8;
                add[a as usize * q + b as usize] = spec.add(FieldElem(a), FieldElem(b)).0 as u8;
            }
        }
        let mut inv = vec![0u8; q];
        for a in 1..q as u32 {
            inv[a as usize] = spec.inv(FieldElem(a)).unwrap().0 as u8;
        }

        Ok(CensusContext {
            tables,
            space,
            tester,
            mul,
            add,
            inv,
        })
    }

    #[inline]
    pub fn mul8(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.spec.q() as usize + b as usize]
    }

    #[inline]
    pub fn add8(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.spec.q() as usize + b as usize]
    }

    #[inline]
    pub fn inv8(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// M * f for a cached substitution matrix, into `out`.
    pub fn apply_submatrix(&self, mat: &[u8], digits: &[u8], out: &mut [u8]) {
        let nb = digits.len();
        for (i, slot) in out.iter_mut().enumerate() {
            let row = &mat[i * nb..(i + 1) * nb];
            let mut acc = 0u8;
            for (j, &c) in digits.iter().enumerate() {
                if c != 0 && row[j] != 0 {
                    acc = self.add8(acc, self.mul8(row[j], c));
                }
            }
            *slot = acc;
        }
    }

    /// Scale digits so the first nonzero entry is 1 (in place).
    pub fn canonicalize_digits(&self, digits: &mut [u8]) {
        if let Some(lead) = digits.iter().position(|&c| c != 0) {
            let v = digits[lead];
            if v != 1 {
                let inv = self.inv8(v);
                for c in digits.iter_mut() {
                    if *c != 0 {
                        *c = self.mul8(inv, *c);
                    }
                }
            }
        }
    }

    /// Order of the PGL stabilizer of the canonical polynomial `digits`:
    /// the number of representatives A with f(Ax) a scalar multiple of f.
    pub fn stab_order_of(&self, digits: &[u8]) -> u64 {
        let nb = digits.len();
        let lead = digits
            .iter()
            .position(|&c| c != 0)
            .expect("nonzero polynomial");
        debug_assert_eq!(digits[lead], 1);
        let support: Vec<usize> = (0..nb).filter(|&j| digits[j] != 0).collect();
        let mut order = 0u64;
        'mats: for mat in &self.sub_mats {
            // candidate multiplier from the leading coefficient
            let lam = self.row_dot(&mat[lead * nb..(lead + 1) * nb], digits, &support);
            if lam == 0 {
                continue;
            }
            for i in 0..nb {
                if i == lead {
                    continue;
                }
                let v = self.row_dot(&mat[i * nb..(i + 1) * nb], digits, &support);
                if v != self.mul8(lam, digits[i]) {
                    continue 'mats;
                }
            }
            order += 1;
        }
        order
    }

    #[inline]
    fn row_dot(&self, row: &[u8], digits: &[u8], support: &[usize]) -> u8 {
        let mut acc = 0u8;
        for &j in support {
            let m = row[j];
            if m != 0 {
                acc = self.add8(acc, self.mul8(m, digits[j]));
            }
        }
        acc
    }

    /// Exact total number of hypersurfaces (q^N - 1)/(q - 1).
    pub fn total_hypersurfaces(&self) -> BigUint {
        let q = BigUint::from(self.params.q);
        let n = self.basis.size() as u32;
        (q.pow(n) - 1u32) / (BigUint::from(self.params.q) - 1u32)
    }
}

/// Kernel dimensions of (M_A - lambda I) for every representative and every
/// unit lambda, with the running maximum and the q^dim tally over the
/// non-scalar pairs (all pairs except (identity, 1)).
pub struct PairDims {
    /// dims[rep_idx * (q-1) + (lambda.0 - 1)]
    pub dims: Vec<u32>,
    pub max_dim: u32,
    /// pairs achieving max_dim, as (rep index, lambda index), capped.
    pub max_witnesses: Vec<(usize, u32)>,
    pub sum_q_dim: BigUint,
}

pub const MAX_WITNESS_CAP: usize = 16;

pub fn pair_dimensions(ctx: &ActionTables) -> PairDims {
    let units: Vec<u32> = (1..ctx.spec.q() as u32).collect();
    let nb = ctx.basis.size();
    let dims: Vec<u32> = ctx
        .sub_mats
        .par_iter()
        .flat_map_iter(|mat| {
            let entries: Vec<FieldElem> = mat.iter().map(|&v| FieldElem(v as u32)).collect();
            let m = MatrixFq::new(ctx.spec.clone(), nb, nb, entries);
            let units = units.clone();
            units.into_iter().map(move |lam| {
                fixed_dim_of_submatrix(&m, FieldElem(lam)).expect("lambda is a unit") as u32
            })
        })
        .collect();

    let q = ctx.spec.q();
    let unit_count = (q - 1) as usize;
    let mut max_dim = 0u32;
    let mut max_witnesses = Vec::new();
    let mut sum_q_dim = BigUint::from(0u32);
    for (rep_idx, _) in ctx.reps.iter().enumerate() {
        for li in 0..unit_count {
            let lam_is_one = li == 0;
            if rep_idx == ctx.identity_idx && lam_is_one {
                continue; // the single scalar pair (I, 1)
            }
            let dim = dims[rep_idx * unit_count + li];
            sum_q_dim += BigUint::from(q).pow(dim);
            if dim > max_dim {
                max_dim = dim;
                max_witnesses.clear();
            }
            if dim == max_dim && max_witnesses.len() < MAX_WITNESS_CAP {
                max_witnesses.push((rep_idx, li as u32 + 1));
            }
        }
    }
    PairDims {
        dims,
        max_dim,
        max_witnesses,
        sum_q_dim,
    }
}

/// The full stabilizer of a hypersurface: all canonical representatives A
/// with f(Ax) = lambda * f, together with their multipliers.
pub struct StabilizerResult {
    /// Canonicalized equation of the hypersurface.
    pub hypersurface: PolyVec,
    pub elements: Vec<(GroupElem, FieldElem)>,
    pub order: u64,
}

pub fn stabilizer(f: &PolyVec, budgets: &Budgets) -> Result<StabilizerResult> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut canon = f.clone();
    canon.canonicalize();
    let spec = f.spec().clone();
    let n = f.basis().n();
    let reps = enumerate_pgl(&spec, n, budgets)?;
    let mut elements = Vec::new();
    for rep in reps {
        let image = substitute(&canon, rep.matrix(), budgets)?;
        let lead = canon
            .coeffs()
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero");
        let lam = image.coeffs()[lead];
        if lam.is_zero() {
            continue;
        }
        let mut scaled = canon.clone();
        scaled.scale(lam);
        if scaled == image {
            elements.push((rep, lam));
        }
    }
    let order = elements.len() as u64;
    Ok(StabilizerResult {
        hypersurface: canon,
        elements,
        order,
    })
}

/// Average |Aut| as an exact rational.
pub(crate) fn ratio_u128(num: u128, den: u128) -> Ratio {
    use num::rational::BigRational;
    use num::BigInt;
    let r = BigRational::new(BigInt::from(num), BigInt::from(den));
    Ratio::from_rational(&r)
}
