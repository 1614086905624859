//! Exhaustive census: sweep every canonical hypersurface id, decide
//! smoothness, scan stabilizers, and decompose the smooth set into PGL
//! orbits. The sweep is sharded by coefficient prefix; shard results form
//! a commutative monoid, so reports are byte-identical for every thread
//! count and shard order. Checkpoints record completed shards and the
//! merged partial.

use super::ids::IdSpace;
use super::report::CensusReport;
use super::{pair_dimensions, ratio_u128, CensusContext, CensusParams, RunOptions};
use crate::bounds::Ratio;
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::group::{generated_class_count, pgl_generators};
use crate::polyspace::substitution_matrix;
use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use num::rational::BigRational;
use num::{BigInt, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;

#[derive(Default)]
struct ShardOut {
    ids: u64,
    smooth_codes: Vec<u64>,
    sum_aut: u128,
    nontrivial: u64,
}

fn run_shard(ctx: &CensusContext, prefix_len: u32, shard: u64) -> ShardOut {
    let mut out = ShardOut::default();
    for (lo, hi) in ctx.space.shard_canonical_ranges(prefix_len, shard) {
        ctx.space.for_each_in_range(lo, hi, |code, digits| {
            out.ids += 1;
            if ctx.tester.decide(digits) {
                out.smooth_codes.push(code);
                let order = ctx.stab_order_of(digits);
                out.sum_aut += order as u128;
                out.nontrivial += (order > 1) as u64;
            }
        });
    }
    out
}

/// Serialized partial state of an interrupted exhaustive run.
#[derive(Serialize, Deserialize)]
struct Checkpoint {
    n: u32,
    d: u32,
    q: u64,
    prefix_len: u32,
    completed_shards: Vec<u64>,
    ids: u64,
    smooth: u64,
    sum_aut: String,
    nontrivial: u64,
    /// bit per code, little-endian within bytes, base64
    smooth_bitmap: String,
}

struct Accum {
    ids: u64,
    sum_aut: u128,
    nontrivial: u64,
    bitmap: Vec<u8>,
    done: BTreeSet<u64>,
}

impl Accum {
    fn new(space: &IdSpace) -> Accum {
        Accum {
            ids: 0,
            sum_aut: 0,
            nontrivial: 0,
            bitmap: vec![0u8; (space.size as usize).div_ceil(8)],
            done: BTreeSet::new(),
        }
    }

    fn merge_shard(&mut self, shard: u64, out: &ShardOut) {
        self.ids += out.ids;
        self.sum_aut += out.sum_aut;
        self.nontrivial += out.nontrivial;
        for &code in &out.smooth_codes {
            self.bitmap[(code / 8) as usize] |= 1 << (code % 8);
        }
        self.done.insert(shard);
    }

    fn smooth_count(&self) -> u64 {
        self.bitmap.iter().map(|b| b.count_ones() as u64).sum()
    }

    fn smooth_codes(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.smooth_count() as usize);
        for (byte_idx, &b) in self.bitmap.iter().enumerate() {
            let mut bits = b;
            while bits != 0 {
                let bit = bits.trailing_zeros() as u64;
                out.push(byte_idx as u64 * 8 + bit);
                bits &= bits - 1;
            }
        }
        out
    }

    fn to_checkpoint(&self, params: CensusParams, prefix_len: u32) -> Checkpoint {
        Checkpoint {
            n: params.n,
            d: params.d,
            q: params.q,
            prefix_len,
            completed_shards: self.done.iter().copied().collect(),
            ids: self.ids,
            smooth: self.smooth_count(),
            sum_aut: self.sum_aut.to_string(),
            nontrivial: self.nontrivial,
            smooth_bitmap: B64.encode(&self.bitmap),
        }
    }

    fn restore(params: CensusParams, prefix_len: u32, cp: Checkpoint, space: &IdSpace) -> Result<Accum> {
        if (cp.n, cp.d, cp.q) != (params.n, params.d, params.q) {
            return Err(Error::CheckpointMismatch(format!(
                "checkpoint is for (n={}, d={}, q={})",
                cp.n, cp.d, cp.q
            )));
        }
        if cp.prefix_len != prefix_len {
            return Err(Error::CheckpointMismatch(format!(
                "checkpoint used shard prefix length {}, this run uses {}",
                cp.prefix_len, prefix_len
            )));
        }
        let bitmap = B64
            .decode(cp.smooth_bitmap.as_bytes())
            .map_err(|e| Error::CheckpointMismatch(format!("bitmap: {e}")))?;
        if bitmap.len() != (space.size as usize).div_ceil(8) {
            return Err(Error::CheckpointMismatch("bitmap length".into()));
        }
        Ok(Accum {
            ids: cp.ids,
            sum_aut: cp
                .sum_aut
                .parse()
                .map_err(|_| Error::CheckpointMismatch("sum_aut".into()))?,
            nontrivial: cp.nontrivial,
            bitmap,
            done: cp.completed_shards.into_iter().collect(),
        })
    }
}

fn save_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_vec_pretty(cp)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// One PGL orbit of smooth hypersurfaces.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitInfo {
    /// Smallest member code; the deterministic orbit representative.
    pub representative: u64,
    pub size: u64,
    pub stabilizer_order: u64,
}

pub struct OrbitData {
    pub orbits: Vec<OrbitInfo>,
    /// Sum over orbits of 1/|stabilizer|, exact.
    pub groupoid: BigRational,
}

/// Decompose a PGL-stable set of canonical codes into orbits by union-find
/// over generator images. The generating set is verified by closure before
/// use; orbit representatives are the minimal codes, so the decomposition
/// is independent of processing order.
pub fn orbit_decomposition(ctx: &CensusContext, codes: &[u64]) -> Result<OrbitData> {
    debug_assert!(codes.windows(2).all(|w| w[0] < w[1]), "codes sorted");
    let gens = pgl_generators(&ctx.spec, ctx.params.n);
    let closure = generated_class_count(&gens, ctx.pgl_order)?;
    assert_eq!(
        closure, ctx.pgl_order,
        "generating set must generate all of PGL"
    );
    let gen_mats: Vec<Vec<u8>> = gens
        .iter()
        .map(|g| {
            let m = substitution_matrix(g.matrix(), &ctx.basis, &ctx.budgets)
                .expect("generator matches basis");
            m.entries().iter().map(|e| e.0 as u8).collect()
        })
        .collect();

    let len = codes.len();
    let mut parent: Vec<u32> = (0..len as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let up = parent[parent[x as usize] as usize];
            parent[x as usize] = up;
            x = up;
        }
        x
    }

    let nb = ctx.basis.size();
    let mut digits = vec![0u8; nb];
    let mut image = vec![0u8; nb];
    for (idx, &code) in codes.iter().enumerate() {
        ctx.space.digits_of(code, &mut digits);
        for mat in &gen_mats {
            ctx.apply_submatrix(mat, &digits, &mut image);
            ctx.canonicalize_digits(&mut image);
            let icode = ctx.space.code_of(&image);
            let ipos = codes
                .binary_search(&icode)
                .expect("orbit image stays inside the smooth set");
            let a = find(&mut parent, idx as u32);
            let b = find(&mut parent, ipos as u32);
            if a != b {
                // smaller index (hence smaller code) becomes the root
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }

    let mut sizes: std::collections::BTreeMap<u32, u64> = std::collections::BTreeMap::new();
    for idx in 0..len as u32 {
        let r = find(&mut parent, idx);
        *sizes.entry(r).or_insert(0) += 1;
    }
    let mut orbits = Vec::with_capacity(sizes.len());
    let mut groupoid = BigRational::zero();
    for (&root, &size) in &sizes {
        let rep_code = codes[root as usize];
        ctx.space.digits_of(rep_code, &mut digits);
        let stab = ctx.stab_order_of(&digits);
        groupoid += BigRational::new(BigInt::from(1), BigInt::from(stab));
        orbits.push(OrbitInfo {
            representative: rep_code,
            size,
            stabilizer_order: stab,
        });
    }
    Ok(OrbitData { orbits, groupoid })
}

/// Full exhaustive census of one (n, d, q) cell.
pub fn census_exhaustive(
    params: CensusParams,
    budgets: &Budgets,
    opts: &RunOptions,
) -> Result<CensusReport> {
    let ctx = CensusContext::new(params, budgets)?;
    let pool = opts.pool()?;
    let threads = opts.effective_threads() as u64;
    let prefix_len = ctx
        .space
        .prefix_len_for(opts.shards.unwrap_or(0).max(8 * threads));
    let shard_count = ctx.space.shard_count(prefix_len);

    let mut acc = Accum::new(&ctx.space);
    if let Some(path) = &opts.checkpoint {
        if path.exists() {
            let cp: Checkpoint = serde_json::from_slice(&std::fs::read(path)?)?;
            acc = Accum::restore(params, prefix_len, cp, &ctx.space)?;
        }
    }

    let mut pending: Vec<u64> = match &opts.shard_order {
        Some(order) => {
            let valid: BTreeSet<u64> = (0..shard_count).collect();
            if !order.iter().all(|s| valid.contains(s)) {
                return Err(Error::InvalidConfig(format!(
                    "shard order mentions shards outside 0..{shard_count}"
                )));
            }
            order.clone()
        }
        None => (0..shard_count).collect(),
    };
    pending.retain(|s| !acc.done.contains(s));
    if let Some(only) = opts.only_shard {
        if only >= shard_count {
            return Err(Error::InvalidConfig(format!(
                "shard index {only} out of range 0..{shard_count}"
            )));
        }
        pending.retain(|&s| s == only);
    }

    let chunk = (threads as usize * 4).max(1);
    for batch in pending.chunks(chunk) {
        let results: Vec<(u64, ShardOut)> = pool.install(|| {
            batch
                .par_iter()
                .map(|&sid| (sid, run_shard(&ctx, prefix_len, sid)))
                .collect()
        });
        for (sid, out) in &results {
            acc.merge_shard(*sid, out);
        }
        if let Some(path) = &opts.checkpoint {
            save_checkpoint(path, &acc.to_checkpoint(params, prefix_len))?;
        }
    }

    let complete = acc.done.len() as u64 == shard_count;
    let dims = pair_dimensions(&ctx.tables);
    let smooth = acc.smooth_count();

    let mut report = CensusReport {
        n: params.n,
        d: params.d,
        q: params.q,
        mode: "exhaustive".into(),
        total: ctx.total_hypersurfaces().to_string(),
        smooth: Some(smooth),
        sum_aut: Some(acc.sum_aut.to_string()),
        nontrivial: Some(acc.nontrivial),
        average: None,
        density: None,
        orbits: None,
        groupoid: None,
        max_fixed_dim: Some(dims.max_dim),
        sum_q_dim: Some(dims.sum_q_dim.to_string()),
        seed: None,
        sample: None,
        shards_completed: (!complete).then_some((acc.done.len() as u64, shard_count)),
    };

    if complete {
        assert_eq!(acc.ids, ctx.space.canonical_count(), "sweep covered every id");
        if smooth > 0 {
            report.average = Some(ratio_u128(acc.sum_aut, smooth as u128));
        }
        let smooth_polys = smooth as u128 * (params.q - 1) as u128;
        report.density = Some(ratio_u128(smooth_polys, ctx.space.size as u128));
        let orbit_data = orbit_decomposition(&ctx, &acc.smooth_codes())?;
        report.orbits = Some(orbit_data.orbits.len() as u64);
        report.groupoid = Some(Ratio::from_rational(&orbit_data.groupoid));
    }
    Ok(report)
}

/// Exhaustive orbit listing for the `orbits` subcommand: runs the
/// smoothness sweep (without stabilizer scans), then decomposes.
pub fn orbit_census(
    params: CensusParams,
    budgets: &Budgets,
    opts: &RunOptions,
) -> Result<(CensusContext, OrbitData)> {
    let ctx = CensusContext::new(params, budgets)?;
    let pool = opts.pool()?;
    let threads = opts.effective_threads() as u64;
    let prefix_len = ctx.space.prefix_len_for(8 * threads);
    let shard_count = ctx.space.shard_count(prefix_len);
    let mut codes: Vec<u64> = pool.install(|| {
        (0..shard_count)
            .into_par_iter()
            .flat_map_iter(|sid| {
                let mut local = Vec::new();
                for (lo, hi) in ctx.space.shard_canonical_ranges(prefix_len, sid) {
                    ctx.space.for_each_in_range(lo, hi, |code, digits| {
                        if ctx.tester.decide(digits) {
                            local.push(code);
                        }
                    });
                }
                local
            })
            .collect()
    });
    codes.sort_unstable();
    let data = orbit_decomposition(&ctx, &codes)?;
    Ok((ctx, data))
}
