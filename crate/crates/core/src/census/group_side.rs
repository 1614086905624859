//! Group-side census: computes the automorphism sum the other way around.
//! For each canonical representative A and each unit lambda it enumerates
//! the span of P^{A,lambda} and counts smooth members, so
//! sum |Aut(X)| = sum over pairs of the smooth-class counts, with the
//! identity pair contributing |S| itself. Smoothness results are memoized
//! per canonical code, the whole-space pass for the identity pair fills
//! the memo first, and the union of smooth members over the non-scalar
//! pairs yields the nontrivial-automorphism count.

use super::report::CensusReport;
use super::{pair_dimensions, ratio_u128, CensusContext, CensusParams, PairDims, RunOptions};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::fixedspace::fixed_basis_of_submatrix;
use crate::gf::FieldElem;
use crate::linalg::MatrixFq;
use rayon::prelude::*;
use std::sync::atomic::{AtomicU64, AtomicU8, Ordering};

const UNKNOWN: u8 = 0;
const SMOOTH: u8 = 1;
const SINGULAR: u8 = 2;

struct PairTask {
    /// kernel basis vectors of (M_A - lambda I), as byte rows
    span: Vec<Vec<u8>>,
}

pub fn census_group_side(
    params: CensusParams,
    budgets: &Budgets,
    opts: &RunOptions,
) -> Result<CensusReport> {
    let ctx = CensusContext::new(params, budgets)?;
    let dims = pair_dimensions(&ctx.tables);
    group_side_with(&ctx, &dims, opts)
}

pub(crate) fn group_side_with(
    ctx: &CensusContext,
    dims: &PairDims,
    opts: &RunOptions,
) -> Result<CensusReport> {
    let params = ctx.params;
    let pool = opts.pool()?;
    let threads = opts.effective_threads() as u64;
    let space = &ctx.space;
    let nb = ctx.basis.size();
    let q = params.q;

    // the span sweeps cost sum q^dim member visits; keep them budgeted like
    // the exhaustive space
    if dims.sum_q_dim.clone() > num::BigUint::from(ctx.budgets.max_space) {
        return Err(Error::BudgetExceeded {
            what: "group-side span enumeration (sum of q^dim)".into(),
            needed: u128::MAX,
            limit: ctx.budgets.max_space,
        });
    }

    // kernel bases for every non-scalar pair with a nonzero fixed space
    let unit_count = (q - 1) as usize;
    let tasks: Vec<PairTask> = pool.install(|| {
        (0..ctx.reps.len())
            .into_par_iter()
            .flat_map_iter(|rep_idx| {
                let mut local = Vec::new();
                for li in 0..unit_count {
                    if rep_idx == ctx.identity_idx {
                        continue; // (I,1) handled by the full pass; (I,l!=1) is empty
                    }
                    if dims.dims[rep_idx * unit_count + li] == 0 {
                        continue;
                    }
                    let mat = &ctx.sub_mats[rep_idx];
                    let entries: Vec<FieldElem> =
                        mat.iter().map(|&v| FieldElem(v as u32)).collect();
                    let m = MatrixFq::new(ctx.spec.clone(), nb, nb, entries);
                    let lam = FieldElem(li as u32 + 1);
                    let (_, basis) = fixed_basis_of_submatrix(&m, lam).expect("unit lambda");
                    let span: Vec<Vec<u8>> = basis
                        .iter()
                        .map(|v| v.iter().map(|e| e.0 as u8).collect())
                        .collect();
                    local.push(PairTask { span });
                }
                local
            })
            .collect()
    });

    // whole-space smoothness pass: fills the memo and counts |S|
    let memo: Vec<AtomicU8> = (0..space.size).map(|_| AtomicU8::new(UNKNOWN)).collect();
    let prefix_len = space.prefix_len_for(8 * threads);
    let shard_count = space.shard_count(prefix_len);
    let smooth_count: u64 = pool.install(|| {
        (0..shard_count)
            .into_par_iter()
            .map(|sid| {
                let mut count = 0u64;
                for (lo, hi) in space.shard_canonical_ranges(prefix_len, sid) {
                    space.for_each_in_range(lo, hi, |code, digits| {
                        let smooth = ctx.tester.decide(digits);
                        memo[code as usize].store(
                            if smooth { SMOOTH } else { SINGULAR },
                            Ordering::Relaxed,
                        );
                        count += smooth as u64;
                    });
                }
                count
            })
            .sum()
    });

    // span sweeps over the non-scalar pairs
    let bitmap: Vec<AtomicU64> = (0..(space.size as usize).div_ceil(64))
        .map(|_| AtomicU64::new(0))
        .collect();
    let pair_counts: Vec<u64> = pool.install(|| {
        tasks
            .par_iter()
            .map(|task| sweep_span(ctx, task, &memo, &bitmap))
            .collect()
    });

    let sum_aut = smooth_count as u128 + pair_counts.iter().map(|&c| c as u128).sum::<u128>();
    let nontrivial: u64 = bitmap
        .iter()
        .map(|w| w.load(Ordering::Relaxed).count_ones() as u64)
        .sum();

    let mut report = CensusReport {
        n: params.n,
        d: params.d,
        q: params.q,
        mode: "group".into(),
        total: ctx.total_hypersurfaces().to_string(),
        smooth: Some(smooth_count),
        sum_aut: Some(sum_aut.to_string()),
        nontrivial: Some(nontrivial),
        average: None,
        density: None,
        orbits: None,
        groupoid: None,
        max_fixed_dim: Some(dims.max_dim),
        sum_q_dim: Some(dims.sum_q_dim.to_string()),
        seed: None,
        sample: None,
        shards_completed: None,
    };
    if smooth_count > 0 {
        report.average = Some(ratio_u128(sum_aut, smooth_count as u128));
    }
    let smooth_polys = smooth_count as u128 * (q - 1) as u128;
    report.density = Some(ratio_u128(smooth_polys, space.size as u128));
    Ok(report)
}

/// Count smooth canonical classes in the span of one fixed space, marking
/// them in the shared nontrivial bitmap. Scalar duplicates are skipped by
/// normalizing the first nonzero span coordinate to 1; the resulting
/// member still needs polynomial-level canonicalization before lookup.
fn sweep_span(
    ctx: &CensusContext,
    task: &PairTask,
    memo: &[AtomicU8],
    bitmap: &[AtomicU64],
) -> u64 {
    let nb = ctx.basis.size();
    let q = ctx.params.q as u8;
    let k = task.span.len();
    let mut member = vec![0u8; nb];
    let mut combo = vec![0u8; k];
    let mut count = 0u64;

    for lead in 0..k {
        for c in combo.iter_mut() {
            *c = 0;
        }
        combo[lead] = 1;
        loop {
            // member = sum_i combo[i] * span[i]
            member.copy_from_slice(&task.span[lead]);
            for (&c, row) in combo[lead + 1..].iter().zip(&task.span[lead + 1..]) {
                if c == 0 {
                    continue;
                }
                for (m, &b) in member.iter_mut().zip(row) {
                    if b != 0 {
                        *m = ctx.add8(*m, ctx.mul8(c, b));
                    }
                }
            }
            ctx.canonicalize_digits(&mut member);
            let code = ctx.space.code_of(&member) as usize;
            let mut state = memo[code].load(Ordering::Relaxed);
            if state == UNKNOWN {
                // the identity pass covers every canonical code, so this
                // only fires if that pass was skipped; stay correct anyway
                let smooth = ctx.tester.decide(&member);
                state = if smooth { SMOOTH } else { SINGULAR };
                memo[code].store(state, Ordering::Relaxed);
            }
            if state == SMOOTH {
                count += 1;
                bitmap[code / 64].fetch_or(1 << (code % 64), Ordering::Relaxed);
            }

            // odometer over combo[lead+1..], last coordinate fastest
            let mut advanced = false;
            let mut i = k;
            while i > lead + 1 {
                i -= 1;
                combo[i] += 1;
                if combo[i] < q {
                    advanced = true;
                    break;
                }
                combo[i] = 0;
            }
            if !advanced {
                break;
            }
        }
    }
    count
}
