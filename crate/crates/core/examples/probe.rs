use hypercensus::bounds;
use hypercensus::census::{
    census_exhaustive, census_group_side, pair_dimensions, ActionTables, CensusParams, RunOptions,
};
use hypercensus::config::Budgets;
use num::BigInt;
use std::time::Instant;

fn main() {
    let b = Budgets::default();
    let cells = [
        (2u32, 3u32, 2u64),
        (2, 4, 2),
        (2, 5, 2),
        (2, 3, 3),
        (2, 4, 3),
        (2, 5, 3),
        (3, 3, 2),
    ];
    for (n, d, q) in cells {
        let t0 = Instant::now();
        let tables = ActionTables::new(CensusParams { n, d, q }, &b).unwrap();
        let dims = pair_dimensions(&tables);
        let stated = bounds::lemma6_threshold(n, d);
        let proof = bounds::lemma6_proof_threshold(n, d);
        let thm5 = bounds::thm5_bound(n, d);
        let mut stated_viol = 0u64;
        let mut proof_viol = 0u64;
        let unit_count = (q - 1) as usize;
        for (ri, rep) in tables.reps.iter().enumerate() {
            if rep.is_diagonal() { continue; }
            for li in 0..unit_count {
                let dim = BigInt::from(dims.dims[ri * unit_count + li]);
                if dim >= stated { stated_viol += 1; }
                if dim >= proof { proof_viol += 1; }
            }
        }
        println!(
            "({n},{d},{q}): max_dim={} thm5={thm5} lemma6_stated={stated} (viol={stated_viol}) proof={proof} (viol={proof_viol}) sum_q_dim={} [{:?}]",
            dims.max_dim, dims.sum_q_dim, t0.elapsed()
        );
    }

    for (n, d, q) in [(2u32, 3u32, 2u64), (2, 4, 2), (2, 3, 3)] {
        let t0 = Instant::now();
        let ex = census_exhaustive(CensusParams { n, d, q }, &b, &RunOptions::default()).unwrap();
        let t1 = Instant::now();
        let gs = census_group_side(CensusParams { n, d, q }, &b, &RunOptions::default()).unwrap();
        println!(
            "({n},{d},{q}): ex[sm={:?} sum={:?} nt={:?} orb={:?}] in {:?}; gs[sm={:?} sum={:?} nt={:?}] in {:?} AGREE={}",
            ex.smooth, ex.sum_aut, ex.nontrivial, ex.orbits, t1 - t0,
            gs.smooth, gs.sum_aut, gs.nontrivial, t1.elapsed(),
            ex.sum_aut == gs.sum_aut && ex.smooth == gs.smooth && ex.nontrivial == gs.nontrivial
        );
    }

    let t0 = Instant::now();
    let ex52 = census_exhaustive(CensusParams { n: 2, d: 5, q: 2 }, &b, &RunOptions::default()).unwrap();
    println!("(2,5,2) exhaustive: smooth={:?} density={:?} orbits={:?} in {:?}", ex52.smooth, ex52.density, ex52.orbits, t0.elapsed());

    let t0 = Instant::now();
    let gs43 = census_group_side(CensusParams { n: 2, d: 4, q: 3 }, &b, &RunOptions::default()).unwrap();
    println!("(2,4,3) group: smooth={:?} sum_aut={:?} nt={:?} in {:?}", gs43.smooth, gs43.sum_aut, gs43.nontrivial, t0.elapsed());
}
