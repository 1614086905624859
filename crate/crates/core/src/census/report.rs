//! Census report structure and its CSV/JSON renderings. All quantities are
//! exact: integers as decimal strings, rationals as reduced num/den pairs.

use crate::bounds::Ratio;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct SampleMeta {
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// True when the request covered the whole space and sampling became
    /// exact enumeration.
    pub exhausted_space: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub n: u32,
    pub d: u32,
    pub q: u64,
    pub mode: String,
    /// (q^N - 1)/(q - 1), the number of hypersurface ids.
    pub total: String,
    /// |S_{n,d}|: smooth hypersurface ids.
    pub smooth: Option<u64>,
    /// Sum of |Aut(X)| over smooth X.
    pub sum_aut: Option<String>,
    /// Smooth X with |Aut(X)| > 1.
    pub nontrivial: Option<u64>,
    /// sum_aut / smooth, exact.
    pub average: Option<Ratio>,
    /// smooth polynomials / q^N, exact.
    pub density: Option<Ratio>,
    pub orbits: Option<u64>,
    /// Sum over orbits of 1/|stabilizer|, exact.
    pub groupoid: Option<Ratio>,
    /// Max dim P^{A,lambda} over the non-scalar pairs.
    pub max_fixed_dim: Option<u32>,
    /// Sum over non-scalar pairs of q^{dim P^{A,lambda}}.
    pub sum_q_dim: Option<String>,
    pub seed: Option<u64>,
    pub sample: Option<SampleMeta>,
    /// (completed, total) when the run covered only part of the shards.
    pub shards_completed: Option<(u64, u64)>,
}

pub const CSV_HEADER: &str = "n,d,q,total,smooth,sum_aut,nontrivial,average_num,average_den,density_num,density_den,orbits,groupoid_num,groupoid_den,max_fixed_dim,mode,seed";

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn opt_ratio_num(v: &Option<Ratio>) -> String {
    v.as_ref().map(|r| r.num.clone()).unwrap_or_default()
}

fn opt_ratio_den(v: &Option<Ratio>) -> String {
    v.as_ref().map(|r| r.den.clone()).unwrap_or_default()
}

/// One header line plus one data line, schema fixed.
pub fn report_to_csv(r: &CensusReport) -> String {
    let row = [
        r.n.to_string(),
        r.d.to_string(),
        r.q.to_string(),
        r.total.clone(),
        opt(&r.smooth),
        opt(&r.sum_aut),
        opt(&r.nontrivial),
        opt_ratio_num(&r.average),
        opt_ratio_den(&r.average),
        opt_ratio_num(&r.density),
        opt_ratio_den(&r.density),
        opt(&r.orbits),
        opt_ratio_num(&r.groupoid),
        opt_ratio_den(&r.groupoid),
        opt(&r.max_fixed_dim),
        r.mode.clone(),
        opt(&r.seed),
    ]
    .join(",");
    format!("{CSV_HEADER}\n{row}\n")
}

pub fn report_to_json(r: &CensusReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}
