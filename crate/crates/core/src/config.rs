//! Resource budgets shared by the long-running operations.
//!
//! Every enumeration validates against these limits before allocating
//! anything large, so a bad parameter choice fails fast instead of
//! thrashing the machine.

/// Budgets for field tables, group enumeration, polynomial spaces and the
/// point-search oracle. All limits are inclusive.
#[derive(Debug, Clone)]
pub struct Budgets {
    /// Largest field size q for which a field may be constructed at all.
    pub max_field: u64,
    /// Largest q for which full log/antilog tables are precomputed.
    pub table_limit: u64,
    /// Largest number of PGL representatives that may be enumerated.
    pub max_group: u64,
    /// Largest monomial basis (= binom(d+n, n)) that may be built.
    pub max_basis: u64,
    /// Largest coefficient space q^binom(d+n,n) a census may sweep.
    pub max_space: u128,
    /// Largest number of projective points the point oracle may visit.
    pub max_points: u64,
    /// Override for the saturation degree cap; `None` uses (n+2)(d-1)+1.
    pub max_saturation_degree: Option<u32>,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_field: 1 << 20,
            table_limit: 1 << 16,
            max_group: 100_000,
            max_basis: 1 << 20,
            max_space: 1 << 24,
            max_points: 10_000_000,
            max_saturation_degree: None,
        }
    }
}

impl Budgets {
    /// Default saturation cap from the module contract: (n+2)(d-1)+1.
    pub fn saturation_cap(&self, n: u32, d: u32) -> u32 {
        self.max_saturation_degree
            .unwrap_or((n + 2) * (d - 1) + 1)
    }
}
