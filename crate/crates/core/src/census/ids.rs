//! Base-q integer codes for coefficient vectors, and the interval
//! structure of the canonical (first nonzero coefficient = 1) subset.

use crate::config::Budgets;
use crate::error::{Error, Result};

/// The coefficient code space for N = dim P_d coefficients over F_q.
/// Digit 0 (the leading monomial's coefficient) is the most significant,
/// so canonical codes form the ranges [q^{N-1-t}, 2 q^{N-1-t}) for
/// t = 0..N.
#[derive(Debug, Clone)]
pub struct IdSpace {
    pub q: u64,
    pub len: usize,
    /// q^len
    pub size: u64,
}

impl IdSpace {
    pub fn new(q: u64, len: usize, budgets: &Budgets) -> Result<IdSpace> {
        let size = (q as u128).checked_pow(len as u32).ok_or_else(|| {
            Error::BudgetExceeded {
                what: "coefficient space".into(),
                needed: u128::MAX,
                limit: budgets.max_space,
            }
        })?;
        if size > budgets.max_space {
            return Err(Error::BudgetExceeded {
                what: format!("coefficient space q^{len}"),
                needed: size,
                limit: budgets.max_space,
            });
        }
        Ok(IdSpace {
            q,
            len,
            size: size as u64,
        })
    }

    pub fn code_of(&self, digits: &[u8]) -> u64 {
        debug_assert_eq!(digits.len(), self.len);
        let mut code = 0u64;
        for &d in digits {
            code = code * self.q + d as u64;
        }
        code
    }

    pub fn digits_of(&self, mut code: u64, out: &mut [u8]) {
        debug_assert_eq!(out.len(), self.len);
        for i in (0..self.len).rev() {
            out[i] = (code % self.q) as u8;
            code /= self.q;
        }
    }

    /// The canonical codes as disjoint ascending intervals.
    pub fn canonical_ranges(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::with_capacity(self.len);
        for t in (0..self.len).rev() {
            let base = self.q.pow((self.len - 1 - t) as u32);
            out.push((base, 2 * base));
        }
        out
    }

    /// Number of canonical codes: (q^N - 1)/(q - 1).
    pub fn canonical_count(&self) -> u64 {
        ((self.size as u128 - 1) / (self.q as u128 - 1).max(1)) as u64
    }

    /// Intersections of the canonical ranges with one prefix shard:
    /// shard s of prefix length t covers codes [s*q^{N-t}, (s+1)*q^{N-t}).
    pub fn shard_canonical_ranges(&self, prefix_len: u32, shard: u64) -> Vec<(u64, u64)> {
        let width = self.q.pow(self.len as u32 - prefix_len);
        let lo = shard * width;
        let hi = lo + width;
        self.canonical_ranges()
            .into_iter()
            .filter_map(|(a, b)| {
                let a = a.max(lo);
                let b = b.min(hi);
                (a < b).then_some((a, b))
            })
            .collect()
    }

    /// Visit every code in [lo, hi) with its digit vector, via an odometer.
    pub fn for_each_in_range<F: FnMut(u64, &[u8])>(&self, lo: u64, hi: u64, mut f: F) {
        if lo >= hi {
            return;
        }
        let mut digits = vec![0u8; self.len];
        self.digits_of(lo, &mut digits);
        let mut code = lo;
        loop {
            f(code, &digits);
            code += 1;
            if code == hi {
                break;
            }
            // increment the base-q odometer, last digit fastest
            let mut i = self.len;
            loop {
                i -= 1;
                digits[i] += 1;
                if (digits[i] as u64) < self.q {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    /// Smallest prefix length t with q^t >= want, capped at len.
    pub fn prefix_len_for(&self, want: u64) -> u32 {
        let mut t = 0u32;
        let mut count = 1u64;
        while count < want && (t as usize) < self.len {
            count *= self.q;
            t += 1;
        }
        t
    }

    pub fn shard_count(&self, prefix_len: u32) -> u64 {
        self.q.pow(prefix_len)
    }
}
