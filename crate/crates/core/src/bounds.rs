//! Closed-form calculators for the dimension bounds, counting exponents,
//! density limits and moduli estimates that the census is measured against.
//! All arithmetic is exact (big integers and reduced rationals); nothing
//! here ever touches floating point except the display helpers.

use crate::error::{Error, Result};
use crate::gf::prime_power;
use crate::polyspace::binom;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

fn bi(x: u128) -> BigInt {
    BigInt::from(x)
}

fn binom_bi(n: u64, r: u64) -> BigInt {
    // binom() is exact in u128 up to far beyond the supported parameters
    bi(binom(n, r))
}

/// An exact reduced rational rendered as numerator/denominator strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: String,
    pub den: String,
}

impl Ratio {
    pub fn from_rational(r: &BigRational) -> Ratio {
        Ratio {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

/// Upper bound for dim P^{A,lambda} over non-scalar pairs:
/// binom(d+n, n) - binom(d - floor(d/2) + n, n).
pub fn thm5_bound(n: u32, d: u32) -> BigInt {
    let half = d - d / 2;
    binom_bi((d + n) as u64, n as u64) - binom_bi((half + n) as u64, n as u64)
}

/// Dimension threshold above which the matrix is claimed diagonal:
/// thm5_bound + 1.
pub fn lemma6_threshold(n: u32, d: u32) -> BigInt {
    thm5_bound(n, d) + 1
}

/// The threshold actually delivered by the valuation proof, which picks
/// r = floor(d/2) + 1: binom(d+n, n) - binom(d - floor(d/2) - 1 + n, n) + 1.
/// Reported alongside the stated threshold; the two differ by an apparent
/// off-by-one in the source formulas.
pub fn lemma6_proof_threshold(n: u32, d: u32) -> BigInt {
    let r = d / 2 + 1;
    binom_bi((d + n) as u64, n as u64) - binom_bi((d - r + n) as u64, n as u64) + 1
}

/// Diagonal-case bound: binom(d+n-1, n-1)/2 + binom(d+n, n)/2.
pub fn lemma7_bound(n: u32, d: u32) -> BigRational {
    let a = binom_bi((d + n - 1) as u64, (n - 1) as u64);
    let b = binom_bi((d + n) as u64, n as u64);
    BigRational::new(a + b, bi(2))
}

/// The constant C = 1 - 1/2^n in the nontrivial-count exponent.
pub fn c_constant(n: u32) -> BigRational {
    BigRational::one() - BigRational::new(BigInt::one(), bi(1u128 << n))
}

/// Counting exponent for hypersurfaces with nontrivial automorphisms:
/// C*binom(n+d, d) + (n+1)^2, exact rational.
pub fn thm2_exponent(n: u32, d: u32) -> BigRational {
    let b = BigRational::from(binom_bi((n + d) as u64, d as u64));
    c_constant(n) * b + BigRational::from(bi(((n + 1) * (n + 1)) as u128))
}

/// The exponent used in the double-counting proof:
/// binom(d+n, n) - binom(d - floor(d/2) + n - 1, n) + (n+1)^2.
pub fn proof_exponent(n: u32, d: u32) -> BigInt {
    let half = d - d / 2;
    binom_bi((d + n) as u64, n as u64) - binom_bi((half + n - 1) as u64, n as u64)
        + bi(((n + 1) * (n + 1)) as u128)
}

/// The asymptotic smooth density: prod_{i=1}^{n+1} (1 - q^{-i}). This is
/// the reciprocal of the projective-space zeta value at s = n+1 and the
/// quantity the measured densities converge to as d grows.
pub fn zeta_density(n: u32, q: u64) -> Result<BigRational> {
    prime_power(q)?;
    let mut acc = BigRational::one();
    let q = BigInt::from(q);
    for i in 1..=(n + 1) {
        let qi = q.pow(i);
        acc *= BigRational::one() - BigRational::new(BigInt::one(), qi);
    }
    Ok(acc)
}

/// Moduli dimension D = binom(d+n, n) - (n+1)^2 + 1 and the leading term
/// q^D - q^{D-1} of the isomorphism-class count.
pub fn moduli_estimate(n: u32, d: u32, q: u64) -> Result<(u64, BigUint)> {
    assert!(n >= 2 && d >= 3, "moduli estimate needs n >= 2, d >= 3");
    prime_power(q)?;
    let dim = binom((d + n) as u64, n as u64) as i128 - ((n + 1) * (n + 1)) as i128 + 1;
    assert!(dim >= 1, "moduli dimension must be positive");
    let dim = dim as u64;
    let q = BigUint::from(q);
    let value = q.pow(dim as u32) - q.pow(dim as u32 - 1);
    Ok((dim, value))
}

/// The open interval for the Bertini error exponent delta:
/// (log_q(d)/n - 2, 1 + log_q(d)/n). Endpoints are exact rationals when
/// log_q(d) is rational (d and q powers of a common base) and f64
/// approximations otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaWindow {
    pub lo_exact: Option<Ratio>,
    pub hi_exact: Option<Ratio>,
    pub lo_approx: f64,
    pub hi_approx: f64,
}

/// Decompose x >= 2 as m^j with m minimal (hence m not a perfect power).
fn primitive_base(x: u64) -> (u64, u32) {
    for m in 2..=x {
        let mut acc = m;
        let mut j = 1u32;
        loop {
            if acc == x {
                return (m, j);
            }
            match acc.checked_mul(m) {
                Some(v) if v <= x => {
                    acc = v;
                    j += 1;
                }
                _ => break,
            }
        }
    }
    (x, 1)
}

/// Exact log_q(d) as a rational when one exists.
fn rational_log(q: u64, d: u64) -> Option<BigRational> {
    if d == 1 {
        return Some(BigRational::zero());
    }
    let (bq, eq) = primitive_base(q);
    let (bd, ed) = primitive_base(d);
    if bq == bd {
        Some(BigRational::new(bi(ed as u128), bi(eq as u128)))
    } else {
        None
    }
}

pub fn bk_delta_window(n: u32, d: u32, q: u64) -> Result<DeltaWindow> {
    assert!(d >= 2, "the delta window needs d >= 2");
    prime_power(q)?;
    let log_exact = rational_log(q, d as u64);
    let logq = (d as f64).ln() / (q as f64).ln();
    let lo_approx = logq / n as f64 - 2.0;
    let hi_approx = 1.0 + logq / n as f64;
    let (lo_exact, hi_exact) = match log_exact {
        Some(l) => {
            let scaled = l / BigRational::from(bi(n as u128));
            let lo = &scaled - BigRational::from(bi(2));
            let hi = &scaled + BigRational::one();
            (
                Some(Ratio::from_rational(&lo)),
                Some(Ratio::from_rational(&hi)),
            )
        }
        None => (None, None),
    };
    Ok(DeltaWindow {
        lo_exact,
        hi_exact,
        lo_approx,
        hi_approx,
    })
}

/// The two binomial identities behind the diagonal bound:
///   sum_{k=0}^{d} binom(k+n-2, n-2) = binom(d+n-1, n-1)
///   sum_{k=0}^{d} (k+n-1) binom(k+n-2, n-2) = (n-1) binom(d+n, n)
/// evaluated exactly on both sides.
pub fn identity_check(n: u32, d: u32) -> (bool, bool) {
    assert!(n >= 2, "the identities need n >= 2");
    let mut s1 = BigInt::zero();
    let mut s2 = BigInt::zero();
    for k in 0..=d {
        let term = binom_bi((k + n - 2) as u64, (n - 2) as u64);
        s1 += &term;
        s2 += bi((k + n - 1) as u128) * term;
    }
    let first = s1 == binom_bi((d + n - 1) as u64, (n - 1) as u64);
    let second = s2 == bi((n - 1) as u128) * binom_bi((d + n) as u64, n as u64);
    (first, second)
}

/// Exact comparison `count < q^exponent` for a nonnegative rational
/// exponent a/b, by cross-powering: count^b < q^a.
pub fn less_than_q_pow(count: &BigInt, q: u64, exponent: &BigRational) -> bool {
    assert!(!exponent.is_negative());
    assert!(!count.is_negative());
    let a = exponent.numer().to_u32().expect("exponent numerator fits u32");
    let b = exponent.denom().to_u32().expect("exponent denominator fits u32");
    let lhs = count.pow(b);
    let rhs = BigInt::from(q).pow(a);
    lhs < rhs
}

/// Every explicit bound, threshold, identity and estimate for one
/// (n, d, q), ready for serialization.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub d: u32,
    pub q: u64,
    pub thm5_bound: String,
    pub lemma6_threshold: String,
    pub lemma6_proof_threshold: String,
    pub lemma7_bound: Ratio,
    pub thm2_exponent: Ratio,
    pub proof_exponent: String,
    pub c_constant: Ratio,
    pub zeta_density: Ratio,
    pub zeta_density_approx: f64,
    pub moduli_dim: Option<u64>,
    pub moduli_leading: Option<String>,
    pub bk_delta_window: Option<DeltaWindow>,
    pub identities_hold: Option<(bool, bool)>,
}

pub fn bound_report(n: u32, d: u32, q: u64) -> Result<BoundReport> {
    if n < 1 || d < 1 {
        return Err(Error::InvalidConfig(
            "bounds need n >= 1 and d >= 1".into(),
        ));
    }
    prime_power(q)?;
    let zeta = zeta_density(n, q)?;
    let (moduli_dim, moduli_leading) = if n >= 2 && d >= 3 {
        let (dim, v) = moduli_estimate(n, d, q)?;
        (Some(dim), Some(v.to_string()))
    } else {
        (None, None)
    };
    Ok(BoundReport {
        n,
        d,
        q,
        thm5_bound: thm5_bound(n, d).to_string(),
        lemma6_threshold: lemma6_threshold(n, d).to_string(),
        lemma6_proof_threshold: lemma6_proof_threshold(n, d).to_string(),
        lemma7_bound: Ratio::from_rational(&lemma7_bound(n, d)),
        thm2_exponent: Ratio::from_rational(&thm2_exponent(n, d)),
        proof_exponent: proof_exponent(n, d).to_string(),
        c_constant: Ratio::from_rational(&c_constant(n)),
        zeta_density: Ratio::from_rational(&zeta),
        zeta_density_approx: zeta.to_f64().unwrap_or(f64::NAN),
        moduli_dim,
        moduli_leading,
        bk_delta_window: if d >= 2 {
            Some(bk_delta_window(n, d, q)?)
        } else {
            None
        },
        identities_hold: if n >= 2 {
            Some(identity_check(n, d))
        } else {
            None
        },
    })
}

/// Aligned key/value table of a bound report for terminal output.
pub fn format_report_table(r: &BoundReport) -> String {
    let mut rows: Vec<(String, String)> = vec![
        ("n".into(), r.n.to_string()),
        ("d".into(), r.d.to_string()),
        ("q".into(), r.q.to_string()),
        ("thm5_bound".into(), r.thm5_bound.clone()),
        ("lemma6_threshold".into(), r.lemma6_threshold.clone()),
        (
            "lemma6_proof_threshold".into(),
            r.lemma6_proof_threshold.clone(),
        ),
        (
            "lemma7_bound".into(),
            format!("{}/{}", r.lemma7_bound.num, r.lemma7_bound.den),
        ),
        (
            "thm2_exponent".into(),
            format!("{}/{}", r.thm2_exponent.num, r.thm2_exponent.den),
        ),
        ("proof_exponent".into(), r.proof_exponent.clone()),
        (
            "C".into(),
            format!("{}/{}", r.c_constant.num, r.c_constant.den),
        ),
        (
            "zeta_density".into(),
            format!(
                "{}/{} ~ {:.6}",
                r.zeta_density.num, r.zeta_density.den, r.zeta_density_approx
            ),
        ),
    ];
    if let (Some(dim), Some(lead)) = (r.moduli_dim, &r.moduli_leading) {
        rows.push(("moduli_dim".into(), dim.to_string()));
        rows.push(("moduli_leading".into(), lead.clone()));
    }
    if let Some(w) = &r.bk_delta_window {
        let lo = w
            .lo_exact
            .as_ref()
            .map(|x| format!("{}/{}", x.num, x.den))
            .unwrap_or_else(|| format!("~{:.6}", w.lo_approx));
        let hi = w
            .hi_exact
            .as_ref()
            .map(|x| format!("{}/{}", x.num, x.den))
            .unwrap_or_else(|| format!("~{:.6}", w.hi_approx));
        rows.push(("bk_delta_window".into(), format!("({lo}, {hi})")));
    }
    if let Some((a, b)) = r.identities_hold {
        rows.push(("identities_hold".into(), format!("({a}, {b})")));
    }
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}
