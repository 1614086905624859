//! The subspace P^{A,lambda} = { f in P_d : lambda*f = f(Ax) }, computed as
//! the kernel of (M_A - lambda*I), with an independent dynamic-programming
//! dimension count for diagonal A based on discrete logarithms.

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldSpec};
use crate::group::GroupElem;
use crate::linalg::MatrixFq;
use crate::polyspace::{substitution_matrix, MonomialBasis, PolyVec};
use std::sync::Arc;

/// One computed fixed space: the pair (A, lambda), the degree, the kernel
/// dimension, and the echelon-normalized basis when it was requested.
#[derive(Debug, Clone)]
pub struct FixedSpaceRecord {
    pub a: GroupElem,
    pub lambda: FieldElem,
    pub d: u32,
    pub dim: usize,
    pub basis: Option<Vec<PolyVec>>,
}

/// Kernel dimension of (M_A - lambda*I) for an already-built substitution
/// matrix. The census uses this entry point with cached matrices.
pub fn fixed_dim_of_submatrix(m_a: &MatrixFq, lambda: FieldElem) -> Result<usize> {
    Ok(shifted_kernel(m_a, lambda)?.0)
}

/// Kernel basis variant of [`fixed_dim_of_submatrix`].
pub fn fixed_basis_of_submatrix(
    m_a: &MatrixFq,
    lambda: FieldElem,
) -> Result<(usize, Vec<Vec<FieldElem>>)> {
    shifted_kernel(m_a, lambda)
}

fn shifted_kernel(m_a: &MatrixFq, lambda: FieldElem) -> Result<(usize, Vec<Vec<FieldElem>>)> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let spec = m_a.spec().clone();
    let size = m_a.rows();
    let mut shifted = m_a.clone();
    for i in 0..size {
        shifted[(i, i)] = spec.sub(shifted[(i, i)], lambda);
    }
    Ok(shifted.kernel())
}

/// Compute P^{A,lambda} over the monomial basis. `lambda = 0` is rejected:
/// f(Ax) = 0 forces f = 0 for invertible A, so a zero multiplier always
/// signals a caller bug.
pub fn fixed_space(
    a: &GroupElem,
    lambda: FieldElem,
    basis: &Arc<MonomialBasis>,
    want_basis: bool,
    budgets: &Budgets,
) -> Result<FixedSpaceRecord> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let m_a = substitution_matrix(a.matrix(), basis, budgets)?;
    let (dim, vectors) = shifted_kernel(&m_a, lambda)?;
    let basis_polys = if want_basis {
        Some(
            vectors
                .into_iter()
                .map(|v| PolyVec::new(basis.clone(), a.spec().clone(), v))
                .collect(),
        )
    } else {
        None
    };
    Ok(FixedSpaceRecord {
        a: a.clone(),
        lambda,
        d: basis.d(),
        dim,
        basis: basis_polys,
    })
}

/// Dimension of P^{A,lambda} for diagonal A with diagonal entries
/// `lambdas`, computed without linear algebra: it counts exponent tuples
/// j >= 0 with sum d and prod lambdas_i^{j_i} = lambda, i.e. solutions of
/// sum j_i * log(lambdas_i) = log(lambda) (mod q-1), by dynamic
/// programming over (variable, degree used, residue).
pub fn diag_fixed_dim(
    spec: &Arc<FieldSpec>,
    lambdas: &[FieldElem],
    lambda: FieldElem,
    d: u32,
) -> Result<u64> {
    if lambda.is_zero() || lambdas.iter().any(|l| l.is_zero()) {
        return Err(Error::ZeroLambda);
    }
    let m = (spec.q() - 1) as usize; // unit group order
    let logs: Vec<usize> = lambdas
        .iter()
        .map(|&l| spec.discrete_log(l).map(|x| x as usize))
        .collect::<Result<_>>()?;
    let target = spec.discrete_log(lambda)? as usize;

    let d = d as usize;
    // dp[deg * m + res] = number of partial tuples with this degree and residue
    let mut dp = vec![0u64; (d + 1) * m];
    dp[0] = 1;
    for &l in &logs {
        let mut next = vec![0u64; (d + 1) * m];
        for deg in 0..=d {
            for res in 0..m {
                let count = dp[deg * m + res];
                if count == 0 {
                    continue;
                }
                for j in 0..=(d - deg) {
                    let nres = (res + j * l) % m;
                    next[(deg + j) * m + nres] += count;
                }
            }
        }
        dp = next;
    }
    Ok(dp[d * m + target % m])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::{binom, substitute};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn field(q: u64) -> Arc<FieldSpec> {
        FieldSpec::from_order(q, &Budgets::default()).unwrap()
    }

    fn b() -> Budgets {
        Budgets::default()
    }

    fn diag_elem(spec: &Arc<FieldSpec>, entries: &[u32]) -> GroupElem {
        let dim = entries.len();
        let mut m = MatrixFq::zeros(spec.clone(), dim, dim);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = FieldElem(e);
        }
        GroupElem::new(m).unwrap()
    }

    #[test]
    fn identity_fixed_spaces() {
        let spec = field(3);
        let basis = MonomialBasis::new(2, 3, &b()).unwrap();
        let id = GroupElem::new(MatrixFq::identity(spec.clone(), 3)).unwrap();
        let rec = fixed_space(&id, FieldElem::ONE, &basis, false, &b()).unwrap();
        assert_eq!(rec.dim as u128, binom(5, 2));
        let rec = fixed_space(&id, FieldElem(2), &basis, false, &b()).unwrap();
        assert_eq!(rec.dim, 0);
    }

    #[test]
    fn swap_fixed_space_dim_four() {
        // n = 2, d = 2, A = swap(x1,x2), lambda = 1: the fixed space is
        // spanned by x1^2+x2^2, x1x2, x3^2, x1x3+x2x3 over any field
        for q in [2u64, 3, 5, 4] {
            let spec = field(q);
            let basis = MonomialBasis::new(2, 2, &b()).unwrap();
            let mut m = MatrixFq::zeros(spec.clone(), 3, 3);
            m[(0, 1)] = FieldElem::ONE;
            m[(1, 0)] = FieldElem::ONE;
            m[(2, 2)] = FieldElem::ONE;
            let swap = GroupElem::new(m).unwrap();
            let rec = fixed_space(&swap, FieldElem::ONE, &basis, true, &b()).unwrap();
            assert_eq!(rec.dim, 4, "q = {q}");
            // membership: every basis vector satisfies f(Ax) = f
            for f in rec.basis.as_ref().unwrap() {
                let img = substitute(f, swap.matrix(), &b()).unwrap();
                assert_eq!(&img, f);
            }
        }
    }

    #[test]
    fn zero_lambda_rejected() {
        let spec = field(3);
        let basis = MonomialBasis::new(2, 2, &b()).unwrap();
        let id = GroupElem::new(MatrixFq::identity(spec.clone(), 3)).unwrap();
        assert!(matches!(
            fixed_space(&id, FieldElem::ZERO, &basis, false, &b()),
            Err(Error::ZeroLambda)
        ));
        assert!(diag_fixed_dim(&spec, &[FieldElem::ONE], FieldElem::ZERO, 2).is_err());
        assert!(diag_fixed_dim(&spec, &[FieldElem::ZERO], FieldElem::ONE, 2).is_err());
    }

    /// Brute-force tuple enumeration used as the independent oracle for the
    /// DP count.
    fn enumerate_diag_dim(
        spec: &Arc<FieldSpec>,
        lambdas: &[FieldElem],
        lambda: FieldElem,
        d: u32,
    ) -> u64 {
        fn rec(
            spec: &Arc<FieldSpec>,
            lambdas: &[FieldElem],
            pos: usize,
            left: u32,
            acc: FieldElem,
            lambda: FieldElem,
        ) -> u64 {
            if pos + 1 == lambdas.len() {
                let term = spec.pow(lambdas[pos], left as i64).unwrap();
                return (spec.mul(acc, term) == lambda) as u64;
            }
            let mut total = 0;
            for j in 0..=left {
                let term = spec.pow(lambdas[pos], j as i64).unwrap();
                total += rec(spec, lambdas, pos + 1, left - j, spec.mul(acc, term), lambda);
            }
            total
        }
        rec(spec, lambdas, 0, d, FieldElem::ONE, lambda)
    }

    #[test]
    fn diag_dp_examples() {
        let spec = field(5);
        // all lambdas 1 -> every tuple counts
        assert_eq!(
            diag_fixed_dim(&spec, &[FieldElem::ONE; 3], FieldElem::ONE, 4).unwrap() as u128,
            binom(6, 2)
        );
        // q = 5, n = 2, d = 4, lambdas = (4,1,1): j_1 even gives 5+3+1 = 9
        let ls = [FieldElem(4), FieldElem(1), FieldElem(1)];
        assert_eq!(diag_fixed_dim(&spec, &ls, FieldElem::ONE, 4).unwrap(), 9);
        // lambda = 4: j_1 odd gives 4+2 = 6
        assert_eq!(diag_fixed_dim(&spec, &ls, FieldElem(4), 4).unwrap(), 6);
        // agrees with the enumeration oracle
        assert_eq!(enumerate_diag_dim(&spec, &ls, FieldElem::ONE, 4), 9);
        assert_eq!(enumerate_diag_dim(&spec, &ls, FieldElem(4), 4), 6);
    }

    #[test]
    fn dp_matches_enumeration_and_kernel() {
        let mut rng = StdRng::seed_from_u64(4242);
        for q in [2u64, 3, 4, 5, 7, 9] {
            let spec = field(q);
            for _ in 0..12 {
                let n = rng.gen_range(1..=3u32);
                let d = rng.gen_range(1..=5u32);
                let entries: Vec<u32> = (0..=n)
                    .map(|_| rng.gen_range(1..q as u32))
                    .collect();
                let a = diag_elem(&spec, &entries);
                let lambdas = a.diagonal();
                let basis = MonomialBasis::new(n, d, &b()).unwrap();
                for lam in spec.units() {
                    let dp = diag_fixed_dim(&spec, &lambdas, lam, d).unwrap();
                    let oracle = enumerate_diag_dim(&spec, &lambdas, lam, d);
                    assert_eq!(dp, oracle, "q={q} n={n} d={d}");
                    let kernel = fixed_space(&a, lam, &basis, false, &b()).unwrap();
                    assert_eq!(kernel.dim as u64, dp, "q={q} n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn diagonal_partition_is_exact() {
        // for diagonal A the eigenspace dims over all unit lambdas
        // partition the whole basis
        let mut rng = StdRng::seed_from_u64(99);
        for q in [3u64, 5, 9] {
            let spec = field(q);
            for _ in 0..8 {
                let n = rng.gen_range(1..=2u32);
                let d = rng.gen_range(1..=5u32);
                let lambdas: Vec<FieldElem> = (0..=n)
                    .map(|_| FieldElem(rng.gen_range(1..q as u32)))
                    .collect();
                let total: u64 = spec
                    .units()
                    .map(|lam| diag_fixed_dim(&spec, &lambdas, lam, d).unwrap())
                    .sum();
                assert_eq!(total as u128, binom((d + n) as u64, n as u64));
            }
        }
    }

    #[test]
    fn representative_scaling_covariance() {
        // fixed_space(cA, c^d * lambda) is literally the same space
        let mut rng = StdRng::seed_from_u64(7);
        for q in [3u64, 5] {
            let spec = field(q);
            let basis = MonomialBasis::new(2, 3, &b()).unwrap();
            for _ in 0..10 {
                let entries: Vec<FieldElem> =
                    (0..9).map(|_| FieldElem(rng.gen_range(0..q as u32))).collect();
                let m = MatrixFq::new(spec.clone(), 3, 3, entries);
                let a = match GroupElem::new(m) {
                    Ok(a) => a,
                    Err(_) => continue,
                };
                for c in spec.units() {
                    for lam in spec.units() {
                        let scaled_entries: Vec<FieldElem> = a
                            .matrix()
                            .entries()
                            .iter()
                            .map(|&e| spec.mul(e, c))
                            .collect();
                        let ca = GroupElem::new(MatrixFq::new(
                            spec.clone(),
                            3,
                            3,
                            scaled_entries,
                        ))
                        .unwrap();
                        let cd_lam = spec.mul(spec.pow(c, 3).unwrap(), lam);
                        let r1 = fixed_space(&a, lam, &basis, true, &b()).unwrap();
                        let r2 = fixed_space(&ca, cd_lam, &basis, true, &b()).unwrap();
                        assert_eq!(r1.dim, r2.dim);
                        let b1: Vec<_> = r1.basis.unwrap();
                        let b2: Vec<_> = r2.basis.unwrap();
                        assert_eq!(b1, b2, "identical echelon bases expected");
                    }
                }
            }
        }
    }
}
