//! Brute-force reference procedures.
//!
//! These follow the permutation definitions of the two reducibility forms
//! literally and are exponential in the number of states. They exist to
//! cross-check the reachability and matching tests in
//! [`crate::structured`], and never call into them.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::structured::StructuredPair;

/// Number of state permutations, `n!`, saturating.
pub fn permutation_count(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

fn check_cap(n: usize, cap: u128) -> Result<()> {
    let required = permutation_count(n);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    Ok(())
}

/// Searches for a permutation `P` and split `1 ≤ p ≤ n` with
/// `P A Pᵀ = [[A11, 0], [A21, A22]]` and `P B = [0; B22]`, where `A11` is
/// `p × p`. Returns the original state indices of the leading block.
pub fn form_i_by_permutation(pair: &StructuredPair, cap: u128) -> Result<Option<Vec<usize>>> {
    let n = pair.n_states();
    check_cap(n, cap)?;
    for perm in (0..n).permutations(n) {
        let a = pair.a().permuted(&perm, true);
        let b = pair.b().permuted(&perm, false);
        for p in 1..=n {
            let upper_right_zero = (0..p).all(|i| (p..n).all(|j| !a.get(i, j)));
            let top_b_zero = (0..p).all(|i| b.row_is_zero(i));
            if upper_right_zero && top_b_zero {
                let mut block: Vec<usize> = perm[..p].to_vec();
                block.sort_unstable();
                return Ok(Some(block));
            }
        }
    }
    Ok(None)
}

fn nonzero_columns(rows: &Pattern, first_k: usize) -> usize {
    (0..rows.cols())
        .filter(|&j| (0..first_k).any(|i| rows.get(i, j)))
        .count()
}

/// Searches for a permutation `P` and `1 ≤ k ≤ n` such that the first `k`
/// rows of `[P A Pᵀ, P B]` have free entries in at most `k - 1` columns.
pub fn form_ii_by_permutation(pair: &StructuredPair, cap: u128) -> Result<bool> {
    let n = pair.n_states();
    check_cap(n, cap)?;
    for perm in (0..n).permutations(n) {
        let ab = pair.a().permuted(&perm, true).hstack(&pair.b().permuted(&perm, false));
        if (1..=n).any(|k| nonzero_columns(&ab, k) < k) {
            return Ok(true);
        }
    }
    Ok(false)
}
