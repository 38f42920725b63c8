//! Exhaustive reference decision: every vertex order, every injective choice
//! of covering edges. Shares nothing with the pruned search.

use thiserror::Error;

use super::CertificateKind;
use crate::hypergraph::Hypergraph;

pub const ORACLE_MAX_VERTICES: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("brute-force oracle needs n <= {ORACLE_MAX_VERTICES}, got n = {0}")]
pub struct OracleError(pub usize);

/// Lexicographic successor; false once `a` is the last permutation.
pub(crate) fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn assign(pairs: &[(usize, usize)], edges: &[Vec<usize>], used: &mut [bool], k: usize) -> bool {
    if k == pairs.len() {
        return true;
    }
    let (u, v) = pairs[k];
    for (idx, e) in edges.iter().enumerate() {
        if !used[idx] && e.contains(&u) && e.contains(&v) {
            used[idx] = true;
            if assign(pairs, edges, used, k + 1) {
                return true;
            }
            used[idx] = false;
        }
    }
    false
}

/// Decides whether `h` has a Hamiltonian Berge path or cycle by brute force.
pub fn brute_force_oracle(h: &Hypergraph, kind: CertificateKind) -> Result<bool, OracleError> {
    let n = h.n();
    if n > ORACLE_MAX_VERTICES {
        return Err(OracleError(n));
    }
    let edges = h.edge_lists();
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        let mut pairs: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
        if kind == CertificateKind::Cycle {
            pairs.push((order[n - 1], order[0]));
        }
        let mut used = vec![false; edges.len()];
        if assign(&pairs, &edges, &mut used, 0) {
            return Ok(true);
        }
        if !next_permutation(&mut order) {
            return Ok(false);
        }
    }
}
