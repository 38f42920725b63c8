//! Turning a Hamiltonian Berge path plus an unused edge into a Hamiltonian
//! Berge cycle, following the case analysis for `n`-vertex `(n-2)`-graphs.
//!
//! Notation below is 1-based: `P = v_1, e_1, v_2, ..., e_{n-1}, v_n` and `e`
//! is an edge outside `P`.
//!
//! 1. Anchor: pick `e ∋ v_1` (reversing `P` if only `v_n` works). If no unused
//!    edge meets an endpoint, splice `e` into `P` at an interior `e_i ∋ v_1`
//!    so that `e_i` becomes the unused edge.
//! 2. Closure: if `v_n ∈ e`, close the path directly.
//! 3. Otherwise, and only for `r = n - 2` with `n >= 9`, with
//!    `J = {j : v_n ∈ e_j}`:
//!    - `J = {n-1}`: use a second unused edge `f ∋ v_n` and a pair
//!      `{v_i, v_{i+1}} ⊆ e ∩ f`;
//!    - some `j ∈ J` has `v_{j+1} ∈ e`: jump from `v_j` to `v_n` along `e_j`;
//!    - else take `i ∈ J \ {n-1}` and `k` with `{v_k, v_{k+1}} ⊆ e`,
//!      `{v_i, v_{i+1}} ⊆ e_k` and `v_k ∈ e_i`, and exchange `e_i`, `e_k`.
//!
//! Every case produces the vertex order `v_1..v_c, v_n, v_{n-1}, ..., v_{c+1}`
//! for some cut `c`, and the result is re-verified before it is returned.

use serde::Serialize;
use thiserror::Error;

use super::{verify_certificate, BergeCertificate, CertificateKind, Violation};
use crate::hypergraph::{Edge, Hypergraph};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum RotationFailure {
    #[error("input is not a Hamiltonian Berge path of the hypergraph")]
    InvalidInput { violations: Vec<Violation> },
    #[error("every edge is used by the path")]
    NoUnusedEdge,
    #[error("no unused edge meets an endpoint and no interior splice applies")]
    NoAnchor,
    #[error("closing cases need r = n - 2 and n >= 9, got n = {n}, r = {r}")]
    OutsideHypotheses { n: usize, r: usize },
    #[error("v_n lies only in e_(n-1) and in no other unused edge")]
    NoSecondEndEdge,
    #[error("no consecutive pair inside both unused edges")]
    NoSharedPair,
    #[error("no exchange index k for the rotation")]
    NoExchangeIndex,
    #[error("constructed cycle failed verification")]
    ConstructionInvalid { violations: Vec<Violation> },
}

/// Path in 0-based form: `edges[t]` joins `vertices[t]` and `vertices[t + 1]`.
struct PathView<'a> {
    vertices: &'a [usize],
    edges: &'a [Edge],
}

impl PathView<'_> {
    fn n(&self) -> usize {
        self.vertices.len()
    }

    /// `v_j`, 1-based.
    fn v(&self, j: usize) -> usize {
        self.vertices[j - 1]
    }

    /// `e_j`, 1-based.
    fn e(&self, j: usize) -> Edge {
        self.edges[j - 1]
    }

    /// Cycle `v_1..v_c, v_n, ..., v_{c+1}` with `jump` joining `v_c` to `v_n`,
    /// `close` joining `v_{c+1}` to `v_1`, path edges elsewhere, except that the
    /// link between `v_t` and `v_{t+1}` uses `swap.1` when `swap = Some((t, _))`.
    fn reverse_tail(&self, c: usize, jump: Edge, close: Edge, swap: Option<(usize, Edge)>) -> BergeCertificate {
        let n = self.n();
        let link = |t: usize| match swap {
            Some((s, edge)) if s == t => edge,
            _ => self.e(t),
        };
        let mut vertices = Vec::with_capacity(n);
        // links[k] joins vertices[k] and vertices[k + 1 mod n]
        let mut links = Vec::with_capacity(n);
        for t in 1..=c {
            vertices.push(self.v(t));
            links.push(if t < c { link(t) } else { jump });
        }
        for t in (c + 1..=n).rev() {
            vertices.push(self.v(t));
            links.push(if t > c + 1 { link(t - 1) } else { close });
        }
        let mut edges = Vec::with_capacity(n);
        edges.push(links[n - 1]);
        edges.extend_from_slice(&links[..n - 1]);
        BergeCertificate { kind: CertificateKind::Cycle, vertices, edges }
    }
}

fn pair_in(e: Edge, a: usize, b: usize) -> bool {
    e.contains(a) && e.contains(b)
}

/// Closes an anchored pair `(P, e)` with `v_1 ∈ e`.
fn close_anchored(h: &Hypergraph, p: &PathView<'_>, e: Edge, unused: &[Edge]) -> Result<BergeCertificate, RotationFailure> {
    let n = p.n();
    let vn = p.v(n);
    if e.contains(vn) {
        let mut edges = Vec::with_capacity(n);
        edges.push(e);
        edges.extend_from_slice(p.edges);
        return Ok(BergeCertificate { kind: CertificateKind::Cycle, vertices: p.vertices.to_vec(), edges });
    }
    if h.r() + 2 != n || n < 9 {
        return Err(RotationFailure::OutsideHypotheses { n, r: h.r() });
    }
    let j_set: Vec<usize> = (1..n).filter(|&j| p.e(j).contains(vn)).collect();
    if j_set == [n - 1] {
        let seconds: Vec<Edge> = unused.iter().copied().filter(|&f| f != e && f.contains(vn)).collect();
        if seconds.is_empty() {
            return Err(RotationFailure::NoSecondEndEdge);
        }
        for f in seconds {
            let shared = Edge::from_mask(e.mask() & f.mask());
            if let Some(i) = (1..=n - 2).find(|&i| pair_in(shared, p.v(i), p.v(i + 1))) {
                return Ok(p.reverse_tail(i, f, e, None));
            }
        }
        return Err(RotationFailure::NoSharedPair);
    }
    if let Some(&j) = j_set.iter().find(|&&j| j < n - 1 && e.contains(p.v(j + 1))) {
        return Ok(p.reverse_tail(j, p.e(j), e, None));
    }
    let j_prime: Vec<usize> = (1..n).filter(|&j| pair_in(e, p.v(j), p.v(j + 1))).collect();
    for &i in j_set.iter().filter(|&&i| i != n - 1) {
        let ei = p.e(i);
        let found = j_prime
            .iter()
            .copied()
            .filter(|&k| pair_in(p.e(k), p.v(i), p.v(i + 1)))
            .find(|&k| k != i && ei.contains(p.v(k)));
        if let Some(k) = found {
            return Ok(p.reverse_tail(k, ei, e, Some((i, p.e(k)))));
        }
    }
    Err(RotationFailure::NoExchangeIndex)
}

/// Rotates a Hamiltonian Berge path of `h` into a Hamiltonian Berge cycle,
/// or names the first case of the construction that does not apply.
pub fn rotate_path_to_cycle(h: &Hypergraph, path: &BergeCertificate) -> Result<BergeCertificate, RotationFailure> {
    let mut violations = verify_certificate(h, path).err().unwrap_or_default();
    if path.kind != CertificateKind::Path || !path.is_hamiltonian(h.n()) {
        violations.push(Violation::WrongEdgeCount { expected: h.n().saturating_sub(1), found: path.edges.len() });
    }
    if !violations.is_empty() || h.n() < 3 {
        return Err(RotationFailure::InvalidInput { violations });
    }
    let n = h.n();
    let unused: Vec<Edge> = h.edges().iter().copied().filter(|e| !path.edges.contains(e)).collect();
    if unused.is_empty() {
        return Err(RotationFailure::NoUnusedEdge);
    }

    let reversed = path.reversed_path();
    let orientations = [path, &reversed];
    // (P, e) candidates with v_1 ∈ e, in deterministic order.
    let mut anchored: Vec<(BergeCertificate, Edge)> = Vec::new();
    for cert in orientations {
        for &e in &unused {
            if e.contains(cert.vertices[0]) {
                anchored.push((cert.clone(), e));
            }
        }
    }
    if anchored.is_empty() {
        // Splice: orient so that v_1 has the larger degree, then swap an
        // interior e_i ∋ v_1 for an unused edge covering {v_i, v_{i+1}}.
        let mut by_degree = orientations.to_vec();
        by_degree.sort_by_key(|c| std::cmp::Reverse(h.degree(c.vertices[0])));
        'outer: for cert in by_degree {
            let p = PathView { vertices: &cert.vertices, edges: &cert.edges };
            for &f in &unused {
                for i in 2..=n - 2 {
                    if p.e(i).contains(p.v(1)) && pair_in(f, p.v(i), p.v(i + 1)) {
                        let mut spliced = cert.clone();
                        let old = spliced.edges[i - 1];
                        spliced.edges[i - 1] = f;
                        anchored.push((spliced, old));
                        break 'outer;
                    }
                }
            }
        }
    }
    if anchored.is_empty() {
        return Err(RotationFailure::NoAnchor);
    }

    let mut first_failure = None;
    for (cert, e) in &anchored {
        let p = PathView { vertices: &cert.vertices, edges: &cert.edges };
        let unused_here: Vec<Edge> = h.edges().iter().copied().filter(|x| !cert.edges.contains(x)).collect();
        match close_anchored(h, &p, *e, &unused_here) {
            Ok(cycle) => {
                return match verify_certificate(h, &cycle) {
                    Ok(()) => Ok(cycle),
                    Err(violations) => Err(RotationFailure::ConstructionInvalid { violations }),
                };
            }
            Err(f) => {
                first_failure.get_or_insert(f);
            }
        }
    }
    Err(first_failure.expect("at least one anchored candidate"))
}
