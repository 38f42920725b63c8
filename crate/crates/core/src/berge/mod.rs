//! Berge paths and cycles: certificates, their verification, and the exact
//! search for Hamiltonian ones.
//!
//! A Berge cycle lists distinct vertices `v_1..v_l` and distinct edges
//! `e_1..e_l` with `v_i ∈ e_i ∩ e_{i+1}` and `v_l ∈ e_l ∩ e_1`; equivalently
//! `e_1` covers the closing pair `{v_l, v_1}` and `e_{i+1}` covers
//! `{v_i, v_{i+1}}`. A Berge path lists `l` vertices and `l - 1` edges with
//! `{v_i, v_{i+1}} ⊆ e_i`.

pub(crate) mod oracle;
mod rotation;
mod search;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::hypergraph::{Edge, Hypergraph, VertexId};

pub use oracle::{brute_force_oracle, OracleError, ORACLE_MAX_VERTICES};
pub use rotation::{rotate_path_to_cycle, RotationFailure};
pub use search::{
    find_hamiltonian_berge_cycle, find_hamiltonian_berge_path, is_hamiltonian_connected, search_cycle, search_path,
    BergeError, NoneReason, SearchOutcome, SearchStats,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Path,
    Cycle,
}

/// A Berge path or cycle witness. See the module docs for the edge indexing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BergeCertificate {
    pub kind: CertificateKind,
    pub vertices: Vec<VertexId>,
    #[serde(with = "edge_lists")]
    pub edges: Vec<Edge>,
}

mod edge_lists {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::hypergraph::Edge;

    pub fn serialize<S: Serializer>(edges: &[Edge], s: S) -> Result<S::Ok, S::Error> {
        let lists: Vec<Vec<usize>> = edges.iter().map(|e| e.to_vec()).collect();
        lists.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Edge>, D::Error> {
        let lists = Vec::<Vec<usize>>::deserialize(d)?;
        lists
            .into_iter()
            .map(|l| {
                if let Some(&v) = l.iter().find(|&&v| v >= 64) {
                    return Err(serde::de::Error::custom(format!("vertex {v} exceeds 63")));
                }
                Ok(Edge::from_vertices(l))
            })
            .collect()
    }
}

impl BergeCertificate {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_hamiltonian(&self, n: usize) -> bool {
        self.vertices.len() == n
    }

    /// Endpoints of a path certificate.
    pub fn endpoints(&self) -> Option<(VertexId, VertexId)> {
        match (self.kind, self.vertices.first(), self.vertices.last()) {
            (CertificateKind::Path, Some(&a), Some(&b)) => Some((a, b)),
            _ => None,
        }
    }

    /// The same path traversed backwards.
    pub fn reversed_path(&self) -> Self {
        debug_assert_eq!(self.kind, CertificateKind::Path);
        BergeCertificate {
            kind: CertificateKind::Path,
            vertices: self.vertices.iter().rev().copied().collect(),
            edges: self.edges.iter().rev().copied().collect(),
        }
    }

    /// Pairs `(edge index, {u, v})` that each listed edge must cover.
    fn required_pairs(&self) -> Vec<(usize, VertexId, VertexId)> {
        let l = self.vertices.len();
        match self.kind {
            CertificateKind::Path => (0..l.saturating_sub(1)).map(|i| (i, self.vertices[i], self.vertices[i + 1])).collect(),
            CertificateKind::Cycle => {
                let mut out = Vec::with_capacity(l);
                if l > 0 {
                    out.push((0, self.vertices[l - 1], self.vertices[0]));
                }
                out.extend((0..l.saturating_sub(1)).map(|i| (i + 1, self.vertices[i], self.vertices[i + 1])));
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    Empty,
    CycleTooShort { length: usize },
    VertexOutOfRange { position: usize, vertex: VertexId },
    RepeatedVertex { vertex: VertexId },
    WrongEdgeCount { expected: usize, found: usize },
    RepeatedEdge { position: usize, edge: Vec<VertexId> },
    EdgeNotInHypergraph { position: usize, edge: Vec<VertexId> },
    PairNotCovered { position: usize, pair: (VertexId, VertexId) },
}

/// Checks every structural requirement of `cert` against `h`.
///
/// Non-Hamiltonian certificates are accepted; use
/// [`BergeCertificate::is_hamiltonian`] for the spanning condition.
pub fn verify_certificate(h: &Hypergraph, cert: &BergeCertificate) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    let l = cert.vertices.len();
    if l == 0 {
        violations.push(Violation::Empty);
    }
    if cert.kind == CertificateKind::Cycle && l > 0 && l < 2 {
        violations.push(Violation::CycleTooShort { length: l });
    }
    let mut seen = HashSet::new();
    for (position, &vertex) in cert.vertices.iter().enumerate() {
        if vertex >= h.n() {
            violations.push(Violation::VertexOutOfRange { position, vertex });
        } else if !seen.insert(vertex) {
            violations.push(Violation::RepeatedVertex { vertex });
        }
    }
    let expected = match cert.kind {
        CertificateKind::Cycle => l,
        CertificateKind::Path => l.saturating_sub(1),
    };
    if cert.edges.len() != expected {
        violations.push(Violation::WrongEdgeCount { expected, found: cert.edges.len() });
    }
    let mut seen_edges = HashSet::new();
    for (position, &e) in cert.edges.iter().enumerate() {
        if !seen_edges.insert(e) {
            violations.push(Violation::RepeatedEdge { position, edge: e.to_vec() });
        }
        if !h.contains_edge(e) {
            violations.push(Violation::EdgeNotInHypergraph { position, edge: e.to_vec() });
        }
    }
    for (position, u, v) in cert.required_pairs() {
        let covered = cert.edges.get(position).is_some_and(|e| e.contains(u) && e.contains(v));
        if !covered {
            violations.push(Violation::PairNotCovered { position, pair: (u, v) });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(vs: &[usize]) -> Edge {
        Edge::from_vertices(vs.iter().copied())
    }

    #[test]
    fn accepts_k4_cycle() {
        let k4 = Hypergraph::complete(4, 3).unwrap();
        let cert = BergeCertificate {
            kind: CertificateKind::Cycle,
            vertices: vec![0, 1, 2, 3],
            edges: vec![e(&[3, 0, 1]), e(&[0, 1, 2]), e(&[1, 2, 3]), e(&[2, 3, 0])],
        };
        assert_eq!(verify_certificate(&k4, &cert), Ok(()));
        assert!(cert.is_hamiltonian(4));
    }

    #[test]
    fn rejects_duplicate_edge() {
        let k4 = Hypergraph::complete(4, 3).unwrap();
        let cert = BergeCertificate {
            kind: CertificateKind::Cycle,
            vertices: vec![0, 1, 2, 3],
            edges: vec![e(&[3, 0, 1]), e(&[0, 1, 2]), e(&[0, 1, 2]), e(&[2, 3, 0])],
        };
        let v = verify_certificate(&k4, &cert).unwrap_err();
        assert!(v.iter().any(|x| matches!(x, Violation::RepeatedEdge { position: 2, .. })));
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn accepts_pendant_path() {
        // K_5^3 + e: the pendant vertex 5 sits at the end of the path.
        let ke = Hypergraph::clique_plus_pendant(6, 3).unwrap();
        let cert = BergeCertificate {
            kind: CertificateKind::Path,
            vertices: vec![2, 3, 4, 0, 1, 5],
            edges: vec![e(&[2, 3, 4]), e(&[3, 4, 0]), e(&[4, 0, 2]), e(&[0, 1, 2]), e(&[0, 1, 5])],
        };
        assert_eq!(verify_certificate(&ke, &cert), Ok(()));
        assert_eq!(cert.endpoints(), Some((2, 5)));
    }

    #[test]
    fn reports_each_violation_kind() {
        let k4 = Hypergraph::complete(4, 3).unwrap();
        let bad = BergeCertificate {
            kind: CertificateKind::Path,
            vertices: vec![0, 0, 7],
            edges: vec![e(&[0, 1, 2]), e(&[0, 1, 4]), e(&[1, 2, 3])],
        };
        let v = verify_certificate(&k4, &bad).unwrap_err();
        assert!(v.contains(&Violation::RepeatedVertex { vertex: 0 }));
        assert!(v.contains(&Violation::VertexOutOfRange { position: 2, vertex: 7 }));
        assert!(v.contains(&Violation::WrongEdgeCount { expected: 2, found: 3 }));
        assert!(v.iter().any(|x| matches!(x, Violation::EdgeNotInHypergraph { position: 1, .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::PairNotCovered { position: 1, .. })));

        let empty = BergeCertificate { kind: CertificateKind::Cycle, vertices: vec![], edges: vec![] };
        assert_eq!(verify_certificate(&k4, &empty), Err(vec![Violation::Empty]));
    }

    #[test]
    fn json_roundtrip() {
        let cert = BergeCertificate {
            kind: CertificateKind::Cycle,
            vertices: vec![0, 1, 2, 3],
            edges: vec![e(&[3, 0, 1]), e(&[0, 1, 2]), e(&[1, 2, 3]), e(&[2, 3, 0])],
        };
        let text = serde_json::to_string(&cert).unwrap();
        assert_eq!(
            text,
            r#"{"kind":"cycle","vertices":[0,1,2,3],"edges":[[0,1,3],[0,1,2],[1,2,3],[0,2,3]]}"#
        );
        let back: BergeCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
    }
}
