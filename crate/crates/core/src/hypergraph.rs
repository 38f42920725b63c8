//! Uniform hypergraphs on at most 64 vertices.
//!
//! Edges are stored as vertex bitmasks, so containment and intersection are
//! single machine operations. A [`Hypergraph`] keeps its edges sorted by mask
//! value (which is colex order on the underlying vertex sets) and free of
//! duplicates; every constructor enforces that.

use std::fmt;

use thiserror::Error;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// Index of a vertex inside its host hypergraph.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("uniformity r = {r} must satisfy 2 <= r <= n = {n}")]
    BadUniformity { n: usize, r: usize },
    #[error("n = {0} exceeds the supported maximum of 64 vertices")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge:?} has {found} distinct members, expected {r}")]
    WrongEdgeSize { edge: Vec<usize>, found: usize, r: usize },
    #[error("{m} edges requested, only {max} exist")]
    TooManyEdges { m: usize, max: usize },
    #[error("construction needs r < n, got n = {n}, r = {r}")]
    NeedsSpareVertex { n: usize, r: usize },
}

/// An edge: a set of vertices encoded as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Edge(u64);

impl Edge {
    pub const fn from_mask(mask: u64) -> Self {
        Edge(mask)
    }

    /// Builds an edge from vertex ids; duplicates collapse.
    ///
    /// Ids must be below 64; the caller validates them against `n`.
    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(vertices: I) -> Self {
        Edge(vertices.into_iter().fold(0u64, |acc, v| acc | (1u64 << v)))
    }

    #[inline]
    pub const fn mask(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn contains(self, v: VertexId) -> bool {
        v < 64 && self.0 & (1u64 << v) != 0
    }

    /// Members in ascending order.
    pub fn vertices(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<VertexId> {
        self.vertices().collect()
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.vertices()).finish()
    }
}

/// Iterator over the members of an [`Edge`].
#[derive(Clone)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = VertexId;

    #[inline]
    fn next(&mut self) -> Option<VertexId> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Members {}

/// All `k`-subsets of `{0..n}` as masks, in increasing numeric (colex) order.
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << n;
    let first: u128 = if k > n { limit } else { (1u128 << k) - 1 };
    let mut cur = Some(first).filter(|&c| c < limit || (k == 0 && n == 0));
    std::iter::from_fn(move || {
        let c = cur?;
        if k == 0 {
            cur = None;
            return Some(0);
        }
        // Gosper's hack
        let low = c & c.wrapping_neg();
        let ripple = c + low;
        let next = (((ripple ^ c) >> 2) / low) | ripple;
        cur = Some(next).filter(|&x| x < limit);
        Some(c as u64)
    })
}

/// An `r`-uniform hypergraph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<Edge>,
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(n={}, r={}, ", self.n, self.r)?;
        f.debug_list().entries(&self.edges).finish()?;
        write!(f, ")")
    }
}

fn check_params(n: usize, r: usize) -> Result<(), HypergraphError> {
    if n > MAX_VERTICES {
        return Err(HypergraphError::TooManyVertices(n));
    }
    if r < 2 || r > n {
        return Err(HypergraphError::BadUniformity { n, r });
    }
    Ok(())
}

impl Hypergraph {
    /// Validates and builds a hypergraph from vertex lists, deduplicating edges.
    pub fn new<E, I>(n: usize, r: usize, edges: E) -> Result<Self, HypergraphError>
    where
        E: IntoIterator<Item = I>,
        I: IntoIterator<Item = VertexId>,
    {
        check_params(n, r)?;
        let mut masks = Vec::new();
        for edge in edges {
            let members: Vec<VertexId> = edge.into_iter().collect();
            if let Some(&bad) = members.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange { vertex: bad, n });
            }
            let e = Edge::from_vertices(members.iter().copied());
            if e.len() != r || members.len() != r {
                return Err(HypergraphError::WrongEdgeSize {
                    edge: members,
                    found: e.len(),
                    r,
                });
            }
            masks.push(e);
        }
        masks.sort_unstable();
        masks.dedup();
        Ok(Hypergraph { n, r, edges: masks })
    }

    /// Builds a hypergraph from raw edges, validating sizes and range.
    pub fn from_edges(n: usize, r: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, HypergraphError> {
        check_params(n, r)?;
        let range = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut masks: Vec<Edge> = Vec::new();
        for e in edges {
            if e.mask() & !range != 0 {
                let vertex = (e.mask() & !range).trailing_zeros() as usize;
                return Err(HypergraphError::VertexOutOfRange { vertex, n });
            }
            if e.len() != r {
                return Err(HypergraphError::WrongEdgeSize { edge: e.to_vec(), found: e.len(), r });
            }
            masks.push(e);
        }
        masks.sort_unstable();
        masks.dedup();
        Ok(Hypergraph { n, r, edges: masks })
    }

    /// Caller guarantees the edges are valid, sorted and distinct.
    pub(crate) fn from_sorted_unchecked(n: usize, r: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|e| e.len() == r));
        Hypergraph { n, r, edges }
    }

    /// Buffer reuse for enumeration; same contract as `from_sorted_unchecked`.
    pub(crate) fn edges_mut(&mut self) -> &mut Vec<Edge> {
        &mut self.edges
    }

    /// Hypergraph with no edges.
    pub fn empty(n: usize, r: usize) -> Result<Self, HypergraphError> {
        check_params(n, r)?;
        Ok(Hypergraph { n, r, edges: Vec::new() })
    }

    /// The complete `r`-graph `K_n^r`.
    pub fn complete(n: usize, r: usize) -> Result<Self, HypergraphError> {
        check_params(n, r)?;
        let edges = subsets_of_size(n, r).map(Edge).collect();
        Ok(Hypergraph { n, r, edges })
    }

    /// Uniformly random `r`-graph with exactly `m` edges.
    pub fn random<R: rand::Rng + ?Sized>(n: usize, r: usize, m: usize, rng: &mut R) -> Result<Self, HypergraphError> {
        check_params(n, r)?;
        let universe: Vec<u64> = subsets_of_size(n, r).collect();
        if m > universe.len() {
            return Err(HypergraphError::TooManyEdges { m, max: universe.len() });
        }
        let mut edges: Vec<Edge> = rand::seq::index::sample(rng, universe.len(), m)
            .into_iter()
            .map(|i| Edge(universe[i]))
            .collect();
        edges.sort_unstable();
        Ok(Hypergraph { n, r, edges })
    }

    /// `K_{n-1}^r + v`: a clique on `0..n-1` and the isolated vertex `n-1`.
    pub fn clique_plus_isolated(n: usize, r: usize) -> Result<Self, HypergraphError> {
        check_params(n, r)?;
        if r >= n {
            return Err(HypergraphError::NeedsSpareVertex { n, r });
        }
        let edges = subsets_of_size(n - 1, r).map(Edge).collect();
        Ok(Hypergraph { n, r, edges })
    }

    /// `K_{n-1}^r + e`: the clique on `0..n-1` plus the pendant edge
    /// `{0, .., r-2, n-1}`.
    pub fn clique_plus_pendant(n: usize, r: usize) -> Result<Self, HypergraphError> {
        let mut h = Self::clique_plus_isolated(n, r)?;
        let pendant = Edge::from_vertices((0..r - 1).chain(std::iter::once(n - 1)));
        h.edges.push(pendant);
        h.edges.sort_unstable();
        Ok(h)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Number of edges `|H|`.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Bitmask of all vertices.
    pub fn vertex_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        assert!(v < self.n, "vertex {v} out of range for n = {}", self.n);
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for v in e.vertices() {
                d[v] += 1;
            }
        }
        d
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// Number of edges meeting `u` or `v`.
    pub fn pair_span(&self, u: VertexId, v: VertexId) -> usize {
        let pair = (1u64 << u) | (1u64 << v);
        self.edges.iter().filter(|e| e.mask() & pair != 0).count()
    }

    /// Adds an edge, returning a new hypergraph. Existing edges are ignored.
    pub fn with_edge(&self, e: Edge) -> Result<Self, HypergraphError> {
        Self::from_edges(self.n, self.r, self.edges.iter().copied().chain(std::iter::once(e)))
    }

    /// `H - v`, relabeled onto `0..n-1`.
    ///
    /// The returned map sends old vertex ids to new ones (`None` for `v`).
    pub fn remove_vertex(&self, v: VertexId) -> Result<(Self, Vec<Option<VertexId>>), HypergraphError> {
        if v >= self.n {
            return Err(HypergraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        check_params(self.n - 1, self.r)?;
        let map: Vec<Option<VertexId>> = (0..self.n)
            .map(|u| match u.cmp(&v) {
                std::cmp::Ordering::Less => Some(u),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(u - 1),
            })
            .collect();
        let low = (1u64 << v) - 1;
        let edges = self
            .edges
            .iter()
            .filter(|e| !e.contains(v))
            .map(|e| Edge((e.mask() & low) | ((e.mask() >> 1) & !low)))
            .collect::<Vec<_>>();
        // Dropping a bit preserves the relative order of masks that avoid it.
        Ok((Self::from_sorted_unchecked(self.n - 1, self.r, edges), map))
    }

    /// Applies the vertex permutation `perm` (old id -> new id).
    pub fn relabel(&self, perm: &[VertexId]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut edges: Vec<Edge> = self.edges.iter().map(|&e| Edge(relabel_mask(e.mask(), perm))).collect();
        edges.sort_unstable();
        Hypergraph { n: self.n, r: self.r, edges }
    }

    /// Vertex sets of the connected components of the shadow graph.
    ///
    /// Vertices lying in no edge form singleton components.
    pub fn components(&self) -> Vec<u64> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let mut it = e.vertices();
            if let Some(first) = it.next() {
                let a = find(&mut parent, first);
                for v in it {
                    let b = find(&mut parent, v);
                    if a != b {
                        parent[b] = a;
                    }
                }
            }
        }
        let mut comps: Vec<u64> = Vec::new();
        let mut root_index = vec![usize::MAX; self.n];
        for v in 0..self.n {
            let root = find(&mut parent, v);
            if root_index[root] == usize::MAX {
                root_index[root] = comps.len();
                comps.push(0);
            }
            comps[root_index[root]] |= 1u64 << v;
        }
        comps
    }

    /// Adjacency masks of the shadow graph (pairs covered by some edge).
    pub fn shadow(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for e in &self.edges {
            for v in e.vertices() {
                adj[v] |= e.mask();
            }
        }
        for (v, a) in adj.iter_mut().enumerate() {
            *a &= !(1u64 << v);
        }
        adj
    }

    pub fn edge_lists(&self) -> Vec<Vec<VertexId>> {
        self.edges.iter().map(|e| e.to_vec()).collect()
    }
}

#[inline]
pub(crate) fn relabel_mask(mut mask: u64, perm: &[VertexId]) -> u64 {
    let mut out = 0u64;
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        out |= 1u64 << perm[v];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(a: usize, b: usize) -> usize {
        if b > a {
            return 0;
        }
        (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
    }

    #[test]
    fn new_dedups_and_validates() {
        let k4 = Hypergraph::new(4, 3, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap();
        assert_eq!(k4.edge_count(), 4);
        let h = Hypergraph::new(5, 3, [[0, 1, 2], [0, 1, 2]]).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(
            Hypergraph::new(5, 3, [[0, 1, 5]]),
            Err(HypergraphError::VertexOutOfRange { vertex: 5, n: 5 })
        );
        assert!(matches!(
            Hypergraph::new(5, 3, [vec![0, 1]]),
            Err(HypergraphError::WrongEdgeSize { .. })
        ));
        assert!(matches!(
            Hypergraph::new(5, 3, [vec![0, 1, 1]]),
            Err(HypergraphError::WrongEdgeSize { .. })
        ));
        assert!(matches!(Hypergraph::new(3, 4, Vec::<Vec<usize>>::new()), Err(HypergraphError::BadUniformity { .. })));
        assert!(matches!(Hypergraph::empty(65, 3), Err(HypergraphError::TooManyVertices(65))));
    }

    #[test]
    fn complete_counts() {
        assert_eq!(Hypergraph::complete(5, 3).unwrap().edge_count(), 10);
        assert_eq!(Hypergraph::complete(4, 4).unwrap().edge_count(), 1);
        assert_eq!(Hypergraph::complete(6, 4).unwrap().edge_count(), 15);
        assert!(Hypergraph::complete(3, 4).is_err());
        for n in 2..=9 {
            for r in 2..=n {
                assert_eq!(Hypergraph::complete(n, r).unwrap().edge_count(), binom(n, r));
            }
        }
    }

    #[test]
    fn exceptional_constructions() {
        let kv = Hypergraph::clique_plus_isolated(6, 3).unwrap();
        assert_eq!(kv.edge_count(), 10);
        assert_eq!(kv.degree(5), 0);
        assert_eq!(Hypergraph::clique_plus_isolated(5, 3).unwrap().edge_count(), 4);
        assert!(matches!(
            Hypergraph::clique_plus_isolated(4, 4),
            Err(HypergraphError::NeedsSpareVertex { .. })
        ));

        let ke = Hypergraph::clique_plus_pendant(6, 3).unwrap();
        assert_eq!(ke.edge_count(), 11);
        let ke5 = Hypergraph::clique_plus_pendant(5, 3).unwrap();
        assert_eq!(ke5.edge_count(), 5);
        assert_eq!(ke5.degree(4), 1);
        assert!(ke5.contains_edge(Edge::from_vertices([0, 1, 4])));
    }

    #[test]
    fn degrees() {
        let k5 = Hypergraph::complete(5, 3).unwrap();
        assert!((0..5).all(|v| k5.degree(v) == 6));
        assert_eq!(Hypergraph::clique_plus_isolated(6, 3).unwrap().min_degree(), 0);
        assert_eq!(Hypergraph::clique_plus_pendant(6, 3).unwrap().min_degree(), 1);
    }

    #[test]
    fn remove_vertex_examples() {
        let k5 = Hypergraph::complete(5, 3).unwrap();
        let (h, map) = k5.remove_vertex(0).unwrap();
        assert_eq!(h, Hypergraph::complete(4, 3).unwrap());
        assert_eq!(map, vec![None, Some(0), Some(1), Some(2), Some(3)]);

        let ke = Hypergraph::clique_plus_pendant(6, 3).unwrap();
        let (h, _) = ke.remove_vertex(5).unwrap();
        assert_eq!(h, Hypergraph::complete(5, 3).unwrap());

        let (h, _) = ke.remove_vertex(1).unwrap();
        assert_eq!(h.edge_count(), ke.edge_count() - ke.degree(1));
        assert!(h.edges().iter().all(|e| e.len() == 3));
        assert!(h.edges().windows(2).all(|w| w[0] < w[1]));

        assert!(Hypergraph::complete(4, 4).unwrap().remove_vertex(0).is_err());
        assert!(k5.remove_vertex(5).is_err());
    }

    #[test]
    fn components_and_shadow() {
        let kv = Hypergraph::clique_plus_isolated(6, 3).unwrap();
        assert_eq!(kv.components(), vec![0b11111, 0b100000]);
        let h = Hypergraph::new(6, 2, [[0, 1], [2, 3]]).unwrap();
        assert_eq!(h.components(), vec![0b11, 0b1100, 0b10000, 0b100000]);
        assert_eq!(h.shadow()[0], 0b10);
    }

    #[test]
    fn gosper_subsets() {
        let all: Vec<u64> = subsets_of_size(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(subsets_of_size(64, 64).count(), 1);
        assert_eq!(subsets_of_size(64, 1).count(), 64);
        assert_eq!(subsets_of_size(3, 4).count(), 0);
    }
}
