//! Exact canonical forms by pruned permutation search.
//!
//! Vertices are first split into classes by an isomorphism-invariant key
//! (degree, then the summed degrees of incident edges). Only relabelings that
//! list the classes in key order are tried, and the canonical code is the
//! lexicographically least sorted edge-mask list among them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{relabel_mask, Hypergraph};

/// Largest `n` accepted by the exact canonicalizer.
pub const MAX_CANON_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("canonical form needs n <= {max}, got n = {n}")]
pub struct CanonError {
    pub n: usize,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub r: usize,
    pub code: Vec<u64>,
}

impl CanonicalForm {
    /// The canonical representative as a hypergraph.
    pub fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph::from_sorted_unchecked(
            self.n,
            self.r,
            self.code.iter().map(|&m| crate::hypergraph::Edge::from_mask(m)).collect(),
        )
    }
}

/// Vertex classes in canonical order.
fn vertex_classes(h: &Hypergraph) -> Vec<Vec<usize>> {
    let deg = h.degrees();
    let mut weight = vec![0usize; h.n()];
    for e in h.edges() {
        let s: usize = e.vertices().map(|v| deg[v]).sum();
        for v in e.vertices() {
            weight[v] += s;
        }
    }
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&v| (deg[v], weight[v], v));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut last = None;
    for v in order {
        let key = (deg[v], weight[v]);
        if last != Some(key) {
            classes.push(Vec::new());
            last = Some(key);
        }
        classes.last_mut().unwrap().push(v);
    }
    classes
}

struct Search<'a> {
    edges: Vec<u64>,
    slots: Vec<&'a [usize]>,
    perm: Vec<usize>,
    used: u64,
    scratch: Vec<u64>,
}

impl Search<'_> {
    /// Visits every class-respecting permutation; `f` returns false to stop.
    fn run(&mut self, pos: usize, f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        if pos == self.slots.len() {
            self.scratch.clear();
            self.scratch.extend(self.edges.iter().map(|&m| relabel_mask(m, &self.perm)));
            self.scratch.sort_unstable();
            return f(&self.scratch);
        }
        let candidates = self.slots[pos];
        for &v in candidates {
            if self.used & (1u64 << v) != 0 {
                continue;
            }
            self.used |= 1u64 << v;
            self.perm[v] = pos;
            let go_on = self.run(pos + 1, f);
            self.used &= !(1u64 << v);
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn with_search<R>(h: &Hypergraph, body: impl FnOnce(&mut Search<'_>) -> R) -> Result<R, CanonError> {
    if h.n() > MAX_CANON_VERTICES {
        return Err(CanonError { n: h.n(), max: MAX_CANON_VERTICES });
    }
    let classes = vertex_classes(h);
    let slots: Vec<&[usize]> = classes.iter().flat_map(|c| std::iter::repeat_n(c.as_slice(), c.len())).collect();
    let mut search = Search {
        edges: h.edges().iter().map(|e| e.mask()).collect(),
        slots,
        perm: vec![0; h.n()],
        used: 0,
        scratch: Vec::with_capacity(h.edge_count()),
    };
    Ok(body(&mut search))
}

/// Exact canonical form; equal codes iff the hypergraphs are isomorphic.
pub fn canonical_form(h: &Hypergraph) -> Result<CanonicalForm, CanonError> {
    let mut best: Option<Vec<u64>> = None;
    with_search(h, |s| {
        s.run(0, &mut |code| {
            if best.as_deref().is_none_or(|b| code < b) {
                best = Some(code.to_vec());
            }
            true
        });
    })?;
    Ok(CanonicalForm { n: h.n(), r: h.r(), code: best.unwrap_or_default() })
}

/// True iff `h` is its own canonical form, i.e. the chosen representative of
/// its isomorphism class.
pub fn is_canonical(h: &Hypergraph) -> Result<bool, CanonError> {
    if h.n() > MAX_CANON_VERTICES {
        return Err(CanonError { n: h.n(), max: MAX_CANON_VERTICES });
    }
    // The representative's labels list the classes in order.
    let mut next = 0;
    for class in vertex_classes(h) {
        let mask: u64 = class.iter().fold(0, |m, &v| m | (1u64 << v));
        if mask != ((1u64 << class.len()) - 1) << next {
            return Ok(false);
        }
        next += class.len();
    }
    let own: Vec<u64> = h.edges().iter().map(|e| e.mask()).collect();
    with_search(h, |s| {
        let mut minimal = true;
        s.run(0, &mut |code| {
            minimal = code >= own.as_slice();
            minimal
        });
        minimal
    })
}

/// Number of automorphisms, by trying every permutation.
pub fn automorphism_count(h: &Hypergraph) -> Result<u64, CanonError> {
    if h.n() > MAX_CANON_VERTICES {
        return Err(CanonError { n: h.n(), max: MAX_CANON_VERTICES });
    }
    let own: Vec<u64> = h.edges().iter().map(|e| e.mask()).collect();
    let mut perm: Vec<usize> = (0..h.n()).collect();
    let mut image = Vec::with_capacity(own.len());
    let mut count = 0;
    loop {
        image.clear();
        image.extend(own.iter().map(|&m| relabel_mask(m, &perm)));
        image.sort_unstable();
        if image == own {
            count += 1;
        }
        if !crate::berge::oracle::next_permutation(&mut perm) {
            return Ok(count);
        }
    }
}

/// Number of distinct labeled hypergraphs on the same vertex set that are
/// isomorphic to `h`, i.e. `n! / |Aut(h)|`.
pub fn labeled_copy_count(h: &Hypergraph) -> Result<u64, CanonError> {
    let factorial: u64 = (1..=h.n() as u64).product();
    Ok(factorial / automorphism_count(h)?)
}
