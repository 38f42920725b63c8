//! Exhaustive sweeps over all `r`-graphs on `n` vertices with exactly `m`
//! edges.
//!
//! The `m`-subsets of the edge universe (all `r`-subsets of the vertex set,
//! in colex order) are ranked in colex order too, so any rank interval can be
//! unranked and walked independently. Chunks run on a worker pool and their
//! partial results are merged strictly in rank order, which makes every
//! aggregate independent of the worker count.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{binom, binom_small, BoundsError};
use crate::canon::{is_canonical, CanonError};
use crate::hypergraph::{subsets_of_size, Edge, Hypergraph, HypergraphError};

pub const DEFAULT_CHUNK_SIZE: u128 = 1 << 16;
pub const DEFAULT_BUDGET: u128 = 10_000_000_000;

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error("m = {m} is outside [{min}, {max}] for this level")]
    BadEdgeCount { m: usize, min: usize, max: usize },
    #[error("base hypergraph has (n, r) = ({base_n}, {base_r}), level wants ({n}, {r})")]
    BaseMismatch { n: usize, r: usize, base_n: usize, base_r: usize },
    #[error("level has {size} hypergraphs, budget is {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("reduction plan needs n >= r + 2, got n = {n}, r = {r}")]
    PlanRange { n: usize, r: usize },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelMode {
    AllLabeled,
    /// One representative per isomorphism class.
    CanonicalOnly,
    /// Every `m`-edge supergraph of the base on the same vertex set.
    SupergraphsOf(Hypergraph),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSpec {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub mode: LevelMode,
}

impl LevelSpec {
    pub fn all_labeled(n: usize, r: usize, m: usize) -> Self {
        LevelSpec { n, r, m, mode: LevelMode::AllLabeled }
    }

    pub fn canonical_only(n: usize, r: usize, m: usize) -> Self {
        LevelSpec { n, r, m, mode: LevelMode::CanonicalOnly }
    }

    pub fn supergraphs_of(base: Hypergraph, m: usize) -> Self {
        LevelSpec { n: base.n(), r: base.r(), m, mode: LevelMode::SupergraphsOf(base) }
    }

    fn base(&self) -> Option<&Hypergraph> {
        match &self.mode {
            LevelMode::SupergraphsOf(b) => Some(b),
            _ => None,
        }
    }

    /// Free edges to choose from and how many to choose.
    fn universe(&self) -> Result<(Vec<Edge>, usize), EnumerationError> {
        Hypergraph::empty(self.n, self.r)?;
        let all = subsets_of_size(self.n, self.r).map(Edge::from_mask);
        let total = binom(self.n as u64, self.r as u64)? as usize;
        match self.base() {
            None => {
                if self.m > total {
                    return Err(EnumerationError::BadEdgeCount { m: self.m, min: 0, max: total });
                }
                Ok((all.collect(), self.m))
            }
            Some(base) => {
                if base.n() != self.n || base.r() != self.r {
                    return Err(EnumerationError::BaseMismatch {
                        n: self.n,
                        r: self.r,
                        base_n: base.n(),
                        base_r: base.r(),
                    });
                }
                let have = base.edge_count();
                if self.m < have || self.m > total {
                    return Err(EnumerationError::BadEdgeCount { m: self.m, min: have, max: total });
                }
                Ok((all.filter(|e| !base.contains_edge(*e)).collect(), self.m - have))
            }
        }
    }
}

/// Number of hypergraphs the level walks (labeled count, before any
/// canonical filtering).
pub fn level_size(spec: &LevelSpec) -> Result<u128, EnumerationError> {
    let (universe, k) = spec.universe()?;
    Ok(binom(universe.len() as u64, k as u64)?)
}

/// Half-open rank interval `[lo, hi)` in the colex order of the level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationChunk {
    pub lo: u128,
    pub hi: u128,
}

pub fn chunks(total: u128, chunk_size: u128) -> Vec<EnumerationChunk> {
    let size = chunk_size.max(1);
    let mut out = Vec::new();
    let mut lo = 0;
    while lo < total {
        let hi = (lo + size).min(total);
        out.push(EnumerationChunk { lo, hi });
        lo = hi;
    }
    out
}

/// Colex unranking of a `k`-subset of `0..universe`.
pub fn unrank_colex(mut rank: u128, k: usize, universe: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    let mut upper = universe;
    for i in (1..=k).rev() {
        // largest c < upper with C(c, i) <= rank
        let mut c = upper - 1;
        while binom_small(c, i) > rank {
            c -= 1;
        }
        rank -= binom_small(c, i);
        out[i - 1] = c;
        upper = c;
    }
    out
}

pub fn rank_colex(subset: &[usize]) -> u128 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binom_small(c, i + 1))
        .sum()
}

/// Advances to the colex successor; false after the last subset.
fn next_colex(c: &mut [usize], universe: usize) -> bool {
    let k = c.len();
    for i in 0..k {
        let limit = if i + 1 < k { c[i + 1] } else { universe };
        if c[i] + 1 < limit {
            c[i] += 1;
            for (j, slot) in c.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            return true;
        }
    }
    false
}

/// A mergeable per-hypergraph computation.
///
/// `merge` is always applied in rank order, so it only needs to be
/// associative for results to be deterministic.
pub trait LevelVisitor: Sync {
    type Acc: Send;
    fn init(&self) -> Self::Acc;
    fn visit(&self, h: &Hypergraph, acc: &mut Self::Acc);
    fn merge(&self, into: &mut Self::Acc, other: Self::Acc);
}

#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    /// Worker threads; 1 runs on the calling thread.
    pub jobs: usize,
    pub chunk_size: u128,
    /// Largest level (in labeled hypergraphs) that may be walked.
    pub budget: u128,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { jobs: 1, chunk_size: DEFAULT_CHUNK_SIZE, budget: DEFAULT_BUDGET }
    }
}

struct Walker {
    n: usize,
    r: usize,
    universe: Vec<Edge>,
    k: usize,
    base: Vec<Edge>,
    canonical_only: bool,
}

impl Walker {
    fn run_chunk<V: LevelVisitor>(&self, chunk: EnumerationChunk, visitor: &V) -> Result<V::Acc, EnumerationError> {
        let mut acc = visitor.init();
        if chunk.lo >= chunk.hi {
            return Ok(acc);
        }
        let mut combo = unrank_colex(chunk.lo, self.k, self.universe.len());
        let mut h = Hypergraph::from_sorted_unchecked(self.n, self.r, Vec::with_capacity(self.base.len() + self.k));
        let mut remaining = chunk.hi - chunk.lo;
        loop {
            {
                let edges = h.edges_mut();
                edges.clear();
                if self.base.is_empty() {
                    edges.extend(combo.iter().map(|&i| self.universe[i]));
                } else {
                    edges.extend(self.base.iter().copied());
                    edges.extend(combo.iter().map(|&i| self.universe[i]));
                    edges.sort_unstable();
                }
            }
            if !self.canonical_only || is_canonical(&h)? {
                visitor.visit(&h, &mut acc);
            }
            remaining -= 1;
            if remaining == 0 {
                break;
            }
            let advanced = next_colex(&mut combo, self.universe.len());
            debug_assert!(advanced);
        }
        Ok(acc)
    }
}

/// Walks the level, reporting each chunk's partial result in rank order.
pub fn enumerate_with_progress<V, F>(
    spec: &LevelSpec,
    visitor: &V,
    opts: &EnumOptions,
    mut progress: F,
) -> Result<V::Acc, EnumerationError>
where
    V: LevelVisitor,
    F: FnMut(&EnumerationChunk, &V::Acc),
{
    let (universe, k) = spec.universe()?;
    let size = binom(universe.len() as u64, k as u64)?;
    if size > opts.budget {
        return Err(EnumerationError::BudgetExceeded { size, budget: opts.budget });
    }
    if matches!(spec.mode, LevelMode::CanonicalOnly) {
        Hypergraph::empty(spec.n, spec.r)?;
        if spec.n > crate::canon::MAX_CANON_VERTICES {
            return Err(CanonError { n: spec.n, max: crate::canon::MAX_CANON_VERTICES }.into());
        }
    }
    let walker = Walker {
        n: spec.n,
        r: spec.r,
        universe,
        k,
        base: spec.base().map(|b| b.edges().to_vec()).unwrap_or_default(),
        canonical_only: matches!(spec.mode, LevelMode::CanonicalOnly),
    };
    let all_chunks = chunks(size, opts.chunk_size);
    let mut total = visitor.init();
    if opts.jobs <= 1 {
        for chunk in &all_chunks {
            let acc = walker.run_chunk(*chunk, visitor)?;
            progress(chunk, &acc);
            visitor.merge(&mut total, acc);
        }
        return Ok(total);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| EnumerationError::Pool(e.to_string()))?;
    for batch in all_chunks.chunks(opts.jobs * 4) {
        let results: Vec<Result<V::Acc, EnumerationError>> =
            pool.install(|| batch.par_iter().map(|c| walker.run_chunk(*c, visitor)).collect());
        for (chunk, acc) in batch.iter().zip(results) {
            let acc = acc?;
            progress(chunk, &acc);
            visitor.merge(&mut total, acc);
        }
    }
    Ok(total)
}

pub fn enumerate<V: LevelVisitor>(spec: &LevelSpec, visitor: &V, opts: &EnumOptions) -> Result<V::Acc, EnumerationError> {
    enumerate_with_progress(spec, visitor, opts, |_, _| {})
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelPurpose {
    /// `m = C(n-1, r)`: non-traceable graphs must be copies of `K_{n-1}^r + v`.
    PathThreshold,
    /// `m = C(n-1, r) + 1`: non-Hamiltonian graphs must be copies of `K_{n-1}^r + e`.
    CycleThreshold,
    /// `m = C(n-1, r) + 2`, supergraphs of the exceptions found one level down:
    /// all must be Hamiltonian.
    CycleRestricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlannedMode {
    AllLabeled,
    SupergraphsOfExceptions,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlannedLevel {
    pub m: usize,
    pub mode: PlannedMode,
    pub purpose: LevelPurpose,
    /// Labeled size for full levels; restricted sizes depend on the exceptions.
    pub size: Option<u128>,
}

/// The levels whose exhaustive check settles the edge-count theorem for
/// every `m`.
///
/// Deleting an edge cannot create a Hamiltonian Berge cycle, so the
/// non-Hamiltonian graphs form a down-set. Any non-Hamiltonian graph with at
/// least `t + 2` edges (`t = C(n-1, r)`) therefore contains one with exactly
/// `t + 2` edges, which in turn contains one with `t + 1` edges: an exception
/// of the threshold level. Checking the full level `t + 1` and the
/// supergraphs of its exceptions at `t + 2` covers all `m > t`. The path
/// statement needs level `t` only, since above it a Hamiltonian cycle (or
/// the explicit path of `K_{n-1}^r + e`) supplies a path.
pub fn monotone_reduction_plan(n: usize, r: usize) -> Result<Vec<PlannedLevel>, EnumerationError> {
    if r < 2 || n < r + 2 {
        return Err(EnumerationError::PlanRange { n, r });
    }
    Hypergraph::empty(n, r)?;
    let t = binom(n as u64 - 1, r as u64)? as usize;
    let size = |m: usize| level_size(&LevelSpec::all_labeled(n, r, m)).ok();
    Ok(vec![
        PlannedLevel { m: t, mode: PlannedMode::AllLabeled, purpose: LevelPurpose::PathThreshold, size: size(t) },
        PlannedLevel { m: t + 1, mode: PlannedMode::AllLabeled, purpose: LevelPurpose::CycleThreshold, size: size(t + 1) },
        PlannedLevel {
            m: t + 2,
            mode: PlannedMode::SupergraphsOfExceptions,
            purpose: LevelPurpose::CycleRestricted,
            size: None,
        },
    ])
}
