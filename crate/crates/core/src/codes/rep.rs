//! Generalized repetition codes: Δ arms joined by one central hyperedge.

use crate::error::{invalid, Result};
use crate::hypergraph::{EdgeId, TannerHypergraph, VertexId, VertexKind};

/// A one-dimensional chain complex: vertices (some open) and (hyper)edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain1d {
    pub vertex_open: Vec<bool>,
    pub edges: Vec<Vec<VertexId>>,
}

impl Chain1d {
    pub fn num_vertices(&self) -> usize {
        self.vertex_open.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn to_graph(&self) -> TannerHypergraph {
        let kinds = self.vertex_open.iter().map(|&o| if o { VertexKind::Open } else { VertexKind::Interior }).collect();
        TannerHypergraph::new(kinds, self.edges.clone()).expect("chain edges are well formed")
    }

    /// Path with `len` interior vertices and `len - 1` edges, no open ends.
    pub fn closed_path(len: usize) -> Result<Chain1d> {
        if len == 0 {
            return Err(invalid("closed path needs at least one vertex"));
        }
        Ok(Chain1d { vertex_open: vec![false; len], edges: (0..len - 1).map(|i| vec![i, i + 1]).collect() })
    }
}

/// Position of an element along the branched line.
///
/// The central hyperedge sits at position 0 with no arm. Along arm `a`,
/// vertices occupy odd positions `1, 3, ..., L` (the last one open) and chain
/// edges the even positions `2, 4, ..., L - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepCoord {
    pub arm: Option<usize>,
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenRepCode {
    delta: usize,
    length: usize,
    chain: Chain1d,
    graph: TannerHypergraph,
}

pub fn build_gen_rep(delta: usize, length: usize) -> Result<GenRepCode> {
    GenRepCode::new(delta, length)
}

impl GenRepCode {
    pub fn new(delta: usize, length: usize) -> Result<Self> {
        if delta < 2 {
            return Err(invalid(format!("branching degree must be at least 2, got {delta}")));
        }
        if length == 0 || length.is_multiple_of(2) {
            return Err(invalid(format!("length must be odd and at least 1, got {length}")));
        }
        let m = (length - 1) / 2;
        let mut vertex_open = Vec::with_capacity(delta * (m + 1));
        for _ in 0..delta {
            vertex_open.extend(std::iter::repeat_n(false, m));
            vertex_open.push(true);
        }
        let vid = |a: usize, k: usize| a * (m + 1) + (k - 1);
        let mut edges = Vec::with_capacity(1 + delta * m);
        edges.push((0..delta).map(|a| vid(a, 1)).collect());
        for a in 0..delta {
            for k in 1..=m {
                edges.push(vec![vid(a, k), vid(a, k + 1)]);
            }
        }
        let chain = Chain1d { vertex_open, edges };
        let graph = chain.to_graph();
        Ok(GenRepCode { delta, length, chain, graph })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Chain edges per arm.
    pub fn arm_len(&self) -> usize {
        (self.length - 1) / 2
    }

    /// Number of (hyper)edges, which is also the distance.
    pub fn distance(&self) -> usize {
        self.chain.num_edges()
    }

    pub fn graph(&self) -> &TannerHypergraph {
        &self.graph
    }

    pub fn chain(&self) -> &Chain1d {
        &self.chain
    }

    pub const CENTRAL: EdgeId = 0;

    /// Chain edge `k` (1-based, counted from the center) on arm `a`.
    pub fn arm_edge(&self, a: usize, k: usize) -> EdgeId {
        debug_assert!(a < self.delta && (1..=self.arm_len()).contains(&k));
        1 + a * self.arm_len() + (k - 1)
    }

    /// Vertex `k` (1-based from the center) on arm `a`; `k = arm_len + 1` is the open end.
    pub fn arm_vertex(&self, a: usize, k: usize) -> VertexId {
        debug_assert!(a < self.delta && (1..=self.arm_len() + 1).contains(&k));
        a * (self.arm_len() + 1) + (k - 1)
    }

    pub fn open_end(&self, a: usize) -> VertexId {
        self.arm_vertex(a, self.arm_len() + 1)
    }

    pub fn edge_coord(&self, e: EdgeId) -> RepCoord {
        if e == Self::CENTRAL {
            RepCoord { arm: None, pos: 0 }
        } else {
            let m = self.arm_len();
            RepCoord { arm: Some((e - 1) / m), pos: 2 * ((e - 1) % m + 1) }
        }
    }

    pub fn vertex_coord(&self, v: VertexId) -> RepCoord {
        let w = self.arm_len() + 1;
        RepCoord { arm: Some(v / w), pos: 2 * (v % w) + 1 }
    }

    pub fn num_interior_vertices(&self) -> usize {
        self.delta * self.arm_len()
    }
}
