//! Union-Find decoding for graph codes with boundary.
//!
//! Both variants grow every unsatisfiable cluster by half an edge per round
//! from each of its boundary vertices, fuse clusters whose growth completes
//! an edge, and finally peel the grown erasure. A cluster is satisfiable
//! when its defect parity is even or it has grown into the boundary.

use serde::Serialize;

use crate::error::{invalid, LocqError, Result};
use crate::hypergraph::{EdgeId, Erasure, PauliXError, Syndrome, TannerHypergraph, VertexId};
use crate::peeling::decode_erasure_with_ops;

pub(crate) const GROWN: u8 = 2;
const NIL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UfStats {
    pub rounds: usize,
    /// Sum over rounds of the number of growing clusters.
    pub growth_steps: usize,
    /// Largest number of rounds any single vertex spent growing.
    pub max_boundary_rounds: usize,
    pub ops: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UfOutcome {
    pub correction: PauliXError,
    pub grown: Erasure,
    pub stats: UfStats,
}

/// One cluster as seen by a decoder at the end of a round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClusterSummary {
    pub min_vertex: VertexId,
    pub size: usize,
    pub satisfiable: bool,
}

/// Per-round cluster classifications, starting with the initial erasure.
pub type Trace = Vec<Vec<ClusterSummary>>;

fn check_inputs(graph: &TannerHypergraph, erasure: &Erasure, syndrome: &Syndrome) -> Result<()> {
    graph.check_syndrome(syndrome)?;
    graph.check_error(&erasure.as_error())?;
    if graph.max_arity() > 2 {
        return Err(invalid("surface Union-Find needs a graph with arity-2 edges"));
    }
    Ok(())
}

/// Union-find forest over interior vertices with per-root parity, boundary
/// status and an intrusive boundary list, plus the edge support table.
#[derive(Clone, Debug)]
pub struct ClusterForest {
    parent: Vec<u32>,
    size: Vec<u32>,
    parity: Vec<bool>,
    boundary: Vec<bool>,
    support: Vec<u8>,
    list_head: Vec<u32>,
    list_tail: Vec<u32>,
    list_next: Vec<u32>,
    ops: u64,
}

impl ClusterForest {
    pub fn new(num_vertices: usize, num_edges: usize) -> Self {
        ClusterForest {
            parent: (0..num_vertices as u32).collect(),
            size: vec![1; num_vertices],
            parity: vec![false; num_vertices],
            boundary: vec![false; num_vertices],
            support: vec![0; num_edges],
            list_head: (0..num_vertices as u32).collect(),
            list_tail: (0..num_vertices as u32).collect(),
            list_next: vec![NIL; num_vertices],
            ops: 0,
        }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.size.fill(1);
        self.parity.fill(false);
        self.boundary.fill(false);
        self.support.fill(0);
        for (i, (h, t)) in self.list_head.iter_mut().zip(self.list_tail.iter_mut()).enumerate() {
            *h = i as u32;
            *t = i as u32;
        }
        self.list_next.fill(NIL);
        self.ops = 0;
    }

    pub fn find(&mut self, v: VertexId) -> VertexId {
        let mut v = v as u32;
        while self.parent[v as usize] != v {
            let g = self.parent[self.parent[v as usize] as usize];
            self.parent[v as usize] = g;
            v = g;
            self.ops += 1;
        }
        v as usize
    }

    /// Joins two roots; the larger tree (then the smaller id) stays root.
    pub fn union_roots(&mut self, a: VertexId, b: VertexId) -> VertexId {
        if a == b {
            return a;
        }
        let (big, small) = match self.size[a].cmp(&self.size[b]) {
            std::cmp::Ordering::Greater => (a, b),
            std::cmp::Ordering::Less => (b, a),
            std::cmp::Ordering::Equal => (a.min(b), a.max(b)),
        };
        self.ops += 1;
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.parity[big] ^= self.parity[small];
        self.boundary[big] |= self.boundary[small];
        self.append_list(big, small);
        big
    }

    fn append_list(&mut self, into: usize, from: usize) {
        let head = self.list_head[from];
        if head == NIL {
            return;
        }
        if self.list_head[into] == NIL {
            self.list_head[into] = head;
        } else {
            let tail = self.list_tail[into] as usize;
            self.list_next[tail] = head;
        }
        self.list_tail[into] = self.list_tail[from];
        self.list_head[from] = NIL;
        self.list_tail[from] = NIL;
    }

    pub fn size(&self, root: VertexId) -> usize {
        self.size[root] as usize
    }

    pub fn parity(&self, root: VertexId) -> bool {
        self.parity[root]
    }

    pub fn boundary(&self, root: VertexId) -> bool {
        self.boundary[root]
    }

    pub fn support(&self, e: EdgeId) -> u8 {
        self.support[e]
    }

    pub fn boundary_list(&self, root: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut v = self.list_head[root];
        while v != NIL {
            out.push(v as usize);
            v = self.list_next[v as usize];
        }
        out
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }

    fn is_satisfiable(&self, root: usize) -> bool {
        !self.parity[root] || self.boundary[root]
    }

    /// Unions the interior ends of a grown edge and records boundary contact.
    fn fuse(&mut self, graph: &TannerHypergraph, e: EdgeId) {
        let mut root = None;
        for v in graph.interior_of(e) {
            let r = self.find(v);
            root = Some(match root {
                None => r,
                Some(prev) => self.union_roots(prev, r),
            });
        }
        if let Some(r) = root {
            if graph.is_boundary_edge(e) {
                self.boundary[r] = true;
            }
        }
    }

    /// Drops vertices whose incident edges are all grown.
    fn prune(&mut self, graph: &TannerHypergraph, root: usize) {
        let mut v = self.list_head[root];
        let (mut head, mut tail) = (NIL, NIL);
        while v != NIL {
            let next = self.list_next[v as usize];
            self.ops += 1;
            let keep = graph.incident(v as usize).iter().any(|&e| self.support[e] < GROWN);
            if keep {
                self.list_next[v as usize] = NIL;
                if head == NIL {
                    head = v;
                } else {
                    self.list_next[tail as usize] = v;
                }
                tail = v;
            }
            v = next;
        }
        self.list_head[root] = head;
        self.list_tail[root] = tail;
    }
}

/// Reusable almost-linear decoder bound to one graph.
pub struct UfDecoder<'g> {
    graph: &'g TannerHypergraph,
    forest: ClusterForest,
    rounds_as_boundary: Vec<u16>,
}

impl<'g> UfDecoder<'g> {
    pub fn new(graph: &'g TannerHypergraph) -> Self {
        UfDecoder {
            graph,
            forest: ClusterForest::new(graph.num_vertices(), graph.num_edges()),
            rounds_as_boundary: vec![0; graph.num_vertices()],
        }
    }

    pub fn reset(&mut self) {
        self.forest.reset();
        self.rounds_as_boundary.fill(0);
    }

    pub fn forest(&self) -> &ClusterForest {
        &self.forest
    }

    pub fn decode(
        &mut self,
        erasure: &Erasure,
        syndrome: &Syndrome,
        mut trace: Option<&mut Trace>,
    ) -> Result<UfOutcome> {
        check_inputs(self.graph, erasure, syndrome)?;
        self.reset();
        let graph = self.graph;
        let f = &mut self.forest;
        for v in syndrome.iter() {
            f.parity[v] = true;
        }
        for e in erasure.iter() {
            f.support[e] = GROWN;
        }
        for e in erasure.iter() {
            f.fuse(graph, e);
        }
        let mut roots: Vec<usize> = syndrome.iter().map(|v| f.find(v)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.retain(|&r| !f.is_satisfiable(r));
        let mut stats = UfStats::default();
        if let Some(t) = trace.as_deref_mut() {
            t.push(summarize(graph, f, syndrome, &roots));
        }

        let mut fusion = Vec::new();
        while !roots.is_empty() {
            stats.rounds += 1;
            stats.growth_steps += roots.len();
            fusion.clear();
            for &u in &roots {
                let mut v = f.list_head[u];
                while v != NIL {
                    let vu = v as usize;
                    let mut grew = false;
                    for &e in graph.incident(vu) {
                        f.ops += 1;
                        if f.support[e] < GROWN {
                            grew = true;
                            f.support[e] += 1;
                            if f.support[e] == GROWN {
                                fusion.push(e);
                            }
                        }
                    }
                    if grew {
                        self.rounds_as_boundary[vu] += 1;
                    }
                    v = f.list_next[vu];
                }
            }
            for &e in &fusion {
                f.fuse(graph, e);
            }
            for r in roots.iter_mut() {
                *r = f.find(*r);
            }
            roots.sort_unstable();
            roots.dedup();
            for &r in &roots {
                f.prune(graph, r);
            }
            roots.retain(|&r| !f.is_satisfiable(r));
            if let Some(&stuck) = roots.iter().find(|&&r| f.list_head[r] == NIL) {
                return Err(LocqError::Unsatisfiable(format!("cluster at {stuck} cannot grow further")));
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push(summarize(graph, f, syndrome, &roots));
            }
        }

        let grown = Erasure::from_union((0..graph.num_edges()).filter(|&e| f.support[e] >= GROWN));
        let mut ops = f.ops;
        let correction = decode_erasure_with_ops(graph, &grown, syndrome, true, &mut ops)?;
        stats.ops = ops;
        stats.max_boundary_rounds = self.rounds_as_boundary.iter().copied().max().unwrap_or(0) as usize;
        Ok(UfOutcome { correction, grown, stats })
    }
}

fn summarize(
    graph: &TannerHypergraph,
    f: &mut ClusterForest,
    syndrome: &Syndrome,
    growing: &[usize],
) -> Vec<ClusterSummary> {
    let nv = graph.num_vertices();
    let mut min_vertex = vec![usize::MAX; nv];
    let mut active = vec![false; nv];
    for v in graph.interior_vertices() {
        let r = f.find(v);
        min_vertex[r] = min_vertex[r].min(v);
        if syndrome.contains(v) || graph.incident(v).iter().any(|&e| f.support[e] >= GROWN) {
            active[r] = true;
        }
    }
    let mut out: Vec<ClusterSummary> = (0..nv)
        .filter(|&r| active[r] && f.parent[r] as usize == r)
        .map(|r| ClusterSummary {
            min_vertex: min_vertex[r],
            size: f.size(r),
            satisfiable: growing.binary_search(&r).is_err(),
        })
        .collect();
    out.sort_unstable();
    out
}

/// Almost-linear Union-Find decoder.
pub fn decode_uf_fast(graph: &TannerHypergraph, erasure: &Erasure, syndrome: &Syndrome) -> Result<UfOutcome> {
    UfDecoder::new(graph).decode(erasure, syndrome, None)
}

/// Reference decoder that recomputes every cluster from scratch each round.
pub fn decode_uf_naive(graph: &TannerHypergraph, erasure: &Erasure, syndrome: &Syndrome) -> Result<UfOutcome> {
    decode_uf_naive_traced(graph, erasure, syndrome, None)
}

pub fn decode_uf_naive_traced(
    graph: &TannerHypergraph,
    erasure: &Erasure,
    syndrome: &Syndrome,
    mut trace: Option<&mut Trace>,
) -> Result<UfOutcome> {
    check_inputs(graph, erasure, syndrome)?;
    let nv = graph.num_vertices();
    let mut support = vec![0u8; graph.num_edges()];
    for e in erasure.iter() {
        support[e] = GROWN;
    }
    let defect = syndrome.to_mask(nv);
    let mut stats = UfStats::default();
    let mut rounds_as_boundary = vec![0usize; nv];
    loop {
        let clusters = naive_clusters(graph, &support, &defect);
        let unsat: Vec<&NaiveCluster> = clusters.iter().filter(|c| c.parity && !c.boundary).collect();
        if let Some(t) = trace.as_deref_mut() {
            let mut round: Vec<ClusterSummary> = clusters
                .iter()
                .map(|c| ClusterSummary {
                    min_vertex: c.vertices[0],
                    size: c.vertices.len(),
                    satisfiable: !c.parity || c.boundary,
                })
                .collect();
            round.sort_unstable();
            t.push(round);
        }
        if unsat.is_empty() {
            break;
        }
        stats.rounds += 1;
        stats.growth_steps += unsat.len();
        let mut add = vec![0u8; graph.num_edges()];
        let mut progressed = false;
        for c in &unsat {
            for &v in &c.vertices {
                let mut grew = false;
                for &e in graph.incident(v) {
                    stats.ops += 1;
                    if support[e] < GROWN {
                        add[e] += 1;
                        grew = true;
                    }
                }
                if grew {
                    rounds_as_boundary[v] += 1;
                    progressed = true;
                }
            }
        }
        if !progressed {
            return Err(LocqError::Unsatisfiable("cluster cannot grow further".into()));
        }
        for (s, a) in support.iter_mut().zip(&add) {
            *s = (*s + a).min(GROWN);
        }
    }
    let grown = Erasure::from_union((0..graph.num_edges()).filter(|&e| support[e] >= GROWN));
    let correction = decode_erasure_with_ops(graph, &grown, syndrome, true, &mut stats.ops)?;
    stats.max_boundary_rounds = rounds_as_boundary.into_iter().max().unwrap_or(0);
    Ok(UfOutcome { correction, grown, stats })
}

struct NaiveCluster {
    vertices: Vec<VertexId>,
    parity: bool,
    boundary: bool,
}

/// Components of the grown-edge graph that hold a defect or a grown edge.
fn naive_clusters(graph: &TannerHypergraph, support: &[u8], defect: &[bool]) -> Vec<NaiveCluster> {
    let nv = graph.num_vertices();
    let mut seen = vec![false; nv];
    let mut out = Vec::new();
    for s in graph.interior_vertices() {
        if seen[s] {
            continue;
        }
        let touches_grown = graph.incident(s).iter().any(|&e| support[e] >= GROWN);
        if !defect[s] && !touches_grown {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut c = NaiveCluster { vertices: Vec::new(), parity: false, boundary: false };
        while let Some(v) = stack.pop() {
            c.vertices.push(v);
            c.parity ^= defect[v];
            for &e in graph.incident(v) {
                if support[e] < GROWN {
                    continue;
                }
                if graph.is_boundary_edge(e) {
                    c.boundary = true;
                }
                for w in graph.interior_of(e) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        c.vertices.sort_unstable();
        out.push(c);
    }
    out
}

/// Fast decoder with a per-round cluster trace for lockstep comparison.
pub fn decode_uf_fast_traced(
    graph: &TannerHypergraph,
    erasure: &Erasure,
    syndrome: &Syndrome,
    trace: &mut Trace,
) -> Result<UfOutcome> {
    UfDecoder::new(graph).decode(erasure, syndrome, Some(trace))
}
