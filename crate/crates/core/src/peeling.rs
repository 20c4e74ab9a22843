//! Linear-time erasure decoding by spanning-forest peeling.

use std::collections::VecDeque;

use crate::error::{invalid, LocqError, Result};
use crate::hypergraph::{EdgeId, Erasure, PauliXError, Syndrome, TannerHypergraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub edge: EdgeId,
    pub parent: VertexId,
    pub child: VertexId,
}

/// One spanning tree; `edges` is in discovery order, so every edge comes
/// after the edge leading to its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterTree {
    pub root: VertexId,
    pub edges: Vec<TreeEdge>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpanningForest {
    pub trees: Vec<ClusterTree>,
    boundary_aware: bool,
    ops: u64,
}

impl SpanningForest {
    pub fn num_edges(&self) -> usize {
        self.trees.iter().map(|t| t.edges.len()).sum()
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }

    pub fn is_boundary_aware(&self) -> bool {
        self.boundary_aware
    }
}

fn other_end(graph: &TannerHypergraph, e: EdgeId, v: VertexId) -> VertexId {
    let ends = graph.edge(e);
    if ends[0] == v {
        ends[1]
    } else {
        ends[0]
    }
}

/// Breadth-first spanning forest of the erasure.
///
/// With `boundary_aware`, open vertices never join a tree except as the
/// root of a cluster that reaches the boundary: such a tree starts from the
/// lowest-id erased edge into an open vertex.
pub fn spanning_forest(graph: &TannerHypergraph, erasure: &Erasure, boundary_aware: bool) -> Result<SpanningForest> {
    let nv = graph.num_vertices();
    let mut erased = vec![false; graph.num_edges()];
    for e in erasure.iter() {
        if e >= graph.num_edges() {
            return Err(invalid(format!("erased edge {e} out of range")));
        }
        if graph.edge(e).len() != 2 {
            return Err(invalid(format!("peeling needs arity-2 edges, edge {e} has arity {}", graph.edge(e).len())));
        }
        erased[e] = true;
    }
    let opening = |v: VertexId| boundary_aware && !graph.is_interior(v);
    let mut ops = 0u64;
    let mut scanned = vec![false; nv];
    let mut in_tree = vec![false; nv];
    let mut queue = VecDeque::new();
    let mut component = Vec::new();
    let mut trees = Vec::new();

    for e0 in erasure.iter() {
        let Some(&start) = graph.edge(e0).iter().find(|&&v| !opening(v)) else {
            continue;
        };
        if scanned[start] {
            continue;
        }
        component.clear();
        scanned[start] = true;
        queue.push_back(start);
        let mut boundary_edge: Option<EdgeId> = None;
        while let Some(v) = queue.pop_front() {
            component.push(v);
            for &e in graph.incident(v) {
                ops += 1;
                if !erased[e] {
                    continue;
                }
                let w = other_end(graph, e, v);
                if opening(w) {
                    boundary_edge = Some(boundary_edge.map_or(e, |b| b.min(e)));
                } else if !scanned[w] {
                    scanned[w] = true;
                    queue.push_back(w);
                }
            }
        }

        let mut edges = Vec::with_capacity(component.len());
        let root = match boundary_edge {
            Some(b) => {
                let ends = graph.edge(b);
                let (open, inner) = if opening(ends[0]) { (ends[0], ends[1]) } else { (ends[1], ends[0]) };
                edges.push(TreeEdge { edge: b, parent: open, child: inner });
                in_tree[inner] = true;
                queue.push_back(inner);
                open
            }
            None => {
                let r = *component.iter().min().expect("component contains its start vertex");
                in_tree[r] = true;
                queue.push_back(r);
                r
            }
        };
        while let Some(v) = queue.pop_front() {
            for &e in graph.incident(v) {
                ops += 1;
                if !erased[e] {
                    continue;
                }
                let w = other_end(graph, e, v);
                if !opening(w) && !in_tree[w] {
                    in_tree[w] = true;
                    edges.push(TreeEdge { edge: e, parent: v, child: w });
                    queue.push_back(w);
                }
            }
        }
        trees.push(ClusterTree { root, edges });
    }
    Ok(SpanningForest { trees, boundary_aware, ops })
}

/// Peels leaves from the forest, returning `A ⊆ ε` with `∂A = σ`.
pub fn peel(graph: &TannerHypergraph, forest: &SpanningForest, syndrome: &Syndrome) -> Result<PauliXError> {
    let mut ops = 0;
    peel_with_ops(graph, forest, syndrome, &mut ops)
}

pub fn peel_with_ops(
    graph: &TannerHypergraph,
    forest: &SpanningForest,
    syndrome: &Syndrome,
    ops: &mut u64,
) -> Result<PauliXError> {
    graph.check_syndrome(syndrome)?;
    let mut s = syndrome.to_mask(graph.num_vertices());
    let mut out = Vec::new();
    for tree in &forest.trees {
        for te in tree.edges.iter().rev() {
            *ops += 1;
            if s[te.child] {
                out.push(te.edge);
                s[te.child] = false;
                s[te.parent] ^= true;
            }
        }
    }
    let leftover =
        (0..graph.num_vertices()).filter(|&v| s[v] && (graph.is_interior(v) || !forest.boundary_aware)).count();
    if leftover > 0 {
        return Err(LocqError::Unsatisfiable(format!("{leftover} defects left after peeling")));
    }
    Ok(PauliXError::from_union(out))
}

/// Spanning forest followed by peeling.
pub fn decode_erasure(
    graph: &TannerHypergraph,
    erasure: &Erasure,
    syndrome: &Syndrome,
    with_boundary: bool,
) -> Result<PauliXError> {
    let mut ops = 0;
    decode_erasure_with_ops(graph, erasure, syndrome, with_boundary, &mut ops)
}

pub fn decode_erasure_with_ops(
    graph: &TannerHypergraph,
    erasure: &Erasure,
    syndrome: &Syndrome,
    with_boundary: bool,
    ops: &mut u64,
) -> Result<PauliXError> {
    let forest = spanning_forest(graph, erasure, with_boundary)?;
    *ops += forest.ops;
    peel_with_ops(graph, &forest, syndrome, ops)
}
