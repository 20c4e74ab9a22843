//! Erasure decoding on generalized surface patches.
//!
//! Seam hyperedges are the only qubits that couple different squares. A
//! cluster is split into sub-clusters by deleting its seam hyperedges; each
//! sub-cluster that does not reach the boundary must end with even defect
//! parity. Seam hyperedges that touch the same sub-clusters (an odd number of
//! times each) act identically on these parities and share one variable,
//! represented by the lowest edge id. Solving the resulting GF(2) system picks
//! the seam hyperedges to flip; peeling then fixes each sub-cluster.
//!
//! When every square meets the cluster in a connected piece, sub-clusters
//! are exactly the cluster's squares and the system is the per-square one.

use std::collections::BTreeMap;

use crate::codes::surface::{GenSurfacePatch, PatchRegion};
use crate::codes::StabilizerCode;
use crate::error::{LocqError, Result};
use crate::gf2::{gf2_solve, BitVec, Gf2Matrix};
use crate::hypergraph::{EdgeId, Erasure, PauliXError, Syndrome, TannerHypergraph, VertexId};
use crate::peeling::decode_erasure_with_ops;

/// The linear system `x · G = p` for one cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatisfiabilitySystem {
    /// Representative seam hyperedge of each variable.
    pub variables: Vec<EdgeId>,
    /// Lowest vertex of each boundary-free sub-cluster, one per equation.
    pub equations: Vec<VertexId>,
    /// `g[i][j]`: variable `i` flips the parity of equation `j`.
    pub g: Gf2Matrix,
    pub p: BitVec,
}

impl SatisfiabilitySystem {
    pub fn solve(&self) -> Option<BitVec> {
        gf2_solve(&self.g, &self.p)
    }
}

/// Sub-cluster bookkeeping for one connected cluster.
struct Split {
    /// Sub-cluster index per cluster vertex.
    label: Vec<(VertexId, usize)>,
    sub_min: Vec<VertexId>,
    sub_parity: Vec<bool>,
    sub_boundary: Vec<bool>,
    seam_edges: Vec<EdgeId>,
    square_edges: Vec<EdgeId>,
}

fn is_seam(patch: &GenSurfacePatch, e: EdgeId) -> bool {
    matches!(patch.edge_region(e), PatchRegion::Seam(_))
}

fn split_cluster(
    patch: &GenSurfacePatch,
    cluster: &[EdgeId],
    defect: &[bool],
    erased: &[bool],
    sub_of: &mut [usize],
    ops: &mut u64,
) -> Split {
    let g = patch.graph();
    let mut split = Split {
        label: Vec::new(),
        sub_min: Vec::new(),
        sub_parity: Vec::new(),
        sub_boundary: Vec::new(),
        seam_edges: Vec::new(),
        square_edges: Vec::new(),
    };
    for &e in cluster {
        if is_seam(patch, e) {
            split.seam_edges.push(e);
        } else {
            split.square_edges.push(e);
        }
    }
    let mut stack = Vec::new();
    for &e in cluster {
        for v in g.interior_of(e) {
            if sub_of[v] != usize::MAX {
                continue;
            }
            let id = split.sub_min.len();
            let (mut min, mut parity, mut boundary) = (v, false, false);
            sub_of[v] = id;
            stack.push(v);
            while let Some(u) = stack.pop() {
                split.label.push((u, id));
                min = min.min(u);
                parity ^= defect[u];
                for &f in g.incident(u) {
                    *ops += 1;
                    if !erased[f] || is_seam(patch, f) {
                        continue;
                    }
                    if g.is_boundary_edge(f) {
                        boundary = true;
                    }
                    for w in g.interior_of(f) {
                        if sub_of[w] == usize::MAX {
                            sub_of[w] = id;
                            stack.push(w);
                        }
                    }
                }
            }
            split.sub_min.push(min);
            split.sub_parity.push(parity);
            split.sub_boundary.push(boundary);
        }
    }
    split
}

fn build_system(g: &TannerHypergraph, split: &Split, sub_of: &[usize], ops: &mut u64) -> SatisfiabilitySystem {
    let mut eq_index = vec![usize::MAX; split.sub_min.len()];
    let mut equations = Vec::new();
    let mut eq_subs = Vec::new();
    for s in 0..split.sub_min.len() {
        if !split.sub_boundary[s] {
            eq_index[s] = equations.len();
            equations.push(split.sub_min[s]);
            eq_subs.push(s);
        }
    }
    let mut by_signature: BTreeMap<Vec<usize>, EdgeId> = BTreeMap::new();
    for &e in &split.seam_edges {
        let mut touched: Vec<usize> = g.interior_of(e).map(|v| sub_of[v]).collect();
        *ops += touched.len() as u64;
        touched.sort_unstable();
        let mut odd = Vec::with_capacity(touched.len());
        for chunk in touched.chunk_by(|a, b| a == b) {
            if chunk.len() % 2 == 1 {
                odd.push(chunk[0]);
            }
        }
        if odd.is_empty() {
            continue;
        }
        by_signature.entry(odd).and_modify(|r| *r = (*r).min(e)).or_insert(e);
    }
    let mut variables: Vec<(EdgeId, Vec<usize>)> = by_signature.into_iter().map(|(sig, e)| (e, sig)).collect();
    variables.sort_unstable();
    let rows: Vec<Vec<usize>> = variables
        .iter()
        .map(|(_, sig)| sig.iter().filter(|&&s| eq_index[s] != usize::MAX).map(|&s| eq_index[s]).collect())
        .collect();
    let g_mat = Gf2Matrix::from_row_supports(equations.len(), &rows);
    let p = BitVec::from_indices(
        equations.len(),
        eq_subs.iter().enumerate().filter(|(_, &s)| split.sub_parity[s]).map(|(j, _)| j),
    );
    SatisfiabilitySystem { variables: variables.into_iter().map(|(e, _)| e).collect(), equations, g: g_mat, p }
}

/// Result of decoding every cluster of an erasure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterDecode {
    /// Union of the corrections of all satisfiable clusters.
    pub correction: PauliXError,
    /// Lowest vertex of each unsatisfiable cluster.
    pub failed: Vec<VertexId>,
    pub ops: u64,
}

/// Connected components of the erasure, linked through interior vertices.
pub fn erasure_clusters(graph: &TannerHypergraph, erasure: &Erasure) -> Vec<Vec<EdgeId>> {
    let mut erased = vec![false; graph.num_edges()];
    for e in erasure.iter() {
        erased[e] = true;
    }
    let mut edge_seen = vec![false; graph.num_edges()];
    let mut vertex_seen = vec![false; graph.num_vertices()];
    let mut out = Vec::new();
    for e0 in erasure.iter() {
        if edge_seen[e0] {
            continue;
        }
        edge_seen[e0] = true;
        let mut cluster = vec![e0];
        let mut stack: Vec<VertexId> = graph.interior_of(e0).collect();
        for &v in &stack {
            vertex_seen[v] = true;
        }
        while let Some(v) = stack.pop() {
            for &f in graph.incident(v) {
                if erased[f] && !edge_seen[f] {
                    edge_seen[f] = true;
                    cluster.push(f);
                    for w in graph.interior_of(f) {
                        if !vertex_seen[w] {
                            vertex_seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
        }
        cluster.sort_unstable();
        out.push(cluster);
    }
    out
}

/// The satisfiability system of one connected cluster.
pub fn satisfiability_system(
    patch: &GenSurfacePatch,
    cluster: &Erasure,
    syndrome: &Syndrome,
) -> Result<SatisfiabilitySystem> {
    let g = patch.graph();
    g.check_error(&cluster.as_error())?;
    let defect = syndrome.to_mask(g.num_vertices());
    let erased = cluster.to_mask(g.num_edges());
    let mut sub_of = vec![usize::MAX; g.num_vertices()];
    let mut ops = 0;
    let split = split_cluster(patch, cluster.as_slice(), &defect, &erased, &mut sub_of, &mut ops);
    Ok(build_system(g, &split, &sub_of, &mut ops))
}

/// Seam hyperedges of the canonical solution for one connected cluster.
pub fn satisfying_configuration(
    patch: &GenSurfacePatch,
    cluster: &Erasure,
    syndrome: &Syndrome,
) -> Result<Vec<EdgeId>> {
    let system = satisfiability_system(patch, cluster, syndrome)?;
    let x =
        system.solve().ok_or_else(|| LocqError::Unsatisfiable("no seam configuration satisfies the cluster".into()))?;
    Ok(x.ones().map(|i| system.variables[i]).collect())
}

/// Decodes each cluster independently and reports the unsatisfiable ones.
pub fn decode_gen_erasure_clusters(
    patch: &GenSurfacePatch,
    erasure: &Erasure,
    syndrome: &Syndrome,
) -> Result<ClusterDecode> {
    let g = patch.graph();
    g.check_error(&erasure.as_error())?;
    g.check_syndrome(syndrome)?;
    let nv = g.num_vertices();
    let mut defect = syndrome.to_mask(nv);
    let erased = erasure.to_mask(g.num_edges());
    let mut sub_of = vec![usize::MAX; nv];
    let mut ops = 0u64;
    let mut selected = Vec::new();
    let mut peel_edges = Vec::new();
    let mut failed = Vec::new();

    for cluster in erasure_clusters(g, erasure) {
        let split = split_cluster(patch, &cluster, &defect, &erased, &mut sub_of, &mut ops);
        let system = build_system(g, &split, &sub_of, &mut ops);
        match system.solve() {
            Some(x) => {
                for i in x.ones() {
                    let e = system.variables[i];
                    selected.push(e);
                    for v in g.interior_of(e) {
                        defect[v] ^= true;
                    }
                }
                peel_edges.extend_from_slice(&split.square_edges);
            }
            None => {
                failed.push(split.sub_min.iter().copied().min().unwrap_or(cluster[0]));
                for &(v, _) in &split.label {
                    defect[v] = false;
                }
            }
        }
    }
    // Defects not covered by any erased edge.
    for v in syndrome.iter() {
        if sub_of[v] == usize::MAX {
            failed.push(v);
            defect[v] = false;
        }
    }
    failed.sort_unstable();
    let sigma = Syndrome::from_union((0..nv).filter(|&v| defect[v]));
    peel_edges.sort_unstable();
    let peeled = decode_erasure_with_ops(g, &Erasure::from_union(peel_edges), &sigma, true, &mut ops)?;
    let correction = PauliXError::from_union(selected).sym_diff(&peeled);
    Ok(ClusterDecode { correction, failed, ops })
}

/// Returns `P ⊆ ε` with `σ(P) = σ`, or `Unsatisfiable`.
pub fn decode_gen_erasure(patch: &GenSurfacePatch, erasure: &Erasure, syndrome: &Syndrome) -> Result<PauliXError> {
    let out = decode_gen_erasure_clusters(patch, erasure, syndrome)?;
    if !out.failed.is_empty() {
        return Err(LocqError::Unsatisfiable(format!("{} unsatisfiable clusters", out.failed.len())));
    }
    Ok(out.correction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::GenRepCode;

    fn patch(da: usize, db: usize, l: usize) -> GenSurfacePatch {
        GenSurfacePatch::new(GenRepCode::new(da, l).unwrap(), GenRepCode::new(db, l).unwrap()).unwrap()
    }

    #[test]
    fn empty_syndrome_needs_no_seams() {
        let p = patch(3, 3, 3);
        let eps = Erasure::from_union(0..p.graph().num_edges());
        assert!(satisfying_configuration(&p, &eps, &Syndrome::new()).unwrap().is_empty());
        assert!(decode_gen_erasure(&p, &eps, &Syndrome::new()).unwrap().is_empty());
    }

    #[test]
    fn single_seam_hyperedge() {
        let p = patch(3, 3, 3);
        let e = p.seam_edges(0)[0];
        let err = PauliXError::from_union([e]);
        let sigma = p.graph().syndrome_of(&err);
        let eps = Erasure::from_union([e]);
        assert_eq!(satisfying_configuration(&p, &eps, &sigma).unwrap(), vec![e]);
        assert_eq!(decode_gen_erasure(&p, &eps, &sigma).unwrap(), err);
    }

    #[test]
    fn unsupported_defect_is_unsatisfiable() {
        let p = patch(3, 3, 3);
        let v = p.graph().interior_vertices().next().unwrap();
        assert!(decode_gen_erasure(&p, &Erasure::new(), &Syndrome::from_union([v])).is_err());
    }
}
