//! The decoding substrate shared by every code in the crate.
//!
//! Vertices are `Z` checks (interior) or open vertices that stand in for the
//! code boundary; (hyper)edges are qubits. An `X` error is a set of edges and
//! its syndrome is the set of interior vertices it covers an odd number of
//! times.

use serde::{Deserialize, Serialize};

use crate::error::{LocqError, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Interior,
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Interior,
    /// Touches an open vertex, or has at most one interior vertex.
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerHypergraph {
    vertex_kinds: Vec<VertexKind>,
    edges: Vec<Vec<VertexId>>,
    edge_kinds: Vec<EdgeKind>,
    incidence: Vec<Vec<EdgeId>>,
    max_arity: usize,
}

impl TannerHypergraph {
    /// Each edge lists its incident vertices; the list is sorted on entry so
    /// the stored form is canonical.
    pub fn new(vertex_kinds: Vec<VertexKind>, edges: Vec<Vec<VertexId>>) -> Result<Self> {
        let nv = vertex_kinds.len();
        let mut incidence = vec![Vec::new(); nv];
        let mut edge_kinds = Vec::with_capacity(edges.len());
        let mut sorted_edges = Vec::with_capacity(edges.len());
        let mut max_arity = 0;
        for (e, mut verts) in edges.into_iter().enumerate() {
            verts.sort_unstable();
            if verts.is_empty() {
                return Err(LocqError::InvalidCode(format!("edge {e} has no vertices")));
            }
            if verts.windows(2).any(|w| w[0] == w[1]) {
                return Err(LocqError::InvalidCode(format!("edge {e} repeats a vertex")));
            }
            if let Some(&v) = verts.iter().find(|&&v| v >= nv) {
                return Err(LocqError::InvalidCode(format!("edge {e} references missing vertex {v}")));
            }
            let interior = verts.iter().filter(|&&v| vertex_kinds[v] == VertexKind::Interior).count();
            let touches_open = interior < verts.len();
            edge_kinds.push(if touches_open || interior <= 1 { EdgeKind::Boundary } else { EdgeKind::Interior });
            for &v in &verts {
                incidence[v].push(e);
            }
            max_arity = max_arity.max(verts.len());
            sorted_edges.push(verts);
        }
        Ok(TannerHypergraph { vertex_kinds, edges: sorted_edges, edge_kinds, incidence, max_arity })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_kinds.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_kind(&self, v: VertexId) -> VertexKind {
        self.vertex_kinds[v]
    }

    #[inline]
    pub fn is_interior(&self, v: VertexId) -> bool {
        self.vertex_kinds[v] == VertexKind::Interior
    }

    pub fn vertex_kinds(&self) -> &[VertexKind] {
        &self.vertex_kinds
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &[VertexId] {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    pub fn edge_kind(&self, e: EdgeId) -> EdgeKind {
        self.edge_kinds[e]
    }

    #[inline]
    pub fn is_boundary_edge(&self, e: EdgeId) -> bool {
        self.edge_kinds[e] == EdgeKind::Boundary
    }

    #[inline]
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.num_vertices()).filter(|&v| self.is_interior(v))
    }

    pub fn num_interior_vertices(&self) -> usize {
        self.interior_vertices().count()
    }

    /// Interior endpoints of edge `e`.
    pub fn interior_of(&self, e: EdgeId) -> impl Iterator<Item = VertexId> + '_ {
        self.edges[e].iter().copied().filter(|&v| self.is_interior(v))
    }

    pub fn syndrome_of(&self, error: &PauliXError) -> Syndrome {
        Syndrome::from_parity(error.iter().flat_map(|e| self.interior_of(e)))
    }

    pub fn check_error(&self, error: &PauliXError) -> Result<()> {
        match error.iter().find(|&e| e >= self.num_edges()) {
            Some(e) => Err(LocqError::InvalidParameter(format!("edge {e} out of range"))),
            None => Ok(()),
        }
    }

    pub fn check_syndrome(&self, syndrome: &Syndrome) -> Result<()> {
        match syndrome.iter().find(|&v| v >= self.num_vertices() || !self.is_interior(v)) {
            Some(v) => Err(LocqError::InvalidParameter(format!("syndrome vertex {v} is not an interior vertex"))),
            None => Ok(()),
        }
    }
}

/// Syndrome of `error` on `graph`.
pub fn syndrome_of(graph: &TannerHypergraph, error: &PauliXError) -> Syndrome {
    graph.syndrome_of(error)
}

macro_rules! id_set {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Vec<usize>);

        impl $name {
            pub fn new() -> Self {
                $name(Vec::new())
            }

            /// Set semantics: duplicates collapse.
            pub fn from_union(ids: impl IntoIterator<Item = usize>) -> Self {
                let mut v: Vec<usize> = ids.into_iter().collect();
                v.sort_unstable();
                v.dedup();
                $name(v)
            }

            /// Parity semantics: ids appearing an even number of times cancel.
            pub fn from_parity(ids: impl IntoIterator<Item = usize>) -> Self {
                let mut v: Vec<usize> = ids.into_iter().collect();
                v.sort_unstable();
                let mut out = Vec::with_capacity(v.len());
                let mut i = 0;
                while i < v.len() {
                    let mut j = i;
                    while j < v.len() && v[j] == v[i] {
                        j += 1;
                    }
                    if (j - i) % 2 == 1 {
                        out.push(v[i]);
                    }
                    i = j;
                }
                $name(out)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn contains(&self, id: usize) -> bool {
                self.0.binary_search(&id).is_ok()
            }

            pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
                self.0.iter().copied()
            }

            pub fn as_slice(&self) -> &[usize] {
                &self.0
            }

            pub fn into_vec(self) -> Vec<usize> {
                self.0
            }

            /// Symmetric difference.
            pub fn sym_diff(&self, other: &Self) -> Self {
                let (a, b) = (&self.0, &other.0);
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() && j < b.len() {
                    match a[i].cmp(&b[j]) {
                        std::cmp::Ordering::Less => {
                            out.push(a[i]);
                            i += 1;
                        }
                        std::cmp::Ordering::Greater => {
                            out.push(b[j]);
                            j += 1;
                        }
                        std::cmp::Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                    }
                }
                out.extend_from_slice(&a[i..]);
                out.extend_from_slice(&b[j..]);
                $name(out)
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.0.iter().all(|&x| other.contains(x))
            }

            pub fn to_mask(&self, len: usize) -> Vec<bool> {
                let mut m = vec![false; len];
                for &x in &self.0 {
                    m[x] = true;
                }
                m
            }
        }

        impl FromIterator<usize> for $name {
            fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
                $name::from_parity(iter)
            }
        }
    };
}

id_set!(
    /// Support of an `X` error, as sorted edge ids.
    PauliXError
);
id_set!(
    /// Interior vertices flagged by the syndrome, sorted.
    Syndrome
);
id_set!(
    /// Erased edges, sorted.
    Erasure
);

impl Erasure {
    pub fn as_error(&self) -> PauliXError {
        PauliXError(self.0.clone())
    }
}

impl PauliXError {
    pub fn as_erasure(&self) -> Erasure {
        Erasure(self.0.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path_graph() -> TannerHypergraph {
        // open - 0 - 1 - 2 - open
        TannerHypergraph::new(
            vec![VertexKind::Open, VertexKind::Interior, VertexKind::Interior, VertexKind::Interior, VertexKind::Open],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4]],
        )
        .unwrap()
    }

    #[test]
    fn syndrome_basics() {
        let g = path_graph();
        assert!(g.syndrome_of(&PauliXError::new()).is_empty());
        assert_eq!(g.syndrome_of(&PauliXError::from_union([1])).as_slice(), &[1, 2]);
        assert!(g.syndrome_of(&PauliXError::from_union(0..4)).is_empty());
        assert_eq!(g.edge_kind(0), EdgeKind::Boundary);
        assert_eq!(g.edge_kind(1), EdgeKind::Interior);
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(TannerHypergraph::new(vec![VertexKind::Interior], vec![vec![]]).is_err());
        assert!(TannerHypergraph::new(vec![VertexKind::Interior], vec![vec![0, 0]]).is_err());
        assert!(TannerHypergraph::new(vec![VertexKind::Interior], vec![vec![1]]).is_err());
    }

    #[test]
    fn parity_cancels_pairs() {
        assert_eq!(Syndrome::from_parity([3, 1, 3, 2, 2, 2]).as_slice(), &[1, 2]);
        assert_eq!(Erasure::from_union([3, 1, 3]).as_slice(), &[1, 3]);
    }

    proptest! {
        #[test]
        fn syndrome_is_linear(a in proptest::collection::vec(0usize..4, 0..8),
                              b in proptest::collection::vec(0usize..4, 0..8)) {
            let g = path_graph();
            let ea = PauliXError::from_parity(a);
            let eb = PauliXError::from_parity(b);
            let lhs = g.syndrome_of(&ea.sym_diff(&eb));
            let rhs = g.syndrome_of(&ea).sym_diff(&g.syndrome_of(&eb));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
