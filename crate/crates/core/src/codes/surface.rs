//! Homological tensor products of 1D chains: generalized surface patches and
//! planar surface codes.

use crate::codes::css::{CssCode, StabilizerCode};
use crate::codes::rep::{Chain1d, GenRepCode, RepCoord};
use crate::error::{invalid, Result};
use crate::hypergraph::{EdgeId, TannerHypergraph, VertexId, VertexKind};

/// Which factor a product cell's "edge" coordinate comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProductEdge {
    /// `(edge of A, interior vertex of B)`
    AxV(EdgeId, VertexId),
    /// `(interior vertex of A, edge of B)`
    VxE(VertexId, EdgeId),
}

/// Tensor product `A ⊗ B` of two 1D chains.
///
/// Qubits are `E_A × V̊_B ∪ V̊_A × E_B`, `Z` checks `V̊_A × V̊_B`, open
/// vertices the remaining pairs with one interior coordinate, and `X`
/// checks the faces `E_A × E_B`.
#[derive(Clone, Debug)]
pub struct ProductComplex {
    graph: TannerHypergraph,
    x_checks: Vec<Vec<EdgeId>>,
    vertex_cells: Vec<(VertexId, VertexId)>,
    edge_cells: Vec<ProductEdge>,
    face_cells: Vec<(EdgeId, EdgeId)>,
}

impl ProductComplex {
    pub fn new(a: &Chain1d, b: &Chain1d) -> ProductComplex {
        let (na, nb) = (a.num_vertices(), b.num_vertices());
        let mut vid = vec![usize::MAX; na * nb];
        let mut kinds = Vec::new();
        let mut vertex_cells = Vec::new();
        for va in 0..na {
            for vb in 0..nb {
                let (oa, ob) = (a.vertex_open[va], b.vertex_open[vb]);
                if oa && ob {
                    continue;
                }
                vid[va * nb + vb] = kinds.len();
                kinds.push(if oa || ob { VertexKind::Open } else { VertexKind::Interior });
                vertex_cells.push((va, vb));
            }
        }

        let mut edges = Vec::new();
        let mut edge_cells = Vec::new();
        let mut eid_axv = vec![usize::MAX; a.num_edges() * nb];
        let mut eid_vxe = vec![usize::MAX; na * b.num_edges()];
        for (ea, ends) in a.edges.iter().enumerate() {
            for vb in (0..nb).filter(|&v| !b.vertex_open[v]) {
                eid_axv[ea * nb + vb] = edges.len();
                edges.push(ends.iter().map(|&va| vid[va * nb + vb]).collect::<Vec<_>>());
                edge_cells.push(ProductEdge::AxV(ea, vb));
            }
        }
        for va in (0..na).filter(|&v| !a.vertex_open[v]) {
            for (eb, ends) in b.edges.iter().enumerate() {
                eid_vxe[va * b.num_edges() + eb] = edges.len();
                edges.push(ends.iter().map(|&vb| vid[va * nb + vb]).collect());
                edge_cells.push(ProductEdge::VxE(va, eb));
            }
        }

        let mut x_checks = Vec::new();
        let mut face_cells = Vec::new();
        for (ea, ends_a) in a.edges.iter().enumerate() {
            for (eb, ends_b) in b.edges.iter().enumerate() {
                let mut support: Vec<EdgeId> = ends_b
                    .iter()
                    .filter(|&&vb| !b.vertex_open[vb])
                    .map(|&vb| eid_axv[ea * nb + vb])
                    .chain(ends_a.iter().filter(|&&va| !a.vertex_open[va]).map(|&va| eid_vxe[va * b.num_edges() + eb]))
                    .collect();
                support.sort_unstable();
                x_checks.push(support);
                face_cells.push((ea, eb));
            }
        }

        let graph = TannerHypergraph::new(kinds, edges).expect("product cells are well formed");
        ProductComplex { graph, x_checks, vertex_cells, edge_cells, face_cells }
    }

    pub fn graph(&self) -> &TannerHypergraph {
        &self.graph
    }

    pub fn x_checks(&self) -> &[Vec<EdgeId>] {
        &self.x_checks
    }

    pub fn vertex_cell(&self, v: VertexId) -> (VertexId, VertexId) {
        self.vertex_cells[v]
    }

    pub fn edge_cell(&self, e: EdgeId) -> ProductEdge {
        self.edge_cells[e]
    }

    pub fn face_cell(&self, f: usize) -> (EdgeId, EdgeId) {
        self.face_cells[f]
    }
}

/// The planar surface code of distance `d`: open repetition code times a
/// closed path. Rough boundaries are open vertices; smooth sides are absent.
#[derive(Clone, Debug)]
pub struct PlanarCode {
    distance: usize,
    complex: ProductComplex,
    css: CssCode,
}

impl PlanarCode {
    pub fn new(distance: usize) -> Result<Self> {
        if distance < 3 || distance.is_multiple_of(2) {
            return Err(invalid(format!("planar code distance must be odd and at least 3, got {distance}")));
        }
        let a = GenRepCode::new(2, distance)?;
        let b = Chain1d::closed_path(distance)?;
        let complex = ProductComplex::new(a.chain(), &b);
        let css = CssCode::from_graph(complex.graph(), complex.x_checks())?;
        Ok(PlanarCode { distance, complex, css })
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn complex(&self) -> &ProductComplex {
        &self.complex
    }
}

impl StabilizerCode for PlanarCode {
    fn graph(&self) -> &TannerHypergraph {
        self.complex.graph()
    }

    fn css(&self) -> &CssCode {
        &self.css
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    A,
    B,
}

/// An open side of a patch: the open ends of one arm of one factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub factor: Factor,
    pub arm: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatchRegion {
    Square(usize),
    Seam(usize),
}

/// Tensor product of two generalized repetition codes.
///
/// A factor with `Δ = 2` is a single segment; otherwise each arm is a
/// segment and the central hyperedge generates seams. Squares are pairs of
/// segments; seams are `central × segment` in either order.
#[derive(Clone, Debug)]
pub struct GenSurfacePatch {
    a: GenRepCode,
    b: GenRepCode,
    complex: ProductComplex,
    css: CssCode,
    num_squares: usize,
    num_seams: usize,
    vertex_square: Vec<usize>,
    edge_region: Vec<PatchRegion>,
    seam_squares: Vec<Vec<usize>>,
    seam_edges: Vec<Vec<EdgeId>>,
    vertex_side: Vec<Option<Side>>,
}

pub fn build_gen_surface(a: &GenRepCode, b: &GenRepCode) -> Result<GenSurfacePatch> {
    GenSurfacePatch::new(a.clone(), b.clone())
}

fn segments(c: &GenRepCode) -> usize {
    if c.delta() == 2 {
        1
    } else {
        c.delta()
    }
}

fn segment_of(c: &GenRepCode, coord: RepCoord) -> Option<usize> {
    match coord.arm {
        _ if c.delta() == 2 => Some(0),
        None => None,
        Some(a) => Some(a),
    }
}

impl GenSurfacePatch {
    pub fn new(a: GenRepCode, b: GenRepCode) -> Result<Self> {
        if a.length() != b.length() {
            return Err(invalid("patch factors must share the same length"));
        }
        let complex = ProductComplex::new(a.chain(), b.chain());
        let css = CssCode::from_graph(complex.graph(), complex.x_checks())?;
        let (sa, sb) = (segments(&a), segments(&b));
        let num_squares = sa * sb;
        let seams_a = if a.delta() >= 3 { sb } else { 0 };
        let seams_b = if b.delta() >= 3 { sa } else { 0 };
        let num_seams = seams_a + seams_b;
        let square = |i: usize, j: usize| i * sb + j;

        let graph = complex.graph();
        let mut vertex_square = Vec::with_capacity(graph.num_vertices());
        let mut vertex_side = Vec::with_capacity(graph.num_vertices());
        for v in 0..graph.num_vertices() {
            let (va, vb) = complex.vertex_cell(v);
            let (ca, cb) = (a.vertex_coord(va), b.vertex_coord(vb));
            let (i, j) = (segment_of(&a, ca).unwrap(), segment_of(&b, cb).unwrap());
            vertex_square.push(square(i, j));
            vertex_side.push(if a.chain().vertex_open[va] {
                Some(Side { factor: Factor::A, arm: ca.arm.unwrap() })
            } else if b.chain().vertex_open[vb] {
                Some(Side { factor: Factor::B, arm: cb.arm.unwrap() })
            } else {
                None
            });
        }

        let mut edge_region = Vec::with_capacity(graph.num_edges());
        let mut seam_edges = vec![Vec::new(); num_seams];
        for e in 0..graph.num_edges() {
            let region = match complex.edge_cell(e) {
                ProductEdge::AxV(ea, vb) => {
                    let j = segment_of(&b, b.vertex_coord(vb)).unwrap();
                    match segment_of(&a, a.edge_coord(ea)) {
                        Some(i) => PatchRegion::Square(square(i, j)),
                        None => PatchRegion::Seam(j),
                    }
                }
                ProductEdge::VxE(va, eb) => {
                    let i = segment_of(&a, a.vertex_coord(va)).unwrap();
                    match segment_of(&b, b.edge_coord(eb)) {
                        Some(j) => PatchRegion::Square(square(i, j)),
                        None => PatchRegion::Seam(seams_a + i),
                    }
                }
            };
            if let PatchRegion::Seam(f) = region {
                seam_edges[f].push(e);
            }
            edge_region.push(region);
        }

        let seam_squares = (0..num_seams)
            .map(|f| {
                if f < seams_a {
                    (0..sa).map(|i| square(i, f)).collect()
                } else {
                    (0..sb).map(|j| square(f - seams_a, j)).collect()
                }
            })
            .collect();

        Ok(GenSurfacePatch {
            a,
            b,
            complex,
            css,
            num_squares,
            num_seams,
            vertex_square,
            edge_region,
            seam_squares,
            seam_edges,
            vertex_side,
        })
    }

    pub fn factor_a(&self) -> &GenRepCode {
        &self.a
    }

    pub fn factor_b(&self) -> &GenRepCode {
        &self.b
    }

    pub fn length(&self) -> usize {
        self.a.length()
    }

    pub fn complex(&self) -> &ProductComplex {
        &self.complex
    }

    pub fn num_squares(&self) -> usize {
        self.num_squares
    }

    pub fn num_seams(&self) -> usize {
        self.num_seams
    }

    /// Square containing vertex `v` (open vertices included).
    pub fn vertex_square(&self, v: VertexId) -> usize {
        self.vertex_square[v]
    }

    pub fn edge_region(&self, e: EdgeId) -> PatchRegion {
        self.edge_region[e]
    }

    pub fn seam_squares(&self, f: usize) -> &[usize] {
        &self.seam_squares[f]
    }

    pub fn seam_edges(&self, f: usize) -> &[EdgeId] {
        &self.seam_edges[f]
    }

    /// Side of an open vertex; `None` for interior vertices.
    pub fn vertex_side(&self, v: VertexId) -> Option<Side> {
        self.vertex_side[v]
    }

    /// Coordinates of vertex `v` in the two factors.
    pub fn vertex_coords(&self, v: VertexId) -> (RepCoord, RepCoord) {
        let (va, vb) = self.complex.vertex_cell(v);
        (self.a.vertex_coord(va), self.b.vertex_coord(vb))
    }

    pub fn edge_coords(&self, e: EdgeId) -> (RepCoord, RepCoord) {
        match self.complex.edge_cell(e) {
            ProductEdge::AxV(ea, vb) => (self.a.edge_coord(ea), self.b.vertex_coord(vb)),
            ProductEdge::VxE(va, eb) => (self.a.vertex_coord(va), self.b.edge_coord(eb)),
        }
    }

    pub fn face_coords(&self, f: usize) -> (RepCoord, RepCoord) {
        let (ea, eb) = self.complex.face_cell(f);
        (self.a.edge_coord(ea), self.b.edge_coord(eb))
    }

    /// `rank ∂₂ + rank ∂₁ = dim C₁`, i.e. the patch carries no logical qubit.
    pub fn is_exact(&self) -> bool {
        self.css.rank_hx() + self.css.rank_hz() == self.css.num_qubits()
    }
}

impl StabilizerCode for GenSurfacePatch {
    fn graph(&self) -> &TannerHypergraph {
        self.complex.graph()
    }

    fn css(&self) -> &CssCode {
        &self.css
    }
}
