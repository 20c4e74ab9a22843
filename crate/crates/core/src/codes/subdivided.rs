//! Subdivided codes: every square of an outer square complex is filled with
//! an `(L+1) × (L+1)` lattice.
//!
//! In the frame of square `(x, q1, q2, z)` the outer `X` check sits at
//! `(0, 0)`, the qubits at `(L, 0)` and `(0, L)`, and the `Z` check at
//! `(L, L)`. Points with both coordinates even are `X` checks, both odd are
//! `Z` checks, mixed parity are qubits. Points on a square's sides are shared
//! with every other square on the same outer incidence.
//!
//! Element census, with `h = (L - 1) / 2`:
//! `n = |Q| + h · |X–Q incidences| + h · |Q–Z incidences| + 2h² · |squares|`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::codes::css::{CssCode, StabilizerCode};
use crate::codes::rep::{GenRepCode, RepCoord};
use crate::codes::surface::GenSurfacePatch;
use crate::error::{invalid, LocqError, Result};
use crate::gf2::Gf2Matrix;
use crate::hypergraph::{EdgeId, PauliXError, TannerHypergraph, VertexId, VertexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OuterSquare {
    pub x: usize,
    pub q1: usize,
    pub q2: usize,
    pub z: usize,
}

/// An outer code given by its squares; incidences are read off the squares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareComplex {
    pub num_x: usize,
    pub num_q: usize,
    pub num_z: usize,
    pub squares: Vec<OuterSquare>,
}

impl SquareComplex {
    pub fn new(num_x: usize, num_q: usize, num_z: usize, mut squares: Vec<OuterSquare>) -> Result<Self> {
        for s in &squares {
            if s.x >= num_x || s.q1 >= num_q || s.q2 >= num_q || s.z >= num_z {
                return Err(LocqError::InvalidCode(format!("square {s:?} references a missing element")));
            }
            if s.q1 == s.q2 {
                return Err(LocqError::InvalidCode(format!("square {s:?} repeats a qubit")));
            }
        }
        squares.sort_unstable();
        if squares.windows(2).any(|w| w[0] == w[1]) {
            return Err(LocqError::InvalidCode("duplicate square".into()));
        }
        let c = SquareComplex { num_x, num_q, num_z, squares };
        c.css()?;
        Ok(c)
    }

    /// Hypergraph product of two cyclic repetition codes of lengths `w` and `h`.
    pub fn toric(w: usize, h: usize) -> Result<Self> {
        if w < 3 || h < 3 {
            return Err(invalid(format!("toric outer code needs sides of at least 3, got {w}x{h}")));
        }
        let x_id = |c1: usize, b2: usize| c1 * h + b2;
        let q_vv = |b1: usize, b2: usize| b1 * h + b2;
        let q_cc = |c1: usize, c2: usize| w * h + c1 * h + c2;
        let z_id = |b1: usize, c2: usize| b1 * h + c2;
        let mut squares = Vec::with_capacity(4 * w * h);
        for c1 in 0..w {
            for b2 in 0..h {
                for b1 in [c1, (c1 + 1) % w] {
                    for c2 in [b2, (b2 + h - 1) % h] {
                        squares.push(OuterSquare {
                            x: x_id(c1, b2),
                            q1: q_vv(b1, b2),
                            q2: q_cc(c1, c2),
                            z: z_id(b1, c2),
                        });
                    }
                }
            }
        }
        SquareComplex::new(w * h, 2 * w * h, w * h, squares)
    }

    fn supports(&self, count: usize, key: impl Fn(&OuterSquare) -> usize) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); count];
        for s in &self.squares {
            rows[key(s)].extend([s.q1, s.q2]);
        }
        for r in &mut rows {
            r.sort_unstable();
            r.dedup();
        }
        rows
    }

    pub fn x_supports(&self) -> Vec<Vec<usize>> {
        self.supports(self.num_x, |s| s.x)
    }

    pub fn z_supports(&self) -> Vec<Vec<usize>> {
        self.supports(self.num_z, |s| s.z)
    }

    pub fn css(&self) -> Result<CssCode> {
        let hx = Gf2Matrix::from_row_supports(self.num_q, &self.x_supports());
        let hz = Gf2Matrix::from_row_supports(self.num_q, &self.z_supports());
        CssCode::new(hx, hz)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    S(usize),
    T(usize),
    U(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum PointKey {
    OuterX(usize),
    OuterQ(usize),
    OuterZ(usize),
    /// `(x, q, distance from x)`
    Xq(usize, usize, usize),
    /// `(q, z, distance from q)`
    Qz(usize, usize, usize),
    /// `(square, i, j)`
    Interior(usize, usize, usize),
}

impl PointKey {
    fn region(self, squares: &[OuterSquare]) -> Region {
        match self {
            PointKey::OuterX(x) | PointKey::Xq(x, _, _) => Region::S(x),
            PointKey::Interior(s, _, _) => Region::S(squares[s].x),
            PointKey::OuterQ(q) | PointKey::Qz(q, _, _) => Region::T(q),
            PointKey::OuterZ(z) => Region::U(z),
        }
    }
}

/// Role of a lattice point `(i, j)` inside a subdivided square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointClass {
    XCheck,
    Qubit,
    ZCheck,
}

pub fn class_of(i: usize, j: usize) -> PointClass {
    match (i % 2, j % 2) {
        (0, 0) => PointClass::XCheck,
        (1, 1) => PointClass::ZCheck,
        _ => PointClass::Qubit,
    }
}

fn frame_key(squares: &[OuterSquare], s: usize, l: usize, i: usize, j: usize) -> PointKey {
    let sq = squares[s];
    match (i, j) {
        (0, 0) => PointKey::OuterX(sq.x),
        (i, 0) if i == l => PointKey::OuterQ(sq.q1),
        (0, j) if j == l => PointKey::OuterQ(sq.q2),
        (i, j) if i == l && j == l => PointKey::OuterZ(sq.z),
        (i, 0) => PointKey::Xq(sq.x, sq.q1, i),
        (0, j) => PointKey::Xq(sq.x, sq.q2, j),
        (i, j) if i == l => PointKey::Qz(sq.q1, sq.z, j),
        (i, j) if j == l => PointKey::Qz(sq.q2, sq.z, i),
        (i, j) => PointKey::Interior(s, i, j),
    }
}

/// A patch of the subdivided code (one per outer `X` check) with maps from
/// patch elements to global ids. Open patch vertices map to `T`-region
/// `Z` checks.
#[derive(Clone, Debug)]
pub struct EmbeddedPatch {
    pub patch: GenSurfacePatch,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
    pub face_map: Vec<usize>,
    /// Outer qubits along the first and second factor's arms.
    pub arms_a: Vec<usize>,
    pub arms_b: Vec<usize>,
}

/// A `T` region (one per outer qubit) as a generalized repetition code whose
/// open ends are the `U` vertices of the adjacent outer `Z` checks.
#[derive(Clone, Debug)]
pub struct EmbeddedRep {
    pub code: GenRepCode,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
    pub z_checks: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub qubits: usize,
    pub z_checks: usize,
    pub x_checks: usize,
    pub squares: usize,
    pub xq_incidences: usize,
    pub qz_incidences: usize,
}

impl Census {
    /// Qubit count predicted from the outer incidences alone.
    pub fn predicted_qubits(&self, outer_qubits: usize, length: usize) -> usize {
        let h = (length - 1) / 2;
        outer_qubits + h * self.xq_incidences + h * self.qz_incidences + 2 * h * h * self.squares
    }
}

#[derive(Clone, Debug)]
pub struct SubdividedCode {
    outer: SquareComplex,
    outer_css: CssCode,
    length: usize,
    graph: TannerHypergraph,
    css: CssCode,
    x_checks: Vec<Vec<EdgeId>>,
    vertex_region: Vec<Region>,
    edge_region: Vec<Region>,
    patches: Vec<EmbeddedPatch>,
    t_regions: Vec<EmbeddedRep>,
    u_vertices: Vec<VertexId>,
    vertex_local: Vec<usize>,
    edge_local: Vec<usize>,
    census: Census,
}

pub fn subdivide(outer: &SquareComplex, length: usize) -> Result<SubdividedCode> {
    SubdividedCode::new(outer.clone(), length)
}

impl SubdividedCode {
    pub fn new(outer: SquareComplex, length: usize) -> Result<Self> {
        if length < 3 || length.is_multiple_of(2) {
            return Err(invalid(format!("subdivision length must be odd and at least 3, got {length}")));
        }
        let l = length;
        let outer_css = outer.css()?;
        let sq = &outer.squares;

        let mut points: BTreeMap<PointKey, PointClass> = BTreeMap::new();
        for s in 0..sq.len() {
            for i in 0..=l {
                for j in 0..=l {
                    points.insert(frame_key(sq, s, l, i, j), class_of(i, j));
                }
            }
        }
        let mut ids: HashMap<PointKey, usize> = HashMap::with_capacity(points.len());
        let (mut nq, mut nz, mut nx) = (0, 0, 0);
        let mut vertex_region = Vec::new();
        let mut edge_region = Vec::new();
        let mut x_region = Vec::new();
        for (&key, &class) in &points {
            let counter = match class {
                PointClass::Qubit => {
                    edge_region.push(key.region(sq));
                    &mut nq
                }
                PointClass::ZCheck => {
                    vertex_region.push(key.region(sq));
                    &mut nz
                }
                PointClass::XCheck => {
                    x_region.push(key.region(sq));
                    &mut nx
                }
            };
            ids.insert(key, *counter);
            *counter += 1;
        }

        let mut edge_vertices = vec![Vec::new(); nq];
        let mut x_support = vec![Vec::new(); nx];
        for s in 0..sq.len() {
            for i in 0..=l {
                for j in 0..=l {
                    if class_of(i, j) != PointClass::Qubit {
                        continue;
                    }
                    let q = ids[&frame_key(sq, s, l, i, j)];
                    let along_i = [(i.wrapping_sub(1), j), (i + 1, j)];
                    let along_j = [(i, j.wrapping_sub(1)), (i, j + 1)];
                    let (zn, xn) = if i % 2 == 1 { (along_j, along_i) } else { (along_i, along_j) };
                    for (a, b) in zn {
                        if a <= l && b <= l {
                            edge_vertices[q].push(ids[&frame_key(sq, s, l, a, b)]);
                        }
                    }
                    for (a, b) in xn {
                        if a <= l && b <= l {
                            x_support[ids[&frame_key(sq, s, l, a, b)]].push(q);
                        }
                    }
                }
            }
        }
        for v in edge_vertices.iter_mut().chain(x_support.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        let graph = TannerHypergraph::new(vec![VertexKind::Interior; nz], edge_vertices)?;
        let css = CssCode::from_graph(&graph, &x_support)?;

        let lookup = |key: PointKey| {
            ids.get(&key).copied().ok_or_else(|| LocqError::InvalidCode(format!("missing point {key:?}")))
        };

        let mut patches = Vec::with_capacity(outer.num_x);
        for x in 0..outer.num_x {
            let local: Vec<usize> = (0..sq.len()).filter(|&s| sq[s].x == x).collect();
            let mut arms_a: Vec<usize> = local.iter().map(|&s| sq[s].q1).collect();
            let mut arms_b: Vec<usize> = local.iter().map(|&s| sq[s].q2).collect();
            arms_a.sort_unstable();
            arms_a.dedup();
            arms_b.sort_unstable();
            arms_b.dedup();
            if arms_a.iter().any(|q| arms_b.binary_search(q).is_ok()) || local.len() != arms_a.len() * arms_b.len() {
                return Err(LocqError::InvalidCode(format!("outer X check {x} lacks a local product structure")));
            }
            if arms_a.len() < 2 || arms_b.len() < 2 {
                return Err(LocqError::InvalidCode(format!("outer X check {x} has a factor of degree below 2")));
            }
            let pair: HashMap<(usize, usize), usize> = local.iter().map(|&s| ((sq[s].q1, sq[s].q2), s)).collect();
            if pair.len() != local.len() {
                return Err(LocqError::InvalidCode(format!("outer X check {x} repeats a qubit pair")));
            }
            let patch = GenSurfacePatch::new(GenRepCode::new(arms_a.len(), l)?, GenRepCode::new(arms_b.len(), l)?)?;
            let point = |ca: RepCoord, cb: RepCoord| -> Result<usize> {
                let s = pair[&(arms_a[ca.arm.unwrap_or(0)], arms_b[cb.arm.unwrap_or(0)])];
                lookup(frame_key(sq, s, l, ca.pos, cb.pos))
            };
            let pg = patch.graph();
            let vertex_map = (0..pg.num_vertices())
                .map(|v| {
                    let (ca, cb) = patch.vertex_coords(v);
                    point(ca, cb)
                })
                .collect::<Result<Vec<_>>>()?;
            let edge_map = (0..pg.num_edges())
                .map(|e| {
                    let (ca, cb) = patch.edge_coords(e);
                    point(ca, cb)
                })
                .collect::<Result<Vec<_>>>()?;
            let face_map = (0..patch.complex().x_checks().len())
                .map(|f| {
                    let (ca, cb) = patch.face_coords(f);
                    point(ca, cb)
                })
                .collect::<Result<Vec<_>>>()?;
            for e in 0..pg.num_edges() {
                let mut mapped: Vec<usize> = pg.edge(e).iter().map(|&v| vertex_map[v]).collect();
                mapped.sort_unstable();
                if mapped != graph.edge(edge_map[e]) {
                    return Err(LocqError::InvalidCode(format!("patch {x} edge {e} does not match the lattice")));
                }
            }
            for (f, support) in patch.complex().x_checks().iter().enumerate() {
                let mut mapped: Vec<usize> = support.iter().map(|&e| edge_map[e]).collect();
                mapped.sort_unstable();
                let global: Vec<usize> =
                    x_support[face_map[f]].iter().copied().filter(|&e| edge_region[e] == Region::S(x)).collect();
                if mapped != global {
                    return Err(LocqError::InvalidCode(format!("patch {x} face {f} does not match the lattice")));
                }
            }
            patches.push(EmbeddedPatch { patch, vertex_map, edge_map, face_map, arms_a, arms_b });
        }

        let mut t_regions = Vec::with_capacity(outer.num_q);
        for q in 0..outer.num_q {
            let mut zs: Vec<usize> = sq.iter().filter(|s| s.q1 == q || s.q2 == q).map(|s| s.z).collect();
            zs.sort_unstable();
            zs.dedup();
            if zs.len() < 2 {
                return Err(LocqError::InvalidCode(format!("outer qubit {q} meets fewer than two Z checks")));
            }
            let code = GenRepCode::new(zs.len(), l)?;
            let rg = code.graph();
            let vertex_map = (0..rg.num_vertices())
                .map(|v| {
                    let c = code.vertex_coord(v);
                    let z = zs[c.arm.unwrap()];
                    lookup(if c.pos == l { PointKey::OuterZ(z) } else { PointKey::Qz(q, z, c.pos) })
                })
                .collect::<Result<Vec<_>>>()?;
            let edge_map = (0..rg.num_edges())
                .map(|e| {
                    let c = code.edge_coord(e);
                    lookup(match c.arm {
                        None => PointKey::OuterQ(q),
                        Some(a) => PointKey::Qz(q, zs[a], c.pos),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            for e in 0..rg.num_edges() {
                let mut mapped: Vec<usize> = rg.edge(e).iter().map(|&v| vertex_map[v]).collect();
                mapped.sort_unstable();
                if mapped != graph.edge(edge_map[e]) {
                    return Err(LocqError::InvalidCode(format!("T region {q} edge {e} does not match the lattice")));
                }
            }
            t_regions.push(EmbeddedRep { code, vertex_map, edge_map, z_checks: zs });
        }

        let u_vertices = (0..outer.num_z).map(|z| lookup(PointKey::OuterZ(z))).collect::<Result<Vec<_>>>()?;

        let mut xq: Vec<(usize, usize)> = sq.iter().flat_map(|s| [(s.x, s.q1), (s.x, s.q2)]).collect();
        xq.sort_unstable();
        xq.dedup();
        let mut qz: Vec<(usize, usize)> = sq.iter().flat_map(|s| [(s.q1, s.z), (s.q2, s.z)]).collect();
        qz.sort_unstable();
        qz.dedup();
        let census = Census {
            qubits: nq,
            z_checks: nz,
            x_checks: nx,
            squares: sq.len(),
            xq_incidences: xq.len(),
            qz_incidences: qz.len(),
        };

        let mut vertex_local = vec![0; nz];
        let mut edge_local = vec![0; nq];
        for p in &patches {
            for (v, &gv) in p.vertex_map.iter().enumerate() {
                if p.patch.graph().is_interior(v) {
                    vertex_local[gv] = v;
                }
            }
            for (e, &ge) in p.edge_map.iter().enumerate() {
                edge_local[ge] = e;
            }
        }
        for t in &t_regions {
            for (v, &gv) in t.vertex_map.iter().enumerate() {
                if t.code.graph().is_interior(v) {
                    vertex_local[gv] = v;
                }
            }
            for (e, &ge) in t.edge_map.iter().enumerate() {
                edge_local[ge] = e;
            }
        }

        Ok(SubdividedCode {
            outer,
            outer_css,
            length,
            graph,
            css,
            x_checks: x_support,
            vertex_region,
            edge_region,
            patches,
            t_regions,
            u_vertices,
            vertex_local,
            edge_local,
            census,
        })
    }

    pub fn outer(&self) -> &SquareComplex {
        &self.outer
    }

    pub fn outer_css(&self) -> &CssCode {
        &self.outer_css
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn census(&self) -> Census {
        self.census
    }

    pub fn x_checks(&self) -> &[Vec<EdgeId>] {
        &self.x_checks
    }

    pub fn vertex_region(&self, v: VertexId) -> Region {
        self.vertex_region[v]
    }

    pub fn edge_region(&self, e: EdgeId) -> Region {
        self.edge_region[e]
    }

    pub fn vertex_regions(&self) -> &[Region] {
        &self.vertex_region
    }

    pub fn edge_regions(&self) -> &[Region] {
        &self.edge_region
    }

    pub fn patches(&self) -> &[EmbeddedPatch] {
        &self.patches
    }

    pub fn patch(&self, x: usize) -> &EmbeddedPatch {
        &self.patches[x]
    }

    pub fn t_regions(&self) -> &[EmbeddedRep] {
        &self.t_regions
    }

    pub fn t_region(&self, q: usize) -> &EmbeddedRep {
        &self.t_regions[q]
    }

    pub fn u_vertex(&self, z: usize) -> VertexId {
        self.u_vertices[z]
    }

    pub fn u_vertices(&self) -> &[VertexId] {
        &self.u_vertices
    }

    /// Id of a global `S` or `T` vertex inside its patch or repetition code.
    pub fn vertex_local(&self, v: VertexId) -> usize {
        self.vertex_local[v]
    }

    /// Id of a global edge inside its patch or repetition code.
    pub fn edge_local(&self, e: EdgeId) -> usize {
        self.edge_local[e]
    }

    /// Parity sum of every edge of each listed outer qubit's `T` region.
    pub fn lift_outer_correction(&self, outer_qubits: &[usize]) -> PauliXError {
        PauliXError::from_parity(outer_qubits.iter().flat_map(|&q| self.t_regions[q].edge_map.iter().copied()))
    }
}

/// See [`SubdividedCode::lift_outer_correction`].
pub fn lift_outer_correction(code: &SubdividedCode, outer_qubits: &[usize]) -> PauliXError {
    code.lift_outer_correction(outer_qubits)
}

impl StabilizerCode for SubdividedCode {
    fn graph(&self) -> &TannerHypergraph {
        &self.graph
    }

    fn css(&self) -> &CssCode {
        &self.css
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toric_outer_parameters() {
        let c = SquareComplex::toric(3, 3).unwrap();
        let css = c.css().unwrap();
        assert_eq!(css.num_qubits(), 18);
        assert_eq!(css.num_logicals(), 2);
        assert_eq!(c.squares.len(), 36);
        for row in c.z_supports().iter().chain(&c.x_supports()) {
            assert_eq!(row.len(), 4);
        }
    }

    #[test]
    fn lattice_parities_of_one_square() {
        let l = 5;
        let mut counts = [0usize; 3];
        for i in 0..=l {
            for j in 0..=l {
                counts[match class_of(i, j) {
                    PointClass::XCheck => 0,
                    PointClass::ZCheck => 1,
                    PointClass::Qubit => 2,
                }] += 1;
            }
        }
        assert_eq!(counts, [9, 9, 18]);
    }

    #[test]
    fn rejects_even_length() {
        let outer = SquareComplex::toric(3, 3).unwrap();
        assert!(subdivide(&outer, 2).is_err());
        assert!(subdivide(&outer, 4).is_err());
    }

    #[test]
    fn regions_map_onto_outer_elements() {
        let outer = SquareComplex::toric(3, 3).unwrap();
        let code = subdivide(&outer, 3).unwrap();
        for z in 0..outer.num_z {
            assert_eq!(code.vertex_region(code.u_vertex(z)), Region::U(z));
        }
        for (q, t) in code.t_regions().iter().enumerate() {
            assert!(t.edge_map.iter().all(|&e| code.edge_region(e) == Region::T(q)));
        }
        for (x, p) in code.patches().iter().enumerate() {
            assert!(p.edge_map.iter().all(|&e| code.edge_region(e) == Region::S(x)));
        }
        let covered: usize = code.patches().iter().map(|p| p.edge_map.len()).sum::<usize>()
            + code.t_regions().iter().map(|t| t.edge_map.len()).sum::<usize>();
        assert_eq!(covered, code.graph().num_edges());
    }

    #[test]
    fn lift_has_outer_syndrome_image() {
        let outer = SquareComplex::toric(3, 3).unwrap();
        let code = subdivide(&outer, 5).unwrap();
        let lift = code.lift_outer_correction(&[4]);
        assert_eq!(lift.len(), 5);
        let syn = code.graph().syndrome_of(&lift);
        let expected: Vec<usize> = code.t_region(4).z_checks.iter().map(|&z| code.u_vertex(z)).collect();
        let mut expected = expected;
        expected.sort_unstable();
        assert_eq!(syn.as_slice(), expected.as_slice());
    }
}
