//! Union-Find decoding on generalized surface patches.
//!
//! Clusters carry per-square inclusion, defect parity and boundary bits plus
//! one representative hyperedge per included seam. A cluster is considered
//! satisfiable when the per-square seam system has a solution. That test is
//! necessary but not sufficient when a square meets the cluster in several
//! pieces, so once no cluster is growing the grown erasure is decoded
//! exactly and any cluster found unsatisfiable resumes growing.

use serde::Serialize;

use crate::codes::surface::{Factor, GenSurfacePatch, PatchRegion, Side};
use crate::codes::StabilizerCode;
use crate::error::{invalid, LocqError, Result};
use crate::gen_erasure::decode_gen_erasure_clusters;
use crate::hypergraph::{EdgeId, Erasure, PauliXError, Syndrome, TannerHypergraph, VertexId};
use crate::uf_surface::GROWN;

pub const MAX_SQUARES: usize = 64;
pub const MAX_SEAMS: usize = 16;
const NO_SEAM: u32 = u32::MAX;
const NIL: u32 = u32::MAX;

/// Cluster summary stored at a cluster-tree root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenClusterData {
    pub squares: u64,
    pub parity: u64,
    pub boundary: u64,
    seams: [u32; MAX_SEAMS],
}

impl Default for GenClusterData {
    fn default() -> Self {
        GenClusterData { squares: 0, parity: 0, boundary: 0, seams: [NO_SEAM; MAX_SEAMS] }
    }
}

impl GenClusterData {
    pub fn vertex(square: usize, defect: bool) -> Self {
        let bit = 1u64 << square;
        GenClusterData { squares: bit, parity: if defect { bit } else { 0 }, ..Default::default() }
    }

    /// Inclusion and boundary bits OR, parities XOR, seams keep the lower id.
    pub fn merge(&self, other: &GenClusterData) -> GenClusterData {
        let mut seams = self.seams;
        for (s, o) in seams.iter_mut().zip(&other.seams) {
            *s = (*s).min(*o);
        }
        GenClusterData {
            squares: self.squares | other.squares,
            parity: self.parity ^ other.parity,
            boundary: self.boundary | other.boundary,
            seams,
        }
    }

    pub fn mark_boundary(&mut self, square: usize) {
        self.boundary |= 1 << square;
    }

    pub fn include_seam(&mut self, seam: usize, edge: EdgeId) {
        self.seams[seam] = self.seams[seam].min(edge as u32);
    }

    pub fn seam(&self, seam: usize) -> Option<EdgeId> {
        (self.seams[seam] != NO_SEAM).then_some(self.seams[seam] as usize)
    }

    fn seam_mask(&self) -> u16 {
        self.seams.iter().enumerate().filter(|(_, &s)| s != NO_SEAM).fold(0, |m, (f, _)| m | (1 << f))
    }
}

fn square_seam_table(patch: &GenSurfacePatch) -> Vec<u16> {
    let mut table = vec![0u16; patch.num_squares()];
    for f in 0..patch.num_seams() {
        for &s in patch.seam_squares(f) {
            table[s] |= 1 << f;
        }
    }
    table
}

fn satisfiable_with(data: &GenClusterData, square_seams: &[u16]) -> bool {
    let mut odd = data.parity & !data.boundary;
    if odd == 0 {
        return true;
    }
    let included = data.seam_mask();
    let mut basis = [(0u16, false); MAX_SEAMS];
    let mut rows = data.squares & !data.boundary;
    while rows != 0 {
        let s = rows.trailing_zeros() as usize;
        rows &= rows - 1;
        let mut row = square_seams[s] & included;
        let mut rhs = odd & (1 << s) != 0;
        odd &= !(1 << s);
        while row != 0 {
            let b = row.trailing_zeros() as usize;
            if basis[b].0 == 0 {
                basis[b] = (row, rhs);
                break;
            }
            row ^= basis[b].0;
            rhs ^= basis[b].1;
        }
        if row == 0 && rhs {
            return false;
        }
    }
    true
}

/// Whether the per-square seam system of `data` has a solution.
pub fn is_satisfiable(data: &GenClusterData, patch: &GenSurfacePatch) -> bool {
    satisfiable_with(data, &square_seam_table(patch))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GenUfStats {
    pub rounds: usize,
    /// Sum over rounds of the number of growing clusters.
    pub growth_steps: usize,
    /// Exact-validation passes that sent clusters back to growing.
    pub regrowths: usize,
    pub ops: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenUfOutcome {
    pub correction: PauliXError,
    pub grown: Erasure,
    pub stats: GenUfStats,
}

fn check_patch(patch: &GenSurfacePatch, erasure: &Erasure, syndrome: &Syndrome) -> Result<()> {
    if patch.num_squares() > MAX_SQUARES || patch.num_seams() > MAX_SEAMS {
        return Err(invalid(format!(
            "patch has {} squares and {} seams; limits are {MAX_SQUARES} and {MAX_SEAMS}",
            patch.num_squares(),
            patch.num_seams()
        )));
    }
    patch.graph().check_syndrome(syndrome)?;
    patch.graph().check_error(&erasure.as_error())
}

/// Reusable almost-linear decoder bound to one patch.
pub struct GenUfDecoder<'p> {
    patch: &'p GenSurfacePatch,
    square_seams: Vec<u16>,
    parent: Vec<u32>,
    size: Vec<u32>,
    data: Vec<GenClusterData>,
    support: Vec<u8>,
    stamp: Vec<u64>,
    list_head: Vec<u32>,
    list_tail: Vec<u32>,
    list_next: Vec<u32>,
    ops: u64,
}

impl<'p> GenUfDecoder<'p> {
    pub fn new(patch: &'p GenSurfacePatch) -> Self {
        let (nv, ne) = (patch.graph().num_vertices(), patch.graph().num_edges());
        GenUfDecoder {
            patch,
            square_seams: square_seam_table(patch),
            parent: vec![0; nv],
            size: vec![1; nv],
            data: vec![GenClusterData::default(); nv],
            support: vec![0; ne],
            stamp: vec![0; ne],
            list_head: vec![NIL; nv],
            list_tail: vec![NIL; nv],
            list_next: vec![NIL; nv],
            ops: 0,
        }
    }

    fn reset(&mut self, syndrome: &Syndrome) {
        let g = self.patch.graph();
        for v in 0..g.num_vertices() {
            self.parent[v] = v as u32;
            self.list_head[v] = v as u32;
            self.list_tail[v] = v as u32;
            self.data[v] = GenClusterData::vertex(self.patch.vertex_square(v), false);
        }
        for v in syndrome.iter() {
            self.data[v] = GenClusterData::vertex(self.patch.vertex_square(v), true);
        }
        self.size.fill(1);
        self.support.fill(0);
        self.stamp.fill(0);
        self.list_next.fill(NIL);
        self.ops = 0;
    }

    fn find(&mut self, v: usize) -> usize {
        let mut v = v as u32;
        while self.parent[v as usize] != v {
            let g = self.parent[self.parent[v as usize] as usize];
            self.parent[v as usize] = g;
            v = g;
            self.ops += 1;
        }
        v as usize
    }

    fn bigger(&self, a: usize, b: usize) -> bool {
        self.size[a] > self.size[b] || (self.size[a] == self.size[b] && a < b)
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

    /// Unions every root touched by `e` into the biggest one.
    fn fuse(&mut self, g: &TannerHypergraph, e: EdgeId) {
        let mut all: Vec<usize> = Vec::with_capacity(g.edge(e).len());
        for v in g.interior_of(e) {
            let r = self.find(v);
            if !all.contains(&r) {
                all.push(r);
            }
        }
        let Some(&first) = all.first() else { return };
        let big = all.iter().copied().fold(first, |b, r| if self.bigger(r, b) { r } else { b });
        for &r in &all {
            if r == big {
                continue;
            }
            self.ops += 1;
            self.parent[r] = big as u32;
            self.size[big] += self.size[r];
            self.data[big] = self.data[big].merge(&self.data[r]);
            self.append_list(big, r);
        }
        match self.patch.edge_region(e) {
            PatchRegion::Seam(f) => self.data[big].include_seam(f, e),
            PatchRegion::Square(s) => {
                if g.is_boundary_edge(e) {
                    self.data[big].mark_boundary(s);
                }
            }
        }
    }

    fn prune(&mut self, g: &TannerHypergraph, root: usize) {
        let mut v = self.list_head[root];
        let (mut head, mut tail) = (NIL, NIL);
        while v != NIL {
            let next = self.list_next[v as usize];
            self.ops += 1;
            if g.incident(v as usize).iter().any(|&e| self.support[e] < GROWN) {
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

    fn satisfiable(&self, root: usize) -> bool {
        satisfiable_with(&self.data[root], &self.square_seams)
    }

    pub fn decode(&mut self, erasure: &Erasure, syndrome: &Syndrome) -> Result<GenUfOutcome> {
        check_patch(self.patch, erasure, syndrome)?;
        let g = self.patch.graph();
        self.reset(syndrome);
        for e in erasure.iter() {
            self.support[e] = GROWN;
        }
        for e in erasure.iter() {
            self.fuse(g, e);
        }
        let mut roots: Vec<usize> = syndrome.iter().map(|v| self.find(v)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.retain(|&r| !self.satisfiable(r));

        let mut stats = GenUfStats::default();
        let mut fusion = Vec::new();
        loop {
            while !roots.is_empty() {
                stats.rounds += 1;
                stats.growth_steps += roots.len();
                let round = stats.rounds as u64;
                fusion.clear();
                for &u in &roots {
                    let key = (round << 32) | u as u64;
                    let mut v = self.list_head[u];
                    while v != NIL {
                        for &e in g.incident(v as usize) {
                            self.ops += 1;
                            if self.support[e] < GROWN && self.stamp[e] != key {
                                self.stamp[e] = key;
                                self.support[e] += 1;
                                if self.support[e] == GROWN {
                                    fusion.push(e);
                                }
                            }
                        }
                        v = self.list_next[v as usize];
                    }
                }
                for &e in &fusion {
                    self.fuse(g, e);
                }
                for i in 0..roots.len() {
                    roots[i] = self.find(roots[i]);
                }
                roots.sort_unstable();
                roots.dedup();
                for &r in &roots {
                    self.prune(g, r);
                }
                roots.retain(|&r| !self.satisfiable(r));
                if let Some(&r) = roots.iter().find(|&&r| self.list_head[r] == NIL) {
                    return Err(LocqError::Unsatisfiable(format!("cluster at {r} cannot grow further")));
                }
            }

            let grown = Erasure::from_union((0..g.num_edges()).filter(|&e| self.support[e] >= GROWN));
            let exact = decode_gen_erasure_clusters(self.patch, &grown, syndrome)?;
            self.ops += exact.ops;
            if exact.failed.is_empty() {
                stats.ops = self.ops;
                return Ok(GenUfOutcome { correction: exact.correction, grown, stats });
            }
            stats.regrowths += 1;
            roots = exact.failed.iter().map(|&v| self.find(v)).collect();
            roots.sort_unstable();
            roots.dedup();
            for &r in &roots {
                self.prune(g, r);
                if self.list_head[r] == NIL {
                    return Err(LocqError::Unsatisfiable(format!("cluster at {r} cannot grow further")));
                }
            }
        }
    }
}

/// Almost-linear generalized Union-Find decoder.
pub fn decode_gen_uf_fast(patch: &GenSurfacePatch, erasure: &Erasure, syndrome: &Syndrome) -> Result<GenUfOutcome> {
    GenUfDecoder::new(patch).decode(erasure, syndrome)
}

struct NaiveCluster {
    vertices: Vec<VertexId>,
    data: GenClusterData,
}

fn naive_clusters(patch: &GenSurfacePatch, support: &[u8], defect: &[bool]) -> Vec<NaiveCluster> {
    let g = patch.graph();
    let mut seen = vec![false; g.num_vertices()];
    let mut out = Vec::new();
    for s in g.interior_vertices() {
        if seen[s] || (!defect[s] && !g.incident(s).iter().any(|&e| support[e] >= GROWN)) {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut c = NaiveCluster { vertices: Vec::new(), data: GenClusterData::default() };
        while let Some(v) = stack.pop() {
            c.vertices.push(v);
            c.data = c.data.merge(&GenClusterData::vertex(patch.vertex_square(v), defect[v]));
            for &e in g.incident(v) {
                if support[e] < GROWN {
                    continue;
                }
                match patch.edge_region(e) {
                    PatchRegion::Seam(f) => c.data.include_seam(f, e),
                    PatchRegion::Square(sq) if g.is_boundary_edge(e) => c.data.mark_boundary(sq),
                    PatchRegion::Square(_) => {}
                }
                for w in g.interior_of(e) {
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

/// Reference decoder that rebuilds every cluster each round.
pub fn decode_gen_uf_naive(patch: &GenSurfacePatch, erasure: &Erasure, syndrome: &Syndrome) -> Result<GenUfOutcome> {
    check_patch(patch, erasure, syndrome)?;
    let g = patch.graph();
    let table = square_seam_table(patch);
    let mut support = vec![0u8; g.num_edges()];
    for e in erasure.iter() {
        support[e] = GROWN;
    }
    let defect = syndrome.to_mask(g.num_vertices());
    let mut forced = vec![false; g.num_vertices()];
    let mut stats = GenUfStats::default();
    loop {
        let clusters = naive_clusters(patch, &support, &defect);
        let growing: Vec<&NaiveCluster> = clusters
            .iter()
            .filter(|c| !satisfiable_with(&c.data, &table) || c.vertices.iter().any(|&v| forced[v]))
            .collect();
        forced.fill(false);
        if growing.is_empty() {
            let grown = Erasure::from_union((0..g.num_edges()).filter(|&e| support[e] >= GROWN));
            let exact = decode_gen_erasure_clusters(patch, &grown, syndrome)?;
            stats.ops += exact.ops;
            if exact.failed.is_empty() {
                return Ok(GenUfOutcome { correction: exact.correction, grown, stats });
            }
            stats.regrowths += 1;
            for &v in &exact.failed {
                forced[v] = true;
            }
            continue;
        }
        stats.rounds += 1;
        stats.growth_steps += growing.len();
        let mut add = vec![0u8; g.num_edges()];
        let mut progressed = false;
        for c in &growing {
            let mut edges: Vec<EdgeId> = c
                .vertices
                .iter()
                .flat_map(|&v| g.incident(v).iter().copied())
                .filter(|&e| support[e] < GROWN)
                .collect();
            stats.ops += edges.len() as u64;
            edges.sort_unstable();
            edges.dedup();
            progressed |= !edges.is_empty();
            for e in edges {
                add[e] += 1;
            }
        }
        if !progressed {
            return Err(LocqError::Unsatisfiable("cluster cannot grow further".into()));
        }
        for (s, a) in support.iter_mut().zip(&add) {
            *s = (*s + a).min(GROWN);
        }
    }
}

/// Whether a connected piece of `residual` (linked through interior
/// vertices) touches two different open sides of the same factor.
pub fn crosses_patch(patch: &GenSurfacePatch, residual: &PauliXError) -> bool {
    !crossing_components(patch, residual).is_empty()
}

/// Pairs of same-factor sides joined by a connected piece of `residual`.
pub fn crossing_components(patch: &GenSurfacePatch, residual: &PauliXError) -> Vec<(Side, Side)> {
    let g = patch.graph();
    let in_res = residual.to_mask(g.num_edges());
    let mut edge_seen = vec![false; g.num_edges()];
    let mut out = Vec::new();
    for e0 in residual.iter() {
        if edge_seen[e0] {
            continue;
        }
        edge_seen[e0] = true;
        let mut sides: Vec<Side> = Vec::new();
        let mut stack = vec![e0];
        while let Some(e) = stack.pop() {
            for &v in g.edge(e) {
                if let Some(side) = patch.vertex_side(v) {
                    if !sides.contains(&side) {
                        sides.push(side);
                    }
                    continue;
                }
                for &f in g.incident(v) {
                    if in_res[f] && !edge_seen[f] {
                        edge_seen[f] = true;
                        stack.push(f);
                    }
                }
            }
        }
        sides.sort_unstable();
        for factor in [Factor::A, Factor::B] {
            let same: Vec<Side> = sides.iter().copied().filter(|s| s.factor == factor).collect();
            if same.len() >= 2 {
                out.push((same[0], same[1]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::GenRepCode;
    use proptest::prelude::*;

    fn patch(da: usize, db: usize, l: usize) -> GenSurfacePatch {
        GenSurfacePatch::new(GenRepCode::new(da, l).unwrap(), GenRepCode::new(db, l).unwrap()).unwrap()
    }

    #[test]
    fn even_parity_is_satisfiable() {
        let p = patch(3, 3, 3);
        let d = GenClusterData::vertex(0, false).merge(&GenClusterData::vertex(4, false));
        assert!(is_satisfiable(&d, &p));
    }

    #[test]
    fn boundary_absorbs_odd_square() {
        let p = patch(3, 3, 3);
        let mut d = GenClusterData::vertex(2, true);
        d.mark_boundary(2);
        assert!(is_satisfiable(&d, &p));
    }

    #[test]
    fn odd_square_without_seams_is_unsatisfiable() {
        let p = patch(3, 3, 3);
        assert!(!is_satisfiable(&GenClusterData::vertex(2, true), &p));
    }

    #[test]
    fn seam_fixes_two_odd_squares() {
        let p = patch(3, 3, 3);
        let f = 0;
        let sq = p.seam_squares(f);
        let mut d = GenClusterData::vertex(sq[0], true).merge(&GenClusterData::vertex(sq[1], true));
        assert!(!is_satisfiable(&d, &p));
        d.include_seam(f, p.seam_edges(f)[0]);
        assert!(is_satisfiable(&d, &p));
    }

    #[test]
    fn empty_input() {
        let p = patch(3, 3, 3);
        let out = decode_gen_uf_fast(&p, &Erasure::new(), &Syndrome::new()).unwrap();
        assert!(out.correction.is_empty());
        assert_eq!(out.stats.rounds, 0);
    }

    fn data_strategy() -> impl Strategy<Value = GenClusterData> {
        (
            any::<u64>(),
            any::<u64>(),
            any::<u64>(),
            proptest::collection::vec(proptest::option::of(0u32..1000), MAX_SEAMS),
        )
            .prop_map(|(a, b, c, s)| {
                let mut d = GenClusterData { squares: a, parity: b & a, boundary: c & a, ..Default::default() };
                for (f, rep) in s.into_iter().enumerate() {
                    if let Some(e) = rep {
                        d.include_seam(f, e as usize);
                    }
                }
                d
            })
    }

    proptest! {
        #[test]
        fn merge_is_associative_and_commutative(a in data_strategy(), b in data_strategy(), c in data_strategy()) {
            prop_assert_eq!(a.merge(&b), b.merge(&a));
            prop_assert_eq!(a.merge(&b).merge(&c), a.merge(&b.merge(&c)));
        }
    }
}
