//! Three-stage decoding of subdivided codes.
//!
//! 1. Generalized Union-Find on every patch pushes all defects out of the
//!    `S` regions onto `T` regions and `U` vertices.
//! 2. Matching on every `T` region pushes its defects onto `U` vertices.
//! 3. The outer decoder reads the `U` syndrome; each outer qubit it flips is
//!    lifted to every edge of its `T` region.

use std::collections::HashMap;

use serde::Serialize;

use crate::codes::css::CssCode;
use crate::codes::subdivided::{Region, SubdividedCode};
use crate::codes::StabilizerCode;
use crate::error::{invalid, LocqError, Result};
use crate::gen_union_find::{crossing_components, GenUfDecoder};
use crate::gf2::{BitVec, RowEchelon};
use crate::hypergraph::{EdgeId, Erasure, PauliXError, Syndrome, TannerHypergraph};
use crate::par::map_indexed;
use crate::rep_mwpm::decode_rep_with_ops;

/// Decoder for the outer code's `X` errors from its `Z` syndrome.
pub trait OuterDecoder: Sync {
    /// An outer qubit correction reproducing `syndrome`, if one exists.
    fn decode(&self, syndrome: &BitVec) -> Option<BitVec>;

    /// Every error of at most this weight is corrected.
    fn guaranteed_weight(&self) -> usize;
}

/// Table lookup for low weights, linear solve beyond.
#[derive(Clone, Debug)]
pub struct BruteForceOuter {
    num_qubits: usize,
    distance: usize,
    table: HashMap<BitVec, Vec<usize>>,
    solver: RowEchelon,
}

/// Largest weight searched when computing the outer distance.
pub const MAX_DISTANCE_SEARCH: usize = 8;

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            let go = rec(i + 1, n, k, cur, f);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), f);
    }
}

/// Minimum weight of an `X` logical, searched up to `cap`.
pub fn x_distance(css: &CssCode, cap: usize) -> Option<usize> {
    let n = css.num_qubits();
    let columns = css.hz().transpose();
    for w in 1..=cap.min(n) {
        let mut found = false;
        for_each_subset(n, w, &mut |qs| {
            let mut s = BitVec::zeros(css.hz().num_rows());
            for &q in qs {
                s.xor_assign(columns.row(q));
            }
            if s.is_zero() && css.is_logical_failure(&PauliXError::from_union(qs.iter().copied())).unwrap_or(false) {
                found = true;
                return false;
            }
            true
        });
        if found {
            return Some(w);
        }
    }
    None
}

impl BruteForceOuter {
    pub fn new(css: &CssCode) -> Result<Self> {
        let distance = x_distance(css, MAX_DISTANCE_SEARCH)
            .ok_or_else(|| invalid(format!("outer distance exceeds the search cap {MAX_DISTANCE_SEARCH}")))?;
        let n = css.num_qubits();
        let columns = css.hz().transpose();
        let r = (distance - 1) / 2;
        let mut table = HashMap::new();
        for w in 0..=r + 1 {
            for_each_subset(n, w, &mut |qs| {
                let mut s = BitVec::zeros(css.hz().num_rows());
                for &q in qs {
                    s.xor_assign(columns.row(q));
                }
                table.entry(s).or_insert_with(|| qs.to_vec());
                true
            });
        }
        let solver = RowEchelon::new(columns.rows().iter().cloned(), css.hz().num_rows(), true);
        Ok(BruteForceOuter { num_qubits: n, distance, table, solver })
    }

    pub fn distance(&self) -> usize {
        self.distance
    }
}

impl OuterDecoder for BruteForceOuter {
    fn decode(&self, syndrome: &BitVec) -> Option<BitVec> {
        match self.table.get(syndrome) {
            Some(qs) => Some(BitVec::from_indices(self.num_qubits, qs.iter().copied())),
            None => self.solver.express(syndrome),
        }
    }

    fn guaranteed_weight(&self) -> usize {
        (self.distance - 1) / 2
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PatchMode {
    #[default]
    Serial,
    ParallelPatches,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubdividedStats {
    pub patches_decoded: usize,
    pub patch_rounds: usize,
    pub patch_regrowths: usize,
    /// Heaviest matching correction on a single `T` region.
    pub max_t_weight: usize,
    pub outer_weight: usize,
    pub ops: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdividedOutcome {
    pub correction: PauliXError,
    pub patch_correction: PauliXError,
    pub t_correction: PauliXError,
    pub outer_correction: Vec<usize>,
    pub stats: SubdividedStats,
}

fn bucket(code: &SubdividedCode, syndrome: &Syndrome) -> (Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<usize>) {
    let mut s = vec![Vec::new(); code.patches().len()];
    let mut t = vec![Vec::new(); code.t_regions().len()];
    let mut u = Vec::new();
    for v in syndrome.iter() {
        match code.vertex_region(v) {
            Region::S(x) => s[x].push(code.vertex_local(v)),
            Region::T(q) => t[q].push(code.vertex_local(v)),
            Region::U(z) => u.push(z),
        }
    }
    (s, t, u)
}

fn apply(graph: &TannerHypergraph, syndrome: &Syndrome, correction: &PauliXError) -> Syndrome {
    syndrome.sym_diff(&graph.syndrome_of(correction))
}

struct PatchStage {
    correction: PauliXError,
    rounds: usize,
    regrowths: usize,
    decoded: usize,
    ops: u64,
}

fn patch_stage(
    code: &SubdividedCode,
    syndrome: &Syndrome,
    erasure: Option<&Erasure>,
    mode: PatchMode,
) -> Result<PatchStage> {
    let (s_local, _, _) = bucket(code, syndrome);
    let mut e_local = vec![Vec::new(); code.patches().len()];
    if let Some(eps) = erasure {
        code.graph().check_error(&eps.as_error())?;
        for e in eps.iter() {
            if let Region::S(x) = code.edge_region(e) {
                e_local[x].push(code.edge_local(e));
            }
        }
    }
    let results = map_indexed(code.patches().len(), mode == PatchMode::ParallelPatches, |x| {
        if s_local[x].is_empty() && e_local[x].is_empty() {
            return Ok::<_, LocqError>(None);
        }
        let p = code.patch(x);
        let out = GenUfDecoder::new(&p.patch).decode(
            &Erasure::from_union(e_local[x].iter().copied()),
            &Syndrome::from_union(s_local[x].iter().copied()),
        )?;
        Ok(Some(out))
    });
    let mut stage = PatchStage { correction: PauliXError::new(), rounds: 0, regrowths: 0, decoded: 0, ops: 0 };
    let mut edges = Vec::new();
    for (x, r) in results.into_iter().enumerate() {
        let Some(out) = r? else { continue };
        stage.decoded += 1;
        stage.rounds += out.stats.rounds;
        stage.regrowths += out.stats.regrowths;
        stage.ops += out.stats.ops;
        edges.extend(out.correction.iter().map(|e| code.patch(x).edge_map[e]));
    }
    stage.correction = PauliXError::from_union(edges);
    Ok(stage)
}

/// Syndrome left after the patch stage; errors if any defect remains
/// inside an `S` region.
pub fn syndrome_after_patch_stage(
    code: &SubdividedCode,
    syndrome: &Syndrome,
    erasure: Option<&Erasure>,
) -> Result<Syndrome> {
    code.graph().check_syndrome(syndrome)?;
    let stage = patch_stage(code, syndrome, erasure, PatchMode::Serial)?;
    let rest = apply(code.graph(), syndrome, &stage.correction);
    check_confined(code, &rest, |r| !matches!(r, Region::S(_)), "patch")?;
    Ok(rest)
}

fn check_confined(code: &SubdividedCode, s: &Syndrome, ok: impl Fn(Region) -> bool, stage: &str) -> Result<()> {
    match s.iter().find(|&v| !ok(code.vertex_region(v))) {
        Some(v) => {
            Err(LocqError::Internal(format!("defect {v} in {:?} survived the {stage} stage", code.vertex_region(v))))
        }
        None => Ok(()),
    }
}

pub fn decode_subdivided(
    code: &SubdividedCode,
    syndrome: &Syndrome,
    erasure: Option<&Erasure>,
    outer: &dyn OuterDecoder,
    mode: PatchMode,
) -> Result<SubdividedOutcome> {
    let graph = code.graph();
    graph.check_syndrome(syndrome)?;
    let mut stats = SubdividedStats::default();

    let stage1 = patch_stage(code, syndrome, erasure, mode)?;
    stats.patches_decoded = stage1.decoded;
    stats.patch_rounds = stage1.rounds;
    stats.patch_regrowths = stage1.regrowths;
    stats.ops += stage1.ops;
    let s1 = apply(graph, syndrome, &stage1.correction);
    check_confined(code, &s1, |r| !matches!(r, Region::S(_)), "patch")?;

    let (_, t_local, _) = bucket(code, &s1);
    let t_results = map_indexed(code.t_regions().len(), mode == PatchMode::ParallelPatches, |q| {
        if t_local[q].is_empty() {
            return (Vec::new(), 0);
        }
        let t = code.t_region(q);
        let mut ops = 0;
        let local = decode_rep_with_ops(&t.code, &Syndrome::from_union(t_local[q].iter().copied()), &mut ops);
        (local.iter().map(|e| t.edge_map[e]).collect::<Vec<EdgeId>>(), ops)
    });
    let mut t_edges = Vec::new();
    for (edges, ops) in t_results {
        stats.max_t_weight = stats.max_t_weight.max(edges.len());
        stats.ops += ops;
        t_edges.extend(edges);
    }
    let t_correction = PauliXError::from_union(t_edges);
    let s2 = apply(graph, &s1, &t_correction);
    check_confined(code, &s2, |r| matches!(r, Region::U(_)), "matching")?;

    let (_, _, u) = bucket(code, &s2);
    let outer_syndrome = BitVec::from_indices(code.outer().num_z, u);
    let outer_qubits: Vec<usize> = match outer.decode(&outer_syndrome) {
        Some(x) => x.ones().collect(),
        None => return Err(LocqError::Internal("outer syndrome has no consistent correction".into())),
    };
    stats.outer_weight = outer_qubits.len();
    stats.ops += outer_qubits.len() as u64 + code.outer().num_z as u64;
    let lift = code.lift_outer_correction(&outer_qubits);

    let correction = stage1.correction.sym_diff(&t_correction).sym_diff(&lift);
    Ok(SubdividedOutcome {
        correction,
        patch_correction: stage1.correction,
        t_correction,
        outer_correction: outer_qubits,
        stats,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureCause {
    /// A patch residual crosses between two sides of the same factor.
    PatchCrossing,
    /// Matching handed the outer decoder more than it guarantees.
    Matching,
    /// Anything else.
    Outer,
}

/// Number of patches whose share of `residual` crosses the patch.
pub fn patch_crossings(code: &SubdividedCode, residual: &PauliXError) -> usize {
    let mut local = vec![Vec::new(); code.patches().len()];
    for e in residual.iter() {
        if let Region::S(x) = code.edge_region(e) {
            local[x].push(code.edge_local(e));
        }
    }
    local
        .into_iter()
        .enumerate()
        .filter(|(x, edges)| {
            !edges.is_empty()
                && !crossing_components(&code.patch(*x).patch, &PauliXError::from_union(edges.iter().copied()))
                    .is_empty()
        })
        .count()
}

pub fn classify_failure(
    code: &SubdividedCode,
    residual: &PauliXError,
    outcome: &SubdividedOutcome,
    r: usize,
) -> FailureCause {
    if patch_crossings(code, residual) > 0 {
        FailureCause::PatchCrossing
    } else if outcome.stats.outer_weight > r {
        FailureCause::Matching
    } else {
        FailureCause::Outer
    }
}

/// Whether some connected piece of `residual` inside a `T` region joins two
/// of its `U` vertices.
pub fn has_u_path(code: &SubdividedCode, residual: &PauliXError) -> bool {
    let mut local = vec![Vec::new(); code.t_regions().len()];
    for e in residual.iter() {
        if let Region::T(q) = code.edge_region(e) {
            local[q].push(code.edge_local(e));
        }
    }
    local.iter().enumerate().any(|(q, edges)| {
        let g = code.t_region(q).code.graph();
        let mask = {
            let mut m = vec![false; g.num_edges()];
            for &e in edges {
                m[e] = true;
            }
            m
        };
        let mut seen = vec![false; g.num_edges()];
        edges.iter().any(|&e0| {
            if seen[e0] {
                return false;
            }
            seen[e0] = true;
            let mut ends = Vec::new();
            let mut stack = vec![e0];
            while let Some(e) = stack.pop() {
                for &v in g.edge(e) {
                    if !g.is_interior(v) {
                        if !ends.contains(&v) {
                            ends.push(v);
                        }
                        continue;
                    }
                    for &f in g.incident(v) {
                        if mask[f] && !seen[f] {
                            seen[f] = true;
                            stack.push(f);
                        }
                    }
                }
            }
            ends.len() >= 2
        })
    })
}
