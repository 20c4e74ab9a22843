//! Runtime scaling sweeps and a deliberately quadratic control decoder.

use std::collections::VecDeque;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::NoiseModel;
use crate::codes::rep::GenRepCode;
use crate::codes::subdivided::{SquareComplex, SubdividedCode};
use crate::codes::surface::{GenSurfacePatch, PlanarCode};
use crate::codes::StabilizerCode;
use crate::error::{invalid, Result};
use crate::gen_union_find::decode_gen_uf_fast;
use crate::hypergraph::{PauliXError, Syndrome, TannerHypergraph};
use crate::subdivided::{decode_subdivided, BruteForceOuter, PatchMode};
use crate::uf_surface::decode_uf_fast;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingFamily {
    /// `(Δ=3, Δ=3)` patch of length `size`.
    GenUf,
    /// Toric 3×3 outer code subdivided with `L = size`.
    Subdivided,
    /// Planar code of distance `size`.
    Uf,
    /// Planar code of distance `size` under [`decode_quadratic_control`].
    Quadratic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub size: usize,
    pub n: usize,
    pub wall_ns: u64,
    pub ops: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub family: ScalingFamily,
    pub rows: Vec<ScalingRow>,
    /// Log-log slope of operations against `n`; absent below two sizes.
    pub ops_slope: Option<f64>,
    pub wall_slope: Option<f64>,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &(x, y) in points {
        sx += x.ln();
        sy += y.ln();
    }
    let (mx, my) = (sx / k, sy / k);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x.ln() - mx;
        sxy += dx * (y.ln() - my);
        sxx += dx * dx;
    }
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Pairs each defect with the nearest remaining defect or open vertex by a
/// full breadth-first search of the graph, so the work is `Θ(n)` per defect.
pub fn decode_quadratic_control(graph: &TannerHypergraph, syndrome: &Syndrome) -> Result<(PauliXError, u64)> {
    if graph.max_arity() > 2 {
        return Err(invalid("control decoder needs a graph of arity at most 2"));
    }
    let nv = graph.num_vertices();
    let mut pending = vec![false; nv];
    for v in syndrome.iter() {
        pending[v] = true;
    }
    let mut flips = vec![false; graph.num_edges()];
    let mut ops = 0u64;
    let mut parent = vec![usize::MAX; nv];
    let mut dist = vec![usize::MAX; nv];
    for start in syndrome.iter() {
        if !pending[start] {
            continue;
        }
        pending[start] = false;
        dist.fill(usize::MAX);
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        let mut best: Option<usize> = None;
        while let Some(v) = queue.pop_front() {
            ops += 1;
            if v != start && best.is_none() && (pending[v] || !graph.is_interior(v)) {
                best = Some(v);
            }
            for &e in graph.incident(v) {
                for &w in graph.edge(e) {
                    ops += 1;
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = e;
                        queue.push_back(w);
                    }
                }
            }
        }
        let Some(mut v) = best else {
            return Err(invalid("defect has no partner"));
        };
        pending[v] = false;
        while v != start {
            let e = parent[v];
            flips[e] ^= true;
            v = graph.edge(e).iter().copied().find(|&w| w != v).unwrap_or(v);
        }
    }
    Ok((PauliXError::from_union((0..flips.len()).filter(|&e| flips[e])), ops))
}

trait Workload {
    fn graph(&self) -> &TannerHypergraph;
    fn decode(&self, syndrome: &Syndrome) -> Result<u64>;
}

struct GenUfLoad(GenSurfacePatch);
struct SubdividedLoad(SubdividedCode, BruteForceOuter);
struct UfLoad(PlanarCode);
struct QuadraticLoad(PlanarCode);

impl Workload for GenUfLoad {
    fn graph(&self) -> &TannerHypergraph {
        self.0.graph()
    }
    fn decode(&self, s: &Syndrome) -> Result<u64> {
        Ok(decode_gen_uf_fast(&self.0, &Default::default(), s)?.stats.ops)
    }
}

impl Workload for SubdividedLoad {
    fn graph(&self) -> &TannerHypergraph {
        self.0.graph()
    }
    fn decode(&self, s: &Syndrome) -> Result<u64> {
        Ok(decode_subdivided(&self.0, s, None, &self.1, PatchMode::Serial)?.stats.ops)
    }
}

impl Workload for UfLoad {
    fn graph(&self) -> &TannerHypergraph {
        self.0.graph()
    }
    fn decode(&self, s: &Syndrome) -> Result<u64> {
        Ok(decode_uf_fast(self.0.graph(), &Default::default(), s)?.stats.ops)
    }
}

impl Workload for QuadraticLoad {
    fn graph(&self) -> &TannerHypergraph {
        self.0.graph()
    }
    fn decode(&self, s: &Syndrome) -> Result<u64> {
        Ok(decode_quadratic_control(self.0.graph(), s)?.1)
    }
}

impl ScalingFamily {
    fn build(self, size: usize) -> Result<Box<dyn Workload>> {
        Ok(match self {
            ScalingFamily::GenUf => {
                Box::new(GenUfLoad(GenSurfacePatch::new(GenRepCode::new(3, size)?, GenRepCode::new(3, size)?)?))
            }
            ScalingFamily::Subdivided => {
                let code = SubdividedCode::new(SquareComplex::toric(3, 3)?, size)?;
                let outer = BruteForceOuter::new(code.outer_css())?;
                Box::new(SubdividedLoad(code, outer))
            }
            ScalingFamily::Uf => Box::new(UfLoad(PlanarCode::new(size)?)),
            ScalingFamily::Quadratic => Box::new(QuadraticLoad(PlanarCode::new(size)?)),
        })
    }

    /// Number of qubits at `size`, without decoding anything.
    pub fn num_qubits(self, size: usize) -> Result<usize> {
        Ok(self.build(size)?.graph().num_edges())
    }
}

/// Decodes `trials` samples of `noise` per size and fits log-log slopes of
/// operations and wall time against the qubit count.
pub fn bench_scaling(family: ScalingFamily, sizes: &[usize], noise: &NoiseModel, trials: u64) -> Result<ScalingReport> {
    if sizes.is_empty() {
        return Err(invalid("size list is empty"));
    }
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let load = family.build(size)?;
        let n = load.graph().num_edges();
        let samples: Vec<Syndrome> = (0..trials).map(|t| load.graph().syndrome_of(&noise.sample(n, t).0)).collect();
        let start = Instant::now();
        let mut ops = 0;
        for s in &samples {
            ops += load.decode(s)?;
        }
        let wall_ns = start.elapsed().as_nanos() as u64;
        rows.push(ScalingRow { size, n, wall_ns, ops });
    }
    let ops_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.ops.max(1) as f64)).collect();
    let wall_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.wall_ns.max(1) as f64)).collect();
    Ok(ScalingReport { family, ops_slope: fit_slope(&ops_pts), wall_slope: fit_slope(&wall_pts), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_power_law() {
        let pts: Vec<(f64, f64)> = [10.0f64, 20.0, 40.0].iter().map(|&x| (x, 3.0 * x * x)).collect();
        assert!((fit_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fit_slope(&pts[..1]), None);
    }

    #[test]
    fn empty_sizes_rejected() {
        let noise = NoiseModel::new(0.01, 0.0, 0).unwrap();
        assert!(bench_scaling(ScalingFamily::Uf, &[], &noise, 1).is_err());
    }

    #[test]
    fn single_size_has_no_slope() {
        let noise = NoiseModel::new(0.01, 0.0, 0).unwrap();
        let r = bench_scaling(ScalingFamily::Uf, &[5], &noise, 2).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.ops_slope, None);
    }

    #[test]
    fn control_reproduces_syndrome() {
        let code = PlanarCode::new(5).unwrap();
        let noise = NoiseModel::new(0.1, 0.0, 4).unwrap();
        for t in 0..50 {
            let e = noise.sample(code.graph().num_edges(), t).0;
            let s = code.graph().syndrome_of(&e);
            let (c, _) = decode_quadratic_control(code.graph(), &s).unwrap();
            assert_eq!(code.graph().syndrome_of(&c), s);
        }
    }
}
