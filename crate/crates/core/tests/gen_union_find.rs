mod common;

use common::{erasure_error_cases, patch};
use locq::codes::StabilizerCode;
use locq::gen_union_find::{crosses_patch, decode_gen_uf_fast, decode_gen_uf_naive};

#[test]
fn exhaustive_small_patches_never_cross() {
    for da in 2..=4 {
        for db in 2..=4 {
            let p = patch(da, db, 3);
            let g = p.graph();
            let mut n = 0;
            for (eps, err) in erasure_error_cases(g.num_edges(), 3) {
                let sigma = g.syndrome_of(&err);
                let fast = decode_gen_uf_fast(&p, &eps, &sigma).unwrap();
                let naive = decode_gen_uf_naive(&p, &eps, &sigma).unwrap();
                assert_eq!(fast.correction, naive.correction);
                assert_eq!(g.syndrome_of(&fast.correction), sigma);
                let residual = err.sym_diff(&fast.correction);
                assert!(
                    !crosses_patch(&p, &residual),
                    "({da},{db}) eps={eps:?} err={err:?} corr={:?}",
                    fast.correction
                );
                n += 1;
            }
            assert!(n > 0);
        }
    }
}

use locq::hypergraph::{Erasure, PauliXError};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random `(ε, E)` with `t + 2s < bound`: erased qubits carry random flips.
fn random_case(rng: &mut ChaCha8Rng, n: usize, bound: usize) -> (Erasure, PauliXError) {
    let s = rng.random_range(0..bound.div_ceil(2));
    let t = rng.random_range(0..bound - 2 * s);
    let picked = sample(rng, n, t + s).into_vec();
    let eps = Erasure::from_union(picked[..t].iter().copied());
    let err = PauliXError::from_union(
        picked[..t]
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.5))
            .collect::<Vec<_>>()
            .into_iter()
            .chain(picked[t..].iter().copied()),
    );
    (eps, err)
}

#[test]
fn randomized_length_five_never_crosses() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (da, db) in [(2, 2), (3, 3), (2, 4), (4, 4)] {
        let p = patch(da, db, 5);
        let g = p.graph();
        for _ in 0..20_000 {
            let (eps, err) = random_case(&mut rng, g.num_edges(), 5);
            let sigma = g.syndrome_of(&err);
            let out = decode_gen_uf_fast(&p, &eps, &sigma).unwrap();
            assert_eq!(g.syndrome_of(&out.correction), sigma);
            assert!(out.grown.is_subset(&Erasure::from_union(0..g.num_edges())));
            assert!(out.correction.as_erasure().is_subset(&out.grown));
            let residual = err.sym_diff(&out.correction);
            assert!(!crosses_patch(&p, &residual), "({da},{db}) eps={eps:?} err={err:?}");
        }
    }
}

#[test]
fn straight_line_across_a_factor_is_detected() {
    let p = patch(3, 3, 5);
    let a = p.factor_a();
    let b = p.factor_b();
    // Arm 0 and arm 1 of factor A through the central hyperedge, at a fixed
    // interior vertex of B.
    let vb = b.arm_vertex(0, 1);
    let cells: Vec<usize> = (0..g_edges(&p))
        .filter(|&e| {
            let (ca, cb) = p.edge_coords(e);
            cb == b.vertex_coord(vb) && ca.arm.is_none_or(|arm| arm < 2)
        })
        .collect();
    assert_eq!(cells.len(), 2 * a.arm_len() + 1);
    let line = PauliXError::from_union(cells);
    assert!(crosses_patch(&p, &line));
    let half = PauliXError::from_union(line.iter().take(a.arm_len()));
    assert!(!crosses_patch(&p, &half));
}

fn g_edges(p: &locq::codes::GenSurfacePatch) -> usize {
    p.graph().num_edges()
}
