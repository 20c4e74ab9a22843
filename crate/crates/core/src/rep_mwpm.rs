//! Minimum-weight decoding of generalized repetition codes in linear time.
//!
//! Every syndrome has exactly two consistent error configurations, which
//! are complements of each other. The first is found by fixing the central
//! hyperedge to "no error" and propagating outward: the error flips across a
//! vertex exactly when that vertex is a defect.

use crate::codes::rep::GenRepCode;
use crate::hypergraph::{PauliXError, Syndrome};

pub fn decode_rep(code: &GenRepCode, syndrome: &Syndrome) -> PauliXError {
    let mut ops = 0;
    decode_rep_with_ops(code, syndrome, &mut ops)
}

pub fn decode_rep_with_ops(code: &GenRepCode, syndrome: &Syndrome, ops: &mut u64) -> PauliXError {
    let m = code.arm_len();
    let total = code.distance();
    let mut first = Vec::new();
    for a in 0..code.delta() {
        let mut err = false;
        for k in 1..=m {
            *ops += 1;
            err ^= syndrome.contains(code.arm_vertex(a, k));
            if err {
                first.push(code.arm_edge(a, k));
            }
        }
    }
    // On a tie the first candidate wins, as it excludes the central hyperedge.
    if 2 * first.len() <= total {
        PauliXError::from_union(first)
    } else {
        *ops += total as u64;
        let mut keep = vec![true; total];
        for &e in &first {
            keep[e] = false;
        }
        PauliXError::from_union((0..total).filter(|&e| keep[e]))
    }
}
