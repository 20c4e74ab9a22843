use locq::codes::GenRepCode;
use locq::hypergraph::{PauliXError, Syndrome};
use locq::rep_mwpm::{decode_rep, decode_rep_with_ops};

fn errors(n: usize) -> impl Iterator<Item = PauliXError> {
    (0u32..1 << n).map(move |m| PauliXError::from_union((0..n).filter(|&e| m >> e & 1 == 1)))
}

/// Minimum error weight per syndrome, by enumeration.
fn min_weight_table(code: &GenRepCode) -> std::collections::HashMap<Syndrome, usize> {
    let mut best = std::collections::HashMap::new();
    for e in errors(code.distance()) {
        let w = best.entry(code.graph().syndrome_of(&e)).or_insert(usize::MAX);
        *w = (*w).min(e.len());
    }
    best
}

#[test]
fn output_is_minimum_weight_for_every_syndrome() {
    for (delta, l) in [(2, 5), (3, 5), (4, 5), (3, 7), (5, 3)] {
        let code = GenRepCode::new(delta, l).unwrap();
        let table = min_weight_table(&code);
        assert_eq!(table.len(), 1 << code.num_interior_vertices());
        for (sigma, w) in table {
            let out = decode_rep(&code, &sigma);
            assert_eq!(code.graph().syndrome_of(&out), sigma);
            assert_eq!(out.len(), w, "Δ={delta} L={l} σ={sigma:?}");
            assert!(out.len() <= code.distance() / 2);
        }
    }
}

#[test]
fn low_weight_errors_are_corrected_exactly() {
    for (delta, l) in [(3, 5), (4, 5), (3, 9)] {
        let code = GenRepCode::new(delta, l).unwrap();
        let s = (l - 1) * delta / 4;
        for e in errors(code.distance()).filter(|e| e.len() <= s) {
            assert_eq!(decode_rep(&code, &code.graph().syndrome_of(&e)), e);
        }
    }
}

#[test]
fn complement_preserves_syndrome() {
    let code = GenRepCode::new(3, 5).unwrap();
    let all = PauliXError::from_union(0..code.distance());
    for e in errors(code.distance()) {
        assert_eq!(code.graph().syndrome_of(&e.sym_diff(&all)), code.graph().syndrome_of(&e));
    }
}

#[test]
fn operation_count_is_linear() {
    for l in [5, 11, 21, 41, 81] {
        let code = GenRepCode::new(3, l).unwrap();
        let all = Syndrome::from_union(code.graph().interior_vertices());
        let mut ops = 0;
        decode_rep_with_ops(&code, &all, &mut ops);
        assert!(ops <= 2 * code.distance() as u64);
    }
}
