#![allow(dead_code)]

use locq::codes::{GenRepCode, GenSurfacePatch};
use locq::hypergraph::{Erasure, PauliXError};

pub fn patch(da: usize, db: usize, l: usize) -> GenSurfacePatch {
    GenSurfacePatch::new(GenRepCode::new(da, l).unwrap(), GenRepCode::new(db, l).unwrap()).unwrap()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Every `(erasure, error)` with `t` erased qubits carrying an arbitrary
/// error plus `s` unerased flipped qubits, for all `t + 2s < bound`.
pub fn erasure_error_cases(n: usize, bound: usize) -> Vec<(Erasure, PauliXError)> {
    let mut out = Vec::new();
    for s in 0..bound.div_ceil(2) {
        for t in 0..bound - 2 * s {
            for eps in subsets(n, t) {
                let rest: Vec<usize> = (0..n).filter(|q| !eps.contains(q)).collect();
                for flips in subsets(rest.len(), s) {
                    let outside: Vec<usize> = flips.iter().map(|&i| rest[i]).collect();
                    for mask in 0u32..(1 << t) {
                        let inside = (0..t).filter(|&i| mask >> i & 1 == 1).map(|i| eps[i]);
                        let err = PauliXError::from_union(inside.chain(outside.iter().copied()));
                        out.push((Erasure::from_union(eps.iter().copied()), err));
                    }
                }
            }
        }
    }
    out
}

pub mod oracle {
    use std::collections::HashMap;

    use locq::codes::StabilizerCode;
    use locq::hypergraph::{Erasure, Syndrome};
    use locq::peeling::decode_erasure;
    use num_bigint::{BigInt, BigUint};
    use num_traits::{One, Signed, ToPrimitive, Zero};

    /// Outcome of comparing peeling against exhaustive coset counting.
    #[derive(Debug, Default)]
    pub struct MlReport {
        pub instances: u64,
        pub not_in_erasure: u64,
        pub wrong_syndrome: u64,
        pub not_most_likely: u64,
    }

    /// For every erasure `ε` of `code` and every syndrome of an error inside
    /// it, counts the errors inside `ε` per logical class and checks that the
    /// peeling output lies in a class of maximal count. Needs `n ≤ 20` and at
    /// most 64 vertices.
    pub fn ml_erasure_report(code: &dyn StabilizerCode) -> MlReport {
        let g = code.graph();
        let n = g.num_edges();
        assert!(n <= 20 && g.num_vertices() <= 64);
        let syn: Vec<u64> = (0..n).map(|e| g.interior_of(e).fold(0u64, |m, v| m ^ (1 << v))).collect();
        let zl = code.css().z_logicals();
        assert!(zl.len() <= 8);
        let class: Vec<u32> =
            (0..n).map(|e| zl.iter().enumerate().fold(0u32, |c, (i, z)| c | ((z.get(e) as u32) << i))).collect();
        let classes = 1usize << zl.len();
        let mut report = MlReport::default();
        let mut counts: HashMap<u64, Vec<u32>> = HashMap::new();
        for mask in 0u32..(1 << n) {
            counts.clear();
            let mut sub = mask;
            loop {
                let (mut s, mut c) = (0u64, 0u32);
                for e in 0..n {
                    if sub >> e & 1 == 1 {
                        s ^= syn[e];
                        c ^= class[e];
                    }
                }
                counts.entry(s).or_insert_with(|| vec![0; classes])[c as usize] += 1;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
            let eps = Erasure::from_union((0..n).filter(|&e| mask >> e & 1 == 1));
            for (&s, per_class) in &counts {
                report.instances += 1;
                let sigma = Syndrome::from_union((0..64).filter(|&v| s >> v & 1 == 1));
                let p = decode_erasure(g, &eps, &sigma, true).expect("consistent erasure");
                if !p.is_subset(&eps.as_error()) {
                    report.not_in_erasure += 1;
                }
                if g.syndrome_of(&p) != sigma {
                    report.wrong_syndrome += 1;
                }
                let c = p.iter().fold(0u32, |c, e| c ^ class[e]);
                let best = per_class.iter().copied().max().unwrap();
                if per_class[c as usize] != best {
                    report.not_most_likely += 1;
                }
            }
        }
        report
    }

    /// Fixed-point reals with `BITS` fractional bits.
    const BITS: u64 = 1024;

    fn one() -> BigInt {
        BigInt::one() << BITS
    }

    /// Exact fixed-point image of a finite non-negative double.
    fn from_f64(x: f64) -> BigInt {
        assert!(x >= 0.0 && x.is_finite());
        if x == 0.0 {
            return BigInt::zero();
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let shift = e + BITS as i64;
        assert!(shift >= 0);
        BigInt::from(mant) << shift as u64
    }

    fn mul(a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> BITS
    }

    fn div(a: &BigInt, b: &BigInt) -> BigInt {
        (a << BITS) / b
    }

    fn to_f64(x: &BigInt) -> f64 {
        let bits = x.bits();
        if bits <= 64 {
            return x.to_f64().unwrap() * 2f64.powi(-(BITS as i32));
        }
        let shift = bits - 64;
        let top = (x >> shift).to_f64().unwrap();
        top * 2f64.powi(shift as i32 - BITS as i32)
    }

    /// `exp(x)` for `x ≤ 0` by halving into `[-1/2, 0]`, Taylor, squaring.
    fn exp_neg(x: &BigInt) -> BigInt {
        assert!(!x.is_positive());
        let half = one() >> 1;
        let mut k = 0u32;
        let mut y = x.clone();
        while y.abs() > half {
            y >>= 1;
            k += 1;
        }
        let mut sum = one();
        let mut term = one();
        for i in 1..400u32 {
            term = mul(&term, &y) / BigInt::from(i);
            if term.is_zero() {
                break;
            }
            sum += &term;
        }
        for _ in 0..k {
            sum = mul(&sum, &sum);
        }
        sum
    }

    pub fn hoeffding(n: usize, r: usize, p: f64) -> f64 {
        let t = div(&(BigInt::from(r + 1) << BITS), &(BigInt::from(n) << BITS));
        let d = t - from_f64(p);
        let expo = -(mul(&d, &d) * BigInt::from(2 * n));
        to_f64(&exp_neg(&expo))
    }

    pub fn mwpm_path(length: usize, delta: usize, a: usize, eps: f64) -> f64 {
        let m = (length - 1) * delta / 2 + 1;
        let scaled = from_f64(eps).to_biguint().unwrap() << (3 * BITS);
        let root = BigInt::from(BigUint::nth_root(&scaled, 4));
        let b = root * BigInt::from(2 * a);
        let mut num = one();
        for _ in 0..m {
            num = mul(&num, &b);
        }
        to_f64(&div(&num, &(one() - b)))
    }

    pub fn rel_err(got: f64, want: f64) -> f64 {
        if want == 0.0 {
            got.abs()
        } else {
            ((got - want) / want).abs()
        }
    }
}

/// Rank over GF(2) of rows given as qubit supports, by plain elimination on
/// bool vectors with the rows visited in `order`.
pub fn rank_oracle(cols: usize, rows: &[Vec<usize>], order: &[usize]) -> usize {
    let mut m: Vec<Vec<bool>> = order
        .iter()
        .map(|&r| {
            let mut v = vec![false; cols];
            for &c in &rows[r] {
                v[c] ^= true;
            }
            v
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c]) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    rank
}
