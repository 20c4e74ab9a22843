//! Dense, bit-packed linear algebra over GF(2).
//!
//! Rows are stored as `u64` words. The sizes used here (rank checks on codes
//! with a few thousand qubits, tiny per-cluster systems) keep dense
//! elimination cheap enough.

use std::fmt;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; words_for(len)], len }
    }

    /// Vector with ones exactly at `indices` (duplicates cancel).
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        BitVec::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(wi, &w)| wi * WORD + w.trailing_zeros() as usize)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense `rows × cols` matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix { rows: vec![BitVec::zeros(cols); rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from the column supports of each row.
    pub fn from_row_supports(cols: usize, supports: &[Vec<usize>]) -> Self {
        Gf2Matrix { rows: supports.iter().map(|s| BitVec::from_indices(cols, s.iter().copied())).collect(), cols }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        Gf2Matrix { rows, cols }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// Column indices of the ones in each row.
    pub fn row_supports(&self) -> Vec<Vec<usize>> {
        self.rows.iter().map(|r| r.ones().collect()).collect()
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `M · v` for a column vector `v` of length `cols`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        BitVec::from_indices(self.rows.len(), self.rows.iter().enumerate().filter(|(_, r)| r.dot(v)).map(|(i, _)| i))
    }

    /// `x · M` for a row vector `x` of length `rows`.
    pub fn vec_mul(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.rows.len(), "dimension mismatch");
        let mut out = BitVec::zeros(self.cols);
        for i in x.ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    /// `self · other`.
    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows.len(), "dimension mismatch");
        Gf2Matrix { rows: self.rows.iter().map(|r| other.vec_mul(r)).collect(), cols: other.cols }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    /// Rank over GF(2). The matrix itself is left untouched.
    pub fn rank(&self) -> usize {
        RowEchelon::new(self.rows.iter().cloned(), self.cols, false).rank()
    }

    /// Returns some `x` with `x · M = b`, or `None` when `b` is outside the
    /// row space.
    pub fn solve_left(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.cols, "dimension mismatch");
        RowEchelon::new(self.rows.iter().cloned(), self.cols, true).express(b)
    }

    /// Basis of the right kernel `{v : M · v = 0}`.
    pub fn kernel(&self) -> Vec<BitVec> {
        // Reduced row echelon form, then one basis vector per free column.
        let mut rows: Vec<BitVec> = self.rows.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::zeros(self.cols);
                v.set(free, true);
                for (r, &pc) in pivots.iter().enumerate() {
                    if rows[r].get(free) {
                        v.set(pc, true);
                    }
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Row-echelon basis of a set of vectors, optionally remembering how each
/// basis row was combined from the inputs.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    basis: Vec<BitVec>,
    pivots: Vec<usize>,
    combos: Option<Vec<BitVec>>,
    inputs: usize,
    cols: usize,
}

impl RowEchelon {
    pub fn new(rows: impl IntoIterator<Item = BitVec>, cols: usize, track: bool) -> Self {
        let rows: Vec<BitVec> = rows.into_iter().collect();
        let n = rows.len();
        let mut ech =
            RowEchelon { basis: Vec::new(), pivots: Vec::new(), combos: track.then(Vec::new), inputs: n, cols };
        for (i, mut row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "row length mismatch");
            let mut combo = track.then(|| BitVec::from_indices(n, [i]));
            ech.reduce_tracked(&mut row, combo.as_mut());
            if let Some(p) = row.first_one() {
                ech.basis.push(row);
                ech.pivots.push(p);
                if let (Some(cs), Some(c)) = (ech.combos.as_mut(), combo) {
                    cs.push(c);
                }
            }
        }
        ech
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Adds `v` to an untracked basis; returns whether the rank grew.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        assert!(self.combos.is_none(), "insert on a tracked RowEchelon");
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.reduce(&mut v);
        match v.first_one() {
            Some(p) => {
                self.basis.push(v);
                self.pivots.push(p);
                self.inputs += 1;
                true
            }
            None => false,
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn reduce_tracked(&self, v: &mut BitVec, mut combo: Option<&mut BitVec>) {
        // Basis rows are reduced with respect to all earlier pivots, so one
        // forward pass suffices.
        for (k, (row, &p)) in self.basis.iter().zip(&self.pivots).enumerate() {
            if v.get(p) {
                v.xor_assign(row);
                if let (Some(c), Some(cs)) = (combo.as_deref_mut(), self.combos.as_ref()) {
                    c.xor_assign(&cs[k]);
                }
            }
        }
    }

    /// Reduces `v` against the basis in place; zero afterwards iff `v` was in
    /// the span.
    pub fn reduce(&self, v: &mut BitVec) {
        self.reduce_tracked(v, None)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Coefficients over the original input rows producing `b`, if any.
    /// Requires `track = true` at construction.
    pub fn express(&self, b: &BitVec) -> Option<BitVec> {
        let combos = self.combos.as_ref().expect("RowEchelon built without tracking");
        let mut v = b.clone();
        let mut x = BitVec::zeros(self.inputs);
        for (k, (row, &p)) in self.basis.iter().zip(&self.pivots).enumerate() {
            if v.get(p) {
                v.xor_assign(row);
                x.xor_assign(&combos[k]);
            }
        }
        v.is_zero().then_some(x)
    }
}

/// Rank of `m` over GF(2).
pub fn gf2_rank(m: &Gf2Matrix) -> usize {
    m.rank()
}

/// Some `x` with `x · m = b`, or `None` when the system is inconsistent.
pub fn gf2_solve(m: &Gf2Matrix, b: &BitVec) -> Option<BitVec> {
    m.solve_left(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rng.random_bool(0.5));
            }
        }
        m
    }

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(gf2_rank(&Gf2Matrix::identity(3)), 3);
        assert_eq!(gf2_rank(&Gf2Matrix::zeros(4, 5)), 0);
        assert_eq!(gf2_rank(&Gf2Matrix::zeros(0, 0)), 0);
    }

    #[test]
    fn rank_invariant_under_row_shuffle() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.random_range(1..12);
            let cols = rng.random_range(1..90);
            let m = random_matrix(&mut rng, rows, cols);
            let mut perm: Vec<usize> = (0..rows).collect();
            for i in (1..rows).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let shuffled = Gf2Matrix::from_rows(cols, perm.iter().map(|&i| m.row(i).clone()).collect());
            assert_eq!(m.rank(), shuffled.rank());
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn solve_identity_and_zero() {
        let b = BitVec::from_indices(4, [0, 2, 3]);
        assert_eq!(gf2_solve(&Gf2Matrix::identity(4), &b), Some(b.clone()));
        assert_eq!(gf2_solve(&Gf2Matrix::zeros(3, 4), &b), None);
        assert_eq!(gf2_solve(&Gf2Matrix::zeros(3, 4), &BitVec::zeros(4)), Some(BitVec::zeros(3)));
        assert_eq!(gf2_solve(&Gf2Matrix::zeros(0, 4), &BitVec::zeros(4)), Some(BitVec::zeros(0)));
    }

    #[test]
    fn solve_planted_system() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let m = random_matrix(&mut rng, 6, 4);
            let x0 = BitVec::from_bools(&(0..6).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>());
            let b = m.vec_mul(&x0);
            let x = gf2_solve(&m, &b).expect("consistent by construction");
            assert_eq!(m.vec_mul(&x), b);
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..40 {
            let rows = rng.random_range(1..10);
            let cols = rng.random_range(1..20);
            let m = random_matrix(&mut rng, rows, cols);
            let ker = m.kernel();
            assert_eq!(ker.len() + m.rank(), cols);
            for v in &ker {
                assert!(m.mul_vec(v).is_zero());
            }
            assert_eq!(Gf2Matrix::from_rows(cols, ker).rank(), cols - m.rank());
        }
    }

    #[test]
    fn ones_iterates_ascending_across_words() {
        let v = BitVec::from_indices(200, [199, 0, 64, 63, 130]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(v.count_ones(), 5);
        assert_eq!(v.first_one(), Some(0));
    }
}
