//! CSS codes over a Tanner hypergraph: `Hz` from the interior vertices,
//! `Hx` from explicit face supports.

use crate::error::{LocqError, Result};
use crate::gf2::{BitVec, Gf2Matrix, RowEchelon};
use crate::hypergraph::{PauliXError, TannerHypergraph, VertexId};

#[derive(Clone, Debug)]
pub struct CssCode {
    hx: Gf2Matrix,
    hz: Gf2Matrix,
    z_vertices: Vec<VertexId>,
    stabilizers: RowEchelon,
    rank_hz: usize,
}

impl CssCode {
    /// Builds the pair and rejects it unless `Hx · Hzᵀ = 0`.
    pub fn new(hx: Gf2Matrix, hz: Gf2Matrix) -> Result<Self> {
        let n = hx.num_cols();
        if hz.num_cols() != n {
            return Err(LocqError::InvalidCode(format!("Hx has {n} columns, Hz has {}", hz.num_cols())));
        }
        if !hx.mul(&hz.transpose()).is_zero() {
            return Err(LocqError::InvalidCode("Hx and Hz do not commute".into()));
        }
        let z_vertices = (0..hz.num_rows()).collect();
        let stabilizers = RowEchelon::new(hx.rows().iter().cloned(), n, false);
        let rank_hz = hz.rank();
        Ok(CssCode { hx, hz, z_vertices, stabilizers, rank_hz })
    }

    /// `Hz` rows are the interior vertices of `graph`, in id order.
    pub fn from_graph(graph: &TannerHypergraph, x_checks: &[Vec<usize>]) -> Result<Self> {
        let n = graph.num_edges();
        let z_vertices: Vec<VertexId> = graph.interior_vertices().collect();
        let hz_rows: Vec<Vec<usize>> = z_vertices.iter().map(|&v| graph.incident(v).to_vec()).collect();
        let hz = Gf2Matrix::from_row_supports(n, &hz_rows);
        let hx = Gf2Matrix::from_row_supports(n, x_checks);
        let mut code = CssCode::new(hx, hz)?;
        code.z_vertices = z_vertices;
        Ok(code)
    }

    pub fn hx(&self) -> &Gf2Matrix {
        &self.hx
    }

    pub fn hz(&self) -> &Gf2Matrix {
        &self.hz
    }

    pub fn num_qubits(&self) -> usize {
        self.hx.num_cols()
    }

    /// Graph vertex behind each row of `Hz`.
    pub fn z_vertices(&self) -> &[VertexId] {
        &self.z_vertices
    }

    pub fn rank_hx(&self) -> usize {
        self.stabilizers.rank()
    }

    pub fn rank_hz(&self) -> usize {
        self.rank_hz
    }

    pub fn num_logicals(&self) -> usize {
        self.num_qubits() - self.rank_hx() - self.rank_hz()
    }

    pub fn error_vector(&self, e: &PauliXError) -> BitVec {
        BitVec::from_indices(self.num_qubits(), e.iter())
    }

    pub fn is_x_stabilizer(&self, residual: &PauliXError) -> bool {
        self.stabilizers.contains(&self.error_vector(residual))
    }

    /// True iff the syndrome-free `residual` acts as a nontrivial logical.
    pub fn is_logical_failure(&self, residual: &PauliXError) -> Result<bool> {
        let v = self.error_vector(residual);
        let s = self.hz.mul_vec(&v);
        if !s.is_zero() {
            return Err(LocqError::NonzeroSyndrome(s.count_ones()));
        }
        Ok(!self.stabilizers.contains(&v))
    }

    /// Basis of `ker Hz` modulo the row space of `Hx`.
    pub fn x_logicals(&self) -> Vec<BitVec> {
        quotient_basis(&self.hx, &self.hz)
    }

    /// Basis of `ker Hx` modulo the row space of `Hz`.
    pub fn z_logicals(&self) -> Vec<BitVec> {
        quotient_basis(&self.hz, &self.hx)
    }
}

fn quotient_basis(span: &Gf2Matrix, check: &Gf2Matrix) -> Vec<BitVec> {
    let n = span.num_cols();
    let mut ech = RowEchelon::new(span.rows().iter().cloned(), n, false);
    check.kernel().into_iter().filter(|v| ech.insert(v.clone())).collect()
}

/// Uniform access to a code's decoding graph and its stabilizer structure.
pub trait StabilizerCode: Sync {
    fn graph(&self) -> &TannerHypergraph;
    fn css(&self) -> &CssCode;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_noncommuting_pair() {
        let hx = Gf2Matrix::from_row_supports(2, &[vec![0]]);
        let hz = Gf2Matrix::from_row_supports(2, &[vec![0, 1]]);
        assert!(CssCode::new(hx, hz).is_err());
    }

    #[test]
    fn repetition_pair_has_one_logical() {
        // Three-qubit bit-flip code: no X checks, two Z checks.
        let hx = Gf2Matrix::zeros(0, 3);
        let hz = Gf2Matrix::from_row_supports(3, &[vec![0, 1], vec![1, 2]]);
        let c = CssCode::new(hx, hz).unwrap();
        assert_eq!(c.num_logicals(), 1);
        assert!(c.is_logical_failure(&PauliXError::from_union([0, 1, 2])).unwrap());
        assert!(!c.is_logical_failure(&PauliXError::new()).unwrap());
        assert!(c.is_logical_failure(&PauliXError::from_union([0])).is_err());
        assert_eq!(c.x_logicals().len(), 1);
        assert_eq!(c.z_logicals().len(), 1);
    }
}
