//! Adapters that put every decoder behind one trial interface.

use crate::codes::css::CssCode;
use crate::codes::rep::GenRepCode;
use crate::codes::subdivided::SubdividedCode;
use crate::codes::surface::GenSurfacePatch;
use crate::codes::StabilizerCode;
use crate::error::{LocqError, Result};
use crate::gen_union_find::{crosses_patch, decode_gen_uf_fast};
use crate::gf2::{BitVec, RowEchelon};
use crate::hypergraph::{Erasure, PauliXError, Syndrome, TannerHypergraph};
use crate::peeling::decode_erasure_with_ops;
use crate::rep_mwpm::decode_rep_with_ops;
use crate::subdivided::{
    classify_failure, decode_subdivided, has_u_path, FailureCause, OuterDecoder, PatchMode, SubdividedOutcome,
};
use crate::uf_surface::decode_uf_fast;

#[derive(Clone, Debug)]
pub struct Decoded {
    pub correction: PauliXError,
    pub ops: u64,
    pub stages: Option<SubdividedOutcome>,
}

impl Decoded {
    fn plain(correction: PauliXError, ops: u64) -> Self {
        Decoded { correction, ops, stages: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Diagnosis {
    pub cause: FailureCause,
    pub u_path: bool,
}

pub trait TrialDecoder: Sync {
    fn id(&self) -> &'static str;
    fn graph(&self) -> &TannerHypergraph;
    fn decode(&self, erasure: &Erasure, syndrome: &Syndrome) -> Result<Decoded>;
    /// Whether a zero-syndrome residual counts as a decoding failure.
    fn is_failure(&self, residual: &PauliXError) -> Result<bool>;

    fn diagnose(&self, _residual: &PauliXError, _decoded: &Decoded) -> Option<Diagnosis> {
        None
    }

    /// Whether an `Unsatisfiable` decode is an expected outcome (counted as a
    /// failure) rather than a bug.
    fn may_decline(&self) -> bool {
        false
    }
}

/// Peeling within the erasure only. Flips outside the erasure make the
/// decoder decline.
pub struct PeelTrial<'a> {
    pub code: &'a dyn StabilizerCode,
}

impl TrialDecoder for PeelTrial<'_> {
    fn id(&self) -> &'static str {
        "peel"
    }

    fn graph(&self) -> &TannerHypergraph {
        self.code.graph()
    }

    fn decode(&self, erasure: &Erasure, syndrome: &Syndrome) -> Result<Decoded> {
        let mut ops = 0;
        let c = decode_erasure_with_ops(self.graph(), erasure, syndrome, true, &mut ops)?;
        Ok(Decoded::plain(c, ops))
    }

    fn is_failure(&self, residual: &PauliXError) -> Result<bool> {
        self.code.css().is_logical_failure(residual)
    }

    fn may_decline(&self) -> bool {
        true
    }
}

pub struct UfTrial<'a> {
    pub code: &'a dyn StabilizerCode,
}

impl TrialDecoder for UfTrial<'_> {
    fn id(&self) -> &'static str {
        "uf"
    }

    fn graph(&self) -> &TannerHypergraph {
        self.code.graph()
    }

    fn decode(&self, erasure: &Erasure, syndrome: &Syndrome) -> Result<Decoded> {
        let out = decode_uf_fast(self.graph(), erasure, syndrome)?;
        Ok(Decoded::plain(out.correction, out.stats.ops))
    }

    fn is_failure(&self, residual: &PauliXError) -> Result<bool> {
        self.code.css().is_logical_failure(residual)
    }
}

/// Generalized Union-Find on a standalone patch; failure means a
/// patch-crossing residual.
pub struct GenUfTrial<'a> {
    pub patch: &'a GenSurfacePatch,
}

impl TrialDecoder for GenUfTrial<'_> {
    fn id(&self) -> &'static str {
        "gen-uf"
    }

    fn graph(&self) -> &TannerHypergraph {
        self.patch.graph()
    }

    fn decode(&self, erasure: &Erasure, syndrome: &Syndrome) -> Result<Decoded> {
        let out = decode_gen_uf_fast(self.patch, erasure, syndrome)?;
        Ok(Decoded::plain(out.correction, out.stats.ops))
    }

    fn is_failure(&self, residual: &PauliXError) -> Result<bool> {
        Ok(crosses_patch(self.patch, residual))
    }
}

/// Matching on a generalized repetition code; any nonempty residual is the
/// logical.
pub struct RepMwpmTrial<'a> {
    pub code: &'a GenRepCode,
}

impl TrialDecoder for RepMwpmTrial<'_> {
    fn id(&self) -> &'static str {
        "rep-mwpm"
    }

    fn graph(&self) -> &TannerHypergraph {
        self.code.graph()
    }

    fn decode(&self, _erasure: &Erasure, syndrome: &Syndrome) -> Result<Decoded> {
        let mut ops = 0;
        let c = decode_rep_with_ops(self.code, syndrome, &mut ops);
        Ok(Decoded::plain(c, ops))
    }

    fn is_failure(&self, residual: &PauliXError) -> Result<bool> {
        Ok(!residual.is_empty())
    }
}

pub struct SubdividedTrial<'a> {
    pub code: &'a SubdividedCode,
    pub outer: &'a dyn OuterDecoder,
    pub mode: PatchMode,
}

impl TrialDecoder for SubdividedTrial<'_> {
    fn id(&self) -> &'static str {
        "subdivided"
    }

    fn graph(&self) -> &TannerHypergraph {
        self.code.graph()
    }

    fn decode(&self, erasure: &Erasure, syndrome: &Syndrome) -> Result<Decoded> {
        let erasure = (!erasure.is_empty()).then_some(erasure);
        let out = decode_subdivided(self.code, syndrome, erasure, self.outer, self.mode)?;
        Ok(Decoded { correction: out.correction.clone(), ops: out.stats.ops, stages: Some(out) })
    }

    fn is_failure(&self, residual: &PauliXError) -> Result<bool> {
        self.code.css().is_logical_failure(residual)
    }

    fn diagnose(&self, residual: &PauliXError, decoded: &Decoded) -> Option<Diagnosis> {
        let stages = decoded.stages.as_ref()?;
        Some(Diagnosis {
            cause: classify_failure(self.code, residual, stages, self.outer.guaranteed_weight()),
            u_path: has_u_path(self.code, residual),
        })
    }
}

/// Any syndrome-consistent correction from a linear solve, ignoring weight.
pub struct TrivialTrial<'a> {
    code: &'a dyn StabilizerCode,
    row_of: Vec<Option<usize>>,
    solver: RowEchelon,
}

impl<'a> TrivialTrial<'a> {
    pub fn new(code: &'a dyn StabilizerCode) -> Self {
        let css: &CssCode = code.css();
        let mut row_of = vec![None; code.graph().num_vertices()];
        for (r, &v) in css.z_vertices().iter().enumerate() {
            row_of[v] = Some(r);
        }
        let columns = css.hz().transpose();
        let solver = RowEchelon::new(columns.rows().iter().cloned(), css.hz().num_rows(), true);
        TrivialTrial { code, row_of, solver }
    }
}

impl TrialDecoder for TrivialTrial<'_> {
    fn id(&self) -> &'static str {
        "trivial"
    }

    fn graph(&self) -> &TannerHypergraph {
        self.code.graph()
    }

    fn decode(&self, _erasure: &Erasure, syndrome: &Syndrome) -> Result<Decoded> {
        let rows = self.code.css().hz().num_rows();
        let s = BitVec::from_indices(rows, syndrome.iter().filter_map(|v| self.row_of[v]));
        let x =
            self.solver.express(&s).ok_or_else(|| LocqError::Internal("syndrome outside the image of Hz".into()))?;
        Ok(Decoded::plain(PauliXError::from_union(x.ones()), rows as u64))
    }

    fn is_failure(&self, residual: &PauliXError) -> Result<bool> {
        self.code.css().is_logical_failure(residual)
    }
}
