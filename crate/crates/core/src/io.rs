//! Versioned JSON files for codes and errors.
//!
//! A code file records the builder parameters together with the full
//! hypergraph, labels and matrices. Loading rebuilds the code from the
//! parameters and rejects the file unless every recorded field matches.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codes::rep::GenRepCode;
use crate::codes::subdivided::{Region, SquareComplex, SubdividedCode};
use crate::codes::surface::{GenSurfacePatch, PatchRegion, PlanarCode};
use crate::codes::{CssCode, StabilizerCode};
use crate::error::{LocqError, Result};
use crate::hypergraph::{EdgeId, EdgeKind, Erasure, PauliXError, TannerHypergraph, VertexKind};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeKind {
    GenRep,
    GenSurface,
    Planar,
    Subdivided,
}

impl CodeKind {
    pub fn name(self) -> &'static str {
        match self {
            CodeKind::GenRep => "gen-rep",
            CodeKind::GenSurface => "gen-surface",
            CodeKind::Planar => "planar",
            CodeKind::Subdivided => "subdivided",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_b: Option<usize>,
    pub length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<SquareComplex>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeCensus {
    pub qubits: usize,
    pub z_checks: usize,
    pub open_vertices: usize,
    pub x_checks: usize,
    pub logicals: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squares: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seams: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regions: Option<RegionCounts>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionCounts {
    pub s: usize,
    pub t: usize,
    pub u: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub kind: VertexKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub vertices: Vec<usize>,
    pub kind: EdgeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
}

/// Outer-element correspondence of a subdivided code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionMaps {
    /// Global edges of the patch of each outer `X` check.
    pub patch_edges: Vec<Vec<EdgeId>>,
    /// Global edges of the `T` region of each outer qubit.
    pub t_edges: Vec<Vec<EdgeId>>,
    /// Global `U` vertex of each outer `Z` check.
    pub u_vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrices {
    pub hx: Vec<Vec<usize>>,
    pub hz: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub format_version: u32,
    pub kind: CodeKind,
    pub params: CodeParams,
    pub census: CodeCensus,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    pub x_checks: Vec<Vec<EdgeId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<RegionMaps>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<Matrices>,
}

#[derive(Clone, Debug)]
pub enum Code {
    GenRep(GenRepCode),
    GenSurface(GenSurfacePatch),
    Planar(PlanarCode),
    Subdivided(SubdividedCode),
}

fn region_label(r: Region) -> String {
    match r {
        Region::S(x) => format!("S{x}"),
        Region::T(q) => format!("T{q}"),
        Region::U(z) => format!("U{z}"),
    }
}

fn patch_label(r: PatchRegion) -> String {
    match r {
        PatchRegion::Square(s) => format!("square{s}"),
        PatchRegion::Seam(f) => format!("seam{f}"),
    }
}

impl Code {
    pub fn build(kind: CodeKind, params: &CodeParams) -> Result<Code> {
        let need_delta =
            || params.delta.ok_or_else(|| LocqError::InvalidParameter(format!("{} needs delta", kind.name())));
        Ok(match kind {
            CodeKind::GenRep => Code::GenRep(GenRepCode::new(need_delta()?, params.length)?),
            CodeKind::GenSurface => {
                let da = need_delta()?;
                let db = params.delta_b.unwrap_or(da);
                Code::GenSurface(GenSurfacePatch::new(
                    GenRepCode::new(da, params.length)?,
                    GenRepCode::new(db, params.length)?,
                )?)
            }
            CodeKind::Planar => Code::Planar(PlanarCode::new(params.length)?),
            CodeKind::Subdivided => {
                let outer = params
                    .outer
                    .clone()
                    .ok_or_else(|| LocqError::InvalidParameter("subdivided needs an outer code".into()))?;
                let outer = SquareComplex::new(outer.num_x, outer.num_q, outer.num_z, outer.squares)?;
                Code::Subdivided(SubdividedCode::new(outer, params.length)?)
            }
        })
    }

    pub fn kind(&self) -> CodeKind {
        match self {
            Code::GenRep(_) => CodeKind::GenRep,
            Code::GenSurface(_) => CodeKind::GenSurface,
            Code::Planar(_) => CodeKind::Planar,
            Code::Subdivided(_) => CodeKind::Subdivided,
        }
    }

    pub fn graph(&self) -> &TannerHypergraph {
        match self {
            Code::GenRep(c) => c.graph(),
            Code::GenSurface(c) => c.graph(),
            Code::Planar(c) => c.graph(),
            Code::Subdivided(c) => c.graph(),
        }
    }

    /// The stabilizer structure, absent for repetition codes.
    pub fn stabilizer(&self) -> Option<&dyn StabilizerCode> {
        match self {
            Code::GenRep(_) => None,
            Code::GenSurface(c) => Some(c),
            Code::Planar(c) => Some(c),
            Code::Subdivided(c) => Some(c),
        }
    }

    pub fn params(&self) -> CodeParams {
        match self {
            Code::GenRep(c) => CodeParams { delta: Some(c.delta()), delta_b: None, length: c.length(), outer: None },
            Code::GenSurface(c) => CodeParams {
                delta: Some(c.factor_a().delta()),
                delta_b: Some(c.factor_b().delta()),
                length: c.length(),
                outer: None,
            },
            Code::Planar(c) => CodeParams { delta: None, delta_b: None, length: c.distance(), outer: None },
            Code::Subdivided(c) => {
                CodeParams { delta: None, delta_b: None, length: c.length(), outer: Some(c.outer().clone()) }
            }
        }
    }

    fn x_checks(&self) -> Vec<Vec<EdgeId>> {
        match self {
            Code::GenRep(_) => Vec::new(),
            Code::GenSurface(c) => c.complex().x_checks().to_vec(),
            Code::Planar(c) => c.complex().x_checks().to_vec(),
            Code::Subdivided(c) => c.x_checks().to_vec(),
        }
    }

    pub fn census(&self) -> CodeCensus {
        let g = self.graph();
        let mut census = CodeCensus {
            qubits: g.num_edges(),
            z_checks: g.num_interior_vertices(),
            open_vertices: g.num_vertices() - g.num_interior_vertices(),
            x_checks: self.x_checks().len(),
            logicals: self.stabilizer().map_or(1, |s| s.css().num_logicals()),
            ..Default::default()
        };
        match self {
            Code::GenSurface(c) => {
                census.squares = Some(c.num_squares());
                census.seams = Some(c.num_seams());
            }
            Code::Subdivided(c) => {
                census.squares = Some(c.outer().squares.len());
                census.regions =
                    Some(RegionCounts { s: c.patches().len(), t: c.t_regions().len(), u: c.u_vertices().len() });
            }
            _ => {}
        }
        census
    }

    pub fn to_file(&self) -> CodeFile {
        let g = self.graph();
        let (vregion, eregion): (Box<dyn Fn(usize) -> Option<String>>, Box<dyn Fn(usize) -> Option<String>>) =
            match self {
                Code::Subdivided(c) => (
                    Box::new(|v| Some(region_label(c.vertex_region(v)))),
                    Box::new(|e| Some(region_label(c.edge_region(e)))),
                ),
                Code::GenSurface(c) => (Box::new(|_| None), Box::new(|e| Some(patch_label(c.edge_region(e))))),
                _ => (Box::new(|_| None), Box::new(|_| None)),
            };
        let vertices =
            (0..g.num_vertices()).map(|v| VertexRecord { kind: g.vertex_kind(v), region: vregion(v) }).collect();
        let edges = (0..g.num_edges())
            .map(|e| EdgeRecord { vertices: g.edge(e).to_vec(), kind: g.edge_kind(e), region: eregion(e) })
            .collect();
        let (maps, outer) = match self {
            Code::Subdivided(c) => {
                let maps = RegionMaps {
                    patch_edges: c.patches().iter().map(|p| p.edge_map.clone()).collect(),
                    t_edges: c.t_regions().iter().map(|t| t.edge_map.clone()).collect(),
                    u_vertices: c.u_vertices().to_vec(),
                };
                (Some(maps), Some(matrices(c.outer_css())))
            }
            _ => (None, None),
        };
        CodeFile {
            format_version: FORMAT_VERSION,
            kind: self.kind(),
            params: self.params(),
            census: self.census(),
            vertices,
            edges,
            x_checks: self.x_checks(),
            maps,
            outer,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.to_file())?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_file(file: &CodeFile) -> Result<Code> {
        if file.format_version != FORMAT_VERSION {
            return Err(LocqError::Mismatch(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                file.format_version
            )));
        }
        let code = Code::build(file.kind, &file.params)?;
        let rebuilt = code.to_file();
        if let Some(what) = first_difference(&rebuilt, file) {
            return Err(LocqError::Mismatch(format!("code file disagrees with its parameters in {what}")));
        }
        Ok(code)
    }

    pub fn from_json(text: &str) -> Result<Code> {
        Code::from_file(&serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Code> {
        Code::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

fn matrices(css: &CssCode) -> Matrices {
    Matrices { hx: css.hx().row_supports(), hz: css.hz().row_supports() }
}

fn first_difference(a: &CodeFile, b: &CodeFile) -> Option<&'static str> {
    [
        ("census", a.census == b.census),
        ("vertices", a.vertices == b.vertices),
        ("edges", a.edges == b.edges),
        ("x_checks", a.x_checks == b.x_checks),
        ("maps", a.maps == b.maps),
        ("outer", a.outer == b.outer),
    ]
    .into_iter()
    .find(|(_, same)| !same)
    .map(|(what, _)| what)
}

/// An `X` error and optional erasure, as qubit (edge) ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorFile {
    pub format_version: u32,
    pub error: Vec<EdgeId>,
    #[serde(default)]
    pub erasure: Vec<EdgeId>,
}

impl ErrorFile {
    pub fn new(error: &PauliXError, erasure: &Erasure) -> Self {
        ErrorFile {
            format_version: FORMAT_VERSION,
            error: error.as_slice().to_vec(),
            erasure: erasure.as_slice().to_vec(),
        }
    }

    pub fn load(path: &Path) -> Result<ErrorFile> {
        let f: ErrorFile = serde_json::from_str(&fs::read_to_string(path)?)?;
        if f.format_version != FORMAT_VERSION {
            return Err(LocqError::Mismatch(format!("unsupported format_version {}", f.format_version)));
        }
        Ok(f)
    }

    /// Error and erasure checked against `graph`.
    pub fn resolve(&self, graph: &TannerHypergraph) -> Result<(PauliXError, Erasure)> {
        let error = PauliXError::from_union(self.error.iter().copied());
        let erasure = Erasure::from_union(self.erasure.iter().copied());
        graph.check_error(&error)?;
        graph.check_error(&erasure.as_error())?;
        Ok((error, erasure))
    }
}
