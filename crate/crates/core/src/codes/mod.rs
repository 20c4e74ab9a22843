pub mod css;
pub mod rep;
pub mod subdivided;
pub mod surface;

pub use css::{CssCode, StabilizerCode};
pub use rep::{build_gen_rep, Chain1d, GenRepCode, RepCoord};
pub use subdivided::{
    class_of, lift_outer_correction, subdivide, Census, OuterSquare, PointClass, Region, SquareComplex, SubdividedCode,
};
pub use surface::{build_gen_surface, Factor, GenSurfacePatch, PatchRegion, PlanarCode, Side};
