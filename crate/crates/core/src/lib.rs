//! Decoders for subdivided quantum codes and their building blocks.

pub mod codes;
pub mod error;
pub mod gen_erasure;
pub mod gen_union_find;
pub mod gf2;
pub mod hypergraph;
pub mod io;
pub mod par;
pub mod peeling;
pub mod rep_mwpm;
pub mod sim;
pub mod subdivided;
pub mod uf_surface;

pub use error::{LocqError, Result};
